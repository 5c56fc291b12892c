use approx::assert_relative_eq;
use jacobi_fbl::spectral::{rayleigh_branch_delta, rayleigh_capacity, rayleigh_limit_delta};
use jacobi_fbl::spectral::{second_order_resolvent, solve_general_resolvent};
use jacobi_fbl::spectral::{capacity_approx, delta_derivative, delta_residual, solve_delta};
use jacobi_fbl::{make_dims, ChannelDims};
use proptest::prelude::*;

fn dims_strategy() -> impl Strategy<Value = ChannelDims> {
    (1usize..=48, 1usize..=48, 0usize..=80, 1usize..=300)
        .prop_map(|(nr, nt, extra, l)| make_dims(nr, nt, nr + nt + extra, l).unwrap())
}

fn noise_strategy() -> impl Strategy<Value = f64> {
    (-4.0f64..4.0).prop_map(|e| 10f64.powf(e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn delta_is_positive_root(d in dims_strategy(), s in noise_strategy()) {
        let delta = solve_delta(&d, s).unwrap();
        prop_assert!(delta > 0.0 && delta.is_finite());
        prop_assert!(delta_residual(&d, s, delta) < 1e-12);
    }

    #[test]
    fn delta_decreasing_in_noise(d in dims_strategy(), s in noise_strategy()) {
        prop_assert!(solve_delta(&d, 1.01 * s).unwrap() < solve_delta(&d, s).unwrap());
        prop_assert!(delta_derivative(&d, s).unwrap() < 0.0);
    }

    #[test]
    fn capacity_positive_and_decreasing(d in dims_strategy(), s in noise_strategy()) {
        let c0 = capacity_approx(&d, s).unwrap().cbar;
        let c1 = capacity_approx(&d, 1.05 * s).unwrap().cbar;
        prop_assert!(c0 > 0.0 && c1 < c0);
    }

    #[test]
    fn general_resolvent_residual(gap in 0.01f64..20.0, b in 0.01f64..5.0, c1 in 1.0f64..4.0, c2 in 1.0f64..4.0) {
        let p = solve_general_resolvent(b + gap, b, c1, c2).unwrap();
        prop_assert!(p.delta_ab > 0.0);
        prop_assert!(p.residual() < 1e-12);
        prop_assert!(second_order_resolvent(&p, &p).unwrap() > 0.0);
    }
}

#[test]
fn capacity_monotone_on_log_grid() {
    for (nr, nt, n) in [(4, 6, 16), (6, 4, 16), (8, 8, 20), (1, 30, 31)] {
        let d = make_dims(nr, nt, n, 1).unwrap();
        let mut prev = f64::INFINITY;
        for k in 0..50 {
            let s = 10f64.powf(-4.0 + 8.0 * k as f64 / 49.0);
            let c = capacity_approx(&d, s).unwrap().cbar;
            assert!(c < prev, "{d} at σ²={s}");
            prev = c;
        }
    }
}

#[test]
fn square_case_continuous_in_dimensions() {
    // N=M should sit between N=M-1 and N=M+1 at equal n
    for s in [0.01, 0.3, 3.0] {
        let lo = capacity_approx(&make_dims(7, 8, 24, 1).unwrap(), s).unwrap().cbar;
        let mid = capacity_approx(&make_dims(8, 8, 24, 1).unwrap(), s).unwrap().cbar;
        let hi = capacity_approx(&make_dims(9, 8, 24, 1).unwrap(), s).unwrap().cbar;
        assert!(lo < mid && mid < hi);
    }
}

#[test]
fn large_noise_product_limit() {
    for (nr, nt, n) in [(4, 6, 16), (5, 5, 12), (1, 9, 30)] {
        let d = make_dims(nr, nt, n, 1).unwrap();
        let s = 1e8;
        let y1 = d.y1();
        assert_relative_eq!(s * solve_delta(&d, s).unwrap(), y1 / (1.0 - y1), max_relative = 1e-4);
    }
}

#[test]
fn small_noise_delta_settles_for_unequal_dims() {
    let d = make_dims(4, 6, 16, 1).unwrap();
    let (y1, y2) = (d.y1(), d.y2());
    assert_relative_eq!(solve_delta(&d, 1e-9).unwrap(), y1 / (y2 - y1), max_relative = 1e-6);
}

#[test]
fn general_resolvent_specializes_to_channel_delta() {
    // a = 1 + σ², b = σ², normalized by the smaller of N and M
    for (nr, nt, n) in [(4, 6, 16), (6, 4, 16), (5, 5, 13)] {
        let d = make_dims(nr, nt, n, 1).unwrap();
        for s in [0.05, 1.0, 7.0] {
            let (p, q) = (nr.min(nt) as f64, nr.max(nt) as f64);
            let other = (n - nr.max(nt)) as f64;
            let g = solve_general_resolvent(1.0 + s, s, q / p, other / p).unwrap();
            assert_relative_eq!(g.delta_ab, solve_delta(&d, s).unwrap(), max_relative = 1e-12);
        }
    }
}

#[test]
fn rayleigh_limit_approached_monotonically() {
    let (c, sb) = (2.0, 0.1);
    let want = rayleigh_branch_delta(c, sb);
    let mut prev = f64::INFINITY;
    for n in [64, 128, 256, 512, 1024, 2048, 4096] {
        let d = make_dims(16, 8, n, 1).unwrap();
        let s = 8.0 / n as f64 * sb;
        let gap = (solve_delta(&d, s).unwrap() - want).abs();
        assert!(gap < prev, "n={n}");
        prev = gap;
    }
    assert!(prev < 1e-3);
    // c < 1: branch and limit roots coincide
    assert_relative_eq!(rayleigh_branch_delta(0.5, sb), rayleigh_limit_delta(0.5, sb), max_relative = 1e-12);
    let mut prev = f64::INFINITY;
    for n in [64, 256, 1024, 4096] {
        let d = make_dims(8, 16, n, 1).unwrap();
        let s = 16.0 / n as f64 * sb;
        let gap = (capacity_approx(&d, s).unwrap().cbar - rayleigh_capacity(0.5, sb)).abs();
        assert!(gap < prev);
        prev = gap;
    }
}
