use approx::assert_relative_eq;
use jacobi_fbl::bounds::{
    dispersion_components, error_probability_bounds, gallager_comparison, high_snr_asymptotes, rayleigh_dispersion,
};
use jacobi_fbl::normal::{std_normal_cdf, std_normal_pdf, std_normal_quantile};
use jacobi_fbl::{make_dims, noise_power_from_db, ChannelDims, Error};
use proptest::prelude::*;

fn dims_strategy() -> impl Strategy<Value = ChannelDims> {
    (1usize..=32, 1usize..=32, 0usize..=64, 1usize..=400)
        .prop_map(|(nr, nt, extra, l)| make_dims(nr, nt, nr + nt + extra, l).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dispersion_ordering(d in dims_strategy(), db in -10.0f64..30.0) {
        let c = dispersion_components(&d, noise_power_from_db(db)).unwrap();
        prop_assert!(c.v1 >= 0.0 && c.v2 >= 0.0 && c.v3 >= 0.0);
        prop_assert!(c.xi_minus > 0.0);
        prop_assert!(c.xi_plus >= c.xi_minus);
        prop_assert!(c.realized_xi(0.5) >= c.xi_minus);
    }

    #[test]
    fn below_capacity_orderings(d in dims_strategy(), db in -10.0f64..30.0, frac in 0.05f64..1.0) {
        let s = noise_power_from_db(db);
        let cbar = jacobi_fbl::spectral::capacity_approx(&d, s).unwrap().cbar;
        let b = error_probability_bounds(&d, s, frac * cbar).unwrap();
        prop_assert!(b.second_order_rate <= 0.0);
        prop_assert!(b.outage <= b.upper_bound);
        prop_assert!(b.lower_bound <= b.upper_bound);
    }

    #[test]
    fn gallager_omega_forms_agree(nr in 1usize..=30, extra in 0usize..=30, l in 1usize..=300, db in -10.0f64..30.0) {
        let nt = nr + extra;
        let d = make_dims(nr, nt, nr + nt, l).unwrap();
        let g = gallager_comparison(&d, noise_power_from_db(db)).unwrap();
        prop_assert!((g.omega - g.omega_closed_form).abs() < 1e-12);
        prop_assert!((g.xi_plus_over_beta - (g.e_g - g.omega * g.omega / d.beta())).abs() < 1e-10 * g.e_g.max(1.0));
    }
}

#[test]
fn gallager_rejects_other_regimes() {
    let s = 0.3;
    assert!(matches!(gallager_comparison(&make_dims(4, 6, 12, 1).unwrap(), s), Err(Error::Regime(_))));
    assert!(matches!(gallager_comparison(&make_dims(6, 4, 10, 1).unwrap(), s), Err(Error::Regime(_))));
}

#[test]
fn quantile_round_trip() {
    // |Φ⁻¹(Φ(x)) − x| is limited by rounding p = Φ(x) to a double: an error of
    // a few ulp(p) moves the quantile by ulp(p)/φ(x), which exceeds 1e-9 in
    // the far upper tail where p ≈ 1.
    for k in 0..=1200 {
        let x = -6.0 + 0.01 * k as f64;
        let p = std_normal_cdf(x);
        let got = std_normal_quantile(p).unwrap();
        let conditioning = 4.0 * f64::EPSILON * p / std_normal_pdf(x);
        assert!((got - x).abs() < 1e-9 + conditioning, "x={x}: {got}");
        if x <= 5.0 {
            assert!((got - x).abs() < 1e-9, "x={x}: {got}");
        }
    }
}

#[test]
fn high_snr_limits() {
    for (nr, nt, n, l) in [(4, 6, 16, 60), (6, 4, 16, 40), (2, 9, 14, 27), (12, 5, 20, 10)] {
        let d = make_dims(nr, nt, n, l).unwrap();
        let lim = high_snr_asymptotes(&d).unwrap();
        let c = dispersion_components(&d, 1e-6).unwrap();
        assert_relative_eq!(c.xi_minus, lim.xi_minus_limit, max_relative = 0.01);
        assert_relative_eq!(c.xi_plus, lim.xi_plus_limit, max_relative = 0.01);
    }
    assert!(matches!(high_snr_asymptotes(&make_dims(5, 5, 12, 5).unwrap()), Err(Error::Degenerate(_))));
}

#[test]
fn rayleigh_dispersion_approached() {
    let (sb, beta) = (0.1, 4.5);
    for (nr, nt) in [(16, 8), (8, 16)] {
        let c = nr as f64 / nt as f64;
        let want = rayleigh_dispersion(c, sb, beta).unwrap();
        let mut prev = [f64::INFINITY; 3];
        for n in [128, 512, 2048] {
            let d = make_dims(nr, nt, n, (beta * nt as f64) as usize).unwrap();
            let got = dispersion_components(&d, nt as f64 / n as f64 * sb).unwrap();
            let gaps = [(got.v1 - want.v1).abs(), (got.v2 - want.v2).abs(), (got.v3 - want.v3).abs()];
            for (g, p) in gaps.iter().zip(prev) {
                assert!(*g < p, "N={nr} M={nt} n={n}: {gaps:?} vs {prev:?}");
            }
            prev = gaps;
        }
    }
}
