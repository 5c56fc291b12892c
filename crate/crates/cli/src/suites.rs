//! Monte-Carlo and analytic validation suites behind `jacobi-fbl validate`.

use jacobi_fbl::bounds::{dispersion_components, gallager_comparison, rayleigh_dispersion};
use jacobi_fbl::sim::{
    empirical_cdf, resolvent_trace_exact, resolvent_trace_mc, run_clt_campaign, stats, derive_seed,
};
use jacobi_fbl::spectral::{
    capacity_approx, rayleigh_branch_delta, solve_delta, solve_general_resolvent,
};
use jacobi_fbl::{make_dims, noise_power_from_db, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self { name: name.to_string(), passed, detail }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Lemma1,
    Clt,
    Rayleigh,
    Gallager,
    All,
}

pub fn run_suite(suite: Suite, trials: usize, seed: u64) -> Result<Vec<Check>> {
    Ok(match suite {
        Suite::Lemma1 => lemma1(64, trials, seed)?,
        Suite::Clt => clt(trials, seed)?,
        Suite::Rayleigh => rayleigh()?,
        Suite::Gallager => gallager(50, seed)?,
        Suite::All => {
            let mut v = lemma1(64, trials, seed)?;
            v.extend(clt(trials, seed)?);
            v.extend(rayleigh()?);
            v.extend(gallager(50, seed)?);
            v
        }
    })
}

/// Resolvent trace against its deterministic equivalent at `(a,b) =
/// (1.316, 0.316)`, `c₁ = 1.5`, `c₂ = 1`.
pub fn lemma1(dim_n: usize, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let (a, b, c1, c2) = (1.316, 0.316, 1.5, 1.0);
    let delta = solve_general_resolvent(a, b, c1, c2)?.delta_ab;
    let (mean, se) = resolvent_trace_mc(a, b, dim_n, c1, c2, trials, seed)?;
    let nf = dim_n as f64;
    let tol = 3.0 * se + 10.0 / (nf * nf);
    let mut out = vec![Check::new(
        "lemma1.mc_mean",
        (mean - delta).abs() < tol,
        format!("N={dim_n} trials={trials}: |{mean:.8} - {delta:.8}| = {:.3e} < {tol:.3e}", (mean - delta).abs()),
    )];

    let m = |k: f64| (k * nf).round() as usize;
    let exact = resolvent_trace_exact(a, b, dim_n, m(c1), m(c2))?;
    out.push(Check::new(
        "lemma1.mc_vs_exact",
        (mean - exact).abs() < 3.0 * se,
        format!("|MC - exact| = {:.3e} < 3 SE = {:.3e}", (mean - exact).abs(), 3.0 * se),
    ));

    let half = dim_n / 2;
    let exact_half = resolvent_trace_exact(a, b, half, (c1 * half as f64).round() as usize, (c2 * half as f64).round() as usize)?;
    let ratio = (exact_half - delta) / (exact - delta);
    out.push(Check::new(
        "lemma1.bias_rate",
        (2.5..=6.0).contains(&ratio),
        format!("bias(N={half}) / bias(N={dim_n}) = {ratio:.4} in [2.5, 6]"),
    ));
    Ok(out)
}

/// CLT at `(N,M,n,L) = (4,6,16,60)`, 5 dB.
pub fn clt(trials: usize, seed: u64) -> Result<Vec<Check>> {
    let dims = make_dims(4, 6, 16, 60)?;
    let s = noise_power_from_db(5.0);
    let cbar = capacity_approx(&dims, s)?.cbar;
    let disp = dispersion_components(&dims, s)?;
    let run = run_clt_campaign(&dims, s, trials, seed)?;
    let ids = run.info_densities();
    let (m, se) = (stats::mean(&ids), stats::std_err(&ids));
    let dev = run.scaled_deviations(cbar);
    let var = stats::variance(&dev);
    let xi = disp.realized_xi(run.mean_trace_c_sq_over_m());
    let ks = empirical_cdf(&run, cbar, xi.sqrt())?.ks_distance_normal();
    Ok(vec![
        Check::new(
            "clt.mean",
            (m - cbar).abs() < 3.0 * se,
            format!("mean ID {m:.6} vs C̄ {cbar:.6} (|Δ| = {:.2e}, 3 SE = {:.2e})", (m - cbar).abs(), 3.0 * se),
        ),
        Check::new(
            "clt.variance",
            ((var - xi) / xi).abs() < 0.05,
            format!("Var = {var:.5} vs realized Ξ = {xi:.5} (rel {:.4})", (var - xi) / xi),
        ),
        Check::new("clt.ks", ks < 0.03, format!("KS vs N(0,1) = {ks:.5} < 0.03 over {trials} trials")),
    ])
}

/// Rayleigh degeneration at `c = 2`, `β = 4.5`, `σ̄⁻² = 10 dB`.
pub fn rayleigh() -> Result<Vec<Check>> {
    let sb = noise_power_from_db(10.0);
    let (nr, nt) = (16, 8);
    let c = nr as f64 / nt as f64;
    let lim_delta = rayleigh_branch_delta(c, sb);
    let lim_v3 = rayleigh_dispersion(c, sb, 4.5)?.v3;
    let mut gd = Vec::new();
    let mut gv = Vec::new();
    for n in [128, 512, 2048] {
        let d = make_dims(nr, nt, n, 36)?;
        let s = nt as f64 / n as f64 * sb;
        gd.push((solve_delta(&d, s)? - lim_delta).abs());
        gv.push((dispersion_components(&d, s)?.v3 - lim_v3).abs());
    }
    let mono = |g: &[f64]| g.windows(2).all(|w| w[1] < w[0]);
    Ok(vec![
        Check::new(
            "rayleigh.delta",
            mono(&gd) && gd[2] < 1e-3,
            format!("|δ - δ̃₀| over n=128,512,2048: {:.3e}, {:.3e}, {:.3e}", gd[0], gd[1], gd[2]),
        ),
        Check::new(
            "rayleigh.v3",
            mono(&gv) && gv[2] < 1e-3,
            format!("|V₃ - V₃ᴿ| over n=128,512,2048: {:.3e}, {:.3e}, {:.3e}", gv[0], gv[1], gv[2]),
        ),
    ])
}

/// Gallager-exponent identities on random fully excited fibers with `N ≤ M`.
pub fn gallager(points: usize, seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0x6a11));
    let (mut w_err, mut id_err) = (0f64, 0f64);
    for _ in 0..points {
        let nt = rng.random_range(1..=32usize);
        let nr = rng.random_range(1..=nt);
        let l = rng.random_range(1..=200usize);
        let d = make_dims(nr, nt, nr + nt, l)?;
        let s = 10f64.powf(rng.random_range(-2.0..2.0));
        let g = gallager_comparison(&d, s)?;
        let xi = dispersion_components(&d, s)?.xi_plus;
        w_err = w_err.max((g.omega - g.omega_closed_form).abs());
        id_err = id_err.max((xi / d.beta() - (g.e_g - g.omega * g.omega / d.beta())).abs());
    }
    Ok(vec![
        Check::new("gallager.omega", w_err < 1e-12, format!("max |ω - ω_closed| = {w_err:.2e} over {points} points")),
        Check::new(
            "gallager.identity",
            id_err < 1e-12,
            format!("max |Ξ₊/β - (E_G - ω²/β)| = {id_err:.2e} over {points} points"),
        ),
    ])
}
