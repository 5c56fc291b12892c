use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use jacobi_fbl::bounds::{dispersion_components, error_probability_bounds};
use jacobi_fbl::spectral::capacity_approx;
use jacobi_fbl::sweep::{self, OutputFormat};
use jacobi_fbl::{make_dims, noise_power_from_db, Error};
use jacobi_fbl_cli::suites::{run_suite, Suite};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "jacobi-fbl", version, about = "Finite-blocklength limits of Jacobi MIMO channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct Link {
    /// excited receive channels
    #[arg(long = "N")]
    n_rx: usize,
    /// excited transmit channels
    #[arg(long = "M")]
    n_tx: usize,
    /// available fiber channels
    #[arg(long = "n")]
    n_avail: usize,
    /// receive SNR σ⁻² in dB
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    snr_db: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity approximation and its spectral ingredients
    Capacity {
        #[command(flatten)]
        link: Link,
        #[arg(long)]
        json: bool,
    },
    /// Error-probability bounds at a given rate
    Bounds {
        #[command(flatten)]
        link: Link,
        /// blocklength in channel uses
        #[arg(long = "L")]
        blocklen: usize,
        /// rate in nats per transmit antenna per channel use
        #[arg(long, allow_hyphen_values = true)]
        rate: f64,
        #[arg(long)]
        json: bool,
    },
    /// Monte-Carlo validation suites
    Validate {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, env = "JACOBI_FBL_SEED", default_value_t = 7)]
        seed: u64,
    },
    /// Parameter sweeps to CSV or JSON
    #[command(group(ArgGroup::new("source").required(true).args(["preset", "config"])))]
    Sweep {
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// master seed for Monte-Carlo cells
        #[arg(long, env = "JACOBI_FBL_SEED")]
        seed: Option<u64>,
        /// add Monte-Carlo cells with this many trials per point
        #[arg(long)]
        trials: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Fig2,
    Fig3,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn usage(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_USAGE)
}

fn failure(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_CHECK_FAILED)
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("report serializes"));
}

fn print_kv(pairs: &[(&str, f64)]) {
    for (k, v) in pairs {
        println!("{k:<14} {v:.16e}");
    }
}

#[derive(Serialize)]
struct CapacityReport {
    #[serde(rename = "N")]
    n_rx: usize,
    #[serde(rename = "M")]
    n_tx: usize,
    n: usize,
    snr_db: f64,
    noise_power: f64,
    branch: jacobi_fbl::Branch,
    delta: f64,
    delta_prime: f64,
    lambda_minus: f64,
    lambda_plus: f64,
    cbar: f64,
}

fn cmd_capacity(link: Link, json: bool) -> ExitCode {
    let dims = match make_dims(link.n_rx, link.n_tx, link.n_avail, 1) {
        Ok(d) => d,
        Err(e) => return usage(e),
    };
    let s = noise_power_from_db(link.snr_db);
    let sol = match capacity_approx(&dims, s) {
        Ok(v) => v,
        Err(e @ (Error::Domain(_) | Error::Numerical(_))) => return usage(e),
        Err(e) => return failure(e),
    };
    if json {
        print_json(&CapacityReport {
            n_rx: link.n_rx,
            n_tx: link.n_tx,
            n: link.n_avail,
            snr_db: link.snr_db,
            noise_power: s,
            branch: sol.branch,
            delta: sol.delta,
            delta_prime: sol.delta_prime,
            lambda_minus: sol.lambda_minus,
            lambda_plus: sol.lambda_plus,
            cbar: sol.cbar,
        });
    } else {
        println!("dims           N={} M={} n={}  ({:?})", link.n_rx, link.n_tx, link.n_avail, sol.branch);
        print_kv(&[
            ("noise_power", s),
            ("delta", sol.delta),
            ("delta_prime", sol.delta_prime),
            ("lambda_minus", sol.lambda_minus),
            ("lambda_plus", sol.lambda_plus),
            ("cbar", sol.cbar),
        ]);
    }
    ExitCode::SUCCESS
}

#[derive(Serialize)]
struct BoundsReport {
    #[serde(rename = "N")]
    n_rx: usize,
    #[serde(rename = "M")]
    n_tx: usize,
    n: usize,
    #[serde(rename = "L")]
    blocklen: usize,
    snr_db: f64,
    rate: f64,
    cbar: f64,
    r: f64,
    v1: f64,
    v2: f64,
    v3: f64,
    xi_minus: f64,
    xi_plus: f64,
    lower: f64,
    upper: f64,
    outage: f64,
    positive_r: bool,
}

fn cmd_bounds(link: Link, blocklen: usize, rate: f64, json: bool) -> ExitCode {
    let dims = match make_dims(link.n_rx, link.n_tx, link.n_avail, blocklen) {
        Ok(d) => d,
        Err(e) => return usage(e),
    };
    let s = noise_power_from_db(link.snr_db);
    let (b, d) = match error_probability_bounds(&dims, s, rate).and_then(|b| Ok((b, dispersion_components(&dims, s)?))) {
        Ok(v) => v,
        Err(e @ (Error::Domain(_) | Error::Numerical(_))) => return usage(e),
        Err(e) => return failure(e),
    };
    let positive_r = b.second_order_rate > 0.0;
    if json {
        print_json(&BoundsReport {
            n_rx: link.n_rx,
            n_tx: link.n_tx,
            n: link.n_avail,
            blocklen,
            snr_db: link.snr_db,
            rate,
            cbar: b.cbar,
            r: b.second_order_rate,
            v1: d.v1,
            v2: d.v2,
            v3: d.v3,
            xi_minus: b.xi_minus,
            xi_plus: b.xi_plus,
            lower: b.lower_bound,
            upper: b.upper_bound,
            outage: b.outage,
            positive_r,
        });
    } else {
        println!("dims           N={} M={} n={} L={}", link.n_rx, link.n_tx, link.n_avail, blocklen);
        print_kv(&[
            ("rate", rate),
            ("cbar", b.cbar),
            ("r", b.second_order_rate),
            ("xi_minus", b.xi_minus),
            ("xi_plus", b.xi_plus),
        ]);
        if positive_r {
            println!("{:<14} {:.16e}  (r>0 regime: lower bound is 1/2)", "lower", b.lower_bound);
        } else {
            print_kv(&[("lower", b.lower_bound)]);
        }
        print_kv(&[("upper", b.upper_bound), ("outage", b.outage)]);
    }
    ExitCode::SUCCESS
}

fn cmd_validate(suite: Suite, trials: usize, seed: u64) -> ExitCode {
    let checks = match run_suite(suite, trials, seed) {
        Ok(c) => c,
        Err(e @ (Error::Domain(_) | Error::Config(_))) => return usage(e),
        Err(e) => return failure(e),
    };
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} checks, {} failed", checks.len(), failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK_FAILED)
    }
}

fn cmd_sweep(
    preset: Option<Preset>,
    config: Option<PathBuf>,
    out: PathBuf,
    format: Format,
    seed: Option<u64>,
    trials: Option<usize>,
) -> ExitCode {
    let cfg = match (preset, config) {
        (Some(p), _) => {
            let name = match p {
                Preset::Fig2 => "fig2",
                Preset::Fig3 => "fig3",
            };
            sweep::preset(name).map(|mut c| {
                if trials.is_some() {
                    c.outputs.extend(sweep::preset_mc_outputs(name));
                }
                c.with_mc(trials, seed.unwrap_or(0))
            })
        }
        (None, Some(path)) => std::fs::read_to_string(&path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
            .and_then(|text| sweep::parse_config(&text))
            .map(|mut c| {
                if let Some(mc) = c.mc.as_mut() {
                    mc.n_trials = trials.unwrap_or(mc.n_trials);
                    mc.master_seed = seed.unwrap_or(mc.master_seed);
                }
                c
            }),
        (None, None) => unreachable!("clap enforces one source"),
    };
    let cfg = match cfg {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let result = match sweep::run_sweep(&cfg) {
        Ok(r) => r,
        Err(e @ Error::Config(_)) => return usage(e),
        Err(e) => return failure(e),
    };
    let fmt = match format {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    };
    if let Err(e) = sweep::emit(&result, fmt, &out) {
        return failure(e);
    }
    println!("{} rows ({} grid points) written to {}", result.rows.len(), cfg.n_points(), out.display());
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Capacity { link, json } => cmd_capacity(link, json),
        Command::Bounds { link, blocklen, rate, json } => cmd_bounds(link, blocklen, rate, json),
        Command::Validate { suite, trials, seed } => cmd_validate(suite, trials, seed),
        Command::Sweep { preset, config, out, format, seed, trials } => {
            cmd_sweep(preset, config, out, format, seed, trials)
        }
    }
}
