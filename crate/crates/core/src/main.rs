//! Command-line front end: model evaluation, metrics, oscillation
//! decompositions, posteriors, MLE searches and the Monte Carlo experiment
//! runners, all emitting CSV.
//!
//! Exit codes: 0 success, 2 validation/config error, 3 numerical
//! non-convergence.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use oscibayes::error::{Error, Result};
use oscibayes::harness::{self, parse_family, parse_prior, ExperimentKind};
use oscibayes::inference::{build_posterior, prior_diagnostics};
use oscibayes::metrics;
use oscibayes::mle;
use oscibayes::model::{self, FamilySpec, SampleSet, Theta};
use oscibayes::oscillations;
use oscibayes::quad::QuadratureConfig;

#[derive(Parser)]
#[command(
    name = "oscibayes",
    version,
    about = "Numerical laboratory for posterior consistency in oscillatory parametric models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Configuration file (flat key = value text).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed override for sampling subcommands.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format; only `csv` is supported.
    #[arg(long, global = true, default_value = "csv")]
    format: String,
}

#[derive(Args, Clone)]
struct QuadArgs {
    #[arg(long, default_value_t = 1e-10)]
    abs_tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    rel_tol: f64,
    #[arg(long, default_value_t = 50_000)]
    max_panels: usize,
    #[arg(long, default_value_t = 8)]
    oscillation_guard: u32,
}

impl QuadArgs {
    fn to_config(&self) -> QuadratureConfig {
        QuadratureConfig {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_panels: self.max_panels,
            oscillation_guard: self.oscillation_guard,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a family density at a point.
    Density {
        #[arg(long, default_value = "cosine")]
        family: String,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        x: f64,
    },
    /// Evaluate a family CDF at a point.
    Cdf {
        #[arg(long, default_value = "cosine")]
        family: String,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        x: f64,
    },
    /// Draw a deterministic sample by numerical CDF inversion.
    Sample {
        #[arg(long, default_value = "cosine")]
        family: String,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Distance or divergence between two model points.
    Metric {
        /// hellinger | kl | tv | levy | cross-correlation
        #[arg(long)]
        kind: String,
        #[arg(long, default_value = "cosine")]
        family_a: String,
        #[arg(long)]
        theta_a: f64,
        #[arg(long, default_value = "cosine")]
        family_b: String,
        #[arg(long)]
        theta_b: f64,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Minimal decomposition of the exceedance set { f_a > f_b }.
    Oscillations {
        #[arg(long, default_value = "cosine")]
        family_a: String,
        #[arg(long)]
        theta_a: f64,
        #[arg(long, default_value = "cosine")]
        family_b: String,
        #[arg(long)]
        theta_b: f64,
    },
    /// Build a quadrature posterior and emit its grid as CSV.
    Posterior {
        #[arg(long)]
        prior: Option<String>,
        #[arg(long, default_value = "cosine")]
        family: String,
        #[arg(long, default_value_t = 1.0)]
        theta_star: f64,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100.0)]
        theta_max: f64,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Restricted maximum likelihood on [0, M]; with --m-list, the full
    /// escape experiment against a peak beyond every window.
    Mle {
        #[arg(long, default_value_t = 0.0)]
        theta_star: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100.0)]
        m: f64,
        /// Comma-separated windows for the escape experiment.
        #[arg(long)]
        m_list: Option<String>,
        #[arg(long, default_value_t = 0.3)]
        delta: f64,
        #[arg(long, default_value_t = mle::DEFAULT_SCAN_BOUND)]
        scan_bound: u64,
        /// Allow n beyond the documented peak-search feasibility limit.
        #[arg(long, default_value_t = false)]
        force: bool,
    },
    /// Integer scan for a simultaneous likelihood peak.
    PeakSearch {
        /// Explicit comma-separated sample points in [0, 1]; overrides n/seed.
        #[arg(long)]
        points: Option<String>,
        #[arg(long, default_value_t = 0.0)]
        theta_star: f64,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.3)]
        delta: f64,
        #[arg(long, default_value_t = mle::DEFAULT_SCAN_BOUND)]
        scan_bound: u64,
    },
    /// Run a seeded Monte Carlo experiment from a config file.
    Experiment,
    /// Density and CDF table over an x-grid for a list of parameters.
    FigureData {
        #[arg(long, default_value = "5,20,80,320")]
        thetas: String,
        #[arg(long, default_value_t = 512)]
        grid_points: usize,
    },
    /// Partial sums of square-root bucket masses of a prior tail.
    PriorDiagnostics {
        #[arg(long)]
        prior: String,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 1_000_000)]
        k_max: usize,
    },
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, content.as_bytes())?;
            Ok(())
        }
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if cli.format != "csv" {
        return Err(Error::Validation(format!(
            "unsupported format '{}'; only csv is available",
            cli.format
        )));
    }
    let out = cli.out.as_ref();

    match cli.command {
        Command::Density { family, theta, x } => {
            let fam = parse_family(&family)?;
            let v = model::density(&fam, Theta::new(theta)?, x)?;
            emit(out, &format!("{}\n", harness::fmt_float(v)))
        }
        Command::Cdf { family, theta, x } => {
            let fam = parse_family(&family)?;
            let v = model::cdf(&fam, Theta::new(theta)?, x)?;
            emit(out, &format!("{}\n", harness::fmt_float(v)))
        }
        Command::Sample {
            family,
            theta,
            n,
            seed,
        } => {
            let fam = parse_family(&family)?;
            let seed = cli.seed.unwrap_or(seed);
            let sample = model::sample(&fam, Theta::new(theta)?, n, seed)?;
            let mut csv = String::from("index,x\n");
            for (i, x) in sample.points().iter().enumerate() {
                csv.push_str(&format!("{},{}\n", i, harness::fmt_float(*x)));
            }
            emit(out, &csv)
        }
        Command::Metric {
            kind,
            family_a,
            theta_a,
            family_b,
            theta_b,
            quad,
        } => {
            let a = (parse_family(&family_a)?, Theta::new(theta_a)?);
            let b = (parse_family(&family_b)?, Theta::new(theta_b)?);
            let v = metrics::by_name(&kind, &a, &b, &quad.to_config())?;
            emit(out, &format!("{}\n", harness::fmt_float(v)))
        }
        Command::Oscillations {
            family_a,
            theta_a,
            family_b,
            theta_b,
        } => {
            let a = (parse_family(&family_a)?, Theta::new(theta_a)?);
            let b = (parse_family(&family_b)?, Theta::new(theta_b)?);
            let set = oscillations::exceedance_intervals(&a, &b)?;
            let mut csv = String::from("a,b\n");
            for &(lo, hi) in set.intervals() {
                csv.push_str(&format!(
                    "{},{}\n",
                    harness::fmt_float(lo),
                    harness::fmt_float(hi)
                ));
            }
            csv.push_str(&format!("# count = {}\n", set.count()));
            emit(out, &csv)
        }
        Command::Posterior {
            prior,
            family,
            theta_star,
            n,
            seed,
            theta_max,
            quad,
        } => {
            // A config file, when given, supplies everything; flags otherwise.
            let (prior_spec, fam, theta_star, theta_max, qcfg, seed) = match &cli.config {
                Some(path) => {
                    let cfg = harness::parse_config(&std::fs::read_to_string(path)?)?;
                    (
                        cfg.prior,
                        cfg.family,
                        cfg.theta_star,
                        cfg.theta_max,
                        cfg.quadrature,
                        cli.seed.unwrap_or(cfg.master_seed),
                    )
                }
                None => {
                    let spec = prior.as_deref().ok_or_else(|| {
                        Error::Validation("either --config or --prior is required".into())
                    })?;
                    (
                        parse_prior(spec)?,
                        parse_family(&family)?,
                        Theta::new(theta_star)?,
                        theta_max,
                        quad.to_config(),
                        cli.seed.unwrap_or(seed),
                    )
                }
            };
            let sample = model::sample(&fam, theta_star, n, seed)?;
            let grid = build_posterior(&prior_spec, &fam, &sample, &qcfg, theta_max)?;
            emit(out, &grid.to_csv())
        }
        Command::Mle {
            theta_star,
            n,
            seed,
            m,
            m_list,
            delta,
            scan_bound,
            force,
        } => {
            let seed = cli.seed.unwrap_or(seed);
            match m_list {
                Some(list) => {
                    let windows = harness::config::parse_f64_list(&list)?;
                    let report = mle::escape_experiment(
                        Theta::new(theta_star)?,
                        n,
                        &windows,
                        delta,
                        seed,
                        scan_bound,
                        0.05,
                        force,
                    )?;
                    emit(out, &harness::escape_report_to_csv(&report))
                }
                None => {
                    let sample =
                        model::sample(&FamilySpec::Cosine, Theta::new(theta_star)?, n, seed)?;
                    let (theta_hat, log_lik) =
                        mle::restricted_mle(&FamilySpec::Cosine, &sample, m)?;
                    let csv = format!(
                        "M,theta_hat,log_lik\n{},{},{}\n",
                        harness::fmt_float(m),
                        harness::fmt_float(theta_hat.value()),
                        harness::fmt_float(log_lik)
                    );
                    emit(out, &csv)
                }
            }
        }
        Command::PeakSearch {
            points,
            theta_star,
            n,
            seed,
            delta,
            scan_bound,
        } => {
            let seed = cli.seed.unwrap_or(seed);
            let sample = match points {
                Some(list) => SampleSet::from_points(
                    harness::config::parse_f64_list(&list)?,
                    FamilySpec::Cosine,
                    Theta::new(theta_star)?,
                    seed,
                )?,
                None => model::sample(&FamilySpec::Cosine, Theta::new(theta_star)?, n, seed)?,
            };
            let search = mle::dirichlet_peak_search(&sample, delta, scan_bound)?;
            let (status, r) = match &search {
                mle::PeakSearch::Found(r) => ("found", r),
                mle::PeakSearch::NotFound { best } => ("not-found", best),
            };
            let csv = format!(
                "status,theta,min_density,iterations,scan_bound\n{},{},{},{},{}\n",
                status,
                harness::fmt_float(r.theta.value()),
                harness::fmt_float(r.min_density),
                r.iterations,
                r.scan_bound
            );
            emit(out, &csv)
        }
        Command::Experiment => {
            let path = cli
                .config
                .as_ref()
                .ok_or_else(|| Error::Validation("experiment requires --config".into()))?;
            let cfg = harness::parse_config(&std::fs::read_to_string(path)?)?;
            let csv = match cfg.kind {
                ExperimentKind::Consistency => harness::run_consistency_experiment(&cfg)?,
                ExperimentKind::WeakVsStrong => {
                    // the schedule indexes theta_j = 2 pi j around the reference
                    let seq: Vec<Theta> = cfg
                        .n_schedule
                        .iter()
                        .map(|&j| Theta::new(2.0 * std::f64::consts::PI * j as f64))
                        .collect::<Result<_>>()?;
                    harness::weak_vs_strong_probe(&seq, cfg.theta_star)?
                }
            };
            match (out, cfg.output_path.as_ref()) {
                (Some(path), _) => emit(Some(path), &csv),
                (None, Some(path)) => emit(Some(&PathBuf::from(path)), &csv),
                (None, None) => emit(None, &csv),
            }
        }
        Command::FigureData {
            thetas,
            grid_points,
        } => {
            let list: Vec<Theta> = harness::config::parse_f64_list(&thetas)?
                .into_iter()
                .map(Theta::new)
                .collect::<Result<_>>()?;
            let csv = harness::emit_figure_data(&list, grid_points)?;
            emit(out, &csv)
        }
        Command::PriorDiagnostics {
            prior,
            delta,
            k_max,
        } => {
            let spec = parse_prior(&prior)?;
            let report = prior_diagnostics(&spec, delta, k_max)?;
            let mut csv = String::from("k,partial_sum\n");
            for (k, s) in &report.checkpoints {
                csv.push_str(&format!("{},{}\n", k, harness::fmt_float(*s)));
            }
            csv.push_str(&format!(
                "# final_increment = {}\n# fitted_exponent = {}\n# verdict = {:?}\n",
                harness::fmt_float(report.final_increment),
                report
                    .fitted_exponent
                    .map(harness::fmt_float)
                    .unwrap_or_else(|| "none".into()),
                report.verdict
            ));
            emit(out, &csv)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
