//! Seeded Monte Carlo runners and CSV emitters.
//!
//! Every runner is a pure function of its configuration (master seed
//! included): replicate seeds come from the documented mixing function, rows
//! are buffered per replicate and written in `(replicate, n)` order, so the
//! emitted CSV is byte-identical across reruns and thread counts. Failed
//! replicates produce a marked row instead of aborting the sweep.

pub mod config;

pub use config::{parse_config, parse_family, parse_prior, ExperimentConfig, ExperimentKind};

use rayon::prelude::*;

use crate::error::Result;
use crate::inference::{build_posterior_with, TailPolicy};
use crate::metrics;
use crate::model::{self, FamilySpec, Theta};
use crate::oscillations;
use crate::quad::QuadratureConfig;
use crate::rng;

/// Full-precision scientific float formatting shared by all CSV artifacts:
/// 17 significant digits round-trip any f64 exactly.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.17e}")
    }
}

/// Cap on dominant posterior nodes used to evaluate the predictive density
/// column; keeps the Hellinger quadrature affordable for heavy-tailed runs
/// where the posterior spreads over tens of thousands of nodes.
const PREDICTIVE_NODE_CAP: usize = 8192;
/// Frequency cap for the predictive Hellinger quadrature; mass sitting on
/// higher frequencies is aggregated by the node cap anyway.
const PREDICTIVE_FREQ_CAP: f64 = 512.0;

fn predictive_hellinger(
    grid: &crate::inference::PosteriorGrid,
    family: &FamilySpec,
    theta_star: Theta,
) -> Result<f64> {
    let mut nodes = grid.dominant_nodes(1.0 - 1e-6);
    if nodes.len() > PREDICTIVE_NODE_CAP {
        nodes.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        nodes.truncate(PREDICTIVE_NODE_CAP);
        let total: f64 = nodes.iter().map(|(_, m)| m).sum();
        for entry in &mut nodes {
            entry.1 /= total;
        }
        nodes.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    }
    let (lo, hi) = family.support(theta_star)?;
    let freq = nodes
        .iter()
        .map(|(t, _)| *t)
        .fold(theta_star.value(), f64::max)
        .min(PREDICTIVE_FREQ_CAP);
    let pred = |x: f64| -> f64 {
        nodes
            .iter()
            .map(|&(t, m)| match Theta::new(t) {
                Ok(th) => m * model::density_clamped(family, th, x),
                Err(_) => 0.0,
            })
            .sum()
    };
    let truth = |x: f64| model::density_clamped(family, theta_star, x);
    let cfg = QuadratureConfig {
        abs_tol: 1e-7,
        rel_tol: 1e-6,
        max_panels: 20_000,
        oscillation_guard: 8,
    };
    metrics::hellinger_fn(pred, truth, lo, hi, freq, &cfg)
}

struct ReplicateRow {
    replicate: usize,
    n: usize,
    mass_ball: f64,
    mass_complement: f64,
    predictive_hellinger: f64,
    levy_post_mean: f64,
    status: String,
}

impl ReplicateRow {
    fn failed(replicate: usize, n: usize, err: &crate::Error) -> Self {
        let code = match err {
            crate::Error::DegeneratePosterior => "error:degenerate-posterior",
            crate::Error::ThetaMaxTooSmall { .. } => "error:theta-max-too-small",
            crate::Error::NonConvergence { .. } => "error:non-convergence",
            _ => "error:other",
        };
        ReplicateRow {
            replicate,
            n,
            mass_ball: f64::NAN,
            mass_complement: f64::NAN,
            predictive_hellinger: f64::NAN,
            levy_post_mean: f64::NAN,
            status: code.to_string(),
        }
    }
}

/// Header of the consistency-experiment CSV; fixed, columns never reorder.
pub const CONSISTENCY_HEADER: &str =
    "replicate,n,mass_ball,mass_complement,predictive_hellinger,levy_post_mean,status";

/// Posterior-concentration sweep over the sample-size schedule.
///
/// One CSV row per `(replicate, n)`: posterior mass of the epsilon-ball
/// around `theta_star`, its complement, the Hellinger distance of the
/// posterior predictive from the true density, and the Levy distance of the
/// posterior-mean-parameter CDF from the true CDF. Samples within a replicate
/// are nested across the schedule (draw `i` is shared), mirroring a growing
/// data sequence.
pub fn run_consistency_experiment(cfg: &ExperimentConfig) -> Result<String> {
    cfg.validate()?;
    let rows: Vec<Vec<ReplicateRow>> = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let seed = rng::derive_seed(cfg.master_seed, r as u64);
            let mut out = Vec::with_capacity(cfg.n_schedule.len());
            for &n in &cfg.n_schedule {
                out.push(consistency_row(cfg, r, n, seed));
            }
            out
        })
        .collect();

    let mut csv = String::new();
    csv.push_str(CONSISTENCY_HEADER);
    csv.push('\n');
    for replicate_rows in rows {
        for row in replicate_rows {
            csv.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                row.replicate,
                row.n,
                fmt_float(row.mass_ball),
                fmt_float(row.mass_complement),
                fmt_float(row.predictive_hellinger),
                fmt_float(row.levy_post_mean),
                row.status
            ));
        }
    }
    Ok(csv)
}

fn consistency_row(cfg: &ExperimentConfig, replicate: usize, n: usize, seed: u64) -> ReplicateRow {
    let run = || -> Result<ReplicateRow> {
        let sample = model::sample(&cfg.family, cfg.theta_star, n, seed)?;
        let grid = build_posterior_with(
            &cfg.prior,
            &cfg.family,
            &sample,
            &cfg.quadrature,
            cfg.theta_max,
            // Heavy-tailed priors cannot satisfy the strict tail rule at any
            // feasible theta_max; the truncation is recorded, not fatal.
            TailPolicy::Record,
        )?;
        let lo = (cfg.theta_star.value() - cfg.epsilon).max(0.0);
        let hi = cfg.theta_star.value() + cfg.epsilon;
        let mass_ball = grid.mass(lo, hi)?;
        let predictive_hellinger = predictive_hellinger(&grid, &cfg.family, cfg.theta_star)?;
        let mean = Theta::new(grid.mean())?;
        let levy_post_mean = metrics::levy_distance(
            &(cfg.family.clone(), mean),
            &(cfg.family.clone(), cfg.theta_star),
        )?;
        Ok(ReplicateRow {
            replicate,
            n,
            mass_ball,
            mass_complement: 1.0 - mass_ball,
            predictive_hellinger,
            levy_post_mean,
            status: "ok".to_string(),
        })
    };
    run().unwrap_or_else(|e| ReplicateRow::failed(replicate, n, &e))
}

/// Header of the weak-vs-strong probe CSV.
pub const WEAK_VS_STRONG_HEADER: &str = "theta,levy,hellinger,oscillation_count";

/// Per element of the parameter sequence: Levy distance to the reference CDF,
/// Hellinger distance to the reference density, and the oscillation count
/// around it. The weak column can vanish while the strong column stays away
/// from zero; the count column is what diverges in that regime.
pub fn weak_vs_strong_probe(sequence: &[Theta], reference: Theta) -> Result<String> {
    let cfg = QuadratureConfig::default();
    let ref_point = (FamilySpec::Cosine, reference);
    let rows: Vec<Result<String>> = sequence
        .par_iter()
        .map(|&theta| {
            let point = (FamilySpec::Cosine, theta);
            let levy = metrics::levy_distance(&point, &ref_point)?;
            let hell = metrics::hellinger(&point, &ref_point, &cfg)?;
            let count = oscillations::oscillation_count(&point, &ref_point)?;
            Ok(format!(
                "{},{},{},{}",
                fmt_float(theta.value()),
                fmt_float(levy),
                fmt_float(hell),
                count
            ))
        })
        .collect();

    let mut csv = String::new();
    csv.push_str(WEAK_VS_STRONG_HEADER);
    csv.push('\n');
    for row in rows {
        csv.push_str(&row?);
        csv.push('\n');
    }
    Ok(csv)
}

/// Header of the figure-data CSV.
pub const FIGURE_DATA_HEADER: &str = "theta,x,density,cdf";

/// Long-format density and CDF table over an equispaced grid, one block per
/// parameter value. Values are exactly the model evaluations.
pub fn emit_figure_data(theta_list: &[Theta], grid_points: usize) -> Result<String> {
    if grid_points < 2 {
        return Err(crate::Error::Validation(
            "figure data needs at least 2 grid points".into(),
        ));
    }
    let family = FamilySpec::Cosine;
    let mut csv = String::new();
    csv.push_str(FIGURE_DATA_HEADER);
    csv.push('\n');
    for &theta in theta_list {
        for i in 0..grid_points {
            let x = i as f64 / (grid_points - 1) as f64;
            let d = model::density(&family, theta, x)?;
            let c = model::cdf(&family, theta, x)?;
            csv.push_str(&format!(
                "{},{},{},{}\n",
                fmt_float(theta.value()),
                fmt_float(x),
                fmt_float(d),
                fmt_float(c)
            ));
        }
    }
    Ok(csv)
}

/// Header of the escape-experiment CSV.
pub const ESCAPE_HEADER: &str = "M,theta_hat,log_lik,peak_theta,peak_log_lik,verdict";

/// Render an [`crate::mle::EscapeReport`] as CSV, one row per window. The
/// verdict is `peak-exceeds` / `peak-not-higher` per row, or `inconclusive`
/// when the peak search exhausted its bound.
pub fn escape_report_to_csv(report: &crate::mle::EscapeReport) -> String {
    let mut csv = String::new();
    csv.push_str(ESCAPE_HEADER);
    csv.push('\n');
    let (peak_theta, peak_ll) = match (&report.peak, report.peak_log_lik) {
        (Some(p), Some(ll)) => (p.theta.value(), ll),
        _ => (f64::NAN, f64::NAN),
    };
    for row in &report.rows {
        let verdict = if report.peak.is_none() {
            "inconclusive"
        } else if peak_ll > row.log_lik {
            "peak-exceeds"
        } else {
            "peak-not-higher"
        };
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_float(row.m),
            fmt_float(row.theta_hat),
            fmt_float(row.log_lik),
            fmt_float(peak_theta),
            fmt_float(peak_ll),
            verdict
        ));
    }
    csv
}
