//! Priors, likelihoods and the quadrature posterior over theta.

pub mod posterior;
pub mod prior;

pub use posterior::{
    build_posterior, build_posterior_with, log_likelihood, PosteriorDiagnostics, PosteriorGrid,
    TailPolicy,
};
pub use prior::{PhiKind, Prior, PriorSpec};

use crate::error::{Error, Result};
use crate::metrics;
use crate::model::{FamilySpec, Theta};
use crate::quad::QuadratureConfig;

/// For each radius, the largest KL divergence from `f_theta_star` within the
/// radius, maximized over a fine parameter grid. Tends to 0 with the radius;
/// this is the numerical content of the KL-support property.
pub fn kl_profile(
    theta_star: Theta,
    radii: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<(f64, f64)>> {
    if radii.iter().any(|r| *r < 0.0) {
        return Err(Error::Validation("radii must be nonnegative".into()));
    }
    let truth = (FamilySpec::Cosine, theta_star);
    let mut out = Vec::with_capacity(radii.len());
    for &r in radii {
        if r == 0.0 {
            out.push((0.0, 0.0));
            continue;
        }
        let lo = (theta_star.value() - r).max(0.0);
        let hi = theta_star.value() + r;
        let grid = 41usize;
        let mut worst = 0.0f64;
        for i in 0..=grid {
            let t = lo + (hi - lo) * i as f64 / grid as f64;
            let other = (FamilySpec::Cosine, Theta::new(t)?);
            worst = worst.max(metrics::kl_divergence(&truth, &other, cfg)?);
        }
        out.push((r, worst));
    }
    Ok(out)
}

/// Summability verdict of [`prior_diagnostics`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSummability {
    /// Partial sums of sqrt-masses flatten (Cauchy behavior).
    Flattening,
    /// Partial sums keep growing; the sqrt-summability condition fails.
    Diverging,
}

/// Partial sums of square-root bucket masses of a prior.
#[derive(Debug, Clone)]
pub struct PriorTailReport {
    /// `(K, S_K)` checkpoints at powers of two and at `k_max`.
    pub checkpoints: Vec<(usize, f64)>,
    pub final_sum: f64,
    /// sqrt-mass of the last bucket.
    pub final_increment: f64,
    /// Fitted decay exponent p of increments ~ k^-p over the last decade;
    /// None when increments vanish identically there (compact support).
    pub fitted_exponent: Option<f64>,
    pub verdict: TailSummability,
}

/// Accumulate `S_K = sum_k sqrt(Pi([2 k delta, 2 k delta + 2 delta]))` up to
/// `k_max` and classify the tail.
///
/// Priors with `sum sqrt` finite (the log-poly tail with beta > 0) flatten;
/// polynomial tails with alpha <= 1 produce increments ~ k^-(1+alpha)/2 and
/// diverge.
pub fn prior_diagnostics(
    prior: &PriorSpec,
    delta: f64,
    k_max: usize,
) -> Result<PriorTailReport> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::Validation("delta must be positive".into()));
    }
    if k_max == 0 {
        return Err(Error::Validation("k_max must be positive".into()));
    }
    let prior = Prior::new(prior.clone())?;

    let mut sum = 0.0f64;
    let mut checkpoints = Vec::new();
    let mut next_checkpoint = 1usize;
    let mut increments_window: Vec<(f64, f64)> = Vec::new(); // (ln k, ln increment)
    let window_start = k_max / 10;
    let mut final_increment = 0.0;

    for k in 0..=k_max {
        let lo = 2.0 * k as f64 * delta;
        let hi = lo + 2.0 * delta;
        let inc = prior.interval_mass(lo, hi).max(0.0).sqrt();
        sum += inc;
        final_increment = inc;
        if k >= window_start && k > 0 && inc > 0.0 {
            increments_window.push(((k as f64).ln(), inc.ln()));
        }
        if k + 1 == next_checkpoint || k == k_max {
            checkpoints.push((k, sum));
            next_checkpoint = next_checkpoint.saturating_mul(2);
        }
    }

    // Least-squares slope of ln(increment) against ln(k) over the last decade.
    let fitted_exponent = if increments_window.len() >= 8 {
        let n = increments_window.len() as f64;
        let mx: f64 = increments_window.iter().map(|p| p.0).sum::<f64>() / n;
        let my: f64 = increments_window.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = increments_window
            .iter()
            .map(|p| (p.0 - mx) * (p.1 - my))
            .sum();
        let sxx: f64 = increments_window.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        if sxx > 0.0 {
            Some(-(sxy / sxx))
        } else {
            None
        }
    } else {
        None
    };

    let verdict = match fitted_exponent {
        // increments ~ k^-p sum iff p > 1
        Some(p) if p <= 1.0 => TailSummability::Diverging,
        Some(_) => TailSummability::Flattening,
        // no surviving increments in the window: compact support, trivially flat
        None => TailSummability::Flattening,
    };

    Ok(PriorTailReport {
        checkpoints,
        final_sum: sum,
        final_increment,
        fitted_exponent,
        verdict,
    })
}
