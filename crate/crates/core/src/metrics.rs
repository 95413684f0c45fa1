//! Statistical distances between model densities and CDFs.
//!
//! Hellinger, Kullback-Leibler and total variation are computed by adaptive
//! quadrature on a common domain; the Levy metric compares CDFs through a
//! corridor bisection. The cosine cross-correlation has a closed form.

use crate::error::{Error, Result};
use crate::model::{self, FamilySpec, Theta};
use crate::quad::{self, QuadratureConfig};

/// A density identified by its family and parameter.
pub type ModelPoint = (FamilySpec, Theta);

/// KL divergences above this value are reported as effectively infinite.
pub const KL_EFFECTIVE_INFINITY: f64 = 1e6;

/// Number of grid points used by the Levy-metric corridor check.
const LEVY_GRID: usize = 10_000;

fn common_domain(a: &ModelPoint, b: &ModelPoint) -> Result<(f64, f64)> {
    let (alo, ahi) = a.0.support(a.1)?;
    let (blo, bhi) = b.0.support(b.1)?;
    Ok((alo.min(blo), ahi.max(bhi)))
}

fn max_frequency(a: &ModelPoint, b: &ModelPoint) -> f64 {
    a.0.oscillation_frequency(a.1).max(b.0.oscillation_frequency(b.1))
}

/// Support endpoints interior to the common domain; densities jump there.
fn support_splits(a: &ModelPoint, b: &ModelPoint, lo: f64, hi: f64) -> Vec<f64> {
    let mut splits = Vec::new();
    for point in [a, b] {
        if let Ok((slo, shi)) = point.0.support(point.1) {
            for e in [slo, shi] {
                if e > lo && e < hi {
                    splits.push(e);
                }
            }
        }
    }
    splits
}

/// Hellinger distance `[ integral (sqrt f - sqrt g)^2 ]^(1/2)`, in `[0, sqrt 2]`.
pub fn hellinger(a: &ModelPoint, b: &ModelPoint, cfg: &QuadratureConfig) -> Result<f64> {
    let (lo, hi) = common_domain(a, b)?;
    let splits = support_splits(a, b, lo, hi);
    let freq = max_frequency(a, b);
    let integrand = |x: f64| {
        let fa = model::density_clamped(&a.0, a.1, x);
        let fb = model::density_clamped(&b.0, b.1, x);
        let d = fa.sqrt() - fb.sqrt();
        d * d
    };
    let r = quad::integrate(integrand, lo, hi, freq, &splits, cfg)?;
    Ok(r.value.clamp(0.0, 2.0).sqrt())
}

/// Hellinger distance between two arbitrary densities on `[lo, hi]`.
///
/// Used where one side is not a model point, e.g. the posterior predictive.
pub fn hellinger_fn<F, G>(
    f: F,
    g: G,
    lo: f64,
    hi: f64,
    freq_hint: f64,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let integrand = |x: f64| {
        let d = f(x).max(0.0).sqrt() - g(x).max(0.0).sqrt();
        d * d
    };
    let r = quad::integrate(integrand, lo, hi, freq_hint, &[], cfg)?;
    Ok(r.value.clamp(0.0, 2.0).sqrt())
}

/// Kullback-Leibler divergence `integral ln(f/g) f`.
///
/// Zeros of `g` interior to the support of `f` are isolated for the cosine
/// families; panels are pre-split there and the logarithmic singularity is
/// integrable. Values above [`KL_EFFECTIVE_INFINITY`] and structural support
/// mismatches are reported as `f64::INFINITY`.
pub fn kl_divergence(truth: &ModelPoint, other: &ModelPoint, cfg: &QuadratureConfig) -> Result<f64> {
    let (tlo, thi) = truth.0.support(truth.1)?;
    let (olo, ohi) = other.0.support(other.1)?;
    // If the support of `truth` sticks out of the support of `other`, a set of
    // positive measure has ln(f/0) = infinity.
    if !matches!(other.0, FamilySpec::GaussMixture { .. }) && (tlo < olo - 1e-12 || thi > ohi + 1e-12)
    {
        return Ok(f64::INFINITY);
    }

    let mut splits: Vec<f64> = Vec::new();
    if let (FamilySpec::Cosine, theta) = (&other.0, other.1) {
        splits.extend(model::zero_set(theta));
    }
    splits.retain(|x| *x > tlo && *x < thi);

    let freq = max_frequency(truth, other);
    let integrand = |x: f64| {
        let f = model::density_clamped(&truth.0, truth.1, x);
        if f <= 0.0 {
            return 0.0; // f ln f -> 0 at zeros of the truth density
        }
        let g = model::density_clamped(&other.0, other.1, x).max(1e-300);
        f * (f.ln() - g.ln())
    };
    let r = quad::integrate(integrand, tlo, thi, freq, &splits, cfg)?;
    let v = r.value.max(0.0);
    if v > KL_EFFECTIVE_INFINITY {
        Ok(f64::INFINITY)
    } else {
        Ok(v)
    }
}

/// Total variation distance, half the L1 distance between the densities.
pub fn total_variation(a: &ModelPoint, b: &ModelPoint, cfg: &QuadratureConfig) -> Result<f64> {
    let (lo, hi) = common_domain(a, b)?;
    let splits = support_splits(a, b, lo, hi);
    let freq = max_frequency(a, b);
    let integrand = |x: f64| {
        (model::density_clamped(&a.0, a.1, x) - model::density_clamped(&b.0, b.1, x)).abs()
    };
    let r = quad::integrate(integrand, lo, hi, freq, &splits, cfg)?;
    Ok((0.5 * r.value).clamp(0.0, 1.0))
}

/// One-dimensional Levy metric
/// `inf { delta : F(x - delta) - delta <= G(x) <= F(x + delta) + delta  for all x }`,
/// computed by bisection on delta over a fixed evaluation grid.
///
/// On the real line this metrizes weak convergence exactly as the
/// Levy-Prokhorov metric does; it is used here as its computable surrogate.
pub fn levy_distance(a: &ModelPoint, b: &ModelPoint) -> Result<f64> {
    let (lo, hi) = common_domain(a, b)?;
    let fa = |x: f64| model::cdf_clamped(&a.0, a.1, x);
    let fb = |x: f64| model::cdf_clamped(&b.0, b.1, x);

    let span = (hi - lo).max(1e-12);
    let grid: Vec<f64> = (0..=LEVY_GRID)
        .map(|i| lo + span * i as f64 / LEVY_GRID as f64)
        .collect();

    // The corridor condition is monotone in delta, checked symmetrically in
    // both orders so that levy(a, b) and levy(b, a) take identical branches.
    let ok = |delta: f64| -> bool {
        grid.iter().all(|&x| {
            fb(x) <= fa(x + delta) + delta
                && fa(x - delta) - delta <= fb(x)
                && fa(x) <= fb(x + delta) + delta
                && fb(x - delta) - delta <= fa(x)
        })
    };

    if ok(0.0) {
        return Ok(0.0);
    }
    let mut lo_d = 0.0f64;
    let mut hi_d = 1.0f64;
    for _ in 0..60 {
        let mid = 0.5 * (lo_d + hi_d);
        if ok(mid) {
            hi_d = mid;
        } else {
            lo_d = mid;
        }
    }
    Ok(0.5 * (lo_d + hi_d))
}

/// Cross-correlation `integral_0^1 f_theta f_theta_star` of two cosine
/// densities, by its closed form; always at most 1.9.
pub fn cosine_cross_correlation(theta: Theta, theta_star: Theta) -> f64 {
    let t = theta.value();
    let s = theta_star.value();
    let num = 1.0 + model::sinc(t) + model::sinc(s)
        + 0.5 * (model::sinc(t - s) + model::sinc(t + s));
    let den = (1.0 + model::sinc(t)) * (1.0 + model::sinc(s));
    num / den
}

/// Numerical floor of `theta -> 1 + sin(theta)/theta`; strictly positive.
///
/// This is the constant that keeps every cosine-family normalizer away from
/// zero. Scans `[0, hi]` densely and polishes the minimum by golden section.
pub fn sinc_floor(hi: f64) -> f64 {
    let n = (hi * 100.0).ceil().max(1000.0) as usize;
    let mut best = f64::INFINITY;
    let mut best_t = 0.0;
    for i in 0..=n {
        let t = hi * i as f64 / n as f64;
        let v = 1.0 + model::sinc(t);
        if v < best {
            best = v;
            best_t = t;
        }
    }
    let step = hi / n as f64;
    let (mut a, mut b) = ((best_t - step).max(0.0), (best_t + step).min(hi));
    // golden-section minimization
    let inv_phi = 0.618_033_988_749_894_8;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    for _ in 0..200 {
        let fc = 1.0 + model::sinc(c);
        let fd = 1.0 + model::sinc(d);
        if fc < fd {
            b = d;
        } else {
            a = c;
        }
        c = b - inv_phi * (b - a);
        d = a + inv_phi * (b - a);
        if b - a < 1e-12 {
            break;
        }
    }
    1.0 + model::sinc(0.5 * (a + b))
}

/// Validation helper: quadrature of the cross-correlation product, used to
/// cross-check the closed form.
pub fn cosine_cross_correlation_quadrature(
    theta: Theta,
    theta_star: Theta,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let a = (FamilySpec::Cosine, theta);
    let b = (FamilySpec::Cosine, theta_star);
    let freq = theta.value() + theta_star.value();
    let integrand = |x: f64| {
        model::density_clamped(&a.0, a.1, x) * model::density_clamped(&b.0, b.1, x)
    };
    let r = quad::integrate(integrand, 0.0, 1.0, freq, &[], cfg)?;
    Ok(r.value)
}

/// Convenience wrapper selecting a metric by name; used by the CLI.
pub fn by_name(
    kind: &str,
    a: &ModelPoint,
    b: &ModelPoint,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    match kind {
        "hellinger" => hellinger(a, b, cfg),
        "kl" => kl_divergence(a, b, cfg),
        "tv" | "total-variation" => total_variation(a, b, cfg),
        "levy" => levy_distance(a, b),
        "cross-correlation" => match (&a.0, &b.0) {
            (FamilySpec::Cosine, FamilySpec::Cosine) => {
                Ok(cosine_cross_correlation(a.1, b.1))
            }
            _ => Err(Error::Validation(
                "cross-correlation is defined for the cosine family".into(),
            )),
        },
        other => Err(Error::Validation(format!("unknown metric kind '{other}'"))),
    }
}
