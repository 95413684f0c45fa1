//! C ABI for the oscibayes numerical laboratory.
//!
//! Conventions:
//! - Handles (`OscbFamily`, `OscbPosterior`) are opaque pointers created and
//!   released by the paired `_new`/`_free` functions; a null handle is never
//!   returned on success.
//! - Every fallible function returns an [`OscbStatus`] and writes its result
//!   through an out pointer, which is left untouched on failure.
//! - All functions are thread-safe; handles are immutable after creation and
//!   may be shared across threads.

use oscibayes::inference::{build_posterior, PosteriorGrid, PriorSpec};
use oscibayes::metrics;
use oscibayes::mle;
use oscibayes::model::{self, FamilySpec, SampleSet, Theta};
use oscibayes::oscillations;
use oscibayes::quad::QuadratureConfig;
use oscibayes::Error;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscbStatus {
    /// Success.
    Ok = 0,
    /// A search finished without finding a qualifying result.
    NotFound = 1,
    /// Invalid parameters (bad family constants, out-of-support points, ...).
    Validation = 2,
    /// Quadrature non-convergence or a degenerate posterior.
    Numerical = 3,
    /// A required pointer argument was null.
    NullArgument = 4,
}

fn status_of(err: &Error) -> OscbStatus {
    match err {
        Error::Validation(_) | Error::Domain(_) | Error::Config(_) => OscbStatus::Validation,
        _ => OscbStatus::Numerical,
    }
}

/// Opaque family handle.
pub struct OscbFamily {
    inner: FamilySpec,
}

/// Opaque posterior handle.
pub struct OscbPosterior {
    inner: PosteriorGrid,
}

/// Prior selector for `oscb_posterior_build`. `p1`/`p2` hold the two
/// hyperparameters in declaration order; unused slots are ignored.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscbPrior {
    /// Uniform on [p1, p2].
    TruncatedUniform = 0,
    /// Rate p1.
    Exponential = 1,
    /// Tail exponent p1, scale p2.
    ParetoTail = 2,
    /// Tail log-power p1, scale p2.
    LogPolyTail = 3,
}

fn prior_spec(kind: OscbPrior, p1: f64, p2: f64) -> PriorSpec {
    match kind {
        OscbPrior::TruncatedUniform => PriorSpec::TruncatedUniform { a: p1, b: p2 },
        OscbPrior::Exponential => PriorSpec::Exponential { rate: p1 },
        OscbPrior::ParetoTail => PriorSpec::ParetoTail {
            alpha: p1,
            scale: p2,
        },
        OscbPrior::LogPolyTail => PriorSpec::LogPolyTail {
            beta: p1,
            scale: p2,
        },
    }
}

/// The cosine family on [0, 1].
#[no_mangle]
pub extern "C" fn oscb_family_cosine() -> *mut OscbFamily {
    Box::into_raw(Box::new(OscbFamily {
        inner: FamilySpec::Cosine,
    }))
}

/// The extended cosine family on [0, lambda]; returns null when the
/// structural constants are invalid (lambda outside [1, 2], mu outside
/// (0, 1/lambda]).
#[no_mangle]
pub extern "C" fn oscb_family_extended_cosine(lambda: f64, mu: f64) -> *mut OscbFamily {
    match FamilySpec::extended_cosine(lambda, mu) {
        Ok(inner) => Box::into_raw(Box::new(OscbFamily { inner })),
        Err(_) => std::ptr::null_mut(),
    }
}

/// The uniform family on [0, theta].
#[no_mangle]
pub extern "C" fn oscb_family_uniform_scale() -> *mut OscbFamily {
    Box::into_raw(Box::new(OscbFamily {
        inner: FamilySpec::UniformScale,
    }))
}

/// Release a family handle. Null is ignored.
///
/// # Safety
/// `family` must be a pointer returned by one of the `oscb_family_*`
/// constructors and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn oscb_family_free(family: *mut OscbFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

unsafe fn family_ref<'a>(family: *const OscbFamily) -> Option<&'a FamilySpec> {
    family.as_ref().map(|f| &f.inner)
}

unsafe fn write_out(out: *mut f64, value: f64) -> OscbStatus {
    if out.is_null() {
        return OscbStatus::NullArgument;
    }
    *out = value;
    OscbStatus::Ok
}

/// Density of the family at `x`.
///
/// # Safety
/// `family` must be a live family handle; `out` must point to writable
/// memory for one f64.
#[no_mangle]
pub unsafe extern "C" fn oscb_density(
    family: *const OscbFamily,
    theta: f64,
    x: f64,
    out: *mut f64,
) -> OscbStatus {
    let Some(fam) = family_ref(family) else {
        return OscbStatus::NullArgument;
    };
    let theta = match Theta::new(theta) {
        Ok(t) => t,
        Err(e) => return status_of(&e),
    };
    match model::density(fam, theta, x) {
        Ok(v) => write_out(out, v),
        Err(e) => status_of(&e),
    }
}

/// CDF of the family at `x`.
///
/// # Safety
/// As for [`oscb_density`].
#[no_mangle]
pub unsafe extern "C" fn oscb_cdf(
    family: *const OscbFamily,
    theta: f64,
    x: f64,
    out: *mut f64,
) -> OscbStatus {
    let Some(fam) = family_ref(family) else {
        return OscbStatus::NullArgument;
    };
    let theta = match Theta::new(theta) {
        Ok(t) => t,
        Err(e) => return status_of(&e),
    };
    match model::cdf(fam, theta, x) {
        Ok(v) => write_out(out, v),
        Err(e) => status_of(&e),
    }
}

/// Maximum of the cosine density over [0, 1]: 2 theta / (theta + sin theta).
///
/// # Safety
/// `out` must point to writable memory for one f64.
#[no_mangle]
pub unsafe extern "C" fn oscb_sup_density(theta: f64, out: *mut f64) -> OscbStatus {
    match Theta::new(theta) {
        Ok(t) => write_out(out, model::sup_density(t)),
        Err(e) => status_of(&e),
    }
}

/// Fill `buf` with `n` deterministic draws from the family (inverse-CDF
/// sampling of the stream identified by `seed`).
///
/// # Safety
/// `family` must be a live handle and `buf` must point to at least `n`
/// writable f64 slots.
#[no_mangle]
pub unsafe extern "C" fn oscb_sample(
    family: *const OscbFamily,
    theta: f64,
    n: usize,
    seed: u64,
    buf: *mut f64,
) -> OscbStatus {
    let Some(fam) = family_ref(family) else {
        return OscbStatus::NullArgument;
    };
    if buf.is_null() && n > 0 {
        return OscbStatus::NullArgument;
    }
    let theta = match Theta::new(theta) {
        Ok(t) => t,
        Err(e) => return status_of(&e),
    };
    match model::sample(fam, theta, n, seed) {
        Ok(sample) => {
            let slice = std::slice::from_raw_parts_mut(buf, n);
            slice.copy_from_slice(sample.points());
            OscbStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

unsafe fn metric_call(
    family_a: *const OscbFamily,
    theta_a: f64,
    family_b: *const OscbFamily,
    theta_b: f64,
    out: *mut f64,
    f: impl Fn(
        &(FamilySpec, Theta),
        &(FamilySpec, Theta),
        &QuadratureConfig,
    ) -> oscibayes::Result<f64>,
) -> OscbStatus {
    let (Some(fa), Some(fb)) = (family_ref(family_a), family_ref(family_b)) else {
        return OscbStatus::NullArgument;
    };
    let (ta, tb) = match (Theta::new(theta_a), Theta::new(theta_b)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return status_of(&e),
    };
    match f(
        &(fa.clone(), ta),
        &(fb.clone(), tb),
        &QuadratureConfig::default(),
    ) {
        Ok(v) => write_out(out, v),
        Err(e) => status_of(&e),
    }
}

/// Hellinger distance between two model points.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oscb_hellinger(
    family_a: *const OscbFamily,
    theta_a: f64,
    family_b: *const OscbFamily,
    theta_b: f64,
    out: *mut f64,
) -> OscbStatus {
    metric_call(family_a, theta_a, family_b, theta_b, out, |a, b, c| {
        metrics::hellinger(a, b, c)
    })
}

/// Kullback-Leibler divergence from the first model point to the second.
///
/// # Safety
/// As for [`oscb_hellinger`].
#[no_mangle]
pub unsafe extern "C" fn oscb_kl_divergence(
    family_a: *const OscbFamily,
    theta_a: f64,
    family_b: *const OscbFamily,
    theta_b: f64,
    out: *mut f64,
) -> OscbStatus {
    metric_call(family_a, theta_a, family_b, theta_b, out, |a, b, c| {
        metrics::kl_divergence(a, b, c)
    })
}

/// Total variation distance between two model points.
///
/// # Safety
/// As for [`oscb_hellinger`].
#[no_mangle]
pub unsafe extern "C" fn oscb_total_variation(
    family_a: *const OscbFamily,
    theta_a: f64,
    family_b: *const OscbFamily,
    theta_b: f64,
    out: *mut f64,
) -> OscbStatus {
    metric_call(family_a, theta_a, family_b, theta_b, out, |a, b, c| {
        metrics::total_variation(a, b, c)
    })
}

/// One-dimensional Levy metric between the two model CDFs.
///
/// # Safety
/// As for [`oscb_hellinger`].
#[no_mangle]
pub unsafe extern "C" fn oscb_levy_distance(
    family_a: *const OscbFamily,
    theta_a: f64,
    family_b: *const OscbFamily,
    theta_b: f64,
    out: *mut f64,
) -> OscbStatus {
    metric_call(family_a, theta_a, family_b, theta_b, out, |a, b, _| {
        metrics::levy_distance(a, b)
    })
}

/// Closed-form cross-correlation of two cosine densities.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oscb_cross_correlation(
    theta: f64,
    theta_star: f64,
    out: *mut f64,
) -> OscbStatus {
    match (Theta::new(theta), Theta::new(theta_star)) {
        (Ok(a), Ok(b)) => write_out(out, metrics::cosine_cross_correlation(a, b)),
        (Err(e), _) | (_, Err(e)) => status_of(&e),
    }
}

/// Number of intervals in the minimal decomposition of `{ f_a > f_b }`.
///
/// # Safety
/// Both handles must be live; `out` must point to a writable u64.
#[no_mangle]
pub unsafe extern "C" fn oscb_oscillation_count(
    family_a: *const OscbFamily,
    theta_a: f64,
    family_b: *const OscbFamily,
    theta_b: f64,
    out: *mut u64,
) -> OscbStatus {
    let (Some(fa), Some(fb)) = (family_ref(family_a), family_ref(family_b)) else {
        return OscbStatus::NullArgument;
    };
    if out.is_null() {
        return OscbStatus::NullArgument;
    }
    let (ta, tb) = match (Theta::new(theta_a), Theta::new(theta_b)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return status_of(&e),
    };
    match oscillations::oscillation_count(&(fa.clone(), ta), &(fb.clone(), tb)) {
        Ok(c) => {
            *out = c as u64;
            OscbStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Build a posterior over theta from `n` observations.
///
/// # Safety
/// `family` must be live, `points` must hold `n` readable f64 values, and
/// `out` must point to a writable handle slot. On success the caller owns the
/// returned posterior and must release it with [`oscb_posterior_free`].
#[no_mangle]
pub unsafe extern "C" fn oscb_posterior_build(
    family: *const OscbFamily,
    prior: OscbPrior,
    p1: f64,
    p2: f64,
    points: *const f64,
    n: usize,
    theta_max: f64,
    out: *mut *mut OscbPosterior,
) -> OscbStatus {
    let Some(fam) = family_ref(family) else {
        return OscbStatus::NullArgument;
    };
    if out.is_null() || (points.is_null() && n > 0) {
        return OscbStatus::NullArgument;
    }
    let points = std::slice::from_raw_parts(points, n).to_vec();
    // Metadata theta covering every point, so support validation passes for
    // families whose support depends on the parameter.
    let cover = points.iter().cloned().fold(1.0f64, f64::max);
    let theta_star = match Theta::new(cover) {
        Ok(t) => t,
        Err(e) => return status_of(&e),
    };
    let sample = match SampleSet::from_points(points, fam.clone(), theta_star, 0) {
        Ok(s) => s,
        Err(e) => return status_of(&e),
    };
    match build_posterior(
        &prior_spec(prior, p1, p2),
        fam,
        &sample,
        &QuadratureConfig::default(),
        theta_max,
    ) {
        Ok(grid) => {
            *out = Box::into_raw(Box::new(OscbPosterior { inner: grid }));
            OscbStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Posterior mass of `[lo, hi]`.
///
/// # Safety
/// `posterior` must be a live posterior handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oscb_posterior_mass(
    posterior: *const OscbPosterior,
    lo: f64,
    hi: f64,
    out: *mut f64,
) -> OscbStatus {
    let Some(p) = posterior.as_ref() else {
        return OscbStatus::NullArgument;
    };
    match p.inner.mass(lo, hi) {
        Ok(v) => write_out(out, v),
        Err(e) => status_of(&e),
    }
}

/// Posterior mean of theta.
///
/// # Safety
/// As for [`oscb_posterior_mass`].
#[no_mangle]
pub unsafe extern "C" fn oscb_posterior_mean(
    posterior: *const OscbPosterior,
    out: *mut f64,
) -> OscbStatus {
    let Some(p) = posterior.as_ref() else {
        return OscbStatus::NullArgument;
    };
    write_out(out, p.inner.mean())
}

/// Posterior predictive density at `x`.
///
/// # Safety
/// As for [`oscb_posterior_mass`].
#[no_mangle]
pub unsafe extern "C" fn oscb_posterior_predictive(
    posterior: *const OscbPosterior,
    x: f64,
    out: *mut f64,
) -> OscbStatus {
    let Some(p) = posterior.as_ref() else {
        return OscbStatus::NullArgument;
    };
    write_out(out, p.inner.predictive(x))
}

/// Log of the evidence integral over `[0, theta_max]`.
///
/// # Safety
/// As for [`oscb_posterior_mass`].
#[no_mangle]
pub unsafe extern "C" fn oscb_posterior_log_normalizer(
    posterior: *const OscbPosterior,
    out: *mut f64,
) -> OscbStatus {
    let Some(p) = posterior.as_ref() else {
        return OscbStatus::NullArgument;
    };
    write_out(out, p.inner.log_normalizer())
}

/// Release a posterior handle. Null is ignored.
///
/// # Safety
/// `posterior` must come from [`oscb_posterior_build`] and must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn oscb_posterior_free(posterior: *mut OscbPosterior) {
    if !posterior.is_null() {
        drop(Box::from_raw(posterior));
    }
}

/// Restricted MLE of the cosine family over `[0, m]` for the given points.
///
/// # Safety
/// `points` must hold `n` readable f64 values in [0, 1]; both out pointers
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn oscb_restricted_mle(
    points: *const f64,
    n: usize,
    m: f64,
    out_theta: *mut f64,
    out_log_lik: *mut f64,
) -> OscbStatus {
    if points.is_null() || out_theta.is_null() || out_log_lik.is_null() {
        return OscbStatus::NullArgument;
    }
    let points = std::slice::from_raw_parts(points, n).to_vec();
    let sample = match SampleSet::from_points(points, FamilySpec::Cosine, Theta::new(0.0).unwrap(), 0)
    {
        Ok(s) => s,
        Err(e) => return status_of(&e),
    };
    match mle::restricted_mle(&FamilySpec::Cosine, &sample, m) {
        Ok((theta, ll)) => {
            *out_theta = theta.value();
            *out_log_lik = ll;
            OscbStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Integer scan for a simultaneous likelihood peak; returns `NotFound` (with
/// the best candidate written through the out pointers) when no integer below
/// `scan_bound` qualifies.
///
/// # Safety
/// As for [`oscb_restricted_mle`].
#[no_mangle]
pub unsafe extern "C" fn oscb_peak_search(
    points: *const f64,
    n: usize,
    delta: f64,
    scan_bound: u64,
    out_theta: *mut f64,
    out_min_density: *mut f64,
) -> OscbStatus {
    if points.is_null() || out_theta.is_null() || out_min_density.is_null() {
        return OscbStatus::NullArgument;
    }
    let points = std::slice::from_raw_parts(points, n).to_vec();
    let sample = match SampleSet::from_points(points, FamilySpec::Cosine, Theta::new(0.0).unwrap(), 0)
    {
        Ok(s) => s,
        Err(e) => return status_of(&e),
    };
    match mle::dirichlet_peak_search(&sample, delta, scan_bound) {
        Ok(mle::PeakSearch::Found(r)) => {
            *out_theta = r.theta.value();
            *out_min_density = r.min_density;
            OscbStatus::Ok
        }
        Ok(mle::PeakSearch::NotFound { best }) => {
            *out_theta = best.theta.value();
            *out_min_density = best.min_density;
            OscbStatus::NotFound
        }
        Err(e) => status_of(&e),
    }
}

/// `integral f_theta ln f_theta` over [0, 1] for the cosine family.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oscb_entropy_diagnostic(theta: f64, out: *mut f64) -> OscbStatus {
    let theta = match Theta::new(theta) {
        Ok(t) => t,
        Err(e) => return status_of(&e),
    };
    match mle::entropy_diagnostic(theta, &QuadratureConfig::default()) {
        Ok(v) => write_out(out, v),
        Err(e) => status_of(&e),
    }
}
