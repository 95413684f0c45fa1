//! Restricted maximum likelihood and the likelihood-peak construction.
//!
//! The cosine likelihood keeps forming peaks of height close to `2^n` as the
//! parameter grows: an integer `theta` whose phases `theta x_i` all sit near
//! multiples of `2 pi` pushes every observation onto a density crest. The
//! peak search scans natural numbers for such a simultaneous rational
//! approximation; the restricted MLE maximizes over a compact window `[0, M]`
//! and cannot reach those peaks.

use crate::error::{Error, Result};
use crate::inference::log_likelihood;
use crate::model::{FamilySpec, SampleSet, Theta};
use crate::quad::{self, QuadratureConfig};

/// A likelihood peak located by the integer scan.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakSearchResult {
    pub theta: Theta,
    pub per_point_densities: Vec<f64>,
    pub min_density: f64,
    pub scan_bound: u64,
    /// Integers examined before acceptance (or the full bound when not found).
    pub iterations: u64,
}

/// Outcome of [`dirichlet_peak_search`]: either a qualifying integer or the
/// best candidate seen below the scan bound.
#[derive(Debug, Clone, PartialEq)]
pub enum PeakSearch {
    Found(PeakSearchResult),
    /// No integer qualified; carries the best candidate by worst phase margin.
    NotFound { best: PeakSearchResult },
}

impl PeakSearch {
    pub fn found(&self) -> Option<&PeakSearchResult> {
        match self {
            PeakSearch::Found(r) => Some(r),
            PeakSearch::NotFound { .. } => None,
        }
    }
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = 0.618_033_988_749_894_8;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Global maximizer of the log-likelihood over `[0, M]`.
///
/// Dense scan with step `(2 pi / max_i x_i) / 64` (so every oscillation of
/// the fastest likelihood factor is sampled), followed by golden-section
/// refinement to `|d theta| <= 1e-9`. Ties break toward the smaller theta.
pub fn restricted_mle(
    family: &FamilySpec,
    sample: &SampleSet,
    m: f64,
) -> Result<(Theta, f64)> {
    if sample.is_empty() {
        return Err(Error::Validation(
            "restricted MLE needs a nonempty sample".into(),
        ));
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::Validation(format!("M must be positive, got {m}")));
    }
    let x_max = sample.max_point();
    let step = if x_max > 0.0 {
        (2.0 * std::f64::consts::PI / x_max) / 64.0
    } else {
        m / 100_000.0
    };
    let steps = (m / step).ceil() as usize;
    let ll = |t: f64| log_likelihood(family, Theta::new(t).expect("scan stays in [0, M]"), sample);

    let mut best_t = 0.0;
    let mut best_v = ll(0.0);
    for i in 1..=steps {
        let t = (i as f64 * step).min(m);
        let v = ll(t);
        if v > best_v {
            best_v = v;
            best_t = t;
        }
    }
    let lo = (best_t - step).max(0.0);
    let hi = (best_t + step).min(m);
    let refined = golden_max(ll, lo, hi, 1e-9);
    let refined_v = ll(refined);
    let (theta_hat, value) = if refined_v > best_v {
        (refined, refined_v)
    } else {
        (best_t, best_v)
    };
    Ok((Theta::new(theta_hat)?, value))
}

/// Largest phase distance from a multiple of `2 pi` that still keeps
/// `cos(phase) >= 1 - delta/2`.
pub fn phase_tolerance(delta: f64) -> f64 {
    (1.0 - delta / 2.0).acos()
}

/// Distance of `theta * x` to the nearest multiple of `2 pi`.
fn phase_distance(theta: f64, x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let p = (theta * x).rem_euclid(two_pi);
    p.min(two_pi - p)
}

/// The acceptance predicate of the peak search, exposed for direct testing:
/// `|sin(theta)/theta| < delta/4` and every phase within
/// [`phase_tolerance`]`(delta)` of a multiple of `2 pi`. Returns the
/// per-point densities on success.
pub fn peak_candidate_accepts(theta: f64, points: &[f64], delta: f64) -> Option<Vec<f64>> {
    if (theta.sin() / theta).abs() >= delta / 4.0 {
        return None;
    }
    let eps = phase_tolerance(delta);
    if points.iter().any(|&x| phase_distance(theta, x) >= eps) {
        return None;
    }
    let th = Theta::new(theta).ok()?;
    Some(
        points
            .iter()
            .map(|&x| crate::model::density_clamped(&FamilySpec::Cosine, th, x))
            .collect(),
    )
}

/// Scan integer parameters for a simultaneous phase alignment of the sample.
///
/// Accepts the first integer in `[start, scan_bound]` passing
/// [`peak_candidate_accepts`]; the accepted peak has `min_density >= 2 - delta`.
pub fn dirichlet_peak_search_from(
    sample: &SampleSet,
    delta: f64,
    start: u64,
    scan_bound: u64,
) -> Result<PeakSearch> {
    if sample.is_empty() {
        return Err(Error::Validation("peak search needs a nonempty sample".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Validation(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    if scan_bound == 0 || start == 0 || start > scan_bound {
        return Err(Error::Validation(format!(
            "scan range [{start}, {scan_bound}] is empty or zero-based"
        )));
    }
    let points = sample.points();
    let eps = phase_tolerance(delta);

    let mut best_margin = f64::NEG_INFINITY;
    let mut best_theta = start;
    for k in start..=scan_bound {
        let theta = k as f64;
        if (theta.sin() / theta).abs() >= delta / 4.0 {
            continue;
        }
        let worst = points
            .iter()
            .map(|&x| phase_distance(theta, x))
            .fold(0.0f64, f64::max);
        if worst < eps {
            let th = Theta::new(theta)?;
            let densities: Vec<f64> = points
                .iter()
                .map(|&x| crate::model::density_clamped(&FamilySpec::Cosine, th, x))
                .collect();
            let min_density = densities.iter().cloned().fold(f64::INFINITY, f64::min);
            return Ok(PeakSearch::Found(PeakSearchResult {
                theta: th,
                per_point_densities: densities,
                min_density,
                scan_bound,
                iterations: k - start + 1,
            }));
        }
        if eps - worst > best_margin {
            best_margin = eps - worst;
            best_theta = k;
        }
    }

    let th = Theta::new(best_theta as f64)?;
    let densities: Vec<f64> = points
        .iter()
        .map(|&x| crate::model::density_clamped(&FamilySpec::Cosine, th, x))
        .collect();
    let min_density = densities.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(PeakSearch::NotFound {
        best: PeakSearchResult {
            theta: th,
            per_point_densities: densities,
            min_density,
            scan_bound,
            iterations: scan_bound - start + 1,
        },
    })
}

/// Scan integers `1..=scan_bound`. See [`dirichlet_peak_search_from`].
pub fn dirichlet_peak_search(sample: &SampleSet, delta: f64, scan_bound: u64) -> Result<PeakSearch> {
    dirichlet_peak_search_from(sample, delta, 1, scan_bound)
}

/// Real-valued local refinement around an accepted integer peak; returns the
/// polished `(theta, log_likelihood)`.
pub fn refine_peak(sample: &SampleSet, theta0: f64) -> (f64, f64) {
    let ll =
        |t: f64| log_likelihood(&FamilySpec::Cosine, Theta::new(t.max(0.0)).unwrap(), sample);
    let t = golden_max(ll, (theta0 - 0.5).max(0.0), theta0 + 0.5, 1e-10);
    (t, ll(t))
}

/// Default integer scan bound. The alignment construction needs integers up
/// to roughly `(2 pi / eps)^n`, so samples beyond n = 6 are rejected unless
/// forced.
pub const DEFAULT_SCAN_BOUND: u64 = 10_000_000;
pub const MAX_PEAK_SEARCH_N: usize = 6;

/// One row of the escape experiment: the restricted MLE on `[0, M]`.
#[derive(Debug, Clone, Copy)]
pub struct EscapeRow {
    pub m: f64,
    pub theta_hat: f64,
    pub log_lik: f64,
}

/// Report of [`escape_experiment`].
#[derive(Debug, Clone)]
pub struct EscapeReport {
    pub rows: Vec<EscapeRow>,
    /// Peak found beyond the largest window, when the scan succeeded.
    pub peak: Option<PeakSearchResult>,
    pub peak_log_lik: Option<f64>,
    /// Real-valued polish of the integer peak: `(theta, log_likelihood)`.
    pub refined_peak: Option<(f64, f64)>,
    /// Whether the peak value exceeds every restricted value; `None` marks an
    /// inconclusive run (peak search exhausted its bound).
    pub peak_exceeds_all: Option<bool>,
    /// Whether every restricted per-observation mean log-likelihood stays
    /// below `ln 1.9 + margin`.
    pub mean_log_ratio_ok: bool,
    pub margin: f64,
}

/// Compare restricted MLE values on a list of windows against a likelihood
/// peak beyond all of them.
///
/// The sample is drawn from the cosine model at `theta_star`. For peak-search
/// feasibility `n` must stay at or below [`MAX_PEAK_SEARCH_N`] unless `force`
/// is set.
#[allow(clippy::too_many_arguments)]
pub fn escape_experiment(
    theta_star: Theta,
    n: usize,
    m_list: &[f64],
    delta: f64,
    seed: u64,
    scan_bound: u64,
    margin: f64,
    force: bool,
) -> Result<EscapeReport> {
    if m_list.is_empty() {
        return Err(Error::Validation("M list must be nonempty".into()));
    }
    if n == 0 {
        return Err(Error::Validation("escape experiment needs n >= 1".into()));
    }
    if n > MAX_PEAK_SEARCH_N && !force {
        return Err(Error::Validation(format!(
            "n = {n} exceeds the feasible peak-search size {MAX_PEAK_SEARCH_N} \
             (theta grows like (2 pi / eps)^n); pass force to override"
        )));
    }
    let family = FamilySpec::Cosine;
    let sample = crate::model::sample(&family, theta_star, n, seed)?;

    let mut rows = Vec::with_capacity(m_list.len());
    for &m in m_list {
        let (theta_hat, log_lik) = restricted_mle(&family, &sample, m)?;
        rows.push(EscapeRow {
            m,
            theta_hat: theta_hat.value(),
            log_lik,
        });
    }

    let m_max = m_list.iter().cloned().fold(0.0f64, f64::max);
    let start = (m_max.floor() as u64).saturating_add(1);
    let search = if start <= scan_bound {
        dirichlet_peak_search_from(&sample, delta, start, scan_bound)?
    } else {
        PeakSearch::NotFound {
            best: PeakSearchResult {
                theta: Theta::new(start as f64)?,
                per_point_densities: vec![],
                min_density: 0.0,
                scan_bound,
                iterations: 0,
            },
        }
    };

    let (peak, peak_log_lik, refined_peak, peak_exceeds_all) = match &search {
        PeakSearch::Found(r) => {
            let ll = log_likelihood(&family, r.theta, &sample);
            let exceeds = rows.iter().all(|row| ll > row.log_lik);
            let refined = refine_peak(&sample, r.theta.value());
            (Some(r.clone()), Some(ll), Some(refined), Some(exceeds))
        }
        PeakSearch::NotFound { .. } => (None, None, None, None),
    };

    let ceiling = 1.9f64.ln() + margin;
    let mean_log_ratio_ok = rows.iter().all(|row| row.log_lik / (n as f64) < ceiling);

    Ok(EscapeReport {
        rows,
        peak,
        peak_log_lik,
        refined_peak,
        peak_exceeds_all,
        mean_log_ratio_ok,
        margin,
    })
}

/// `integral_0^1 f_theta ln f_theta`, which stays strictly below `ln 2` for
/// every parameter; the diagnostic behind the failure of the classical
/// tail-domination assumption.
pub fn entropy_diagnostic(theta_star: Theta, cfg: &QuadratureConfig) -> Result<f64> {
    let family = FamilySpec::Cosine;
    let freq = theta_star.value();
    let zeros = crate::model::zero_set(theta_star);
    let integrand = |x: f64| {
        let f = crate::model::density_clamped(&family, theta_star, x);
        if f <= 0.0 {
            0.0
        } else {
            f * f.ln()
        }
    };
    let r = quad::integrate(integrand, 0.0, 1.0, freq, &zeros, cfg)?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model;
    use crate::rng;

    fn th(v: f64) -> Theta {
        Theta::new(v).unwrap()
    }

    fn point_sample(points: Vec<f64>) -> SampleSet {
        SampleSet::from_points(points, FamilySpec::Cosine, th(0.0), 0).unwrap()
    }

    #[test]
    fn restricted_mle_single_point_grid_oracle() {
        let sample = point_sample(vec![0.5]);
        let (theta_hat, value) = restricted_mle(&FamilySpec::Cosine, &sample, 5.0).unwrap();

        // 1e7-point grid oracle over [0, 5]
        let n = 10_000_000usize;
        let mut best = f64::NEG_INFINITY;
        let mut best_t = 0.0;
        for i in 0..=n {
            let t = 5.0 * i as f64 / n as f64;
            let v = log_likelihood(&FamilySpec::Cosine, th(t), &sample);
            if v > best {
                best = v;
                best_t = t;
            }
        }
        assert!((value - best).abs() < 1e-6, "value {value} vs oracle {best}");
        assert!((theta_hat.value() - best_t).abs() < 1e-3);
        // the best on [0, 5] stays under the asymptotic crest value 2
        assert!(value.exp() < 2.0);
    }

    #[test]
    fn restricted_mle_window_15_beats_two() {
        // near 4 pi the denominator dips (sin theta < 0) and the single-point
        // density exceeds 2
        let sample = point_sample(vec![0.5]);
        let (theta_hat, value) = restricted_mle(&FamilySpec::Cosine, &sample, 15.0).unwrap();
        assert!(
            theta_hat.value() > 11.5 && theta_hat.value() < 12.4,
            "theta_hat {theta_hat}"
        );
        assert!(value.exp() > 2.0, "density {}", value.exp());
    }

    #[test]
    fn restricted_mle_dominates_random_probes() {
        let sample = model::sample(&FamilySpec::Cosine, th(0.0), 30, 9).unwrap();
        let (_, value) = restricted_mle(&FamilySpec::Cosine, &sample, 50.0).unwrap();
        for k in 0..1000u64 {
            let t = 50.0 * rng::uniform_draw(606, k);
            assert!(value >= log_likelihood(&FamilySpec::Cosine, th(t), &sample));
        }
        // finite-n trace of the 2^n ceiling: strictly below n ln 2
        assert!(value < 30.0 * std::f64::consts::LN_2);
    }

    #[test]
    fn peak_predicate_at_four_pi() {
        // The acceptance predicate itself, checked at the real value 4 pi
        // where the density is exactly 2.
        let densities = peak_candidate_accepts(4.0 * std::f64::consts::PI, &[0.5], 0.01).unwrap();
        assert!((densities[0] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn peak_search_two_irrational_points() {
        let sample = point_sample(vec![
            std::f64::consts::FRAC_1_PI,
            std::f64::consts::FRAC_1_SQRT_2,
        ]);
        let search = dirichlet_peak_search(&sample, 0.2, 10_000_000).unwrap();
        let r = search.found().expect("peak must exist below 1e7");
        assert!(r.min_density >= 1.8, "min density {}", r.min_density);
        // confirm by direct evaluation
        for (x, d) in sample.points().iter().zip(&r.per_point_densities) {
            let direct = model::density(&FamilySpec::Cosine, r.theta, *x).unwrap();
            assert!((direct - d).abs() < 1e-12);
            assert!(direct >= 1.8);
        }
    }

    #[test]
    fn peak_search_three_random_points() {
        let sample = model::sample(&FamilySpec::Cosine, th(0.0), 3, 1234).unwrap();
        let search = dirichlet_peak_search(&sample, 0.3, 100_000_000).unwrap();
        let r = search.found().expect("peak must exist below 1e8");
        assert!(r.min_density >= 1.7, "min density {}", r.min_density);
        let prod: f64 = r.per_point_densities.iter().product();
        assert!(prod >= (2.0f64 - 0.3).powi(3) - 1e-9);
    }

    #[test]
    fn peak_search_not_found_reports_best() {
        // scanning a tiny bound cannot align three points
        let sample = model::sample(&FamilySpec::Cosine, th(0.0), 3, 77).unwrap();
        let search = dirichlet_peak_search(&sample, 0.05, 40).unwrap();
        match search {
            PeakSearch::NotFound { best } => {
                assert!(best.theta.value() <= 40.0);
                assert_eq!(best.per_point_densities.len(), 3);
            }
            PeakSearch::Found(r) => panic!("unexpected peak at {:?}", r.theta),
        }
    }

    #[test]
    fn escape_experiment_example() {
        let report = escape_experiment(
            th(0.0),
            3,
            &[10.0, 50.0],
            0.3,
            7,
            DEFAULT_SCAN_BOUND,
            0.05,
            false,
        )
        .unwrap();
        let peak_ll = report.peak_log_lik.expect("peak search must succeed");
        assert!(peak_ll.exp() >= (1.7f64).powi(3), "peak product {}", peak_ll.exp());
        assert_eq!(report.peak_exceeds_all, Some(true));
        for row in &report.rows {
            assert!(peak_ll > row.log_lik);
        }
        // the real-valued polish can only improve on the integer peak
        let (refined_theta, refined_ll) = report.refined_peak.unwrap();
        assert!(refined_ll >= peak_ll - 1e-12);
        assert!((refined_theta - report.peak.unwrap().theta.value()).abs() <= 0.5);
    }

    #[test]
    fn escape_rejects_large_n() {
        let r = escape_experiment(
            th(0.0),
            7,
            &[10.0],
            0.3,
            1,
            DEFAULT_SCAN_BOUND,
            0.05,
            false,
        );
        assert!(r.is_err());
    }

    #[test]
    fn single_point_peak_dominates_restricted() {
        // At x = 0.5 the unrestricted crest value 2 (reached near 4 pi) beats
        // everything on [0, 5]; a 1e7-point grid oracle confirms the window max.
        let sample = point_sample(vec![0.5]);
        let (_, restricted) = restricted_mle(&FamilySpec::Cosine, &sample, 5.0).unwrap();
        let mut oracle = f64::NEG_INFINITY;
        for i in 0..=10_000_000usize {
            let t = 5.0 * i as f64 / 10_000_000.0;
            oracle = oracle.max(log_likelihood(&FamilySpec::Cosine, th(t), &sample));
        }
        assert!(oracle.exp() < 2.0, "window max {} not below 2", oracle.exp());
        assert!((restricted - oracle).abs() < 1e-6);
        let peak = peak_candidate_accepts(4.0 * std::f64::consts::PI, &[0.5], 0.01).unwrap();
        assert!(peak[0] >= restricted.exp());
    }

    #[test]
    fn entropy_examples() {
        let cfg = QuadratureConfig::default();
        assert!(entropy_diagnostic(th(0.0), &cfg).unwrap().abs() < 1e-12);

        // at theta = 2 pi the value is 1 - ln 2 by direct averaging over a period
        let v = entropy_diagnostic(th(2.0 * std::f64::consts::PI), &cfg).unwrap();
        assert!(v > 0.0 && v < std::f64::consts::LN_2);
        assert!((v - (1.0 - std::f64::consts::LN_2)).abs() < 1e-6, "got {v}");
    }

    #[test]
    fn equicontinuity_fitted_constant() {
        // max_x |f_theta - f_theta'| <= L |theta - theta'| with L bounded by
        // 2 sqrt(sup f) from the uniform 1-Lipschitz property of sqrt f.
        let sup_sqrt = (2.0f64 / crate::metrics::sinc_floor(1000.0)).sqrt();
        let l_bound = 2.0 * sup_sqrt;
        let mut fitted = 0.0f64;
        for k in 0..200u64 {
            let a = 100.0 * rng::uniform_draw(31415, 2 * k);
            let b = (a + 0.05 * rng::uniform_draw(31415, 2 * k + 1)).min(100.0);
            if (a - b).abs() < 1e-9 {
                continue;
            }
            let mut worst = 0.0f64;
            for i in 0..=2000 {
                let x = i as f64 / 2000.0;
                let fa = model::density_clamped(&FamilySpec::Cosine, th(a), x);
                let fb = model::density_clamped(&FamilySpec::Cosine, th(b), x);
                worst = worst.max((fa - fb).abs());
            }
            fitted = fitted.max(worst / (a - b).abs());
        }
        assert!(fitted.is_finite());
        assert!(fitted <= l_bound + 0.1, "fitted {fitted} vs bound {l_bound}");
    }
}
