//! Parametric density families: evaluation, sampling and structural queries.
//!
//! The central family is the cosine model on `[0, 1]`,
//!
//! ```text
//! f_theta(x) = (1 + cos(theta x)) / (1 + sin(theta)/theta),
//! ```
//!
//! whose CDF converges to the uniform CDF as `theta` grows while the density
//! keeps oscillating. Three companions are provided: an extended family that
//! attaches the same oscillation to a scaled uniform base, the uniform
//! distribution on `[0, theta]`, and finite Gaussian mixtures.

use crate::error::{Error, Result};
use crate::rng;

/// Parameter values below this threshold evaluate `sin(t)/t` by a 3-term
/// Taylor series to avoid the 0/0 form.
pub const THETA_TINY: f64 = 1e-6;

/// Bisection tolerance for numerical CDF inversion.
const INVERSION_TOL: f64 = 1e-12;
const INVERSION_MAX_ITERS: usize = 200;

/// `sin(t)/t` with the continuous extension at 0.
#[inline]
pub fn sinc(t: f64) -> f64 {
    if t.abs() < THETA_TINY {
        let t2 = t * t;
        1.0 - t2 / 6.0 + t2 * t2 / 120.0
    } else {
        t.sin() / t
    }
}

/// A nonnegative, finite model parameter.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Theta(f64);

impl Theta {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::Validation(format!(
                "theta must be a finite nonnegative real, got {value}"
            )));
        }
        Ok(Theta(value))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for Theta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Identifies a parametric family together with its fixed structural constants.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    /// `(1 + cos(theta x)) / (1 + sin(theta)/theta)` on `[0, 1]`.
    Cosine,
    /// Scaled uniform base `1/lambda` on `[0, lambda]` perturbed by
    /// `mu cos(omega x)`; the running parameter theta plays the role of the
    /// oscillation frequency omega.
    ExtendedCosine { lambda: f64, mu: f64 },
    /// Uniform on `[0, theta]`, `theta > 0`.
    UniformScale,
    /// Finite Gaussian mixture; all mixture parameters are structural and the
    /// running parameter theta is ignored.
    GaussMixture {
        weights: Vec<f64>,
        means: Vec<f64>,
        precisions: Vec<f64>,
    },
}

/// Default perturbation size for [`FamilySpec::ExtendedCosine`]. Positivity
/// needs `mu <= 1/lambda`, and `1/lambda >= 0.5` for every `lambda` in `[1, 2]`.
pub const EXTENDED_COSINE_DEFAULT_MU: f64 = 0.4;

/// Gaussian mixture quadrature domains are truncated at this many standard
/// deviations beyond the extreme means (tail mass below 1e-30).
const MIXTURE_TRUNCATION_SIGMAS: f64 = 12.0;

impl FamilySpec {
    pub fn extended_cosine(lambda: f64, mu: f64) -> Result<Self> {
        let spec = FamilySpec::ExtendedCosine { lambda, mu };
        spec.validate()?;
        Ok(spec)
    }

    pub fn gauss_mixture(weights: Vec<f64>, means: Vec<f64>, precisions: Vec<f64>) -> Result<Self> {
        let spec = FamilySpec::GaussMixture {
            weights,
            means,
            precisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FamilySpec::Cosine | FamilySpec::UniformScale => Ok(()),
            FamilySpec::ExtendedCosine { lambda, mu } => {
                if !(*lambda >= 1.0 && *lambda <= 2.0) {
                    return Err(Error::Validation(format!(
                        "extended cosine lambda must lie in [1, 2], got {lambda}"
                    )));
                }
                if !(*mu > 0.0 && *mu < 1.0) {
                    return Err(Error::Validation(format!(
                        "extended cosine mu must lie in (0, 1), got {mu}"
                    )));
                }
                if *mu > 1.0 / *lambda {
                    return Err(Error::Validation(format!(
                        "extended cosine requires mu <= 1/lambda for positivity \
                         (mu = {mu}, 1/lambda = {})",
                        1.0 / *lambda
                    )));
                }
                Ok(())
            }
            FamilySpec::GaussMixture {
                weights,
                means,
                precisions,
            } => {
                let k = weights.len();
                if k == 0 || means.len() != k || precisions.len() != k {
                    return Err(Error::Validation(
                        "gauss mixture needs equal-length nonempty weights/means/precisions"
                            .into(),
                    ));
                }
                if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
                    return Err(Error::Validation("mixture weights must be >= 0".into()));
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::Validation(format!(
                        "mixture weights must sum to 1 within 1e-12, got {total}"
                    )));
                }
                if precisions.iter().any(|p| !p.is_finite() || *p <= 0.0) {
                    return Err(Error::Validation(
                        "mixture precisions must be strictly positive".into(),
                    ));
                }
                if means.iter().any(|m| !m.is_finite()) {
                    return Err(Error::Validation("mixture means must be finite".into()));
                }
                Ok(())
            }
        }
    }

    /// Closed support for the bounded families; for Gaussian mixtures, the
    /// truncated quadrature domain (means +- 12 standard deviations).
    pub fn support(&self, theta: Theta) -> Result<(f64, f64)> {
        self.validate()?;
        match self {
            FamilySpec::Cosine => Ok((0.0, 1.0)),
            FamilySpec::ExtendedCosine { lambda, .. } => Ok((0.0, *lambda)),
            FamilySpec::UniformScale => {
                if theta.value() <= 0.0 {
                    Err(Error::Validation(
                        "uniform-scale family requires theta > 0".into(),
                    ))
                } else {
                    Ok((0.0, theta.value()))
                }
            }
            FamilySpec::GaussMixture {
                means, precisions, ..
            } => {
                let sigma_max = precisions
                    .iter()
                    .map(|p| 1.0 / p.sqrt())
                    .fold(0.0f64, f64::max);
                let lo = means.iter().cloned().fold(f64::INFINITY, f64::min)
                    - MIXTURE_TRUNCATION_SIGMAS * sigma_max;
                let hi = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                    + MIXTURE_TRUNCATION_SIGMAS * sigma_max;
                Ok((lo, hi))
            }
        }
    }

    /// Largest angular frequency present in the density, used by the
    /// quadrature oscillation guard. Zero means "not oscillatory".
    pub fn oscillation_frequency(&self, theta: Theta) -> f64 {
        match self {
            FamilySpec::Cosine | FamilySpec::ExtendedCosine { .. } => theta.value(),
            FamilySpec::UniformScale | FamilySpec::GaussMixture { .. } => 0.0,
        }
    }
}

/// An ordered finite sample with its generation metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    points: Vec<f64>,
    meta: SampleMeta,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleMeta {
    pub seed: u64,
    pub theta_star: Theta,
    pub family: FamilySpec,
}

impl SampleSet {
    /// Wrap externally supplied points, checking that each lies in the support.
    pub fn from_points(
        points: Vec<f64>,
        family: FamilySpec,
        theta_star: Theta,
        seed: u64,
    ) -> Result<Self> {
        let (lo, hi) = family.support(theta_star)?;
        for &x in &points {
            if !(x >= lo && x <= hi) {
                return Err(Error::Domain(format!(
                    "sample point {x} outside support [{lo}, {hi}]"
                )));
            }
        }
        Ok(SampleSet {
            points,
            meta: SampleMeta {
                seed,
                theta_star,
                family,
            },
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn meta(&self) -> &SampleMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest sample point, or 0 for an empty sample.
    pub fn max_point(&self) -> f64 {
        self.points.iter().cloned().fold(0.0f64, f64::max)
    }
}

fn check_in_support(family: &FamilySpec, theta: Theta, x: f64) -> Result<(f64, f64)> {
    let (lo, hi) = family.support(theta)?;
    // Mixtures have full real support; the truncated domain is only for quadrature.
    if matches!(family, FamilySpec::GaussMixture { .. }) {
        return Ok((lo, hi));
    }
    if !(x >= lo && x <= hi) {
        return Err(Error::Domain(format!(
            "x = {x} outside support [{lo}, {hi}]"
        )));
    }
    Ok((lo, hi))
}

/// Density of `family` at `x`.
///
/// The theta = 0 case (and omega = 0 for the extended family) uses the
/// continuous extension.
pub fn density(family: &FamilySpec, theta: Theta, x: f64) -> Result<f64> {
    check_in_support(family, theta, x)?;
    Ok(density_unchecked(family, theta, x))
}

/// Density with points outside the support mapped to 0 instead of an error.
/// Metric integrands use this to work on a common domain.
pub fn density_clamped(family: &FamilySpec, theta: Theta, x: f64) -> f64 {
    match family {
        FamilySpec::GaussMixture { .. } => density_unchecked(family, theta, x),
        _ => {
            let (lo, hi) = match family.support(theta) {
                Ok(s) => s,
                Err(_) => return 0.0,
            };
            if x >= lo && x <= hi {
                density_unchecked(family, theta, x)
            } else {
                0.0
            }
        }
    }
}

fn density_unchecked(family: &FamilySpec, theta: Theta, x: f64) -> f64 {
    let t = theta.value();
    match family {
        FamilySpec::Cosine => {
            let num = 1.0 + (t * x).cos();
            let den = 1.0 + sinc(t);
            (num / den).max(0.0)
        }
        FamilySpec::ExtendedCosine { lambda, mu } => {
            let omega = t;
            let num = 1.0 / lambda + mu * (omega * x).cos();
            let den = 1.0 + mu * lambda * sinc(omega * lambda);
            (num / den).max(0.0)
        }
        FamilySpec::UniformScale => 1.0 / t,
        FamilySpec::GaussMixture {
            weights,
            means,
            precisions,
        } => {
            let mut acc = 0.0;
            for ((w, m), p) in weights.iter().zip(means).zip(precisions) {
                let z = p.sqrt() * (x - m);
                acc += w * p.sqrt() * (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
            }
            acc
        }
    }
}

/// CDF of `family` at `x`. Exactly 1 at the upper support endpoint.
pub fn cdf(family: &FamilySpec, theta: Theta, x: f64) -> Result<f64> {
    check_in_support(family, theta, x)?;
    Ok(cdf_unchecked(family, theta, x))
}

/// CDF extended to the whole line: 0 below the support, 1 above it.
pub fn cdf_clamped(family: &FamilySpec, theta: Theta, x: f64) -> f64 {
    match family {
        FamilySpec::GaussMixture { .. } => cdf_unchecked(family, theta, x),
        _ => {
            let (lo, hi) = match family.support(theta) {
                Ok(s) => s,
                Err(_) => return 0.0,
            };
            if x < lo {
                0.0
            } else if x > hi {
                1.0
            } else {
                cdf_unchecked(family, theta, x)
            }
        }
    }
}

fn cdf_unchecked(family: &FamilySpec, theta: Theta, x: f64) -> f64 {
    let t = theta.value();
    match family {
        FamilySpec::Cosine => {
            // sin(theta x)/theta written as x sinc(theta x) so both the
            // numerator at x = 1 and the denominator share the same bits.
            let num = x + x * sinc(t * x);
            let den = 1.0 + sinc(t);
            (num / den).clamp(0.0, 1.0)
        }
        FamilySpec::ExtendedCosine { lambda, mu } => {
            let omega = t;
            let num = x / lambda + mu * x * sinc(omega * x);
            let den = 1.0 + mu * lambda * sinc(omega * lambda);
            (num / den).clamp(0.0, 1.0)
        }
        FamilySpec::UniformScale => (x / t).clamp(0.0, 1.0),
        FamilySpec::GaussMixture {
            weights,
            means,
            precisions,
        } => {
            let mut acc = 0.0;
            for ((w, m), p) in weights.iter().zip(means).zip(precisions) {
                let z = p.sqrt() * (x - m);
                acc += w * 0.5 * (1.0 + libm::erf(z / std::f64::consts::SQRT_2));
            }
            acc.clamp(0.0, 1.0)
        }
    }
}

/// Deterministic inverse-CDF sampling.
///
/// Draw `i` inverts the CDF at `rng::uniform_draw(seed, i)` by bracketed
/// bisection to `|F(x) - u| <= 1e-12`. The CDF is monotone and its flats are
/// isolated points, so the inverse is well defined almost everywhere.
pub fn sample(family: &FamilySpec, theta: Theta, n: usize, seed: u64) -> Result<SampleSet> {
    let (lo, hi) = family.support(theta)?;
    let mut points = Vec::with_capacity(n);
    for i in 0..n {
        let u = rng::uniform_draw(seed, i as u64);
        points.push(invert_cdf(family, theta, u, lo, hi));
    }
    Ok(SampleSet {
        points,
        meta: SampleMeta {
            seed,
            theta_star: theta,
            family: family.clone(),
        },
    })
}

fn invert_cdf(family: &FamilySpec, theta: Theta, u: f64, lo: f64, hi: f64) -> f64 {
    let mut a = lo;
    let mut b = hi;
    let mut mid = 0.5 * (a + b);
    for _ in 0..INVERSION_MAX_ITERS {
        mid = 0.5 * (a + b);
        let c = cdf_unchecked(family, theta, mid);
        if (c - u).abs() <= INVERSION_TOL {
            return mid;
        }
        if c < u {
            a = mid;
        } else {
            b = mid;
        }
    }
    mid
}

/// All zeros of the cosine density in `[0, 1]`, sorted ascending.
///
/// These are the points where `theta x` is an odd multiple of pi; the set is
/// empty for `theta < pi`.
pub fn zero_set(theta: Theta) -> Vec<f64> {
    let t = theta.value();
    let mut zeros = Vec::new();
    if t < std::f64::consts::PI {
        return zeros;
    }
    let mut k = 0u64;
    loop {
        let x = (2 * k + 1) as f64 * std::f64::consts::PI / t;
        if x > 1.0 {
            break;
        }
        zeros.push(x);
        k += 1;
    }
    zeros
}

/// Maximum of the cosine density over `[0, 1]`: `2 theta / (theta + sin theta)`,
/// with the continuous extension 1 at theta = 0.
pub fn sup_density(theta: Theta) -> f64 {
    let t = theta.value();
    2.0 / (1.0 + sinc(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn th(v: f64) -> Theta {
        Theta::new(v).unwrap()
    }

    #[test]
    fn cosine_density_examples() {
        // theta = 0 is the uniform density.
        assert_eq!(density(&FamilySpec::Cosine, th(0.0), 0.37).unwrap(), 1.0);
        // cos(pi) annihilates the numerator.
        let v = density(&FamilySpec::Cosine, th(std::f64::consts::PI), 1.0).unwrap();
        assert!(v.abs() < 1e-15, "expected 0, got {v}");
        // extended family at omega = 0 reduces to the scaled uniform.
        let ext = FamilySpec::extended_cosine(1.5, 0.4).unwrap();
        let v = density(&ext, th(0.0), 0.8).unwrap();
        assert!((v - 1.0 / 1.5).abs() < 1e-15);
    }

    #[test]
    fn cosine_cdf_examples() {
        assert_eq!(cdf(&FamilySpec::Cosine, th(7.3), 1.0).unwrap(), 1.0);
        assert_eq!(cdf(&FamilySpec::Cosine, th(0.0), 0.42).unwrap(), 0.42);
        let v = cdf(&FamilySpec::Cosine, th(2.0 * std::f64::consts::PI), 0.5).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            density(&FamilySpec::Cosine, th(1.0), 1.5),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            density(&FamilySpec::Cosine, th(1.0), -0.1),
            Err(Error::Domain(_))
        ));
        assert!(FamilySpec::extended_cosine(1.5, 0.9).is_err()); // mu > 1/lambda
        assert!(FamilySpec::extended_cosine(2.5, 0.3).is_err()); // lambda out of range
        assert!(density(&FamilySpec::UniformScale, th(0.0), 0.0).is_err());
    }

    #[test]
    fn zero_set_examples() {
        let pi = std::f64::consts::PI;
        assert_eq!(zero_set(th(pi)), vec![1.0]);
        let z = zero_set(th(3.0 * pi));
        assert_eq!(z.len(), 2);
        assert!((z[0] - 1.0 / 3.0).abs() < 1e-15 && (z[1] - 1.0).abs() < 1e-15);
        assert!(zero_set(th(1.0)).is_empty());
    }

    #[test]
    fn sup_density_examples() {
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!((sup_density(th(two_pi)) - 2.0).abs() < 1e-12);
        assert!((sup_density(th(1e-9)) - 1.0).abs() < 1e-9);

        // Dense-grid maximization oracle near the sinc minimum.
        let theta = th(4.49341);
        let mut oracle = 0.0f64;
        for i in 0..=1_000_000u64 {
            let x = i as f64 / 1_000_000.0;
            oracle = oracle.max(density(&FamilySpec::Cosine, theta, x).unwrap());
        }
        assert!(
            (sup_density(theta) - oracle).abs() < 1e-6,
            "closed form {} vs oracle {oracle}",
            sup_density(theta)
        );
        assert!((sup_density(theta) - 2.5556).abs() < 1e-3);
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample(&FamilySpec::Cosine, th(5.0), 100, 11).unwrap();
        let b = sample(&FamilySpec::Cosine, th(5.0), 100, 11).unwrap();
        assert_eq!(a, b);
        let c = sample(&FamilySpec::Cosine, th(5.0), 100, 12).unwrap();
        assert_ne!(a.points(), c.points());
    }

    #[test]
    fn inversion_hits_the_uniform_variate() {
        // |F(x_i) - u_i| <= 1e-12 for every draw
        for (family, theta) in [
            (FamilySpec::Cosine, th(5.0)),
            (FamilySpec::Cosine, th(40.0)),
            (FamilySpec::extended_cosine(1.5, 0.4).unwrap(), th(12.0)),
            (FamilySpec::UniformScale, th(3.0)),
        ] {
            let s = sample(&family, theta, 500, 77).unwrap();
            for (i, &x) in s.points().iter().enumerate() {
                let u = rng::uniform_draw(77, i as u64);
                let f = cdf_unchecked(&family, theta, x);
                assert!(
                    (f - u).abs() <= 1e-12,
                    "{family:?} draw {i}: |F - u| = {}",
                    (f - u).abs()
                );
            }
        }
    }

    /// Kolmogorov-Smirnov statistic of a sample against a model CDF.
    fn ks_statistic(points: &[f64], family: &FamilySpec, theta: Theta) -> f64 {
        let mut xs = points.to_vec();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = xs.len() as f64;
        let mut d = 0.0f64;
        for (i, &x) in xs.iter().enumerate() {
            let f = cdf_clamped(family, theta, x);
            d = d.max((f - i as f64 / n).abs());
            d = d.max(((i + 1) as f64 / n - f).abs());
        }
        d
    }

    #[test]
    fn sample_matches_cdf_ks() {
        // 95% KS band at n = 1e5 is 1.36/sqrt(n) ~ 0.0043; assert the looser 0.006.
        let s = sample(&FamilySpec::Cosine, th(5.0), 100_000, 1).unwrap();
        let d = ks_statistic(s.points(), &FamilySpec::Cosine, th(5.0));
        assert!(d < 0.006, "KS statistic {d}");
    }

    #[test]
    fn sample_uniform_mean() {
        let s = sample(&FamilySpec::Cosine, th(0.0), 100_000, 2).unwrap();
        let mean: f64 = s.points().iter().sum::<f64>() / s.len() as f64;
        assert!((mean - 0.5).abs() < 0.004, "mean {mean}");
    }

    #[test]
    fn sample_ks_band_across_families() {
        // 1% KS band 1.63/sqrt(n) for 20 random (theta, seed) pairs.
        let n = 100_000;
        let band = 1.63 / (n as f64).sqrt();
        for k in 0..20u64 {
            let theta = th(100.0 * rng::uniform_draw(901, k));
            let seed = rng::derive_seed(902, k);
            let s = sample(&FamilySpec::Cosine, theta, n, seed).unwrap();
            let d = ks_statistic(s.points(), &FamilySpec::Cosine, theta);
            assert!(d < band, "theta {theta}, seed {seed}: KS {d} >= {band}");
        }
    }

    #[test]
    fn extended_cosine_positivity() {
        // Positivity across 100 random (lambda, omega) with mu = 0.4.
        for k in 0..100u64 {
            let lambda = 1.0 + rng::uniform_draw(55, 2 * k);
            let omega = th(200.0 * rng::uniform_draw(55, 2 * k + 1));
            let fam = FamilySpec::extended_cosine(lambda, EXTENDED_COSINE_DEFAULT_MU).unwrap();
            for i in 0..1000u64 {
                let x = lambda * i as f64 / 1000.0;
                let v = density(&fam, omega, x).unwrap();
                assert!(v >= -1e-12, "negative density {v} at x={x}");
            }
        }
    }

    #[test]
    fn densities_integrate_to_one() {
        let cfg = crate::quad::QuadratureConfig {
            abs_tol: 1e-11,
            rel_tol: 1e-10,
            ..Default::default()
        };
        let mixture =
            FamilySpec::gauss_mixture(vec![0.3, 0.7], vec![-1.0, 2.0], vec![1.0, 4.0]).unwrap();
        let cases: Vec<(FamilySpec, Theta)> = vec![
            (FamilySpec::Cosine, th(0.0)),
            (FamilySpec::Cosine, th(1.0)),
            (FamilySpec::Cosine, th(47.3)),
            (FamilySpec::Cosine, th(2000.0)),
            (FamilySpec::extended_cosine(1.5, 0.4).unwrap(), th(0.0)),
            (FamilySpec::extended_cosine(1.5, 0.4).unwrap(), th(31.0)),
            (FamilySpec::extended_cosine(2.0, 0.4).unwrap(), th(100.0)),
            (FamilySpec::UniformScale, th(2.5)),
            (mixture, th(0.0)),
        ];
        for (family, theta) in cases {
            let (lo, hi) = family.support(theta).unwrap();
            let freq = family.oscillation_frequency(theta);
            let r = crate::quad::integrate(
                |x| density_clamped(&family, theta, x),
                lo,
                hi,
                freq,
                &[],
                &cfg,
            )
            .unwrap();
            assert!(
                (r.value - 1.0).abs() < 1e-8,
                "{family:?} at {theta}: integral {}",
                r.value
            );
        }
    }

    #[test]
    fn cdf_is_running_integral_of_density() {
        // |cdf(x) - int_0^x density| <= 1e-8 on a 1000-point grid for 50
        // random theta in [0, 100], accumulating panel integrals between
        // consecutive grid points.
        let cfg = crate::quad::QuadratureConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-11,
            ..Default::default()
        };
        for k in 0..50u64 {
            let theta = th(100.0 * rng::uniform_draw(808, k));
            let freq = theta.value();
            let mut acc = 0.0;
            let mut worst = 0.0f64;
            for i in 1..=1000usize {
                let a = (i - 1) as f64 / 1000.0;
                let b = i as f64 / 1000.0;
                acc += crate::quad::integrate(
                    |x| density_clamped(&FamilySpec::Cosine, theta, x),
                    a,
                    b,
                    freq,
                    &[],
                    &cfg,
                )
                .unwrap()
                .value;
                let c = cdf(&FamilySpec::Cosine, theta, b).unwrap();
                worst = worst.max((c - acc).abs());
            }
            assert!(worst <= 1e-8, "theta {theta}: worst deviation {worst}");
        }
    }

    #[test]
    fn gauss_mixture_validation() {
        assert!(FamilySpec::gauss_mixture(vec![0.5, 0.6], vec![0.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(FamilySpec::gauss_mixture(vec![0.5, 0.5], vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
        let ok = FamilySpec::gauss_mixture(vec![0.3, 0.7], vec![-1.0, 2.0], vec![1.0, 4.0]);
        assert!(ok.is_ok());
    }

    proptest! {
        #[test]
        fn cosine_density_within_sup(theta in 0.0f64..100.0, x in 0.0f64..=1.0) {
            let t = th(theta);
            let v = density(&FamilySpec::Cosine, t, x).unwrap();
            prop_assert!(v >= 0.0);
            prop_assert!(v <= sup_density(t) + 1e-12);
        }

        #[test]
        fn cosine_cdf_monotone(theta in 0.0f64..100.0, a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let t = th(theta);
            let fa = cdf(&FamilySpec::Cosine, t, lo).unwrap();
            let fb = cdf(&FamilySpec::Cosine, t, hi).unwrap();
            prop_assert!(fa <= fb + 1e-14);
        }
    }
}
