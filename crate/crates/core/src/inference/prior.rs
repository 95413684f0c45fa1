//! Prior distributions over the parameter half-line.
//!
//! Five classes with distinct tail behavior: truncated uniform (compact),
//! exponential (sub-exponential tail), a polynomial tail `theta^-(1+alpha)`
//! with full support, a `1/(theta^2 (ln theta)^(2+beta))` tail, and a class
//! described only by a tail function `1 - Pi(theta) = exp(-phi(ln theta))`.

use crate::error::{Error, Result};
use crate::quad::{self, QuadratureConfig};

/// Tail descriptor for [`PriorSpec::PhiTail`]: a super-linear `phi` applied
/// to `ln theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiKind {
    /// `phi(t) = t^(1+beta)`.
    Power { beta: f64 },
    /// `phi(t) = beta exp(t)`; with beta = rate this is the tail of an
    /// exponential prior.
    ExpLinear { beta: f64 },
}

impl PhiKind {
    fn phi(&self, t: f64) -> f64 {
        match self {
            PhiKind::Power { beta } => t.powf(1.0 + beta),
            PhiKind::ExpLinear { beta } => beta * t.exp(),
        }
    }
}

/// A prior class with its hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub enum PriorSpec {
    /// Uniform on `[a, b]`.
    TruncatedUniform { a: f64, b: f64 },
    /// Density `rate exp(-rate theta)` on `[0, inf)`.
    Exponential { rate: f64 },
    /// Lomax density `(alpha/scale) (1 + theta/scale)^-(1+alpha)`: full
    /// support on `[0, inf)` with a `theta^-(1+alpha)` tail.
    ParetoTail { alpha: f64, scale: f64 },
    /// Constant on `[0, scale]`, then `c / (theta^2 (ln theta)^(2+beta))`,
    /// matched continuously at `scale > 1` and decreasing beyond it.
    LogPolyTail { beta: f64, scale: f64 },
    /// Defined through its tail function `1 - Pi(theta) = exp(-phi(ln theta))`
    /// for `theta >= e`, with a linear CDF head on `[0, e]`. The density is
    /// recovered by numerical differentiation; intended for tail diagnostics.
    PhiTail { phi: PhiKind },
}

/// A validated prior with precomputed normalization constants, ready for
/// repeated density and CDF evaluation.
#[derive(Debug, Clone)]
pub struct Prior {
    spec: PriorSpec,
    /// LogPolyTail: density value on the flat head.
    head_density: f64,
    /// LogPolyTail: multiplier c of the tail shape.
    tail_coeff: f64,
}

const E: f64 = std::f64::consts::E;

/// Shape of the log-poly tail integrand after `u = ln theta`:
/// `exp(-u) u^-(2+beta)`.
fn log_poly_tail_integral(from_theta: f64, beta: f64) -> f64 {
    let lo = from_theta.ln();
    let cfg = QuadratureConfig {
        abs_tol: 1e-14,
        rel_tol: 1e-12,
        ..Default::default()
    };
    // The integrand decays like exp(-u); 60 e-folds of tail are negligible.
    match quad::integrate(
        |u: f64| (-u).exp() * u.powf(-(2.0 + beta)),
        lo,
        lo + 60.0,
        0.0,
        &[],
        &cfg,
    ) {
        Ok(r) => r.value,
        // keep the best estimate if the budget ran out on an extreme scale
        Err(crate::error::Error::NonConvergence { value, .. }) => value,
        Err(_) => 0.0,
    }
}

impl Prior {
    pub fn new(spec: PriorSpec) -> Result<Self> {
        match &spec {
            PriorSpec::TruncatedUniform { a, b } => {
                if !(a.is_finite() && b.is_finite() && *a >= 0.0 && b > a) {
                    return Err(Error::Validation(format!(
                        "truncated uniform needs 0 <= a < b, got a = {a}, b = {b}"
                    )));
                }
            }
            PriorSpec::Exponential { rate } => {
                if !(*rate > 0.0 && rate.is_finite()) {
                    return Err(Error::Validation(format!(
                        "exponential rate must be positive, got {rate}"
                    )));
                }
            }
            PriorSpec::ParetoTail { alpha, scale } => {
                if !(alpha.is_finite() && *alpha > 0.0 && scale.is_finite() && *scale > 0.0) {
                    return Err(Error::Validation(format!(
                        "pareto tail needs alpha > 0 and scale > 0, got {alpha}, {scale}"
                    )));
                }
            }
            PriorSpec::LogPolyTail { beta, scale } => {
                if !(*beta > 0.0 && *scale > 1.0) {
                    return Err(Error::Validation(format!(
                        "log-poly tail needs beta > 0 and scale > 1, got {beta}, {scale}"
                    )));
                }
            }
            PriorSpec::PhiTail { phi } => {
                let beta = match phi {
                    PhiKind::Power { beta } | PhiKind::ExpLinear { beta } => *beta,
                };
                if beta.is_nan() || beta <= 0.0 {
                    return Err(Error::Validation("phi tail needs beta > 0".into()));
                }
            }
        }

        let (head_density, tail_coeff) = match &spec {
            PriorSpec::LogPolyTail { beta, scale } => {
                // pi(theta) = h on [0, s]; pi(theta) = c / (theta^2 (ln theta)^(2+beta))
                // beyond, continuous at s: h = c / (s^2 (ln s)^(2+beta)).
                // Total mass: h s + c T(s) = 1 with T the tail integral.
                let t_s = log_poly_tail_integral(*scale, *beta);
                let shape_s = scale.powi(2) * scale.ln().powf(2.0 + beta);
                let c = 1.0 / (scale / shape_s + t_s);
                (c / shape_s, c)
            }
            _ => (0.0, 0.0),
        };
        Ok(Prior {
            spec,
            head_density,
            tail_coeff,
        })
    }

    pub fn spec(&self) -> &PriorSpec {
        &self.spec
    }

    /// Prior density at `theta >= 0`.
    pub fn density(&self, theta: f64) -> f64 {
        if theta < 0.0 {
            return 0.0;
        }
        match &self.spec {
            PriorSpec::TruncatedUniform { a, b } => {
                if theta >= *a && theta <= *b {
                    1.0 / (b - a)
                } else {
                    0.0
                }
            }
            PriorSpec::Exponential { rate } => rate * (-rate * theta).exp(),
            PriorSpec::ParetoTail { alpha, scale } => {
                (alpha / scale) * (1.0 + theta / scale).powf(-(1.0 + alpha))
            }
            PriorSpec::LogPolyTail { beta, scale } => {
                if theta <= *scale {
                    self.head_density
                } else {
                    self.tail_coeff / (theta.powi(2) * theta.ln().powf(2.0 + beta))
                }
            }
            PriorSpec::PhiTail { .. } => {
                // central difference of the CDF
                let h = 1e-6 * theta.abs().max(1.0);
                let lo = (theta - h).max(0.0);
                (self.cdf(theta + h) - self.cdf(lo)) / (theta + h - lo)
            }
        }
    }

    pub fn log_density(&self, theta: f64) -> f64 {
        let d = self.density(theta);
        if d > 0.0 {
            d.ln()
        } else {
            f64::NEG_INFINITY
        }
    }

    /// CDF at `theta`.
    pub fn cdf(&self, theta: f64) -> f64 {
        if theta <= 0.0 {
            return 0.0;
        }
        match &self.spec {
            PriorSpec::TruncatedUniform { a, b } => ((theta - a) / (b - a)).clamp(0.0, 1.0),
            PriorSpec::Exponential { rate } => 1.0 - (-rate * theta).exp(),
            PriorSpec::ParetoTail { alpha, scale } => {
                1.0 - (1.0 + theta / scale).powf(-*alpha)
            }
            PriorSpec::LogPolyTail { beta, scale } => {
                if theta <= *scale {
                    self.head_density * theta
                } else {
                    let shape_s = scale.powi(2) * scale.ln().powf(2.0 + beta);
                    let head = self.tail_coeff * scale / shape_s;
                    let tail_done = log_poly_tail_integral(*scale, *beta)
                        - log_poly_tail_integral(theta, *beta);
                    (head + self.tail_coeff * tail_done).clamp(0.0, 1.0)
                }
            }
            PriorSpec::PhiTail { phi } => {
                if theta <= E {
                    let mass_head = 1.0 - (-phi.phi(1.0)).exp();
                    mass_head * theta / E
                } else {
                    1.0 - (-phi.phi(theta.ln())).exp()
                }
            }
        }
    }

    /// Tail mass `1 - Pi(theta)`.
    pub fn tail_mass(&self, theta: f64) -> f64 {
        match &self.spec {
            PriorSpec::TruncatedUniform { .. } => (1.0 - self.cdf(theta)).max(0.0),
            PriorSpec::Exponential { rate } => (-rate * theta.max(0.0)).exp(),
            PriorSpec::ParetoTail { alpha, scale } => {
                (1.0 + theta.max(0.0) / scale).powf(-*alpha)
            }
            PriorSpec::LogPolyTail { beta, .. } => {
                let theta = theta.max(0.0);
                if theta <= E {
                    1.0 - self.cdf(theta)
                } else {
                    (self.tail_coeff * log_poly_tail_integral(theta, *beta)).min(1.0)
                }
            }
            PriorSpec::PhiTail { phi } => {
                // direct evaluation; 1 - cdf would cancel catastrophically
                if theta <= E {
                    (1.0 - self.cdf(theta)).max(0.0)
                } else {
                    (-phi.phi(theta.ln())).exp()
                }
            }
        }
    }

    /// Mass of the interval `[lo, hi]`.
    ///
    /// Closed form where available; fixed-order Gauss-Legendre of the density
    /// for the log-poly tail, whose shape has no elementary antiderivative.
    pub fn interval_mass(&self, lo: f64, hi: f64) -> f64 {
        let lo = lo.max(0.0);
        if hi <= lo {
            return 0.0;
        }
        match &self.spec {
            PriorSpec::LogPolyTail { scale, .. } => {
                let mut total = 0.0;
                // flat head part
                if lo < *scale {
                    total += self.head_density * (hi.min(*scale) - lo);
                }
                // smooth decreasing tail part: composite GL8 is plenty
                if hi > *scale {
                    let (a, b) = (lo.max(*scale), hi);
                    #[allow(clippy::excessive_precision)]
                    const GL_X: [f64; 4] = [
                        0.183434642495649804939476142360184,
                        0.525532409916328985817739049189246,
                        0.796666477413626739591553936475830,
                        0.960289856497536231683560868569473,
                    ];
                    #[allow(clippy::excessive_precision)]
                    const GL_W: [f64; 4] = [
                        0.362683783378361982965150449277196,
                        0.313706645877887287337962201986601,
                        0.222381034453374470544355994426241,
                        0.101228536290376259152531354309962,
                    ];
                    let panels = 4usize;
                    for i in 0..panels {
                        let pa = a + (b - a) * i as f64 / panels as f64;
                        let pb = a + (b - a) * (i + 1) as f64 / panels as f64;
                        let c = 0.5 * (pa + pb);
                        let h = 0.5 * (pb - pa);
                        for j in 0..4 {
                            total += h
                                * GL_W[j]
                                * (self.density(c - h * GL_X[j]) + self.density(c + h * GL_X[j]));
                        }
                    }
                }
                total
            }
            _ => (self.cdf(hi) - self.cdf(lo)).max(0.0),
        }
    }

    /// Points where the density has a jump or kink; quadrature panels must
    /// not straddle them.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.spec {
            PriorSpec::TruncatedUniform { a, b } => vec![*a, *b],
            PriorSpec::Exponential { .. } | PriorSpec::ParetoTail { .. } => Vec::new(),
            PriorSpec::LogPolyTail { scale, .. } => vec![*scale],
            PriorSpec::PhiTail { .. } => vec![E],
        }
    }
}
