//! Adaptive Gauss-Kronrod quadrature with an oscillation guard.
//!
//! Integrands built from the cosine family oscillate with a known angular
//! frequency, so the initial partition caps every panel at
//! `(2 pi / freq) / oscillation_guard`: no oscillation period is ever skipped.
//! Panels are then refined greedily by their G7-K15 error estimate. The final
//! sum runs over panels sorted by position, so the result does not depend on
//! refinement order.

use crate::error::{Error, Result};

/// Tolerances and budgets for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Budget of panels for adaptive refinement. A guard-mandated initial
    /// partition may exceed it; refinement on top of it then stops at the
    /// larger of the two counts.
    pub max_panels: usize,
    /// Minimum panels per oscillation period (>= 4).
    pub oscillation_guard: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_panels: 50_000,
            oscillation_guard: 8,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol.is_finite() && self.abs_tol > 0.0)
            || !(self.rel_tol.is_finite() && self.rel_tol > 0.0)
        {
            return Err(Error::Validation(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_panels < 2 {
            return Err(Error::Validation("max_panels must be at least 2".into()));
        }
        if self.oscillation_guard < 4 {
            return Err(Error::Validation(
                "oscillation_guard must be at least 4".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub panels: usize,
    pub evals: usize,
}

// G7-K15 nodes and weights (positive half; node 7 is the center).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = h * x;
        let pair = f(c - dx) + f(c + dx);
        resk += WGK[j] * pair;
        if j % 2 == 1 {
            resg += WG[j / 2] * pair;
        }
    }
    (resk * h, (resk - resg).abs() * h)
}

fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

/// Integrate `f` over `[a, b]`.
///
/// `freq_hint` is the largest angular frequency among the integrand's factors
/// (0 for non-oscillatory integrands); `split_points` are mandatory panel
/// boundaries (support edges, density zeros) and may lie outside `[a, b]`,
/// in which case they are ignored.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    freq_hint: f64,
    split_points: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Validation("integration bounds must be finite".into()));
    }
    if a >= b {
        return Ok(Integral {
            value: 0.0,
            abs_error: 0.0,
            panels: 0,
            evals: 0,
        });
    }

    let span = b - a;
    let mut cap = span / 8.0;
    if freq_hint > 0.0 {
        let period = 2.0 * std::f64::consts::PI / freq_hint;
        cap = cap.min(period / cfg.oscillation_guard as f64);
    }

    // Mandatory boundaries: endpoints plus interior split points.
    let mut bounds: Vec<f64> = vec![a];
    let mut sorted_splits: Vec<f64> = split_points
        .iter()
        .cloned()
        .filter(|x| *x > a && *x < b)
        .collect();
    sorted_splits.sort_by(|x, y| x.partial_cmp(y).unwrap());
    for s in sorted_splits {
        if s - bounds.last().unwrap() > 1e-15 * span {
            bounds.push(s);
        }
    }
    bounds.push(b);

    let mut panels: Vec<Panel> = Vec::new();
    let mut evals = 0usize;
    for w in bounds.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let pieces = ((hi - lo) / cap).ceil().max(1.0) as usize;
        for i in 0..pieces {
            let pa = lo + (hi - lo) * i as f64 / pieces as f64;
            let pb = lo + (hi - lo) * (i + 1) as f64 / pieces as f64;
            let (value, error) = gk15(&f, pa, pb);
            evals += 15;
            panels.push(Panel {
                a: pa,
                b: pb,
                value,
                error,
                depth: 0,
            });
        }
    }

    let budget = cfg.max_panels.max(panels.len());
    let min_width = 1e-14 * span;

    // Max-error heap over panel indices; ties break toward the older panel so
    // refinement order is deterministic.
    use std::cmp::Ordering;
    use std::collections::BinaryHeap;
    #[derive(PartialEq)]
    struct Item {
        error: f64,
        idx: usize,
    }
    impl Eq for Item {}
    impl PartialOrd for Item {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Item {
        fn cmp(&self, other: &Self) -> Ordering {
            self.error
                .total_cmp(&other.error)
                .then_with(|| other.idx.cmp(&self.idx))
        }
    }

    let mut heap: BinaryHeap<Item> = panels
        .iter()
        .enumerate()
        .map(|(idx, p)| Item {
            error: p.error,
            idx,
        })
        .collect();
    let mut total_value = kahan_sum(panels.iter().map(|p| p.value));
    let mut total_error = kahan_sum(panels.iter().map(|p| p.error));

    while total_error > cfg.abs_tol.max(cfg.rel_tol * total_value.abs()) {
        if panels.len() >= budget {
            break;
        }
        let top = match heap.pop() {
            Some(t) => t,
            None => break,
        };
        let p = panels[top.idx];
        if top.error != p.error {
            continue; // stale heap entry
        }
        if p.b - p.a <= min_width || p.depth >= 52 {
            continue; // cannot refine further; residual error stays counted
        }
        let mid = 0.5 * (p.a + p.b);
        let (v1, e1) = gk15(&f, p.a, mid);
        let (v2, e2) = gk15(&f, mid, p.b);
        evals += 30;
        total_value += v1 + v2 - p.value;
        total_error += e1 + e2 - p.error;
        panels[top.idx] = Panel {
            a: p.a,
            b: mid,
            value: v1,
            error: e1,
            depth: p.depth + 1,
        };
        heap.push(Item {
            error: e1,
            idx: top.idx,
        });
        panels.push(Panel {
            a: mid,
            b: p.b,
            value: v2,
            error: e2,
            depth: p.depth + 1,
        });
        heap.push(Item {
            error: e2,
            idx: panels.len() - 1,
        });
    }

    // Deterministic final reduction: sum panels in spatial order.
    panels.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap());
    let value = kahan_sum(panels.iter().map(|p| p.value));
    let abs_error = kahan_sum(panels.iter().map(|p| p.error));

    if abs_error > cfg.abs_tol.max(cfg.rel_tol * value.abs()) {
        return Err(Error::NonConvergence {
            value,
            abs_error,
            panels: panels.len(),
        });
    }
    Ok(Integral {
        value,
        abs_error,
        panels: panels.len(),
        evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let cfg = QuadratureConfig::default();
        let r = integrate(|x| 3.0 * x * x, 0.0, 2.0, 0.0, &[], &cfg).unwrap();
        assert!((r.value - 8.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_integrand() {
        let cfg = QuadratureConfig::default();
        let theta = 2000.0 * std::f64::consts::PI;
        let r = integrate(|x| (theta * x).cos(), 0.0, 1.0, theta, &[], &cfg).unwrap();
        assert!(r.value.abs() < 1e-9, "got {}", r.value);
    }

    #[test]
    fn integrable_log_singularity() {
        let cfg = QuadratureConfig {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            ..Default::default()
        };
        // integral of -ln(x) over (0, 1] equals 1
        let r = integrate(|x| -(x.max(1e-300)).ln(), 0.0, 1.0, 0.0, &[], &cfg).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8, "got {}", r.value);
    }

    #[test]
    fn split_points_handle_jumps() {
        let cfg = QuadratureConfig::default();
        let f = |x: f64| if x < 0.3 { 1.0 } else { 2.0 };
        let r = integrate(f, 0.0, 1.0, 0.0, &[0.3], &cfg).unwrap();
        assert!((r.value - 1.7).abs() < 1e-12);
    }

    #[test]
    fn empty_interval_is_zero() {
        let cfg = QuadratureConfig::default();
        let r = integrate(|_| 1.0, 1.0, 1.0, 0.0, &[], &cfg).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn budget_exhaustion_reports_nonconvergence() {
        let cfg = QuadratureConfig {
            abs_tol: 1e-14,
            rel_tol: 1e-14,
            max_panels: 4,
            oscillation_guard: 4,
        };
        let r = integrate(|x: f64| (1e4 * x).sin().abs(), 0.0, 1.0, 0.0, &[], &cfg);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }
}
