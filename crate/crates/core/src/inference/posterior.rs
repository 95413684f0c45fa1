//! Quadrature posterior over the model parameter.
//!
//! The posterior density over theta is represented by an adaptively refined
//! panel grid on `[0, theta_max]`. Each finalized panel carries three
//! Gauss-Legendre nodes whose log-weights hold
//! `log(likelihood * prior density * node weight)`; all normalization happens
//! through log-sum-exp, since product likelihoods span hundreds of e-folds.

use crate::error::{Error, Result};
use crate::inference::prior::{Prior, PriorSpec};
use crate::model::{self, FamilySpec, SampleSet, Theta};
use crate::quad::QuadratureConfig;

/// What to do when the prior tail mass beyond `theta_max` is not negligible
/// relative to the evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailPolicy {
    /// Fail with [`Error::ThetaMaxTooSmall`]. Default.
    Enforce,
    /// Record the diagnostic on the grid and continue; used by experiment
    /// sweeps over heavy-tailed priors, where the truncation at `theta_max`
    /// is the documented approximation.
    Record,
}

/// Diagnostics accumulated while building a [`PosteriorGrid`].
#[derive(Debug, Clone, Copy)]
pub struct PosteriorDiagnostics {
    pub panel_count: usize,
    pub max_depth: u32,
    /// Largest relative disagreement between the two- and three-point panel
    /// estimates among finalized panels.
    pub estimated_rel_error: f64,
    pub prior_tail_mass: f64,
    /// Whether the tail mass passed the `1e-12 x evidence` diagnostic.
    pub tail_ok: bool,
    pub theta_max: f64,
}

/// Normalized posterior over theta on `[0, theta_max]`.
#[derive(Debug, Clone)]
pub struct PosteriorGrid {
    family: FamilySpec,
    nodes: Vec<f64>,
    log_weights: Vec<f64>,
    /// Disjoint cells partitioning `[0, theta_max]`, one per node; interval
    /// masses are prorated uniformly inside a cell.
    cells: Vec<(f64, f64)>,
    log_normalizer: f64,
    diagnostics: PosteriorDiagnostics,
}

const SQRT_3_5: f64 = 0.774_596_669_241_483_4; // sqrt(3/5)
const GL3_W: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];
const MAX_DEPTH: u32 = 48;
/// Panels whose estimate falls this far (relative) below the running maximum
/// are not refined further; their contribution is below any tolerance in use.
const NEGLIGIBLE_LOG: f64 = -41.446_531_673_892_64; // ln(1e-18)
const TAIL_RATIO: f64 = 1e-12;

/// Sum of log densities of the sample under `(family, theta)`.
///
/// Empty samples give 0; a point sitting exactly on a density zero gives
/// negative infinity.
pub fn log_likelihood(family: &FamilySpec, theta: Theta, sample: &SampleSet) -> f64 {
    match family {
        FamilySpec::Cosine => {
            // Factor the normalizer out of the product:
            // sum ln(1 + cos(theta x_i)) - n ln(1 + sinc theta).
            let t = theta.value();
            let norm = (1.0 + model::sinc(t)).ln();
            let mut acc = 0.0;
            for &x in sample.points() {
                let c = (t * x).cos();
                if c <= -1.0 {
                    return f64::NEG_INFINITY;
                }
                acc += c.ln_1p();
            }
            acc - sample.len() as f64 * norm
        }
        _ => {
            let mut acc = 0.0;
            for &x in sample.points() {
                let d = model::density_clamped(family, theta, x);
                if d <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                acc += d.ln();
            }
            acc
        }
    }
}

fn log_sum_exp(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = values
        .clone()
        .fold(f64::NEG_INFINITY, |a, b| if b > a { b } else { a });
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = (v - max).exp() - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    max + sum.ln()
}

struct PanelEval {
    a: f64,
    b: f64,
    depth: u32,
    /// log of the 2-point Gauss-Legendre estimate of the panel integral
    est2: f64,
    /// log of the 3-point estimate, with node logs retained for finalization
    est3: f64,
    node_logs: [f64; 3],
    nodes: [f64; 3],
}

fn eval_panel(a: f64, b: f64, depth: u32, log_integrand: &impl Fn(f64) -> f64) -> PanelEval {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    // 2-point rule
    let g2 = h / 3.0f64.sqrt();
    let l2a = log_integrand(c - g2);
    let l2b = log_integrand(c + g2);
    let est2 = log_sum_exp([l2a, l2b].into_iter()) + h.max(f64::MIN_POSITIVE).ln();
    // 3-point rule
    let nodes = [c - h * SQRT_3_5, c, c + h * SQRT_3_5];
    let node_logs = [
        log_integrand(nodes[0]),
        log_integrand(nodes[1]),
        log_integrand(nodes[2]),
    ];
    let est3 = log_sum_exp(
        node_logs
            .iter()
            .zip(GL3_W.iter())
            .map(|(l, w)| l + (w * (b - a)).ln())
            .collect::<Vec<_>>()
            .into_iter(),
    );
    PanelEval {
        a,
        b,
        depth,
        est2,
        est3,
        node_logs,
        nodes,
    }
}

/// Build the posterior with the default [`TailPolicy::Enforce`].
pub fn build_posterior(
    prior: &PriorSpec,
    family: &FamilySpec,
    sample: &SampleSet,
    cfg: &QuadratureConfig,
    theta_max: f64,
) -> Result<PosteriorGrid> {
    build_posterior_with(prior, family, sample, cfg, theta_max, TailPolicy::Enforce)
}

/// Build the posterior with an explicit tail policy.
pub fn build_posterior_with(
    prior: &PriorSpec,
    family: &FamilySpec,
    sample: &SampleSet,
    cfg: &QuadratureConfig,
    theta_max: f64,
    tail_policy: TailPolicy,
) -> Result<PosteriorGrid> {
    cfg.validate()?;
    family.validate()?;
    if !(theta_max > 0.0 && theta_max.is_finite()) {
        return Err(Error::Validation(format!(
            "theta_max must be positive and finite, got {theta_max}"
        )));
    }
    let prior = Prior::new(prior.clone())?;

    let log_integrand = |theta: f64| -> f64 {
        let lp = prior.log_density(theta);
        if lp == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        let th = match Theta::new(theta) {
            Ok(t) => t,
            Err(_) => return f64::NEG_INFINITY,
        };
        log_likelihood(family, th, sample) + lp
    };

    // Initial partition: the likelihood in theta oscillates with period
    // 2 pi / max_i x_i per factor, so panels are capped at a fraction of it.
    let mut cap = theta_max / 256.0;
    let x_max = sample.max_point();
    if x_max > 0.0 {
        cap = cap.min(2.0 * std::f64::consts::PI / x_max / cfg.oscillation_guard as f64);
    }

    let mut bounds: Vec<f64> = vec![0.0];
    let mut breaks = prior.breakpoints();
    breaks.retain(|t| *t > 0.0 && *t < theta_max);
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for s in breaks {
        if s - bounds.last().unwrap() > 1e-15 * theta_max {
            bounds.push(s);
        }
    }
    bounds.push(theta_max);

    let mut stack: Vec<PanelEval> = Vec::new();
    let mut initial: Vec<PanelEval> = Vec::new();
    for w in bounds.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let pieces = ((hi - lo) / cap).ceil().max(1.0) as usize;
        for i in 0..pieces {
            let pa = lo + (hi - lo) * i as f64 / pieces as f64;
            let pb = lo + (hi - lo) * (i + 1) as f64 / pieces as f64;
            initial.push(eval_panel(pa, pb, 0, &log_integrand));
        }
    }
    let mut running_max = initial
        .iter()
        .map(|p| p.est3)
        .fold(f64::NEG_INFINITY, f64::max);
    let budget = cfg.max_panels.max(initial.len());

    // In-order traversal: push in reverse so the leftmost panel pops first.
    initial.reverse();
    stack.extend(initial);

    let mut finalized: Vec<PanelEval> = Vec::new();
    let mut max_depth = 0u32;
    let mut worst_disagreement = 0.0f64;
    let split_tol = cfg.rel_tol.ln_1p();

    while let Some(p) = stack.pop() {
        running_max = running_max.max(p.est3);
        let disagreement = if p.est2 == f64::NEG_INFINITY && p.est3 == f64::NEG_INFINITY {
            0.0
        } else {
            (p.est2 - p.est3).abs()
        };
        let significant = p.est3 > running_max + NEGLIGIBLE_LOG;
        let want_split = disagreement > split_tol && significant;
        let can_split =
            p.depth < MAX_DEPTH && finalized.len() + stack.len() + 2 <= budget;
        if want_split && can_split {
            let mid = 0.5 * (p.a + p.b);
            let left = eval_panel(p.a, mid, p.depth + 1, &log_integrand);
            let right = eval_panel(mid, p.b, p.depth + 1, &log_integrand);
            stack.push(right);
            stack.push(left);
        } else {
            if want_split && significant {
                worst_disagreement = worst_disagreement.max(disagreement);
            }
            max_depth = max_depth.max(p.depth);
            finalized.push(p);
        }
    }

    finalized.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap());

    let mut nodes = Vec::with_capacity(3 * finalized.len());
    let mut log_weights = Vec::with_capacity(3 * finalized.len());
    let mut cells = Vec::with_capacity(3 * finalized.len());
    for p in &finalized {
        let w = p.b - p.a;
        let cuts = [p.a, p.a + GL3_W[0] * w, p.b - GL3_W[2] * w, p.b];
        for i in 0..3 {
            nodes.push(p.nodes[i]);
            log_weights.push(p.node_logs[i] + (GL3_W[i] * w).ln());
            cells.push((cuts[i], cuts[i + 1]));
        }
    }

    let log_normalizer = log_sum_exp(log_weights.iter().cloned());
    if log_normalizer == f64::NEG_INFINITY {
        return Err(Error::DegeneratePosterior);
    }

    let prior_tail_mass = prior.tail_mass(theta_max);
    let tail_ok = prior_tail_mass <= 0.0
        || prior_tail_mass.ln() <= TAIL_RATIO.ln() + log_normalizer;
    if !tail_ok && tail_policy == TailPolicy::Enforce {
        return Err(Error::ThetaMaxTooSmall {
            theta_max,
            tail_mass: prior_tail_mass,
        });
    }

    Ok(PosteriorGrid {
        family: family.clone(),
        nodes,
        log_weights,
        cells,
        log_normalizer,
        diagnostics: PosteriorDiagnostics {
            panel_count: finalized.len(),
            max_depth,
            estimated_rel_error: worst_disagreement,
            prior_tail_mass,
            tail_ok,
            theta_max,
        },
    })
}

impl PosteriorGrid {
    pub fn family(&self) -> &FamilySpec {
        &self.family
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn log_normalizer(&self) -> f64 {
        self.log_normalizer
    }

    pub fn diagnostics(&self) -> &PosteriorDiagnostics {
        &self.diagnostics
    }

    /// Cell boundaries, usable as an exact evaluation grid for masses.
    pub fn cell_boundaries(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.cells.iter().map(|c| c.0).collect();
        if let Some(last) = self.cells.last() {
            out.push(last.1);
        }
        out
    }

    /// Normalized mass of node `i`.
    fn node_mass(&self, i: usize) -> f64 {
        (self.log_weights[i] - self.log_normalizer).exp()
    }

    /// Posterior mass of the interval `[lo, hi]`.
    ///
    /// Panels fully inside contribute their exact node-mass sums. A partially
    /// covered panel integrates the quadratic interpolant of the posterior
    /// density through its three nodes, which reproduces the node-mass sum
    /// exactly when the cut spans the whole panel, so masses stay additive.
    pub fn mass(&self, lo: f64, hi: f64) -> Result<f64> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::Validation(format!(
                "interval bounds out of order: [{lo}, {hi}]"
            )));
        }
        let mut sum = 0.0;
        let mut comp = 0.0;
        let add = |v: f64, sum: &mut f64, comp: &mut f64| {
            let y = v - *comp;
            let t = *sum + y;
            *comp = (t - *sum) - y;
            *sum = t;
        };
        for k in 0..self.cells.len() / 3 {
            let a = self.cells[3 * k].0;
            let b = self.cells[3 * k + 2].1;
            if b <= lo || a >= hi {
                continue;
            }
            if lo <= a && b <= hi {
                for j in 0..3 {
                    add(self.node_mass(3 * k + j), &mut sum, &mut comp);
                }
                continue;
            }
            // Partial panel: posterior density at the three Gauss nodes,
            // integrated as a quadratic over the covered sub-interval.
            let h = 0.5 * (b - a);
            let c = 0.5 * (a + b);
            let w = b - a;
            let d: [f64; 3] = [
                self.node_mass(3 * k) / (GL3_W[0] * w),
                self.node_mass(3 * k + 1) / (GL3_W[1] * w),
                self.node_mass(3 * k + 2) / (GL3_W[2] * w),
            ];
            let r = SQRT_3_5;
            let c0 = d[1];
            let c1 = (d[2] - d[0]) / (2.0 * r);
            let c2 = (d[2] - 2.0 * d[1] + d[0]) / (2.0 * r * r);
            let s0 = ((lo.max(a) - c) / h).clamp(-1.0, 1.0);
            let s1 = ((hi.min(b) - c) / h).clamp(-1.0, 1.0);
            let anti = |s: f64| c0 * s + 0.5 * c1 * s * s + c2 * s * s * s / 3.0;
            add(h * (anti(s1) - anti(s0)), &mut sum, &mut comp);
        }
        Ok(sum.clamp(0.0, 1.0))
    }

    /// Posterior predictive density at `x`: the mixture of `f_theta` under
    /// the grid weights.
    pub fn predictive(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (i, &theta) in self.nodes.iter().enumerate() {
            let m = self.node_mass(i);
            if m == 0.0 {
                continue;
            }
            if let Ok(th) = Theta::new(theta) {
                acc += m * model::density_clamped(&self.family, th, x);
            }
        }
        acc
    }

    /// Posterior mean of theta.
    pub fn mean(&self) -> f64 {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, &t)| t * self.node_mass(i))
            .sum()
    }

    /// Smallest set of nodes covering `coverage` of the posterior mass,
    /// sorted by theta, with masses renormalized to 1. Used to evaluate the
    /// predictive cheaply when most nodes carry negligible weight.
    pub fn dominant_nodes(&self, coverage: f64) -> Vec<(f64, f64)> {
        let mut idx: Vec<usize> = (0..self.nodes.len()).collect();
        idx.sort_by(|&i, &j| self.log_weights[j].total_cmp(&self.log_weights[i]));
        let mut out = Vec::new();
        let mut acc = 0.0;
        for i in idx {
            let m = self.node_mass(i);
            out.push((self.nodes[i], m));
            acc += m;
            if acc >= coverage {
                break;
            }
        }
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let total: f64 = out.iter().map(|(_, m)| m).sum();
        if total > 0.0 {
            for entry in &mut out {
                entry.1 /= total;
            }
        }
        out
    }

    /// Serialize as CSV: header `theta,log_weight`, one row per node, then
    /// the normalizer in a footer comment line.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * self.nodes.len() + 64);
        out.push_str("theta,log_weight\n");
        for (t, w) in self.nodes.iter().zip(&self.log_weights) {
            out.push_str(&format!("{:.17e},{:.17e}\n", t, w));
        }
        out.push_str(&format!("# log_normalizer = {:.17e}\n", self.log_normalizer));
        out
    }
}
