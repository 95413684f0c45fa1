//! Exceedance sets, oscillation counts, and the oscillation inequality.
//!
//! For densities `f` and `g` on a common support, the exceedance set
//! `A = { x : f(x) > g(x) }` is open up to boundary-touching pieces and
//! decomposes into a minimal union of disjoint intervals. The number of
//! intervals is the oscillation count; a sequence of densities whose CDFs
//! approach `G` while staying a fixed total-variation distance away must see
//! this count diverge, quantified by
//!
//! ```text
//! eps <= 2 O sup_x { G(x + delta) - G(x) } + delta.
//! ```

use crate::error::{Error, Result};
use crate::metrics::ModelPoint;
use crate::model::{self, Theta};

/// Endpoint refinement tolerance for roots of `f - g`.
const ROOT_TOL: f64 = 1e-10;

/// A minimal decomposition of an exceedance set into disjoint intervals.
///
/// Pieces touching the support boundary are kept as intervals of the
/// decomposition; interior endpoints are roots of `f - g`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
    domain: (f64, f64),
}

impl IntervalSet {
    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn count(&self) -> usize {
        self.intervals.len()
    }

    /// Total length of the interval union.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    /// The delta-enlargement of the set, merged back into disjoint intervals
    /// and clipped to the domain.
    pub fn enlarged(&self, delta: f64) -> IntervalSet {
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(self.intervals.len());
        for &(a, b) in &self.intervals {
            let (a, b) = (a - delta, b + delta);
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        IntervalSet {
            intervals: out,
            domain: self.domain,
        }
    }
}

/// Per-element report of [`oscillation_inequality_check`].
#[derive(Debug, Clone, Copy)]
pub struct OscillationReport {
    /// Oscillation count `O`.
    pub count: usize,
    /// Smallest corridor width at which the Levy-Prokhorov condition
    /// `F(A) <= G(A^delta) + delta` holds for the exceedance set `A`.
    pub lp_delta: f64,
    /// User-supplied lower bound on the total variation distance.
    pub tv_epsilon: f64,
    /// Uniform-continuity modulus `sup_x { G(x + delta) - G(x) }` at `lp_delta`.
    pub modulus: f64,
    /// Whether `tv_epsilon <= 2 count modulus + lp_delta` within 1e-9 slack.
    pub inequality_holds: bool,
}

fn diff(f: &ModelPoint, g: &ModelPoint, x: f64) -> f64 {
    model::density_clamped(&f.0, f.1, x) - model::density_clamped(&g.0, g.1, x)
}

fn bisect_root(f: &ModelPoint, g: &ModelPoint, mut a: f64, mut b: f64) -> Result<f64> {
    let mut fa = diff(f, g, a);
    if fa == 0.0 {
        return Ok(a);
    }
    let fb = diff(f, g, b);
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::RootFinding(format!(
            "no sign change on [{a}, {b}] while locating an exceedance endpoint"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let fm = diff(f, g, mid);
        if fm == 0.0 || b - a <= ROOT_TOL {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Minimal decomposition of `{ x : f(x) > g(x) }` on the common domain.
///
/// Endpoints are located by a sign scan on a grid dense enough to straddle
/// every oscillation (64 points per period of the fastest factor) followed by
/// bisection to 1e-10.
pub fn exceedance_intervals(f: &ModelPoint, g: &ModelPoint) -> Result<IntervalSet> {
    let (flo, fhi) = f.0.support(f.1)?;
    let (glo, ghi) = g.0.support(g.1)?;
    let (lo, hi) = (flo.min(glo), fhi.max(ghi));
    let freq = f
        .0
        .oscillation_frequency(f.1)
        .max(g.0.oscillation_frequency(g.1));

    let two_pi = 2.0 * std::f64::consts::PI;
    let n_grid = (64.0 * (1.0 + freq * (hi - lo) / two_pi)).ceil() as usize;
    // Non-oscillatory pairs (mixtures) still need a dense scan to straddle
    // every hump.
    let n_grid = n_grid.max(4096);

    // Support boundaries interior to the domain are jump points of f - g;
    // include them as grid nodes so the scan brackets cleanly.
    let mut nodes: Vec<f64> = (0..=n_grid)
        .map(|i| lo + (hi - lo) * i as f64 / n_grid as f64)
        .collect();
    for e in [flo, fhi, glo, ghi] {
        if e > lo && e < hi {
            nodes.push(e);
        }
    }
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    nodes.dedup();

    let values: Vec<f64> = nodes.iter().map(|&x| diff(f, g, x)).collect();
    if values.iter().all(|v| v.abs() <= 1e-14) {
        return Ok(IntervalSet {
            intervals: Vec::new(),
            domain: (lo, hi),
        });
    }

    // Sorted boundary points: domain endpoints and refined roots.
    let mut cuts: Vec<f64> = vec![lo];
    for i in 0..nodes.len() - 1 {
        let (va, vb) = (values[i], values[i + 1]);
        if va == 0.0 {
            continue;
        }
        if vb == 0.0 || va.signum() != vb.signum() {
            let r = bisect_root(f, g, nodes[i], nodes[i + 1])?;
            if r > lo && r < hi {
                cuts.push(r);
            }
        }
    }
    cuts.push(hi);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() <= ROOT_TOL);

    let mut intervals = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if diff(f, g, 0.5 * (a + b)) > 0.0 {
            intervals.push((a, b));
        }
    }
    Ok(IntervalSet {
        intervals,
        domain: (lo, hi),
    })
}

/// Cardinality of the minimal decomposition of `{ f > g }`.
pub fn oscillation_count(f: &ModelPoint, g: &ModelPoint) -> Result<usize> {
    Ok(exceedance_intervals(f, g)?.count())
}

fn set_mass(point: &ModelPoint, set: &IntervalSet) -> f64 {
    set.intervals()
        .iter()
        .map(|&(a, b)| {
            model::cdf_clamped(&point.0, point.1, b) - model::cdf_clamped(&point.0, point.1, a)
        })
        .sum()
}

/// Smallest `delta >= 0` with `F(A) <= G(A^delta) + delta`, the
/// Levy-Prokhorov condition evaluated at the exceedance set itself. This is
/// the corridor width the oscillation inequality runs through.
fn lp_delta_at_set(f: &ModelPoint, g: &ModelPoint, set: &IntervalSet) -> f64 {
    let f_mass = set_mass(f, set);
    let ok = |delta: f64| f_mass <= set_mass(g, &set.enlarged(delta)) + delta + 1e-15;
    if ok(0.0) {
        return 0.0;
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Uniform-continuity modulus `sup_x { G(x + delta) - G(x) }` over the line.
fn continuity_modulus(g: &ModelPoint, delta: f64) -> f64 {
    if delta <= 0.0 {
        return 0.0;
    }
    let (lo, hi) = match g.0.support(g.1) {
        Ok(s) => s,
        Err(_) => return 0.0,
    };
    let n = 10_000usize;
    let mut sup: f64 = 0.0;
    for i in 0..=n {
        let x = (lo - delta) + (hi - lo + delta) * i as f64 / n as f64;
        let v = model::cdf_clamped(&g.0, g.1, x + delta) - model::cdf_clamped(&g.0, g.1, x);
        sup = sup.max(v);
    }
    sup
}

/// Evaluate the oscillation inequality along a parameter sequence against a
/// fixed reference density.
///
/// `eps` is a user-supplied lower bound on the total variation distance
/// between the sequence elements and the reference (0 when they coincide).
pub fn oscillation_inequality_check(
    sequence: &[Theta],
    g: &ModelPoint,
    eps: f64,
) -> Result<Vec<OscillationReport>> {
    if sequence.is_empty() {
        return Err(Error::Validation(
            "oscillation_inequality_check needs a nonempty parameter sequence".into(),
        ));
    }
    if eps < 0.0 {
        return Err(Error::Validation("eps must be nonnegative".into()));
    }
    let mut reports = Vec::with_capacity(sequence.len());
    for &theta in sequence {
        let f = (crate::model::FamilySpec::Cosine, theta);
        let set = exceedance_intervals(&f, g)?;
        let count = set.count();
        let lp_delta = lp_delta_at_set(&f, g, &set);
        let modulus = continuity_modulus(g, lp_delta);
        let bound = 2.0 * count as f64 * modulus + lp_delta;
        reports.push(OscillationReport {
            count,
            lp_delta,
            tv_epsilon: eps,
            modulus,
            inequality_holds: eps <= bound + 1e-9,
        });
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FamilySpec;
    use crate::rng;

    fn th(v: f64) -> Theta {
        Theta::new(v).unwrap()
    }

    fn cos_pt(v: f64) -> ModelPoint {
        (FamilySpec::Cosine, th(v))
    }

    #[test]
    fn exceedance_cos_2pi_vs_uniform() {
        // cos(2 pi x) > 0 on [0, 1/4) and (3/4, 1]
        let set = exceedance_intervals(&cos_pt(2.0 * std::f64::consts::PI), &cos_pt(0.0)).unwrap();
        assert_eq!(set.count(), 2);
        let iv = set.intervals();
        assert!((iv[0].0 - 0.0).abs() < 1e-9 && (iv[0].1 - 0.25).abs() < 1e-9);
        assert!((iv[1].0 - 0.75).abs() < 1e-9 && (iv[1].1 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exceedance_identical_is_empty() {
        let set = exceedance_intervals(&cos_pt(3.3), &cos_pt(3.3)).unwrap();
        assert_eq!(set.count(), 0);
    }

    #[test]
    fn exceedance_cos_4pi_vs_uniform() {
        let set = exceedance_intervals(&cos_pt(4.0 * std::f64::consts::PI), &cos_pt(0.0)).unwrap();
        assert_eq!(set.count(), 3);
    }

    #[test]
    fn oscillation_count_pattern() {
        for j in 1..=5usize {
            let theta = 2.0 * std::f64::consts::PI * j as f64;
            let c = oscillation_count(&cos_pt(theta), &cos_pt(0.0)).unwrap();
            assert_eq!(c, j + 1, "j = {j}");
        }
        assert_eq!(oscillation_count(&cos_pt(0.0), &cos_pt(0.0)).unwrap(), 0);
    }

    #[test]
    fn root_bracketing_invariant() {
        // f - g changes sign across every interior reported endpoint
        let f = cos_pt(37.7);
        let g = cos_pt(1.3);
        let set = exceedance_intervals(&f, &g).unwrap();
        let (lo, hi) = set.domain();
        for &(a, b) in set.intervals() {
            for e in [a, b] {
                if e > lo + 1e-9 && e < hi - 1e-9 {
                    let before = diff(&f, &g, e - 1e-6);
                    let after = diff(&f, &g, e + 1e-6);
                    assert!(
                        before.signum() != after.signum(),
                        "no sign change at endpoint {e}"
                    );
                }
            }
        }
    }

    #[test]
    fn minimality_on_grid() {
        // merging two adjacent intervals would absorb grid points where f <= g
        let f = cos_pt(50.0);
        let g = cos_pt(0.0);
        let set = exceedance_intervals(&f, &g).unwrap();
        let iv = set.intervals();
        for w in iv.windows(2) {
            let gap_mid = 0.5 * (w[0].1 + w[1].0);
            assert!(
                diff(&f, &g, gap_mid) <= 0.0,
                "gap between intervals contains only exceedance points"
            );
        }
    }

    #[test]
    fn gauss_mixture_count_bounded() {
        // K = 3 mixtures oscillate at most a bounded number of times around
        // each other; oracle = sign changes of f - g on a dense grid.
        let mut worst = 0usize;
        for k in 0..100u64 {
            let mk = |s: u64, off: u64| -> FamilySpec {
                let w1 = 0.2 + 0.6 * rng::uniform_draw(s, off);
                let w2 = (1.0 - w1) * rng::uniform_draw(s, off + 1);
                let w3 = 1.0 - w1 - w2;
                FamilySpec::gauss_mixture(
                    vec![w1, w2, w3],
                    vec![
                        4.0 * rng::uniform_draw(s, off + 2) - 2.0,
                        4.0 * rng::uniform_draw(s, off + 3) - 2.0,
                        4.0 * rng::uniform_draw(s, off + 4) - 2.0,
                    ],
                    vec![
                        0.5 + 4.0 * rng::uniform_draw(s, off + 5),
                        0.5 + 4.0 * rng::uniform_draw(s, off + 6),
                        0.5 + 4.0 * rng::uniform_draw(s, off + 7),
                    ],
                )
                .unwrap()
            };
            let fa = (mk(1000 + k, 0), th(0.0));
            let fb = (mk(1000 + k, 8), th(0.0));
            let count = oscillation_count(&fa, &fb).unwrap();
            assert!(count <= 6, "count {count} exceeds mixture bound");

            // dense-grid sign-change oracle
            let (lo, hi) = {
                let (a0, a1) = fa.0.support(fa.1).unwrap();
                let (b0, b1) = fb.0.support(fb.1).unwrap();
                (a0.min(b0), a1.max(b1))
            };
            let n = 100_000usize;
            let mut changes = 0usize;
            let mut prev = diff(&fa, &fb, lo);
            let mut positive_runs = if prev > 0.0 { 1 } else { 0 };
            for i in 1..=n {
                let x = lo + (hi - lo) * i as f64 / n as f64;
                let v = diff(&fa, &fb, x);
                if v.signum() != prev.signum() && v != 0.0 {
                    changes += 1;
                    if v > 0.0 {
                        positive_runs += 1;
                    }
                    prev = v;
                }
            }
            let _ = changes;
            assert_eq!(count, positive_runs, "grid oracle disagrees (pair {k})");
            worst = worst.max(count);
        }
        assert!(worst >= 1, "degenerate test: no oscillations seen at all");
    }

    #[test]
    fn inequality_along_divergent_sequence() {
        let thetas: Vec<Theta> = (1..=50)
            .map(|j| th(2.0 * std::f64::consts::PI * j as f64))
            .collect();
        let reports = oscillation_inequality_check(&thetas, &cos_pt(0.0), 0.30).unwrap();
        let mut prev = 0usize;
        for (j, r) in reports.iter().enumerate() {
            assert!(r.inequality_holds, "inequality failed at j = {}", j + 1);
            assert!(r.count > prev, "count not strictly increasing at {}", j + 1);
            prev = r.count;
        }
    }

    #[test]
    fn inequality_identical_pair() {
        let reports = oscillation_inequality_check(&[th(1.7)], &cos_pt(1.7), 0.0).unwrap();
        assert_eq!(reports[0].count, 0);
        assert_eq!(reports[0].lp_delta, 0.0);
        assert!(reports[0].inequality_holds);
    }

    #[test]
    fn inequality_constant_sequence() {
        let theta = 2.0 * std::f64::consts::PI;
        let reports = oscillation_inequality_check(&[th(theta); 3], &cos_pt(0.0), 0.30).unwrap();
        for r in &reports {
            assert_eq!(r.count, 2);
            assert!(r.inequality_holds);
            assert!((r.lp_delta - reports[0].lp_delta).abs() < 1e-12);
        }
    }

    #[test]
    fn levy_vanishes_while_count_grows() {
        use crate::metrics::levy_distance;
        let mut prev_count = 0usize;
        let mut prev_levy = f64::INFINITY;
        for j in (10..=200).step_by(10) {
            let theta = 2.0 * std::f64::consts::PI * j as f64;
            let count = oscillation_count(&cos_pt(theta), &cos_pt(0.0)).unwrap();
            let levy = levy_distance(&cos_pt(theta), &cos_pt(0.0)).unwrap();
            assert!(count > prev_count);
            assert!(levy < prev_levy);
            prev_count = count;
            prev_levy = levy;
        }
    }
}
