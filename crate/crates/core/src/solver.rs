//! The k-center optimizer.
//!
//! In an optimal solution every center serves a run of consecutive demand
//! points, so the problem is choosing at most `k` contiguous intervals that
//! minimize the largest interval value `α(i, j)`, the optimal 1-center cost
//! of points `i..=j`. `α` is answered by a [`SublistLpEngine`] over the `2n`
//! half-planes of the instance: points `i..=j` own half-planes `2i..=2j+1`
//! (in 1-based terms, points `i..j` own `2i−1..2j`).
//!
//! Indices are 0-based and inclusive throughout. Breakpoints are reported as
//! exclusive interval ends, which coincide with the 1-based index of each
//! interval's last point.
//!
//! Feasibility of a radius `ε` is decided greedily: starting from the first
//! uncovered point, take the longest run with `α ≤ ε`. The optimum is the
//! smallest `α` value for which the greedy needs at most `k` runs.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::lp::SublistLpEngine;
use crate::model::{LowestPoint, ProblemInstance};

/// Rows sampled from the candidate matrix when seeding the radius search.
const SAMPLE_ROWS: usize = 256;

/// `α(i, j)` queries over a fixed instance.
#[derive(Debug)]
pub struct AlphaEngine {
    instance: ProblemInstance,
    lp: SublistLpEngine,
    alpha_queries: AtomicU64,
    probes: AtomicU64,
}

/// Counters accumulated by an [`AlphaEngine`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub alpha_queries: u64,
    pub hull_accesses: u64,
    pub feasibility_probes: u64,
}

impl AlphaEngine {
    pub fn build(instance: &ProblemInstance) -> Self {
        let lp = SublistLpEngine::build(instance.halfplanes())
            .expect("a normalized instance yields an ordered half-plane sequence");
        AlphaEngine {
            instance: instance.clone(),
            lp,
            alpha_queries: AtomicU64::new(0),
            probes: AtomicU64::new(0),
        }
    }

    /// Builds the engine over half-planes that differ from the instance's own;
    /// lets tests hand the verifier a deliberately wrong engine.
    #[doc(hidden)]
    pub fn with_halfplane_source(instance: &ProblemInstance, source: &ProblemInstance) -> Self {
        assert_eq!(instance.len(), source.len());
        let lp = SublistLpEngine::build(source.halfplanes())
            .expect("a normalized instance yields an ordered half-plane sequence");
        AlphaEngine {
            instance: instance.clone(),
            lp,
            alpha_queries: AtomicU64::new(0),
            probes: AtomicU64::new(0),
        }
    }

    pub fn instance(&self) -> &ProblemInstance {
        &self.instance
    }

    pub fn len(&self) -> usize {
        self.instance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instance.is_empty()
    }

    /// Optimal 1-center `(center, cost)` of points `i..=j`.
    pub fn alpha(&self, i: usize, j: usize) -> Result<LowestPoint> {
        let n = self.len();
        if i > j || j >= n {
            return Err(Error::IndexOutOfRange { i, j, len: n });
        }
        Ok(self.alpha_unchecked(i, j))
    }

    #[inline]
    fn alpha_unchecked(&self, i: usize, j: usize) -> LowestPoint {
        self.alpha_queries.fetch_add(1, Ordering::Relaxed);
        self.lp
            .lowest_point(2 * i, 2 * j + 1)
            .expect("every point contributes both slope signs")
    }

    pub fn stats(&self) -> EngineStats {
        EngineStats {
            alpha_queries: self.alpha_queries.load(Ordering::Relaxed),
            hull_accesses: self.lp.stats().hull_accesses,
            feasibility_probes: self.probes.load(Ordering::Relaxed),
        }
    }

    pub fn reset_stats(&self) {
        self.alpha_queries.store(0, Ordering::Relaxed);
        self.probes.store(0, Ordering::Relaxed);
        self.lp.reset_stats();
    }

    /// Greedy feasibility test: can `k` centers serve every point at cost at
    /// most `eps`?
    pub fn feasible(&self, eps: f64, k: usize) -> FeasibilityOutcome {
        self.probes.fetch_add(1, Ordering::Relaxed);
        let n = self.len();
        let mut out = FeasibilityOutcome::default();
        let mut start = 0;
        while start < n && out.breakpoints.len() < k {
            let (end, center) = self.longest_run(start, |v| v <= eps);
            out.breakpoints.push(end + 1);
            out.centers.push(center.x);
            start = end + 1;
        }
        out.feasible = start == n;
        out
    }

    /// Longest run `start..=end` whose value passes `fits`, by doubling then
    /// bisection. `fits` must be monotone along the row and accept 0.
    fn longest_run<F>(&self, start: usize, mut fits: F) -> (usize, LowestPoint)
    where
        F: FnMut(f64) -> bool,
    {
        let n = self.len();
        let mut good = start;
        let mut good_val = LowestPoint::new(self.instance.points()[start].position, 0.0);
        let mut step = 1;
        let mut bad = n;
        while start + step < n {
            let v = self.alpha_unchecked(start, start + step);
            if fits(v.y) {
                good = start + step;
                good_val = v;
                step *= 2;
            } else {
                bad = start + step;
                break;
            }
        }
        while bad - good > 1 {
            let mid = good + (bad - good) / 2;
            let v = self.alpha_unchecked(start, mid);
            if fits(v.y) {
                good = mid;
                good_val = v;
            } else {
                bad = mid;
            }
        }
        (good, good_val)
    }

    /// Smallest candidate value `α(i, j)` at which `k` centers suffice.
    ///
    /// The search runs the greedy with the optimum itself as the threshold.
    /// A comparison `α ≤ ψ*` that the current bracket `lo < ψ* ≤ hi` cannot
    /// settle is settled exactly by one feasibility probe just below `α`,
    /// because feasibility flips from false to true precisely at `ψ*`. The
    /// bracket is seeded from a sample of the candidate matrix.
    pub fn optimal_radius(&self, k: usize) -> f64 {
        let n = self.len();
        if k >= n {
            return 0.0;
        }
        let mut bracket = Bracket {
            lo: 0.0,
            hi: self.alpha_unchecked(0, n - 1).y,
        };
        if k == 1 {
            return bracket.hi;
        }
        self.seed_bracket(k, &mut bracket);

        let mut start = 0;
        let mut used = 0;
        let mut radius: f64 = 0.0;
        while start < n {
            assert!(used < k, "bracket upper end must stay feasible");
            let (end, value) = self.longest_run(start, |v| self.settle(v, k, &mut bracket));
            radius = radius.max(value.y);
            used += 1;
            start = end + 1;
        }
        radius
    }

    /// Decides `value ≤ ψ*`.
    fn settle(&self, value: f64, k: usize, bracket: &mut Bracket) -> bool {
        if value <= bracket.lo {
            return true;
        }
        if value > bracket.hi {
            return false;
        }
        let below = next_down(value);
        if below <= bracket.lo {
            return true;
        }
        if self.feasible(below, k).feasible {
            bracket.hi = below;
            false
        } else {
            bracket.lo = below;
            true
        }
    }

    /// Narrows the bracket by binary search over sampled candidate values.
    fn seed_bracket(&self, k: usize, bracket: &mut Bracket) {
        let n = self.len();
        let rows = n.min(SAMPLE_ROWS);
        let mut lengths = Vec::new();
        let mut len = 2usize;
        while len <= n {
            lengths.push(len);
            let half_step = len + len / 2;
            if half_step <= n {
                lengths.push(half_step);
            }
            len *= 2;
        }
        let mut samples = Vec::with_capacity(rows * lengths.len());
        for r in 0..rows {
            let start = r * n / rows;
            for &len in &lengths {
                if start + len <= n {
                    samples.push(self.alpha_unchecked(start, start + len - 1).y);
                }
            }
        }
        samples.retain(|&v| v > bracket.lo && v < bracket.hi);
        samples.sort_by(f64::total_cmp);
        samples.dedup();
        let (mut lo, mut hi) = (0, samples.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            let v = samples[mid];
            if self.feasible(v, k).feasible {
                bracket.hi = v;
                hi = mid;
            } else {
                bracket.lo = v;
                lo = mid + 1;
            }
        }
    }

    /// Reference selector: sorts every candidate `α(i, j)` and binary-searches
    /// for the smallest feasible one. Quadratic; intended for small `n`.
    pub fn optimal_radius_enumerated(&self, k: usize) -> f64 {
        let mut values = self.candidate_values();
        values.sort_by(f64::total_cmp);
        values.dedup();
        let (mut lo, mut hi) = (0, values.len() - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.feasible(values[mid], k).feasible {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        values[lo]
    }

    /// Every entry `α(i, j)`, `i ≤ j`, of the candidate matrix.
    pub fn candidate_values(&self) -> Vec<f64> {
        let n = self.len();
        let mut values = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                values.push(self.alpha_unchecked(i, j).y);
            }
        }
        values
    }
}

#[derive(Debug, Clone, Copy)]
struct Bracket {
    // lo is infeasible, hi feasible
    lo: f64,
    hi: f64,
}

fn next_down(v: f64) -> f64 {
    debug_assert!(v > 0.0 && v.is_finite());
    f64::from_bits(v.to_bits() - 1)
}

/// Result of a greedy feasibility test.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeasibilityOutcome {
    pub feasible: bool,
    /// Exclusive end of each greedy interval (at most `k` of them).
    pub breakpoints: Vec<usize>,
    /// Optimal center of each interval.
    pub centers: Vec<f64>,
}

/// An optimal k-center solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub radius: f64,
    pub centers: Vec<f64>,
    pub breakpoints: Vec<usize>,
}

impl Solution {
    /// Number of points served by each center.
    pub fn interval_sizes(&self) -> Vec<usize> {
        let mut prev = 0;
        self.breakpoints
            .iter()
            .map(|&b| {
                let size = b - prev;
                prev = b;
                size
            })
            .collect()
    }
}

/// Solves weighted k-center on a normalized instance.
pub fn solve(instance: &ProblemInstance, k: usize) -> Result<Solution> {
    if k < 1 {
        return Err(Error::InvalidK(k));
    }
    let engine = AlphaEngine::build(instance);
    Ok(solve_with(&engine, k))
}

/// [`solve`] over a prebuilt engine.
pub fn solve_with(engine: &AlphaEngine, k: usize) -> Solution {
    let radius = engine.optimal_radius(k);
    let outcome = engine.feasible(radius, k);
    debug_assert!(outcome.feasible);
    Solution {
        radius,
        centers: outcome.centers,
        breakpoints: outcome.breakpoints,
    }
}

/// One horizontal piece of a step function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPiece {
    pub start: f64,
    pub end: f64,
    pub height: f64,
}

/// A step function with at most `k` pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    pub pieces: Vec<StepPiece>,
}

impl StepFunction {
    /// Height at `x`; pieces are closed on the left.
    pub fn eval(&self, x: f64) -> Option<f64> {
        self.pieces
            .iter()
            .find(|p| x >= p.start && x <= p.end)
            .map(|p| p.height)
    }
}

/// Fits a step function with at most `k` pieces to weighted points
/// `(x, y, w)` minimizing the largest weighted vertical error.
///
/// `x` must be strictly increasing and `y` nondecreasing. With monotone `y`
/// the problem is k-center on the `y` values; piece boundaries between
/// groups sit midway between the neighbouring `x` values.
pub fn solve_wsf(points: &[(f64, f64, f64)], k: usize) -> Result<(StepFunction, f64)> {
    if k < 1 {
        return Err(Error::InvalidK(k));
    }
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(index) = points.iter().position(|p| !p.0.is_finite()) {
        return Err(Error::InvalidCoordinate {
            index,
            value: points[index].0,
        });
    }
    for (index, w) in points.windows(2).enumerate() {
        if w[1].0 <= w[0].0 {
            return Err(Error::InvalidCoordinate {
                index: index + 1,
                value: w[1].0,
            });
        }
        if w[1].1 < w[0].1 {
            return Err(Error::NotMonotone { index: index + 1 });
        }
    }
    let instance = ProblemInstance::normalize(points.iter().map(|&(_, y, w)| (y, w)))?;
    let solution = solve(&instance, k)?;

    // group g of the normalized instance covers the run of points sharing y
    let mut group_end = Vec::with_capacity(instance.len());
    for (t, p) in points.iter().enumerate() {
        if t + 1 == points.len() || points[t + 1].1 != p.1 {
            group_end.push(t);
        }
    }
    let mut pieces = Vec::with_capacity(solution.centers.len());
    let mut first = 0;
    for (&brk, &height) in solution.breakpoints.iter().zip(&solution.centers) {
        let last = group_end[brk - 1];
        let start = if first == 0 {
            points[0].0
        } else {
            0.5 * (points[first - 1].0 + points[first].0)
        };
        let end = if last + 1 == points.len() {
            points[last].0
        } else {
            0.5 * (points[last].0 + points[last + 1].0)
        };
        pieces.push(StepPiece { start, end, height });
        first = last + 1;
    }
    Ok((StepFunction { pieces }, solution.radius))
}
