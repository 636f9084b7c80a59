//! Brute-force references for the hull index, the sublist LP engine and the
//! solver. Everything here is quadratic or worse on purpose and shares no
//! code with the fast paths beyond the domain types and the orientation
//! predicate.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{critical_value, DualPoint, HalfPlane, LowestPoint, ProblemInstance};

/// Summary of an oracle comparison run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OracleReport {
    pub cases: usize,
    pub max_deviation: f64,
    pub first_failure: Option<String>,
}

impl OracleReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Compares `actual` against `expected` at relative tolerance `tol`.
    pub fn check<F>(&mut self, expected: f64, actual: f64, tol: f64, describe: F) -> bool
    where
        F: FnOnce() -> String,
    {
        self.cases += 1;
        let dev = relative_deviation(expected, actual);
        if dev > self.max_deviation || dev.is_nan() {
            self.max_deviation = if dev.is_nan() { f64::INFINITY } else { dev };
        }
        let ok = dev <= tol;
        if !ok && self.first_failure.is_none() {
            self.first_failure = Some(format!(
                "{} (expected {expected:e}, got {actual:e})",
                describe()
            ));
        }
        ok
    }

    /// Records a boolean outcome.
    pub fn check_that<F>(&mut self, ok: bool, describe: F) -> bool
    where
        F: FnOnce() -> String,
    {
        self.cases += 1;
        if !ok && self.first_failure.is_none() {
            self.first_failure = Some(describe());
        }
        ok
    }

    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }

    pub fn merge(&mut self, other: &OracleReport) {
        self.cases += other.cases;
        self.max_deviation = self.max_deviation.max(other.max_deviation);
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure.clone();
        }
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cases={} max_rel_deviation={:.3e} status={}",
            self.cases,
            self.max_deviation,
            if self.passed() { "ok" } else { "FAIL" }
        )?;
        if let Some(msg) = &self.first_failure {
            write!(f, " first_failure=[{msg}]")?;
        }
        Ok(())
    }
}

/// `|a − b| / max(|a|, |b|, tiny)`, with exact equality mapping to zero.
pub fn relative_deviation(expected: f64, actual: f64) -> f64 {
    if expected == actual {
        return 0.0;
    }
    let scale = expected.abs().max(actual.abs()).max(f64::MIN_POSITIVE);
    (expected - actual).abs() / scale
}

/// Optimal 1-center of points `i..=j` (0-based) by enumerating every pair.
pub fn alpha_brute(instance: &ProblemInstance, i: usize, j: usize) -> Result<LowestPoint> {
    let pts = instance.points();
    if i > j || j >= pts.len() {
        return Err(Error::IndexOutOfRange {
            i,
            j,
            len: pts.len(),
        });
    }
    let mut best = LowestPoint::new(pts[i].position, 0.0);
    for l in i..=j {
        for r in l + 1..=j {
            let cv = critical_value(&pts[l], &pts[r]);
            if cv.y > best.y {
                best = cv;
            }
        }
    }
    Ok(best)
}

/// Lowest point of half-planes `i..=j` of an arbitrary sequence: the highest
/// crossing over all (negative-slope, positive-slope) line pairs.
pub fn lowest_point_brute(halfplanes: &[HalfPlane], i: usize, j: usize) -> Result<LowestPoint> {
    if i > j || j >= halfplanes.len() {
        return Err(Error::IndexOutOfRange {
            i,
            j,
            len: halfplanes.len(),
        });
    }
    let range = &halfplanes[i..=j];
    let mut best: Option<LowestPoint> = None;
    for d in range.iter().filter(|h| h.slope() < 0.0) {
        for u in range.iter().filter(|h| h.slope() > 0.0) {
            // d.slope·(x − d.r) = u.slope·(x − u.r), solved relative to the
            // intercepts so coincident intercepts give exactly y = 0
            let (a1, r1, a2, r2) = (d.slope(), d.x_intercept(), u.slope(), u.x_intercept());
            let x = r1 + a2 * (r1 - r2) / (a1 - a2);
            let y = a1 * a2 * (r1 - r2) / (a1 - a2);
            if best.is_none_or(|b| y > b.y) {
                best = Some(LowestPoint::new(x, y));
            }
        }
    }
    best.ok_or(Error::UnboundedBelow { i, j })
}

/// All 1-center values `α(i, j)` of an instance, built from pairwise critical
/// values in `O(n²)`.
#[derive(Debug, Clone)]
pub struct AlphaTable {
    n: usize,
    cells: Vec<LowestPoint>,
}

impl AlphaTable {
    pub fn new(instance: &ProblemInstance) -> Self {
        let pts = instance.points();
        let n = pts.len();
        let mut cells = vec![LowestPoint::new(0.0, 0.0); n * n];
        for j in 0..n {
            cells[j * n + j] = LowestPoint::new(pts[j].position, 0.0);
            // best pair (t, j) with t in i..j, then fold in α(i, j − 1)
            let mut with_j = LowestPoint::new(pts[j].position, 0.0);
            for i in (0..j).rev() {
                let cv = critical_value(&pts[i], &pts[j]);
                if cv.y > with_j.y {
                    with_j = cv;
                }
                let prev = cells[i * n + j - 1];
                cells[i * n + j] = if prev.y >= with_j.y { prev } else { with_j };
            }
        }
        AlphaTable { n, cells }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `α(i, j)` for `i ≤ j` (0-based, inclusive).
    pub fn get(&self, i: usize, j: usize) -> LowestPoint {
        assert!(i <= j && j < self.n);
        self.cells[i * self.n + j]
    }
}

/// Optimal k-center radius by dynamic programming over all breakpoints.
pub fn dp_solve(instance: &ProblemInstance, k: usize) -> f64 {
    dp_solve_with(&AlphaTable::new(instance), k)
}

/// [`dp_solve`] over a precomputed table.
pub fn dp_solve_with(table: &AlphaTable, k: usize) -> f64 {
    let n = table.len();
    if k >= n {
        return 0.0;
    }
    // best[j]: optimum covering the first j points with the current number
    // of intervals.
    let mut best: Vec<f64> = (0..=n)
        .map(|j| if j == 0 { 0.0 } else { table.get(0, j - 1).y })
        .collect();
    for _ in 1..k {
        let mut next = vec![f64::INFINITY; n + 1];
        next[0] = 0.0;
        for j in 1..=n {
            next[j] = (1..j)
                .map(|i| best[i].max(table.get(i, j - 1).y))
                .fold(best[j], f64::min);
        }
        best = next;
    }
    best[n]
}

/// Minimizes `max_t w_t·|x − p_t|` over points `i..=j` directly by ternary
/// search. Used to cross-check the pairwise formula itself.
pub fn minimize_direct(instance: &ProblemInstance, i: usize, j: usize) -> LowestPoint {
    let pts = &instance.points()[i..=j];
    let cost = |x: f64| pts.iter().map(|p| p.cost(x)).fold(0.0, f64::max);
    let (mut lo, mut hi) = (pts[0].position, pts[pts.len() - 1].position);
    for _ in 0..300 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if cost(m1) <= cost(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let x = 0.5 * (lo + hi);
    LowestPoint::new(x, cost(x))
}

/// Lower hull of a point set: sorted by abscissa, equal abscissas keep the
/// lowest ordinate, collinear vertices dropped.
pub fn naive_lower_hull(points: &[DualPoint]) -> Vec<DualPoint> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|p, q| p.a.total_cmp(&q.a).then(p.b.total_cmp(&q.b)));
    let mut hull: Vec<DualPoint> = Vec::with_capacity(sorted.len());
    for p in sorted {
        if let Some(last) = hull.last() {
            if last.a == p.a {
                continue;
            }
        }
        while hull.len() >= 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Reference simplicity check for a polygonal path: every pair of
/// non-adjacent segments is tested for any contact, and adjacent segments
/// for overlap beyond their shared vertex.
pub fn brute_path_simple(vertices: &[DualPoint]) -> bool {
    let m = vertices.len().saturating_sub(1);
    for s in 0..m {
        for t in s + 1..m {
            let (p1, p2) = (vertices[s], vertices[s + 1]);
            let (q1, q2) = (vertices[t], vertices[t + 1]);
            if t == s + 1 {
                // shared vertex p2 == q1; they overlap iff q2 lies on segment
                // p1p2 or p1 lies on segment q1q2 (folding back)
                if p1 == p2 || q1 == q2 || on_segment(p1, p2, q2) || on_segment(q1, q2, p1) {
                    return false;
                }
            } else if segments_touch(p1, p2, q1, q2) {
                return false;
            }
        }
    }
    true
}

fn orient(p: DualPoint, q: DualPoint, r: DualPoint) -> f64 {
    robust::orient2d(
        robust::Coord { x: p.a, y: p.b },
        robust::Coord { x: q.a, y: q.b },
        robust::Coord { x: r.a, y: r.b },
    )
}

fn within(p: DualPoint, q: DualPoint, r: DualPoint) -> bool {
    r.a >= p.a.min(q.a) && r.a <= p.a.max(q.a) && r.b >= p.b.min(q.b) && r.b <= p.b.max(q.b)
}

fn on_segment(p: DualPoint, q: DualPoint, r: DualPoint) -> bool {
    r != q && orient(p, q, r) == 0.0 && within(p, q, r)
}

fn segments_touch(p1: DualPoint, p2: DualPoint, q1: DualPoint, q2: DualPoint) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && within(q1, q2, p1))
        || (d2 == 0.0 && within(q1, q2, p2))
        || (d3 == 0.0 && within(p1, p2, q1))
        || (d4 == 0.0 && within(p1, p2, q2))
}
