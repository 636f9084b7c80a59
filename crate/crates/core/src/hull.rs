//! Lower hulls of contiguous stretches of a dual path.
//!
//! A slope-sign-homogeneous, x-intercept-ordered family of half-planes maps
//! to a sequence of dual points; joining consecutive points gives a simple
//! polygonal path. [`SubpathHullIndex`] answers "lower hull of vertices
//! `i..=j`" for any contiguous index range.
//!
//! The index is a static balanced tree over vertex indices. Every node keeps
//! the lower hull of its index range as a vertex run sorted by abscissa, so a
//! query range splits into `O(log n)` canonical runs, each binary-searchable.
//! A [`HullHandle`] is that list of runs; it is not merged into a single hull
//! unless [`HullHandle::vertices`] is asked for.
//!
//! Hull conventions: collinear vertices are dropped, and among points that
//! share an abscissa only the lowest survives.

use crate::error::{Error, Result};
use crate::model::{dual_of, DualPoint, HalfPlane, SlopeSign};

/// The dual points of a sign-homogeneous half-plane family, in index order.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPath {
    vertices: Vec<DualPoint>,
    intercepts: Vec<f64>,
    sign: SlopeSign,
}

impl DualPath {
    pub fn vertices(&self) -> &[DualPoint] {
        &self.vertices
    }

    /// X-intercepts of the source half-planes, parallel to `vertices`.
    pub fn intercepts(&self) -> &[f64] {
        &self.intercepts
    }

    pub fn sign(&self) -> SlopeSign {
        self.sign
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Builds the dual path of `family`. Every slope must have `expected` sign
/// and the x-intercepts must be nondecreasing.
pub fn build_path(family: &[HalfPlane], expected: SlopeSign) -> Result<DualPath> {
    if family.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut vertices = Vec::with_capacity(family.len());
    let mut intercepts = Vec::with_capacity(family.len());
    for (index, h) in family.iter().enumerate() {
        match SlopeSign::of(h.slope()) {
            None => return Err(Error::ZeroSlope { index }),
            Some(s) if s != expected => {
                return Err(Error::SignMismatch {
                    index,
                    slope: h.slope(),
                })
            }
            Some(_) => {}
        }
        if index > 0 && h.x_intercept() < family[index - 1].x_intercept() {
            return Err(Error::NotInterceptOrdered { index });
        }
        vertices.push(dual_of(h));
        intercepts.push(h.x_intercept());
    }
    Ok(DualPath {
        vertices,
        intercepts,
        sign: expected,
    })
}

/// Dual path of `family` in the given order with no ordering or sign checks.
/// Only for exercising [`check_simple`] on paths that are not intercept-ordered.
#[doc(hidden)]
pub fn build_path_unchecked(family: &[HalfPlane], sign: SlopeSign) -> DualPath {
    DualPath {
        vertices: family.iter().map(dual_of).collect(),
        intercepts: family.iter().map(|h| h.x_intercept()).collect(),
        sign,
    }
}

/// A hull vertex together with the x-intercept of its primal line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HullVertex {
    pub point: DualPoint,
    pub intercept: f64,
}

impl HullVertex {
    /// Height of the primal line at `x`.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.point.a * (x - self.intercept)
    }
}

/// One canonical lower hull, vertices sorted by increasing abscissa.
///
/// Read as lines, the vertices are the pieces of an upper envelope from left
/// to right; the breakpoint between pieces `k` and `k + 1` is the slope of
/// hull edge `k`.
#[derive(Debug, Clone, Copy)]
pub struct HullPiece<'a> {
    verts: &'a [HullVertex],
}

impl<'a> HullPiece<'a> {
    pub fn new(verts: &'a [HullVertex]) -> Self {
        HullPiece { verts }
    }

    pub fn vertices(&self) -> &'a [HullVertex] {
        self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    #[inline]
    pub fn vertex(&self, k: usize) -> &'a HullVertex {
        &self.verts[k]
    }

    /// Abscissa where envelope piece `k` hands over to piece `k + 1`.
    #[inline]
    pub fn breakpoint(&self, k: usize) -> f64 {
        let (p, q) = (self.verts[k].point, self.verts[k + 1].point);
        (q.b - p.b) / (q.a - p.a)
    }

    /// Range of `x` over which envelope piece `k` is the maximum.
    #[inline]
    pub fn active_interval(&self, k: usize) -> (f64, f64) {
        let lo = if k == 0 {
            f64::NEG_INFINITY
        } else {
            self.breakpoint(k - 1)
        };
        let hi = if k + 1 == self.verts.len() {
            f64::INFINITY
        } else {
            self.breakpoint(k)
        };
        (lo, hi)
    }

    /// Envelope piece active at `x` and the envelope height there.
    /// `accesses` is bumped once per vertex pair inspected.
    pub fn envelope_at(&self, x: f64, accesses: &mut u64) -> (usize, f64) {
        let (mut lo, mut hi) = (0, self.verts.len() - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            *accesses += 2;
            if self.breakpoint(mid) < x {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        *accesses += 1;
        (lo, self.verts[lo].eval(x))
    }

    /// Index of a vertex maximizing the dot product with `(dx, dy)`; ties go
    /// to the smaller abscissa.
    pub fn extreme_index(&self, dx: f64, dy: f64) -> usize {
        let n = self.verts.len();
        let dot = |k: usize| self.verts[k].point.dot(dx, dy);
        if dy >= 0.0 {
            // convex along the chain: an endpoint wins
            return if dot(n - 1) > dot(0) { n - 1 } else { 0 };
        }
        // unimodal: first vertex whose successor does not improve
        let (mut lo, mut hi) = (0, n - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if dot(mid + 1) > dot(mid) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// Static index answering lower-hull queries on contiguous vertex ranges of
/// a [`DualPath`].
#[derive(Debug, Clone)]
pub struct SubpathHullIndex {
    len: usize,
    leaves: usize,
    sign: SlopeSign,
    // spans[node] = (start, len) into `verts`; node 1 is the root
    spans: Vec<(u32, u32)>,
    verts: Vec<HullVertex>,
}

impl SubpathHullIndex {
    /// Builds the index in `O(n log n)` time.
    pub fn build(path: &DualPath) -> Self {
        let len = path.len();
        let leaves = len.next_power_of_two().max(1);
        let mut spans = vec![(0u32, 0u32); 2 * leaves];
        let mut verts: Vec<HullVertex> = Vec::with_capacity(4 * len);
        for (t, (&point, &intercept)) in path.vertices.iter().zip(&path.intercepts).enumerate() {
            spans[leaves + t] = (verts.len() as u32, 1);
            verts.push(HullVertex { point, intercept });
        }
        let mut merged: Vec<HullVertex> = Vec::new();
        for node in (1..leaves).rev() {
            let (ls, ll) = spans[2 * node];
            let (rs, rl) = spans[2 * node + 1];
            if rl == 0 {
                spans[node] = (ls, ll);
                continue;
            }
            merged.clear();
            merge_by_abscissa(
                &verts[ls as usize..(ls + ll) as usize],
                &verts[rs as usize..(rs + rl) as usize],
                &mut merged,
            );
            let start = verts.len();
            push_lower_hull(&merged, &mut verts);
            spans[node] = (start as u32, (verts.len() - start) as u32);
        }
        verts.shrink_to_fit();
        SubpathHullIndex {
            len,
            leaves,
            sign: path.sign,
            spans,
            verts,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sign(&self) -> SlopeSign {
        self.sign
    }

    /// Total number of stored hull vertices across all nodes.
    pub fn stored_vertices(&self) -> usize {
        self.verts.len()
    }

    /// Lower hull of path vertices `i..=j` as a list of canonical runs.
    pub fn hull_query(&self, i: usize, j: usize) -> Result<HullHandle<'_>> {
        if i > j || j >= self.len {
            return Err(Error::IndexOutOfRange {
                i,
                j,
                len: self.len,
            });
        }
        let mut pieces = Vec::new();
        self.for_each_piece(i, j, |p| pieces.push(p));
        Ok(HullHandle { i, j, pieces })
    }

    /// Visits the canonical runs covering `i..=j` in index order.
    pub(crate) fn for_each_piece<'a, F>(&'a self, i: usize, j: usize, mut visit: F)
    where
        F: FnMut(HullPiece<'a>),
    {
        let mut right_nodes = [0usize; 64];
        let mut right_len = 0;
        let (mut l, mut r) = (i + self.leaves, j + 1 + self.leaves);
        while l < r {
            if l & 1 == 1 {
                visit(self.piece(l));
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                right_nodes[right_len] = r;
                right_len += 1;
            }
            l >>= 1;
            r >>= 1;
        }
        for &node in right_nodes[..right_len].iter().rev() {
            visit(self.piece(node));
        }
    }

    fn piece(&self, node: usize) -> HullPiece<'_> {
        let (s, l) = self.spans[node];
        HullPiece::new(&self.verts[s as usize..(s + l) as usize])
    }
}

fn merge_by_abscissa(left: &[HullVertex], right: &[HullVertex], out: &mut Vec<HullVertex>) {
    let (mut x, mut y) = (0, 0);
    while x < left.len() && y < right.len() {
        let (p, q) = (left[x].point, right[y].point);
        if (p.a, p.b) <= (q.a, q.b) {
            out.push(left[x]);
            x += 1;
        } else {
            out.push(right[y]);
            y += 1;
        }
    }
    out.extend_from_slice(&left[x..]);
    out.extend_from_slice(&right[y..]);
}

/// Monotone-chain lower hull of `sorted` (by abscissa, then ordinate),
/// appended to `out`.
fn push_lower_hull(sorted: &[HullVertex], out: &mut Vec<HullVertex>) {
    let base = out.len();
    for &v in sorted {
        if out.len() > base && out[out.len() - 1].point.a == v.point.a {
            continue;
        }
        while out.len() >= base + 2
            && orient(out[out.len() - 2].point, out[out.len() - 1].point, v.point) <= 0.0
        {
            out.pop();
        }
        out.push(v);
    }
}

#[inline]
pub(crate) fn orient(p: DualPoint, q: DualPoint, r: DualPoint) -> f64 {
    robust::orient2d(
        robust::Coord { x: p.a, y: p.b },
        robust::Coord { x: q.a, y: q.b },
        robust::Coord { x: r.a, y: r.b },
    )
}

/// Lower hull of path vertices `i..=j`, held as canonical runs.
#[derive(Debug, Clone)]
pub struct HullHandle<'a> {
    i: usize,
    j: usize,
    pieces: Vec<HullPiece<'a>>,
}

impl<'a> HullHandle<'a> {
    /// Wraps explicit runs, e.g. hulls computed elsewhere.
    pub fn from_pieces(i: usize, j: usize, pieces: Vec<HullPiece<'a>>) -> Self {
        HullHandle { i, j, pieces }
    }

    pub fn range(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn pieces(&self) -> &[HullPiece<'a>] {
        &self.pieces
    }

    /// The merged lower hull, left to right.
    pub fn vertices(&self) -> Vec<DualPoint> {
        let mut all: Vec<HullVertex> = self
            .pieces
            .iter()
            .flat_map(|p| p.vertices().iter().copied())
            .collect();
        all.sort_by(|p, q| {
            p.point
                .a
                .total_cmp(&q.point.a)
                .then(p.point.b.total_cmp(&q.point.b))
        });
        let mut hull = Vec::with_capacity(all.len());
        push_lower_hull(&all, &mut hull);
        hull.into_iter().map(|v| v.point).collect()
    }

    /// A hull vertex maximizing the dot product with `direction`, ties
    /// broken toward the smaller abscissa.
    pub fn extreme_vertex(&self, direction: (f64, f64)) -> Result<DualPoint> {
        let (dx, dy) = direction;
        if dx == 0.0 && dy == 0.0 {
            return Err(Error::DegenerateDirection);
        }
        let mut best: Option<DualPoint> = None;
        for piece in self.pieces.iter().filter(|p| !p.is_empty()) {
            let cand = piece.vertex(piece.extreme_index(dx, dy)).point;
            best = match best {
                None => Some(cand),
                Some(b) => {
                    let (db, dc) = (b.dot(dx, dy), cand.dot(dx, dy));
                    if dc > db || (dc == db && cand.a < b.a) {
                        Some(cand)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best.ok_or(Error::EmptySide)
    }
}

/// True iff no two non-adjacent segments of the path touch and no two
/// adjacent segments overlap beyond their shared vertex. Quadratic in the
/// worst case; meant for test-sized inputs.
pub fn check_simple(path: &DualPath) -> bool {
    let v = &path.vertices;
    if v.len() < 3 {
        return true;
    }
    let segs = v.len() - 1;
    // sweep by left end of each segment's abscissa extent
    let mut order: Vec<usize> = (0..segs).collect();
    let lo = |s: usize| v[s].a.min(v[s + 1].a);
    let hi = |s: usize| v[s].a.max(v[s + 1].a);
    order.sort_by(|&s, &t| lo(s).total_cmp(&lo(t)));
    for (rank, &s) in order.iter().enumerate() {
        for &t in &order[rank + 1..] {
            if lo(t) > hi(s) {
                break;
            }
            let (first, second) = if s < t { (s, t) } else { (t, s) };
            let hit = if second == first + 1 {
                folds_back(v[first], v[first + 1], v[second + 1])
            } else {
                intersects(v[first], v[first + 1], v[second], v[second + 1])
            };
            if hit {
                return false;
            }
        }
    }
    true
}

/// Adjacent segments `pq` and `qr` overlap beyond `q` only when collinear
/// and pointing back toward each other.
fn folds_back(p: DualPoint, q: DualPoint, r: DualPoint) -> bool {
    if orient(p, q, r) != 0.0 {
        return false;
    }
    let (ux, uy) = (p.a - q.a, p.b - q.b);
    let (wx, wy) = (r.a - q.a, r.b - q.b);
    ux * wx + uy * wy > 0.0 || p == q || r == q
}

fn intersects(p1: DualPoint, p2: DualPoint, q1: DualPoint, q2: DualPoint) -> bool {
    let o1 = orient(p1, p2, q1).signum_or_zero();
    let o2 = orient(p1, p2, q2).signum_or_zero();
    let o3 = orient(q1, q2, p1).signum_or_zero();
    let o4 = orient(q1, q2, p2).signum_or_zero();
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    let inside = |s: DualPoint, t: DualPoint, r: DualPoint| {
        r.a >= s.a.min(t.a) && r.a <= s.a.max(t.a) && r.b >= s.b.min(t.b) && r.b <= s.b.max(t.b)
    };
    (o1 == 0.0 && inside(p1, p2, q1))
        || (o2 == 0.0 && inside(p1, p2, q2))
        || (o3 == 0.0 && inside(q1, q2, p1))
        || (o4 == 0.0 && inside(q1, q2, p2))
}

trait SignumOrZero {
    fn signum_or_zero(self) -> f64;
}

impl SignumOrZero for f64 {
    fn signum_or_zero(self) -> f64 {
        if self == 0.0 {
            0.0
        } else {
            self.signum()
        }
    }
}
