//! Lowest point in the common intersection of a contiguous range of upper
//! half-planes taken from an x-intercept-ordered sequence.
//!
//! The sequence is split by slope sign. The negative-slope half-planes of a
//! range bound a decreasing upper envelope and the positive-slope ones an
//! increasing envelope; the lowest point is their single crossing. Each sign
//! class gets a [`SubpathHullIndex`] over its dual path, so a query range
//! turns into a few canonical lower hulls per class.
//!
//! With envelopes `D = max_p D_p` and `I = max_q I_q` built from canonical
//! pieces, the crossing height of `D` and `I` is the maximum over piece pairs
//! of the crossing height of `D_p` and `I_q`: every pairwise crossing lies on
//! or below `max(D, I)`, and the pair active at the true crossing attains it.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::hull::{build_path, HullHandle, HullPiece, HullVertex, SubpathHullIndex};
use crate::model::{line_crossing, HalfPlane, LowestPoint, SlopeSign};

/// Upper bound on envelope-refinement rounds before falling back to the
/// pruned pairwise maximum.
const REFINE_ROUNDS: usize = 6;

/// Read-only operation counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryStats {
    pub queries: u64,
    pub hull_accesses: u64,
}

/// Answers lowest-point queries over contiguous half-plane ranges.
#[derive(Debug)]
pub struct SublistLpEngine {
    halfplanes: Vec<HalfPlane>,
    // number of negative-slope half-planes strictly before each index
    negatives_before: Vec<u32>,
    negative: Option<SubpathHullIndex>,
    positive: Option<SubpathHullIndex>,
    queries: AtomicU64,
    hull_accesses: AtomicU64,
}

impl SublistLpEngine {
    /// Builds the engine. The sequence must be nonempty, free of zero
    /// slopes, and have nondecreasing x-intercepts.
    pub fn build(halfplanes: Vec<HalfPlane>) -> Result<Self> {
        if halfplanes.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut negatives_before = Vec::with_capacity(halfplanes.len() + 1);
        let mut negs = Vec::new();
        let mut poss = Vec::new();
        let mut count = 0u32;
        for (index, h) in halfplanes.iter().enumerate() {
            let sign = SlopeSign::of(h.slope()).ok_or(Error::ZeroSlope { index })?;
            if index > 0 && h.x_intercept() < halfplanes[index - 1].x_intercept() {
                return Err(Error::NotInterceptOrdered { index });
            }
            negatives_before.push(count);
            match sign {
                SlopeSign::Negative => {
                    negs.push(*h);
                    count += 1;
                }
                SlopeSign::Positive => poss.push(*h),
            }
        }
        negatives_before.push(count);
        let index_of = |family: &[HalfPlane], sign| -> Result<Option<SubpathHullIndex>> {
            if family.is_empty() {
                return Ok(None);
            }
            Ok(Some(SubpathHullIndex::build(&build_path(family, sign)?)))
        };
        let negative = index_of(&negs, SlopeSign::Negative)?;
        let positive = index_of(&poss, SlopeSign::Positive)?;
        Ok(SublistLpEngine {
            halfplanes,
            negatives_before,
            negative,
            positive,
            queries: AtomicU64::new(0),
            hull_accesses: AtomicU64::new(0),
        })
    }

    pub fn len(&self) -> usize {
        self.halfplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halfplanes.is_empty()
    }

    pub fn halfplanes(&self) -> &[HalfPlane] {
        &self.halfplanes
    }

    /// Sizes of the negative- and positive-slope classes.
    pub fn class_sizes(&self) -> (usize, usize) {
        let neg = self.negatives_before[self.len()] as usize;
        (neg, self.len() - neg)
    }

    /// Rank ranges of `i..=j` inside the two sign classes (half-open).
    fn class_ranges(&self, i: usize, j: usize) -> ((usize, usize), (usize, usize)) {
        let (nb_i, nb_j) = (
            self.negatives_before[i] as usize,
            self.negatives_before[j + 1] as usize,
        );
        ((nb_i, nb_j), (i - nb_i, j + 1 - nb_j))
    }

    /// Canonical hull pieces of the negative and positive classes of `i..=j`.
    pub fn hull_handles(&self, i: usize, j: usize) -> Result<(HullHandle<'_>, HullHandle<'_>)> {
        self.check_range(i, j)?;
        let ((n0, n1), (p0, p1)) = self.class_ranges(i, j);
        match (&self.negative, &self.positive) {
            (Some(neg), Some(pos)) if n0 < n1 && p0 < p1 => {
                Ok((neg.hull_query(n0, n1 - 1)?, pos.hull_query(p0, p1 - 1)?))
            }
            _ => Err(Error::UnboundedBelow { i, j }),
        }
    }

    fn check_range(&self, i: usize, j: usize) -> Result<()> {
        if i > j || j >= self.len() {
            return Err(Error::IndexOutOfRange {
                i,
                j,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// Lowest point of the intersection of half-planes `i..=j` (0-based,
    /// inclusive).
    pub fn lowest_point(&self, i: usize, j: usize) -> Result<LowestPoint> {
        self.check_range(i, j)?;
        let ((n0, n1), (p0, p1)) = self.class_ranges(i, j);
        let (neg, pos) = match (&self.negative, &self.positive) {
            (Some(neg), Some(pos)) if n0 < n1 && p0 < p1 => (neg, pos),
            _ => return Err(Error::UnboundedBelow { i, j }),
        };
        let mut dec: Vec<HullPiece<'_>> = Vec::with_capacity(48);
        let mut inc: Vec<HullPiece<'_>> = Vec::with_capacity(48);
        neg.for_each_piece(n0, n1 - 1, |p| dec.push(p));
        pos.for_each_piece(p0, p1 - 1, |p| inc.push(p));
        let mut accesses = (dec.len() + inc.len()) as u64;
        let out = envelope_crossing(&dec, &inc, &mut accesses);
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.hull_accesses.fetch_add(accesses, Ordering::Relaxed);
        Ok(out)
    }

    pub fn stats(&self) -> QueryStats {
        QueryStats {
            queries: self.queries.load(Ordering::Relaxed),
            hull_accesses: self.hull_accesses.load(Ordering::Relaxed),
        }
    }

    pub fn reset_stats(&self) {
        self.queries.store(0, Ordering::Relaxed);
        self.hull_accesses.store(0, Ordering::Relaxed);
    }
}

/// Crossing of the upper envelope of all `left` lines (negative slopes) with
/// that of all `right` lines (positive slopes).
pub fn crossing_of_hulls(left: &[HullHandle<'_>], right: &[HullHandle<'_>]) -> Result<LowestPoint> {
    let dec: Vec<HullPiece<'_>> = left
        .iter()
        .flat_map(|h| h.pieces().iter().copied())
        .filter(|p| !p.is_empty())
        .collect();
    let inc: Vec<HullPiece<'_>> = right
        .iter()
        .flat_map(|h| h.pieces().iter().copied())
        .filter(|p| !p.is_empty())
        .collect();
    if dec.is_empty() || inc.is_empty() {
        return Err(Error::EmptySide);
    }
    debug_assert!(dec
        .iter()
        .all(|p| p.vertices().iter().all(|v| v.point.a < 0.0)));
    debug_assert!(inc
        .iter()
        .all(|p| p.vertices().iter().all(|v| v.point.a > 0.0)));
    let mut accesses = 0;
    Ok(envelope_crossing(&dec, &inc, &mut accesses))
}

/// Maximum over `dec × inc` of the pairwise crossings.
///
/// A few rounds of "take the active line of each envelope at the current
/// guess and move to their crossing" usually land on the answer. Piece pairs
/// are then skipped when `max(D_p(x), I_q(x))` at the best guess `x` is no
/// higher than the best crossing found, since that bounds their crossing.
pub(crate) fn envelope_crossing(
    dec: &[HullPiece<'_>],
    inc: &[HullPiece<'_>],
    accesses: &mut u64,
) -> LowestPoint {
    if dec.len() == 1 && inc.len() == 1 {
        return hull_pair_crossing(dec[0], inc[0], accesses);
    }
    let mut best = hull_pair_crossing(dec[0], inc[inc.len() - 1], accesses);
    let mut x = best.x;
    let mut previous: Option<(*const HullVertex, *const HullVertex)> = None;
    for _ in 0..REFINE_ROUNDS {
        let d = active_line(dec, x, accesses);
        let i = active_line(inc, x, accesses);
        let key = (d as *const HullVertex, i as *const HullVertex);
        if previous == Some(key) {
            break;
        }
        previous = Some(key);
        let c = cross(d, i);
        if c.y > best.y {
            best = c;
        }
        x = c.x;
    }

    let x = best.x;
    let dec_at: Vec<f64> = dec.iter().map(|p| p.envelope_at(x, accesses).1).collect();
    let inc_at: Vec<f64> = inc.iter().map(|p| p.envelope_at(x, accesses).1).collect();
    for (p, &dv) in dec.iter().zip(&dec_at) {
        for (q, &iv) in inc.iter().zip(&inc_at) {
            if dv.max(iv) > best.y {
                let c = hull_pair_crossing(*p, *q, accesses);
                if c.y > best.y {
                    best = c;
                }
            }
        }
    }
    best
}

/// Envelope line of highest value at `x` over all pieces.
fn active_line<'a>(pieces: &[HullPiece<'a>], x: f64, accesses: &mut u64) -> &'a HullVertex {
    let mut best: Option<(f64, &'a HullVertex)> = None;
    for p in pieces {
        let (k, v) = p.envelope_at(x, accesses);
        if best.is_none_or(|(bv, _)| v > bv) {
            best = Some((v, p.vertex(k)));
        }
    }
    best.expect("nonempty piece list").1
}

#[inline]
fn cross(dec: &HullVertex, inc: &HullVertex) -> LowestPoint {
    line_crossing(dec.point.a, dec.intercept, inc.point.a, inc.intercept)
}

/// Crossing of the decreasing envelope of `dec` with the increasing envelope
/// of `inc`, by simultaneous binary search over the pieces of both.
///
/// Each round looks at the middle piece of each remaining range and discards
/// at least half of one range, so the cost is `O(log |dec| + log |inc|)`.
pub fn hull_pair_crossing(
    dec: HullPiece<'_>,
    inc: HullPiece<'_>,
    accesses: &mut u64,
) -> LowestPoint {
    let (mut klo, mut khi) = (0usize, dec.len() - 1);
    let (mut mlo, mut mhi) = (0usize, inc.len() - 1);
    loop {
        let k = (klo + khi) / 2;
        let m = (mlo + mhi) / 2;
        *accesses += 4;
        let (dl, dr) = dec.active_interval(k);
        let (il, ir) = inc.active_interval(m);
        let (d, i) = (dec.vertex(k), inc.vertex(m));
        let gap = |x: f64| d.eval(x) - i.eval(x);
        let (x0, x1) = (dl.max(il), dr.min(ir));
        let (mut nklo, mut nkhi, mut nmlo, mut nmhi) = (klo, khi, mlo, mhi);
        if x0 <= x1 {
            // both pieces are live on [x0, x1]
            if x1.is_finite() && gap(x1) > 0.0 {
                if dr <= ir {
                    nklo = k + 1;
                } else {
                    nklo = k;
                }
                if ir <= dr {
                    nmlo = m + 1;
                } else {
                    nmlo = m;
                }
            } else if x0.is_finite() && gap(x0) < 0.0 {
                if dl >= il {
                    nkhi = k - 1;
                } else {
                    nkhi = k;
                }
                if il >= dl {
                    nmhi = m - 1;
                } else {
                    nmhi = m;
                }
            } else {
                return cross(d, i);
            }
        } else if dr < il {
            if d.eval(dr) <= i.eval(il) {
                nmhi = m - 1;
            } else {
                nklo = k + 1;
            }
        } else if d.eval(dl) >= i.eval(ir) {
            nmlo = m + 1;
        } else {
            nkhi = k - 1;
        }
        nklo = nklo.max(klo);
        nmlo = nmlo.max(mlo);
        nkhi = nkhi.min(khi);
        nmhi = nmhi.min(mhi);
        let stalled = (nklo, nkhi, nmlo, nmhi) == (klo, khi, mlo, mhi);
        if nklo > nkhi || nmlo > nmhi || stalled {
            // only reachable through rounding; settle it exhaustively
            return exhaustive_pair_crossing(dec, inc, accesses);
        }
        (klo, khi, mlo, mhi) = (nklo, nkhi, nmlo, nmhi);
    }
}

fn exhaustive_pair_crossing(
    dec: HullPiece<'_>,
    inc: HullPiece<'_>,
    accesses: &mut u64,
) -> LowestPoint {
    let mut best: Option<LowestPoint> = None;
    for d in dec.vertices() {
        for i in inc.vertices() {
            *accesses += 2;
            let c = cross(d, i);
            if best.is_none_or(|b| c.y > b.y) {
                best = Some(c);
            }
        }
    }
    best.expect("nonempty hulls")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DualPoint, ProblemInstance};
    use crate::oracles::lowest_point_brute;

    fn e1() -> ProblemInstance {
        ProblemInstance::normalize([(0.0, 1.0), (2.0, 3.0), (5.0, 2.0), (6.0, 1.0)]).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
    }

    fn vertex(a: f64, b: f64) -> HullVertex {
        HullVertex {
            point: DualPoint::new(a, b),
            intercept: b / a,
        }
    }

    #[test]
    fn e1_engine_shape_and_queries() {
        let engine = SublistLpEngine::build(e1().halfplanes()).unwrap();
        assert_eq!(engine.class_sizes(), (4, 4));
        let lp = engine.lowest_point(0, 3).unwrap();
        assert!(close(lp.x, 1.5) && close(lp.y, 1.5), "{lp:?}");
        let lp = engine.lowest_point(0, 7).unwrap();
        assert!(close(lp.x, 3.2) && close(lp.y, 3.6), "{lp:?}");
        assert_eq!(
            engine.lowest_point(6, 7).unwrap(),
            LowestPoint::new(6.0, 0.0)
        );
        assert!(matches!(
            engine.lowest_point(3, 8),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            engine.lowest_point(5, 4),
            Err(Error::IndexOutOfRange { .. })
        ));
        // a single half-plane is unbounded
        assert_eq!(
            engine.lowest_point(2, 2),
            Err(Error::UnboundedBelow { i: 2, j: 2 })
        );
        assert_eq!(engine.stats().queries, 3);
    }

    #[test]
    fn single_halfplane_engine() {
        let engine = SublistLpEngine::build(vec![HalfPlane::new(2.0, 1.0)]).unwrap();
        assert_eq!(
            engine.lowest_point(0, 0),
            Err(Error::UnboundedBelow { i: 0, j: 0 })
        );
    }

    #[test]
    fn build_rejects_bad_sequences() {
        let hs = vec![HalfPlane::through(1.0, 3.0), HalfPlane::through(-1.0, 1.0)];
        assert_eq!(
            SublistLpEngine::build(hs).unwrap_err(),
            Error::NotInterceptOrdered { index: 1 }
        );
        let hs = vec![HalfPlane::through(1.0, 0.0), HalfPlane::new(0.0, 1.0)];
        assert!(matches!(
            SublistLpEngine::build(hs),
            Err(Error::ZeroSlope { index: 1 })
        ));
        assert_eq!(
            SublistLpEngine::build(vec![]).unwrap_err(),
            Error::EmptyInput
        );
    }

    #[test]
    fn crossing_examples() {
        let l = [vertex(-1.0, -3.0)];
        let r = [vertex(1.0, 0.0)];
        let left = [HullHandle::from_pieces(0, 0, vec![HullPiece::new(&l)])];
        let right = [HullHandle::from_pieces(0, 0, vec![HullPiece::new(&r)])];
        assert_eq!(
            crossing_of_hulls(&left, &right).unwrap(),
            LowestPoint::new(1.5, 1.5)
        );

        let l = [vertex(-1.0, 0.0)];
        let left = [HullHandle::from_pieces(0, 0, vec![HullPiece::new(&l)])];
        let c = crossing_of_hulls(&left, &right).unwrap();
        assert!(c.x == 0.0 && c.y == 0.0, "{c:?}");

        assert_eq!(crossing_of_hulls(&[], &right), Err(Error::EmptySide));
    }

    #[test]
    fn crossing_of_e1_tail() {
        // points (5,2) and (6,1): half-planes 4..=7 of E1
        let engine = SublistLpEngine::build(e1().halfplanes()).unwrap();
        let (neg, pos) = engine.hull_handles(4, 7).unwrap();
        let c = crossing_of_hulls(&[neg], &[pos]).unwrap();
        assert!(close(c.x, 16.0 / 3.0) && close(c.y, 2.0 / 3.0), "{c:?}");
    }

    #[test]
    fn pair_crossing_matches_line_enumeration() {
        // envelopes with several pieces each
        let dec: Vec<HullVertex> = [(-8.0, -40.0), (-4.0, -30.0), (-2.0, -22.0), (-1.0, -15.0)]
            .map(|(a, b)| vertex(a, b))
            .to_vec();
        let inc: Vec<HullVertex> = [(0.5, -3.0), (1.0, -2.0), (3.0, 5.0), (7.0, 30.0)]
            .map(|(a, b)| vertex(a, b))
            .to_vec();
        let mut acc = 0;
        let fast = hull_pair_crossing(HullPiece::new(&dec), HullPiece::new(&inc), &mut acc);
        let slow = exhaustive_pair_crossing(HullPiece::new(&dec), HullPiece::new(&inc), &mut acc);
        assert!(
            close(fast.y, slow.y) && close(fast.x, slow.x),
            "{fast:?} vs {slow:?}"
        );
    }

    #[test]
    fn generic_engine_against_brute() {
        // mixed slopes with shared intercepts, not derived from demand points
        let hs = vec![
            HalfPlane::through(-2.0, -1.0),
            HalfPlane::through(0.5, -1.0),
            HalfPlane::through(-0.25, 0.0),
            HalfPlane::through(3.0, 0.5),
            HalfPlane::through(-5.0, 0.5),
            HalfPlane::through(-1.0, 2.0),
            HalfPlane::through(1.0, 4.0),
        ];
        let engine = SublistLpEngine::build(hs.clone()).unwrap();
        for i in 0..hs.len() {
            for j in i..hs.len() {
                let got = engine.lowest_point(i, j);
                let want = lowest_point_brute(&hs, i, j);
                match (got, want) {
                    (Ok(g), Ok(w)) => assert!(close(g.y, w.y), "({i},{j}) {g:?} vs {w:?}"),
                    (g, w) => assert_eq!(g, w, "({i},{j})"),
                }
            }
        }
    }
}
