//! Domain types for the weighted k-center problem on a line, and the
//! half-plane / dual-point constructions the query structures are built on.
//!
//! A demand point at position `p` with weight `w` is served from a center `x`
//! at cost `w·|x − p|`. That cost is the upper envelope of two lines through
//! `(p, 0)`, one of slope `+w` and one of slope `−w`, so every point
//! contributes the two upper half-planes `y ≥ w(x − p)` and `y ≥ −w(x − p)`.
//! The lowest point of the intersection of all such half-planes over a set
//! of points is its optimal 1-center `(x, radius)`.
//!
//! A line `y = a·x + c` is mapped to the dual point `(a, −c)`; conversely the
//! dual point `(a, b)` is the line `y = a·x − b`. Upper envelopes of lines
//! become lower hulls of dual points.

use crate::error::{Error, Result};

/// A weighted demand point on the line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemandPoint {
    pub position: f64,
    pub weight: f64,
}

impl DemandPoint {
    pub fn new(position: f64, weight: f64) -> Self {
        DemandPoint { position, weight }
    }

    /// Weighted distance from this point to `x`.
    #[inline]
    pub fn cost(&self, x: f64) -> f64 {
        self.weight * (x - self.position).abs()
    }
}

/// A normalized instance: positions strictly increasing, weights positive and
/// finite, at least one point.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    points: Vec<DemandPoint>,
}

impl ProblemInstance {
    /// Normalizes raw `(position, weight)` pairs into an instance.
    ///
    /// Points are sorted by position. Points sharing a position are merged
    /// into one carrying the largest weight, since its cost dominates the
    /// others everywhere.
    pub fn normalize<I>(raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut points = Vec::new();
        for (index, (position, weight)) in raw.into_iter().enumerate() {
            if !position.is_finite() {
                return Err(Error::InvalidCoordinate {
                    index,
                    value: position,
                });
            }
            if !(weight > 0.0 && weight.is_finite()) {
                return Err(Error::InvalidWeight { index, weight });
            }
            points.push(DemandPoint::new(position, weight));
        }
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        points.sort_by(|a, b| a.position.total_cmp(&b.position));
        points.dedup_by(|next, kept| {
            if next.position == kept.position {
                kept.weight = kept.weight.max(next.weight);
                true
            } else {
                false
            }
        });
        Ok(ProblemInstance { points })
    }

    /// Builds an instance from points already known to be normalized.
    ///
    /// Returns `None` when positions are not strictly increasing or a value is
    /// out of range.
    pub fn from_sorted(points: Vec<DemandPoint>) -> Option<Self> {
        let valid = !points.is_empty()
            && points
                .iter()
                .all(|p| p.position.is_finite() && p.weight > 0.0 && p.weight.is_finite())
            && points.windows(2).all(|w| w[0].position < w[1].position);
        valid.then_some(ProblemInstance { points })
    }

    pub fn points(&self) -> &[DemandPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.position)
    }

    /// The `2n` half-planes of the instance in point order: point `t`
    /// contributes indices `2t` (slope `+w`) and `2t + 1` (slope `−w`).
    ///
    /// The sequence is x-intercept ordered.
    pub fn halfplanes(&self) -> Vec<HalfPlane> {
        let mut out = Vec::with_capacity(2 * self.points.len());
        for p in &self.points {
            let (up, down) = halfplanes_of(p);
            out.push(up);
            out.push(down);
        }
        out
    }

    /// Largest weighted distance from any point to its nearest center.
    ///
    /// `centers` must be sorted ascending and nonempty.
    pub fn max_cost(&self, centers: &[f64]) -> f64 {
        assert!(!centers.is_empty(), "at least one center is required");
        let mut worst: f64 = 0.0;
        let mut c = 0;
        for p in &self.points {
            while c + 1 < centers.len() && centers[c + 1] <= p.position {
                c += 1;
            }
            let mut cost = p.cost(centers[c]);
            if c + 1 < centers.len() {
                cost = cost.min(p.cost(centers[c + 1]));
            }
            worst = worst.max(cost);
        }
        worst
    }
}

/// Sign of a half-plane's slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlopeSign {
    Negative,
    Positive,
}

impl SlopeSign {
    pub fn of(slope: f64) -> Option<SlopeSign> {
        if slope < 0.0 {
            Some(SlopeSign::Negative)
        } else if slope > 0.0 {
            Some(SlopeSign::Positive)
        } else {
            None
        }
    }
}

/// The upper half-plane `y ≥ slope·x + offset`.
///
/// The x-intercept of the bounding line is stored alongside the offset. When
/// the half-plane comes from a demand point, the intercept is the point's
/// position exactly; keeping it avoids recovering it as `−offset/slope`,
/// which loses the low bits of the position whenever the weight is not a
/// power of two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    slope: f64,
    offset: f64,
    intercept: f64,
}

impl HalfPlane {
    /// The half-plane `y ≥ slope·x + offset`.
    pub fn new(slope: f64, offset: f64) -> Self {
        HalfPlane {
            slope,
            offset,
            intercept: -offset / slope,
        }
    }

    /// The half-plane `y ≥ slope·(x − intercept)`.
    pub fn through(slope: f64, intercept: f64) -> Self {
        HalfPlane {
            slope,
            offset: -slope * intercept,
            intercept,
        }
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn x_intercept(&self) -> f64 {
        self.intercept
    }

    /// Height of the bounding line at `x`.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.slope * (x - self.intercept)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        y >= self.eval(x)
    }
}

/// A point of the dual plane; `(a, b)` stands for the line `y = a·x − b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualPoint {
    pub a: f64,
    pub b: f64,
}

impl DualPoint {
    pub fn new(a: f64, b: f64) -> Self {
        DualPoint { a, b }
    }

    /// The half-plane bounded by the primal line of this point.
    pub fn to_halfplane(self) -> HalfPlane {
        HalfPlane::new(self.a, -self.b)
    }

    #[inline]
    pub fn dot(self, dx: f64, dy: f64) -> f64 {
        self.a * dx + self.b * dy
    }
}

/// Lowest point of a half-plane intersection: `x` is an optimal center,
/// `y` the minimax value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowestPoint {
    pub x: f64,
    pub y: f64,
}

impl LowestPoint {
    pub fn new(x: f64, y: f64) -> Self {
        LowestPoint { x, y }
    }
}

/// The two half-planes of a demand point: slope `+w` first, then `−w`.
/// Both bounding lines cross the x-axis at the point's position.
pub fn halfplanes_of(p: &DemandPoint) -> (HalfPlane, HalfPlane) {
    (
        HalfPlane::through(p.weight, p.position),
        HalfPlane::through(-p.weight, p.position),
    )
}

/// Maps the bounding line `y = a·x + c` to the dual point `(a, −c)`.
pub fn dual_of(h: &HalfPlane) -> DualPoint {
    DualPoint::new(h.slope, -h.offset)
}

/// Optimal 1-center of the two-point instance `{p, q}`, where
/// `p.position ≤ q.position`: the crossing of `p`'s increasing cost line with
/// `q`'s decreasing one.
pub fn critical_value(p: &DemandPoint, q: &DemandPoint) -> LowestPoint {
    let total = p.weight + q.weight;
    let x = (p.weight * p.position + q.weight * q.position) / total;
    let y = p.weight * q.weight * (q.position - p.position) / total;
    LowestPoint::new(x, y)
}

/// Crossing of two non-parallel bounding lines.
///
/// The ordinate is formed from the intercept difference so that it keeps full
/// relative precision even when the two intercepts are close together.
#[inline]
pub(crate) fn line_crossing(
    slope1: f64,
    intercept1: f64,
    slope2: f64,
    intercept2: f64,
) -> LowestPoint {
    let denom = slope1 - slope2;
    let gap = intercept1 - intercept2;
    let x = intercept1 + slope2 * gap / denom;
    let y = slope1 * slope2 * gap / denom;
    LowestPoint::new(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(instance: &ProblemInstance) -> Vec<(f64, f64)> {
        instance
            .points()
            .iter()
            .map(|p| (p.position, p.weight))
            .collect()
    }

    #[test]
    fn normalize_sorts_points() {
        let inst = ProblemInstance::normalize([(5.0, 2.0), (0.0, 1.0), (2.0, 3.0)]).unwrap();
        assert_eq!(pts(&inst), vec![(0.0, 1.0), (2.0, 3.0), (5.0, 2.0)]);
        assert_eq!(inst.len(), 3);
    }

    #[test]
    fn normalize_coalesces_with_max_weight() {
        let inst = ProblemInstance::normalize([(1.0, 2.0), (1.0, 5.0), (3.0, 1.0)]).unwrap();
        assert_eq!(pts(&inst), vec![(1.0, 5.0), (3.0, 1.0)]);
    }

    #[test]
    fn normalize_rejects_bad_input() {
        assert_eq!(
            ProblemInstance::normalize([(0.0, -1.0)]),
            Err(Error::InvalidWeight {
                index: 0,
                weight: -1.0
            })
        );
        assert!(matches!(
            ProblemInstance::normalize([(0.0, 1.0), (1.0, f64::NAN)]),
            Err(Error::InvalidWeight { index: 1, .. })
        ));
        assert!(matches!(
            ProblemInstance::normalize([(0.0, 1.0), (1.0, f64::INFINITY)]),
            Err(Error::InvalidWeight { index: 1, .. })
        ));
        assert!(matches!(
            ProblemInstance::normalize([(0.0, 0.0)]),
            Err(Error::InvalidWeight { .. })
        ));
        assert!(matches!(
            ProblemInstance::normalize([(f64::NEG_INFINITY, 1.0)]),
            Err(Error::InvalidCoordinate { index: 0, .. })
        ));
        assert_eq!(
            ProblemInstance::normalize(std::iter::empty()),
            Err(Error::EmptyInput)
        );
    }

    #[test]
    fn halfplane_construction() {
        let (up, down) = halfplanes_of(&DemandPoint::new(2.0, 3.0));
        assert_eq!((up.slope(), up.offset()), (3.0, -6.0));
        assert_eq!((down.slope(), down.offset()), (-3.0, 6.0));
        assert_eq!(up.x_intercept(), 2.0);
        assert_eq!(down.x_intercept(), 2.0);

        let (up, down) = halfplanes_of(&DemandPoint::new(0.0, 1.0));
        assert_eq!((up.slope(), up.offset()), (1.0, 0.0));
        assert_eq!((down.slope(), down.offset()), (-1.0, 0.0));

        let (up, down) = halfplanes_of(&DemandPoint::new(6.0, 1.0));
        assert_eq!((up.slope(), up.offset()), (1.0, -6.0));
        assert_eq!((down.slope(), down.offset()), (-1.0, 6.0));
    }

    #[test]
    fn dual_examples() {
        assert_eq!(
            dual_of(&HalfPlane::new(3.0, -6.0)),
            DualPoint::new(3.0, 6.0)
        );
        assert_eq!(
            dual_of(&HalfPlane::new(-3.0, 6.0)),
            DualPoint::new(-3.0, -6.0)
        );
        assert_eq!(
            dual_of(&HalfPlane::new(1.0, 0.0)),
            DualPoint::new(1.0, -0.0)
        );
    }

    #[test]
    fn critical_value_examples() {
        let cv = critical_value(&DemandPoint::new(0.0, 1.0), &DemandPoint::new(2.0, 3.0));
        assert_eq!(cv, LowestPoint::new(1.5, 1.5));
        let p = DemandPoint::new(5.0, 2.0);
        assert_eq!(critical_value(&p, &p), LowestPoint::new(5.0, 0.0));
        let cv = critical_value(&DemandPoint::new(0.0, 1.0), &DemandPoint::new(2.0, 1.0));
        assert_eq!(cv, LowestPoint::new(1.0, 1.0));
    }

    #[test]
    fn halfplane_sequence_is_intercept_ordered() {
        let inst =
            ProblemInstance::normalize([(0.0, 1.0), (2.0, 3.0), (5.0, 2.0), (6.0, 1.0)]).unwrap();
        let hs = inst.halfplanes();
        assert_eq!(hs.len(), 8);
        for w in hs.windows(2) {
            assert!(w[0].x_intercept() <= w[1].x_intercept());
        }
        for t in 0..3 {
            assert!(hs[2 * t + 1].x_intercept() < hs[2 * t + 2].x_intercept());
        }
    }

    #[test]
    fn max_cost_uses_nearest_center() {
        let inst =
            ProblemInstance::normalize([(0.0, 1.0), (2.0, 3.0), (5.0, 2.0), (6.0, 1.0)]).unwrap();
        let r = inst.max_cost(&[1.5, 16.0 / 3.0]);
        assert!((r - 1.5).abs() < 1e-12);
        assert!((inst.max_cost(&[3.2]) - 3.6).abs() < 1e-12);
    }
}
