//! Oracle-equality checks shared by the `verify` command, the property tests
//! and the acceptance suite.
//!
//! Each `check_*` function examines one instance (or family) and records its
//! outcome in an [`OracleReport`]; [`run`] drives them over seeded random
//! instances.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::gen;
use crate::hull::{build_path, check_simple, SubpathHullIndex};
use crate::model::{dual_of, DemandPoint, DualPoint, HalfPlane, ProblemInstance, SlopeSign};
use crate::oracles::{
    alpha_brute, brute_path_simple, dp_solve_with, naive_lower_hull, AlphaTable, OracleReport,
};
use crate::solver::{solve_with, AlphaEngine};

/// Relative tolerance for comparisons against the oracles.
pub const TOLERANCE: f64 = 1e-9;

/// Rounding allowance for a reported center, in units of its own ulp.
const CENTER_ULPS: f64 = 4.0;

/// `α(i, j)` against [`alpha_brute`] for every pair. The center must also
/// satisfy every constraint of its range at the reported cost.
///
/// The exact center is rarely representable, and one ulp of `x` moves a
/// weight-`w` cost by `w·ulp(x)`, which can exceed `TOLERANCE·y` when `y` is
/// small. So each constraint gets that rounding slack on top of the relative
/// tolerance.
pub fn check_alpha(engine: &AlphaEngine, report: &mut OracleReport) {
    let inst = engine.instance();
    let pts = inst.points();
    for i in 0..inst.len() {
        for j in i..inst.len() {
            let got = engine.alpha(i, j).expect("indices in range");
            let want = alpha_brute(inst, i, j).expect("indices in range");
            report.check(want.y, got.y, TOLERANCE, || format!("alpha({i}, {j}).y"));
            let violation = pts[i..=j].iter().find(|p| {
                let slack =
                    CENTER_ULPS * f64::EPSILON * p.weight * got.x.abs().max(p.position.abs());
                p.cost(got.x) > want.y * (1.0 + TOLERANCE) + slack
            });
            report.check_that(violation.is_none(), || {
                let p = violation.expect("checked");
                format!(
                    "alpha({i}, {j}).x = {} costs {:e} at {} > {:e}",
                    got.x,
                    p.cost(got.x),
                    p.position,
                    want.y
                )
            });
        }
    }
}

/// Solver radius against the dynamic program, and the radius against the
/// cost of the returned centers.
pub fn check_solve(engine: &AlphaEngine, table: &AlphaTable, k: usize, report: &mut OracleReport) {
    let inst = engine.instance();
    let sol = solve_with(engine, k);
    let want = dp_solve_with(table, k);
    report.check(want, sol.radius, TOLERANCE, || {
        format!("solve(n={}, k={k}).radius", inst.len())
    });
    report.check_that(
        sol.centers.len() <= k && sol.breakpoints.last() == Some(&inst.len()),
        || {
            format!(
                "solve(n={}, k={k}) returned a malformed partition",
                inst.len()
            )
        },
    );
    let psi = inst.max_cost(&sol.centers);
    report.check(sol.radius, psi, TOLERANCE, || {
        format!("cost of centers for k={k}")
    });
}

/// Simplicity of the dual path of an x-intercept-ordered, sign-homogeneous
/// family, by both the sweep checker and the pairwise reference.
pub fn check_family_path(family: &[HalfPlane], sign: SlopeSign, report: &mut OracleReport) {
    let path = build_path(family, sign).expect("family is ordered and sign-homogeneous");
    report.check_that(brute_path_simple(path.vertices()), || {
        format!(
            "dual path of a {}-member family is not simple",
            family.len()
        )
    });
    report.check_that(check_simple(&path), || {
        format!("sweep checker rejects a {}-member family", family.len())
    });
}

/// The two sign classes of an instance's half-planes, in order.
pub fn sign_classes(inst: &ProblemInstance) -> [(SlopeSign, Vec<HalfPlane>); 2] {
    let hps = inst.halfplanes();
    let neg = hps.iter().copied().filter(|h| h.slope() < 0.0).collect();
    let pos = hps.iter().copied().filter(|h| h.slope() > 0.0).collect();
    [(SlopeSign::Negative, neg), (SlopeSign::Positive, pos)]
}

fn compare_hull(
    index: &SubpathHullIndex,
    duals: &[DualPoint],
    i: usize,
    j: usize,
    report: &mut OracleReport,
) {
    let got = index.hull_query(i, j).expect("indices in range").vertices();
    let want = naive_lower_hull(&duals[i..=j]);
    report.check_that(got == want, || {
        format!(
            "hull_query({i}, {j}) has {} vertices, naive hull {}",
            got.len(),
            want.len()
        )
    });
}

/// `hull_query` against [`naive_lower_hull`] for every range of both classes.
pub fn check_hull_exhaustive(inst: &ProblemInstance, report: &mut OracleReport) {
    for (sign, family) in sign_classes(inst) {
        let path = build_path(&family, sign).expect("instance classes are ordered");
        let index = SubpathHullIndex::build(&path);
        let duals: Vec<DualPoint> = family.iter().map(dual_of).collect();
        for i in 0..duals.len() {
            for j in i..duals.len() {
                compare_hull(&index, &duals, i, j, report);
            }
        }
    }
}

/// `hull_query` against [`naive_lower_hull`] on random ranges.
pub fn check_hull_sampled(
    inst: &ProblemInstance,
    queries: usize,
    rng: &mut ChaCha8Rng,
    report: &mut OracleReport,
) {
    for (sign, family) in sign_classes(inst) {
        let path = build_path(&family, sign).expect("instance classes are ordered");
        let index = SubpathHullIndex::build(&path);
        let duals: Vec<DualPoint> = family.iter().map(dual_of).collect();
        let m = duals.len();
        for _ in 0..queries / 2 {
            // mix short and long ranges
            let i = rng.gen_range(0..m);
            let len = if rng.gen_bool(0.5) {
                rng.gen_range(1..=(m - i).min(64))
            } else {
                rng.gen_range(1..=m - i)
            };
            compare_hull(&index, &duals, i, i + len - 1, report);
        }
    }
}

/// Rows of the `α` matrix are nondecreasing left to right, columns
/// nonincreasing top to bottom.
pub fn check_alpha_sorted(engine: &AlphaEngine, report: &mut OracleReport) {
    let n = engine.len();
    let a = |i, j| engine.alpha(i, j).expect("indices in range").y;
    for i in 0..n {
        for j in i..n {
            let v = a(i, j);
            if j + 1 < n {
                let right = a(i, j + 1);
                report.check_that(v <= right, || {
                    format!("alpha({i}, {j}) > alpha({i}, {})", j + 1)
                });
            }
            if i < j {
                let below = a(i + 1, j);
                report.check_that(below <= v, || {
                    format!("alpha({}, {j}) > alpha({i}, {j})", i + 1)
                });
            }
        }
    }
}

/// Feasibility is monotone in the radius and in the number of centers.
pub fn check_feasibility_monotone(
    engine: &AlphaEngine,
    samples: usize,
    rng: &mut ChaCha8Rng,
    report: &mut OracleReport,
) {
    let n = engine.len();
    let top = engine.alpha(0, n - 1).expect("nonempty").y;
    for _ in 0..samples {
        // thresholds drawn from candidate values hit the flip points exactly
        let pick = |rng: &mut ChaCha8Rng| {
            if rng.gen_bool(0.5) {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(i..n);
                engine.alpha(i, j).expect("indices in range").y
            } else {
                rng.gen_range(0.0..=top * 1.1)
            }
        };
        let (e1, e2) = (pick(rng), pick(rng));
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let k = rng.gen_range(1..=n);
        let f_lo = engine.feasible(lo, k).feasible;
        report.check_that(!f_lo || engine.feasible(hi, k).feasible, || {
            format!("feasible({lo:e}, {k}) but not feasible({hi:e}, {k})")
        });
        report.check_that(!f_lo || engine.feasible(lo, k + 1).feasible, || {
            format!("feasible({lo:e}, {k}) but not feasible({lo:e}, {})", k + 1)
        });
    }
}

fn transformed(
    inst: &ProblemInstance,
    shift: f64,
    scale: f64,
    weight_scale: f64,
) -> ProblemInstance {
    let pts = inst
        .points()
        .iter()
        .map(|p| DemandPoint::new(p.position * scale + shift, p.weight * weight_scale))
        .collect();
    ProblemInstance::from_sorted(pts).expect("affine maps with positive scale keep the order")
}

/// Translation and scaling of positions, and scaling of weights, act on the
/// solution as expected.
///
/// Centers are compared at tolerance relative to the instance's extent, so a
/// center that lands near zero after translation is not held to a tighter
/// standard than the others.
pub fn check_equivariance(
    inst: &ProblemInstance,
    k: usize,
    rng: &mut ChaCha8Rng,
    report: &mut OracleReport,
) {
    let base = solve_with(&AlphaEngine::build(inst), k);
    let (first, last) = (
        inst.points()[0].position,
        inst.points()[inst.len() - 1].position,
    );
    let extent = first.abs().max(last.abs());

    let shift = rng.gen_range(-1e3..1e3);
    let scale = 10f64.powf(rng.gen_range(-2.0..2.0));
    let wscale = 10f64.powf(rng.gen_range(-2.0..2.0));
    let cases = [
        ("translate", shift, 1.0, 1.0),
        ("scale positions", 0.0, scale, 1.0),
        ("scale weights", 0.0, 1.0, wscale),
    ];
    for (name, t, s, ws) in cases {
        let moved = transformed(inst, t, s, ws);
        let sol = solve_with(&AlphaEngine::build(&moved), k);
        report.check(base.radius * s * ws, sol.radius, TOLERANCE, || {
            format!("{name}: radius, k={k}")
        });
        report.check_that(sol.breakpoints == base.breakpoints, || {
            format!("{name}: breakpoints, k={k}")
        });
        let span = (extent * s + t.abs()).max(f64::MIN_POSITIVE);
        for (c, (&a, &b)) in base.centers.iter().zip(&sol.centers).enumerate() {
            let want = a * s + t;
            let dev = (want - b).abs() / span;
            report.check_that(dev <= TOLERANCE, || {
                format!("{name}: center {c} expected {want:e}, got {b:e}, k={k}")
            });
        }
    }
}

/// Settings for [`run`].
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random instances per suite.
    pub instances: usize,
    pub alpha_max_n: usize,
    pub solve_max_n: usize,
    pub max_k: usize,
    pub path_max_n: usize,
    pub hull_max_n: usize,
    /// Builds every engine over a perturbed copy of its instance. The suites
    /// must then fail; this exercises the failure path.
    pub corrupt: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            instances: 20,
            alpha_max_n: 128,
            solve_max_n: 200,
            max_k: 10,
            path_max_n: 200,
            hull_max_n: 64,
            corrupt: false,
        }
    }
}

/// Outcome of one named suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub report: OracleReport,
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<10} {}", self.name, self.report)
    }
}

fn engine_for(inst: &ProblemInstance, corrupt: bool) -> AlphaEngine {
    if !corrupt {
        return AlphaEngine::build(inst);
    }
    let mut pts = inst.points().to_vec();
    let t = pts.len() / 2;
    pts[t].weight *= 1.5;
    let source = ProblemInstance::from_sorted(pts).expect("weights stay positive");
    AlphaEngine::with_halfplane_source(inst, &source)
}

/// Runs every suite on seeded random instances.
pub fn run(config: &VerifyConfig) -> Vec<SuiteReport> {
    let mut rng = gen::rng(config.seed);
    let mut alpha = OracleReport::new();
    let mut solve = OracleReport::new();
    let mut path = OracleReport::new();
    let mut hull = OracleReport::new();
    for _ in 0..config.instances {
        let n = rng.gen_range(2..=config.alpha_max_n.max(2));
        let inst = gen::mixed_scale(n, rng.gen());
        check_alpha(&engine_for(&inst, config.corrupt), &mut alpha);

        let n = rng.gen_range(2..=config.solve_max_n.max(2));
        let inst = gen::mixed_scale(n, rng.gen());
        let engine = engine_for(&inst, config.corrupt);
        let table = AlphaTable::new(&inst);
        for k in 1..=config.max_k {
            check_solve(&engine, &table, k, &mut solve);
        }

        let n = rng.gen_range(1..=config.path_max_n.max(1));
        let negative = rng.gen_bool(0.5);
        let family = gen::halfplane_family(n, negative, &mut rng);
        let sign = if negative {
            SlopeSign::Negative
        } else {
            SlopeSign::Positive
        };
        check_family_path(&family, sign, &mut path);

        let n = rng.gen_range(1..=config.hull_max_n.max(1));
        let inst = gen::mixed_scale(n, rng.gen());
        check_hull_exhaustive(&inst, &mut hull);
    }
    vec![
        SuiteReport {
            name: "alpha",
            report: alpha,
        },
        SuiteReport {
            name: "solve",
            report: solve,
        },
        SuiteReport {
            name: "path",
            report: path,
        },
        SuiteReport {
            name: "hull",
            report: hull,
        },
    ]
}
