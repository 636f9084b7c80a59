use proptest::prelude::*;

use weighted_kcenter::hull::{build_path, check_simple, SubpathHullIndex};
use weighted_kcenter::io::{parse_points, write_instance};
use weighted_kcenter::lp::SublistLpEngine;
use weighted_kcenter::model::{
    critical_value, dual_of, halfplanes_of, DemandPoint, DualPoint, HalfPlane, ProblemInstance,
    SlopeSign,
};
use weighted_kcenter::oracles::{
    alpha_brute, brute_path_simple, dp_solve, lowest_point_brute, minimize_direct,
    naive_lower_hull, relative_deviation, OracleReport,
};
use weighted_kcenter::solver::{solve, AlphaEngine};
use weighted_kcenter::{gen, verify};

const TOL: f64 = 1e-9;

fn weight() -> impl Strategy<Value = f64> {
    (-2.0f64..2.0).prop_map(|e| 10f64.powf(e))
}

fn instance(max_n: usize) -> impl Strategy<Value = ProblemInstance> {
    // integer-ish positions make coincident points and equal weights likely
    let pos = prop_oneof![(-50i32..50).prop_map(f64::from), -1e3f64..1e3];
    let w = prop_oneof![Just(1.0), weight()];
    prop::collection::vec((pos, w), 1..=max_n)
        .prop_map(|raw| ProblemInstance::normalize(raw).expect("finite positive input"))
}

/// x-intercept-ordered half-planes with random nonzero slopes of either sign.
fn mixed_sequence(max_n: usize) -> impl Strategy<Value = Vec<HalfPlane>> {
    let intercept = prop_oneof![(-5i32..5).prop_map(f64::from), -100.0f64..100.0];
    prop::collection::vec((intercept, weight(), any::<bool>()), 1..=max_n).prop_map(|mut v| {
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v.into_iter()
            .map(|(r, w, neg)| HalfPlane::through(if neg { -w } else { w }, r))
            .collect()
    })
}

fn family(max_n: usize) -> impl Strategy<Value = (Vec<HalfPlane>, SlopeSign)> {
    (1..=max_n, any::<bool>(), any::<u64>()).prop_map(|(n, negative, seed)| {
        let fam = gen::halfplane_family(n, negative, &mut gen::rng(seed));
        let sign = if negative {
            SlopeSign::Negative
        } else {
            SlopeSign::Positive
        };
        (fam, sign)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn halfplanes_pass_through_their_point(pos in -1e6f64..1e6, w in weight()) {
        let p = DemandPoint::new(pos, w);
        let (up, down) = halfplanes_of(&p);
        prop_assert_eq!(up.x_intercept(), pos);
        prop_assert_eq!(down.x_intercept(), pos);
        prop_assert!(up.slope() > 0.0 && down.slope() < 0.0);
    }

    #[test]
    fn instance_sequence_is_intercept_ordered(inst in instance(40)) {
        let hps = inst.halfplanes();
        for (t, pair) in hps.chunks(2).enumerate() {
            prop_assert_eq!(pair[0].x_intercept(), pair[1].x_intercept());
            if let Some(next) = hps.get(2 * t + 2) {
                prop_assert!(pair[1].x_intercept() < next.x_intercept());
            }
        }
    }

    #[test]
    fn critical_value_is_pairwise_minimax(
        p in -1e3f64..1e3, q in -1e3f64..1e3, wp in weight(), wq in weight()
    ) {
        prop_assume!(p != q);
        let (a, b) = (DemandPoint::new(p.min(q), wp), DemandPoint::new(p.max(q), wq));
        let cv = critical_value(&a, &b);
        let pair = ProblemInstance::from_sorted(vec![a, b]).unwrap();
        let direct = minimize_direct(&pair, 0, 1);
        prop_assert!(relative_deviation(direct.y, cv.y) <= TOL, "{cv:?} vs {direct:?}");
        prop_assert!(relative_deviation(a.cost(cv.x), cv.y) <= TOL);
        prop_assert!(relative_deviation(b.cost(cv.x), cv.y) <= TOL);
    }

    #[test]
    fn dual_round_trip_is_exact(slope in prop_oneof![weight(), weight().prop_map(|w| -w)],
                                offset in -1e4f64..1e4) {
        let h = HalfPlane::new(slope, offset);
        let back = dual_of(&h).to_halfplane();
        prop_assert_eq!(back.slope(), h.slope());
        prop_assert_eq!(back.offset(), h.offset());
        let d = DualPoint::new(slope, offset);
        prop_assert_eq!(dual_of(&d.to_halfplane()), d);
    }

    #[test]
    fn dual_paths_are_simple((fam, sign) in family(120)) {
        let path = build_path(&fam, sign).unwrap();
        prop_assert!(brute_path_simple(path.vertices()), "brute {:?}", path.vertices());
        prop_assert!(check_simple(&path), "sweep {:?}", path.vertices());
    }

    #[test]
    fn hull_queries_match_naive_hull(inst in instance(32)) {
        let mut report = OracleReport::new();
        verify::check_hull_exhaustive(&inst, &mut report);
        prop_assert!(report.passed(), "{}", report);
    }

    #[test]
    fn extreme_vertex_matches_scan(inst in instance(40), dx in -1.0f64..1.0, dy in -1.0f64..-1e-3,
                                   i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        for (sign, fam) in verify::sign_classes(&inst) {
            let index = SubpathHullIndex::build(&build_path(&fam, sign).unwrap());
            let (a, b) = (i.index(fam.len()), j.index(fam.len()));
            let handle = index.hull_query(a.min(b), a.max(b)).unwrap();
            let got = handle.extreme_vertex((dx, dy)).unwrap();
            let best = handle.vertices().iter().map(|v| v.dot(dx, dy)).fold(f64::NEG_INFINITY, f64::max);
            prop_assert_eq!(got.dot(dx, dy), best);
        }
    }

    #[test]
    fn generic_lp_matches_pairwise_crossings(seq in mixed_sequence(48)) {
        let engine = SublistLpEngine::build(seq.clone()).unwrap();
        for i in 0..seq.len() {
            for j in i..seq.len() {
                let range = &seq[i..=j];
                let homogeneous = range.iter().all(|h| h.slope() > 0.0)
                    || range.iter().all(|h| h.slope() < 0.0);
                match (engine.lowest_point(i, j), lowest_point_brute(&seq, i, j)) {
                    (Ok(got), Ok(want)) => {
                        prop_assert!(!homogeneous);
                        prop_assert!(relative_deviation(want.y, got.y) <= TOL,
                            "({i},{j}): {got:?} vs {want:?}");
                        let scale = want.y.abs().max(got.x.abs()).max(1.0);
                        for h in range {
                            prop_assert!(h.eval(got.x) <= got.y + TOL * scale);
                        }
                        // bit-identical on repetition
                        prop_assert_eq!(engine.lowest_point(i, j).unwrap(), got);
                    }
                    (Err(_), Err(_)) => prop_assert!(homogeneous),
                    (got, want) => prop_assert!(false, "({i},{j}): {got:?} vs {want:?}"),
                }
            }
        }
    }

    #[test]
    fn lowest_point_grows_with_range(inst in instance(40)) {
        let engine = SublistLpEngine::build(inst.halfplanes()).unwrap();
        let m = engine.len();
        for i in 0..m {
            for j in i + 1..m {
                let Ok(inner) = engine.lowest_point(i, j) else { continue };
                if j + 1 < m {
                    prop_assert!(inner.y <= engine.lowest_point(i, j + 1).unwrap().y);
                }
                if i > 0 {
                    prop_assert!(inner.y <= engine.lowest_point(i - 1, j).unwrap().y);
                }
            }
        }
    }

    #[test]
    fn alpha_matches_brute_force(inst in instance(40)) {
        let engine = AlphaEngine::build(&inst);
        let mut report = OracleReport::new();
        verify::check_alpha(&engine, &mut report);
        prop_assert!(report.passed(), "{}", report);
    }

    #[test]
    fn alpha_brute_matches_direct_minimization(inst in instance(12)) {
        let n = inst.len();
        for i in 0..n {
            for j in i..n {
                let brute = alpha_brute(&inst, i, j).unwrap();
                let direct = minimize_direct(&inst, i, j);
                let scale = brute.y.abs().max(1e-300);
                prop_assert!((brute.y - direct.y).abs() <= 1e-6 * scale);
            }
        }
    }

    #[test]
    fn alpha_matrix_is_sorted(inst in instance(40)) {
        let mut report = OracleReport::new();
        verify::check_alpha_sorted(&AlphaEngine::build(&inst), &mut report);
        prop_assert!(report.passed(), "{}", report);
    }

    #[test]
    fn feasibility_is_monotone(inst in instance(60), seed in any::<u64>()) {
        let mut report = OracleReport::new();
        verify::check_feasibility_monotone(&AlphaEngine::build(&inst), 40, &mut gen::rng(seed), &mut report);
        prop_assert!(report.passed(), "{}", report);
    }

    #[test]
    fn solve_matches_dp_and_enumeration(inst in instance(48), k in 1usize..8) {
        let engine = AlphaEngine::build(&inst);
        let sol = solve(&inst, k).unwrap();
        let dp = dp_solve(&inst, k);
        prop_assert!(relative_deviation(dp, sol.radius) <= TOL, "dp {dp} vs {}", sol.radius);
        prop_assert_eq!(sol.radius, engine.optimal_radius_enumerated(k));
        prop_assert!(relative_deviation(sol.radius, inst.max_cost(&sol.centers)) <= TOL);
        prop_assert_eq!(*sol.breakpoints.last().unwrap(), inst.len());
        prop_assert!(sol.centers.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn radius_is_smallest_feasible_candidate(inst in instance(40), k in 1usize..6) {
        let engine = AlphaEngine::build(&inst);
        let radius = engine.optimal_radius(k);
        prop_assert!(engine.feasible(radius, k).feasible);
        let below = engine
            .candidate_values()
            .into_iter()
            .filter(|&v| v < radius)
            .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
        if let Some(b) = below {
            prop_assert!(!engine.feasible(b, k).feasible);
        }
    }

    #[test]
    fn one_center_is_full_alpha(inst in instance(40)) {
        let full = alpha_brute(&inst, 0, inst.len() - 1).unwrap().y;
        prop_assert_eq!(dp_solve(&inst, 1), full);
        prop_assert!(relative_deviation(full, solve(&inst, 1).unwrap().radius) <= TOL);
    }

    #[test]
    fn solutions_are_equivariant(inst in instance(40), k in 1usize..6, seed in any::<u64>()) {
        let mut report = OracleReport::new();
        verify::check_equivariance(&inst, k, &mut gen::rng(seed), &mut report);
        prop_assert!(report.passed(), "{}", report);
    }

    #[test]
    fn written_instances_parse_back(inst in instance(60)) {
        let mut buf = Vec::new();
        write_instance(&inst, &mut buf).unwrap();
        prop_assert_eq!(parse_points(&buf[..]).unwrap(), inst);
    }
}

#[test]
fn engines_are_shareable_across_threads() {
    fn assert_sync<T: Send + Sync>() {}
    assert_sync::<AlphaEngine>();
    assert_sync::<SublistLpEngine>();
    assert_sync::<SubpathHullIndex>();

    let inst = gen::uniform(2000, 11);
    let engine = AlphaEngine::build(&inst);
    let serial: Vec<_> = (0..64)
        .map(|t| engine.alpha(t, t + 1500).unwrap())
        .collect();
    let parallel: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..4)
            .map(|part| {
                let engine = &engine;
                s.spawn(move || {
                    (part * 16..part * 16 + 16)
                        .map(|t| engine.alpha(t, t + 1500).unwrap())
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().unwrap())
            .collect()
    });
    assert_eq!(serial, parallel);
}

#[test]
fn repeated_intercepts_can_fold_back() {
    // three lines through one x-intercept dualize onto one ray from the
    // origin; visiting them far, near, far retraces a segment
    let fam: Vec<HalfPlane> = [4.0, 1.0, 9.0]
        .iter()
        .map(|&w| HalfPlane::through(w, 1.0))
        .collect();
    let path = build_path(&fam, SlopeSign::Positive).unwrap();
    assert!(!brute_path_simple(path.vertices()));
    assert!(!check_simple(&path));
}

#[test]
fn naive_hull_keeps_lowest_of_equal_abscissas() {
    let pts = [DualPoint::new(-1.0, 0.0), DualPoint::new(-1.0, -6.0)];
    assert_eq!(naive_lower_hull(&pts), vec![DualPoint::new(-1.0, -6.0)]);
}
