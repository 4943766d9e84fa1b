mod common;

use std::sync::Arc;

use bmetric::completion::{
    dstar_estimate, dstar_interval, embed, families, limit_point, strong_triangle_check,
    wellposedness_probe, CompletionPoint, Equivalence, PointSequence, ProbeInput, RationalLine,
};
use bmetric::fixed_point::{
    check_hypotheses, fixed_points, picard_trajectory, Outcome, SetValuedMap,
};
use bmetric::space::Inequality;
use bmetric::{FiniteSpace, PointSet, Rational};
use common::*;
use proptest::prelude::*;

fn arb_space(max_n: usize) -> impl Strategy<Value = FiniteSpace> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(prop::sample::select(palette()), pairs(n))
            .prop_map(move |upper| space_from_upper(n, &upper))
    })
}

fn arb_space_with_map(max_n: usize) -> impl Strategy<Value = (FiniteSpace, Vec<usize>)> {
    arb_space(max_n).prop_flat_map(|s| {
        let n = s.len();
        (Just(s), prop::collection::vec(0..n, n))
    })
}

fn arb_small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(p, d)| q(p, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn constants_match_the_candidate_oracle(s in arb_space(5)) {
        prop_assert_eq!(s.min_b_constant(), oracle_min_constant(&s, Kind::B));
        prop_assert_eq!(s.min_strong_b_constant(), oracle_min_constant(&s, Kind::StrongB));
    }

    #[test]
    fn constant_hierarchy(s in arb_space(5)) {
        let b = s.min_b_constant();
        let strong = s.min_strong_b_constant();
        let chain = s.min_metric_type_constant();
        prop_assert!(b <= strong);
        prop_assert!(b <= chain);
        prop_assert!(s.violations(Inequality::B, &chain).is_empty());
        let metric = s.classify().is_metric;
        prop_assert_eq!(metric, strong == Rational::one());
        prop_assert_eq!(metric, b == Rational::one());
    }

    #[test]
    fn constants_are_minimal(s in arb_space(5)) {
        prop_assume!(s.len() >= 2);
        let eps = q(1, 1000);
        for (kind, k) in [(Inequality::B, s.min_b_constant()), (Inequality::StrongB, s.min_strong_b_constant())] {
            prop_assert!(s.violations(kind, &k).is_empty());
            prop_assert!(!s.violations(kind, &(&k - &eps)).is_empty());
        }
        let chain = s.min_metric_type_constant();
        prop_assert!(s.chain_violations(&chain).is_empty());
        prop_assert!(!s.chain_violations(&(&chain - &eps)).is_empty());
    }

    #[test]
    fn relabeling_invariance(s in arb_space(5), seed in any::<u64>()) {
        let p = s.permuted(&permutation(s.len(), seed));
        prop_assert_eq!(p.min_b_constant(), s.min_b_constant());
        prop_assert_eq!(p.min_strong_b_constant(), s.min_strong_b_constant());
        prop_assert_eq!(p.min_metric_type_constant(), s.min_metric_type_constant());
        prop_assert_eq!(p.classify().is_metric, s.classify().is_metric);
        prop_assert_eq!(p.classify().violations.len(), s.classify().violations.len());
    }

    #[test]
    fn delta_vanishes_exactly_on_inclusion(s in arb_space(5), a_bits in 1u32..32, b_bits in 1u32..32) {
        let n = s.len();
        let set = |bits: u32| -> PointSet { (0..n).filter(|&i| bits & (1 << i) != 0).collect() };
        let (a, b) = (set(a_bits), set(b_bits));
        prop_assume!(!a.is_empty() && !b.is_empty());
        let d = s.delta(&a, &b).unwrap();
        prop_assert_eq!(d.is_zero(), b.is_subset(&a));
    }

    #[test]
    fn openness_certificates_verify((s, center) in arb_space(5).prop_flat_map(|s| { let n = s.len(); (Just(s), 0..n) }),
                                    radius in prop::sample::select(palette())) {
        let k = s.min_strong_b_constant();
        let certs = s.ball_openness_certificate(&k, center, &radius).unwrap();
        let outer = s.ball(center, &radius);
        prop_assert!(outer.contains(&center));
        prop_assert_eq!(certs.len(), outer.len());
        for c in certs {
            prop_assert!(c.inner_radius.is_positive());
            prop_assert!(c.inner_ball.is_subset(&outer));
        }
    }

    #[test]
    fn fixed_points_are_zero_step_picard_fixed_points((s, images) in arb_space_with_map(5)) {
        let map = SetValuedMap::single_valued(&images).unwrap();
        let fixed = fixed_points(&map);
        for x in 0..s.len() {
            let t = picard_trajectory(&s, &map, x, s.len()).unwrap();
            let zero_step = t.outcome == Outcome::FixedPoint { point: x, steps: 0 };
            prop_assert_eq!(zero_step, fixed.contains(&x));
            prop_assert!(!matches!(t.outcome, Outcome::Exhausted));
        }
    }

    #[test]
    fn hypotheses_are_relabeling_invariant((s, images) in arb_space_with_map(4), seed in any::<u64>(),
                                           r in prop::sample::select(palette()), k in prop::sample::select(vec![q(0, 1), q(1, 3), q(1, 2), q(3, 4)])) {
        let map = SetValuedMap::single_valued(&images).unwrap();
        let n = s.len();
        let perm = permutation(n, seed);
        let kk = s.min_strong_b_constant();
        for x0 in 0..n {
            let orig = check_hypotheses(&s, &kk, &map, x0, &r, &k).unwrap();
            let new_x0 = perm.iter().position(|&p| p == x0).unwrap();
            let moved = check_hypotheses(&s.permuted(&perm), &kk, &map.permuted(&perm), new_x0, &r, &k).unwrap();
            prop_assert_eq!(orig.all_hold, moved.all_hold);
            prop_assert_eq!(orig.cond1_holds, moved.cond1_holds);
            prop_assert_eq!(orig.cond2_checks.len(), moved.cond2_checks.len());
            prop_assert_eq!(orig.fixed_points.len(), moved.fixed_points.len());
            let mut a: Vec<_> = orig.cond2_checks.iter().map(|c| (c.delta.clone(), c.bound.clone())).collect();
            let mut b: Vec<_> = moved.cond2_checks.iter().map(|c| (c.delta.clone(), c.bound.clone())).collect();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn shrinking_the_ball_keeps_satisfied_entries((s, images) in arb_space_with_map(5),
                                                   small in prop::sample::select(palette()), extra in prop::sample::select(palette())) {
        // Single-valued maps: Tx ∩ B is {Tx} or empty, so surviving entries are unchanged.
        let map = SetValuedMap::single_valued(&images).unwrap();
        let kk = s.min_strong_b_constant();
        let large = &small + &extra;
        let k = q(1, 2);
        for x0 in 0..s.len() {
            let big = check_hypotheses(&s, &kk, &map, x0, &large, &k).unwrap();
            let little = check_hypotheses(&s, &kk, &map, x0, &small, &k).unwrap();
            for c in &little.cond2_checks {
                let same = big.cond2_checks.iter().find(|b| (b.x, b.y) == (c.x, c.y)).unwrap();
                prop_assert_eq!(&same.delta, &c.delta);
                if same.holds {
                    prop_assert!(c.holds);
                }
            }
        }
    }

    #[test]
    fn dstar_is_symmetric_and_sound(c1 in arb_small_rational(), s1 in arb_small_rational(),
                                    c2 in arb_small_rational(), s2 in arb_small_rational(), i in 1u64..2000) {
        let line = Arc::new(RationalLine);
        let a = CompletionPoint::new(families::approach(&line, c1.clone(), s1));
        let b = CompletionPoint::new(families::approach(&line, c2.clone(), s2));
        let ab = dstar_interval(&a, &b, i).unwrap();
        prop_assert_eq!(&ab, &dstar_interval(&b, &a, i).unwrap());
        prop_assert!(ab.contains(&(&c1 - &c2).abs()));
        let e = dstar_estimate(&a, &b, i).unwrap();
        let four_k_over_i = q(4, i as i64);
        if e.center >= e.radius {
            prop_assert_eq!(ab.width(), four_k_over_i);
        } else {
            prop_assert_eq!(ab.width(), &e.center + &e.radius);
        }
        let aa = dstar_interval(&a, &a, i).unwrap();
        prop_assert_eq!(aa.hi(), &q(2, i as i64));
        prop_assert!(aa.lo().is_zero());
    }

    #[test]
    fn widths_halve_with_doubled_precision(x in arb_small_rational(), y in arb_small_rational(), i in 1u64..500) {
        let line = Arc::new(RationalLine);
        let (a, b) = (embed(&line, x), embed(&line, y));
        let e1 = dstar_estimate(&a, &b, i).unwrap();
        let e2 = dstar_estimate(&a, &b, 2 * i).unwrap();
        prop_assert_eq!(&e1.radius, &(&e2.radius * &q(2, 1)));
        prop_assert_eq!(&e1.center, &e2.center);
        if e1.center >= e1.radius {
            prop_assert_eq!(e1.interval.width(), e2.interval.width() * q(2, 1));
        }
    }

    #[test]
    fn triangle_residual_is_never_certified_positive(c in prop::collection::vec((arb_small_rational(), arb_small_rational()), 3), i in 1u64..500) {
        let line = Arc::new(RationalLine);
        let pts: Vec<_> = c.into_iter().map(|(c, s)| CompletionPoint::new(families::approach(&line, c, s))).collect();
        let res = strong_triangle_check(&pts[0], &pts[1], &pts[2], i).unwrap();
        prop_assert!(!res.lo().is_positive());
    }

    #[test]
    fn strong_probe_never_clashes(c in arb_small_rational(), d in arb_small_rational(),
                                  scales in prop::collection::vec(arb_small_rational(), 4)) {
        let line = Arc::new(RationalLine);
        let seq = |center: &Rational, s: &Rational| families::approach(&line, center.clone(), s.clone());
        let input = ProbeInput {
            x: seq(&c, &scales[0]),
            z: seq(&c, &scales[1]),
            y: seq(&d, &scales[2]),
            w: seq(&d, &scales[3]),
        };
        let report = wellposedness_probe(&input, None, &q(1, 10), 200).unwrap();
        prop_assert_eq!(report.equivalence_xz, Equivalence::Equivalent);
        prop_assert!(!report.clash);
        prop_assert!(report.limit_xy.contains(&(&c - &d).abs()));
    }

    #[test]
    fn limit_points_converge(c in arb_small_rational(), s1 in arb_small_rational(), s2 in arb_small_rational()) {
        let line = Arc::new(RationalLine);
        let points = {
            let line = Arc::clone(&line);
            let (c, s1, s2) = (c.clone(), s1.clone(), s2.clone());
            move |n: u64| CompletionPoint::new(families::approach(&line, &c + &(&s1 / &Rational::from(n)), s2.clone()))
        };
        let abs = s1.abs();
        let xs = PointSequence::new(Arc::clone(&line), points, move |j| (&abs * &Rational::from(j)).ceil_u64().max(1));
        let limit = limit_point(&xs).unwrap();
        let target = q(1, 50);
        let (n, precision) = limit.certified_index(&target);
        let iv = limit.distance_to_term(n, precision).unwrap();
        prop_assert!(iv.hi() < &target);
        let to_c = dstar_interval(&limit.point, &embed(&line, c), 1000).unwrap();
        prop_assert!(to_c.lo().is_zero());
    }
}

#[test]
fn chain_constant_matches_exhaustive_chain_enumeration() {
    // Every space with n <= 4 and distances in {1, 2, 3, 6}.
    let values: Vec<Rational> = [1, 2, 3, 6].iter().map(|&v| Rational::from(v)).collect();
    let mut checked = 0;
    for n in 1..=4 {
        for s in bmetric::search::enumerate_spaces(n, &values) {
            assert_eq!(
                s.min_metric_type_constant(),
                oracle_metric_type(&s),
                "{s:?}"
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 1 + 4 + 64 + 4096);
}
