//! Hypothesis checks for the local fixed-point theorem of Dontchev–Hager
//! type on finite strong b-metric spaces, plus fixed-point enumeration and
//! Picard iteration.
//!
//! The two hypotheses checked are
//!
//! 1. `dist(x0, T x0) < r (1 - k)`, and
//! 2. `δ(Tx ∩ B(x0, r), Ty) <= k D(x, y)` for every `x, y` in `B(x0, r)`
//!    such that `Tx ∩ B(x0, r)` is nonempty.
//!
//! Pairs whose restricted image is empty are recorded as vacuous.

use serde::Serialize;
use thiserror::Error;

use crate::rational::Rational;
use crate::space::{FiniteSpace, PointSet, SpaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixedPointError {
    #[error("contraction factor k = {0} is not in [0, 1)")]
    InvalidK(Rational),
    #[error("radius r = {0} must be positive")]
    InvalidRadius(Rational),
    #[error("map defines {map} targets for a space of {space} points")]
    SizeMismatch { map: usize, space: usize },
    #[error("point {0} has an empty target set")]
    EmptyTarget(usize),
    #[error("target {target} of point {point} is not in the space")]
    TargetOutOfRange { point: usize, target: usize },
    #[error("point {0} is not in the space")]
    PointOutOfRange(usize),
    #[error("map is not single-valued at point {0}")]
    NotSingleValued(usize),
    #[error("max_steps must be at least 1")]
    NoSteps,
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// A map sending each point to a nonempty set of points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SetValuedMap {
    targets: Vec<PointSet>,
}

impl SetValuedMap {
    /// Checks that every target set is nonempty and within `0..points`.
    pub fn new(targets: Vec<PointSet>, points: usize) -> Result<Self, FixedPointError> {
        if targets.len() != points {
            return Err(FixedPointError::SizeMismatch {
                map: targets.len(),
                space: points,
            });
        }
        for (point, t) in targets.iter().enumerate() {
            if t.is_empty() {
                return Err(FixedPointError::EmptyTarget(point));
            }
            if let Some(&target) = t.iter().find(|&&p| p >= points) {
                return Err(FixedPointError::TargetOutOfRange { point, target });
            }
        }
        Ok(SetValuedMap { targets })
    }

    /// The single-valued map `x ↦ {images[x]}`.
    pub fn single_valued(images: &[usize]) -> Result<Self, FixedPointError> {
        let targets = images.iter().map(|&p| PointSet::from([p])).collect();
        SetValuedMap::new(targets, images.len())
    }

    pub fn identity(points: usize) -> Self {
        SetValuedMap {
            targets: (0..points).map(|p| PointSet::from([p])).collect(),
        }
    }

    pub fn constant(points: usize, value: usize) -> Self {
        assert!(value < points, "constant value {value} out of range");
        SetValuedMap {
            targets: vec![PointSet::from([value]); points],
        }
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn image(&self, x: usize) -> &PointSet {
        &self.targets[x]
    }

    pub fn targets(&self) -> &[PointSet] {
        &self.targets
    }

    pub fn is_single_valued(&self) -> bool {
        self.targets.iter().all(|t| t.len() == 1)
    }

    /// The unique image of `x`, if `T x` is a singleton.
    pub fn single_image(&self, x: usize) -> Option<usize> {
        let t = &self.targets[x];
        (t.len() == 1).then(|| *t.iter().next().unwrap())
    }

    /// Relabels consistently with [`FiniteSpace::permuted`]: new point `i` is old `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> SetValuedMap {
        let mut inverse = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        SetValuedMap {
            targets: perm
                .iter()
                .map(|&old| self.targets[old].iter().map(|&t| inverse[t]).collect())
                .collect(),
        }
    }
}

/// One evaluated instance of the second hypothesis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractionCheck {
    pub x: usize,
    pub y: usize,
    /// `Tx ∩ B(x0, r)`, always nonempty here.
    pub restricted_image: PointSet,
    /// `δ(Tx ∩ B(x0, r), Ty)`
    pub delta: Rational,
    /// `k D(x, y)`
    pub bound: Rational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub x0: usize,
    pub r: Rational,
    pub k: Rational,
    /// `K` the space was checked against.
    pub constant: Rational,
    pub ball: PointSet,
    /// `dist(x0, T x0)`
    pub cond1_lhs: Rational,
    /// `r (1 - k)`
    pub cond1_rhs: Rational,
    pub cond1_holds: bool,
    /// One entry per ordered pair of ball points with nonempty `Tx ∩ B(x0, r)`, in `(x, y)` order.
    pub cond2_checks: Vec<ContractionCheck>,
    /// Ordered pairs skipped because `Tx ∩ B(x0, r)` is empty.
    pub vacuous_pairs: Vec<(usize, usize)>,
    pub all_hold: bool,
    pub fixed_points: PointSet,
}

impl HypothesisReport {
    /// Hypotheses hold yet the map has no fixed point.
    pub fn is_counterexample(&self) -> bool {
        self.all_hold && self.fixed_points.is_empty()
    }
}

fn check_map(space: &FiniteSpace, map: &SetValuedMap) -> Result<(), FixedPointError> {
    if map.len() != space.len() {
        return Err(FixedPointError::SizeMismatch {
            map: map.len(),
            space: space.len(),
        });
    }
    Ok(())
}

/// Evaluates both hypotheses for `T` at `(x0, r, k)` on a strong b-metric
/// space with constant `K`.
///
/// Every subset of a finite space is closed, so closedness of `T x` is not checked.
pub fn check_hypotheses(
    space: &FiniteSpace,
    constant: &Rational,
    map: &SetValuedMap,
    x0: usize,
    r: &Rational,
    k: &Rational,
) -> Result<HypothesisReport, FixedPointError> {
    if k.is_negative() || k >= &Rational::one() {
        return Err(FixedPointError::InvalidK(k.clone()));
    }
    if !r.is_positive() {
        return Err(FixedPointError::InvalidRadius(r.clone()));
    }
    check_map(space, map)?;
    if x0 >= space.len() {
        return Err(FixedPointError::PointOutOfRange(x0));
    }
    let required = space.min_strong_b_constant();
    if &required > constant {
        return Err(SpaceError::NotStrongB {
            given: constant.clone(),
            required,
        }
        .into());
    }
    Ok(evaluate_hypotheses(
        space,
        constant,
        map,
        x0,
        r,
        k,
        &space.ball(x0, r),
    ))
}

/// The hypothesis evaluation itself, with parameters already validated and
/// the ball precomputed. Used directly by the search loop.
pub(crate) fn evaluate_hypotheses(
    space: &FiniteSpace,
    constant: &Rational,
    map: &SetValuedMap,
    x0: usize,
    r: &Rational,
    k: &Rational,
    ball: &PointSet,
) -> HypothesisReport {
    let cond1_lhs = space
        .dist_to_set(x0, map.image(x0))
        .expect("target sets are nonempty");
    let cond1_rhs = r * &(Rational::one() - k);
    let cond1_holds = cond1_lhs < cond1_rhs;

    let mut cond2_checks = Vec::new();
    let mut vacuous_pairs = Vec::new();
    for &x in ball {
        let restricted: PointSet = map.image(x).intersection(ball).copied().collect();
        for &y in ball {
            if restricted.is_empty() {
                vacuous_pairs.push((x, y));
                continue;
            }
            let delta = space
                .delta(&restricted, map.image(y))
                .expect("both sets nonempty");
            let bound = k * space.d(x, y);
            let holds = delta <= bound;
            cond2_checks.push(ContractionCheck {
                x,
                y,
                restricted_image: restricted.clone(),
                delta,
                bound,
                holds,
            });
        }
    }

    let all_hold = cond1_holds && cond2_checks.iter().all(|c| c.holds);
    HypothesisReport {
        x0,
        r: r.clone(),
        k: k.clone(),
        constant: constant.clone(),
        ball: ball.clone(),
        cond1_lhs,
        cond1_rhs,
        cond1_holds,
        cond2_checks,
        vacuous_pairs,
        all_hold,
        fixed_points: fixed_points(map),
    }
}

/// `{x : x ∈ T x}`.
pub fn fixed_points(map: &SetValuedMap) -> PointSet {
    (0..map.len())
        .filter(|&x| map.image(x).contains(&x))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Outcome {
    /// Reached `point` with `T point = point` after `steps` moves.
    FixedPoint { point: usize, steps: usize },
    /// Revisited a point; the cycle has the given period.
    Cycle { period: usize },
    /// `max_steps` moves made without settling.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trajectory {
    /// Visited points, starting at `x0`. A detected cycle ends with the revisited point.
    pub points: Vec<usize>,
    /// `D(x_n, x_{n+1})` for each recorded move.
    pub step_distances: Vec<Rational>,
    pub outcome: Outcome,
}

/// Iterates `x_{n+1} = T x_n` from `x0` for a single-valued map.
pub fn picard_trajectory(
    space: &FiniteSpace,
    map: &SetValuedMap,
    x0: usize,
    max_steps: usize,
) -> Result<Trajectory, FixedPointError> {
    check_map(space, map)?;
    if x0 >= space.len() {
        return Err(FixedPointError::PointOutOfRange(x0));
    }
    if max_steps == 0 {
        return Err(FixedPointError::NoSteps);
    }
    if let Some(x) = (0..map.len()).find(|&x| map.single_image(x).is_none()) {
        return Err(FixedPointError::NotSingleValued(x));
    }

    let mut points = vec![x0];
    let mut step_distances = Vec::new();
    let mut first_visit = vec![None; space.len()];
    first_visit[x0] = Some(0);
    loop {
        let current = *points.last().unwrap();
        let next = map.single_image(current).unwrap();
        if next == current {
            let steps = points.len() - 1;
            return Ok(Trajectory {
                points,
                step_distances,
                outcome: Outcome::FixedPoint {
                    point: current,
                    steps,
                },
            });
        }
        if step_distances.len() == max_steps {
            return Ok(Trajectory {
                points,
                step_distances,
                outcome: Outcome::Exhausted,
            });
        }
        step_distances.push(space.d(current, next).clone());
        let position = points.len();
        points.push(next);
        if let Some(seen) = first_visit[next] {
            return Ok(Trajectory {
                points,
                step_distances,
                outcome: Outcome::Cycle {
                    period: position - seen,
                },
            });
        }
        first_visit[next] = Some(position);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demos;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    fn half() -> Rational {
        Rational::new(1, 2)
    }

    #[test]
    fn example_replay() {
        let space = demos::example_2_1_space();
        let map = demos::example_2_1_map();
        let report = check_hypotheses(&space, &r(4), &map, 0, &r(6), &half()).unwrap();
        assert_eq!(report.cond1_lhs, r(2));
        assert_eq!(report.cond1_rhs, r(3));
        assert!(report.cond1_holds);
        assert_eq!(report.ball, PointSet::from([0, 1]));
        assert_eq!(report.cond2_checks.len(), 2);
        let (c11, c12) = (&report.cond2_checks[0], &report.cond2_checks[1]);
        assert_eq!(
            (c11.x, c11.y, c11.delta.clone(), c11.bound.clone()),
            (0, 0, r(0), r(0))
        );
        assert_eq!(
            (c12.x, c12.y, c12.delta.clone(), c12.bound.clone()),
            (0, 1, r(1), r(1))
        );
        assert_eq!(c12.restricted_image, PointSet::from([1]));
        assert_eq!(report.vacuous_pairs, vec![(1, 0), (1, 1)]);
        assert!(report.all_hold);
        assert!(report.fixed_points.is_empty());
        assert!(report.is_counterexample());
    }

    #[test]
    fn smaller_k_breaks_the_contraction_condition() {
        let space = demos::example_2_1_space();
        let map = demos::example_2_1_map();
        let report = check_hypotheses(&space, &r(4), &map, 0, &r(6), &Rational::new(1, 4)).unwrap();
        let failing: Vec<_> = report.cond2_checks.iter().filter(|c| !c.holds).collect();
        assert_eq!(failing.len(), 1);
        assert_eq!((failing[0].x, failing[0].y), (0, 1));
        assert_eq!(failing[0].bound, half());
        assert!(!report.all_hold);
    }

    #[test]
    fn identity_map_on_a_singleton_ball() {
        let space = demos::example_2_1_space();
        let id = SetValuedMap::identity(3);
        let report = check_hypotheses(&space, &r(4), &id, 2, &r(1), &r(0)).unwrap();
        assert_eq!(report.ball, PointSet::from([2]));
        assert_eq!(report.cond1_lhs, r(0));
        assert!(report.cond1_holds);
        assert!(report.cond2_checks.iter().all(|c| c.delta.is_zero()));
        assert!(report.all_hold);
        assert_eq!(report.fixed_points, PointSet::from([0, 1, 2]));
    }

    #[test]
    fn identity_map_on_a_larger_ball_needs_k_one() {
        // δ({x}, {y}) = D(x, y), so k = 0 fails off the diagonal.
        let space = demos::example_2_1_space();
        let id = SetValuedMap::identity(3);
        let report = check_hypotheses(&space, &r(4), &id, 2, &r(5), &r(0)).unwrap();
        assert_eq!(report.ball, PointSet::from([1, 2]));
        for c in &report.cond2_checks {
            assert_eq!(&c.delta, space.d(c.x, c.y));
            assert_eq!(c.holds, c.x == c.y);
        }
        assert!(!report.all_hold);
    }

    #[test]
    fn parameter_errors() {
        let space = demos::example_2_1_space();
        let map = demos::example_2_1_map();
        assert_eq!(
            check_hypotheses(&space, &r(4), &map, 0, &r(6), &r(1)),
            Err(FixedPointError::InvalidK(r(1)))
        );
        assert_eq!(
            check_hypotheses(&space, &r(4), &map, 0, &r(6), &r(-1)),
            Err(FixedPointError::InvalidK(r(-1)))
        );
        assert_eq!(
            check_hypotheses(&space, &r(4), &map, 0, &r(0), &half()),
            Err(FixedPointError::InvalidRadius(r(0)))
        );
        assert!(matches!(
            check_hypotheses(&space, &r(2), &map, 0, &r(6), &half()),
            Err(FixedPointError::Space(SpaceError::NotStrongB { .. }))
        ));
        assert_eq!(
            check_hypotheses(&space, &r(4), &SetValuedMap::identity(2), 0, &r(6), &half()),
            Err(FixedPointError::SizeMismatch { map: 2, space: 3 })
        );
    }

    #[test]
    fn map_construction_errors() {
        assert_eq!(
            SetValuedMap::new(vec![PointSet::new()], 1),
            Err(FixedPointError::EmptyTarget(0))
        );
        assert_eq!(
            SetValuedMap::single_valued(&[0, 2]),
            Err(FixedPointError::TargetOutOfRange {
                point: 1,
                target: 2
            })
        );
    }

    #[test]
    fn fixed_point_sets() {
        assert!(fixed_points(&demos::example_2_1_map()).is_empty());
        assert_eq!(
            fixed_points(&SetValuedMap::identity(3)),
            PointSet::from([0, 1, 2])
        );
        assert_eq!(
            fixed_points(&SetValuedMap::constant(3, 1)),
            PointSet::from([1])
        );
        let multi = SetValuedMap::new(
            vec![
                PointSet::from([1, 2]),
                PointSet::from([0, 1]),
                PointSet::from([0]),
            ],
            3,
        )
        .unwrap();
        assert_eq!(fixed_points(&multi), PointSet::from([1]));
    }

    #[test]
    fn picard_cycles_on_the_example() {
        let space = demos::example_2_1_space();
        let t = picard_trajectory(&space, &demos::example_2_1_map(), 0, 10).unwrap();
        assert_eq!(t.points, vec![0, 1, 2, 0]);
        assert_eq!(t.step_distances, vec![r(2), r(1), r(6)]);
        assert_eq!(t.outcome, Outcome::Cycle { period: 3 });
    }

    #[test]
    fn picard_fixed_points_and_exhaustion() {
        let space = demos::example_2_1_space();
        let t = picard_trajectory(&space, &SetValuedMap::identity(3), 1, 1).unwrap();
        assert_eq!(t.outcome, Outcome::FixedPoint { point: 1, steps: 0 });
        for x0 in 0..3 {
            let t = picard_trajectory(&space, &SetValuedMap::constant(3, 2), x0, 1).unwrap();
            let steps = usize::from(x0 != 2);
            assert_eq!(t.outcome, Outcome::FixedPoint { point: 2, steps });
        }
        let t = picard_trajectory(&space, &demos::example_2_1_map(), 0, 2).unwrap();
        assert_eq!(t.outcome, Outcome::Exhausted);
        assert_eq!(t.points, vec![0, 1, 2]);
    }

    #[test]
    fn picard_errors() {
        let space = demos::example_2_1_space();
        let multi = SetValuedMap::new(
            vec![
                PointSet::from([1, 2]),
                PointSet::from([0]),
                PointSet::from([0]),
            ],
            3,
        )
        .unwrap();
        assert_eq!(
            picard_trajectory(&space, &multi, 0, 5),
            Err(FixedPointError::NotSingleValued(0))
        );
        assert_eq!(
            picard_trajectory(&space, &SetValuedMap::identity(3), 0, 0),
            Err(FixedPointError::NoSteps)
        );
    }

    #[test]
    fn permuting_the_map_follows_the_space() {
        let map = demos::example_2_1_map();
        let perm = [2, 0, 1];
        let p = map.permuted(&perm);
        // new 0 = old 2 ↦ old 0 = new 1
        assert_eq!(p.single_image(0), Some(1));
        assert_eq!(p.single_image(1), Some(2));
        assert_eq!(p.single_image(2), Some(0));
    }
}
