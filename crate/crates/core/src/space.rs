//! Finite distance spaces over exact rationals.
//!
//! A [`FiniteSpace`] is a labelled point set with a symmetric distance
//! matrix that is zero exactly on the diagonal. On top of it this module
//! computes the least relaxation constant for each generalized-metric class
//! (b-metric, strong b-metric, chain-inequality metric-type), produces
//! inequality traces, and evaluates balls, `dist(x, A)` and `δ(A, B)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::rational::{max_of, Rational};

/// Point indices, ordered.
pub type PointSet = BTreeSet<usize>;

/// A violated axiom of a candidate distance matrix. Indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum AxiomViolation {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("asymmetric entry: D({0},{1}) != D({1},{0})")]
    AsymmetricEntry(usize, usize),
    #[error("nonzero diagonal entry D({0},{0})")]
    NonzeroDiagonal(usize),
    #[error("zero distance between distinct points {0} and {1}")]
    ZeroOffDiagonal(usize, usize),
    #[error("negative entry D({0},{1})")]
    NegativeEntry(usize, usize),
    #[error("space has no points")]
    Empty,
    #[error("{labels} labels given for {points} points")]
    LabelCount { labels: usize, points: usize },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
}

/// Every axiom violation found while validating a matrix.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub struct InvalidSpace(pub Vec<AxiomViolation>);

impl fmt::Display for InvalidSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid distance matrix: ")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("empty point set")]
    EmptySet,
    #[error("space is not a strong b-metric space with K = {given}; least constant is {required}")]
    NotStrongB { given: Rational, required: Rational },
    #[error("radius must be positive, got {0}")]
    InvalidRadius(Rational),
    #[error("ball inclusion failed at point {point}")]
    CertificateFailed { point: usize },
}

#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct FiniteSpace {
    labels: Vec<String>,
    matrix: Vec<Vec<Rational>>,
}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteSpace")
            .field("labels", &self.labels)
            .field("matrix", &self.matrix)
            .finish()
    }
}

/// Validates a labelled distance matrix. Labels default to `1..=n`.
///
/// On failure every violated axiom is reported, not just the first.
pub fn validate_space(
    labels: Option<Vec<String>>,
    matrix: Vec<Vec<Rational>>,
) -> Result<FiniteSpace, InvalidSpace> {
    let n = matrix.len();
    if n == 0 {
        return Err(InvalidSpace(vec![AxiomViolation::Empty]));
    }
    if let Some((row, r)) = matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(InvalidSpace(vec![AxiomViolation::NonSquare {
            row,
            len: r.len(),
            expected: n,
        }]));
    }

    let mut violations = Vec::new();
    let labels = labels.unwrap_or_else(|| (1..=n).map(|i| i.to_string()).collect());
    if labels.len() != n {
        violations.push(AxiomViolation::LabelCount {
            labels: labels.len(),
            points: n,
        });
    }
    let mut seen = BTreeSet::new();
    for l in &labels {
        if !seen.insert(l.as_str()) {
            violations.push(AxiomViolation::DuplicateLabel(l.clone()));
        }
    }

    for i in 0..n {
        for j in 0..n {
            let d = &matrix[i][j];
            if i == j {
                if !d.is_zero() {
                    violations.push(AxiomViolation::NonzeroDiagonal(i));
                }
                continue;
            }
            let symmetric = matrix[i][j] == matrix[j][i];
            if i < j && !symmetric {
                violations.push(AxiomViolation::AsymmetricEntry(i, j));
            }
            // Symmetric pairs are reported once, from the upper triangle.
            if i < j || !symmetric {
                if d.is_negative() {
                    violations.push(AxiomViolation::NegativeEntry(i, j));
                } else if d.is_zero() {
                    violations.push(AxiomViolation::ZeroOffDiagonal(i, j));
                }
            }
        }
    }

    if violations.is_empty() {
        Ok(FiniteSpace { labels, matrix })
    } else {
        Err(InvalidSpace(violations))
    }
}

/// Which relaxed triangle inequality an instance checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Inequality {
    /// `D(x,z) <= D(x,y) + D(y,z)`
    Triangle,
    /// `D(x,z) <= K [D(x,y) + D(y,z)]`
    B,
    /// `D(x,z) <= D(x,y) + K D(y,z)`
    StrongB,
}

/// One evaluated instance `lhs <= rhs` of an [`Inequality`] at triple `(x, y, z)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityInstance {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub inequality: Inequality,
    pub constant: Rational,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl InequalityInstance {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }

    pub fn is_tight(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// A pair whose direct distance exceeds `K` times its shortest chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainViolation {
    pub x: usize,
    pub z: usize,
    pub direct: Rational,
    pub shortest_chain: Rational,
    pub constant: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub is_semimetric: bool,
    pub is_metric: bool,
    pub min_b_constant: Rational,
    pub min_strong_b_constant: Rational,
    pub min_metric_type_constant: Rational,
    /// Triangle-inequality violations, i.e. the witnesses against being a metric.
    pub violations: Vec<InequalityInstance>,
}

/// Certificate that a point of a ball has a smaller ball around it inside the original.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallCertificate {
    pub point: usize,
    pub inner_radius: Rational,
    pub inner_ball: PointSet,
}

impl FiniteSpace {
    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    /// `D(x, y)`. Panics on out-of-range indices.
    pub fn d(&self, x: usize, y: usize) -> &Rational {
        &self.matrix[x][y]
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    /// Relabels the space so that new point `i` is old point `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> FiniteSpace {
        assert_eq!(perm.len(), self.len(), "permutation length mismatch");
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        let matrix = perm
            .iter()
            .map(|&a| perm.iter().map(|&b| self.matrix[a][b].clone()).collect())
            .collect();
        FiniteSpace { labels, matrix }
    }

    /// Same space restricted to the given points, in the given order.
    pub fn restricted(&self, points: &[usize]) -> FiniteSpace {
        let labels = points.iter().map(|&p| self.labels[p].clone()).collect();
        let matrix = points
            .iter()
            .map(|&a| points.iter().map(|&b| self.matrix[a][b].clone()).collect())
            .collect();
        FiniteSpace { labels, matrix }
    }

    pub fn instance(
        &self,
        inequality: Inequality,
        constant: &Rational,
        x: usize,
        y: usize,
        z: usize,
    ) -> InequalityInstance {
        let (dxy, dyz) = (self.d(x, y), self.d(y, z));
        let rhs = match inequality {
            Inequality::Triangle => dxy + dyz,
            Inequality::B => constant * &(dxy + dyz),
            Inequality::StrongB => dxy + &(constant * dyz),
        };
        InequalityInstance {
            x,
            y,
            z,
            inequality,
            constant: constant.clone(),
            lhs: self.d(x, z).clone(),
            rhs,
        }
    }

    /// Every ordered triple evaluated against `inequality` at `constant`.
    /// With `distinct_only`, triples repeating a point are left out.
    pub fn inequality_trace(
        &self,
        inequality: Inequality,
        constant: &Rational,
        distinct_only: bool,
    ) -> Vec<InequalityInstance> {
        let mut out = Vec::new();
        for x in self.points() {
            for y in self.points() {
                for z in self.points() {
                    if distinct_only && (x == y || y == z || x == z) {
                        continue;
                    }
                    out.push(self.instance(inequality, constant, x, y, z));
                }
            }
        }
        out
    }

    /// Failing instances of `inequality` at `constant` over all ordered triples.
    pub fn violations(
        &self,
        inequality: Inequality,
        constant: &Rational,
    ) -> Vec<InequalityInstance> {
        self.inequality_trace(inequality, constant, false)
            .into_iter()
            .filter(|inst| !inst.holds())
            .collect()
    }

    /// Least `K >= 1` with `D(x,z) <= K [D(x,y) + D(y,z)]` for all triples.
    pub fn min_b_constant(&self) -> Rational {
        let mut best = Rational::one();
        for x in self.points() {
            for y in self.points() {
                for z in self.points() {
                    let denom = self.d(x, y) + self.d(y, z);
                    if denom.is_positive() {
                        best = max_of(&best, &(self.d(x, z) / &denom));
                    }
                }
            }
        }
        best
    }

    /// Least `K >= 1` with `D(x,z) <= D(x,y) + K D(y,z)` for all ordered triples.
    pub fn min_strong_b_constant(&self) -> Rational {
        let mut best = Rational::one();
        for x in self.points() {
            for y in self.points() {
                for z in self.points() {
                    let dyz = self.d(y, z);
                    // y == z reduces to D(x,z) <= D(x,z).
                    if dyz.is_positive() {
                        best = max_of(&best, &((self.d(x, z) - self.d(x, y)) / dyz));
                    }
                }
            }
        }
        best
    }

    /// All-pairs shortest chain lengths, by exact Floyd–Warshall relaxation.
    pub fn shortest_chains(&self) -> Vec<Vec<Rational>> {
        let mut sp = self.matrix.clone();
        let n = self.len();
        for via in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let through = &sp[a][via] + &sp[via][b];
                    if through < sp[a][b] {
                        sp[a][b] = through;
                    }
                }
            }
        }
        sp
    }

    /// Least `K >= 1` such that `D(x,z)` is at most `K` times the length of
    /// every chain from `x` to `z`. The binding chain is the shortest one.
    pub fn min_metric_type_constant(&self) -> Rational {
        let sp = self.shortest_chains();
        let mut best = Rational::one();
        for x in self.points() {
            for z in self.points() {
                if x != z {
                    best = max_of(&best, &(self.d(x, z) / &sp[x][z]));
                }
            }
        }
        best
    }

    /// Pairs violating the chain inequality at `constant`.
    pub fn chain_violations(&self, constant: &Rational) -> Vec<ChainViolation> {
        let sp = self.shortest_chains();
        let mut out = Vec::new();
        for x in self.points() {
            for z in self.points() {
                if x != z && self.d(x, z) > &(constant * &sp[x][z]) {
                    out.push(ChainViolation {
                        x,
                        z,
                        direct: self.d(x, z).clone(),
                        shortest_chain: sp[x][z].clone(),
                        constant: constant.clone(),
                    });
                }
            }
        }
        out
    }

    pub fn classify(&self) -> ClassificationReport {
        let violations = self.violations(Inequality::Triangle, &Rational::one());
        ClassificationReport {
            is_semimetric: true,
            is_metric: violations.is_empty(),
            min_b_constant: self.min_b_constant(),
            min_strong_b_constant: self.min_strong_b_constant(),
            min_metric_type_constant: self.min_metric_type_constant(),
            violations,
        }
    }

    /// The open ball `{x : D(center, x) < radius}`.
    pub fn ball(&self, center: usize, radius: &Rational) -> PointSet {
        self.points()
            .filter(|&x| self.d(center, x) < radius)
            .collect()
    }

    /// For each `y` in `B(center, radius)`, the inner radius
    /// `(radius - D(center, y)) / K` and the enumerated inclusion of
    /// `B(y, inner)` in the outer ball.
    pub fn ball_openness_certificate(
        &self,
        constant: &Rational,
        center: usize,
        radius: &Rational,
    ) -> Result<Vec<BallCertificate>, SpaceError> {
        if !radius.is_positive() {
            return Err(SpaceError::InvalidRadius(radius.clone()));
        }
        let required = self.min_strong_b_constant();
        if &required > constant {
            return Err(SpaceError::NotStrongB {
                given: constant.clone(),
                required,
            });
        }
        let outer = self.ball(center, radius);
        outer
            .iter()
            .map(|&y| {
                let inner_radius = (radius - self.d(center, y)) / constant.clone();
                let inner_ball = self.ball(y, &inner_radius);
                if inner_ball.is_subset(&outer) {
                    Ok(BallCertificate {
                        point: y,
                        inner_radius,
                        inner_ball,
                    })
                } else {
                    Err(SpaceError::CertificateFailed { point: y })
                }
            })
            .collect()
    }

    /// `dist(x, A) = min_{a in A} D(x, a)`.
    pub fn dist_to_set(&self, x: usize, set: &PointSet) -> Result<Rational, SpaceError> {
        set.iter()
            .map(|&a| self.d(x, a))
            .min()
            .cloned()
            .ok_or(SpaceError::EmptySet)
    }

    /// `δ(A, B) = max_{x in B} dist(x, A)`; the supremum runs over the second argument.
    pub fn delta(&self, a: &PointSet, b: &PointSet) -> Result<Rational, SpaceError> {
        if a.is_empty() {
            return Err(SpaceError::EmptySet);
        }
        let mut best: Option<Rational> = None;
        for &x in b {
            let d = self.dist_to_set(x, a)?;
            best = Some(match best {
                Some(cur) => max_of(&cur, &d),
                None => d,
            });
        }
        best.ok_or(SpaceError::EmptySet)
    }
}
