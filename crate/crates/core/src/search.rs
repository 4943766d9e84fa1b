//! Exhaustive search for finite counterexamples: spaces and self-maps on
//! which both fixed-point hypotheses hold but no fixed point exists.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fixed_point::{evaluate_hypotheses, HypothesisReport, SetValuedMap};
use crate::rational::Rational;
use crate::space::{validate_space, FiniteSpace, Inequality};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub n: usize,
    pub palette: Vec<Rational>,
    pub k_candidates: Vec<Rational>,
    pub r_candidates: Vec<Rational>,
    pub require_strong_b: bool,
    /// Only search one representative per relabeling class of spaces.
    pub canonical: bool,
    pub max_results: usize,
}

impl SearchConfig {
    pub fn new(
        n: usize,
        palette: Vec<Rational>,
        k_candidates: Vec<Rational>,
        r_candidates: Vec<Rational>,
    ) -> Self {
        SearchConfig {
            n,
            palette,
            k_candidates,
            r_candidates,
            require_strong_b: true,
            canonical: false,
            max_results: usize::MAX,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.n < 2 {
            return Err(SearchError::TooFewPoints(self.n));
        }
        if self.palette.is_empty() {
            return Err(SearchError::EmptyPalette);
        }
        if let Some(v) = self.palette.iter().find(|v| !v.is_positive()) {
            return Err(SearchError::NonPositiveDistance(v.clone()));
        }
        if let Some(k) = self
            .k_candidates
            .iter()
            .find(|k| k.is_negative() || **k >= Rational::one())
        {
            return Err(SearchError::InvalidK(k.clone()));
        }
        if let Some(r) = self.r_candidates.iter().find(|r| !r.is_positive()) {
            return Err(SearchError::InvalidRadius(r.clone()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("palette is empty")]
    EmptyPalette,
    #[error("palette distance {0} is not positive")]
    NonPositiveDistance(Rational),
    #[error("k candidate {0} is not in [0, 1)")]
    InvalidK(Rational),
    #[error("r candidate {0} is not positive")]
    InvalidRadius(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub space: FiniteSpace,
    /// Least strong-b constant of `space`.
    pub constant: Rational,
    pub map: SetValuedMap,
    pub x0: usize,
    pub r: Rational,
    pub k: Rational,
    pub report: HypothesisReport,
}

/// Relabeling-invariant key of a configuration: the lexicographically least
/// `(upper-triangle distances, map, x0)` over all permutations of the points.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CanonicalKey {
    pub distances: Vec<Rational>,
    pub map: SetValuedMap,
    pub x0: usize,
    pub r: Rational,
    pub k: Rational,
}

fn upper_triangle(space: &FiniteSpace) -> Vec<Rational> {
    let n = space.len();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| space.d(i, j).clone())
        .collect()
}

pub fn canonical_key(
    space: &FiniteSpace,
    map: &SetValuedMap,
    x0: usize,
    r: &Rational,
    k: &Rational,
) -> CanonicalKey {
    let n = space.len();
    (0..n)
        .permutations(n)
        .map(|perm| {
            let new_x0 = perm.iter().position(|&p| p == x0).unwrap();
            CanonicalKey {
                distances: upper_triangle(&space.permuted(&perm)),
                map: map.permuted(&perm),
                x0: new_x0,
                r: r.clone(),
                k: k.clone(),
            }
        })
        .min()
        .expect("at least one permutation")
}

impl Counterexample {
    pub fn canonical_key(&self) -> CanonicalKey {
        canonical_key(&self.space, &self.map, self.x0, &self.r, &self.k)
    }
}

/// Every `n`-point space with off-diagonal distances drawn from `palette`,
/// in odometer order over the upper triangle (last pair varies fastest).
pub struct SpaceEnumerator {
    n: usize,
    palette: Vec<Rational>,
    digits: Vec<usize>,
    done: bool,
}

pub fn enumerate_spaces(n: usize, palette: &[Rational]) -> SpaceEnumerator {
    let pairs = n * n.saturating_sub(1) / 2;
    SpaceEnumerator {
        n,
        palette: palette.to_vec(),
        digits: vec![0; pairs],
        done: palette.is_empty() || n == 0,
    }
}

impl SpaceEnumerator {
    fn current(&self) -> Option<FiniteSpace> {
        let n = self.n;
        let mut matrix = vec![vec![Rational::zero(); n]; n];
        let mut d = self.digits.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = self.palette[*d.next().unwrap()].clone();
                matrix[i][j] = v.clone();
                matrix[j][i] = v;
            }
        }
        validate_space(None, matrix).ok()
    }

    fn advance(&mut self) {
        for digit in self.digits.iter_mut().rev() {
            *digit += 1;
            if *digit < self.palette.len() {
                return;
            }
            *digit = 0;
        }
        self.done = true;
    }
}

impl Iterator for SpaceEnumerator {
    type Item = FiniteSpace;

    fn next(&mut self) -> Option<FiniteSpace> {
        while !self.done {
            let space = self.current();
            self.advance();
            // Spaces failing validation are skipped (possible only with
            // non-positive palette entries).
            if space.is_some() {
                return space;
            }
        }
        None
    }
}

/// `true` when no relabeling of `space` has a lexicographically smaller upper triangle.
pub fn is_canonical(space: &FiniteSpace) -> bool {
    let n = space.len();
    let own = upper_triangle(space);
    (0..n)
        .permutations(n)
        .all(|perm| upper_triangle(&space.permuted(&perm)) >= own)
}

/// [`enumerate_spaces`] restricted to one representative per relabeling class.
pub fn enumerate_canonical_spaces(
    n: usize,
    palette: &[Rational],
) -> impl Iterator<Item = FiniteSpace> {
    enumerate_spaces(n, palette).filter(is_canonical)
}

/// All single-valued self-maps of `0..n`, lexicographic in the image vector.
fn all_maps(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).map(|_| 0..n).multi_cartesian_product()
}

fn search_space(space: &FiniteSpace, config: &SearchConfig) -> Vec<Counterexample> {
    let constant = space.min_strong_b_constant();
    if config.require_strong_b && !space.violations(Inequality::StrongB, &constant).is_empty() {
        return Vec::new();
    }
    let n = space.len();
    let maps: Vec<Vec<usize>> = all_maps(n)
        .filter(|images| images.iter().enumerate().all(|(x, &t)| t != x))
        .collect();

    let mut found = Vec::new();
    for x0 in 0..n {
        for r in &config.r_candidates {
            let ball = space.ball(x0, r);
            for k in &config.k_candidates {
                let cond1_rhs = r * &(Rational::one() - k);
                for images in &maps {
                    if space.d(x0, images[x0]) >= &cond1_rhs {
                        continue;
                    }
                    let map = SetValuedMap::single_valued(images).expect("images in range");
                    let report = evaluate_hypotheses(space, &constant, &map, x0, r, k, &ball);
                    if report.is_counterexample() {
                        found.push(Counterexample {
                            space: space.clone(),
                            constant: constant.clone(),
                            map,
                            x0,
                            r: r.clone(),
                            k: k.clone(),
                            report,
                        });
                    }
                }
            }
        }
    }
    found
}

const CHUNK: usize = 64;

/// Runs the search. Spaces are processed in parallel chunks; results keep
/// the sequential order (space, x0, r, k, map) and stop at `max_results`.
pub fn find_counterexamples(config: &SearchConfig) -> Result<Vec<Counterexample>, SearchError> {
    config.validate()?;
    let mut results = Vec::new();
    if config.max_results == 0 {
        return Ok(results);
    }
    let spaces: Box<dyn Iterator<Item = FiniteSpace>> = if config.canonical {
        Box::new(enumerate_canonical_spaces(config.n, &config.palette))
    } else {
        Box::new(enumerate_spaces(config.n, &config.palette))
    };
    for chunk in &spaces.chunks(CHUNK) {
        let chunk: Vec<FiniteSpace> = chunk.collect();
        let batches: Vec<Vec<Counterexample>> =
            chunk.par_iter().map(|s| search_space(s, config)).collect();
        for batch in batches {
            for c in batch {
                results.push(c);
                if results.len() >= config.max_results {
                    return Ok(results);
                }
            }
        }
    }
    Ok(results)
}
