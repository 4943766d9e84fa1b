//! Shared generators and brute-force oracles for the integration suites.
//! The oracles evaluate the defining inequalities directly and never call
//! the library's constant computations.
#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use bmetric::{validate_space, FiniteSpace, Rational};

pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(p, d)
}

/// Small positive distances: 1/2, 1, 3/2, 2, 3, 6.
pub fn palette() -> Vec<Rational> {
    vec![q(1, 2), q(1, 1), q(3, 2), q(2, 1), q(3, 1), q(6, 1)]
}

/// Builds a space from upper-triangle entries in row order.
pub fn space_from_upper(n: usize, upper: &[Rational]) -> FiniteSpace {
    let mut m = vec![vec![Rational::zero(); n]; n];
    let mut it = upper.iter();
    for i in 0..n {
        for j in i + 1..n {
            let v = it.next().expect("enough entries").clone();
            m[i][j] = v.clone();
            m[j][i] = v;
        }
    }
    validate_space(None, m).expect("generated space is valid")
}

pub fn pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[derive(Clone, Copy, Debug)]
pub enum Kind {
    B,
    StrongB,
}

fn holds(s: &FiniteSpace, kind: Kind, k: &Rational, x: usize, y: usize, z: usize) -> bool {
    let (dxz, dxy, dyz) = (s.d(x, z), s.d(x, y), s.d(y, z));
    match kind {
        Kind::B => dxz <= &(k * &(dxy + dyz)),
        Kind::StrongB => dxz <= &(dxy + &(k * dyz)),
    }
}

pub fn all_triples_hold(s: &FiniteSpace, kind: Kind, k: &Rational) -> bool {
    let n = s.len();
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| holds(s, kind, k, x, y, z))))
}

/// Least feasible constant among the finite candidate set `{1} ∪ {binding ratios}`.
pub fn oracle_min_constant(s: &FiniteSpace, kind: Kind) -> Rational {
    let n = s.len();
    let mut candidates = vec![Rational::one()];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let c = match kind {
                    Kind::B => {
                        let den = s.d(x, y) + s.d(y, z);
                        (!den.is_zero()).then(|| s.d(x, z) / &den)
                    }
                    Kind::StrongB => {
                        (!s.d(y, z).is_zero()).then(|| (s.d(x, z) - s.d(x, y)) / s.d(y, z))
                    }
                };
                if let Some(c) = c {
                    if c >= Rational::one() {
                        candidates.push(c);
                    }
                }
            }
        }
    }
    candidates.sort();
    candidates
        .into_iter()
        .find(|k| all_triples_hold(s, kind, k))
        .expect("largest candidate is feasible")
}

/// Every chain from `x` to `z` with distinct intermediate points, as its total length.
pub fn simple_chain_lengths(s: &FiniteSpace, x: usize, z: usize) -> Vec<Rational> {
    fn go(
        s: &FiniteSpace,
        at: usize,
        z: usize,
        used: &mut Vec<bool>,
        acc: Rational,
        out: &mut Vec<Rational>,
    ) {
        out.push(&acc + s.d(at, z));
        for next in 0..s.len() {
            if !used[next] && next != z {
                used[next] = true;
                go(s, next, z, used, &acc + s.d(at, next), out);
                used[next] = false;
            }
        }
    }
    let mut used = vec![false; s.len()];
    used[x] = true;
    used[z] = true;
    let mut out = Vec::new();
    go(s, x, z, &mut used, Rational::zero(), &mut out);
    out
}

pub fn oracle_metric_type(s: &FiniteSpace) -> Rational {
    let mut best = Rational::one();
    for x in 0..s.len() {
        for z in 0..s.len() {
            if x == z {
                continue;
            }
            for len in simple_chain_lengths(s, x, z) {
                let ratio = s.d(x, z) / &len;
                if ratio > best {
                    best = ratio;
                }
            }
        }
    }
    best
}

/// A deterministic permutation of `0..n` from a seed.
pub fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut state = seed;
    for i in (1..n).rev() {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let j = (state >> 33) as usize % (i + 1);
        perm.swap(i, j);
    }
    perm
}
