//! Compiled-in example data.

use std::sync::Arc;

use crate::completion::{families, HarmonicFourSpace, ProbeInput, TailCertificates};
use crate::fixed_point::SetValuedMap;
use crate::rational::Rational;
use crate::space::{validate_space, FiniteSpace};

/// Three points with `D(1,2) = 2`, `D(2,3) = 1`, `D(1,3) = 6`.
pub fn example_2_1_space() -> FiniteSpace {
    let m = |rows: [[i64; 3]; 3]| {
        rows.iter()
            .map(|row| row.iter().map(|&v| Rational::from(v)).collect())
            .collect()
    };
    validate_space(None, m([[0, 2, 6], [2, 0, 1], [6, 1, 0]])).expect("built-in space is valid")
}

/// The cyclic map `1 ↦ 2 ↦ 3 ↦ 1`.
pub fn example_2_1_map() -> SetValuedMap {
    SetValuedMap::single_valued(&[1, 2, 0]).expect("built-in map is valid")
}

/// Parameters `(K, x0, r, k) = (4, point 1, 6, 1/2)`; `x0` is a zero-based index.
pub struct Example21Params {
    pub constant: Rational,
    pub x0: usize,
    pub r: Rational,
    pub k: Rational,
}

pub fn example_2_1_params() -> Example21Params {
    Example21Params {
        constant: Rational::from(4),
        x0: 0,
        r: Rational::from(6),
        k: Rational::new(1, 2),
    }
}

/// The harmonic four-valued b-metric space and its clashing sequence quadruple.
pub fn example_3() -> (
    Arc<HarmonicFourSpace>,
    ProbeInput<HarmonicFourSpace>,
    TailCertificates,
) {
    let space = Arc::new(HarmonicFourSpace);
    let (input, certs) = families::harmonic_quadruple(&space);
    (space, input, certs)
}
