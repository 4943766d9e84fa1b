//! Constructive Cauchy completion of computably presented strong b-metric spaces.
//!
//! Points of the completion are Cauchy sequences carrying an explicit
//! modulus `i ↦ n₀ⁱ` with `D(x_n, x_m) <= 1/i` once `n, m >= n₀ⁱ`. The
//! completed distance `D*` is never computed exactly; instead
//! [`dstar_interval`] returns a rational interval guaranteed to contain the
//! limit. With both tails oscillating by at most `1/i`, the strong
//! inequality gives
//!
//! ```text
//! |D(x_m, y_m) - D(x_n, y_n)| <= K [D(x_n, x_m) + D(y_m, y_n)] <= 2K/i,
//! ```
//!
//! so one evaluated term plus a radius of `2K/i` encloses the limit.
//!
//! For plain b-metrics this radius is not justified, and the completed
//! distance need not even be well defined; [`wellposedness_probe`] detects
//! that failure using caller-supplied tail certificates.

use std::fmt;
use std::sync::Arc;

use num::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::interval::RationalInterval;
use crate::rational::Rational;
use crate::space::FiniteSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpaceClass {
    /// `D(x,z) <= D(x,y) + K D(y,z)`
    StrongB,
    /// `D(x,z) <= K [D(x,y) + D(y,z)]`
    PlainB,
}

/// A countable point universe with an exact, symmetric distance oracle.
pub trait Presentation: PartialEq + Send + Sync + 'static {
    type Point: Clone + PartialEq + fmt::Debug + Send + Sync + 'static;

    fn name(&self) -> String;
    fn distance(&self, a: &Self::Point, b: &Self::Point) -> Rational;
    fn constant(&self) -> Rational;
    fn class(&self) -> SpaceClass;
    fn contains(&self, p: &Self::Point) -> bool;
}

/// `ℚ` with `|x - y|`, `K = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RationalLine;

impl Presentation for RationalLine {
    type Point = Rational;

    fn name(&self) -> String {
        "rationals-abs".into()
    }

    fn distance(&self, a: &Rational, b: &Rational) -> Rational {
        (a - b).abs()
    }

    fn constant(&self) -> Rational {
        Rational::one()
    }

    fn class(&self) -> SpaceClass {
        SpaceClass::StrongB
    }

    fn contains(&self, _: &Rational) -> bool {
        true
    }
}

/// `X = {0, 1, 1/2, 1/3, ...}` with
///
/// * `D(x, y) = 1` for `x != y` in `{0, 1}`,
/// * `D(x, y) = |x - y|` for `x != y` in `{0} ∪ {1/(2n)}`,
/// * `D(x, y) = 4` for any other distinct pair.
///
/// The declared constant `8/3` is the least b-constant on `{0, 1, 1/2}`.
/// Triples such as `(1, 0, 1/4)` need more; the supremum over all of `X` is 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HarmonicFourSpace;

impl HarmonicFourSpace {
    fn in_even_part(p: &Rational) -> bool {
        p.is_zero() || p.is_even_unit_fraction()
    }

    fn in_zero_one(p: &Rational) -> bool {
        p.is_zero() || *p == Rational::one()
    }
}

impl Presentation for HarmonicFourSpace {
    type Point = Rational;

    fn name(&self) -> String {
        "example-3".into()
    }

    fn distance(&self, a: &Rational, b: &Rational) -> Rational {
        if a == b {
            Rational::zero()
        } else if Self::in_zero_one(a) && Self::in_zero_one(b) {
            Rational::one()
        } else if Self::in_even_part(a) && Self::in_even_part(b) {
            (a - b).abs()
        } else {
            Rational::from(4)
        }
    }

    fn constant(&self) -> Rational {
        Rational::new(8, 3)
    }

    fn class(&self) -> SpaceClass {
        SpaceClass::PlainB
    }

    fn contains(&self, p: &Rational) -> bool {
        p.is_zero() || p.is_unit_fraction()
    }
}

/// A [`FiniteSpace`] viewed as a presentation, with its least strong-b constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePresentation {
    space: FiniteSpace,
    constant: Rational,
}

impl FinitePresentation {
    pub fn new(space: FiniteSpace) -> Self {
        let constant = space.min_strong_b_constant();
        FinitePresentation { space, constant }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }
}

impl Presentation for FinitePresentation {
    type Point = usize;

    fn name(&self) -> String {
        format!("finite({} points)", self.space.len())
    }

    fn distance(&self, a: &usize, b: &usize) -> Rational {
        self.space.d(*a, *b).clone()
    }

    fn constant(&self) -> Rational {
        self.constant.clone()
    }

    fn class(&self) -> SpaceClass {
        SpaceClass::StrongB
    }

    fn contains(&self, p: &usize) -> bool {
        *p < self.space.len()
    }
}

/// A failed spot check of a presentation's axioms. Indices refer to the sample list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PresentationViolation {
    NotInUniverse(usize),
    NonzeroSelfDistance(usize),
    ZeroDistance(usize, usize),
    Asymmetric(usize, usize),
    Negative(usize, usize),
    Inequality {
        x: usize,
        y: usize,
        z: usize,
        lhs: Rational,
        rhs: Rational,
    },
}

/// Checks the presentation's axioms on every pair and ordered triple of `samples`.
/// The relaxed inequality checked is the one named by the class flag.
pub fn spot_check<S: Presentation>(space: &S, samples: &[S::Point]) -> Vec<PresentationViolation> {
    use PresentationViolation::*;
    let k = space.constant();
    let mut out = Vec::new();
    for (i, p) in samples.iter().enumerate() {
        if !space.contains(p) {
            out.push(NotInUniverse(i));
        }
    }
    for (i, a) in samples.iter().enumerate() {
        for (j, b) in samples.iter().enumerate() {
            let d = space.distance(a, b);
            if a == b {
                if !d.is_zero() {
                    out.push(NonzeroSelfDistance(i));
                }
                continue;
            }
            if d.is_negative() {
                out.push(Negative(i, j));
            } else if d.is_zero() {
                out.push(ZeroDistance(i, j));
            }
            if i < j && d != space.distance(b, a) {
                out.push(Asymmetric(i, j));
            }
        }
    }
    for (x, px) in samples.iter().enumerate() {
        for (y, py) in samples.iter().enumerate() {
            for (z, pz) in samples.iter().enumerate() {
                let (dxy, dyz) = (space.distance(px, py), space.distance(py, pz));
                let rhs = match space.class() {
                    SpaceClass::StrongB => &dxy + &(&k * &dyz),
                    SpaceClass::PlainB => &k * &(&dxy + &dyz),
                };
                let lhs = space.distance(px, pz);
                if lhs > rhs {
                    out.push(Inequality { x, y, z, lhs, rhs });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletionError {
    #[error("points belong to different presentations")]
    MixedSpaces,
    #[error(
        "`{0}` is not a strong b-metric presentation; the 2K/i evaluation radius does not apply"
    )]
    NotStrongB(String),
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(Rational),
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error(
        "sequence modulus refuted at j = {j}: D*(xs({n}), xs({m})) is at least {lower} > 1/{j}"
    )]
    BadModulus {
        j: u64,
        n: u64,
        m: u64,
        lower: Rational,
    },
    #[error("plain b-metric probe needs tail certificates for the evaluated distance sequences")]
    MissingTailCertificates,
    #[error("tail certificate `{which}` refuted at n = {n}, m = {m}")]
    BadTailCertificate { which: &'static str, n: u64, m: u64 },
    #[error("probe inputs are not certified equivalent: x~z is {xz:?}, y~w is {yw:?}")]
    NotEquivalentInputs { xz: Equivalence, yw: Equivalence },
}

type TermFn<P> = Arc<dyn Fn(u64) -> P + Send + Sync>;
type ModulusFn = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

/// A sequence of base points with a certified Cauchy modulus. Terms are
/// indexed from 1; `modulus(i)` is an index beyond which the sequence
/// oscillates by at most `1/i`.
pub struct CauchySequence<S: Presentation> {
    space: Arc<S>,
    label: String,
    term: TermFn<S::Point>,
    modulus: ModulusFn,
}

impl<S: Presentation> Clone for CauchySequence<S> {
    fn clone(&self) -> Self {
        CauchySequence {
            space: Arc::clone(&self.space),
            label: self.label.clone(),
            term: Arc::clone(&self.term),
            modulus: Arc::clone(&self.modulus),
        }
    }
}

impl<S: Presentation> fmt::Debug for CauchySequence<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CauchySequence")
            .field("space", &self.space.name())
            .field("label", &self.label)
            .finish()
    }
}

impl<S: Presentation> CauchySequence<S> {
    /// `modulus` should be nondecreasing; it is only ever sampled.
    pub fn new(
        space: Arc<S>,
        label: impl Into<String>,
        term: impl Fn(u64) -> S::Point + Send + Sync + 'static,
        modulus: impl Fn(u64) -> u64 + Send + Sync + 'static,
    ) -> Self {
        CauchySequence {
            space,
            label: label.into(),
            term: Arc::new(term),
            modulus: Arc::new(modulus),
        }
    }

    /// `x, x, x, ...` with `modulus(i) = 1`.
    pub fn constant(space: Arc<S>, x: S::Point) -> Self {
        let label = format!("constant({x:?})");
        CauchySequence::new(space, label, move |_| x.clone(), |_| 1)
    }

    pub fn space(&self) -> &Arc<S> {
        &self.space
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The `n`-th term; indices below 1 are read as 1.
    pub fn term(&self, n: u64) -> S::Point {
        (self.term)(n.max(1))
    }

    pub fn modulus(&self, i: u64) -> u64 {
        (self.modulus)(i.max(1)).max(1)
    }
}

/// A point of the completion, represented by one of its Cauchy sequences.
#[derive(Clone, Debug)]
pub struct CompletionPoint<S: Presentation> {
    pub representative: CauchySequence<S>,
}

impl<S: Presentation> CompletionPoint<S> {
    pub fn new(representative: CauchySequence<S>) -> Self {
        CompletionPoint { representative }
    }

    pub fn space(&self) -> &Arc<S> {
        self.representative.space()
    }
}

/// The canonical embedding `x ↦ [(x, x, x, ...)]`.
pub fn embed<S: Presentation>(space: &Arc<S>, x: S::Point) -> CompletionPoint<S> {
    CompletionPoint::new(CauchySequence::constant(Arc::clone(space), x))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ModulusCheck {
    Pass,
    Counterexample { n: u64, m: u64, distance: Rational },
}

/// The `t`-th sampled index pair beyond `start`: `(start + t, 2 (start + t) + 1)`.
fn sample_pair(start: u64, t: u64) -> (u64, u64) {
    let n = start.saturating_add(t);
    (n, n.saturating_mul(2).saturating_add(1))
}

/// Samples `samples` index pairs `n, m >= modulus(i)`, starting at the
/// modulus itself, and checks `D(x_n, x_m) <= 1/i` on each.
pub fn validate_modulus<S: Presentation>(
    seq: &CauchySequence<S>,
    i: u64,
    samples: u64,
) -> ModulusCheck {
    let i = i.max(1);
    let bound = Rational::unit_fraction(i);
    let start = seq.modulus(i);
    for t in 0..samples.max(1) {
        let (n, m) = sample_pair(start, t);
        let distance = seq.space.distance(&seq.term(n), &seq.term(m));
        if distance > bound {
            return ModulusCheck::Counterexample { n, m, distance };
        }
    }
    ModulusCheck::Pass
}

fn same_space<S: Presentation>(a: &Arc<S>, b: &Arc<S>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn require_strong<S: Presentation>(space: &S) -> Result<(), CompletionError> {
    match space.class() {
        SpaceClass::StrongB => Ok(()),
        SpaceClass::PlainB => Err(CompletionError::NotStrongB(space.name())),
    }
}

/// One evaluated term of `D(a_n, b_n)` with its certified error radius.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DstarEstimate {
    /// Index `N` the term was evaluated at.
    pub index: u64,
    /// `D(a_N, b_N)`.
    pub center: Rational,
    /// `2K/i`.
    pub radius: Rational,
    /// `[max(0, center - radius), center + radius]`.
    pub interval: RationalInterval,
}

/// Evaluates `D(a_N, b_N)` at `N = max(a.modulus(i), b.modulus(i))`; the
/// limit `D*(a, b)` lies within `2K/i` of it.
pub fn dstar_estimate<S: Presentation>(
    a: &CompletionPoint<S>,
    b: &CompletionPoint<S>,
    i: u64,
) -> Result<DstarEstimate, CompletionError> {
    if !same_space(a.space(), b.space()) {
        return Err(CompletionError::MixedSpaces);
    }
    if i == 0 {
        return Err(CompletionError::ZeroPrecision);
    }
    let space = a.space();
    require_strong(space.as_ref())?;
    let (sa, sb) = (&a.representative, &b.representative);
    let index = sa.modulus(i).max(sb.modulus(i));
    let center = space.distance(&sa.term(index), &sb.term(index));
    let radius = Rational::from(2) * space.constant() / Rational::from(i);
    let interval = RationalInterval::around_clamped(&center, &radius, &Rational::zero());
    Ok(DstarEstimate {
        index,
        center,
        radius,
        interval,
    })
}

/// Encloses `D*(a, b) = lim D(a_n, b_n)`: with `N = max(a.modulus(i), b.modulus(i))`
/// and `v = D(a_N, b_N)`, returns `[max(0, v - 2K/i), v + 2K/i]`.
pub fn dstar_interval<S: Presentation>(
    a: &CompletionPoint<S>,
    b: &CompletionPoint<S>,
    i: u64,
) -> Result<RationalInterval, CompletionError> {
    dstar_estimate(a, b, i).map(|e| e.interval)
}

/// Three-valued answer to `a ∼ b`. Only `Distinct` is a proof; `Equivalent`
/// certifies `D*(a, b) < ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Equivalence {
    Equivalent,
    Distinct,
    Undecided,
}

fn classify_interval(iv: &RationalInterval, epsilon: &Rational) -> Equivalence {
    if iv.lo().is_positive() {
        Equivalence::Distinct
    } else if iv.hi() < epsilon {
        Equivalence::Equivalent
    } else {
        Equivalence::Undecided
    }
}

pub fn equivalent_at<S: Presentation>(
    a: &CompletionPoint<S>,
    b: &CompletionPoint<S>,
    epsilon: &Rational,
    i: u64,
) -> Result<Equivalence, CompletionError> {
    if !epsilon.is_positive() {
        return Err(CompletionError::InvalidEpsilon(epsilon.clone()));
    }
    Ok(classify_interval(&dstar_interval(a, b, i)?, epsilon))
}

/// Encloses `D*(a,c) - D*(a,b) - K D*(b,c)`. A positive lower end is a
/// certified violation of the strong inequality.
pub fn strong_triangle_check<S: Presentation>(
    a: &CompletionPoint<S>,
    b: &CompletionPoint<S>,
    c: &CompletionPoint<S>,
    i: u64,
) -> Result<RationalInterval, CompletionError> {
    let ac = dstar_interval(a, c, i)?;
    let ab = dstar_interval(a, b, i)?;
    let bc = dstar_interval(b, c, i)?;
    let k = a.space().constant();
    Ok(ac.sub(&ab).sub(&bc.scale(&k)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityWitness<P> {
    pub point: P,
    /// `1/i`, the exact bound on `D*(embed(point), a)`.
    pub bound: Rational,
    /// `dstar_interval(embed(point), a, i)`.
    pub interval: RationalInterval,
    /// `interval.hi <= 1/i + 2K/i`.
    pub certified: bool,
}

/// The base point `a.term(a.modulus(i))`, within `1/i` of `a` in `D*`.
pub fn density_witness<S: Presentation>(
    a: &CompletionPoint<S>,
    i: u64,
) -> Result<DensityWitness<S::Point>, CompletionError> {
    if i == 0 {
        return Err(CompletionError::ZeroPrecision);
    }
    let seq = &a.representative;
    let point = seq.term(seq.modulus(i));
    let interval = dstar_interval(&embed(seq.space(), point.clone()), a, i)?;
    let bound = Rational::unit_fraction(i);
    let slack = Rational::from(2) * seq.space().constant() / Rational::from(i);
    let certified = interval.hi() <= &(&bound + &slack);
    Ok(DensityWitness {
        point,
        bound,
        interval,
        certified,
    })
}

type PointFn<S> = Arc<dyn Fn(u64) -> CompletionPoint<S> + Send + Sync>;

/// A sequence of completion points with a `D*`-modulus `M`:
/// `D*(xs(n), xs(m)) <= 1/j` whenever `n, m >= M(j)`.
pub struct PointSequence<S: Presentation> {
    space: Arc<S>,
    points: PointFn<S>,
    modulus: ModulusFn,
}

impl<S: Presentation> Clone for PointSequence<S> {
    fn clone(&self) -> Self {
        PointSequence {
            space: Arc::clone(&self.space),
            points: Arc::clone(&self.points),
            modulus: Arc::clone(&self.modulus),
        }
    }
}

impl<S: Presentation> PointSequence<S> {
    pub fn new(
        space: Arc<S>,
        points: impl Fn(u64) -> CompletionPoint<S> + Send + Sync + 'static,
        modulus: impl Fn(u64) -> u64 + Send + Sync + 'static,
    ) -> Self {
        PointSequence {
            space,
            points: Arc::new(points),
            modulus: Arc::new(modulus),
        }
    }

    pub fn point(&self, n: u64) -> CompletionPoint<S> {
        (self.points)(n.max(1))
    }

    pub fn modulus(&self, j: u64) -> u64 {
        (self.modulus)(j.max(1)).max(1)
    }
}

/// The limit `y*` of a [`PointSequence`], with the data needed to bound
/// `D*(xs(n), y*)`.
pub struct LimitPoint<S: Presentation> {
    pub point: CompletionPoint<S>,
    pub sequence: PointSequence<S>,
}

impl<S: Presentation> LimitPoint<S> {
    /// `(n, precision)` such that `dstar_interval(xs(n), y*, precision).hi < target`.
    ///
    /// With `i = ⌈4/target⌉` and `n = max(y*.modulus(i), i)`, the bound
    /// `D*(xs(n), y*) <= 1/n + lim_m D(y_n, y_m)` is at most `target/2`;
    /// precision `⌈16K/target⌉` adds at most `target/4` of evaluation slack.
    pub fn certified_index(&self, target: &Rational) -> (u64, u64) {
        assert!(target.is_positive(), "target must be positive");
        let i = (Rational::from(4) / target.clone()).ceil_u64().max(1);
        let n = self.point.representative.modulus(i).max(i);
        let k = self.point.space().constant();
        let precision = (Rational::from(16) * k / target.clone()).ceil_u64().max(1);
        (n, precision)
    }

    pub fn distance_to_term(
        &self,
        n: u64,
        precision: u64,
    ) -> Result<RationalInterval, CompletionError> {
        dstar_interval(&self.sequence.point(n), &self.point, precision)
    }
}

const MODULUS_SAMPLE_LEVELS: [u64; 4] = [1, 2, 4, 8];

/// Builds the limit of a Cauchy sequence of completion points.
///
/// The base sequence is `y_n = xs(n).term(xs(n).modulus(⌈Kn⌉))`, so that
/// `D*(embed(y_n), xs(n)) <= 1/(Kn)`. Then
/// `D(y_n, y_m) <= 1/n + D*(xs(n), xs(m)) + 1/m`, which makes
/// `i ↦ max(M(3i), 3i)` a modulus for `(y_n)`.
///
/// `M` is spot-checked first: a sampled pair whose `D*` is certified to
/// exceed `1/j` yields [`CompletionError::BadModulus`].
pub fn limit_point<S: Presentation>(
    xs: &PointSequence<S>,
) -> Result<LimitPoint<S>, CompletionError> {
    let space = Arc::clone(&xs.space);
    require_strong(space.as_ref())?;
    let k = space.constant();
    let k_ceil = k.ceil_u64().max(1);

    for j in MODULUS_SAMPLE_LEVELS {
        let start = xs.modulus(j);
        let bound = Rational::unit_fraction(j);
        for t in 0..2 {
            let (n, m) = sample_pair(start, t);
            let iv = dstar_interval(&xs.point(n), &xs.point(m), 16 * k_ceil * j)?;
            if iv.lo() > &bound {
                return Err(CompletionError::BadModulus {
                    j,
                    n,
                    m,
                    lower: iv.lo().clone(),
                });
            }
        }
    }

    let terms = xs.clone();
    let k_term = k.clone();
    let term = move |n: u64| {
        let seq = terms.point(n).representative;
        let precision = (&k_term * &Rational::from(n)).ceil_u64();
        seq.term(seq.modulus(precision))
    };
    let moduli = xs.clone();
    let modulus = move |i: u64| moduli.modulus(3 * i).max(3 * i);
    let representative = CauchySequence::new(space, "limit", term, modulus);
    Ok(LimitPoint {
        point: CompletionPoint::new(representative),
        sequence: xs.clone(),
    })
}

/// How the limit of a real sequence `s_n = D(a_n, b_n)` is certified.
#[derive(Clone)]
pub enum TailBound {
    /// `s_n` is constant for `n >= from`.
    EventuallyConstant { from: u64 },
    /// `|s_n - s_m| <= 1/i` for `n, m >= modulus(i)`.
    Modulus(ModulusFn),
}

impl TailBound {
    pub fn modulus(f: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Self {
        TailBound::Modulus(Arc::new(f))
    }
}

impl fmt::Debug for TailBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailBound::EventuallyConstant { from } => {
                write!(f, "EventuallyConstant {{ from: {from} }}")
            }
            TailBound::Modulus(_) => write!(f, "Modulus(..)"),
        }
    }
}

/// Tail certificates for the four distance sequences a plain b-metric probe evaluates.
#[derive(Clone, Debug)]
pub struct TailCertificates {
    pub xy: TailBound,
    pub zw: TailBound,
    pub xz: TailBound,
    pub yw: TailBound,
}

/// Two pairs of sequences with `x ∼ z` and `y ∼ w`; the probe compares
/// `lim D(x_n, y_n)` against `lim D(z_n, w_n)`.
#[derive(Clone, Debug)]
pub struct ProbeInput<S: Presentation> {
    pub x: CauchySequence<S>,
    pub z: CauchySequence<S>,
    pub y: CauchySequence<S>,
    pub w: CauchySequence<S>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProbeMethod {
    /// `dstar_interval` with the strong-inequality radius.
    StrongRadius,
    /// Caller-supplied tail certificates.
    TailCertificates,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub presentation: String,
    pub precision: u64,
    pub method: ProbeMethod,
    /// Encloses `lim D(x_n, y_n)`.
    pub limit_xy: RationalInterval,
    /// Encloses `lim D(z_n, w_n)`.
    pub limit_zw: RationalInterval,
    pub equivalence_xz: Equivalence,
    pub equivalence_yw: Equivalence,
    /// The two candidate values of `D*` are certified distinct.
    pub clash: bool,
}

const TAIL_SAMPLES: u64 = 4;

fn tail_interval<S: Presentation>(
    which: &'static str,
    a: &CauchySequence<S>,
    b: &CauchySequence<S>,
    bound: &TailBound,
    i: u64,
) -> Result<RationalInterval, CompletionError> {
    let space = a.space();
    let s = |n: u64| space.distance(&a.term(n), &b.term(n));
    match bound {
        TailBound::EventuallyConstant { from } => {
            let from = (*from).max(1);
            let v = s(from);
            for t in 0..TAIL_SAMPLES {
                let (n, m) = sample_pair(from, t.saturating_mul(i));
                for idx in [n, m] {
                    if s(idx) != v {
                        return Err(CompletionError::BadTailCertificate {
                            which,
                            n: from,
                            m: idx,
                        });
                    }
                }
            }
            Ok(RationalInterval::point(v))
        }
        TailBound::Modulus(modulus) => {
            let start = modulus(i).max(1);
            let radius = Rational::unit_fraction(i);
            let v = s(start);
            for t in 0..TAIL_SAMPLES {
                let (_, m) = sample_pair(start, t);
                if (&s(m) - &v).abs() > radius {
                    return Err(CompletionError::BadTailCertificate { which, n: start, m });
                }
            }
            Ok(RationalInterval::around_clamped(
                &v,
                &radius,
                &Rational::zero(),
            ))
        }
    }
}

/// Tests whether the termwise-limit formula for `D*` is well defined on
/// the given pairs. On strong b-metric presentations the strong radius is
/// used and `certificates` is ignored; plain b-metric presentations
/// require them.
pub fn wellposedness_probe<S: Presentation>(
    input: &ProbeInput<S>,
    certificates: Option<&TailCertificates>,
    epsilon: &Rational,
    i: u64,
) -> Result<ProbeReport, CompletionError> {
    if !epsilon.is_positive() {
        return Err(CompletionError::InvalidEpsilon(epsilon.clone()));
    }
    if i == 0 {
        return Err(CompletionError::ZeroPrecision);
    }
    let space = input.x.space();
    for s in [&input.z, &input.y, &input.w] {
        if !same_space(space, s.space()) {
            return Err(CompletionError::MixedSpaces);
        }
    }

    let (method, limit_xy, limit_zw, xz, yw) = match space.class() {
        SpaceClass::StrongB => {
            let pt = |s: &CauchySequence<S>| CompletionPoint::new(s.clone());
            let (x, y, z, w) = (pt(&input.x), pt(&input.y), pt(&input.z), pt(&input.w));
            (
                ProbeMethod::StrongRadius,
                dstar_interval(&x, &y, i)?,
                dstar_interval(&z, &w, i)?,
                dstar_interval(&x, &z, i)?,
                dstar_interval(&y, &w, i)?,
            )
        }
        SpaceClass::PlainB => {
            let certs = certificates.ok_or(CompletionError::MissingTailCertificates)?;
            (
                ProbeMethod::TailCertificates,
                tail_interval("xy", &input.x, &input.y, &certs.xy, i)?,
                tail_interval("zw", &input.z, &input.w, &certs.zw, i)?,
                tail_interval("xz", &input.x, &input.z, &certs.xz, i)?,
                tail_interval("yw", &input.y, &input.w, &certs.yw, i)?,
            )
        }
    };

    let equivalence_xz = classify_interval(&xz, epsilon);
    let equivalence_yw = classify_interval(&yw, epsilon);
    if equivalence_xz != Equivalence::Equivalent || equivalence_yw != Equivalence::Equivalent {
        return Err(CompletionError::NotEquivalentInputs {
            xz: equivalence_xz,
            yw: equivalence_yw,
        });
    }
    let clash = limit_xy.is_disjoint(&limit_zw);
    Ok(ProbeReport {
        presentation: space.name(),
        precision: i,
        method,
        limit_xy,
        limit_zw,
        equivalence_xz,
        equivalence_yw,
        clash,
    })
}

/// Built-in sequence families.
pub mod families {
    use super::*;

    fn pow10(n: u64) -> BigInt {
        num::pow(BigInt::from(10), n as usize)
    }

    /// `⌊√2 · 10ⁿ⌋ / 10ⁿ`, the `n`-digit decimal truncation of `√2`.
    pub fn sqrt2_truncation(n: u64) -> Rational {
        let scale = pow10(n);
        let radicand = BigInt::from(2) * &scale * &scale;
        Rational::new(radicand.sqrt(), scale)
    }

    /// The `n`-th continued-fraction convergent of `√2`: `1, 3/2, 7/5, 17/12, ...`.
    pub fn sqrt2_convergent(n: u64) -> Rational {
        let (mut p, mut q) = (BigInt::from(1), BigInt::from(1));
        for _ in 1..n.max(1) {
            let next_p = &p + BigInt::from(2) * &q;
            q += &p;
            p = next_p;
        }
        Rational::new(p, q)
    }

    /// Consecutive truncations differ by less than `10^-min(n,m) <= 1/i`
    /// for `n, m >= i`, so `modulus(i) = i`.
    pub fn sqrt2_truncations(space: &Arc<RationalLine>) -> CauchySequence<RationalLine> {
        CauchySequence::new(
            Arc::clone(space),
            "sqrt2-truncations",
            sqrt2_truncation,
            |i| i,
        )
    }

    /// Convergents satisfy `|c_n - √2| < 1/q_n²` with `q_n >= n`, so `modulus(i) = i`.
    pub fn sqrt2_convergents(space: &Arc<RationalLine>) -> CauchySequence<RationalLine> {
        CauchySequence::new(
            Arc::clone(space),
            "sqrt2-convergents",
            sqrt2_convergent,
            |i| i,
        )
    }

    /// `1/n` with `modulus(i) = 2i`.
    pub fn reciprocal(space: &Arc<RationalLine>) -> CauchySequence<RationalLine> {
        CauchySequence::new(
            Arc::clone(space),
            "reciprocal",
            Rational::unit_fraction,
            |i| 2 * i,
        )
    }

    /// `center + scale/n`; the tail beyond `n` oscillates by at most
    /// `|scale|/n`, so `modulus(i) = max(1, ⌈|scale| i⌉)`.
    pub fn approach(
        space: &Arc<RationalLine>,
        center: Rational,
        scale: Rational,
    ) -> CauchySequence<RationalLine> {
        let label = format!("approach({center}, {scale})");
        let abs = scale.abs();
        CauchySequence::new(
            Arc::clone(space),
            label,
            move |n| &center + &(&scale / &Rational::from(n)),
            move |i| (&abs * &Rational::from(i)).ceil_u64().max(1),
        )
    }

    /// `1/(2n)` in the harmonic four-valued space, with `modulus(i) = i`.
    pub fn half_reciprocal(space: &Arc<HarmonicFourSpace>) -> CauchySequence<HarmonicFourSpace> {
        CauchySequence::new(
            Arc::clone(space),
            "half-reciprocal",
            |n| Rational::unit_fraction(2 * n),
            |i| i,
        )
    }

    /// `x_n = 1`, `z_n = 1`, `y_n = 1/(2n)`, `w_n = 0`, together with tail
    /// certificates: `D(x_n, y_n) = 4` and `D(z_n, w_n) = 1` for all `n`,
    /// `D(x_n, z_n) = 0`, and `D(y_n, w_n) = 1/(2n)` with modulus `i`.
    pub fn harmonic_quadruple(
        space: &Arc<HarmonicFourSpace>,
    ) -> (ProbeInput<HarmonicFourSpace>, TailCertificates) {
        let input = ProbeInput {
            x: CauchySequence::constant(Arc::clone(space), Rational::one()),
            z: CauchySequence::constant(Arc::clone(space), Rational::one()),
            y: half_reciprocal(space),
            w: CauchySequence::constant(Arc::clone(space), Rational::zero()),
        };
        let certs = TailCertificates {
            xy: TailBound::EventuallyConstant { from: 1 },
            zw: TailBound::EventuallyConstant { from: 1 },
            xz: TailBound::EventuallyConstant { from: 1 },
            yw: TailBound::modulus(|i| i),
        };
        (input, certs)
    }
}
