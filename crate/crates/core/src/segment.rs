//! Arrow words: canonical names for the irreducible elliptic constituents of
//! the induced representation `V(π, s)`.
//!
//! Fix an irreducible cuspidal representation `π` of `GL_g`. The `2^{s-1}`
//! irreducible subquotients of `V(π, s)` are indexed by words of `s-1`
//! oriented arrows drawn between `s` consecutive points of the cuspidal line.
//! The all-LEFT word is the generalised Steinberg `Sp_s(π)` (unique quotient
//! of `V(π, s)`), the all-RIGHT word is the Speh representation `Speh_s(π)`
//! (unique subrepresentation). A word is stored in run-length form
//! `(a_1, ε_1)…(a_r, ε_r)` with adjacent runs of opposite direction; merging
//! equal neighbours is the normalisation rule and the canonical form is
//! unique.
//!
//! The two normalised products are
//! `A ⃗× B = A(-t_B/2) × B(t_A/2)` and `A ⃖× B = A(t_B/2) × B(-t_A/2)`;
//! for operands with equal centers these place the supports consecutively
//! (`A` below `B` for `⃗×`, above for `⃖×`). Each such product has length
//! two; socle and cosocle differ only in the junction arrow:
//!
//! ```text
//!   cosocle(A ⃗× B) = word(A) · LEFT  · word(B)
//!   socle  (A ⃗× B) = word(A) · RIGHT · word(B)
//!   cosocle(A ⃖× B) = word(B) · RIGHT · word(A)
//!   socle  (A ⃖× B) = word(B) · LEFT  · word(A)
//! ```
//!
//! This calibration makes the iterated cosocle of cuspidals under `⃗×` equal
//! to `Sp_s`, and gives the short exact sequence
//! `0 → [⃖(t-1), ⃗(s-t)] → [⃖(t-1)] ⃗× [⃗(s-t-1)] → [⃖t, ⃗(s-t-1)] → 0`.

use crate::error::CalcError;
use crate::groth::VirtualRep;
use crate::twist::{rational_parse, rational_str};
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// An inertial equivalence class of irreducible cuspidal representations of
/// `GL_g`, kept opaque: a rank, a label and the label of the contragredient.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CuspidalDatum(Arc<CuspidalInner>);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
struct CuspidalInner {
    rank: u32,
    label: String,
    dual_label: String,
}

impl CuspidalDatum {
    pub fn new(rank: u32, label: &str, dual_label: &str) -> Result<Self> {
        if rank == 0 {
            return Err(CalcError::Domain("cuspidal rank must be positive".into()));
        }
        Ok(CuspidalDatum(Arc::new(CuspidalInner {
            rank,
            label: label.to_string(),
            dual_label: dual_label.to_string(),
        })))
    }

    /// A self-dual cuspidal datum, the default base for the test surfaces.
    pub fn self_dual(rank: u32, label: &str) -> Self {
        CuspidalDatum(Arc::new(CuspidalInner {
            rank,
            label: label.to_string(),
            dual_label: label.to_string(),
        }))
    }

    pub fn rank(&self) -> u32 {
        self.0.rank
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn dual_label(&self) -> &str {
        &self.0.dual_label
    }

    /// The contragredient datum; applying it twice returns the original.
    pub fn dual(&self) -> Self {
        CuspidalDatum(Arc::new(CuspidalInner {
            rank: self.0.rank,
            label: self.0.dual_label.clone(),
            dual_label: self.0.label.clone(),
        }))
    }
}

impl fmt::Display for CuspidalDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.label)
    }
}

impl Serialize for CuspidalDatum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CuspidalDatum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(CuspidalDatum(Arc::new(CuspidalInner::deserialize(d)?)))
    }
}

/// Orientation of one arrow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }

    pub fn glyph(self) -> char {
        match self {
            Direction::Left => '<',
            Direction::Right => '>',
        }
    }
}

/// Which normalised product is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ProductSide {
    /// `⃗×`: left operand ends up at the lower exponents.
    Right,
    /// `⃖×`: left operand ends up at the higher exponents.
    Left,
}

/// Which part of a length-two product to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum JunctionPart {
    Socle,
    Cosocle,
    /// Both constituents, coefficient one each.
    Full,
}

/// A canonical arrow word over a cuspidal datum.
///
/// `center` is the midpoint of the support, as an exponent of `|det|`; the
/// support of a word with `s` points and center `c` is
/// `c + (1-s)/2, …, c + (s-1)/2`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArrowWord {
    base: CuspidalDatum,
    center: BigRational,
    // canonical run-length form: positive runs, adjacent directions distinct
    runs: Vec<(u32, Direction)>,
}

impl ArrowWord {
    /// The one-point word (the cuspidal representation itself).
    pub fn cuspidal(base: &CuspidalDatum, center: BigRational) -> Self {
        ArrowWord {
            base: base.clone(),
            center,
            runs: Vec::new(),
        }
    }

    /// `Sp_s(π)`: the all-LEFT word of `s` points.
    pub fn steinberg(base: &CuspidalDatum, s: u32, center: BigRational) -> Self {
        let mut w = ArrowWord::cuspidal(base, center);
        if s > 1 {
            w.runs.push((s - 1, Direction::Left));
        }
        w
    }

    /// `Speh_s(π)`: the all-RIGHT word of `s` points.
    pub fn speh(base: &CuspidalDatum, s: u32, center: BigRational) -> Self {
        let mut w = ArrowWord::cuspidal(base, center);
        if s > 1 {
            w.runs.push((s - 1, Direction::Right));
        }
        w
    }

    /// Normalise a run-length word: positive runs, equal neighbours merged.
    /// This is the only constructor accepting raw run data.
    pub fn from_runs(
        base: &CuspidalDatum,
        center: BigRational,
        runs: &[(i64, Direction)],
    ) -> Result<Self> {
        let mut canon: Vec<(u32, Direction)> = Vec::with_capacity(runs.len());
        for &(a, dir) in runs {
            if a <= 0 {
                return Err(CalcError::MalformedWord(format!("run length {a} ≤ 0")));
            }
            match canon.last_mut() {
                Some((len, d)) if *d == dir => *len += a as u32,
                _ => canon.push((a as u32, dir)),
            }
        }
        Ok(ArrowWord {
            base: base.clone(),
            center,
            runs: canon,
        })
    }

    /// Build a word from its arrow slots.
    pub fn from_slots(base: &CuspidalDatum, center: BigRational, slots: &[Direction]) -> Self {
        let runs: Vec<(i64, Direction)> = slots.iter().map(|&d| (1, d)).collect();
        ArrowWord::from_runs(base, center, &runs).expect("unit runs are positive")
    }

    pub fn base(&self) -> &CuspidalDatum {
        &self.base
    }

    pub fn center(&self) -> &BigRational {
        &self.center
    }

    /// Number of cuspidal points (`s`).
    pub fn points(&self) -> u32 {
        1 + self.runs.iter().map(|&(a, _)| a).sum::<u32>()
    }

    /// Canonical run-length form.
    pub fn runs(&self) -> &[(u32, Direction)] {
        &self.runs
    }

    /// The `s-1` arrow slots in order.
    pub fn slots(&self) -> Vec<Direction> {
        let mut out = Vec::with_capacity(self.points() as usize - 1);
        for &(a, d) in &self.runs {
            out.extend(std::iter::repeat(d).take(a as usize));
        }
        out
    }

    /// The exponents of the cuspidal support, lowest first.
    pub fn support(&self) -> Vec<BigRational> {
        let s = self.points() as i64;
        (0..s)
            .map(|k| {
                &self.center
                    + BigRational::new(BigInt::from(1 - s + 2 * k), BigInt::from(2))
            })
            .collect()
    }

    pub fn is_steinberg(&self) -> bool {
        self.runs.len() <= 1
            && self
                .runs
                .first()
                .map_or(true, |&(_, d)| d == Direction::Left)
    }

    pub fn is_speh(&self) -> bool {
        self.runs.len() <= 1
            && self
                .runs
                .first()
                .map_or(true, |&(_, d)| d == Direction::Right)
    }

    pub fn with_center(&self, center: BigRational) -> Self {
        ArrowWord {
            base: self.base.clone(),
            center,
            runs: self.runs.clone(),
        }
    }

    /// Twist the center by `delta`.
    pub fn shifted(&self, delta: &BigRational) -> Self {
        self.with_center(&self.center + delta)
    }

    pub fn shifted_half(&self, n: i64) -> Self {
        self.shifted(&BigRational::new(BigInt::from(n), BigInt::from(2)))
    }

    /// Contragredient: dual base, slot order reversed with directions kept,
    /// center negated.
    pub fn dual(&self) -> Self {
        let mut runs = self.runs.clone();
        runs.reverse();
        ArrowWord {
            base: self.base.dual(),
            center: -self.center.clone(),
            runs,
        }
    }

    /// The involution exchanging `Sp` and `Speh`: every arrow flips, base and
    /// center are unchanged.
    pub fn zelevinsky_involution(&self) -> Self {
        ArrowWord {
            base: self.base.clone(),
            center: self.center.clone(),
            runs: self.runs.iter().map(|&(a, d)| (a, d.flip())).collect(),
        }
    }

    /// Canonical textual form: base label, center, run-length word, e.g.
    /// `pi(1/2) <3 >1`. A one-point word renders its run part as `e`.
    pub fn text(&self) -> String {
        let mut s = format!("{}({})", self.base.label(), rational_str(&self.center));
        if self.runs.is_empty() {
            s.push_str(" e");
        } else {
            for &(a, d) in &self.runs {
                s.push(' ');
                s.push(d.glyph());
                s.push_str(&a.to_string());
            }
        }
        s
    }

    /// Run-length part of the textual form only (`<3 >1` or `e`).
    pub fn runs_text(&self) -> String {
        if self.runs.is_empty() {
            return "e".to_string();
        }
        self.runs
            .iter()
            .map(|&(a, d)| format!("{}{}", d.glyph(), a))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parse the canonical textual form produced by [`ArrowWord::text`].
    /// The rank of the base is taken from `base` (labels must agree).
    pub fn parse(base: &CuspidalDatum, s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let head = parts
            .next()
            .ok_or_else(|| CalcError::Parse("empty word text".into()))?;
        let open = head
            .find('(')
            .ok_or_else(|| CalcError::Parse(format!("missing center in {head:?}")))?;
        if !head.ends_with(')') {
            return Err(CalcError::Parse(format!("missing center in {head:?}")));
        }
        let label = &head[..open];
        if label != base.label() {
            return Err(CalcError::IncompatibleBase(
                label.to_string(),
                base.label().to_string(),
            ));
        }
        let center = rational_parse(&head[open + 1..head.len() - 1])?;
        let mut runs: Vec<(i64, Direction)> = Vec::new();
        for tok in parts {
            if tok == "e" {
                continue;
            }
            let dir = match tok.chars().next() {
                Some('<') => Direction::Left,
                Some('>') => Direction::Right,
                _ => return Err(CalcError::Parse(format!("bad run token {tok:?}"))),
            };
            let n: i64 = tok[1..]
                .parse()
                .map_err(|_| CalcError::Parse(format!("bad run token {tok:?}")))?;
            runs.push((n, dir));
        }
        ArrowWord::from_runs(base, center, &runs)
    }
}

impl fmt::Display for ArrowWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text())
    }
}

/// Normalise a raw run-length word. Equal neighbouring runs are merged; the
/// result is canonical and the map is idempotent.
pub fn normalize(
    base: &CuspidalDatum,
    center: BigRational,
    runs: &[(i64, Direction)],
) -> Result<ArrowWord> {
    ArrowWord::from_runs(base, center, runs)
}

/// The socle/cosocle pair of a length-two product, before choosing a part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JunctionPair {
    pub socle: ArrowWord,
    pub cosocle: ArrowWord,
}

/// Concatenate `first · junction · second` over the common base, centering
/// the result at the common center of the operands.
fn concatenate(
    first: &ArrowWord,
    junction: Direction,
    second: &ArrowWord,
    center: BigRational,
) -> ArrowWord {
    let mut runs: Vec<(i64, Direction)> = first
        .runs
        .iter()
        .map(|&(a, d)| (a as i64, d))
        .collect();
    runs.push((1, junction));
    runs.extend(second.runs.iter().map(|&(a, d)| (a as i64, d)));
    ArrowWord::from_runs(&first.base, center, &runs).expect("concatenation runs are positive")
}

/// The socle and cosocle of `A ⃗× B` (resp. `A ⃖× B`).
///
/// Both operands must share the base datum and the center: the built-in
/// shifts of the product then place the two supports consecutively and the
/// combined word is again centered at the common center.
pub fn junction_pair(a: &ArrowWord, b: &ArrowWord, dir: ProductSide) -> Result<JunctionPair> {
    if a.base != b.base {
        return Err(CalcError::IncompatibleBase(
            a.base.label().to_string(),
            b.base.label().to_string(),
        ));
    }
    if a.center != b.center {
        return Err(CalcError::UnsupportedSupport(format!(
            "operand centers {} and {} do not make the supports consecutive",
            rational_str(&a.center),
            rational_str(&b.center)
        )));
    }
    let c = a.center.clone();
    Ok(match dir {
        ProductSide::Right => JunctionPair {
            cosocle: concatenate(a, Direction::Left, b, c.clone()),
            socle: concatenate(a, Direction::Right, b, c),
        },
        ProductSide::Left => JunctionPair {
            cosocle: concatenate(b, Direction::Right, a, c.clone()),
            socle: concatenate(b, Direction::Left, a, c),
        },
    })
}

/// Compose two words along a junction and return the requested part as a
/// virtual representation (`Full` is socle + cosocle, each with coefficient
/// one; the product has length exactly two).
pub fn junction_compose(
    a: &ArrowWord,
    b: &ArrowWord,
    dir: ProductSide,
    part: JunctionPart,
) -> Result<VirtualRep> {
    let pair = junction_pair(a, b, dir)?;
    let mut v = VirtualRep::zero();
    match part {
        JunctionPart::Socle => v.add_word(&pair.socle, BigInt::one()),
        JunctionPart::Cosocle => v.add_word(&pair.cosocle, BigInt::one()),
        JunctionPart::Full => {
            v.add_word(&pair.socle, BigInt::one());
            v.add_word(&pair.cosocle, BigInt::one());
        }
    }
    Ok(v)
}

/// Shorthand used by the identities: `[⃖(n)]` with `n+1` points, or `None`
/// for `n = -1` (the empty word, the unit of composition).
pub fn steinberg_bracket(
    base: &CuspidalDatum,
    n: i64,
    center: BigRational,
) -> Option<ArrowWord> {
    if n < 0 {
        return None;
    }
    Some(ArrowWord::steinberg(base, n as u32 + 1, center))
}

/// `[⃗(n)]` with `n+1` points, or `None` for `n = -1`.
pub fn speh_bracket(base: &CuspidalDatum, n: i64, center: BigRational) -> Option<ArrowWord> {
    if n < 0 {
        return None;
    }
    Some(ArrowWord::speh(base, n as u32 + 1, center))
}

/// `[⃖a, ⃗b]`: `a` LEFT arrows then `b` RIGHT arrows on `a+b+1` points.
pub fn hook_word(base: &CuspidalDatum, a: i64, b: i64, center: BigRational) -> Result<ArrowWord> {
    if a < 0 || b < 0 {
        return Err(CalcError::MalformedWord(format!(
            "hook runs ({a}, {b}) must be non-negative"
        )));
    }
    let mut runs = Vec::new();
    if a > 0 {
        runs.push((a, Direction::Left));
    }
    if b > 0 {
        runs.push((b, Direction::Right));
    }
    ArrowWord::from_runs(base, center, &runs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn base() -> CuspidalDatum {
        CuspidalDatum::self_dual(1, "pi")
    }

    fn zero() -> BigRational {
        BigRational::zero()
    }

    fn w(runs: &[(i64, Direction)]) -> ArrowWord {
        ArrowWord::from_runs(&base(), zero(), runs).unwrap()
    }

    use Direction::{Left, Right};

    #[test]
    fn normalize_merges_equal_neighbours() {
        assert_eq!(w(&[(2, Left), (3, Left)]), w(&[(5, Left)]));
        assert_eq!(w(&[(1, Left), (1, Right)]).runs(), &[(1, Left), (1, Right)]);
        assert_eq!(
            w(&[(1, Left), (2, Left), (1, Right), (3, Right)]),
            w(&[(3, Left), (4, Right)])
        );
    }

    #[test]
    fn normalize_rejects_nonpositive_runs() {
        assert!(matches!(
            ArrowWord::from_runs(&base(), zero(), &[(0, Left)]),
            Err(CalcError::MalformedWord(_))
        ));
        assert!(ArrowWord::from_runs(&base(), zero(), &[(-2, Right)]).is_err());
    }

    #[test]
    fn steinberg_and_speh_words() {
        assert!(ArrowWord::steinberg(&base(), 4, zero()).is_steinberg());
        assert!(ArrowWord::speh(&base(), 4, zero()).is_speh());
        assert!(ArrowWord::cuspidal(&base(), zero()).is_steinberg());
        assert!(ArrowWord::cuspidal(&base(), zero()).is_speh());
        assert_eq!(ArrowWord::steinberg(&base(), 4, zero()).points(), 4);
    }

    #[test]
    fn dual_of_steinberg_is_steinberg() {
        let sp = ArrowWord::steinberg(&base(), 5, BigRational::new(1.into(), 2.into()));
        let d = sp.dual();
        assert!(d.is_steinberg());
        assert_eq!(*d.center(), BigRational::new((-1).into(), 2.into()));
    }

    #[test]
    fn dual_of_cuspidal_negates_center() {
        let c = ArrowWord::cuspidal(&base(), BigRational::new(1.into(), 2.into()));
        let d = c.dual();
        assert_eq!(d.points(), 1);
        assert_eq!(*d.center(), BigRational::new((-1).into(), 2.into()));
    }

    #[test]
    fn dual_reverses_slots_and_keeps_directions() {
        let x = w(&[(1, Left), (1, Right)]);
        assert_eq!(x.dual().slots(), vec![Right, Left]);
    }

    #[test]
    fn involution_flips_every_arrow() {
        let x = w(&[(2, Left), (1, Right)]);
        assert_eq!(x.zelevinsky_involution().slots(), vec![Right, Right, Left]);
        let sp4 = ArrowWord::steinberg(&base(), 4, zero());
        assert_eq!(sp4.zelevinsky_involution(), ArrowWord::speh(&base(), 4, zero()));
    }

    #[test]
    fn cosocle_of_cuspidal_product_is_steinberg() {
        let c = ArrowWord::cuspidal(&base(), zero());
        let pair = junction_pair(&c, &c, ProductSide::Right).unwrap();
        assert_eq!(pair.cosocle, ArrowWord::steinberg(&base(), 2, zero()));
        assert_eq!(pair.socle, ArrowWord::speh(&base(), 2, zero()));
    }

    #[test]
    fn socle_of_steinberg_times_speh() {
        // socle([⃖(t-1)] ⃗× [⃗(s-t-1)]) = [⃖(t-1), ⃗(s-t)] for s = 5, t = 2.
        let a = ArrowWord::steinberg(&base(), 2, zero());
        let b = ArrowWord::speh(&base(), 3, zero());
        let pair = junction_pair(&a, &b, ProductSide::Right).unwrap();
        assert_eq!(pair.socle, hook_word(&base(), 1, 3, zero()).unwrap());
        assert_eq!(pair.cosocle, hook_word(&base(), 2, 2, zero()).unwrap());
    }

    #[test]
    fn mismatched_bases_rejected() {
        let other = CuspidalDatum::self_dual(1, "rho");
        let a = ArrowWord::cuspidal(&base(), zero());
        let b = ArrowWord::cuspidal(&other, zero());
        assert!(matches!(
            junction_pair(&a, &b, ProductSide::Right),
            Err(CalcError::IncompatibleBase(_, _))
        ));
    }

    #[test]
    fn support_is_centered() {
        let x = w(&[(1, Left), (2, Right)]).shifted_half(1);
        let sup = x.support();
        assert_eq!(sup.len(), 4);
        let sum: BigRational = sup.iter().sum();
        assert_eq!(sum, BigRational::from(BigInt::from(2))); // 4 · 1/2
    }

    #[test]
    fn text_round_trip() {
        let x = w(&[(3, Left), (1, Right), (2, Left)]).shifted_half(-1);
        assert_eq!(x.text(), "pi(-1/2) <3 >1 <2");
        assert_eq!(ArrowWord::parse(&base(), &x.text()).unwrap(), x);
        let c = ArrowWord::cuspidal(&base(), zero());
        assert_eq!(c.text(), "pi(0) e");
        assert_eq!(ArrowWord::parse(&base(), "pi(0) e").unwrap(), c);
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(runs in proptest::collection::vec((1i64..4, prop_oneof![Just(Left), Just(Right)]), 0..8)) {
            let once = ArrowWord::from_runs(&base(), zero(), &runs).unwrap();
            let raw: Vec<(i64, Direction)> = once.runs().iter().map(|&(a, d)| (a as i64, d)).collect();
            let twice = ArrowWord::from_runs(&base(), zero(), &raw).unwrap();
            prop_assert_eq!(&once, &twice);
            let total: i64 = runs.iter().map(|&(a, _)| a).sum();
            prop_assert_eq!(once.points() as i64, total + 1);
        }

        #[test]
        fn dual_and_involution_are_involutive_and_commute(
            slots in proptest::collection::vec(prop_oneof![Just(Left), Just(Right)], 0..9)
        ) {
            let x = ArrowWord::from_slots(&base(), zero(), &slots);
            prop_assert_eq!(x.dual().dual(), x.clone());
            prop_assert_eq!(x.zelevinsky_involution().zelevinsky_involution(), x.clone());
            prop_assert_eq!(
                x.dual().zelevinsky_involution(),
                x.zelevinsky_involution().dual()
            );
        }
    }
}
