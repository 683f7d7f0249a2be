//! Exact arithmetic in the Grothendieck group of elliptic representations.
//!
//! A virtual representation is a finite integer combination of pairs
//! (arrow word, weight twist). Products are defined for consecutive disjoint
//! supports only — the case the whole calculus uses — where the induced
//! representation has length exactly two and the expansion is the sum of the
//! two junction orientations.

use crate::error::CalcError;
use crate::jacquet;
use crate::segment::{
    junction_pair, steinberg_bracket, ArrowWord, CuspidalDatum, ProductSide,
};
use crate::twist::WeightTwist;
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// An integer combination of (word, twist) pairs. Zero coefficients are
/// never stored, so structural equality is equality in the group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct VirtualRep {
    terms: BTreeMap<(ArrowWord, WeightTwist), BigInt>,
}

impl VirtualRep {
    pub fn zero() -> Self {
        VirtualRep::default()
    }

    pub fn from_word(word: &ArrowWord) -> Self {
        let mut v = VirtualRep::zero();
        v.add_word(word, BigInt::one());
        v
    }

    pub fn from_term(word: &ArrowWord, twist: &WeightTwist, coeff: BigInt) -> Self {
        let mut v = VirtualRep::zero();
        v.add_term(word, twist, coeff);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(ArrowWord, WeightTwist), &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &ArrowWord, twist: &WeightTwist) -> BigInt {
        self.terms
            .get(&(word.clone(), twist.clone()))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, word: &ArrowWord, twist: &WeightTwist, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let key = (word.clone(), twist.clone());
        let entry = self.terms.entry(key).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&(word.clone(), twist.clone()));
        }
    }

    pub fn add_word(&mut self, word: &ArrowWord, coeff: BigInt) {
        self.add_term(word, &WeightTwist::zero(), coeff);
    }

    pub fn add(&mut self, other: &VirtualRep) {
        for ((w, t), c) in &other.terms {
            self.add_term(w, t, c.clone());
        }
    }

    pub fn sub(&mut self, other: &VirtualRep) {
        for ((w, t), c) in &other.terms {
            self.add_term(w, t, -c.clone());
        }
    }

    pub fn negated(&self) -> Self {
        let mut v = VirtualRep::zero();
        v.sub(self);
        v
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        let mut v = VirtualRep::zero();
        for ((w, t), c) in &self.terms {
            v.add_term(w, t, c * k);
        }
        v
    }

    /// Tensor every term with a further twist (tate exponents add; at most
    /// one rec factor may be present).
    pub fn twisted(&self, twist: &WeightTwist) -> Result<Self> {
        let mut v = VirtualRep::zero();
        for ((w, t), c) in &self.terms {
            v.add_term(w, &t.compose(twist)?, c.clone());
        }
        Ok(v)
    }

    /// Apply the contragredient to every word and twist.
    pub fn dualized(&self) -> Self {
        let mut v = VirtualRep::zero();
        for ((w, t), c) in &self.terms {
            v.add_term(&w.dual(), &t.dual(), c.clone());
        }
        v
    }

    /// Frobenius-semisimplification: expand every `rec^∨(Sp_s(π))` twist
    /// into its cuspidal ladder.
    pub fn semisimplified(&self) -> Self {
        let mut v = VirtualRep::zero();
        for ((w, t), c) in &self.terms {
            for piece in t.semisimplify() {
                v.add_term(w, &piece, c.clone());
            }
        }
        v
    }

    /// First term of the difference `self - other`, as a witness string.
    pub fn first_discrepancy(&self, other: &VirtualRep) -> Option<String> {
        let mut diff = self.clone();
        diff.sub(other);
        diff.terms.iter().next().map(|((w, t), c)| {
            format!("coefficient of {} ⊗ {} differs by {}", w.text(), t, c)
        })
    }
}

impl fmt::Display for VirtualRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((w, t), c)| format!("{c}·[{}]⊗{t}", w.text()))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Expand `A ⃗× B` (or `A ⃖× B`) in the Grothendieck group: exactly the two
/// junction orientations, coefficient one each.
pub fn expand_product(a: &ArrowWord, b: &ArrowWord, dir: ProductSide) -> Result<VirtualRep> {
    let pair = junction_pair(a, b, dir)?;
    let mut v = VirtualRep::zero();
    v.add_word(&pair.socle, BigInt::one());
    v.add_word(&pair.cosocle, BigInt::one());
    Ok(v)
}

/// Bilinear extension of [`expand_product`] to virtual arguments. The unit
/// for either side is the empty sum convention handled by
/// [`product_with_unit`].
pub fn expand_virtual(a: &VirtualRep, b: &VirtualRep, dir: ProductSide) -> Result<VirtualRep> {
    let mut out = VirtualRep::zero();
    for ((wa, ta), ca) in a.terms() {
        for ((wb, tb), cb) in b.terms() {
            let twist = ta.compose(tb)?;
            let prod = expand_product(wa, wb, dir)?;
            out.add(&prod.twisted(&twist)?.scaled(&(ca * cb)));
        }
    }
    Ok(out)
}

/// Product where the second factor may be the unit (empty word).
pub fn product_with_unit(
    a: &VirtualRep,
    b: Option<&ArrowWord>,
    dir: ProductSide,
) -> Result<VirtualRep> {
    match b {
        None => Ok(a.clone()),
        Some(word) => expand_virtual(a, &VirtualRep::from_word(word), dir),
    }
}

/// The class of the full induced representation `V(π, s)`: every arrow word
/// on `s` points, coefficient one.
pub fn standard_module(base: &CuspidalDatum, s: u32, center: BigRational) -> Result<VirtualRep> {
    if s == 0 {
        return Err(CalcError::Domain("standard module needs s ≥ 1".into()));
    }
    let mut v = VirtualRep::zero();
    for mask in 0..(1u64 << (s - 1)) {
        let slots: Vec<crate::segment::Direction> = (0..s - 1)
            .map(|j| {
                if mask >> j & 1 == 1 {
                    crate::segment::Direction::Right
                } else {
                    crate::segment::Direction::Left
                }
            })
            .collect();
        v.add_word(
            &ArrowWord::from_slots(base, center.clone(), &slots),
            BigInt::one(),
        );
    }
    Ok(v)
}

/// Reconstruct a virtual representation from a signature with
/// multiplicity-free support: the coefficient of a word is the common
/// multiplicity of its extension set inside the signature.
pub fn decompose_signature(sig: &jacquet::Signature) -> Result<VirtualRep> {
    let support = sig.support();
    let n = support.len();
    for win in support.windows(2) {
        if win[0] == win[1] {
            return Err(CalcError::UnsupportedSupport(
                "signature support has repeated values".into(),
            ));
        }
    }
    if n == 0 {
        return Err(CalcError::InconsistentSignature("empty support".into()));
    }
    // words are reconstructed over the base recorded in the signature, with
    // center the midpoint of the support
    let base = sig.base();
    let center = {
        let sum: BigRational = support.iter().sum();
        sum / BigRational::from(BigInt::from(n as i64))
    };
    let mut remaining: BTreeMap<Vec<u32>, BigInt> = sig
        .entries()
        .map(|(seq, c)| (seq.clone(), c.clone()))
        .collect();
    let mut out = VirtualRep::zero();
    while let Some((seq, mult)) = remaining.iter().next().map(|(s, c)| (s.clone(), c.clone())) {
        let word = jacquet::word_of_permutation(base, center.clone(), &seq)?;
        let ext = jacquet::linear_extensions(&word);
        for (member, m) in ext.entries() {
            debug_assert!(m.is_one());
            let have = remaining.remove(member).unwrap_or_else(BigInt::zero);
            if have != mult {
                return Err(CalcError::InconsistentSignature(format!(
                    "sequence {member:?} has multiplicity {have}, expected {mult}"
                )));
            }
        }
        out.add_word(&word, mult);
    }
    Ok(out)
}

/// The alternating sum
/// `Σ_{r=i}^{t} (-1)^{r-i} [⃖(i-1), ⃗(r-i)] ⃗× [⃖(t-r-1)]`,
/// evaluated through [`expand_virtual`]. It collapses to `[⃖(t-1)]`.
pub fn telescope(base: &CuspidalDatum, t: u32, i: u32) -> Result<VirtualRep> {
    if i == 0 || i > t {
        return Err(CalcError::Domain(format!(
            "telescope needs 1 ≤ i ≤ t, got i = {i}, t = {t}"
        )));
    }
    let zero = BigRational::zero();
    let mut out = VirtualRep::zero();
    for r in i..=t {
        let head = crate::segment::hook_word(base, i as i64 - 1, (r - i) as i64, zero.clone())?;
        let tail = steinberg_bracket(base, t as i64 - r as i64 - 1, zero.clone());
        let term = product_with_unit(&VirtualRep::from_word(&head), tail.as_ref(), ProductSide::Right)?;
        let sign = if (r - i) % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        out.add(&term.scaled(&sign));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segment::{hook_word, Direction::*};

    fn base() -> CuspidalDatum {
        CuspidalDatum::self_dual(1, "pi")
    }

    fn zero() -> BigRational {
        BigRational::zero()
    }

    #[test]
    fn cuspidal_product_has_length_two() {
        let c = ArrowWord::cuspidal(&base(), zero());
        let v = expand_product(&c, &c, ProductSide::Right).unwrap();
        let mut expected = VirtualRep::zero();
        expected.add_word(&ArrowWord::steinberg(&base(), 2, zero()), BigInt::one());
        expected.add_word(&ArrowWord::speh(&base(), 2, zero()), BigInt::one());
        assert_eq!(v, expected);
    }

    #[test]
    fn left_product_equals_swapped_right_product() {
        for (ra, rb) in [
            (vec![(1, Left)], vec![(2, Right)]),
            (vec![(1, Left), (1, Right)], vec![(1, Left)]),
            (vec![(2, Right)], vec![(1, Right), (2, Left)]),
        ] {
            let a = ArrowWord::from_runs(&base(), zero(), &ra).unwrap();
            let b = ArrowWord::from_runs(&base(), zero(), &rb).unwrap();
            assert_eq!(
                expand_product(&a, &b, ProductSide::Left).unwrap(),
                expand_product(&b, &a, ProductSide::Right).unwrap()
            );
        }
    }

    #[test]
    fn steinberg_times_speh_expansion() {
        // [⃖1] ⃗× [⃗1] = [⃖2, ⃗1] + [⃖1, ⃗2]
        let a = ArrowWord::steinberg(&base(), 2, zero());
        let b = ArrowWord::speh(&base(), 2, zero());
        let v = expand_product(&a, &b, ProductSide::Right).unwrap();
        let mut expected = VirtualRep::zero();
        expected.add_word(&hook_word(&base(), 2, 1, zero()).unwrap(), BigInt::one());
        expected.add_word(&hook_word(&base(), 1, 2, zero()).unwrap(), BigInt::one());
        assert_eq!(v, expected);
    }

    #[test]
    fn speh_times_speh_expansion() {
        // [⃗1] ⃗× [⃗1] = [⃗3] + [⃗1, ⃖1, ⃗1]; the two extension sets fill
        // the C(4,2) = 6 interleavings: 1 + 5
        let a = ArrowWord::speh(&base(), 2, zero());
        let v = expand_product(&a, &a, ProductSide::Right).unwrap();
        let mut expected = VirtualRep::zero();
        expected.add_word(&ArrowWord::speh(&base(), 4, zero()), BigInt::one());
        expected.add_word(
            &ArrowWord::from_runs(&base(), zero(), &[(1, Right), (1, Left), (1, Right)]).unwrap(),
            BigInt::one(),
        );
        assert_eq!(v, expected);
        let sig = jacquet::signature_of(&v).unwrap();
        assert_eq!(sig.mass(), BigInt::from(6));
        let sizes: Vec<usize> = v
            .terms()
            .map(|((w, _), _)| jacquet::linear_extensions(w).len())
            .collect();
        assert_eq!(sizes, vec![5, 1]);
    }

    #[test]
    fn standard_module_small() {
        let v1 = standard_module(&base(), 1, zero()).unwrap();
        assert_eq!(v1, VirtualRep::from_word(&ArrowWord::cuspidal(&base(), zero())));
        let v2 = standard_module(&base(), 2, zero()).unwrap();
        assert_eq!(v2.len(), 2);
        let v3 = standard_module(&base(), 3, zero()).unwrap();
        assert_eq!(v3.len(), 4);
        assert!(v3.terms().all(|(_, c)| c.is_one()));
    }

    #[test]
    fn mixed_products_commute() {
        // A ⃗× (B ⃖× C) = B ⃖× (A ⃗× C) in the group, for disjoint
        // consecutive supports
        let b = base();
        for (ra, rb, rc) in [
            (vec![(1, Left)], vec![(1, Right)], vec![(2, Left)]),
            (vec![(2, Right)], vec![(1, Left), (1, Right)], vec![(1, Left)]),
        ] {
            let a = ArrowWord::from_runs(&b, zero(), &ra).unwrap();
            let w2 = ArrowWord::from_runs(&b, zero(), &rb).unwrap();
            let c = ArrowWord::from_runs(&b, zero(), &rc).unwrap();
            let lhs = expand_virtual(
                &VirtualRep::from_word(&a),
                &expand_product(&w2, &c, ProductSide::Left).unwrap(),
                ProductSide::Right,
            )
            .unwrap();
            let rhs = expand_virtual(
                &VirtualRep::from_word(&w2),
                &expand_product(&a, &c, ProductSide::Right).unwrap(),
                ProductSide::Left,
            )
            .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn telescope_single_term() {
        let v = telescope(&base(), 5, 5).unwrap();
        assert_eq!(v, VirtualRep::from_word(&ArrowWord::steinberg(&base(), 5, zero())));
    }

    #[test]
    fn telescope_two_terms() {
        // ([⃖1] + [⃗1]) − [⃗1] = [⃖1]
        let v = telescope(&base(), 2, 1).unwrap();
        assert_eq!(v, VirtualRep::from_word(&ArrowWord::steinberg(&base(), 2, zero())));
    }

    #[test]
    fn telescope_three_terms() {
        let v = telescope(&base(), 3, 1).unwrap();
        assert_eq!(v, VirtualRep::from_word(&ArrowWord::steinberg(&base(), 3, zero())));
    }

    #[test]
    fn decompose_full_symmetric_group() {
        let v = standard_module(&base(), 3, zero()).unwrap();
        let sig = jacquet::signature_of(&v).unwrap();
        let back = decompose_signature(&sig).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn decompose_single_sequences() {
        let sp = ArrowWord::steinberg(&base(), 3, zero());
        let sig = jacquet::linear_extensions(&sp);
        assert_eq!(decompose_signature(&sig).unwrap(), VirtualRep::from_word(&sp));
    }

    #[test]
    fn telescope_domain_errors() {
        assert!(matches!(telescope(&base(), 3, 4), Err(CalcError::Domain(_))));
        assert!(matches!(telescope(&base(), 3, 0), Err(CalcError::Domain(_))));
    }

    #[test]
    fn mismatched_centers_are_unsupported() {
        let a = ArrowWord::cuspidal(&base(), zero());
        let b = a.shifted_half(3);
        assert!(matches!(
            expand_product(&a, &b, ProductSide::Right),
            Err(CalcError::UnsupportedSupport(_))
        ));
    }

    #[test]
    fn decompose_rejects_repeated_support() {
        let sig = jacquet::speh_of_steinberg_extensions(2, 2).unwrap();
        assert!(matches!(
            decompose_signature(&sig),
            Err(CalcError::UnsupportedSupport(_))
        ));
    }

    #[test]
    fn decompose_rejects_partial_extension_set() {
        // {(0,1,2), (1,0,2)} is not a union of extension sets: (1,0,2)
        // belongs to the word <1 >1 whose set also contains (1,2,0).
        let sig = jacquet::Signature::from_sequences(
            &base(),
            &[zero().clone(), BigRational::from(BigInt::from(1)), BigRational::from(BigInt::from(2))],
            vec![vec![0, 1, 2], vec![1, 0, 2]],
        );
        assert!(matches!(
            decompose_signature(&sig),
            Err(CalcError::InconsistentSignature(_))
        ));
    }
}
