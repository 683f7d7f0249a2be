//! Formal calculus of Harris–Taylor sheaf symbols.
//!
//! The symbols `j_! HT(g, t, π, Π)`, `j_{!*} HT(g, t, π, Π)` and
//! `Rj_* HT(g, t, π, Π)` are generators of a free abelian group keyed by
//! their combinatorial data; no sheaf semantics is attached. The inducing
//! slot `Π` lives in the Grothendieck group of elliptic representations and
//! the calculus is bilinear in it, so a virtual sheaf is stored with a
//! single arrow word per term.
//!
//! The two telescopings
//!
//! ```text
//!   j_! HT(g, t, π, Π)  = Σ_{i=t}^{s_g} j_{!*} HT(g, i, π, Π ⃗× [⃖(i-t-1)]) ⊗ Ξ^{(i-t)(g-1)/2}
//!   j_{!*} HT(g, t, π, Sp_t) ⊗ rec^∨(π)
//!                       = Σ_{r=0}^{s_g-t} (-1)^r j_! HT(g, t+r, π, Sp_t ⃗× [⃗(r-1)]) ⊗ rec^∨(π)(-r(g-1)/2)
//! ```
//!
//! are mutually inverse formal substitutions, and feeding the first into the
//! expansion of the nearby-cycle class reproduces the monodromy-graded sum
//! term for term.
//!
//! The first telescoping arises from a weight filtration whose graded
//! pieces also contain point-supported correction summands; these are kept
//! as explicit formal terms by [`jshriek_resolution`] and erased by the
//! vanishing step, so both stages of the derivation are auditable.
//!
//! All identities are stated at the granularity of the full isotypic
//! generators: the overall multiplicity of a cuspidal class is one global
//! scalar that is never decomposed, and it cancels from every comparison.

use crate::error::CalcError;
use crate::groth::{product_with_unit, VirtualRep};
use crate::segment::{
    hook_word, speh_bracket, steinberg_bracket, ArrowWord, CuspidalDatum, ProductSide,
};
use crate::twist::WeightTwist;
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Which functor a symbol stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    /// `j_! HT(…)`, extension by zero.
    JShriek,
    /// `j_{!*} HT(…)`, intermediate extension.
    Intermediate,
    /// `Rj_* HT(…)`, full direct image.
    RjStar,
    /// Restriction of a cohomology sheaf to a stratum.
    HtRestriction,
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SymbolKind::JShriek => "j!",
            SymbolKind::Intermediate => "j!*",
            SymbolKind::RjStar => "Rj*",
            SymbolKind::HtRestriction => "ht",
        };
        write!(f, "{s}")
    }
}

/// A formal sheaf generator. The stratum has codimension `t·g` inside the
/// ambient dimension-`d` situation; `word` is the single elliptic inducing
/// word of the flattened slot.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SheafSymbol {
    pub kind: SymbolKind,
    pub g: u32,
    pub t: u32,
    pub base: CuspidalDatum,
    pub word: ArrowWord,
    pub twist: WeightTwist,
    pub ambient: u32,
}

impl SheafSymbol {
    pub fn text(&self) -> String {
        format!(
            "{} HT({}, {}, {}, {}) ⊗ {} [d={}]",
            self.kind,
            self.g,
            self.t,
            self.base.label(),
            self.word.text(),
            self.twist,
            self.ambient
        )
    }
}

/// An integer combination of sheaf symbols; zero coefficients are dropped,
/// so equality is equality of canonical forms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VirtualSheaf {
    terms: BTreeMap<SheafSymbol, BigInt>,
}

impl VirtualSheaf {
    pub fn zero() -> Self {
        VirtualSheaf::default()
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

    pub fn terms(&self) -> impl Iterator<Item = (&SheafSymbol, &BigInt)> {
        self.terms.iter()
    }

    pub fn add_symbol(&mut self, symbol: SheafSymbol, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(symbol.clone()).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&symbol);
        }
    }

    /// Insert `coeff · kind HT(g, t, π, Π) ⊗ twist`, distributing over the
    /// inducing virtual representation. Slot terms must be twist-free; their
    /// coefficients multiply the outer one.
    #[allow(clippy::too_many_arguments)]
    pub fn add_induced(
        &mut self,
        kind: SymbolKind,
        g: u32,
        t: u32,
        base: &CuspidalDatum,
        inducing: &VirtualRep,
        twist: &WeightTwist,
        ambient: u32,
        coeff: &BigInt,
    ) -> Result<()> {
        for ((word, slot_twist), c) in inducing.terms() {
            if *slot_twist != WeightTwist::zero() {
                return Err(CalcError::UnsupportedSupport(
                    "inducing slot carries a weight twist".into(),
                ));
            }
            self.add_symbol(
                SheafSymbol {
                    kind,
                    g,
                    t,
                    base: base.clone(),
                    word: word.clone(),
                    twist: twist.clone(),
                    ambient,
                },
                coeff * c,
            );
        }
        Ok(())
    }

    pub fn add(&mut self, other: &VirtualSheaf) {
        for (sym, c) in &other.terms {
            self.add_symbol(sym.clone(), c.clone());
        }
    }

    pub fn sub(&mut self, other: &VirtualSheaf) {
        for (sym, c) in &other.terms {
            self.add_symbol(sym.clone(), -c.clone());
        }
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        let mut v = VirtualSheaf::zero();
        for (sym, c) in &self.terms {
            v.add_symbol(sym.clone(), c * k);
        }
        v
    }

    pub fn twisted(&self, delta: &WeightTwist) -> Result<Self> {
        let mut v = VirtualSheaf::zero();
        for (sym, c) in &self.terms {
            let mut sym = sym.clone();
            sym.twist = sym.twist.compose(delta)?;
            v.add_symbol(sym, c.clone());
        }
        Ok(v)
    }

    pub fn first_discrepancy(&self, other: &VirtualSheaf) -> Option<String> {
        let mut diff = self.clone();
        diff.sub(other);
        diff.terms
            .iter()
            .next()
            .map(|(sym, c)| format!("coefficient of {} differs by {}", sym.text(), c))
    }

    /// Restrict to the terms at stratum index `t`.
    pub fn at_stratum(&self, t: u32) -> VirtualSheaf {
        let mut v = VirtualSheaf::zero();
        for (sym, c) in &self.terms {
            if sym.t == t {
                v.add_symbol(sym.clone(), c.clone());
            }
        }
        v
    }
}

impl fmt::Display for VirtualSheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(sym, c)| format!("{c}·{}", sym.text()))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `s_g = ⌊d/g⌋`.
pub fn depth(d: u32, g: u32) -> u32 {
    d / g
}

fn check_stratum(d: u32, g: u32, t: u32) -> Result<u32> {
    if g == 0 || g > d {
        return Err(CalcError::Domain(format!("rank g = {g} outside 1..={d}")));
    }
    let s_g = depth(d, g);
    if t == 0 || t > s_g {
        return Err(CalcError::Domain(format!(
            "stratum index t = {t} outside 1..={s_g}"
        )));
    }
    Ok(s_g)
}

/// The class of the nearby-cycle complex (one fixed cuspidal datum), as
/// extension-by-zero symbols:
/// `Σ_{i=1}^{s_g} Σ_{t=i}^{s_g} (-1)^{t-i}
///    j_! HT(g, t, π, [⃖(i-1), ⃗(t-i)]) ⊗ rec^∨(π)(-(tg-2+2i-t)/2)`.
pub fn rpsi_virtual(base: &CuspidalDatum, d: u32, g: u32) -> Result<VirtualSheaf> {
    if g == 0 || g > d {
        return Err(CalcError::Domain(format!("rank g = {g} outside 1..={d}")));
    }
    let s_g = depth(d, g);
    let mut out = VirtualSheaf::zero();
    for i in 1..=s_g {
        for t in i..=s_g {
            let word = hook_word(base, i as i64 - 1, (t - i) as i64, BigRational::zero())?;
            let twist = WeightTwist::rec_half(
                -((t * g) as i64 - 2 + 2 * i as i64 - t as i64),
            );
            let sign = if (t - i) % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            out.add_induced(
                SymbolKind::JShriek,
                g,
                t,
                base,
                &VirtualRep::from_word(&word),
                &twist,
                d,
                &sign,
            )?;
        }
    }
    Ok(out)
}

/// A point-supported correction of the weight filtration behind the
/// telescoping: either one of the summands `A_{t,i}` (pure of weight
/// `d - tg - i - 1`) or the final remainder of the filtration chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Correction {
    PointSummand { t: u32, index: u32 },
    Remainder { t: u32 },
}

/// The telescoping of `j_! HT(g, t, π, Π)` with its supersingular
/// corrections still in place: the resolved part
/// `Σ_{i=t}^{s_g} j_{!*} HT(g, i, π, Π ⃗× [⃖(i-t-1)]) ⊗ Ξ^{(i-t)(g-1)/2}`
/// plus the formal correction terms the filtration chain produces.
#[derive(Debug, Clone)]
pub struct ShriekResolution {
    pub resolved: VirtualSheaf,
    pub corrections: Vec<Correction>,
}

impl ShriekResolution {
    /// Second stage of the derivation: every point summand vanishes and the
    /// remainder of the chain is zero (on the deepest stratum the surviving
    /// point term is already the last summand of the resolved part, where
    /// `j_!` and `j_{!*}` agree).
    pub fn apply_vanishing(self) -> VirtualSheaf {
        self.resolved
    }
}

/// First stage: resolve `j_! HT(g, t, π, Π)` along deeper strata, keeping
/// the correction terms explicit.
pub fn jshriek_resolution(
    base: &CuspidalDatum,
    d: u32,
    g: u32,
    t: u32,
    inducing: &VirtualRep,
) -> Result<ShriekResolution> {
    let s_g = check_stratum(d, g, t)?;
    let mut resolved = VirtualSheaf::zero();
    for i in t..=s_g {
        let tail = steinberg_bracket(base, i as i64 - t as i64 - 1, BigRational::zero());
        let slot = product_with_unit(inducing, tail.as_ref(), ProductSide::Right)?;
        let twist = WeightTwist::xi_half(((i - t) * (g - 1)) as i64);
        resolved.add_induced(
            SymbolKind::Intermediate,
            g,
            i,
            base,
            &slot,
            &twist,
            d,
            &BigInt::one(),
        )?;
    }
    let mut corrections: Vec<Correction> = (0..s_g - t)
        .map(|index| Correction::PointSummand { t, index })
        .collect();
    corrections.push(Correction::Remainder { t });
    Ok(ShriekResolution {
        resolved,
        corrections,
    })
}

/// Both stages at once: resolve and erase the corrections.
pub fn jshriek_to_intermediate(
    base: &CuspidalDatum,
    d: u32,
    g: u32,
    t: u32,
    inducing: &VirtualRep,
) -> Result<VirtualSheaf> {
    Ok(jshriek_resolution(base, d, g, t, inducing)?.apply_vanishing())
}

/// Verdier-dual telescoping: `Rj_* HT(g, t, π, Π)` resolves with `⃖×` tails
/// and the `(g+1)`-exponent family,
/// `Σ_{i=t}^{s_g} j_{!*} HT(g, i, π, Π ⃖× [⃖(i-t-1)]) ⊗ Ξ^{(i-t)(g+1)/2}`.
pub fn rjstar_to_intermediate(
    base: &CuspidalDatum,
    d: u32,
    g: u32,
    t: u32,
    inducing: &VirtualRep,
) -> Result<VirtualSheaf> {
    let s_g = check_stratum(d, g, t)?;
    let mut out = VirtualSheaf::zero();
    for i in t..=s_g {
        let tail = steinberg_bracket(base, i as i64 - t as i64 - 1, BigRational::zero());
        let slot = product_with_unit(inducing, tail.as_ref(), ProductSide::Left)?;
        let twist = WeightTwist::xi_half(((i - t) * (g + 1)) as i64);
        out.add_induced(
            SymbolKind::Intermediate,
            g,
            i,
            base,
            &slot,
            &twist,
            d,
            &BigInt::one(),
        )?;
    }
    Ok(out)
}

/// The monodromy-graded generator
/// `𝒫(g, t, π) = j_{!*} HT(g, t, π, Sp_t) ⊗ rec^∨(π)` written as an
/// alternating sum of extension-by-zero symbols:
/// `Σ_{r=0}^{s_g-t} (-1)^r j_! HT(g, t+r, π, Sp_t ⃗× [⃗(r-1)]) ⊗ rec^∨(π)(-r(g-1)/2)`.
pub fn intermediate_alternating(base: &CuspidalDatum, d: u32, g: u32, t: u32) -> Result<VirtualSheaf> {
    let s_g = check_stratum(d, g, t)?;
    let head = VirtualRep::from_word(&ArrowWord::steinberg(base, t, BigRational::zero()));
    let mut out = VirtualSheaf::zero();
    for r in 0..=(s_g - t) {
        let tail = speh_bracket(base, r as i64 - 1, BigRational::zero());
        let slot = product_with_unit(&head, tail.as_ref(), ProductSide::Right)?;
        let twist = WeightTwist::rec_half(-((r * (g - 1)) as i64));
        let sign = if r % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        out.add_induced(
            SymbolKind::JShriek,
            g,
            t + r,
            base,
            &slot,
            &twist,
            d,
            &sign,
        )?;
    }
    Ok(out)
}

/// Replace every extension-by-zero symbol through
/// [`jshriek_to_intermediate`], keeping other kinds unchanged.
pub fn substitute_jshriek(vs: &VirtualSheaf) -> Result<VirtualSheaf> {
    let mut out = VirtualSheaf::zero();
    for (sym, coeff) in vs.terms() {
        if sym.kind != SymbolKind::JShriek {
            out.add_symbol(sym.clone(), coeff.clone());
            continue;
        }
        let expanded = jshriek_to_intermediate(
            &sym.base,
            sym.ambient,
            sym.g,
            sym.t,
            &VirtualRep::from_word(&sym.word),
        )?;
        out.add(&expanded.twisted(&sym.twist)?.scaled(coeff));
    }
    Ok(out)
}

/// The monodromy-graded table in rank-one normal form: the pairs
/// `(t, rec^∨(−(t-1+k)/2))` with `|k| < t ≤ s` and `t ≡ k-1 (mod 2)`; empty
/// for `|k| ≥ s`. The substitution to rank `g` rescales the twist to
/// `-(tg-1+k)/2`.
pub fn mgr(s: u32, k: i64) -> Vec<(u32, WeightTwist)> {
    let mut out = Vec::new();
    if k.unsigned_abs() >= s as u64 {
        return out;
    }
    for t in 1..=s {
        if (t as i64) > k.abs() && (t as i64 - (k - 1)) % 2 == 0 {
            out.push((t, WeightTwist::rec_half(-(t as i64 - 1 + k))));
        }
    }
    out
}

/// The same table rescaled to rank `g`: twists `-(tg-1+k)/2`.
pub fn mgr_scaled(s: u32, k: i64, g: u32) -> Vec<(u32, WeightTwist)> {
    mgr(s, k)
        .into_iter()
        .map(|(t, _)| (t, WeightTwist::rec_half(-((t * g) as i64 - 1 + k))))
        .collect()
}

/// Which derived functor [`cohomology_sheaves`] is taken of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SheafFunctor {
    /// Cohomology sheaves of `j_{!*} HT(g, t, π, Π)[d-tg]`.
    JShriekStar,
    /// Cohomology sheaves of `Rj_* HT(g, t, π, Π)[d-tg]`.
    RjStar,
}

/// Cohomology sheaves, restricted to strata, of the shifted perverse
/// extensions. Degrees are measured on the `[d-tg]`-shifted object.
///
/// * `JShriekStar`: non-zero only when `i = tg - d + a(g-1)` with
///   `0 ≤ a ≤ s_g - t`; the stratum `(t+a)g` then carries
///   `HT(g, t+a, π, Π ⃗× [⃗(a-1)]) ⊗ Ξ^{a(g-1)/2}`. For `g = 1` every `a`
///   contributes in the single degree `t - d`.
/// * `RjStar`: sum over pairs `n, r ≥ 0` with `i = tg - d + ng + r(g-1)` and
///   `t + n + r ≤ s_g` of
///   `HT(g, t+n+r, π, (Π ⃖× [⃖(n-1)]) ⃗× [⃗(r-1)]) ⊗ Ξ^{(n(g+1)+r(g-1))/2}`.
///
/// Inadmissible degrees return the zero sum, not an error.
#[allow(clippy::too_many_arguments)]
pub fn cohomology_sheaves(
    base: &CuspidalDatum,
    d: u32,
    g: u32,
    t: u32,
    inducing: &VirtualRep,
    i: i64,
    functor: SheafFunctor,
) -> Result<VirtualSheaf> {
    let s_g = check_stratum(d, g, t)?;
    let offset = (t * g) as i64 - d as i64;
    let mut out = VirtualSheaf::zero();
    match functor {
        SheafFunctor::JShriekStar => {
            for a in 0..=(s_g - t) {
                if offset + (a * (g - 1)) as i64 != i {
                    continue;
                }
                let tail = speh_bracket(base, a as i64 - 1, BigRational::zero());
                let slot = product_with_unit(inducing, tail.as_ref(), ProductSide::Right)?;
                let twist = WeightTwist::xi_half((a * (g - 1)) as i64);
                out.add_induced(
                    SymbolKind::HtRestriction,
                    g,
                    t + a,
                    base,
                    &slot,
                    &twist,
                    d,
                    &BigInt::one(),
                )?;
            }
        }
        SheafFunctor::RjStar => {
            for n in 0..=(s_g - t) {
                for r in 0..=(s_g - t - n) {
                    if offset + (n * g) as i64 + (r * (g - 1)) as i64 != i {
                        continue;
                    }
                    let left_tail = steinberg_bracket(base, n as i64 - 1, BigRational::zero());
                    let inner = product_with_unit(inducing, left_tail.as_ref(), ProductSide::Left)?;
                    let right_tail = speh_bracket(base, r as i64 - 1, BigRational::zero());
                    let slot = product_with_unit(&inner, right_tail.as_ref(), ProductSide::Right)?;
                    let twist = WeightTwist::xi_half((n * (g + 1) + r * (g - 1)) as i64);
                    out.add_induced(
                        SymbolKind::HtRestriction,
                        g,
                        t + n + r,
                        base,
                        &slot,
                        &twist,
                        d,
                        &BigInt::one(),
                    )?;
                }
            }
        }
    }
    Ok(out)
}

/// Outcome of [`verify_main_identity`].
#[derive(Debug, Clone)]
pub struct MainIdentityReport {
    pub ok: bool,
    pub lhs: VirtualSheaf,
    pub rhs: VirtualSheaf,
    pub witness: Option<String>,
}

/// Substitute the telescoping into the nearby-cycle class and compare with
/// the monodromy-graded sum
/// `Σ_{k=1-s_g}^{s_g-1} Σ_{|k|<t≤s_g, t≡k-1(2)} j_{!*} HT(g, t, π, Sp_t)
///   ⊗ rec^∨(π)(-(tg+k-1)/2)`.
/// Inequality is reported, not raised.
pub fn verify_main_identity(base: &CuspidalDatum, d: u32, g: u32) -> Result<MainIdentityReport> {
    let lhs = substitute_jshriek(&rpsi_virtual(base, d, g)?)?;
    let s_g = depth(d, g);
    let mut rhs = VirtualSheaf::zero();
    for k in (1 - s_g as i64)..=(s_g as i64 - 1) {
        for (t, _) in mgr(s_g, k) {
            let word = ArrowWord::steinberg(base, t, BigRational::zero());
            let twist = WeightTwist::rec_half(-((t * g) as i64 + k - 1));
            rhs.add_induced(
                SymbolKind::Intermediate,
                g,
                t,
                base,
                &VirtualRep::from_word(&word),
                &twist,
                d,
                &BigInt::one(),
            )?;
        }
    }
    let witness = lhs.first_discrepancy(&rhs);
    Ok(MainIdentityReport {
        ok: witness.is_none(),
        lhs,
        rhs,
        witness,
    })
}

/// One factor of a local component: `Sp_t(π)` or `Speh_t(π)` with `π`
/// cuspidal of rank `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalBlock {
    pub t: u32,
    pub g: u32,
    pub kind: BlockKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Sp,
    Speh,
}

/// Admissibility of a local component written as an irreducible product of
/// Steinberg and Speh blocks: the block sizes must fill `d`, and
///
/// * if some Steinberg block has length `> 1`, every Speh length is odd;
/// * otherwise all Speh lengths share one parity.
///
/// Length-one blocks are cuspidal and count as Speh factors of length one.
pub fn local_component_admissible(d: u32, blocks: &[LocalBlock]) -> Result<bool> {
    if blocks.is_empty() {
        return Err(CalcError::Domain("empty block list".into()));
    }
    for b in blocks {
        if b.t == 0 || b.g == 0 {
            return Err(CalcError::Domain("block sizes must be positive".into()));
        }
    }
    let total: u32 = blocks.iter().map(|b| b.t * b.g).sum();
    if total != d {
        return Ok(false);
    }
    let has_steinberg = blocks
        .iter()
        .any(|b| b.kind == BlockKind::Sp && b.t > 1);
    let speh_lengths: Vec<u32> = blocks
        .iter()
        .filter(|b| b.kind == BlockKind::Speh || b.t == 1)
        .map(|b| b.t)
        .collect();
    if has_steinberg {
        Ok(speh_lengths.iter().all(|&t| t % 2 == 1))
    } else {
        Ok(speh_lengths.windows(2).all(|w| w[0] % 2 == w[1] % 2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> CuspidalDatum {
        CuspidalDatum::self_dual(2, "pi")
    }

    #[test]
    fn rpsi_depth_one_single_term() {
        let b = CuspidalDatum::self_dual(3, "pi");
        let v = rpsi_virtual(&b, 5, 3).unwrap(); // s_g = 1
        assert_eq!(v.len(), 1);
        let (sym, c) = v.terms().next().unwrap();
        assert!(c.is_one());
        assert_eq!(sym.kind, SymbolKind::JShriek);
        assert_eq!((sym.g, sym.t), (3, 1));
        // rec^∨(π)(-(g-1)/2)
        assert_eq!(sym.twist, WeightTwist::rec_half(-2));
    }

    #[test]
    fn rpsi_three_terms_with_signs() {
        let b = CuspidalDatum::self_dual(1, "chi");
        let v = rpsi_virtual(&b, 2, 1).unwrap();
        assert_eq!(v.len(), 3);
        let signs: Vec<BigInt> = v.terms().map(|(_, c)| c.clone()).collect();
        assert_eq!(signs.iter().filter(|c| c.is_one()).count(), 2);
        assert_eq!(signs.iter().filter(|c| **c == -BigInt::one()).count(), 1);
    }

    #[test]
    fn jshriek_on_deepest_stratum_is_intermediate() {
        let b = base();
        let d = 4; // g = 2, s_g = 2
        let sp2 = VirtualRep::from_word(&ArrowWord::steinberg(&b, 2, BigRational::zero()));
        let v = jshriek_to_intermediate(&b, d, 2, 2, &sp2).unwrap();
        assert_eq!(v.len(), 1);
        let (sym, _) = v.terms().next().unwrap();
        assert_eq!(sym.kind, SymbolKind::Intermediate);
        assert_eq!(sym.twist, WeightTwist::zero());
    }

    #[test]
    fn resolution_lists_the_corrections() {
        let b = base();
        let cusp = VirtualRep::from_word(&ArrowWord::cuspidal(&b, BigRational::zero()));
        let res = jshriek_resolution(&b, 8, 2, 1, &cusp).unwrap(); // s_g = 4
        assert_eq!(res.corrections.len(), 4); // three point summands + remainder
        assert!(matches!(res.corrections[3], Correction::Remainder { t: 1 }));
        let direct = jshriek_to_intermediate(&b, 8, 2, 1, &cusp).unwrap();
        assert_eq!(res.apply_vanishing(), direct);
    }

    #[test]
    fn jshriek_two_strata() {
        let b = base();
        let d = 4; // s_g = 2
        let cusp = VirtualRep::from_word(&ArrowWord::cuspidal(&b, BigRational::zero()));
        let v = jshriek_to_intermediate(&b, d, 2, 1, &cusp).unwrap();
        // j!* HT(2,1,cusp) + j!* HT(2,2,cusp ⃗× cusp) ⊗ Ξ^{(g-1)/2}
        assert_eq!(v.len(), 3); // the depth-2 slot has length two
        let deep = v.at_stratum(2);
        assert_eq!(deep.len(), 2);
        for (sym, _) in deep.terms() {
            assert_eq!(sym.twist, WeightTwist::xi_half(1));
        }
    }

    #[test]
    fn round_trip_alternating_then_substitute() {
        let b = base();
        for d in [4u32, 6, 8, 9] {
            let s_g = depth(d, 2);
            for t in 1..=s_g {
                let expanded = substitute_jshriek(&intermediate_alternating(&b, d, 2, t).unwrap())
                    .unwrap();
                let mut expected = VirtualSheaf::zero();
                expected
                    .add_induced(
                        SymbolKind::Intermediate,
                        2,
                        t,
                        &b,
                        &VirtualRep::from_word(&ArrowWord::steinberg(
                            &b,
                            t,
                            BigRational::zero(),
                        )),
                        &WeightTwist::rec_half(0),
                        d,
                        &BigInt::one(),
                    )
                    .unwrap();
                assert_eq!(expanded, expected, "round trip failed at d={d}, t={t}");
            }
        }
    }

    #[test]
    fn alternating_expansion_gap_one() {
        // s_g - t = 1: two terms with signs +, -
        let b = base();
        let v = intermediate_alternating(&b, 4, 2, 1).unwrap();
        let coeffs: Vec<(u32, BigInt)> = v.terms().map(|(sym, c)| (sym.t, c.clone())).collect();
        assert_eq!(coeffs.len(), 3); // the r = 1 slot has length two
        assert!(coeffs.iter().all(|(t, _)| *t == 1 || *t == 2));
        let at1: Vec<&BigInt> = coeffs.iter().filter(|(t, _)| *t == 1).map(|(_, c)| c).collect();
        assert!(at1.iter().all(|c| c.is_one()));
        let at2: Vec<&BigInt> = coeffs.iter().filter(|(t, _)| *t == 2).map(|(_, c)| c).collect();
        assert!(at2.iter().all(|c| **c == -BigInt::one()));
    }

    #[test]
    fn mgr_table() {
        // s = 4, k = 0: strata 1 and 3
        let rows = mgr(4, 0);
        assert_eq!(rows.iter().map(|(t, _)| *t).collect::<Vec<_>>(), vec![1, 3]);
        // |k| ≥ s is empty
        assert!(mgr(4, 4).is_empty());
        assert!(mgr(4, -5).is_empty());
        // s = 4, k = 3: single stratum 4 with twist -3
        let rows = mgr(4, 3);
        assert_eq!(rows, vec![(4, WeightTwist::rec_half(-6))]);
    }

    #[test]
    fn mgr_n_symmetry() {
        for s in 1..=10u32 {
            for k in 1..s as i64 {
                let plus = mgr(s, k);
                let minus = mgr(s, -k);
                assert_eq!(plus.len(), minus.len());
                for ((t1, w1), (t2, w2)) in plus.iter().zip(minus.iter()) {
                    assert_eq!(t1, t2);
                    // twists differ by exactly k on the tate axis
                    assert_eq!(w1.tate() + BigRational::from(BigInt::from(k)), *w2.tate());
                }
            }
        }
    }

    #[test]
    fn main_identity_depth_one() {
        let b = CuspidalDatum::self_dual(4, "pi");
        let rep = verify_main_identity(&b, 4, 4).unwrap();
        assert!(rep.ok, "witness: {:?}", rep.witness);
    }

    #[test]
    fn main_identity_depth_two_by_hand() {
        let rep = verify_main_identity(&CuspidalDatum::self_dual(1, "chi"), 2, 1).unwrap();
        assert!(rep.ok, "witness: {:?}", rep.witness);
    }

    #[test]
    fn cohomology_sheaves_top_degree_is_identity() {
        let b = base();
        let d = 8;
        let sp = VirtualRep::from_word(&ArrowWord::steinberg(&b, 2, BigRational::zero()));
        let v = cohomology_sheaves(&b, d, 2, 2, &sp, (2 * 2) as i64 - 8, SheafFunctor::JShriekStar)
            .unwrap();
        assert_eq!(v.len(), 1);
        let (sym, _) = v.terms().next().unwrap();
        assert_eq!(sym.t, 2);
        assert_eq!(sym.twist, WeightTwist::zero());
    }

    #[test]
    fn cohomology_sheaves_off_grid_is_zero() {
        let b = base();
        let sp = VirtualRep::from_word(&ArrowWord::steinberg(&b, 2, BigRational::zero()));
        let v = cohomology_sheaves(&b, 8, 2, 2, &sp, 17, SheafFunctor::JShriekStar).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn cohomology_sheaves_high_rank_example() {
        // g = 6, d = 24, t = 1: degree -13 carries the stratum-2 restriction
        // HT(6, 2, π, cusp ⃗× cusp) ⊗ Ξ^{5/2}
        let b = CuspidalDatum::self_dual(6, "pi");
        let cusp = VirtualRep::from_word(&ArrowWord::cuspidal(&b, BigRational::zero()));
        let v = cohomology_sheaves(&b, 24, 6, 1, &cusp, -13, SheafFunctor::JShriekStar).unwrap();
        assert_eq!(v.len(), 2);
        for (sym, c) in v.terms() {
            assert!(c.is_one());
            assert_eq!(sym.t, 2);
            assert_eq!(sym.twist, WeightTwist::xi_half(5));
            assert_eq!(sym.word.points(), 2);
        }
    }

    #[test]
    fn domain_errors() {
        let b = base();
        assert!(matches!(rpsi_virtual(&b, 4, 5), Err(CalcError::Domain(_))));
        assert!(matches!(
            jshriek_to_intermediate(&b, 4, 2, 3, &VirtualRep::zero()),
            Err(CalcError::Domain(_))
        ));
    }

    #[test]
    fn admissibility_examples() {
        use BlockKind::*;
        let b = |t, g, kind| LocalBlock { t, g, kind };
        assert!(local_component_admissible(4, &[b(4, 1, Sp)]).unwrap());
        assert!(!local_component_admissible(4, &[b(2, 1, Speh), b(2, 1, Sp)]).unwrap());
        assert!(local_component_admissible(6, &[b(3, 1, Sp), b(3, 1, Sp)]).unwrap());
        // sizes must fill d
        assert!(!local_component_admissible(5, &[b(4, 1, Sp)]).unwrap());
        // no Steinberg factor: Speh lengths share a parity
        assert!(local_component_admissible(6, &[b(3, 1, Speh), b(3, 1, Speh)]).unwrap());
        assert!(!local_component_admissible(5, &[b(3, 1, Speh), b(2, 1, Speh)]).unwrap());
        assert!(matches!(
            local_component_admissible(4, &[]),
            Err(CalcError::Domain(_))
        ));
    }
}
