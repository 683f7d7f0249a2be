//! Spectral-sequence pages and cohomology tables.
//!
//! Local side: the complex `ML^•(s)` (zero differentials), the bicomplex
//! pages `MLE_r(s)` with the page-one differentials induced by the short
//! exact sequences `0 → [⃖(t-1), ⃗(s-t)] → [⃖(t-1)] ⃗× [⃗(s-t-1)] →
//! [⃖t, ⃗(s-t-1)] → 0`, and the degeneration of the page-one homology onto
//! the second page. Global side: the stratumwise assembly `MGE_r`, the full
//! vanishing-cycle spectral sequences for Steinberg and Speh components with
//! their abutments, and the recapitulative cohomology tables.
//!
//! Page coordinates are kept in one fixed frame throughout: the page-one
//! frame with rows `j = 1-s+2ρ`. Later pages are translated into it (the
//! published form of the second page uses the reflected row index
//! `ρ ↦ s-1-ρ`, which also flips the sign of the written twist; the
//! degeneration check asserts that the two readings agree cell by cell).
//!
//! A differential is non-zero exactly when the cosocle of its source cell
//! equals the socle of its target cell; passing to the next page removes
//! that shared constituent from both. This single rule drives every
//! spectral sequence in the crate.

use crate::error::CalcError;
use crate::groth::{product_with_unit, VirtualRep};
use crate::segment::{
    hook_word, junction_pair, speh_bracket, steinberg_bracket, ArrowWord, CuspidalDatum,
    ProductSide,
};
use crate::sheaf::{self, SheafSymbol, SymbolKind, VirtualSheaf};
use crate::twist::WeightTwist;
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// A non-zero differential between two cells, with the constituent it
/// cancels. `stratum` tags the layer for assembled (sheaf-valued) pages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Differential {
    pub from: (i64, i64),
    pub to: (i64, i64),
    pub stratum: Option<u32>,
    pub shared: (ArrowWord, WeightTwist),
}

/// A sparse spectral-sequence page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsPage<E> {
    pub page: u32,
    pub cells: BTreeMap<(i64, i64), E>,
    pub differentials: Vec<Differential>,
}

impl<E> SsPage<E> {
    pub fn new(page: u32) -> Self {
        SsPage {
            page,
            cells: BTreeMap::new(),
            differentials: Vec::new(),
        }
    }
}

/// The complex with zero differentials whose degree-`k` entry is
/// `[⃖k, ⃗(s-1-k)] ⊗ |Art^{-1}|^{(s-1-2k)/2}` for `0 ≤ k < s`, together
/// with the global factor `rec^∨(π)((1-sg)/2)`. Degree `k` sits in
/// cohomological degree `d-s+k` of the model it computes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MlComplex {
    pub entries: Vec<(ArrowWord, WeightTwist)>,
    pub global: WeightTwist,
}

pub fn ml_complex(base: &CuspidalDatum, s: u32) -> Result<MlComplex> {
    if s == 0 {
        return Err(CalcError::Domain("ml complex needs s ≥ 1".into()));
    }
    let g = base.rank();
    let entries = (0..s)
        .map(|k| {
            let word = hook_word(base, k as i64, (s - 1 - k) as i64, BigRational::zero())?;
            Ok((word, WeightTwist::art_half((s as i64) - 1 - 2 * k as i64)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MlComplex {
        entries,
        global: WeightTwist::rec_half(1 - (s * g) as i64),
    })
}

/// `𝒰^{d-s+i}`: the word `[⃖i, ⃗(s-i-1)]` twisted by
/// `rec^∨(π)(-(d-s+2i)/2)` for `0 ≤ i < s`, zero outside that range.
/// Requires `d = s·g` with `g` the rank of the base.
pub fn u_cohomology(
    base: &CuspidalDatum,
    d: u32,
    s: u32,
    i: i64,
) -> Result<Option<(ArrowWord, WeightTwist)>> {
    if s == 0 || d != s * base.rank() {
        return Err(CalcError::Domain(format!(
            "need d = s·g, got d = {d}, s = {s}, g = {}",
            base.rank()
        )));
    }
    if i < 0 || i >= s as i64 {
        return Ok(None);
    }
    let word = hook_word(base, i, s as i64 - i - 1, BigRational::zero())?;
    let twist = WeightTwist::rec_half(-((d as i64) - (s as i64) + 2 * i));
    Ok(Some((word, twist)))
}

/// Compare the alternating sum `Σ_i (-1)^i [𝒰^{d-1-i}]` with the closed
/// alternating formula `Σ_{i=1}^{s} (-1)^i [⃖(s-1-i), ⃗i] ⊗
/// rec^∨(π)(-(d+s-2-2i)/2)`. The boundary term `i = s` involves the
/// out-of-range symbol `[⃖(-1), ⃗s]`, which the reflection convention
/// `[⃖(-1), ⃗s] ⊗ rec(x) = (-1)^s Sp_s ⊗ rec(x - s)` folds back onto the
/// Steinberg term. Returns the first discrepancy, if any.
pub fn euler_consistency(base: &CuspidalDatum, d: u32, s: u32) -> Result<Option<String>> {
    let mut lhs = VirtualRep::zero();
    for i in 0..d as i64 {
        // the degree d-1-i sits at window index s-1-i of the table
        if let Some((word, twist)) = u_cohomology(base, d, s, s as i64 - 1 - i)? {
            let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            lhs.add_term(&word, &twist, sign);
        }
    }
    let mut rhs = VirtualRep::zero();
    for i in 1..=s as i64 {
        let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        if i < s as i64 {
            let word = hook_word(base, s as i64 - 1 - i, i, BigRational::zero())?;
            let twist = WeightTwist::rec_half(-((d + s) as i64 - 2 - 2 * i));
            rhs.add_term(&word, &twist, sign);
        } else {
            // reflected boundary term: (-1)^s · (-1)^s Sp_s ⊗ rec(-(d+s-2)/2)
            let word = ArrowWord::steinberg(base, s, BigRational::zero());
            let twist = WeightTwist::rec_half(-((d + s) as i64 - 2));
            rhs.add_term(&word, &twist, BigInt::one());
        }
    }
    Ok(lhs.first_discrepancy(&rhs))
}

/// The page-`r` bicomplex of the local monodromy filtration, in the
/// page-one frame.
///
/// Page one is supported on rows `j = 1-s+2ρ`, `0 ≤ ρ < s`, with cells at
/// `i = s-1-2ρ-k` for `0 ≤ k ≤ s-1-ρ` carrying
/// `[⃖(s-1-k)] ⃗× [⃗(k-1)] ⊗ |Art^{-1}|^{(s-1-2ρ)/2}` (the `k = 0` cell is
/// the single word `[⃖(s-1)]`). Pages `r ≥ 2` coincide and are supported on
/// the single diagonal of cells `(-ρ, 1-s+2ρ)` with entries
/// `[⃖ρ, ⃗(s-1-ρ)] ⊗ |Art^{-1}|^{(s-1-2ρ)/2}`.
pub fn mle_page(base: &CuspidalDatum, s: u32, r: u32) -> Result<SsPage<VirtualRep>> {
    if s == 0 || r == 0 {
        return Err(CalcError::Domain("mle page needs s ≥ 1 and r ≥ 1".into()));
    }
    let si = s as i64;
    let mut page = SsPage::new(r);
    if r == 1 {
        for rho in 0..si {
            let j = 1 - si + 2 * rho;
            let twist = WeightTwist::art_half(si - 1 - 2 * rho);
            for k in 0..=(si - 1 - rho) {
                let i = si - 1 - 2 * rho - k;
                let head = ArrowWord::steinberg(base, (si - k) as u32, BigRational::zero());
                let tail = speh_bracket(base, k - 1, BigRational::zero());
                let entry = product_with_unit(
                    &VirtualRep::from_word(&head),
                    tail.as_ref(),
                    ProductSide::Right,
                )?
                .twisted(&twist)?;
                page.cells.insert((i, j), entry);
                if k >= 1 {
                    // the shared constituent of d₁: cell(k) → cell(k-1)
                    let shared = hook_word(base, si - k, k - 1, BigRational::zero())?;
                    page.differentials.push(Differential {
                        from: (i, j),
                        to: (i + 1, j),
                        stratum: None,
                        shared: (shared, twist.clone()),
                    });
                }
            }
        }
    } else {
        for rho in 0..si {
            let word = hook_word(base, rho, si - 1 - rho, BigRational::zero())?;
            let twist = WeightTwist::art_half(si - 1 - 2 * rho);
            page.cells.insert(
                (-rho, 1 - si + 2 * rho),
                VirtualRep::from_term(&word, &twist, BigInt::one()),
            );
        }
    }
    Ok(page)
}

/// Two consecutive differentials compose to zero exactly when they do not
/// move the same constituent through the middle cell. Returns the first
/// violating pair.
pub fn differentials_compose_to_zero(page: &SsPage<VirtualRep>) -> Option<String> {
    for d1 in &page.differentials {
        for d2 in &page.differentials {
            if d1.to == d2.from && d1.shared == d2.shared {
                return Some(format!(
                    "maps {:?} → {:?} → {:?} both move [{}]⊗{}",
                    d1.from,
                    d1.to,
                    d2.to,
                    d1.shared.0.runs_text(),
                    d1.shared.1
                ));
            }
        }
    }
    None
}

/// Homology of a representation-valued page: each differential removes its
/// shared constituent from both endpoint cells.
pub fn page_homology(page: &SsPage<VirtualRep>) -> BTreeMap<(i64, i64), VirtualRep> {
    let mut cells = page.cells.clone();
    for d in &page.differentials {
        let (word, twist) = &d.shared;
        for pos in [d.from, d.to] {
            if let Some(cell) = cells.get_mut(&pos) {
                cell.add_term(word, twist, -BigInt::one());
            }
        }
    }
    cells.retain(|_, v| !v.is_zero());
    cells
}

/// Degeneration report for the local pages: page-one homology must
/// reproduce page two, the published reflected form of page two must
/// translate to the same cells, no later differential fits the surviving
/// positions, and each row of page one has the alternating-sum (Euler)
/// value predicted by its surviving cell. Returns the first failure.
pub fn mle_degeneration(base: &CuspidalDatum, s: u32) -> Result<Option<String>> {
    let p1 = mle_page(base, s, 1)?;
    let p2 = mle_page(base, s, 2)?;
    if let Some(w) = differentials_compose_to_zero(&p1) {
        return Ok(Some(w));
    }
    let homology = page_homology(&p1);
    if homology != p2.cells {
        for (pos, cell) in &homology {
            match p2.cells.get(pos) {
                None => return Ok(Some(format!("unexpected survivor at {pos:?}: {cell}"))),
                Some(expected) if expected != cell => {
                    return Ok(Some(format!(
                        "survivor at {pos:?} is {cell}, expected {expected}"
                    )))
                }
                _ => {}
            }
        }
        for pos in p2.cells.keys() {
            if !homology.contains_key(pos) {
                return Ok(Some(format!("missing survivor at {pos:?}")));
            }
        }
    }
    // reflected published form of page two: ρ' = s-1-ρ, written at
    // (1-s+ρ', s-1-2ρ') with twist -(s-1-2ρ')/2
    let si = s as i64;
    for rho_p in 0..si {
        let pos = (1 - si + rho_p, si - 1 - 2 * rho_p);
        let word = hook_word(base, si - 1 - rho_p, rho_p, BigRational::zero())?;
        let twist = WeightTwist::art_half(-(si - 1 - 2 * rho_p));
        let expected = VirtualRep::from_term(&word, &twist, BigInt::one());
        match p2.cells.get(&pos) {
            Some(cell) if *cell == expected => {}
            other => {
                return Ok(Some(format!(
                    "reflected form mismatch at {pos:?}: page two has {other:?}, reflected reading gives {expected}"
                )))
            }
        }
    }
    // no d_r with r ≥ 2 connects two surviving positions
    for r in 2..=(2 * si) {
        for &(i, j) in p2.cells.keys() {
            let target = (i + r, j - r + 1);
            if p2.cells.contains_key(&target) {
                return Ok(Some(format!(
                    "positions {:?} → {target:?} admit a d_{r}",
                    (i, j)
                )));
            }
        }
    }
    // row Euler characteristic: Σ_k (-1)^i cell(i, j) = (-1)^{i_surv} · survivor
    for rho in 0..si {
        let j = 1 - si + 2 * rho;
        let mut sum = VirtualRep::zero();
        for (&(i, jj), cell) in &p1.cells {
            if jj != j {
                continue;
            }
            let sign = if i.rem_euclid(2) == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            sum.add(&cell.scaled(&sign));
        }
        let surv_pos = (-rho, j);
        let mut expected = p2.cells[&surv_pos].clone();
        if surv_pos.0.rem_euclid(2) == 1 {
            expected = expected.negated();
        }
        if let Some(w) = sum.first_discrepancy(&expected) {
            return Ok(Some(format!("row j = {j} Euler mismatch: {w}")));
        }
    }
    Ok(None)
}

/// The assembled page `MGE_r = ⊕_t j_! F(g, t, π)[d-tg] ⊗ MLE_r(t)`, with
/// each stratum-`t` layer carrying the rescaled twist
/// `tate(x) ↦ rec^∨(π)(x + (1-tg)/2)` on the cell twist `x`.
pub fn mge_page(base: &CuspidalDatum, d: u32, g: u32, r: u32) -> Result<SsPage<VirtualSheaf>> {
    if g == 0 || g > d {
        return Err(CalcError::Domain(format!("rank g = {g} outside 1..={d}")));
    }
    let s_g = sheaf::depth(d, g);
    let mut page = SsPage::new(r);
    for t in 1..=s_g {
        let local = mle_page(base, t, r)?;
        let shift = BigRational::new(BigInt::from(1 - (t * g) as i64), BigInt::from(2));
        for (&pos, cell) in &local.cells {
            let entry = page.cells.entry(pos).or_insert_with(VirtualSheaf::zero);
            for ((word, twist), coeff) in cell.terms() {
                let scaled = WeightTwist::rec_half(0).shifted(&(twist.tate() + &shift));
                entry.add_symbol(
                    SheafSymbol {
                        kind: SymbolKind::JShriek,
                        g,
                        t,
                        base: base.clone(),
                        word: word.clone(),
                        twist: scaled,
                        ambient: d,
                    },
                    coeff.clone(),
                );
            }
        }
        for diff in &local.differentials {
            let (word, twist) = &diff.shared;
            page.differentials.push(Differential {
                from: diff.from,
                to: diff.to,
                stratum: Some(t),
                shared: (
                    word.clone(),
                    WeightTwist::rec_half(0).shifted(&(twist.tate() + &shift)),
                ),
            });
        }
    }
    Ok(page)
}

/// Cross-check of the assembled first page against the stratified
/// cohomology sheaves: rebuilding every cell from
/// `cohomology_sheaves(g, t, Sp_t, ·)` twisted by `rec^∨(π)(-(tg-1+k)/2)`
/// must reproduce [`mge_page`] exactly. Returns the first discrepancy.
pub fn mge_consistency(base: &CuspidalDatum, d: u32, g: u32) -> Result<Option<String>> {
    let assembled = mge_page(base, d, g, 1)?;
    let s_g = sheaf::depth(d, g);
    let mut rebuilt: BTreeMap<(i64, i64), VirtualSheaf> = BTreeMap::new();
    for k in (1 - s_g as i64)..=(s_g as i64 - 1) {
        for (t, _) in sheaf::mgr(s_g, k) {
            let sp = VirtualRep::from_word(&ArrowWord::steinberg(base, t, BigRational::zero()));
            for a in 0..=(s_g - t) as i64 {
                let degree = (t * g) as i64 - d as i64 + a * (g as i64 - 1);
                let piece = sheaf::cohomology_sheaves(
                    base,
                    d,
                    g,
                    t,
                    &sp,
                    degree,
                    sheaf::SheafFunctor::JShriekStar,
                )?;
                let twist = WeightTwist::rec_half(-((t * g) as i64 - 1 + k));
                let pos = (-k, k - a);
                let entry = rebuilt.entry(pos).or_insert_with(VirtualSheaf::zero);
                for (sym, coeff) in piece.terms() {
                    if sym.t != t + a as u32 {
                        continue;
                    }
                    let mut sym = sym.clone();
                    sym.kind = SymbolKind::JShriek;
                    sym.twist = sym.twist.compose(&twist)?;
                    entry.add_symbol(sym, coeff.clone());
                }
            }
        }
    }
    rebuilt.retain(|_, v| !v.is_zero());
    let mut lhs = assembled.cells.clone();
    lhs.retain(|_, v| !v.is_zero());
    if lhs == rebuilt {
        return Ok(None);
    }
    for (pos, cell) in &lhs {
        match rebuilt.get(pos) {
            None => return Ok(Some(format!("cell {pos:?} missing from the rebuilt page"))),
            Some(other) => {
                if let Some(w) = cell.first_discrepancy(other) {
                    return Ok(Some(format!("cell {pos:?}: {w}")));
                }
            }
        }
    }
    Ok(Some("rebuilt page has extra cells".into()))
}

/// Which local component the global spectral sequence is taken for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalCase {
    Sp,
    Speh,
}

/// A global vanishing-cycle spectral sequence: the starting page with its
/// shared-constituent differentials, and the abutment by total degree.
#[derive(Debug, Clone)]
pub struct GlobalSs {
    pub case: LocalCase,
    pub page: SsPage<VirtualRep>,
    pub abutment: BTreeMap<i64, VirtualRep>,
}

/// Build the global spectral sequence for `Π_v` of Steinberg or Speh type.
/// Requires `d = s·g` with `g` the rank of the base.
///
/// * Steinberg: cells `(d-tg, tg-r)` for `1 ≤ r ≤ t ≤ s` carrying
///   `[⃖(t-r), ⃗(r-1)] ⃗× [⃖(s-t-1)] ⊗ rec^∨(π)(-(s(g-1)+2(t-r))/2)`;
///   abutment concentrated in degree `d-1`:
///   `Sp_s ⊗ rec^∨(Sp_s(π))(-(sg-1)/2)`.
/// * Speh: cells `((s-t)(g+1), tg-r)` carrying
///   `[⃖(t-r), ⃗(r-1)] ⃖× [⃗(s-t-1)] ⊗ rec^∨(π)(-(s(g+1)-2r)/2)`;
///   abutment `Speh_s ⊗ rec^∨(π)(-(d+s-2-2i)/2)` in degrees `d+s-2-2i`,
///   `0 ≤ i < s`.
pub fn global_ss(base: &CuspidalDatum, d: u32, g: u32, case: LocalCase) -> Result<GlobalSs> {
    if g == 0 || d == 0 || d % g != 0 || base.rank() != g {
        return Err(CalcError::Domain(format!(
            "need d = s·g with a rank-{g} base, got d = {d}"
        )));
    }
    let s = d / g;
    let (si, gi) = (s as i64, g as i64);
    let mut page = SsPage::new(2);
    for t in 1..=si {
        for r in 1..=t {
            let head = hook_word(base, t - r, r - 1, BigRational::zero())?;
            let (pos, entry) = match case {
                LocalCase::Sp => {
                    let tail = steinberg_bracket(base, si - t - 1, BigRational::zero());
                    let twist = WeightTwist::rec_half(-(si * (gi - 1) + 2 * (t - r)));
                    let entry = product_with_unit(
                        &VirtualRep::from_word(&head),
                        tail.as_ref(),
                        ProductSide::Right,
                    )?
                    .twisted(&twist)?;
                    ((d as i64 - t * gi, t * gi - r), entry)
                }
                LocalCase::Speh => {
                    let tail = speh_bracket(base, si - t - 1, BigRational::zero());
                    let twist = WeightTwist::rec_half(-(si * (gi + 1) - 2 * r));
                    let entry = product_with_unit(
                        &VirtualRep::from_word(&head),
                        tail.as_ref(),
                        ProductSide::Left,
                    )?
                    .twisted(&twist)?;
                    (((si - t) * (gi + 1), t * gi - r), entry)
                }
            };
            page.cells.insert(pos, entry);
        }
    }
    // differentials: cosocle of the source equals the socle of the target
    match case {
        LocalCase::Sp => {
            for t in 1..=si - 1 {
                for r in 1..=t {
                    let from = (d as i64 - (t + 1) * gi, (t + 1) * gi - (r + 1));
                    let to = (d as i64 - t * gi, t * gi - r);
                    let shared = hook_shared_sp(base, si, t, r)?;
                    let twist = WeightTwist::rec_half(-(si * (gi - 1) + 2 * (t - r)));
                    page.differentials.push(Differential {
                        from,
                        to,
                        stratum: None,
                        shared: (shared, twist),
                    });
                }
            }
        }
        LocalCase::Speh => {
            for t in 2..=si {
                for r in 1..=t - 1 {
                    let from = ((si - t) * (gi + 1), t * gi - r);
                    let to = ((si - t + 1) * (gi + 1), (t - 1) * gi - r);
                    let shared = hook_shared_speh(base, si, t, r)?;
                    let twist = WeightTwist::rec_half(-(si * (gi + 1) - 2 * r));
                    page.differentials.push(Differential {
                        from,
                        to,
                        stratum: None,
                        shared: (shared, twist),
                    });
                }
            }
        }
    }
    let mut abutment = BTreeMap::new();
    match case {
        LocalCase::Sp => {
            let word = ArrowWord::steinberg(base, s, BigRational::zero());
            let twist = WeightTwist::rec_steinberg_half(s, -(si * gi - 1));
            abutment.insert(
                d as i64 - 1,
                VirtualRep::from_term(&word, &twist, BigInt::one()),
            );
        }
        LocalCase::Speh => {
            let word = ArrowWord::speh(base, s, BigRational::zero());
            for i in 0..si {
                let deg = d as i64 + si - 2 - 2 * i;
                let twist = WeightTwist::rec_half(-deg);
                abutment.insert(deg, VirtualRep::from_term(&word, &twist, BigInt::one()));
            }
        }
    }
    Ok(GlobalSs {
        case,
        page,
        abutment,
    })
}

// socle of the Steinberg-case target cell (t, r):
// [⃖(t-r), ⃗(r-1)] · RIGHT · [⃖(s-t-1)]
fn hook_shared_sp(base: &CuspidalDatum, s: i64, t: i64, r: i64) -> Result<ArrowWord> {
    let head = hook_word(base, t - r, r - 1, BigRational::zero())?;
    let tail = steinberg_bracket(base, s - t - 1, BigRational::zero())
        .ok_or_else(|| CalcError::Domain("shared constituent needs t < s".into()))?;
    Ok(junction_pair(&head, &tail, ProductSide::Right)?.socle)
}

// cosocle of the Speh-case source cell (t, r):
// [⃗(s-t-1)] · RIGHT · [⃖(t-r), ⃗(r-1)]
fn hook_shared_speh(base: &CuspidalDatum, s: i64, t: i64, r: i64) -> Result<ArrowWord> {
    let head = hook_word(base, t - r, r - 1, BigRational::zero())?;
    match speh_bracket(base, s - t - 1, BigRational::zero()) {
        Some(tail) => Ok(junction_pair(&head, &tail, ProductSide::Left)?.cosocle),
        // supersingular source: the single word is its own cosocle
        None => Ok(head),
    }
}

/// Verify that the page homology of [`global_ss`] matches the
/// (semisimplified) abutment degree by degree. Returns the first failure.
pub fn global_ss_check(base: &CuspidalDatum, d: u32, g: u32, case: LocalCase) -> Result<Option<String>> {
    let gss = global_ss(base, d, g, case)?;
    if let Some(w) = differentials_compose_to_zero(&gss.page) {
        return Ok(Some(w));
    }
    let homology = page_homology(&gss.page);
    let mut by_degree: BTreeMap<i64, VirtualRep> = BTreeMap::new();
    for (&(p, q), cell) in &homology {
        by_degree
            .entry(p + q)
            .or_insert_with(VirtualRep::zero)
            .add(cell);
    }
    by_degree.retain(|_, v| !v.is_zero());
    let mut expected: BTreeMap<i64, VirtualRep> = BTreeMap::new();
    for (&deg, cell) in &gss.abutment {
        let ss = cell.semisimplified();
        if !ss.is_zero() {
            expected.insert(deg, ss);
        }
    }
    if by_degree == expected {
        return Ok(None);
    }
    for (deg, cell) in &by_degree {
        match expected.get(deg) {
            None => {
                return Ok(Some(format!(
                    "degree {deg} survives but the abutment is zero there: {cell}"
                )))
            }
            Some(exp) => {
                if let Some(w) = cell.first_discrepancy(exp) {
                    return Ok(Some(format!("degree {deg}: {w}")));
                }
            }
        }
    }
    Ok(Some("abutment has degrees the homology misses".into()))
}

/// Euler-characteristic conservation: the alternating sum of the starting
/// page by total degree equals the alternating sum of the semisimplified
/// abutment. Returns the first discrepancy.
pub fn euler_conservation(gss: &GlobalSs) -> Option<String> {
    let mut lhs = VirtualRep::zero();
    for (&(p, q), cell) in &gss.page.cells {
        let sign = if (p + q).rem_euclid(2) == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        lhs.add(&cell.scaled(&sign));
    }
    let mut rhs = VirtualRep::zero();
    for (&deg, cell) in &gss.abutment {
        let sign = if deg.rem_euclid(2) == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        rhs.add(&cell.semisimplified().scaled(&sign));
    }
    lhs.first_discrepancy(&rhs)
}

/// The positional argument that the stratified spectral sequences
/// degenerate at once: a differential would need
/// `1 = 3g·Δt` (Steinberg case) or `1 = (3g+1)·Δt` (Speh case) for a
/// non-zero integer `Δt`, which has no solution.
pub fn stratification_degenerates(g: u32, s: u32, case: LocalCase) -> bool {
    let factor = match case {
        LocalCase::Sp => 3 * g as i64,
        LocalCase::Speh => 3 * g as i64 + 1,
    };
    for t1 in 1..=s as i64 {
        for t2 in 1..=s as i64 {
            if t1 != t2 && factor * (t2 - t1) == 1 {
                return false;
            }
        }
    }
    true
}

/// Which functor the recapitulative table is taken of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFunctor {
    JShriek,
    JShriekStar,
    RjStar,
}

/// Cohomology tables for the perverse extensions of
/// `HT(g, t, π, Sp_t)[d-tg]` against a Steinberg or Speh component of
/// height `s`; the map sends a degree to the virtual representation in it.
///
/// * Steinberg: `j_{!*}` is zero everywhere; `j_!` is concentrated in
///   degree 0 with `Sp_t ⃗× [⃖(s-t-1)] ⊗ Ξ^{(s-t)(g-1)/2}`; `Rj_*` is
///   concentrated in degree 0 with `Sp_t ⃖× [⃖(s-t-1)] ⊗ Ξ^{(s-t)(g+1)/2}`.
/// * Speh: `j_{!*}` is supported on `|i| ≤ s-t`, `i ≡ s-t (mod 2)`, with
///   `(Sp_t ⃗× [⃗((s-t-i)/2-1)]) ⃖× [⃗((s-t+i)/2-1)] ⊗ Ξ^{((s-t)g+i)/2}`;
///   `j_!` is concentrated in degree `s-t` and `Rj_*` in degree 0, both
///   with `Sp_t ⃖× [⃖(s-t-1)] ⊗ Ξ^{(s-t)(g+1)/2}`.
pub fn cohomology_table(
    base: &CuspidalDatum,
    case: LocalCase,
    t: u32,
    s: u32,
    functor: TableFunctor,
) -> Result<BTreeMap<i64, VirtualRep>> {
    if t == 0 || t > s {
        return Err(CalcError::Domain(format!("need 1 ≤ t ≤ s, got t = {t}, s = {s}")));
    }
    let g = base.rank() as i64;
    let (si, ti) = (s as i64, t as i64);
    let sp_t = VirtualRep::from_word(&ArrowWord::steinberg(base, t, BigRational::zero()));
    let mut table = BTreeMap::new();
    match (case, functor) {
        (LocalCase::Sp, TableFunctor::JShriekStar) => {}
        (LocalCase::Sp, TableFunctor::JShriek) => {
            let tail = steinberg_bracket(base, si - ti - 1, BigRational::zero());
            let entry = product_with_unit(&sp_t, tail.as_ref(), ProductSide::Right)?
                .twisted(&WeightTwist::xi_half((si - ti) * (g - 1)))?;
            table.insert(0, entry);
        }
        (LocalCase::Sp, TableFunctor::RjStar) | (LocalCase::Speh, TableFunctor::RjStar) => {
            let tail = steinberg_bracket(base, si - ti - 1, BigRational::zero());
            let entry = product_with_unit(&sp_t, tail.as_ref(), ProductSide::Left)?
                .twisted(&WeightTwist::xi_half((si - ti) * (g + 1)))?;
            table.insert(0, entry);
        }
        (LocalCase::Speh, TableFunctor::JShriek) => {
            let tail = steinberg_bracket(base, si - ti - 1, BigRational::zero());
            let entry = product_with_unit(&sp_t, tail.as_ref(), ProductSide::Left)?
                .twisted(&WeightTwist::xi_half((si - ti) * (g + 1)))?;
            table.insert(si - ti, entry);
        }
        (LocalCase::Speh, TableFunctor::JShriekStar) => {
            let mut i = ti - si;
            while i <= si - ti {
                let x = (si - ti - i) / 2;
                let y = (si - ti + i) / 2;
                let left_tail = speh_bracket(base, x - 1, BigRational::zero());
                let inner = product_with_unit(&sp_t, left_tail.as_ref(), ProductSide::Right)?;
                let right_tail = speh_bracket(base, y - 1, BigRational::zero());
                let entry = product_with_unit(&inner, right_tail.as_ref(), ProductSide::Left)?
                    .twisted(&WeightTwist::xi_half((si - ti) * g + i))?;
                table.insert(i, entry);
                i += 2;
            }
        }
    }
    Ok(table)
}

/// Map a table through the formal Verdier rule: every word is reversed in
/// slot order and the `Ξ`-exponent family `(g-1)` is replaced by `(g+1)`
/// (or, for the Speh self-pairing, the exponent `(s-t)g + i` is reflected
/// to `(s-t)g - i`). The checks below compare independently built tables.
fn reversed_words(v: &VirtualRep, twist: &WeightTwist) -> Result<VirtualRep> {
    let mut out = VirtualRep::zero();
    for ((word, t), c) in v.terms() {
        if *t != *twist {
            // all terms of a table entry share the cell twist
            return Err(CalcError::Domain("table entry with mixed twists".into()));
        }
        let mut runs: Vec<(i64, crate::segment::Direction)> = word
            .runs()
            .iter()
            .map(|&(a, d)| (a as i64, d))
            .collect();
        runs.reverse();
        let rev = ArrowWord::from_runs(word.base(), word.center().clone(), &runs)?;
        out.add_term(&rev, &WeightTwist::zero(), c.clone());
    }
    Ok(out)
}

/// Check `Rj_*`-table = Verdier image of the `j_!`-table (Steinberg case).
pub fn verdier_sp_tables(base: &CuspidalDatum, t: u32, s: u32) -> Result<Option<String>> {
    let g = base.rank() as i64;
    let (si, ti) = (s as i64, t as i64);
    let shriek = cohomology_table(base, LocalCase::Sp, t, s, TableFunctor::JShriek)?;
    let star = cohomology_table(base, LocalCase::Sp, t, s, TableFunctor::RjStar)?;
    if shriek.keys().collect::<Vec<_>>() != star.keys().collect::<Vec<_>>() {
        return Ok(Some("degree supports differ".into()));
    }
    for (deg, entry) in &shriek {
        let old_twist = WeightTwist::xi_half((si - ti) * (g - 1));
        let new_twist = WeightTwist::xi_half((si - ti) * (g + 1));
        let image = reversed_words(entry, &old_twist)?.twisted(&new_twist)?;
        if let Some(w) = image.first_discrepancy(&star[deg]) {
            return Ok(Some(format!("degree {deg}: {w}")));
        }
    }
    Ok(None)
}

/// Check the degree reflection `i ↦ -i` on the Speh `j_{!*}` table.
pub fn verdier_speh_reflection(base: &CuspidalDatum, t: u32, s: u32) -> Result<Option<String>> {
    let g = base.rank() as i64;
    let (si, ti) = (s as i64, t as i64);
    let table = cohomology_table(base, LocalCase::Speh, t, s, TableFunctor::JShriekStar)?;
    for (&i, entry) in &table {
        let old_twist = WeightTwist::xi_half((si - ti) * g + i);
        let new_twist = WeightTwist::xi_half((si - ti) * g - i);
        let image = reversed_words(entry, &old_twist)?.twisted(&new_twist)?;
        match table.get(&-i) {
            None => return Ok(Some(format!("degree {} missing", -i))),
            Some(other) => {
                if let Some(w) = image.first_discrepancy(other) {
                    return Ok(Some(format!("degrees ±{i}: {w}")));
                }
            }
        }
    }
    Ok(None)
}
