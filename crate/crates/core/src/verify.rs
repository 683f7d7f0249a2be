//! Runtime verification suites behind the `verify` command.
//!
//! Each suite re-checks the structural identities of one module family up
//! to a size bound. A failing check always carries a witness: the first
//! discrepant term. Checks are independent and run on a small thread pool;
//! the pool size honours the `MWCALC_THREADS` environment variable.

use crate::groth::{self, expand_product, VirtualRep};
use crate::jacquet::{self, JacquetSide, PrefixOrientation, SeqMultiset, TwoBlockJacquet};
use crate::segment::{junction_pair, ArrowWord, CuspidalDatum, Direction, ProductSide};
use crate::sheaf::{self, SymbolKind, VirtualSheaf};
use crate::spectral::{self, LocalCase};
use crate::twist::WeightTwist;
use crate::CalcError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub params: String,
    pub status: Status,
    pub witness: Option<String>,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Segments,
    Jacquet,
    Groth,
    Sheaf,
    Spectral,
}

impl std::str::FromStr for Suite {
    type Err = CalcError;
    fn from_str(s: &str) -> Result<Self, CalcError> {
        match s {
            "all" => Ok(Suite::All),
            "segments" => Ok(Suite::Segments),
            "jacquet" => Ok(Suite::Jacquet),
            "groth" => Ok(Suite::Groth),
            "sheaf" => Ok(Suite::Sheaf),
            "spectral" => Ok(Suite::Spectral),
            other => Err(CalcError::Usage(format!("unknown suite {other:?}"))),
        }
    }
}

type CheckFn = Box<dyn FnOnce() -> crate::Result<Option<String>> + Send>;

struct Pending {
    name: String,
    params: String,
    run: CheckFn,
}

fn pending(name: &str, params: String, run: CheckFn) -> Pending {
    Pending {
        name: name.to_string(),
        params,
        run,
    }
}

fn thread_count() -> usize {
    std::env::var("MWCALC_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

fn run_pending(pendings: Vec<Pending>) -> Vec<Check> {
    let n_threads = thread_count().min(pendings.len().max(1));
    let jobs: Vec<(usize, Pending)> = pendings.into_iter().enumerate().collect();
    let mut slots: Vec<Option<Check>> = (0..jobs.len()).map(|_| None).collect();
    let queue = std::sync::Mutex::new(jobs);
    let results = std::sync::Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..n_threads {
            scope.spawn(|| loop {
                let job = queue.lock().unwrap().pop();
                let Some((idx, p)) = job else { break };
                let witness = match (p.run)() {
                    Ok(w) => w,
                    Err(e) => Some(format!("error: {e}")),
                };
                let check = Check {
                    name: p.name,
                    params: p.params,
                    status: if witness.is_none() {
                        Status::Pass
                    } else {
                        Status::Fail
                    },
                    witness,
                };
                results.lock().unwrap().push((idx, check));
            });
        }
    });
    for (idx, check) in results.into_inner().unwrap() {
        slots[idx] = Some(check);
    }
    slots.into_iter().map(|c| c.unwrap()).collect()
}

/// Run one suite (or all of them) up to the size bound.
pub fn run_suite(suite: Suite, max_s: u32) -> VerificationReport {
    let start = Instant::now();
    let mut pendings = Vec::new();
    if matches!(suite, Suite::All | Suite::Segments) {
        segments_suite(&mut pendings, max_s);
    }
    if matches!(suite, Suite::All | Suite::Jacquet) {
        jacquet_suite(&mut pendings, max_s);
    }
    if matches!(suite, Suite::All | Suite::Groth) {
        groth_suite(&mut pendings, max_s);
    }
    if matches!(suite, Suite::All | Suite::Sheaf) {
        sheaf_suite(&mut pendings, max_s);
    }
    if matches!(suite, Suite::All | Suite::Spectral) {
        spectral_suite(&mut pendings, max_s);
    }
    let checks = run_pending(pendings);
    VerificationReport {
        checks,
        elapsed: start.elapsed(),
    }
}

fn base() -> CuspidalDatum {
    CuspidalDatum::new(1, "pi", "pi*").unwrap()
}

fn zero() -> BigRational {
    BigRational::zero()
}

/// All words of exactly `s` points over the base.
pub fn all_words(base: &CuspidalDatum, s: u32) -> Vec<ArrowWord> {
    if s == 0 {
        return Vec::new();
    }
    (0..(1u64 << (s - 1)))
        .map(|mask| {
            let slots: Vec<Direction> = (0..s - 1)
                .map(|j| {
                    if mask >> j & 1 == 1 {
                        Direction::Right
                    } else {
                        Direction::Left
                    }
                })
                .collect();
            ArrowWord::from_slots(base, BigRational::zero(), &slots)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// segments
// ---------------------------------------------------------------------------

fn segments_suite(out: &mut Vec<Pending>, max_s: u32) {
    out.push(pending(
        "segments/normalize-idempotent",
        format!("runs ≤ {max_s}"),
        Box::new(move || {
            let b = base();
            // every raw run list with ≤ 3 runs of length ≤ max_s
            for la in 1..=max_s as i64 {
                for lb in 0..=max_s as i64 {
                    for lc in 0..=max_s as i64 {
                        for dirs in 0..8u8 {
                            let mut runs = vec![(la, dir_of(dirs & 1))];
                            if lb > 0 {
                                runs.push((lb, dir_of(dirs >> 1 & 1)));
                            }
                            if lc > 0 {
                                runs.push((lc, dir_of(dirs >> 2 & 1)));
                            }
                            let total: i64 = runs.iter().map(|r| r.0).sum();
                            let once = ArrowWord::from_runs(&b, zero(), &runs)?;
                            if once.points() as i64 != total + 1 {
                                return Ok(Some(format!("points lost on {runs:?}")));
                            }
                            let raw: Vec<(i64, Direction)> =
                                once.runs().iter().map(|&(a, d)| (a as i64, d)).collect();
                            if ArrowWord::from_runs(&b, zero(), &raw)? != once {
                                return Ok(Some(format!("not idempotent on {runs:?}")));
                            }
                        }
                    }
                }
            }
            Ok(None)
        }),
    ));
    out.push(pending(
        "segments/dual-involution-algebra",
        format!("s ≤ {max_s}"),
        Box::new(move || {
            let b = base();
            for s in 1..=max_s {
                for w in all_words(&b, s) {
                    if w.dual().dual() != w {
                        return Ok(Some(format!("dual² ≠ id on {}", w.text())));
                    }
                    if w.zelevinsky_involution().zelevinsky_involution() != w {
                        return Ok(Some(format!("ι² ≠ id on {}", w.text())));
                    }
                    if w.dual().zelevinsky_involution() != w.zelevinsky_involution().dual() {
                        return Ok(Some(format!("dual and ι do not commute on {}", w.text())));
                    }
                }
            }
            Ok(None)
        }),
    ));
    let pair_bound = max_s + 1;
    out.push(pending(
        "segments/junction-length-two",
        format!("combined points ≤ {pair_bound}"),
        Box::new(move || {
            let b = base();
            for (a, w2) in word_pairs(&b, pair_bound) {
                for dir in [ProductSide::Right, ProductSide::Left] {
                    let pair = junction_pair(&a, &w2, dir)?;
                    if pair.socle == pair.cosocle {
                        return Ok(Some(format!(
                            "socle = cosocle for {} × {}",
                            a.text(),
                            w2.text()
                        )));
                    }
                    let full = crate::segment::junction_compose(
                        &a,
                        &w2,
                        dir,
                        crate::segment::JunctionPart::Full,
                    )?;
                    let mut expected = VirtualRep::from_word(&pair.socle);
                    expected.add_word(&pair.cosocle, BigInt::one());
                    if full != expected {
                        return Ok(Some(format!("full ≠ socle + cosocle for {}", a.text())));
                    }
                }
            }
            Ok(None)
        }),
    ));
    out.push(pending(
        "segments/product-commutativity",
        format!("combined points ≤ {pair_bound}"),
        Box::new(move || {
            let b = base();
            for (a, w2) in word_pairs(&b, pair_bound) {
                let lhs = expand_product(&a, &w2, ProductSide::Left)?;
                let rhs = expand_product(&w2, &a, ProductSide::Right)?;
                if let Some(w) = lhs.first_discrepancy(&rhs) {
                    return Ok(Some(format!("{} ⃖× {}: {w}", a.text(), w2.text())));
                }
            }
            Ok(None)
        }),
    ));
    let triple_bound = (max_s + 2).min(8);
    out.push(pending(
        "segments/cosocle-associativity",
        format!("combined points ≤ {triple_bound}"),
        Box::new(move || {
            let b = base();
            for sa in 1..=triple_bound - 2 {
                for sb in 1..=triple_bound - sa - 1 {
                    for sc in 1..=triple_bound - sa - sb {
                        for a in all_words(&b, sa) {
                            for w2 in all_words(&b, sb) {
                                for c in all_words(&b, sc) {
                                    let ab =
                                        junction_pair(&a, &w2, ProductSide::Right)?.cosocle;
                                    let lhs =
                                        junction_pair(&ab, &c, ProductSide::Right)?.cosocle;
                                    let bc =
                                        junction_pair(&w2, &c, ProductSide::Right)?.cosocle;
                                    let rhs =
                                        junction_pair(&a, &bc, ProductSide::Right)?.cosocle;
                                    if lhs != rhs {
                                        return Ok(Some(format!(
                                            "brackets differ on {} {} {}",
                                            a.text(),
                                            w2.text(),
                                            c.text()
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
            Ok(None)
        }),
    ));
    let dual_bound = (max_s + 1).min(6);
    out.push(pending(
        "segments/dual-composition-law",
        format!("combined points ≤ {dual_bound}"),
        Box::new(move || {
            let b = base();
            for (a, w2) in word_pairs(&b, dual_bound) {
                let pair = junction_pair(&a, &w2, ProductSide::Right)?;
                let dual_pair = junction_pair(&a.dual(), &w2.dual(), ProductSide::Left)?;
                if pair.cosocle.dual() != dual_pair.socle {
                    return Ok(Some(format!(
                        "dual(cosocle) ≠ socle of duals for {} ⃗× {}",
                        a.text(),
                        w2.text()
                    )));
                }
                if pair.socle.dual() != dual_pair.cosocle {
                    return Ok(Some(format!(
                        "dual(socle) ≠ cosocle of duals for {} ⃗× {}",
                        a.text(),
                        w2.text()
                    )));
                }
            }
            Ok(None)
        }),
    ));
}

fn dir_of(bit: u8) -> Direction {
    if bit == 1 {
        Direction::Right
    } else {
        Direction::Left
    }
}

fn word_pairs(base: &CuspidalDatum, combined: u32) -> Vec<(ArrowWord, ArrowWord)> {
    let mut out = Vec::new();
    for sa in 1..combined {
        for sb in 1..=(combined - sa) {
            for a in all_words(base, sa) {
                for b in all_words(base, sb) {
                    out.push((a.clone(), b));
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// jacquet
// ---------------------------------------------------------------------------

/// Extension sets of the `2^{s-1}` words partition `S_s`, and the
/// classification map inverts enumeration.
pub fn partition_check(s: u32) -> crate::Result<Option<String>> {
    let b = base();
    let mut seen: SeqMultiset = SeqMultiset::new();
    let mut total = BigInt::zero();
    for w in all_words(&b, s) {
        let sig = jacquet::linear_extensions(&w);
        for (seq, c) in sig.entries() {
            if !c.is_one() {
                return Ok(Some(format!("multiplicity {c} in ext({})", w.text())));
            }
            let back = jacquet::word_of_permutation(&b, zero(), seq)?;
            if back != w {
                return Ok(Some(format!("{seq:?} classified to {}", back.text())));
            }
            jacquet::seq_add(&mut seen, seq.clone(), BigInt::one());
            total += 1;
        }
    }
    let factorial: BigInt = (1..=s as i64).product::<i64>().into();
    if total != factorial {
        return Ok(Some(format!("Σ|ext| = {total} ≠ {s}!")));
    }
    if seen.values().any(|c| !c.is_one()) {
        return Ok(Some("extension sets overlap".into()));
    }
    Ok(None)
}

/// Closed two-block forms agree with the raw signature split for `Sp_s`
/// and `Speh_s`.
pub fn closed_form_check(s: u32) -> crate::Result<Option<String>> {
    let b = base();
    for word in [
        ArrowWord::steinberg(&b, s, zero()),
        ArrowWord::speh(&b, s, zero()),
    ] {
        let sig = jacquet::linear_extensions(&word);
        for t in 1..=s {
            for side in [JacquetSide::Standard, JacquetSide::Opposite] {
                let closed = match jacquet::two_block_jacquet(&word, t, side)? {
                    TwoBlockJacquet::Closed { first, second } => (first, second),
                    other => return Ok(Some(format!("expected closed form, got {other:?}"))),
                };
                // raw split of the (singleton) extension set
                let (seq, _) = sig.entries().next().unwrap();
                let oriented: Vec<u32> = match side {
                    JacquetSide::Standard => seq.clone(),
                    JacquetSide::Opposite => seq.iter().rev().copied().collect(),
                };
                let (head, tail) = oriented.split_at(t as usize);
                // predicted blocks from the closed pair; the opposite-side
                // split lists each factor in its opposite orientation
                let offset = sig.offset();
                let relabel = |factor: &ArrowWord| -> Vec<u32> {
                    let fsig = jacquet::linear_extensions(factor);
                    let mut vals: Vec<u32> = fsig
                        .entries()
                        .next()
                        .unwrap()
                        .0
                        .iter()
                        .map(|&v| {
                            let exp = fsig.offset() + BigRational::from(BigInt::from(v));
                            let diff = &exp - offset;
                            u32::try_from(diff.to_integer()).unwrap()
                        })
                        .collect();
                    if side == JacquetSide::Opposite {
                        vals.reverse();
                    }
                    vals
                };
                let head_vals = relabel(&closed.0);
                if head_vals != head {
                    return Ok(Some(format!(
                        "{} t={t} {side:?}: first block {head_vals:?} ≠ {head:?}",
                        word.text()
                    )));
                }
                match closed.1 {
                    None => {
                        if !tail.is_empty() {
                            return Ok(Some("missing second block".into()));
                        }
                    }
                    Some(second) => {
                        let tail_vals = relabel(&second);
                        if tail_vals != tail {
                            return Ok(Some(format!(
                                "{} t={t} {side:?}: second block {tail_vals:?} ≠ {tail:?}",
                                word.text()
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Speh-of-Steinberg extensions equal the Grothendieck-recursion oracle.
pub fn speh_oracle_check(s: u32, t: u32) -> crate::Result<Option<String>> {
    let sig = jacquet::speh_of_steinberg_extensions(s, t)?;
    let oracle = jacquet::speh_steinberg_oracle(s, t)?;
    if sig.raw() == &oracle {
        return Ok(None);
    }
    let mut diff = oracle.clone();
    for (seq, c) in sig.entries() {
        jacquet::seq_add(&mut diff, seq.clone(), -c.clone());
    }
    Ok(diff
        .into_iter()
        .next()
        .map(|(seq, c)| format!("sequence {seq:?} off by {c}")))
}

/// No constituent starts with a maximal consecutive run longer than the
/// strip bound.
pub fn prefix_vanishing_check(s: u32, t: u32) -> crate::Result<Option<String>> {
    let lo = s.max(t) + 1;
    for r in lo..=s * t {
        for orient in [PrefixOrientation::SteinbergPrefix, PrefixOrientation::SpehPrefix] {
            if !jacquet::red_prefix_vanishing(s, t, r, orient)? {
                return Ok(Some(format!("({s}, {t}): run of length {r} survives ({orient:?})")));
            }
        }
    }
    Ok(None)
}

fn jacquet_suite(out: &mut Vec<Pending>, max_s: u32) {
    for s in 1..=max_s {
        out.push(pending(
            "jacquet/partition-of-symmetric-group",
            format!("s = {s}"),
            Box::new(move || partition_check(s)),
        ));
        out.push(pending(
            "jacquet/two-block-closed-forms",
            format!("s = {s}"),
            Box::new(move || closed_form_check(s)),
        ));
    }
    for s in 1..=2 * max_s {
        for t in 1..=2 * max_s {
            if s * t > 2 * max_s {
                continue;
            }
            out.push(pending(
                "jacquet/speh-of-steinberg-oracle",
                format!("s = {s}, t = {t}"),
                Box::new(move || speh_oracle_check(s, t)),
            ));
            out.push(pending(
                "jacquet/red-prefix-vanishing",
                format!("s = {s}, t = {t}"),
                Box::new(move || prefix_vanishing_check(s, t)),
            ));
        }
    }
}

// ---------------------------------------------------------------------------
// groth
// ---------------------------------------------------------------------------

/// The signature of a length-two product equals the shuffle of the operand
/// signatures (related through the support offsets of the product).
pub fn shuffle_law_check(a: &ArrowWord, b: &ArrowWord, dir: ProductSide) -> crate::Result<Option<String>> {
    let full = expand_product(a, b, dir)?;
    let sig = jacquet::signature_of(&full)?;
    let sig_a = jacquet::linear_extensions(a);
    let sig_b = jacquet::linear_extensions(b);
    let expected = match dir {
        ProductSide::Right => jacquet::shuffle_seqs(sig_a.raw(), sig_b.raw(), a.points()),
        ProductSide::Left => jacquet::shuffle_seqs(sig_b.raw(), sig_a.raw(), b.points()),
    };
    if sig.raw() == &expected {
        Ok(None)
    } else {
        Ok(Some(format!(
            "shuffle mismatch for {} and {}",
            a.text(),
            b.text()
        )))
    }
}

fn groth_suite(out: &mut Vec<Pending>, max_s: u32) {
    let pair_bound = max_s + 1;
    out.push(pending(
        "groth/length-two-shuffle-law",
        format!("combined points ≤ {pair_bound}"),
        Box::new(move || {
            let b = base();
            for (a, w2) in word_pairs(&b, pair_bound) {
                for dir in [ProductSide::Right, ProductSide::Left] {
                    if let Some(w) = shuffle_law_check(&a, &w2, dir)? {
                        return Ok(Some(w));
                    }
                }
            }
            Ok(None)
        }),
    ));
    for t in 1..=max_s {
        out.push(pending(
            "groth/telescope",
            format!("t = {t}, all i"),
            Box::new(move || {
                let b = base();
                let expected =
                    VirtualRep::from_word(&ArrowWord::steinberg(&b, t, zero()));
                for i in 1..=t {
                    let got = groth::telescope(&b, t, i)?;
                    if let Some(w) = got.first_discrepancy(&expected) {
                        return Ok(Some(format!("i = {i}: {w}")));
                    }
                }
                Ok(None)
            }),
        ));
    }
    for s in 1..=max_s.min(7) {
        out.push(pending(
            "groth/standard-module-signature",
            format!("s = {s}"),
            Box::new(move || {
                let b = base();
                let v = groth::standard_module(&b, s, zero())?;
                let sig = jacquet::signature_of(&v)?;
                let factorial: BigInt = (1..=s as i64).product::<i64>().into();
                if sig.mass() != factorial {
                    return Ok(Some(format!("mass {} ≠ {s}!", sig.mass())));
                }
                if sig.entries().any(|(_, c)| !c.is_one()) {
                    return Ok(Some("non-trivial multiplicity".into()));
                }
                let back = groth::decompose_signature(&sig)?;
                if let Some(w) = back.first_discrepancy(&v) {
                    return Ok(Some(w));
                }
                Ok(None)
            }),
        ));
    }
    out.push(pending(
        "groth/decompose-weighted-sums",
        format!("s ≤ {}", max_s.min(5)),
        Box::new(move || {
            let b = base();
            for s in 2..=max_s.min(5) {
                let words = all_words(&b, s);
                // a lopsided combination: word i with coefficient i+1
                let mut v = VirtualRep::zero();
                for (i, w) in words.iter().enumerate() {
                    v.add_word(w, BigInt::from(i as i64 + 1));
                }
                let sig = jacquet::signature_of(&v)?;
                let back = groth::decompose_signature(&sig)?;
                if let Some(w) = back.first_discrepancy(&v) {
                    return Ok(Some(format!("s = {s}: {w}")));
                }
            }
            Ok(None)
        }),
    ));
}

// ---------------------------------------------------------------------------
// sheaf
// ---------------------------------------------------------------------------

/// Ambient pairs `(d, g)` with depth `⌊d/g⌋ = s_g`, including one with
/// `g ∤ d` whenever possible.
fn depth_pairs(s_max: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for g in 1..=4u32 {
        for s_g in 1..=s_max {
            out.push((g * s_g, g));
            if g > 1 {
                out.push((g * s_g + 1, g));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Substituting the telescoping into the nearby-cycle class reproduces the
/// graded sum exactly.
pub fn main_identity_check(d: u32, g: u32) -> crate::Result<Option<String>> {
    let b = CuspidalDatum::new(g, "pi", "pi*")?;
    let report = sheaf::verify_main_identity(&b, d, g)?;
    Ok(report.witness)
}

/// The two telescopings are mutually inverse formal substitutions.
pub fn round_trip_check(d: u32, g: u32) -> crate::Result<Option<String>> {
    let b = CuspidalDatum::new(g, "pi", "pi*")?;
    let s_g = sheaf::depth(d, g);
    for t in 1..=s_g {
        let expanded = sheaf::substitute_jshriek(&sheaf::intermediate_alternating(&b, d, g, t)?)?;
        let mut expected = VirtualSheaf::zero();
        expected.add_induced(
            SymbolKind::Intermediate,
            g,
            t,
            &b,
            &VirtualRep::from_word(&ArrowWord::steinberg(&b, t, zero())),
            &WeightTwist::rec_half(0),
            d,
            &BigInt::one(),
        )?;
        if let Some(w) = expanded.first_discrepancy(&expected) {
            return Ok(Some(format!("t = {t}: {w}")));
        }
    }
    Ok(None)
}

/// Dualizing every elliptic factor maps the `j_!` telescoping onto the
/// `Rj_*` telescoping with the `(g-1) ↔ (g+1)` exponent swap.
pub fn verdier_telescoping_check(d: u32, g: u32) -> crate::Result<Option<String>> {
    let b = CuspidalDatum::new(g, "pi", "pi*")?;
    let s_g = sheaf::depth(d, g);
    for t in 1..=s_g {
        for word in all_words(&b, t) {
            let shriek =
                sheaf::jshriek_to_intermediate(&b, d, g, t, &VirtualRep::from_word(&word))?;
            let mut mapped = VirtualSheaf::zero();
            for (sym, c) in shriek.terms() {
                let mut sym = sym.clone();
                sym.base = sym.base.dual();
                sym.word = sym.word.dual();
                sym.twist = WeightTwist::xi_half(((sym.t - t) * (g + 1)) as i64);
                mapped.add_symbol(sym, c.clone());
            }
            let dual_side = sheaf::rjstar_to_intermediate(
                &b.dual(),
                d,
                g,
                t,
                &VirtualRep::from_word(&word.dual()),
            )?;
            if let Some(w) = mapped.first_discrepancy(&dual_side) {
                return Ok(Some(format!("t = {t}, {}: {w}", word.text())));
            }
        }
    }
    Ok(None)
}

fn sheaf_suite(out: &mut Vec<Pending>, max_s: u32) {
    for (d, g) in depth_pairs(max_s) {
        out.push(pending(
            "sheaf/main-identity",
            format!("d = {d}, g = {g}"),
            Box::new(move || main_identity_check(d, g)),
        ));
        out.push(pending(
            "sheaf/telescoping-round-trip",
            format!("d = {d}, g = {g}"),
            Box::new(move || round_trip_check(d, g)),
        ));
        if sheaf::depth(d, g) <= max_s.min(5) {
            out.push(pending(
                "sheaf/verdier-telescoping",
                format!("d = {d}, g = {g}"),
                Box::new(move || verdier_telescoping_check(d, g)),
            ));
        }
    }
    let mgr_bound = 2 * max_s;
    out.push(pending(
        "sheaf/monodromy-symmetry",
        format!("s ≤ {mgr_bound}"),
        Box::new(move || {
            for s in 1..=mgr_bound {
                if let Some(w) = mgr_symmetry_check(s)? {
                    return Ok(Some(format!("s = {s}: {w}")));
                }
            }
            Ok(None)
        }),
    ));
    out.push(pending(
        "sheaf/local-component-admissibility",
        "fixed table".into(),
        Box::new(move || {
            use sheaf::{local_component_admissible, BlockKind::*, LocalBlock};
            let b = |t, g, kind| LocalBlock { t, g, kind };
            let cases: Vec<(u32, Vec<LocalBlock>, bool)> = vec![
                (4, vec![b(4, 1, Sp)], true),
                (4, vec![b(2, 1, Speh), b(2, 1, Sp)], false),
                (6, vec![b(3, 1, Sp), b(3, 1, Sp)], true),
                (6, vec![b(2, 2, Sp), b(1, 2, Speh)], true),
                (8, vec![b(2, 2, Sp), b(1, 2, Speh), b(1, 2, Speh)], true),
                (5, vec![b(3, 1, Sp), b(2, 1, Speh)], false),
                (9, vec![b(2, 3, Sp), b(3, 1, Speh)], true),
                (6, vec![b(3, 1, Speh), b(3, 1, Speh)], true),
                (5, vec![b(3, 1, Speh), b(2, 1, Speh)], false),
            ];
            for (d, blocks, expected) in cases {
                if local_component_admissible(d, &blocks)? != expected {
                    return Ok(Some(format!("d = {d}, {blocks:?}")));
                }
            }
            Ok(None)
        }),
    ));
}

/// `N^k`-symmetry of the graded table: the strata agree and the twists
/// differ by exactly `k`.
pub fn mgr_symmetry_check(s: u32) -> crate::Result<Option<String>> {
    for k in 0..s as i64 {
        let plus = sheaf::mgr(s, k);
        let minus = sheaf::mgr(s, -k);
        if plus.len() != minus.len() {
            return Ok(Some(format!("k = ±{k}: sizes differ")));
        }
        for ((t1, w1), (t2, w2)) in plus.iter().zip(minus.iter()) {
            if t1 != t2 {
                return Ok(Some(format!("k = ±{k}: strata differ")));
            }
            if &(w1.tate() + BigRational::from(BigInt::from(k))) != w2.tate() {
                return Ok(Some(format!("k = ±{k}, t = {t1}: twist shift ≠ k")));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// spectral
// ---------------------------------------------------------------------------

fn spectral_suite(out: &mut Vec<Pending>, max_s: u32) {
    for s in 1..=max_s {
        out.push(pending(
            "spectral/mle-degeneration",
            format!("s = {s}"),
            Box::new(move || spectral::mle_degeneration(&base(), s)),
        ));
    }
    for g in 1..=3u32 {
        for s in 1..=max_s {
            out.push(pending(
                "spectral/euler-consistency",
                format!("s = {s}, g = {g}"),
                Box::new(move || {
                    let b = CuspidalDatum::new(g, "pi", "pi*")?;
                    spectral::euler_consistency(&b, s * g, s)
                }),
            ));
        }
    }
    for (d, g) in depth_pairs(max_s) {
        if sheaf::depth(d, g) < 1 {
            continue;
        }
        out.push(pending(
            "spectral/mge-consistency",
            format!("d = {d}, g = {g}"),
            Box::new(move || {
                let b = CuspidalDatum::new(g, "pi", "pi*")?;
                spectral::mge_consistency(&b, d, g)
            }),
        ));
    }
    for g in 1..=3u32 {
        for s in 1..=max_s {
            let d = s * g;
            out.push(pending(
                "spectral/global-abutment",
                format!("s = {s}, g = {g}"),
                Box::new(move || {
                    let b = CuspidalDatum::new(g, "pi", "pi*")?;
                    for case in [LocalCase::Sp, LocalCase::Speh] {
                        if !spectral::stratification_degenerates(g, s, case) {
                            return Ok(Some("stratified sequence admits a differential".into()));
                        }
                        if let Some(w) = spectral::global_ss_check(&b, d, g, case)? {
                            return Ok(Some(w));
                        }
                        let gss = spectral::global_ss(&b, d, g, case)?;
                        if let Some(w) = spectral::euler_conservation(&gss) {
                            return Ok(Some(format!("euler conservation: {w}")));
                        }
                    }
                    Ok(None)
                }),
            ));
            out.push(pending(
                "spectral/verdier-tables",
                format!("s = {s}, g = {g}"),
                Box::new(move || {
                    let b = CuspidalDatum::new(g, "pi", "pi*")?;
                    for t in 1..=s {
                        if let Some(w) = spectral::verdier_sp_tables(&b, t, s)? {
                            return Ok(Some(format!("t = {t}: {w}")));
                        }
                        if let Some(w) = spectral::verdier_speh_reflection(&b, t, s)? {
                            return Ok(Some(format!("t = {t}: {w}")));
                        }
                    }
                    Ok(None)
                }),
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_full_suite_passes() {
        let report = run_suite(Suite::All, 3);
        if let Some(c) = report.failures().next() {
            panic!("{} [{}] failed: {:?}", c.name, c.params, c.witness);
        }
        assert!(report.passed());
    }

    #[test]
    fn unknown_suite_name_is_usage_error() {
        assert!(matches!(
            "everything".parse::<Suite>(),
            Err(CalcError::Usage(_))
        ));
    }
}
