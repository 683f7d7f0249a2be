//! Jacquet modules through linear extensions.
//!
//! The full Jacquet module of an arrow word `Γ` with respect to the minimal
//! standard parabolic has one constituent for every permutation `σ` of the
//! cuspidal points compatible with the arrows: inside a RIGHT run the values
//! appear in increasing order, inside a LEFT run in decreasing order. The
//! extension sets of the `2^{s-1}` words partition the symmetric group `S_s`
//! and classifying a permutation back to its word is the inverse map.
//!
//! The same picture extends to the Speh-of-Steinberg family
//! `Speh_s(Sp_t(π))`: constituents are sequences over the multiset
//! `{a + b : 0 ≤ a < t, 0 ≤ b < s}` cut out by an explicit token order, and
//! an independent route computes the same multiset by expanding the class of
//! the representation in the Grothendieck group into shuffles of Steinberg
//! runs.

use crate::error::CalcError;
use crate::groth::VirtualRep;
use crate::segment::{ArrowWord, CuspidalDatum, Direction};
use crate::twist::WeightTwist;
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// A multiset of value sequences with (possibly signed) integer
/// multiplicities.
pub type SeqMultiset = BTreeMap<Vec<u32>, BigInt>;

/// Add `coeff` copies of `seq` to a multiset, dropping zeros.
pub fn seq_add(ms: &mut SeqMultiset, seq: Vec<u32>, coeff: BigInt) {
    if coeff.is_zero() {
        return;
    }
    let entry = ms.entry(seq.clone()).or_insert_with(BigInt::zero);
    *entry += coeff;
    if entry.is_zero() {
        ms.remove(&seq);
    }
}

/// A full Jacquet module: a multiset of value sequences over a unit-spaced
/// support. The sequence entry `v` stands for the exponent `offset + v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    base: CuspidalDatum,
    offset: BigRational,
    entries: SeqMultiset,
}

impl Signature {
    pub fn new(base: &CuspidalDatum, offset: BigRational, entries: SeqMultiset) -> Self {
        Signature {
            base: base.clone(),
            offset,
            entries,
        }
    }

    /// Build from explicit support exponents (sorted, unit spacing from the
    /// minimum) and raw sequences, multiplicity one each.
    pub fn from_sequences(
        base: &CuspidalDatum,
        support: &[BigRational],
        seqs: Vec<Vec<u32>>,
    ) -> Self {
        let offset = support
            .iter()
            .min()
            .cloned()
            .unwrap_or_else(BigRational::zero);
        let mut entries = SeqMultiset::new();
        for s in seqs {
            seq_add(&mut entries, s, BigInt::one());
        }
        Signature::new(base, offset, entries)
    }

    pub fn base(&self) -> &CuspidalDatum {
        &self.base
    }

    pub fn offset(&self) -> &BigRational {
        &self.offset
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.entries.iter()
    }

    pub fn raw(&self) -> &SeqMultiset {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total multiplicity (sum of coefficients).
    pub fn mass(&self) -> BigInt {
        self.entries.values().sum()
    }

    /// The support multiset, lowest exponent first.
    pub fn support(&self) -> Vec<BigRational> {
        let mut labels: Vec<u32> = match self.entries.keys().next() {
            Some(seq) => seq.clone(),
            None => return Vec::new(),
        };
        labels.sort_unstable();
        labels
            .into_iter()
            .map(|v| &self.offset + BigRational::from(BigInt::from(v)))
            .collect()
    }

    /// First sequence on which the two signatures disagree.
    pub fn first_discrepancy(&self, other: &Signature) -> Option<String> {
        if self.offset != other.offset {
            return Some(format!(
                "support offsets differ: {} vs {}",
                self.offset, other.offset
            ));
        }
        let mut diff = self.entries.clone();
        for (seq, c) in &other.entries {
            seq_add(&mut diff, seq.clone(), -c.clone());
        }
        diff.into_iter()
            .next()
            .map(|(seq, c)| format!("multiplicity of {seq:?} differs by {c}"))
    }
}

/// Enumerate the extension set of a word: all permutations of
/// `{0, …, s-1}` such that for each arrow slot `j` the value `j-1` precedes
/// `j` when the arrow points RIGHT and follows it when the arrow points
/// LEFT.
pub fn linear_extensions(word: &ArrowWord) -> Signature {
    let s = word.points() as usize;
    let slots = word.slots();
    // successor[v] lists values that may only be placed after v
    let mut indegree = vec![0u32; s];
    let mut successors: Vec<Vec<u32>> = vec![Vec::new(); s];
    for (j, dir) in slots.iter().enumerate() {
        let (before, after) = match dir {
            Direction::Right => (j as u32, j as u32 + 1),
            Direction::Left => (j as u32 + 1, j as u32),
        };
        successors[before as usize].push(after);
        indegree[after as usize] += 1;
    }
    let mut entries = SeqMultiset::new();
    let mut prefix: Vec<u32> = Vec::with_capacity(s);
    let mut avail: Vec<u32> = (0..s as u32).filter(|&v| indegree[v as usize] == 0).collect();
    fn rec(
        prefix: &mut Vec<u32>,
        avail: &mut Vec<u32>,
        indegree: &mut [u32],
        successors: &[Vec<u32>],
        s: usize,
        out: &mut SeqMultiset,
    ) {
        if prefix.len() == s {
            seq_add(out, prefix.clone(), BigInt::one());
            return;
        }
        for idx in 0..avail.len() {
            let v = avail[idx];
            avail.swap_remove(idx);
            prefix.push(v);
            let mut released = Vec::new();
            for &w in &successors[v as usize] {
                indegree[w as usize] -= 1;
                if indegree[w as usize] == 0 {
                    released.push(w);
                    avail.push(w);
                }
            }
            rec(prefix, avail, indegree, successors, s, out);
            for &w in &released {
                let pos = avail.iter().position(|&x| x == w).unwrap();
                avail.swap_remove(pos);
            }
            for &w in &successors[v as usize] {
                indegree[w as usize] += 1;
            }
            prefix.pop();
            avail.push(v);
            let last = avail.len() - 1;
            avail.swap(idx.min(last), last);
        }
    }
    rec(&mut prefix, &mut avail, &mut indegree, &mut successors, s, &mut entries);
    let offset = word.center()
        + BigRational::new(BigInt::from(1 - s as i64), BigInt::from(2));
    Signature::new(word.base(), offset, entries)
}

/// Classify a permutation of `{0, …, s-1}` back to the unique word whose
/// extension set contains it: slot `j` points RIGHT iff the value `j-1`
/// appears before the value `j`.
pub fn word_of_permutation(
    base: &CuspidalDatum,
    center: BigRational,
    seq: &[u32],
) -> Result<ArrowWord> {
    let s = seq.len();
    if s == 0 {
        return Err(CalcError::Domain("empty sequence".into()));
    }
    let mut pos = vec![usize::MAX; s];
    for (p, &v) in seq.iter().enumerate() {
        if v as usize >= s || pos[v as usize] != usize::MAX {
            return Err(CalcError::Domain(format!(
                "{seq:?} is not a permutation of 0..{s}"
            )));
        }
        pos[v as usize] = p;
    }
    let slots: Vec<Direction> = (1..s)
        .map(|j| {
            if pos[j - 1] < pos[j] {
                Direction::Right
            } else {
                Direction::Left
            }
        })
        .collect();
    Ok(ArrowWord::from_slots(base, center, &slots))
}

/// Signature of a twist-free virtual representation: coefficient-weighted
/// union of the extension sets of its words. All terms must share base,
/// center and point count.
pub fn signature_of(v: &VirtualRep) -> Result<Signature> {
    let mut it = v.terms();
    let ((first_word, first_twist), _) = it
        .next()
        .ok_or_else(|| CalcError::Domain("signature of the zero class".into()))?;
    if *first_twist != WeightTwist::zero() {
        return Err(CalcError::UnsupportedSupport(
            "signature of a twisted class".into(),
        ));
    }
    let mut entries = SeqMultiset::new();
    let mut offset = None;
    for ((word, twist), coeff) in v.terms() {
        if *twist != WeightTwist::zero() {
            return Err(CalcError::UnsupportedSupport(
                "signature of a twisted class".into(),
            ));
        }
        if word.base() != first_word.base()
            || word.center() != first_word.center()
            || word.points() != first_word.points()
        {
            return Err(CalcError::UnsupportedSupport(
                "terms do not share a common support".into(),
            ));
        }
        let sig = linear_extensions(word);
        offset.get_or_insert_with(|| sig.offset().clone());
        for (seq, c) in sig.entries() {
            seq_add(&mut entries, seq.clone(), c * coeff);
        }
    }
    Ok(Signature::new(
        first_word.base(),
        offset.unwrap(),
        entries,
    ))
}

/// All interleavings of `a`-sequences with `b`-sequences, the `b` values
/// shifted up by `b_offset`; multiplicities multiply.
pub fn shuffle_seqs(a: &SeqMultiset, b: &SeqMultiset, b_offset: u32) -> SeqMultiset {
    let mut out = SeqMultiset::new();
    for (sa, ca) in a {
        for (sb, cb) in b {
            let shifted: Vec<u32> = sb.iter().map(|&v| v + b_offset).collect();
            let mut buf = Vec::with_capacity(sa.len() + sb.len());
            let coeff = ca * cb;
            interleave(&mut out, &mut buf, sa, &shifted, &coeff);
        }
    }
    out
}

fn interleave(out: &mut SeqMultiset, buf: &mut Vec<u32>, a: &[u32], b: &[u32], coeff: &BigInt) {
    if a.is_empty() {
        let mut seq = buf.clone();
        seq.extend_from_slice(b);
        seq_add(out, seq, coeff.clone());
        return;
    }
    if b.is_empty() {
        let mut seq = buf.clone();
        seq.extend_from_slice(a);
        seq_add(out, seq, coeff.clone());
        return;
    }
    buf.push(a[0]);
    interleave(out, buf, &a[1..], b, coeff);
    buf.pop();
    buf.push(b[0]);
    interleave(out, buf, a, &b[1..], coeff);
    buf.pop();
}

/// Which side the two-block Jacquet functor is taken on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacquetSide {
    Standard,
    Opposite,
}

/// Result of a two-block Jacquet module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoBlockJacquet {
    /// Height not a multiple of the cuspidal rank.
    Zero,
    /// A Steinberg or Speh word: the closed-form tensor pair. The second
    /// factor is `None` when `t = s`.
    Closed {
        first: ArrowWord,
        second: Option<ArrowWord>,
    },
    /// A general word: the raw multiset of (first `t` values, remaining
    /// values) splits of the extension sequences.
    Split(Vec<((Vec<u32>, Vec<u32>), BigInt)>),
}

/// Two-block Jacquet module of a word at the cut `t` (in units of the
/// cuspidal rank). For `Sp_s` and `Speh_s` the closed forms are, with `c`
/// the center of the word:
///
/// ```text
///   standard  Sp_s   ↦  Sp_t(c + (s-t)/2)   ⊗ Sp_{s-t}(c - t/2)
///   standard  Speh_s ↦  Speh_t(c + (t-s)/2) ⊗ Speh_{s-t}(c + t/2)
///   opposite  Sp_s   ↦  Sp_t(c + (t-s)/2)   ⊗ Sp_{s-t}(c + t/2)
///   opposite  Speh_s ↦  Speh_t(c + (s-t)/2) ⊗ Speh_{s-t}(c - t/2)
/// ```
pub fn two_block_jacquet(word: &ArrowWord, t: u32, side: JacquetSide) -> Result<TwoBlockJacquet> {
    let s = word.points();
    if t == 0 || t > s {
        return Err(CalcError::Domain(format!(
            "two-block cut t = {t} outside 1..={s}"
        )));
    }
    let c = word.center().clone();
    let base = word.base();
    let sp = word.is_steinberg();
    let speh = word.is_speh();
    if sp || speh {
        let (first_shift, second_shift) = match (side, sp) {
            (JacquetSide::Standard, true) => (s as i64 - t as i64, -(t as i64)),
            (JacquetSide::Standard, false) => (t as i64 - s as i64, t as i64),
            (JacquetSide::Opposite, true) => (t as i64 - s as i64, t as i64),
            (JacquetSide::Opposite, false) => (s as i64 - t as i64, -(t as i64)),
        };
        let make = |n: u32, shift: i64| {
            let center = &c + BigRational::new(BigInt::from(shift), BigInt::from(2));
            if sp {
                ArrowWord::steinberg(base, n, center)
            } else {
                ArrowWord::speh(base, n, center)
            }
        };
        return Ok(TwoBlockJacquet::Closed {
            first: make(t, first_shift),
            second: if t == s {
                None
            } else {
                Some(make(s - t, second_shift))
            },
        });
    }
    let sig = linear_extensions(word);
    let mut split: BTreeMap<(Vec<u32>, Vec<u32>), BigInt> = BTreeMap::new();
    for (seq, coeff) in sig.entries() {
        let oriented: Vec<u32> = match side {
            JacquetSide::Standard => seq.clone(),
            JacquetSide::Opposite => seq.iter().rev().copied().collect(),
        };
        let (head, tail) = oriented.split_at(t as usize);
        let key = (head.to_vec(), tail.to_vec());
        *split.entry(key).or_insert_with(BigInt::zero) += coeff;
    }
    Ok(TwoBlockJacquet::Split(split.into_iter().collect()))
}

/// Jacquet module at an absolute height `h`: zero unless the cuspidal rank
/// divides `h`.
pub fn jacquet_at_height(word: &ArrowWord, h: u32, side: JacquetSide) -> Result<TwoBlockJacquet> {
    let g = word.base().rank();
    if h == 0 || h > g * word.points() {
        return Err(CalcError::Domain(format!("height {h} out of range")));
    }
    if h % g != 0 {
        return Ok(TwoBlockJacquet::Zero);
    }
    two_block_jacquet(word, h / g, side)
}

// ---------------------------------------------------------------------------
// Speh-of-Steinberg family
// ---------------------------------------------------------------------------

/// Support offset of `Speh_s(Sp_t(π))`: exponents run over
/// `(2-t-s)/2 + v` for grid values `v = a + b`, `0 ≤ a < t`, `0 ≤ b < s`.
fn ladder_offset(s: u32, t: u32) -> BigRational {
    BigRational::new(BigInt::from(2 - (t as i64) - (s as i64)), BigInt::from(2))
}

/// Multiplicity of the grid value `v` in the support of `Speh_s(Sp_t)`.
fn grid_multiplicity(s: u32, t: u32, v: u32) -> u32 {
    let (s, t, v) = (s as i64, t as i64, v as i64);
    let lo = (v - s + 1).max(0);
    let hi = v.min(t - 1);
    (hi - lo + 1).max(0) as u32
}

/// The constituents of the full Jacquet module of `Speh_s(Sp_t(π))`.
///
/// Sequences over the grid multiset are cut out by ordering constraints on
/// occurrence tokens: write `pos(v, m)` for the position of the `m`-th
/// occurrence of the value `v`; then for all `0 ≤ k < s-1`, `0 ≤ i < t`
///
/// ```text
///   (i)  pos(t-1+k-i, min(k+1, i+1)) precedes pos(t+k-i, min(k+2, i+1))
/// ```
///
/// and for all `0 ≤ k < s`, `0 ≤ i < j < t`
///
/// ```text
///   (ii) pos(t-1+k-i, min(k+1, i+1)) precedes pos(t-1+k-j, min(k+1, j+1))
/// ```
///
/// Reading: the `k`-th Steinberg strip is traversed left to right (ii), and
/// its `i`-th entry waits for the `i`-th entry of the next strip (i). The
/// orientation of the inequalities is pinned by the Grothendieck-recursion
/// oracle [`speh_steinberg_oracle`].
pub fn speh_of_steinberg_extensions(s: u32, t: u32) -> Result<Signature> {
    if s == 0 || t == 0 {
        return Err(CalcError::Domain("speh-of-steinberg needs s, t ≥ 1".into()));
    }
    let base = CuspidalDatum::self_dual(1, "pi");
    speh_of_steinberg_extensions_over(&base, s, t)
}

/// Same as [`speh_of_steinberg_extensions`] over an explicit base.
pub fn speh_of_steinberg_extensions_over(
    base: &CuspidalDatum,
    s: u32,
    t: u32,
) -> Result<Signature> {
    let n = (s * t) as usize;
    let vmax = s + t - 2;
    // token (v, m) = m-th occurrence of value v, m zero-based here
    let mut token_index: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    let mut token_value: Vec<u32> = Vec::with_capacity(n);
    for v in 0..=vmax {
        for m in 0..grid_multiplicity(s, t, v) {
            token_index.insert((v, m), token_value.len());
            token_value.push(v);
        }
    }
    debug_assert_eq!(token_value.len(), n);
    let tok = |v: i64, m: i64| -> Result<usize> {
        token_index
            .get(&(v as u32, m as u32 - 1))
            .copied()
            .ok_or_else(|| {
                CalcError::Domain(format!("occurrence index ({v}, {m}) out of range"))
            })
    };
    let mut edges: Vec<(usize, usize)> = Vec::new();
    // same-value occurrences are ordered by definition
    for v in 0..=vmax {
        let mu = grid_multiplicity(s, t, v);
        for m in 1..mu {
            edges.push((
                token_index[&(v, m - 1)],
                token_index[&(v, m)],
            ));
        }
    }
    let (si, ti) = (s as i64, t as i64);
    for k in 0..si - 1 {
        for i in 0..ti {
            let a = tok(ti - 1 + k - i, (k + 1).min(i + 1))?;
            let b = tok(ti + k - i, (k + 2).min(i + 1))?;
            edges.push((a, b));
        }
    }
    for k in 0..si {
        for i in 0..ti {
            for j in i + 1..ti {
                let a = tok(ti - 1 + k - i, (k + 1).min(i + 1))?;
                let b = tok(ti - 1 + k - j, (k + 1).min(j + 1))?;
                edges.push((a, b));
            }
        }
    }
    // linear extensions of the token order, recorded as value sequences
    let mut indegree = vec![0u32; n];
    let mut successors: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, b) in edges {
        successors[a].push(b);
        indegree[b] += 1;
    }
    let mut entries = SeqMultiset::new();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut avail: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    fn rec(
        order: &mut Vec<usize>,
        avail: &mut Vec<usize>,
        indegree: &mut [u32],
        successors: &[Vec<usize>],
        token_value: &[u32],
        n: usize,
        out: &mut SeqMultiset,
    ) {
        if order.len() == n {
            let seq: Vec<u32> = order.iter().map(|&i| token_value[i]).collect();
            seq_add(out, seq, BigInt::one());
            return;
        }
        for idx in 0..avail.len() {
            let v = avail[idx];
            avail.swap_remove(idx);
            order.push(v);
            let mut released = Vec::new();
            for &w in &successors[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    released.push(w);
                    avail.push(w);
                }
            }
            rec(order, avail, indegree, successors, token_value, n, out);
            for &w in &released {
                let pos = avail.iter().position(|&x| x == w).unwrap();
                avail.swap_remove(pos);
            }
            for &w in &successors[v] {
                indegree[w] += 1;
            }
            order.pop();
            avail.push(v);
            let last = avail.len() - 1;
            avail.swap(idx.min(last), last);
        }
    }
    rec(
        &mut order,
        &mut avail,
        &mut indegree,
        &mut successors,
        &token_value,
        n,
        &mut entries,
    );
    Ok(Signature::new(base, ladder_offset(s, t), entries))
}

/// Independent oracle for the same multiset, through the Grothendieck
/// group.
///
/// In the Grothendieck group the class of `Speh_s(Sp_t)` expands as an
/// alternating sum of induced products of Steinberg strips; for `s = 2`
/// this is the relation
/// `Sp_t(-1/2) ⊞ Sp_t(1/2) = Sp_t(-1/2) × Sp_t(1/2) − Sp_{t+1} × Sp_{t-1}`,
/// and iterating over `s` resolves the class into the ladder determinant
/// `det( strip(k → t-1+j) )_{0 ≤ k, j < s}`. The signature of an induced
/// product is the shuffle of the strip sequences, so the determinant can be
/// evaluated directly on sequence multisets. Strips of length zero are the
/// unit, negative lengths kill the term.
pub fn speh_steinberg_oracle(s: u32, t: u32) -> Result<SeqMultiset> {
    if s == 0 || t == 0 {
        return Err(CalcError::Domain("speh-of-steinberg needs s, t ≥ 1".into()));
    }
    let si = s as i64;
    let ti = t as i64;
    let mut memo: BTreeMap<u64, SeqMultiset> = BTreeMap::new();
    // rows_mask: rows still unmatched; columns are consumed from the top
    // (largest end first), so the column set is determined by the mask size.
    fn det(
        rows_mask: u64,
        cols_left: u32,
        s: i64,
        t: i64,
        memo: &mut BTreeMap<u64, SeqMultiset>,
    ) -> SeqMultiset {
        if cols_left == 0 {
            let mut unit = SeqMultiset::new();
            seq_add(&mut unit, Vec::new(), BigInt::one());
            return unit;
        }
        if let Some(hit) = memo.get(&rows_mask) {
            return hit.clone();
        }
        let col = cols_left as i64 - 1; // expand along the largest remaining end
        let rows: Vec<i64> = (0..s).filter(|k| rows_mask >> k & 1 == 1).collect();
        let mut acc = SeqMultiset::new();
        for (pos, &k) in rows.iter().enumerate() {
            // strip from start k to end t-1+col, decreasing
            let len = t + col - k;
            if len < 0 {
                continue;
            }
            let sign = if (rows.len() - 1 - pos) % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            let sub = det(rows_mask & !(1 << k), cols_left - 1, s, t, memo);
            let with_strip = if len == 0 {
                sub
            } else {
                let mut strip = SeqMultiset::new();
                let run: Vec<u32> = (k..t + col).rev().map(|v| v as u32).collect();
                seq_add(&mut strip, run, BigInt::one());
                shuffle_seqs(&sub, &strip, 0)
            };
            for (seq, c) in with_strip {
                seq_add(&mut acc, seq, c * &sign);
            }
        }
        memo.insert(rows_mask, acc.clone());
        acc
    }
    let full = (1u64 << si) - 1;
    Ok(det(full, s, si, ti, &mut memo))
}

/// Orientation of the prefix run tested by [`red_prefix_vanishing`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefixOrientation {
    /// Consecutive decreasing prefix (a Steinberg strip).
    SteinbergPrefix,
    /// Consecutive increasing prefix (a Speh strip).
    SpehPrefix,
}

/// True iff no constituent of `Speh_s(Sp_t)` starts with a consecutive run
/// of length `r` in the given orientation. Holds whenever
/// `max{s, t} < r ≤ st`.
pub fn red_prefix_vanishing(
    s: u32,
    t: u32,
    r: u32,
    orientation: PrefixOrientation,
) -> Result<bool> {
    if r == 0 {
        return Err(CalcError::Domain("prefix length must be positive".into()));
    }
    if r > s * t {
        return Ok(true);
    }
    let sig = speh_of_steinberg_extensions(s, t)?;
    for (seq, _) in sig.entries() {
        let run_ok = seq.windows(2).take(r as usize - 1).all(|w| match orientation {
            PrefixOrientation::SteinbergPrefix => w[0] > 0 && w[1] == w[0] - 1,
            PrefixOrientation::SpehPrefix => w[1] == w[0] + 1,
        });
        if run_ok && seq.len() >= r as usize {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A Speh-of-Steinberg shape `Speh_s(Sp_t(π(center)))`; `s = 0` or `t = 0`
/// denotes the unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderShape {
    pub s: u32,
    pub t: u32,
    pub center: BigRational,
}

impl LadderShape {
    pub fn is_unit(&self) -> bool {
        self.s == 0 || self.t == 0
    }

    /// The shape as an arrow word when it is elliptic (`min(s, t) = 1`).
    pub fn as_word(&self, base: &CuspidalDatum) -> Option<ArrowWord> {
        if self.is_unit() {
            return None;
        }
        if self.s == 1 {
            Some(ArrowWord::steinberg(base, self.t, self.center.clone()))
        } else if self.t == 1 {
            Some(ArrowWord::speh(base, self.s, self.center.clone()))
        } else {
            None
        }
    }
}

/// One term of [`red_closed_form`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedTerm {
    pub coeff: BigInt,
    pub twist: WeightTwist,
    pub shape: LadderShape,
}

/// Closed form of the maximal-strip reduction of `Speh_s(Sp_t(π))` with
/// `r = max{s, t}` and `g` the rank of the base:
///
/// * `t ≥ s`: `(-1)^{r-1} Ξ^{(t-1)(sg-1)/2} ⊗ Speh_s(Sp_{t-1}(π(-(sg-1)/2)))`;
/// * `s ≥ t`: `Ξ^{(s-1)(tg+1)/2} ⊗ Speh_{s-1}(Sp_t(π(-(tg+1)/2)))`;
/// * `s = t`: the sum of both.
pub fn red_closed_form(base: &CuspidalDatum, s: u32, t: u32, r: u32) -> Result<Vec<RedTerm>> {
    if s == 0 || t == 0 {
        return Err(CalcError::Domain("reduction needs s, t ≥ 1".into()));
    }
    if r != s.max(t) {
        return Err(CalcError::Domain(format!(
            "reduction strip r = {r} must equal max(s, t) = {}",
            s.max(t)
        )));
    }
    let g = base.rank() as i64;
    let (si, ti) = (s as i64, t as i64);
    let mut terms = Vec::new();
    if t >= s {
        let sign = if (r - 1) % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        terms.push(RedTerm {
            coeff: sign,
            twist: WeightTwist::xi_half((ti - 1) * (si * g - 1)),
            shape: LadderShape {
                s,
                t: t - 1,
                center: BigRational::new(BigInt::from(1 - si * g), BigInt::from(2)),
            },
        });
    }
    if s >= t {
        terms.push(RedTerm {
            coeff: BigInt::one(),
            twist: WeightTwist::xi_half((si - 1) * (ti * g + 1)),
            shape: LadderShape {
                s: s - 1,
                t,
                center: BigRational::new(BigInt::from(-(ti * g + 1)), BigInt::from(2)),
            },
        });
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segment::hook_word;

    fn base() -> CuspidalDatum {
        CuspidalDatum::self_dual(1, "pi")
    }

    fn zero() -> BigRational {
        BigRational::zero()
    }

    fn seqs(sig: &Signature) -> Vec<Vec<u32>> {
        sig.entries().map(|(s, _)| s.clone()).collect()
    }

    #[test]
    fn steinberg_extension_is_decreasing() {
        let sp = ArrowWord::steinberg(&base(), 3, zero());
        assert_eq!(seqs(&linear_extensions(&sp)), vec![vec![2, 1, 0]]);
    }

    #[test]
    fn speh_extension_is_increasing() {
        let speh = ArrowWord::speh(&base(), 3, zero());
        assert_eq!(seqs(&linear_extensions(&speh)), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn mixed_word_extensions_match_brute_force() {
        // independent oracle: filter all of S_3 by the two arrow constraints
        let w = hook_word(&base(), 1, 1, zero()).unwrap();
        let mut brute: Vec<Vec<u32>> = Vec::new();
        let perms3 = [
            [0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0],
        ];
        for p in perms3 {
            let pos = |v: u32| p.iter().position(|&x| x == v).unwrap();
            // slot 1 LEFT: 0 after 1; slot 2 RIGHT: 1 before 2
            if pos(0) > pos(1) && pos(1) < pos(2) {
                brute.push(p.to_vec());
            }
        }
        brute.sort();
        assert_eq!(brute, vec![vec![1, 0, 2], vec![1, 2, 0]]);
        assert_eq!(seqs(&linear_extensions(&w)), brute);
    }

    #[test]
    fn classification_inverts_enumeration() {
        assert_eq!(
            word_of_permutation(&base(), zero(), &[2, 1, 0]).unwrap(),
            ArrowWord::steinberg(&base(), 3, zero())
        );
        assert_eq!(
            word_of_permutation(&base(), zero(), &[0, 1, 2]).unwrap(),
            ArrowWord::speh(&base(), 3, zero())
        );
        assert_eq!(
            word_of_permutation(&base(), zero(), &[1, 0, 2]).unwrap(),
            hook_word(&base(), 1, 1, zero()).unwrap()
        );
    }

    #[test]
    fn extension_sets_partition_s4() {
        let mut seen = SeqMultiset::new();
        for mask in 0..8u32 {
            let slots: Vec<Direction> = (0..3)
                .map(|j| if mask >> j & 1 == 1 { Direction::Right } else { Direction::Left })
                .collect();
            let w = ArrowWord::from_slots(&base(), zero(), &slots);
            for (seq, c) in linear_extensions(&w).entries() {
                seq_add(&mut seen, seq.clone(), c.clone());
                let back = word_of_permutation(&base(), zero(), seq).unwrap();
                assert_eq!(back, w);
            }
        }
        assert_eq!(seen.len(), 24);
        assert!(seen.values().all(|c| c.is_one()));
    }

    #[test]
    fn closed_forms_steinberg() {
        let sp5 = ArrowWord::steinberg(&base(), 5, zero());
        match two_block_jacquet(&sp5, 2, JacquetSide::Standard).unwrap() {
            TwoBlockJacquet::Closed { first, second } => {
                assert_eq!(first, ArrowWord::steinberg(&base(), 2, zero()).shifted_half(3));
                assert_eq!(
                    second.unwrap(),
                    ArrowWord::steinberg(&base(), 3, zero()).shifted_half(-2)
                );
            }
            other => panic!("expected closed form, got {other:?}"),
        }
    }

    #[test]
    fn closed_forms_speh_opposite() {
        let sp5 = ArrowWord::speh(&base(), 5, zero());
        match two_block_jacquet(&sp5, 2, JacquetSide::Opposite).unwrap() {
            TwoBlockJacquet::Closed { first, second } => {
                assert_eq!(first, ArrowWord::speh(&base(), 2, zero()).shifted_half(3));
                assert_eq!(
                    second.unwrap(),
                    ArrowWord::speh(&base(), 3, zero()).shifted_half(-2)
                );
            }
            other => panic!("expected closed form, got {other:?}"),
        }
    }

    #[test]
    fn indivisible_height_is_zero() {
        let b2 = CuspidalDatum::self_dual(2, "pi");
        let sp3 = ArrowWord::steinberg(&b2, 3, zero());
        assert_eq!(
            jacquet_at_height(&sp3, 3, JacquetSide::Standard).unwrap(),
            TwoBlockJacquet::Zero
        );
        assert!(matches!(
            jacquet_at_height(&sp3, 4, JacquetSide::Standard).unwrap(),
            TwoBlockJacquet::Closed { .. }
        ));
    }

    #[test]
    fn general_word_raw_split() {
        let w = hook_word(&base(), 1, 1, zero()).unwrap();
        match two_block_jacquet(&w, 1, JacquetSide::Standard).unwrap() {
            TwoBlockJacquet::Split(pairs) => {
                // both extensions start with the value 1
                assert_eq!(pairs.len(), 2);
                assert!(pairs.iter().all(|((head, _), _)| head == &vec![1]));
            }
            other => panic!("expected raw split, got {other:?}"),
        }
    }

    #[test]
    fn speh_of_steinberg_degenerate_rows() {
        let sig = speh_of_steinberg_extensions(1, 4).unwrap();
        assert_eq!(seqs(&sig), vec![vec![3, 2, 1, 0]]);
        let sig = speh_of_steinberg_extensions(4, 1).unwrap();
        assert_eq!(seqs(&sig), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn speh_of_steinberg_two_by_two() {
        // oracle by hand: 6 shuffles of (1,0) with (2,1) minus 4 shuffles of
        // (2,1,0) with (1) leave exactly these two sequences
        let sig = speh_of_steinberg_extensions(2, 2).unwrap();
        assert_eq!(seqs(&sig), vec![vec![1, 0, 2, 1], vec![1, 2, 0, 1]]);
        let oracle = speh_steinberg_oracle(2, 2).unwrap();
        assert_eq!(&oracle, sig.raw());
    }

    #[test]
    fn oracle_matches_extensions_small() {
        for (s, t) in [(1, 1), (1, 3), (3, 1), (2, 2), (2, 3), (3, 2), (2, 4)] {
            let sig = speh_of_steinberg_extensions(s, t).unwrap();
            let oracle = speh_steinberg_oracle(s, t).unwrap();
            assert_eq!(&oracle, sig.raw(), "mismatch at (s, t) = ({s}, {t})");
        }
    }

    #[test]
    fn prefix_vanishing_two_by_two() {
        assert!(red_prefix_vanishing(2, 2, 3, PrefixOrientation::SteinbergPrefix).unwrap());
        // witness (1,0,2,1) starts with a length-2 decreasing run
        assert!(!red_prefix_vanishing(2, 2, 2, PrefixOrientation::SteinbergPrefix).unwrap());
        assert!(red_prefix_vanishing(2, 2, 5, PrefixOrientation::SpehPrefix).unwrap());
    }

    #[test]
    fn red_closed_form_branches() {
        let b = base();
        // s = 1, t = 3: Speh_1(Sp_2) = Sp_2, sign (+1), Ξ^{(t-1)(sg-1)/2} = Ξ^{g-1}
        let terms = red_closed_form(&b, 1, 3, 3).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].coeff, BigInt::one());
        // g = 1: Ξ^{(t-1)(sg-1)/2} = Ξ^0 and the center shift vanishes
        assert_eq!(terms[0].twist, WeightTwist::xi_half(0));
        assert_eq!(
            terms[0].shape.as_word(&b).unwrap(),
            ArrowWord::steinberg(&b, 2, zero())
        );
        // s = 3, t = 1: Speh_2 shifted
        let terms = red_closed_form(&b, 3, 1, 3).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(
            terms[0].shape.as_word(&b).unwrap(),
            ArrowWord::speh(&b, 2, zero()).shifted_half(-2)
        );
        assert_eq!(terms[0].twist, WeightTwist::xi_half(2 * 2));
        // s = t = 2: both branches
        let terms = red_closed_form(&b, 2, 2, 2).unwrap();
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].coeff, -BigInt::one());
        assert_eq!(terms[1].coeff, BigInt::one());
    }

    #[test]
    fn domain_errors() {
        let sp3 = ArrowWord::steinberg(&base(), 3, zero());
        assert!(matches!(
            two_block_jacquet(&sp3, 0, JacquetSide::Standard),
            Err(CalcError::Domain(_))
        ));
        assert!(matches!(
            two_block_jacquet(&sp3, 4, JacquetSide::Standard),
            Err(CalcError::Domain(_))
        ));
        assert!(matches!(
            red_prefix_vanishing(2, 2, 0, PrefixOrientation::SteinbergPrefix),
            Err(CalcError::Domain(_))
        ));
        assert!(matches!(
            word_of_permutation(&base(), zero(), &[0, 0, 1]),
            Err(CalcError::Domain(_))
        ));
    }

    #[test]
    fn red_closed_form_rejects_wrong_strip() {
        assert!(red_closed_form(&base(), 2, 3, 2).is_err());
    }
}
