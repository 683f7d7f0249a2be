//! Weight twists on a single rational axis.
//!
//! Galois-side twists come in three syntactic flavours — `|Art^{-1}|^x`,
//! `Ξ^x` with `Ξ(1) = 1/q`, and `rec^∨(π)(m)` — but they all act through one
//! rational exponent. We normalise to the `|Art^{-1}|` axis ("tate"): an
//! `|Art^{-1}|^r` twist has tate `r`, the character `Ξ^x` has tate `-x`, and
//! `rec^∨(π)(m)` carries tate `m` together with the `rec(π)` tag.

use crate::error::CalcError;
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The non-abelian factor a twist may carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RecFactor {
    /// Plain character twist.
    None,
    /// `rec^∨(π)` for the fixed cuspidal datum.
    Cuspidal,
    /// `rec^∨(Sp_s(π))`; the attached integer is `s`.
    SteinbergFamily(u32),
}

/// A half-integer twist on the tate axis, possibly decorated with a
/// `rec`-factor tag.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightTwist {
    tate: BigRational,
    rec: RecFactor,
}

fn half(n: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(2))
}

impl WeightTwist {
    /// The trivial twist.
    pub fn zero() -> Self {
        WeightTwist {
            tate: BigRational::zero(),
            rec: RecFactor::None,
        }
    }

    /// Checked constructor; the exponent must be a half-integer.
    pub fn new(tate: BigRational, rec: RecFactor) -> Result<Self> {
        let den = tate.denom();
        if !den.is_one() && *den != BigInt::from(2) {
            return Err(CalcError::MalformedTwist(format!(
                "exponent {tate} is not a half-integer"
            )));
        }
        Ok(WeightTwist { tate, rec })
    }

    /// `|Art^{-1}|^{n/2}`.
    pub fn art_half(n: i64) -> Self {
        WeightTwist {
            tate: half(n),
            rec: RecFactor::None,
        }
    }

    /// `Ξ^{n/2}`, i.e. tate `-n/2`.
    pub fn xi_half(n: i64) -> Self {
        WeightTwist {
            tate: half(-n),
            rec: RecFactor::None,
        }
    }

    /// `rec^∨(π)(n/2)`.
    pub fn rec_half(n: i64) -> Self {
        WeightTwist {
            tate: half(n),
            rec: RecFactor::Cuspidal,
        }
    }

    /// `rec^∨(Sp_s(π))(n/2)`.
    pub fn rec_steinberg_half(s: u32, n: i64) -> Self {
        WeightTwist {
            tate: half(n),
            rec: RecFactor::SteinbergFamily(s),
        }
    }

    pub fn tate(&self) -> &BigRational {
        &self.tate
    }

    pub fn rec(&self) -> RecFactor {
        self.rec
    }

    /// Multiply by a further character twist; tate exponents add.
    pub fn shifted(&self, delta: &BigRational) -> Self {
        WeightTwist {
            tate: &self.tate + delta,
            rec: self.rec,
        }
    }

    pub fn shifted_half(&self, n: i64) -> Self {
        self.shifted(&half(n))
    }

    /// Attach the `rec^∨(π)` tag to a plain twist.
    pub fn with_cuspidal_rec(&self) -> Self {
        WeightTwist {
            tate: self.tate.clone(),
            rec: RecFactor::Cuspidal,
        }
    }

    /// Frobenius-semisimplification. `rec^∨(Sp_s(π))` splits into the ladder
    /// of `s` cuspidal rec-twists, shifted by `(s-1)/2, (s-3)/2, …, (1-s)/2`.
    pub fn semisimplify(&self) -> Vec<WeightTwist> {
        match self.rec {
            RecFactor::None | RecFactor::Cuspidal => vec![self.clone()],
            RecFactor::SteinbergFamily(s) => (0..s)
                .map(|m| WeightTwist {
                    tate: &self.tate + half(s as i64 - 1 - 2 * m as i64),
                    rec: RecFactor::Cuspidal,
                })
                .collect(),
        }
    }

    /// Dual twist: the exponent changes sign, the tag is kept.
    pub fn dual(&self) -> Self {
        WeightTwist {
            tate: -self.tate.clone(),
            rec: self.rec,
        }
    }

    /// Tensor two twists: tate exponents add, at most one rec factor may be
    /// present.
    pub fn compose(&self, other: &WeightTwist) -> Result<WeightTwist> {
        match (self.rec, other.rec) {
            (_, RecFactor::None) => Ok(self.shifted(other.tate())),
            (RecFactor::None, r) => WeightTwist::new(self.tate() + other.tate(), r),
            _ => Err(CalcError::UnsupportedSupport(
                "product of two rec-twisted factors".into(),
            )),
        }
    }
}

impl fmt::Display for WeightTwist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.rec {
            RecFactor::None => String::new(),
            RecFactor::Cuspidal => "rec".to_string(),
            RecFactor::SteinbergFamily(s) => format!("recSp{s}"),
        };
        if tag.is_empty() {
            write!(f, "({})", rational_str(&self.tate))
        } else {
            write!(f, "{tag}({})", rational_str(&self.tate))
        }
    }
}

/// Render a rational as `p` or `p/q` (used by all textual forms).
pub fn rational_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p` or `p/q`.
pub fn rational_parse(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let numer: BigInt = n
        .parse()
        .map_err(|_| CalcError::Parse(format!("bad rational {s:?}")))?;
    let denom: BigInt = d
        .parse()
        .map_err(|_| CalcError::Parse(format!("bad rational {s:?}")))?;
    if denom.is_zero() || denom.is_negative() {
        return Err(CalcError::Parse(format!("bad rational {s:?}")));
    }
    Ok(BigRational::new(numer, denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xi_is_negative_art() {
        assert_eq!(WeightTwist::xi_half(3).tate(), WeightTwist::art_half(-3).tate());
    }

    #[test]
    fn rec_combined_with_xi() {
        // rec(m) · Ξ^x carries tate m - x.
        let m = WeightTwist::rec_half(-7); // rec(-7/2)
        let combined = m.shifted(WeightTwist::xi_half(5).tate()); // · Ξ^{5/2}
        assert_eq!(combined, WeightTwist::rec_half(-12));
    }

    #[test]
    fn steinberg_family_ladder() {
        // rec^∨(Sp_2(π))(-1/2) semisimplifies to rec(0) + rec(-1).
        let t = WeightTwist::rec_steinberg_half(2, -1);
        let ss = t.semisimplify();
        assert_eq!(ss, vec![WeightTwist::rec_half(0), WeightTwist::rec_half(-2)]);
    }

    #[test]
    fn quarter_integers_rejected() {
        let q = BigRational::new(BigInt::from(1), BigInt::from(4));
        assert!(WeightTwist::new(q, RecFactor::None).is_err());
    }
}
