//! JSON schema for every exportable object.
//!
//! Numbers that may exceed machine precision (coefficients, exponents) are
//! carried as strings: rationals as `"p"`/`"p/q"`, integers in decimal.
//! Serialisation is deterministic (sorted term order everywhere), and
//! parsing an exported document back yields the identical structure.

use crate::error::CalcError;
use crate::groth::VirtualRep;
use crate::jacquet::Signature;
use crate::segment::{ArrowWord, CuspidalDatum};
use crate::sheaf::{SymbolKind, VirtualSheaf};
use crate::spectral::{Differential, GlobalSs, LocalCase, MlComplex, SsPage, TableFunctor};
use crate::twist::{rational_parse, rational_str, RecFactor, WeightTwist};
use crate::Result;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseDto {
    pub rank: u32,
    pub label: String,
    pub dual_label: String,
}

impl From<&CuspidalDatum> for BaseDto {
    fn from(b: &CuspidalDatum) -> Self {
        BaseDto {
            rank: b.rank(),
            label: b.label().to_string(),
            dual_label: b.dual_label().to_string(),
        }
    }
}

impl BaseDto {
    pub fn to_core(&self) -> Result<CuspidalDatum> {
        CuspidalDatum::new(self.rank, &self.label, &self.dual_label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordDto {
    pub base: BaseDto,
    pub center: String,
    pub runs: String,
}

impl From<&ArrowWord> for WordDto {
    fn from(w: &ArrowWord) -> Self {
        WordDto {
            base: w.base().into(),
            center: rational_str(w.center()),
            runs: w.runs_text(),
        }
    }
}

impl WordDto {
    pub fn to_core(&self) -> Result<ArrowWord> {
        let base = self.base.to_core()?;
        ArrowWord::parse(&base, &format!("{}({}) {}", self.base.label, self.center, self.runs))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistDto {
    pub tate: String,
    pub rec: String,
}

impl From<&WeightTwist> for TwistDto {
    fn from(t: &WeightTwist) -> Self {
        TwistDto {
            tate: rational_str(t.tate()),
            rec: match t.rec() {
                RecFactor::None => "none".to_string(),
                RecFactor::Cuspidal => "pi".to_string(),
                RecFactor::SteinbergFamily(s) => format!("sp:{s}"),
            },
        }
    }
}

impl TwistDto {
    pub fn to_core(&self) -> Result<WeightTwist> {
        let rec = match self.rec.as_str() {
            "none" => RecFactor::None,
            "pi" => RecFactor::Cuspidal,
            other => match other.strip_prefix("sp:") {
                Some(n) => RecFactor::SteinbergFamily(
                    n.parse()
                        .map_err(|_| CalcError::Parse(format!("bad rec tag {other:?}")))?,
                ),
                None => return Err(CalcError::Parse(format!("bad rec tag {other:?}"))),
            },
        };
        WeightTwist::new(rational_parse(&self.tate)?, rec)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepTermDto {
    pub word: WordDto,
    pub twist: TwistDto,
    pub coeff: String,
}

pub type VirtualRepDto = Vec<RepTermDto>;

pub fn rep_to_dto(v: &VirtualRep) -> VirtualRepDto {
    v.terms()
        .map(|((w, t), c)| RepTermDto {
            word: w.into(),
            twist: t.into(),
            coeff: c.to_string(),
        })
        .collect()
}

pub fn rep_from_dto(dto: &VirtualRepDto) -> Result<VirtualRep> {
    let mut v = VirtualRep::zero();
    for term in dto {
        let coeff: BigInt = term
            .coeff
            .parse()
            .map_err(|_| CalcError::Parse(format!("bad coefficient {:?}", term.coeff)))?;
        v.add_term(&term.word.to_core()?, &term.twist.to_core()?, coeff);
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafTermDto {
    pub kind: String,
    pub g: u32,
    pub t: u32,
    pub base: BaseDto,
    pub word: WordDto,
    pub twist: TwistDto,
    pub ambient: u32,
    pub coeff: String,
}

pub type VirtualSheafDto = Vec<SheafTermDto>;

pub fn sheaf_to_dto(v: &VirtualSheaf) -> VirtualSheafDto {
    v.terms()
        .map(|(sym, c)| SheafTermDto {
            kind: match sym.kind {
                SymbolKind::JShriek => "j!".into(),
                SymbolKind::Intermediate => "j!*".into(),
                SymbolKind::RjStar => "Rj*".into(),
                SymbolKind::HtRestriction => "ht".into(),
            },
            g: sym.g,
            t: sym.t,
            base: (&sym.base).into(),
            word: (&sym.word).into(),
            twist: (&sym.twist).into(),
            ambient: sym.ambient,
            coeff: c.to_string(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureEntryDto {
    pub seq: Vec<u32>,
    pub mult: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureDto {
    pub base: BaseDto,
    pub offset: String,
    pub entries: Vec<SignatureEntryDto>,
}

pub fn signature_to_dto(sig: &Signature) -> SignatureDto {
    SignatureDto {
        base: sig.base().into(),
        offset: rational_str(sig.offset()),
        entries: sig
            .entries()
            .map(|(seq, c)| SignatureEntryDto {
                seq: seq.clone(),
                mult: c.to_string(),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialDto {
    pub from: (i64, i64),
    pub to: (i64, i64),
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stratum: Option<u32>,
    pub shared_word: WordDto,
    pub shared_twist: TwistDto,
}

impl From<&Differential> for DifferentialDto {
    fn from(d: &Differential) -> Self {
        DifferentialDto {
            from: d.from,
            to: d.to,
            stratum: d.stratum,
            shared_word: (&d.shared.0).into(),
            shared_twist: (&d.shared.1).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepCellDto {
    pub i: i64,
    pub j: i64,
    pub entry: VirtualRepDto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepPageDto {
    pub page: u32,
    /// Coordinate frame of the page-one grid.
    pub frame: String,
    pub cells: Vec<RepCellDto>,
    pub differentials: Vec<DifferentialDto>,
}

pub fn rep_page_to_dto(p: &SsPage<VirtualRep>) -> RepPageDto {
    RepPageDto {
        page: p.page,
        frame: "E1".into(),
        cells: p
            .cells
            .iter()
            .map(|(&(i, j), entry)| RepCellDto {
                i,
                j,
                entry: rep_to_dto(entry),
            })
            .collect(),
        differentials: p.differentials.iter().map(Into::into).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafCellDto {
    pub i: i64,
    pub j: i64,
    pub entry: VirtualSheafDto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafPageDto {
    pub page: u32,
    pub frame: String,
    pub cells: Vec<SheafCellDto>,
    pub differentials: Vec<DifferentialDto>,
}

pub fn sheaf_page_to_dto(p: &SsPage<VirtualSheaf>) -> SheafPageDto {
    SheafPageDto {
        page: p.page,
        frame: "E1".into(),
        cells: p
            .cells
            .iter()
            .map(|(&(i, j), entry)| SheafCellDto {
                i,
                j,
                entry: sheaf_to_dto(entry),
            })
            .collect(),
        differentials: p.differentials.iter().map(Into::into).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MgrRowDto {
    pub k: i64,
    pub strata: Vec<MgrEntryDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MgrEntryDto {
    pub t: u32,
    pub twist: TwistDto,
}

pub fn mgr_to_dto(s: u32) -> Vec<MgrRowDto> {
    (1 - s as i64..s as i64)
        .map(|k| MgrRowDto {
            k,
            strata: crate::sheaf::mgr(s, k)
                .into_iter()
                .map(|(t, tw)| MgrEntryDto {
                    t,
                    twist: (&tw).into(),
                })
                .collect(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UTableDto {
    pub d: u32,
    pub g: u32,
    pub s: u32,
    pub degrees: Vec<UTableEntryDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UTableEntryDto {
    pub degree: i64,
    pub word: WordDto,
    pub twist: TwistDto,
}

pub fn utable_to_dto(base: &CuspidalDatum, d: u32, s: u32) -> Result<UTableDto> {
    let mut degrees = Vec::new();
    for i in 0..s as i64 {
        if let Some((word, twist)) = crate::spectral::u_cohomology(base, d, s, i)? {
            degrees.push(UTableEntryDto {
                degree: d as i64 - s as i64 + i,
                word: (&word).into(),
                twist: (&twist).into(),
            });
        }
    }
    Ok(UTableDto {
        d,
        g: base.rank(),
        s,
        degrees,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlDto {
    pub s: u32,
    pub g: u32,
    pub global_twist: TwistDto,
    pub entries: Vec<UTableEntryDto>,
}

pub fn ml_to_dto(base: &CuspidalDatum, ml: &MlComplex, s: u32) -> MlDto {
    MlDto {
        s,
        g: base.rank(),
        global_twist: (&ml.global).into(),
        entries: ml
            .entries
            .iter()
            .enumerate()
            .map(|(k, (word, twist))| UTableEntryDto {
                degree: k as i64,
                word: word.into(),
                twist: twist.into(),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohTableDto {
    pub case: String,
    pub g: u32,
    pub t: u32,
    pub s: u32,
    pub functor: String,
    pub degrees: Vec<CohTableEntryDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohTableEntryDto {
    pub degree: i64,
    pub entry: VirtualRepDto,
}

pub fn cohtable_to_dto(
    base: &CuspidalDatum,
    case: LocalCase,
    t: u32,
    s: u32,
    functor: TableFunctor,
) -> Result<CohTableDto> {
    let table = crate::spectral::cohomology_table(base, case, t, s, functor)?;
    Ok(CohTableDto {
        case: case_tag(case).into(),
        g: base.rank(),
        t,
        s,
        functor: match functor {
            TableFunctor::JShriek => "j!".into(),
            TableFunctor::JShriekStar => "j!*".into(),
            TableFunctor::RjStar => "Rj*".into(),
        },
        degrees: table
            .iter()
            .map(|(&degree, entry)| CohTableEntryDto {
                degree,
                entry: rep_to_dto(entry),
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbutmentEntryDto {
    pub degree: i64,
    pub entry: VirtualRepDto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalSsDto {
    pub case: String,
    pub d: u32,
    pub g: u32,
    pub page: RepPageDto,
    pub abutment: Vec<AbutmentEntryDto>,
}

pub fn case_tag(case: LocalCase) -> &'static str {
    match case {
        LocalCase::Sp => "sp",
        LocalCase::Speh => "speh",
    }
}

pub fn global_ss_to_dto(d: u32, g: u32, gss: &GlobalSs) -> GlobalSsDto {
    GlobalSsDto {
        case: case_tag(gss.case).into(),
        d,
        g,
        page: rep_page_to_dto(&gss.page),
        abutment: gss
            .abutment
            .iter()
            .map(|(&degree, entry)| AbutmentEntryDto {
                degree,
                entry: rep_to_dto(entry),
            })
            .collect(),
    }
}

/// Canonical JSON text for any serialisable document.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| CalcError::Parse(e.to_string()))
}

/// Parse a document produced by [`to_json`].
pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| CalcError::Parse(e.to_string()))
}
