//! Component codes over the chain rings `A_i`: standard forms, the
//! condition-(5) family, duals, the self-dual templates, and the counts.

mod count;
mod duals;
mod forms;
mod selfdual;
mod span;
mod system;

use std::fmt;
use std::str::FromStr;

pub use count::{
    cond5_count, count_selfdual, count_selfdual_published, length2_module_count, omega, omega_published,
    omega_zero, selfrec_term, ClassTerm, SelfDualCount, MAX_COUNT_LAMBDA,
};
pub use duals::{dual_component, Dual};
pub use forms::{enumerate_all_length2, log2_size, CaseParams, StandardForm};
pub use selfdual::{
    dagger_at, dagger_count, dagger_index, ddagger_at, ddagger_index, ddagger_count, enumerate_condition5,
    enumerate_selfdual_pair, enumerate_selfdual_selfrec, pair_components, SelfDualChoice,
};
pub use span::{check_condition5, contains, image_rows, module_basis, same_module};
pub use system::{DihedralSystem, SelfDualSpec};

use crate::chainring::ChainRingCtx;
use crate::crt::GenRow;
use crate::error::{Error, Result};

/// Which template a component generator matrix was produced from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// Standard form 1..=9 of an arbitrary length-2 code.
    Lemma(u8),
    /// Condition-(5) family I..=V (stored as 1..=5) for a self-reciprocal factor.
    Cond5(u8),
    /// Self-dual template †-1..=3 for a self-reciprocal factor.
    Dagger(u8),
    /// Self-dual template ‡-1..=5 for the lower member of a reciprocal pair.
    DDagger(u8),
    /// Rows of the reciprocal partner, obtained as the image of another component.
    Partner,
}

const ROMAN: [&str; 5] = ["I", "II", "III", "IV", "V"];

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseTag::Lemma(n) => write!(f, "case-{n}"),
            CaseTag::Cond5(n) => write!(f, "cond5-{}", ROMAN[(*n as usize).clamp(1, 5) - 1]),
            CaseTag::Dagger(n) => write!(f, "dagger-{n}"),
            CaseTag::DDagger(n) => write!(f, "ddagger-{n}"),
            CaseTag::Partner => write!(f, "partner"),
        }
    }
}

impl FromStr for CaseTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown case tag {s:?}"));
        if s == "partner" {
            return Ok(CaseTag::Partner);
        }
        let (head, tail) = s.rsplit_once('-').ok_or_else(bad)?;
        let num = |max: u8| -> Result<u8> {
            tail.parse::<u8>().ok().filter(|n| (1..=max).contains(n)).ok_or_else(bad)
        };
        match head {
            "case" => Ok(CaseTag::Lemma(num(9)?)),
            "dagger" => Ok(CaseTag::Dagger(num(3)?)),
            "ddagger" => Ok(CaseTag::DDagger(num(5)?)),
            "cond5" => ROMAN
                .iter()
                .position(|r| *r == tail)
                .map(|p| CaseTag::Cond5(p as u8 + 1))
                .ok_or_else(bad),
            _ => Err(bad()),
        }
    }
}

/// A length-2 code over `A_i` with the template it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentCode {
    pub i: usize,
    pub tag: CaseTag,
    pub params: CaseParams,
    pub rows: Vec<GenRow>,
}

impl ComponentCode {
    pub fn from_form(ctx: &ChainRingCtx, i: usize, form: &StandardForm) -> Result<Self> {
        Ok(ComponentCode { i, tag: CaseTag::Lemma(form.case()), params: form.params(), rows: form.rows(ctx)? })
    }

    /// Builds a component from a tag and its parameters; the rows are the
    /// tag's template. Partner rows cannot be built this way.
    pub fn from_tag(ctx: &ChainRingCtx, i: usize, tag: CaseTag, params: CaseParams) -> Result<Self> {
        let form = standard_form_of(tag, &params, ctx.smax())?;
        Ok(ComponentCode { i, tag, params, rows: form.rows(ctx)? })
    }

    /// The standard form underlying the tag (every tag except `Partner`).
    pub fn standard_form(&self, smax: usize) -> Result<StandardForm> {
        standard_form_of(self.tag, &self.params, smax)
    }

    pub fn log2_size(&self, ctx: &ChainRingCtx) -> usize {
        log2_size(ctx, &self.rows)
    }
}

/// Maps a template tag to the standard form it instantiates.
fn standard_form_of(tag: CaseTag, p: &CaseParams, smax: usize) -> Result<StandardForm> {
    let need = |v: &Option<crate::Poly>, n: &str| {
        v.clone().ok_or_else(|| Error::InvalidArgument(format!("{tag} needs parameter {n}")))
    };
    let need_k = || p.k.ok_or_else(|| Error::InvalidArgument(format!("{tag} needs parameter k")));
    let need_j = || p.j.ok_or_else(|| Error::InvalidArgument(format!("{tag} needs parameter j")));
    let half = smax / 2;
    let split_k = || -> Result<usize> {
        let k = need_k()?;
        if k < 1 || k >= half {
            return Err(Error::InvalidArgument(format!("{tag}: k={k} outside 1..={}", half.saturating_sub(1))));
        }
        Ok(k)
    };
    match tag {
        CaseTag::Lemma(n) => StandardForm::from_params(n, p),
        CaseTag::Cond5(n) => Ok(match n {
            1 => StandardForm::One { a: need(&p.a, "a")? },
            2 => StandardForm::Two { k: need_k()?, a: need(&p.a, "a")? },
            3 => StandardForm::Five { k: need_k()? },
            4 => StandardForm::Six { j: need_j()?, c: need(&p.c, "c")? },
            5 => StandardForm::Seven { k: need_k()?, j: need_j()?, c: need(&p.c, "c")? },
            _ => return Err(Error::InvalidArgument(format!("bad tag {tag:?}"))),
        }),
        CaseTag::Dagger(n) => Ok(match n {
            1 => StandardForm::One { a: need(&p.a, "a")? },
            2 => StandardForm::Five { k: half },
            3 => {
                let k = split_k()?;
                StandardForm::Seven { k, j: smax - 2 * k, c: need(&p.c, "c")? }
            }
            _ => return Err(Error::InvalidArgument(format!("bad tag {tag:?}"))),
        }),
        CaseTag::DDagger(n) => Ok(match n {
            1 => StandardForm::One { a: need(&p.a, "a")? },
            2 => StandardForm::Three { b: need(&p.b, "b")? },
            3 => StandardForm::Five { k: half },
            4 => {
                let k = split_k()?;
                StandardForm::Seven { k, j: smax - 2 * k, c: need(&p.c, "c")? }
            }
            5 => {
                let k = split_k()?;
                StandardForm::Nine { k, j: smax - 2 * k, c: need(&p.c, "c")? }
            }
            _ => return Err(Error::InvalidArgument(format!("bad tag {tag:?}"))),
        }),
        CaseTag::Partner => Err(Error::InvalidArgument("partner rows carry no standard form".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip_through_text() {
        let mut tags: Vec<CaseTag> = (1..=9).map(CaseTag::Lemma).collect();
        tags.extend((1..=5).map(CaseTag::Cond5));
        tags.extend((1..=3).map(CaseTag::Dagger));
        tags.extend((1..=5).map(CaseTag::DDagger));
        tags.push(CaseTag::Partner);
        for t in tags {
            assert_eq!(t.to_string().parse::<CaseTag>().unwrap(), t);
        }
        for bad in ["case-0", "case-10", "dagger-4", "cond5-VI", "x-1", "ddagger"] {
            assert!(bad.parse::<CaseTag>().is_err(), "{bad}");
        }
    }
}
