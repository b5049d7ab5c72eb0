//! Record formats.
//!
//! A spec record is one JSON object per line:
//!
//! ```text
//! {"v":1,"m":1,"index":"3","components":[{"i":0,"tag":"dagger-1","a":"1110"}]}
//! ```
//!
//! Polynomials are ascending-coefficient bitstrings whose length is exactly
//! `(domain level)·d`, so a record pins its ring without further context.
//! `index` is a decimal string because indices outgrow 64 bits.
//!
//! A matrix file is a `#` header line followed by one row bitstring per line.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::analysis::BinaryCode;
use crate::codes::{CaseParams, CaseTag, DihedralSystem, SelfDualChoice, SelfDualSpec};
use crate::error::{Error, Result};
use crate::gf2poly::Poly;

pub const RECORD_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub i: usize,
    pub tag: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub n: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub self_dual: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doubly_even: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_distance: Option<usize>,
    /// `true` when `min_distance` is only an upper bound from an early abort.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub aborted: bool,
    /// Nonzero `(weight, count)` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_enumerator: Option<Vec<(usize, u64)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecRecord {
    pub v: u32,
    pub m: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<String>,
    pub components: Vec<ComponentRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<AnalysisRecord>,
    /// Generator rows of the assembled code, when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<String>>,
}

impl SpecRecord {
    pub fn to_line(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_line(line: &str) -> Result<Self> {
        let rec: SpecRecord = serde_json::from_str(line.trim())?;
        if rec.v != RECORD_VERSION {
            return Err(Error::Parse(format!("unsupported record version {} (expected {RECORD_VERSION})", rec.v)));
        }
        Ok(rec)
    }
}

/// Domain level of each free polynomial of a template, in units of `f`-powers.
fn levels(tag: CaseTag, k: Option<usize>, smax: usize) -> (usize, usize, usize) {
    let split = k.map(|k| smax.saturating_sub(2 * k)).unwrap_or(0);
    match tag {
        CaseTag::Dagger(1) | CaseTag::DDagger(1) => (smax, 0, 0),
        CaseTag::DDagger(2) => (0, smax - 1, 0),
        CaseTag::Dagger(3) | CaseTag::DDagger(4) | CaseTag::DDagger(5) => (0, 0, split),
        _ => (0, 0, 0),
    }
}

fn encode(p: &Option<Poly>, level: usize, d: usize) -> Option<String> {
    p.as_ref().map(|p| p.to_bitstring(level * d))
}

fn decode(name: &str, s: &Option<String>, level: usize, d: usize, comp: usize, tag: &str) -> Result<Option<Poly>> {
    let Some(s) = s else { return Ok(None) };
    let want = level * d;
    if want == 0 {
        return Err(Error::InvalidArgument(format!("component {comp} ({tag}): takes no parameter {name}")));
    }
    if s.len() != want {
        return Err(Error::InvalidArgument(format!(
            "component {comp} ({tag}): {name} has {} digits, expected {want}",
            s.len()
        )));
    }
    Poly::from_bitstring(s)
        .map(Some)
        .map_err(|e| Error::InvalidArgument(format!("component {comp} ({tag}): {name}: {e}")))
}

pub fn spec_to_record(sys: &DihedralSystem, spec: &SelfDualSpec, index: Option<&BigUint>) -> SpecRecord {
    let smax = sys.smax();
    let components = spec
        .choices
        .iter()
        .enumerate()
        .map(|(i, ch)| {
            let tag = ch.tag();
            let p = ch.params();
            let d = sys.fs.degree(i);
            let (la, lb, lc) = levels(tag, p.k, smax);
            ComponentRecord {
                i,
                tag: tag.to_string(),
                k: p.k,
                a: encode(&p.a, la, d),
                b: encode(&p.b, lb, d),
                c: encode(&p.c, lc, d),
            }
        })
        .collect();
    SpecRecord { v: RECORD_VERSION, m: sys.params.m, index: index.map(|i| i.to_string()), components, analysis: None, matrix: None }
}

/// Parses and validates a record against `sys`. Errors name the offending
/// component. A present `index` must agree with the spec's canonical index.
pub fn record_to_spec(sys: &DihedralSystem, rec: &SpecRecord) -> Result<SelfDualSpec> {
    if rec.m != sys.params.m {
        return Err(Error::InvalidArgument(format!("record is for m={}, system has m={}", rec.m, sys.params.m)));
    }
    if rec.components.len() != sys.class_count() {
        return Err(Error::InvalidArgument(format!(
            "record has {} components, m={} needs {}",
            rec.components.len(),
            rec.m,
            sys.class_count()
        )));
    }
    let smax = sys.smax();
    let mut choices = Vec::with_capacity(rec.components.len());
    for (pos, c) in rec.components.iter().enumerate() {
        if c.i != pos {
            return Err(Error::InvalidArgument(format!("component {pos}: has i={}, expected {pos}", c.i)));
        }
        let tag: CaseTag = c.tag.parse().map_err(|e| Error::InvalidArgument(format!("component {pos}: {e}")))?;
        let d = sys.fs.degree(pos);
        if let (Some(k), CaseTag::Dagger(3) | CaseTag::DDagger(4) | CaseTag::DDagger(5)) = (c.k, tag) {
            if k == 0 || 2 * k >= smax {
                return Err(Error::InvalidArgument(format!("component {pos} ({tag}): k={k} outside 1..{}", smax / 2)));
            }
        }
        let (la, lb, lc) = levels(tag, c.k, smax);
        let params = CaseParams {
            k: c.k,
            j: None,
            a: decode("a", &c.a, la, d, pos, &c.tag)?,
            b: decode("b", &c.b, lb, d, pos, &c.tag)?,
            c: decode("c", &c.c, lc, d, pos, &c.tag)?,
        };
        let choice =
            SelfDualChoice::from_tag(tag, &params).map_err(|e| Error::InvalidArgument(format!("component {pos}: {e}")))?;
        choices.push(choice);
    }
    let spec = SelfDualSpec { choices };
    // Full validation (ranges, W-set membership) happens while building the components.
    sys.components(&spec)?;
    if let Some(idx) = &rec.index {
        let given: BigUint =
            idx.parse().map_err(|_| Error::Parse(format!("record index {idx:?} is not a decimal integer")))?;
        let actual = sys.index_of(&spec)?;
        if given != actual {
            return Err(Error::InvalidArgument(format!("record index {given} does not match its components ({actual})")));
        }
    }
    Ok(spec)
}

/// Matrix file: `# n=<n> k=<k>` then `k` rows of `n` digits.
pub fn write_matrix(code: &BinaryCode) -> String {
    let mut out = format!("# n={} k={}\n", code.n, code.k());
    for row in code.to_bitstrings() {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

pub fn read_matrix(text: &str) -> Result<BinaryCode> {
    let mut declared: Option<(usize, usize)> = None;
    let mut rows = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(h) = line.strip_prefix('#') {
            let mut n = None;
            let mut k = None;
            for tok in h.split_whitespace() {
                match tok.split_once('=') {
                    Some(("n", v)) => n = v.parse().ok(),
                    Some(("k", v)) => k = v.parse().ok(),
                    _ => {}
                }
            }
            if let (Some(n), Some(k)) = (n, k) {
                declared = Some((n, k));
            }
            continue;
        }
        rows.push(line);
    }
    if rows.is_empty() {
        return Err(Error::Parse("matrix file has no rows".into()));
    }
    let code = BinaryCode::from_bitstrings(&rows)?;
    if let Some((n, k)) = declared {
        if n != code.n || k != code.k() {
            return Err(Error::Parse(format!("header says n={n} k={k}, rows give n={} k={}", code.n, code.k())));
        }
    }
    Ok(code)
}
