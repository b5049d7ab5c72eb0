//! Bundled reference data: the appendix lists and example tables, with drivers
//! that rebuild every record and check it.
//!
//! File format (plain text, diffable against the source tables by eye):
//! `# ` preamble lines, then sections, each a blank line followed by
//! `## <title>` and one record per line. Titles and records may carry
//! `key=value` tokens. Parsing is strict so that re-serialization reproduces a
//! file byte for byte.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;

use crate::analysis::{is_doubly_even, is_self_dual, min_distance, screen_min_distance, weight_enumerator};
use crate::codes::{count_selfdual, count_selfdual_published, DihedralSystem, SelfDualChoice, SelfDualSpec};
use crate::error::{Error, Result};
use crate::gf2poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixtureId {
    AppendixB,
    AppendixC,
    AppendixD,
    Example55,
    Example61,
    Example62,
    SldTable,
}

impl FixtureId {
    pub const ALL: [FixtureId; 7] = [
        FixtureId::AppendixB,
        FixtureId::AppendixC,
        FixtureId::AppendixD,
        FixtureId::Example55,
        FixtureId::Example61,
        FixtureId::Example62,
        FixtureId::SldTable,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FixtureId::AppendixB => "appendix-b",
            FixtureId::AppendixC => "appendix-c",
            FixtureId::AppendixD => "appendix-d",
            FixtureId::Example55 => "example-5.5",
            FixtureId::Example61 => "example-6.1",
            FixtureId::Example62 => "example-6.2",
            FixtureId::SldTable => "sld-table",
        }
    }

    /// The bundled file contents.
    pub fn text(self) -> &'static str {
        match self {
            FixtureId::AppendixB => include_str!("../fixtures/appendix-b.txt"),
            FixtureId::AppendixC => include_str!("../fixtures/appendix-c.txt"),
            FixtureId::AppendixD => include_str!("../fixtures/appendix-d.txt"),
            FixtureId::Example55 => include_str!("../fixtures/example-5.5.txt"),
            FixtureId::Example61 => include_str!("../fixtures/example-6.1.txt"),
            FixtureId::Example62 => include_str!("../fixtures/example-6.2.txt"),
            FixtureId::SldTable => include_str!("../fixtures/sld-table.txt"),
        }
    }
}

impl fmt::Display for FixtureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FixtureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FixtureId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown fixture {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub title: String,
    pub records: Vec<String>,
}

impl Section {
    pub fn attr(&self, key: &str) -> Option<&str> {
        self.title.split(' ').find_map(|t| t.strip_prefix(key)?.strip_prefix('='))
    }

    /// The title without its attributes.
    pub fn name(&self) -> String {
        self.title.split(' ').filter(|t| !t.contains('=')).collect::<Vec<_>>().join(" ")
    }

    fn attr_parsed<T: FromStr>(&self, key: &str) -> Result<T> {
        self.attr(key)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse(format!("section {:?}: missing or bad {key}", self.title)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureSet {
    pub id: FixtureId,
    /// Comment lines before the first section, without the leading `# `.
    pub preamble: Vec<String>,
    pub sections: Vec<Section>,
}

fn clean(line: &str, no: usize) -> Result<&str> {
    if line.is_empty() || line.trim() != line || line.contains("  ") || line.contains('\t') {
        return Err(Error::Parse(format!("line {no}: stray whitespace or empty line")));
    }
    Ok(line)
}

impl FixtureSet {
    pub fn load(id: FixtureId) -> Result<Self> {
        Self::parse(id, id.text())
    }

    pub fn parse(id: FixtureId, text: &str) -> Result<Self> {
        let body = text.strip_suffix('\n').ok_or_else(|| Error::Parse("missing final newline".into()))?;
        let mut lines = body.split('\n').enumerate().map(|(i, l)| (i + 1, l)).peekable();
        let mut preamble = Vec::new();
        while let Some(&(no, l)) = lines.peek() {
            if l.is_empty() {
                break;
            }
            let c = if l == "#" { "" } else { l.strip_prefix("# ").ok_or_else(|| Error::Parse(format!("line {no}: expected a comment")))? };
            if c.starts_with('#') {
                return Err(Error::Parse(format!("line {no}: section header before the blank separator")));
            }
            preamble.push(c.to_string());
            lines.next();
        }
        let mut sections = Vec::new();
        while let Some((no, l)) = lines.next() {
            if !l.is_empty() {
                return Err(Error::Parse(format!("line {no}: expected a blank line before a section")));
            }
            let (no, head) = lines.next().ok_or_else(|| Error::Parse(format!("line {no}: trailing blank line")))?;
            let title = head
                .strip_prefix("## ")
                .ok_or_else(|| Error::Parse(format!("line {no}: expected `## <title>`")))?;
            let title = clean(title, no)?.to_string();
            let mut records = Vec::new();
            while let Some(&(no, l)) = lines.peek() {
                if l.is_empty() {
                    break;
                }
                if l.starts_with('#') {
                    return Err(Error::Parse(format!("line {no}: comment inside a section")));
                }
                records.push(clean(l, no)?.to_string());
                lines.next();
            }
            sections.push(Section { title, records });
        }
        Ok(FixtureSet { id, preamble, sections })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.preamble {
            if c.is_empty() {
                out.push_str("#\n");
            } else {
                out.push_str("# ");
                out.push_str(c);
                out.push('\n');
            }
        }
        for s in &self.sections {
            out.push_str("\n## ");
            out.push_str(&s.title);
            out.push('\n');
            for r in &s.records {
                out.push_str(r);
                out.push('\n');
            }
        }
        out
    }

    pub fn section(&self, name: &str) -> Result<&Section> {
        self.sections
            .iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::Parse(format!("{}: no section {name:?}", self.id)))
    }
}

/// `key=value` tokens of a record.
pub fn record_fields(record: &str) -> Result<HashMap<&str, &str>> {
    record
        .split(' ')
        .map(|t| t.split_once('=').ok_or_else(|| Error::Parse(format!("token {t:?} is not key=value"))))
        .collect()
}

fn bits(s: &str, len: usize) -> Result<Poly> {
    if s.len() != len {
        return Err(Error::Parse(format!("{s:?} has {} digits, expected {len}", s.len())));
    }
    Poly::from_bitstring(s)
}

/// One assembled code a fixture talks about.
#[derive(Clone, Debug)]
pub struct CodeCase {
    /// Where the record sits in the source tables, e.g. `appendix-c case 3 #5`.
    pub coord: String,
    pub spec: SelfDualSpec,
    /// Minimum distance stated for the code.
    pub expect_d: usize,
    /// Whether the code is stated to be doubly even.
    pub expect_doubly_even: bool,
}

/// The `m` a code fixture is about.
pub fn fixture_m(id: FixtureId) -> Option<u64> {
    match id {
        FixtureId::AppendixC => Some(6),
        FixtureId::AppendixD => Some(7),
        FixtureId::Example61 => Some(1),
        FixtureId::Example62 => Some(3),
        _ => None,
    }
}

/// The codes listed by a code fixture, in file order.
pub fn code_cases(set: &FixtureSet) -> Result<Vec<CodeCase>> {
    let mut out = Vec::new();
    let id = set.id;
    match id {
        FixtureId::AppendixC | FixtureId::AppendixD => {
            // a ∈ W_0^(S); the second polynomial is b ∈ W_1^(S) (†) or η ∈ A_1 (‡).
            let (alen, blen) = if id == FixtureId::AppendixC { (8, 16) } else { (4, 12) };
            for sec in &set.sections {
                let alist = sec.attr("a").ok_or_else(|| Error::Parse(format!("{id} {}: no a", sec.title)))?;
                let alist: Vec<(&str, Poly)> =
                    alist.split(',').map(|s| Ok((s, bits(s, alen)?))).collect::<Result<_>>()?;
                for (a_str, a) in &alist {
                    for (j, r) in sec.records.iter().enumerate() {
                        let b = bits(r, blen)?;
                        let second = if id == FixtureId::AppendixC {
                            SelfDualChoice::Dagger1 { a: b }
                        } else {
                            SelfDualChoice::DDagger1 { a: b }
                        };
                        let coord = if alist.len() > 1 {
                            format!("{id} {} a={a_str} #{}", sec.name(), j + 1)
                        } else {
                            format!("{id} {} #{}", sec.name(), j + 1)
                        };
                        out.push(CodeCase {
                            coord,
                            spec: SelfDualSpec { choices: vec![SelfDualChoice::Dagger1 { a: a.clone() }, second] },
                            expect_d: 12,
                            expect_doubly_even: true,
                        });
                    }
                }
            }
        }
        FixtureId::Example61 => {
            for sec in &set.sections {
                let d: usize = sec.attr_parsed("d")?;
                for (j, r) in sec.records.iter().enumerate() {
                    let f = record_fields(r)?;
                    let choice = match f.get("tag").copied() {
                        Some("dagger-1") => SelfDualChoice::Dagger1 { a: bits(f.get("a").copied().unwrap_or(""), 4)? },
                        Some("dagger-2") => SelfDualChoice::Dagger2,
                        Some("dagger-3") => SelfDualChoice::Dagger3 {
                            k: f.get("k").and_then(|k| k.parse().ok()).ok_or_else(|| Error::Parse(format!("{r:?}: k")))?,
                            c: bits(f.get("c").copied().unwrap_or(""), 2)?,
                        },
                        _ => return Err(Error::Parse(format!("{id}: bad record {r:?}"))),
                    };
                    out.push(CodeCase {
                        coord: format!("{id} {} d={d} #{}", sec.name(), j + 1),
                        spec: SelfDualSpec { choices: vec![choice] },
                        expect_d: d,
                        expect_doubly_even: false,
                    });
                }
            }
        }
        FixtureId::Example62 => {
            for group in ["dagger", "ddagger"] {
                let a0s = &set.section(&format!("group {group} a0"))?.records;
                let a1s = &set.section(&format!("group {group} a1"))?.records;
                for (x, a0) in a0s.iter().enumerate() {
                    for (y, a1) in a1s.iter().enumerate() {
                        out.push(CodeCase {
                            coord: format!("{id} group {group} a0#{} a1#{}", x + 1, y + 1),
                            spec: SelfDualSpec {
                                choices: vec![
                                    SelfDualChoice::Dagger1 { a: bits(a0, 4)? },
                                    SelfDualChoice::Dagger1 { a: bits(a1, 8)? },
                                ],
                            },
                            expect_d: 8,
                            expect_doubly_even: true,
                        });
                    }
                }
            }
        }
        _ => return Err(Error::InvalidArgument(format!("{id} does not list codes"))),
    }
    Ok(out)
}

/// How minimum distances are checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceCheck {
    /// Exact distance for every code.
    Full,
    /// Exact distance for `n` codes drawn with `seed`; the rest get the
    /// early-abort screen over a `2^screen_log2` subcode.
    Sample { n: usize, seed: u64, screen_log2: usize },
    Off,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordResult {
    pub coord: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct FixtureReport {
    pub id: FixtureId,
    pub results: Vec<RecordResult>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RecordResult> {
        self.results.iter().filter(|r| !r.passed)
    }
}

fn result(coord: String, passed: bool, detail: String) -> RecordResult {
    RecordResult { coord, passed, detail }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum DistMode {
    Exact,
    Screen(usize),
    Skip,
}

/// Assembles one listed code and checks rank, self-duality, doubly-evenness
/// (when stated) and the distance.
pub fn check_code_case(sys: &DihedralSystem, case: &CodeCase, exact_distance: Option<bool>, screen_log2: usize) -> RecordResult {
    let mode = match exact_distance {
        Some(true) => DistMode::Exact,
        Some(false) => DistMode::Screen(screen_log2),
        None => DistMode::Skip,
    };
    check_case(sys, case, mode)
}

fn check_case(sys: &DihedralSystem, case: &CodeCase, mode: DistMode) -> RecordResult {
    let code = match sys.assemble(&case.spec) {
        Ok(c) => c,
        Err(e) => return result(case.coord.clone(), false, format!("assembly failed: {e}")),
    };
    let n = 8 * sys.params.m as usize;
    let mut problems = Vec::new();
    if code.n != n || code.k() != n / 2 {
        problems.push(format!("shape [{}, {}]", code.n, code.k()));
    }
    if !is_self_dual(&code) {
        problems.push("not self-dual".to_string());
    }
    let doubly_even = is_doubly_even(&code);
    if case.expect_doubly_even && !doubly_even {
        problems.push("not doubly even".to_string());
    }
    let dist = match mode {
        DistMode::Exact => match min_distance(&code, None) {
            Ok(md) => {
                if md.weight != case.expect_d {
                    problems.push(format!("d = {} (expected {})", md.weight, case.expect_d));
                }
                format!("d={} (exact)", md.weight)
            }
            Err(e) => {
                problems.push(e.to_string());
                String::new()
            }
        },
        DistMode::Screen(bits) => match screen_min_distance(&code, case.expect_d as u32, bits) {
            Ok(md) if md.aborted || md.weight < case.expect_d => {
                problems.push(format!("codeword of weight {} found", md.weight));
                String::new()
            }
            Ok(_) => format!("no weight < {} in a 2^{bits} screen", case.expect_d),
            Err(e) => {
                problems.push(e.to_string());
                String::new()
            }
        },
        DistMode::Skip => "distance not checked".to_string(),
    };
    let passed = problems.is_empty();
    let detail = if passed {
        format!("[{}, {}] self-dual{}, {dist}", code.n, code.k(), if doubly_even { " doubly-even" } else { "" })
    } else {
        problems.join("; ")
    };
    result(case.coord.clone(), passed, detail)
}

fn distance_modes(count: usize, check: DistanceCheck) -> Vec<DistMode> {
    match check {
        DistanceCheck::Full => vec![DistMode::Exact; count],
        DistanceCheck::Off => vec![DistMode::Skip; count],
        DistanceCheck::Sample { n, seed, screen_log2 } => {
            let mut modes = vec![DistMode::Screen(screen_log2); count];
            let mut rng = StdRng::seed_from_u64(seed);
            for i in rand::seq::index::sample(&mut rng, count, n.min(count)) {
                modes[i] = DistMode::Exact;
            }
            modes
        }
    }
}

/// Rebuilds every record of a fixture and checks it; one result per record.
pub fn verify_fixture(id: FixtureId, check: DistanceCheck) -> Result<FixtureReport> {
    let set = FixtureSet::load(id)?;
    let results = match id {
        FixtureId::AppendixB => verify_wsets(&set, 3, 1)?,
        FixtureId::Example55 => {
            let mut out = Vec::new();
            for lambda in [3u32, 4] {
                let sub = FixtureSet {
                    id,
                    preamble: vec![],
                    sections: set
                        .sections
                        .iter()
                        .filter(|s| s.attr("lambda") == Some(&lambda.to_string()))
                        .cloned()
                        .collect(),
                };
                out.extend(verify_wsets(&sub, 1u64 << (lambda - 2), 0)?);
            }
            out
        }
        FixtureId::SldTable => verify_sld(&set)?,
        FixtureId::AppendixC | FixtureId::AppendixD | FixtureId::Example61 | FixtureId::Example62 => {
            let sys = DihedralSystem::new(fixture_m(id).expect("code fixture"))?;
            let cases = code_cases(&set)?;
            let modes = distance_modes(cases.len(), check);
            let mut out: Vec<RecordResult> =
                cases.par_iter().zip(modes.par_iter()).map(|(c, &m)| check_case(&sys, c, m)).collect();
            match id {
                FixtureId::Example61 => out.push(example61_split(&sys, &cases)?),
                FixtureId::Example62 => out.extend(example62_extras(&sys, &set, &cases)?),
                _ => {}
            }
            out
        }
    };
    Ok(FixtureReport { id, results })
}

/// Every listed element is in the recursion output, and the sizes agree.
fn verify_wsets(set: &FixtureSet, m: u64, class: usize) -> Result<Vec<RecordResult>> {
    let sys = DihedralSystem::new(m)?;
    let top = set.sections.iter().map(|s| s.attr_parsed::<usize>("s")).collect::<Result<Vec<_>>>()?;
    let top = top.into_iter().max().unwrap_or(0);
    let ctx = &sys.ctxs[class];
    let tower = crate::wset::wset_tower(ctx, top)?;
    let mut out = Vec::new();
    for sec in &set.sections {
        let s: usize = sec.attr_parsed("s")?;
        let size: usize = sec.attr_parsed("size")?;
        let w = &tower[s - 1];
        let coord = format!("{} {}", set.id, sec.name());
        out.push(result(
            format!("{coord} size"),
            w.len() == size,
            format!("recursion gives {}, listed {size}", w.len()),
        ));
        let mut seen = std::collections::HashSet::new();
        for (j, r) in sec.records.iter().enumerate() {
            let p = bits(r, s * ctx.d)?;
            let fresh = seen.insert(p.clone());
            let inside = w.contains(&p);
            out.push(result(
                format!("{coord} #{}", j + 1),
                inside && fresh,
                format!("{p}{}{}", if inside { "" } else { " not in the recursion output" }, if fresh { "" } else { " (duplicate)" }),
            ));
        }
    }
    Ok(out)
}

fn verify_sld(set: &FixtureSet) -> Result<Vec<RecordResult>> {
    let mut out = Vec::new();
    for sec in &set.sections {
        for r in &sec.records {
            let f = record_fields(r)?;
            let field = |k: &str| f.get(k).copied().ok_or_else(|| Error::Parse(format!("{r:?}: no {k}")));
            let n: u64 = field("n")?.parse().map_err(|_| Error::Parse(format!("{r:?}: n")))?;
            let listed: BigUint = field("sld")?.parse().map_err(|_| Error::Parse(format!("{r:?}: sld")))?;
            let m = n / 8;
            let ours = count_selfdual(m)?;
            let published = count_selfdual_published(m)?;
            let factors: Vec<String> = ours.terms.iter().map(|t| t.value.to_string()).collect();
            let mut detail = format!("computed {} = {}, listed {listed} = {}", ours.total, factors.join("·"), field("product")?);
            if ours.total != listed && published.total == listed {
                detail.push_str("; the listed value follows the printed pair count");
            }
            out.push(result(format!("{} n={n} (m={m})", set.id, ), ours.total == listed, detail));
        }
    }
    Ok(out)
}

/// The 11 codes split 5 with d = 2 and 6 with d = 4, and they are all the codes.
fn example61_split(sys: &DihedralSystem, cases: &[CodeCase]) -> Result<RecordResult> {
    let listed: std::collections::HashSet<BigUint> =
        cases.iter().map(|c| sys.index_of(&c.spec)).collect::<Result<_>>()?;
    let total = sys.count()?;
    let d2 = cases.iter().filter(|c| c.expect_d == 2).count();
    let d4 = cases.iter().filter(|c| c.expect_d == 4).count();
    Ok(result(
        "example-6.1 split".into(),
        listed.len() == cases.len() && BigUint::from(listed.len()) == total && (d2, d4) == (5, 6),
        format!("{} distinct listed codes of {total}; {d2} with d=2, {d4} with d=4", listed.len()),
    ))
}

/// Weight enumerators of the listed codes, and the converse: the codes of
/// distance 8 among all of them are exactly the listed ones.
fn example62_extras(sys: &DihedralSystem, set: &FixtureSet, cases: &[CodeCase]) -> Result<Vec<RecordResult>> {
    let mut expected = Vec::new();
    for r in &set.section("weight-enumerator")?.records {
        let f = record_fields(r)?;
        let w: usize = f.get("w").and_then(|v| v.parse().ok()).ok_or_else(|| Error::Parse(format!("{r:?}")))?;
        let c: u64 = f.get("count").and_then(|v| v.parse().ok()).ok_or_else(|| Error::Parse(format!("{r:?}")))?;
        expected.push((w, c));
    }
    let mut out: Vec<RecordResult> = cases
        .par_iter()
        .map(|c| {
            let terms = sys.assemble(&c.spec).and_then(|code| weight_enumerator(&code)).map(|we| we.terms());
            match terms {
                Ok(t) => result(format!("{} weights", c.coord), t == expected, format!("{t:?}")),
                Err(e) => result(format!("{} weights", c.coord), false, e.to_string()),
            }
        })
        .collect();
    let total = u128::try_from(&sys.count()?).map_err(|_| Error::Internal("count overflow".into()))?;
    let found: Vec<BigUint> = (0..total)
        .into_par_iter()
        .map(|i| -> Result<Option<BigUint>> {
            let idx = BigUint::from(i);
            let code = sys.assemble(&sys.spec_at(&idx)?)?;
            Ok((min_distance(&code, None)?.weight == 8).then_some(idx))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut listed: Vec<BigUint> = cases.iter().map(|c| sys.index_of(&c.spec)).collect::<Result<_>>()?;
    listed.sort();
    out.push(result(
        "example-6.2 filter".into(),
        found == listed,
        format!("{} of {total} codes have d=8; {} listed", found.len(), listed.len()),
    ));
    Ok(out)
}
