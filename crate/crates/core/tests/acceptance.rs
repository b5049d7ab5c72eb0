//! Acceptance checks, one line per criterion.
//!
//! Run with `cargo test -p dihedra --test acceptance`. Set
//! `DIHEDRA_ACCEPTANCE_FULL=1` to sweep all 728 codes of the m = 7 table
//! exhaustively instead of a 32-code sample plus screening.
//!
//! Expected values marked as tabulated come from the source tables; the rest
//! come from oracles written here independently of the library internals
//! (brute-force enumeration, null spaces, direct substitution).

use std::collections::{HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use dihedra::analysis::{dual_code, is_self_dual, min_distance, rank_f2, rref, weight_enumerator, BinaryCode};
use dihedra::chainring::{ChainRingCtx, RingElem};
use dihedra::codes::*;
use dihedra::crt::{compute_idempotents, GenRow};
use dihedra::cyclofactor::{derive_params, factor_cyclotomic};
use dihedra::fixtures::{code_cases, verify_fixture, DistanceCheck, FixtureId, FixtureSet};
use dihedra::wset::{selfrec_cardinality, wset_tower};
use dihedra::Poly;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

// ---------------------------------------------------------------------------
// 1. Counts against the tabulated values.

const SLD: [(u64, u64); 10] = [
    (8, 11),
    (24, 341),
    (40, 3751),
    (56, 51689),
    (72, 1596221),
    (16, 59),
    (48, 30149),
    (80, 5155479),
    (112, 1136313509),
    (144, 578075750189),
];

fn criterion_1() -> Outcome {
    let mut bad = Vec::new();
    for (n, want) in SLD {
        let m = n / 8;
        let got = count_selfdual(m).unwrap().total;
        if got != BigUint::from(want) {
            let printed = count_selfdual_published(m).unwrap().total;
            bad.push(format!("n={n}: {got} vs tabulated {want} (printed pair count gives {printed})"));
        }
    }
    if bad.is_empty() {
        outcome(true, "all 10 rows equal")
    } else {
        outcome(false, format!("{}/10 rows equal; {}", 10 - bad.len(), bad.join("; ")))
    }
}

// ---------------------------------------------------------------------------
// 2. Enumeration size, self-duality and rank.

fn assemble_ok(sys: &DihedralSystem, spec: &SelfDualSpec) -> bool {
    let code = sys.assemble(spec).unwrap();
    let n = 8 * sys.params.m as usize;
    code.n == n && rank_f2(&code.rows, code.words) == n / 2 && is_self_dual(&code)
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for m in 1..=7u64 {
        let sys = DihedralSystem::new(m).unwrap();
        let count = count_selfdual(m).unwrap().total;
        let total = u128::try_from(&sys.count().unwrap()).unwrap();
        // Every index yields a spec, and specs map back to their index.
        let emitted = (0..total)
            .into_par_iter()
            .filter(|&i| {
                let idx = BigUint::from(i);
                let spec = sys.spec_at(&idx).unwrap();
                sys.index_of(&spec).unwrap() == idx
            })
            .count() as u128;
        let beyond = sys.spec_at(&BigUint::from(total)).is_err();
        let sample: Vec<u128> = if m <= 5 {
            (0..total).collect()
        } else {
            let mut rng = StdRng::seed_from_u64(m);
            (0..2000).map(|_| rng.gen_range(0..total)).collect()
        };
        let good = sample.par_iter().filter(|&&i| assemble_ok(&sys, &sys.spec_at(&BigUint::from(i)).unwrap())).count();
        let this_ok = BigUint::from(emitted) == count && emitted == total && beyond && good == sample.len();
        ok &= this_ok;
        notes.push(format!("m={m}: {emitted}/{count}, {good}/{} self-dual", sample.len()));
    }
    outcome(ok, notes.join(", "))
}

// ---------------------------------------------------------------------------
// 3. Distinct reduced echelon forms.

fn criterion_3() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for m in [1u64, 3] {
        let sys = DihedralSystem::new(m).unwrap();
        let total = u128::try_from(&sys.count().unwrap()).unwrap();
        let forms: HashSet<Vec<Vec<u64>>> = (0..total)
            .map(|i| rref(&sys.assemble(&sys.spec_at(&BigUint::from(i)).unwrap()).unwrap()).rows)
            .collect();
        ok &= forms.len() as u128 == total;
        notes.push(format!("m={m}: {} distinct of {total}", forms.len()));
    }
    outcome(ok, notes.join(", "))
}

// ---------------------------------------------------------------------------
// 4. W-sets.

/// `a(x^{-1}) mod f^s` by reversing exponents modulo `n` (x^n = 1 in the ring).
fn reverse_mod(a: &Poly, n: usize, modulus: &Poly) -> Poly {
    let mut r = Poly::zero();
    for e in a.exponents() {
        r.flip_coeff((n - e % n) % n);
    }
    r.rem(modulus).unwrap()
}

/// `{ w : w·w(x^{-1}) = 1 mod f^s }`, by trying every residue.
fn brute_wset(f: &Poly, s: usize, n: usize) -> HashSet<Poly> {
    let d = f.degree().unwrap();
    let mut modulus = Poly::one();
    for _ in 0..s {
        modulus = modulus.mul(f);
    }
    (0u64..1 << (s * d))
        .into_par_iter()
        .filter_map(|v| {
            let a = Poly::from_u64(v);
            let prod = a.mul(&reverse_mod(&a, n, &modulus)).rem(&modulus).unwrap();
            prod.is_one().then_some(a)
        })
        .collect()
}

fn criterion_4() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for id in [FixtureId::AppendixB, FixtureId::Example55] {
        let r = verify_fixture(id, DistanceCheck::Off).unwrap();
        let pass = r.results.iter().filter(|x| x.passed).count();
        ok &= r.passed();
        notes.push(format!("{id} {pass}/{}", r.results.len()));
    }
    // Brute force for every self-reciprocal factor (and x+1) with 2^{sd} <= 2^20.
    let mut oracle_cases = 0;
    let mut law_cases = 0;
    for m0 in [1u64, 3, 5, 9, 11, 13, 17] {
        let fs = factor_cyclotomic(m0).unwrap();
        for i in 0..=fs.rho {
            let f = fs.poly(i).clone();
            let d = fs.degree(i);
            let top = 20 / d;
            let lambda = (top.max(2) as f64).log2().ceil() as u32;
            let n = (1usize << lambda) * m0 as usize;
            let ctx = ChainRingCtx::new(f.clone(), lambda, n).unwrap();
            let tower = wset_tower(&ctx, 1 << lambda).unwrap();
            for s in 1..=top {
                let got: HashSet<Poly> = tower[s - 1].polys().cloned().collect();
                let want = brute_wset(&f, s, n);
                oracle_cases += 1;
                if got != want {
                    ok = false;
                    notes.push(format!("f={f} s={s}: {} vs brute force {}", got.len(), want.len()));
                }
            }
            if i > 0 {
                for (s, w) in tower.iter().enumerate() {
                    law_cases += 1;
                    if w.len() as u128 != selfrec_cardinality(d, s + 1) {
                        ok = false;
                        notes.push(format!("f={f} s={}: cardinality law fails", s + 1));
                    }
                }
            }
        }
    }
    notes.push(format!("{oracle_cases} (f, s) brute-force matches, {law_cases} cardinality-law checks"));
    outcome(ok, notes.join(", "))
}

// ---------------------------------------------------------------------------
// 5. m = 1 distance table.

fn criterion_5() -> Outcome {
    let sys = DihedralSystem::new(1).unwrap();
    let mut by_d: HashMap<usize, usize> = HashMap::new();
    for i in 0..11u32 {
        let code = sys.assemble(&sys.spec_at(&BigUint::from(i)).unwrap()).unwrap();
        *by_d.entry(min_distance(&code, None).unwrap().weight).or_default() += 1;
    }
    let r = verify_fixture(FixtureId::Example61, DistanceCheck::Full).unwrap();
    let split = (by_d.get(&2).copied().unwrap_or(0), by_d.get(&4).copied().unwrap_or(0));
    let per_case = r.passed();
    outcome(
        split == (5, 6) && by_d.len() == 2 && per_case,
        format!("d=2: {}, d=4: {}; per-case assignment {}", split.0, split.1, if per_case { "matches" } else { "differs" }),
    )
}

// ---------------------------------------------------------------------------
// 6. The extremal [24,12,8] codes.

fn criterion_6() -> Outcome {
    let sys = DihedralSystem::new(3).unwrap();
    let want_we: Vec<(usize, u64)> = vec![(0, 1), (8, 759), (12, 2576), (16, 759), (24, 1)];
    let extremal: Vec<SelfDualSpec> = (0..341u32)
        .into_par_iter()
        .filter_map(|i| {
            let spec = sys.spec_at(&BigUint::from(i)).unwrap();
            let code = sys.assemble(&spec).unwrap();
            (min_distance(&code, None).unwrap().weight == 8).then_some(spec)
        })
        .collect();
    let we_ok = extremal
        .iter()
        .all(|s| weight_enumerator(&sys.assemble(s).unwrap()).unwrap().terms() == want_we);
    let found: HashSet<(String, String)> = extremal
        .iter()
        .filter_map(|s| match s.choices.as_slice() {
            [SelfDualChoice::Dagger1 { a: a0 }, SelfDualChoice::Dagger1 { a: a1 }] => {
                Some((a0.to_bitstring(4), a1.to_bitstring(8)))
            }
            _ => None,
        })
        .collect();
    let set = FixtureSet::load(FixtureId::Example62).unwrap();
    let listed: HashSet<(String, String)> = code_cases(&set)
        .unwrap()
        .iter()
        .map(|c| match c.spec.choices.as_slice() {
            [SelfDualChoice::Dagger1 { a: a0 }, SelfDualChoice::Dagger1 { a: a1 }] => {
                (a0.to_bitstring(4), a1.to_bitstring(8))
            }
            _ => unreachable!(),
        })
        .collect();
    outcome(
        extremal.len() == 24 && we_ok && found == listed,
        format!(
            "{} codes with d=8, weight enumerators {}, parameters {} the listed (a0, a1) pairs",
            extremal.len(),
            if we_ok { "all 1+759X^8+2576X^12+759X^16+X^24" } else { "differ" },
            if found == listed { "equal" } else { "differ from" }
        ),
    )
}

// ---------------------------------------------------------------------------
// 7, 8. The m = 6 and m = 7 tables.

fn table_outcome(id: FixtureId, check: DistanceCheck) -> Outcome {
    let r = verify_fixture(id, check).unwrap();
    let pass = r.results.iter().filter(|x| x.passed).count();
    let mut detail = format!("{pass}/{} codes self-dual, doubly even, d=12", r.results.len());
    for f in r.failures() {
        detail.push_str(&format!("; {}: {}", f.coord, f.detail));
    }
    outcome(r.passed(), detail)
}

fn criterion_7() -> Outcome {
    table_outcome(FixtureId::AppendixC, DistanceCheck::Full)
}

fn criterion_8() -> Outcome {
    let full = std::env::var("DIHEDRA_ACCEPTANCE_FULL").is_ok_and(|v| v == "1");
    let check = if full { DistanceCheck::Full } else { DistanceCheck::Sample { n: 32, seed: 2024, screen_log2: 20 } };
    let mut o = table_outcome(FixtureId::AppendixD, check);
    o.detail.push_str(if full {
        " (all exact)"
    } else {
        " (32 exact sweeps, 2^20 early-abort screens for the rest)"
    });
    o
}

// ---------------------------------------------------------------------------
// 9. Dual templates against null spaces.

fn criterion_9() -> Outcome {
    let sys = DihedralSystem::new(3).unwrap();
    let l0 = enumerate_condition5(&sys.ctxs[0], 0, sys.tower(0).unwrap()).unwrap();
    let l1 = enumerate_condition5(&sys.ctxs[1], 1, sys.tower(1).unwrap()).unwrap();
    let mut rng = StdRng::seed_from_u64(9);
    let (mut checked, mut agree) = (0, 0);
    let mut cases = HashSet::new();
    while checked < 200 {
        let g0 = l0[rng.gen_range(0..l0.len())].clone();
        let g1 = l1[rng.gen_range(0..l1.len())].clone();
        let c = sys.assemble_components(&[g0.clone(), g1.clone()]).unwrap();
        if is_self_dual(&c) {
            continue;
        }
        let h: Vec<ComponentCode> = [&g0, &g1]
            .iter()
            .map(|g| match dual_component(&sys.ctxs[g.i], None, g).unwrap() {
                Dual::Single(h) => h,
                Dual::Pair(..) => unreachable!("m = 3 has no reciprocal pairs"),
            })
            .collect();
        let q = sys.assemble_components(&h).unwrap();
        checked += 1;
        cases.insert((g0.tag, g1.tag));
        if rref(&q) == rref(&dual_code(&c)) {
            agree += 1;
        }
    }
    outcome(agree == checked, format!("{agree}/{checked} assemblies, {} case combinations", cases.len()))
}

// ---------------------------------------------------------------------------
// 10. Property suites.

fn idempotents_ok() -> bool {
    (1..=18u64).all(|m| {
        let params = derive_params(m).unwrap();
        let fs = factor_cyclotomic(params.m0).unwrap();
        let ids = compute_idempotents(&params, &fs).unwrap();
        let n = params.fourm();
        let mut sum = Poly::zero();
        let mut ok = true;
        for (i, e) in ids.eps.iter().enumerate() {
            sum.add_assign(e);
            ok &= &e.mul(e).rem_cyclic(n) == e;
            for (j, g) in ids.eps.iter().enumerate() {
                ok &= i == j || e.mul(g).rem_cyclic(n).is_zero();
            }
            let mut rev = Poly::zero();
            for k in e.exponents() {
                rev.flip_coeff((n - k) % n);
            }
            ok &= rev == ids.eps[fs.mu(i).unwrap()];
        }
        ok && sum.is_one()
    })
}

fn rings() -> Vec<ChainRingCtx> {
    [("11", 2, 12), ("11", 3, 24), ("111", 2, 12), ("111", 3, 24), ("1101", 2, 28), ("1011", 2, 28), ("11111", 2, 20)]
        .iter()
        .map(|&(f, l, n)| ChainRingCtx::new(Poly::from_bitstring(f).unwrap(), l, n).unwrap())
        .collect()
}

fn f_adic_ok(rng: &mut StdRng) -> bool {
    rings().iter().all(|c| {
        (1..=c.smax()).all(|level| {
            (0..500).all(|_| {
                let v = rng.gen::<u64>() & ((1u64 << (level * c.d)) - 1);
                let a = c.elem(&Poly::from_u64(v), level).unwrap();
                let digits = c.f_adic_expand(&a);
                digits.iter().all(|g| g.bit_len() <= c.d) && c.from_digits(&digits).value == a.value
            })
        })
    })
}

/// `x -> x^{-1}` (evaluated in the target ring) against direct exponent
/// reversal; it is a ring map onto the reciprocal factor's ring and an involution when the factor is self-reciprocal.
fn inv_ok(rng: &mut StdRng) -> bool {
    rings().iter().all(|c| {
        let q = ChainRingCtx::new(c.f.reciprocal().unwrap(), c.lambda, c.fourm).unwrap();
        (1..=c.smax()).all(|level| {
            let (mc, mq) = (c.modulus(level).clone(), q.modulus(level).clone());
            (0..200).all(|_| {
                let mask = (1u64 << (level * c.d)) - 1;
                let a = c.elem(&Poly::from_u64(rng.gen::<u64>() & mask), level).unwrap();
                let b = c.elem(&Poly::from_u64(rng.gen::<u64>() & mask), level).unwrap();
                let img = |x: &RingElem| RingElem { value: reverse_mod(&x.value, c.fourm, &mq), level };
                let direct = q.inv_map(&a.value).rem(&mq).unwrap() == img(&a).value;
                let back = reverse_mod(&img(&a).value, c.fourm, &mc) == a.value;
                let hom = img(&c.mul(&a, &b).unwrap()) == q.mul(&img(&a), &img(&b)).unwrap();
                let invol = c.f != q.f || c.inv_substitute(&c.inv_substitute(&a)) == a;
                direct && back && hom && invol
            })
        })
    })
}

/// Submodules of `A^2`, `A = F2[x]/<(x+1)^4>`, by closing every pair of vectors.
fn submodule_count() -> usize {
    let c = ChainRingCtx::new(Poly::from_u64(0b11), 2, 4).unwrap();
    let mut seen = HashSet::new();
    for u in 0u64..256 {
        for v in u..256 {
            let rows = [(u & 15, u >> 4), (v & 15, v >> 4)]
                .iter()
                .map(|&(a, b)| GenRow::new(&c, Poly::from_u64(a), Poly::from_u64(b)))
                .collect::<Vec<_>>();
            seen.insert(span_of(&rows, &c));
        }
    }
    seen.len()
}

/// The GF(2) span of `x^l·row`, packed as `a + x^{4}·b`, in reduced echelon form.
fn span_of(rows: &[GenRow], c: &ChainRingCtx) -> Vec<Vec<u64>> {
    let modulus = c.modulus(c.smax());
    let w = c.smax() * c.d;
    let mut gens = Vec::new();
    for r in rows {
        for l in 0..w {
            let a = r.a.shl(l).rem(modulus).unwrap();
            let b = r.b.shl(l).rem(modulus).unwrap();
            gens.push(a.add(&b.shl(w)));
        }
    }
    rref(&BinaryCode::from_polys(2 * w, &gens)).rows
}

fn cond5_filter_count() -> usize {
    let c = ChainRingCtx::new(Poly::from_u64(0b11), 2, 4).unwrap();
    enumerate_all_length2(&c)
        .filter(|f| {
            let rows = f.rows(&c).unwrap();
            // Swap the coordinates and substitute x -> x^{-1}; the span must be unchanged.
            let img: Vec<GenRow> = rows
                .iter()
                .map(|r| {
                    let m = c.modulus(c.smax());
                    GenRow::new(&c, reverse_mod(&r.b, c.fourm, m), reverse_mod(&r.a, c.fourm, m))
                })
                .collect();
            span_of(&rows, &c) == span_of(&img, &c)
        })
        .count()
}

fn criterion_10() -> Outcome {
    let mut rng = StdRng::seed_from_u64(10);
    let ids = idempotents_ok();
    let fadic = f_adic_ok(&mut rng);
    let inv = inv_ok(&mut rng);
    let l = submodule_count();
    let l_formula = length2_module_count(1, 4);
    let l_forms = enumerate_all_length2(&ChainRingCtx::new(Poly::from_u64(0b11), 2, 4).unwrap()).count();
    let s = cond5_filter_count();
    let c = ChainRingCtx::new(Poly::from_u64(0b11), 2, 4).unwrap();
    let sizes: Vec<u128> = wset_tower(&c, 4).unwrap().iter().map(|w| w.len() as u128).collect();
    let s_formula = cond5_count(4, &sizes);
    let ok = ids
        && fadic
        && inv
        && l == 83
        && l_formula == BigUint::from(83u32)
        && l_forms == 83
        && s == 31
        && s_formula == BigUint::from(31u32);
    let yes = |b: bool| if b { "ok" } else { "FAILED" };
    outcome(
        ok,
        format!(
            "idempotents {}, f-adic {}, x->x^-1 {}, L: {l} submodules / formula {l_formula} / {l_forms} forms, S: {s} filtered / formula {s_formula}",
            yes(ids),
            yes(fadic),
            yes(inv)
        ),
    )
}

// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 10] = [
        (1, "mass formula vs table", Duration::from_secs(1), criterion_1),
        (2, "enumeration = count", Duration::from_secs(300), criterion_2),
        (3, "distinct codes", Duration::from_secs(10), criterion_3),
        (4, "W-set fidelity", Duration::from_secs(120), criterion_4),
        (5, "m=1 distance table", Duration::from_secs(1), criterion_5),
        (6, "extremal [24,12,8]", Duration::from_secs(60), criterion_6),
        (7, "m=6 table [48,24,12]", Duration::from_secs(900), criterion_7),
        (8, "m=7 table [56,28,12]", Duration::from_secs(7200), criterion_8),
        (9, "dual templates vs null space", Duration::from_secs(60), criterion_9),
        (10, "property suites", Duration::from_secs(120), criterion_10),
    ];
    let filter: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (n, name, budget, run) in criteria {
        if filter.is_some_and(|f| f != n) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run));
        let took = start.elapsed();
        let (passed, detail) = match result {
            Ok(o) => (o.passed && took <= budget, o.detail),
            Err(e) => {
                let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
                (false, format!("panicked: {}", msg.unwrap_or_default()))
            }
        };
        let timing = format!("{:.2}s of {}s", took.as_secs_f64(), budget.as_secs());
        println!("criterion {n:>2} {}: {name} — {detail} [{timing}]", if passed { "PASS" } else { "FAIL" });
        failed += usize::from(!passed);
    }
    println!("acceptance: {} failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
