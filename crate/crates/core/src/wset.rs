//! The sets `W^(s) = { w : w(x)·w(x^{-1}) = 1 mod f^s }` for `f = x+1` and for
//! self-reciprocal factors, built level by level from `s = 1`.
//!
//! Self-reciprocal `f` of even degree `d`: the base level is the norm-one
//! subgroup of `K = F2[x]/<f>`, and each lift adds `z·f^{s-1}` with `z` ranging
//! over a scaled trace preimage, multiplying the set size by `2^{d/2}`.
//! `f = x+1`: each element either lifts in two ways or not at all.

use rayon::prelude::*;

use crate::chainring::{ChainRingCtx, RingElem};
use crate::error::{Error, Result};
use crate::gf2poly::Poly;

/// Default brute-force search bound, in bits (`2^{s·d}` candidates).
pub const DEFAULT_BRUTE_BOUND_BITS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WSet {
    pub level: usize,
    /// Sorted ascending by numeric polynomial order, no duplicates.
    pub elems: Vec<RingElem>,
}

impl WSet {
    fn from_unsorted(level: usize, mut elems: Vec<RingElem>) -> Self {
        elems.sort();
        elems.dedup();
        WSet { level, elems }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn polys(&self) -> impl Iterator<Item = &Poly> {
        self.elems.iter().map(|e| &e.value)
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.elems
            .binary_search_by(|e| e.value.cmp(p))
            .is_ok()
    }
}

/// The residue field `K = F2[x]/<f>` of a self-reciprocal factor, with its
/// subfield of size `2^{d/2}` and the relative trace.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    pub f: Poly,
    pub d: usize,
    pub zeta: Poly,
    pub subfield: Vec<Poly>,
    /// `trace[v] = Tr_{K/F}(β)` for the element `β` with packed value `v`.
    trace: Vec<u64>,
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn frob(a: &Poly, times: usize, f: &Poly) -> Poly {
    let mut t = a.clone();
    for _ in 0..times {
        t = t.mul_mod(&t, f).unwrap();
    }
    t
}

impl FieldCtx {
    /// Field sizes up to `2^24` are supported (the trace is tabulated).
    pub fn new(f: &Poly) -> Result<Self> {
        let d = f.degree().unwrap_or(0);
        if d < 2 || d % 2 != 0 || f.reciprocal()? != *f {
            return Err(Error::NotSelfReciprocal(f.to_string()));
        }
        if d > 24 {
            return Err(Error::BoundExceeded { bits: d, bound: 24 });
        }
        let order = (1u64 << d) - 1;
        let primes = prime_divisors(order);
        let zeta = (2u64..)
            .map(Poly::from_u64)
            .find(|z| {
                z.pow_mod(order, f).unwrap().is_one()
                    && primes.iter().all(|&q| !z.pow_mod(order / q, f).unwrap().is_one())
            })
            .expect("a primitive element exists");
        let half = d / 2;
        let trace: Vec<u64> = (0u64..1 << d)
            .into_par_iter()
            .map(|v| {
                let b = Poly::from_u64(v);
                frob(&b, half, f).add(&b).to_u64()
            })
            .collect();
        let subfield = (0u64..1 << d)
            .filter(|&v| {
                let b = Poly::from_u64(v);
                frob(&b, half, f) == b
            })
            .map(Poly::from_u64)
            .collect();
        Ok(FieldCtx { f: f.clone(), d, zeta, subfield, trace })
    }

    pub fn half(&self) -> usize {
        self.d / 2
    }

    pub fn in_subfield(&self, g: &Poly) -> bool {
        self.subfield.binary_search(g).is_ok()
    }

    pub fn trace(&self, b: &Poly) -> Poly {
        Poly::from_u64(self.trace[b.to_u64() as usize])
    }

    /// All `β` with `β^{2^{d/2}} + β = γ`.
    pub fn trace_preimage(&self, gamma: &Poly) -> Result<Vec<Poly>> {
        if !self.in_subfield(gamma) {
            return Err(Error::InvalidArgument(format!("{gamma} is not in the subfield")));
        }
        let g = gamma.to_u64();
        Ok(self
            .trace
            .iter()
            .enumerate()
            .filter(|(_, &t)| t == g)
            .map(|(v, _)| Poly::from_u64(v as u64))
            .collect())
    }
}

fn is_x_plus_1(f: &Poly) -> bool {
    f.to_u128() == Some(0b11)
}

/// `W^(1)`: `{1}` for `x+1`, the `2^{d/2}+1` norm-one elements otherwise.
pub fn wset_base(ctx: &ChainRingCtx, fctx: Option<&FieldCtx>) -> Result<WSet> {
    if is_x_plus_1(&ctx.f) {
        return Ok(WSet { level: 1, elems: vec![ctx.one(1)] });
    }
    let owned;
    let fctx = match fctx {
        Some(f) => f,
        None => {
            owned = FieldCtx::new(&ctx.f)?;
            &owned
        }
    };
    let q = (1u64 << fctx.half()) - 1;
    let step = fctx.zeta.pow_mod(q, &ctx.f)?;
    let mut cur = Poly::one();
    let mut elems = Vec::new();
    for _ in 0..=1u64 << fctx.half() {
        elems.push(RingElem { value: cur.clone(), level: 1 });
        cur = cur.mul_mod(&step, &ctx.f)?;
    }
    Ok(WSet::from_unsorted(1, elems))
}

/// `(a·a(x^{-1}) - 1) / f^{s-1} mod f`, for `a` in `W^(s-1)`.
fn defect_digit(ctx: &ChainRingCtx, a: &Poly, s: usize) -> Result<Poly> {
    let m = ctx.modulus(s);
    let prod = a.mul_mod(&ctx.inv_map(a).rem(m)?, m)?;
    let t = prod.add(&Poly::one());
    let (q, r) = t.divrem(ctx.modulus(s - 1))?;
    if !r.is_zero() {
        return Err(Error::Internal(format!("{a} is not in W^({})", s - 1)));
    }
    q.rem(&ctx.f)
}

/// One lift `W^(s-1) -> W^(s)` for a self-reciprocal factor.
pub fn wset_lift_selfrec(fctx: &FieldCtx, ctx: &ChainRingCtx, w: &WSet) -> Result<WSet> {
    let s = w.level + 1;
    if s < 2 || s > ctx.smax() {
        return Err(Error::InvalidArgument(format!("cannot lift to level {s}")));
    }
    let shift = (s - 1) * fctx.half();
    let x_shift = Poly::x().pow_mod(shift as u64, &ctx.f)?;
    let x_neg_shift = ctx.inv_map(&Poly::monomial(shift)).rem(&ctx.f)?;
    let fpow = ctx.modulus(s - 1).clone();
    let lifted: Result<Vec<Vec<RingElem>>> = w
        .elems
        .par_iter()
        .map(|a| {
            let b = defect_digit(ctx, &a.value, s)?;
            let gamma = x_shift.mul_mod(&b, &ctx.f)?;
            let a1 = a.value.rem(&ctx.f)?;
            let base = x_neg_shift.mul_mod(&a1, &ctx.f)?;
            fctx.trace_preimage(&gamma)?
                .into_iter()
                .map(|beta| {
                    let z = base.mul_mod(&beta, &ctx.f)?;
                    Ok(RingElem { value: a.value.add(&z.mul(&fpow)), level: s })
                })
                .collect()
        })
        .collect();
    Ok(WSet::from_unsorted(s, lifted?.into_iter().flatten().collect()))
}

/// One lift `W_0^(s-1) -> W_0^(s)` for `f = x+1`.
pub fn wset_lift_zero(ctx: &ChainRingCtx, w: &WSet) -> Result<WSet> {
    let s = w.level + 1;
    if !is_x_plus_1(&ctx.f) || s < 2 || s > ctx.smax() {
        return Err(Error::InvalidArgument(format!("invalid x+1 lift to level {s}")));
    }
    let step = ctx.modulus(s - 1).clone();
    let mut elems = Vec::new();
    for a in &w.elems {
        if defect_digit(ctx, &a.value, s)?.is_zero() {
            elems.push(RingElem { value: a.value.clone(), level: s });
            elems.push(RingElem { value: a.value.add(&step), level: s });
        }
    }
    Ok(WSet::from_unsorted(s, elems))
}

/// Exhaustive scan of the units of `F2[x]/<f^s>`; the oracle for the recursions.
pub fn wset_bruteforce(ctx: &ChainRingCtx, s: usize, bound_bits: usize) -> Result<WSet> {
    let bits = s * ctx.d;
    if bits > bound_bits || bits > 63 {
        return Err(Error::BoundExceeded { bits, bound: bound_bits });
    }
    let m = ctx.modulus(s);
    let elems: Vec<RingElem> = (0u64..1 << bits)
        .into_par_iter()
        .filter_map(|v| {
            let a = Poly::from_u64(v);
            if a.rem(&ctx.f).unwrap().is_zero() {
                return None;
            }
            let ai = ctx.inv_map(&a).rem(m).unwrap();
            a.mul_mod(&ai, m).unwrap().is_one().then_some(RingElem { value: a, level: s })
        })
        .collect();
    Ok(WSet::from_unsorted(s, elems))
}

/// `W^(1), .., W^(top)` by the recursions; index `s - 1` holds level `s`.
pub fn wset_tower(ctx: &ChainRingCtx, top: usize) -> Result<Vec<WSet>> {
    let fctx = if is_x_plus_1(&ctx.f) { None } else { Some(FieldCtx::new(&ctx.f)?) };
    let mut out = vec![wset_base(ctx, fctx.as_ref())?];
    for _ in 1..top {
        let prev = out.last().unwrap();
        let next = match &fctx {
            None => wset_lift_zero(ctx, prev)?,
            Some(fc) => wset_lift_selfrec(fc, ctx, prev)?,
        };
        out.push(next);
    }
    Ok(out)
}

/// `(2^{d/2}+1)·2^{(s-1)d/2}`, the size of `W^(s)` for a self-reciprocal factor.
pub fn selfrec_cardinality(d: usize, s: usize) -> u128 {
    ((1u128 << (d / 2)) + 1) << ((s - 1) * d / 2)
}

/// Checks `w·w(x^{-1}) = 1 mod f^s` for every element.
pub fn verify_membership(ctx: &ChainRingCtx, w: &WSet) -> bool {
    w.elems.par_iter().all(|e| {
        let ei = ctx.inv_substitute(e);
        ctx.mul(e, &ei).map(|p| p.value.is_one()).unwrap_or(false)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        Poly::from_bitstring(s).unwrap()
    }

    fn set(ws: &WSet) -> Vec<String> {
        ws.polys().map(|q| q.to_string()).collect()
    }

    fn polys(v: &[&[usize]]) -> Vec<Poly> {
        let mut out: Vec<Poly> = v.iter().map(|e| Poly::from_exponents(e)).collect();
        out.sort();
        out
    }

    #[test]
    fn base_sets() {
        let c0 = ChainRingCtx::new(p("11"), 2, 12).unwrap();
        assert_eq!(set(&wset_base(&c0, None).unwrap()), vec!["1"]);
        let c1 = ChainRingCtx::new(p("111"), 2, 12).unwrap();
        let w = wset_base(&c1, None).unwrap();
        assert_eq!(w.polys().cloned().collect::<Vec<_>>(), polys(&[&[0], &[1], &[0, 1]]));
        let c2 = ChainRingCtx::new(p("1101"), 2, 28).unwrap();
        assert!(matches!(wset_base(&c2, None), Err(Error::NotSelfReciprocal(_))));
    }

    #[test]
    fn trace_preimages_in_f4() {
        let fc = FieldCtx::new(&p("111")).unwrap();
        assert_eq!(fc.trace_preimage(&Poly::zero()).unwrap(), vec![Poly::zero(), Poly::one()]);
        assert_eq!(fc.trace_preimage(&Poly::one()).unwrap(), vec![p("01"), p("11")]);
        assert!(fc.trace_preimage(&Poly::x()).is_err());
        let fc = FieldCtx::new(&p("1001001")).unwrap();
        for g in &fc.subfield {
            assert_eq!(fc.trace_preimage(g).unwrap().len(), 8);
        }
    }

    #[test]
    fn zeta_is_primitive() {
        for f in ["111", "11111", "1001001", "100111001"] {
            let fc = FieldCtx::new(&p(f)).unwrap();
            let n = (1u64 << fc.d) - 1;
            let mut seen = std::collections::HashSet::new();
            let mut t = Poly::one();
            for _ in 0..n {
                seen.insert(t.clone());
                t = t.mul_mod(&fc.zeta, &fc.f).unwrap();
            }
            assert_eq!(seen.len() as u64, n, "f = {f}");
            assert_eq!(fc.subfield.len(), 1 << (fc.d / 2));
        }
    }

    #[test]
    fn lift_x_plus_1_matches_worked_example() {
        let c = ChainRingCtx::new(p("11"), 3, 24).unwrap();
        let tower = wset_tower(&c, 8).unwrap();
        assert_eq!(tower[1].polys().cloned().collect::<Vec<_>>(), polys(&[&[0], &[1]]));
        assert_eq!(
            tower[3].polys().cloned().collect::<Vec<_>>(),
            polys(&[&[0], &[1], &[2], &[3], &[0, 1, 2], &[0, 2, 3], &[1, 2, 3], &[0, 1, 3]])
        );
        let sizes: Vec<usize> = tower.iter().map(WSet::len).collect();
        assert_eq!(sizes, vec![1, 2, 4, 8, 8, 16, 16, 32]);
    }

    #[test]
    fn lift_selfrec_level_two() {
        let c = ChainRingCtx::new(p("111"), 2, 12).unwrap();
        let tower = wset_tower(&c, 2).unwrap();
        let f = p("111");
        let expect = {
            let mut v = vec![
                Poly::one(),
                Poly::one().add(&p("11").mul(&f)),
                Poly::x(),
                Poly::x().add(&f),
                p("11").add(&f),
                p("11").add(&p("11").mul(&f)),
            ];
            v.sort();
            v
        };
        assert_eq!(tower[1].polys().cloned().collect::<Vec<_>>(), expect);
    }

    #[test]
    fn paired_factor_bruteforce_still_runs() {
        let c = ChainRingCtx::new(p("1101"), 2, 28).unwrap();
        let w = wset_bruteforce(&c, 1, 24).unwrap();
        assert!(verify_membership(&c, &w));
        assert!(wset_tower(&c, 2).is_err());
    }

    #[test]
    fn bruteforce_bound() {
        let c = ChainRingCtx::new(p("111"), 3, 24).unwrap();
        assert!(matches!(wset_bruteforce(&c, 8, 12), Err(Error::BoundExceeded { .. })));
    }
}
