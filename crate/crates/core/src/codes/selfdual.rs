//! The condition-(5) family and the self-dual component templates.
//!
//! Self-reciprocal factor (†), options in this order:
//! `(1, a)` for `a ∈ W^(S)`; `f^{S/2} I`; `(f^k, f^k c), (0, f^{S-k})` for
//! `1 <= k < S/2`, `c ∈ W^(S-2k)`.
//!
//! Reciprocal pair (‡), lower member `G_i`:
//! `(1, a)`; `(f b, 1)`; `f^{S/2} I`; `(f^k, f^k c), (0, f^{S-k})` with
//! `c ∈ A/<f^{S-2k}>`; `(f^k c, f^k), (f^{S-k}, 0)` with `c ∈ f·(A/<f^{S-2k}>)`.
//! A two-row pair code is self-dual only when the second row sits at `f^{S-k}`
//! (otherwise `|C_i| != 2^{Sd}`), which pins `j = S - 2k` in the last two
//! families.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::{CaseParams, CaseTag, ComponentCode};
use crate::chainring::ChainRingCtx;
use crate::crt::GenRow;
use crate::error::{Error, Result};
use crate::gf2poly::Poly;
use crate::wset::WSet;

/// One option for one component class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SelfDualChoice {
    Dagger1 { a: Poly },
    Dagger2,
    Dagger3 { k: usize, c: Poly },
    DDagger1 { a: Poly },
    DDagger2 { b: Poly },
    DDagger3,
    DDagger4 { k: usize, c: Poly },
    DDagger5 { k: usize, c: Poly },
}

impl SelfDualChoice {
    pub fn tag(&self) -> CaseTag {
        use SelfDualChoice::*;
        match self {
            Dagger1 { .. } => CaseTag::Dagger(1),
            Dagger2 => CaseTag::Dagger(2),
            Dagger3 { .. } => CaseTag::Dagger(3),
            DDagger1 { .. } => CaseTag::DDagger(1),
            DDagger2 { .. } => CaseTag::DDagger(2),
            DDagger3 => CaseTag::DDagger(3),
            DDagger4 { .. } => CaseTag::DDagger(4),
            DDagger5 { .. } => CaseTag::DDagger(5),
        }
    }

    pub fn params(&self) -> CaseParams {
        use SelfDualChoice::*;
        let mut p = CaseParams::default();
        match self {
            Dagger1 { a } | DDagger1 { a } => p.a = Some(a.clone()),
            DDagger2 { b } => p.b = Some(b.clone()),
            Dagger3 { k, c } | DDagger4 { k, c } | DDagger5 { k, c } => {
                p.k = Some(*k);
                p.c = Some(c.clone());
            }
            Dagger2 | DDagger3 => {}
        }
        p
    }

    pub fn from_tag(tag: CaseTag, p: &CaseParams) -> Result<Self> {
        let poly = |v: &Option<Poly>, n: &str| {
            v.clone().ok_or_else(|| Error::InvalidArgument(format!("{tag} needs parameter {n}")))
        };
        let k = || p.k.ok_or_else(|| Error::InvalidArgument(format!("{tag} needs parameter k")));
        use SelfDualChoice::*;
        Ok(match tag {
            CaseTag::Dagger(1) => Dagger1 { a: poly(&p.a, "a")? },
            CaseTag::Dagger(2) => Dagger2,
            CaseTag::Dagger(3) => Dagger3 { k: k()?, c: poly(&p.c, "c")? },
            CaseTag::DDagger(1) => DDagger1 { a: poly(&p.a, "a")? },
            CaseTag::DDagger(2) => DDagger2 { b: poly(&p.b, "b")? },
            CaseTag::DDagger(3) => DDagger3,
            CaseTag::DDagger(4) => DDagger4 { k: k()?, c: poly(&p.c, "c")? },
            CaseTag::DDagger(5) => DDagger5 { k: k()?, c: poly(&p.c, "c")? },
            other => return Err(Error::InvalidArgument(format!("{other} is not a self-dual template"))),
        })
    }

    pub fn is_selfrec(&self) -> bool {
        matches!(self.tag(), CaseTag::Dagger(_))
    }
}

fn level<'a>(tower: &'a [WSet], s: usize) -> Result<&'a WSet> {
    tower
        .get(s.wrapping_sub(1))
        .filter(|w| w.level == s)
        .ok_or_else(|| Error::InvalidArgument(format!("W-set of level {s} missing")))
}

fn check_tower(tower: &[WSet], smax: usize) -> Result<()> {
    for s in 1..=smax {
        level(tower, s)?;
    }
    Ok(())
}

/// `1 + Σ_{j=1}^{S/2} |W^(2j)|`.
pub fn dagger_count(tower: &[WSet], smax: usize) -> Result<u128> {
    let mut n = 1u128;
    for j in 1..=smax / 2 {
        n += level(tower, 2 * j)?.len() as u128;
    }
    Ok(n)
}

/// The `idx`-th † option in template order.
pub fn dagger_at(tower: &[WSet], smax: usize, idx: u128) -> Result<SelfDualChoice> {
    let mut idx = idx;
    let top = level(tower, smax)?;
    if idx < top.len() as u128 {
        return Ok(SelfDualChoice::Dagger1 { a: top.elems[idx as usize].value.clone() });
    }
    idx -= top.len() as u128;
    if idx == 0 {
        return Ok(SelfDualChoice::Dagger2);
    }
    idx -= 1;
    for k in 1..smax / 2 {
        let w = level(tower, smax - 2 * k)?;
        if idx < w.len() as u128 {
            return Ok(SelfDualChoice::Dagger3 { k, c: w.elems[idx as usize].value.clone() });
        }
        idx -= w.len() as u128;
    }
    Err(Error::IndexOutOfRange { index: idx.to_string(), count: dagger_count(tower, smax)?.to_string() })
}

/// Position of a † option in template order; errors if its parameter is not in the W-set.
pub fn dagger_index(tower: &[WSet], smax: usize, choice: &SelfDualChoice) -> Result<u128> {
    let pos = |w: &WSet, p: &Poly| -> Result<u128> {
        w.elems
            .binary_search_by(|e| e.value.cmp(p))
            .map(|x| x as u128)
            .map_err(|_| Error::InvalidArgument(format!("{p} is not in W^({})", w.level)))
    };
    let top = level(tower, smax)?;
    match choice {
        SelfDualChoice::Dagger1 { a } => pos(top, a),
        SelfDualChoice::Dagger2 => Ok(top.len() as u128),
        SelfDualChoice::Dagger3 { k, c } => {
            if *k < 1 || *k >= smax / 2 {
                return Err(Error::InvalidArgument(format!("dagger-3: k={k} out of range")));
            }
            let mut base = top.len() as u128 + 1;
            for kk in 1..*k {
                base += level(tower, smax - 2 * kk)?.len() as u128;
            }
            Ok(base + pos(level(tower, smax - 2 * k)?, c)?)
        }
        other => Err(Error::InvalidArgument(format!("{} is not a † template", other.tag()))),
    }
}

fn pow2(bits: usize) -> BigUint {
    BigUint::one() << bits
}

/// `Ω`: the number of self-dual pair options, with the last two families at `j = S-2k`.
pub fn ddagger_count(smax: usize, d: usize) -> BigUint {
    let mut n = pow2(smax * d) + pow2((smax - 1) * d) + BigUint::one();
    for k in 1..smax / 2 {
        n += pow2((smax - 2 * k) * d) + pow2((smax - 2 * k - 1) * d);
    }
    n
}

fn poly_of(idx: &BigUint) -> Poly {
    Poly::from_limbs(idx.to_u64_digits())
}

fn index_of(p: &Poly) -> BigUint {
    let mut n = BigUint::zero();
    for (w, limb) in p.limbs().iter().enumerate() {
        n += BigUint::from(*limb) << (64 * w);
    }
    n
}

/// The `idx`-th ‡ option in template order (free polynomials in numeric order;
/// the ‡-5 `c` is `f·t` in the order of `t`).
pub fn ddagger_at(ctx: &ChainRingCtx, idx: &BigUint) -> Result<SelfDualChoice> {
    let (s, d) = (ctx.smax(), ctx.d);
    let mut idx = idx.clone();
    let block = pow2(s * d);
    if idx < block {
        return Ok(SelfDualChoice::DDagger1 { a: poly_of(&idx) });
    }
    idx -= block;
    let block = pow2((s - 1) * d);
    if idx < block {
        return Ok(SelfDualChoice::DDagger2 { b: poly_of(&idx) });
    }
    idx -= block;
    if idx.is_zero() {
        return Ok(SelfDualChoice::DDagger3);
    }
    idx -= 1u32;
    for k in 1..s / 2 {
        let block = pow2((s - 2 * k) * d);
        if idx < block {
            return Ok(SelfDualChoice::DDagger4 { k, c: poly_of(&idx) });
        }
        idx -= block;
    }
    for k in 1..s / 2 {
        let block = pow2((s - 2 * k - 1) * d);
        if idx < block {
            return Ok(SelfDualChoice::DDagger5 { k, c: ctx.f.mul(&poly_of(&idx)) });
        }
        idx -= block;
    }
    Err(Error::IndexOutOfRange { index: idx.to_string(), count: ddagger_count(s, d).to_string() })
}

/// Position of a ‡ option in template order.
pub fn ddagger_index(ctx: &ChainRingCtx, choice: &SelfDualChoice) -> Result<BigUint> {
    let (s, d) = (ctx.smax(), ctx.d);
    // Validates domains via the template's standard form.
    ComponentCode::from_tag(ctx, 0, choice.tag(), choice.params())?;
    let mut base = BigUint::zero();
    match choice {
        SelfDualChoice::DDagger1 { a } => return Ok(index_of(a)),
        SelfDualChoice::DDagger2 { b } => return Ok(pow2(s * d) + index_of(b)),
        _ => {}
    }
    base += pow2(s * d) + pow2((s - 1) * d);
    if matches!(choice, SelfDualChoice::DDagger3) {
        return Ok(base);
    }
    base += 1u32;
    match choice {
        SelfDualChoice::DDagger4 { k, c } => {
            for kk in 1..*k {
                base += pow2((s - 2 * kk) * d);
            }
            Ok(base + index_of(c))
        }
        SelfDualChoice::DDagger5 { k, c } => {
            for kk in 1..s / 2 {
                base += pow2((s - 2 * kk) * d);
            }
            for kk in 1..*k {
                base += pow2((s - 2 * kk - 1) * d);
            }
            let (t, _) = c.divrem(&ctx.f)?;
            Ok(base + index_of(&t))
        }
        other => Err(Error::InvalidArgument(format!("{} is not a ‡ template", other.tag()))),
    }
}

fn require_selfrec(ctx: &ChainRingCtx) -> Result<()> {
    if ctx.f.reciprocal()? != ctx.f {
        return Err(Error::NotSelfReciprocal(ctx.f.to_string()));
    }
    Ok(())
}

/// All codes satisfying condition (5) for a self-reciprocal factor, in the
/// order I (by a), II (by k, a), III (by k), IV (by j, c), V (by k, j, c).
pub fn enumerate_condition5(ctx: &ChainRingCtx, i: usize, tower: &[WSet]) -> Result<Vec<ComponentCode>> {
    require_selfrec(ctx)?;
    let s = ctx.smax();
    check_tower(tower, s)?;
    let mut out = Vec::new();
    let mut push = |n: u8, p: CaseParams| -> Result<()> {
        out.push(ComponentCode::from_tag(ctx, i, CaseTag::Cond5(n), p)?);
        Ok(())
    };
    let p = |k, j, a, c| CaseParams { k, j, a, b: None, c };
    for a in tower[s - 1].polys() {
        push(1, p(None, None, Some(a.clone()), None))?;
    }
    for k in 1..s {
        for a in tower[s - k - 1].polys() {
            push(2, p(Some(k), None, Some(a.clone()), None))?;
        }
    }
    for k in 0..=s {
        push(3, p(Some(k), None, None, None))?;
    }
    for j in 1..s {
        for c in tower[j - 1].polys() {
            push(4, p(None, Some(j), None, Some(c.clone())))?;
        }
    }
    for k in 1..s.saturating_sub(1) {
        for j in 1..s - k {
            for c in tower[j - 1].polys() {
                push(5, p(Some(k), Some(j), None, Some(c.clone())))?;
            }
        }
    }
    Ok(out)
}

/// The † components of index `i`, in template order.
pub fn enumerate_selfdual_selfrec<'a>(
    ctx: &'a ChainRingCtx,
    i: usize,
    tower: &'a [WSet],
) -> Result<impl Iterator<Item = Result<ComponentCode>> + 'a> {
    require_selfrec(ctx)?;
    let s = ctx.smax();
    let n = dagger_count(tower, s)?;
    Ok((0..n).map(move |idx| {
        let ch = dagger_at(tower, s, idx)?;
        ComponentCode::from_tag(ctx, i, ch.tag(), ch.params())
    }))
}

/// The ‡ pairs `(G_i, G_{i+ε})` in template order.
pub fn enumerate_selfdual_pair<'a>(
    ctx: &'a ChainRingCtx,
    i: usize,
    pctx: &'a ChainRingCtx,
    pi: usize,
) -> Result<impl Iterator<Item = Result<(ComponentCode, ComponentCode)>> + 'a> {
    if ctx.f.reciprocal()? == ctx.f {
        return Err(Error::InvalidArgument(format!(
            "index {i} has a self-reciprocal factor; ‡ templates need a reciprocal pair"
        )));
    }
    let n = ddagger_count(ctx.smax(), ctx.d)
        .to_u64()
        .ok_or_else(|| Error::BoundExceeded { bits: ctx.smax() * ctx.d, bound: 63 })?;
    Ok((0..n).map(move |idx| {
        let ch = ddagger_at(ctx, &BigUint::from(idx))?;
        pair_components(ctx, i, pctx, pi, &ch)
    }))
}

/// `G_i` from the template and `G_{i+ε}` as the template's stated partner.
pub fn pair_components(
    ctx: &ChainRingCtx,
    i: usize,
    pctx: &ChainRingCtx,
    pi: usize,
    choice: &SelfDualChoice,
) -> Result<(ComponentCode, ComponentCode)> {
    let gi = ComponentCode::from_tag(ctx, i, choice.tag(), choice.params())?;
    let s = pctx.smax();
    let fp = |e: usize| pctx.modulus(e).clone();
    let inv = |p: &Poly| pctx.inv_map(p);
    let row = |a: Poly, b: Poly| GenRow::new(pctx, a, b);
    let z = Poly::zero;
    use SelfDualChoice::*;
    let rows = match choice {
        DDagger1 { a } => vec![row(inv(a), Poly::one())],
        DDagger2 { b } => {
            let xd = inv(&Poly::monomial(ctx.d));
            vec![row(Poly::one(), pctx.f.mul(&xd).mul(&inv(b)))]
        }
        DDagger3 => vec![row(fp(s / 2), z()), row(z(), fp(s / 2))],
        DDagger4 { k, c } => vec![row(fp(*k).mul(&inv(c)), fp(*k)), row(fp(s - k), z())],
        DDagger5 { k, c } => vec![row(fp(*k), fp(*k).mul(&inv(c))), row(z(), fp(s - k))],
        other => return Err(Error::InvalidArgument(format!("{} is not a ‡ template", other.tag()))),
    };
    Ok((gi, ComponentCode { i: pi, tag: CaseTag::Partner, params: CaseParams::default(), rows }))
}
