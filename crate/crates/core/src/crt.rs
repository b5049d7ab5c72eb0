//! Primitive idempotents of `F2[x]/<x^{4m}-1>` and the concatenated binary
//! embedding of length-2 component codes.

use crate::analysis::{rank_f2, BinaryCode};
use crate::chainring::{ChainRingCtx, RingElem};
use crate::cyclofactor::{FactorSystem, Params};
use crate::error::{Error, Result};
use crate::gf2poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentSystem {
    pub fourm: usize,
    pub eps: Vec<Poly>,
}

/// `ε_i = u_i(x^S)·F_i(x^S) mod x^{4m}-1` with `u_i F_i + v_i f_i = 1` and
/// `F_i = (x^{m0}-1)/f_i`.
pub fn compute_idempotents(params: &Params, fs: &FactorSystem) -> Result<IdempotentSystem> {
    let fourm = params.fourm();
    let smax = params.s_max();
    let xm0 = Poly::from_exponents(&[0, params.m0 as usize]);
    let mut eps = Vec::with_capacity(fs.factors.len());
    for f in &fs.factors {
        let (big_f, r) = xm0.divrem(&f.poly)?;
        if !r.is_zero() {
            return Err(Error::Internal(format!("{} does not divide x^m0-1", f.poly)));
        }
        let (g, u, _) = Poly::xgcd(&big_f, &f.poly)?;
        if !g.is_one() {
            return Err(Error::Internal(format!("F_i and f_i not coprime for {}", f.poly)));
        }
        let e = u.spread(smax).mul(&big_f.spread(smax)).rem_cyclic(fourm);
        eps.push(e);
    }
    Ok(IdempotentSystem { fourm, eps })
}

pub fn mu(fs: &FactorSystem, i: usize) -> Result<usize> {
    fs.mu(i)
}

/// One generator row `(ξ_0, ξ_1)` of a component code over `A_i`, with its
/// f-degree `t`; it contributes `(S - t)·d` binary rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenRow {
    pub a: Poly,
    pub b: Poly,
    pub t: usize,
}

impl GenRow {
    /// Builds a row and computes its f-degree in `ctx`.
    pub fn new(ctx: &ChainRingCtx, a: Poly, b: Poly) -> Self {
        let top = ctx.smax();
        let a = a.rem(ctx.modulus(top)).unwrap();
        let b = b.rem(ctx.modulus(top)).unwrap();
        let t = ctx
            .f_degree_pair(&RingElem { value: a.clone(), level: top }, &RingElem { value: b.clone(), level: top })
            .unwrap();
        GenRow { a, b, t }
    }
}

/// Packs `(α ∥ β)` into one 8m-bit word, `α` in the low half.
pub fn join_halves(alpha: &Poly, beta: &Poly, fourm: usize) -> Poly {
    alpha.add(&beta.shl(fourm))
}

/// Binary rows `x^l·ε_i·(ξ_0 ∥ ξ_1)` for `0 <= l < (S - t)·d` of every generator row.
pub fn concat_embed(
    ids: &IdempotentSystem,
    ctx: &ChainRingCtx,
    i: usize,
    rows: &[GenRow],
) -> Result<Vec<Poly>> {
    let n = ids.fourm;
    let top = ctx.smax();
    let eps = ids
        .eps
        .get(i)
        .ok_or_else(|| Error::InvalidArgument(format!("no idempotent for index {i}")))?;
    let mut out = Vec::new();
    for row in rows {
        let a = RingElem { value: row.a.rem(ctx.modulus(top))?, level: top };
        let b = RingElem { value: row.b.rem(ctx.modulus(top))?, level: top };
        let t = ctx.f_degree_pair(&a, &b)?;
        if t != row.t {
            return Err(Error::InvalidArgument(format!(
                "row ({}, {}) declared f-degree {} but has {t}",
                row.a, row.b, row.t
            )));
        }
        let u0 = eps.mul(&row.a).rem_cyclic(n);
        let u1 = eps.mul(&row.b).rem_cyclic(n);
        for l in 0..(top - t) * ctx.d {
            out.push(join_halves(&u0.rotate(l, n), &u1.rotate(l, n), n));
        }
    }
    Ok(out)
}

/// Stacks the embedded components into one generator matrix and checks the
/// rank equals `Σ (S - t_k)·d_i`.
pub fn assemble_code<'a>(
    ids: &IdempotentSystem,
    ctxs: &[ChainRingCtx],
    components: impl IntoIterator<Item = (usize, &'a [GenRow])>,
) -> Result<BinaryCode> {
    let n = 2 * ids.fourm;
    let mut rows = Vec::new();
    let mut expected = 0;
    let mut any = false;
    for (i, grows) in components {
        any = true;
        let ctx = ctxs
            .get(i)
            .ok_or_else(|| Error::InvalidArgument(format!("no ring for index {i}")))?;
        rows.extend(concat_embed(ids, ctx, i, grows)?);
        expected += grows.iter().map(|r| (ctx.smax() - r.t) * ctx.d).sum::<usize>();
    }
    if !any {
        return Err(Error::InvalidArgument("no components to assemble".into()));
    }
    let code = BinaryCode::from_polys(n, &rows);
    let got = rank_f2(&code.rows, code.words);
    if got != expected {
        return Err(Error::RankDeficient { expected, got });
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclofactor::{derive_params, factor_cyclotomic};

    fn system(m: u64) -> (Params, FactorSystem, IdempotentSystem) {
        let params = derive_params(m).unwrap();
        let fs = factor_cyclotomic(params.m0).unwrap();
        let ids = compute_idempotents(&params, &fs).unwrap();
        (params, fs, ids)
    }

    #[test]
    fn idempotents_of_worked_examples() {
        let (_, _, ids) = system(3);
        assert_eq!(ids.eps[0], Poly::from_exponents(&[0, 4, 8]));
        assert_eq!(ids.eps[1], Poly::from_exponents(&[4, 8]));
        let (_, _, ids) = system(6);
        assert_eq!(ids.eps[0], Poly::from_exponents(&[0, 8, 16]));
        assert_eq!(ids.eps[1], Poly::from_exponents(&[8, 16]));
        let (_, _, ids) = system(7);
        assert_eq!(ids.eps[0], Poly::from_exponents(&[0, 4, 8, 12, 16, 20, 24]));
        assert_eq!(ids.eps[1], Poly::from_exponents(&[16, 8, 4, 0]));
        assert_eq!(ids.eps[2], Poly::from_exponents(&[24, 20, 12, 0]));
    }

    #[test]
    fn idempotent_identities_and_reversal() {
        for m in 1..=18 {
            let (params, fs, ids) = system(m);
            let n = params.fourm();
            let mut sum = Poly::zero();
            for (i, e) in ids.eps.iter().enumerate() {
                sum.add_assign(e);
                assert_eq!(&e.mul(e).rem_cyclic(n), e, "m={m} i={i}");
                for (j, g) in ids.eps.iter().enumerate() {
                    if i != j {
                        assert!(e.mul(g).rem_cyclic(n).is_zero());
                    }
                }
                // ε_i(x^{-1})
                let mut rev = Poly::zero();
                for k in e.exponents() {
                    rev.flip_coeff((n - k) % n);
                }
                assert_eq!(rev, ids.eps[mu(&fs, i).unwrap()], "m={m} i={i}");
                // parity check f_i^S annihilates the component
                let check = fs.poly(i).clone();
                let mut h = Poly::one();
                for _ in 0..params.s_max() {
                    h = h.mul(&check);
                }
                assert!(e.mul(&h).rem_cyclic(n).is_zero());
            }
            assert!(sum.is_one(), "m={m}");
        }
    }

    #[test]
    fn mu_examples() {
        let (_, fs3, _) = system(3);
        assert_eq!(mu(&fs3, 1).unwrap(), 1);
        let (_, fs7, _) = system(7);
        assert_eq!((mu(&fs7, 1).unwrap(), mu(&fs7, 2).unwrap()), (2, 1));
        for i in 0..=fs7.r() {
            assert_eq!(mu(&fs7, mu(&fs7, i).unwrap()).unwrap(), i);
        }
        assert!(mu(&fs7, 5).is_err());
    }

    #[test]
    fn embed_m1_first_row() {
        let (params, fs, ids) = system(1);
        let ctx = ChainRingCtx::new(fs.poly(0).clone(), params.lambda, params.fourm()).unwrap();
        let row = GenRow::new(&ctx, Poly::one(), Poly::from_bitstring("111").unwrap());
        let rows = concat_embed(&ids, &ctx, 0, &[row]).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].to_bitstring(8), "10001110");
        let zero = GenRow::new(&ctx, Poly::zero(), Poly::zero());
        assert!(concat_embed(&ids, &ctx, 0, &[zero]).unwrap().is_empty());
        let bad = GenRow { a: Poly::one(), b: Poly::zero(), t: 1 };
        assert!(concat_embed(&ids, &ctx, 0, &[bad]).is_err());
    }

    #[test]
    fn full_ring_dimension() {
        for m in [3u64, 6, 7] {
            let (params, fs, ids) = system(m);
            for i in 0..=fs.r() {
                let ctx = ChainRingCtx::new(fs.poly(i).clone(), params.lambda, params.fourm()).unwrap();
                let row = GenRow::new(&ctx, Poly::one(), Poly::zero());
                let rows = concat_embed(&ids, &ctx, i, &[row]).unwrap();
                let code = BinaryCode::from_polys(2 * params.fourm(), &rows);
                assert_eq!(rank_f2(&code.rows, code.words), params.s_max() * fs.degree(i));
            }
        }
    }

    #[test]
    fn assemble_m1_and_errors() {
        let (params, fs, ids) = system(1);
        let ctx = ChainRingCtx::new(fs.poly(0).clone(), params.lambda, params.fourm()).unwrap();
        let rows = vec![GenRow::new(&ctx, Poly::one(), Poly::from_bitstring("111").unwrap())];
        let ctxs = vec![ctx];
        let code = assemble_code(&ids, &ctxs, [(0usize, rows.as_slice())]).unwrap();
        assert_eq!((code.n, code.k()), (8, 4));
        assert!(crate::analysis::is_self_dual(&code));
        let empty: Vec<(usize, &[GenRow])> = Vec::new();
        assert!(assemble_code(&ids, &ctxs, empty).is_err());
        // two proportional generators: rank check fires
        let dup = vec![rows[0].clone(), rows[0].clone()];
        assert!(matches!(
            assemble_code(&ids, &ctxs, [(0usize, dup.as_slice())]),
            Err(Error::RankDeficient { .. })
        ));
    }
}
