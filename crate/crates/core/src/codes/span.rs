//! Component codes as GF(2) subspaces of `A^2`, for membership, equality and
//! the reversal-inversion closure test.
//!
//! A vector `(a, b) ∈ A^2` is packed as `a + x^{Sd}·b`. The `A`-module spanned
//! by some rows is the GF(2) span of `x^l·row` for `0 <= l < Sd`, since every
//! `u ∈ A` has degree below `Sd`.

use crate::analysis::{rank_f2, rref, BinaryCode};
use crate::chainring::ChainRingCtx;
use crate::crt::GenRow;
use crate::gf2poly::Poly;

fn pack(ctx: &ChainRingCtx, a: &Poly, b: &Poly) -> Poly {
    a.add(&b.shl(ctx.smax() * ctx.d))
}

/// Canonical (reduced echelon) GF(2) basis of the module generated by `rows`.
pub fn module_basis(ctx: &ChainRingCtx, rows: &[GenRow]) -> BinaryCode {
    let top = ctx.modulus(ctx.smax());
    let n = 2 * ctx.smax() * ctx.d;
    let mut vecs = Vec::new();
    for r in rows {
        let (mut a, mut b) = (r.a.clone(), r.b.clone());
        for _ in 0..ctx.smax() * ctx.d {
            vecs.push(pack(ctx, &a, &b));
            a = a.shl(1).rem(top).unwrap();
            b = b.shl(1).rem(top).unwrap();
        }
    }
    rref(&BinaryCode::from_polys(n, &vecs))
}

pub fn same_module(ctx: &ChainRingCtx, x: &[GenRow], y: &[GenRow]) -> bool {
    module_basis(ctx, x) == module_basis(ctx, y)
}

/// Whether `(a, b)` lies in the module with the given basis.
pub fn contains(ctx: &ChainRingCtx, basis: &BinaryCode, a: &Poly, b: &Poly) -> bool {
    let v = pack(ctx, a, b);
    let mut rows = basis.rows.clone();
    let mut w = v.limbs().to_vec();
    w.resize(basis.words, 0);
    rows.push(w);
    rank_f2(&rows, basis.words) == basis.k()
}

/// `(b(x^{-1}), a(x^{-1}))` of every row, reduced in the ring of `target`
/// (the same ring for a self-reciprocal factor, the reciprocal partner's otherwise).
pub fn image_rows(target: &ChainRingCtx, rows: &[GenRow]) -> Vec<GenRow> {
    rows.iter()
        .map(|r| GenRow::new(target, target.inv_map(&r.b), target.inv_map(&r.a)))
        .collect()
}

/// Condition (5): the module is closed under `(a, b) -> (b(x^{-1}), a(x^{-1}))`.
/// Checking the images of the generators suffices because the map is semilinear.
pub fn check_condition5(ctx: &ChainRingCtx, rows: &[GenRow]) -> bool {
    let basis = module_basis(ctx, rows);
    image_rows(ctx, rows).iter().all(|r| contains(ctx, &basis, &r.a, &r.b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::forms::{enumerate_all_length2, StandardForm};

    fn ctx_m1() -> ChainRingCtx {
        ChainRingCtx::new(Poly::from_bitstring("11").unwrap(), 2, 4).unwrap()
    }

    #[test]
    fn basis_dimension_matches_code_size() {
        let ctx = ctx_m1();
        for form in enumerate_all_length2(&ctx) {
            let rows = form.rows(&ctx).unwrap();
            let want = super::super::forms::log2_size(&ctx, &rows);
            assert_eq!(module_basis(&ctx, &rows).k(), want, "{form}");
        }
    }

    #[test]
    fn condition5_examples() {
        let ctx = ctx_m1();
        let g = StandardForm::One { a: Poly::one() }.rows(&ctx).unwrap();
        assert!(check_condition5(&ctx, &g));
        let g = StandardForm::Three { b: Poly::one() }.rows(&ctx).unwrap();
        assert!(!check_condition5(&ctx, &g));
    }
}
