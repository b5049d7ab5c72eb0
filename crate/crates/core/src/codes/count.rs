//! Closed-form and W-set-based counts.

use num_bigint::BigUint;
use num_traits::One;

use super::selfdual::ddagger_count;
use crate::chainring::ChainRingCtx;
use crate::cyclofactor::{derive_params, factor_cyclotomic, FactorKind, Params};
use crate::error::{Error, Result};
use crate::gf2poly::Poly;
use crate::wset::wset_tower;

/// Largest λ for which `ω_λ` is computed from actual `W_0` sets
/// (`|W_0^(32)|` is about 1.3·10^5; the next level would be ~10^10).
pub const MAX_COUNT_LAMBDA: u32 = 5;

fn pow2(bits: usize) -> BigUint {
    BigUint::one() << bits
}

/// `Σ_{k=0}^{S} (2k+1)·2^{(S-k)d}`: all length-2 codes over one chain ring.
pub fn length2_module_count(d: usize, smax: usize) -> BigUint {
    (0..=smax).map(|k| BigUint::from(2 * k + 1) * pow2((smax - k) * d)).sum()
}

/// `1 + S + Σ_{j=1}^{S} (S-j+1)·|W^(j)|`, with `sizes[j-1] = |W^(j)|`.
pub fn cond5_count(smax: usize, sizes: &[u128]) -> BigUint {
    let mut n = BigUint::from(1 + smax);
    for (j, &w) in sizes.iter().enumerate().take(smax) {
        n += BigUint::from(smax - j) * BigUint::from(w);
    }
    n
}

/// `Ω_(λ,d)`: self-dual options for a reciprocal pair of degree `d`.
pub fn omega(lambda: u32, d: usize) -> BigUint {
    ddagger_count(1 << lambda, d)
}

/// The pair count as printed with the theorem, whose last two families run
/// over all `(k, j)` rather than `j = S - 2k`. Kept for comparison only.
pub fn omega_published(lambda: u32, d: usize) -> BigUint {
    let s = 1usize << lambda;
    let mut sum = BigUint::default();
    for l in 0..s.saturating_sub(2) {
        sum += BigUint::from(s - 2 - l) * pow2(l * d);
    }
    BigUint::one() + pow2((s - 1) * d) + pow2(s * d) + (pow2(d) + 1u32) * sum
}

/// `1 + (2^d + 2^{d/2})·(2^{(S/2)d} - 1)/(2^d - 1)` for a self-reciprocal factor
/// of (even) degree `d`.
pub fn selfrec_term(lambda: u32, d: usize) -> BigUint {
    let half = (1usize << lambda) / 2;
    let num = (pow2(d) + pow2(d / 2)) * (pow2(half * d) - 1u32);
    BigUint::one() + num / (pow2(d) - 1u32)
}

/// `ω_λ = 1 + Σ_{j=1}^{S/2} |W_0^(2j)|` from the recursively computed sets.
pub fn omega_zero(lambda: u32) -> Result<BigUint> {
    if lambda > MAX_COUNT_LAMBDA {
        return Err(Error::BoundExceeded { bits: 1 << lambda, bound: 1 << MAX_COUNT_LAMBDA });
    }
    let s = 1usize << lambda;
    let ctx = ChainRingCtx::new(Poly::from_u64(0b11), lambda, s)?;
    let tower = wset_tower(&ctx, s)?;
    Ok(BigUint::one() + (1..=s / 2).map(|j| BigUint::from(tower[2 * j - 1].len())).sum::<BigUint>())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassTerm {
    pub i: usize,
    pub d: usize,
    /// `"x+1"`, `"self-reciprocal"` or `"pair"`.
    pub kind: &'static str,
    pub value: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfDualCount {
    pub params: Params,
    pub total: BigUint,
    pub terms: Vec<ClassTerm>,
}

fn count_with(m: u64, pair_term: fn(u32, usize) -> BigUint) -> Result<SelfDualCount> {
    let params = derive_params(m)?;
    let fs = factor_cyclotomic(params.m0)?;
    let mut terms = Vec::new();
    for i in fs.class_indices() {
        let d = fs.degree(i);
        let (kind, value) = match fs.factors[i].kind {
            FactorKind::Unit => ("x+1", omega_zero(params.lambda)?),
            FactorKind::SelfReciprocal => ("self-reciprocal", selfrec_term(params.lambda, d)),
            FactorKind::PairLow => ("pair", pair_term(params.lambda, d)),
            FactorKind::PairHigh => unreachable!("class indices stop at ρ+ε"),
        };
        terms.push(ClassTerm { i, d, kind, value });
    }
    let total = terms.iter().map(|t| t.value.clone()).product();
    Ok(SelfDualCount { params, total, terms })
}

/// Number of self-dual binary left `D_{8m}`-codes.
pub fn count_selfdual(m: u64) -> Result<SelfDualCount> {
    count_with(m, omega)
}

/// The same product with the printed pair count, for comparison with the table.
pub fn count_selfdual_published(m: u64) -> Result<SelfDualCount> {
    count_with(m, omega_published)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(length2_module_count(1, 4), BigUint::from(83u32));
        assert_eq!(length2_module_count(3, 4), BigUint::from(6017u32));
        assert_eq!(omega_published(2, 3), BigUint::from(4699u32));
        assert_eq!(omega(2, 3), BigUint::from(4681u32));
        assert_eq!(selfrec_term(2, 2), BigUint::from(31u32));
        assert_eq!(selfrec_term(2, 4), BigUint::from(341u32));
        assert_eq!(selfrec_term(3, 2), BigUint::from(511u32));
        assert_eq!(omega_zero(2).unwrap(), BigUint::from(11u32));
        assert_eq!(omega_zero(3).unwrap(), BigUint::from(59u32));
        assert!(omega_zero(MAX_COUNT_LAMBDA + 1).is_err());
    }

    #[test]
    fn pair_count_equals_selfrec_count_of_double_degree() {
        // A reciprocal pair of degree d behaves like one self-reciprocal factor of degree 2d.
        for lambda in 1..=4 {
            for d in [1usize, 2, 3, 4] {
                assert_eq!(omega(lambda, d), selfrec_term(lambda, 2 * d), "λ={lambda} d={d}");
            }
        }
    }
}
