//! `m = 2^λ0 · m0` and the ordered factorization of `x^m0 - 1` over GF(2).
//!
//! Factors come from the 2-cyclotomic cosets of `Z/m0`: each coset `C` gives the
//! minimal polynomial `∏_{j∈C} (x - α^j)`, where `α` has order `m0` in a field
//! `GF(2^ord)` built from an irreducible polynomial found by search.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Params {
    pub m: u64,
    pub m0: u64,
    pub lambda0: u32,
    pub lambda: u32,
}

impl Params {
    /// `2^λ`, the nilpotency index of every `f_i` in its component ring.
    pub fn s_max(&self) -> usize {
        1usize << self.lambda
    }

    pub fn fourm(&self) -> usize {
        4 * self.m as usize
    }
}

pub fn derive_params(m: u64) -> Result<Params> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let lambda0 = m.trailing_zeros();
    Ok(Params {
        m,
        m0: m >> lambda0,
        lambda0,
        lambda: lambda0 + 2,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FactorKind {
    /// `f_0 = x + 1`.
    Unit,
    /// Self-reciprocal of even degree, `1 <= i <= ρ`.
    SelfReciprocal,
    /// Lower member of a reciprocal pair, `ρ+1 <= i <= ρ+ε`.
    PairLow,
    /// Upper member of a reciprocal pair, `ρ+ε+1 <= i <= ρ+2ε`.
    PairHigh,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub poly: Poly,
    pub degree: usize,
    pub kind: FactorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorSystem {
    pub m0: u64,
    pub factors: Vec<Factor>,
    pub rho: usize,
    pub eps: usize,
}

impl FactorSystem {
    /// `r`, the largest factor index.
    pub fn r(&self) -> usize {
        self.factors.len() - 1
    }

    /// Pairing involution: identity on `0..=ρ`, swaps `i <-> i+ε` on the pairs.
    pub fn mu(&self, i: usize) -> Result<usize> {
        let (rho, eps) = (self.rho, self.eps);
        match i {
            _ if i > self.r() => Err(Error::InvalidArgument(format!(
                "factor index {i} out of range 0..={}",
                self.r()
            ))),
            _ if i <= rho => Ok(i),
            _ if i <= rho + eps => Ok(i + eps),
            _ => Ok(i - eps),
        }
    }

    pub fn degree(&self, i: usize) -> usize {
        self.factors[i].degree
    }

    pub fn poly(&self, i: usize) -> &Poly {
        &self.factors[i].poly
    }

    /// Indices that carry an independent choice in the self-dual enumeration:
    /// `0..=ρ` and the pair representatives `ρ+1..=ρ+ε`.
    pub fn class_indices(&self) -> impl Iterator<Item = usize> {
        0..=self.rho + self.eps
    }

    pub fn is_self_reciprocal_index(&self, i: usize) -> bool {
        i <= self.rho
    }
}

/// Multiplicative order of 2 modulo odd `n > 1`.
fn order_of_two(n: u64) -> u32 {
    let mut v = 2 % n;
    let mut k = 1;
    while v != 1 {
        v = v * 2 % n;
        k += 1;
    }
    k
}

fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// `x^(2^k) mod f`, by `k` squarings.
fn frobenius_power(k: usize, f: &Poly) -> Result<Poly> {
    let mut t = Poly::x().rem(f)?;
    for _ in 0..k {
        t = t.mul_mod(&t, f)?;
    }
    Ok(t)
}

/// Rabin's irreducibility test over GF(2).
pub fn is_irreducible(f: &Poly) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    let x = Poly::x();
    match frobenius_power(n, f) {
        Ok(t) if t == x.rem(f).unwrap() => {}
        _ => return false,
    }
    prime_factors(n as u64).into_iter().all(|q| {
        let t = frobenius_power(n / q as usize, f).unwrap();
        t.add(&x).gcd(f).is_one()
    })
}

/// The numerically smallest irreducible polynomial of degree `n`.
fn find_irreducible(n: usize) -> Poly {
    let top = Poly::monomial(n);
    let mut low: u128 = 1;
    loop {
        let cand = top.add(&Poly::from_u128(low));
        if is_irreducible(&cand) {
            return cand;
        }
        low += 2;
    }
}

/// Polynomials with coefficients in GF(2^ord), stored low degree first.
fn mul_by_linear(coeffs: &[Poly], root: &Poly, modulus: &Poly) -> Result<Vec<Poly>> {
    // (Σ c_k x^k)(x + root)
    let mut out = vec![Poly::zero(); coeffs.len() + 1];
    for (k, c) in coeffs.iter().enumerate() {
        out[k + 1].add_assign(c);
        out[k].add_assign(&c.mul_mod(root, modulus)?);
    }
    Ok(out)
}

fn cyclotomic_cosets(m0: u64) -> Vec<Vec<u64>> {
    let mut seen = vec![false; m0 as usize];
    let mut cosets = Vec::new();
    for s in 0..m0 {
        if seen[s as usize] {
            continue;
        }
        let mut coset = Vec::new();
        let mut j = s;
        while !seen[j as usize] {
            seen[j as usize] = true;
            coset.push(j);
            j = j * 2 % m0;
        }
        cosets.push(coset);
    }
    cosets
}

/// Ordering key for the canonical factor order: degree, then numeric value.
fn canonical_cmp(a: &Poly, b: &Poly) -> std::cmp::Ordering {
    a.cmp(b)
}

pub fn factor_cyclotomic(m0: u64) -> Result<FactorSystem> {
    if m0 == 0 || m0 % 2 == 0 {
        return Err(Error::InvalidArgument(format!("m0 must be odd and positive, got {m0}")));
    }
    let x_plus_1 = Poly::from_u64(0b11);
    let mut minimal: Vec<Poly> = Vec::new();
    if m0 > 1 {
        let ord = order_of_two(m0) as usize;
        let field = find_irreducible(ord);
        let group_order = (BigUint::from(1u8) << ord) - 1u8;
        let cofactor = &group_order / m0;
        let m0_primes = prime_factors(m0);
        let mut g: u128 = 2;
        let alpha = loop {
            let cand = Poly::from_u128(g).pow_mod_big(&cofactor.to_u64_digits(), &field)?;
            let exact = m0_primes
                .iter()
                .all(|&q| !cand.pow_mod(m0 / q, &field).unwrap().is_one());
            if exact && cand.pow_mod(m0, &field)?.is_one() {
                break cand;
            }
            g += 1;
        };
        for coset in cyclotomic_cosets(m0).into_iter().skip(1) {
            let mut coeffs = vec![Poly::one()];
            for j in coset {
                let root = alpha.pow_mod(j, &field)?;
                coeffs = mul_by_linear(&coeffs, &root, &field)?;
            }
            let mut exps = Vec::new();
            for (k, c) in coeffs.iter().enumerate() {
                if c.is_one() {
                    exps.push(k);
                } else if !c.is_zero() {
                    return Err(Error::Internal("minimal polynomial left the prime field".into()));
                }
            }
            minimal.push(Poly::from_exponents(&exps));
        }
    }

    let mut selfrec = Vec::new();
    let mut lows = Vec::new();
    for f in &minimal {
        let rec = f.reciprocal()?;
        if &rec == f {
            selfrec.push(f.clone());
        } else if canonical_cmp(f, &rec).is_lt() {
            lows.push(f.clone());
        }
    }
    selfrec.sort_by(canonical_cmp);
    lows.sort_by(canonical_cmp);
    let highs: Vec<Poly> = lows.iter().map(|f| f.reciprocal()).collect::<Result<_>>()?;

    let mk = |poly: Poly, kind| Factor { degree: poly.degree().unwrap(), poly, kind };
    let mut factors = vec![mk(x_plus_1, FactorKind::Unit)];
    let (rho, eps) = (selfrec.len(), lows.len());
    factors.extend(selfrec.into_iter().map(|p| mk(p, FactorKind::SelfReciprocal)));
    factors.extend(lows.into_iter().map(|p| mk(p, FactorKind::PairLow)));
    factors.extend(highs.into_iter().map(|p| mk(p, FactorKind::PairHigh)));
    Ok(FactorSystem { m0, factors, rho, eps })
}
