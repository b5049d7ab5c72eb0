//! Dense polynomials over GF(2), bit-packed into 64-bit limbs.
//!
//! Bit `j` of the packed representation is the coefficient of `x^j`. The limb
//! vector is always normalized: the most significant limb is nonzero, and the
//! zero polynomial has no limbs at all.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const LIMB_BITS: usize = 64;

/// A polynomial over GF(2).
///
/// Ordering is numeric: polynomials compare as the integers whose binary
/// digits are their coefficients (so by degree first, then by the highest
/// differing coefficient).
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    limbs: Vec<u64>,
}

/// Carryless 64x64 -> 128 bit product.
#[inline]
fn clmul64(a: u64, b: u64) -> (u64, u64) {
    let (a, mut b) = if a.count_ones() < b.count_ones() { (b, a) } else { (a, b) };
    let mut lo = 0u64;
    let mut hi = 0u64;
    while b != 0 {
        let i = b.trailing_zeros();
        lo ^= a << i;
        if i != 0 {
            hi ^= a >> (64 - i);
        }
        b &= b - 1;
    }
    (lo, hi)
}

/// Reduce a 128-bit packed polynomial modulo a single-limb modulus of degree `dm`.
#[inline]
fn reduce_u128(mut v: u128, m: u64, dm: u32) -> u64 {
    let m = m as u128;
    while v >> dm != 0 {
        let top = 127 - v.leading_zeros();
        v ^= m << (top - dm);
    }
    v as u64
}

impl Poly {
    pub fn zero() -> Self {
        Poly { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { limbs: vec![1] }
    }

    pub fn x() -> Self {
        Poly { limbs: vec![2] }
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut limbs = vec![0u64; k / LIMB_BITS + 1];
        limbs[k / LIMB_BITS] = 1u64 << (k % LIMB_BITS);
        Poly { limbs }
    }

    pub fn from_u64(bits: u64) -> Self {
        Self::from_limbs(vec![bits])
    }

    pub fn from_u128(bits: u128) -> Self {
        Self::from_limbs(vec![bits as u64, (bits >> 64) as u64])
    }

    pub fn from_limbs(mut limbs: Vec<u64>) -> Self {
        while limbs.last() == Some(&0) {
            limbs.pop();
        }
        Poly { limbs }
    }

    /// Builds a polynomial from the exponents of its nonzero terms.
    /// Repeated exponents cancel.
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Poly::zero();
        for &e in exps {
            p.flip_coeff(e);
        }
        p
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    /// The low 64 coefficients. Panics in debug builds if the degree is 64 or more.
    pub fn to_u64(&self) -> u64 {
        debug_assert!(self.limbs.len() <= 1);
        self.limbs.first().copied().unwrap_or(0)
    }

    pub fn to_u128(&self) -> Option<u128> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0] as u128),
            2 => Some(self.limbs[0] as u128 | (self.limbs[1] as u128) << 64),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs.len() == 1 && self.limbs[0] == 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let top = *self.limbs.last()?;
        Some((self.limbs.len() - 1) * LIMB_BITS + 63 - top.leading_zeros() as usize)
    }

    /// Number of bits needed to hold the coefficients (`degree + 1`, or 0).
    pub fn bit_len(&self) -> usize {
        self.degree().map_or(0, |d| d + 1)
    }

    pub fn coeff(&self, j: usize) -> bool {
        self.limbs
            .get(j / LIMB_BITS)
            .is_some_and(|l| (l >> (j % LIMB_BITS)) & 1 == 1)
    }

    pub fn flip_coeff(&mut self, j: usize) {
        let li = j / LIMB_BITS;
        if self.limbs.len() <= li {
            self.limbs.resize(li + 1, 0);
        }
        self.limbs[li] ^= 1u64 << (j % LIMB_BITS);
        self.normalize();
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> u32 {
        self.limbs.iter().map(|l| l.count_ones()).sum()
    }

    /// Exponents of the nonzero terms, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (li, &l) in self.limbs.iter().enumerate() {
            let mut l = l;
            while l != 0 {
                out.push(li * LIMB_BITS + l.trailing_zeros() as usize);
                l &= l - 1;
            }
        }
        out
    }

    fn normalize(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    fn xor_shifted(&mut self, other: &Poly, shift: usize) {
        if other.is_zero() {
            return;
        }
        let ls = shift / LIMB_BITS;
        let bs = shift % LIMB_BITS;
        let need = other.limbs.len() + ls + 1;
        if self.limbs.len() < need {
            self.limbs.resize(need, 0);
        }
        if bs == 0 {
            for (i, &l) in other.limbs.iter().enumerate() {
                self.limbs[i + ls] ^= l;
            }
        } else {
            for (i, &l) in other.limbs.iter().enumerate() {
                self.limbs[i + ls] ^= l << bs;
                self.limbs[i + ls + 1] ^= l >> (LIMB_BITS - bs);
            }
        }
        self.normalize();
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (long, short) = if self.limbs.len() >= other.limbs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut limbs = long.limbs.clone();
        for (l, s) in limbs.iter_mut().zip(&short.limbs) {
            *l ^= s;
        }
        Poly::from_limbs(limbs)
    }

    pub fn add_assign(&mut self, other: &Poly) {
        if self.limbs.len() < other.limbs.len() {
            self.limbs.resize(other.limbs.len(), 0);
        }
        for (l, o) in self.limbs.iter_mut().zip(&other.limbs) {
            *l ^= o;
        }
        self.normalize();
    }

    /// `self * x^k`.
    pub fn shl(&self, k: usize) -> Poly {
        let mut out = Poly::zero();
        out.xor_shifted(self, k);
        out
    }

    /// Full product (no reduction).
    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut limbs = vec![0u64; self.limbs.len() + other.limbs.len()];
        for (i, &a) in self.limbs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.limbs.iter().enumerate() {
                let (lo, hi) = clmul64(a, b);
                limbs[i + j] ^= lo;
                limbs[i + j + 1] ^= hi;
            }
        }
        Poly::from_limbs(limbs)
    }

    pub fn square(&self) -> Poly {
        self.mul(self)
    }

    /// Quotient and remainder of division by `m`.
    pub fn divrem(&self, m: &Poly) -> Result<(Poly, Poly)> {
        let dm = m.degree().ok_or(Error::ZeroModulus)?;
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some(dr) = r.degree() {
            if dr < dm {
                break;
            }
            let shift = dr - dm;
            q.flip_coeff(shift);
            r.xor_shifted(m, shift);
        }
        Ok((q, r))
    }

    /// Remainder modulo `m`.
    pub fn rem(&self, m: &Poly) -> Result<Poly> {
        let dm = m.degree().ok_or(Error::ZeroModulus)?;
        match self.degree() {
            None => return Ok(Poly::zero()),
            Some(d) if d < dm => return Ok(self.clone()),
            _ => {}
        }
        if dm < 64 && self.limbs.len() <= 2 {
            let v = self.to_u128().unwrap();
            return Ok(Poly::from_u64(reduce_u128(v, m.limbs[0], dm as u32)));
        }
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dm {
                break;
            }
            r.xor_shifted(m, dr - dm);
        }
        Ok(r)
    }

    /// `self * b mod m`.
    pub fn mul_mod(&self, b: &Poly, m: &Poly) -> Result<Poly> {
        let dm = m.degree().ok_or(Error::ZeroModulus)?;
        if dm < 64 && self.limbs.len() <= 1 && b.limbs.len() <= 1 {
            let (lo, hi) = clmul64(self.to_u64(), b.to_u64());
            let v = lo as u128 | (hi as u128) << 64;
            return Ok(Poly::from_u64(reduce_u128(v, m.limbs[0], dm as u32)));
        }
        self.mul(b).rem(m)
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn pow_mod(&self, e: u64, m: &Poly) -> Result<Poly> {
        let mut base = self.rem(m)?;
        let mut acc = Poly::one().rem(m)?;
        let mut e = e;
        while e != 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m)?;
            }
            e >>= 1;
            if e != 0 {
                base = base.mul_mod(&base, m)?;
            }
        }
        Ok(acc)
    }

    /// `self^e mod m` for an exponent given as little-endian 64-bit digits.
    pub fn pow_mod_big(&self, e: &[u64], m: &Poly) -> Result<Poly> {
        let mut acc = Poly::one().rem(m)?;
        let base = self.rem(m)?;
        for &digit in e.iter().rev() {
            for bit in (0..64).rev() {
                acc = acc.mul_mod(&acc, m)?;
                if (digit >> bit) & 1 == 1 {
                    acc = acc.mul_mod(&base, m)?;
                }
            }
        }
        Ok(acc)
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a
    }

    /// Extended Euclid: returns `(g, u, v)` with `u*a + v*b = g = gcd(a, b)`.
    pub fn xgcd(a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::InvalidArgument("xgcd of two zero polynomials".into()));
        }
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = s0.add(&q.mul(&s1));
            let t = t0.add(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        Ok((r0, s0, t0))
    }

    /// `x^deg * g(1/x)`: the coefficient sequence reversed across the degree.
    pub fn reciprocal(&self) -> Result<Poly> {
        let d = self
            .degree()
            .ok_or_else(|| Error::InvalidArgument("reciprocal of the zero polynomial".into()))?;
        let mut out = Poly::zero();
        for e in self.exponents() {
            out.flip_coeff(d - e);
        }
        Ok(out)
    }

    /// `a(g(x)) mod m` by Horner's rule.
    pub fn substitute(a: &Poly, g: &Poly, m: &Poly) -> Result<Poly> {
        let g = g.rem(m)?;
        let mut acc = Poly::zero();
        let Some(da) = a.degree() else {
            m.degree().ok_or(Error::ZeroModulus)?;
            return Ok(acc);
        };
        for j in (0..=da).rev() {
            acc = acc.mul_mod(&g, m)?;
            if a.coeff(j) {
                acc.flip_coeff(0);
            }
        }
        acc.rem(m)
    }

    /// `a(x^e)`, i.e. every exponent multiplied by `e`.
    pub fn spread(&self, e: usize) -> Poly {
        let mut out = Poly::zero();
        for j in self.exponents() {
            out.flip_coeff(j * e);
        }
        out
    }

    /// Keeps only the coefficients of `x^0 .. x^{n-1}`.
    pub fn truncate(&self, n: usize) -> Poly {
        let full = n / LIMB_BITS;
        let rest = n % LIMB_BITS;
        let mut limbs: Vec<u64> = self.limbs.iter().take(full + 1).copied().collect();
        if limbs.len() > full {
            limbs[full] &= if rest == 0 { 0 } else { (1u64 << rest) - 1 };
        }
        Poly::from_limbs(limbs)
    }

    /// Reduction modulo `x^n - 1`, folding exponents cyclically.
    pub fn rem_cyclic(&self, n: usize) -> Poly {
        if self.bit_len() <= n {
            return self.clone();
        }
        let mut out = Poly::zero();
        for e in self.exponents() {
            out.flip_coeff(e % n);
        }
        out
    }

    /// `x^l * self mod x^n - 1` for `self` of degree below `n`.
    pub fn rotate(&self, l: usize, n: usize) -> Poly {
        debug_assert!(self.bit_len() <= n);
        let l = l % n;
        if l == 0 || self.is_zero() {
            return self.clone();
        }
        let low = self.truncate(n - l).shl(l);
        let high = self.shr(n - l);
        low.add(&high)
    }

    /// Drops the lowest `k` coefficients (division by `x^k`, discarding the remainder).
    pub fn shr(&self, k: usize) -> Poly {
        let ls = k / LIMB_BITS;
        let bs = k % LIMB_BITS;
        if ls >= self.limbs.len() {
            return Poly::zero();
        }
        let src = &self.limbs[ls..];
        let mut limbs = Vec::with_capacity(src.len());
        for i in 0..src.len() {
            let mut v = src[i] >> bs;
            if bs != 0 && i + 1 < src.len() {
                v |= src[i + 1] << (LIMB_BITS - bs);
            }
            limbs.push(v);
        }
        Poly::from_limbs(limbs)
    }

    /// Ascending-coefficient bitstring padded with zeros to `len` digits:
    /// digit `j` is the coefficient of `x^j`.
    pub fn to_bitstring(&self, len: usize) -> String {
        let n = len.max(self.bit_len());
        (0..n).map(|j| if self.coeff(j) { '1' } else { '0' }).collect()
    }

    /// Parses an ascending-coefficient bitstring such as `"1110"` (= 1 + x + x^2).
    pub fn from_bitstring(s: &str) -> Result<Poly> {
        let mut p = Poly::zero();
        for (j, ch) in s.trim().chars().enumerate() {
            match ch {
                '0' => {}
                '1' => p.flip_coeff(j),
                _ => {
                    return Err(Error::Parse(format!("invalid bitstring digit {ch:?} in {s:?}")));
                }
            }
        }
        Ok(p)
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs
            .len()
            .cmp(&other.limbs.len())
            .then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            })
            .collect();
        f.write_str(&terms.join("+"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Poly::from_bitstring(s)
    }
}

/// Standalone form of [`Poly::mul_mod`].
pub fn poly_mul_mod(a: &Poly, b: &Poly, m: &Poly) -> Result<Poly> {
    a.mul_mod(b, m)
}

/// Standalone form of [`Poly::xgcd`].
pub fn poly_xgcd(a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
    Poly::xgcd(a, b)
}

/// Standalone form of [`Poly::reciprocal`].
pub fn poly_reciprocal(g: &Poly) -> Result<Poly> {
    g.reciprocal()
}

/// Standalone form of [`Poly::substitute`].
pub fn poly_substitute(a: &Poly, g: &Poly, m: &Poly) -> Result<Poly> {
    Poly::substitute(a, g, m)
}
