//! The chain rings `A = F2[x]/<f^S>` (`S = 2^λ`) and their quotients
//! `F2[x]/<f^s>`, for an irreducible factor `f` of `x^m0 - 1`.

use crate::error::{Error, Result};
use crate::gf2poly::Poly;

#[derive(Clone, Debug)]
pub struct ChainRingCtx {
    pub f: Poly,
    pub d: usize,
    pub lambda: u32,
    pub fourm: usize,
    /// `f^s` for `0 <= s <= 2^λ`.
    pub mod_powers: Vec<Poly>,
    /// `x^{4m-1} mod f^{2^λ}`.
    pub xinv_pow: Poly,
    /// `x^{-j} mod f^{2^λ}` for `0 <= j < 2^λ·d`; makes `x -> x^{-1}` a linear map.
    xinv_table: Vec<Poly>,
}

/// An element of `F2[x]/<f^level>`, always stored reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem {
    pub value: Poly,
    pub level: usize,
}

impl ChainRingCtx {
    pub fn new(f: Poly, lambda: u32, fourm: usize) -> Result<Self> {
        let d = f
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::InvalidArgument("factor must have positive degree".into()))?;
        let smax = 1usize << lambda;
        let mut mod_powers = vec![Poly::one()];
        for s in 1..=smax {
            let next = mod_powers[s - 1].mul(&f);
            mod_powers.push(next);
        }
        let top = &mod_powers[smax];
        let cyclic = Poly::from_exponents(&[0, fourm]);
        if !cyclic.rem(top)?.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "f^{smax} does not divide x^{fourm}-1 (f = {f})"
            )));
        }
        let xinv_pow = Poly::x().pow_mod(fourm as u64 - 1, top)?;
        let mut xinv_table = Vec::with_capacity(smax * d);
        let mut cur = Poly::one();
        for _ in 0..smax * d {
            xinv_table.push(cur.clone());
            cur = cur.mul_mod(&xinv_pow, top)?;
        }
        Ok(ChainRingCtx { f, d, lambda, fourm, mod_powers, xinv_pow, xinv_table })
    }

    /// `2^λ`.
    pub fn smax(&self) -> usize {
        1usize << self.lambda
    }

    pub fn modulus(&self, level: usize) -> &Poly {
        &self.mod_powers[level]
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level == 0 || level > self.smax() {
            return Err(Error::InvalidArgument(format!("level {level} outside 1..={}", self.smax())));
        }
        Ok(())
    }

    /// Reduces an arbitrary polynomial into `F2[x]/<f^level>`.
    pub fn elem(&self, value: &Poly, level: usize) -> Result<RingElem> {
        self.check_level(level)?;
        Ok(RingElem { value: value.rem(&self.mod_powers[level])?, level })
    }

    pub fn one(&self, level: usize) -> RingElem {
        RingElem { value: Poly::one(), level }
    }

    pub fn zero(&self, level: usize) -> RingElem {
        RingElem { value: Poly::zero(), level }
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> Result<RingElem> {
        if a.level != b.level {
            return Err(Error::LevelMismatch(a.level, b.level));
        }
        Ok(RingElem {
            value: a.value.mul_mod(&b.value, &self.mod_powers[a.level])?,
            level: a.level,
        })
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> Result<RingElem> {
        if a.level != b.level {
            return Err(Error::LevelMismatch(a.level, b.level));
        }
        Ok(RingElem { value: a.value.add(&b.value), level: a.level })
    }

    /// `a(x^{-1})` reduced into the top ring `F2[x]/<f^{2^λ}>`.
    ///
    /// The input may come from another component ring of the same degree
    /// (this is how `C_{i+ε}` is built from `C_i`); inputs of degree beyond the
    /// table are first folded modulo `x^{4m} - 1`.
    pub fn inv_map(&self, value: &Poly) -> Poly {
        let folded;
        let value = if value.bit_len() > self.xinv_table.len() {
            folded = value.rem_cyclic(self.fourm);
            if folded.bit_len() > self.xinv_table.len() {
                return Poly::substitute(&folded, &self.xinv_pow, self.modulus(self.smax()))
                    .expect("nonzero modulus");
            }
            &folded
        } else {
            value
        };
        let mut acc = Poly::zero();
        for j in value.exponents() {
            acc.add_assign(&self.xinv_table[j]);
        }
        acc
    }

    /// `a(x^{4m-1})` in `F2[x]/<f^s>` where `s = a.level`.
    pub fn inv_substitute(&self, a: &RingElem) -> RingElem {
        let v = self.inv_map(&a.value);
        RingElem { value: v.rem(&self.mod_powers[a.level]).unwrap(), level: a.level }
    }

    /// Digits `(a_0, .., a_{s-1})`, each of degree `< d`, with `a = Σ a_j f^j`.
    pub fn f_adic_expand(&self, a: &RingElem) -> Vec<Poly> {
        let mut digits = Vec::with_capacity(a.level);
        let mut rest = a.value.clone();
        for _ in 0..a.level {
            let (q, r) = rest.divrem(&self.f).unwrap();
            digits.push(r);
            rest = q;
        }
        digits
    }

    pub fn from_digits(&self, digits: &[Poly]) -> RingElem {
        let mut acc = Poly::zero();
        for (j, dgt) in digits.iter().enumerate() {
            acc.add_assign(&dgt.mul(&self.mod_powers[j]));
        }
        RingElem { value: acc, level: digits.len() }
    }

    /// Least `j` with a nonzero f-adic digit, or `2^λ` for zero.
    pub fn f_degree(&self, a: &RingElem) -> usize {
        if a.value.is_zero() {
            return self.smax();
        }
        let mut t = 0;
        let mut rest = a.value.clone();
        loop {
            let (q, r) = rest.divrem(&self.f).unwrap();
            if !r.is_zero() {
                return t;
            }
            rest = q;
            t += 1;
        }
    }

    /// f-degree of a vector: the minimum over its entries.
    pub fn f_degree_pair(&self, a: &RingElem, b: &RingElem) -> Result<usize> {
        if a.level != b.level {
            return Err(Error::LevelMismatch(a.level, b.level));
        }
        Ok(self.f_degree(a).min(self.f_degree(b)))
    }

    pub fn is_unit(&self, a: &RingElem) -> bool {
        !a.value.rem(&self.f).unwrap().is_zero()
    }

    pub fn unit_inverse(&self, a: &RingElem) -> Result<RingElem> {
        if !self.is_unit(a) {
            return Err(Error::NotAUnit);
        }
        let m = &self.mod_powers[a.level];
        let (g, u, _) = Poly::xgcd(&a.value, m)?;
        if !g.is_one() {
            return Err(Error::Internal("unit with non-trivial gcd".into()));
        }
        Ok(RingElem { value: u.rem(m)?, level: a.level })
    }

    /// Viewing an element of a smaller quotient inside a larger one (identity on values).
    pub fn lift(&self, a: &RingElem, level: usize) -> Result<RingElem> {
        self.check_level(level)?;
        if level < a.level {
            return Err(Error::LevelMismatch(a.level, level));
        }
        Ok(RingElem { value: a.value.clone(), level })
    }

    /// Reduction to a smaller quotient.
    pub fn lower(&self, a: &RingElem, level: usize) -> Result<RingElem> {
        self.check_level(level)?;
        if level > a.level {
            return Err(Error::LevelMismatch(a.level, level));
        }
        self.elem(&a.value, level)
    }

    /// All elements of `F2[x]/<f^level>` in ascending numeric order.
    /// Only for `level·d <= 32`.
    pub fn all_elements(&self, level: usize) -> Result<impl Iterator<Item = RingElem>> {
        let bits = level * self.d;
        if bits > 32 {
            return Err(Error::BoundExceeded { bits, bound: 32 });
        }
        Ok((0u64..1u64 << bits).map(move |v| RingElem { value: Poly::from_u64(v), level }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn p(s: &str) -> Poly {
        Poly::from_bitstring(s).unwrap()
    }

    fn a0_m3() -> ChainRingCtx {
        ChainRingCtx::new(p("11"), 2, 12).unwrap()
    }

    #[test]
    fn ring_mul_examples() {
        let c = a0_m3();
        let x = c.elem(&Poly::x(), 4).unwrap();
        let x3 = c.elem(&Poly::monomial(3), 4).unwrap();
        assert_eq!(c.mul(&x, &x3).unwrap(), c.one(4));
        let f2 = c.elem(&c.mod_powers[2].clone(), 4).unwrap();
        assert!(c.mul(&f2, &f2).unwrap().value.is_zero());
        let a = c.elem(&p("1011"), 4).unwrap();
        assert_eq!(c.mul(&c.one(4), &a).unwrap(), a);
        assert!(matches!(c.mul(&c.one(3), &a), Err(Error::LevelMismatch(3, 4))));
    }

    #[test]
    fn inv_substitute_examples() {
        let c = a0_m3();
        let x = c.elem(&Poly::x(), 4).unwrap();
        assert_eq!(c.inv_substitute(&x).value, Poly::monomial(3));
        assert_eq!(c.inv_substitute(&c.one(4)), c.one(4));
        let a = c.elem(&p("111"), 4).unwrap();
        let ai = c.inv_substitute(&a);
        assert_eq!(ai.value, p("1011"));
        assert_eq!(c.mul(&a, &ai).unwrap(), c.one(4));
    }

    #[test]
    fn f_adic_examples() {
        let c = a0_m3();
        let x2 = c.elem(&Poly::monomial(2), 4).unwrap();
        assert_eq!(c.f_adic_expand(&x2), vec![Poly::one(), Poly::zero(), Poly::one(), Poly::zero()]);
        assert!(c.f_adic_expand(&c.zero(4)).iter().all(Poly::is_zero));
        let f = c.elem(&c.f.clone(), 4).unwrap();
        assert_eq!(c.f_adic_expand(&f)[1], Poly::one());
    }

    #[test]
    fn f_degree_examples() {
        let c = ChainRingCtx::new(p("111"), 2, 12).unwrap();
        let f2u = c.elem(&c.mod_powers[2].mul(&Poly::x()), 4).unwrap();
        assert_eq!(c.f_degree(&f2u), 2);
        assert_eq!(c.f_degree(&c.zero(4)), 4);
        let f3 = c.elem(&c.mod_powers[3].clone(), 4).unwrap();
        let f1 = c.elem(&c.mod_powers[1].clone(), 4).unwrap();
        assert_eq!(c.f_degree_pair(&f3, &f1).unwrap(), 1);
    }

    #[test]
    fn unit_examples() {
        let c = a0_m3();
        let x = c.elem(&Poly::x(), 4).unwrap();
        assert!(c.is_unit(&x));
        assert_eq!(c.unit_inverse(&x).unwrap().value, Poly::monomial(3));
        let f = c.elem(&c.f.clone(), 4).unwrap();
        assert!(!c.is_unit(&f));
        assert!(matches!(c.unit_inverse(&f), Err(Error::NotAUnit)));
        assert_eq!(c.unit_inverse(&c.one(4)).unwrap(), c.one(4));
    }

    #[test]
    fn rejects_non_dividing_factor() {
        assert!(ChainRingCtx::new(p("111"), 2, 4).is_err());
    }

    fn contexts() -> Vec<ChainRingCtx> {
        vec![
            ChainRingCtx::new(p("11"), 2, 12).unwrap(),
            ChainRingCtx::new(p("11"), 3, 24).unwrap(),
            ChainRingCtx::new(p("111"), 2, 12).unwrap(),
            ChainRingCtx::new(p("111"), 3, 24).unwrap(),
            ChainRingCtx::new(p("1101"), 2, 28).unwrap(),
            ChainRingCtx::new(p("1011"), 2, 28).unwrap(),
            ChainRingCtx::new(p("11111"), 2, 20).unwrap(),
        ]
    }

    #[test]
    fn f_adic_round_trip_random() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for c in contexts() {
            for level in 1..=c.smax() {
                for _ in 0..10_000 / c.smax() {
                    let bits = level * c.d;
                    let v: u64 = rng.gen::<u64>() & ((1u64 << bits) - 1);
                    let a = c.elem(&Poly::from_u64(v), level).unwrap();
                    let digits = c.f_adic_expand(&a);
                    assert!(digits.iter().all(|g| g.bit_len() <= c.d));
                    assert_eq!(c.from_digits(&digits).value, a.value);
                }
            }
        }
    }

    /// `x -> x^{-1}` maps `A_f` onto `A_{f*}`; for self-reciprocal `f` that is `A_f` itself.
    fn with_partner() -> Vec<(ChainRingCtx, ChainRingCtx)> {
        contexts()
            .into_iter()
            .map(|c| {
                let g = c.f.reciprocal().unwrap();
                let partner = ChainRingCtx::new(g, c.lambda, c.fourm).unwrap();
                (c, partner)
            })
            .collect()
    }

    #[test]
    fn inv_substitute_is_involutive_homomorphism() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for (c, q) in with_partner() {
            for level in 1..=c.smax() {
                let bits = level * c.d;
                let there = |a: &RingElem| RingElem { value: q.inv_map(&a.value).rem(q.modulus(level)).unwrap(), level };
                let back = |a: &RingElem| RingElem { value: c.inv_map(&a.value).rem(c.modulus(level)).unwrap(), level };
                for _ in 0..200 {
                    let a = c.elem(&Poly::from_u64(rng.gen::<u64>() & ((1u64 << bits) - 1)), level).unwrap();
                    let b = c.elem(&Poly::from_u64(rng.gen::<u64>() & ((1u64 << bits) - 1)), level).unwrap();
                    assert_eq!(back(&there(&a)), a);
                    let prod = c.mul(&a, &b).unwrap();
                    assert_eq!(there(&prod), q.mul(&there(&a), &there(&b)).unwrap());
                    let sum = c.add(&a, &b).unwrap();
                    assert_eq!(there(&sum), q.add(&there(&a), &there(&b)).unwrap());
                    if c.f == q.f {
                        assert_eq!(c.inv_substitute(&c.inv_substitute(&a)), a);
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_sizes_by_exhaustion() {
        for c in contexts() {
            for level in 1..=c.smax() {
                if level * c.d > 16 {
                    continue;
                }
                let mut seen = std::collections::HashSet::new();
                for v in 0u64..1 << 18.min(level * c.d + 2) {
                    seen.insert(c.elem(&Poly::from_u64(v), level).unwrap().value);
                }
                assert_eq!(seen.len(), 1 << (level * c.d));
            }
        }
    }
}
