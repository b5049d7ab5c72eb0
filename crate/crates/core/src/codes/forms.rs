//! The nine standard forms of length-2 codes over a chain ring `A = F2[x]/<f^S>`.

use std::fmt;

use crate::chainring::ChainRingCtx;
use crate::crt::GenRow;
use crate::error::{Error, Result};
use crate::gf2poly::Poly;

/// A generator matrix in standard form, one variant per case (numbered 1..=9).
///
/// Free polynomials are stored as representatives of their quotient domain:
/// `a`/`b`/`c` have degree below `(domain level)·d`, and the `c` of cases 8 and 9
/// is the full element `f·t` (so it is divisible by `f`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StandardForm {
    /// `(1, a)`, `a ∈ A`.
    One { a: Poly },
    /// `(f^k, f^k a)`, `1 <= k <= S-1`, `a ∈ A/<f^{S-k}>`.
    Two { k: usize, a: Poly },
    /// `(f b, 1)`, `b ∈ A/<f^{S-1}>`.
    Three { b: Poly },
    /// `(f^{k+1} b, f^k)`, `1 <= k <= S-1`, `b ∈ A/<f^{S-k-1}>`.
    Four { k: usize, b: Poly },
    /// `f^k I_2`, `0 <= k <= S`.
    Five { k: usize },
    /// `(1, c), (0, f^j)`, `1 <= j <= S-1`, `c ∈ A/<f^j>`.
    Six { j: usize, c: Poly },
    /// `(f^k, f^k c), (0, f^{k+j})`, `1 <= k <= S-2`, `1 <= j <= S-k-1`, `c ∈ A/<f^j>`.
    Seven { k: usize, j: usize, c: Poly },
    /// `(c, 1), (f^j, 0)`, `1 <= j <= S-1`, `c ∈ f·(A/<f^j>)`.
    Eight { j: usize, c: Poly },
    /// `(f^k c, f^k), (f^{k+j}, 0)`, ranges as case 7, `c ∈ f·(A/<f^j>)`.
    Nine { k: usize, j: usize, c: Poly },
}

/// The free parameters of a case, by name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CaseParams {
    pub k: Option<usize>,
    pub j: Option<usize>,
    pub a: Option<Poly>,
    pub b: Option<Poly>,
    pub c: Option<Poly>,
}

impl StandardForm {
    pub fn case(&self) -> u8 {
        match self {
            StandardForm::One { .. } => 1,
            StandardForm::Two { .. } => 2,
            StandardForm::Three { .. } => 3,
            StandardForm::Four { .. } => 4,
            StandardForm::Five { .. } => 5,
            StandardForm::Six { .. } => 6,
            StandardForm::Seven { .. } => 7,
            StandardForm::Eight { .. } => 8,
            StandardForm::Nine { .. } => 9,
        }
    }

    pub fn params(&self) -> CaseParams {
        use StandardForm::*;
        let mut p = CaseParams::default();
        match self {
            One { a } => p.a = Some(a.clone()),
            Two { k, a } => {
                p.k = Some(*k);
                p.a = Some(a.clone());
            }
            Three { b } => p.b = Some(b.clone()),
            Four { k, b } => {
                p.k = Some(*k);
                p.b = Some(b.clone());
            }
            Five { k } => p.k = Some(*k),
            Six { j, c } | Eight { j, c } => {
                p.j = Some(*j);
                p.c = Some(c.clone());
            }
            Seven { k, j, c } | Nine { k, j, c } => {
                p.k = Some(*k);
                p.j = Some(*j);
                p.c = Some(c.clone());
            }
        }
        p
    }

    pub fn from_params(case: u8, p: &CaseParams) -> Result<Self> {
        let need_k = || p.k.ok_or_else(|| missing(case, "k"));
        let need_j = || p.j.ok_or_else(|| missing(case, "j"));
        let poly = |v: &Option<Poly>, name: &str| v.clone().ok_or_else(|| missing(case, name));
        Ok(match case {
            1 => StandardForm::One { a: poly(&p.a, "a")? },
            2 => StandardForm::Two { k: need_k()?, a: poly(&p.a, "a")? },
            3 => StandardForm::Three { b: poly(&p.b, "b")? },
            4 => StandardForm::Four { k: need_k()?, b: poly(&p.b, "b")? },
            5 => StandardForm::Five { k: need_k()? },
            6 => StandardForm::Six { j: need_j()?, c: poly(&p.c, "c")? },
            7 => StandardForm::Seven { k: need_k()?, j: need_j()?, c: poly(&p.c, "c")? },
            8 => StandardForm::Eight { j: need_j()?, c: poly(&p.c, "c")? },
            9 => StandardForm::Nine { k: need_k()?, j: need_j()?, c: poly(&p.c, "c")? },
            _ => return Err(Error::InvalidArgument(format!("no standard-form case {case}"))),
        })
    }

    /// Level (in powers of `f`) of the quotient the free polynomial lives in.
    pub fn domain_level(&self, smax: usize) -> Option<usize> {
        use StandardForm::*;
        match self {
            One { .. } => Some(smax),
            Two { k, .. } => Some(smax - k),
            Three { .. } => Some(smax - 1),
            Four { k, .. } => Some(smax - k - 1),
            Five { .. } => None,
            Six { j, .. } | Seven { j, .. } | Eight { j, .. } | Nine { j, .. } => Some(*j),
        }
    }

    fn free_poly(&self) -> Option<&Poly> {
        use StandardForm::*;
        match self {
            One { a } | Two { a, .. } => Some(a),
            Three { b } | Four { b, .. } => Some(b),
            Five { .. } => None,
            Six { c, .. } | Seven { c, .. } | Eight { c, .. } | Nine { c, .. } => Some(c),
        }
    }

    /// Checks integer ranges and that the free polynomial is a reduced
    /// representative of its domain.
    pub fn validate(&self, ctx: &ChainRingCtx) -> Result<()> {
        use StandardForm::*;
        let s = ctx.smax();
        let bad = |what: String| Err(Error::InvalidArgument(format!("case {}: {what}", self.case())));
        match *self {
            Two { k, .. } | Four { k, .. } if !(1..s).contains(&k) => return bad(format!("k={k} outside 1..={}", s - 1)),
            Five { k } if k > s => return bad(format!("k={k} above {s}")),
            Six { j, .. } | Eight { j, .. } if !(1..s).contains(&j) => {
                return bad(format!("j={j} outside 1..={}", s - 1))
            }
            Seven { k, j, .. } | Nine { k, j, .. } if k < 1 || j < 1 || k + j > s - 1 => {
                return bad(format!("(k, j)=({k}, {j}) needs k, j >= 1 and k+j <= {}", s - 1))
            }
            _ => {}
        }
        if let (Some(p), Some(level)) = (self.free_poly(), self.domain_level(s)) {
            if p.bit_len() > level * ctx.d {
                return bad(format!("{p} is not reduced modulo f^{level}"));
            }
            if matches!(self, Eight { .. } | Nine { .. }) && !p.rem(&ctx.f)?.is_zero() {
                return bad(format!("c = {p} is not divisible by f"));
            }
        }
        Ok(())
    }

    /// Explicit generator rows.
    pub fn rows(&self, ctx: &ChainRingCtx) -> Result<Vec<GenRow>> {
        use StandardForm::*;
        self.validate(ctx)?;
        let fp = |e: usize| ctx.modulus(e).clone();
        let row = |a: Poly, b: Poly| GenRow::new(ctx, a, b);
        let z = Poly::zero;
        Ok(match self {
            One { a } => vec![row(Poly::one(), a.clone())],
            Two { k, a } => vec![row(fp(*k), fp(*k).mul(a))],
            Three { b } => vec![row(ctx.f.mul(b), Poly::one())],
            Four { k, b } => vec![row(fp(k + 1).mul(b), fp(*k))],
            Five { k } => vec![row(fp(*k), z()), row(z(), fp(*k))],
            Six { j, c } => vec![row(Poly::one(), c.clone()), row(z(), fp(*j))],
            Seven { k, j, c } => vec![row(fp(*k), fp(*k).mul(c)), row(z(), fp(k + j))],
            Eight { j, c } => vec![row(c.clone(), Poly::one()), row(fp(*j), z())],
            Nine { k, j, c } => vec![row(fp(*k).mul(c), fp(*k)), row(fp(k + j), z())],
        })
    }
}

fn missing(case: u8, name: &str) -> Error {
    Error::InvalidArgument(format!("case {case} needs parameter {name}"))
}

impl fmt::Display for StandardForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.params();
        write!(f, "case {}", self.case())?;
        if let Some(k) = p.k {
            write!(f, " k={k}")?;
        }
        if let Some(j) = p.j {
            write!(f, " j={j}")?;
        }
        for (n, v) in [("a", &p.a), ("b", &p.b), ("c", &p.c)] {
            if let Some(v) = v {
                write!(f, " {n}={v}")?;
            }
        }
        Ok(())
    }
}

/// All polynomials of degree `< bits`, in increasing numeric order.
pub(crate) fn polys_below(bits: usize) -> impl Iterator<Item = Poly> + Clone {
    assert!(bits < 64, "domain of {bits} bits is too large to iterate");
    (0u64..1 << bits).map(Poly::from_u64)
}

/// Every standard form over `ctx`, each exactly once, in case order and then
/// by `(k, j, free polynomial)`. Cases 8 and 9 iterate `c = f·t`.
pub fn enumerate_all_length2(ctx: &ChainRingCtx) -> impl Iterator<Item = StandardForm> + '_ {
    let s = ctx.smax();
    let d = ctx.d;
    let f = ctx.f.clone();
    let f2 = f.clone();
    let pairs = move || (1..=s.saturating_sub(2)).flat_map(move |k| (1..s - k).map(move |j| (k, j)));
    let c1 = polys_below(s * d).map(|a| StandardForm::One { a });
    let c2 = (1..s).flat_map(move |k| polys_below((s - k) * d).map(move |a| StandardForm::Two { k, a }));
    let c3 = polys_below((s - 1) * d).map(|b| StandardForm::Three { b });
    let c4 = (1..s).flat_map(move |k| polys_below((s - k - 1) * d).map(move |b| StandardForm::Four { k, b }));
    let c5 = (0..=s).map(|k| StandardForm::Five { k });
    let c6 = (1..s).flat_map(move |j| polys_below(j * d).map(move |c| StandardForm::Six { j, c }));
    let c7 = pairs().flat_map(move |(k, j)| polys_below(j * d).map(move |c| StandardForm::Seven { k, j, c }));
    let c8 = (1..s).flat_map(move |j| {
        let f = f.clone();
        polys_below((j - 1) * d).map(move |t| StandardForm::Eight { j, c: f.mul(&t) })
    });
    let c9 = pairs().flat_map(move |(k, j)| {
        let f = f2.clone();
        polys_below((j - 1) * d).map(move |t| StandardForm::Nine { k, j, c: f.mul(&t) })
    });
    c1.chain(c2).chain(c3).chain(c4).chain(c5).chain(c6).chain(c7).chain(c8).chain(c9)
}

/// `log2 |C|` for a code with the given rows: `Σ (S - t)·d`.
pub fn log2_size(ctx: &ChainRingCtx, rows: &[GenRow]) -> usize {
    rows.iter().map(|r| (ctx.smax() - r.t) * ctx.d).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(f: &str, lambda: u32, fourm: usize) -> ChainRingCtx {
        ChainRingCtx::new(Poly::from_bitstring(f).unwrap(), lambda, fourm).unwrap()
    }

    #[test]
    fn row_f_degrees_follow_the_templates() {
        let c = ctx("11", 2, 4);
        let f = StandardForm::Seven { k: 1, j: 2, c: Poly::from_bitstring("1").unwrap() };
        let rows = f.rows(&c).unwrap();
        assert_eq!((rows[0].t, rows[1].t), (1, 3));
        let f = StandardForm::Eight { j: 2, c: Poly::from_bitstring("11").unwrap() };
        let rows = f.rows(&c).unwrap();
        assert_eq!((rows[0].t, rows[1].t), (0, 2));
        assert_eq!(log2_size(&c, &rows), 6);
    }

    #[test]
    fn domain_violations_are_rejected() {
        let c = ctx("11", 2, 4);
        // c must be divisible by f = x+1 in case 8
        assert!(StandardForm::Eight { j: 2, c: Poly::one() }.rows(&c).is_err());
        assert!(StandardForm::Two { k: 0, a: Poly::one() }.rows(&c).is_err());
        assert!(StandardForm::Two { k: 3, a: Poly::from_bitstring("11").unwrap() }.rows(&c).is_err());
        assert!(StandardForm::Seven { k: 2, j: 2, c: Poly::one() }.rows(&c).is_err());
        assert!(StandardForm::Five { k: 5 }.rows(&c).is_err());
    }

    #[test]
    fn params_round_trip() {
        let c = ctx("111", 2, 12);
        for form in enumerate_all_length2(&c).step_by(97) {
            let back = StandardForm::from_params(form.case(), &form.params()).unwrap();
            assert_eq!(back, form);
        }
        assert!(StandardForm::from_params(7, &CaseParams::default()).is_err());
        assert!(StandardForm::from_params(10, &CaseParams::default()).is_err());
    }
}
