//! Everything needed to name, index and assemble the self-dual codes for one `m`.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::Zero;

use super::count::MAX_COUNT_LAMBDA;
use super::selfdual::{dagger_at, dagger_count, dagger_index, ddagger_at, ddagger_index, pair_components};
use super::{selfrec_term, omega, ComponentCode, SelfDualChoice};
use crate::analysis::BinaryCode;
use crate::chainring::ChainRingCtx;
use crate::crt::{assemble_code, compute_idempotents, GenRow, IdempotentSystem};
use crate::cyclofactor::{derive_params, factor_cyclotomic, FactorSystem, Params};
use crate::error::{Error, Result};
use crate::gf2poly::Poly;
use crate::wset::{wset_tower, WSet};

/// One option per component class `i = 0..=ρ+ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfDualSpec {
    pub choices: Vec<SelfDualChoice>,
}

pub struct DihedralSystem {
    pub params: Params,
    pub fs: FactorSystem,
    pub ids: IdempotentSystem,
    pub ctxs: Vec<ChainRingCtx>,
    towers: Vec<OnceLock<std::result::Result<Vec<WSet>, String>>>,
    sizes: OnceLock<Vec<BigUint>>,
}

impl DihedralSystem {
    pub fn new(m: u64) -> Result<Self> {
        let params = derive_params(m)?;
        let fs = factor_cyclotomic(params.m0)?;
        let ids = compute_idempotents(&params, &fs)?;
        let ctxs = fs
            .factors
            .iter()
            .map(|f| ChainRingCtx::new(f.poly.clone(), params.lambda, params.fourm()))
            .collect::<Result<Vec<_>>>()?;
        let towers = (0..ctxs.len()).map(|_| OnceLock::new()).collect();
        let sys = DihedralSystem { params, fs, ids, ctxs, towers, sizes: OnceLock::new() };
        let sizes = (0..sys.class_count()).map(|i| sys.compute_class_size(i)).collect::<Result<Vec<_>>>()?;
        let _ = sys.sizes.set(sizes);
        Ok(sys)
    }

    pub fn smax(&self) -> usize {
        self.params.s_max()
    }

    /// Number of component classes, `ρ + ε + 1`.
    pub fn class_count(&self) -> usize {
        1 + self.fs.rho + self.fs.eps
    }

    /// `W^(1), .., W^(S)` for a self-reciprocal index, computed on first use.
    pub fn tower(&self, i: usize) -> Result<&[WSet]> {
        if !self.fs.is_self_reciprocal_index(i) {
            return Err(Error::NotSelfReciprocal(self.fs.poly(i).to_string()));
        }
        self.towers[i]
            .get_or_init(|| wset_tower(&self.ctxs[i], self.smax()).map_err(|e| e.to_string()))
            .as_deref()
            .map_err(|e| Error::Internal(e.clone()))
    }

    /// Options for class `i`. The `x+1` class counts its actual W-sets; other
    /// self-reciprocal classes use the cardinality law (the sets can be huge).
    pub fn class_size(&self, i: usize) -> Result<BigUint> {
        self.sizes.get().and_then(|s| s.get(i)).cloned().ok_or_else(|| Error::IndexOutOfRange {
            index: i.to_string(),
            count: self.class_count().to_string(),
        })
    }

    fn compute_class_size(&self, i: usize) -> Result<BigUint> {
        if i == 0 {
            if self.params.lambda > MAX_COUNT_LAMBDA {
                return Err(Error::BoundExceeded { bits: self.smax(), bound: 1 << MAX_COUNT_LAMBDA });
            }
            return Ok(BigUint::from(dagger_count(self.tower(0)?, self.smax())?));
        }
        let d = self.fs.degree(i);
        Ok(if self.fs.is_self_reciprocal_index(i) {
            selfrec_term(self.params.lambda, d)
        } else {
            omega(self.params.lambda, d)
        })
    }

    pub fn count(&self) -> Result<BigUint> {
        (0..self.class_count()).map(|i| self.class_size(i)).product()
    }

    fn choice_at(&self, i: usize, idx: &BigUint) -> Result<SelfDualChoice> {
        if self.fs.is_self_reciprocal_index(i) {
            let idx = u128::try_from(idx)
                .map_err(|_| Error::IndexOutOfRange { index: idx.to_string(), count: "2^128".into() })?;
            dagger_at(self.tower(i)?, self.smax(), idx)
        } else {
            ddagger_at(&self.ctxs[i], idx)
        }
    }

    /// The spec with the given index; the first class is the most significant digit.
    pub fn spec_at(&self, index: &BigUint) -> Result<SelfDualSpec> {
        let sizes = self.sizes.get().expect("sizes set at construction");
        let total: BigUint = sizes.iter().product();
        if index >= &total {
            return Err(Error::IndexOutOfRange { index: index.to_string(), count: total.to_string() });
        }
        let mut digits = vec![BigUint::zero(); sizes.len()];
        let mut rest = index.clone();
        for (i, size) in sizes.iter().enumerate().rev() {
            digits[i] = &rest % size;
            rest /= size;
        }
        let choices = digits.iter().enumerate().map(|(i, dg)| self.choice_at(i, dg)).collect::<Result<_>>()?;
        Ok(SelfDualSpec { choices })
    }

    pub fn index_of(&self, spec: &SelfDualSpec) -> Result<BigUint> {
        self.check_shape(spec)?;
        let mut index = BigUint::zero();
        for (i, ch) in spec.choices.iter().enumerate() {
            let digit = if self.fs.is_self_reciprocal_index(i) {
                BigUint::from(dagger_index(self.tower(i)?, self.smax(), ch)?)
            } else {
                ddagger_index(&self.ctxs[i], ch)?
            };
            index = index * self.class_size(i)? + digit;
        }
        Ok(index)
    }

    fn check_shape(&self, spec: &SelfDualSpec) -> Result<()> {
        if spec.choices.len() != self.class_count() {
            return Err(Error::InvalidArgument(format!(
                "spec has {} components, m={} needs {}",
                spec.choices.len(),
                self.params.m,
                self.class_count()
            )));
        }
        for (i, ch) in spec.choices.iter().enumerate() {
            if ch.is_selfrec() != self.fs.is_self_reciprocal_index(i) {
                return Err(Error::InvalidArgument(format!(
                    "component {i}: {} does not fit factor {}",
                    ch.tag(),
                    self.fs.poly(i)
                )));
            }
        }
        Ok(())
    }

    /// Component codes of a spec: one per self-reciprocal class, two per pair
    /// (`G_i` and its partner `G_{i+ε}`). Parameters are validated, including
    /// W-set membership of the † polynomials.
    pub fn components(&self, spec: &SelfDualSpec) -> Result<Vec<ComponentCode>> {
        self.check_shape(spec)?;
        let mut out = Vec::new();
        for (i, ch) in spec.choices.iter().enumerate() {
            let named = |e: Error| {
                let msg = match e {
                    Error::InvalidArgument(m) => m,
                    other => other.to_string(),
                };
                Error::InvalidArgument(format!("component {i} ({}): {msg}", ch.tag()))
            };
            let ctx = &self.ctxs[i];
            if self.fs.is_self_reciprocal_index(i) {
                let w = match ch {
                    SelfDualChoice::Dagger1 { a } => Some((a, self.smax())),
                    SelfDualChoice::Dagger3 { k, c } if *k < self.smax() / 2 => Some((c, self.smax() - 2 * k)),
                    _ => None,
                };
                if let Some((p, level)) = w {
                    in_wset(ctx, p, level).map_err(named)?;
                }
                out.push(ComponentCode::from_tag(ctx, i, ch.tag(), ch.params()).map_err(named)?);
            } else {
                let pi = i + self.fs.eps;
                let (g, h) = pair_components(ctx, i, &self.ctxs[pi], pi, ch).map_err(named)?;
                out.push(g);
                out.push(h);
            }
        }
        Ok(out)
    }

    /// Stacks arbitrary component codes into a binary generator matrix.
    pub fn assemble_components(&self, comps: &[ComponentCode]) -> Result<BinaryCode> {
        assemble_code(&self.ids, &self.ctxs, comps.iter().map(|c| (c.i, c.rows.as_slice())))
    }

    pub fn assemble(&self, spec: &SelfDualSpec) -> Result<BinaryCode> {
        self.assemble_components(&self.components(spec)?)
    }

    /// Specs with indices in `start..end`, in order.
    pub fn specs(&self, start: u128, end: u128) -> impl Iterator<Item = Result<(u128, SelfDualSpec)>> + '_ {
        (start..end).map(move |i| self.spec_at(&BigUint::from(i)).map(|s| (i, s)))
    }

    /// Rows for `G_i` given directly, with the f-degrees recomputed.
    pub fn gen_row(&self, i: usize, a: Poly, b: Poly) -> GenRow {
        GenRow::new(&self.ctxs[i], a, b)
    }
}

/// `p` is a reduced element of `F2[x]/<f^level>` with `p·p(x^{-1}) = 1`.
fn in_wset(ctx: &ChainRingCtx, p: &Poly, level: usize) -> Result<()> {
    if p.bit_len() > level * ctx.d {
        return Err(Error::InvalidArgument(format!("{p} is not reduced modulo f^{level}")));
    }
    let m = ctx.modulus(level);
    let prod = p.mul_mod(&ctx.inv_map(p).rem(m)?, m)?;
    if !prod.is_one() {
        return Err(Error::InvalidArgument(format!("{p} is not in W^({level})")));
    }
    Ok(())
}
