//! Generator matrices `H_i` of the components of the dual code.
//!
//! Self-reciprocal factors map the condition-(5) cases onto each other
//! (II <-> IV, III k -> III S-k, V k -> V S-k-j). For a reciprocal pair the
//! lower member's `H_i` is again a standard form, and `H_{i+ε}` is its image
//! under `(a, b) -> (b(x^{-1}), a(x^{-1}))`.

use super::{image_rows, CaseParams, CaseTag, ComponentCode, StandardForm};
use crate::chainring::ChainRingCtx;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dual {
    Single(ComponentCode),
    Pair(ComponentCode, ComponentCode),
}

fn cond5(ctx: &ChainRingCtx, i: usize, n: u8, params: CaseParams) -> Result<ComponentCode> {
    ComponentCode::from_tag(ctx, i, CaseTag::Cond5(n), params)
}

/// `H_i` (and `H_{i+ε}` for a pair, which needs the partner's index and ring).
pub fn dual_component(
    ctx: &ChainRingCtx,
    partner: Option<(usize, &ChainRingCtx)>,
    cc: &ComponentCode,
) -> Result<Dual> {
    let s = ctx.smax();
    let form = match cc.tag {
        CaseTag::Partner => {
            return Err(Error::InvalidArgument(
                "component has no template tag; dualize the lower member of the pair".into(),
            ))
        }
        _ => cc.standard_form(s)?,
    };
    let i = cc.i;
    match cc.tag {
        CaseTag::Cond5(_) | CaseTag::Dagger(_) => {
            use StandardForm::*;
            let p = |k: Option<usize>, j: Option<usize>, a, c| CaseParams { k, j, a, b: None, c };
            let h = match form {
                One { a } => cond5(ctx, i, 1, p(None, None, Some(a), None))?,
                Two { k, a } => cond5(ctx, i, 4, p(None, Some(s - k), None, Some(a)))?,
                Five { k } => cond5(ctx, i, 3, p(Some(s - k), None, None, None))?,
                Six { j, c } => cond5(ctx, i, 2, p(Some(s - j), None, Some(c), None))?,
                Seven { k, j, c } => cond5(ctx, i, 5, p(Some(s - k - j), Some(j), None, Some(c)))?,
                other => {
                    return Err(Error::Internal(format!("{other} is not a condition-(5) shape")))
                }
            };
            Ok(Dual::Single(h))
        }
        CaseTag::Lemma(_) | CaseTag::DDagger(_) => {
            let (pi, pctx) = partner.ok_or_else(|| {
                Error::InvalidArgument(format!("{} on index {i} needs the reciprocal partner ring", cc.tag))
            })?;
            use StandardForm::*;
            let h = match form {
                One { a } => One { a },
                Two { k, a } => Six { j: s - k, c: a },
                Three { b } => Three { b },
                Four { k, b } => Eight { j: s - k, c: ctx.f.mul(&b) },
                Five { k } => Five { k: s - k },
                Six { j, c } => Two { k: s - j, a: c },
                Seven { k, j, c } => Seven { k: s - k - j, j, c },
                Eight { j, c } => {
                    let (t, r) = c.divrem(&ctx.f)?;
                    debug_assert!(r.is_zero());
                    Four { k: s - j, b: t }
                }
                Nine { k, j, c } => Nine { k: s - k - j, j, c },
            };
            let hi = ComponentCode::from_form(ctx, i, &h)?;
            let rows = image_rows(pctx, &hi.rows);
            let hp = ComponentCode { i: pi, tag: CaseTag::Partner, params: CaseParams::default(), rows };
            Ok(Dual::Pair(hi, hp))
        }
        CaseTag::Partner => unreachable!(),
    }
}
