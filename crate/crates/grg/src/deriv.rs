//! Derivative operators built on the component evaluator.  These read their
//! operands through the internal value tier: differentiating a tensor is
//! bookkeeping over already-derived expressions, and it should not distort the
//! request statistics of the operand.

use crate::error::Result;
use crate::symexpr::Expr;
use crate::tensor::{IndexTuple, SessionCore};
use std::ops::Neg;

/// One component of `covariantD[T]`: the tuple is `[slots.., m]`, all
/// covariant, and the value is
/// `d_m T_slots - sum_p sum_s G^s_{m,slot_p} T_{slots with p -> s}`.
pub(crate) fn covariant_component(
    core: &mut SessionCore,
    of: &str,
    idx: &IndexTuple,
) -> Result<Expr> {
    let rank = idx.len() - 1;
    let m = idx[rank];
    let xm = core.mf()?.coord(m as usize).clone();
    let dim = core.mf()?.dim() as i32;
    let slots: IndexTuple = idx[..rank].to_vec();
    let mut terms = vec![core.value(of, &slots)?.diff(&xm)];
    for p in 0..rank {
        for s in 1..=dim {
            let gamma = core.value("christoffel", &[-s, m, slots[p]])?;
            if gamma.is_zero() {
                continue;
            }
            let mut shifted = slots.clone();
            shifted[p] = s;
            let t = core.value(of, &shifted)?;
            if t.is_zero() {
                continue;
            }
            terms.push(Expr::product(vec![gamma, t]).neg());
        }
    }
    Ok(Expr::sum(terms))
}

/// One component of `lieD[U][T]` at covariant base valence:
/// `U^s d_s T_slots + sum_p (d_{slot_p} U^s) T_{slots with p -> s}`.
pub(crate) fn lie_component(
    core: &mut SessionCore,
    flow: &str,
    of: &str,
    idx: &IndexTuple,
) -> Result<Expr> {
    let dim = core.mf()?.dim() as i32;
    let mut terms = Vec::new();
    let t_here = core.value(of, idx)?;
    for s in 1..=dim {
        let u = core.value(flow, &[-s])?;
        if u.is_zero() {
            continue;
        }
        let xs = core.mf()?.coord(s as usize).clone();
        let dt = t_here.diff(&xs);
        if !dt.is_zero() {
            terms.push(Expr::product(vec![u.clone(), dt]));
        }
        for p in 0..idx.len() {
            let xp = core.mf()?.coord(idx[p] as usize).clone();
            let du = u.diff(&xp);
            if du.is_zero() {
                continue;
            }
            let mut shifted = idx.clone();
            shifted[p] = s;
            let t = core.value(of, &shifted)?;
            if t.is_zero() {
                continue;
            }
            terms.push(Expr::product(vec![du, t]));
        }
    }
    Ok(Expr::sum(terms))
}

/// Laplace–Beltrami operator on a scalar: trace of the second covariant
/// derivative, `sum_{i,s} g^{is} grad_i grad_s f`.  Works through a scratch
/// rank-0 field so no square root of the metric determinant is ever needed.
pub(crate) fn scalar_laplacian(core: &mut SessionCore, f: &Expr) -> Result<Expr> {
    const FIELD: &str = "scalarLaplacianField";
    let d1 = format!("covariantD[{FIELD}]");
    let d2 = format!("covariantD[{d1}]");
    for name in [&d2, &d1, &FIELD.to_string()] {
        core.remove_tensor(name);
    }
    core.define_scalar_field(FIELD, f.clone())?;
    core.covariant_d(FIELD)?;
    let dd = core.covariant_d(&d1)?;
    let dim = core.mf()?.dim() as i32;
    let mut terms = Vec::new();
    for i in 1..=dim {
        let t = core.value(&dd, &[i, -i])?;
        if !t.is_zero() {
            terms.push(t);
        }
    }
    Ok(Expr::sum(terms).simplify(core.mf()?.assumptions()))
}
