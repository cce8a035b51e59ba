//! First and second fundamental forms of the hypersurfaces orthogonal to a
//! non-null rank-1 field.

use crate::error::{Error, Result};
use crate::symexpr::{equivalent_with, is_negative, is_positive, EquivOptions, Equivalence, Expr};
use crate::tensor::{IndexTuple, Rule, SessionCore};
use std::ops::Neg;

fn require_rank1(core: &SessionCore, name: &str) -> Result<()> {
    let rank = core.rank_of(name)?;
    if rank != 1 {
        return Err(Error::Other(format!(
            "`{name}` must have rank 1 to define a hypersurface normal, got rank {rank}"
        )));
    }
    Ok(())
}

/// `v_i v^i`, memoized per field.
pub(crate) fn vector_squared(core: &mut SessionCore, name: &str) -> Result<Expr> {
    require_rank1(core, name)?;
    let key = format!("vectorSquared[{name}]");
    let name = name.to_string();
    core.scalar_cached(&key, move |core| {
        let dim = core.mf()?.dim() as i32;
        let mut terms = Vec::new();
        for i in 1..=dim {
            let lo = core.value(&name, &[i])?;
            if lo.is_zero() {
                continue;
            }
            let hi = core.value(&name, &[-i])?;
            if hi.is_zero() {
                continue;
            }
            terms.push(Expr::product(vec![lo, hi]));
        }
        Ok(Expr::sum(terms).simplify(core.mf()?.assumptions()))
    })
}

/// The squared length, after rejecting fields that are plausibly null.
fn checked_square(core: &mut SessionCore, name: &str) -> Result<Expr> {
    let vs = vector_squared(core, name)?;
    let verdict = equivalent_with(
        &vs,
        &Expr::zero(),
        core.mf()?.assumptions(),
        &EquivOptions::default(),
    );
    if vs.is_zero() || verdict == Equivalence::Equivalent {
        return Err(Error::NullVector(name.to_string()));
    }
    Ok(vs)
}

/// Registers `inducedMetric[v]`, the metric restricted to the orthogonal
/// complement of `v`: `h_ij = g_ij - v_i v_j / (v.v)`.
pub(crate) fn induced_metric(core: &mut SessionCore, v: &str) -> Result<String> {
    require_rank1(core, v)?;
    checked_square(core, v)?;
    let derived = format!("inducedMetric[{v}]");
    if !core.has_tensor(&derived) {
        core.define_rule(
            &derived,
            vec![1, 1],
            vec![(vec![1, 0], 1)],
            Rule::InducedMetric(v.to_string()),
        )?;
    }
    Ok(derived)
}

pub(crate) fn induced_component(
    core: &mut SessionCore,
    v: &str,
    idx: &IndexTuple,
) -> Result<Expr> {
    let (i, j) = (idx[0], idx[1]);
    let vs = checked_square(core, v)?;
    let g = core.mf()?.gcov_entry(i as usize, j as usize).clone();
    let vi = core.value(v, &[i])?;
    let vj = core.value(v, &[j])?;
    let mut terms = vec![g];
    if !vi.is_zero() && !vj.is_zero() {
        terms.push(Expr::product(vec![vi, vj, vs.recip()]).neg());
    }
    Ok(Expr::sum(terms))
}

/// Registers `secondForm[v]`: the projected gradient of the unit normal,
/// `K_ij = h_i^a h_j^b grad_a u_b` with `u = v / sqrt(+-(v.v))`.  The sign
/// under the root follows the sign of `v.v`, which must be decidable from the
/// declared assumptions.
pub(crate) fn second_fundamental_form(core: &mut SessionCore, v: &str) -> Result<String> {
    induced_metric(core, v)?;
    let vs = checked_square(core, v)?;
    let norm2 = if is_positive(&vs, core.mf()?.assumptions()) {
        vs
    } else if is_negative(&vs, core.mf()?.assumptions()) {
        vs.neg()
    } else {
        return Err(Error::Assumption(format!(
            "cannot decide the sign of the squared length of `{v}` from the declared assumptions"
        )));
    };
    let unit = format!("unitNormal[{v}]");
    if !core.has_tensor(&unit) {
        let dim = core.mf()?.dim() as i32;
        let scale = Expr::power(norm2, Expr::rational(-1, 2));
        let mut entries = Vec::new();
        for i in 1..=dim {
            let vi = core.value(v, &[i])?;
            let e = Expr::product(vec![vi, scale.clone()]).simplify(core.mf()?.assumptions());
            entries.push(e);
        }
        core.define_dense(&unit, vec![1], entries)?;
    }
    core.covariant_d(&unit)?;
    let derived = format!("secondForm[{v}]");
    if !core.has_tensor(&derived) {
        core.define_rule(&derived, vec![1, 1], Vec::new(), Rule::SecondForm(v.to_string()))?;
    }
    Ok(derived)
}

pub(crate) fn second_form_component(
    core: &mut SessionCore,
    v: &str,
    idx: &IndexTuple,
) -> Result<Expr> {
    let (i, j) = (idx[0], idx[1]);
    let h = format!("inducedMetric[{v}]");
    let du = format!("covariantD[unitNormal[{v}]]");
    let dim = core.mf()?.dim() as i32;
    let mut terms = Vec::new();
    for a in 1..=dim {
        let hia = core.value(&h, &[i, -a])?;
        if hia.is_zero() {
            continue;
        }
        for b in 1..=dim {
            let hjb = core.value(&h, &[j, -b])?;
            if hjb.is_zero() {
                continue;
            }
            let grad = core.value(&du, &[b, a])?;
            if grad.is_zero() {
                continue;
            }
            terms.push(Expr::product(vec![hia.clone(), hjb, grad]));
        }
    }
    Ok(Expr::sum(terms))
}
