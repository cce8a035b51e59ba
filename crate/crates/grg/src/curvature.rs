//! Base-component formulas for the curvature family.  Everything is written
//! against the signed-tuple evaluator: upstream tensors are read through the
//! public request path so that their caches fill the way interactive use does,
//! while metric entries come straight off the manifold (with structural zeros
//! skipped before any work is spent on them).

use crate::error::Result;
use crate::symexpr::Expr;
use crate::tensor::{IndexTuple, SessionCore};
use std::ops::Neg;

/// Connection coefficients of the first kind,
/// `G_abc = (d_b g_ac + d_c g_ab - d_a g_bc) / 2`.
pub(crate) fn christoffel_first(core: &mut SessionCore, idx: &IndexTuple) -> Result<Expr> {
    let (a, b, c) = (idx[0] as usize, idx[1] as usize, idx[2] as usize);
    let m = core.mf()?;
    let xa = m.coord(a).clone();
    let xb = m.coord(b).clone();
    let xc = m.coord(c).clone();
    let gac = m.gcov_entry(a, c).clone();
    let gab = m.gcov_entry(a, b).clone();
    let gbc = m.gcov_entry(b, c).clone();
    let half = Expr::rational(1, 2);
    Ok(Expr::product(vec![
        half,
        Expr::sum(vec![gac.diff(&xb), gab.diff(&xc), gbc.diff(&xa).neg()]),
    ]))
}

/// Second-kind connection coefficient `G^s_bc` through the public path, so the
/// connection cache reflects curvature work.
fn gamma2(core: &mut SessionCore, s: usize, b: i32, c: i32) -> Result<Expr> {
    core.component("christoffel", &[-(s as i32), b, c])
}

/// Fully covariant curvature,
/// `R_abcd = g_as (d_c G^s_db - d_d G^s_cb + G^s_ce G^e_db - G^s_de G^e_cb)`.
pub(crate) fn riemann_cov(core: &mut SessionCore, idx: &IndexTuple) -> Result<Expr> {
    let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
    let dim = core.mf()?.dim();
    let xc = core.mf()?.coord(c as usize).clone();
    let xd = core.mf()?.coord(d as usize).clone();
    let mut terms: Vec<Expr> = Vec::new();
    for s in 1..=dim {
        let gas = core.mf()?.gcov_entry(a as usize, s).clone();
        if gas.is_zero() {
            continue;
        }
        let mut bracket: Vec<Expr> = Vec::new();
        bracket.push(gamma2(core, s, d, b)?.diff(&xc));
        bracket.push(gamma2(core, s, c, b)?.diff(&xd).neg());
        for e in 1..=dim {
            let sc_e = gamma2(core, s, c, e as i32)?;
            if !sc_e.is_zero() {
                let e_db = gamma2(core, e, d, b)?;
                if !e_db.is_zero() {
                    bracket.push(Expr::product(vec![sc_e, e_db]));
                }
            }
            let sd_e = gamma2(core, s, d, e as i32)?;
            if !sd_e.is_zero() {
                let e_cb = gamma2(core, e, c, b)?;
                if !e_cb.is_zero() {
                    bracket.push(Expr::product(vec![sd_e, e_cb]).neg());
                }
            }
        }
        terms.push(Expr::product(vec![gas, Expr::sum(bracket)]));
    }
    Ok(Expr::sum(terms))
}

/// `Ric_ij = R^s_isj`, contracted through the public curvature path.
pub(crate) fn ricci(core: &mut SessionCore, idx: &IndexTuple) -> Result<Expr> {
    let (i, j) = (idx[0], idx[1]);
    let dim = core.mf()?.dim();
    let mut terms = Vec::new();
    for s in 1..=dim as i32 {
        terms.push(core.component("riemann", &[-s, i, s, j])?);
    }
    Ok(Expr::sum(terms))
}

/// `G_ij = Ric_ij - R g_ij / 2`.
pub(crate) fn einstein(core: &mut SessionCore, idx: &IndexTuple) -> Result<Expr> {
    trace_adjusted_ricci(core, idx, Expr::rational(-1, 2))
}

/// Traceless Ricci tensor `S_ij = Ric_ij - R g_ij / 4` (dimension four).
pub(crate) fn plebanski(core: &mut SessionCore, idx: &IndexTuple) -> Result<Expr> {
    trace_adjusted_ricci(core, idx, Expr::rational(-1, 4))
}

fn trace_adjusted_ricci(core: &mut SessionCore, idx: &IndexTuple, coeff: Expr) -> Result<Expr> {
    let (i, j) = (idx[0], idx[1]);
    let ric = core.component("ricci", &[i, j])?;
    let scalar = core.ricci_scalar()?;
    let g = core.mf()?.gcov_entry(i as usize, j as usize).clone();
    Ok(Expr::sum(vec![ric, Expr::product(vec![coeff, scalar, g])]))
}

/// Conformal curvature in dimension `n >= 3`:
/// `C_abcd = R_abcd - (g_ac Ric_db - g_ad Ric_cb - g_bc Ric_da + g_bd Ric_ca) / (n - 2)
///           + R (g_ac g_db - g_ad g_cb) / ((n - 1)(n - 2))`.
/// In dimension three it vanishes identically.
pub(crate) fn weyl(core: &mut SessionCore, idx: &IndexTuple) -> Result<Expr> {
    let n = core.mf()?.dim();
    if n == 3 {
        return Ok(Expr::zero());
    }
    let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
    let gm = |core: &SessionCore, i: i32, j: i32| -> Result<Expr> {
        Ok(core.mf()?.gcov_entry(i as usize, j as usize).clone())
    };
    let mut terms = vec![core.component("riemann", &[a, b, c, d])?];
    let inv_n2 = Expr::rational(-1, (n as i64) - 2);
    for (gi, gj, ri, rj, sign) in [
        (a, c, d, b, 1),
        (a, d, c, b, -1),
        (b, c, d, a, -1),
        (b, d, c, a, 1),
    ] {
        let g = gm(core, gi, gj)?;
        if g.is_zero() {
            continue;
        }
        let ric = core.component("ricci", &[ri, rj])?;
        if ric.is_zero() {
            continue;
        }
        let mut factors = vec![inv_n2.clone(), g, ric];
        if sign < 0 {
            factors.push(Expr::int(-1));
        }
        terms.push(Expr::product(factors));
    }
    let scalar = core.ricci_scalar()?;
    if !scalar.is_zero() {
        let coeff = Expr::rational(1, ((n as i64) - 1) * ((n as i64) - 2));
        let gac = gm(core, a, c)?;
        let gdb = gm(core, d, b)?;
        if !gac.is_zero() && !gdb.is_zero() {
            terms.push(Expr::product(vec![coeff.clone(), scalar.clone(), gac, gdb]));
        }
        let gad = gm(core, a, d)?;
        let gcb = gm(core, c, b)?;
        if !gad.is_zero() && !gcb.is_zero() {
            terms.push(Expr::product(vec![coeff, scalar, gad, gcb]).neg());
        }
    }
    Ok(Expr::sum(terms))
}

/// Left dual of the conformal tensor in dimension four,
/// `*C_abcd = eps_abef C^ef_cd / 2`.
pub(crate) fn dual_weyl(core: &mut SessionCore, idx: &IndexTuple) -> Result<Expr> {
    let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
    let dim = core.mf()?.dim() as i32;
    let mut terms = Vec::new();
    for e in 1..=dim {
        for f in 1..=dim {
            let eps = core.component("levicivita", &[a, b, e, f])?;
            if eps.is_zero() {
                continue;
            }
            let cw = core.component("weyl", &[-e, -f, c, d])?;
            if cw.is_zero() {
                continue;
            }
            terms.push(Expr::product(vec![Expr::rational(1, 2), eps, cw]));
        }
    }
    Ok(Expr::sum(terms))
}
