//! The standard four-dimensional polynomial curvature invariants: traces of
//! the traceless Ricci tensor, the complex self-dual quadratics of the
//! conformal tensor, and the mixed contractions coupling the two sectors.
//! Contractions with traceless-Ricci factors keep those factors outermost so
//! that vacuum spacetimes short-circuit without ever touching the conformal
//! sector.

use std::fmt;
use std::str::FromStr;
use std::ops::Neg;

use crate::error::{Error, Result};
use crate::symexpr::Expr;
use crate::tensor::{Session, SessionCore};

/// The invariant set, in canonical reporting order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmInvariant {
    R1,
    R2,
    R3,
    W1,
    W2,
    M1,
    M2,
    M3,
    M4,
    M5,
}

pub const ALL_INVARIANTS: [CmInvariant; 10] = [
    CmInvariant::R1,
    CmInvariant::R2,
    CmInvariant::R3,
    CmInvariant::W1,
    CmInvariant::W2,
    CmInvariant::M1,
    CmInvariant::M2,
    CmInvariant::M3,
    CmInvariant::M4,
    CmInvariant::M5,
];

impl CmInvariant {
    pub fn name(self) -> &'static str {
        match self {
            CmInvariant::R1 => "R1",
            CmInvariant::R2 => "R2",
            CmInvariant::R3 => "R3",
            CmInvariant::W1 => "W1",
            CmInvariant::W2 => "W2",
            CmInvariant::M1 => "M1",
            CmInvariant::M2 => "M2",
            CmInvariant::M3 => "M3",
            CmInvariant::M4 => "M4",
            CmInvariant::M5 => "M5",
        }
    }
}

impl fmt::Display for CmInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CmInvariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        for inv in ALL_INVARIANTS {
            if inv.name().eq_ignore_ascii_case(s) {
                return Ok(inv);
            }
        }
        Err(Error::Other(format!(
            "unknown invariant `{s}` (expected one of R1 R2 R3 W1 W2 M1 M2 M3 M4 M5)"
        )))
    }
}

impl Session {
    pub fn cm_invariant(&self, which: CmInvariant) -> Result<Expr> {
        self.with_core(|core| compute(core, which))
    }

    /// Every invariant in reporting order; later entries reuse the caches the
    /// earlier ones filled.
    pub fn cm_all(&self) -> Result<Vec<(&'static str, Expr)>> {
        self.with_core(|core| {
            ALL_INVARIANTS
                .iter()
                .map(|&inv| Ok((inv.name(), compute(core, inv)?)))
                .collect()
        })
    }
}

pub(crate) fn compute(core: &mut SessionCore, which: CmInvariant) -> Result<Expr> {
    let dim = core.mf()?.dim();
    if dim != 4 {
        return Err(Error::NeedsDimensionFour(dim));
    }
    let key = format!("invariant.{}", which.name());
    core.scalar_cached(&key, |core| {
        let raw = match which {
            CmInvariant::R1 => r1(core),
            CmInvariant::R2 => r2(core),
            CmInvariant::R3 => r3(core),
            CmInvariant::W1 => w1(core),
            CmInvariant::W2 => w2(core),
            CmInvariant::M1 => m1(core),
            CmInvariant::M2 => m2(core),
            CmInvariant::M3 => m3(core),
            CmInvariant::M4 => m4(core),
            CmInvariant::M5 => m5(core),
        }?;
        Ok(raw.simplify(core.mf()?.assumptions()))
    })
}

const D: i32 = 4;

/// `S` with both slots raised, lowered, or mixed, via the signed tuple.
fn s(core: &mut SessionCore, i: i32, j: i32) -> Result<Expr> {
    core.component("plebanski", &[i, j])
}

fn c(core: &mut SessionCore, idx: [i32; 4]) -> Result<Expr> {
    core.component("weyl", &idx)
}

fn cd(core: &mut SessionCore, idx: [i32; 4]) -> Result<Expr> {
    core.component("dualweyl", &idx)
}

fn imag(e: Expr) -> Expr {
    Expr::product(vec![Expr::I, e])
}

fn scaled(num: i64, den: i64, terms: Vec<Expr>) -> Expr {
    Expr::product(vec![Expr::rational(num, den), Expr::sum(terms)])
}

/// `R1 = S^a_b S^b_a / 4`
fn r1(core: &mut SessionCore) -> Result<Expr> {
    let mut terms = Vec::new();
    for a in 1..=D {
        for b in 1..=D {
            let s1 = s(core, -a, b)?;
            if s1.is_zero() {
                continue;
            }
            let s2 = s(core, -b, a)?;
            if s2.is_zero() {
                continue;
            }
            terms.push(Expr::product(vec![s1, s2]));
        }
    }
    Ok(scaled(1, 4, terms))
}

/// `R2 = -S^a_b S^b_c S^c_a / 8`
fn r2(core: &mut SessionCore) -> Result<Expr> {
    let mut terms = Vec::new();
    for a in 1..=D {
        for b in 1..=D {
            let s1 = s(core, -a, b)?;
            if s1.is_zero() {
                continue;
            }
            for cc in 1..=D {
                let s2 = s(core, -b, cc)?;
                if s2.is_zero() {
                    continue;
                }
                let s3 = s(core, -cc, a)?;
                if s3.is_zero() {
                    continue;
                }
                terms.push(Expr::product(vec![s1.clone(), s2, s3]));
            }
        }
    }
    Ok(scaled(-1, 8, terms))
}

/// `R3 = S^a_b S^b_c S^c_d S^d_a / 16`
fn r3(core: &mut SessionCore) -> Result<Expr> {
    let mut terms = Vec::new();
    for a in 1..=D {
        for b in 1..=D {
            let s1 = s(core, -a, b)?;
            if s1.is_zero() {
                continue;
            }
            for cc in 1..=D {
                let s2 = s(core, -b, cc)?;
                if s2.is_zero() {
                    continue;
                }
                for d in 1..=D {
                    let s3 = s(core, -cc, d)?;
                    if s3.is_zero() {
                        continue;
                    }
                    let s4 = s(core, -d, a)?;
                    if s4.is_zero() {
                        continue;
                    }
                    terms.push(Expr::product(vec![s1.clone(), s2.clone(), s3, s4]));
                }
            }
        }
    }
    Ok(scaled(1, 16, terms))
}

/// `W1 = (C_abcd + i *C_abcd) C^abcd / 8`
fn w1(core: &mut SessionCore) -> Result<Expr> {
    let mut terms = Vec::new();
    for a in 1..=D {
        for b in 1..=D {
            for cc in 1..=D {
                for d in 1..=D {
                    let lo = c(core, [a, b, cc, d])?;
                    let lod = cd(core, [a, b, cc, d])?;
                    if lo.is_zero() && lod.is_zero() {
                        continue;
                    }
                    let up = c(core, [-a, -b, -cc, -d])?;
                    if up.is_zero() {
                        continue;
                    }
                    let pair = Expr::sum(vec![lo, imag(lod)]);
                    terms.push(Expr::product(vec![pair, up]));
                }
            }
        }
    }
    Ok(scaled(1, 8, terms))
}

/// `W2 = -(C_ab^cd + i *C_ab^cd)(C_cd^ab + i *C_cd^ab) / 16`
fn w2(core: &mut SessionCore) -> Result<Expr> {
    let mut terms = Vec::new();
    for a in 1..=D {
        for b in 1..=D {
            for cc in 1..=D {
                for d in 1..=D {
                    let p = c(core, [a, b, -cc, -d])?;
                    let pd = cd(core, [a, b, -cc, -d])?;
                    if p.is_zero() && pd.is_zero() {
                        continue;
                    }
                    let q = c(core, [cc, d, -a, -b])?;
                    let qd = cd(core, [cc, d, -a, -b])?;
                    if q.is_zero() && qd.is_zero() {
                        continue;
                    }
                    let left = Expr::sum(vec![p, imag(pd)]);
                    let right = Expr::sum(vec![q, imag(qd)]);
                    terms.push(Expr::product(vec![left, right]));
                }
            }
        }
    }
    Ok(scaled(-1, 16, terms))
}

/// `M1 = S^ad S^bc (C_abcd - i *C_abcd) / 8`
fn m1(core: &mut SessionCore) -> Result<Expr> {
    let mut terms = Vec::new();
    for a in 1..=D {
        for d in 1..=D {
            let s1 = s(core, -a, -d)?;
            if s1.is_zero() {
                continue;
            }
            for b in 1..=D {
                for cc in 1..=D {
                    let s2 = s(core, -b, -cc)?;
                    if s2.is_zero() {
                        continue;
                    }
                    let w = c(core, [a, b, cc, d])?;
                    let wd = cd(core, [a, b, cc, d])?;
                    if w.is_zero() && wd.is_zero() {
                        continue;
                    }
                    let pair = Expr::sum(vec![w, imag(wd).neg()]);
                    terms.push(Expr::product(vec![s1.clone(), s2, pair]));
                }
            }
        }
    }
    Ok(scaled(1, 8, terms))
}

/// Shared loop shell for the mixed quadratic contractions: calls `f` for each
/// surviving `(b, c, e, f, a, d)` with the two `S` factors already attached.
fn mixed_quad(
    core: &mut SessionCore,
    mut f: impl FnMut(&mut SessionCore, [i32; 4], [i32; 4]) -> Result<Expr>,
) -> Result<Vec<Expr>> {
    let mut terms = Vec::new();
    for b in 1..=D {
        for cc in 1..=D {
            let s1 = s(core, -b, -cc)?;
            if s1.is_zero() {
                continue;
            }
            for e in 1..=D {
                for ff in 1..=D {
                    let s2 = s(core, e, ff)?;
                    if s2.is_zero() {
                        continue;
                    }
                    for a in 1..=D {
                        for d in 1..=D {
                            let inner = f(core, [a, b, cc, d], [-a, -e, -ff, -d])?;
                            if inner.is_zero() {
                                continue;
                            }
                            terms.push(Expr::product(vec![s1.clone(), s2.clone(), inner]));
                        }
                    }
                }
            }
        }
    }
    Ok(terms)
}

/// `M2 = i *C_abcd S^bc S_ef C^aefd / 8
///       + S^bc S_ef (C_abcd C^aefd - *C_abcd *C^aefd) / 16`
fn m2(core: &mut SessionCore) -> Result<Expr> {
    let terms = mixed_quad(core, |core, lo, up| {
        let w_lo = c(core, lo)?;
        let wd_lo = cd(core, lo)?;
        if w_lo.is_zero() && wd_lo.is_zero() {
            return Ok(Expr::zero());
        }
        let w_up = c(core, up)?;
        let wd_up = cd(core, up)?;
        let mut parts = Vec::new();
        if !wd_lo.is_zero() && !w_up.is_zero() {
            parts.push(Expr::product(vec![
                Expr::rational(1, 8),
                Expr::I,
                wd_lo.clone(),
                w_up.clone(),
            ]));
        }
        if !w_lo.is_zero() && !w_up.is_zero() {
            parts.push(Expr::product(vec![Expr::rational(1, 16), w_lo, w_up]));
        }
        if !wd_lo.is_zero() && !wd_up.is_zero() {
            parts.push(Expr::product(vec![Expr::rational(-1, 16), wd_lo, wd_up]));
        }
        Ok(Expr::sum(parts))
    })?;
    Ok(Expr::sum(terms))
}

/// `M3 = S^bc S_ef (C_abcd C^aefd + *C_abcd *C^aefd) / 16`
fn m3(core: &mut SessionCore) -> Result<Expr> {
    let terms = mixed_quad(core, |core, lo, up| {
        let w_lo = c(core, lo)?;
        let wd_lo = cd(core, lo)?;
        if w_lo.is_zero() && wd_lo.is_zero() {
            return Ok(Expr::zero());
        }
        let w_up = c(core, up)?;
        let wd_up = cd(core, up)?;
        let mut parts = Vec::new();
        if !w_lo.is_zero() && !w_up.is_zero() {
            parts.push(Expr::product(vec![w_lo, w_up]));
        }
        if !wd_lo.is_zero() && !wd_up.is_zero() {
            parts.push(Expr::product(vec![wd_lo, wd_up]));
        }
        Ok(scaled(1, 16, parts))
    })?;
    Ok(Expr::sum(terms))
}

/// `M4 = -S^ag S^c_d S^ef (C_ac^db C_befg + *C_ac^db *C_befg) / 32`
fn m4(core: &mut SessionCore) -> Result<Expr> {
    let mut terms = Vec::new();
    for a in 1..=D {
        for g in 1..=D {
            let s1 = s(core, -a, -g)?;
            if s1.is_zero() {
                continue;
            }
            for cc in 1..=D {
                for d in 1..=D {
                    let s2 = s(core, -cc, d)?;
                    if s2.is_zero() {
                        continue;
                    }
                    for e in 1..=D {
                        for ff in 1..=D {
                            let s3 = s(core, -e, -ff)?;
                            if s3.is_zero() {
                                continue;
                            }
                            for b in 1..=D {
                                let w1 = c(core, [a, cc, -d, -b])?;
                                let wd1 = cd(core, [a, cc, -d, -b])?;
                                if w1.is_zero() && wd1.is_zero() {
                                    continue;
                                }
                                let mut parts = Vec::new();
                                if !w1.is_zero() {
                                    let w2 = c(core, [b, e, ff, g])?;
                                    if !w2.is_zero() {
                                        parts.push(Expr::product(vec![w1, w2]));
                                    }
                                }
                                if !wd1.is_zero() {
                                    let wd2 = cd(core, [b, e, ff, g])?;
                                    if !wd2.is_zero() {
                                        parts.push(Expr::product(vec![wd1, wd2]));
                                    }
                                }
                                if parts.is_empty() {
                                    continue;
                                }
                                terms.push(Expr::product(vec![
                                    s1.clone(),
                                    s2.clone(),
                                    s3.clone(),
                                    Expr::sum(parts),
                                ]));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(scaled(-1, 32, terms))
}

/// `M5 = S^bc S^ef (i *C^aghd + C^aghd)(*C_abcd *C_gefh + C_abcd C_gefh) / 32`
fn m5(core: &mut SessionCore) -> Result<Expr> {
    let mut terms = Vec::new();
    for b in 1..=D {
        for cc in 1..=D {
            let s1 = s(core, -b, -cc)?;
            if s1.is_zero() {
                continue;
            }
            for e in 1..=D {
                for ff in 1..=D {
                    let s2 = s(core, -e, -ff)?;
                    if s2.is_zero() {
                        continue;
                    }
                    for a in 1..=D {
                        for g in 1..=D {
                            for h in 1..=D {
                                for d in 1..=D {
                                    let lo1 = c(core, [a, b, cc, d])?;
                                    let lod1 = cd(core, [a, b, cc, d])?;
                                    if lo1.is_zero() && lod1.is_zero() {
                                        continue;
                                    }
                                    let lo2 = c(core, [g, e, ff, h])?;
                                    let lod2 = cd(core, [g, e, ff, h])?;
                                    if lo2.is_zero() && lod2.is_zero() {
                                        continue;
                                    }
                                    let up = c(core, [-a, -g, -h, -d])?;
                                    let upd = cd(core, [-a, -g, -h, -d])?;
                                    if up.is_zero() && upd.is_zero() {
                                        continue;
                                    }
                                    let first = Expr::sum(vec![imag(upd), up]);
                                    let mut second = Vec::new();
                                    if !lod1.is_zero() && !lod2.is_zero() {
                                        second.push(Expr::product(vec![lod1, lod2]));
                                    }
                                    if !lo1.is_zero() && !lo2.is_zero() {
                                        second.push(Expr::product(vec![lo1, lo2]));
                                    }
                                    if second.is_empty() {
                                        continue;
                                    }
                                    terms.push(Expr::product(vec![
                                        s1.clone(),
                                        s2.clone(),
                                        first,
                                        Expr::sum(second),
                                    ]));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(scaled(1, 32, terms))
}
