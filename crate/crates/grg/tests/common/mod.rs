//! Shared helpers for the integration suites, including a deliberately
//! brute-force dense geometry oracle that recomputes everything from the
//! metric with no caching, no symmetry canonicalization, and its own matrix
//! inverse. Session results are checked against it component by component.
#![allow(dead_code)]
// Dense contractions read most naturally with explicit dummy indices.
#![allow(clippy::needless_range_loop)]

use grg::cli::{load_spec_source, ManifoldSpec};
use grg::symexpr::{
    equivalent_with, parse, AssumptionSet, EquivOptions, Equivalence, Expr, Symbol,
};
use grg::Session;
use std::ops::Neg;

/// Every equivalence decision in the integration suites goes through this
/// fixed seed and sample count (relative tolerance 1e-9 inside the oracle).
pub const EQ_SEED: u64 = 0x0A11_5EED;
pub const EQ_SAMPLES: u32 = 24;

pub fn opts() -> EquivOptions {
    EquivOptions {
        seed: EQ_SEED,
        samples: EQ_SAMPLES,
    }
}

pub fn expr(s: &str) -> Expr {
    parse(s).unwrap_or_else(|e| panic!("bad test expression `{s}`: {e}"))
}

pub fn assume(items: &[&str]) -> AssumptionSet {
    AssumptionSet::from_strings(items).unwrap_or_else(|e| panic!("bad test assumptions: {e}"))
}

#[track_caller]
pub fn assert_equiv(what: &str, got: &Expr, want: &Expr, a: &AssumptionSet) {
    let verdict = equivalent_with(got, want, a, &opts());
    assert_eq!(
        verdict,
        Equivalence::Equivalent,
        "{what}\n  got  = {got}\n  want = {want}"
    );
}

#[track_caller]
pub fn assert_zero(what: &str, got: &Expr, a: &AssumptionSet) {
    if got.is_zero() {
        return;
    }
    assert_equiv(what, got, &Expr::zero(), a);
}

/// Opens a session on one of the specs bundled into the binary.
pub fn open_bundled(name: &str) -> Session {
    let src = load_spec_source(name).expect("bundled spec source");
    let spec = ManifoldSpec::parse(&src).expect("bundled spec parses");
    let s = Session::new();
    s.open_with(spec.build().expect("bundled spec builds"))
        .expect("session opens");
    s
}

/// Fresh session over an explicit metric given as parsed rows.
pub fn open_metric(coords: &[&str], rows: &[&[&str]], assumptions: &[&str]) -> Session {
    let s = Session::new();
    let g: Vec<Vec<Expr>> = rows
        .iter()
        .map(|r| r.iter().map(|e| expr(e)).collect())
        .collect();
    s.open(
        coords.iter().map(|c| Symbol::new(c)).collect(),
        g,
        assume(assumptions),
    )
    .expect("session opens");
    s
}

/// Dense, cache-free geometry computed straight from the defining formulas.
/// Index convention throughout: zero-based storage, `riemann[a][b][c][d]`
/// holding the fully covariant component.
pub struct DenseGeom {
    pub n: usize,
    pub coords: Vec<Symbol>,
    pub assume: AssumptionSet,
    pub g: Vec<Vec<Expr>>,
    pub ginv: Vec<Vec<Expr>>,
    /// First-kind connection: `gamma1[a][b][c]` = (∂_b g_ac + ∂_c g_ab − ∂_a g_bc)/2.
    pub gamma1: Vec<Vec<Vec<Expr>>>,
    /// Second-kind connection: `gamma2[a][b][c]` with `a` the raised slot.
    pub gamma2: Vec<Vec<Vec<Expr>>>,
    /// `rup[a][b][c][d]`: first slot raised.
    pub rup: Vec<Vec<Vec<Vec<Expr>>>>,
    pub riemann: Vec<Vec<Vec<Vec<Expr>>>>,
    pub ricci: Vec<Vec<Expr>>,
    pub rscalar: Expr,
}

pub fn flat_index(n: usize, idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + i)
}

/// Odometer increment over `idx` in base `n`; false once it wraps to zero.
fn bump(idx: &mut [usize], n: usize) -> bool {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < n {
            return true;
        }
        *slot = 0;
    }
    false
}

fn minor(m: &[Vec<Expr>], row: usize, col: usize) -> Vec<Vec<Expr>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect()
}

fn det(m: &[Vec<Expr>]) -> Expr {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut terms = Vec::new();
    for (j, pivot) in m[0].iter().enumerate() {
        if pivot.is_zero() {
            continue;
        }
        let cof = det(&minor(m, 0, j));
        let cof = if j % 2 == 0 { cof } else { cof.neg() };
        terms.push(pivot.clone() * cof);
    }
    Expr::sum(terms)
}

fn invert(m: &[Vec<Expr>], a: &AssumptionSet) -> Vec<Vec<Expr>> {
    let n = m.len();
    let d = det(m);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    // Adjugate: inv[i][j] uses the (j, i) cofactor.
                    let cof = det(&minor(m, j, i));
                    let cof = if (i + j) % 2 == 0 { cof } else { cof.neg() };
                    (cof / d.clone()).simplify(a)
                })
                .collect()
        })
        .collect()
}

impl DenseGeom {
    pub fn new(coords: &[&str], rows: &[&[&str]], assumptions: &[&str]) -> DenseGeom {
        let a = assume(assumptions);
        let coords: Vec<Symbol> = coords.iter().map(|c| Symbol::new(c)).collect();
        let n = coords.len();
        let g: Vec<Vec<Expr>> = rows
            .iter()
            .map(|r| r.iter().map(|e| expr(e)).collect())
            .collect();
        assert!(g.len() == n && g.iter().all(|r| r.len() == n));
        let ginv = invert(&g, &a);

        let d = |e: &Expr, k: usize| e.diff(&coords[k]);
        let mut gamma1 = vec![vec![vec![Expr::zero(); n]; n]; n];
        for x in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let s = Expr::sum(vec![d(&g[x][c], b), d(&g[x][b], c), d(&g[b][c], x).neg()]);
                    gamma1[x][b][c] = (Expr::rational(1, 2) * s).simplify(&a);
                }
            }
        }
        let mut gamma2 = vec![vec![vec![Expr::zero(); n]; n]; n];
        for x in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut terms = Vec::new();
                    for s in 0..n {
                        if ginv[x][s].is_zero() || gamma1[s][b][c].is_zero() {
                            continue;
                        }
                        terms.push(ginv[x][s].clone() * gamma1[s][b][c].clone());
                    }
                    gamma2[x][b][c] = Expr::sum(terms).simplify(&a);
                }
            }
        }

        let mut rup = vec![vec![vec![vec![Expr::zero(); n]; n]; n]; n];
        for x in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for e in 0..n {
                        let mut terms =
                            vec![d(&gamma2[x][e][b], c), d(&gamma2[x][c][b], e).neg()];
                        for s in 0..n {
                            if !(gamma2[x][c][s].is_zero() || gamma2[s][e][b].is_zero()) {
                                terms.push(gamma2[x][c][s].clone() * gamma2[s][e][b].clone());
                            }
                            if !(gamma2[x][e][s].is_zero() || gamma2[s][c][b].is_zero()) {
                                terms.push(
                                    (gamma2[x][e][s].clone() * gamma2[s][c][b].clone()).neg(),
                                );
                            }
                        }
                        rup[x][b][c][e] = Expr::sum(terms).simplify(&a);
                    }
                }
            }
        }
        let mut riemann = vec![vec![vec![vec![Expr::zero(); n]; n]; n]; n];
        for x in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for e in 0..n {
                        let mut terms = Vec::new();
                        for s in 0..n {
                            if g[x][s].is_zero() || rup[s][b][c][e].is_zero() {
                                continue;
                            }
                            terms.push(g[x][s].clone() * rup[s][b][c][e].clone());
                        }
                        riemann[x][b][c][e] = Expr::sum(terms).simplify(&a);
                    }
                }
            }
        }

        let mut ricci = vec![vec![Expr::zero(); n]; n];
        for b in 0..n {
            for e in 0..n {
                let terms: Vec<Expr> = (0..n).map(|s| rup[s][b][s][e].clone()).collect();
                ricci[b][e] = Expr::sum(terms).simplify(&a);
            }
        }
        let mut terms = Vec::new();
        for b in 0..n {
            for e in 0..n {
                if ginv[b][e].is_zero() || ricci[b][e].is_zero() {
                    continue;
                }
                terms.push(ginv[b][e].clone() * ricci[b][e].clone());
            }
        }
        let rscalar = Expr::sum(terms).simplify(&a);

        DenseGeom {
            n,
            coords,
            assume: a,
            g,
            ginv,
            gamma1,
            gamma2,
            rup,
            riemann,
            ricci,
            rscalar,
        }
    }

    /// Flat row-major copy of the covariant Riemann tensor.
    pub fn riemann_flat(&self) -> Vec<Expr> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        out.push(self.riemann[a][b][c][d].clone());
                    }
                }
            }
        }
        out
    }

    /// Covariant derivative of an all-covariant dense field, derivative slot
    /// appended last. Straight formula, no caching.
    pub fn cov_deriv(&self, field: &[Expr], rank: usize) -> Vec<Expr> {
        let n = self.n;
        assert_eq!(field.len(), n.pow(rank as u32));
        let mut out = Vec::with_capacity(field.len() * n);
        let mut idx = vec![0usize; rank + 1];
        loop {
            let (slots, m) = idx.split_at(rank);
            let m = m[0];
            let mut terms = vec![field[flat_index(n, slots)].diff(&self.coords[m])];
            for p in 0..rank {
                for s in 0..n {
                    if self.gamma2[s][m][slots[p]].is_zero() {
                        continue;
                    }
                    let mut shifted = slots.to_vec();
                    shifted[p] = s;
                    let inner = &field[flat_index(n, &shifted)];
                    if inner.is_zero() {
                        continue;
                    }
                    terms.push((self.gamma2[s][m][slots[p]].clone() * inner.clone()).neg());
                }
            }
            out.push(Expr::sum(terms).simplify(&self.assume));
            if !bump(&mut idx, n) {
                break;
            }
        }
        out
    }

    /// Full Riemann-squared contraction Σ R_abcd R^abcd by raw raising.
    pub fn kretschmann(&self) -> Expr {
        let n = self.n;
        let mut terms = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        if self.riemann[a][b][c][d].is_zero() {
                            continue;
                        }
                        // Raise all four slots densely.
                        for (pa, ra) in self.ginv[a].iter().enumerate() {
                            if ra.is_zero() {
                                continue;
                            }
                            for (pb, rb) in self.ginv[b].iter().enumerate() {
                                if rb.is_zero() {
                                    continue;
                                }
                                for (pc, rc) in self.ginv[c].iter().enumerate() {
                                    if rc.is_zero() {
                                        continue;
                                    }
                                    for (pd, rd) in self.ginv[d].iter().enumerate() {
                                        if rd.is_zero()
                                            || self.riemann[pa][pb][pc][pd].is_zero()
                                        {
                                            continue;
                                        }
                                        terms.push(Expr::product(vec![
                                            self.riemann[a][b][c][d].clone(),
                                            ra.clone(),
                                            rb.clone(),
                                            rc.clone(),
                                            rd.clone(),
                                            self.riemann[pa][pb][pc][pd].clone(),
                                        ]));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Expr::sum(terms).simplify(&self.assume)
    }
}

pub const SCHWARZSCHILD_ROWS: [&[&str]; 4] = [
    &["2*M/r - 1", "0", "0", "0"],
    &["0", "1/(1 - 2*M/r)", "0", "0"],
    &["0", "0", "r^2", "0"],
    &["0", "0", "0", "r^2*Sin[theta]^2"],
];
pub const SCHWARZSCHILD_COORDS: [&str; 4] = ["t", "r", "theta", "phi"];
pub const SCHWARZSCHILD_ASSUME: [&str; 5] =
    ["0 < t", "0 < M", "2*M < r", "0 < theta < pi", "0 < phi < 2*pi"];

pub fn schwarzschild_dense() -> DenseGeom {
    DenseGeom::new(
        &SCHWARZSCHILD_COORDS,
        &SCHWARZSCHILD_ROWS,
        &SCHWARZSCHILD_ASSUME,
    )
}

pub const SPHERE_ROWS: [&[&str]; 2] = [&["a^2", "0"], &["0", "a^2*Sin[theta]^2"]];
pub const SPHERE_COORDS: [&str; 2] = ["theta", "phi"];
pub const SPHERE_ASSUME: [&str; 3] = ["0 < a", "0 < theta < pi", "0 < phi < 2*pi"];

pub fn sphere_dense() -> DenseGeom {
    DenseGeom::new(&SPHERE_COORDS, &SPHERE_ROWS, &SPHERE_ASSUME)
}

/// Catenoid chart metric written directly as a matrix (the bundled spec file
/// declares the same chart through its line element instead).
pub const CATENOID_ROWS: [&[&str]; 3] = [
    &[
        "(r*Cosh[v/r] - v*Sinh[v/r])^2/r^2",
        "0",
        "Sinh[v/r]*(r*Cosh[v/r] - v*Sinh[v/r])/r",
    ],
    &["0", "r^2*Cosh[v/r]^2", "0"],
    &[
        "Sinh[v/r]*(r*Cosh[v/r] - v*Sinh[v/r])/r",
        "0",
        "Cosh[v/r]^2",
    ],
];
pub const CATENOID_COORDS: [&str; 3] = ["r", "u", "v"];
pub const CATENOID_ASSUME: [&str; 3] = ["1 < r < 2", "0 < u < 2*pi", "0 < v < 1"];

/// Hand-derived closed form of the catenoid-chart scalar Laplacian.
pub const CATENOID_LAPLACIAN: &str =
    "r^2*Cosh[v/r]^2*f^(2,0,0)[r,u,v]/(r*Cosh[v/r] - v*Sinh[v/r])^2 \
     + f^(0,2,0)[r,u,v]/(r^2*Cosh[v/r]^2) \
     + f^(0,0,2)[r,u,v] \
     - 2*r*Sinh[v/r]*f^(1,0,1)[r,u,v]/(r*Cosh[v/r] - v*Sinh[v/r]) \
     - (r*Sinh[v/r]*Cosh[v/r] + v)^2*f^(1,0,0)[r,u,v]\
       /(Cosh[v/r]*(r*Cosh[v/r] - v*Sinh[v/r])^3)";
