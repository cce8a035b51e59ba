//! Manifold declaration: coordinate names, a covariant metric with free
//! parameters, and the derived data (inverse metric, determinant) computed
//! on first use.

use std::collections::BTreeMap;
use std::ops::Neg;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::symexpr::nf::RatFn;
use crate::symexpr::poly::{Mono, Poly};
use crate::symexpr::{equivalent_with, AssumptionSet, EquivOptions, Equivalence, Expr, Symbol};

#[derive(Debug)]
pub struct Manifold {
    coords: Vec<Symbol>,
    gcov: Vec<Vec<Expr>>,
    assumptions: AssumptionSet,
    det: Expr,
    ginv: OnceLock<Vec<Vec<Expr>>>,
    sqrt_abs_det: OnceLock<Expr>,
}

impl Manifold {
    /// Declares a manifold from coordinates and a covariant metric matrix.
    ///
    /// The metric must be square, structurally symmetric after `simplify`,
    /// use distinct coordinate names, and have a determinant that does not
    /// vanish identically (checked by numeric sampling inside the assumed
    /// domain).
    pub fn open(
        coords: Vec<Symbol>,
        g: Vec<Vec<Expr>>,
        assumptions: AssumptionSet,
    ) -> Result<Manifold> {
        let dim = coords.len();
        if dim == 0 {
            return Err(Error::Other("a manifold needs at least one coordinate".into()));
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if coords[i] == coords[j] {
                    return Err(Error::DuplicateCoordinate(coords[i].name().to_string()));
                }
            }
        }
        if g.len() != dim || g.iter().any(|row| row.len() != dim) {
            return Err(Error::NonSquareMetric {
                rows: g.len(),
                cols: g.first().map_or(0, |r| r.len()),
            });
        }
        let gcov: Vec<Vec<Expr>> = g
            .iter()
            .map(|row| row.iter().map(|e| e.simplify(&assumptions)).collect())
            .collect();
        for (i, row) in gcov.iter().enumerate() {
            for (j, upper) in row.iter().enumerate().skip(i + 1) {
                if *upper != gcov[j][i] {
                    return Err(Error::AsymmetricMetric { i: i + 1, j: j + 1 });
                }
            }
        }
        let det = det_expr(&gcov).simplify(&assumptions);
        match equivalent_with(&det, &Expr::zero(), &assumptions, &EquivOptions::default()) {
            Equivalence::Different => {}
            _ => return Err(Error::SingularMetric),
        }
        Ok(Manifold {
            coords,
            gcov,
            assumptions,
            det,
            ginv: OnceLock::new(),
            sqrt_abs_det: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Symbol] {
        &self.coords
    }

    /// Coordinate symbol for a 1-based index.
    pub fn coord(&self, i: usize) -> &Symbol {
        &self.coords[i - 1]
    }

    pub fn assumptions(&self) -> &AssumptionSet {
        &self.assumptions
    }

    /// Covariant metric entry, 1-based.
    pub fn gcov_entry(&self, i: usize, j: usize) -> &Expr {
        &self.gcov[i - 1][j - 1]
    }

    /// Inverse-metric entry, 1-based.
    pub fn ginv_entry(&self, i: usize, j: usize) -> &Expr {
        &self.ginv()[i - 1][j - 1]
    }

    fn ginv(&self) -> &Vec<Vec<Expr>> {
        self.ginv.get_or_init(|| {
            let dim = self.dim();
            let mut inv = vec![vec![Expr::zero(); dim]; dim];
            for (i, row) in inv.iter_mut().enumerate() {
                for (j, slot) in row.iter_mut().enumerate() {
                    // adjugate transposes the cofactor indices
                    let minor = minor_matrix(&self.gcov, j, i);
                    let mut cof = det_expr(&minor);
                    if (i + j) % 2 == 1 {
                        cof = cof.neg();
                    }
                    *slot =
                        Expr::product(vec![cof, self.det.clone().recip()]).simplify(&self.assumptions);
                }
            }
            inv
        })
    }

    /// Signed-index metric access: positive pairs read the covariant matrix,
    /// negative pairs the inverse, and mixed signs give the Kronecker delta.
    pub fn metric(&self, i: i32, j: i32) -> Result<Expr> {
        let a = check_index(i, self.dim())?;
        let b = check_index(j, self.dim())?;
        Ok(if i > 0 && j > 0 {
            self.gcov[a - 1][b - 1].clone()
        } else if i < 0 && j < 0 {
            self.ginv()[a - 1][b - 1].clone()
        } else if a == b {
            Expr::one()
        } else {
            Expr::zero()
        })
    }

    pub fn det_metric(&self) -> Expr {
        self.det.clone()
    }

    /// `sqrt(|det g|)` simplified under the manifold assumptions.
    pub fn sqrt_abs_det_metric(&self) -> Expr {
        self.sqrt_abs_det
            .get_or_init(|| {
                let inner = if crate::symexpr::is_negative(&self.det, &self.assumptions) {
                    self.det.clone().neg()
                } else {
                    self.det.clone()
                };
                Expr::power(inner, Expr::rational(1, 2)).simplify(&self.assumptions)
            })
            .clone()
    }
}

pub(crate) fn check_index(i: i32, dim: usize) -> Result<usize> {
    if i == 0 {
        return Err(Error::ZeroIndex);
    }
    let a = i.unsigned_abs() as usize;
    if a > dim {
        return Err(Error::IndexOutOfRange { value: i, dim });
    }
    Ok(a)
}

/// Determinant by first-row Laplace expansion with skipping of structural
/// zeros; adequate for the small dimensions used here.
fn det_expr(m: &[Vec<Expr>]) -> Expr {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut terms = Vec::new();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor = minor_matrix(m, 0, j);
        let mut t = Expr::product(vec![m[0][j].clone(), det_expr(&minor)]);
        if j % 2 == 1 {
            t = t.neg();
        }
        terms.push(t);
    }
    Expr::sum(terms)
}

fn minor_matrix(m: &[Vec<Expr>], row: usize, col: usize) -> Vec<Vec<Expr>> {
    m.iter()
        .enumerate()
        .filter(|(r, _)| *r != row)
        .map(|(_, rvals)| {
            rvals
                .iter()
                .enumerate()
                .filter(|(c, _)| *c != col)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect()
}

/// Extracts the symmetric metric matrix from a quadratic form written with
/// `Dt[coord]` differential tokens: `g_ii` is the coefficient of `Dt[x_i]^2`
/// and `g_ij` half the coefficient of the cross term.
pub fn to_matrix(form: &Expr, coords: &[Symbol], a: &AssumptionSet) -> Result<Vec<Vec<Expr>>> {
    let dim = coords.len();
    let rf = RatFn::from_expr(form, a);
    let (num, den) = rf.into_parts();
    if poly_mentions_dt(&den) {
        return Err(Error::LineElement(
            "differential tokens may not appear in a denominator".into(),
        ));
    }
    let mut slots: BTreeMap<(usize, usize), Poly> = BTreeMap::new();
    for (mono, coeff) in &num.0 {
        let mut dt_slots: Vec<(usize, u32)> = Vec::new();
        let mut residual = BTreeMap::new();
        for (atom, &exp) in &mono.0 {
            match dt_coordinate(atom, coords) {
                Some(Some(k)) => dt_slots.push((k, exp)),
                Some(None) => {
                    return Err(Error::LineElement(format!(
                        "differential token {atom} does not match any coordinate"
                    )))
                }
                None => {
                    if atom_mentions_dt(atom) {
                        return Err(Error::LineElement(format!(
                            "differential token buried inside {atom}"
                        )));
                    }
                    residual.insert(atom.clone(), exp);
                }
            }
        }
        let total: u32 = dt_slots.iter().map(|(_, e)| e).sum();
        if total != 2 {
            return Err(Error::LineElement(format!(
                "term of degree {total} in the differentials; the form must be quadratic"
            )));
        }
        let key = match dt_slots.as_slice() {
            [(i, 2)] => (*i, *i),
            [(i, 1), (j, 1)] => (*i.min(j), *i.max(j)),
            _ => unreachable!("degree-2 split"),
        };
        let mut p = slots.remove(&key).unwrap_or_else(Poly::zero);
        p.insert_term(Mono(residual), coeff.clone());
        slots.insert(key, p);
    }
    let mut g = vec![vec![Expr::zero(); dim]; dim];
    for ((i, j), poly) in slots {
        let mut rf = RatFn::from_parts(poly, den.clone());
        if i != j {
            rf = rf.mul(&RatFn::from_poly(Poly::from_rational(
                num_rational::BigRational::new(1.into(), 2.into()),
            )));
        }
        let entry = rf.into_expr().simplify(a);
        g[i][j] = entry.clone();
        g[j][i] = entry;
    }
    Ok(g)
}

/// `Some(Some(k))` for a `Dt` token of the k-th coordinate (0-based),
/// `Some(None)` for a `Dt` of anything else, `None` for a non-`Dt` atom.
fn dt_coordinate(atom: &Expr, coords: &[Symbol]) -> Option<Option<usize>> {
    if let Expr::Opaque(o) = atom {
        if o.name.name() == "Dt" && o.args.len() == 1 && o.orders.iter().all(|&k| k == 0) {
            return Some(coords.iter().position(|c| *c == o.args[0]));
        }
    }
    None
}

fn atom_mentions_dt(atom: &Expr) -> bool {
    atom.opaque_names().iter().any(|n| n.name() == "Dt")
}

fn poly_mentions_dt(p: &Poly) -> bool {
    p.atoms()
        .iter()
        .any(|a| dt_coordinate(a, &[]).is_some() || atom_mentions_dt(a))
}
