//! Exact partial differentiation.

use super::{Expr, FnKind, OpaqueFn, Symbol};
use std::ops::Neg;

impl Expr {
    /// Partial derivative with respect to `x`, canonicalized on the way out.
    pub fn diff(&self, x: &Symbol) -> Expr {
        match self {
            Expr::Rational(_) | Expr::I => Expr::zero(),
            Expr::Symbol(s) => {
                if s == x && !super::assume::is_constant_name(s) {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Expr::Sum(ts) => Expr::sum(ts.iter().map(|t| t.diff(x)).collect()),
            Expr::Product(fs) => {
                let mut terms = Vec::with_capacity(fs.len());
                for (i, f) in fs.iter().enumerate() {
                    let df = f.diff(x);
                    if df.is_zero() {
                        continue;
                    }
                    let mut factors = Vec::with_capacity(fs.len());
                    factors.push(df);
                    for (j, g) in fs.iter().enumerate() {
                        if j != i {
                            factors.push(g.clone());
                        }
                    }
                    terms.push(Expr::product(factors));
                }
                Expr::sum(terms)
            }
            Expr::Power(b, e) => {
                let db = b.diff(x);
                let de = e.diff(x);
                let mut terms = Vec::new();
                if !db.is_zero() {
                    // e * b^(e-1) * b'
                    let em1 = Expr::sum(vec![(**e).clone(), Expr::int(-1)]);
                    terms.push(Expr::product(vec![
                        (**e).clone(),
                        Expr::power((**b).clone(), em1),
                        db,
                    ]));
                }
                if !de.is_zero() {
                    // b^e * log(b) * e'
                    terms.push(Expr::product(vec![
                        self.clone(),
                        Expr::fun(FnKind::Log, (**b).clone()),
                        de,
                    ]));
                }
                Expr::sum(terms)
            }
            Expr::Fn(kind, a) => {
                let da = a.diff(x);
                if da.is_zero() {
                    return Expr::zero();
                }
                Expr::product(vec![fn_derivative(*kind, a), da])
            }
            Expr::Opaque(o) => match o.args.iter().position(|a| a == x) {
                None => Expr::zero(),
                Some(k) => {
                    let mut orders = o.orders.clone();
                    orders[k] += 1;
                    Expr::Opaque(OpaqueFn {
                        name: o.name.clone(),
                        args: o.args.clone(),
                        orders,
                    })
                }
            },
        }
    }
}

/// Derivative of a known function at `a`, written in the sin/cos/sinh/cosh
/// basis so downstream normalization has less to do.
fn fn_derivative(kind: FnKind, a: &Expr) -> Expr {
    let a = a.clone();
    let sin = |a: Expr| Expr::fun(FnKind::Sin, a);
    let cos = |a: Expr| Expr::fun(FnKind::Cos, a);
    let sinh = |a: Expr| Expr::fun(FnKind::Sinh, a);
    let cosh = |a: Expr| Expr::fun(FnKind::Cosh, a);
    match kind {
        FnKind::Sin => cos(a),
        FnKind::Cos => sin(a).neg(),
        FnKind::Tan => Expr::power(cos(a), Expr::int(-2)),
        FnKind::Cot => Expr::power(sin(a), Expr::int(-2)).neg(),
        FnKind::Sec => sin(a.clone()) * Expr::power(cos(a), Expr::int(-2)),
        FnKind::Csc => (cos(a.clone()) * Expr::power(sin(a), Expr::int(-2))).neg(),
        FnKind::Sinh => cosh(a),
        FnKind::Cosh => sinh(a),
        FnKind::Tanh => Expr::power(cosh(a), Expr::int(-2)),
        FnKind::Coth => Expr::power(sinh(a), Expr::int(-2)).neg(),
        FnKind::Sech => (sinh(a.clone()) * Expr::power(cosh(a), Expr::int(-2))).neg(),
        FnKind::Csch => (cosh(a.clone()) * Expr::power(sinh(a), Expr::int(-2))).neg(),
        FnKind::Exp => Expr::fun(FnKind::Exp, a),
        FnKind::Log => Expr::power(a, Expr::int(-1)),
        FnKind::Sqrt => {
            Expr::rational(1, 2) * Expr::power(a, Expr::rational(-1, 2))
        }
    }
}
