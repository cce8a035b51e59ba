//! Rational-function normal form and the full simplifier.
//!
//! [`Expr::simplify`] rewrites an expression as a single quotient of
//! polynomials over atoms (see [`super::poly`]), cancels the polynomial GCD,
//! rationalizes complex denominators, and rebuilds a lightly factored
//! expression. Function arguments are simplified recursively; trig and
//! hyperbolic reciprocals are folded into the sin/cos/sinh/cosh basis,
//! arguments are sign-normalized, and even rational multiples inside
//! arguments are halved through double-angle expansions so that mixed forms
//! like `cosh(2u)` and `cosh(u)^2` meet in one representation.
//!
//! Roots use assumptions: `sqrt(x^2)` collapses to `x` only when the
//! assumption set proves `x > 0`.

use super::poly::{gcd, Mono, Poly};
use super::{fold_rational_power, AssumptionSet, Expr, FnKind};
use num_bigint::BigInt;
use std::ops::Neg;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

impl Expr {
    /// Full normal-form simplification under a set of assumptions.
    /// Total and idempotent.
    pub fn simplify(&self, a: &AssumptionSet) -> Expr {
        RatFn::from_expr(self, a).into_expr()
    }
}

/// True when the simplified expression is provably strictly positive.
pub fn is_positive(e: &Expr, a: &AssumptionSet) -> bool {
    a.proves_positive(e) || a.proves_positive(&e.simplify(a))
}

/// True when the simplified expression is provably strictly negative.
pub fn is_negative(e: &Expr, a: &AssumptionSet) -> bool {
    a.proves_negative(e) || a.proves_negative(&e.simplify(a))
}

/// Quotient of polynomials; the denominator is kept `I`-free.
#[derive(Clone, Debug)]
pub(crate) struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    fn one() -> Self {
        RatFn {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub(crate) fn from_poly(p: Poly) -> Self {
        RatFn {
            num: p,
            den: Poly::one(),
        }
    }

    pub(crate) fn from_parts(num: Poly, den: Poly) -> Self {
        RatFn { num, den }
    }

    pub(crate) fn into_parts(self) -> (Poly, Poly) {
        (self.num, self.den)
    }

    fn atom(e: Expr) -> Self {
        RatFn::from_poly(Poly::from_atom_pow(e, 1))
    }

    fn add(&self, o: &RatFn) -> RatFn {
        if self.den == o.den {
            return RatFn {
                num: self.num.add(&o.num),
                den: self.den.clone(),
            };
        }
        let g = gcd(&self.den, &o.den);
        let (da, db) = if g.is_one() {
            (self.den.clone(), o.den.clone())
        } else {
            (
                self.den.exact_div(&g).unwrap_or_else(|| self.den.clone()),
                o.den.exact_div(&g).unwrap_or_else(|| o.den.clone()),
            )
        };
        // lcm(d1,d2) = d1 * (d2/g); numerators scale by the opposite cofactor.
        RatFn {
            num: self.num.mul(&db).add(&o.num.mul(&da)),
            den: self.den.mul(&db),
        }
    }

    pub(crate) fn mul(&self, o: &RatFn) -> RatFn {
        // Cross-cancel before multiplying to keep intermediate sizes down.
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let (n1, d2) = if g1.is_one() {
            (self.num.clone(), o.den.clone())
        } else {
            match (self.num.exact_div(&g1), o.den.exact_div(&g1)) {
                (Some(a), Some(b)) => (a, b),
                _ => (self.num.clone(), o.den.clone()),
            }
        };
        let (n2, d1) = if g2.is_one() {
            (o.num.clone(), self.den.clone())
        } else {
            match (o.num.exact_div(&g2), self.den.exact_div(&g2)) {
                (Some(a), Some(b)) => (a, b),
                _ => (o.num.clone(), self.den.clone()),
            }
        };
        RatFn {
            num: n1.mul(&n2),
            den: d1.mul(&d2),
        }
    }

    fn powi(&self, k: i64) -> RatFn {
        if k == 0 {
            return RatFn::one();
        }
        let (num, den, k) = if k < 0 {
            (self.den.clone(), self.num.clone(), -k)
        } else {
            (self.num.clone(), self.den.clone(), k)
        };
        RatFn {
            num: num.pow(k as u32),
            den: den.pow(k as u32),
        }
    }

    /// GCD cancellation, denominator rationalization, and scale
    /// normalization (integer-primitive denominator with positive leading
    /// coefficient).
    fn cancel(&mut self) {
        if self.den.is_zero() || self.num.is_zero() {
            return;
        }
        if self.den.contains_i() {
            let (dr, di) = self.den.split_i();
            if !di.is_zero() {
                // Multiply through by the conjugate: den becomes dr^2 + di^2.
                let i = Poly::from_atom_pow(Expr::I, 1);
                let conj = dr.sub(&i.mul(&di));
                self.num = self.num.mul(&conj);
                self.den = dr.mul(&dr).add(&di.mul(&di));
            }
        }
        let g = if self.num.contains_i() {
            let (re, im) = self.num.split_i();
            gcd(&gcd(&re, &im), &self.den)
        } else {
            gcd(&self.num, &self.den)
        };
        if !g.is_one() {
            if let (Some(n), Some(d)) = (self.num.exact_div(&g), self.den.exact_div(&g)) {
                self.num = n;
                self.den = d;
            }
        }
        // Scale so the denominator is primitive with a positive lead.
        let prim = self.den.primitive();
        if prim != self.den {
            if let (Some((m1, c1)), Some((m2, c2))) = (self.den.leading(), prim.leading()) {
                debug_assert_eq!(m1, m2);
                let k = c1 / c2;
                self.num = self.num.scale(&k.recip());
                self.den = prim.clone();
            }
        }
        if self.den.is_one() && self.num.is_zero() {
            self.num = Poly::zero();
        }
    }

    pub(crate) fn into_expr(mut self) -> Expr {
        self.cancel();
        if self.den.is_zero() {
            // 0^-1 is the single "undefined" marker this layer can emit.
            return Expr::power(Expr::zero(), Expr::int(-1));
        }
        if self.num.is_zero() {
            return Expr::zero();
        }
        let num_e = poly_to_expr(&self.num);
        if self.den.is_one() {
            return num_e;
        }
        let den_e = poly_to_expr(&self.den);
        Expr::product(vec![num_e, Expr::power(den_e, Expr::int(-1))])
    }

    pub(crate) fn from_expr(e: &Expr, a: &AssumptionSet) -> RatFn {
        match e {
            Expr::Rational(r) => RatFn::from_poly(Poly::from_rational(r.clone())),
            Expr::I => RatFn::atom(Expr::I),
            Expr::Symbol(_) | Expr::Opaque(_) => RatFn::atom(e.clone()),
            Expr::Sum(ts) => {
                let mut acc = RatFn::from_poly(Poly::zero());
                for t in ts {
                    acc = acc.add(&RatFn::from_expr(t, a));
                }
                acc
            }
            Expr::Product(fs) => {
                let mut acc = RatFn::one();
                for f in fs {
                    acc = acc.mul(&RatFn::from_expr(f, a));
                }
                acc
            }
            Expr::Power(b, ex) => {
                let ex_s = ex.simplify(a);
                if let Some(q) = ex_s.as_rational().cloned() {
                    if q.is_integer() {
                        if let Some(k) = q.to_i64().filter(|k| k.unsigned_abs() <= 4096) {
                            return RatFn::from_expr(b, a).powi(k);
                        }
                        // Astronomical exponent: keep the power opaque.
                        return RatFn::atom(Expr::Power(
                            Box::new(b.simplify(a)),
                            Box::new(ex_s),
                        ));
                    } else {
                        let n = q.floor().to_integer();
                        let f = &q - BigRational::from_integer(n.clone());
                        let base_s = b.simplify(a);
                        let int_part = match n.to_i64() {
                            Some(k) if k != 0 => RatFn::from_expr(&base_s, a).powi(k),
                            _ => RatFn::one(),
                        };
                        return int_part.mul(&root_part(&base_s, &f, a));
                    }
                }
                // Symbolic exponent: the whole power is one atom.
                let base_s = b.simplify(a);
                let p = Expr::power(base_s, ex_s);
                match &p {
                    Expr::Power(_, pe) if pe.as_rational().is_none() => RatFn::atom(p.clone()),
                    _ => RatFn::from_expr(&p, a),
                }
            }
            Expr::Fn(kind, arg) => fn_to_ratfn(*kind, arg.simplify(a), a),
        }
    }
}

/// `base^f` for fractional `0 < f < 1`: extract factors whose resulting
/// exponent is an integer (even powers always; odd powers only under a
/// positivity proof), leave the rest under the root as one atom.
fn root_part(base: &Expr, f: &BigRational, a: &AssumptionSet) -> RatFn {
    let factors: Vec<Expr> = match base {
        Expr::Product(fs) => fs.clone(),
        other => vec![other.clone()],
    };
    let mut out = RatFn::one();
    let mut residue: Vec<Expr> = Vec::new();
    for fac in factors {
        match fac {
            Expr::Rational(c) => match fold_rational_power(&c, f) {
                Some(folded) => out = out.mul(&ratfn_of_folded(&folded)),
                None => residue.push(Expr::Rational(c)),
            },
            other => {
                let (fbase, fexp) = match &other {
                    Expr::Power(b, e) => ((**b).clone(), (**e).clone()),
                    _ => (other.clone(), Expr::one()),
                };
                let Some(m) = fexp.as_rational() else {
                    residue.push(other);
                    continue;
                };
                let q_full = m * f;
                if q_full.is_integer() {
                    match q_full.to_integer().to_i64() {
                        Some(k) if k % 2 == 0 || is_positive(&fbase, a) => {
                            out = out.mul(&RatFn::from_expr(&fbase, a).powi(k));
                        }
                        _ => residue.push(other),
                    }
                    continue;
                }
                // Mixed case like x^3 under a square root: peel off the
                // integer part of the resulting exponent, but only for bases
                // proved positive (otherwise branch cuts interfere).
                let n = q_full.floor().to_integer();
                match n.to_i64() {
                    Some(k) if k != 0 && is_positive(&fbase, a) => {
                        out = out.mul(&RatFn::from_expr(&fbase, a).powi(k));
                        let frac = q_full - BigRational::from_integer(BigInt::from(k));
                        let m_res = frac / f;
                        residue.push(Expr::power(fbase, Expr::Rational(m_res)));
                    }
                    _ => residue.push(other),
                }
            }
        }
    }
    if !residue.is_empty() {
        let inner = Expr::product(residue);
        if inner.is_one() {
            return out;
        }
        let atom = Expr::Power(Box::new(inner), Box::new(Expr::Rational(f.clone())));
        out = out.mul(&RatFn::atom(atom));
    }
    out
}

/// Converts the output of [`fold_rational_power`] (rationals, `I`, surd
/// atoms, and products thereof) without re-entering `from_expr`.
fn ratfn_of_folded(e: &Expr) -> RatFn {
    match e {
        Expr::Rational(r) => RatFn::from_poly(Poly::from_rational(r.clone())),
        Expr::I => RatFn::atom(Expr::I),
        Expr::Product(fs) => {
            let mut acc = RatFn::one();
            for f in fs {
                acc = acc.mul(&ratfn_of_folded(f));
            }
            acc
        }
        Expr::Power(b, q) => match q.as_rational() {
            Some(q) if q.is_negative() => {
                let pos = Expr::Power(b.clone(), Box::new(Expr::Rational(-q.clone())));
                RatFn {
                    num: Poly::one(),
                    den: Poly::from_atom_pow(pos, 1),
                }
            }
            _ => RatFn::atom(e.clone()),
        },
        other => RatFn::atom(other.clone()),
    }
}

/// Sign of the leading term, used to normalize function arguments
/// (`sin(-u) -> -sin(u)`).
fn leading_is_negative(e: &Expr) -> bool {
    match e {
        Expr::Rational(r) => r.is_negative(),
        Expr::Product(fs) => matches!(fs.first(), Some(Expr::Rational(r)) if r.is_negative()),
        Expr::Sum(ts) => ts.first().map(leading_is_negative).unwrap_or(false),
        _ => false,
    }
}

/// Rational coefficient of one canonical term.
fn term_coeff(e: &Expr) -> BigRational {
    match e {
        Expr::Rational(r) => r.clone(),
        Expr::Product(fs) => match fs.first() {
            Some(Expr::Rational(r)) => r.clone(),
            _ => BigRational::one(),
        },
        _ => BigRational::one(),
    }
}

/// GCD of the rational coefficients of all terms; 0 for the zero expression.
fn rational_content(e: &Expr) -> BigRational {
    let terms: Vec<&Expr> = match e {
        Expr::Sum(ts) => ts.iter().collect(),
        other => vec![other],
    };
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for t in terms {
        let c = term_coeff(t);
        num_gcd = num_gcd.gcd(c.numer());
        den_lcm = den_lcm.lcm(c.denom());
    }
    if num_gcd.is_zero() {
        BigRational::zero()
    } else {
        BigRational::new(num_gcd, den_lcm)
    }
}

/// Whether a double-angle halving applies: the argument's rational content
/// has an even numerator (and the argument is not a bare constant).
fn has_even_content(arg: &Expr) -> bool {
    if arg.as_rational().is_some() {
        return false;
    }
    let c = rational_content(arg);
    !c.is_zero() && c.numer().is_even()
}

fn fn_to_ratfn(kind: FnKind, arg: Expr, a: &AssumptionSet) -> RatFn {
    use FnKind::*;
    // Reciprocal and ratio functions fold into the four-function basis.
    match kind {
        Tan => {
            return fn_to_ratfn(Sin, arg.clone(), a).mul(&fn_to_ratfn(Cos, arg, a).powi(-1));
        }
        Cot => {
            return fn_to_ratfn(Cos, arg.clone(), a).mul(&fn_to_ratfn(Sin, arg, a).powi(-1));
        }
        Sec => return fn_to_ratfn(Cos, arg, a).powi(-1),
        Csc => return fn_to_ratfn(Sin, arg, a).powi(-1),
        Tanh => {
            return fn_to_ratfn(Sinh, arg.clone(), a).mul(&fn_to_ratfn(Cosh, arg, a).powi(-1));
        }
        Coth => {
            return fn_to_ratfn(Cosh, arg.clone(), a).mul(&fn_to_ratfn(Sinh, arg, a).powi(-1));
        }
        Sech => return fn_to_ratfn(Cosh, arg, a).powi(-1),
        Csch => return fn_to_ratfn(Sinh, arg, a).powi(-1),
        Sqrt => return RatFn::from_expr(&Expr::power(arg, Expr::rational(1, 2)), a),
        _ => {}
    }

    // Argument sign normalization. The negated argument is renormalized so
    // the stored atom is canonical (a bare `neg` would leave an
    // undistributed -1 wrapper and break simplify idempotence).
    let original = arg.clone();
    let (arg, flip) = if leading_is_negative(&arg) {
        (arg.neg().simplify(a), true)
    } else {
        (arg, false)
    };
    let odd = matches!(kind, Sin | Sinh);
    let sign = if flip && odd { -1i64 } else { 1 };

    // Double-angle halving for the four basis functions; the halved
    // argument is renormalized for the same reason as above.
    let halved = if matches!(kind, Sin | Cos | Sinh | Cosh) && has_even_content(&arg) {
        Some(Expr::product(vec![Expr::rational(1, 2), arg.clone()]).simplify(a))
    } else {
        None
    };
    let core = match (kind, halved) {
        (Sin, Some(u)) => {
            // sin 2u = 2 sin u cos u
            RatFn::from_poly(Poly::from_rational(BigRational::from_integer(BigInt::from(2))))
                .mul(&fn_to_ratfn(Sin, u.clone(), a))
                .mul(&fn_to_ratfn(Cos, u, a))
        }
        (Cos, Some(u)) => {
            // cos 2u = 1 - 2 sin^2 u
            let s = fn_to_ratfn(Sin, u, a);
            let two = RatFn::from_poly(Poly::from_rational(BigRational::from_integer(
                BigInt::from(2),
            )));
            RatFn::one().add(&two.mul(&s).mul(&s).neg_ratfn())
        }
        (Sinh, Some(u)) => {
            // sinh 2u = 2 sinh u cosh u
            RatFn::from_poly(Poly::from_rational(BigRational::from_integer(BigInt::from(2))))
                .mul(&fn_to_ratfn(Sinh, u.clone(), a))
                .mul(&fn_to_ratfn(Cosh, u, a))
        }
        (Cosh, Some(u)) => {
            // cosh 2u = 2 cosh^2 u - 1
            let c = fn_to_ratfn(Cosh, u, a);
            let two = RatFn::from_poly(Poly::from_rational(BigRational::from_integer(
                BigInt::from(2),
            )));
            two.mul(&c).mul(&c).add(&RatFn::one().neg_ratfn())
        }
        (k @ (Sin | Cos | Sinh | Cosh | Exp | Log), None) => {
            // Exp/Log keep their original argument sign.
            let stored = if matches!(k, Exp | Log) && flip {
                original.clone()
            } else {
                arg.clone()
            };
            RatFn::atom(Expr::Fn(k, Box::new(stored)))
        }
        (k, None) => RatFn::atom(Expr::Fn(k, Box::new(arg.clone()))),
        _ => unreachable!(),
    };
    if sign < 0 {
        core.neg_ratfn()
    } else {
        core
    }
}

impl RatFn {
    fn neg_ratfn(&self) -> RatFn {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

/// Rebuilds a polynomial as an expression, factoring out the rational
/// content and the common monomial so quotients print in the familiar
/// `-6*M*(2*M - r)/r^5` shape.
pub(crate) fn poly_to_expr(p: &Poly) -> Expr {
    if p.is_zero() {
        return Expr::zero();
    }
    if p.0.len() == 1 {
        let (m, c) = p.0.iter().next().unwrap();
        return term_expr(m, c);
    }
    // Common monomial: per-atom minimum exponent.
    let mut common: Option<std::collections::BTreeMap<Expr, u32>> = None;
    for m in p.0.keys() {
        common = Some(match common {
            None => m.0.clone(),
            Some(mut acc) => {
                acc.retain(|atom, e| {
                    if let Some(&me) = m.0.get(atom) {
                        *e = (*e).min(me);
                        true
                    } else {
                        false
                    }
                });
                acc
            }
        });
    }
    let common = Mono(common.unwrap_or_default());
    let mut content = p.content_rational();
    if p.leading().unwrap().1.is_negative() {
        content = -content;
    }
    let unit_content = content.is_one() || (-&content).is_one();
    if common.is_one() && unit_content {
        // Nothing worth pulling out; emit the plain sum.
        let terms = p.0.iter().map(|(m, c)| term_expr(m, c)).collect();
        return Expr::sum(terms);
    }
    let mut terms = Vec::with_capacity(p.0.len());
    for (m, c) in &p.0 {
        let reduced = common.quotient_into(m);
        terms.push(term_expr(&reduced, &(c / &content)));
    }
    let inner = Expr::sum(terms);
    let mut outer = vec![inner];
    if !content.is_one() {
        outer.push(Expr::Rational(content));
    }
    if !common.is_one() {
        outer.push(mono_expr(&common));
    }
    Expr::product(outer)
}

fn mono_expr(m: &Mono) -> Expr {
    Expr::product(
        m.0.iter()
            .map(|(atom, &e)| Expr::power(atom.clone(), Expr::int(i64::from(e))))
            .collect(),
    )
}

fn term_expr(m: &Mono, c: &BigRational) -> Expr {
    let mut fs = Vec::with_capacity(m.0.len() + 1);
    if !c.is_one() {
        fs.push(Expr::Rational(c.clone()));
    }
    for (atom, &e) in &m.0 {
        fs.push(Expr::power(atom.clone(), Expr::int(i64::from(e))));
    }
    Expr::product(fs)
}
