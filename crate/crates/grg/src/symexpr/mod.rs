//! Symbolic expression kernel.
//!
//! Expressions are immutable trees over exact rationals, symbols, the
//! imaginary unit, n-ary sums and products, powers, a closed set of known
//! functions, and opaque functions carrying per-argument derivative orders
//! (`f^(2,0,1)[r,u,v]`).
//!
//! Construction goes through smart constructors (`Expr::sum`, `Expr::product`,
//! `Expr::power`, ...) which keep trees in a cheap canonical form: flattened
//! and sorted operands, merged rational constants, `I^2 -> -1`, zero
//! annihilation and unit elision, like terms and like factors combined.
//! Structural equality of canonical trees is the basis for cache keys and
//! term merging.
//!
//! The heavier [`Expr::simplify`] pass (rational-function normal form with
//! polynomial GCD cancellation and Pythagorean/hyperbolic reduction) lives in
//! [`nf`], differentiation in [`diff`], numeric probing in [`numeric`], and
//! the randomized equivalence oracle in [`equiv`].

mod assume;
mod diff;
mod equiv;
pub(crate) mod nf;
mod numeric;
mod parse;
pub(crate) mod poly;
mod print;

pub use assume::{AssumptionSet, Interval};
pub use equiv::{equivalent, equivalent_with, EquivOptions, Equivalence, DEFAULT_SEED};
pub use nf::{is_negative, is_positive};
pub use numeric::{eval_complex, eval_real, EvalError, OpaqueProbe, ProbeSet};
pub use parse::{parse, ParseError};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// Interned symbol name. Cheap to clone, ordered by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

/// The closed set of known scalar functions.
///
/// Every kind has a differentiation rule and a numeric evaluation rule.
/// `Sqrt` is accepted on input but canonicalized to `Power(x, 1/2)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FnKind {
    Sin,
    Cos,
    Tan,
    Cot,
    Sec,
    Csc,
    Sinh,
    Cosh,
    Tanh,
    Coth,
    Sech,
    Csch,
    Exp,
    Log,
    Sqrt,
}

impl FnKind {
    pub fn name(self) -> &'static str {
        match self {
            FnKind::Sin => "Sin",
            FnKind::Cos => "Cos",
            FnKind::Tan => "Tan",
            FnKind::Cot => "Cot",
            FnKind::Sec => "Sec",
            FnKind::Csc => "Csc",
            FnKind::Sinh => "Sinh",
            FnKind::Cosh => "Cosh",
            FnKind::Tanh => "Tanh",
            FnKind::Coth => "Coth",
            FnKind::Sech => "Sech",
            FnKind::Csch => "Csch",
            FnKind::Exp => "Exp",
            FnKind::Log => "Log",
            FnKind::Sqrt => "Sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<FnKind> {
        let kind = match name.to_ascii_lowercase().as_str() {
            "sin" => FnKind::Sin,
            "cos" => FnKind::Cos,
            "tan" => FnKind::Tan,
            "cot" => FnKind::Cot,
            "sec" => FnKind::Sec,
            "csc" => FnKind::Csc,
            "sinh" => FnKind::Sinh,
            "cosh" => FnKind::Cosh,
            "tanh" => FnKind::Tanh,
            "coth" => FnKind::Coth,
            "sech" => FnKind::Sech,
            "csch" => FnKind::Csch,
            "exp" => FnKind::Exp,
            "log" => FnKind::Log,
            "sqrt" => FnKind::Sqrt,
            _ => return None,
        };
        Some(kind)
    }
}

/// Opaque function application: a named function of the listed coordinate
/// symbols, differentiated `orders[k]` times with respect to `args[k]`.
/// Mixed partials commute, so the order vector is the whole derivative record.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OpaqueFn {
    pub name: Symbol,
    pub args: Vec<Symbol>,
    pub orders: Vec<u32>,
}

/// Immutable symbolic expression tree.
///
/// Variant declaration order is the canonical sort order used for operand
/// vectors (rational coefficients first, `I` last).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Expr {
    Rational(BigRational),
    Symbol(Symbol),
    Fn(FnKind, Box<Expr>),
    Opaque(OpaqueFn),
    Power(Box<Expr>, Box<Expr>),
    Product(Vec<Expr>),
    Sum(Vec<Expr>),
    I,
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::Rational(BigRational::zero())
    }

    pub fn one() -> Expr {
        Expr::Rational(BigRational::one())
    }

    pub fn int(n: i64) -> Expr {
        Expr::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn rational(p: i64, q: i64) -> Expr {
        assert!(q != 0, "rational with zero denominator");
        Expr::Rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn sym(name: &str) -> Expr {
        Expr::Symbol(Symbol::new(name))
    }

    pub fn opaque(name: &str, args: &[&str]) -> Expr {
        Expr::Opaque(OpaqueFn {
            name: Symbol::new(name),
            args: args.iter().map(|a| Symbol::new(a)).collect(),
            orders: vec![0; args.len()],
        })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Rational(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Expr::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Expr::Rational(r) if r.is_integer() => Some(r.numer().clone()),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|n| n.to_i64())
    }

    /// n-ary sum with cheap canonicalization: flattening, constant folding,
    /// like-term merging keyed on the non-constant core of each term.
    pub fn sum(terms: Vec<Expr>) -> Expr {
        let mut constant = BigRational::zero();
        let mut cores: BTreeMap<Expr, BigRational> = BTreeMap::new();
        let mut stack = terms;
        stack.reverse();
        while let Some(t) = stack.pop() {
            match t {
                Expr::Sum(inner) => {
                    for e in inner.into_iter().rev() {
                        stack.push(e);
                    }
                }
                Expr::Rational(r) => constant += r,
                other => {
                    let (c, core) = other.into_coeff_core();
                    *cores.entry(core).or_insert_with(BigRational::zero) += c;
                }
            }
        }
        let mut out = Vec::with_capacity(cores.len() + 1);
        if !constant.is_zero() {
            out.push(Expr::Rational(constant));
        }
        for (core, coeff) in cores {
            if coeff.is_zero() {
                continue;
            }
            out.push(Expr::apply_coeff(coeff, core));
        }
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => Expr::Sum(out),
        }
    }

    /// n-ary product with cheap canonicalization: flattening, rational and
    /// `I` folding, like-base exponent merging, zero annihilation.
    pub fn product(factors: Vec<Expr>) -> Expr {
        // Merging can itself produce rationals or nested products
        // (e.g. x^(1/2) * x^(1/2) -> x), so iterate to a fixed point.
        let mut pending = factors;
        for _ in 0..16 {
            let mut coeff = BigRational::one();
            let mut i_parity = 0u32;
            let mut bases: BTreeMap<Expr, Vec<Expr>> = BTreeMap::new();
            let mut stack = pending;
            stack.reverse();
            while let Some(f) = stack.pop() {
                match f {
                    Expr::Product(inner) => {
                        for e in inner.into_iter().rev() {
                            stack.push(e);
                        }
                    }
                    Expr::Rational(r) => {
                        if r.is_zero() {
                            return Expr::zero();
                        }
                        coeff *= r;
                    }
                    Expr::I => i_parity += 1,
                    other => {
                        let (base, exp) = other.into_base_exp();
                        bases.entry(base).or_default().push(exp);
                    }
                }
            }
            // I^2 = -1, I^3 = -I, I^4 = 1.
            if matches!(i_parity % 4, 2 | 3) {
                coeff = -coeff;
            }
            let keep_i = i_parity % 2 == 1;

            let mut rebuilt: Vec<Expr> = Vec::new();
            let mut needs_repass = false;
            for (base, exps) in bases {
                let exp = Expr::sum(exps);
                let merged = Expr::power(base, exp);
                match merged {
                    Expr::Rational(_) | Expr::Product(_) | Expr::I => {
                        needs_repass = true;
                        rebuilt.push(merged);
                    }
                    e if e.is_one() => {}
                    e => rebuilt.push(e),
                }
            }
            if keep_i {
                rebuilt.push(Expr::I);
            }
            if needs_repass {
                if !coeff.is_one() {
                    rebuilt.push(Expr::Rational(coeff));
                }
                pending = rebuilt;
                continue;
            }
            rebuilt.sort();
            if !coeff.is_one() {
                rebuilt.insert(0, Expr::Rational(coeff));
            }
            return match rebuilt.len() {
                0 => Expr::one(),
                1 => rebuilt.pop().unwrap(),
                _ => Expr::Product(rebuilt),
            };
        }
        unreachable!("product canonicalization failed to stabilize");
    }

    /// Power with cheap canonicalization: `x^0 -> 1`, `x^1 -> x`, rational
    /// folding with exact and partial root extraction, `I^n` reduction,
    /// `(b^e)^k -> b^(e k)` for integer `k`.
    pub fn power(base: Expr, exp: Expr) -> Expr {
        if exp.is_zero() {
            return Expr::one();
        }
        if exp.is_one() {
            return base;
        }
        if base.is_one() {
            return Expr::one();
        }
        if let (Some(b), Some(e)) = (base.as_rational(), exp.as_rational()) {
            if let Some(folded) = fold_rational_power(b, e) {
                return folded;
            }
        }
        if base == Expr::I {
            if let Some(n) = exp.as_integer() {
                let four = BigInt::from(4);
                let m = ((n % &four + &four) % &four).to_i64().unwrap();
                return match m {
                    0 => Expr::one(),
                    1 => Expr::I,
                    2 => Expr::int(-1),
                    _ => Expr::product(vec![Expr::int(-1), Expr::I]),
                };
            }
        }
        // Integer outer exponents distribute over products and compose with
        // inner exponents; both hold for principal powers of any base.
        if exp.as_integer().is_some() {
            match base {
                Expr::Power(b2, e2) => {
                    let merged = Expr::product(vec![*e2, exp]);
                    return Expr::power(*b2, merged);
                }
                Expr::Product(fs) => {
                    return Expr::product(
                        fs.into_iter()
                            .map(|f| Expr::power(f, exp.clone()))
                            .collect(),
                    );
                }
                _ => {}
            }
        }
        Expr::Power(Box::new(base), Box::new(exp))
    }

    /// Known-function application; folds exact values at 0 and 1 and
    /// rewrites `Sqrt` into a half-integer power.
    pub fn fun(kind: FnKind, arg: Expr) -> Expr {
        if kind == FnKind::Sqrt {
            return Expr::power(arg, Expr::rational(1, 2));
        }
        if arg.is_zero() {
            match kind {
                FnKind::Sin | FnKind::Tan | FnKind::Sinh | FnKind::Tanh => return Expr::zero(),
                FnKind::Cos | FnKind::Cosh | FnKind::Sech | FnKind::Sec => return Expr::one(),
                FnKind::Exp => return Expr::one(),
                _ => {}
            }
        }
        if arg.is_one() && kind == FnKind::Log {
            return Expr::zero();
        }
        Expr::Fn(kind, Box::new(arg))
    }

    /// Reciprocal.
    pub fn recip(self) -> Expr {
        Expr::power(self, Expr::int(-1))
    }

    /// Splits a canonical term into (rational coefficient, non-constant core).
    /// The core of a pure rational is 1.
    fn into_coeff_core(self) -> (BigRational, Expr) {
        match self {
            Expr::Rational(r) => (r, Expr::one()),
            Expr::Product(fs) => {
                if let Some(Expr::Rational(_)) = fs.first() {
                    let mut it = fs.into_iter();
                    let c = match it.next() {
                        Some(Expr::Rational(r)) => r,
                        _ => unreachable!(),
                    };
                    let rest: Vec<Expr> = it.collect();
                    let core = if rest.len() == 1 {
                        rest.into_iter().next().unwrap()
                    } else {
                        Expr::Product(rest)
                    };
                    (c, core)
                } else {
                    (BigRational::one(), Expr::Product(fs))
                }
            }
            other => (BigRational::one(), other),
        }
    }

    fn apply_coeff(coeff: BigRational, core: Expr) -> Expr {
        if core.is_one() {
            return Expr::Rational(coeff);
        }
        if coeff.is_one() {
            return core;
        }
        match core {
            Expr::Product(mut fs) => {
                fs.insert(0, Expr::Rational(coeff));
                Expr::Product(fs)
            }
            other => Expr::Product(vec![Expr::Rational(coeff), other]),
        }
    }

    /// Splits into (base, exponent); non-powers have exponent 1.
    fn into_base_exp(self) -> (Expr, Expr) {
        match self {
            Expr::Power(b, e) => (*b, *e),
            other => (other, Expr::one()),
        }
    }

    /// Free symbols, including the coordinate arguments of opaque functions
    /// (but not the opaque function names themselves).
    pub fn free_symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Expr::Rational(_) | Expr::I => {}
            Expr::Symbol(s) => {
                out.insert(s.clone());
            }
            Expr::Fn(_, a) => a.collect_symbols(out),
            Expr::Opaque(o) => {
                for a in &o.args {
                    out.insert(a.clone());
                }
            }
            Expr::Power(b, e) => {
                b.collect_symbols(out);
                e.collect_symbols(out);
            }
            Expr::Product(es) | Expr::Sum(es) => {
                for e in es {
                    e.collect_symbols(out);
                }
            }
        }
    }

    /// True if any opaque function application occurs in the tree.
    pub fn has_opaque(&self) -> bool {
        match self {
            Expr::Rational(_) | Expr::I | Expr::Symbol(_) => false,
            Expr::Opaque(_) => true,
            Expr::Fn(_, a) => a.has_opaque(),
            Expr::Power(b, e) => b.has_opaque() || e.has_opaque(),
            Expr::Product(es) | Expr::Sum(es) => es.iter().any(Expr::has_opaque),
        }
    }

    /// Names of opaque functions occurring in the tree.
    pub fn opaque_names(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_opaque(&mut out);
        out
    }

    fn collect_opaque(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Expr::Rational(_) | Expr::I | Expr::Symbol(_) => {}
            Expr::Opaque(o) => {
                out.insert(o.name.clone());
            }
            Expr::Fn(_, a) => a.collect_opaque(out),
            Expr::Power(b, e) => {
                b.collect_opaque(out);
                e.collect_opaque(out);
            }
            Expr::Product(es) | Expr::Sum(es) => {
                for e in es {
                    e.collect_opaque(out);
                }
            }
        }
    }

    /// Simultaneous substitution of symbols, then cheap re-canonicalization.
    ///
    /// A symbol appearing as an opaque-function argument is renamed only when
    /// its replacement is itself a symbol; other replacements leave the
    /// argument in place (opaque functions stay tied to coordinates).
    pub fn substitute(&self, bindings: &BTreeMap<Symbol, Expr>) -> Expr {
        match self {
            Expr::Rational(_) | Expr::I => self.clone(),
            Expr::Symbol(s) => bindings.get(s).cloned().unwrap_or_else(|| self.clone()),
            Expr::Fn(k, a) => Expr::fun(*k, a.substitute(bindings)),
            Expr::Opaque(o) => {
                let args = o
                    .args
                    .iter()
                    .map(|a| match bindings.get(a) {
                        Some(Expr::Symbol(s)) => s.clone(),
                        _ => a.clone(),
                    })
                    .collect();
                Expr::Opaque(OpaqueFn {
                    name: o.name.clone(),
                    args,
                    orders: o.orders.clone(),
                })
            }
            Expr::Power(b, e) => Expr::power(b.substitute(bindings), e.substitute(bindings)),
            Expr::Product(es) => {
                Expr::product(es.iter().map(|e| e.substitute(bindings)).collect())
            }
            Expr::Sum(es) => Expr::sum(es.iter().map(|e| e.substitute(bindings)).collect()),
        }
    }

    /// Node count, used as a size heuristic in tests and diagnostics.
    pub fn size(&self) -> usize {
        match self {
            Expr::Rational(_) | Expr::I | Expr::Symbol(_) | Expr::Opaque(_) => 1,
            Expr::Fn(_, a) => 1 + a.size(),
            Expr::Power(b, e) => 1 + b.size() + e.size(),
            Expr::Product(es) | Expr::Sum(es) => 1 + es.iter().map(Expr::size).sum::<usize>(),
        }
    }
}

/// Folds `b^e` for rational base and exponent. Returns `None` when the value
/// must stay symbolic (irrational roots keep a residual surd, `0^-n` stays
/// unevaluated).
pub(crate) fn fold_rational_power(b: &BigRational, e: &BigRational) -> Option<Expr> {
    if e.is_integer() {
        if b.is_zero() {
            return if e.numer().is_positive() {
                Some(Expr::zero())
            } else {
                None // 0^-n stays symbolic; numeric eval reports it as singular
            };
        }
        let k = e.numer().to_i64()?;
        if k.unsigned_abs() > 4096 {
            return None;
        }
        let mut r = BigRational::one();
        let babs = if k >= 0 { b.clone() } else { b.recip() };
        for _ in 0..k.unsigned_abs() {
            r *= &babs;
        }
        return Some(Expr::Rational(r));
    }
    // Half-integer exponents: extract the largest perfect-square factor, so
    // sqrt(8) -> 2*sqrt(2) and sqrt(-4) -> 2*I.
    if *e.denom() != BigInt::from(2) {
        return None;
    }
    if b.is_zero() {
        return Some(Expr::zero());
    }
    if b.is_negative() {
        let pos = -b.clone();
        let inner = fold_rational_power(&pos, e).unwrap_or_else(|| {
            Expr::Power(
                Box::new(Expr::Rational(pos)),
                Box::new(Expr::Rational(e.clone())),
            )
        });
        return Some(Expr::product(vec![Expr::I, inner]));
    }
    let k = e.numer().to_i64()?; // odd: e is in lowest terms with denominator 2
    let (sn, rn) = square_part(b.numer().magnitude());
    let (sd, rd) = square_part(b.denom().magnitude());
    let sq = BigRational::new(sn, sd);
    let residue = BigRational::new(rn, rd);
    if residue.is_one() {
        // b is a perfect square: b^(k/2) = sq^k exactly.
        return fold_rational_power(&sq, &BigRational::from_integer(BigInt::from(k)));
    }
    if sq.is_one() {
        return None; // already in lowest surd form
    }
    match k {
        1 => {
            let surd = Expr::Power(
                Box::new(Expr::Rational(residue)),
                Box::new(Expr::rational(1, 2)),
            );
            Some(Expr::product(vec![Expr::Rational(sq), surd]))
        }
        -1 => {
            let surd = Expr::Power(
                Box::new(Expr::Rational(residue)),
                Box::new(Expr::rational(-1, 2)),
            );
            Some(Expr::product(vec![Expr::Rational(sq.recip()), surd]))
        }
        _ => None,
    }
}

/// Splits `n` into `(s, r)` with `n = s^2 * r` and `r` square-free as far as
/// trial division up to 10^3 can tell.
fn square_part(n: &num_bigint::BigUint) -> (BigInt, BigInt) {
    use num_traits::FromPrimitive;
    let mut s = BigInt::one();
    let mut r: BigInt = BigInt::from_biguint(num_bigint::Sign::Plus, n.clone());
    // Exact perfect-square check first.
    let root = r.sqrt();
    if &root * &root == r {
        return (root, BigInt::one());
    }
    let mut d = 2u64;
    while d <= 1000 {
        let dd = BigInt::from_u64(d * d).unwrap();
        while (&r % &dd).is_zero() {
            r /= &dd;
            s *= BigInt::from_u64(d).unwrap();
        }
        d += 1;
    }
    (s, r)
}

// Operator sugar for building expressions in code and tests.
impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::sum(vec![self, rhs])
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sum(vec![self, -rhs])
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::product(vec![self, rhs])
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::product(vec![self, rhs.recip()])
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::product(vec![Expr::int(-1), self])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_merges_like_terms() {
        let y = Expr::sym("y");
        let e = Expr::sum(vec![y.clone(), y.clone()]);
        assert_eq!(e, Expr::product(vec![Expr::int(2), y]));
    }

    #[test]
    fn product_folds_imaginary_unit() {
        let e = Expr::product(vec![Expr::I, Expr::I]);
        assert_eq!(e, Expr::int(-1));
        let e3 = Expr::product(vec![Expr::I, Expr::I, Expr::I]);
        assert_eq!(e3, Expr::product(vec![Expr::int(-1), Expr::I]));
        let e4 = Expr::product(vec![Expr::I; 4]);
        assert_eq!(e4, Expr::one());
    }

    #[test]
    fn power_merges_integer_exponents() {
        let x = Expr::sym("x");
        let sq = Expr::power(x.clone(), Expr::rational(1, 2));
        let back = Expr::power(sq, Expr::int(2));
        assert_eq!(back, x);
    }

    #[test]
    fn zero_annihilates_products() {
        let e = Expr::product(vec![Expr::zero(), Expr::sym("x")]);
        assert!(e.is_zero());
    }

    #[test]
    fn x_over_x_cancels_structurally() {
        let x = Expr::sym("x");
        let e = x.clone() / x;
        assert!(e.is_one());
    }

    #[test]
    fn sqrt_of_negative_rational_pulls_out_i() {
        let e = Expr::fun(FnKind::Sqrt, Expr::int(-4));
        assert_eq!(e, Expr::product(vec![Expr::int(2), Expr::I]));
    }

    #[test]
    fn sqrt_extracts_square_part() {
        let e = Expr::fun(FnKind::Sqrt, Expr::int(8));
        let expected = Expr::product(vec![
            Expr::int(2),
            Expr::Power(Box::new(Expr::int(2)), Box::new(Expr::rational(1, 2))),
        ]);
        assert_eq!(e, expected);
    }

    #[test]
    fn substitute_merges_terms() {
        let x = Expr::sym("x");
        let y = Expr::sym("y");
        let e = x.clone() + y.clone();
        let mut b = BTreeMap::new();
        b.insert(Symbol::new("x"), y.clone());
        assert_eq!(e.substitute(&b), Expr::product(vec![Expr::int(2), y]));
    }

    #[test]
    fn substitute_rational_point() {
        let m = Expr::sym("M");
        let r = Expr::sym("r");
        let e = m.clone() / Expr::power(r, Expr::int(3));
        let mut b = BTreeMap::new();
        b.insert(Symbol::new("r"), Expr::int(2));
        assert_eq!(e.substitute(&b), Expr::product(vec![Expr::rational(1, 8), m]));
    }
}
