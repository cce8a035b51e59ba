//! Floating-point evaluation of expression trees.
//!
//! Evaluation is complex-valued throughout (`I` is first-class); a real
//! projection is provided for callers that need it. Opaque functions are
//! evaluated through probes: smooth stand-in functions whose partial
//! derivatives of every order are known in closed form, so a tree mentioning
//! `f^(2,0,1)[r,u,v]` can still be probed numerically.

use super::{Expr, FnKind, Symbol};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    /// Free symbol with no binding.
    Unbound(String),
    /// Division by zero, log of zero, or a non-finite intermediate result.
    Singular,
    /// Result (or binding context) is not real where a real value is needed.
    NotReal,
    /// Opaque function with no registered probe, or probe arity mismatch.
    Probe(String),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Unbound(s) => write!(f, "unbound symbol `{s}`"),
            EvalError::Singular => write!(f, "singular point"),
            EvalError::NotReal => write!(f, "result is not real"),
            EvalError::Probe(s) => write!(f, "opaque function `{s}` has no usable probe"),
        }
    }
}

impl std::error::Error for EvalError {}

/// Stand-in for one opaque function: `amp * sin(offset + sum c_k x_k)`.
/// Every mixed partial is the same sinusoid phase-shifted by a quarter turn
/// per derivative and scaled by the matching coefficients.
#[derive(Clone, Debug)]
pub struct OpaqueProbe {
    pub offset: f64,
    pub coeffs: Vec<f64>,
}

impl OpaqueProbe {
    pub fn eval(&self, orders: &[u32], args: &[Complex64]) -> Result<Complex64, EvalError> {
        if orders.len() != self.coeffs.len() || args.len() != self.coeffs.len() {
            return Err(EvalError::Probe("arity mismatch".into()));
        }
        let mut amp = 1.0f64;
        let mut total_order = 0u32;
        let mut phase = Complex64::new(self.offset, 0.0);
        for ((&c, &o), &x) in self.coeffs.iter().zip(orders).zip(args) {
            amp *= c.powi(o as i32);
            total_order += o;
            phase += c * x;
        }
        phase += Complex64::new(f64::from(total_order) * FRAC_PI_2, 0.0);
        Ok(amp * phase.sin())
    }
}

/// Probes for all opaque functions appearing in an expression set.
#[derive(Clone, Debug, Default)]
pub struct ProbeSet {
    map: BTreeMap<Symbol, OpaqueProbe>,
}

impl ProbeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: Symbol, probe: OpaqueProbe) {
        self.map.insert(name, probe);
    }

    pub fn get(&self, name: &Symbol) -> Option<&OpaqueProbe> {
        self.map.get(name)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Complex evaluation with every free symbol bound (except `pi`).
pub fn eval_complex(
    e: &Expr,
    bindings: &BTreeMap<Symbol, Complex64>,
    probes: &ProbeSet,
) -> Result<Complex64, EvalError> {
    let v = eval_rec(e, bindings, probes)?;
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::Singular)
    }
}

/// Real evaluation: complex evaluation followed by a reality check.
pub fn eval_real(e: &Expr, bindings: &BTreeMap<Symbol, f64>) -> Result<f64, EvalError> {
    let cx: BTreeMap<Symbol, Complex64> = bindings
        .iter()
        .map(|(k, v)| (k.clone(), Complex64::new(*v, 0.0)))
        .collect();
    let v = eval_complex(e, &cx, &ProbeSet::new())?;
    if v.im.abs() <= 1e-9 * (1.0 + v.re.abs()) {
        Ok(v.re)
    } else {
        Err(EvalError::NotReal)
    }
}

fn eval_rec(
    e: &Expr,
    bindings: &BTreeMap<Symbol, Complex64>,
    probes: &ProbeSet,
) -> Result<Complex64, EvalError> {
    match e {
        Expr::Rational(r) => Ok(Complex64::new(rational_to_f64(r), 0.0)),
        Expr::I => Ok(Complex64::new(0.0, 1.0)),
        Expr::Symbol(s) => {
            if super::assume::is_constant_name(s) {
                return Ok(Complex64::new(PI, 0.0));
            }
            bindings
                .get(s)
                .copied()
                .ok_or_else(|| EvalError::Unbound(s.name().to_string()))
        }
        Expr::Sum(ts) => {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in ts {
                acc += eval_rec(t, bindings, probes)?;
            }
            Ok(acc)
        }
        Expr::Product(fs) => {
            let mut acc = Complex64::new(1.0, 0.0);
            for f in fs {
                acc *= eval_rec(f, bindings, probes)?;
            }
            Ok(acc)
        }
        Expr::Power(b, ex) => {
            let bv = eval_rec(b, bindings, probes)?;
            let ev = eval_rec(ex, bindings, probes)?;
            eval_power(bv, ev)
        }
        Expr::Fn(kind, arg) => {
            let a = eval_rec(arg, bindings, probes)?;
            eval_fn(*kind, a)
        }
        Expr::Opaque(o) => {
            let probe = probes
                .get(&o.name)
                .ok_or_else(|| EvalError::Probe(o.name.name().to_string()))?;
            let mut args = Vec::with_capacity(o.args.len());
            for a in &o.args {
                let v = bindings
                    .get(a)
                    .copied()
                    .ok_or_else(|| EvalError::Unbound(a.name().to_string()))?;
                args.push(v);
            }
            probe.eval(&o.orders, &args)
        }
    }
}

fn eval_power(b: Complex64, e: Complex64) -> Result<Complex64, EvalError> {
    if b.norm() == 0.0 {
        return if e.im == 0.0 && e.re > 0.0 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            Err(EvalError::Singular)
        };
    }
    // Integer exponents by repeated squaring keep exact reals real
    // (powc would route -2^2 through the complex log).
    if e.im == 0.0 && e.re.fract() == 0.0 && e.re.abs() <= 4096.0 {
        let mut k = e.re as i64;
        let mut base = b;
        if k < 0 {
            base = base.inv();
            k = -k;
        }
        let mut acc = Complex64::new(1.0, 0.0);
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc *= sq;
            }
            sq *= sq;
            k >>= 1;
        }
        return Ok(acc);
    }
    Ok(b.powc(e))
}

fn eval_fn(kind: FnKind, a: Complex64) -> Result<Complex64, EvalError> {
    let one = Complex64::new(1.0, 0.0);
    let v = match kind {
        FnKind::Sin => a.sin(),
        FnKind::Cos => a.cos(),
        FnKind::Tan => a.tan(),
        FnKind::Cot => one / a.tan(),
        FnKind::Sec => one / a.cos(),
        FnKind::Csc => one / a.sin(),
        FnKind::Sinh => a.sinh(),
        FnKind::Cosh => a.cosh(),
        FnKind::Tanh => a.tanh(),
        FnKind::Coth => one / a.tanh(),
        FnKind::Sech => one / a.cosh(),
        FnKind::Csch => one / a.sinh(),
        FnKind::Exp => a.exp(),
        FnKind::Log => {
            if a.norm() == 0.0 {
                return Err(EvalError::Singular);
            }
            a.ln()
        }
        FnKind::Sqrt => a.sqrt(),
    };
    Ok(v)
}
