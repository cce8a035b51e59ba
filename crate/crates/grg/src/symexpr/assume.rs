//! Symbol domain assumptions.
//!
//! An [`AssumptionSet`] maps symbols to open intervals, parsed from
//! inequality strings such as `"0 < r"`, `"M > 0"`, `"0 < theta < pi"`, or
//! `"r > 2*M"`. Bounds are expressions: they may mention other assumed
//! symbols and the constant `pi`.
//!
//! Two consumers: the simplifier asks sign questions (`is_positive`) through
//! conservative interval arithmetic, and the randomized equivalence oracle
//! asks for concrete sampling windows.

use super::{parse, Expr, FnKind, Symbol};
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

/// Open interval bounds for one symbol; `None` means unbounded on that side.
#[derive(Clone, Debug, Default)]
pub struct Interval {
    pub lo: Option<Expr>,
    pub hi: Option<Expr>,
}

/// Per-symbol domain intervals.
#[derive(Clone, Debug, Default)]
pub struct AssumptionSet {
    intervals: BTreeMap<Symbol, Interval>,
}

impl AssumptionSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares `0 < name`.
    pub fn assume_positive(&mut self, name: &str) {
        self.intervals
            .entry(Symbol::new(name))
            .or_default()
            .lo
            .get_or_insert(Expr::zero());
    }

    /// Parses one inequality string and records the bound it places.
    ///
    /// Accepted shapes: `A < B`, `A <= B`, `A > B`, `A >= B`, and the chain
    /// `A < x < B`; the bounded side must be a bare symbol (for the chain,
    /// the middle). Strict and non-strict bounds are both treated as open,
    /// matching how intervals are used (sampling and sign analysis).
    pub fn assume(&mut self, text: &str) -> Result<(), String> {
        let mut parts: Vec<&str> = Vec::new();
        let mut ascending = true;
        let mut descending = true;
        let mut rest = text;
        loop {
            match rest.find(['<', '>']) {
                Some(pos) => {
                    let op = rest.as_bytes()[pos];
                    parts.push(rest[..pos].trim());
                    if op == b'<' {
                        descending = false;
                    } else {
                        ascending = false;
                    }
                    let mut tail = &rest[pos + 1..];
                    if let Some(t) = tail.strip_prefix('=') {
                        tail = t;
                    }
                    rest = tail;
                }
                None => {
                    parts.push(rest.trim());
                    break;
                }
            }
        }
        if parts.len() < 2 || parts.len() > 3 {
            return Err(format!("assumption `{text}`: expected one or two comparisons"));
        }
        if !(ascending || descending) {
            return Err(format!("assumption `{text}`: mixed comparison directions"));
        }
        let mut exprs = Vec::with_capacity(parts.len());
        for p in &parts {
            let e = parse(p).map_err(|err| format!("assumption `{text}`: {err}"))?;
            exprs.push(e);
        }
        if descending {
            exprs.reverse(); // normalize to ascending a < b (< c)
        }
        match exprs.len() {
            2 => {
                let (a, b) = (exprs.remove(0), exprs.remove(0));
                match (&a, &b) {
                    (_, Expr::Symbol(s)) if !is_constant_name(s) => {
                        self.bound(s.clone(), Some(a), None);
                    }
                    (Expr::Symbol(s), _) if !is_constant_name(s) => {
                        self.bound(s.clone(), None, Some(b));
                    }
                    _ => {
                        return Err(format!(
                            "assumption `{text}`: neither side is a bare symbol"
                        ))
                    }
                }
            }
            _ => {
                let hi = exprs.pop().unwrap();
                let mid = exprs.pop().unwrap();
                let lo = exprs.pop().unwrap();
                match mid {
                    Expr::Symbol(s) if !is_constant_name(&s) => {
                        self.bound(s, Some(lo), Some(hi));
                    }
                    _ => {
                        return Err(format!(
                            "assumption `{text}`: chained bound must surround a bare symbol"
                        ))
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds a set from a list of inequality strings.
    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<Self, String> {
        let mut a = AssumptionSet::new();
        for s in items {
            a.assume(s.as_ref())?;
        }
        Ok(a)
    }

    fn bound(&mut self, s: Symbol, lo: Option<Expr>, hi: Option<Expr>) {
        let entry = self.intervals.entry(s).or_default();
        if lo.is_some() {
            entry.lo = lo;
        }
        if hi.is_some() {
            entry.hi = hi;
        }
    }

    pub fn interval(&self, s: &Symbol) -> Option<&Interval> {
        self.intervals.get(s)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.intervals.keys()
    }

    /// Symbols appearing in the bound expressions of `s` (its sampling
    /// dependencies).
    pub fn bound_dependencies(&self, s: &Symbol) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        if let Some(iv) = self.intervals.get(s) {
            for b in iv.lo.iter().chain(iv.hi.iter()) {
                for sym in b.free_symbols() {
                    if !is_constant_name(&sym) {
                        out.insert(sym);
                    }
                }
            }
        }
        out
    }

    /// Resolves the bounds of `s` numerically against already-sampled values.
    /// Returns `(lo, hi)` with infinities for missing or unresolvable sides.
    pub fn resolve_bounds(&self, s: &Symbol, env: &BTreeMap<Symbol, f64>) -> (f64, f64) {
        let resolve = |b: &Option<Expr>, sign: f64| -> f64 {
            match b {
                None => sign * f64::INFINITY,
                Some(e) => match super::numeric::eval_real(e, env) {
                    Ok(v) if v.is_finite() => v,
                    _ => sign * f64::INFINITY,
                },
            }
        };
        match self.intervals.get(s) {
            None => (f64::NEG_INFINITY, f64::INFINITY),
            Some(iv) => (resolve(&iv.lo, -1.0), resolve(&iv.hi, 1.0)),
        }
    }

    /// Conservative numeric range of an expression under these assumptions.
    pub(crate) fn range(&self, e: &Expr) -> RangeF {
        match e {
            Expr::Rational(r) => {
                let v = super::numeric::rational_to_f64(r);
                RangeF::point(v)
            }
            Expr::I => RangeF::unknown(),
            Expr::Symbol(s) => {
                if is_constant_name(s) {
                    return RangeF::point(PI);
                }
                match self.intervals.get(s) {
                    None => RangeF::unknown(),
                    Some(iv) => {
                        let lo = iv
                            .lo
                            .as_ref()
                            .map(|b| self.range(b).lo)
                            .unwrap_or(f64::NEG_INFINITY);
                        let hi = iv
                            .hi
                            .as_ref()
                            .map(|b| self.range(b).hi)
                            .unwrap_or(f64::INFINITY);
                        RangeF {
                            lo,
                            hi,
                            lo_open: true,
                            hi_open: true,
                        }
                    }
                }
            }
            Expr::Sum(ts) => {
                let mut acc = RangeF::point(0.0);
                for t in ts {
                    acc = acc.add(self.range(t));
                }
                acc
            }
            Expr::Product(fs) => {
                let mut acc = RangeF::point(1.0);
                for f in fs {
                    acc = acc.mul(self.range(f));
                }
                acc
            }
            Expr::Power(b, ex) => {
                let rb = self.range(b);
                if let Some(r) = ex.as_rational() {
                    let v = super::numeric::rational_to_f64(r);
                    if r.is_integer() {
                        return rb.powi(v as i64);
                    }
                    return rb.pow_pos_base(v);
                }
                // Symbolic exponent: positive base gives a positive result.
                if rb.strictly_positive() {
                    RangeF {
                        lo: 0.0,
                        hi: f64::INFINITY,
                        lo_open: true,
                        hi_open: true,
                    }
                } else {
                    RangeF::unknown()
                }
            }
            Expr::Fn(kind, arg) => self.fn_range(*kind, &self.range(arg)),
            Expr::Opaque(_) => RangeF::unknown(),
        }
    }

    fn fn_range(&self, kind: FnKind, arg: &RangeF) -> RangeF {
        let half_pi = PI / 2.0;
        match kind {
            FnKind::Sin => {
                if arg.inside(0.0, PI) {
                    RangeF {
                        lo: 0.0,
                        hi: 1.0,
                        lo_open: true,
                        hi_open: false,
                    }
                } else if arg.inside(-PI, 0.0) {
                    RangeF {
                        lo: -1.0,
                        hi: 0.0,
                        lo_open: false,
                        hi_open: true,
                    }
                } else {
                    RangeF::closed(-1.0, 1.0)
                }
            }
            FnKind::Cos => {
                if arg.inside(-half_pi, half_pi) {
                    RangeF {
                        lo: 0.0,
                        hi: 1.0,
                        lo_open: true,
                        hi_open: false,
                    }
                } else if arg.inside(half_pi, 3.0 * half_pi) {
                    RangeF {
                        lo: -1.0,
                        hi: 0.0,
                        lo_open: false,
                        hi_open: true,
                    }
                } else {
                    RangeF::closed(-1.0, 1.0)
                }
            }
            FnKind::Tan => {
                if arg.inside(-half_pi, half_pi) {
                    arg.monotone(f64::tan)
                } else {
                    RangeF::unknown()
                }
            }
            FnKind::Cot => {
                if arg.inside(0.0, PI) {
                    arg.monotone_decreasing(|x| 1.0 / x.tan())
                } else {
                    RangeF::unknown()
                }
            }
            FnKind::Sec => self.fn_range(FnKind::Cos, arg).recip(),
            FnKind::Csc => self.fn_range(FnKind::Sin, arg).recip(),
            FnKind::Sinh => arg.monotone(f64::sinh),
            FnKind::Cosh => {
                let a = arg.abs();
                let mut r = a.monotone(f64::cosh);
                if r.lo < 1.0 {
                    r.lo = 1.0;
                    r.lo_open = false;
                }
                r
            }
            FnKind::Tanh => arg.monotone(f64::tanh),
            FnKind::Coth => {
                if arg.strictly_positive() || arg.strictly_negative() {
                    arg.monotone_decreasing(|x| 1.0 / x.tanh())
                } else {
                    RangeF::unknown()
                }
            }
            FnKind::Sech => self.fn_range(FnKind::Cosh, arg).recip(),
            FnKind::Csch => self.fn_range(FnKind::Sinh, arg).recip(),
            FnKind::Exp => {
                let mut r = arg.monotone(f64::exp);
                if r.lo < 0.0 {
                    r.lo = 0.0;
                    r.lo_open = true;
                }
                r
            }
            FnKind::Log => {
                if arg.lo >= 0.0 {
                    arg.monotone(f64::ln)
                } else {
                    RangeF::unknown()
                }
            }
            FnKind::Sqrt => arg.pow_pos_base(0.5),
        }
    }

    /// True only when interval analysis proves the expression strictly
    /// positive everywhere in the assumed domain.
    pub fn proves_positive(&self, e: &Expr) -> bool {
        self.range(e).strictly_positive()
    }

    pub fn proves_negative(&self, e: &Expr) -> bool {
        self.range(e).strictly_negative()
    }

    pub fn proves_nonzero(&self, e: &Expr) -> bool {
        let r = self.range(e);
        r.strictly_positive() || r.strictly_negative()
    }
}

/// `pi` (either capitalization) denotes the circle constant, not a free
/// symbol.
pub(crate) fn is_constant_name(s: &Symbol) -> bool {
    matches!(s.name(), "pi" | "Pi")
}

/// Closed-by-default f64 interval with openness flags, used for sign
/// analysis. Widening is always toward "don't know".
#[derive(Clone, Copy, Debug)]
pub(crate) struct RangeF {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl RangeF {
    pub fn point(v: f64) -> Self {
        RangeF {
            lo: v,
            hi: v,
            lo_open: false,
            hi_open: false,
        }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        RangeF {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    pub fn unknown() -> Self {
        RangeF::closed(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn strictly_positive(&self) -> bool {
        self.lo > 0.0 || (self.lo == 0.0 && self.lo_open)
    }

    pub fn strictly_negative(&self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.hi_open)
    }

    fn contains_zero(&self) -> bool {
        !self.strictly_positive() && !self.strictly_negative()
    }

    /// Whole range inside the open interval `(a, b)`.
    fn inside(&self, a: f64, b: f64) -> bool {
        (self.lo > a || (self.lo == a && self.lo_open))
            && (self.hi < b || (self.hi == b && self.hi_open))
    }

    fn add(self, o: RangeF) -> RangeF {
        RangeF {
            lo: self.lo + o.lo,
            hi: self.hi + o.hi,
            lo_open: self.lo_open || o.lo_open,
            hi_open: self.hi_open || o.hi_open,
        }
    }

    fn neg(self) -> RangeF {
        RangeF {
            lo: -self.hi,
            hi: -self.lo,
            lo_open: self.hi_open,
            hi_open: self.lo_open,
        }
    }

    fn mul(self, o: RangeF) -> RangeF {
        // Candidate endpoint products; 0 * inf counts as 0 (the other
        // candidates cover the unbounded directions).
        let prod = |a: f64, b: f64| -> f64 {
            if (a == 0.0 && b.is_infinite()) || (b == 0.0 && a.is_infinite()) {
                0.0
            } else {
                a * b
            }
        };
        let cands = [
            (prod(self.lo, o.lo), self.lo_open || o.lo_open),
            (prod(self.lo, o.hi), self.lo_open || o.hi_open),
            (prod(self.hi, o.lo), self.hi_open || o.lo_open),
            (prod(self.hi, o.hi), self.hi_open || o.hi_open),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (v, _) in cands {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        // An endpoint is open only when every candidate attaining it is open.
        let lo_open = cands.iter().filter(|(v, _)| *v == lo).all(|(_, op)| *op);
        let hi_open = cands.iter().filter(|(v, _)| *v == hi).all(|(_, op)| *op);
        RangeF {
            lo,
            hi,
            lo_open,
            hi_open,
        }
    }

    fn recip(self) -> RangeF {
        if self.contains_zero() {
            return RangeF::unknown();
        }
        let inv = |v: f64, open: bool| -> (f64, bool) {
            if v == 0.0 {
                (f64::INFINITY, true)
            } else if v.is_infinite() {
                (0.0, true)
            } else {
                (1.0 / v, open)
            }
        };
        let (new_hi, hi_open) = inv(self.lo, self.lo_open);
        let (new_lo, lo_open) = inv(self.hi, self.hi_open);
        let mut r = RangeF {
            lo: new_lo,
            hi: new_hi,
            lo_open,
            hi_open,
        };
        if self.strictly_negative() {
            // 1/x maps (-inf, -a) to (-1/a, 0); sign already correct, but an
            // infinite endpoint mapped to 0 must land on the proper side.
            if r.lo == 0.0 && r.hi < 0.0 {
                std::mem::swap(&mut r.lo, &mut r.hi);
                std::mem::swap(&mut r.lo_open, &mut r.hi_open);
            }
        }
        r
    }

    fn abs(self) -> RangeF {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            let m = (-self.lo).max(self.hi);
            let m_open = if -self.lo > self.hi {
                self.lo_open
            } else if self.hi > -self.lo {
                self.hi_open
            } else {
                self.lo_open && self.hi_open
            };
            RangeF {
                lo: 0.0,
                hi: m,
                lo_open: false,
                hi_open: m_open,
            }
        }
    }

    fn monotone(self, f: impl Fn(f64) -> f64) -> RangeF {
        let lo = if self.lo.is_finite() {
            f(self.lo)
        } else if self.lo == f64::NEG_INFINITY {
            limit_at(&f, f64::NEG_INFINITY)
        } else {
            f64::NAN
        };
        let hi = if self.hi.is_finite() {
            f(self.hi)
        } else if self.hi == f64::INFINITY {
            limit_at(&f, f64::INFINITY)
        } else {
            f64::NAN
        };
        if lo.is_nan() || hi.is_nan() {
            return RangeF::unknown();
        }
        RangeF {
            lo,
            hi,
            lo_open: self.lo_open || self.lo.is_infinite(),
            hi_open: self.hi_open || self.hi.is_infinite(),
        }
    }

    fn monotone_decreasing(self, f: impl Fn(f64) -> f64) -> RangeF {
        self.neg().monotone(|x| f(-x))
    }

    fn powi(self, k: i64) -> RangeF {
        if k == 0 {
            return RangeF::point(1.0);
        }
        if k < 0 {
            return self.powi(-k).recip();
        }
        if k % 2 == 1 {
            return self.monotone(|x| x.powi(k as i32));
        }
        let a = self.abs();
        a.monotone(|x| x.powi(k as i32))
    }

    /// `x^q` for non-integer rational `q`; defined here only for nonnegative
    /// bases.
    fn pow_pos_base(self, q: f64) -> RangeF {
        if self.lo < 0.0 {
            return RangeF::unknown();
        }
        if q >= 0.0 {
            self.monotone(|x| x.powf(q))
        } else {
            self.monotone(|x| x.powf(-q)).recip()
        }
    }
}

/// Limit of a monotone elementary function at +-infinity, probed numerically.
fn limit_at(f: &impl Fn(f64) -> f64, inf: f64) -> f64 {
    let v = f(inf.signum() * 700.0);
    if v.is_nan() {
        f64::NAN
    } else if v.abs() > 1e300 {
        v.signum() * f64::INFINITY
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ops::Neg;

    fn set(items: &[&str]) -> AssumptionSet {
        AssumptionSet::from_strings(items).unwrap()
    }

    #[test]
    fn parses_bound_shapes() {
        let a = set(&["0 < r", "M > 0", "0 < theta < pi", "r > 2*M"]);
        assert!(a.interval(&Symbol::new("M")).unwrap().lo.is_some());
        let th = a.interval(&Symbol::new("theta")).unwrap();
        assert!(th.lo.is_some() && th.hi.is_some());
        let deps = a.bound_dependencies(&Symbol::new("r"));
        assert!(deps.contains(&Symbol::new("M")));
    }

    #[test]
    fn rejects_mixed_directions() {
        let mut a = AssumptionSet::new();
        assert!(a.assume("0 < r > 1").is_err());
    }

    #[test]
    fn positivity_of_products_and_powers() {
        let a = set(&["0 < r", "0 < theta < pi", "M > 0"]);
        let r = Expr::sym("r");
        let theta = Expr::sym("theta");
        let e = Expr::power(r.clone(), Expr::int(4))
            * Expr::power(Expr::fun(FnKind::Sin, theta), Expr::int(2));
        assert!(a.proves_positive(&e));
        assert!(a.proves_negative(&e.neg()));
        let m = Expr::sym("M");
        assert!(!a.proves_positive(&(r - m))); // unknown: r vs M incomparable here
    }

    #[test]
    fn sin_outside_known_window_is_unsigned() {
        let a = set(&["0 < x < 7"]);
        let e = Expr::fun(FnKind::Sin, Expr::sym("x"));
        assert!(!a.proves_positive(&e));
        assert!(!a.proves_negative(&e));
    }

    #[test]
    fn cosh_minus_half_is_positive() {
        let a = AssumptionSet::new();
        let e = Expr::fun(FnKind::Cosh, Expr::sym("x")) - Expr::rational(1, 2);
        assert!(a.proves_positive(&e));
    }

    #[test]
    fn resolves_dependent_bounds() {
        let a = set(&["r > 2*M", "M > 0"]);
        let mut env = BTreeMap::new();
        env.insert(Symbol::new("M"), 3.0);
        let (lo, hi) = a.resolve_bounds(&Symbol::new("r"), &env);
        assert_eq!(lo, 6.0);
        assert!(hi.is_infinite());
    }
}
