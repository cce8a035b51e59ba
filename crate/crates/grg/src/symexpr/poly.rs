//! Multivariate polynomials over expression atoms.
//!
//! An *atom* is any expression treated as an indeterminate: a symbol, a known
//! function application, an opaque partial, a non-integer power, or `I`.
//! Polynomials are maps monomial -> rational coefficient, with monomials in
//! graded-lex order so exact division and GCD behave.
//!
//! Monomial normalization bakes in three relations, keeping the atom algebra
//! canonical enough for the identities this project needs:
//!   * `I^2 = -1`
//!   * even powers of `cos` become `1 - sin^2` (so `sin^2 + cos^2 -> 1`)
//!   * even powers of `sinh` become `cosh^2 - 1` (so `cosh^2 - sinh^2 -> 1`)
//!
//! plus carry of fractional powers (`(x^(1/2))^3 = x * x^(1/2)`).

use super::{Expr, FnKind};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

/// Monomial: atoms with positive integer exponents, graded-lex ordered.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub(crate) struct Mono(pub BTreeMap<Expr, u32>);

impl Mono {
    pub fn one() -> Self {
        Mono::default()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.values().map(|&e| u64::from(e)).sum()
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0
            .iter()
            .all(|(a, &e)| other.0.get(a).is_some_and(|&oe| oe >= e))
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_into(&self, other: &Mono) -> Mono {
        let mut m = other.0.clone();
        for (a, e) in &self.0 {
            let oe = m.get_mut(a).expect("quotient of non-divisible monomial");
            *oe -= e;
            if *oe == 0 {
                m.remove(a);
            }
        }
        Mono(m)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        // Lex over the merged atom set ascending; larger exponent on the
        // earliest differing atom wins.
        let mut it_a = self.0.iter().peekable();
        let mut it_b = other.0.iter().peekable();
        loop {
            match (it_a.peek(), it_b.peek()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ka, ea)), Some((kb, eb))) => match ka.cmp(kb) {
                    Ordering::Less => {
                        // `self` has a positive power on an earlier atom.
                        let _ = ea;
                        return Ordering::Greater;
                    }
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(eb) {
                        Ordering::Equal => {
                            it_a.next();
                            it_b.next();
                        }
                        o => return o,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with rational coefficients over expression atoms.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub(crate) struct Poly(pub BTreeMap<Mono, BigRational>);

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut m = BTreeMap::new();
        if !r.is_zero() {
            m.insert(Mono::one(), r);
        }
        Poly(m)
    }

    /// `atom^exp` with monomial relations applied.
    pub fn from_atom_pow(atom: Expr, exp: u32) -> Self {
        let mut m = BTreeMap::new();
        m.insert(atom, exp);
        normalize_mono(m, BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.0.is_empty() {
            return None; // zero handled by caller via is_zero
        }
        if self.0.len() == 1 {
            let (m, c) = self.0.iter().next().unwrap();
            if m.is_one() {
                return Some(c);
            }
        }
        None
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|c| c.is_one())
    }

    pub(crate) fn insert_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (m.clone(), -c.clone())).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(
            self.0
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &other.0 {
                let mut merged = ma.0.clone();
                for (atom, e) in &mb.0 {
                    *merged.entry(atom.clone()).or_insert(0) += e;
                }
                let part = normalize_mono(merged, ca * cb);
                out = out.add(&part);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn atoms(&self) -> BTreeSet<Expr> {
        let mut s = BTreeSet::new();
        for m in self.0.keys() {
            for a in m.0.keys() {
                s.insert(a.clone());
            }
        }
        s
    }

    pub fn contains_i(&self) -> bool {
        self.0.keys().any(|m| m.0.contains_key(&Expr::I))
    }

    /// Splits `p = re + I*im` by `I`-degree (0 or 1 after normalization).
    pub fn split_i(&self) -> (Poly, Poly) {
        let mut re = Poly::zero();
        let mut im = Poly::zero();
        for (m, c) in &self.0 {
            if m.0.contains_key(&Expr::I) {
                let mut stripped = m.0.clone();
                stripped.remove(&Expr::I);
                im.insert_term(Mono(stripped), c.clone());
            } else {
                re.insert_term(m.clone(), c.clone());
            }
        }
        (re, im)
    }

    pub fn leading(&self) -> Option<(&Mono, &BigRational)> {
        self.0.iter().next_back()
    }

    pub fn degree_in(&self, atom: &Expr) -> u32 {
        self.0
            .keys()
            .map(|m| m.0.get(atom).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Dense univariate coefficient list in `atom` (index = degree).
    pub fn coeffs_in(&self, atom: &Expr) -> Vec<Poly> {
        let deg = self.degree_in(atom) as usize;
        let mut out = vec![Poly::zero(); deg + 1];
        for (m, c) in &self.0 {
            let e = m.0.get(atom).copied().unwrap_or(0) as usize;
            let mut rest = m.0.clone();
            rest.remove(atom);
            out[e].insert_term(Mono(rest), c.clone());
        }
        out
    }

    pub fn from_univariate(atom: &Expr, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let xe = if e == 0 {
                Poly::one()
            } else {
                Poly::from_atom_pow(atom.clone(), e as u32)
            };
            out = out.add(&c.mul(&xe));
        }
        out
    }

    /// Exact multivariate division; `None` if `self` is not a multiple.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.as_rational() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = d.leading().unwrap();
        let mut rem = self.clone();
        let mut quo = Poly::zero();
        let mut steps = 0usize;
        while !rem.is_zero() {
            steps += 1;
            if steps > 100_000 {
                return None; // safety valve; relations can break strict division
            }
            let (rm, rc) = rem.leading().unwrap();
            if !dm.divides(rm) {
                return None;
            }
            let qm = dm.quotient_into(rm);
            let qc = rc / dc;
            let mut t = Poly::zero();
            t.insert_term(qm, qc);
            quo = quo.add(&t);
            rem = rem.sub(&t.mul(d));
        }
        Some(quo)
    }

    /// Positive gcd of all coefficient rationals (content over Q), 1-safe.
    pub fn content_rational(&self) -> BigRational {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.0.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return BigRational::one();
        }
        BigRational::new(num_gcd, den_lcm)
    }

    /// Scales to integer coefficients with gcd 1 and positive leading term.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut p = self.scale(&self.content_rational().recip());
        if p.leading().unwrap().1.is_negative() {
            p = p.neg();
        }
        p
    }
}

/// Rebuilds a raw exponent map into a normalized polynomial, applying the
/// `I`, fractional-power, and even-power trig relations.
fn normalize_mono(raw: BTreeMap<Expr, u32>, coeff: BigRational) -> Poly {
    let mut c = coeff;
    if c.is_zero() {
        return Poly::zero();
    }
    let mut plain: BTreeMap<Expr, u32> = BTreeMap::new();
    // Factors that expand into multi-term polynomials.
    let mut expansions: Vec<Poly> = Vec::new();

    for (atom, exp) in raw {
        if exp == 0 {
            continue;
        }
        match &atom {
            Expr::I => {
                if exp % 4 == 2 || exp % 4 == 3 {
                    c = -c;
                }
                if exp % 2 == 1 {
                    *plain.entry(Expr::I).or_insert(0) += 1;
                }
            }
            Expr::Power(base, fexp) => {
                // Fractional-power carry: (b^f)^k = b^floor(f k) * b^frac(f k),
                // only when the base itself is monomial-friendly.
                let q = match fexp.as_rational() {
                    Some(q) => q.clone(),
                    None => {
                        *plain.entry(atom.clone()).or_insert(0) += exp;
                        continue;
                    }
                };
                let total = &q * BigRational::from_integer(BigInt::from(exp));
                let n = total.floor().to_integer();
                let frac = &total - BigRational::from_integer(n.clone());
                let carried_ok = !matches!(**base, Expr::Sum(_)) && n >= BigInt::zero();
                if !carried_ok || (n.is_zero() && frac == q && exp == 1) {
                    *plain.entry(atom.clone()).or_insert(0) += exp;
                    continue;
                }
                if let Some(k) = n.to_u32() {
                    if k > 0 {
                        let mut inner = BTreeMap::new();
                        inner.insert((**base).clone(), k);
                        expansions.push(normalize_mono(inner, BigRational::one()));
                    }
                    if !frac.is_zero() {
                        let frac_atom =
                            Expr::Power(base.clone(), Box::new(Expr::Rational(frac)));
                        *plain.entry(frac_atom).or_insert(0) += 1;
                    }
                } else {
                    *plain.entry(atom.clone()).or_insert(0) += exp;
                }
            }
            Expr::Fn(FnKind::Cos, arg) => {
                let half = exp / 2;
                if exp % 2 == 1 {
                    *plain.entry(atom.clone()).or_insert(0) += 1;
                }
                if half > 0 {
                    // cos^2 = 1 - sin^2
                    let sin2 = Poly::from_atom_pow(
                        Expr::Fn(FnKind::Sin, arg.clone()),
                        2,
                    );
                    expansions.push(Poly::one().sub(&sin2).pow(half));
                }
            }
            Expr::Fn(FnKind::Sinh, arg) => {
                let half = exp / 2;
                if exp % 2 == 1 {
                    *plain.entry(atom.clone()).or_insert(0) += 1;
                }
                if half > 0 {
                    // sinh^2 = cosh^2 - 1
                    let cosh2 = Poly::from_atom_pow(
                        Expr::Fn(FnKind::Cosh, arg.clone()),
                        2,
                    );
                    expansions.push(cosh2.sub(&Poly::one()).pow(half));
                }
            }
            _ => {
                *plain.entry(atom.clone()).or_insert(0) += exp;
            }
        }
    }

    let mut out = Poly::zero();
    out.insert_term(Mono(plain), c);
    for f in expansions {
        out = out.mul(&f);
    }
    out
}

/// Work budget for one top-level GCD call, in monomial-touch units.  Wide
/// atom sets (curved-surface expressions mixing several function atoms with
/// opaque partials) can make the remainder sequence swell combinatorially;
/// when the budget runs out the GCD reports "no common factor", which merely
/// leaves a fraction uncancelled — never an incorrect result.
const GCD_BUDGET: i64 = 80_000;

/// Multivariate GCD by primitive subresultant remainder sequences, hardened
/// for wide atom sets: a cheap evaluation probe dismisses coprime pairs and
/// picks the main variable, the remainder sequence runs under a work budget,
/// and any candidate is verified by exact division before being returned.
/// Inputs containing `I` fall back to gcd 1 (callers split real/imaginary
/// parts first when it matters).
pub(crate) fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    let mut budget = GCD_BUDGET;
    let g = gcd_budgeted(a, b, &mut budget);
    if g.is_one() {
        return g;
    }
    // The contract is "the result divides both inputs"; enforce it so that
    // budget exhaustion or relation feedback can never corrupt a caller.
    if g.0.len() <= 4 * (a.0.len() + b.0.len()) + 16
        && a.exact_div(&g).is_some()
        && b.exact_div(&g).is_some()
    {
        g
    } else {
        Poly::one()
    }
}

fn gcd_budgeted(a: &Poly, b: &Poly, budget: &mut i64) -> Poly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.contains_i() || b.contains_i() {
        return Poly::one();
    }
    if a.as_rational().is_some() || b.as_rational().is_some() {
        return Poly::one();
    }
    *budget -= (a.0.len() + b.0.len()) as i64;
    if *budget < 0 {
        return Poly::one();
    }
    let shared: Vec<Expr> = a.atoms().intersection(&b.atoms()).cloned().collect();
    if shared.is_empty() {
        return Poly::one();
    }
    // Evaluation probe: substitute fixed points for every atom but one and
    // take univariate gcd degrees.  Atoms where both images stay coprime
    // cannot carry a common factor; among the rest, the smallest image
    // degree makes the cheapest main variable.
    let mut main: Option<(Expr, usize)> = None;
    for x in &shared {
        let d = probe_gcd_degree(a, b, x);
        if d == 0 {
            continue;
        }
        if main.as_ref().is_none_or(|(_, best)| d < *best) {
            main = Some((x.clone(), d));
        }
    }
    let Some((main, _)) = main else {
        return Poly::one();
    };
    gcd_in(a, b, &main, budget)
}

fn gcd_in(a: &Poly, b: &Poly, main: &Expr, budget: &mut i64) -> Poly {
    let fa = a.coeffs_in(main);
    let fb = b.coeffs_in(main);
    let ca = coeff_gcd(&fa, budget);
    let cb = coeff_gcd(&fb, budget);
    let cont = gcd_budgeted(&ca, &cb, budget);
    let ppa: Vec<Poly> = fa
        .iter()
        .map(|c| c.exact_div(&ca).unwrap_or_else(|| c.clone()))
        .collect();
    let ppb: Vec<Poly> = fb
        .iter()
        .map(|c| c.exact_div(&cb).unwrap_or_else(|| c.clone()))
        .collect();

    let (mut f, mut g) = if ppa.len() >= ppb.len() {
        (ppa, ppb)
    } else {
        (ppb, ppa)
    };
    for _ in 0..200 {
        if *budget < 0 {
            return Poly::one();
        }
        let r = uni_prem(&f, &g, budget);
        if uni_is_zero(&r) {
            let core = Poly::from_univariate(main, &g);
            return cont.mul(&core.primitive()).primitive();
        }
        if r.len() == 1 {
            // Nonzero constant remainder: coprime in the main atom.
            return cont;
        }
        f = g;
        g = uni_primitive(&r, budget);
    }
    cont // relation feedback kept degrees from falling; settle for the content
}

/// GCD of a univariate coefficient list (the content in the main atom).
fn coeff_gcd(cs: &[Poly], budget: &mut i64) -> Poly {
    let mut acc = Poly::zero();
    for c in cs {
        if c.is_zero() {
            continue;
        }
        acc = gcd_budgeted(&acc, c, budget);
        if acc.is_one() {
            break;
        }
    }
    if acc.is_zero() {
        Poly::one()
    } else {
        acc
    }
}

fn uni_degree(f: &[Poly]) -> usize {
    f.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

fn uni_is_zero(f: &[Poly]) -> bool {
    f.iter().all(Poly::is_zero)
}

fn uni_trim(f: &mut Vec<Poly>) {
    while f.len() > 1 && f.last().is_some_and(Poly::is_zero) {
        f.pop();
    }
}

fn uni_primitive(f: &[Poly], budget: &mut i64) -> Vec<Poly> {
    let c = coeff_gcd(f, budget);
    f.iter()
        .map(|p| p.exact_div(&c).unwrap_or_else(|| p.clone()))
        .collect()
}

/// Pseudo-remainder: `lc(g)^(deg f - deg g + 1) * f  mod  g`.
fn uni_prem(f: &[Poly], g: &[Poly], budget: &mut i64) -> Vec<Poly> {
    let dg = uni_degree(g);
    let lg = &g[dg];
    let mut r: Vec<Poly> = f.to_vec();
    uni_trim(&mut r);
    let df = uni_degree(&r);
    if df < dg {
        return r;
    }
    let mut e = (df - dg + 1) as i64;
    while !uni_is_zero(&r) && uni_degree(&r) >= dg {
        let work: usize = r.iter().map(|c| c.0.len()).sum::<usize>() * lg.0.len().max(1);
        *budget -= work as i64;
        if *budget < 0 {
            // Claim a constant remainder; the caller treats it as coprime and
            // the top-level divisibility check keeps the answer sound.
            return vec![Poly::one()];
        }
        let dr = uni_degree(&r);
        let s = r[dr].clone();
        // r = r*lg - g*s*x^(dr-dg)
        let mut next: Vec<Poly> = r.iter().map(|c| c.mul(lg)).collect();
        for (i, gc) in g.iter().enumerate().take(dg + 1) {
            let idx = i + dr - dg;
            next[idx] = next[idx].sub(&gc.mul(&s));
        }
        r = next;
        uni_trim(&mut r);
        e -= 1;
    }
    for _ in 0..e.max(0) {
        for c in r.iter_mut() {
            *c = c.mul(lg);
        }
    }
    r
}

/// Degree in `x` of the gcd of two univariate evaluation images, maximized
/// over two sample points.  A zero here certifies (up to unlucky evaluation,
/// whose only cost is a missed cancellation) that `x` does not occur in the
/// gcd; leading-coefficient vanishing at a probe point can only push the
/// answer towards zero, which is the safe direction.
fn probe_gcd_degree(a: &Poly, b: &Poly, x: &Expr) -> usize {
    let mut atoms: BTreeSet<Expr> = a.atoms();
    atoms.extend(b.atoms());
    atoms.remove(x);
    let mut degree = 0usize;
    for salt in [0usize, 7] {
        let assign: BTreeMap<&Expr, BigRational> = atoms
            .iter()
            .enumerate()
            .map(|(i, e)| {
                (e, BigRational::from_integer(BigInt::from(PROBE_PRIMES[(i + salt) % PROBE_PRIMES.len()])))
            })
            .collect();
        let fa = uni_image(a, x, &assign);
        let fb = uni_image(b, x, &assign);
        degree = degree.max(uni_image_gcd_degree(fa, fb));
        if degree > 0 {
            break;
        }
    }
    degree
}

const PROBE_PRIMES: [i64; 16] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59];

/// Coefficient list of `p` viewed as univariate in `x` with every other atom
/// replaced by its assigned rational value.
fn uni_image(p: &Poly, x: &Expr, assign: &BTreeMap<&Expr, BigRational>) -> Vec<BigRational> {
    let top = p
        .0
        .keys()
        .map(|m| m.0.get(x).copied().unwrap_or(0))
        .max()
        .unwrap_or(0) as usize;
    let mut out = vec![BigRational::zero(); top + 1];
    for (m, c) in &p.0 {
        let mut v = c.clone();
        let mut px = 0u32;
        for (atom, pw) in &m.0 {
            if atom == x {
                px = *pw;
                continue;
            }
            let base = &assign[atom];
            for _ in 0..*pw {
                v *= base;
            }
        }
        out[px as usize] += v;
    }
    out
}

fn uni_image_trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn uni_image_gcd_degree(mut f: Vec<BigRational>, mut g: Vec<BigRational>) -> usize {
    uni_image_trim(&mut f);
    uni_image_trim(&mut g);
    loop {
        if g.is_empty() {
            return f.len().saturating_sub(1);
        }
        if f.is_empty() {
            return g.len().saturating_sub(1);
        }
        if g.len() == 1 || f.len() == 1 {
            return 0;
        }
        if f.len() < g.len() {
            std::mem::swap(&mut f, &mut g);
        }
        while f.len() >= g.len() && !f.is_empty() {
            let k = f.len() - g.len();
            let q = f.last().unwrap() / g.last().unwrap();
            for (i, gc) in g.iter().enumerate() {
                let t = &q * gc;
                f[k + i] -= t;
            }
            uni_image_trim(&mut f);
        }
        std::mem::swap(&mut f, &mut g);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(n: &str) -> Poly {
        Poly::from_atom_pow(Expr::sym(n), 1)
    }

    fn int(k: i64) -> Poly {
        Poly::from_rational(BigRational::from_integer(BigInt::from(k)))
    }

    #[test]
    fn pythagorean_relation_collapses() {
        let t = Expr::sym("t");
        let sin2 = Poly::from_atom_pow(Expr::Fn(FnKind::Sin, Box::new(t.clone())), 2);
        let cos2 = Poly::from_atom_pow(Expr::Fn(FnKind::Cos, Box::new(t)), 2);
        assert!(sin2.add(&cos2).is_one());
    }

    #[test]
    fn hyperbolic_relation_collapses() {
        let t = Expr::sym("t");
        let sinh2 = Poly::from_atom_pow(Expr::Fn(FnKind::Sinh, Box::new(t.clone())), 2);
        let cosh2 = Poly::from_atom_pow(Expr::Fn(FnKind::Cosh, Box::new(t)), 2);
        assert!(cosh2.sub(&sinh2).is_one());
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = Poly::from_atom_pow(Expr::I, 1);
        let sq = i.mul(&i);
        assert_eq!(sq.as_rational().unwrap(), &BigRational::from_integer(BigInt::from(-1)));
    }

    #[test]
    fn split_by_imaginary_part() {
        let x = var("x");
        let i = Poly::from_atom_pow(Expr::I, 1);
        let p = x.add(&i.mul(&int(3)));
        let (re, im) = p.split_i();
        assert_eq!(re, x);
        assert_eq!(im, int(3));
    }

    #[test]
    fn fractional_power_carry() {
        let half = Expr::Power(Box::new(Expr::sym("x")), Box::new(Expr::rational(1, 2)));
        let p = Poly::from_atom_pow(half, 3); // x^(3/2) = x * x^(1/2)
        assert_eq!(p.0.len(), 1);
        let (m, _) = p.0.iter().next().unwrap();
        assert_eq!(m.0.get(&Expr::sym("x")), Some(&1));
        assert_eq!(m.total_degree(), 2);
    }

    #[test]
    fn exact_division_recovers_factor() {
        // (x+y)*(x-y) / (x+y) = x-y
        let x = var("x");
        let y = var("y");
        let sum = x.add(&y);
        let diff = x.sub(&y);
        let prod = sum.mul(&diff);
        assert_eq!(prod.exact_div(&sum).unwrap(), diff);
        assert!(prod.exact_div(&x.add(&int(1))).is_none());
    }

    #[test]
    fn gcd_of_shifted_products() {
        // gcd((x+1)^2 (x+2), (x+1)(x+3)) = x+1
        let x = var("x");
        let a = x.add(&int(1)).pow(2).mul(&x.add(&int(2)));
        let b = x.add(&int(1)).mul(&x.add(&int(3)));
        let g = gcd(&a, &b);
        assert_eq!(g, x.add(&int(1)));
    }

    #[test]
    fn gcd_multivariate() {
        // gcd(x^2 - y^2, x^2 + 2xy + y^2) = x + y
        let x = var("x");
        let y = var("y");
        let a = x.mul(&x).sub(&y.mul(&y));
        let b = x.add(&y).pow(2);
        let g = gcd(&a, &b);
        assert_eq!(g, x.add(&y));
    }

    #[test]
    fn gcd_coprime_is_one() {
        let x = var("x");
        let y = var("y");
        assert!(gcd(&x, &y).is_one());
        let a = x.mul(&x).add(&int(1));
        let b = x.add(&int(1));
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn monomial_order_is_multiplicative() {
        // If m1 < m2 then m1*m < m2*m, spot-checked on small monomials.
        let monos: Vec<Mono> = [
            vec![("x", 1)],
            vec![("y", 1)],
            vec![("x", 2)],
            vec![("x", 1), ("y", 1)],
            vec![("y", 3)],
        ]
        .iter()
        .map(|spec| {
            Mono(
                spec.iter()
                    .map(|(n, e)| (Expr::sym(n), *e))
                    .collect(),
            )
        })
        .collect();
        let mul = |a: &Mono, b: &Mono| {
            let mut m = a.0.clone();
            for (k, v) in &b.0 {
                *m.entry(k.clone()).or_insert(0) += v;
            }
            Mono(m)
        };
        for a in &monos {
            for b in &monos {
                for m in &monos {
                    if a < b {
                        assert!(mul(a, m) < mul(b, m), "{a:?} {b:?} {m:?}");
                    }
                }
            }
        }
    }
}
