//! Randomized numeric equivalence oracle.
//!
//! Two expressions count as "the same" when they agree numerically at every
//! one of `samples` pseudo-random points drawn inside the assumption
//! intervals with a fixed seed. This is the project-wide definition of
//! expression equality for tests; it depends on no simplifier strength and
//! is deterministic per seed.
//!
//! Opaque functions are evaluated through freshly drawn sinusoid probes
//! (see [`super::numeric::OpaqueProbe`]), so expressions mentioning opaque
//! partials of any order can be compared too.

use super::numeric::{eval_complex, EvalError, OpaqueProbe, ProbeSet};
use super::{assume::is_constant_name, AssumptionSet, Expr, Symbol};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;

/// Seed used everywhere unless a caller overrides it.
pub const DEFAULT_SEED: u64 = 0x5EED_0001;

/// Outcome of an equivalence probe. `Inconclusive` means sampling kept
/// hitting singular points and is reported distinctly from a disproof.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    Different,
    Inconclusive,
}

#[derive(Clone, Copy, Debug)]
pub struct EquivOptions {
    pub seed: u64,
    /// Number of agreeing sample points required.
    pub samples: u32,
}

impl Default for EquivOptions {
    fn default() -> Self {
        EquivOptions {
            seed: DEFAULT_SEED,
            samples: 24,
        }
    }
}

/// Convenience wrapper: `Equivalent` is `true`; both `Different` and
/// `Inconclusive` are `false`. Use [`equivalent_with`] when the distinction
/// matters.
pub fn equivalent(e1: &Expr, e2: &Expr, a: &AssumptionSet) -> bool {
    equivalent_with(e1, e2, a, &EquivOptions::default()) == Equivalence::Equivalent
}

pub fn equivalent_with(
    e1: &Expr,
    e2: &Expr,
    a: &AssumptionSet,
    opts: &EquivOptions,
) -> Equivalence {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    // Symbols to bind: free symbols of both sides plus whatever their
    // assumption bounds transitively mention.
    let mut symbols: BTreeSet<Symbol> = e1
        .free_symbols()
        .into_iter()
        .chain(e2.free_symbols())
        .filter(|s| !is_constant_name(s))
        .collect();
    loop {
        let extra: BTreeSet<Symbol> = symbols
            .iter()
            .flat_map(|s| a.bound_dependencies(s))
            .filter(|s| !symbols.contains(s))
            .collect();
        if extra.is_empty() {
            break;
        }
        symbols.extend(extra);
    }
    let order = sample_order(&symbols, a);

    // Opaque functions and their arities.
    let mut opaque: BTreeMap<Symbol, usize> = BTreeMap::new();
    for e in [e1, e2] {
        collect_opaque_arities(e, &mut opaque);
    }

    let mut agreed = 0u32;
    let mut singular_streak = 0u32;
    let mut attempts = 0u32;
    while agreed < opts.samples {
        attempts += 1;
        if attempts > opts.samples * 60 {
            return Equivalence::Inconclusive;
        }
        let mut env: BTreeMap<Symbol, f64> = BTreeMap::new();
        for s in &order {
            let (lo, hi) = a.resolve_bounds(s, &env);
            let (lo, hi) = sampling_window(lo, hi);
            env.insert(s.clone(), rng.gen_range(lo..hi));
        }
        let bindings: BTreeMap<Symbol, Complex64> = env
            .iter()
            .map(|(k, v)| (k.clone(), Complex64::new(*v, 0.0)))
            .collect();
        let mut probes = ProbeSet::new();
        for (name, arity) in &opaque {
            probes.insert(
                name.clone(),
                OpaqueProbe {
                    offset: rng.gen_range(0.0..TAU),
                    coeffs: (0..*arity).map(|_| rng.gen_range(0.6..1.4)).collect(),
                },
            );
        }
        let v1 = eval_complex(e1, &bindings, &probes);
        let v2 = eval_complex(e2, &bindings, &probes);
        match (v1, v2) {
            (Ok(v1), Ok(v2)) => {
                singular_streak = 0;
                let tol = 1e-9 * (1.0 + v1.norm() + v2.norm());
                if (v1 - v2).norm() > tol {
                    return Equivalence::Different;
                }
                agreed += 1;
            }
            (Err(EvalError::Probe(_)), _) | (_, Err(EvalError::Probe(_))) => {
                // Missing probe is a setup failure, not a sampling accident.
                return Equivalence::Inconclusive;
            }
            _ => {
                singular_streak += 1;
                if singular_streak > opts.samples {
                    return Equivalence::Inconclusive;
                }
            }
        }
    }
    Equivalence::Equivalent
}

/// Dependency-respecting sampling order: a symbol whose bounds mention other
/// symbols is drawn after them. Cycles fall back to name order.
fn sample_order(symbols: &BTreeSet<Symbol>, a: &AssumptionSet) -> Vec<Symbol> {
    let mut remaining: Vec<Symbol> = symbols.iter().cloned().collect();
    let mut placed: BTreeSet<Symbol> = BTreeSet::new();
    let mut order = Vec::with_capacity(remaining.len());
    while !remaining.is_empty() {
        let pick = remaining
            .iter()
            .position(|s| {
                a.bound_dependencies(s)
                    .iter()
                    .all(|d| placed.contains(d) || !symbols.contains(d))
            })
            .unwrap_or(0);
        let s = remaining.remove(pick);
        placed.insert(s.clone());
        order.push(s);
    }
    order
}

/// Turns resolved (possibly infinite) interval ends into a concrete window.
/// Unassumed symbols draw from (0.1, 10); one-sided bounds shift that window
/// to sit against the finite end.
fn sampling_window(lo: f64, hi: f64) -> (f64, f64) {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) if lo < hi => (lo, hi),
        (true, false) => (lo + 0.1, lo + 10.0),
        (false, true) => (hi - 10.0, hi - 0.1),
        _ => (0.1, 10.0),
    }
}

fn collect_opaque_arities(e: &Expr, out: &mut BTreeMap<Symbol, usize>) {
    match e {
        Expr::Rational(_) | Expr::I | Expr::Symbol(_) => {}
        Expr::Opaque(o) => {
            out.insert(o.name.clone(), o.args.len());
        }
        Expr::Fn(_, a) => collect_opaque_arities(a, out),
        Expr::Power(b, x) => {
            collect_opaque_arities(b, out);
            collect_opaque_arities(x, out);
        }
        Expr::Product(es) | Expr::Sum(es) => {
            for e in es {
                collect_opaque_arities(e, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{parse, FnKind};

    fn assume(items: &[&str]) -> AssumptionSet {
        AssumptionSet::from_strings(items).unwrap()
    }

    #[test]
    fn double_angle_identity_is_equivalent() {
        let lhs = parse("(Cosh[2*v/r] + 1)/2").unwrap();
        let rhs = parse("Cosh[v/r]^2").unwrap();
        assert!(equivalent(&lhs, &rhs, &assume(&["0 < r"])));
    }

    #[test]
    fn sign_flip_is_different() {
        let lhs = parse("2*M*(2*M - r)/r^4").unwrap();
        let rhs = parse("-2*M*(2*M - r)/r^4").unwrap();
        assert_eq!(
            equivalent_with(&lhs, &rhs, &assume(&["M > 0", "0 < r"]), &EquivOptions::default()),
            Equivalence::Different
        );
    }

    #[test]
    fn removable_singularity_is_fine() {
        let lhs = parse("x/x").unwrap();
        let rhs = parse("1").unwrap();
        assert!(equivalent(&lhs, &rhs, &assume(&["0 < x"])));
    }

    #[test]
    fn inconclusive_when_always_singular() {
        // Power(0, -1) built raw (the constructor would not fold it away) is
        // singular at every sample point.
        let raw = Expr::Power(Box::new(Expr::zero()), Box::new(Expr::int(-1)));
        let r = equivalent_with(
            &raw,
            &Expr::one(),
            &AssumptionSet::new(),
            &EquivOptions::default(),
        );
        assert_eq!(r, Equivalence::Inconclusive);
    }

    #[test]
    fn opaque_partials_distinguish_orders() {
        let mut f1 = Expr::opaque("f", &["x"]);
        if let Expr::Opaque(o) = &mut f1 {
            o.orders = vec![1];
        }
        let f0 = Expr::opaque("f", &["x"]);
        assert_eq!(
            equivalent_with(&f0, &f1, &AssumptionSet::new(), &EquivOptions::default()),
            Equivalence::Different
        );
        // And d/dx f == its own partial: built two ways.
        let d = f0.diff(&Symbol::new("x"));
        assert!(equivalent(&d, &f1, &AssumptionSet::new()));
    }

    #[test]
    fn derivative_matches_finite_difference_through_probes() {
        // d/dx sin(f(x,y)) = cos(f) f_x, both sides via probe evaluation.
        let f = Expr::opaque("f", &["x", "y"]);
        let e = Expr::fun(FnKind::Sin, f.clone());
        let lhs = e.diff(&Symbol::new("x"));
        let fx = f.diff(&Symbol::new("x"));
        let rhs = Expr::fun(FnKind::Cos, f) * fx;
        assert!(equivalent(&lhs, &rhs, &AssumptionSet::new()));
    }

    #[test]
    fn dependent_bounds_are_respected() {
        // With r > 2M and M > 0, r - 2M is strictly positive: |r-2M| == r-2M.
        let lhs = parse("Sqrt[(r - 2*M)^2]").unwrap();
        let rhs = parse("r - 2*M").unwrap();
        assert!(equivalent(&lhs, &rhs, &assume(&["M > 0", "r > 2*M"])));
    }

    #[test]
    fn seed_changes_points_not_verdicts() {
        let lhs = parse("Sin[x]^2 + Cos[x]^2").unwrap();
        let rhs = parse("1").unwrap();
        for seed in [1u64, 2, 3, 99] {
            let opts = EquivOptions { seed, samples: 24 };
            assert_eq!(
                equivalent_with(&lhs, &rhs, &AssumptionSet::new(), &opts),
                Equivalence::Equivalent
            );
        }
    }
}
