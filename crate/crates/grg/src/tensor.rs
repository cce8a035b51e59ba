//! The dynamic core: tensor fields as named component functions over signed
//! index tuples, evaluated on demand and memoized.
//!
//! Each field keeps two stores.  The *request cache* records every tuple asked
//! for through [`Session::component`] exactly as it was spelled (including
//! valence signs) and is what `cacheview` and `evaluated_count` report.  The
//! *working memo* underneath holds canonicalized base-valence values and the
//! intermediate results of valence conversion; it guarantees that no base
//! expression is derived twice without ever inflating the request statistics.

use std::collections::BTreeMap;
use std::ops::Neg;
use std::sync::{Arc, Mutex};

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::manifold::{check_index, Manifold};
use crate::symexpr::{AssumptionSet, Expr, Symbol};
use crate::{curvature, deriv, hypersurface};

/// Component address: positive entries are covariant slots, negative entries
/// contravariant ones, `1 <= |entry| <= dim`.
pub type IndexTuple = Vec<i32>;

/// Cache-clearing scope for [`Session::retreat`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    SelfOnly,
    Associated,
}

/// Signature for user-defined base-component functions.
pub type CustomFn = dyn Fn(&mut SessionCore, &[i32]) -> Result<Expr> + Send + Sync;

/// Generating set of index symmetries: each entry is a slot permutation and
/// the sign the component picks up under it.
type Symmetries = Vec<(Vec<usize>, i8)>;

/// Dense component storage for tensors built from explicit matrices.
#[derive(Debug)]
pub struct DenseData {
    pub dim: usize,
    pub valence: Vec<i8>,
    /// Row-major, `dim^rank` entries.
    pub entries: Vec<Expr>,
}

impl DenseData {
    fn get(&self, idx: &[i32]) -> &Expr {
        let mut pos = 0usize;
        for &i in idx {
            pos = pos * self.dim + (i.unsigned_abs() as usize - 1);
        }
        &self.entries[pos]
    }
}

#[derive(Clone)]
pub(crate) enum Rule {
    Metric,
    /// Connection coefficients of the first kind at base valence; the usual
    /// second-kind symbols are the same field with a contravariant first slot.
    Christoffel,
    Riemann,
    Ricci,
    Einstein,
    /// Traceless Ricci tensor (dimension 4).
    Plebanski,
    Weyl,
    DualWeyl,
    LeviCivita,
    Dense(Arc<DenseData>),
    /// Rank-0 field holding one expression.
    Scalar(Expr),
    CovariantD(String),
    LieD { flow: String, of: String },
    InducedMetric(String),
    SecondForm(String),
    Custom(Arc<CustomFn>),
}

pub(crate) struct Tensor {
    rank: usize,
    base_valence: Vec<i8>,
    /// Symmetry generators: slot permutation (`new[i] = old[perm[i]]`) and the
    /// sign the value picks up.
    symmetries: Symmetries,
    rule: Rule,
    cache: IndexMap<IndexTuple, Expr>,
    memo: IndexMap<IndexTuple, Expr>,
    base_evals: usize,
}

impl Tensor {
    fn new(rank: usize, base_valence: Vec<i8>, symmetries: Symmetries, rule: Rule) -> Self {
        debug_assert_eq!(rank, base_valence.len());
        Tensor {
            rank,
            base_valence,
            symmetries,
            rule,
            cache: IndexMap::new(),
            memo: IndexMap::new(),
            base_evals: 0,
        }
    }

    fn clear(&mut self) {
        self.cache.clear();
        self.memo.clear();
        self.base_evals = 0;
    }
}

enum Canon {
    /// The orbit forces the component to vanish (tuple related to itself with
    /// opposite sign).
    Zero,
    /// Lexicographically least orbit member plus the sign relating it to the
    /// input.
    Rep(IndexTuple, i8),
}

fn canonicalize(idx: &[i32], symmetries: &[(Vec<usize>, i8)]) -> Canon {
    if symmetries.is_empty() {
        return Canon::Rep(idx.to_vec(), 1);
    }
    let mut seen: BTreeMap<IndexTuple, i8> = BTreeMap::new();
    seen.insert(idx.to_vec(), 1);
    let mut queue: Vec<(IndexTuple, i8)> = vec![(idx.to_vec(), 1)];
    while let Some((t, s)) = queue.pop() {
        for (perm, psign) in symmetries {
            let nt: IndexTuple = perm.iter().map(|&p| t[p]).collect();
            let ns = s * psign;
            match seen.get(&nt) {
                Some(&old) => {
                    if old != ns {
                        return Canon::Zero;
                    }
                }
                None => {
                    seen.insert(nt.clone(), ns);
                    queue.push((nt, ns));
                }
            }
        }
    }
    let (rep, sign) = seen.into_iter().next().expect("orbit holds the input");
    Canon::Rep(rep, sign)
}

fn valence_matches(idx: &[i32], bv: &[i8]) -> bool {
    idx.iter().zip(bv).all(|(&i, &b)| (i > 0) == (b > 0))
}

fn signed(sign: i8, e: Expr) -> Expr {
    if sign < 0 {
        e.neg()
    } else {
        e
    }
}

/// `true` when `candidate` is a registered derivative-style object of `base`,
/// recognized by `base` appearing as a bracketed argument in the name
/// (`covariantD[riemann]`, `lieD[u][riemann]`, ...).
fn derived_from(candidate: &str, base: &str) -> bool {
    candidate != base && candidate.contains(&format!("[{base}]"))
}

/// Thread-safe front door; all evaluation is serialized by one internal lock.
/// Distinct sessions share nothing and may run in parallel.
pub struct Session {
    core: Mutex<SessionCore>,
}

impl Default for Session {
    fn default() -> Self {
        Session::new()
    }
}

impl Session {
    pub fn new() -> Session {
        Session {
            core: Mutex::new(SessionCore {
                manifold: None,
                registry: IndexMap::new(),
                scalars: BTreeMap::new(),
            }),
        }
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, SessionCore> {
        self.core.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// Declares the working manifold and clears every registered cache.
    pub fn open(
        &self,
        coords: Vec<Symbol>,
        g: Vec<Vec<Expr>>,
        assumptions: AssumptionSet,
    ) -> Result<()> {
        self.open_with(Manifold::open(coords, g, assumptions)?)
    }

    pub fn open_with(&self, m: Manifold) -> Result<()> {
        self.lock().install(m);
        Ok(())
    }

    pub fn dim(&self) -> Result<usize> {
        Ok(self.lock().mf()?.dim())
    }

    pub fn coords(&self) -> Result<Vec<Symbol>> {
        Ok(self.lock().mf()?.coords().to_vec())
    }

    pub fn assumptions(&self) -> Result<AssumptionSet> {
        Ok(self.lock().mf()?.assumptions().clone())
    }

    pub fn det_metric(&self) -> Result<Expr> {
        Ok(self.lock().mf()?.det_metric())
    }

    pub fn sqrt_abs_det_metric(&self) -> Result<Expr> {
        Ok(self.lock().mf()?.sqrt_abs_det_metric())
    }

    /// One simplified component, by tensor name and signed index tuple.
    pub fn component(&self, name: &str, idx: &[i32]) -> Result<Expr> {
        self.lock().component(name, idx)
    }

    /// Registers a user tensor with a custom base-component function.  An
    /// existing tensor of the same name is replaced (with its caches dropped).
    pub fn define_tensor<F>(
        &self,
        name: &str,
        base_valence: Vec<i8>,
        symmetries: Symmetries,
        base: F,
    ) -> Result<()>
    where
        F: Fn(&mut SessionCore, &[i32]) -> Result<Expr> + Send + Sync + 'static,
    {
        self.lock()
            .define(name, base_valence, symmetries, Rule::Custom(Arc::new(base)))
    }

    /// Registers a tensor backed by a dense component array (row-major,
    /// `dim^rank` entries) read at the given base valence.
    pub fn tensor_ext(&self, name: &str, valence: Vec<i8>, entries: Vec<Expr>) -> Result<()> {
        let mut core = self.lock();
        let dim = core.mf()?.dim();
        let rank = valence.len();
        let want = dim.pow(rank as u32);
        if entries.len() != want {
            return Err(Error::Other(format!(
                "tensor `{name}`: expected {want} entries for rank {rank} in dimension {dim}, got {}",
                entries.len()
            )));
        }
        let data = DenseData {
            dim,
            valence: valence.clone(),
            entries,
        };
        core.define(name, valence, Vec::new(), Rule::Dense(Arc::new(data)))
    }

    /// Request-cache keys of one tensor, in insertion order.
    pub fn cacheview(&self, name: &str) -> Result<Vec<IndexTuple>> {
        let core = self.lock();
        let t = core.get(name)?;
        Ok(t.cache.keys().cloned().collect())
    }

    /// Like `cacheview`, but also covering registered objects derived from
    /// this tensor (covariant derivatives and the like).
    pub fn associated(&self, name: &str) -> Result<Vec<(String, IndexTuple)>> {
        let core = self.lock();
        core.get(name)?;
        let mut out = Vec::new();
        for (n, t) in &core.registry {
            if n == name || derived_from(n, name) {
                for k in t.cache.keys() {
                    out.push((n.clone(), k.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Empties the caches of a tensor (and of its derived objects when the
    /// scope says so) without touching any definition.
    pub fn retreat(&self, name: &str, scope: Scope) -> Result<()> {
        let mut core = self.lock();
        core.get(name)?;
        let names: Vec<String> = core
            .registry
            .keys()
            .filter(|n| n.as_str() == name || (scope == Scope::Associated && derived_from(n, name)))
            .cloned()
            .collect();
        for n in names {
            core.registry.get_mut(&n).unwrap().clear();
        }
        Ok(())
    }

    /// Number of distinct request-cache keys since the last invalidation.
    pub fn evaluated_count(&self, name: &str) -> Result<usize> {
        Ok(self.lock().get(name)?.cache.len())
    }

    /// All nonzero request counts, in registration order.
    pub fn evaluated_counts(&self) -> Vec<(String, usize)> {
        self.lock()
            .registry
            .iter()
            .filter(|(_, t)| !t.cache.is_empty())
            .map(|(n, t)| (n.clone(), t.cache.len()))
            .collect()
    }

    /// Number of base-expression derivations performed for a tensor; repeated
    /// component requests do not increase it.
    pub fn base_evaluations(&self, name: &str) -> Result<usize> {
        Ok(self.lock().get(name)?.base_evals)
    }

    /// Trace of the Ricci tensor.
    pub fn ricci_scalar(&self) -> Result<Expr> {
        self.lock().ricci_scalar()
    }

    /// Registers (if needed) and names the covariant derivative of a tensor;
    /// the result has one extra, fully flippable index at the end.
    pub fn covariant_d(&self, name: &str) -> Result<String> {
        self.lock().covariant_d(name)
    }

    /// Registers the Lie derivative of `of` along the rank-1 field `flow`.
    pub fn lie_d(&self, flow: &str, of: &str) -> Result<String> {
        self.lock().lie_d(flow, of)
    }

    /// `sum_i grad_i grad^i f` for a scalar expression.
    pub fn scalar_laplacian(&self, f: &Expr) -> Result<Expr> {
        self.lock().scalar_laplacian(f)
    }

    /// `v_i v^i` for a registered rank-1 field.
    pub fn vector_squared(&self, name: &str) -> Result<Expr> {
        self.lock().vector_squared(name)
    }

    /// Registers the first fundamental form on hypersurfaces orthogonal to a
    /// non-null rank-1 field and returns its name.
    pub fn induced_metric(&self, v: &str) -> Result<String> {
        self.lock().induced_metric(v)
    }

    /// Registers the second fundamental form for a non-null rank-1 field.
    pub fn second_fundamental_form(&self, v: &str) -> Result<String> {
        self.lock().second_fundamental_form(v)
    }

    /// Runs a closure against the locked evaluation core; escape hatch for
    /// compound queries (sums over many components) without re-locking.
    pub fn with_core<R>(&self, f: impl FnOnce(&mut SessionCore) -> R) -> R {
        f(&mut self.lock())
    }
}

/// The evaluation guts of a session; obtained via [`Session::with_core`] or
/// inside custom base-component functions.
pub struct SessionCore {
    manifold: Option<Manifold>,
    registry: IndexMap<String, Tensor>,
    scalars: BTreeMap<String, Expr>,
}

impl SessionCore {
    pub(crate) fn mf(&self) -> Result<&Manifold> {
        self.manifold.as_ref().ok_or(Error::NoManifold)
    }

    pub fn dim(&self) -> Result<usize> {
        Ok(self.mf()?.dim())
    }

    pub fn assumptions(&self) -> Result<&AssumptionSet> {
        Ok(self.mf()?.assumptions())
    }

    pub fn manifold(&self) -> Result<&Manifold> {
        self.mf()
    }

    fn install(&mut self, m: Manifold) {
        for t in self.registry.values_mut() {
            t.clear();
        }
        self.scalars.clear();
        let dim = m.dim();
        self.manifold = Some(m);
        self.ensure_predefined(dim);
    }

    fn ensure_predefined(&mut self, dim: usize) {
        let pair_sym = vec![(vec![1, 0], 1i8)];
        let riemann_syms = vec![
            (vec![1, 0, 2, 3], -1i8),
            (vec![0, 1, 3, 2], -1i8),
            (vec![2, 3, 0, 1], 1i8),
        ];
        let entries: Vec<(&str, usize, Symmetries, Rule)> = vec![
            ("metric", 2, pair_sym.clone(), Rule::Metric),
            ("christoffel", 3, vec![(vec![0, 2, 1], 1)], Rule::Christoffel),
            ("riemann", 4, riemann_syms.clone(), Rule::Riemann),
            ("ricci", 2, pair_sym.clone(), Rule::Ricci),
            ("einstein", 2, pair_sym.clone(), Rule::Einstein),
            ("plebanski", 2, pair_sym, Rule::Plebanski),
            ("weyl", 4, riemann_syms, Rule::Weyl),
            (
                "dualweyl",
                4,
                vec![(vec![1, 0, 2, 3], -1), (vec![0, 1, 3, 2], -1)],
                Rule::DualWeyl,
            ),
            (
                "levicivita",
                dim,
                (0..dim.saturating_sub(1))
                    .map(|k| {
                        let mut p: Vec<usize> = (0..dim).collect();
                        p.swap(k, k + 1);
                        (p, -1i8)
                    })
                    .collect(),
                Rule::LeviCivita,
            ),
        ];
        for (name, rank, syms, rule) in entries {
            let t = Tensor::new(rank, vec![1; rank], syms, rule);
            self.registry.insert(name.to_string(), t);
        }
    }

    fn define(
        &mut self,
        name: &str,
        base_valence: Vec<i8>,
        symmetries: Symmetries,
        rule: Rule,
    ) -> Result<()> {
        let rank = base_valence.len();
        for (perm, _) in &symmetries {
            let mut sorted = perm.clone();
            sorted.sort_unstable();
            if sorted != (0..rank).collect::<Vec<_>>() {
                return Err(Error::Other(format!(
                    "tensor `{name}`: symmetry {perm:?} is not a permutation of 0..{rank}"
                )));
            }
        }
        if self.registry.contains_key(name) {
            log::warn!("tensor `{name}` redefined; previous cache dropped");
        }
        self.registry
            .insert(name.to_string(), Tensor::new(rank, base_valence, symmetries, rule));
        Ok(())
    }

    pub(crate) fn get(&self, name: &str) -> Result<&Tensor> {
        self.registry
            .get(name)
            .ok_or_else(|| Error::UnknownTensor(name.to_string()))
    }

    fn check_request(&self, name: &str, idx: &[i32]) -> Result<()> {
        let dim = self.mf()?.dim();
        let t = self.get(name)?;
        if idx.len() != t.rank {
            return Err(Error::WrongArity(name.to_string(), t.rank, idx.len()));
        }
        for &i in idx {
            check_index(i, dim)?;
        }
        match t.rule {
            Rule::Weyl | Rule::DualWeyl if dim < 3 => {
                return Err(Error::Dimension {
                    need: "the Weyl sector needs dimension >= 3".into(),
                    got: dim,
                })
            }
            Rule::DualWeyl | Rule::Plebanski if dim != 4 => {
                return Err(Error::NeedsDimensionFour(dim))
            }
            _ => {}
        }
        Ok(())
    }

    /// Public component access: records the request (exactly as spelled for
    /// mixed-valence tuples, orbit-canonicalized for base-valence ones) and
    /// returns the simplified value.
    pub fn component(&mut self, name: &str, idx: &[i32]) -> Result<Expr> {
        self.check_request(name, idx)?;
        let t = self.get(name)?;
        let (key, sign) = if valence_matches(idx, &t.base_valence) {
            match canonicalize(idx, &t.symmetries) {
                Canon::Zero => (idx.to_vec(), 0i8),
                Canon::Rep(k, s) => (k, s),
            }
        } else {
            (idx.to_vec(), 1)
        };
        if sign == 0 {
            self.registry
                .get_mut(name)
                .unwrap()
                .cache
                .entry(key)
                .or_insert_with(Expr::zero);
            return Ok(Expr::zero());
        }
        if let Some(v) = self.get(name)?.cache.get(&key) {
            return Ok(signed(sign, v.clone()));
        }
        let v = self.value(name, &key)?;
        self.registry
            .get_mut(name)
            .unwrap()
            .cache
            .insert(key, v.clone());
        Ok(signed(sign, v))
    }

    /// Internal component access: same values and the same no-recompute
    /// guarantee, but bypassing the request statistics.
    pub fn value(&mut self, name: &str, idx: &[i32]) -> Result<Expr> {
        self.check_request(name, idx)?;
        let t = self.get(name)?;
        if let Rule::Metric = t.rule {
            return self.mf()?.metric(idx[0], idx[1]);
        }
        let at_base = valence_matches(idx, &t.base_valence);
        let (key, sign) = if at_base {
            match canonicalize(idx, &t.symmetries) {
                Canon::Zero => return Ok(Expr::zero()),
                Canon::Rep(k, s) => (k, s),
            }
        } else {
            (idx.to_vec(), 1)
        };
        if let Some(v) = self.get(name)?.memo.get(&key) {
            return Ok(signed(sign, v.clone()));
        }
        let v = if at_base {
            let raw = self.eval_base(name, &key)?;
            self.registry.get_mut(name).unwrap().base_evals += 1;
            raw.simplify(self.mf()?.assumptions())
        } else {
            self.convert_valence(name, &key)?
        };
        self.registry
            .get_mut(name)
            .unwrap()
            .memo
            .insert(key, v.clone());
        Ok(signed(sign, v))
    }

    /// Contracts the base-valence component with one metric (or inverse
    /// metric) factor per flipped slot, skipping structurally zero factors.
    fn convert_valence(&mut self, name: &str, idx: &IndexTuple) -> Result<Expr> {
        let (bv, rank) = {
            let t = self.get(name)?;
            (t.base_valence.clone(), t.rank)
        };
        let dim = self.mf()?.dim();
        let flips: Vec<usize> = (0..rank)
            .filter(|&k| (idx[k] > 0) != (bv[k] > 0))
            .collect();
        let fixed: IndexTuple = (0..rank)
            .map(|k| (idx[k].unsigned_abs() as i32) * if bv[k] > 0 { 1 } else { -1 })
            .collect();
        let mut terms: Vec<Expr> = Vec::new();
        let mut counters = vec![1usize; flips.len()];
        loop {
            let mut factors: Vec<Expr> = Vec::new();
            let mut base = fixed.clone();
            let mut dead = false;
            {
                let m = self.mf()?;
                for (fi, &k) in flips.iter().enumerate() {
                    let s = counters[fi];
                    let a = idx[k].unsigned_abs() as usize;
                    // flipping a contravariant request onto a covariant base
                    // slot contracts with the inverse metric, and conversely
                    let fac = if idx[k] < 0 {
                        m.ginv_entry(a, s)
                    } else {
                        m.gcov_entry(a, s)
                    };
                    if fac.is_zero() {
                        dead = true;
                        break;
                    }
                    factors.push(fac.clone());
                    base[k] = (s as i32) * if bv[k] > 0 { 1 } else { -1 };
                }
            }
            if !dead {
                let inner = self.value(name, &base)?;
                if !inner.is_zero() {
                    factors.push(inner);
                    terms.push(Expr::product(factors));
                }
            }
            // odometer over the flipped slots
            let mut pos = 0;
            loop {
                if pos == counters.len() {
                    let total = Expr::sum(terms).simplify(self.mf()?.assumptions());
                    return Ok(total);
                }
                counters[pos] += 1;
                if counters[pos] <= dim {
                    break;
                }
                counters[pos] = 1;
                pos += 1;
            }
        }
    }

    fn eval_base(&mut self, name: &str, idx: &IndexTuple) -> Result<Expr> {
        let rule = self.get(name)?.rule.clone();
        match rule {
            Rule::Metric => unreachable!("metric short-circuits in value()"),
            Rule::Christoffel => curvature::christoffel_first(self, idx),
            Rule::Riemann => curvature::riemann_cov(self, idx),
            Rule::Ricci => curvature::ricci(self, idx),
            Rule::Einstein => curvature::einstein(self, idx),
            Rule::Plebanski => curvature::plebanski(self, idx),
            Rule::Weyl => curvature::weyl(self, idx),
            Rule::DualWeyl => curvature::dual_weyl(self, idx),
            Rule::LeviCivita => Ok(self.mf()?.sqrt_abs_det_metric()),
            Rule::Dense(d) => Ok(d.get(idx).clone()),
            Rule::Scalar(e) => Ok(e),
            Rule::CovariantD(of) => deriv::covariant_component(self, &of, idx),
            Rule::LieD { flow, of } => deriv::lie_component(self, &flow, &of, idx),
            Rule::InducedMetric(v) => hypersurface::induced_component(self, &v, idx),
            Rule::SecondForm(v) => hypersurface::second_form_component(self, &v, idx),
            Rule::Custom(f) => f(self, idx),
        }
    }

    /// Memoized scalar results (Ricci scalar, invariants); cleared on reopen.
    pub(crate) fn scalar_cached(
        &mut self,
        key: &str,
        compute: impl FnOnce(&mut SessionCore) -> Result<Expr>,
    ) -> Result<Expr> {
        if let Some(v) = self.scalars.get(key) {
            return Ok(v.clone());
        }
        let v = compute(self)?;
        self.scalars.insert(key.to_string(), v.clone());
        Ok(v)
    }

    pub fn ricci_scalar(&mut self) -> Result<Expr> {
        self.scalar_cached("ricciScalar", |core| {
            let dim = core.mf()?.dim();
            let mut terms = Vec::new();
            for i in 1..=dim {
                for j in 1..=dim {
                    let g = core.mf()?.ginv_entry(i, j).clone();
                    if g.is_zero() {
                        continue;
                    }
                    let r = core.component("ricci", &[i as i32, j as i32])?;
                    if r.is_zero() {
                        continue;
                    }
                    terms.push(Expr::product(vec![g, r]));
                }
            }
            Ok(Expr::sum(terms).simplify(core.mf()?.assumptions()))
        })
    }

    pub fn covariant_d(&mut self, name: &str) -> Result<String> {
        self.get(name)?;
        let derived = format!("covariantD[{name}]");
        if !self.registry.contains_key(&derived) {
            let rank = self.get(name)?.rank + 1;
            self.define(
                &derived,
                vec![1; rank],
                Vec::new(),
                Rule::CovariantD(name.to_string()),
            )?;
        }
        Ok(derived)
    }

    pub fn lie_d(&mut self, flow: &str, of: &str) -> Result<String> {
        if self.get(flow)?.rank != 1 {
            return Err(Error::Other(format!(
                "lie derivative flow `{flow}` must have rank 1"
            )));
        }
        self.get(of)?;
        let derived = format!("lieD[{flow}][{of}]");
        if !self.registry.contains_key(&derived) {
            let rank = self.get(of)?.rank;
            self.define(
                &derived,
                vec![1; rank],
                Vec::new(),
                Rule::LieD {
                    flow: flow.to_string(),
                    of: of.to_string(),
                },
            )?;
        }
        Ok(derived)
    }

    pub fn scalar_laplacian(&mut self, f: &Expr) -> Result<Expr> {
        deriv::scalar_laplacian(self, f)
    }

    pub fn vector_squared(&mut self, name: &str) -> Result<Expr> {
        hypersurface::vector_squared(self, name)
    }

    pub fn induced_metric(&mut self, v: &str) -> Result<String> {
        hypersurface::induced_metric(self, v)
    }

    pub fn second_fundamental_form(&mut self, v: &str) -> Result<String> {
        hypersurface::second_fundamental_form(self, v)
    }

    pub(crate) fn define_dense(
        &mut self,
        name: &str,
        valence: Vec<i8>,
        entries: Vec<Expr>,
    ) -> Result<()> {
        let dim = self.mf()?.dim();
        let data = DenseData {
            dim,
            valence: valence.clone(),
            entries,
        };
        self.define(name, valence, Vec::new(), Rule::Dense(Arc::new(data)))
    }

    pub(crate) fn define_rule(
        &mut self,
        name: &str,
        base_valence: Vec<i8>,
        symmetries: Symmetries,
        rule: Rule,
    ) -> Result<()> {
        self.define(name, base_valence, symmetries, rule)
    }

    pub(crate) fn define_scalar_field(&mut self, name: &str, value: Expr) -> Result<()> {
        self.registry
            .insert(name.to_string(), Tensor::new(0, Vec::new(), Vec::new(), Rule::Scalar(value)));
        Ok(())
    }

    pub(crate) fn remove_tensor(&mut self, name: &str) {
        self.registry.shift_remove(name);
    }

    pub(crate) fn has_tensor(&self, name: &str) -> bool {
        self.registry.contains_key(name)
    }

    pub fn rank_of(&self, name: &str) -> Result<usize> {
        Ok(self.get(name)?.rank)
    }
}
