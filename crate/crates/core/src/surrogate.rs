//! The gpc operator surrogate `𝒟 ∘ p_N ∘ ℰ`.
//!
//! A [`CandidatePool`] fixes an enumeration `(ν_i)` whose prefixes are
//! downward closed. The allocation plan turns it into nested sets
//! `Λ_{N,1} ⊇ Λ_{N,2} ⊇ …`, one per output coordinate, and every set is a
//! prefix of the same enumeration. Since Leja nodes are nested, the grid of
//! `Λ_{N,1}` contains every other grid, so a build performs `|Λ_{N,1}|`
//! oracle solves and keeps `Σ_j |Λ_{N,j}|` scalar observations.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::allocate::{build_output_sets, plan_for_budget, AllocationPlan, Variant};
use crate::error::{Error, Result};
use crate::multiindex::{first_open_prefix, MultiIndex};
use crate::pde::Operator;
use crate::smolyak::{GridPoint, SmolyakOperator};
use crate::spaces::{
    decode, encode, lift, rescale_with_slack, sample_cube_with, CubeDomain, FourierBasisSpec, FourierField, EVAL_SLACK,
};
use crate::univariate::{lagrange_basis, leja_points, LejaSequence, DEFAULT_LEJA_RESOLUTION};

/// Leja nodes `χ_0..χ_{n−1}` on the default grid, so shorter sequences are
/// prefixes of longer ones.
pub fn shared_leja(n: usize) -> Result<Arc<LejaSequence>> {
    Ok(Arc::new(leja_points(n.max(1), DEFAULT_LEJA_RESOLUTION.max(10 * n))?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoolMode {
    Apriori,
    Adaptive,
}

impl fmt::Display for PoolMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PoolMode::Apriori => "apriori",
            PoolMode::Adaptive => "adaptive",
        })
    }
}

impl FromStr for PoolMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "apriori" => Ok(PoolMode::Apriori),
            "adaptive" => Ok(PoolMode::Adaptive),
            _ => Err(Error::config(
                "pool",
                format!("expected `apriori` or `adaptive`, got `{s}`"),
            )),
        }
    }
}

/// An enumeration of multi-indices with downward closed prefixes.
#[derive(Clone, Debug)]
pub struct CandidatePool {
    enumeration: Vec<MultiIndex>,
    priorities: Vec<f64>,
    nodes: Arc<LejaSequence>,
}

// heap entry for the a-priori search: larger key first, then smaller |ν|, then lex
#[derive(PartialEq, Eq)]
struct Ranked {
    key: i64,
    nu: MultiIndex,
}

impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .cmp(&other.key)
            .then_with(|| other.nu.total_order().cmp(&self.nu.total_order()))
            .then_with(|| other.nu.cmp(&self.nu))
    }
}

impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl CandidatePool {
    /// Decay rates `ρ_j = (1 + κ)/(r w_j^s)` on the active dimensions.
    pub fn apriori_rho(domain: &CubeDomain, kappa: f64) -> Result<Vec<f64>> {
        if !(kappa > 0.0) {
            return Err(Error::config("kappa", format!("must be positive, got {kappa}")));
        }
        let rho: Vec<f64> = (0..domain.n_act()).map(|p| (1.0 + kappa) / domain.bound(p)).collect();
        if let Some(p) = rho.iter().position(|&v| v <= 1.0) {
            return Err(Error::config(
                "kappa",
                format!("rho_{} = {} must exceed 1; increase kappa or decrease r", p + 1, rho[p]),
            ));
        }
        Ok(rho)
    }

    /// The a-priori pool ordered by `b_ν = ∏ ρ_j^{−ν_j}`.
    pub fn apriori(domain: &CubeDomain, size: usize, kappa: f64) -> Result<Self> {
        Self::apriori_from_rho(&Self::apriori_rho(domain, kappa)?, size)
    }

    /// Best-first enumeration for explicit rates `ρ_j > 1`. Ties in
    /// `log b_ν` (to 1e−9) go to smaller `|ν|`, then lexicographic order.
    pub fn apriori_from_rho(rho: &[f64], size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidArgument("pool size must be at least 1".into()));
        }
        if rho.is_empty() || rho.iter().any(|&v| !(v > 1.0)) {
            return Err(Error::InvalidArgument("all rho_j must exceed 1".into()));
        }
        let log_rho: Vec<f64> = rho.iter().map(|v| v.ln()).collect();
        let log_b = |nu: &MultiIndex| -> f64 {
            -nu.entries()
                .iter()
                .map(|&(d, o)| o as f64 * log_rho[d - 1])
                .sum::<f64>()
        };
        let key = |nu: &MultiIndex| (log_b(nu) * 1e9).round() as i64;

        let mut heap = BinaryHeap::new();
        let mut queued = HashSet::new();
        let mut members: HashSet<MultiIndex> = HashSet::new();
        let mut enumeration = Vec::with_capacity(size);
        let mut priorities = Vec::with_capacity(size);
        heap.push(Ranked {
            key: 0,
            nu: MultiIndex::zero(),
        });
        queued.insert(MultiIndex::zero());
        while enumeration.len() < size {
            let Some(Ranked { nu, .. }) = heap.pop() else { break };
            for d in 1..=rho.len() {
                let next = nu.incremented(d);
                if queued.contains(&next) {
                    continue;
                }
                let admissible = next.predecessors().all(|p| p == nu || members.contains(&p));
                if admissible {
                    queued.insert(next.clone());
                    heap.push(Ranked {
                        key: key(&next),
                        nu: next,
                    });
                }
            }
            priorities.push(log_b(&nu).exp());
            members.insert(nu.clone());
            enumeration.push(nu);
        }
        let nodes = shared_leja(max_degree(&enumeration) + 1)?;
        Ok(Self {
            enumeration,
            priorities,
            nodes,
        })
    }

    /// Dimension-adaptive greedy pool driven by hierarchical surpluses
    /// `‖𝒢(σ(y_ν)) − I_Λ 𝒢(σ(y_ν))‖` measured with pilot oracle calls.
    /// Dimension `j + 1` becomes a candidate once `e_j` is selected.
    pub fn adaptive(domain: &CubeDomain, basis: &FourierBasisSpec, oracle: &dyn Operator, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidArgument("pool size must be at least 1".into()));
        }
        let nodes = shared_leja(size)?;
        let n_act = domain.n_act();
        let observe = |nu: &MultiIndex| -> Result<Vec<f64>> {
            let y = GridPoint::new(nu.clone()).dense(&nodes, n_act);
            oracle.observe_all(&lift(domain, basis, &y)?)
        };
        let mut hier = Hierarchical::new(nodes.clone());
        let mut values: HashMap<MultiIndex, Vec<f64>> = HashMap::new();
        values.insert(MultiIndex::zero(), observe(&MultiIndex::zero())?);
        let mut enumeration = vec![MultiIndex::zero()];
        let mut priorities = vec![f64::INFINITY];
        let mut members: HashSet<MultiIndex> = [MultiIndex::zero()].into_iter().collect();
        let mut candidates: Vec<(MultiIndex, f64)> = Vec::new();
        let mut fresh: Vec<MultiIndex> = if n_act >= 1 { vec![MultiIndex::unit(1)] } else { vec![] };
        let mut top_dim = 0;

        while enumeration.len() < size {
            let new_values: Vec<Vec<f64>> = fresh.par_iter().map(&observe).collect::<Result<_>>()?;
            for (nu, v) in fresh.drain(..).zip(new_values) {
                values.insert(nu.clone(), v);
                let s = hier.surplus(&nu, &values);
                candidates.push((nu, s));
            }
            let Some(best) = candidates
                .iter()
                .enumerate()
                .max_by(|(_, a), (_, b)| {
                    a.1.total_cmp(&b.1)
                        .then_with(|| b.0.total_order().cmp(&a.0.total_order()))
                        .then_with(|| b.0.cmp(&a.0))
                })
                .map(|(k, _)| k)
            else {
                break;
            };
            let (nu, s) = candidates.swap_remove(best);
            let prio = s.min(*priorities.last().expect("nonempty"));
            members.insert(nu.clone());
            if nu.total_order() == 1 && nu.max_dim() > top_dim {
                top_dim = nu.max_dim();
                if top_dim < n_act {
                    fresh.push(MultiIndex::unit(top_dim + 1));
                }
            }
            for d in 1..=top_dim {
                let next = nu.incremented(d);
                if next.max_order() as usize >= nodes.len() {
                    continue;
                }
                if next.predecessors().all(|p| members.contains(&p)) {
                    fresh.push(next);
                }
            }
            enumeration.push(nu);
            priorities.push(prio);
        }
        Ok(Self {
            enumeration,
            priorities,
            nodes,
        })
    }

    /// Either mode; `Adaptive` without an oracle falls back to `Apriori`.
    pub fn generate(
        mode: PoolMode,
        domain: &CubeDomain,
        basis: &FourierBasisSpec,
        size: usize,
        kappa: f64,
        oracle: Option<&dyn Operator>,
    ) -> Result<Self> {
        match (mode, oracle) {
            (PoolMode::Adaptive, Some(o)) => Self::adaptive(domain, basis, o, size),
            (PoolMode::Adaptive, None) => {
                log::warn!("adaptive pool requested without an oracle, using the a-priori pool");
                Self::apriori(domain, size, kappa)
            }
            (PoolMode::Apriori, _) => Self::apriori(domain, size, kappa),
        }
    }

    /// A pool from an explicit enumeration; priorities count down.
    pub fn from_enumeration(enumeration: Vec<MultiIndex>) -> Result<Self> {
        if enumeration.is_empty() {
            return Err(Error::InvalidArgument("empty enumeration".into()));
        }
        if let Some((_, nu)) = first_open_prefix(&enumeration) {
            return Err(Error::NotDownwardClosed {
                index: nu.to_string(),
                missing: "a predecessor".into(),
            });
        }
        let n = enumeration.len();
        let nodes = shared_leja(max_degree(&enumeration) + 1)?;
        Ok(Self {
            priorities: (0..n).map(|i| (n - i) as f64).collect(),
            enumeration,
            nodes,
        })
    }

    pub fn enumeration(&self) -> &[MultiIndex] {
        &self.enumeration
    }

    pub fn priorities(&self) -> &[f64] {
        &self.priorities
    }

    pub fn nodes(&self) -> &Arc<LejaSequence> {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.enumeration.len()
    }

    pub fn is_empty(&self) -> bool {
        self.enumeration.is_empty()
    }
}

fn max_degree(indices: &[MultiIndex]) -> usize {
    indices.iter().map(|nu| nu.max_order() as usize).max().unwrap_or(0)
}

/// Hierarchical surpluses `(Δ_ν f)(y_ν)` from values on the lower box of `ν`.
struct Hierarchical {
    nodes: Arc<LejaSequence>,
    // k -> [−ℓ^{k−1}_m(χ_k) for m < k, then 1]
    factors: HashMap<u32, Vec<f64>>,
}

impl Hierarchical {
    fn new(nodes: Arc<LejaSequence>) -> Self {
        Self {
            nodes,
            factors: HashMap::new(),
        }
    }

    fn factor(&mut self, k: u32) -> &[f64] {
        let nodes = self.nodes.clone();
        self.factors.entry(k).or_insert_with(|| {
            let pts = nodes.points();
            let k = k as usize;
            let mut out: Vec<f64> = (0..k)
                .map(|m| -lagrange_basis(&pts[..k], m, pts[k]).expect("distinct Leja nodes"))
                .collect();
            out.push(1.0);
            out
        })
    }

    fn surplus(&mut self, nu: &MultiIndex, values: &HashMap<MultiIndex, Vec<f64>>) -> f64 {
        let per_dim: Vec<(usize, Vec<f64>)> = nu
            .entries()
            .iter()
            .map(|&(d, o)| (d, self.factor(o).to_vec()))
            .collect();
        let len = values[nu].len();
        let mut acc = vec![0.0; len];
        for mu in nu.lower_box() {
            let w: f64 = per_dim.iter().map(|(d, h)| h[mu.get(*d) as usize]).product();
            for (a, v) in acc.iter_mut().zip(&values[&mu]) {
                *a += w * v;
            }
        }
        acc.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Any map from a rescaled parameter point to output coefficients can stand
/// in for `p_N`.
pub trait ParametricMap {
    /// Output coefficients `⟨·, η̃_p⟩` for output ranks `0..len`.
    fn predict(&self, y: &[f64]) -> Result<Vec<f64>>;
}

/// `𝒟 ∘ map ∘ rescale ∘ ℰ`, with the evaluation slack on the cube.
pub fn compose(
    map: &dyn ParametricMap,
    domain: &CubeDomain,
    basis: &FourierBasisSpec,
    a: &FourierField,
) -> Result<FourierField> {
    let a = if a.max_mode() == basis.max_mode() {
        a.clone()
    } else {
        a.resized(basis.max_mode())
    };
    let c = encode(basis, &a)?;
    let y = rescale_with_slack(domain, &c, EVAL_SLACK)?;
    decode(basis, &map.predict(&y)?)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModelMeta {
    pub budget: usize,
    pub realized_cost: usize,
    pub config_hash: String,
}

#[derive(Clone, Debug)]
struct Group {
    op: SmolyakOperator,
    outputs: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SurrogateModel {
    basis: FourierBasisSpec,
    domain: CubeDomain,
    nodes: Arc<LejaSequence>,
    // Λ_{N,1}; every Λ_{N,j} is a prefix
    enumeration: Vec<MultiIndex>,
    // observations[j][i] = ⟨𝒢(σ(y_{ν_i})), η̃_j⟩ for i < |Λ_{N,j}|
    observations: Vec<Vec<f64>>,
    groups: Vec<Group>,
    meta: ModelMeta,
}

impl SurrogateModel {
    /// Plans the allocation for budget `budget` and builds.
    #[allow(clippy::too_many_arguments)]
    pub fn build(
        domain: &CubeDomain,
        basis: &FourierBasisSpec,
        oracle: &dyn Operator,
        pool: &CandidatePool,
        budget: usize,
        variant: Variant,
        alpha: f64,
        beta: f64,
    ) -> Result<Self> {
        if budget == 0 {
            return Err(Error::InvalidArgument("budget must be at least 1".into()));
        }
        let plan = plan_for_budget(budget, variant, alpha, beta, pool.len(), basis.n_modes())?;
        let mut model = Self::build_with_plan(domain, basis, oracle, pool, &plan)?;
        model.meta.budget = budget;
        Ok(model)
    }

    pub fn build_with_plan(
        domain: &CubeDomain,
        basis: &FourierBasisSpec,
        oracle: &dyn Operator,
        pool: &CandidatePool,
        plan: &AllocationPlan,
    ) -> Result<Self> {
        if oracle.output_basis().dim() != basis.dim() || oracle.output_basis().max_mode() != basis.max_mode() {
            return Err(Error::BasisMismatch(
                "oracle output basis differs from the model basis".into(),
            ));
        }
        if plan.output_count() > basis.n_modes() {
            return Err(Error::InvalidArgument(format!(
                "plan asks for {} output coordinates, basis has {}",
                plan.output_count(),
                basis.n_modes()
            )));
        }
        let sets = build_output_sets(pool.enumeration(), plan)?;
        let k1 = sets.first().map(|s| s.len()).unwrap_or(0);
        let enumeration = pool.enumeration()[..k1].to_vec();
        let n_nodes = max_degree(&enumeration) + 1;
        let nodes = Arc::new(LejaSequence::from_points(
            pool.nodes().points()[..n_nodes].to_vec(),
            pool.nodes().grid_resolution(),
        )?);
        let n_act = domain.n_act();
        let full: Vec<Vec<f64>> = enumeration
            .par_iter()
            .map(|nu| {
                let y = GridPoint::new(nu.clone()).dense(&nodes, n_act);
                let a = lift(domain, basis, &y)?;
                oracle
                    .observe_all(&a)
                    .inspect_err(|e| log::error!("oracle failed at grid point [{nu}]: {e}"))
            })
            .collect::<Result<_>>()?;
        let observations = sets
            .iter()
            .enumerate()
            .map(|(j, s)| full[..s.len()].iter().map(|v| v[j]).collect())
            .collect();
        let meta = ModelMeta {
            budget: plan.realized(),
            realized_cost: plan.realized(),
            config_hash: String::new(),
        };
        Self::assemble(basis.clone(), domain.clone(), nodes, enumeration, observations, meta)
    }

    /// Checks consistency and prepares the interpolation operators.
    pub(crate) fn assemble(
        basis: FourierBasisSpec,
        domain: CubeDomain,
        nodes: Arc<LejaSequence>,
        enumeration: Vec<MultiIndex>,
        observations: Vec<Vec<f64>>,
        meta: ModelMeta,
    ) -> Result<Self> {
        if observations.windows(2).any(|w| w[1].len() > w[0].len()) {
            return Err(Error::InvalidArgument("output index sets must be nested".into()));
        }
        if observations.first().map(|o| o.len()).unwrap_or(0) != enumeration.len() {
            return Err(Error::InvalidArgument("first output set must span the grid".into()));
        }
        if observations.iter().any(|o| o.is_empty()) {
            return Err(Error::InvalidArgument("empty output index set".into()));
        }
        if let Some(nu) = enumeration.iter().find(|nu| nu.max_dim() > domain.n_act()) {
            return Err(Error::InvalidArgument(format!(
                "index [{nu}] uses an inactive dimension"
            )));
        }
        let mut by_size: Vec<(usize, Vec<usize>)> = Vec::new();
        for (j, o) in observations.iter().enumerate() {
            match by_size.last_mut() {
                Some((k, outs)) if *k == o.len() => outs.push(j),
                _ => by_size.push((o.len(), vec![j])),
            }
        }
        let groups = by_size
            .into_iter()
            .map(|(k, outputs)| {
                let set = crate::multiindex::DownwardClosedSet::new(enumeration[..k].to_vec())?;
                Ok(Group {
                    op: SmolyakOperator::new(set, nodes.clone())?,
                    outputs,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            basis,
            domain,
            nodes,
            enumeration,
            observations,
            groups,
            meta,
        })
    }

    pub fn basis(&self) -> &FourierBasisSpec {
        &self.basis
    }

    pub fn domain(&self) -> &CubeDomain {
        &self.domain
    }

    pub fn nodes(&self) -> &Arc<LejaSequence> {
        &self.nodes
    }

    /// `Λ_{N,1}` in enumeration order.
    pub fn grid_indices(&self) -> &[MultiIndex] {
        &self.enumeration
    }

    /// Number of interpolated output coordinates.
    pub fn output_count(&self) -> usize {
        self.observations.len()
    }

    /// `|Λ_{N,j}|` for output rank `j` (0-based).
    pub fn set_size(&self, j: usize) -> usize {
        self.observations[j].len()
    }

    /// Stored observations of output rank `j`, aligned with the grid.
    pub fn observations(&self, j: usize) -> &[f64] {
        &self.observations[j]
    }

    /// `Σ_j |Λ_{N,j}|`.
    pub fn realized_cost(&self) -> usize {
        self.observations.iter().map(Vec::len).sum()
    }

    pub fn meta(&self) -> &ModelMeta {
        &self.meta
    }

    pub fn set_config_hash(&mut self, hash: impl Into<String>) {
        self.meta.config_hash = hash.into();
    }

    pub(crate) fn set_meta(&mut self, meta: ModelMeta) {
        self.meta = meta;
    }

    /// `ℰ(a)` rescaled into the cube with the evaluation slack.
    pub fn parameter_point(&self, a: &FourierField) -> Result<Vec<f64>> {
        let a = if a.max_mode() == self.basis.max_mode() {
            a.clone()
        } else {
            a.resized(self.basis.max_mode())
        };
        rescale_with_slack(&self.domain, &encode(&self.basis, &a)?, EVAL_SLACK)
    }

    pub fn evaluate(&self, a: &FourierField) -> Result<FourierField> {
        compose(self, &self.domain, &self.basis, a)
    }
}

impl ParametricMap for SurrogateModel {
    fn predict(&self, y: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.observations.len()];
        for g in &self.groups {
            let w = g.op.point_weights(y)?;
            for &j in &g.outputs {
                out[j] = w.iter().zip(&self.observations[j]).map(|(a, b)| a * b).sum();
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub label: &'static str,
    pub n_points: usize,
    /// Worst case: the sampled maximum. Mean square: the mean of squared errors.
    pub value: f64,
    /// Standard error of the mean for the mean-square estimate, 0 otherwise.
    pub std_error: f64,
    pub argmax: Vec<f64>,
    /// Largest output-truncation tail among the points.
    pub truncation_tail: f64,
}

/// Error `‖𝒢(σ(y)) − 𝒢̃(σ(y))‖_𝒴` and the truncation tail at each point.
fn pointwise_errors(model: &SurrogateModel, oracle: &dyn Operator, points: &[Vec<f64>]) -> Result<Vec<(f64, f64)>> {
    points
        .par_iter()
        .map(|y| {
            let a = lift(&model.domain, &model.basis, y)?;
            let exact = oracle.observe_all(&a)?;
            let outside = oracle.output_tail(&a)?;
            let approx = model.predict(&model.parameter_point(&a)?)?;
            let mut inside = 0.0;
            let mut dropped = 0.0;
            for (p, &e) in exact.iter().enumerate() {
                match approx.get(p) {
                    Some(v) => inside += (e - v) * (e - v),
                    None => dropped += e * e,
                }
            }
            let tail = (dropped + outside * outside).sqrt();
            Ok(((inside + tail * tail).sqrt(), tail))
        })
        .collect()
}

/// Sign patterns on the first `min(3, n_act)` dimensions plus the two
/// constant corners `±(1,…,1)`.
pub fn corner_points(n_act: usize) -> Vec<Vec<f64>> {
    let k = n_act.min(3);
    let mut out: Vec<Vec<f64>> = (0..1usize << k)
        .map(|bits| {
            let mut y = vec![0.0; n_act];
            for (i, v) in y.iter_mut().take(k).enumerate() {
                *v = if bits >> i & 1 == 1 { -1.0 } else { 1.0 };
            }
            y
        })
        .collect();
    if n_act > k {
        out.push(vec![1.0; n_act]);
        out.push(vec![-1.0; n_act]);
    }
    out
}

pub fn sample_points(domain: &CubeDomain, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sample_cube_with(domain, &mut rng)).collect()
}

/// Sampled lower bound of `sup_y ‖𝒢(σ(y)) − 𝒢̃_N(σ(y))‖_𝒴` over `n_samples`
/// uniform points and the corner set.
pub fn worst_case_error(
    model: &SurrogateModel,
    oracle: &dyn Operator,
    n_samples: usize,
    seed: u64,
) -> Result<ErrorReport> {
    let mut points = sample_points(&model.domain, n_samples, seed);
    points.extend(corner_points(model.domain.n_act()));
    let errs = pointwise_errors(model, oracle, &points)?;
    let (k, &(value, _)) = errs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .0.total_cmp(&b.1 .0).then_with(|| Reverse(a.0).cmp(&Reverse(b.0))))
        .expect("corner set is nonempty");
    Ok(ErrorReport {
        label: "sampled lower bound of the worst-case error",
        n_points: points.len(),
        value,
        std_error: 0.0,
        argmax: points[k].clone(),
        truncation_tail: errs.iter().map(|e| e.1).fold(0.0, f64::max),
    })
}

/// Monte Carlo estimate of `∫ ‖𝒢(σ(y)) − 𝒢̃_N(σ(y))‖²_𝒴 dμ(y)`.
pub fn mean_square_error(
    model: &SurrogateModel,
    oracle: &dyn Operator,
    n_samples: usize,
    seed: u64,
) -> Result<ErrorReport> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("mean-square error needs samples".into()));
    }
    let points = sample_points(&model.domain, n_samples, seed);
    let errs = pointwise_errors(model, oracle, &points)?;
    let sq: Vec<f64> = errs.iter().map(|e| e.0 * e.0).collect();
    let n = sq.len() as f64;
    let mean = sq.iter().sum::<f64>() / n;
    let var = if sq.len() > 1 {
        sq.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let (k, _) = errs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .0.total_cmp(&b.1 .0).then_with(|| Reverse(a.0).cmp(&Reverse(b.0))))
        .expect("nonempty");
    Ok(ErrorReport {
        label: "Monte Carlo mean-square error",
        n_points: sq.len(),
        value: mean,
        std_error: (var / n).sqrt(),
        argmax: points[k].clone(),
        truncation_tail: errs.iter().map(|e| e.1).fold(0.0, f64::max),
    })
}
