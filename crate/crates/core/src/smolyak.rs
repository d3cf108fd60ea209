//! Tensorised Lagrange interpolation `I_ν` and the Smolyak combination
//! `I_Λ = Σ_{ν∈Λ} ς_{Λ,ν} I_ν` over nested Leja nodes.
//!
//! Because the node family is nested, the grid of a downward closed set
//! `Λ` is `{(χ_{ν_j})_j : ν ∈ Λ}` and every term `I_ν` reads its samples
//! from that one table: building `I_Λ f` costs exactly `|Λ|` evaluations.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::multiindex::{DownwardClosedSet, MultiIndex};
use crate::univariate::{BarycentricTable, LejaSequence};

/// A sparse-grid point, identified by the node position used in each
/// dimension. Unlisted dimensions sit at `χ_0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    index: MultiIndex,
}

impl GridPoint {
    pub fn new(index: MultiIndex) -> Self {
        Self { index }
    }

    pub fn index(&self) -> &MultiIndex {
        &self.index
    }

    /// Listed coordinates `(dim, χ_{μ_dim})`.
    pub fn coords(&self, nodes: &LejaSequence) -> Vec<(usize, f64)> {
        self.index
            .entries()
            .iter()
            .map(|&(d, o)| (d, nodes.points()[o as usize]))
            .collect()
    }

    /// Dense coordinates for dimensions `1..=n_dims`.
    pub fn dense(&self, nodes: &LejaSequence, n_dims: usize) -> Vec<f64> {
        let mut y = vec![nodes.points()[0]; n_dims.max(self.index.max_dim())];
        for (d, x) in self.coords(nodes) {
            y[d - 1] = x;
        }
        y
    }
}

pub type SampleTable = HashMap<GridPoint, f64>;

/// `(I_ν f)(y)` by direct summation over all `μ ≤ ν`.
pub fn tensor_interpolate<F>(nu: &MultiIndex, mut f: F, nodes: &LejaSequence, y: &[f64]) -> Result<f64>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let degree = nu.max_order() as usize;
    if nodes.len() <= degree {
        return Err(Error::InvalidArgument(format!(
            "{} nodes cannot interpolate degree {degree}",
            nodes.len()
        )));
    }
    let table = BarycentricTable::new(nodes.points(), degree)?;
    let mut factors: HashMap<usize, Vec<f64>> = HashMap::new();
    for &(d, o) in nu.entries() {
        let yd = *y.get(d - 1).ok_or(Error::MissingCoordinate(d))?;
        factors.insert(d, table.all_values(yd).swap_remove(o as usize));
    }
    let n_dims = y.len().max(nu.max_dim());
    let mut total = 0.0;
    for mu in nu.lower_box() {
        let point = GridPoint::new(mu.clone()).dense(nodes, n_dims);
        let weight: f64 = nu
            .entries()
            .iter()
            .map(|&(d, _)| factors[&d][mu.get(d) as usize])
            .product();
        total += weight * f(&point)?;
    }
    Ok(total)
}

/// The Smolyak interpolation operator of a downward closed set.
#[derive(Clone, Debug)]
pub struct SmolyakOperator {
    lambda: DownwardClosedSet,
    coeffs: Vec<(MultiIndex, i64)>,
    nodes: Arc<LejaSequence>,
    active_dims: Vec<usize>,
    table: BarycentricTable,
}

impl SmolyakOperator {
    pub fn new(lambda: DownwardClosedSet, nodes: Arc<LejaSequence>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::InvalidArgument("empty index set".into()));
        }
        let degree = lambda.max_degree() as usize;
        if nodes.len() <= degree {
            return Err(Error::InvalidArgument(format!(
                "{} nodes cannot support max degree {degree}",
                nodes.len()
            )));
        }
        let table = BarycentricTable::new(nodes.points(), degree)?;
        let coeffs = lambda.combination_coefficients();
        let active_dims = lambda.active_dim_list();
        Ok(Self {
            lambda,
            coeffs,
            nodes,
            active_dims,
            table,
        })
    }

    pub fn lambda(&self) -> &DownwardClosedSet {
        &self.lambda
    }

    /// Nonzero combination coefficients in set order.
    pub fn coeffs(&self) -> &[(MultiIndex, i64)] {
        &self.coeffs
    }

    pub fn nodes(&self) -> &LejaSequence {
        &self.nodes
    }

    pub fn active_dims(&self) -> &[usize] {
        &self.active_dims
    }

    /// The `|Λ|` grid points, in the order of `Λ`.
    pub fn grid(&self) -> Vec<GridPoint> {
        self.lambda.indices().iter().cloned().map(GridPoint::new).collect()
    }

    /// CSV of grid coordinates over the active dimensions.
    pub fn grid_csv(&self) -> String {
        let mut out = self
            .active_dims
            .iter()
            .map(|d| format!("y{d}"))
            .collect::<Vec<_>>()
            .join(",");
        out.push('\n');
        let n_dims = self.active_dims.last().copied().unwrap_or(0);
        for g in self.grid() {
            let y = g.dense(&self.nodes, n_dims);
            let row: Vec<String> = self.active_dims.iter().map(|&d| format!("{:?}", y[d - 1])).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Weights `W_i(y)` with `(I_Λ f)(y) = Σ_i W_i(y) f(grid_i)`, aligned with `Λ`.
    pub fn point_weights(&self, y: &[f64]) -> Result<Vec<f64>> {
        let mut factors: Vec<Option<Vec<Vec<f64>>>> = Vec::new();
        for &d in &self.active_dims {
            let yd = *y.get(d - 1).ok_or(Error::MissingCoordinate(d))?;
            if factors.len() < d {
                factors.resize(d, None);
            }
            factors[d - 1] = Some(self.table.all_values(yd));
        }
        let mut weights = vec![0.0; self.lambda.len()];
        for (nu, c) in &self.coeffs {
            self.accumulate(nu.entries(), 0, MultiIndex::zero(), *c as f64, &factors, &mut weights);
        }
        Ok(weights)
    }

    fn accumulate(
        &self,
        entries: &[(usize, u32)],
        k: usize,
        mu: MultiIndex,
        weight: f64,
        factors: &[Option<Vec<Vec<f64>>>],
        out: &mut [f64],
    ) {
        if k == entries.len() {
            let pos = self
                .lambda
                .position(&mu)
                .expect("box of a member lies in a downward closed set");
            out[pos] += weight;
            return;
        }
        let (d, order) = entries[k];
        let vals = &factors[d - 1].as_ref().expect("active dimension")[order as usize];
        for (m, &v) in vals.iter().enumerate() {
            let next = if m == 0 {
                mu.clone()
            } else {
                mu.with_appended(d, m as u32)
            };
            self.accumulate(entries, k + 1, next, weight * v, factors, out);
        }
    }

    /// `(I_Λ f)(y)` from values aligned with the grid order.
    pub fn interpolate_values(&self, values: &[f64], y: &[f64]) -> Result<f64> {
        if values.len() != self.lambda.len() {
            return Err(Error::InvalidArgument(format!(
                "{} values for a grid of {} points",
                values.len(),
                self.lambda.len()
            )));
        }
        let w = self.point_weights(y)?;
        Ok(w.iter().zip(values).map(|(a, b)| a * b).sum())
    }

    /// `(I_Λ f)(y)` from a sample table keyed by grid point.
    pub fn interpolate(&self, samples: &SampleTable, y: &[f64]) -> Result<f64> {
        let values = self
            .grid()
            .into_iter()
            .map(|g| {
                samples
                    .get(&g)
                    .copied()
                    .ok_or_else(|| Error::MissingSample(g.index().to_string()))
            })
            .collect::<Result<Vec<f64>>>()?;
        self.interpolate_values(&values, y)
    }

    /// Samples `f` at every grid point; exactly `|Λ|` calls.
    pub fn sample<F>(&self, mut f: F) -> Result<SampleTable>
    where
        F: FnMut(&[f64]) -> Result<f64>,
    {
        let n_dims = self.active_dims.last().copied().unwrap_or(0);
        self.grid()
            .into_iter()
            .map(|g| {
                let y = g.dense(&self.nodes, n_dims);
                Ok((g, f(&y)?))
            })
            .collect()
    }
}

pub fn grid(lambda: &DownwardClosedSet, nodes: Arc<LejaSequence>) -> Result<Vec<GridPoint>> {
    Ok(SmolyakOperator::new(lambda.clone(), nodes)?.grid())
}

pub fn interpolate(op: &SmolyakOperator, samples: &SampleTable, y: &[f64]) -> Result<f64> {
    op.interpolate(samples, y)
}
