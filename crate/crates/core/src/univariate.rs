//! Univariate building blocks: Leja node sequences, Lagrange bases,
//! orthonormal Legendre polynomials and Lebesgue constants on `[-1, 1]`.

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;

/// Highest Legendre order the recurrence is trusted for.
pub const MAX_LEGENDRE_ORDER: u32 = 200;

/// Default size of the candidate grid used for the Leja argmax.
pub const DEFAULT_LEJA_RESOLUTION: usize = 100_000;

// Log-products closer than this are treated as ties.
const LEJA_TIE_TOL: f64 = 1e-13;

/// Nested Leja points on `[-1, 1]`, starting at `χ_0 = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LejaSequence {
    points: Vec<f64>,
    grid_resolution: usize,
}

impl LejaSequence {
    /// Wraps externally stored nodes (e.g. read back from a model file).
    pub fn from_points(points: Vec<f64>, grid_resolution: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("empty node sequence".into()));
        }
        if let Some(&x) = points.iter().find(|x| !(-1.0..=1.0).contains(*x)) {
            return Err(Error::InvalidArgument(format!("node {x} outside [-1, 1]")));
        }
        check_distinct(&points)?;
        Ok(Self {
            points,
            grid_resolution,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn grid_resolution(&self) -> usize {
        self.grid_resolution
    }

    /// Single-column CSV with header `chi`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("chi\n");
        for x in &self.points {
            out.push_str(&format!("{x:?}\n"));
        }
        out
    }
}

/// First `n` Leja points by greedy maximisation of `∏_{j<k} |x − χ_j|` over a
/// uniform grid of `grid_resolution` points, ties going to the smaller `x`.
pub fn leja_points(n: usize, grid_resolution: usize) -> Result<LejaSequence> {
    if n == 0 {
        return Err(Error::InvalidArgument("at least one Leja point is required".into()));
    }
    if grid_resolution < 10 * n || grid_resolution < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid resolution {grid_resolution} below 10 * n = {}",
            10 * n
        )));
    }
    let denom = (grid_resolution - 1) as f64;
    // integer numerators keep the grid exactly symmetric about 0
    let grid: Vec<f64> = (0..grid_resolution).map(|i| (2.0 * i as f64 - denom) / denom).collect();
    let mut log_prod = vec![0.0_f64; grid_resolution];
    let mut points = Vec::with_capacity(n);
    let mut next = 0.0_f64;
    loop {
        points.push(next);
        if points.len() == n {
            break;
        }
        for (lp, &x) in log_prod.iter_mut().zip(&grid) {
            *lp += (x - next).abs().ln();
        }
        let mut best = 0;
        for i in 1..grid_resolution {
            if log_prod[i] > log_prod[best] + LEJA_TIE_TOL {
                best = i;
            }
        }
        next = grid[best];
    }
    Ok(LejaSequence {
        points,
        grid_resolution,
    })
}

fn check_distinct(nodes: &[f64]) -> Result<()> {
    let mut sorted = nodes.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateNode(w[0]));
        }
    }
    Ok(())
}

/// `∏_{i≠k} (x − χ_i)/(χ_k − χ_i)`.
pub fn lagrange_basis(nodes: &[f64], k: usize, x: f64) -> Result<f64> {
    if k >= nodes.len() {
        return Err(Error::InvalidArgument(format!(
            "basis index {k} out of range for {} nodes",
            nodes.len()
        )));
    }
    check_distinct(nodes)?;
    let xk = nodes[k];
    Ok(nodes
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != k)
        .map(|(_, &xi)| (x - xi) / (xk - xi))
        .product())
}

/// Barycentric weights of every node prefix `χ_0..=χ_n`, `n <= max_degree`.
///
/// `weights[n][m] = 1 / ∏_{i≤n, i≠m} (χ_m − χ_i)`.
#[derive(Clone, Debug)]
pub struct BarycentricTable {
    nodes: Vec<f64>,
    weights: Vec<Vec<f64>>,
}

impl BarycentricTable {
    pub fn new(nodes: &[f64], max_degree: usize) -> Result<Self> {
        if nodes.len() <= max_degree {
            return Err(Error::InvalidArgument(format!(
                "{} nodes cannot support degree {max_degree}",
                nodes.len()
            )));
        }
        check_distinct(&nodes[..=max_degree])?;
        let nodes = nodes[..=max_degree].to_vec();
        let weights = (0..=max_degree)
            .map(|n| {
                (0..=n)
                    .map(|m| {
                        let prod: f64 = (0..=n).filter(|&i| i != m).map(|i| nodes[m] - nodes[i]).product();
                        1.0 / prod
                    })
                    .collect()
            })
            .collect();
        Ok(Self { nodes, weights })
    }

    pub fn max_degree(&self) -> usize {
        self.weights.len() - 1
    }

    /// Values `ℓ^n_m(y)` for every `n <= max_degree` and `m <= n`.
    pub fn all_values(&self, y: f64) -> Vec<Vec<f64>> {
        let hit = self.nodes.iter().position(|&x| x == y);
        (0..=self.max_degree())
            .map(|n| match hit {
                Some(h) if h <= n => (0..=n).map(|m| if m == h { 1.0 } else { 0.0 }).collect(),
                _ => {
                    let diffs: Vec<f64> = self.nodes[..=n].iter().map(|&x| y - x).collect();
                    let mut prefix = vec![1.0; n + 1];
                    for m in 1..=n {
                        prefix[m] = prefix[m - 1] * diffs[m - 1];
                    }
                    let mut suffix = 1.0;
                    let mut vals = vec![0.0; n + 1];
                    for m in (0..=n).rev() {
                        vals[m] = self.weights[n][m] * prefix[m] * suffix;
                        suffix *= diffs[m];
                    }
                    vals
                }
            })
            .collect()
    }
}

/// Orthonormal Legendre polynomial `L_n(x) = √(2n+1) P_n(x)`, so that
/// `½ ∫_{-1}^{1} L_n² = 1`. Arguments outside `[-1, 1]` are evaluated by the
/// same recurrence.
pub fn legendre(n: u32, x: f64) -> Result<f64> {
    if n > MAX_LEGENDRE_ORDER {
        return Err(Error::OrderTooLarge {
            order: n,
            max: MAX_LEGENDRE_ORDER,
        });
    }
    Ok(((2 * n + 1) as f64).sqrt() * legendre_classical(n, x))
}

fn legendre_classical(n: u32, x: f64) -> f64 {
    let (mut p_prev, mut p) = (1.0, x);
    if n == 0 {
        return 1.0;
    }
    for k in 1..n {
        let k = k as f64;
        let p_next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
        p_prev = p;
        p = p_next;
    }
    p
}

/// `L_ν(y) = ∏_{j ∈ supp ν} L_{ν_j}(y_j)`; `y[j-1]` is the coordinate of dimension `j`.
pub fn legendre_tensor(nu: &MultiIndex, y: &[f64]) -> Result<f64> {
    let mut value = 1.0;
    for &(dim, order) in nu.entries() {
        let yj = *y.get(dim - 1).ok_or(Error::MissingCoordinate(dim))?;
        value *= legendre(order, yj)?;
    }
    Ok(value)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` (weights sum to 2).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let p = legendre_classical(n as u32, x);
            let p1 = legendre_classical(n as u32 - 1, x);
            dp = nf * (x * p - p1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Sampled Lebesgue constant: `max_x Σ_k |ℓ_k(x)|` over a uniform grid. This
/// is a lower bound for the true constant.
pub fn lebesgue_constant(nodes: &[f64], grid_resolution: usize) -> Result<f64> {
    if nodes.is_empty() {
        return Err(Error::InvalidArgument("no nodes".into()));
    }
    if grid_resolution < 2 {
        return Err(Error::InvalidArgument("grid resolution must be at least 2".into()));
    }
    let table = BarycentricTable::new(nodes, nodes.len() - 1)?;
    let degree = nodes.len() - 1;
    let denom = (grid_resolution - 1) as f64;
    let mut best: f64 = 0.0;
    for i in 0..grid_resolution {
        let x = (2.0 * i as f64 - denom) / denom;
        let vals = &table.all_values(x)[degree];
        best = best.max(vals.iter().map(|v| v.abs()).sum());
    }
    Ok(best)
}
