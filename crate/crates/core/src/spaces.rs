//! Real Fourier bases on the unit torus, the encoder/decoder pair, weight
//! sequences and the parameter cube.
//!
//! The one-dimensional family is `ξ_0 = 1`, `ξ_{2k} = √2 cos(2πkx)`,
//! `ξ_{2k−1} = √2 sin(2πkx)`, orthonormal in `L²([0,1])`. A mode is a tuple
//! `𝐣 ∈ {0,…,2M}^d` and `|𝐣|` is its Euclidean length. Coefficient
//! sequences are indexed by the rank of a mode in the `(|𝐣|, lex)`
//! enumeration, so rank 0 is the constant mode.

use std::f64::consts::{PI, SQRT_2};
use std::fmt::Write as _;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type Mode = Vec<usize>;

/// Relative tolerance accepted by [`rescale`] for roundoff at the cube boundary.
pub const RESCALE_ROUNDOFF: f64 = 1e-12;

/// Slack accepted by surrogate evaluation before clamping.
pub const EVAL_SLACK: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct FourierBasisSpec {
    dim: usize,
    max_mode: usize,
    s0: f64,
    t0: f64,
    modes: Arc<Vec<Mode>>,
    // flat position -> enumeration rank
    rank: Arc<Vec<usize>>,
}

impl PartialEq for FourierBasisSpec {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.max_mode == other.max_mode && self.s0 == other.s0 && self.t0 == other.t0
    }
}

impl FourierBasisSpec {
    pub fn new(dim: usize, max_mode: usize, s0: f64, t0: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::config("dim", format!("must be 1, 2 or 3, got {dim}")));
        }
        if max_mode == 0 {
            return Err(Error::config("max_mode", "must be at least 1"));
        }
        if !(s0 >= 0.0 && s0.is_finite()) {
            return Err(Error::config("s0", format!("must be >= 0, got {s0}")));
        }
        if !(0.0..=1.0).contains(&t0) {
            return Err(Error::config("t0", format!("must lie in [0, 1], got {t0}")));
        }
        let side = 2 * max_mode + 1;
        let total = side.pow(dim as u32);
        let mut modes: Vec<Mode> = (0..total).map(|p| unflatten(p, side, dim)).collect();
        modes.sort_by(|a, b| norm_sq(a).cmp(&norm_sq(b)).then_with(|| a.cmp(b)));
        let mut rank = vec![0; total];
        for (k, m) in modes.iter().enumerate() {
            rank[flatten(m, side)] = k;
        }
        Ok(Self {
            dim,
            max_mode,
            s0,
            t0,
            modes: Arc::new(modes),
            rank: Arc::new(rank),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_mode(&self) -> usize {
        self.max_mode
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// Index range per axis is `0..side`.
    pub fn side(&self) -> usize {
        2 * self.max_mode + 1
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    /// Modes in enumeration order.
    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn mode(&self, rank: usize) -> &Mode {
        &self.modes[rank]
    }

    pub fn rank_of(&self, mode: &[usize]) -> Option<usize> {
        if mode.len() != self.dim || mode.iter().any(|&j| j >= self.side()) {
            return None;
        }
        Some(self.rank[flatten(mode, self.side())])
    }

    /// Same mode layout, different scale exponents.
    pub fn with_scales(&self, s0: f64, t0: f64) -> Result<Self> {
        let mut b = Self::new(self.dim, self.max_mode, s0, t0)?;
        b.modes = self.modes.clone();
        b.rank = self.rank.clone();
        Ok(b)
    }

    fn check_field(&self, u: &FourierField) -> Result<()> {
        if u.dim != self.dim || u.max_mode != self.max_mode {
            return Err(Error::BasisMismatch(format!(
                "field has dim {} and max_mode {}, basis has dim {} and max_mode {}",
                u.dim, u.max_mode, self.dim, self.max_mode
            )));
        }
        Ok(())
    }
}

fn norm_sq(mode: &[usize]) -> usize {
    mode.iter().map(|&j| j * j).sum()
}

/// `max{1, |𝐣|}`.
pub fn mode_scale(mode: &[usize]) -> f64 {
    (norm_sq(mode) as f64).sqrt().max(1.0)
}

// axis 0 varies slowest
fn flatten(mode: &[usize], side: usize) -> usize {
    mode.iter().fold(0, |acc, &j| acc * side + j)
}

fn unflatten(mut p: usize, side: usize, dim: usize) -> Mode {
    let mut m = vec![0; dim];
    for k in (0..dim).rev() {
        m[k] = p % side;
        p /= side;
    }
    m
}

/// One-dimensional basis function `ξ_j(x)`.
pub fn xi_1d(j: usize, x: f64) -> f64 {
    if j == 0 {
        return 1.0;
    }
    let k = j.div_ceil(2) as f64;
    if j.is_multiple_of(2) {
        SQRT_2 * (2.0 * PI * k * x).cos()
    } else {
        SQRT_2 * (2.0 * PI * k * x).sin()
    }
}

pub fn xi(mode: &[usize], x: &[f64]) -> f64 {
    mode.iter().zip(x).map(|(&j, &xk)| xi_1d(j, xk)).product()
}

/// Truncated real Fourier coefficients with respect to `ξ_𝐣`, stored densely
/// with axis 0 varying slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierField {
    dim: usize,
    max_mode: usize,
    coeffs: Vec<f64>,
}

impl FourierField {
    pub fn zeros(dim: usize, max_mode: usize) -> Self {
        let side = 2 * max_mode + 1;
        Self {
            dim,
            max_mode,
            coeffs: vec![0.0; side.pow(dim as u32)],
        }
    }

    pub fn zeros_like(basis: &FourierBasisSpec) -> Self {
        Self::zeros(basis.dim, basis.max_mode)
    }

    pub fn from_dense(dim: usize, max_mode: usize, coeffs: Vec<f64>) -> Result<Self> {
        let side = 2 * max_mode + 1;
        if coeffs.len() != side.pow(dim as u32) {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for dim {dim}, max_mode {max_mode}",
                coeffs.len()
            )));
        }
        Ok(Self { dim, max_mode, coeffs })
    }

    /// A field with the given `(mode, coefficient)` entries.
    pub fn from_modes(dim: usize, max_mode: usize, entries: &[(Mode, f64)]) -> Result<Self> {
        let mut u = Self::zeros(dim, max_mode);
        for (m, c) in entries {
            u.set(m, *c)?;
        }
        Ok(u)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_mode(&self) -> usize {
        self.max_mode
    }

    pub fn side(&self) -> usize {
        2 * self.max_mode + 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    fn position(&self, mode: &[usize]) -> Result<usize> {
        if mode.len() != self.dim || mode.iter().any(|&j| j >= self.side()) {
            return Err(Error::InvalidArgument(format!(
                "mode {mode:?} outside truncation (dim {}, max_mode {})",
                self.dim, self.max_mode
            )));
        }
        Ok(flatten(mode, self.side()))
    }

    /// Coefficient at `mode`; zero beyond the truncation.
    pub fn get(&self, mode: &[usize]) -> f64 {
        self.position(mode).map(|p| self.coeffs[p]).unwrap_or(0.0)
    }

    pub fn set(&mut self, mode: &[usize], value: f64) -> Result<()> {
        let p = self.position(mode)?;
        self.coeffs[p] = value;
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let side = self.side();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(p, c)| c * xi(&unflatten(p, side, self.dim), x))
            .sum()
    }

    /// `(Σ c_𝐣² max{1,|𝐣|}^{2s})^{1/2}`.
    pub fn hs_norm(&self, s: f64) -> f64 {
        let side = self.side();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(p, c)| c * c * mode_scale(&unflatten(p, side, self.dim)).powf(2.0 * s))
            .sum::<f64>()
            .sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Re-truncates to `max_mode`, padding with zeros or dropping modes.
    pub fn resized(&self, max_mode: usize) -> Self {
        let mut out = Self::zeros(self.dim, max_mode);
        let side = self.side();
        for (p, &c) in self.coeffs.iter().enumerate() {
            if c != 0.0 {
                let m = unflatten(p, side, self.dim);
                let _ = out.set(&m, c);
            }
        }
        out
    }

    pub fn axpy(&mut self, alpha: f64, other: &FourierField) -> Result<()> {
        if other.dim != self.dim || other.max_mode != self.max_mode {
            return Err(Error::BasisMismatch("axpy on different truncations".into()));
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += alpha * b;
        }
        Ok(())
    }

    /// CSV with columns `j1..jd,value`, one row per mode.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for k in 1..=self.dim {
            let _ = write!(out, "j{k},");
        }
        out.push_str("value\n");
        let side = self.side();
        for (p, c) in self.coeffs.iter().enumerate() {
            for j in unflatten(p, side, self.dim) {
                let _ = write!(out, "{j},");
            }
            let _ = writeln!(out, "{c:e}");
        }
        out
    }

    /// Parses [`FourierField::to_csv`] output. Rows may be sparse; the
    /// truncation is the smallest one holding every listed mode unless
    /// `max_mode` is given.
    pub fn from_csv(text: &str, max_mode: Option<usize>) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty field file"))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        let dim = cols.len().saturating_sub(1);
        let expected: Vec<String> = (1..=dim).map(|k| format!("j{k}")).chain(["value".into()]).collect();
        if !(1..=3).contains(&dim) || cols != expected {
            return Err(Error::parse(
                1,
                format!("expected header j1..jd,value, found `{header}`"),
            ));
        }
        let mut entries = Vec::new();
        let mut top = 0;
        for (ln, line) in lines {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != dim + 1 {
                return Err(Error::parse(ln + 1, format!("expected {} columns", dim + 1)));
            }
            let mode = fields[..dim]
                .iter()
                .map(|f| f.parse::<usize>())
                .collect::<std::result::Result<Mode, _>>()
                .map_err(|e| Error::parse(ln + 1, e.to_string()))?;
            let value: f64 = fields[dim]
                .parse()
                .map_err(|e: std::num::ParseFloatError| Error::parse(ln + 1, e.to_string()))?;
            top = top.max(mode.iter().copied().max().unwrap_or(0));
            entries.push((mode, value));
        }
        let needed = top.div_ceil(2).max(1);
        let m = match max_mode {
            Some(m) if m < needed && entries.iter().any(|(md, v)| *v != 0.0 && md.iter().any(|&j| j > 2 * m)) => {
                return Err(Error::BasisMismatch(format!(
                    "field has nonzero modes beyond max_mode {m}"
                )))
            }
            Some(m) => m,
            None => needed,
        };
        let mut u = Self::zeros(dim, m);
        for (mode, v) in entries {
            if mode.iter().all(|&j| j <= 2 * m) {
                u.set(&mode, v)?;
            }
        }
        Ok(u)
    }
}

/// `w_𝐣 = max{1,|𝐣|}^{−power}`; the default power is the dimension.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightSequence {
    pub power: f64,
}

impl WeightSequence {
    pub fn standard(dim: usize) -> Self {
        Self { power: dim as f64 }
    }

    pub fn weight(&self, mode: &[usize]) -> f64 {
        mode_scale(mode).powf(-self.power)
    }

    /// Weights along the enumeration of `basis`.
    pub fn along(&self, basis: &FourierBasisSpec) -> Vec<f64> {
        basis.modes().iter().map(|m| self.weight(m)).collect()
    }
}

/// The truncated parameter cube and its image `C_r^s`.
#[derive(Clone, Debug, PartialEq)]
pub struct CubeDomain {
    r: f64,
    s: f64,
    n_act: usize,
    weights: WeightSequence,
    // r·w_p^s for every input mode rank p
    bounds: Vec<f64>,
}

impl CubeDomain {
    pub fn new(r: f64, s: f64, n_act: usize, weights: WeightSequence, basis: &FourierBasisSpec) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::config("r", format!("must be positive, got {r}")));
        }
        if !(s > 1.0 && s.is_finite()) {
            return Err(Error::config("s", format!("must be > 1, got {s}")));
        }
        if n_act == 0 || n_act > basis.n_modes() {
            return Err(Error::config(
                "n_act",
                format!("must lie in 1..={}, got {n_act}", basis.n_modes()),
            ));
        }
        let bounds = weights.along(basis).iter().map(|w| r * w.powf(s)).collect();
        Ok(Self {
            r,
            s,
            n_act,
            weights,
            bounds,
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn n_act(&self) -> usize {
        self.n_act
    }

    pub fn weights(&self) -> WeightSequence {
        self.weights
    }

    /// `r·w_p^s` for parameter rank `p` (0-based).
    pub fn bound(&self, p: usize) -> f64 {
        self.bounds[p]
    }

    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }

    /// `r·(Σ_{p ≥ n_act} w_p^{2s})^{1/2}` over the modes of the input truncation.
    pub fn truncation_bias_bound(&self) -> f64 {
        self.bounds[self.n_act..].iter().map(|b| b * b).sum::<f64>().sqrt()
    }

    /// `r·(Σ_{p < n_act} w_p^{2s})^{1/2}`, the largest lifted norm.
    pub fn lift_norm_bound(&self) -> f64 {
        self.bounds[..self.n_act].iter().map(|b| b * b).sum::<f64>().sqrt()
    }
}

/// `(⟨u, ψ̃_𝐣⟩)` in enumeration order.
pub fn encode(basis: &FourierBasisSpec, u: &FourierField) -> Result<Vec<f64>> {
    basis.check_field(u)?;
    Ok(basis
        .modes()
        .iter()
        .map(|m| u.get(m) * mode_scale(m).powf(basis.s0))
        .collect())
}

/// `Σ c_p η_p`; `c` may be shorter than the enumeration.
pub fn decode(basis: &FourierBasisSpec, c: &[f64]) -> Result<FourierField> {
    if c.len() > basis.n_modes() {
        return Err(Error::InvalidArgument(format!(
            "{} coefficients exceed the {} modes of the truncation",
            c.len(),
            basis.n_modes()
        )));
    }
    let mut u = FourierField::zeros_like(basis);
    for (p, &v) in c.iter().enumerate() {
        let m = basis.mode(p);
        u.set(m, v * mode_scale(m).powf(-basis.t0))?;
    }
    Ok(u)
}

/// `(⟨u, η̃_𝐣⟩)` in enumeration order, the coordinates that [`decode`] inverts.
pub fn output_coefficients(basis: &FourierBasisSpec, u: &FourierField) -> Result<Vec<f64>> {
    basis.check_field(u)?;
    Ok(basis
        .modes()
        .iter()
        .map(|m| u.get(m) * mode_scale(m).powf(basis.t0))
        .collect())
}

pub fn hs_norm(u: &FourierField, s: f64) -> f64 {
    u.hs_norm(s)
}

/// `‖u‖_{𝒳^s} = (Σ_p ⟨u,ψ̃_p⟩² w_p^{−2s})^{1/2}`.
pub fn xs_norm(basis: &FourierBasisSpec, weights: &WeightSequence, u: &FourierField, s: f64) -> Result<f64> {
    let c = encode(basis, u)?;
    Ok(basis
        .modes()
        .iter()
        .zip(&c)
        .map(|(m, v)| v * v * weights.weight(m).powf(-2.0 * s))
        .sum::<f64>()
        .sqrt())
}

/// `σ_r^s(y) = r Σ_{p < n_act} w_p^s y_p ψ_p`.
pub fn lift(domain: &CubeDomain, basis: &FourierBasisSpec, y: &[f64]) -> Result<FourierField> {
    let mut u = FourierField::zeros_like(basis);
    for (p, &yp) in y.iter().enumerate() {
        if !(-1.0..=1.0).contains(&yp) {
            return Err(Error::CoordinateOutOfRange { dim: p + 1, value: yp });
        }
        if p >= domain.n_act {
            if yp != 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "coordinate y_{} is beyond the {} active dimensions",
                    p + 1,
                    domain.n_act
                )));
            }
            continue;
        }
        let m = basis.mode(p);
        u.set(m, domain.bound(p) * yp * mode_scale(m).powf(-basis.s0))?;
    }
    Ok(u)
}

/// `y_p = c_p / (r w_p^s)` on the active dimensions. Accepts a relative
/// roundoff of [`RESCALE_ROUNDOFF`] and clamps into `[−1, 1]`.
pub fn rescale(domain: &CubeDomain, c: &[f64]) -> Result<Vec<f64>> {
    rescale_with_slack(domain, c, RESCALE_ROUNDOFF)
}

/// As [`rescale`] with an explicit relative slack. Coordinates beyond
/// `n_act` are checked against the same bound and then dropped.
pub fn rescale_with_slack(domain: &CubeDomain, c: &[f64], slack: f64) -> Result<Vec<f64>> {
    if c.len() > domain.bounds.len() {
        return Err(Error::InvalidArgument(format!(
            "{} coefficients for a truncation of {} modes",
            c.len(),
            domain.bounds.len()
        )));
    }
    let mut y = vec![0.0; domain.n_act];
    for (p, &cp) in c.iter().enumerate() {
        let bound = domain.bound(p);
        if !(cp.abs() <= bound * (1.0 + slack)) {
            return Err(Error::CubeMembership {
                index: p + 1,
                value: cp.abs(),
                bound,
            });
        }
        if p < domain.n_act {
            y[p] = (cp / bound).clamp(-1.0, 1.0);
        }
    }
    Ok(y)
}

/// Whether encoder coefficients lie in `C_r^s` without slack.
pub fn in_cube(domain: &CubeDomain, c: &[f64]) -> bool {
    c.len() <= domain.bounds.len() && c.iter().zip(&domain.bounds).all(|(v, b)| v.abs() <= *b)
}

/// One uniform point on the active dimensions, deterministic in `seed`.
pub fn sample_cube(domain: &CubeDomain, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_cube_with(domain, &mut rng)
}

pub fn sample_cube_with<R: Rng>(domain: &CubeDomain, rng: &mut R) -> Vec<f64> {
    (0..domain.n_act).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}
