//! Pseudo-spectral solver for `−∇·((ā + a)∇u) = f` on the unit torus with
//! zero-mean `u`.
//!
//! Unknowns are complex Fourier coefficients `û_k`, `k ∈ [−K, K]^d`, stored
//! in FFT order on a collocation grid of `n = 3K + 1` points per axis. The
//! coefficient product is formed on that grid, which is wide enough for the
//! Galerkin projection of `c ∂_i u` to be alias free when `c` has band `≤ K`.
//! The linear system is solved by preconditioned conjugate residuals with
//! the inverse Laplacian as preconditioner; the recorded residual is
//! `‖r‖_{H^{−1}}`, which this iteration decreases monotonically.

use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::spaces::{mode_scale, output_coefficients, FourierBasisSpec, FourierField, Mode};

pub const DEFAULT_CG_TOL: f64 = 1e-12;
pub const DEFAULT_A_MIN: f64 = 1e-3;

/// A map from input fields to output coefficients `⟨𝒢(a), η̃_p⟩` in the
/// enumeration order of [`Operator::output_basis`].
pub trait Operator: Sync {
    fn output_basis(&self) -> &FourierBasisSpec;

    fn observe_all(&self, a: &FourierField) -> Result<Vec<f64>>;

    /// `‖𝒢(a)‖_𝒴` restricted to modes beyond the output truncation.
    fn output_tail(&self, _a: &FourierField) -> Result<f64> {
        Ok(0.0)
    }

    /// Full-resolution `𝒢(a)`, for error measurement.
    fn evaluate_field(&self, a: &FourierField) -> Result<FourierField>;

    /// Number of expensive evaluations performed so far.
    fn solve_count(&self) -> usize {
        0
    }
}

/// `𝒢(a) = a`.
#[derive(Clone, Debug)]
pub struct IdentityOperator {
    basis: FourierBasisSpec,
}

impl IdentityOperator {
    pub fn new(basis: FourierBasisSpec) -> Self {
        Self { basis }
    }
}

impl Operator for IdentityOperator {
    fn output_basis(&self) -> &FourierBasisSpec {
        &self.basis
    }

    fn observe_all(&self, a: &FourierField) -> Result<Vec<f64>> {
        output_coefficients(&self.basis, &a.resized(self.basis.max_mode()))
    }

    fn evaluate_field(&self, a: &FourierField) -> Result<FourierField> {
        Ok(a.clone())
    }
}

#[derive(Clone, Debug)]
pub struct OracleOptions {
    /// Solver band `K`; `None` means `4 × max_mode`.
    pub m_solve: Option<usize>,
    pub cg_tol: f64,
    pub a_min: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            m_solve: None,
            cg_tol: DEFAULT_CG_TOL,
            a_min: DEFAULT_A_MIN,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub u: FourierField,
    /// Relative `‖r‖_{H^{−1}}` after each iteration, starting with 1.
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

pub struct PdeOracle {
    basis: FourierBasisSpec,
    abar: FourierField,
    f: FourierField,
    options: OracleOptions,
    grid: Grid,
    // ā on the grid, cached
    abar_grid: Vec<f64>,
    cache: Mutex<HashMap<Vec<u64>, Arc<FourierField>>>,
    solves: AtomicUsize,
}

impl std::fmt::Debug for PdeOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PdeOracle")
            .field("dim", &self.basis.dim())
            .field("max_mode", &self.basis.max_mode())
            .field("m_solve", &self.grid.k)
            .field("grid", &self.grid.n)
            .finish()
    }
}

/// The default smooth source: per axis `l`, `ξ` mode `2e_l` with coefficient 1
/// and mode `3e_l` with coefficient 0.5.
pub fn default_source(dim: usize, max_mode: usize) -> Result<FourierField> {
    let mut f = FourierField::zeros(dim, max_mode.max(2));
    for l in 0..dim {
        let mut m = vec![0; dim];
        m[l] = 2;
        f.set(&m, 1.0)?;
        m[l] = 3;
        f.set(&m, 0.5)?;
    }
    Ok(f)
}

/// The constant field `value`.
pub fn constant_field(dim: usize, value: f64) -> FourierField {
    let mut u = FourierField::zeros(dim, 1);
    u.set(&vec![0; dim], value).expect("constant mode");
    u
}

impl PdeOracle {
    pub fn new(basis: FourierBasisSpec, abar: FourierField, f: FourierField, options: OracleOptions) -> Result<Self> {
        let k = options.m_solve.unwrap_or(4 * basis.max_mode());
        if k < basis.max_mode() {
            return Err(Error::config(
                "m_solve",
                format!("must be >= max_mode {}, got {k}", basis.max_mode()),
            ));
        }
        for (name, field) in [("abar", &abar), ("f", &f)] {
            if field.dim() != basis.dim() {
                return Err(Error::config(name, "dimension differs from the problem dimension"));
            }
            if field.max_mode() > k {
                return Err(Error::config(
                    name,
                    format!("band {} exceeds m_solve {k}", field.max_mode()),
                ));
            }
        }
        if f.get(&vec![0; basis.dim()]) != 0.0 {
            return Err(Error::config("f", "source must have zero mean"));
        }
        if !(options.cg_tol > 0.0) {
            return Err(Error::config("cg_tol", "must be positive"));
        }
        let grid = Grid::new(basis.dim(), k);
        let abar_grid = grid.real_grid_values(&abar);
        Ok(Self {
            basis,
            abar,
            f,
            options,
            grid,
            abar_grid,
            cache: Mutex::new(HashMap::new()),
            solves: AtomicUsize::new(0),
        })
    }

    pub fn basis(&self) -> &FourierBasisSpec {
        &self.basis
    }

    pub fn abar(&self) -> &FourierField {
        &self.abar
    }

    pub fn source(&self) -> &FourierField {
        &self.f
    }

    pub fn options(&self) -> &OracleOptions {
        &self.options
    }

    pub fn m_solve(&self) -> usize {
        self.grid.k
    }

    /// Collocation points per axis.
    pub fn grid_points(&self) -> usize {
        self.grid.n
    }

    fn coefficient_grid(&self, a: &FourierField) -> Result<Vec<f64>> {
        if a.dim() != self.basis.dim() {
            return Err(Error::BasisMismatch("coefficient field dimension".into()));
        }
        if a.max_mode() > self.grid.k {
            return Err(Error::BasisMismatch(format!(
                "coefficient band {} exceeds m_solve {}",
                a.max_mode(),
                self.grid.k
            )));
        }
        let ag = self.grid.real_grid_values(a);
        Ok(ag.iter().zip(&self.abar_grid).map(|(x, y)| x + y).collect())
    }

    /// Minimum of `ā + a` over the collocation grid.
    pub fn check_ellipticity(&self, a: &FourierField) -> Result<f64> {
        let c = self.coefficient_grid(a)?;
        Ok(c.iter().copied().fold(f64::INFINITY, f64::min))
    }

    fn elliptic_grid(&self, a: &FourierField) -> Result<Vec<f64>> {
        let c = self.coefficient_grid(a)?;
        let min = c.iter().copied().fold(f64::INFINITY, f64::min);
        if !(min > self.options.a_min) {
            return Err(Error::Ellipticity {
                min,
                a_min: self.options.a_min,
            });
        }
        Ok(c)
    }

    /// `A u = −∇·((ā + a)∇u)` projected onto band `K`, without the mean.
    pub fn apply_operator(&self, a: &FourierField, u: &FourierField) -> Result<FourierField> {
        let c = self.coefficient_grid(a)?;
        if u.max_mode() > self.grid.k || u.dim() != self.basis.dim() {
            return Err(Error::BasisMismatch("field outside the solver band".into()));
        }
        let uh = self.grid.to_complex(u);
        let au = self.grid.apply(&c, &uh);
        Ok(self.grid.to_real(&au))
    }

    /// Solves for `u` at the solver band `K`.
    pub fn solve(&self, a: &FourierField) -> Result<FourierField> {
        Ok(self.solve_detailed(a)?.u)
    }

    pub fn solve_detailed(&self, a: &FourierField) -> Result<SolveReport> {
        let c = self.elliptic_grid(a)?;
        self.solves.fetch_add(1, Ordering::Relaxed);
        let g = &self.grid;
        let b = g.to_complex(&self.f);
        let cap = 10 * g.k.pow(g.dim as u32);
        let (x, residuals) = g.pcr(&c, &b, self.options.cg_tol, cap)?;
        let iterations = residuals.len() - 1;
        log::debug!("solve converged in {iterations} iterations");
        Ok(SolveReport {
            u: g.to_real(&x),
            residuals,
            iterations,
        })
    }

    fn cached_solve(&self, a: &FourierField) -> Result<Arc<FourierField>> {
        let mut key: Vec<u64> = a.coeffs().iter().map(|v| v.to_bits()).collect();
        key.push(a.max_mode() as u64);
        if let Some(u) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(u.clone());
        }
        let u = Arc::new(self.solve(a)?);
        self.cache.lock().expect("cache lock").insert(key, u.clone());
        Ok(u)
    }

    /// `⟨𝒢(a), η̃_𝐣⟩`; repeated calls with the same `a` share one solve.
    pub fn observe(&self, a: &FourierField, mode: &Mode) -> Result<f64> {
        if self.basis.rank_of(mode).is_none() {
            return Err(Error::InvalidArgument(format!(
                "output mode {mode:?} beyond truncation"
            )));
        }
        let u = self.cached_solve(a)?;
        Ok(u.get(mode) * mode_scale(mode).powf(self.basis.t0()))
    }

    pub fn clear_cache(&self) {
        self.cache.lock().expect("cache lock").clear();
    }
}

impl Operator for PdeOracle {
    fn output_basis(&self) -> &FourierBasisSpec {
        &self.basis
    }

    fn observe_all(&self, a: &FourierField) -> Result<Vec<f64>> {
        let u = self.cached_solve(a)?;
        output_coefficients(&self.basis, &u.resized(self.basis.max_mode()))
    }

    fn output_tail(&self, a: &FourierField) -> Result<f64> {
        let u = self.cached_solve(a)?;
        let kept = u.resized(self.basis.max_mode()).hs_norm(self.basis.t0());
        let all = u.hs_norm(self.basis.t0());
        Ok((all * all - kept * kept).max(0.0).sqrt())
    }

    fn evaluate_field(&self, a: &FourierField) -> Result<FourierField> {
        Ok((*self.cached_solve(a)?).clone())
    }

    fn solve_count(&self) -> usize {
        self.solves.load(Ordering::Relaxed)
    }
}

/// Collocation grid and complex coefficient layout.
struct Grid {
    dim: usize,
    k: usize,
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    // frequency per FFT slot
    freq: Vec<i64>,
    // flat slots inside the band, excluding the mean
    band: Vec<usize>,
    // 1/(4π²|k|²) on band slots
    inv_lap: Vec<f64>,
}

impl Grid {
    fn new(dim: usize, k: usize) -> Self {
        let n = 3 * k + 1;
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let freq: Vec<i64> = (0..n)
            .map(|i| if i <= n / 2 { i as i64 } else { i as i64 - n as i64 })
            .collect();
        let total = n.pow(dim as u32);
        let mut band = Vec::new();
        let mut inv_lap = vec![0.0; total];
        for (p, slot) in inv_lap.iter_mut().enumerate() {
            let ks = slot_freqs(p, n, dim, &freq);
            if ks.iter().all(|&q| q.unsigned_abs() as usize <= k) && ks.iter().any(|&q| q != 0) {
                band.push(p);
                let k2: i64 = ks.iter().map(|q| q * q).sum();
                *slot = 1.0 / (4.0 * PI * PI * k2 as f64);
            }
        }
        Self {
            dim,
            k,
            n,
            fwd,
            inv,
            freq,
            band,
            inv_lap,
        }
    }

    fn total(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    fn slot(&self, ks: &[i64]) -> usize {
        let n = self.n as i64;
        ks.iter().fold(0, |acc, &q| acc * self.n + q.rem_euclid(n) as usize)
    }

    /// In-place multidimensional DFT; `inverse` is unnormalized.
    fn fft_nd(&self, data: &mut [Complex64], inverse: bool) {
        let plan = if inverse { &self.inv } else { &self.fwd };
        let n = self.n;
        let total = data.len();
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        for axis in 0..self.dim {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            for start in 0..total {
                // first element of a line has zero coordinate on this axis
                if !(start / stride).is_multiple_of(n) {
                    continue;
                }
                for (i, v) in line.iter_mut().enumerate() {
                    *v = data[start + i * stride];
                }
                plan.process_with_scratch(&mut line, &mut scratch);
                for (i, v) in line.iter().enumerate() {
                    data[start + i * stride] = *v;
                }
            }
        }
    }

    /// Real `ξ` coefficients to complex coefficients in slot layout.
    fn to_complex(&self, u: &FourierField) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.total()];
        let side = u.side();
        let dim = self.dim;
        for (p, &c) in u.coeffs().iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let mode = unflatten(p, side, dim);
            let per_axis: Vec<Vec<(i64, Complex64)>> = mode.iter().map(|&j| forward_pairs(j)).collect();
            for_each_product(&per_axis, &mut |ks, w| {
                let s = self.slot(ks);
                out[s] += w * c;
            });
        }
        out
    }

    /// Complex coefficients (Hermitian symmetric) back to real `ξ`
    /// coefficients at band `K`.
    fn to_real(&self, uh: &[Complex64]) -> FourierField {
        let mut u = FourierField::zeros(self.dim, self.k);
        let side = u.side();
        let dim = self.dim;
        for p in 0..u.coeffs().len() {
            let mode = unflatten(p, side, dim);
            let per_axis: Vec<Vec<(i64, Complex64)>> = mode.iter().map(|&j| inverse_pairs(j)).collect();
            let mut acc = Complex64::new(0.0, 0.0);
            for_each_product(&per_axis, &mut |ks, w| {
                acc += w * uh[self.slot(ks)];
            });
            u.coeffs_mut()[p] = acc.re;
        }
        u
    }

    fn real_grid_values(&self, u: &FourierField) -> Vec<f64> {
        let mut c = self.to_complex(u);
        self.fft_nd(&mut c, true);
        c.iter().map(|v| v.re).collect()
    }

    fn apply(&self, c: &[f64], uh: &[Complex64]) -> Vec<Complex64> {
        let total = self.total();
        let mut out = vec![Complex64::new(0.0, 0.0); total];
        let mut work = vec![Complex64::new(0.0, 0.0); total];
        for axis in 0..self.dim {
            work.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
            for &p in &self.band {
                let ki = self.axis_freq(p, axis) as f64;
                work[p] = uh[p] * Complex64::new(0.0, 2.0 * PI * ki);
            }
            self.fft_nd(&mut work, true);
            for (w, &cv) in work.iter_mut().zip(c) {
                *w *= cv;
            }
            self.fft_nd(&mut work, false);
            let scale = 1.0 / total as f64;
            for &p in &self.band {
                let ki = self.axis_freq(p, axis) as f64;
                out[p] -= work[p] * scale * Complex64::new(0.0, 2.0 * PI * ki);
            }
        }
        out
    }

    fn axis_freq(&self, p: usize, axis: usize) -> i64 {
        let stride = self.n.pow((self.dim - 1 - axis) as u32);
        self.freq[(p / stride) % self.n]
    }

    fn dot(&self, a: &[Complex64], b: &[Complex64]) -> f64 {
        self.band.iter().map(|&p| (a[p].conj() * b[p]).re).sum()
    }

    fn precondition(&self, r: &[Complex64]) -> Vec<Complex64> {
        let mut z = vec![Complex64::new(0.0, 0.0); r.len()];
        for &p in &self.band {
            z[p] = r[p] * self.inv_lap[p];
        }
        z
    }

    /// Preconditioned conjugate residuals on the zero-mean band.
    fn pcr(&self, c: &[f64], b: &[Complex64], tol: f64, cap: usize) -> Result<(Vec<Complex64>, Vec<f64>)> {
        let total = self.total();
        let mut x = vec![Complex64::new(0.0, 0.0); total];
        let mut r = vec![Complex64::new(0.0, 0.0); total];
        for &p in &self.band {
            r[p] = b[p];
        }
        let mut z = self.precondition(&r);
        let norm0 = self.dot(&r, &z).sqrt();
        let mut history = vec![1.0];
        if norm0 == 0.0 {
            return Ok((x, history));
        }
        let mut az = self.apply(c, &z);
        let mut p = z.clone();
        let mut ap = az.clone();
        let mut zaz = self.dot(&z, &az);
        for _ in 0..cap {
            let map = self.precondition(&ap);
            let alpha = zaz / self.dot(&ap, &map);
            for &q in &self.band {
                x[q] += alpha * p[q];
                r[q] -= alpha * ap[q];
                z[q] -= alpha * map[q];
            }
            let rel = self.dot(&r, &z).max(0.0).sqrt() / norm0;
            history.push(rel);
            if rel <= tol {
                return Ok((x, history));
            }
            az = self.apply(c, &z);
            let zaz_new = self.dot(&z, &az);
            let beta = zaz_new / zaz;
            zaz = zaz_new;
            for &q in &self.band {
                p[q] = z[q] + beta * p[q];
                ap[q] = az[q] + beta * ap[q];
            }
        }
        Err(Error::NoConvergence {
            iterations: cap,
            residual: *history.last().expect("nonempty"),
        })
    }
}

fn unflatten(mut p: usize, side: usize, dim: usize) -> Vec<usize> {
    let mut m = vec![0; dim];
    for k in (0..dim).rev() {
        m[k] = p % side;
        p /= side;
    }
    m
}

fn slot_freqs(mut p: usize, n: usize, dim: usize, freq: &[i64]) -> Vec<i64> {
    let mut ks = vec![0; dim];
    for k in (0..dim).rev() {
        ks[k] = freq[p % n];
        p /= n;
    }
    ks
}

// ξ_j = Σ w e^{2πikx}
fn forward_pairs(j: usize) -> Vec<(i64, Complex64)> {
    if j == 0 {
        return vec![(0, Complex64::new(1.0, 0.0))];
    }
    let k = j.div_ceil(2) as i64;
    if j.is_multiple_of(2) {
        vec![
            (k, Complex64::new(FRAC_1_SQRT_2, 0.0)),
            (-k, Complex64::new(FRAC_1_SQRT_2, 0.0)),
        ]
    } else {
        vec![
            (k, Complex64::new(0.0, -FRAC_1_SQRT_2)),
            (-k, Complex64::new(0.0, FRAC_1_SQRT_2)),
        ]
    }
}

// c_j = Σ w ĉ_k
fn inverse_pairs(j: usize) -> Vec<(i64, Complex64)> {
    if j == 0 {
        return vec![(0, Complex64::new(1.0, 0.0))];
    }
    let k = j.div_ceil(2) as i64;
    if j.is_multiple_of(2) {
        vec![
            (k, Complex64::new(FRAC_1_SQRT_2, 0.0)),
            (-k, Complex64::new(FRAC_1_SQRT_2, 0.0)),
        ]
    } else {
        vec![
            (k, Complex64::new(0.0, FRAC_1_SQRT_2)),
            (-k, Complex64::new(0.0, -FRAC_1_SQRT_2)),
        ]
    }
}

fn for_each_product(per_axis: &[Vec<(i64, Complex64)>], f: &mut dyn FnMut(&[i64], Complex64)) {
    fn rec(
        per_axis: &[Vec<(i64, Complex64)>],
        k: usize,
        ks: &mut Vec<i64>,
        w: Complex64,
        f: &mut dyn FnMut(&[i64], Complex64),
    ) {
        if k == per_axis.len() {
            f(ks, w);
            return;
        }
        for &(q, v) in &per_axis[k] {
            ks.push(q);
            rec(per_axis, k + 1, ks, w * v, f);
            ks.pop();
        }
    }
    rec(
        per_axis,
        0,
        &mut Vec::with_capacity(per_axis.len()),
        Complex64::new(1.0, 0.0),
        f,
    );
}
