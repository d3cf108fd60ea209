//! Study configuration and the command implementations behind the CLI.
//!
//! Output files of `study`:
//!
//! * `rates.csv`: `budget,realized_cost,n,outputs,grid_points,solves,wc_error,wc_tail,mse,mse_se,rms,config_hash,seed,m_solve,grid`
//!   with one row per budget. `wc_error` is a sampled lower bound of the
//!   worst-case error, `wc_tail` the output-truncation part of it, `rms`
//!   is `sqrt(mse)`.
//! * `slopes.csv`: `quantity,slope,intercept,theory,fit_from,points,config_hash,seed`,
//!   least-squares fits of `log error` against `log budget`; `theory` is the
//!   predicted decay rate (positive number).
//! * `plan_N<budget>.csv`: the allocation `(i, m_i)` of every budget.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::allocate::{plan_for_budget, rate_exponents, torus_t_max, Variant};
use crate::error::{Error, Result};
use crate::pde::{constant_field, default_source, OracleOptions, PdeOracle, DEFAULT_A_MIN, DEFAULT_CG_TOL};
use crate::persist::{load_model, save_model};
use crate::spaces::{CubeDomain, FourierBasisSpec, FourierField, WeightSequence};
use crate::surrogate::{mean_square_error, worst_case_error, CandidatePool, PoolMode, SurrogateModel};
use crate::univariate::{leja_points, DEFAULT_LEJA_RESOLUTION};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSource {
    Constant(f64),
    File(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub dim: usize,
    pub max_mode: usize,
    pub s0: f64,
    pub t0: f64,
    #[serde(default = "default_abar")]
    pub abar: FieldSource,
    /// `"default"` or a field CSV path.
    #[serde(default = "default_f")]
    pub f: String,
    #[serde(default = "default_a_min")]
    pub a_min: f64,
    #[serde(default = "default_cg_tol")]
    pub cg_tol: f64,
    pub m_solve: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubeConfig {
    pub r: f64,
    pub s: f64,
    pub n_act: Option<usize>,
    /// Accuracy the default `n_act` is chosen for.
    #[serde(default = "default_target")]
    pub target_accuracy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurrogateConfig {
    #[serde(default = "default_pool")]
    pub pool: String,
    pub pool_size: Option<usize>,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_variant")]
    pub variant: String,
    pub budgets: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorConfig {
    #[serde(default = "default_samples")]
    pub n_samples: usize,
    #[serde(default)]
    pub seed: u64,
    /// Leading budgets left out of the slope fit.
    #[serde(default = "default_fit_skip")]
    pub fit_skip: usize,
}

impl Default for ErrorConfig {
    fn default() -> Self {
        Self {
            n_samples: default_samples(),
            seed: 0,
            fit_skip: default_fit_skip(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub directory: String,
    #[serde(default = "default_formats")]
    pub formats: Vec<String>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: default_dir(),
            formats: default_formats(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub problem: ProblemConfig,
    pub cube: CubeConfig,
    pub surrogate: SurrogateConfig,
    #[serde(default)]
    pub error: ErrorConfig,
    #[serde(default)]
    pub output: OutputConfig,
    /// Directory that relative field paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_abar() -> FieldSource {
    FieldSource::Constant(1.0)
}
fn default_f() -> String {
    "default".into()
}
fn default_a_min() -> f64 {
    DEFAULT_A_MIN
}
fn default_cg_tol() -> f64 {
    DEFAULT_CG_TOL
}
fn default_target() -> f64 {
    1e-6
}
fn default_pool() -> String {
    "adaptive".into()
}
fn default_kappa() -> f64 {
    0.5
}
fn default_delta() -> f64 {
    0.1
}
fn default_variant() -> String {
    "worst-case".into()
}
fn default_samples() -> usize {
    200
}
fn default_fit_skip() -> usize {
    1
}
fn default_dir() -> String {
    "out".into()
}
fn default_formats() -> Vec<String> {
    vec!["csv".into()]
}

impl StudyConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: StudyConfig = toml::from_str(text).map_err(|e| {
            let key = e.span().map(|s| text[s].trim().to_string()).unwrap_or_default();
            Error::config(&key, e.message().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("<file>", format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// First 16 hex digits of the SHA-256 of the canonical config.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        hex::encode(digest)[..16].to_string()
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.problem;
        let d = p.dim as f64;
        if !(1..=3).contains(&p.dim) {
            return Err(Error::config("problem.dim", "must be 1, 2 or 3"));
        }
        if p.max_mode == 0 {
            return Err(Error::config("problem.max_mode", "must be at least 1"));
        }
        if !(p.s0 > d / 2.0) {
            return Err(Error::config(
                "problem.s0",
                format!("torus regime requires s0 > d/2 = {}", d / 2.0),
            ));
        }
        if !(0.0..=1.0).contains(&p.t0) {
            return Err(Error::config(
                "problem.t0",
                format!("torus regime requires t0 in [0, 1], got {}", p.t0),
            ));
        }
        if !(p.a_min > 0.0) {
            return Err(Error::config("problem.a_min", "must be positive"));
        }
        if !(p.cg_tol > 0.0 && p.cg_tol < 1.0) {
            return Err(Error::config("problem.cg_tol", "must lie in (0, 1)"));
        }
        if let Some(m) = p.m_solve {
            if m < p.max_mode {
                return Err(Error::config("problem.m_solve", "must be at least max_mode"));
            }
        }
        let c = &self.cube;
        if !(c.r > 0.0) {
            return Err(Error::config("cube.r", "must be positive"));
        }
        if !(c.s > 1.0) {
            return Err(Error::config("cube.s", format!("requires s > 1, got {}", c.s)));
        }
        if !(c.target_accuracy > 0.0) {
            return Err(Error::config("cube.target_accuracy", "must be positive"));
        }
        let s = &self.surrogate;
        s.pool
            .parse::<PoolMode>()
            .map_err(|_| Error::config("surrogate.pool", "expected `apriori` or `adaptive`"))?;
        s.variant
            .parse::<Variant>()
            .map_err(|_| Error::config("surrogate.variant", "expected `worst-case` or `mean-square`"))?;
        if !(s.kappa > 0.0) {
            return Err(Error::config("surrogate.kappa", "must be positive"));
        }
        if !(s.delta > 0.0) {
            return Err(Error::config("surrogate.delta", "must be positive"));
        }
        if s.budgets.is_empty() || s.budgets[0] == 0 {
            return Err(Error::config("surrogate.budgets", "needs at least one positive budget"));
        }
        if s.budgets.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("surrogate.budgets", "must be strictly increasing"));
        }
        if s.pool_size == Some(0) {
            return Err(Error::config("surrogate.pool_size", "must be at least 1"));
        }
        let (alpha, beta) = self.exponents();
        if !(alpha > 1.0) {
            return Err(Error::config(
                "cube.s",
                format!("alpha = s - delta/2 = {alpha} must exceed 1"),
            ));
        }
        if !(beta > 0.0) {
            return Err(Error::config(
                "surrogate.delta",
                format!("beta = t_max - delta = {beta} must be positive"),
            ));
        }
        if self.output.formats.iter().any(|f| f != "csv") {
            return Err(Error::config("output.formats", "only `csv` is supported"));
        }
        Ok(())
    }

    pub fn t_max(&self) -> f64 {
        torus_t_max(self.problem.dim, self.problem.s0, self.problem.t0)
    }

    /// `(α, β)` with `t = t_max − δ/2`.
    pub fn exponents(&self) -> (f64, f64) {
        let delta = self.surrogate.delta;
        rate_exponents(self.cube.s, self.t_max() - delta / 2.0, delta)
    }

    pub fn variant(&self) -> Variant {
        self.surrogate.variant.parse().expect("validated")
    }

    pub fn pool_mode(&self) -> PoolMode {
        self.surrogate.pool.parse().expect("validated")
    }

    /// Predicted decay rate of the fitted quantity.
    pub fn theoretical_rate(&self, variant: Variant) -> f64 {
        let s = self.cube.s;
        match variant {
            Variant::WorstCase => (s - 1.0).min(self.t_max()),
            Variant::MeanSquare => (s - 0.5).min(self.t_max()),
        }
    }

    fn resolve(&self, p: &str) -> PathBuf {
        let path = Path::new(p);
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }
}

/// Everything a build needs, assembled from a config.
pub struct Problem {
    pub basis: FourierBasisSpec,
    pub domain: CubeDomain,
    pub oracle: PdeOracle,
    pub alpha: f64,
    pub beta: f64,
    pub variant: Variant,
}

impl Problem {
    pub fn from_config(cfg: &StudyConfig) -> Result<Self> {
        let p = &cfg.problem;
        let basis = FourierBasisSpec::new(p.dim, p.max_mode, p.s0, p.t0)?;
        let weights = WeightSequence::standard(p.dim);
        let n_act = match cfg.cube.n_act {
            Some(n) => n,
            None => default_n_act(&cfg.cube, weights, &basis)?,
        };
        let domain =
            CubeDomain::new(cfg.cube.r, cfg.cube.s, n_act, weights, &basis).map_err(|e| rename_key(e, "cube."))?;
        let abar = match &p.abar {
            FieldSource::Constant(v) => constant_field(p.dim, *v),
            FieldSource::File(f) => read_field(&cfg.resolve(f), "problem.abar")?,
        };
        let f = if p.f == "default" {
            default_source(p.dim, 2)?
        } else {
            read_field(&cfg.resolve(&p.f), "problem.f")?
        };
        let options = OracleOptions {
            m_solve: p.m_solve,
            cg_tol: p.cg_tol,
            a_min: p.a_min,
        };
        let oracle = PdeOracle::new(basis.clone(), abar, f, options).map_err(|e| rename_key(e, "problem."))?;
        let (alpha, beta) = cfg.exponents();
        Ok(Self {
            basis,
            domain,
            oracle,
            alpha,
            beta,
            variant: cfg.variant(),
        })
    }

    pub fn pool(&self, cfg: &StudyConfig) -> Result<CandidatePool> {
        let size = cfg
            .surrogate
            .pool_size
            .unwrap_or_else(|| *cfg.surrogate.budgets.last().expect("validated"));
        CandidatePool::generate(
            cfg.pool_mode(),
            &self.domain,
            &self.basis,
            size,
            cfg.surrogate.kappa,
            Some(&self.oracle),
        )
    }

    pub fn build(&self, pool: &CandidatePool, budget: usize) -> Result<SurrogateModel> {
        SurrogateModel::build(
            &self.domain,
            &self.basis,
            &self.oracle,
            pool,
            budget,
            self.variant,
            self.alpha,
            self.beta,
        )
    }
}

fn rename_key(e: Error, prefix: &str) -> Error {
    match e {
        Error::Config { key, message } => Error::Config {
            key: format!("{prefix}{key}"),
            message,
        },
        other => other,
    }
}

fn read_field(path: &Path, key: &str) -> Result<FourierField> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(key, format!("cannot read {}: {e}", path.display())))?;
    FourierField::from_csv(&text, None).map_err(|e| Error::config(key, e.to_string()))
}

/// Smallest `n_act` whose truncation bias is below `10⁻²` of the target.
fn default_n_act(cube: &CubeConfig, weights: WeightSequence, basis: &FourierBasisSpec) -> Result<usize> {
    let full = CubeDomain::new(cube.r, cube.s, basis.n_modes(), weights, basis)?;
    let b = full.bounds();
    let mut tail: f64 = 0.0;
    for n in (1..=b.len()).rev() {
        tail += b[n - 1] * b[n - 1];
        if tail.sqrt() > 1e-2 * cube.target_accuracy {
            return Ok(n);
        }
    }
    Ok(1)
}

/// Least-squares line through `(log x, log y)`.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return (f64::NAN, f64::NAN);
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyRow {
    pub budget: usize,
    pub realized_cost: usize,
    pub n: usize,
    pub outputs: usize,
    pub grid_points: usize,
    pub solves: usize,
    pub wc_error: f64,
    pub wc_tail: f64,
    pub mse: f64,
    pub mse_se: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Slope {
    pub quantity: &'static str,
    pub slope: f64,
    pub intercept: f64,
    pub theory: f64,
}

#[derive(Clone, Debug)]
pub struct StudyResult {
    pub rows: Vec<StudyRow>,
    pub slopes: Vec<Slope>,
    pub config_hash: String,
    pub seed: u64,
    pub m_solve: usize,
    pub grid: usize,
    pub fit_from: usize,
}

impl StudyResult {
    pub fn slope(&self, quantity: &str) -> Option<&Slope> {
        self.slopes.iter().find(|s| s.quantity == quantity)
    }

    pub fn rates_csv(&self) -> String {
        let mut out = String::from(
            "budget,realized_cost,n,outputs,grid_points,solves,wc_error,wc_tail,mse,mse_se,rms,config_hash,seed,m_solve,grid\n",
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{:e},{:e},{:e},{:e},{:e},{},{},{},{}",
                r.budget,
                r.realized_cost,
                r.n,
                r.outputs,
                r.grid_points,
                r.solves,
                r.wc_error,
                r.wc_tail,
                r.mse,
                r.mse_se,
                r.mse.sqrt(),
                self.config_hash,
                self.seed,
                self.m_solve,
                self.grid
            );
        }
        out
    }

    pub fn slopes_csv(&self) -> String {
        let mut out = String::from("quantity,slope,intercept,theory,fit_from,points,config_hash,seed\n");
        for s in &self.slopes {
            let _ = writeln!(
                out,
                "{},{:e},{:e},{:e},{},{},{},{}",
                s.quantity,
                s.slope,
                s.intercept,
                s.theory,
                self.fit_from,
                self.rows.len().saturating_sub(self.fit_from),
                self.config_hash,
                self.seed
            );
        }
        out
    }
}

/// Builds one model per budget, persisting each to `out_dir/model_N<budget>.txt`.
pub fn cmd_build(cfg: &StudyConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let problem = Problem::from_config(cfg)?;
    let pool = problem.pool(cfg)?;
    let hash = cfg.hash();
    let mut paths = Vec::new();
    for &budget in &cfg.surrogate.budgets {
        let mut model = problem
            .build(&pool, budget)
            .inspect_err(|e| log::error!("build failed for budget {budget}: {e}"))?;
        model.set_config_hash(&hash);
        let path = out_dir.join(format!("model_N{budget}.txt"));
        save_model(&model, &path)?;
        println!(
            "budget {budget}: realized cost {} over {} output coordinates, {} grid points -> {}",
            model.realized_cost(),
            model.output_count(),
            model.grid_indices().len(),
            path.display()
        );
        paths.push(path);
    }
    Ok(paths)
}

/// Evaluates a saved model on a field CSV and writes the output field CSV.
pub fn cmd_eval(model_path: &Path, field_path: &Path, out_path: &Path) -> Result<FourierField> {
    let model = load_model(model_path)?;
    let text = std::fs::read_to_string(field_path)?;
    let a = FourierField::from_csv(&text, Some(model.basis().max_mode()))?;
    let u = model.evaluate(&a)?;
    if let Some(dir) = out_path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(out_path, u.to_csv())?;
    Ok(u)
}

/// Runs the convergence study without touching the file system.
pub fn run_study(cfg: &StudyConfig) -> Result<StudyResult> {
    if cfg.surrogate.budgets.len() < 2 {
        return Err(Error::config("surrogate.budgets", "a study needs at least two budgets"));
    }
    let problem = Problem::from_config(cfg)?;
    let pool = problem.pool(cfg)?;
    let seed = cfg.error.seed;
    let n_samples = cfg.error.n_samples;
    let mut rows = Vec::new();
    for &budget in &cfg.surrogate.budgets {
        let run = || -> Result<StudyRow> {
            let before = crate::pde::Operator::solve_count(&problem.oracle);
            let model = problem.build(&pool, budget)?;
            let solves = crate::pde::Operator::solve_count(&problem.oracle) - before;
            let wc = worst_case_error(&model, &problem.oracle, n_samples, seed)?;
            let ms = mean_square_error(&model, &problem.oracle, n_samples.max(1), seed)?;
            let plan = plan_for_budget(
                budget,
                problem.variant,
                problem.alpha,
                problem.beta,
                pool.len(),
                problem.basis.n_modes(),
            )?;
            Ok(StudyRow {
                budget,
                realized_cost: model.realized_cost(),
                n: plan.n(),
                outputs: model.output_count(),
                grid_points: model.grid_indices().len(),
                solves,
                wc_error: wc.value,
                wc_tail: wc.truncation_tail,
                mse: ms.value,
                mse_se: ms.std_error,
            })
        };
        let row = run().inspect_err(|e| log::error!("study failed at budget {budget}: {e}"))?;
        log::info!(
            "budget {budget}: cost {} wc {:.3e} rms {:.3e}",
            row.realized_cost,
            row.wc_error,
            row.mse.sqrt()
        );
        rows.push(row);
    }
    let fit_from = cfg.error.fit_skip.min(rows.len().saturating_sub(2));
    let xs: Vec<f64> = rows[fit_from..].iter().map(|r| r.budget as f64).collect();
    let wc: Vec<f64> = rows[fit_from..].iter().map(|r| r.wc_error).collect();
    let rms: Vec<f64> = rows[fit_from..].iter().map(|r| r.mse.sqrt()).collect();
    let (s_wc, i_wc) = fit_loglog(&xs, &wc);
    let (s_rms, i_rms) = fit_loglog(&xs, &rms);
    let slopes = vec![
        Slope {
            quantity: "wc_error",
            slope: s_wc,
            intercept: i_wc,
            theory: cfg.theoretical_rate(Variant::WorstCase),
        },
        Slope {
            quantity: "rms",
            slope: s_rms,
            intercept: i_rms,
            theory: cfg.theoretical_rate(Variant::MeanSquare),
        },
    ];
    Ok(StudyResult {
        rows,
        slopes,
        config_hash: cfg.hash(),
        seed,
        m_solve: problem.oracle.m_solve(),
        grid: problem.oracle.grid_points(),
        fit_from,
    })
}

/// Runs the study and writes `rates.csv`, `slopes.csv` and the plans.
pub fn cmd_study(cfg: &StudyConfig, out_dir: &Path) -> Result<StudyResult> {
    let result = run_study(cfg)?;
    std::fs::create_dir_all(out_dir)?;
    std::fs::write(out_dir.join("rates.csv"), result.rates_csv())?;
    std::fs::write(out_dir.join("slopes.csv"), result.slopes_csv())?;
    let problem = Problem::from_config(cfg)?;
    let pool_len = cfg
        .surrogate
        .pool_size
        .unwrap_or_else(|| *cfg.surrogate.budgets.last().expect("validated"));
    let written: BTreeSet<usize> = cfg.surrogate.budgets.iter().copied().collect();
    for budget in written {
        let plan = plan_for_budget(
            budget,
            problem.variant,
            problem.alpha,
            problem.beta,
            pool_len,
            problem.basis.n_modes(),
        )?;
        std::fs::write(out_dir.join(format!("plan_N{budget}.csv")), plan.to_csv())?;
    }
    Ok(result)
}

/// Writes `χ_0..χ_{n−1}` as CSV.
pub fn cmd_leja(n: usize, out_dir: &Path) -> Result<PathBuf> {
    let seq = leja_points(n, DEFAULT_LEJA_RESOLUTION.max(10 * n))?;
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join(format!("leja_{n}.csv"));
    std::fs::write(&path, seq.to_csv())?;
    Ok(path)
}
