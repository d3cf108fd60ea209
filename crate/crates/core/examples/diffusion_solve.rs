//! Solves `−∇·((ā + a)∇u) = f` on the 2-torus and reports the solver history.

use gpc_surrogate::pde::{constant_field, default_source, OracleOptions};
use gpc_surrogate::{FourierBasisSpec, FourierField, Operator, PdeOracle};

fn main() -> gpc_surrogate::Result<()> {
    let basis = FourierBasisSpec::new(2, 4, 2.0, 0.0)?;
    let f = default_source(2, 4)?;
    let oracle = PdeOracle::new(basis, constant_field(2, 1.0), f, OracleOptions::default())?;
    println!(
        "solver band K = {}, grid of {} points",
        oracle.m_solve(),
        oracle.grid_points()
    );

    let a = FourierField::from_modes(2, 2, &[(vec![1, 0], 0.25), (vec![2, 3], -0.15), (vec![4, 4], 0.1)])?;
    println!("min of abar + a on the grid: {:.4}", oracle.check_ellipticity(&a)?);
    let report = oracle.solve_detailed(&a)?;
    println!("{} iterations", report.iterations);
    for (k, r) in report.residuals.iter().enumerate().step_by(3) {
        println!("  iteration {k:3}: relative residual {r:.3e}");
    }
    let u = &report.u;
    println!(
        "u(0.25, 0.5) = {:.6e}, |u|_H1 = {:.6e}",
        u.eval(&[0.25, 0.5]),
        u.hs_norm(1.0)
    );

    let obs = oracle.observe_all(&a)?;
    let head: Vec<String> = obs[..6].iter().map(|v| format!("{v:.4e}")).collect();
    println!("first output coordinates: {}", head.join(" "));
    println!("linear solves so far: {}", oracle.solve_count());
    Ok(())
}
