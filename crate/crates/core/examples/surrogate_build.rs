//! Builds a surrogate of the diffusion solution operator, checks it against
//! the solver and saves it to disk.

use gpc_surrogate::allocate::{rate_exponents, torus_t_max};
use gpc_surrogate::pde::{constant_field, default_source, OracleOptions};
use gpc_surrogate::persist::{load_model, save_model};
use gpc_surrogate::spaces::{lift, sample_cube};
use gpc_surrogate::surrogate::{mean_square_error, worst_case_error};
use gpc_surrogate::{
    CandidatePool, CubeDomain, FourierBasisSpec, Operator, PdeOracle, SurrogateModel, Variant, WeightSequence,
};

fn main() -> gpc_surrogate::Result<()> {
    let basis = FourierBasisSpec::new(1, 16, 2.0, 0.0)?;
    let domain = CubeDomain::new(0.1, 3.0, 12, WeightSequence::standard(1), &basis)?;
    let oracle = PdeOracle::new(
        basis.clone(),
        constant_field(1, 1.0),
        default_source(1, 2)?,
        OracleOptions::default(),
    )?;
    let (alpha, beta) = rate_exponents(3.0, torus_t_max(1, 2.0, 0.0) - 0.05, 0.1);

    let pool = CandidatePool::adaptive(&domain, &basis, &oracle, 200)?;
    println!("adaptive pool: first indices {:?}", &pool.enumeration()[..6]);

    for budget in [16, 64, 256] {
        let model = SurrogateModel::build(&domain, &basis, &oracle, &pool, budget, Variant::WorstCase, alpha, beta)?;
        let wc = worst_case_error(&model, &oracle, 100, 1)?;
        let ms = mean_square_error(&model, &oracle, 100, 1)?;
        println!(
            "N = {budget:3}: cost {:3}, {:2} outputs, {} {:.3e}, rms {:.3e} (se of mse {:.1e})",
            model.realized_cost(),
            model.output_count(),
            wc.label,
            wc.value,
            ms.value.sqrt(),
            ms.std_error
        );
    }

    let model = SurrogateModel::build(&domain, &basis, &oracle, &pool, 256, Variant::WorstCase, alpha, beta)?;
    let dir = std::env::temp_dir().join("gpc_surrogate_example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("model.txt");
    save_model(&model, &path)?;
    let loaded = load_model(&path)?;
    let a = lift(&domain, &basis, &sample_cube(&domain, 5))?;
    let (u, v) = (model.evaluate(&a)?, loaded.evaluate(&a)?);
    println!("saved to {}; reloaded model agrees bitwise: {}", path.display(), u == v);
    let exact = oracle.evaluate_field(&a)?.resized(basis.max_mode());
    println!(
        "u(0.3): surrogate {:.8e}, solver {:.8e}",
        u.eval(&[0.3]),
        exact.eval(&[0.3])
    );
    Ok(())
}
