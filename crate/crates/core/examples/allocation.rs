//! Shows how a sample budget is split across output coordinates.

use gpc_surrogate::allocate::{budget_for, plan_for_budget, rate_exponents, torus_t_max};
use gpc_surrogate::Variant;

fn main() -> gpc_surrogate::Result<()> {
    let (s, delta) = (3.0, 0.1);
    let t = torus_t_max(1, 2.0, 0.0) - delta / 2.0;
    let (alpha, beta) = rate_exponents(s, t, delta);
    println!("alpha = {alpha:.3}, beta = {beta:.3}");
    for variant in [Variant::WorstCase, Variant::MeanSquare] {
        println!("{variant} (exponent {:.3})", variant.exponent(alpha, beta));
        for budget in [8, 64, 512, 4096] {
            let (n, realized) = budget_for(budget, variant, alpha, beta, 10_000, 129)?;
            let plan = plan_for_budget(budget, variant, alpha, beta, 10_000, 129)?;
            let head: Vec<usize> = plan.counts().iter().take(8).copied().collect();
            println!(
                "  N = {budget:5}: n = {n:3}, realized {realized:5}, {} outputs, m = {head:?}{}",
                plan.output_count(),
                if plan.counts().len() > 8 { " ..." } else { "" }
            );
        }
    }
    Ok(())
}
