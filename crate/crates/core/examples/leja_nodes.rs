//! Prints the first Leja points and the growth of their Lebesgue constants.

use gpc_surrogate::univariate::{lebesgue_constant, leja_points, DEFAULT_LEJA_RESOLUTION};

fn main() -> gpc_surrogate::Result<()> {
    let seq = leja_points(21, DEFAULT_LEJA_RESOLUTION)?;
    println!("k,chi_k,lebesgue,(1+k)^2");
    for k in 0..seq.len() {
        let l = lebesgue_constant(&seq.points()[..=k], 10_001)?;
        println!("{k},{:.10},{l:.3},{}", seq.points()[k], (1 + k) * (1 + k));
    }
    Ok(())
}
