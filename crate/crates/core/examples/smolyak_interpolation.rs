//! Interpolates a smooth function of four parameters on a sparse grid.

use gpc_surrogate::surrogate::shared_leja;
use gpc_surrogate::{DownwardClosedSet, MultiIndex, SmolyakOperator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn target(y: &[f64]) -> f64 {
    let s: f64 = y.iter().enumerate().map(|(j, v)| v / (j as f64 + 2.0).powi(2)).sum();
    1.0 / (1.2 + s)
}

fn main() -> gpc_surrogate::Result<()> {
    let dims = 4;
    for level in 1..=6u32 {
        let lambda = DownwardClosedSet::closure(&total_degree(dims, level));
        let nodes = shared_leja(level as usize + 1)?;
        let op = SmolyakOperator::new(lambda, nodes)?;
        let samples = op.sample(|y| Ok(target(&padded(y, dims))))?;

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut err: f64 = 0.0;
        for _ in 0..2000 {
            let y: Vec<f64> = (0..dims).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            err = err.max((op.interpolate(&samples, &y)? - target(&y)).abs());
        }
        println!(
            "level {level}: {:4} points, sampled max error {err:.3e}",
            op.lambda().len()
        );
    }
    Ok(())
}

/// Every multi-index over `dims` dimensions with total order at most `level`.
fn total_degree(dims: usize, level: u32) -> Vec<MultiIndex> {
    let side = level + 1;
    (0..side.pow(dims as u32))
        .map(|mut code| {
            let orders: Vec<u32> = (0..dims)
                .map(|_| {
                    let o = code % side;
                    code /= side;
                    o
                })
                .collect();
            MultiIndex::from_dense(&orders)
        })
        .filter(|nu| nu.total_order() <= level)
        .collect()
}

fn padded(y: &[f64], dims: usize) -> Vec<f64> {
    let mut out = y.to_vec();
    out.resize(dims, 0.0);
    out
}
