#![allow(dead_code)]

use std::collections::HashSet;

use gpc_surrogate::MultiIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random downward closed set with at most `size` members over dimensions
/// `1..=dims`, listed in a valid insertion order.
pub fn random_downward_closed<R: Rng>(rng: &mut R, size: usize, dims: usize) -> Vec<MultiIndex> {
    let mut members = vec![MultiIndex::zero()];
    let mut seen: HashSet<MultiIndex> = members.iter().cloned().collect();
    let mut attempts = 0;
    while members.len() < size && attempts < 50 * size {
        attempts += 1;
        let base = members[rng.gen_range(0..members.len())].clone();
        let next = base.incremented(rng.gen_range(1..=dims));
        if seen.contains(&next) {
            continue;
        }
        if next.predecessors().all(|p| seen.contains(&p)) {
            seen.insert(next.clone());
            members.push(next);
        }
    }
    members
}

/// A multi-index outside `set` whose predecessors all lie in it.
pub fn outer_neighbor<R: Rng>(rng: &mut R, set: &[MultiIndex], dims: usize) -> MultiIndex {
    let lookup: HashSet<&MultiIndex> = set.iter().collect();
    let mut margin: Vec<MultiIndex> = Vec::new();
    for nu in set {
        for d in 1..=dims {
            let next = nu.incremented(d);
            if !lookup.contains(&next) && next.predecessors().all(|p| lookup.contains(&p)) && !margin.contains(&next) {
                margin.push(next);
            }
        }
    }
    margin.swap_remove(rng.gen_range(0..margin.len()))
}

/// `y^ν`, with `y[d − 1]` the coordinate of dimension `d`.
pub fn monomial(nu: &MultiIndex, y: &[f64]) -> f64 {
    nu.entries().iter().map(|&(d, o)| y[d - 1].powi(o as i32)).product()
}

pub fn uniform_point<R: Rng>(rng: &mut R, dims: usize) -> Vec<f64> {
    (0..dims).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}
