mod common;

use std::f64::consts::{PI, SQRT_2};

use gpc_surrogate::allocate::{allocate_mean_square, allocate_worst_case, budget_for, build_output_sets};
use gpc_surrogate::multiindex::combination_coefficients;
use gpc_surrogate::pde::{constant_field, default_source, OracleOptions};
use gpc_surrogate::smolyak::GridPoint;
use gpc_surrogate::spaces::{decode, encode, lift, rescale, sample_cube, xi};
use gpc_surrogate::surrogate::{corner_points, mean_square_error, shared_leja, worst_case_error};
use gpc_surrogate::univariate::{
    gauss_legendre, lagrange_basis, lebesgue_constant, legendre, legendre_tensor, leja_points,
};
use gpc_surrogate::{
    AllocationPlan, CandidatePool, CubeDomain, DownwardClosedSet, Error, FourierBasisSpec, FourierField,
    IdentityOperator, MultiIndex, Operator, PdeOracle, SmolyakOperator, SurrogateModel, Variant, WeightSequence,
};

fn mi(pairs: &[(usize, u32)]) -> MultiIndex {
    MultiIndex::from_pairs(pairs.iter().copied()).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn leja_sequence_regression_values() {
    let frozen = [
        0.0,
        -1.0,
        1.0,
        -0.5773557735577356,
        0.6586965869658696,
        -0.8392583925839259,
        0.8699986999869999,
        0.3056130561305613,
    ];
    let seq = leja_points(8, 100_000).unwrap();
    assert_eq!(seq.points(), &frozen[..]);
    assert_eq!(leja_points(1, 100_000).unwrap().points(), &[0.0]);
    assert_eq!(leja_points(3, 100_000).unwrap().points(), &[0.0, -1.0, 1.0]);
}

#[test]
fn orthonormal_legendre_values() {
    let frozen = [
        (0, 0.3, 1.0),
        (1, 0.5, 0.8660254037844386),
        (2, 0.0, -1.118033988749895),
        (3, -0.7, 0.5093071273799336),
        (5, 0.9, -0.13645008965620914),
        (10, 0.33, 1.0718355806249797),
        (40, -0.21, -0.748546122559669),
    ];
    for (n, x, v) in frozen {
        assert!(close(legendre(n, x).unwrap(), v, 1e-13), "L_{n}({x})");
    }
    let (xs, ws) = gauss_legendre(10);
    let norm: f64 = xs
        .iter()
        .zip(&ws)
        .map(|(x, w)| w * legendre(2, *x).unwrap().powi(2))
        .sum::<f64>()
        / 2.0;
    assert!((norm - 1.0).abs() < 1e-12);
    let nu = mi(&[(1, 1), (3, 2)]);
    let v = legendre_tensor(&nu, &[0.5, 0.9, 0.0]).unwrap();
    assert!(close(v, 0.8660254037844386 * -(5f64.sqrt()) / 2.0, 1e-14));
    assert_eq!(legendre_tensor(&MultiIndex::zero(), &[0.4]).unwrap(), 1.0);
}

#[test]
fn legendre_tensor_bound_on_random_points() {
    let mut rng = common::rng(11);
    let nu = MultiIndex::from_dense(&[3, 0, 5, 1]);
    let bound: f64 = [3.0f64, 0.0, 5.0, 1.0].iter().map(|k| (1.0 + 2.0 * k).sqrt()).product();
    for _ in 0..1000 {
        let y = common::uniform_point(&mut rng, 4);
        assert!(legendre_tensor(&nu, &y).unwrap().abs() <= bound);
    }
}

#[test]
fn lagrange_and_lebesgue_examples() {
    assert_eq!(lagrange_basis(&[0.0], 0, 0.7).unwrap(), 1.0);
    assert!(close(lagrange_basis(&[0.0, 1.0], 1, 0.5).unwrap(), 0.5, 1e-15));
    assert!(close(lagrange_basis(&[0.0, -1.0, 1.0], 0, 0.5).unwrap(), 0.75, 1e-15));
    assert!(close(lebesgue_constant(&[0.3], 2000).unwrap(), 1.0, 1e-12));
    assert!(close(lebesgue_constant(&[-1.0, 1.0], 2000).unwrap(), 1.0, 1e-12));
    let nodes = leja_points(10, 100_000).unwrap();
    assert!(lebesgue_constant(nodes.points(), 20_000).unwrap() <= 121.0);
}

#[test]
fn downward_closed_examples() {
    use gpc_surrogate::multiindex::is_downward_closed;
    assert!(is_downward_closed(&[MultiIndex::zero()]));
    assert!(is_downward_closed(&[MultiIndex::zero(), mi(&[(1, 1)]), mi(&[(1, 2)])]));
    assert!(!is_downward_closed(&[MultiIndex::zero(), mi(&[(1, 2)])]));
    let square = [MultiIndex::zero(), mi(&[(1, 1)]), mi(&[(2, 1)]), mi(&[(1, 1), (2, 1)])];
    assert!(is_downward_closed(&square));
    let set = DownwardClosedSet::new(square.to_vec()).unwrap();
    assert_eq!((set.max_degree(), set.active_dims()), (1, 2));
    let line = DownwardClosedSet::closure(&[mi(&[(1, 3)])]);
    assert_eq!(line.len(), 4);
    assert_eq!((line.max_degree(), line.active_dims()), (3, 1));
    assert_eq!(DownwardClosedSet::singleton_zero().max_degree(), 0);
}

#[test]
fn combination_coefficient_examples() {
    let c = combination_coefficients(&[MultiIndex::zero()]).unwrap();
    assert_eq!(c, vec![(MultiIndex::zero(), 1)]);
    let c = combination_coefficients(&[MultiIndex::zero(), mi(&[(1, 1)])]).unwrap();
    assert_eq!(c, vec![(mi(&[(1, 1)]), 1)]);
    let mut c = combination_coefficients(&[MultiIndex::zero(), mi(&[(1, 1)]), mi(&[(2, 1)])]).unwrap();
    let mut expect = vec![(MultiIndex::zero(), -1), (mi(&[(1, 1)]), 1), (mi(&[(2, 1)]), 1)];
    c.sort();
    expect.sort();
    assert_eq!(c, expect);
}

#[test]
fn smolyak_grid_and_exactness_examples() {
    let nodes = shared_leja(4).unwrap();
    let op = SmolyakOperator::new(DownwardClosedSet::singleton_zero(), nodes.clone()).unwrap();
    assert_eq!(op.grid().len(), 1);
    assert_eq!(op.interpolate_values(&[2.5], &[0.9, -0.3]).unwrap(), 2.5);
    let line = SmolyakOperator::new(DownwardClosedSet::closure(&[mi(&[(1, 1)])]), nodes.clone()).unwrap();
    let pts: Vec<Vec<f64>> = line.grid().iter().map(|g| g.dense(&nodes, 1)).collect();
    assert_eq!(pts, vec![vec![0.0], vec![-1.0]]);
    let table = line.sample(|y| Ok(y[0])).unwrap();
    for y in [-1.0, -0.4, 0.0, 0.77, 1.0] {
        assert!((line.interpolate(&table, &[y]).unwrap() - y).abs() < 1e-15);
    }
    let corner = DownwardClosedSet::closure(&[mi(&[(1, 2), (2, 1)])]);
    assert_eq!(corner.len(), 6);
    let op = SmolyakOperator::new(corner, nodes).unwrap();
    assert_eq!(op.grid().len(), 6);
    let box11 = SmolyakOperator::new(
        DownwardClosedSet::closure(&[mi(&[(1, 1), (2, 1)])]),
        shared_leja(2).unwrap(),
    )
    .unwrap();
    let table = box11.sample(|y| Ok(y[0] * y[1])).unwrap();
    let mut rng = common::rng(3);
    for _ in 0..20 {
        let y = common::uniform_point(&mut rng, 2);
        assert!((box11.interpolate(&table, &y).unwrap() - y[0] * y[1]).abs() < 1e-12);
    }
}

#[test]
fn fourier_examples() {
    let basis = FourierBasisSpec::new(2, 3, 1.5, 0.5).unwrap();
    let mode = vec![3, 4];
    let scale = 5.0f64;
    let u = FourierField::from_modes(2, 3, &[(mode.clone(), 1.0)]).unwrap();
    let c = encode(&basis, &u).unwrap();
    let rank = basis.rank_of(&mode).unwrap();
    for (p, v) in c.iter().enumerate() {
        let expect = if p == rank { scale.powf(1.5) } else { 0.0 };
        assert!(close(*v, expect, 1e-14));
    }
    assert!(encode(&basis, &FourierField::zeros(2, 3))
        .unwrap()
        .iter()
        .all(|v| *v == 0.0));
    let mut unit = vec![0.0; basis.n_modes()];
    unit[rank] = 1.0;
    let eta = decode(&basis, &unit).unwrap();
    assert!(close(eta.get(&mode), scale.powf(-0.5), 1e-14));
    assert!(close(eta.hs_norm(0.5), 1.0, 1e-14));
    let one = FourierField::from_modes(2, 3, &[(vec![0, 0], 1.0)]).unwrap();
    for s in [0.0, 1.0, 3.7] {
        assert_eq!(one.hs_norm(s), 1.0);
    }
    let three = FourierField::from_modes(1, 4, &[(vec![3], 1.0)]).unwrap();
    assert!(close(three.hs_norm(2.0), 9.0, 1e-14));
    let x = [0.3, 0.85];
    let direct = SQRT_2 * (2.0 * PI * 2.0 * 0.3).sin() * SQRT_2 * (2.0 * PI * 2.0 * 0.85).cos();
    assert!(close(xi(&mode, &x), direct, 1e-14));
    assert!(close(u.eval(&x), direct, 1e-14));
}

#[test]
fn lift_and_rescale_examples() {
    let basis = FourierBasisSpec::new(1, 5, 2.0, 0.0).unwrap();
    let dom = CubeDomain::new(0.2, 3.0, 6, WeightSequence::standard(1), &basis).unwrap();
    assert!(lift(&dom, &basis, &[0.0; 6])
        .unwrap()
        .coeffs()
        .iter()
        .all(|v| *v == 0.0));
    let e1 = lift(&dom, &basis, &[1.0]).unwrap();
    let c = encode(&basis, &e1).unwrap();
    assert!(close(c[0], 0.2, 1e-15));
    assert!(c[1..].iter().all(|v| *v == 0.0));
    let y = sample_cube(&dom, 9);
    let c = encode(&basis, &lift(&dom, &basis, &y).unwrap()).unwrap();
    for (p, v) in c.iter().enumerate() {
        let expect = if p < 6 { dom.bound(p) * y[p] } else { 0.0 };
        assert!((v - expect).abs() <= 1e-12 * dom.bound(0));
    }
    for (a, b) in rescale(&dom, &c).unwrap().iter().zip(&y) {
        assert!((a - b).abs() <= 4.0 * f64::EPSILON);
    }
    assert_eq!(rescale(&dom, &[0.0; 3]).unwrap(), vec![0.0; 6]);
    let edge: Vec<f64> = (0..6).map(|p| dom.bound(p)).collect();
    assert_eq!(rescale(&dom, &edge).unwrap(), vec![1.0; 6]);
    let mut outside = edge.clone();
    outside[2] *= 1.01;
    assert!(matches!(
        rescale(&dom, &outside),
        Err(Error::CubeMembership { index: 3, .. })
    ));
    assert_eq!(sample_cube(&dom, 4), sample_cube(&dom, 4));
    let mut rng = common::rng(0);
    let mean = (0..10_000)
        .map(|_| gpc_surrogate::spaces::sample_cube_with(&dom, &mut rng)[0])
        .sum::<f64>()
        / 10_000.0;
    assert!(mean.abs() < 0.03);
}

fn unit_oracle(dim: usize, max_mode: usize, f: FourierField, k: usize) -> PdeOracle {
    let basis = FourierBasisSpec::new(dim, max_mode, 1.0, 0.0).unwrap();
    let opts = OracleOptions {
        m_solve: Some(k),
        ..Default::default()
    };
    PdeOracle::new(basis, constant_field(dim, 1.0), f, opts).unwrap()
}

fn h1_relative(u: &FourierField, exact: &FourierField) -> f64 {
    let k = u.max_mode().max(exact.max_mode());
    let mut diff = u.resized(k);
    diff.axpy(-1.0, &exact.resized(k)).unwrap();
    diff.hs_norm(1.0) / exact.hs_norm(1.0)
}

#[test]
fn diagonal_laplacian_inverse() {
    let f = FourierField::from_modes(2, 2, &[(vec![1, 2], 0.7), (vec![3, 0], -0.2), (vec![4, 4], 1.1)]).unwrap();
    let o = unit_oracle(2, 2, f.clone(), 8);
    let u = o.solve(&FourierField::zeros(2, 2)).unwrap();
    for (mode, c) in [(vec![1, 2], 0.7), (vec![3, 0], -0.2), (vec![4, 4], 1.1)] {
        let k2: f64 = mode.iter().map(|&j: &usize| j.div_ceil(2) as f64).map(|k| k * k).sum();
        assert!(close(u.get(&mode), c / (4.0 * PI * PI * k2), 1e-13));
    }
    assert!(u.coeffs().iter().filter(|v| **v != 0.0).count() <= 3);
    assert!(close(
        o.observe(&FourierField::zeros(2, 2), &vec![1, 2]).unwrap(),
        0.7 / (4.0 * PI * PI * 2.0),
        1e-13
    ));
}

#[test]
fn manufactured_solution_one_dimension() {
    let s = 1.0 / SQRT_2;
    let f = FourierField::from_modes(1, 2, &[(vec![1], 4.0 * PI * PI * s), (vec![3], 1.2 * PI * PI * s)]).unwrap();
    let o = unit_oracle(1, 1, f, 4);
    let a = FourierField::from_modes(1, 1, &[(vec![2], 0.3 * s)]).unwrap();
    let exact = FourierField::from_modes(1, 1, &[(vec![1], s)]).unwrap();
    let u = o.solve(&a).unwrap();
    assert!(h1_relative(&u, &exact) <= 1e-8);
    assert!((u.eval(&[0.1]) - (2.0 * PI * 0.1).sin()).abs() < 1e-10);
}

#[test]
fn manufactured_solution_two_dimensions() {
    let f = FourierField::from_modes(
        2,
        2,
        &[(vec![1, 1], 8.0 * PI * PI / 2.0), (vec![3, 1], 1.8 * PI * PI / 2.0)],
    )
    .unwrap();
    let o = unit_oracle(2, 1, f, 4);
    let a = FourierField::from_modes(2, 1, &[(vec![2, 0], 0.3 / SQRT_2)]).unwrap();
    let exact = FourierField::from_modes(2, 1, &[(vec![1, 1], 0.5)]).unwrap();
    let u = o.solve(&a).unwrap();
    assert!(h1_relative(&u, &exact) <= 1e-8);
}

#[test]
fn solver_converges_spectrally_for_smooth_data() {
    let basis = FourierBasisSpec::new(1, 8, 2.0, 0.0).unwrap();
    let dom = CubeDomain::new(0.4, 2.0, basis.n_modes(), WeightSequence::standard(1), &basis).unwrap();
    let a = lift(&dom, &basis, &vec![1.0; basis.n_modes()]).unwrap();
    let f = default_source(1, 3).unwrap();
    let solve = |k| unit_oracle(1, 8, f.clone(), k).solve(&a).unwrap();
    let reference = solve(64);
    let coarse = h1_relative(&solve(8), &reference);
    let fine = h1_relative(&solve(24), &reference);
    assert!(coarse > 0.0 && coarse / fine.max(1e-300) > 100.0, "{coarse} vs {fine}");
}

#[test]
fn ellipticity_examples() {
    let o = unit_oracle(1, 2, default_source(1, 2).unwrap(), 8);
    assert!(close(
        o.check_ellipticity(&FourierField::zeros(1, 2)).unwrap(),
        1.0,
        1e-15
    ));
    let a = FourierField::from_modes(1, 1, &[(vec![2], -0.5)]).unwrap();
    assert!(close(o.check_ellipticity(&a).unwrap(), 1.0 - SQRT_2 / 2.0, 1e-12));
    let bad = FourierField::from_modes(1, 1, &[(vec![2], -0.9)]).unwrap();
    let err = o.solve(&bad).unwrap_err();
    assert!(matches!(err, Error::Ellipticity { .. }));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn observations_decay_and_share_one_solve() {
    let o = unit_oracle(1, 6, default_source(1, 3).unwrap(), 24);
    let a = FourierField::from_modes(1, 2, &[(vec![1], 0.2), (vec![4], -0.1)]).unwrap();
    let obs = o.observe_all(&a).unwrap();
    assert_eq!(o.solve_count(), 1);
    let _ = o.observe(&a, &vec![5]).unwrap();
    assert_eq!(o.solve_count(), 1);
    let partial: Vec<f64> = obs
        .iter()
        .scan(0.0, |acc, v| {
            *acc += v * v;
            Some(*acc)
        })
        .collect();
    assert!(partial.windows(2).all(|w| w[1] >= w[0]));
    assert!(partial.last().unwrap().is_finite());
}

#[test]
fn allocation_examples() {
    let p = allocate_worst_case(1, 2.0, 1.0, 100).unwrap();
    assert_eq!((p.counts(), p.realized()), (&[1][..], 1));
    let p = allocate_worst_case(4, 2.0, 1.0, 100).unwrap();
    assert_eq!((p.counts(), p.realized()), (&[4, 2, 2, 1][..], 9));
    assert_eq!(allocate_mean_square(1, 1.5, 1.0, 100).unwrap().counts(), &[1]);
    assert_eq!(allocate_mean_square(4, 1.5, 1.0, 100).unwrap().counts(), &[4, 2, 2, 1]);
    let mut rng = common::rng(5);
    for _ in 0..50 {
        use rand::Rng;
        let (alpha, beta, n) = (
            rng.gen_range(1.1..3.0),
            rng.gen_range(0.3..2.0),
            rng.gen_range(1..40usize),
        );
        let wc = allocate_worst_case(n, alpha, beta, 1000).unwrap();
        let ms = allocate_mean_square(n, alpha, beta, 1000).unwrap();
        for i in 1..=n {
            let e_wc = (alpha - 1.0) / beta;
            let e_ms = (2.0 * alpha - 1.0) / (2.0 * beta);
            let x = n as f64 / i as f64;
            assert!(wc.m(i) as f64 >= x.powf(e_wc) - 1e-9 && (wc.m(i) as f64) < x.powf(e_wc) + 1.0);
            assert!(ms.m(i) as f64 >= x.powf(e_ms) - 1e-9 && (ms.m(i) as f64) < x.powf(e_ms) + 1.0);
        }
    }
    assert_eq!(budget_for(1, Variant::WorstCase, 2.0, 1.0, 100, 100).unwrap(), (1, 1));
    assert_eq!(budget_for(9, Variant::WorstCase, 2.0, 1.0, 100, 100).unwrap(), (4, 9));
    let pool: Vec<MultiIndex> = (0..4).map(|k| MultiIndex::from_dense(&[k])).collect();
    let sets = build_output_sets(
        &pool,
        &AllocationPlan::from_counts(vec![1], Variant::WorstCase).unwrap(),
    )
    .unwrap();
    assert_eq!(sets.len(), 1);
    assert_eq!(sets[0].indices(), &[MultiIndex::zero()]);
    let sets = build_output_sets(
        &pool,
        &AllocationPlan::from_counts(vec![4, 2, 2, 1], Variant::WorstCase).unwrap(),
    )
    .unwrap();
    let sizes: Vec<usize> = sets.iter().map(|s| s.len()).collect();
    assert_eq!(sizes, vec![4, 3, 1, 1]);
    assert_eq!(sizes.iter().sum::<usize>(), 9);
}

#[test]
fn pool_examples() {
    let basis = FourierBasisSpec::new(1, 4, 2.0, 0.0).unwrap();
    let dom = CubeDomain::new(0.1, 3.0, 3, WeightSequence::standard(1), &basis).unwrap();
    assert_eq!(
        CandidatePool::apriori(&dom, 1, 0.5).unwrap().enumeration(),
        &[MultiIndex::zero()]
    );
    let line = CandidatePool::apriori_from_rho(&[2.0], 4).unwrap();
    let expect: Vec<MultiIndex> = (0..4).map(|k| MultiIndex::from_dense(&[k])).collect();
    assert_eq!(line.enumeration(), &expect[..]);
    // b = 1, 1/2, 1/4, 1/4: the tie between (2,0) and (0,1) goes to the lex-smaller
    // index under equal total order, which is (0,1) written as "2:1".
    let two = CandidatePool::apriori_from_rho(&[2.0, 4.0], 4).unwrap();
    let expect = [MultiIndex::zero(), mi(&[(1, 1)]), mi(&[(2, 1)]), mi(&[(1, 2)])];
    assert_eq!(two.enumeration(), &expect[..]);
    let oracle = unit_oracle(1, 4, default_source(1, 3).unwrap(), 16);
    let adaptive = CandidatePool::adaptive(&dom, &basis, &oracle, 1).unwrap();
    assert_eq!(adaptive.enumeration(), &[MultiIndex::zero()]);
}

fn small_problem() -> (FourierBasisSpec, CubeDomain, PdeOracle) {
    let basis = FourierBasisSpec::new(1, 4, 2.0, 0.0).unwrap();
    let dom = CubeDomain::new(0.1, 3.0, 3, WeightSequence::standard(1), &basis).unwrap();
    let oracle = unit_oracle(1, 4, default_source(1, 3).unwrap(), 16);
    (basis, dom, oracle)
}

#[test]
fn single_sample_surrogate_is_constant() {
    let (basis, dom, oracle) = small_problem();
    let pool = CandidatePool::apriori(&dom, 10, 0.5).unwrap();
    let model = SurrogateModel::build(&dom, &basis, &oracle, &pool, 1, Variant::WorstCase, 2.7, 2.45).unwrap();
    assert_eq!((model.output_count(), model.realized_cost()), (1, 1));
    let at_zero = oracle.observe_all(&FourierField::zeros(1, 4)).unwrap()[0];
    assert_eq!(model.observations(0), &[at_zero]);
    for seed in 0..5 {
        let a = lift(&dom, &basis, &sample_cube(&dom, seed)).unwrap();
        let out = model.evaluate(&a).unwrap();
        assert_eq!(out.get(&[0]), at_zero);
        assert!((1..=8).all(|j| out.get(&[j]) == 0.0));
    }
}

#[test]
fn oracle_calls_match_the_first_set() {
    let (basis, dom, oracle) = small_problem();
    let pool = CandidatePool::apriori(&dom, 40, 0.5).unwrap();
    let model = SurrogateModel::build(&dom, &basis, &oracle, &pool, 60, Variant::WorstCase, 2.7, 2.45).unwrap();
    assert_eq!(oracle.solve_count(), model.set_size(0));
    assert!(model.set_size(0) > 1);
}

#[test]
fn surrogate_collocates_at_grid_points() {
    let (basis, dom, oracle) = small_problem();
    let pool = CandidatePool::apriori(&dom, 40, 0.5).unwrap();
    let model = SurrogateModel::build(&dom, &basis, &oracle, &pool, 60, Variant::WorstCase, 2.7, 2.45).unwrap();
    for (k, nu) in model.grid_indices()[..model.set_size(0)].iter().enumerate() {
        let y = GridPoint::new(nu.clone()).dense(model.nodes(), dom.n_act());
        let a = lift(&dom, &basis, &y).unwrap();
        let out = model.evaluate(&a).unwrap();
        assert!((out.get(basis.mode(0)) - model.observations(0)[k]).abs() < 1e-13);
    }
    let a = FourierField::zeros(1, 4);
    let out = model.evaluate(&a).unwrap();
    assert_eq!(out, model.evaluate(&a).unwrap());
}

#[test]
fn error_estimates() {
    let (basis, dom, oracle) = small_problem();
    let pool = CandidatePool::apriori(&dom, 60, 0.5).unwrap();
    let model = SurrogateModel::build(&dom, &basis, &oracle, &pool, 40, Variant::MeanSquare, 2.7, 2.45).unwrap();
    let wc = worst_case_error(&model, &oracle, 100, 3).unwrap();
    assert_eq!(wc, worst_case_error(&model, &oracle, 100, 3).unwrap());
    let ms = mean_square_error(&model, &oracle, 100, 3).unwrap();
    assert!(ms.value <= wc.value * wc.value);
    let corners = worst_case_error(&model, &oracle, 0, 3).unwrap();
    assert_eq!(corners.n_points, corner_points(dom.n_act()).len());
    let se: Vec<f64> = [50, 200, 800]
        .iter()
        .map(|&n| mean_square_error(&model, &oracle, n, 17).unwrap().std_error)
        .collect();
    for w in se.windows(2) {
        let ratio = w[0] / w[1];
        assert!((1.4..2.9).contains(&ratio), "standard error ratio {ratio}");
    }
}

#[test]
fn large_budget_saturates_at_solver_accuracy() {
    // Output band equal to the solver band, so no truncation tail enters.
    let basis = FourierBasisSpec::new(1, 12, 2.0, 0.0).unwrap();
    let dom = CubeDomain::new(0.05, 3.0, 2, WeightSequence::standard(1), &basis).unwrap();
    let oracle = unit_oracle(1, 12, default_source(1, 3).unwrap(), 12);
    let pool = CandidatePool::adaptive(&dom, &basis, &oracle, 120).unwrap();
    let model = SurrogateModel::build(&dom, &basis, &oracle, &pool, 100_000, Variant::WorstCase, 2.7, 2.45).unwrap();
    let wc = worst_case_error(&model, &oracle, 50, 1).unwrap();
    assert!(wc.value <= 10.0 * oracle.options().cg_tol, "{}", wc.value);
}

#[test]
fn identity_operator_reproduces_linear_maps() {
    let basis = FourierBasisSpec::new(1, 2, 1.0, 1.0).unwrap();
    let dom = CubeDomain::new(0.3, 2.0, basis.n_modes(), WeightSequence::standard(1), &basis).unwrap();
    let id = IdentityOperator::new(basis.clone());
    let zero = MultiIndex::zero();
    let mut enumeration = vec![zero];
    enumeration.extend((1..=basis.n_modes()).map(MultiIndex::unit));
    let pool = CandidatePool::from_enumeration(enumeration).unwrap();
    let plan = AllocationPlan::from_counts(vec![basis.n_modes(); pool.len()], Variant::WorstCase).unwrap();
    let model = SurrogateModel::build_with_plan(&dom, &basis, &id, &pool, &plan).unwrap();
    let wc = worst_case_error(&model, &id, 200, 4).unwrap();
    assert!(wc.value < 1e-12);
}
