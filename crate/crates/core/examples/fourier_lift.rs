//! Encodes a periodic field, lifts parameter points into the input space
//! and maps fields back to the parameter cube.

use gpc_surrogate::spaces::{decode, encode, lift, rescale, sample_cube, xs_norm};
use gpc_surrogate::{CubeDomain, FourierBasisSpec, FourierField, WeightSequence};

fn main() -> gpc_surrogate::Result<()> {
    let basis = FourierBasisSpec::new(2, 3, 1.0, 0.0)?;
    println!("{} modes, first ten in enumeration order:", basis.n_modes());
    for p in 0..10 {
        println!("  rank {p}: mode {:?}", basis.mode(p));
    }

    let u = FourierField::from_modes(2, 3, &[(vec![0, 0], 1.0), (vec![1, 2], 0.4), (vec![4, 3], -0.2)])?;
    let c = encode(&basis, &u)?;
    let back = decode(&basis.with_scales(1.0, 1.0)?, &c)?;
    println!(
        "u(0.1, 0.7) = {:.6}, decoded = {:.6}",
        u.eval(&[0.1, 0.7]),
        back.eval(&[0.1, 0.7])
    );

    let weights = WeightSequence::standard(2);
    let domain = CubeDomain::new(0.2, 2.0, 8, weights, &basis)?;
    let widths: Vec<String> = domain.bounds()[..8].iter().map(|b| format!("{b:.3e}")).collect();
    println!("cube half-widths: {}", widths.join(" "));
    let y = sample_cube(&domain, 42);
    let a = lift(&domain, &basis, &y)?;
    println!(
        "lifted field: weighted norm {:.4e} <= {:.4e}",
        xs_norm(&basis, &weights, &a, 0.0)?,
        domain.lift_norm_bound()
    );
    let y_back = rescale(&domain, &encode(&basis, &a)?)?;
    let gap = y.iter().zip(&y_back).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    println!("parameter round trip max deviation {gap:.1e}");
    println!(
        "truncation bias beyond {} dimensions: {:.3e}",
        domain.n_act(),
        domain.truncation_bias_bound()
    );
    Ok(())
}
