//! Split a commuting tuple of quasi-unipotent matrices into commuting
//! semisimple and nilpotent logarithms, and verify the reassembly.

use hodgeorbit::monodromy::decompose;
use hodgeorbit::numlin::matrix_exp;
use hodgeorbit::sample::{random_commuting_tuple, seeded_rng};
use hodgeorbit::C64;

fn main() {
    let mut rng = seeded_rng(11);
    let tuple = random_commuting_tuple(&mut rng, 5, 2).expect("tuple construction");
    let dec = decompose(&tuple, &[0.0, 0.0]).expect("splitting");

    println!("blocks:");
    for (i, block) in dec.blocks().iter().enumerate() {
        println!(
            "  {i}: dim {}, eigenvalues {:?}, exponents {:?}",
            block.space.dim(),
            block.lambdas,
            block.betas
        );
    }
    println!("basis condition: {:.3e}", dec.basis_condition());

    for (j, t) in tuple.generators().iter().enumerate() {
        let log = (&dec.s()[j] + &dec.n()[j]).map(|x| x * C64::new(0.0, 2.0 * std::f64::consts::PI));
        let rebuilt = matrix_exp(&log).expect("exp");
        let residual = (&rebuilt - t).norm() / t.norm();
        println!("generator {j}: exp(2 pi i (S+N)) residual {residual:.3e}");
    }
}
