//! Measure how fast a family approaches its attached orbit: horizontality
//! of the orbit, membership threshold, and the fitted decay rate of the
//! distance along a real ray.

use hodgeorbit::monodromy::decompose;
use hodgeorbit::vhs::registry;
use hodgeorbit::verify::{
    check_orbit_horizontality, distance_decay, orbit_threshold, Tolerances,
};
use hodgeorbit::C64;

fn main() {
    let tol = Tolerances::default();
    let fam = registry::elliptic().expect("family");
    let dec = decompose(fam.monodromy(), &[0.0]).expect("splitting");
    let orb = registry::elliptic_orbit().expect("orbit");

    let grid: Vec<Vec<C64>> = [(-2.0, 0.5), (-4.0, -1.0)]
        .iter()
        .map(|&(x, y)| vec![C64::new(x, y)])
        .collect();
    let residual = check_orbit_horizontality(&orb, &grid).expect("horizontality");
    println!("orbit horizontality residual: {residual:.3e}");

    let threshold =
        orbit_threshold(&orb, fam.structure(), -6.0, -0.05, 30).expect("threshold");
    println!("membership threshold C_hat: {:?}", threshold.c_hat);

    let fit = distance_decay(&fam, &dec, &orb, -30.0, -5.0, 60, 0.0, &tol).expect("decay");
    println!(
        "distance ~ |x|^{:.2} * exp({:.3} x); residual {:.2e}, rate slack {:.3}",
        fit.beta, fit.delta, fit.residual, fit.delta_slack
    );
}
