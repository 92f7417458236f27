//! Untwist a period map so it descends to the punctured disc, take its
//! radial limit, and check that three different rays give the same limit.

use hodgeorbit::monodromy::decompose;
use hodgeorbit::vhs::{limit_filtration, registry, untwisted_map};
use hodgeorbit::verify::{check_extension, Tolerances};
use hodgeorbit::C64;

fn main() {
    let fam = registry::elliptic().expect("family");
    let dec = decompose(fam.monodromy(), &[0.0]).expect("splitting");
    let psi = untwisted_map(&fam, &dec).expect("untwisting");

    let (limit, report) =
        limit_filtration(&psi, &[], &[C64::new(1.0, 0.0)], 16).expect("limit");
    println!("convergence order {:.3}, final gap {:.3e}", report.order, report.final_gap);
    for &(p, ref s) in limit.steps() {
        println!("limit step p={p}: dim {}", s.dim());
    }

    let ext = check_extension(&psi, &[], 1, 16, &Tolerances::default()).expect("extension");
    println!(
        "three-ray agreement: max gap {:.3e}, orders {:?}, pass {}",
        ext.max_ray_gap, ext.orders, ext.pass
    );
}
