//! Period-domain geometry on the weight-1 rank-2 model: membership with
//! margins, Hodge decompositions, norms, and distances between flags.

use hodgeorbit::hodge::{
    decomposition_from_filtration, domain_distance, hodge_inner_product, hodge_norm_sq,
    in_period_domain, FlagPoint,
};
use hodgeorbit::vhs::registry;
use hodgeorbit::{cvec, CMat};

fn flag_at_tau(re: f64, im: f64) -> FlagPoint {
    FlagPoint::from_spans(vec![
        (1, CMat::from_columns(&[cvec(&[(1.0, 0.0), (re, im)])])),
        (0, CMat::identity(2, 2)),
    ])
    .expect("flag")
}

fn main() {
    let phd = registry::elliptic_structure().expect("structure");

    for (re, im) in [(0.0, 1.0), (0.3, 0.1), (0.0, -1.0)] {
        let f = flag_at_tau(re, im);
        let report = in_period_domain(&f, &phd).expect("membership");
        println!("tau = {re}+{im}i: member {}, margin {:+.3e}", report.member, report.margin);
    }

    let f = flag_at_tau(0.0, 1.0);
    let dec = decomposition_from_filtration(&f, &phd).expect("decomposition");
    let v = cvec(&[(1.0, 0.0), (0.0, 0.0)]);
    let n2 = hodge_norm_sq(&v, &dec, &phd).expect("norm");
    println!("|e1|_h^2 at tau = i: {n2:.6}");

    let ip = hodge_inner_product(&dec, &phd).expect("metric");
    let g = flag_at_tau(0.0, 2.0);
    let d = domain_distance(&f, &g, &ip).expect("distance");
    println!("gap distance between tau = i and tau = 2i: {d:.6}");
}
