//! Estimate parabolic weights from Hodge-norm growth along a radial ray,
//! and track the Higgs field norm to see it stay bounded.

use hodgeorbit::monodromy::{decompose, deligne_frame};
use hodgeorbit::vhs::{higgs_norm, registry};
use hodgeorbit::verify::parabolic_weight;
use hodgeorbit::C64;

fn main() {
    let fam = registry::rank1_twist(-0.5).expect("family");
    let dec = decompose(fam.monodromy(), &[0.0]).expect("splitting");
    let frame = deligne_frame(&dec);
    for entry in &frame {
        let e = entry.clone();
        let dref = &dec;
        let est = parabolic_weight(&fam, &dec, move |z| e.eval(dref, z), 0.0, 1e-8, 1e-2, 30)
            .expect("weight fit");
        println!(
            "block exponent {:+.3}: |section|_h ~ |t|^{:.3} |log t|^{:.3} (stderr {:.1e})",
            entry.betas[0], est.beta_hat, est.logorder_hat, est.stderr
        );
    }

    let elliptic = registry::elliptic().expect("family");
    println!("Higgs norm along the real ray of the weight-1 family:");
    for x in [-2.0, -5.0, -10.0, -20.0, -40.0] {
        let v = higgs_norm(&elliptic, &[C64::new(x, 0.0)], &[]).expect("higgs");
        println!("  x = {x:>6}: {v:.6}");
    }
}
