//! Build the twisted frame of a family with a unitary twist and check that
//! its entries are single-valued: moving the coordinate by one full period
//! leaves every entry unchanged.

use hodgeorbit::monodromy::{decompose, deligne_frame};
use hodgeorbit::vhs::registry;
use hodgeorbit::C64;

const TAU: f64 = 2.0 * std::f64::consts::PI;

fn main() {
    let fam = registry::elliptic_plus_twist(-0.5).expect("family");
    let dec = decompose(fam.monodromy(), &[0.0]).expect("splitting");
    let frame = deligne_frame(&dec);
    println!("frame with {} entries", frame.len());

    let z = [C64::new(-3.0, 0.7)];
    let shifted = [z[0] + C64::new(0.0, TAU)];
    for (i, entry) in frame.iter().enumerate() {
        let here = entry.eval(&dec, &z).expect("eval");
        let there = entry.eval(&dec, &shifted).expect("eval");
        let drift = (&here - &there).norm();
        println!(
            "entry {i}: block {}, exponent {:+.3}, period drift {drift:.3e}",
            entry.block_index, entry.betas[0]
        );
    }
}
