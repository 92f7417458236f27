//! Seeded random generators for stress-testing the splitting and the
//! growth bounds: commuting tuples conjugate to block-diagonal unitary
//! times unipotent, semisimple matrices with real spectrum, and nilpotent
//! matrices.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::monodromy::MonodromyTuple;
use crate::numlin::matrix_exp;
use crate::CMat;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// The deterministic generator used everywhere randomness is needed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_complex<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_matrix<R: Rng>(rng: &mut R, r: usize) -> CMat {
    CMat::from_fn(r, r, |_, _| random_complex(rng))
}

/// A Haar-ish random unitary from the QR factorization of a Gaussian-like
/// matrix, with the diagonal phases of R absorbed.
pub fn random_unitary<R: Rng>(rng: &mut R, r: usize) -> CMat {
    let qr = random_matrix(rng, r).qr();
    let q = qr.q();
    let rr = qr.r();
    let phases = CMat::from_fn(r, r, |i, j| {
        if i == j {
            let d = rr[(i, i)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                C64::new(1.0, 0.0)
            }
        } else {
            C64::new(0.0, 0.0)
        }
    });
    q * phases
}

/// `count` random angles with pairwise circular separation at least 0.5.
fn separated_phases<R: Rng>(rng: &mut R, count: usize) -> Vec<f64> {
    'outer: loop {
        let phases: Vec<f64> = (0..count).map(|_| rng.gen_range(0.0..TAU)).collect();
        for i in 0..count {
            for j in i + 1..count {
                let mut d = (phases[i] - phases[j]).abs();
                d = d.min(TAU - d);
                if d < 0.5 {
                    continue 'outer;
                }
            }
        }
        return phases;
    }
}

/// A random partition of `r` into nonempty block sizes.
fn random_blocks<R: Rng>(rng: &mut R, r: usize) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut left = r;
    while left > 0 {
        let s = rng.gen_range(1..=left);
        sizes.push(s);
        left -= s;
    }
    sizes
}

/// A commuting tuple of `p` quasi-unipotent operators on `C^r`, built as a
/// common unitary conjugate of block-diagonal matrices; within each block
/// every generator is a unit-modulus scalar times the exponential of a
/// polynomial in one fixed nilpotent shift, so all generators commute
/// exactly by construction.
pub fn random_commuting_tuple<R: Rng>(rng: &mut R, r: usize, p: usize) -> Result<MonodromyTuple> {
    let sizes = random_blocks(rng, r);
    let u = random_unitary(rng, r);
    let u_inv = u.adjoint();
    let mut ts = Vec::with_capacity(p);
    for _ in 0..p {
        // well-separated phases per block, so the eigenvalue clusters of
        // one generator never straddle two blocks
        let phases = separated_phases(rng, sizes.len());
        let mut t = CMat::zeros(r, r);
        let mut off = 0;
        for (bi, &b) in sizes.iter().enumerate() {
            // polynomial in the upper shift, degree < b
            let mut nil = CMat::zeros(b, b);
            for d in 1..b {
                let c = random_complex(rng);
                for i in 0..b - d {
                    nil[(i, i + d)] += c;
                }
            }
            let lambda = C64::from_polar(1.0, phases[bi]);
            let block = matrix_exp(&nil)? * lambda;
            for i in 0..b {
                for j in 0..b {
                    t[(off + i, off + j)] = block[(i, j)];
                }
            }
            off += b;
        }
        ts.push(&u * t * &u_inv);
    }
    MonodromyTuple::new(ts)
}

/// A random semisimple matrix with real eigenvalues, conjugated by a
/// mildly non-normal similarity.
pub fn random_semisimple<R: Rng>(rng: &mut R, r: usize) -> CMat {
    // eigenvalue gaps stay above the clustering resolution
    let eigs = loop {
        let mut e: Vec<f64> = (0..r).map(|_| rng.gen_range(-1.0..1.0)).collect();
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if e.windows(2).all(|w| w[1] - w[0] > 0.05) {
            break e;
        }
    };
    let d = CMat::from_fn(r, r, |i, j| {
        if i == j {
            C64::new(eigs[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let v = random_unitary(rng, r) + random_matrix(rng, r).scale(0.2);
    let v_inv = v.clone().try_inverse().expect("perturbed unitary is invertible");
    &v * d * v_inv
}

/// A random nilpotent matrix: strictly upper triangular conjugated by a
/// mildly non-normal similarity.
pub fn random_nilpotent<R: Rng>(rng: &mut R, r: usize) -> CMat {
    let n = CMat::from_fn(r, r, |i, j| {
        if j > i {
            random_complex(rng)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let v = random_unitary(rng, r) + random_matrix(rng, r).scale(0.2);
    let v_inv = v.clone().try_inverse().expect("perturbed unitary is invertible");
    &v * n * v_inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monodromy::decompose;
    use crate::numlin::spectrum;

    #[test]
    fn seeded_rng_is_reproducible() {
        let a: Vec<f64> = {
            let mut r = seeded_rng(7);
            (0..5).map(|_| r.gen_range(0.0..1.0)).collect()
        };
        let b: Vec<f64> = {
            let mut r = seeded_rng(7);
            (0..5).map(|_| r.gen_range(0.0..1.0)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = seeded_rng(1);
        for r in [1, 3, 6] {
            let u = random_unitary(&mut rng, r);
            let res = (u.adjoint() * &u - CMat::identity(r, r)).norm();
            assert!(res < 1e-12, "residual {res:.3e}");
        }
    }

    #[test]
    fn random_tuples_split() {
        let mut rng = seeded_rng(42);
        for _ in 0..10 {
            let r = rng.gen_range(1..=6);
            let p = rng.gen_range(1..=3);
            let tuple = random_commuting_tuple(&mut rng, r, p).unwrap();
            let dec = decompose(&tuple, &vec![0.0; p]).unwrap();
            for s in dec.s() {
                for (l, _) in spectrum(s).unwrap() {
                    assert!(l.im.abs() < 1e-8);
                    assert!(l.re > -1.0 - 1e-10 && l.re <= 1e-10, "eigenvalue {l}");
                }
            }
        }
    }

    #[test]
    fn random_semisimple_has_real_spectrum() {
        let mut rng = seeded_rng(3);
        let s = random_semisimple(&mut rng, 5);
        for (l, _) in spectrum(&s).unwrap() {
            assert!(l.im.abs() < 1e-8);
        }
    }

    #[test]
    fn random_nilpotent_is_nilpotent() {
        let mut rng = seeded_rng(4);
        let n = random_nilpotent(&mut rng, 5);
        let mut p = CMat::identity(5, 5);
        for _ in 0..5 {
            p = &p * &n;
        }
        assert!(p.norm() < 1e-9 * (1.0 + n.norm()).powi(5));
    }
}
