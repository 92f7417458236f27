//! Eigenstructure of single matrices and commuting families.
//!
//! Eigenvalues come from a complex Schur decomposition; generalized
//! eigenspaces are extracted as kernels of powered shifts. Joint eigenblocks
//! of a commuting tuple are computed by recursive splitting: decompose with
//! respect to the first operator, restrict the rest to each block, recurse.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numlin::subspace::{check_finite, spectral_norm, InnerProduct, Subspace};
use crate::CMat;

/// Default relative threshold under which two eigenvalues are treated as one
/// cluster. The threshold actually applied is never finer than
/// `eps^(1/(n+1))`: computed eigenvalues of a defective block of size `b`
/// scatter over a radius of roughly `eps^(1/b)`, so resolution necessarily
/// degrades with dimension.
pub const CLUSTER_TOL: f64 = 1e-8;

/// Joint generalized eigenspace of a commuting tuple, labelled by one
/// eigenvalue per generator.
#[derive(Debug, Clone)]
pub struct JointEigenblock {
    pub lambdas: Vec<C64>,
    pub space: Subspace,
}

fn schur_eigenvalues(a: &CMat) -> Result<Vec<C64>> {
    let schur = nalgebra::linalg::Schur::try_new(a.clone(), 1e-14, 10_000)
        .ok_or_else(|| Error::EigenNonConvergence { residual: f64::NAN })?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().cloned().collect())
}

/// Group eigenvalues into clusters at relative threshold `tol`.
fn cluster(eigs: &[C64], scale: f64, tol: f64) -> Vec<(C64, usize)> {
    let mut clusters: Vec<(C64, usize)> = Vec::new();
    let thresh = tol * scale.max(1.0);
    let mut sorted: Vec<C64> = eigs.to_vec();
    // deterministic order: by real part, then imaginary
    sorted.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    for &l in &sorted {
        match clusters.iter_mut().find(|(c, _)| (*c - l).norm() <= thresh) {
            Some((c, count)) => {
                // running mean keeps the representative centered
                *c = (*c * C64::new(*count as f64, 0.0) + l) / C64::new(*count as f64 + 1.0, 0.0);
                *count += 1;
            }
            None => clusters.push((l, 1)),
        }
    }
    clusters
}

/// Kernel of `(a - lambda I)^m`, returned as a standard-orthonormal subspace
/// of the expected dimension `m`.
fn generalized_eigenspace(a: &CMat, lambda: C64, multiplicity: usize) -> Result<Subspace> {
    let n = a.nrows();
    let mut shifted = a.clone();
    for i in 0..n {
        shifted[(i, i)] -= lambda;
    }
    let scale = spectral_norm(&shifted).max(1e-300);
    let b = shifted.unscale(scale);
    let mut power = CMat::identity(n, n);
    for _ in 0..multiplicity {
        power = &power * &b;
    }
    // right singular vectors for the `multiplicity` smallest singular values
    let svd = power.svd(false, true);
    let vt = svd.v_t.expect("svd v_t");
    let mut pairs: Vec<(f64, usize)> = svd
        .singular_values
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let cols: Vec<_> = pairs[..multiplicity]
        .iter()
        .map(|&(_, i)| vt.row(i).adjoint())
        .collect();
    let basis = CMat::from_columns(&cols);
    Subspace::from_orthonormal(basis, &InnerProduct::standard(n))
}

/// Eigenvalues with generalized eigenspaces; multiplicities sum to the
/// dimension and the spaces jointly span.
pub fn spectrum(a: &CMat) -> Result<Vec<(C64, Subspace)>> {
    spectrum_with_tol(a, CLUSTER_TOL)
}

pub fn spectrum_with_tol(a: &CMat, tol: f64) -> Result<Vec<(C64, Subspace)>> {
    if !a.is_square() {
        return Err(Error::Dimension("spectrum needs a square matrix".into()));
    }
    check_finite(a)?;
    let eigs = schur_eigenvalues(a)?;
    let scale = spectral_norm(a);
    let n = a.nrows();
    let tol_eff = tol.max(f64::EPSILON.powf(1.0 / (n as f64 + 1.0)));
    let clusters = cluster(&eigs, scale, tol_eff);
    let mut out = Vec::with_capacity(clusters.len());
    for (lambda, mult) in clusters {
        out.push((lambda, generalized_eigenspace(a, lambda, mult)?));
    }
    Ok(out)
}

/// Relative commutator residual `|[A,B]| / (|A||B|)`.
pub fn commutator_residual(a: &CMat, b: &CMat) -> f64 {
    let comm = a * b - b * a;
    comm.norm() / (a.norm() * b.norm()).max(1e-300)
}

/// Joint generalized eigenblocks of a commuting family.
pub fn joint_eigenblocks(ts: &[CMat]) -> Result<Vec<JointEigenblock>> {
    joint_eigenblocks_with_tol(ts, CLUSTER_TOL)
}

pub fn joint_eigenblocks_with_tol(ts: &[CMat], tol: f64) -> Result<Vec<JointEigenblock>> {
    if ts.is_empty() {
        return Err(Error::Dimension("empty operator tuple".into()));
    }
    let n = ts[0].nrows();
    for t in ts {
        if t.nrows() != n || t.ncols() != n {
            return Err(Error::Dimension("tuple members must share one square shape".into()));
        }
        check_finite(t)?;
    }
    for i in 0..ts.len() {
        for j in i + 1..ts.len() {
            let r = commutator_residual(&ts[i], &ts[j]);
            if r > 1e-10 {
                return Err(Error::NonCommuting { residual: r });
            }
        }
    }
    let ip = InnerProduct::standard(n);
    let mut blocks = vec![JointEigenblock { lambdas: Vec::new(), space: Subspace::full(n) }];
    for t in ts {
        let mut refined = Vec::new();
        for block in blocks {
            let b = block.space.basis();
            // restriction of t to the (invariant) block in its orthonormal basis
            let restricted = b.adjoint() * t * b;
            for (lambda, sub) in spectrum_with_tol(&restricted, tol)? {
                let lifted = b * sub.basis();
                let mut lambdas = block.lambdas.clone();
                lambdas.push(lambda);
                refined.push(JointEigenblock {
                    lambdas,
                    space: Subspace::from_span(&lifted, &ip)?,
                });
            }
        }
        blocks = refined;
    }
    // invariance check: every block must be preserved by every generator
    for block in &blocks {
        for t in ts {
            let image = t * block.space.basis();
            let b = block.space.basis();
            let residual = (&image - b * (b.adjoint() * &image)).norm()
                / spectral_norm(t).max(1e-300);
            if residual > 1e-8 {
                return Err(Error::Contract(format!(
                    "joint eigenblock not invariant (residual {residual:.3e})"
                )));
            }
        }
    }
    let total: usize = blocks.iter().map(|b| b.space.dim()).sum();
    if total != n {
        return Err(Error::Contract(format!(
            "joint eigenblocks span dimension {total}, ambient is {n}"
        )));
    }
    Ok(blocks)
}

/// Check that every eigenvalue in `lambdas` has modulus within `tol` of 1.
pub fn check_unit_modulus(lambdas: &[C64], tol: f64) -> Result<()> {
    for l in lambdas {
        if (l.norm() - 1.0).abs() > tol {
            return Err(Error::NonUnitaryEigenvalue { modulus: l.norm() });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{cmat_real, cvec};

    #[test]
    fn spectrum_of_diagonal() {
        let a = cmat_real(2, &[1.0, 0.0, 0.0, 2.0]);
        let mut spec = spectrum(&a).unwrap();
        spec.sort_by(|x, y| x.0.re.partial_cmp(&y.0.re).unwrap());
        assert_eq!(spec.len(), 2);
        assert!((spec[0].0 - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((spec[1].0 - C64::new(2.0, 0.0)).norm() < 1e-12);
        let ip = InnerProduct::standard(2);
        let e1 = cvec(&[(1.0, 0.0), (0.0, 0.0)]);
        let e2 = cvec(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!(spec[0].1.residual_of(&e1, &ip) < 1e-10);
        assert!(spec[1].1.residual_of(&e2, &ip) < 1e-10);
    }

    #[test]
    fn spectrum_of_jordan_block_is_whole_space() {
        let a = cmat_real(2, &[1.0, 1.0, 0.0, 1.0]);
        let spec = spectrum(&a).unwrap();
        assert_eq!(spec.len(), 1);
        assert!((spec[0].0 - C64::new(1.0, 0.0)).norm() < 1e-8);
        assert_eq!(spec[0].1.dim(), 2);
    }

    #[test]
    fn spectrum_of_fibonacci_companion_matches_quadratic_formula() {
        // companion matrix of x^2 - x - 1; oracle: (1 +- sqrt 5)/2
        let a = cmat_real(2, &[0.0, 1.0, 1.0, 1.0]);
        let mut spec = spectrum(&a).unwrap();
        spec.sort_by(|x, y| x.0.re.partial_cmp(&y.0.re).unwrap());
        let s5 = 5.0_f64.sqrt();
        assert!((spec[0].0 - C64::new((1.0 - s5) / 2.0, 0.0)).norm() < 1e-10);
        assert!((spec[1].0 - C64::new((1.0 + s5) / 2.0, 0.0)).norm() < 1e-10);
        assert_eq!(spec[0].1.dim(), 1);
        assert_eq!(spec[1].1.dim(), 1);
    }

    #[test]
    fn joint_blocks_of_simultaneous_diagonal() {
        let t1 = cmat_real(3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0]);
        let t2 = cmat_real(3, &[1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0]);
        let mut blocks = joint_eigenblocks(&[t1, t2]).unwrap();
        assert_eq!(blocks.len(), 3);
        blocks.sort_by(|a, b| {
            a.lambdas[0]
                .re
                .partial_cmp(&b.lambdas[0].re)
                .unwrap()
                .then(a.lambdas[1].re.partial_cmp(&b.lambdas[1].re).unwrap())
        });
        // (-1,-1) -> e3, (1,-1) -> e2, (1,1) -> e1
        let ip = InnerProduct::standard(3);
        let e = |i: usize| {
            let mut v = crate::CVec::zeros(3);
            v[i] = C64::new(1.0, 0.0);
            v
        };
        assert!(blocks[0].space.residual_of(&e(2), &ip) < 1e-10);
        assert!(blocks[1].space.residual_of(&e(1), &ip) < 1e-10);
        assert!(blocks[2].space.residual_of(&e(0), &ip) < 1e-10);
    }

    #[test]
    fn joint_blocks_of_identity() {
        let blocks = joint_eigenblocks(&[CMat::identity(4, 4)]).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].space.dim(), 4);
    }

    #[test]
    fn joint_blocks_of_unipotent_jordan_block() {
        let t = cmat_real(2, &[1.0, 1.0, 0.0, 1.0]);
        let blocks = joint_eigenblocks(&[t]).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].space.dim(), 2);
        assert!((blocks[0].lambdas[0] - C64::new(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn non_commuting_tuple_rejected() {
        let a = cmat_real(2, &[0.0, 1.0, 0.0, 0.0]);
        let b = cmat_real(2, &[0.0, 0.0, 1.0, 0.0]);
        assert!(matches!(
            joint_eigenblocks(&[a, b]),
            Err(Error::NonCommuting { .. })
        ));
    }
}
