//! Subspaces of C^r with an explicitly declared hermitian inner product.
//!
//! Every geometric computation downstream (principal angles, flag
//! distances, Ad-norms) is relative to some inner product; the helpers here
//! reduce everything to the standard one through a Cholesky change of
//! coordinates.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::{CMat, CVec};

/// Relative singular-value threshold deciding numerical rank.
pub const RANK_TOL: f64 = 1e-10;

/// A hermitian positive definite form on C^r, with its Cholesky factor
/// cached so vectors can be mapped to coordinates in which the form is
/// standard.
#[derive(Debug, Clone)]
pub struct InnerProduct {
    gram: CMat,
    /// Upper factor `U = L^H` of `G = L L^H`; `x -> U x` is an isometry onto
    /// the standard inner product.
    upper: CMat,
    upper_inv: CMat,
}

impl InnerProduct {
    pub fn new(gram: CMat) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::Dimension("inner product matrix must be square".into()));
        }
        let herm_residual = (&gram - gram.adjoint()).norm() / gram.norm().max(1.0);
        if herm_residual > 1e-10 {
            return Err(Error::Contract(format!(
                "inner product not hermitian (residual {herm_residual:.3e})"
            )));
        }
        let sym = (&gram + gram.adjoint()).scale(0.5);
        let chol = nalgebra::linalg::Cholesky::new(sym.clone())
            .ok_or(Error::IndefiniteInnerProduct)?;
        let lower: CMat = chol.l();
        // nalgebra's complex Cholesky does not fail on indefinite input (it
        // takes complex square roots); verify the factorization instead.
        let residual = (&lower * lower.adjoint() - &sym).norm() / sym.norm().max(1.0);
        if residual > 1e-10 {
            return Err(Error::IndefiniteInnerProduct);
        }
        let upper = lower.adjoint();
        let upper_inv = upper
            .clone()
            .try_inverse()
            .ok_or(Error::IndefiniteInnerProduct)?;
        Ok(Self { gram: sym, upper, upper_inv })
    }

    pub fn standard(dim: usize) -> Self {
        let id = CMat::identity(dim, dim);
        Self { gram: id.clone(), upper: id.clone(), upper_inv: id }
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &CMat {
        &self.gram
    }

    /// `<u, v>` conjugate-linear in the first slot.
    pub fn inner(&self, u: &CVec, v: &CVec) -> C64 {
        (u.adjoint() * &self.gram * v)[(0, 0)]
    }

    pub fn norm(&self, u: &CVec) -> f64 {
        self.inner(u, u).re.max(0.0).sqrt()
    }

    /// Column-wise isometry into standard coordinates.
    pub fn to_std(&self, m: &CMat) -> CMat {
        &self.upper * m
    }

    pub fn from_std(&self, m: &CMat) -> CMat {
        &self.upper_inv * m
    }
}

/// A subspace of C^r stored through an orthonormal basis (with respect to
/// the inner product declared at construction time).
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: CMat,
}

impl Subspace {
    /// Orthonormal basis of the span of `vectors` (columns), with numerical
    /// rank decided by a relative singular-value cutoff.
    pub fn from_span(vectors: &CMat, ip: &InnerProduct) -> Result<Self> {
        if vectors.nrows() != ip.dim() {
            return Err(Error::Dimension(format!(
                "vectors live in C^{} but the inner product is on C^{}",
                vectors.nrows(),
                ip.dim()
            )));
        }
        if vectors.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let ambient_dim = vectors.nrows();
        if vectors.ncols() == 0 {
            return Ok(Self { ambient_dim, basis: CMat::zeros(ambient_dim, 0) });
        }
        let std_vecs = ip.to_std(vectors);
        let svd = std_vecs.svd(true, false);
        let smax = svd.singular_values.max();
        let rank = svd
            .singular_values
            .iter()
            .filter(|&&s| s > RANK_TOL * smax.max(1e-300))
            .count();
        let u = svd.u.as_ref().expect("svd with u requested");
        let basis_std = u.columns(0, rank).into_owned();
        Ok(Self { ambient_dim, basis: ip.from_std(&basis_std) })
    }

    /// Wrap a matrix whose columns are already orthonormal w.r.t. `ip`.
    pub fn from_orthonormal(basis: CMat, ip: &InnerProduct) -> Result<Self> {
        let k = basis.ncols();
        let std = ip.to_std(&basis);
        let gram = std.adjoint() * &std;
        let residual = (&gram - CMat::identity(k, k)).norm();
        if residual > 1e-8 {
            return Err(Error::Contract(format!(
                "basis not orthonormal (residual {residual:.3e})"
            )));
        }
        Ok(Self { ambient_dim: basis.nrows(), basis })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: CMat::zeros(ambient_dim, 0) }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: CMat::identity(ambient_dim, ambient_dim) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    /// Residual of `v` against the subspace, measured in `ip`: the norm of
    /// the component orthogonal to the span.
    pub fn residual_of(&self, v: &CVec, ip: &InnerProduct) -> f64 {
        let b = ip.to_std(&self.basis);
        let x = ip.to_std(&CMat::from_columns(&[v.clone()]));
        let proj = &b * (b.adjoint() * &x);
        (x - proj).norm()
    }

    /// Whether `other` spans the same subspace, up to `tol` in gap distance.
    pub fn coincides_with(&self, other: &Subspace, ip: &InnerProduct, tol: f64) -> bool {
        self.dim() == other.dim() && gap_distance(self, other, ip).map_or(false, |g| g <= tol)
    }
}

/// Orthonormalize a set of vectors; thin wrapper kept for call-site clarity.
pub fn orthonormalize(vectors: &CMat, ip: &InnerProduct) -> Result<Subspace> {
    Subspace::from_span(vectors, ip)
}

/// Largest principal-angle sine between two subspaces of equal dimension,
/// with respect to `ip`.
///
/// Computed as the spectral norm of the component of one orthonormal basis
/// orthogonal to the other subspace; this stays accurate for very small
/// angles, unlike `sqrt(1 - sigma_min^2)` of the cosine matrix.
pub fn gap_distance(s1: &Subspace, s2: &Subspace, ip: &InnerProduct) -> Result<f64> {
    if s1.ambient_dim() != s2.ambient_dim() {
        return Err(Error::Dimension("subspaces have different ambient dimensions".into()));
    }
    if s1.dim() != s2.dim() {
        return Err(Error::Dimension(format!(
            "gap distance needs equal dimensions, got {} and {}",
            s1.dim(),
            s2.dim()
        )));
    }
    if s1.dim() == 0 {
        return Ok(0.0);
    }
    let b1 = ip.to_std(s1.basis());
    let b2 = ip.to_std(s2.basis());
    // Re-orthonormalize defensively in standard coordinates.
    let q1 = thin_q(&b1);
    let q2 = thin_q(&b2);
    let complement = &q2 - &q1 * (q1.adjoint() * &q2);
    let s = complement.svd(false, false).singular_values.max();
    Ok(s.min(1.0))
}

fn thin_q(m: &CMat) -> CMat {
    let svd = m.clone().svd(true, false);
    let rank = m.ncols();
    svd.u.expect("svd u").columns(0, rank).into_owned()
}

/// Spectral (operator 2-) norm.
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// Condition number in the spectral norm; `f64::INFINITY` when singular.
pub fn condition_number(m: &CMat) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.max();
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if smin <= 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}

pub fn check_finite(m: &CMat) -> Result<()> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Err(Error::NonFinite)
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvec;

    fn std2() -> InnerProduct {
        InnerProduct::standard(2)
    }

    #[test]
    fn orthonormalize_dependent_input_has_rank_one() {
        let e1 = cvec(&[(1.0, 0.0), (0.0, 0.0)]);
        let m = CMat::from_columns(&[e1.clone(), e1.scale(2.0)]);
        let s = orthonormalize(&m, &std2()).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.residual_of(&e1, &std2()) < 1e-12);
    }

    #[test]
    fn orthonormalize_keeps_orthonormal_pair() {
        let s = orthonormalize(&CMat::identity(2, 2), &std2()).unwrap();
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn orthonormalize_gram_schmidt_pair() {
        // span(e1+e2, e1) is the whole plane
        let v1 = cvec(&[(1.0, 0.0), (1.0, 0.0)]);
        let v2 = cvec(&[(1.0, 0.0), (0.0, 0.0)]);
        let s = orthonormalize(&CMat::from_columns(&[v1, v2]), &std2()).unwrap();
        assert_eq!(s.dim(), 2);
        let gram = s.basis().adjoint() * s.basis();
        assert!((gram - CMat::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn gap_identical_is_zero() {
        let e1 = cvec(&[(1.0, 0.0), (0.0, 0.0)]);
        let s = orthonormalize(&CMat::from_columns(&[e1]), &std2()).unwrap();
        assert_eq!(gap_distance(&s, &s, &std2()).unwrap(), 0.0);
    }

    #[test]
    fn gap_orthogonal_lines_is_one() {
        let e1 = cvec(&[(1.0, 0.0), (0.0, 0.0)]);
        let e2 = cvec(&[(0.0, 0.0), (1.0, 0.0)]);
        let s1 = orthonormalize(&CMat::from_columns(&[e1]), &std2()).unwrap();
        let s2 = orthonormalize(&CMat::from_columns(&[e2]), &std2()).unwrap();
        assert!((gap_distance(&s1, &s2, &std2()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gap_diagonal_line_is_sqrt_half() {
        // principal angle pi/4 between e1 and (e1+e2)/sqrt(2)
        let e1 = cvec(&[(1.0, 0.0), (0.0, 0.0)]);
        let d = cvec(&[(1.0, 0.0), (1.0, 0.0)]);
        let s1 = orthonormalize(&CMat::from_columns(&[e1]), &std2()).unwrap();
        let s2 = orthonormalize(&CMat::from_columns(&[d]), &std2()).unwrap();
        let g = gap_distance(&s1, &s2, &std2()).unwrap();
        assert!((g - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn gap_dimension_mismatch_errors() {
        let s1 = Subspace::full(2);
        let e1 = cvec(&[(1.0, 0.0), (0.0, 0.0)]);
        let s2 = orthonormalize(&CMat::from_columns(&[e1]), &std2()).unwrap();
        assert!(gap_distance(&s1, &s2, &std2()).is_err());
    }

    #[test]
    fn indefinite_inner_product_rejected() {
        let g = CMat::from_row_slice(2, 2, &[
            C64::new(1.0, 0.0), C64::new(0.0, 0.0),
            C64::new(0.0, 0.0), C64::new(-1.0, 0.0),
        ]);
        assert!(matches!(InnerProduct::new(g), Err(Error::IndefiniteInnerProduct)));
    }
}
