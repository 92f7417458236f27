//! Operator norm of the conjugation action `Ad g : X -> g X g^{-1}` on
//! End(C^r), with respect to the Hilbert-Schmidt inner product induced by a
//! declared hermitian metric on C^r.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numlin::subspace::{check_finite, condition_number, InnerProduct};
use crate::CMat;

/// Above this ambient dimension the r^2 x r^2 conjugation matrix is not
/// materialized; the norm is then the (identical) condition number of the
/// metric-adjusted matrix.
const EXPLICIT_LIMIT: usize = 20;

/// `|Ad g|` on End(C^r) w.r.t. the Hilbert-Schmidt product of `ip`.
pub fn ad_norm(g: &CMat, ip: &InnerProduct) -> Result<f64> {
    if !g.is_square() || g.nrows() != ip.dim() {
        return Err(Error::Dimension("ad_norm shape mismatch".into()));
    }
    check_finite(g)?;
    // move to coordinates where the metric is standard
    let g_std = conjugate_to_std(g, ip);
    let cond = condition_number(&g_std);
    if !cond.is_finite() {
        return Err(Error::Singular { condition: cond });
    }
    let n = g.nrows();
    if n <= EXPLICIT_LIMIT {
        let g_inv = g_std
            .clone()
            .try_inverse()
            .ok_or(Error::Singular { condition: cond })?;
        let big = kron(&g_inv.transpose(), &g_std);
        Ok(big.svd(false, false).singular_values.max())
    } else {
        // sigma_max(A^T (x) B) = sigma_max(A) sigma_max(B), so the norm is the
        // condition number of the adjusted matrix.
        Ok(cond)
    }
}

/// Express `g` in coordinates where `ip` becomes the standard inner product.
fn conjugate_to_std(g: &CMat, ip: &InnerProduct) -> CMat {
    let n = g.nrows();
    ip.to_std(&(g * ip.from_std(&CMat::identity(n, n))))
}

/// Kronecker product, used for operator norms on conjugation actions.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}
