//! Matrix exponential and the finite logarithm of unipotent operators.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numlin::subspace::{check_finite, spectral_norm};
use crate::CMat;

/// Padé(13,13) coefficients for the scaling-and-squaring exponential.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Matrix exponential by scaling and squaring with a Padé(13,13) kernel.
pub fn matrix_exp(a: &CMat) -> Result<CMat> {
    if !a.is_square() {
        return Err(Error::Dimension("matrix_exp needs a square matrix".into()));
    }
    check_finite(a)?;
    let n = a.nrows();
    if n == 0 {
        return Ok(CMat::identity(0, 0));
    }
    let norm = one_norm(a);
    let theta13 = 5.371920351148152;
    let s = if norm > theta13 {
        (norm / theta13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.unscale(2f64.powi(s));

    let ident = CMat::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let b = &PADE13;
    let u_inner = &a6 * (a6.scale(b[13]) + a4.scale(b[11]) + a2.scale(b[9]))
        + a6.scale(b[7])
        + a4.scale(b[5])
        + a2.scale(b[3])
        + ident.scale(b[1]);
    let u = &scaled * u_inner;
    let v = &a6 * (a6.scale(b[12]) + a4.scale(b[10]) + a2.scale(b[8]))
        + a6.scale(b[6])
        + a4.scale(b[4])
        + a2.scale(b[2])
        + ident.scale(b[0]);
    let denom = &v - &u;
    let numer = &v + &u;
    let mut result = denom
        .lu()
        .solve(&numer)
        .ok_or(Error::Singular { condition: f64::INFINITY })?;
    for _ in 0..s {
        result = &result * &result;
    }
    Ok(result)
}

fn one_norm(a: &CMat) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Logarithm of a unipotent matrix through the terminating Mercator series
/// `sum_{k=1}^{dim-1} (-1)^{k+1} (U - I)^k / k`.
pub fn log_unipotent(u: &CMat) -> Result<CMat> {
    if !u.is_square() {
        return Err(Error::Dimension("log_unipotent needs a square matrix".into()));
    }
    check_finite(u)?;
    let n = u.nrows();
    let m = u - CMat::identity(n, n);
    // nilpotency check: (U - I)^n must vanish relative to scale
    let mut power = CMat::identity(n, n);
    for _ in 0..n {
        power = &power * &m;
    }
    let scale = (1.0 + spectral_norm(&m)).powi(n as i32);
    let residual = spectral_norm(&power);
    if residual > 1e-10 * scale {
        return Err(Error::NotUnipotent { residual });
    }
    let mut term = CMat::identity(n, n);
    let mut log = CMat::zeros(n, n);
    for k in 1..n {
        term = &term * &m;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        log += term.scale(sign / k as f64);
    }
    Ok(log)
}

/// Scale a matrix by a complex number.
pub fn cscale(a: &CMat, z: C64) -> CMat {
    a.map(|x| x * z)
}
