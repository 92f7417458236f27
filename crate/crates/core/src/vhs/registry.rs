//! Built-in example families. Every constructor validates its output, so a
//! successful return already certifies equivariance, membership on the
//! declared box, and polarization compatibility.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hodge::{FlagPoint, PolarizedHodgeData};
use crate::vhs::{make_orbit_family, OrbitData, Perturbation, VHSFamily};
use crate::{cvec, CMat};

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Weight-1 rank-2 structure with the standard antisymmetric-type pairing
/// `Q(u, v) = i (u_1 conj(v_2) - u_2 conj(v_1))`.
pub fn elliptic_structure() -> Result<PolarizedHodgeData> {
    let q = CMat::from_row_slice(
        2,
        2,
        &[
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        ],
    );
    PolarizedHodgeData::new(1, BTreeMap::from([(1, 1), (0, 1)]), q)
}

/// Orbit data of the elliptic model: limit `span e1`, one unipotent
/// direction with `exp(-zN) e1 = e1 + (z/2πi) e2`.
pub fn elliptic_orbit() -> Result<OrbitData> {
    let a = FlagPoint::from_spans(vec![
        (1, CMat::from_columns(&[cvec(&[(1.0, 0.0), (0.0, 0.0)])])),
        (0, CMat::identity(2, 2)),
    ])?;
    let mut n = CMat::zeros(2, 2);
    n[(1, 0)] = C64::new(0.0, 1.0 / TAU);
    OrbitData::new(a, vec![CMat::zeros(2, 2)], vec![n])
}

/// The elliptic family: the orbit above perturbed by `t` in the `e2`
/// coordinate, so `Φ(z) = span(e1 + (z/2πi + e^z) e2)`.
pub fn elliptic() -> Result<VHSFamily> {
    let pert: Box<Perturbation> = Box::new(|t: &[C64], _w: &[C64]| {
        let mut m = CMat::zeros(2, 2);
        m[(1, 0)] = t[0];
        m
    });
    make_orbit_family(elliptic_structure()?, elliptic_orbit()?, Some(pert), -2.0, 0.0, 0)
}

/// The unperturbed elliptic orbit as a family (valid on a wider box).
pub fn elliptic_orbit_family() -> Result<VHSFamily> {
    make_orbit_family(elliptic_structure()?, elliptic_orbit()?, None, -2.0, 0.0, 0)
}

/// Constant family on the elliptic structure, sitting at `τ = i`.
pub fn constant() -> Result<VHSFamily> {
    let a = FlagPoint::from_spans(vec![
        (1, CMat::from_columns(&[cvec(&[(1.0, 0.0), (0.0, 1.0)])])),
        (0, CMat::identity(2, 2)),
    ])?;
    let orb = OrbitData::new(a, vec![CMat::zeros(2, 2)], vec![CMat::zeros(2, 2)])?;
    make_orbit_family(elliptic_structure()?, orb, None, -1.0, 0.0, 0)
}

/// Weight-0 rank-1 structure, polarization `[1]`.
pub fn twist_structure() -> Result<PolarizedHodgeData> {
    PolarizedHodgeData::new(0, BTreeMap::from([(0, 1)]), CMat::identity(1, 1))
}

/// Orbit data of the rank-1 unitary twist `T = exp(2πi beta)`.
pub fn rank1_twist_orbit(beta: f64) -> Result<OrbitData> {
    let a = FlagPoint::from_spans(vec![(0, CMat::identity(1, 1))])?;
    let s = CMat::from_diagonal(&cvec(&[(beta, 0.0)]));
    OrbitData::new(a, vec![s], vec![CMat::zeros(1, 1)])
}

/// The rank-1 unitary twist family.
pub fn rank1_twist(beta: f64) -> Result<VHSFamily> {
    make_orbit_family(twist_structure()?, rank1_twist_orbit(beta)?, None, -1.0, 0.0, 0)
}

/// Weight-2 rank-3 orbit with one full Jordan chain: limit flag
/// `e1 ⊂ (e1,e2) ⊂ C³` and `N = E_{21} + E_{32}`. Used for horizontality
/// checks; the matching structure carries `Q = diag(1,-1,1)`.
pub fn weight2_orbit() -> Result<OrbitData> {
    let a = FlagPoint::from_spans(vec![
        (2, CMat::from_columns(&[cvec(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)])])),
        (
            1,
            CMat::from_columns(&[
                cvec(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]),
                cvec(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]),
            ]),
        ),
        (0, CMat::identity(3, 3)),
    ])?;
    let mut n = CMat::zeros(3, 3);
    n[(1, 0)] = C64::new(1.0, 0.0);
    n[(2, 1)] = C64::new(1.0, 0.0);
    OrbitData::new(a, vec![CMat::zeros(3, 3)], vec![n])
}

/// Direct sum of the elliptic family with a rank-1 twist promoted to
/// weight 1: rank 3, Hodge numbers `h^{1,0} = 2`, `h^{0,1} = 1`.
pub fn elliptic_plus_twist(beta: f64) -> Result<VHSFamily> {
    let mut q = CMat::zeros(3, 3);
    q[(0, 1)] = C64::new(0.0, -1.0);
    q[(1, 0)] = C64::new(0.0, 1.0);
    q[(2, 2)] = C64::new(1.0, 0.0);
    let phd = PolarizedHodgeData::new(1, BTreeMap::from([(1, 2), (0, 1)]), q)?;
    let a = FlagPoint::from_spans(vec![
        (
            1,
            CMat::from_columns(&[
                cvec(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]),
                cvec(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]),
            ]),
        ),
        (0, CMat::identity(3, 3)),
    ])?;
    let mut s = CMat::zeros(3, 3);
    s[(2, 2)] = C64::new(beta, 0.0);
    let mut n = CMat::zeros(3, 3);
    n[(1, 0)] = C64::new(0.0, 1.0 / TAU);
    let orb = OrbitData::new(a, vec![s], vec![n])?;
    let pert: Box<Perturbation> = Box::new(|t: &[C64], _w: &[C64]| {
        let mut m = CMat::zeros(3, 3);
        m[(1, 0)] = t[0];
        m
    });
    make_orbit_family(phd, orb, Some(pert), -2.0, 0.0, 0)
}

/// Look up a registry family by name, reading parameters from a JSON
/// object (currently only `beta` is used).
pub fn by_name(name: &str, params: &serde_json::Value) -> Result<VHSFamily> {
    let beta = params.get("beta").and_then(|v| v.as_f64()).unwrap_or(-0.5);
    match name {
        "elliptic" => elliptic(),
        "elliptic_orbit" => elliptic_orbit_family(),
        "constant" => constant(),
        "rank1_twist" => rank1_twist(beta),
        "elliptic_plus_twist" => elliptic_plus_twist(beta),
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}

/// Names accepted by `by_name`, for help text and the suite.
pub const FAMILY_NAMES: [&str; 5] = [
    "elliptic",
    "elliptic_orbit",
    "constant",
    "rank1_twist",
    "elliptic_plus_twist",
];
