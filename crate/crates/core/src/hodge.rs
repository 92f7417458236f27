//! Polarized Hodge-type structures on C^r: decompositions, filtrations as
//! flag points, period-domain membership with positivity margins, Hodge
//! norms, horizontality, and flag distances.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numlin::{
    check_finite, condition_number, gap_distance, orthonormalize, InnerProduct, Subspace,
};
use crate::{CMat, CVec};

/// Margin threshold below which a positivity check is treated as failed.
pub const MARGIN_TOL: f64 = 1e-10;

/// Weight, Hodge numbers, and the polarization pairing.
#[derive(Debug, Clone)]
pub struct PolarizedHodgeData {
    weight: i64,
    /// `p -> dim V^{p, weight-p}`; zero entries are dropped.
    hodge_numbers: BTreeMap<i64, usize>,
    q: CMat,
}

impl PolarizedHodgeData {
    pub fn new(weight: i64, hodge_numbers: BTreeMap<i64, usize>, q: CMat) -> Result<Self> {
        let hodge_numbers: BTreeMap<i64, usize> =
            hodge_numbers.into_iter().filter(|&(_, h)| h > 0).collect();
        let r: usize = hodge_numbers.values().sum();
        if !q.is_square() || q.nrows() != r {
            return Err(Error::Dimension(format!(
                "polarization is {}x{} but hodge numbers sum to {r}",
                q.nrows(),
                q.ncols()
            )));
        }
        check_finite(&q)?;
        let herm = (&q - q.adjoint()).norm() / q.norm().max(1.0);
        if herm > 1e-12 {
            return Err(Error::Contract(format!(
                "polarization not hermitian (residual {herm:.3e})"
            )));
        }
        let q = (&q + q.adjoint()).scale(0.5);
        let eigs = q.clone().symmetric_eigen().eigenvalues;
        let scale = eigs.iter().fold(0.0f64, |m, &e| m.max(e.abs())).max(1e-300);
        if eigs.iter().any(|&e| e.abs() < 1e-10 * scale) {
            return Err(Error::Contract("polarization is degenerate".into()));
        }
        let plus = eigs.iter().filter(|&&e| e > 0.0).count();
        let minus = r - plus;
        // on V^{p,q} the form (-1)^q Q is positive definite, so the positive
        // index of Q is the total Hodge number over even q
        let plus_expected: usize = hodge_numbers
            .iter()
            .filter(|&(&p, _)| (weight - p).rem_euclid(2) == 0)
            .map(|(_, &h)| h)
            .sum();
        if plus != plus_expected {
            return Err(Error::Contract(format!(
                "polarization signature ({plus},{minus}) does not match hodge numbers \
                 (expected {plus_expected} positive)"
            )));
        }
        Ok(Self { weight, hodge_numbers, q })
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn rank(&self) -> usize {
        self.q.nrows()
    }

    pub fn hodge_numbers(&self) -> &BTreeMap<i64, usize> {
        &self.hodge_numbers
    }

    pub fn polarization(&self) -> &CMat {
        &self.q
    }

    /// Pairing `Q(u, v)`, conjugate-linear in the first slot.
    pub fn pairing(&self, u: &CVec, v: &CVec) -> C64 {
        (u.adjoint() * &self.q * v)[(0, 0)]
    }

    /// Filtration dimension `f^p = sum_{i >= p} h^i`.
    pub fn flag_dim(&self, p: i64) -> usize {
        self.hodge_numbers.iter().filter(|&(&i, _)| i >= p).map(|(_, &h)| h).sum()
    }

    /// The `p` indices carried by a flag point of this structure, descending.
    pub fn flag_ps(&self) -> Vec<i64> {
        self.hodge_numbers.keys().rev().cloned().collect()
    }
}

/// A point of the flag manifold: every filtration step stored explicitly,
/// listed by strictly decreasing `p`.
#[derive(Debug, Clone)]
pub struct FlagPoint {
    ambient_dim: usize,
    /// `(p, F^p)` with `p` strictly decreasing and dims strictly increasing;
    /// the last step spans the ambient space.
    steps: Vec<(i64, Subspace)>,
}

impl FlagPoint {
    pub fn new(steps: Vec<(i64, Subspace)>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::Dimension("flag point needs at least one step".into()));
        }
        let ambient_dim = steps[0].1.ambient_dim();
        let ip = InnerProduct::standard(ambient_dim);
        for w in steps.windows(2) {
            let (p_hi, ref s_hi) = w[0];
            let (p_lo, ref s_lo) = w[1];
            if p_hi <= p_lo {
                return Err(Error::Dimension("flag steps must have decreasing p".into()));
            }
            if s_lo.ambient_dim() != ambient_dim {
                return Err(Error::Dimension("flag steps in different ambient spaces".into()));
            }
            if s_hi.dim() >= s_lo.dim() {
                return Err(Error::Dimension("flag steps must strictly grow".into()));
            }
            // containment: every basis vector of the smaller step must lie in
            // the bigger one
            for j in 0..s_hi.dim() {
                let v = s_hi.basis().column(j).into_owned();
                if s_lo.residual_of(&v, &ip) > 1e-8 {
                    return Err(Error::Contract(format!(
                        "flag step p={p_hi} is not contained in p={p_lo}"
                    )));
                }
            }
        }
        if steps.last().unwrap().1.dim() != ambient_dim {
            return Err(Error::Contract("lowest flag step must span the ambient space".into()));
        }
        Ok(Self { ambient_dim, steps })
    }

    /// Build a flag from spanning sets, orthonormalizing each step.
    pub fn from_spans(spans: Vec<(i64, CMat)>) -> Result<Self> {
        let mut steps = Vec::with_capacity(spans.len());
        for (p, m) in spans {
            let ip = InnerProduct::standard(m.nrows());
            steps.push((p, orthonormalize(&m, &ip)?));
        }
        Self::new(steps)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn steps(&self) -> &[(i64, Subspace)] {
        &self.steps
    }

    /// `F^p`: zero above the top step, the full space below the bottom one.
    pub fn step(&self, p: i64) -> Subspace {
        // steps are descending in p; take the smallest stored index >= p
        match self.steps.iter().rev().find(|&&(pi, _)| pi >= p) {
            Some((_, s)) => s.clone(),
            None => Subspace::zero(self.ambient_dim),
        }
    }

    /// Whether the declared dimensions match `phd`'s Hodge numbers.
    pub fn matches_dims(&self, phd: &PolarizedHodgeData) -> bool {
        let ps = phd.flag_ps();
        self.ambient_dim == phd.rank()
            && self.steps.len() == ps.len()
            && self
                .steps
                .iter()
                .zip(ps.iter())
                .all(|(&(p, ref s), &pe)| p == pe && s.dim() == phd.flag_dim(p))
    }
}

/// Hodge decomposition: one subspace per `p`, with `q = weight - p`.
#[derive(Debug, Clone)]
pub struct HodgeDecomposition {
    weight: i64,
    pieces: BTreeMap<i64, Subspace>,
}

impl HodgeDecomposition {
    pub fn new(weight: i64, pieces: BTreeMap<i64, Subspace>) -> Result<Self> {
        let pieces: BTreeMap<i64, Subspace> =
            pieces.into_iter().filter(|(_, s)| s.dim() > 0).collect();
        let mut dims = 0;
        let mut ambient = None;
        for s in pieces.values() {
            dims += s.dim();
            match ambient {
                None => ambient = Some(s.ambient_dim()),
                Some(a) if a == s.ambient_dim() => {}
                _ => return Err(Error::Dimension("pieces in different ambient spaces".into())),
            }
        }
        let ambient = ambient.ok_or_else(|| Error::Dimension("empty decomposition".into()))?;
        if dims != ambient {
            return Err(Error::Dimension(format!(
                "pieces of total dimension {dims} cannot span C^{ambient}"
            )));
        }
        let combined = combined_basis(&pieces, ambient);
        if condition_number(&combined) > 1e8 {
            return Err(Error::Contract("pieces are not independent".into()));
        }
        Ok(Self { weight, pieces })
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn ambient_dim(&self) -> usize {
        self.pieces.values().next().map_or(0, |s| s.ambient_dim())
    }

    pub fn pieces(&self) -> &BTreeMap<i64, Subspace> {
        &self.pieces
    }

    /// Check Q-orthogonality between distinct pieces and positivity of
    /// `(-1)^q Q` on each piece, against `phd`.
    pub fn validate(&self, phd: &PolarizedHodgeData) -> Result<()> {
        if self.ambient_dim() != phd.rank() || self.weight != phd.weight() {
            return Err(Error::Dimension("decomposition does not match structure".into()));
        }
        let q = phd.polarization();
        let keys: Vec<i64> = self.pieces.keys().cloned().collect();
        for (i, &pi) in keys.iter().enumerate() {
            let bi = self.pieces[&pi].basis();
            for &pj in &keys[i + 1..] {
                let bj = self.pieces[&pj].basis();
                let cross = (bi.adjoint() * q * bj).norm() / q.norm().max(1.0);
                if cross > 1e-8 {
                    return Err(Error::Contract(format!(
                        "pieces p={pi} and p={pj} are not Q-orthogonal (residual {cross:.3e})"
                    )));
                }
            }
            let m = compressed_form(&self.pieces[&pi], q, self.weight - pi);
            let margin = min_eigenvalue(&m);
            if margin <= MARGIN_TOL {
                return Err(Error::OutsideDomain { p: pi, margin });
            }
        }
        Ok(())
    }
}

fn combined_basis(pieces: &BTreeMap<i64, Subspace>, ambient: usize) -> CMat {
    let cols: Vec<CVec> = pieces
        .values()
        .flat_map(|s| (0..s.dim()).map(|j| s.basis().column(j).into_owned()).collect::<Vec<_>>())
        .collect();
    if cols.is_empty() {
        CMat::zeros(ambient, 0)
    } else {
        CMat::from_columns(&cols)
    }
}

/// `(-1)^q` times the compression of `Q` to the piece, in a basis that is
/// orthonormal for the standard product, so eigenvalue margins are
/// basis-independent.
fn compressed_form(piece: &Subspace, q: &CMat, q_index: i64) -> CMat {
    let b = piece.basis();
    let sign = if q_index.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    (b.adjoint() * q * b).scale(sign)
}

fn min_eigenvalue(hermitian: &CMat) -> f64 {
    if hermitian.nrows() == 0 {
        return f64::INFINITY;
    }
    let sym = (hermitian + hermitian.adjoint()).scale(0.5);
    sym.symmetric_eigen().eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Squared Hodge norm `sum_p (-1)^q Q(v^p, v^p)` of `v`, decomposed along
/// `dec`.
pub fn hodge_norm_sq(v: &CVec, dec: &HodgeDecomposition, phd: &PolarizedHodgeData) -> Result<f64> {
    dec.validate(phd)?;
    let n = dec.ambient_dim();
    if v.len() != n {
        return Err(Error::Dimension("vector does not match decomposition".into()));
    }
    let b = combined_basis(dec.pieces(), n);
    let coeffs = b
        .clone()
        .lu()
        .solve(&CMat::from_columns(&[v.clone()]))
        .ok_or(Error::Contract("pieces are not independent".into()))?;
    let q = phd.polarization();
    let mut total = 0.0;
    let mut offset = 0;
    for (&p, piece) in dec.pieces() {
        let k = piece.dim();
        let c = coeffs.rows(offset, k).into_owned();
        let comp = piece.basis() * c;
        let sign = if (phd.weight() - p).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        total += sign * (comp.adjoint() * q * &comp)[(0, 0)].re;
        offset += k;
    }
    Ok(total)
}

/// The hermitian metric whose norm is the Hodge norm of `dec`: pieces are
/// mutually orthogonal and carry `(-1)^q Q`.
pub fn hodge_inner_product(
    dec: &HodgeDecomposition,
    phd: &PolarizedHodgeData,
) -> Result<InnerProduct> {
    dec.validate(phd)?;
    let n = dec.ambient_dim();
    let b = combined_basis(dec.pieces(), n);
    let b_inv = b.clone().try_inverse().ok_or(Error::Contract("pieces are not independent".into()))?;
    let q = phd.polarization();
    let mut gram = CMat::zeros(n, n);
    let mut offset = 0;
    for (&p, piece) in dec.pieces() {
        let k = piece.dim();
        let rows = b_inv.rows(offset, k).into_owned();
        let bp = piece.basis();
        let sign = if (phd.weight() - p).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        gram += (rows.adjoint() * (bp.adjoint() * q * bp) * rows).scale(sign);
        offset += k;
    }
    InnerProduct::new((&gram + gram.adjoint()).scale(0.5))
}

/// `F^p = direct sum of pieces with index >= p`.
pub fn filtration_from_decomposition(dec: &HodgeDecomposition) -> Result<FlagPoint> {
    let n = dec.ambient_dim();
    let ip = InnerProduct::standard(n);
    let mut steps = Vec::new();
    for &p in dec.pieces().keys().rev() {
        let cols: Vec<CVec> = dec
            .pieces()
            .iter()
            .filter(|&(&i, _)| i >= p)
            .flat_map(|(_, s)| {
                (0..s.dim()).map(|j| s.basis().column(j).into_owned()).collect::<Vec<_>>()
            })
            .collect();
        steps.push((p, orthonormalize(&CMat::from_columns(&cols), &ip)?));
    }
    FlagPoint::new(steps)
}

/// Outcome of a period-domain membership test.
#[derive(Debug, Clone)]
pub struct MembershipReport {
    pub member: bool,
    /// Smallest positivity eigenvalue across all filtration steps.
    pub margin: f64,
    /// The first step that failed, if any.
    pub failed_p: Option<i64>,
}

/// Period-domain membership: at every `p` the Q-orthocomplement of
/// `F^{p+1}` inside `F^p` must have the expected dimension and carry a
/// positive definite `(-1)^q Q`, with the margin reported.
pub fn in_period_domain(f: &FlagPoint, phd: &PolarizedHodgeData) -> Result<MembershipReport> {
    if !f.matches_dims(phd) {
        return Err(Error::Dimension("flag does not match the structure's dimensions".into()));
    }
    let mut margin = f64::INFINITY;
    for (&p, &h) in phd.hodge_numbers().iter().rev() {
        let piece = match split_step(f, phd, p) {
            Some(s) => s,
            None => {
                return Ok(MembershipReport { member: false, margin: 0.0, failed_p: Some(p) })
            }
        };
        if piece.dim() != h {
            return Ok(MembershipReport { member: false, margin: 0.0, failed_p: Some(p) });
        }
        let m = min_eigenvalue(&compressed_form(&piece, phd.polarization(), phd.weight() - p));
        if m <= MARGIN_TOL {
            return Ok(MembershipReport { member: false, margin: m, failed_p: Some(p) });
        }
        margin = margin.min(m);
    }
    Ok(MembershipReport { member: true, margin, failed_p: None })
}

/// `F^p ∩ (F^{p+1})^⊥Q` as a standard-orthonormal subspace, or `None` when
/// the split degenerates (kernel dimension exceeds the complement).
fn split_step(f: &FlagPoint, phd: &PolarizedHodgeData, p: i64) -> Option<Subspace> {
    let n = f.ambient_dim();
    let fp = f.step(p);
    let fp1 = f.step(p + 1);
    let expected = fp.dim() - fp1.dim();
    let bp = fp.basis();
    // coefficients c with Q(u, Bp c) = 0 for all u in F^{p+1}
    let constraint = fp1.basis().adjoint() * phd.polarization() * bp;
    let kernel = kernel_of(&constraint);
    if kernel.ncols() != expected {
        return None;
    }
    let ip = InnerProduct::standard(n);
    orthonormalize(&(bp * kernel), &ip).ok()
}

/// Orthonormal kernel basis via SVD, relative threshold. The input is
/// padded to square first: the thin decomposition would otherwise drop
/// kernel directions of a wide matrix.
fn kernel_of(m: &CMat) -> CMat {
    let cols = m.ncols();
    if m.nrows() == 0 {
        return CMat::identity(cols, cols);
    }
    let work = if m.nrows() < cols {
        let mut padded = CMat::zeros(cols, cols);
        padded.rows_mut(0, m.nrows()).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = work.svd(false, true);
    let vt = svd.v_t.expect("svd v_t");
    let smax = svd.singular_values.max().max(1e-300);
    let kernel_cols: Vec<CVec> = (0..vt.nrows())
        .filter(|&i| svd.singular_values[i] <= 1e-10 * smax)
        .map(|i| vt.row(i).adjoint())
        .collect();
    if kernel_cols.is_empty() {
        CMat::zeros(cols, 0)
    } else {
        CMat::from_columns(&kernel_cols)
    }
}

/// Recover the Hodge decomposition of a flag inside the period domain.
pub fn decomposition_from_filtration(
    f: &FlagPoint,
    phd: &PolarizedHodgeData,
) -> Result<HodgeDecomposition> {
    let report = in_period_domain(f, phd)?;
    if !report.member {
        return Err(Error::OutsideDomain {
            p: report.failed_p.unwrap_or(0),
            margin: report.margin,
        });
    }
    let mut pieces = BTreeMap::new();
    for &p in phd.hodge_numbers().keys() {
        let piece = split_step(f, phd, p)
            .ok_or(Error::OutsideDomain { p, margin: 0.0 })?;
        pieces.insert(p, piece);
    }
    HodgeDecomposition::new(phd.weight(), pieces)
}

/// Horizontality of an operator at a flag: `A(F^p) ⊂ F^{p-1}` for all `p`.
pub fn is_horizontal(a: &CMat, f: &FlagPoint) -> Result<(bool, f64)> {
    if !a.is_square() || a.nrows() != f.ambient_dim() {
        return Err(Error::Dimension("operator does not match the flag's space".into()));
    }
    check_finite(a)?;
    let scale = a.norm().max(1.0);
    let mut residual: f64 = 0.0;
    for &(p, ref s) in f.steps() {
        let target = f.step(p - 1);
        let image = a * s.basis();
        let t = target.basis();
        let rem = (&image - t * (t.adjoint() * &image)).norm() / scale;
        residual = residual.max(rem);
    }
    Ok((residual <= 1e-8, residual))
}

/// Flag distance: the largest gap between matching steps, measured in `ip`
/// (typically the Hodge metric of a reference point).
pub fn domain_distance(f1: &FlagPoint, f2: &FlagPoint, ip: &InnerProduct) -> Result<f64> {
    if f1.steps().len() != f2.steps().len() {
        return Err(Error::Dimension("flags have different step counts".into()));
    }
    let mut d: f64 = 0.0;
    for (&(p1, ref s1), &(p2, ref s2)) in f1.steps().iter().zip(f2.steps()) {
        if p1 != p2 {
            return Err(Error::Dimension("flags have different step indices".into()));
        }
        d = d.max(gap_distance(s1, s2, ip)?);
    }
    Ok(d)
}

/// Image of a flag under an invertible operator, steps re-orthonormalized.
pub fn left_translate(g: &CMat, f: &FlagPoint) -> Result<FlagPoint> {
    if !g.is_square() || g.nrows() != f.ambient_dim() {
        return Err(Error::Dimension("operator does not match the flag's space".into()));
    }
    check_finite(g)?;
    let cond = condition_number(g);
    if !cond.is_finite() {
        return Err(Error::Singular { condition: cond });
    }
    let ip = InnerProduct::standard(f.ambient_dim());
    let mut steps = Vec::with_capacity(f.steps().len());
    for &(p, ref s) in f.steps() {
        steps.push((p, orthonormalize(&(g * s.basis()), &ip)?));
    }
    FlagPoint::new(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{cmat_real, cvec};

    /// Weight 1, rank 2, Q = diag(1, -1), pieces e1 / e2.
    fn weight1() -> PolarizedHodgeData {
        let q = cmat_real(2, &[1.0, 0.0, 0.0, -1.0]);
        PolarizedHodgeData::new(1, BTreeMap::from([(1, 1), (0, 1)]), q).unwrap()
    }

    fn weight1_dec() -> HodgeDecomposition {
        let ip = InnerProduct::standard(2);
        let e1 = orthonormalize(&CMat::from_columns(&[cvec(&[(1.0, 0.0), (0.0, 0.0)])]), &ip)
            .unwrap();
        let e2 = orthonormalize(&CMat::from_columns(&[cvec(&[(0.0, 0.0), (1.0, 0.0)])]), &ip)
            .unwrap();
        HodgeDecomposition::new(1, BTreeMap::from([(1, e1), (0, e2)])).unwrap()
    }

    /// Weight 2, rank 3, Q = diag(1, -1, 1), h = (1,1,1).
    fn weight2() -> PolarizedHodgeData {
        let q = cmat_real(3, &[1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0]);
        PolarizedHodgeData::new(2, BTreeMap::from([(2, 1), (1, 1), (0, 1)]), q).unwrap()
    }

    fn weight2_flag() -> FlagPoint {
        FlagPoint::from_spans(vec![
            (2, cmat_real(3, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).columns(0, 1).into_owned()),
            (1, cmat_real(3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]).columns(0, 2).into_owned()),
            (0, CMat::identity(3, 3)),
        ])
        .unwrap()
    }

    #[test]
    fn membership_weight2_diagonal_flag() {
        // each basis line sees (-1)^q Q as +1, so the flag sits inside the domain
        let report = in_period_domain(&weight2_flag(), &weight2()).unwrap();
        assert!(report.member);
        assert!(report.margin > 0.5);
    }

    #[test]
    fn signature_mismatch_rejected() {
        // weight 0 forces Q positive definite, diag(1,-1) is not
        let q = cmat_real(2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(PolarizedHodgeData::new(0, BTreeMap::from([(0, 2)]), q).is_err());
    }

    #[test]
    fn hodge_norm_of_basis_vectors() {
        let phd = weight1();
        let dec = weight1_dec();
        let e1 = cvec(&[(1.0, 0.0), (0.0, 0.0)]);
        let e2 = cvec(&[(0.0, 0.0), (1.0, 0.0)]);
        let zero = cvec(&[(0.0, 0.0), (0.0, 0.0)]);
        assert!((hodge_norm_sq(&e1, &dec, &phd).unwrap() - 1.0).abs() < 1e-12);
        assert!((hodge_norm_sq(&e2, &dec, &phd).unwrap() - 1.0).abs() < 1e-12);
        assert!(hodge_norm_sq(&zero, &dec, &phd).unwrap().abs() < 1e-15);
    }

    #[test]
    fn hodge_inner_product_matches_norm() {
        let phd = weight1();
        let dec = weight1_dec();
        let ip = hodge_inner_product(&dec, &phd).unwrap();
        let v = cvec(&[(0.3, 0.7), (-1.1, 0.2)]);
        let direct = hodge_norm_sq(&v, &dec, &phd).unwrap();
        assert!((ip.norm(&v).powi(2) - direct).abs() < 1e-12);
    }

    #[test]
    fn filtration_from_weight1_decomposition() {
        let f = filtration_from_decomposition(&weight1_dec()).unwrap();
        let ip = InnerProduct::standard(2);
        let e1 = cvec(&[(1.0, 0.0), (0.0, 0.0)]);
        assert_eq!(f.step(1).dim(), 1);
        assert!(f.step(1).residual_of(&e1, &ip) < 1e-12);
        assert_eq!(f.step(0).dim(), 2);
    }

    #[test]
    fn filtration_of_single_piece_is_whole_space() {
        let ip = InnerProduct::standard(2);
        let whole = orthonormalize(&CMat::identity(2, 2), &ip).unwrap();
        let dec = HodgeDecomposition::new(3, BTreeMap::from([(3, whole)])).unwrap();
        let f = filtration_from_decomposition(&dec).unwrap();
        assert_eq!(f.step(3).dim(), 2);
    }

    #[test]
    fn filtration_of_weight2_diagonal_pieces() {
        let ip = InnerProduct::standard(3);
        let e = |i: usize| {
            let mut m = CMat::zeros(3, 1);
            m[(i, 0)] = C64::new(1.0, 0.0);
            orthonormalize(&m, &ip).unwrap()
        };
        let dec =
            HodgeDecomposition::new(2, BTreeMap::from([(2, e(0)), (1, e(1)), (0, e(2))])).unwrap();
        let f = filtration_from_decomposition(&dec).unwrap();
        assert_eq!(f.step(2).dim(), 1);
        assert_eq!(f.step(1).dim(), 2);
        let e2 = cvec(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        assert!(f.step(1).residual_of(&e2, &ip) < 1e-12);
    }

    fn line_flag(dir: &[(f64, f64)]) -> FlagPoint {
        let v = cvec(dir);
        FlagPoint::from_spans(vec![
            (1, CMat::from_columns(&[v])),
            (0, CMat::identity(2, 2)),
        ])
        .unwrap()
    }

    #[test]
    fn membership_weight1_examples() {
        let phd = weight1();
        let pos = in_period_domain(&line_flag(&[(1.0, 0.0), (0.0, 0.0)]), &phd).unwrap();
        assert!(pos.member);
        assert!(pos.margin > 0.5);
        let neg = in_period_domain(&line_flag(&[(0.0, 0.0), (1.0, 0.0)]), &phd).unwrap();
        assert!(!neg.member);
        let null = in_period_domain(&line_flag(&[(1.0, 0.0), (1.0, 0.0)]), &phd).unwrap();
        assert!(!null.member);
    }

    #[test]
    fn decomposition_of_weight1_standard_flag() {
        let phd = weight1();
        let dec = decomposition_from_filtration(&line_flag(&[(1.0, 0.0), (0.0, 0.0)]), &phd).unwrap();
        let ip = InnerProduct::standard(2);
        let e1 = cvec(&[(1.0, 0.0), (0.0, 0.0)]);
        let e2 = cvec(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!(dec.pieces()[&1].residual_of(&e1, &ip) < 1e-10);
        assert!(dec.pieces()[&0].residual_of(&e2, &ip) < 1e-10);
    }

    #[test]
    fn decomposition_of_tilted_flag_solves_orthogonality() {
        // F^1 = span(e1 + e2/2); Q-orthocomplement is span(e1/2 + e2)
        let phd = weight1();
        let dec = decomposition_from_filtration(&line_flag(&[(1.0, 0.0), (0.5, 0.0)]), &phd).unwrap();
        let ip = InnerProduct::standard(2);
        let v = cvec(&[(0.5, 0.0), (1.0, 0.0)]);
        assert!(dec.pieces()[&0].residual_of(&v, &ip) < 1e-10);
    }

    #[test]
    fn decomposition_outside_domain_reports_step() {
        let phd = weight1();
        let err = decomposition_from_filtration(&line_flag(&[(0.0, 0.0), (1.0, 0.0)]), &phd);
        assert!(matches!(err, Err(Error::OutsideDomain { p: 1, .. })));
    }

    #[test]
    fn round_trip_filtration_decomposition() {
        let phd = weight1();
        let f = line_flag(&[(1.0, 0.0), (0.3, -0.2)]);
        let dec = decomposition_from_filtration(&f, &phd).unwrap();
        let back = filtration_from_decomposition(&dec).unwrap();
        let ip = InnerProduct::standard(2);
        assert!(domain_distance(&f, &back, &ip).unwrap() < 1e-9);
    }

    #[test]
    fn horizontality_examples() {
        let f = weight2_flag();
        let zero = CMat::zeros(3, 3);
        assert!(is_horizontal(&zero, &f).unwrap().0);
        let e21 = cmat_real(3, &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(is_horizontal(&e21, &f).unwrap().0);
        let e31 = cmat_real(3, &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let (ok, residual) = is_horizontal(&e31, &f).unwrap();
        assert!(!ok);
        assert!(residual > 1e-3);
    }

    #[test]
    fn distance_examples() {
        let ip = InnerProduct::standard(2);
        let f1 = line_flag(&[(1.0, 0.0), (0.0, 0.0)]);
        assert_eq!(domain_distance(&f1, &f1, &ip).unwrap(), 0.0);
        let f2 = line_flag(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!((domain_distance(&f1, &f2, &ip).unwrap() - 1.0).abs() < 1e-12);
        let eps = 1e-3;
        let f3 = line_flag(&[(1.0, 0.0), (eps, 0.0)]);
        let d = domain_distance(&f1, &f3, &ip).unwrap();
        assert!((d - eps).abs() < 1e-8);
    }

    #[test]
    fn left_translate_examples() {
        let ip = InnerProduct::standard(2);
        let f = line_flag(&[(1.0, 0.0), (0.0, 0.0)]);
        let id = left_translate(&CMat::identity(2, 2), &f).unwrap();
        assert!(domain_distance(&f, &id, &ip).unwrap() < 1e-14);
        let diag = left_translate(&cmat_real(2, &[2.0, 0.0, 0.0, 1.0]), &f).unwrap();
        assert!(domain_distance(&f, &diag, &ip).unwrap() < 1e-14);
        let rot = cmat_real(2, &[0.0, -1.0, 1.0, 0.0]);
        let rotated = left_translate(&rot, &f).unwrap();
        let e2 = cvec(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!(rotated.step(1).residual_of(&e2, &ip) < 1e-12);
    }

    #[test]
    fn translate_round_trip_is_identity() {
        let ip = InnerProduct::standard(3);
        let f = weight2_flag();
        let g = cmat_real(3, &[1.0, 0.3, -0.2, 0.0, 1.4, 0.5, 0.2, -0.1, 0.9]);
        let g_inv = g.clone().try_inverse().unwrap();
        let back = left_translate(&g_inv, &left_translate(&g, &f).unwrap()).unwrap();
        assert!(domain_distance(&f, &back, &ip).unwrap() < 1e-10);
    }

    #[test]
    fn singular_translation_rejected() {
        let f = line_flag(&[(1.0, 0.0), (0.0, 0.0)]);
        let g = cmat_real(2, &[1.0, 0.0, 0.0, 0.0]);
        assert!(left_translate(&g, &f).is_err());
    }
}
