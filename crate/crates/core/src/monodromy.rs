//! Commuting monodromy tuples: joint eigenblocks, exponent normalization
//! into a chosen window, the semisimple-plus-nilpotent splitting
//! `T = exp(2πi(S+N))`, twisted frames, and the dual tuple.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numlin::{
    check_finite, check_unit_modulus, commutator_residual, condition_number, joint_eigenblocks,
    log_unipotent, matrix_exp, JointEigenblock,
};
use crate::{CMat, CVec};

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// A commuting family of invertible operators with unit-modulus spectra.
#[derive(Debug, Clone)]
pub struct MonodromyTuple {
    ts: Vec<CMat>,
    commutation_residual: f64,
}

impl MonodromyTuple {
    pub fn new(ts: Vec<CMat>) -> Result<Self> {
        if ts.is_empty() {
            return Err(Error::Dimension("monodromy tuple cannot be empty".into()));
        }
        let n = ts[0].nrows();
        let mut residual: f64 = 0.0;
        for t in &ts {
            if !t.is_square() || t.nrows() != n {
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
                residual = residual.max(r);
            }
        }
        // unit-modulus spectra come with the Hodge-theoretic setting; the
        // joint-block pass below would silently accept anything else
        for block in joint_eigenblocks(&ts)? {
            check_unit_modulus(&block.lambdas, 1e-8)?;
        }
        Ok(Self { ts, commutation_residual: residual })
    }

    pub fn generators(&self) -> &[CMat] {
        &self.ts
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.ts[0].nrows()
    }

    pub fn commutation_residual(&self) -> f64 {
        self.commutation_residual
    }
}

/// One joint eigenblock with its normalized exponents and nilpotent logs
/// (the latter expressed in the block's orthonormal basis).
#[derive(Debug, Clone)]
pub struct BlockData {
    pub lambdas: Vec<C64>,
    pub space: crate::numlin::Subspace,
    pub betas: Vec<f64>,
    pub ns: Vec<CMat>,
}

/// The full splitting of a tuple: per-block data plus the assembled global
/// semisimple and nilpotent parts.
#[derive(Debug, Clone)]
pub struct MonodromyDecomposition {
    alpha: Vec<f64>,
    blocks: Vec<BlockData>,
    s: Vec<CMat>,
    n: Vec<CMat>,
    basis_condition: f64,
}

impl MonodromyDecomposition {
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn blocks(&self) -> &[BlockData] {
        &self.blocks
    }

    pub fn s(&self) -> &[CMat] {
        &self.s
    }

    pub fn n(&self) -> &[CMat] {
        &self.n
    }

    /// Condition number of the joint-block basis used for assembly.
    pub fn basis_condition(&self) -> f64 {
        self.basis_condition
    }

    pub fn dim(&self) -> usize {
        self.s[0].nrows()
    }

    pub fn num_generators(&self) -> usize {
        self.s.len()
    }

    /// `sum_j z_j (S_j + N_j)`.
    pub fn log_monodromy(&self, z: &[C64]) -> Result<CMat> {
        if z.len() != self.s.len() {
            return Err(Error::Dimension("wrong number of log-coordinates".into()));
        }
        let n = self.dim();
        let mut acc = CMat::zeros(n, n);
        for (j, &zj) in z.iter().enumerate() {
            acc += (&self.s[j] + &self.n[j]).map(|x| x * zj);
        }
        Ok(acc)
    }

    /// The canonical equivariant flat evaluator through `v0`:
    /// `v(z) = exp(sum_j z_j (S_j + N_j)) v0`.
    pub fn flat_section(&self, v0: &CVec, z: &[C64]) -> Result<CVec> {
        let e = matrix_exp(&self.log_monodromy(z)?)?;
        Ok(&e * v0)
    }

    /// The twisting gauge of the block containing exponents `betas`:
    /// `exp(-sum_j (beta_j I + N_j) z_j)`.
    pub fn twist_gauge(&self, betas: &[f64], z: &[C64]) -> Result<CMat> {
        if z.len() != self.n.len() || betas.len() != self.n.len() {
            return Err(Error::Dimension("wrong number of log-coordinates".into()));
        }
        let n = self.dim();
        let mut acc = CMat::zeros(n, n);
        for (j, &zj) in z.iter().enumerate() {
            let mut m = self.n[j].clone();
            for i in 0..n {
                m[(i, i)] += C64::new(betas[j], 0.0);
            }
            acc += m.map(|x| x * (-zj));
        }
        matrix_exp(&acc)
    }

    /// Index of the unique block containing `v`, by projection residual.
    pub fn block_of(&self, v: &CVec) -> Result<usize> {
        let ip = crate::numlin::InnerProduct::standard(self.dim());
        let norm = v.norm().max(1e-300);
        let mut hits = Vec::new();
        for (i, b) in self.blocks.iter().enumerate() {
            if b.space.residual_of(v, &ip) <= 1e-8 * norm {
                hits.push(i);
            }
        }
        match hits.as_slice() {
            [i] => Ok(*i),
            [] => Err(Error::Contract("vector straddles joint eigenblocks".into())),
            _ => Err(Error::Contract("vector lies in several joint eigenblocks".into())),
        }
    }
}

/// The unique `beta` in `(alpha - 1, alpha]` with `exp(2πi beta) = lambda`,
/// with a snap at the closed endpoint so the choice is deterministic under
/// floating-point noise near `lambda = exp(2πi alpha)`.
pub fn beta_in_window(lambda: C64, alpha: f64) -> f64 {
    let rotated = lambda * C64::from_polar(1.0, -TAU * alpha);
    let mut theta = rotated.arg();
    if theta > 0.0 {
        theta -= TAU;
    }
    if theta < -TAU + 1e-10 {
        theta = 0.0;
    }
    alpha + theta / TAU
}

/// Split a tuple as `T_j = exp(2πi (S_j + N_j))` with the eigenvalues of
/// `S_j` in the window `(alpha_j - 1, alpha_j]`.
pub fn decompose(tuple: &MonodromyTuple, alpha: &[f64]) -> Result<MonodromyDecomposition> {
    if alpha.len() != tuple.len() {
        return Err(Error::Dimension(format!(
            "{} window choices for {} generators",
            alpha.len(),
            tuple.len()
        )));
    }
    if alpha.iter().any(|a| !a.is_finite()) {
        return Err(Error::NonFinite);
    }
    let raw_blocks = joint_eigenblocks(tuple.generators())?;
    let n = tuple.dim();
    let mut blocks = Vec::with_capacity(raw_blocks.len());
    let mut basis_cols: Vec<CVec> = Vec::with_capacity(n);
    for JointEigenblock { lambdas, space } in raw_blocks {
        check_unit_modulus(&lambdas, 1e-8)?;
        let b = space.basis().clone();
        let k = b.ncols();
        let mut betas = Vec::with_capacity(lambdas.len());
        let mut ns = Vec::with_capacity(lambdas.len());
        for (j, &lambda) in lambdas.iter().enumerate() {
            let beta = beta_in_window(lambda, alpha[j]);
            let check = (C64::from_polar(1.0, TAU * beta) - lambda).norm();
            if check > 1e-10 {
                return Err(Error::Contract(format!(
                    "exponent normalization drifted by {check:.3e}"
                )));
            }
            // restriction of the generator to the block, in block coordinates
            let restricted = b.adjoint() * &tuple.generators()[j] * &b;
            let unipotent = restricted.map(|x| x / lambda);
            let log = log_unipotent(&unipotent)?;
            ns.push(log.map(|x| x / C64::new(0.0, TAU)));
            betas.push(beta);
        }
        for j in 0..k {
            basis_cols.push(b.column(j).into_owned());
        }
        blocks.push(BlockData { lambdas, space, betas, ns });
    }
    let basis = CMat::from_columns(&basis_cols);
    let basis_condition = condition_number(&basis);
    let basis_inv = basis
        .clone()
        .try_inverse()
        .ok_or(Error::Singular { condition: basis_condition })?;

    let mut s_mats = Vec::with_capacity(tuple.len());
    let mut n_mats = Vec::with_capacity(tuple.len());
    for j in 0..tuple.len() {
        let mut s_blk = CMat::zeros(n, n);
        let mut n_blk = CMat::zeros(n, n);
        let mut offset = 0;
        for block in &blocks {
            let k = block.space.dim();
            for i in 0..k {
                s_blk[(offset + i, offset + i)] = C64::new(block.betas[j], 0.0);
            }
            n_blk.view_mut((offset, offset), (k, k)).copy_from(&block.ns[j]);
            offset += k;
        }
        s_mats.push(&basis * s_blk * &basis_inv);
        n_mats.push(&basis * n_blk * &basis_inv);
    }

    let dec = MonodromyDecomposition {
        alpha: alpha.to_vec(),
        blocks,
        s: s_mats,
        n: n_mats,
        basis_condition,
    };
    validate_splitting(&dec, tuple.generators())?;
    Ok(dec)
}

fn validate_splitting(dec: &MonodromyDecomposition, ts: &[CMat]) -> Result<()> {
    for j in 0..ts.len() {
        let log = (&dec.s[j] + &dec.n[j]).map(|x| x * C64::new(0.0, TAU));
        let rebuilt = matrix_exp(&log)?;
        let residual = (&rebuilt - &ts[j]).norm() / ts[j].norm().max(1.0);
        if residual > 1e-8 {
            return Err(Error::Contract(format!(
                "exp(2πi(S+N)) misses T by {residual:.3e}"
            )));
        }
    }
    let mut parts: Vec<&CMat> = Vec::new();
    parts.extend(dec.s.iter());
    parts.extend(dec.n.iter());
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let comm = parts[i] * parts[j] - parts[j] * parts[i];
            let scale = (parts[i].norm() * parts[j].norm()).max(1.0);
            if comm.norm() / scale > 1e-9 {
                return Err(Error::Contract(
                    "assembled S and N parts do not commute".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Twisted value `exp(-sum (beta_j I + N_j) z_j) v(z)` of a flat evaluator
/// through the block vector `v`, after checking the evaluator's monodromy
/// equivariance at `z`.
pub fn twist_flat_section<F>(
    dec: &MonodromyDecomposition,
    tuple: &MonodromyTuple,
    v: &CVec,
    z: &[C64],
    flat_eval: F,
) -> Result<CVec>
where
    F: Fn(&[C64]) -> CVec,
{
    let block = dec.block_of(v)?;
    let here = flat_eval(z);
    for j in 0..tuple.len() {
        let mut shifted = z.to_vec();
        shifted[j] += C64::new(0.0, TAU);
        let around = flat_eval(&shifted);
        let expected = &tuple.generators()[j] * &here;
        let residual = (&around - &expected).norm() / here.norm().max(1.0);
        if residual > 1e-8 {
            return Err(Error::Contract(format!(
                "flat evaluator is not monodromy-equivariant (residual {residual:.3e})"
            )));
        }
    }
    let gauge = dec.twist_gauge(&dec.blocks[block].betas, z)?;
    Ok(&gauge * here)
}

/// One entry of the twisted frame: the block vector it extends and the
/// exponents governing its growth.
#[derive(Debug, Clone)]
pub struct FrameEntry {
    pub block_index: usize,
    pub betas: Vec<f64>,
    pub v0: CVec,
}

impl FrameEntry {
    /// Value of the twisted section at log-coordinates `z`.
    pub fn eval(&self, dec: &MonodromyDecomposition, z: &[C64]) -> Result<CVec> {
        let flat = dec.flat_section(&self.v0, z)?;
        let gauge = dec.twist_gauge(&self.betas, z)?;
        Ok(&gauge * flat)
    }
}

/// The twisted frame built from the orthonormal joint-block bases.
pub fn deligne_frame(dec: &MonodromyDecomposition) -> Vec<FrameEntry> {
    let mut entries = Vec::with_capacity(dec.dim());
    for (bi, block) in dec.blocks().iter().enumerate() {
        for j in 0..block.space.dim() {
            entries.push(FrameEntry {
                block_index: bi,
                betas: block.betas.clone(),
                v0: block.space.basis().column(j).into_owned(),
            });
        }
    }
    entries
}

/// Monodromy of the dual local system: `(T^T)^{-1}` per generator, so that
/// the bilinear pairing of flat sections is preserved.
pub fn dual_monodromy(tuple: &MonodromyTuple) -> Result<MonodromyTuple> {
    let mut duals = Vec::with_capacity(tuple.len());
    for t in tuple.generators() {
        let inv = t
            .transpose()
            .try_inverse()
            .ok_or(Error::Singular { condition: condition_number(t) })?;
        duals.push(inv);
    }
    MonodromyTuple::new(duals)
}

/// Splitting of the dual tuple with the exponents of each block forced to
/// the negatives of the matching primal block, so twisted pairings stay
/// constant. The global parts are exactly `-S^T` and `-N^T`.
pub fn dual_decomposition(
    dec: &MonodromyDecomposition,
    dual_tuple: &MonodromyTuple,
) -> Result<MonodromyDecomposition> {
    let raw_blocks = joint_eigenblocks(dual_tuple.generators())?;
    let mut blocks = Vec::with_capacity(raw_blocks.len());
    for JointEigenblock { lambdas, space } in raw_blocks {
        // match by inverse eigenvalue tuple
        let primal = dec
            .blocks()
            .iter()
            .find(|b| {
                b.lambdas
                    .iter()
                    .zip(lambdas.iter())
                    .all(|(&l, &ld)| (l * ld - C64::new(1.0, 0.0)).norm() < 1e-6)
            })
            .ok_or_else(|| {
                Error::Contract("dual eigenblock has no matching primal block".into())
            })?;
        let betas: Vec<f64> = primal.betas.iter().map(|b| -b).collect();
        let b = space.basis().clone();
        let mut ns = Vec::with_capacity(lambdas.len());
        for j in 0..lambdas.len() {
            let n_dual_global = dec.n()[j].transpose().map(|x| -x);
            ns.push(b.adjoint() * n_dual_global * &b);
        }
        blocks.push(BlockData { lambdas, space, betas, ns });
    }
    let s = dec.s().iter().map(|m| m.transpose().map(|x| -x)).collect::<Vec<_>>();
    let n = dec.n().iter().map(|m| m.transpose().map(|x| -x)).collect::<Vec<_>>();
    let alpha = dec.alpha().iter().map(|a| -a).collect();
    let dual = MonodromyDecomposition {
        alpha,
        blocks,
        s,
        n,
        basis_condition: dec.basis_condition(),
    };
    // the construction is explicit; still confirm it exponentiates correctly
    for (j, t) in dual_tuple.generators().iter().enumerate() {
        let log = (&dual.s[j] + &dual.n[j]).map(|x| x * C64::new(0.0, TAU));
        let residual = (matrix_exp(&log)? - t).norm() / t.norm().max(1.0);
        if residual > 1e-8 {
            return Err(Error::Contract(format!(
                "dual splitting misses the dual generator by {residual:.3e}"
            )));
        }
    }
    Ok(dual)
}

/// Block-pairing diagnostics between a splitting and its dual.
#[derive(Debug, Clone)]
pub struct DualPairingReport {
    /// Largest bilinear pairing between blocks with mismatched eigenvalues.
    pub max_off_block: f64,
    /// Smallest singular value among matched-block pairing matrices.
    pub min_matched_singular: f64,
    pub ok: bool,
}

/// Bilinear pairings `mu^T v` between dual and primal block bases: blocks
/// pair to zero unless the eigenvalue tuples are inverse to each other, and
/// matched blocks pair nondegenerately.
pub fn check_dual_pairing(
    dec: &MonodromyDecomposition,
    dual_dec: &MonodromyDecomposition,
) -> Result<DualPairingReport> {
    let mut max_off: f64 = 0.0;
    let mut min_matched = f64::INFINITY;
    for dual_block in dual_dec.blocks() {
        for block in dec.blocks() {
            let matched = dual_block
                .lambdas
                .iter()
                .zip(block.lambdas.iter())
                .all(|(&ld, &l)| (ld * l - C64::new(1.0, 0.0)).norm() < 1e-6);
            let pairing = dual_block.space.basis().transpose() * block.space.basis();
            if matched {
                if pairing.nrows() != pairing.ncols() {
                    return Err(Error::Contract(
                        "matched blocks have different dimensions".into(),
                    ));
                }
                let sv = pairing.svd(false, false).singular_values;
                min_matched = min_matched.min(sv.iter().cloned().fold(f64::INFINITY, f64::min));
            } else {
                max_off = max_off.max(pairing.iter().map(|x| x.norm()).fold(0.0, f64::max));
            }
        }
    }
    let ok = max_off <= 1e-9 && min_matched > 1e-8;
    Ok(DualPairingReport { max_off_block: max_off, min_matched_singular: min_matched, ok })
}
