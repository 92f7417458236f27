//! Families of polarized Hodge filtrations over the punctured polydisc,
//! given by period evaluators on the log cover. Provides the untwisted
//! single-valued map, limit filtrations with convergence diagnostics,
//! nilpotent-orbit evaluators, Higgs-field norms, and physical section
//! norms.

pub mod registry;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hodge::{
    decomposition_from_filtration, hodge_inner_product, in_period_domain, is_horizontal,
    left_translate, FlagPoint, PolarizedHodgeData,
};
use crate::monodromy::{MonodromyDecomposition, MonodromyTuple};
use crate::numlin::{matrix_exp, spectral_norm, InnerProduct, Subspace};
use crate::{CMat, CVec};

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Evaluator signature for period maps: log coordinates `z` (one per
/// puncture) and interior coordinates `w`.
pub type PeriodEval = dyn Fn(&[C64], &[C64]) -> Result<FlagPoint> + Send + Sync;

/// A validated family: structure data, monodromy, a period evaluator on the
/// log cover, and the box on which membership is guaranteed.
pub struct VHSFamily {
    phd: PolarizedHodgeData,
    monodromy: MonodromyTuple,
    period: Box<PeriodEval>,
    /// Valid for `Re z_i <= x_max` (negative).
    x_max: f64,
    /// Valid for `|w_k| <= rho`.
    rho: f64,
    num_w: usize,
}

impl VHSFamily {
    pub fn new(
        phd: PolarizedHodgeData,
        monodromy: MonodromyTuple,
        period: Box<PeriodEval>,
        x_max: f64,
        rho: f64,
        num_w: usize,
    ) -> Result<Self> {
        if !(x_max < 0.0) {
            return Err(Error::Contract("the box must satisfy x_max < 0".into()));
        }
        let fam = Self { phd, monodromy, period, x_max, rho, num_w };
        fam.validate_on_grid()?;
        Ok(fam)
    }

    fn validate_on_grid(&self) -> Result<()> {
        // the monodromy must preserve the polarization
        let q = self.phd.polarization();
        for t in self.monodromy.generators() {
            let residual = (t.adjoint() * q * t - q).norm() / q.norm().max(1.0);
            if residual > 1e-9 {
                return Err(Error::Contract(format!(
                    "monodromy does not preserve the polarization (residual {residual:.3e})"
                )));
            }
        }
        let p = self.monodromy.len();
        let xs = [self.x_max - 2.0, self.x_max - 0.5, self.x_max];
        let ys = [0.0, 1.7, -2.9];
        let w = vec![C64::new(0.0, 0.0); self.num_w];
        let ip = InnerProduct::standard(self.phd.rank());
        for &x in &xs {
            for &y in &ys {
                let z = vec![C64::new(x, y); p];
                let flag = (self.period)(&z, &w)?;
                let report = in_period_domain(&flag, &self.phd)?;
                if !report.member {
                    return Err(Error::Contract(format!(
                        "period map leaves the period domain at Re z = {x}, Im z = {y} \
                         (margin {:.3e})",
                        report.margin
                    )));
                }
                for j in 0..p {
                    let mut shifted = z.clone();
                    shifted[j] += C64::new(0.0, TAU);
                    let around = (self.period)(&shifted, &w)?;
                    let t_inv = self.monodromy.generators()[j]
                        .clone()
                        .try_inverse()
                        .ok_or(Error::Singular { condition: f64::INFINITY })?;
                    let expected = left_translate(&t_inv, &flag)?;
                    let gap = flag_gap(&around, &expected, &ip)?;
                    if gap > 1e-8 {
                        return Err(Error::Contract(format!(
                            "period map is not monodromy-equivariant (gap {gap:.3e})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn structure(&self) -> &PolarizedHodgeData {
        &self.phd
    }

    pub fn monodromy(&self) -> &MonodromyTuple {
        &self.monodromy
    }

    pub fn period(&self, z: &[C64], w: &[C64]) -> Result<FlagPoint> {
        if z.len() != self.monodromy.len() || w.len() != self.num_w {
            return Err(Error::Dimension("wrong number of coordinates".into()));
        }
        (self.period)(z, w)
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn num_z(&self) -> usize {
        self.monodromy.len()
    }

    pub fn num_w(&self) -> usize {
        self.num_w
    }
}

/// Largest per-step gap between two flags with matching step indices.
pub fn flag_gap(f1: &FlagPoint, f2: &FlagPoint, ip: &InnerProduct) -> Result<f64> {
    crate::hodge::domain_distance(f1, f2, ip)
}

/// The single-valued untwisted map `Ψ` with `Ψ(e^z, w) =
/// exp(sum z_i (S_i + N_i)) Φ(z, w)`.
pub struct UntwistedMap<'a> {
    fam: &'a VHSFamily,
    dec: &'a MonodromyDecomposition,
}

impl<'a> UntwistedMap<'a> {
    /// Evaluate on the log cover.
    pub fn eval_z(&self, z: &[C64], w: &[C64]) -> Result<FlagPoint> {
        let g = matrix_exp(&self.dec.log_monodromy(z)?)?;
        left_translate(&g, &self.fam.period(z, w)?)
    }

    /// Evaluate at punctured-disc coordinates through the principal branch.
    pub fn eval_t(&self, t: &[C64], w: &[C64]) -> Result<FlagPoint> {
        let z: Vec<C64> = t.iter().map(|ti| ti.ln()).collect();
        if z.iter().any(|zi| !zi.re.is_finite()) {
            return Err(Error::Dimension("t coordinates must be nonzero".into()));
        }
        self.eval_z(&z, w)
    }
}

/// Build the untwisted map and check that it actually descends: shifting
/// any `z_j` by `2πi` must not move the value.
pub fn untwisted_map<'a>(
    fam: &'a VHSFamily,
    dec: &'a MonodromyDecomposition,
) -> Result<UntwistedMap<'a>> {
    if dec.num_generators() != fam.num_z() {
        return Err(Error::Dimension("splitting does not match the family".into()));
    }
    let map = UntwistedMap { fam, dec };
    let ip = InnerProduct::standard(fam.structure().rank());
    let w = vec![C64::new(0.0, 0.0); fam.num_w()];
    let z0 = vec![C64::new(fam.x_max() - 1.0, 0.6); fam.num_z()];
    let base = map.eval_z(&z0, &w)?;
    for j in 0..fam.num_z() {
        let mut shifted = z0.clone();
        shifted[j] += C64::new(0.0, TAU);
        let moved = map.eval_z(&shifted, &w)?;
        let gap = flag_gap(&base, &moved, &ip)?;
        if gap > 1e-8 {
            return Err(Error::Contract(format!(
                "untwisted map fails to descend (gap {gap:.3e})"
            )));
        }
    }
    Ok(map)
}

/// Convergence diagnostics of a limit-filtration extrapolation.
#[derive(Debug, Clone)]
pub struct LimitReport {
    /// Fitted decay order of the raw gaps `d(Ψ(t_k), a)` in `|t| = 2^{-k}`.
    pub order: f64,
    /// Gap between the last two extrapolants.
    pub final_gap: f64,
}

/// Radial limit of a single-valued flag map along `t_k = dir * 2^{-k}`,
/// `k = 4..=k_max`, Richardson-extrapolated step by step.
pub fn limit_filtration(
    psi: &UntwistedMap,
    w: &[C64],
    dir: &[C64],
    k_max: u32,
) -> Result<(FlagPoint, LimitReport)> {
    if k_max < 6 {
        return Err(Error::Dimension("need at least k_max = 6 samples".into()));
    }
    let flags: Vec<FlagPoint> = (4..=k_max)
        .map(|k| {
            let t: Vec<C64> = dir.iter().map(|d| d * 2f64.powi(-(k as i32))).collect();
            psi.eval_t(&t, w)
        })
        .collect::<Result<_>>()?;
    let n = flags[0].ambient_dim();
    let ip = InnerProduct::standard(n);

    // Richardson on step projectors: E_k = 2 P_{k+1} - P_k kills the linear
    // term of a holomorphic family
    let extrapolant = |a: &FlagPoint, b: &FlagPoint| -> Result<FlagPoint> {
        let mut steps = Vec::new();
        for (&(p, ref sa), &(pb, ref sb)) in a.steps().iter().zip(b.steps()) {
            if p != pb {
                return Err(Error::Dimension("mismatched flag steps".into()));
            }
            let e = (std_projector(sb)).scale(2.0) - std_projector(sa);
            steps.push((p, dominant_subspace(&e, sa.dim())?));
        }
        FlagPoint::new(steps)
    };
    let last = flags.len() - 1;
    let ext_a = extrapolant(&flags[last - 2], &flags[last - 1])?;
    let ext_b = extrapolant(&flags[last - 1], &flags[last])?;
    let final_gap = flag_gap(&ext_a, &ext_b, &ip)?;
    if final_gap > 1e-7 {
        return Err(Error::Verification(format!(
            "limit filtration is not Cauchy (extrapolant gap {final_gap:.3e})"
        )));
    }
    let limit = ext_b;

    // decay order of the raw gaps, ignoring samples at the noise floor
    let mut ks = Vec::new();
    let mut logs = Vec::new();
    for (i, f) in flags.iter().enumerate() {
        let g = flag_gap(f, &limit, &ip)?;
        if g > 1e-10 {
            ks.push((4 + i as u32) as f64);
            logs.push(g.log2());
        }
    }
    let order = if ks.len() >= 2 { -slope(&ks, &logs) } else { f64::NAN };
    Ok((limit, LimitReport { order, final_gap }))
}

fn std_projector(s: &Subspace) -> CMat {
    let b = s.basis();
    b * b.adjoint()
}

/// Span of the eigenvectors of a near-projector with eigenvalues near 1.
fn dominant_subspace(m: &CMat, dim: usize) -> Result<Subspace> {
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let cols: Vec<CVec> = order[..dim]
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    let n = m.nrows();
    crate::numlin::orthonormalize(&CMat::from_columns(&cols), &InnerProduct::standard(n))
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

/// The data of a nilpotent orbit: a limit flag and commuting horizontal
/// log-monodromy parts.
pub struct OrbitData {
    a: FlagPoint,
    s: Vec<CMat>,
    n: Vec<CMat>,
}

impl OrbitData {
    pub fn new(a: FlagPoint, s: Vec<CMat>, n: Vec<CMat>) -> Result<Self> {
        if s.len() != n.len() || s.is_empty() {
            return Err(Error::Dimension("need matching S and N lists".into()));
        }
        for i in 0..s.len() {
            let r = &s[i] + &n[i];
            let (ok, residual) = is_horizontal(&r, &a)?;
            if !ok {
                return Err(Error::Contract(format!(
                    "S_{i}+N_{i} is not horizontal at the limit flag (residual {residual:.3e})"
                )));
            }
            let _ = residual;
        }
        for i in 0..s.len() {
            for j in 0..s.len() {
                let comm = (&s[i] + &n[i]) * (&s[j] + &n[j]) - (&s[j] + &n[j]) * (&s[i] + &n[i]);
                if comm.norm() > 1e-9 * (1.0 + s[i].norm() + n[i].norm()).powi(2) {
                    return Err(Error::NonCommuting { residual: comm.norm() });
                }
            }
        }
        Ok(Self { a, s, n })
    }

    pub fn limit(&self) -> &FlagPoint {
        &self.a
    }

    pub fn s(&self) -> &[CMat] {
        &self.s
    }

    pub fn n(&self) -> &[CMat] {
        &self.n
    }

    pub fn num_z(&self) -> usize {
        self.s.len()
    }

    /// `sum_i z_i (S_i + N_i)`.
    pub fn log_monodromy(&self, z: &[C64]) -> Result<CMat> {
        if z.len() != self.s.len() {
            return Err(Error::Dimension("wrong number of log-coordinates".into()));
        }
        let dim = self.s[0].nrows();
        let mut acc = CMat::zeros(dim, dim);
        for (i, &zi) in z.iter().enumerate() {
            acc += (&self.s[i] + &self.n[i]).map(|x| x * zi);
        }
        Ok(acc)
    }

    /// The monodromy generators `T_i = exp(2πi (S_i + N_i))`.
    pub fn monodromy(&self) -> Result<MonodromyTuple> {
        let ts = self
            .s
            .iter()
            .zip(&self.n)
            .map(|(s, n)| matrix_exp(&(s + n).map(|x| x * C64::new(0.0, TAU))))
            .collect::<Result<Vec<_>>>()?;
        MonodromyTuple::new(ts)
    }
}

/// The orbit evaluator `ϑ(z) = exp(-sum z_i (S_i + N_i)) a`.
pub fn nilpotent_orbit(orb: &OrbitData) -> impl Fn(&[C64]) -> Result<FlagPoint> + '_ {
    move |z: &[C64]| {
        let g = matrix_exp(&orb.log_monodromy(z)?.map(|x| -x))?;
        left_translate(&g, orb.limit())
    }
}

/// Holomorphic perturbation for `make_orbit_family`: a nilpotent-valued
/// function of `(t, w)` vanishing at `t = 0`.
pub type Perturbation = dyn Fn(&[C64], &[C64]) -> CMat + Send + Sync;

/// Manufacture a genuine family from orbit data:
/// `Φ(z, w) = exp(-sum z_i R_i) exp(P(e^z, w)) a`, validated on the box.
pub fn make_orbit_family(
    phd: PolarizedHodgeData,
    orb: OrbitData,
    perturbation: Option<Box<Perturbation>>,
    x_max: f64,
    rho: f64,
    num_w: usize,
) -> Result<VHSFamily> {
    let tuple = orb.monodromy()?;
    let period: Box<PeriodEval> = Box::new(move |z: &[C64], w: &[C64]| {
        let mut g = matrix_exp(&orb.log_monodromy(z)?.map(|x| -x))?;
        if let Some(p) = &perturbation {
            let t: Vec<C64> = z.iter().map(|zi| zi.exp()).collect();
            g = g * matrix_exp(&p(&t, w))?;
        }
        left_translate(&g, orb.limit())
    });
    VHSFamily::new(phd, tuple, period, x_max, rho, num_w)
}

/// Complex-step derivative `∂_z` of the standard projector onto one flag
/// step, direction `i`, four-point stencil.
fn step_projector_dz(
    fam: &VHSFamily,
    z: &[C64],
    w: &[C64],
    i: usize,
    p: i64,
) -> Result<CMat> {
    let delta = 1e-5 * z[i].norm().max(1.0);
    let sample = |dz: C64| -> Result<CMat> {
        let mut zs = z.to_vec();
        zs[i] += dz;
        Ok(std_projector(&fam.period(&zs, w)?.step(p)))
    };
    let dx = (sample(C64::new(delta, 0.0))? - sample(C64::new(-delta, 0.0))?)
        .unscale(2.0 * delta);
    let dy = (sample(C64::new(0.0, delta))? - sample(C64::new(0.0, -delta))?)
        .unscale(2.0 * delta);
    // ∂_z = (∂_x - i ∂_y) / 2
    Ok((dx - dy.map(|v| v * C64::new(0.0, 1.0))).scale(0.5))
}

/// Same derivative taken in the disc coordinate `t_i` and pulled back, for
/// cross-checking coordinate invariance.
fn step_projector_dz_via_t(
    fam: &VHSFamily,
    z: &[C64],
    w: &[C64],
    i: usize,
    p: i64,
) -> Result<CMat> {
    let t = z[i].exp();
    let delta = 1e-5 * t.norm();
    let sample = |dt: C64| -> Result<CMat> {
        let mut zs = z.to_vec();
        // stay on the branch through z
        zs[i] = z[i] + ((t + dt) / t).ln();
        Ok(std_projector(&fam.period(&zs, w)?.step(p)))
    };
    let dx = (sample(C64::new(delta, 0.0))? - sample(C64::new(-delta, 0.0))?)
        .unscale(2.0 * delta);
    let dy = (sample(C64::new(0.0, delta))? - sample(C64::new(0.0, -delta))?)
        .unscale(2.0 * delta);
    let d_dt = (dx - dy.map(|v| v * C64::new(0.0, 1.0))).scale(0.5);
    // ∂/∂z = t ∂/∂t
    Ok(d_dt.map(|v| v * t))
}

/// Hodge-metric operator norm of the graded derivative piece
/// `V^{p,q} -> V^{p-1,q+1}` in log-direction `i`, weighted by the
/// Poincaré-type length of `∂/∂z_i`: the result is
/// `|θ(∂/∂z_i)|_h · 2 |Re z_i|`, invariant under the coordinate choice.
pub fn higgs_norm(fam: &VHSFamily, z: &[C64], w: &[C64]) -> Result<f64> {
    higgs_norm_impl(fam, z, w, false)
}

/// `higgs_norm` computed through `t`-coordinate differences; used to verify
/// coordinate invariance.
pub fn higgs_norm_via_t(fam: &VHSFamily, z: &[C64], w: &[C64]) -> Result<f64> {
    higgs_norm_impl(fam, z, w, true)
}

fn higgs_norm_impl(fam: &VHSFamily, z: &[C64], w: &[C64], via_t: bool) -> Result<f64> {
    let flag = fam.period(z, w)?;
    let phd = fam.structure();
    let dec = decomposition_from_filtration(&flag, phd)?;
    let h = hodge_inner_product(&dec, phd)?;
    let gram = h.gram().clone();
    let mut worst: f64 = 0.0;
    for i in 0..fam.num_z() {
        let mut theta: f64 = 0.0;
        for &p in phd.hodge_numbers().keys() {
            if !phd.hodge_numbers().contains_key(&(p - 1)) {
                continue;
            }
            let d = if via_t {
                step_projector_dz_via_t(fam, z, w, i, p)?
            } else {
                step_projector_dz(fam, z, w, i, p)?
            };
            let domain = crate::numlin::orthonormalize(dec.pieces()[&p].basis(), &h)?;
            let target = crate::numlin::orthonormalize(dec.pieces()[&(p - 1)].basis(), &h)?;
            // matrix of the graded piece in h-orthonormal bases
            let m = target.basis().adjoint() * &gram * (&d * domain.basis());
            theta = theta.max(spectral_norm(&m));
        }
        worst = worst.max(theta * 2.0 * z[i].re.abs());
    }
    Ok(worst)
}

/// Physical Hodge norm of a section whose flat-frame expression at `z` is
/// `value`: the frame is gauged back by `exp(-sum z_i (S_i + N_i))` before
/// measuring in the Hodge metric at `Φ(z, w)`.
pub fn section_norm(
    fam: &VHSFamily,
    dec: &MonodromyDecomposition,
    value: &CVec,
    z: &[C64],
    w: &[C64],
) -> Result<f64> {
    let flag = fam.period(z, w)?;
    let phd = fam.structure();
    let hdec = decomposition_from_filtration(&flag, phd)?;
    let h = hodge_inner_product(&hdec, phd)?;
    let gauge = matrix_exp(&dec.log_monodromy(z)?.map(|x| -x))?;
    Ok(h.norm(&(&gauge * value)))
}

/// Hodge norm of a flat multivalued section along the family.
pub fn flat_section_norm<F>(
    fam: &VHSFamily,
    dec: &MonodromyDecomposition,
    flat_eval: F,
    z: &[C64],
    w: &[C64],
) -> Result<f64>
where
    F: Fn(&[C64]) -> CVec,
{
    section_norm(fam, dec, &flat_eval(z), z, w)
}

/// Hodge norm of a twisted frame entry at `z`.
pub fn frame_entry_norm(
    fam: &VHSFamily,
    dec: &MonodromyDecomposition,
    entry: &crate::monodromy::FrameEntry,
    z: &[C64],
    w: &[C64],
) -> Result<f64> {
    section_norm(fam, dec, &entry.eval(dec, z)?, z, w)
}
