//! Command execution behind the `hodgeorbit` binary: resolve a family,
//! run one of the operations, and render a deterministic CSV or JSON
//! document. Identical configurations produce byte-identical output.

use std::path::PathBuf;

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monodromy::{decompose, deligne_frame, MonodromyDecomposition};
use crate::report::{csv_document, fmt_float, Report};
use crate::sample::{random_commuting_tuple, seeded_rng};
use crate::vhs::{
    higgs_norm, limit_filtration, registry, untwisted_map, OrbitData, VHSFamily,
};
use crate::verify::{
    check_extension, check_orbit_horizontality, distance_decay, orbit_threshold,
    parabolic_weight, Tolerances,
};

const TAU: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Command {
    Decompose,
    Untwist,
    OrbitCheck,
    Decay,
    Weights,
    Suite,
}

/// Everything one invocation needs; the binary only translates flags into
/// this structure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    /// Registry name or path to a JSON manifest `{"example": ..., "params": ...}`.
    pub family: String,
    /// Window choices per monodromy generator; empty means all zero.
    pub alpha: Vec<f64>,
    /// Real-part scan window.
    pub x_lo: f64,
    pub x_hi: f64,
    pub n_samples: usize,
    /// Radial window for weight estimation.
    pub t_min: f64,
    pub t_max: f64,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub tolerances: Tolerances,
}

/// Rendered result of one invocation.
#[derive(Debug)]
pub struct RunOutput {
    pub text: String,
    pub passed: bool,
}

#[derive(Deserialize)]
struct Manifest {
    example: String,
    #[serde(default)]
    params: serde_json::Value,
}

/// Resolve a family argument: a known registry name, or a path to a JSON
/// manifest. Unknown names fail here, before any computation.
pub fn load_family(spec: &str) -> Result<VHSFamily> {
    if registry::FAMILY_NAMES.contains(&spec) {
        return registry::by_name(spec, &serde_json::Value::Null);
    }
    let path = std::path::Path::new(spec);
    if spec.ends_with(".json") || path.exists() {
        let text = std::fs::read_to_string(path)?;
        let manifest: Manifest = serde_json::from_str(&text)?;
        return registry::by_name(&manifest.example, &manifest.params);
    }
    Err(Error::UnknownFamily(spec.to_string()))
}

fn alphas(cfg: &RunConfig, fam: &VHSFamily) -> Result<Vec<f64>> {
    if cfg.alpha.is_empty() {
        Ok(vec![0.0; fam.num_z()])
    } else if cfg.alpha.len() == fam.num_z() {
        Ok(cfg.alpha.clone())
    } else {
        Err(Error::Dimension(format!(
            "{} window choices for a family with {} generators",
            cfg.alpha.len(),
            fam.num_z()
        )))
    }
}

/// The orbit candidate a family induces: the splitting's `S`, `N` and the
/// radial limit of the untwisted map.
fn induced_orbit(fam: &VHSFamily, dec: &MonodromyDecomposition) -> Result<OrbitData> {
    let psi = untwisted_map(fam, dec)?;
    let w = vec![C64::new(0.0, 0.0); fam.num_w()];
    let dir = vec![C64::new(1.0, 0.0); fam.num_z()];
    let (limit, _) = limit_filtration(&psi, &w, &dir, 16)?;
    OrbitData::new(limit, dec.s().to_vec(), dec.n().to_vec())
}

fn run_decompose(cfg: &RunConfig) -> Result<RunOutput> {
    let fam = load_family(&cfg.family)?;
    let dec = decompose(fam.monodromy(), &alphas(cfg, &fam)?)?;
    let mut rows = Vec::new();
    for (bi, block) in dec.blocks().iter().enumerate() {
        for g in 0..block.lambdas.len() {
            rows.push(vec![
                bi.to_string(),
                block.space.dim().to_string(),
                g.to_string(),
                fmt_float(block.lambdas[g].re),
                fmt_float(block.lambdas[g].im),
                fmt_float(block.betas[g]),
            ]);
        }
    }
    let text = csv_document(
        &["block", "dim", "generator", "lambda_re", "lambda_im", "beta"],
        &rows,
    );
    Ok(RunOutput { text, passed: true })
}

fn run_untwist(cfg: &RunConfig) -> Result<RunOutput> {
    let fam = load_family(&cfg.family)?;
    let dec = decompose(fam.monodromy(), &alphas(cfg, &fam)?)?;
    let psi = untwisted_map(&fam, &dec)?;
    let w = vec![C64::new(0.0, 0.0); fam.num_w()];
    let dir = vec![C64::new(1.0, 0.0); fam.num_z()];
    let (limit, report) = limit_filtration(&psi, &w, &dir, 16)?;
    let mut rows = Vec::new();
    for &(p, ref s) in limit.steps() {
        let b = s.basis();
        for i in 0..b.nrows() {
            for j in 0..b.ncols() {
                rows.push(vec![
                    "limit_basis".into(),
                    p.to_string(),
                    i.to_string(),
                    j.to_string(),
                    fmt_float(b[(i, j)].re),
                    fmt_float(b[(i, j)].im),
                ]);
            }
        }
    }
    rows.push(vec![
        "order".into(),
        String::new(),
        String::new(),
        String::new(),
        fmt_float(report.order),
        String::new(),
    ]);
    rows.push(vec![
        "final_gap".into(),
        String::new(),
        String::new(),
        String::new(),
        fmt_float(report.final_gap),
        String::new(),
    ]);
    let text = csv_document(&["record", "p", "row", "col", "value_re", "value_im"], &rows);
    Ok(RunOutput { text, passed: true })
}

fn run_orbit_check(cfg: &RunConfig) -> Result<RunOutput> {
    let fam = load_family(&cfg.family)?;
    let dec = decompose(fam.monodromy(), &alphas(cfg, &fam)?)?;
    let orb = induced_orbit(&fam, &dec)?;
    let grid: Vec<Vec<C64>> = [(-1.0, 0.3), (-3.0, -0.8), (-5.0, 1.9)]
        .iter()
        .map(|&(x, y)| vec![C64::new(x, y); fam.num_z()])
        .collect();
    let residual = check_orbit_horizontality(&orb, &grid)?;
    let mut rows = Vec::new();
    let mut passed = residual <= cfg.tolerances.horizontality;
    rows.push(vec!["horizontality".into(), String::new(), fmt_float(residual)]);
    if fam.num_z() == 1 {
        let report =
            orbit_threshold(&orb, fam.structure(), cfg.x_lo, cfg.x_hi, cfg.n_samples)?;
        match report.c_hat {
            Some(c) => rows.push(vec!["c_hat".into(), String::new(), fmt_float(c)]),
            None => passed = false,
        }
        for (x, m) in report.margin_curve {
            rows.push(vec!["margin".into(), fmt_float(x), fmt_float(m)]);
        }
    }
    let text = csv_document(&["record", "x", "value"], &rows);
    Ok(RunOutput { text, passed })
}

fn run_decay(cfg: &RunConfig) -> Result<RunOutput> {
    let fam = load_family(&cfg.family)?;
    let dec = decompose(fam.monodromy(), &alphas(cfg, &fam)?)?;
    let orb = induced_orbit(&fam, &dec)?;
    let fit = distance_decay(
        &fam,
        &dec,
        &orb,
        cfg.x_lo,
        cfg.x_hi,
        cfg.n_samples,
        0.0,
        &cfg.tolerances,
    )?;
    let mut rows = Vec::new();
    for (x, d) in &fit.samples {
        rows.push(vec!["sample".into(), fmt_float(*x), fmt_float(*d)]);
    }
    for (name, v) in [
        ("delta", fit.delta),
        ("beta", fit.beta),
        ("intercept", fit.intercept),
        ("residual", fit.residual),
        ("delta_slack", fit.delta_slack),
    ] {
        rows.push(vec![name.into(), String::new(), fmt_float(v)]);
    }
    let text = csv_document(&["record", "x", "value"], &rows);
    Ok(RunOutput { text, passed: true })
}

fn run_weights(cfg: &RunConfig) -> Result<RunOutput> {
    let fam = load_family(&cfg.family)?;
    if fam.num_z() != 1 {
        return Err(Error::Dimension("weight estimation needs a one-variable family".into()));
    }
    let dec = decompose(fam.monodromy(), &alphas(cfg, &fam)?)?;
    let frame = deligne_frame(&dec);
    let mut rows = Vec::new();
    let mut passed = true;
    for (ei, entry) in frame.iter().enumerate() {
        let e = entry.clone();
        let dref = &dec;
        let est = parabolic_weight(
            &fam,
            &dec,
            move |z| e.eval(dref, z),
            0.0,
            cfg.t_min,
            cfg.t_max,
            cfg.n_samples.max(10),
        )?;
        let ok = est.degenerate
            || (est.beta_hat + entry.betas[0]).abs() <= cfg.tolerances.weight_agreement;
        passed = passed && ok;
        rows.push(vec![
            ei.to_string(),
            entry.block_index.to_string(),
            fmt_float(entry.betas[0]),
            fmt_float(est.beta_hat),
            fmt_float(est.logorder_hat),
            fmt_float(est.stderr),
            est.degenerate.to_string(),
        ]);
    }
    let text = csv_document(
        &["entry", "block", "beta", "beta_hat", "logorder_hat", "stderr", "degenerate"],
        &rows,
    );
    Ok(RunOutput { text, passed })
}

fn suite_family(name: &str, tol: &Tolerances) -> Result<Vec<(String, bool, serde_json::Value)>> {
    let fam = registry::by_name(name, &serde_json::Value::Null)?;
    let dec = decompose(fam.monodromy(), &vec![0.0; fam.num_z()])?;
    let mut items = Vec::new();
    items.push((
        format!("{name}/decompose"),
        true,
        serde_json::json!({ "basis_condition": dec.basis_condition() }),
    ));

    let psi = untwisted_map(&fam, &dec)?;
    let w = vec![C64::new(0.0, 0.0); fam.num_w()];
    let ext = check_extension(&psi, &w, fam.num_z(), 16, tol)?;
    items.push((
        format!("{name}/extension"),
        ext.pass,
        serde_json::json!({ "max_ray_gap": ext.max_ray_gap, "orders": ext.orders }),
    ));

    // limit step dimensions must reproduce the Hodge numbers
    let dims_ok = ext
        .limit
        .steps()
        .iter()
        .all(|&(p, ref s)| s.dim() == fam.structure().flag_dim(p));
    items.push((
        format!("{name}/limit_ranks"),
        dims_ok,
        serde_json::json!({
            "dims": ext.limit.steps().iter().map(|&(p, ref s)| (p, s.dim())).collect::<Vec<_>>()
        }),
    ));

    let orb = OrbitData::new(ext.limit, dec.s().to_vec(), dec.n().to_vec())?;
    let grid: Vec<Vec<C64>> = [(-1.0, 0.3), (-3.0, -0.8), (-5.0, 1.9)]
        .iter()
        .map(|&(x, y)| vec![C64::new(x, y); fam.num_z()])
        .collect();
    let residual = check_orbit_horizontality(&orb, &grid)?;
    items.push((
        format!("{name}/horizontality"),
        residual <= tol.horizontality,
        serde_json::json!({ "residual": residual }),
    ));

    // Higgs norm must stay bounded along the real ray
    let z5 = vec![C64::new(-5.0, 0.0); fam.num_z()];
    let base = higgs_norm(&fam, &z5, &w)?;
    let mut higgs_ok = true;
    let mut higgs_vals = vec![base];
    for x in [-10.0, -20.0, -40.0] {
        let z = vec![C64::new(x, 0.0); fam.num_z()];
        let v = higgs_norm(&fam, &z, &w)?;
        higgs_ok = higgs_ok && v <= tol.higgs_factor * base + 1e-12;
        higgs_vals.push(v);
    }
    items.push((
        format!("{name}/higgs_bounded"),
        higgs_ok,
        serde_json::json!({ "values": higgs_vals }),
    ));

    if fam.num_z() == 1 {
        // distance decay plus its invariance under one imaginary period
        let fit0 = distance_decay(&fam, &dec, &orb, -12.0, -6.0, 8, 0.0, tol)?;
        let fit1 = distance_decay(&fam, &dec, &orb, -12.0, -6.0, 8, TAU, tol)?;
        let mut reduction_ok = true;
        for (&(_, d0), &(_, d1)) in fit0.samples.iter().zip(&fit1.samples) {
            reduction_ok = reduction_ok && (d0 - d1).abs() <= tol.period_reduction;
        }
        items.push((
            format!("{name}/period_reduction"),
            reduction_ok,
            serde_json::json!({ "delta": fit0.delta, "beta": fit0.beta }),
        ));

        // parabolic weights of the twisted frame reproduce the block exponents
        let frame = deligne_frame(&dec);
        let mut weights_ok = true;
        let mut weight_vals = Vec::new();
        for entry in &frame {
            let e = entry.clone();
            let dref = &dec;
            let est =
                parabolic_weight(&fam, &dec, move |z| e.eval(dref, z), 0.0, 1e-8, 1e-2, 20)?;
            weights_ok = weights_ok
                && (est.degenerate
                    || (est.beta_hat + entry.betas[0]).abs() <= tol.weight_agreement);
            weight_vals.push((entry.betas[0], est.beta_hat, est.logorder_hat));
        }
        items.push((
            format!("{name}/parabolic_weights"),
            weights_ok,
            serde_json::json!({ "entries": weight_vals }),
        ));
    }
    Ok(items)
}

fn run_suite(cfg: &RunConfig) -> Result<RunOutput> {
    let mut report = Report::new("suite", cfg.seed);

    // family battery; computed in parallel, reported in fixed order
    let results: Vec<Result<Vec<(String, bool, serde_json::Value)>>> = {
        use rayon::prelude::*;
        registry::FAMILY_NAMES
            .par_iter()
            .map(|name| suite_family(name, &cfg.tolerances))
            .collect()
    };
    for r in results {
        for (name, passed, details) in r? {
            report.push(name, passed, details);
        }
    }

    // seeded random commuting tuples must all split
    let mut rng = seeded_rng(cfg.seed);
    let mut split_fail = 0usize;
    let count = 20usize;
    for _ in 0..count {
        let r = rng.gen_range(1..=8);
        let p = rng.gen_range(1..=3);
        let tuple = random_commuting_tuple(&mut rng, r, p)?;
        if decompose(&tuple, &vec![0.0; p]).is_err() {
            split_fail += 1;
        }
    }
    report.push(
        "random/splittings",
        split_fail == 0,
        serde_json::json!({ "count": count, "failures": split_fail }),
    );

    let passed = report.passed;
    Ok(RunOutput { text: report.to_json()?, passed })
}

/// Execute one configuration and render its document.
pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    match cfg.command {
        Command::Decompose => run_decompose(cfg),
        Command::Untwist => run_untwist(cfg),
        Command::OrbitCheck => run_orbit_check(cfg),
        Command::Decay => run_decay(cfg),
        Command::Weights => run_weights(cfg),
        Command::Suite => run_suite(cfg),
    }
}

/// Process exit code for an error: 1 for usage and IO problems, 2 for
/// contract violations in the input data, 3 for verification failures.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Json(_) | Error::UnknownFamily(_) => 1,
        Error::Verification(_) => 3,
        _ => 2,
    }
}
