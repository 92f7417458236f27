use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hodgeorbit::cli::{self, Command, RunConfig};
use hodgeorbit::verify::Tolerances;

/// Splittings, untwisted period maps, orbit checks, and asymptotic
/// norm estimation for degenerating polarized structures.
#[derive(Parser)]
#[command(name = "hodgeorbit", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Registry family name or path to a JSON manifest
    #[arg(long)]
    family: Option<String>,
    /// Window choice per monodromy generator, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Vec<f64>,
    /// Write the document here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Size of the worker pool; results do not depend on it
    #[arg(long)]
    threads: Option<usize>,
    /// Override a named tolerance, e.g. --tol ray_agreement=1e-6
    #[arg(long = "tol")]
    tol: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Split the family's monodromy into unitary and unipotent parts
    Decompose {
        #[command(flatten)]
        common: Common,
    },
    /// Untwist the period map and take its radial limit
    Untwist {
        #[command(flatten)]
        common: Common,
    },
    /// Check horizontality and scan domain membership of the induced orbit
    OrbitCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
        x_lo: f64,
        #[arg(long, default_value_t = -0.05, allow_hyphen_values = true)]
        x_hi: f64,
        #[arg(long, default_value_t = 40)]
        samples: usize,
    },
    /// Fit the decay rate of the distance between orbit and period map
    Decay {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = -30.0, allow_hyphen_values = true)]
        x_lo: f64,
        #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
        x_hi: f64,
        #[arg(long, default_value_t = 60)]
        samples: usize,
    },
    /// Estimate parabolic weights of the twisted frame entries
    Weights {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-8)]
        t_min: f64,
        #[arg(long, default_value_t = 1e-2)]
        t_max: f64,
        #[arg(long, default_value_t = 30)]
        samples: usize,
    },
    /// Run the full battery over every registry family
    Suite {
        #[command(flatten)]
        common: Common,
    },
}

fn apply_tolerances(mut t: Tolerances, overrides: &[String]) -> Result<Tolerances, String> {
    for item in overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| format!("expected KEY=VALUE, got '{item}'"))?;
        let v: f64 = value.parse().map_err(|_| format!("bad number in '{item}'"))?;
        match key {
            "ray_agreement" => t.ray_agreement = v,
            "max_transport_condition" => t.max_transport_condition = v,
            "decay_floor" => t.decay_floor = v,
            "ad_ratio_factor" => t.ad_ratio_factor = v,
            "horizontality" => t.horizontality = v,
            "weight_agreement" => t.weight_agreement = v,
            "period_reduction" => t.period_reduction = v,
            "higgs_factor" => t.higgs_factor = v,
            other => return Err(format!("unknown tolerance '{other}'")),
        }
    }
    Ok(t)
}

fn build_config(
    command: Command,
    common: &Common,
    window: (f64, f64, usize),
    t_window: (f64, f64),
) -> Result<RunConfig, String> {
    let family = match (&common.family, command) {
        (Some(f), _) => f.clone(),
        (None, Command::Suite) => String::new(),
        (None, _) => return Err("--family is required for this command".into()),
    };
    Ok(RunConfig {
        command,
        family,
        alpha: common.alpha.clone(),
        x_lo: window.0,
        x_hi: window.1,
        n_samples: window.2,
        t_min: t_window.0,
        t_max: t_window.1,
        output: common.output.clone(),
        seed: common.seed,
        tolerances: apply_tolerances(Tolerances::default(), &common.tol)?,
    })
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let (cfg, threads) = {
        let built = match &args.cmd {
            Cmd::Decompose { common } => {
                (build_config(Command::Decompose, common, (-6.0, -0.05, 40), (1e-8, 1e-2)), common)
            }
            Cmd::Untwist { common } => {
                (build_config(Command::Untwist, common, (-6.0, -0.05, 40), (1e-8, 1e-2)), common)
            }
            Cmd::OrbitCheck { common, x_lo, x_hi, samples } => (
                build_config(Command::OrbitCheck, common, (*x_lo, *x_hi, *samples), (1e-8, 1e-2)),
                common,
            ),
            Cmd::Decay { common, x_lo, x_hi, samples } => (
                build_config(Command::Decay, common, (*x_lo, *x_hi, *samples), (1e-8, 1e-2)),
                common,
            ),
            Cmd::Weights { common, t_min, t_max, samples } => (
                build_config(Command::Weights, common, (-30.0, -5.0, *samples), (*t_min, *t_max)),
                common,
            ),
            Cmd::Suite { common } => {
                (build_config(Command::Suite, common, (-6.0, -0.05, 40), (1e-8, 1e-2)), common)
            }
        };
        match built {
            (Ok(cfg), common) => (cfg, common.threads),
            (Err(msg), _) => {
                eprintln!("error: {msg}");
                return ExitCode::from(1);
            }
        }
    };

    let result = match threads {
        Some(n) => {
            let pool = match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            pool.install(|| cli::run(&cfg))
        }
        None => cli::run(&cfg),
    };

    match result {
        Ok(out) => {
            if let Some(path) = &cfg.output {
                if let Err(e) = std::fs::write(path, &out.text) {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            } else {
                print!("{}", out.text);
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
