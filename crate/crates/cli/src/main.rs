//! `ruled-imcf`: build, verify, evolve and export ruled homothetic solitons.

mod commands;
mod config;
mod error;
mod expr;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use config::{DirectorConfig, ExperimentConfig, Format, Overrides};
use error::CliError;

const DEFAULT_SEED: u64 = 7;

#[derive(Parser, Debug)]
#[command(name = "ruled-imcf", version, about = "Ruled homothetic solitons of inverse mean curvature flow in L^3")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// JSON experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// LightlikeExpander, NonCylindrical, CylSpacelikeRuling or CylTimelikeRuling.
    #[arg(long, global = true)]
    family: Option<String>,
    #[arg(long = "C", global = true, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    k: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    k1: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    k2: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    delta: Option<f64>,
    #[arg(long = "sign-t", global = true, allow_negative_numbers = true)]
    sign_t: Option<f64>,
    #[arg(long = "sign-r", global = true, allow_negative_numbers = true)]
    sign_r: Option<f64>,
    /// quadratic:A0, circular or circular_reversed.
    #[arg(long, global = true)]
    director: Option<String>,
    /// Expression in s.
    #[arg(long, global = true, allow_hyphen_values = true)]
    a: Option<String>,
    /// Expression in s.
    #[arg(long, global = true, allow_hyphen_values = true)]
    b: Option<String>,
    /// SMIN:SMAX:N,TMIN:TMAX:N
    #[arg(long, global = true, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Time step; a comma-separated list runs each one.
    #[arg(long, global = true, value_delimiter = ',')]
    dt: Option<Vec<f64>>,
    #[arg(long, global = true)]
    steps: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Verify against this soliton constant instead of the family's.
    #[arg(long = "check-C", global = true, allow_negative_numbers = true)]
    check_c: Option<f64>,
    /// Add a 5% normal bump to the surface.
    #[arg(long, global = true)]
    perturb: bool,
    /// Replace the flow by the exact homothety.
    #[arg(long, global = true)]
    replay: bool,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Cmd {
    /// Write the surface mesh (OBJ plus a CSV of mean curvature).
    Generate,
    /// Check the soliton equation on the grid.
    Verify,
    /// Run the flow and compare with the predicted homothety.
    Flowcheck,
    /// Write the four branches of a cylindrical profile curve.
    Export,
    /// Quick built-in checks.
    Selftest,
}

impl Cli {
    fn overrides(&self) -> Result<Overrides, CliError> {
        let mut fields = vec![];
        let nums = [
            ("C", self.c),
            ("k", self.k),
            ("k1", self.k1),
            ("k2", self.k2),
            ("delta", self.delta),
            ("sign_t", self.sign_t),
            ("sign_r", self.sign_r),
        ];
        for (key, v) in nums {
            if let Some(v) = v {
                fields.push((key, json!(v)));
            }
        }
        if let Some(d) = &self.director {
            fields.push(("director", DirectorConfig::parse_flag(d)?));
        }
        if let Some(a) = &self.a {
            fields.push(("a", json!(a)));
        }
        if let Some(b) = &self.b {
            fields.push(("b", json!(b)));
        }
        Ok(Overrides {
            family: self.family.clone(),
            family_fields: fields,
            grid: self.grid.clone(),
            dt: self.dt.clone(),
            steps: self.steps,
            check_c: self.check_c,
            perturb: self.perturb,
            replay: self.replay,
        })
    }

    fn load(&self) -> Result<ExperimentConfig, CliError> {
        let ov = self.overrides()?;
        match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
                ExperimentConfig::from_json(&text, &ov)
            }
            None => ExperimentConfig::from_value(json!({}), &ov),
        }
    }
}

fn run(cli: &Cli) -> Result<bool, (CliError, Option<String>)> {
    if cli.cmd == Cmd::Selftest {
        let seed = cli.seed.unwrap_or(DEFAULT_SEED);
        return commands::selftest(seed).map_err(|e| (e, None));
    }
    let cfg = cli.load().map_err(|e| (e, None))?;
    let target = commands::Target { out: cli.out.clone(), format: cli.format };
    let res = match cli.cmd {
        Cmd::Generate => commands::generate(&cfg, &target),
        Cmd::Verify => commands::verify(&cfg, &target),
        Cmd::Flowcheck => commands::flowcheck(&cfg, &target),
        Cmd::Export => commands::export(&cfg, &target),
        Cmd::Selftest => unreachable!(),
    };
    res.map_err(|e| (e, Some(cfg.family.describe())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err((e, family)) => {
            match family {
                Some(f) => eprintln!("error: {e}\n  family: {f}"),
                None => eprintln!("error: {e}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
