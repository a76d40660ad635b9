//! Experiment configuration: a JSON file, optionally patched by flags.

use std::path::PathBuf;

use serde::Deserialize;
use serde_json::{Map, Value};

use ruled_imcf::family::lightlike::circular_director_reversed;
use ruled_imcf::family::{make_lightlike_director_circular, make_lightlike_director_quadratic, FamilySpec};
use ruled_imcf::{Interval, Tolerances};

use crate::error::CliError;
use crate::expr::Expr;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: FamilyConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub tolerances: TolConfig,
    pub flow: Option<FlowConfig>,
    #[serde(default)]
    pub outputs: Vec<OutputSpec>,
    /// Soliton constant to verify against, when it differs from the family's.
    #[serde(rename = "check_C")]
    pub check_c: Option<f64>,
    /// Apply a 5% Gaussian bump along the normal before running.
    #[serde(default)]
    pub perturb: bool,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "tag", deny_unknown_fields)]
pub enum FamilyConfig {
    LightlikeExpander {
        director: DirectorConfig,
        a: String,
        b: String,
    },
    NonCylindrical {
        #[serde(rename = "C")]
        c: f64,
        k1: f64,
        k2: f64,
    },
    CylSpacelikeRuling {
        #[serde(rename = "C")]
        c: f64,
        delta: f64,
        k: f64,
        sign_t: f64,
        sign_r: f64,
    },
    CylTimelikeRuling {
        #[serde(rename = "C")]
        c: f64,
        k: f64,
        sign_t: f64,
        sign_r: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DirectorConfig {
    Quadratic { a0: f64 },
    Circular,
    CircularReversed,
}

impl DirectorConfig {
    /// `quadratic:A0`, `circular` or `circular_reversed`.
    pub fn parse_flag(text: &str) -> Result<Value, CliError> {
        let v = match text.split_once(':') {
            Some(("quadratic", a0)) => {
                let a0: f64 = a0.parse().map_err(|_| CliError::Invalid(format!("bad a0 in --director {text}")))?;
                serde_json::json!({"kind": "quadratic", "a0": a0})
            }
            None if text == "circular" || text == "circular_reversed" => serde_json::json!({"kind": text}),
            _ => {
                return Err(CliError::Invalid(format!(
                    "--director must be quadratic:A0, circular or circular_reversed, got {text}"
                )))
            }
        };
        Ok(v)
    }
}

impl FamilyConfig {
    pub fn describe(&self) -> String {
        match self {
            FamilyConfig::LightlikeExpander { director, a, b } => {
                format!("LightlikeExpander director={director:?} a={a} b={b}")
            }
            FamilyConfig::NonCylindrical { c, k1, k2 } => format!("NonCylindrical C={c} k1={k1} k2={k2}"),
            FamilyConfig::CylSpacelikeRuling { c, delta, k, sign_t, sign_r } => {
                format!("CylSpacelikeRuling C={c} delta={delta} k={k} sign_t={sign_t} sign_r={sign_r}")
            }
            FamilyConfig::CylTimelikeRuling { c, k, sign_t, sign_r } => {
                format!("CylTimelikeRuling C={c} k={k} sign_t={sign_t} sign_r={sign_r}")
            }
        }
    }

    pub fn to_spec(&self) -> Result<FamilySpec, CliError> {
        Ok(match self {
            FamilyConfig::LightlikeExpander { director, a, b } => {
                let director = match director {
                    DirectorConfig::Quadratic { a0 } => make_lightlike_director_quadratic(*a0)?,
                    DirectorConfig::Circular => make_lightlike_director_circular(),
                    DirectorConfig::CircularReversed => circular_director_reversed(),
                };
                let parse = |name: &str, src: &str| {
                    Expr::parse(src).map_err(|e| CliError::Invalid(format!("family.{name}: {e}")))
                };
                FamilySpec::LightlikeExpander {
                    director,
                    a: parse("a", a)?.to_scalar_fn(),
                    b: parse("b", b)?.to_scalar_fn(),
                }
            }
            &FamilyConfig::NonCylindrical { c, k1, k2 } => FamilySpec::NonCylindrical { c, k1, k2 },
            &FamilyConfig::CylSpacelikeRuling { c, delta, k, sign_t, sign_r } => {
                FamilySpec::CylSpacelikeRuling { c, delta, k, sign_t, sign_r }
            }
            &FamilyConfig::CylTimelikeRuling { c, k, sign_t, sign_r } => FamilySpec::CylTimelikeRuling { c, k, sign_t, sign_r },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub s_min: f64,
    pub s_max: f64,
    pub s_count: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_count: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { s_min: -1.0, s_max: 1.0, s_count: 21, t_min: -1.0, t_max: 1.0, t_count: 21 }
    }
}

impl GridConfig {
    /// `SMIN:SMAX:N,TMIN:TMAX:N`.
    pub fn parse_flag(text: &str) -> Result<Value, CliError> {
        let bad = || CliError::Invalid(format!("--grid must look like SMIN:SMAX:N,TMIN:TMAX:N, got {text}"));
        let (s, t) = text.split_once(',').ok_or_else(bad)?;
        let axis = |part: &str| -> Result<(f64, f64, usize), CliError> {
            let f: Vec<&str> = part.split(':').collect();
            if f.len() != 3 {
                return Err(bad());
            }
            Ok((f[0].parse().map_err(|_| bad())?, f[1].parse().map_err(|_| bad())?, f[2].parse().map_err(|_| bad())?))
        };
        let (s_min, s_max, s_count) = axis(s)?;
        let (t_min, t_max, t_count) = axis(t)?;
        Ok(serde_json::json!({
            "s_min": s_min, "s_max": s_max, "s_count": s_count,
            "t_min": t_min, "t_max": t_max, "t_count": t_count,
        }))
    }

    pub fn domains(&self) -> Result<(Interval, Interval), CliError> {
        if self.s_count < 2 || self.t_count < 2 {
            return Err(CliError::Invalid("grid needs at least 2 nodes per axis".into()));
        }
        Ok((Interval::new(self.s_min, self.s_max)?, Interval::new(self.t_min, self.t_max)?))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TolConfig {
    pub tau_c: f64,
    pub tau_nd: f64,
    pub tau_h: f64,
    pub quad_tol: f64,
    /// Residual tolerance for PASS/FAIL.
    pub verify: f64,
}

impl Default for TolConfig {
    fn default() -> Self {
        let t = Tolerances::default();
        TolConfig {
            tau_c: t.tau_c,
            tau_nd: t.tau_nd,
            tau_h: t.tau_h,
            quad_tol: ruled_imcf::family::DEFAULT_QUAD_TOL,
            verify: 1e-7,
        }
    }
}

impl TolConfig {
    pub fn core(&self) -> Tolerances {
        Tolerances { tau_c: self.tau_c, tau_nd: self.tau_nd, tau_h: self.tau_h }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowMode {
    Evolve,
    Replay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StencilConfig {
    Central2,
    Central4,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowConfig {
    pub dt: OneOrMany,
    /// Steps for the first `dt`; the others keep the same final time.
    pub steps: usize,
    #[serde(default = "FlowConfig::default_mode")]
    pub mode: FlowMode,
    #[serde(default = "FlowConfig::default_stencil")]
    pub stencil: StencilConfig,
    /// Terminal deviation above which the run is flagged NON-SOLITON.
    #[serde(default = "FlowConfig::default_threshold")]
    pub threshold: f64,
    pub record_every: Option<usize>,
}

impl FlowConfig {
    fn default_mode() -> FlowMode {
        FlowMode::Evolve
    }
    fn default_stencil() -> StencilConfig {
        StencilConfig::Central4
    }
    fn default_threshold() -> f64 {
        1e-2
    }

    pub fn dts(&self) -> Vec<f64> {
        match &self.dt {
            OneOrMany::One(v) => vec![*v],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Mesh,
    Residuals,
    FlowReport,
    Profile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Obj,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub kind: OutputKind,
    pub path: PathBuf,
    pub format: Option<Format>,
}

/// Values given on the command line; each one overrides the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub family: Option<String>,
    pub family_fields: Vec<(&'static str, Value)>,
    pub grid: Option<String>,
    pub dt: Option<Vec<f64>>,
    pub steps: Option<usize>,
    pub check_c: Option<f64>,
    pub perturb: bool,
    pub replay: bool,
}

fn object<'a>(v: &'a mut Value, key: &str) -> Result<&'a mut Map<String, Value>, CliError> {
    let root = v.as_object_mut().ok_or_else(|| CliError::Invalid("config must be a JSON object".into()))?;
    let entry = root.entry(key).or_insert_with(|| Value::Object(Map::new()));
    entry.as_object_mut().ok_or_else(|| CliError::Invalid(format!("`{key}` must be an object")))
}

impl ExperimentConfig {
    pub fn from_json(text: &str, ov: &Overrides) -> Result<Self, CliError> {
        let mut v: Value = serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("config: {e}")))?;
        if !v.is_object() {
            return Err(CliError::Invalid("config must be a JSON object".into()));
        }
        Self::from_value(v.take(), ov)
    }

    pub fn from_value(mut v: Value, ov: &Overrides) -> Result<Self, CliError> {
        if let Some(tag) = &ov.family {
            let fam = object(&mut v, "family")?;
            if fam.get("tag").and_then(Value::as_str) != Some(tag.as_str()) {
                fam.clear();
                fam.insert("tag".into(), Value::String(tag.clone()));
            }
        }
        if !ov.family_fields.is_empty() {
            let fam = object(&mut v, "family")?;
            for (k, val) in &ov.family_fields {
                fam.insert((*k).into(), val.clone());
            }
        }
        if let Some(g) = &ov.grid {
            v["grid"] = GridConfig::parse_flag(g)?;
        }
        if ov.dt.is_some() || ov.steps.is_some() || ov.replay {
            let flow = object(&mut v, "flow")?;
            if let Some(dt) = &ov.dt {
                flow.insert("dt".into(), serde_json::json!(dt));
            }
            if let Some(n) = ov.steps {
                flow.insert("steps".into(), serde_json::json!(n));
            }
            if ov.replay {
                flow.insert("mode".into(), serde_json::json!("replay"));
            }
        }
        if let Some(c) = ov.check_c {
            v["check_C"] = serde_json::json!(c);
        }
        if ov.perturb {
            v["perturb"] = Value::Bool(true);
        }
        if v.get("family").is_none() {
            return Err(CliError::Invalid("no family given: use --config or --family".into()));
        }
        let cfg: ExperimentConfig = serde_json::from_value(v).map_err(|e| CliError::Invalid(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let t = &self.tolerances;
        for (name, v) in [("tau_c", t.tau_c), ("tau_nd", t.tau_nd), ("tau_h", t.tau_h), ("quad_tol", t.quad_tol), ("verify", t.verify)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Invalid(format!("tolerances.{name} must be positive, got {v}")));
            }
        }
        self.grid.domains()?;
        if let Some(f) = &self.flow {
            let dts = f.dts();
            if dts.is_empty() || dts.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
                return Err(CliError::Invalid("flow.dt must be positive".into()));
            }
            if f.steps == 0 {
                return Err(CliError::Invalid("flow.steps must be positive".into()));
            }
            if f.record_every == Some(0) {
                return Err(CliError::Invalid("flow.record_every must be positive".into()));
            }
        }
        Ok(())
    }

    /// First configured output of `kind`.
    pub fn output(&self, kind: OutputKind) -> Option<&OutputSpec> {
        self.outputs.iter().find(|o| o.kind == kind)
    }
}
