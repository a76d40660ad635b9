use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ruled_imcf::family::cylinder::{admissible_interval, ProfileFunctions, ProfileKind};
use ruled_imcf::family::{make_cyl_timelike, make_lightlike_director_quadratic, make_lightlike_expander, standard_bump};
use ruled_imcf::flow::{evolve, homothety_deviation, homothety_replay, richardson_ratio, Boundary, FlowOptions, SampleGrid, Stencil};
use ruled_imcf::quad::integrate;
use ruled_imcf::soliton::check_grid;
use ruled_imcf::{Error, Interval, LVec3, RuledSurface, ScalarFn, SolitonSpec, Tolerances};

use crate::config::{ExperimentConfig, FamilyConfig, FlowMode, Format, OutputKind, StencilConfig};
use crate::error::CliError;
use crate::output::{csv, obj, with_suffix, write_atomic};

/// Result of a command: `true` for PASS.
pub type Outcome = Result<bool, CliError>;

pub struct Target {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Target {
    fn resolve(&self, cfg: &ExperimentConfig, kind: OutputKind) -> Option<(PathBuf, Option<Format>)> {
        match &self.out {
            Some(p) => Some((p.clone(), self.format)),
            None => cfg.output(kind).map(|o| (o.path.clone(), self.format.or(o.format))),
        }
    }
}

fn build(cfg: &ExperimentConfig) -> Result<(RuledSurface, SolitonSpec), CliError> {
    let (s_dom, t_dom) = cfg.grid.domains()?;
    let (surf, spec) = cfg.family.to_spec()?.build(s_dom, t_dom, cfg.tolerances.quad_tol)?;
    let surf = if cfg.perturb { standard_bump(&surf)? } else { surf };
    Ok((surf, spec))
}

fn nodes(cfg: &ExperimentConfig) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let (s, t) = cfg.grid.domains()?;
    Ok((s.linspace(cfg.grid.s_count), t.linspace(cfg.grid.t_count)))
}

fn spec_line(spec: &SolitonSpec) -> String {
    format!("C = {}, eps = {:+}, {:?}", spec.c, spec.eps, spec.kind)
}

pub fn generate(cfg: &ExperimentConfig, target: &Target) -> Outcome {
    let (surf, spec) = build(cfg)?;
    let (s_nodes, t_nodes) = nodes(cfg)?;
    let mut points = Vec::with_capacity(s_nodes.len() * t_nodes.len());
    let mut rows = Vec::with_capacity(points.capacity());
    let mut degenerate = 0;
    for &s in &s_nodes {
        for &t in &t_nodes {
            let p = surf.position(s, t);
            let h = match surf.mean_curvature(s, t, cfg.tolerances.tau_nd) {
                Ok(h) => h,
                Err(Error::Degenerate { .. }) => {
                    degenerate += 1;
                    f64::NAN
                }
                Err(e) => return Err(e.into()),
            };
            points.push(p);
            rows.push((s, t, p, h));
        }
    }
    let (ns, nt) = (s_nodes.len(), t_nodes.len());
    println!(
        "generated {} vertices, {} faces ({}; {}); degenerate nodes: {degenerate}",
        points.len(),
        (ns - 1) * (nt - 1),
        cfg.family.describe(),
        spec_line(&spec)
    );
    if let Some((path, format)) = target.resolve(cfg, OutputKind::Mesh) {
        let format = format.unwrap_or(if path.extension().is_some_and(|e| e == "csv") { Format::Csv } else { Format::Obj });
        match format {
            Format::Obj => {
                write_atomic(&path, &obj(&points, ns, nt))?;
                let side = path.with_extension("csv");
                write_atomic(&side, &csv(&["s", "t", "H"], rows.iter().map(|r| vec![r.0, r.1, r.3])))?;
                println!("wrote {} and {}", path.display(), side.display());
            }
            Format::Csv => {
                let body = csv(&["s", "t", "x", "y", "z", "H"], rows.iter().map(|r| vec![r.0, r.1, r.2.x, r.2.y, r.2.z, r.3]));
                write_atomic(&path, &body)?;
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(true)
}

pub fn verify(cfg: &ExperimentConfig, target: &Target) -> Outcome {
    let (surf, spec) = build(cfg)?;
    let (s_nodes, t_nodes) = nodes(cfg)?;
    let c = cfg.check_c.unwrap_or(spec.c);
    let chk = check_grid(&surf, c, &s_nodes, &t_nodes, &cfg.tolerances.core())?;
    if let Some((path, _)) = target.resolve(cfg, OutputKind::Residuals) {
        let header = ["s", "t", "E", "F", "G", "H", "eps", "residual_direct", "residual_poly"];
        let rows = chk.rows.iter().map(|r| vec![r.s, r.t, r.e, r.f, r.g, r.h, r.eps, r.direct, r.poly]);
        write_atomic(&path, &csv(&header, rows))?;
        println!("wrote {}", path.display());
    }
    let tol = cfg.tolerances.verify;
    let pass = chk.passes(tol) && chk.degenerate == 0 && chk.zero_h == 0;
    println!("family: {}", cfg.family.describe());
    println!("soliton spec: {}; checked against C = {c}", spec_line(&spec));
    println!(
        "max|residual_direct| = {:.3e}, max|residual_poly| = {:.3e} (scaled {:.3e}), degenerate = {}, zero H = {}",
        chk.max_direct, chk.max_poly, chk.max_poly_scaled, chk.degenerate, chk.zero_h
    );
    println!("{} (tolerance {tol:e})", if pass { "PASS" } else { "FAIL" });
    Ok(pass)
}

pub fn flowcheck(cfg: &ExperimentConfig, target: &Target) -> Outcome {
    let flow = cfg
        .flow
        .as_ref()
        .ok_or_else(|| CliError::Invalid("flowcheck needs a flow block (or --dt and --steps)".into()))?;
    let (surf, spec) = build(cfg)?;
    let (s_nodes, t_nodes) = nodes(cfg)?;
    let g0 = SampleGrid::from_surface(&surf, s_nodes, t_nodes)?;
    let exponent = spec.eps * cfg.check_c.unwrap_or(spec.c);
    let stencil = match flow.stencil {
        StencilConfig::Central2 => Stencil::Central2,
        StencilConfig::Central4 => Stencil::Central4,
    };
    let dts = flow.dts();
    let total = flow.steps as f64 * dts[0];
    let mut rows = vec![];
    let mut terminal = vec![];
    let mut failures = 0;
    println!("family: {}; {}; exponent {exponent}", cfg.family.describe(), spec_line(&spec));
    for &dt in &dts {
        let steps = ((total / dt).round() as usize).max(1);
        let every = flow.record_every.unwrap_or((steps / 10).max(1));
        let traj = match flow.mode {
            FlowMode::Evolve => {
                let mut opts = FlowOptions::new(dt, steps, Boundary::Homothety { exponent });
                opts.stencil = stencil;
                opts.record_every = every;
                opts.tau_nd = cfg.tolerances.tau_nd;
                opts.tau_h = cfg.tolerances.tau_h;
                evolve(&g0, &opts)?
            }
            FlowMode::Replay => {
                let mut times: Vec<f64> = (0..=steps).step_by(every).map(|n| n as f64 * dt).collect();
                if !steps.is_multiple_of(every) {
                    times.push(steps as f64 * dt);
                }
                homothety_replay(&g0, exponent, &times)
            }
        };
        let rep = homothety_deviation(&traj, &surf, exponent, stencil, cfg.tolerances.tau_nd)?;
        for k in 0..rep.times.len() {
            rows.push(vec![dt, rep.times[k], rep.hausdorff_like_dev[k], rep.max_h_drift[k], rep.projection_failures[k] as f64]);
        }
        let drift = rep.max_h_drift.iter().fold(0.0f64, |m, v| m.max(*v));
        let fails: usize = rep.projection_failures.iter().sum();
        failures += fails;
        println!(
            "dt = {dt:e}, steps = {steps}: terminal deviation = {:.3e}, max H drift = {drift:.3e}, projection failures = {fails}",
            rep.terminal_deviation()
        );
        terminal.push(rep.terminal_deviation());
    }
    if let Some((path, _)) = target.resolve(cfg, OutputKind::FlowReport) {
        write_atomic(&path, &csv(&["dt", "time", "deviation", "h_drift", "projection_failures"], rows))?;
        println!("wrote {}", path.display());
    }
    let mut pass = failures == 0;
    if flow.mode == FlowMode::Evolve {
        for k in 1..terminal.len() {
            let ratio = richardson_ratio(terminal[k - 1], terminal[k]);
            let halved = (dts[k - 1] / dts[k] - 2.0).abs() < 1e-12;
            let ok = !halved || (1.7..=2.3).contains(&ratio);
            pass &= ok;
            println!(
                "Richardson ratio dt {:e} -> {:e}: {ratio:.4}{}",
                dts[k - 1],
                dts[k],
                if halved { if ok { " (first order)" } else { " (outside [1.7, 2.3])" } } else { "" }
            );
        }
    }
    let last = *terminal.last().expect("at least one dt");
    if last > flow.threshold {
        pass = false;
        println!("NON-SOLITON: terminal deviation {last:.3e} above threshold {:e}", flow.threshold);
    }
    println!("{}", if pass { "PASS" } else { "FAIL" });
    Ok(pass)
}

/// Fraction of the interval kept clear of a profile boundary.
const CUT_MARGIN: f64 = 1e-6;

pub fn export(cfg: &ExperimentConfig, target: &Target) -> Outcome {
    let (kind, c, k, cols) = match cfg.family {
        FamilyConfig::CylSpacelikeRuling { c, delta, k, .. } => (ProfileKind::Hyperbolic { delta }, c, k, ["s", "y", "z"]),
        FamilyConfig::CylTimelikeRuling { c, k, .. } => (ProfileKind::Circular, c, k, ["s", "x", "y"]),
        _ => return Err(CliError::Invalid(format!("export needs a cylindrical family, got {}", cfg.family.describe()))),
    };
    let (path, _) = target
        .resolve(cfg, OutputKind::Profile)
        .ok_or_else(|| CliError::Invalid("export needs --out or a profile output".into()))?;
    let (s_dom, _) = cfg.grid.domains()?;
    let (adm, lo_err, hi_err) = admissible_interval(kind, c, k, s_dom)?;
    let pad = CUT_MARGIN * adm.width();
    let lo = if lo_err.is_some() { adm.lo + pad } else { adm.lo };
    let hi = if hi_err.is_some() { adm.hi - pad } else { adm.hi };
    let dom = Interval::new(lo, hi)?;
    println!("family: {}", cfg.family.describe());
    for (side, err) in [("lower", &lo_err), ("upper", &hi_err)] {
        match err {
            Some(Error::NegativeRadicand { s, .. }) => {
                println!("{side} boundary: curve truncated at s = {s}, NegativeRadicand (the arc-length radicand changes sign)")
            }
            Some(Error::Singularity { s }) => println!("{side} boundary: curve truncated at s = {s}, Singularity (f vanishes)"),
            Some(e) => println!("{side} boundary: curve truncated, {e}"),
            None => {}
        }
    }
    for (st, sr) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        let p = ProfileFunctions::new(kind, c, k, st, sr, dom, cfg.tolerances.quad_tol)?;
        let rows = dom.linspace(cfg.grid.s_count).into_iter().map(|s| {
            let (a, b) = p.plane_point(s);
            vec![s, a, b]
        });
        let file = with_suffix(&path, &branch_suffix(st, sr));
        write_atomic(&file, &csv(&cols, rows))?;
        println!("branch sign_t = {st:+}, sign_r = {sr:+}: s in [{lo}, {hi}] -> {}", file.display());
    }
    Ok(true)
}

fn branch_suffix(st: f64, sr: f64) -> String {
    let sign = |v: f64| if v > 0.0 { "p" } else { "m" };
    format!("_t{}_r{}", sign(st), sign(sr))
}

fn report(name: &str, ok: bool, detail: String) -> bool {
    println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

pub fn selftest(seed: u64) -> Outcome {
    let iv = |a, b| Interval::new(a, b);
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all = true;

    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let mut v = || LVec3::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let (u, w) = (v(), v());
        let lhs = u.cross(&w).sq();
        let rhs = -u.sq() * w.sq() + u.dot(&w).powi(2);
        worst = worst.max((lhs - rhs).abs() / (u.euclid_norm() * w.euclid_norm()).powi(2));
    }
    all &= report("lagrange identity", worst <= 1e-12, format!("1000 pairs, seed {seed}, max relative error {worst:.2e}"));

    let (circle, _) = make_cyl_timelike(2.0, 1.0, 1.0, 1.0, iv(-3.0, 3.0)?, iv(-1.0, 1.0)?, 1e-10)?;
    let (s, t) = (circle.s_domain.linspace(21), circle.t_domain.linspace(21));
    let chk = check_grid(&circle, 2.0, &s, &t, &tol)?;
    all &= report("circle cylinder", chk.passes(1e-12), format!("max|direct| {:.2e}", chk.max_direct));
    let off = check_grid(&circle, 2.5, &s, &t, &tol)?;
    all &= report("negative control", !off.passes(1e-7), format!("C = 2.5 gives max|poly| {:.2e}", off.max_poly));

    let beta = make_lightlike_director_quadratic(1.0)?;
    let (light, _) = make_lightlike_expander(
        &beta,
        &ScalarFn::new(|s| s),
        &ScalarFn::polynomial(vec![1.0, 0.0, 1.0]),
        iv(-2.0, 2.0)?,
        iv(-1.0, 1.0)?,
    )?;
    let chk = check_grid(&light, 1.0, &light.s_domain.linspace(21), &light.t_domain.linspace(21), &tol)?;
    all &= report("lightlike expander", chk.max_poly <= 1e-8, format!("max|poly| {:.2e}", chk.max_poly));

    let q = integrate(|s| Ok((2.0 * s * s + 1.0).sqrt() / (s * s + 1.0)), 0.0, 1.0, 1e-13, 2000)?;
    let err = (q.value - 0.962515030491099).abs();
    all &= report("profile quadrature", err <= 1e-12, format!("error {err:.2e}"));

    let g0 = SampleGrid::from_surface(&circle, iv(-1.0, 1.0)?.linspace(11), iv(-1.0, 1.0)?.linspace(5))?;
    let replay = homothety_replay(&g0, 2.0, &[0.0, 0.05, 0.1]);
    let rep = homothety_deviation(&replay, &circle, 2.0, Stencil::Central4, tol.tau_nd)?;
    let dev = rep.hausdorff_like_dev.iter().fold(0.0f64, |m, v| m.max(*v));
    all &= report("homothety replay", dev <= 1e-12, format!("deviation {dev:.2e}"));

    println!("{}", if all { "PASS" } else { "FAIL" });
    Ok(all)
}
