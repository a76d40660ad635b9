//! Cylindrical solitons: a planar base curve swept along a constant ruling.
//!
//! With a spacelike ruling `w = (1, 0, 0)` the base curve lies in the
//! `(y, z)` plane with `z^2 - y^2 = f(s)`, `f = delta (2/C - 1) s^2 + k`.
//! With a timelike ruling `w = (0, 0, 1)` it lies in the `(x, y)` plane with
//! `x^2 + y^2 = f(s)`, `f = (1 - 2/C) s^2 + k`. In both cases the angle (or
//! rapidity) `t(s)` is an integral fixed by the arc-length condition.

use std::fmt;
use std::sync::Arc;

use crate::curve::{Curve, Interval, ScalarFn};
use crate::error::{Error, Result};
use crate::jet::{Jet, VJet, JET_ORDER};
use crate::mink::LVec3;
use crate::quad::{integrate, DEFAULT_MAX_INTERVALS};
use crate::ruled::{RuledSurface, DEFAULT_TAU_ND};
use crate::soliton::{classify, SolitonSpec};

/// Default absolute tolerance of the angle quadrature.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
/// Nodes at which the angle is cached.
pub const ANGLE_NODES: usize = 65;
const SCAN_SAMPLES: usize = 257;

/// Which arc-length condition the profile satisfies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileKind {
    /// `z^2 - y^2 = f`, `<g', g'> = delta`; integrand `sqrt(4 delta f + f'^2) / (2|f|)`.
    Hyperbolic { delta: f64 },
    /// `x^2 + y^2 = f`, `<g', g'> = 1`; integrand `sqrt(4f - f'^2) / (2f)`.
    Circular,
}

impl ProfileKind {
    fn radicand(&self, f: f64, fp: f64) -> f64 {
        match *self {
            ProfileKind::Hyperbolic { delta } => 4.0 * delta * f + fp * fp,
            ProfileKind::Circular => 4.0 * f - fp * fp,
        }
    }

    fn integrand_jet(&self, f: Jet) -> Jet {
        let fp = f.derivative();
        let sgn = f.value().signum();
        match *self {
            ProfileKind::Hyperbolic { delta } => (f * (4.0 * delta) + fp * fp).sqrt() / (f * (2.0 * sgn)),
            ProfileKind::Circular => (f * 4.0 - fp * fp).sqrt() / (f * 2.0),
        }
    }
}

/// Sign of `f` on the profile's interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    FPositive,
    FNegative,
}

fn radicand_floor(f: f64, fp: f64) -> f64 {
    -64.0 * f64::EPSILON * (4.0 * f.abs() + fp * fp)
}

fn checked_integrand(kind: ProfileKind, f: &ScalarFn, sign: f64, s: f64) -> Result<f64> {
    let j = f.eval_jet(s);
    let (fv, fp) = (j.value(), j.d(1));
    if fv == 0.0 || fv.signum() != sign || !fv.is_finite() {
        return Err(Error::Singularity { s });
    }
    let rad = kind.radicand(fv, fp);
    if rad < radicand_floor(fv, fp) {
        return Err(Error::NegativeRadicand { s, value: rad });
    }
    Ok(rad.max(0.0).sqrt() / (2.0 * fv.abs()))
}

/// Check that `f` keeps one strict sign and the radicand stays
/// nonnegative on the closed interval between `a` and `b`, by sampling.
/// Zeros of `f` are reported before negative radicands.
fn scan(kind: ProfileKind, f: &ScalarFn, a: f64, b: f64) -> Result<f64> {
    let iv = Interval { lo: a.min(b), hi: a.max(b) };
    let pts = iv.linspace(SCAN_SAMPLES);
    let sign = f.eval(a).signum();
    for &s in &pts {
        let v = f.eval(s);
        if v == 0.0 || v.signum() != sign || !v.is_finite() {
            return Err(Error::Singularity { s });
        }
    }
    for &s in &pts {
        checked_integrand(kind, f, sign, s)?;
    }
    Ok(sign)
}

/// `t(s) = integral from s0 to s of sqrt(4 delta f + f'^2) / (2|f|)`,
/// to absolute tolerance `tol`.
pub fn quad_profile_t(f: &ScalarFn, fprime: &ScalarFn, delta: f64, s0: f64, s: f64, tol: f64) -> Result<f64> {
    if delta != 1.0 && delta != -1.0 {
        return Err(Error::Param(format!("delta must be +1 or -1, got {delta}")));
    }
    let iv = Interval { lo: s0.min(s), hi: s0.max(s) };
    let pts = iv.linspace(SCAN_SAMPLES);
    let sign = f.eval(s0).signum();
    for &x in &pts {
        let v = f.eval(x);
        if v == 0.0 || v.signum() != sign || !v.is_finite() {
            return Err(Error::Singularity { s: x });
        }
    }
    let g = |x: f64| -> Result<f64> {
        let (fv, fp) = (f.eval(x), fprime.eval(x));
        if fv == 0.0 || fv.signum() != sign {
            return Err(Error::Singularity { s: x });
        }
        let rad = 4.0 * delta * fv + fp * fp;
        if rad < radicand_floor(fv, fp) {
            return Err(Error::NegativeRadicand { s: x, value: rad });
        }
        Ok(rad.max(0.0).sqrt() / (2.0 * fv.abs()))
    };
    for &x in &pts {
        g(x)?;
    }
    Ok(integrate(g, s0, s, tol, DEFAULT_MAX_INTERVALS)?.value)
}

/// The profile angle `t(s)` with `t(anchor) = 0`, cached at evenly spaced
/// nodes. Values between nodes are integrated from the nearest node.
pub struct ProfileAngle {
    kind: ProfileKind,
    f: ScalarFn,
    sign_f: f64,
    sign_t: f64,
    anchor: f64,
    nodes: Vec<f64>,
    values: Vec<f64>,
    tol: f64,
}

impl fmt::Debug for ProfileAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProfileAngle")
            .field("kind", &self.kind)
            .field("anchor", &self.anchor)
            .field("nodes", &self.nodes.len())
            .finish()
    }
}

impl ProfileAngle {
    /// Validates the interval and fills the node cache.
    pub fn new(kind: ProfileKind, f: ScalarFn, sign_t: f64, domain: Interval, tol: f64) -> Result<Self> {
        let sign_f = scan(kind, &f, domain.lo, domain.hi)?;
        let anchor = 0f64.clamp(domain.lo, domain.hi);
        let nodes = domain.linspace(ANGLE_NODES);
        let mut values = Vec::with_capacity(nodes.len());
        for &n in &nodes {
            let v = integrate(|x| checked_integrand(kind, &f, sign_f, x), anchor, n, tol, DEFAULT_MAX_INTERVALS)?;
            values.push(v.value);
        }
        Ok(ProfileAngle {
            kind,
            f,
            sign_f,
            sign_t,
            anchor,
            nodes,
            values,
            tol,
        })
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    /// Integral from the anchor, before applying `sign_t`.
    fn unsigned(&self, s: f64) -> Result<f64> {
        let j = match self.nodes.binary_search_by(|n| n.total_cmp(&s)) {
            Ok(j) => return Ok(self.values[j]),
            Err(0) => 0,
            Err(j) if j >= self.nodes.len() => self.nodes.len() - 1,
            Err(j) => {
                if s - self.nodes[j - 1] < self.nodes[j] - s {
                    j - 1
                } else {
                    j
                }
            }
        };
        let (kind, sign) = (self.kind, self.sign_f);
        let rest = integrate(|x| checked_integrand(kind, &self.f, sign, x), self.nodes[j], s, self.tol, DEFAULT_MAX_INTERVALS)?;
        Ok(self.values[j] + rest.value)
    }

    /// `t(s)`; fails outside the admissible region.
    pub fn try_value(&self, s: f64) -> Result<f64> {
        Ok(self.sign_t * self.unsigned(s)?)
    }

    /// `t(s)`, `NaN` outside the admissible region.
    pub fn value(&self, s: f64) -> f64 {
        self.try_value(s).unwrap_or(f64::NAN)
    }

    /// `t` composed with a parameter jet.
    pub fn jet(&self, s: Jet) -> Jet {
        let x = s.value();
        let g = self.kind.integrand_jet(self.f.eval_jet(x));
        let outer = [self.value(x), g.d(0), g.d(1), g.d(2), g.d(3)].map(|v| v * self.sign_t);
        s.compose(outer)
    }
}

/// `f`, `r = sign_r sqrt|f|` and the angle `t` of one cylindrical profile.
#[derive(Debug, Clone)]
pub struct ProfileFunctions {
    pub kind: ProfileKind,
    pub c: f64,
    pub k: f64,
    pub f: ScalarFn,
    pub r: ScalarFn,
    pub angle: Arc<ProfileAngle>,
    pub branch: Branch,
    pub sign_t: f64,
    pub sign_r: f64,
}

/// `a2 s^2 + k0` and the reduced radicand `rho2 s^2 + rho0` (a quarter of
/// the integrand's radicand).
fn coefficients(kind: ProfileKind, c: f64, k: f64) -> (f64, f64, f64) {
    match kind {
        ProfileKind::Hyperbolic { delta } => {
            let a2 = delta * (2.0 / c - 1.0);
            (a2, delta * a2 + a2 * a2, delta * k)
        }
        ProfileKind::Circular => {
            let a2 = 1.0 - 2.0 / c;
            (a2, a2 - a2 * a2, k)
        }
    }
}

/// Where `a s^2 + b` vanishes in `[lo, hi]`, nearest to `anchor`.
fn quadratic_root(a: f64, b: f64, iv: &Interval, anchor: f64) -> Option<f64> {
    let mut roots = vec![];
    if a == 0.0 {
        if b == 0.0 {
            roots.push(anchor);
        }
    } else if -b / a >= 0.0 {
        let r = (-b / a).sqrt();
        roots.extend([-r, r]);
    }
    roots
        .into_iter()
        .filter(|r| iv.contains(*r))
        .min_by(|x, y| (x - anchor).abs().total_cmp(&(y - anchor).abs()))
}

fn min_on(a: f64, b: f64, iv: &Interval) -> (f64, f64) {
    let mut cands = vec![iv.lo, iv.hi];
    if iv.contains(0.0) {
        cands.push(0.0);
    }
    cands
        .into_iter()
        .map(|s| (s, a * s * s + b))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("nonempty")
}

/// Exact admissibility test for the quadratic profiles: `f` has no zero and
/// the radicand is nonnegative on `iv`.
fn check_quadratic(kind: ProfileKind, c: f64, k: f64, iv: &Interval) -> Result<()> {
    let (a2, rho2, rho0) = coefficients(kind, c, k);
    let anchor = 0f64.clamp(iv.lo, iv.hi);
    if let Some(s) = quadratic_root(a2, k, iv, anchor) {
        return Err(Error::Singularity { s });
    }
    let (s, v) = min_on(rho2, rho0, iv);
    if v < 0.0 {
        return Err(Error::NegativeRadicand { s, value: 4.0 * v });
    }
    Ok(())
}

/// Largest interval inside `iv`, containing the anchor `clamp(0, lo, hi)`,
/// on which the profile is admissible, with the error met at each cut end.
pub fn admissible_interval(kind: ProfileKind, c: f64, k: f64, iv: Interval) -> Result<(Interval, Option<Error>, Option<Error>)> {
    if c == 0.0 {
        return Err(Error::ZeroC);
    }
    let anchor = 0f64.clamp(iv.lo, iv.hi);
    let at = Interval { lo: anchor, hi: anchor };
    check_quadratic(kind, c, k, &at)?;
    let (a2, rho2, rho0) = coefficients(kind, c, k);
    // boundaries on each side: the nearest f-zero or radicand zero
    let mut cuts: Vec<(f64, Error)> = vec![];
    if a2 != 0.0 && -k / a2 > 0.0 {
        let r = (-k / a2).sqrt();
        cuts.push((r, Error::Singularity { s: r }));
        cuts.push((-r, Error::Singularity { s: -r }));
    }
    if rho2 != 0.0 && -rho0 / rho2 > 0.0 && rho2 < 0.0 {
        let r = (-rho0 / rho2).sqrt();
        cuts.push((r, Error::NegativeRadicand { s: r, value: 0.0 }));
        cuts.push((-r, Error::NegativeRadicand { s: -r, value: 0.0 }));
    }
    let mut lo = (iv.lo, None);
    let mut hi = (iv.hi, None);
    for (x, e) in cuts {
        if x > anchor && x <= hi.0 {
            hi = (x, Some(e));
        } else if x < anchor && x >= lo.0 {
            lo = (x, Some(e));
        }
    }
    Ok((Interval { lo: lo.0, hi: hi.0 }, lo.1, hi.1))
}

fn check_sign(name: &str, v: f64) -> Result<()> {
    if v == 1.0 || v == -1.0 {
        Ok(())
    } else {
        Err(Error::Param(format!("{name} must be +1 or -1, got {v}")))
    }
}

impl ProfileFunctions {
    /// Profile of the given kind on `domain`. `f` must not vanish and the
    /// radicand must stay nonnegative on the whole closed interval.
    pub fn new(kind: ProfileKind, c: f64, k: f64, sign_t: f64, sign_r: f64, domain: Interval, tol: f64) -> Result<Self> {
        if c == 0.0 {
            return Err(Error::ZeroC);
        }
        if !(c.is_finite() && k.is_finite()) {
            return Err(Error::Param("C and k must be finite".into()));
        }
        if let ProfileKind::Hyperbolic { delta } = kind {
            check_sign("delta", delta)?;
        }
        check_sign("sign_t", sign_t)?;
        check_sign("sign_r", sign_r)?;
        check_quadratic(kind, c, k, &domain)?;
        let (a2, _, _) = coefficients(kind, c, k);
        let f = ScalarFn::polynomial(vec![k, 0.0, a2]);
        let branch = if f.eval(domain.mid()) > 0.0 { Branch::FPositive } else { Branch::FNegative };
        if kind == ProfileKind::Circular && branch == Branch::FNegative {
            return Err(Error::Param(format!("(1 - 2/C) s^2 + k must be positive, it is {} on the s domain", f.eval(domain.mid()))));
        }
        let sgn = if branch == Branch::FPositive { 1.0 } else { -1.0 };
        let fr = f.clone();
        let r = ScalarFn::new(move |s| (fr.jet(s) * sgn).sqrt() * sign_r);
        let angle = Arc::new(ProfileAngle::new(kind, f.clone(), sign_t, domain, tol)?);
        Ok(ProfileFunctions {
            kind,
            c,
            k,
            f,
            r,
            angle,
            branch,
            sign_t,
            sign_r,
        })
    }

    /// Plane coordinates of the base curve as jets: `(y, z)` for the
    /// hyperbolic kind, `(x, y)` for the circular one.
    pub fn plane_jet(&self, s: Jet) -> (Jet, Jet) {
        let r = self.r.jet(s);
        let th = self.angle.jet(s);
        match (self.kind, self.branch) {
            (ProfileKind::Circular, _) => (r * th.cos(), r * th.sin()),
            (_, Branch::FPositive) => (r * th.sinh(), r * th.cosh()),
            (_, Branch::FNegative) => (r * th.cosh(), r * th.sinh()),
        }
    }

    pub fn plane_point(&self, s: f64) -> (f64, f64) {
        let (a, b) = self.plane_jet(Jet::constant(s));
        (a.value(), b.value())
    }

    /// Base curve in `L^3`.
    pub fn base_curve(&self, domain: Interval) -> Curve {
        let p = self.clone();
        match self.kind {
            ProfileKind::Circular => Curve::analytic(domain, JET_ORDER, move |s| {
                let (x, y) = p.plane_jet(s);
                VJet::new(x, y, Jet::constant(0.0))
            }),
            ProfileKind::Hyperbolic { .. } => Curve::analytic(domain, JET_ORDER, move |s| {
                let (y, z) = p.plane_jet(s);
                VJet::new(Jet::constant(0.0), y, z)
            }),
        }
    }

    /// Constant ruling direction.
    pub fn ruling(&self) -> LVec3 {
        match self.kind {
            ProfileKind::Circular => LVec3::E3,
            ProfileKind::Hyperbolic { .. } => LVec3::E1,
        }
    }

    /// `z^2 - y^2 - f` (hyperbolic) or `x^2 + y^2 - f` (circular).
    pub fn constraint_defect(&self, s: f64) -> f64 {
        let (a, b) = self.plane_point(s);
        let fv = self.f.eval(s);
        match self.kind {
            ProfileKind::Circular => a * a + b * b - fv,
            ProfileKind::Hyperbolic { .. } => b * b - a * a - fv,
        }
    }
}

fn cylinder(profile: &ProfileFunctions, s_domain: Interval, t_domain: Interval) -> Result<(RuledSurface, SolitonSpec)> {
    let gamma = profile.base_curve(s_domain);
    let beta = Curve::constant(s_domain, profile.ruling());
    let surface = RuledSurface::new(gamma, beta, s_domain, t_domain);
    let eps = surface.unit_normal(s_domain.mid(), t_domain.mid(), DEFAULT_TAU_ND)?.eps;
    Ok((surface, classify(eps, profile.c)?))
}

/// Cylinder over `z^2 - y^2 = delta (2/C - 1) s^2 + k` with ruling `(1, 0, 0)`.
#[allow(clippy::too_many_arguments)]
pub fn make_cyl_spacelike(
    c: f64,
    delta: f64,
    k: f64,
    sign_t: f64,
    sign_r: f64,
    s_domain: Interval,
    t_domain: Interval,
    tol: f64,
) -> Result<(RuledSurface, SolitonSpec)> {
    let p = ProfileFunctions::new(ProfileKind::Hyperbolic { delta }, c, k, sign_t, sign_r, s_domain, tol)?;
    cylinder(&p, s_domain, t_domain)
}

/// Cylinder over `x^2 + y^2 = (1 - 2/C) s^2 + k` with ruling `(0, 0, 1)`.
pub fn make_cyl_timelike(
    c: f64,
    k: f64,
    sign_t: f64,
    sign_r: f64,
    s_domain: Interval,
    t_domain: Interval,
    tol: f64,
) -> Result<(RuledSurface, SolitonSpec)> {
    let p = ProfileFunctions::new(ProfileKind::Circular, c, k, sign_t, sign_r, s_domain, tol)?;
    cylinder(&p, s_domain, t_domain)
}
