//! Residuals of the homothetic soliton equation `C <N, X> = -1/H` for ruled
//! surfaces, the coefficient systems in `t`, and shrinker/expander
//! classification.

use nalgebra::{DMatrix, DVector};

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::mink::{mixed, CausalType, DEFAULT_TAU_C};
use crate::ruled::{RuledSurface, DEFAULT_TAU_H, DEFAULT_TAU_ND};

/// Tolerances shared by the residual evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub tau_c: f64,
    pub tau_nd: f64,
    pub tau_h: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tau_c: DEFAULT_TAU_C,
            tau_nd: DEFAULT_TAU_ND,
            tau_h: DEFAULT_TAU_H,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolitonKind {
    SelfShrinker,
    SelfExpander,
}

/// Soliton constant, causal sign and the resulting kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonSpec {
    pub c: f64,
    pub eps: f64,
    pub kind: SolitonKind,
}

impl SolitonSpec {
    /// Exponent of the homothety factor `exp(eps C tau)`.
    pub fn exponent(&self) -> f64 {
        self.eps * self.c
    }

    pub fn scale_at(&self, tau: f64) -> f64 {
        (self.exponent() * tau).exp()
    }
}

/// Shrinker when `eps C < 0`, expander when `eps C > 0`.
pub fn classify(eps: f64, c: f64) -> Result<SolitonSpec> {
    if c == 0.0 {
        return Err(Error::ZeroC);
    }
    if !c.is_finite() {
        return Err(Error::Param(format!("soliton constant must be finite, got {c}")));
    }
    if eps != 1.0 && eps != -1.0 {
        return Err(Error::Param(format!("causal sign must be +1 or -1, got {eps}")));
    }
    let kind = if eps * c < 0.0 {
        SolitonKind::SelfShrinker
    } else {
        SolitonKind::SelfExpander
    };
    Ok(SolitonSpec { c, eps, kind })
}

/// `C <N, X> H + 1`; orientation-invariant.
pub fn residual_direct(surf: &RuledSurface, c: f64, s: f64, t: f64, tol: &Tolerances) -> Result<f64> {
    let g = surf.geometry(s, t, tol.tau_nd)?;
    if g.h.abs() <= tol.tau_h {
        return Err(Error::ZeroMeanCurvature { s, t, h: g.h });
    }
    Ok(c * g.normal.n.dot(&g.partials.x) * g.h + 1.0)
}

/// `C (X_s,X_t,X) [G (X_s,X_t,X_ss) - 2F (X_s,X_t,X_st)] - 2 (EG - F^2)^2`.
///
/// Polynomial in the frame, so defined at degenerate points too. Equals
/// `-2 (EG - F^2)^2` times [`residual_direct`] wherever both exist.
pub fn residual_poly(surf: &RuledSurface, c: f64, s: f64, t: f64) -> Result<f64> {
    let p = surf.partials(s, t)?;
    let ff = p.first_form();
    let bracket = ff.g * mixed(&p.xs, &p.xt, &p.xss) - 2.0 * ff.f * mixed(&p.xs, &p.xt, &p.xst);
    Ok(c * mixed(&p.xs, &p.xt, &p.x) * bracket - 2.0 * ff.disc * ff.disc)
}

/// Coefficients `(c0, c1)` of the degree-one polynomial governing a ruled
/// surface with lightlike director:
/// `c0 = C (g',b,g)(g',b,b') + <g',b>^3`, `c1 = C (b',b,g)(g',b,b')`.
///
/// For every `t`, `residual_poly(s, t) = -2F (c0 + c1 t)` with `F = <g', b>`.
pub fn lightlike_poly_coeffs(gamma: &Curve, beta: &Curve, c: f64, s: f64, tau_c: f64) -> Result<(f64, f64)> {
    let [g, g1, _] = gamma.frame2(s);
    let [b, b1, _] = beta.frame2(s);
    let kind = b.causal_type(tau_c);
    if kind != CausalType::Lightlike {
        return Err(Error::Causal(format!(
            "director at s = {s} is {kind:?}, expected Lightlike (<b,b> = {})",
            b.sq()
        )));
    }
    let m = mixed(&g1, &b, &b1);
    let f = g1.dot(&b);
    Ok((c * mixed(&g1, &b, &g) * m + f * f * f, c * mixed(&b1, &b, &g) * m))
}

/// Relative tolerance used to validate the orthogonal-parametrization
/// hypotheses.
pub const ORTHO_TOL: f64 = 1e-9;

/// Coefficients `A0..A4` of the quartic in `t` for an orthogonal
/// parametrization (`<b, g'> = 0`, `<b, b> = delta`).
///
/// For every `t`, `residual_poly(s, t) = -(A0 + A1 t + ... + A4 t^4)`.
pub fn orthogonal_poly_coeffs(surf: &RuledSurface, c: f64, delta: f64, s: f64) -> Result<[f64; 5]> {
    if delta != 1.0 && delta != -1.0 {
        return Err(Error::Param(format!("delta must be +1 or -1, got {delta}")));
    }
    surf.s_domain.check("s", s)?;
    let [g, g1, g2] = surf.gamma.frame2(s);
    let [b, b1, b2] = surf.beta.frame2(s);
    let ortho = b.dot(&g1);
    if ortho.abs() > ORTHO_TOL * (1.0 + b.max_abs() * g1.max_abs()) {
        return Err(Error::Param(format!("parametrization not orthogonal at s = {s}: <b, g'> = {ortho}")));
    }
    if (b.sq() - delta).abs() > ORTHO_TOL * (1.0 + b.max_abs() * b.max_abs()) {
        return Err(Error::Param(format!("<b, b> = {} differs from delta = {delta} at s = {s}", b.sq())));
    }
    let gg = g1.sq();
    let gb = g1.dot(&b1);
    let bb = b1.sq();
    let (m_gbg, m_bbg) = (mixed(&g1, &b, &g), mixed(&b1, &b, &g));
    let (m_gbg2, m_bbg2) = (mixed(&g1, &b, &g2), mixed(&b1, &b, &g2));
    let (m_gbb2, m_bbb2) = (mixed(&g1, &b, &b2), mixed(&b1, &b, &b2));
    let cd = c * delta;
    Ok([
        2.0 * gg * gg - cd * m_gbg * m_gbg2,
        8.0 * gg * gb - cd * (m_gbg * m_bbg2 + m_gbg * m_gbb2 + m_bbg * m_gbg2),
        4.0 * bb * gg + 8.0 * gb * gb - cd * (m_gbg * m_bbb2 + m_bbg * m_bbg2 + m_bbg * m_gbb2),
        8.0 * gb * bb - cd * m_bbg * m_bbb2,
        2.0 * bb * bb,
    ])
}

/// Number of `t` nodes used by [`fit_t_polynomial`].
pub const FIT_NODES: usize = 6;

/// Monomial coefficients (degree 4) of `t -> residual_poly(s, t)`, fitted by
/// least squares over [`FIT_NODES`] evenly spaced nodes of the surface's
/// `t` domain.
pub fn fit_t_polynomial(surf: &RuledSurface, c: f64, s: f64) -> Result<[f64; 5]> {
    let dom = surf.t_domain;
    if !(dom.width() > 0.0) {
        return Err(Error::Param("t domain has zero width".into()));
    }
    let (mid, half) = (dom.mid(), 0.5 * dom.width());
    let ts = dom.linspace(FIT_NODES);
    let mut a = DMatrix::zeros(FIT_NODES, 5);
    let mut y = DVector::zeros(FIT_NODES);
    for (i, &t) in ts.iter().enumerate() {
        let u = (t - mid) / half;
        let mut p = 1.0;
        for k in 0..5 {
            a[(i, k)] = p;
            p *= u;
        }
        y[i] = residual_poly(surf, c, s, t)?;
    }
    let sol = a
        .svd(true, true)
        .solve(&y, 1e-14)
        .map_err(|e| Error::Param(format!("polynomial fit failed: {e}")))?;
    // expand sum a_k ((t - mid)/half)^k into powers of t
    let binom = [[1.0, 0.0, 0.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0, 0.0], [1.0, 2.0, 1.0, 0.0, 0.0], [1.0, 3.0, 3.0, 1.0, 0.0], [1.0, 4.0, 6.0, 4.0, 1.0]];
    let mut out = [0.0; 5];
    for k in 0..5 {
        let ak = sol[k] / half.powi(k as i32);
        for j in 0..=k {
            out[j] += ak * binom[k][j] * (-mid).powi((k - j) as i32);
        }
    }
    Ok(out)
}

/// Residuals and geometry at one sample point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub s: f64,
    pub t: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    /// Mean curvature; `NaN` at degenerate points.
    pub h: f64,
    /// Causal sign; `NaN` at degenerate points.
    pub eps: f64,
    /// `NaN` where degenerate or `|H| <= tau_h`.
    pub direct: f64,
    pub poly: f64,
    pub degenerate: bool,
}

impl ResidualReport {
    /// `|poly| / (1 + 2 (EG - F^2)^2)`.
    pub fn poly_scaled(&self) -> f64 {
        let d = self.e * self.g - self.f * self.f;
        self.poly.abs() / (1.0 + 2.0 * d * d)
    }
}

pub fn residual_report(surf: &RuledSurface, c: f64, s: f64, t: f64, tol: &Tolerances) -> Result<ResidualReport> {
    let p = surf.partials(s, t)?;
    let ff = p.first_form();
    let poly = residual_poly(surf, c, s, t)?;
    let mut r = ResidualReport {
        s,
        t,
        e: ff.e,
        f: ff.f,
        g: ff.g,
        h: f64::NAN,
        eps: f64::NAN,
        direct: f64::NAN,
        poly,
        degenerate: true,
    };
    if let (Some(n), Some(h)) = (p.normal(surf.orientation, tol.tau_nd), p.mean_curvature(surf.orientation, tol.tau_nd)) {
        r.degenerate = false;
        r.h = h;
        r.eps = n.eps;
        if h.abs() > tol.tau_h {
            r.direct = c * n.n.dot(&p.x) * h + 1.0;
        }
    }
    Ok(r)
}

/// Residual table over a tensor grid plus maxima.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceCheck {
    pub rows: Vec<ResidualReport>,
    pub max_direct: f64,
    pub max_poly: f64,
    pub max_poly_scaled: f64,
    pub degenerate: usize,
    pub zero_h: usize,
    /// Causal sign when it is the same at every nondegenerate sample.
    pub eps: Option<f64>,
}

impl SurfaceCheck {
    /// Both residual maxima within `tol` (the polynomial one after scaling).
    pub fn passes(&self, tol: f64) -> bool {
        self.max_direct <= tol && self.max_poly_scaled <= tol
    }
}

/// Evaluate the residuals on every `(s, t)` of the grid, row-major in `s`.
pub fn check_grid(surf: &RuledSurface, c: f64, s_nodes: &[f64], t_nodes: &[f64], tol: &Tolerances) -> Result<SurfaceCheck> {
    let mut rows = Vec::with_capacity(s_nodes.len() * t_nodes.len());
    for &s in s_nodes {
        for &t in t_nodes {
            rows.push(residual_report(surf, c, s, t, tol)?);
        }
    }
    let fold = |f: &dyn Fn(&ResidualReport) -> f64| rows.iter().map(f).filter(|v| !v.is_nan()).fold(0.0, f64::max);
    let max_direct = fold(&|r| r.direct.abs());
    let max_poly = fold(&|r| r.poly.abs());
    let max_poly_scaled = fold(&|r| r.poly_scaled());
    let degenerate = rows.iter().filter(|r| r.degenerate).count();
    let zero_h = rows.iter().filter(|r| !r.degenerate && r.direct.is_nan()).count();
    let mut signs = rows.iter().filter(|r| !r.degenerate).map(|r| r.eps);
    let eps = signs.next().and_then(|first| signs.all(|e| e == first).then_some(first));
    Ok(SurfaceCheck {
        rows,
        max_direct,
        max_poly,
        max_poly_scaled,
        degenerate,
        zero_h,
        eps,
    })
}

/// Evenly spaced grid over the surface's own domain.
pub fn check_surface(surf: &RuledSurface, c: f64, s_count: usize, t_count: usize, tol: &Tolerances) -> Result<SurfaceCheck> {
    check_grid(surf, c, &surf.s_domain.linspace(s_count), &surf.t_domain.linspace(t_count), tol)
}
