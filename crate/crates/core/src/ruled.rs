//! Ruled surfaces `X(s, t) = gamma(s) + t beta(s)`: partials, first
//! fundamental form, unit normal and mean curvature.

use crate::curve::{Curve, Interval};
use crate::error::{Error, Result};
use crate::mink::{mixed, LVec3};

/// Default nondegeneracy tolerance, relative to `max(|E|, |F|, |G|)^2`.
pub const DEFAULT_TAU_ND: f64 = 1e-9;
/// Default threshold below which `|H|` counts as zero.
pub const DEFAULT_TAU_H: f64 = 1e-10;

/// Sign applied to `X_s x X_t` when choosing the unit normal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }
}

/// Position and partial derivatives of a parametrized surface at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partials {
    pub x: LVec3,
    pub xs: LVec3,
    pub xt: LVec3,
    pub xss: LVec3,
    pub xst: LVec3,
    pub xtt: LVec3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    /// `EG - F^2`.
    pub disc: f64,
}

impl FirstForm {
    pub fn scale(&self) -> f64 {
        self.e.abs().max(self.f.abs()).max(self.g.abs())
    }

    /// `|EG - F^2| > tau_nd * max(|E|, |F|, |G|)^2`.
    pub fn is_nondegenerate(&self, tau_nd: f64) -> bool {
        let m = self.scale();
        m > 0.0 && self.disc.abs() > tau_nd * m * m
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalData {
    pub n: LVec3,
    /// `<N, N>`: `-1` on spacelike surfaces, `+1` on timelike ones.
    pub eps: f64,
}

/// Everything the residual evaluators need at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointGeometry {
    pub partials: Partials,
    pub form: FirstForm,
    pub normal: NormalData,
    pub h: f64,
}

impl Partials {
    pub fn first_form(&self) -> FirstForm {
        let e = self.xs.sq();
        let f = self.xs.dot(&self.xt);
        let g = self.xt.sq();
        FirstForm {
            e,
            f,
            g,
            disc: e.mul_add(g, -(f * f)),
        }
    }

    /// Unit normal, or `None` on a degenerate point.
    pub fn normal(&self, orientation: Orientation, tau_nd: f64) -> Option<NormalData> {
        let ff = self.first_form();
        if !ff.is_nondegenerate(tau_nd) {
            return None;
        }
        let n = self.xs.cross(&self.xt) * (orientation.sign() / ff.disc.abs().sqrt());
        Some(NormalData {
            n,
            eps: -ff.disc.signum(),
        })
    }

    /// Bracket `G (X_s,X_t,X_ss) - 2F (X_s,X_t,X_st) + E (X_s,X_t,X_tt)`.
    pub fn curvature_bracket(&self, ff: &FirstForm) -> f64 {
        ff.g * mixed(&self.xs, &self.xt, &self.xss) - 2.0 * ff.f * mixed(&self.xs, &self.xt, &self.xst)
            + ff.e * mixed(&self.xs, &self.xt, &self.xtt)
    }

    /// Mean curvature, or `None` on a degenerate point.
    pub fn mean_curvature(&self, orientation: Orientation, tau_nd: f64) -> Option<f64> {
        let ff = self.first_form();
        if !ff.is_nondegenerate(tau_nd) {
            return None;
        }
        let d = ff.disc.abs();
        Some(-0.5 * orientation.sign() * self.curvature_bracket(&ff) / (d * d.sqrt()))
    }
}

/// `X(s, t) = gamma(s) + t beta(s)` on `s_domain x t_domain`.
#[derive(Debug, Clone)]
pub struct RuledSurface {
    pub gamma: Curve,
    pub beta: Curve,
    pub s_domain: Interval,
    pub t_domain: Interval,
    pub orientation: Orientation,
}

impl RuledSurface {
    pub fn new(gamma: Curve, beta: Curve, s_domain: Interval, t_domain: Interval) -> Self {
        RuledSurface {
            gamma,
            beta,
            s_domain,
            t_domain,
            orientation: Orientation::Positive,
        }
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn with_domains(mut self, s_domain: Interval, t_domain: Interval) -> Self {
        self.s_domain = s_domain;
        self.t_domain = t_domain;
        self
    }

    fn check(&self, s: f64, t: f64) -> Result<()> {
        self.s_domain.check("s", s)?;
        self.t_domain.check("t", t)
    }

    /// `X(s, t)` without domain checks.
    pub fn position(&self, s: f64, t: f64) -> LVec3 {
        self.gamma.position(s) + self.beta.position(s) * t
    }

    pub fn partials(&self, s: f64, t: f64) -> Result<Partials> {
        self.check(s, t)?;
        Ok(self.partials_unchecked(s, t))
    }

    pub(crate) fn partials_unchecked(&self, s: f64, t: f64) -> Partials {
        let [g0, g1, g2] = self.gamma.frame2(s);
        let [b0, b1, b2] = self.beta.frame2(s);
        Partials {
            x: g0 + b0 * t,
            xs: g1 + b1 * t,
            xt: b0,
            xss: g2 + b2 * t,
            xst: b1,
            xtt: LVec3::ZERO,
        }
    }

    pub fn first_form(&self, s: f64, t: f64) -> Result<FirstForm> {
        Ok(self.partials(s, t)?.first_form())
    }

    pub fn is_nondegenerate(&self, s: f64, t: f64, tau_nd: f64) -> Result<bool> {
        Ok(self.first_form(s, t)?.is_nondegenerate(tau_nd))
    }

    pub fn unit_normal(&self, s: f64, t: f64, tau_nd: f64) -> Result<NormalData> {
        let p = self.partials(s, t)?;
        p.normal(self.orientation, tau_nd).ok_or_else(|| Error::Degenerate {
            s,
            t,
            disc: p.first_form().disc,
        })
    }

    pub fn mean_curvature(&self, s: f64, t: f64, tau_nd: f64) -> Result<f64> {
        let p = self.partials(s, t)?;
        p.mean_curvature(self.orientation, tau_nd).ok_or_else(|| Error::Degenerate {
            s,
            t,
            disc: p.first_form().disc,
        })
    }

    /// Partials, form, normal and `H` in one pass.
    pub fn geometry(&self, s: f64, t: f64, tau_nd: f64) -> Result<PointGeometry> {
        let partials = self.partials(s, t)?;
        let form = partials.first_form();
        let normal = partials
            .normal(self.orientation, tau_nd)
            .ok_or(Error::Degenerate { s, t, disc: form.disc })?;
        let h = partials
            .mean_curvature(self.orientation, tau_nd)
            .ok_or(Error::Degenerate { s, t, disc: form.disc })?;
        Ok(PointGeometry {
            partials,
            form,
            normal,
            h,
        })
    }
}
