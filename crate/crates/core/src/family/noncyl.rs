//! Non-cylindrical ruled surfaces with director `beta = (1, s, s)` and
//! `u = y - z` solving `C u u'' = 8 u'^2`.

use crate::curve::{Curve, Interval, ScalarFn};
use crate::error::{Error, Result};
use crate::jet::{Jet, VJet, JET_ORDER};
use crate::ruled::{RuledSurface, DEFAULT_TAU_ND};
use crate::soliton::{classify, SolitonSpec};

/// Parameters of the family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonCylParams {
    pub c: f64,
    pub k1: f64,
    pub k2: f64,
}

impl NonCylParams {
    /// Validate the constants and that the power base `(C-8) k1 s / C` is
    /// positive on `s_domain` (not needed when `C = 8`).
    pub fn check(&self, s_domain: &Interval) -> Result<()> {
        let NonCylParams { c, k1, k2 } = *self;
        if c == 0.0 {
            return Err(Error::ZeroC);
        }
        if !(c.is_finite() && k1.is_finite() && k2.is_finite()) {
            return Err(Error::Param("C, k1, k2 must be finite".into()));
        }
        if k1 == 0.0 {
            return Err(Error::Param("k1 must be nonzero".into()));
        }
        if c != 8.0 {
            let q = (c - 8.0) * k1 / c;
            for s in [s_domain.lo, s_domain.hi] {
                if !(q * s > 0.0) {
                    return Err(Error::Param(format!(
                        "(C-8) k1 s / C = {} must be positive on the s domain (fails at s = {s})",
                        q * s
                    )));
                }
            }
        }
        Ok(())
    }

    /// `u(s) = y - z`.
    pub fn u(&self) -> ScalarFn {
        let NonCylParams { c, k1, .. } = *self;
        if c == 8.0 {
            ScalarFn::new(move |s| (s * k1).exp())
        } else {
            let q = (c - 8.0) * k1 / c;
            let p = c / (c - 8.0);
            ScalarFn::new(move |s| (s * q).powf(p))
        }
    }

    /// First coordinate of the base curve, `x' = -s u'`.
    pub fn x(&self) -> ScalarFn {
        let NonCylParams { c, k1, k2 } = *self;
        if c == 8.0 {
            ScalarFn::new(move |s| -((s * k1).exp() * (s - 1.0 / k1)) + k2)
        } else if c == 4.0 {
            let q = (c - 8.0) * k1 / c;
            ScalarFn::new(move |s| (s * q).ln() / q + k2)
        } else {
            let q = (c - 8.0) * k1 / c;
            let p = c / (c - 8.0);
            let lead = -c / (2.0 * c - 8.0) / q;
            ScalarFn::new(move |s| (s * q).powf(p + 1.0) * lead + k2)
        }
    }

    /// Base curve `(x, ((s^2 + 1)/2) u + s x, y - u)`.
    pub fn gamma(&self, s_domain: Interval) -> Curve {
        let (u, x) = (self.u(), self.x());
        Curve::analytic(s_domain, JET_ORDER, move |s| {
            let (uj, xj) = (u.jet(s), x.jet(s));
            let y = (s * s + 1.0) * 0.5 * uj + s * xj;
            VJet::new(xj, y, y - uj)
        })
    }
}

/// The director `(1, s, s)`.
pub fn straight_director(s_domain: Interval) -> Curve {
    Curve::analytic(s_domain, JET_ORDER, |s| VJet::new(Jet::constant(1.0), s, s))
}

/// Surface `X = gamma + t (1, s, s)`. The causal sign in the returned spec is
/// the one at the centre of the domain; it can change across the surface.
pub fn make_noncyl_surface(
    c: f64,
    k1: f64,
    k2: f64,
    s_domain: Interval,
    t_domain: Interval,
) -> Result<(RuledSurface, SolitonSpec)> {
    let params = NonCylParams { c, k1, k2 };
    params.check(&s_domain)?;
    let surface = RuledSurface::new(params.gamma(s_domain), straight_director(s_domain), s_domain, t_domain);
    let (sm, tm) = (s_domain.mid(), t_domain.mid());
    let eps = surface.unit_normal(sm, tm, DEFAULT_TAU_ND)?.eps;
    Ok((surface, classify(eps, c)?))
}
