//! Constructors for the classified families of homothetic solitons.

pub mod cylinder;
pub mod lightlike;
pub mod noncyl;

use crate::curve::{Curve, Interval, ScalarFn};
use crate::error::Result;
use crate::jet::VJet;
use crate::ruled::{RuledSurface, DEFAULT_TAU_ND};
use crate::soliton::SolitonSpec;

pub use cylinder::{
    make_cyl_spacelike, make_cyl_timelike, quad_profile_t, Branch, ProfileFunctions, ProfileKind, DEFAULT_QUAD_TOL,
};
pub use lightlike::{make_lightlike_director_circular, make_lightlike_director_quadratic, make_lightlike_expander};
pub use noncyl::make_noncyl_surface;

/// One member of a classified family.
#[derive(Debug, Clone)]
pub enum FamilySpec {
    /// Lightlike rulings; the soliton constant is always 1.
    LightlikeExpander { director: Curve, a: ScalarFn, b: ScalarFn },
    NonCylindrical { c: f64, k1: f64, k2: f64 },
    CylSpacelikeRuling { c: f64, delta: f64, k: f64, sign_t: f64, sign_r: f64 },
    CylTimelikeRuling { c: f64, k: f64, sign_t: f64, sign_r: f64 },
}

impl FamilySpec {
    pub fn tag(&self) -> &'static str {
        match self {
            FamilySpec::LightlikeExpander { .. } => "LightlikeExpander",
            FamilySpec::NonCylindrical { .. } => "NonCylindrical",
            FamilySpec::CylSpacelikeRuling { .. } => "CylSpacelikeRuling",
            FamilySpec::CylTimelikeRuling { .. } => "CylTimelikeRuling",
        }
    }

    /// The family's soliton constant.
    pub fn c(&self) -> f64 {
        match *self {
            FamilySpec::LightlikeExpander { .. } => 1.0,
            FamilySpec::NonCylindrical { c, .. }
            | FamilySpec::CylSpacelikeRuling { c, .. }
            | FamilySpec::CylTimelikeRuling { c, .. } => c,
        }
    }

    /// Build the surface on `s_domain x t_domain`.
    pub fn build(&self, s_domain: Interval, t_domain: Interval, quad_tol: f64) -> Result<(RuledSurface, SolitonSpec)> {
        match self {
            FamilySpec::LightlikeExpander { director, a, b } => make_lightlike_expander(director, a, b, s_domain, t_domain),
            &FamilySpec::NonCylindrical { c, k1, k2 } => make_noncyl_surface(c, k1, k2, s_domain, t_domain),
            &FamilySpec::CylSpacelikeRuling { c, delta, k, sign_t, sign_r } => {
                make_cyl_spacelike(c, delta, k, sign_t, sign_r, s_domain, t_domain, quad_tol)
            }
            &FamilySpec::CylTimelikeRuling { c, k, sign_t, sign_r } => {
                make_cyl_timelike(c, k, sign_t, sign_r, s_domain, t_domain, quad_tol)
            }
        }
    }
}

/// Push the base curve along the fixed normal `N(s_c, t_c)` by a Gaussian
/// bump `amplitude * exp(-((s - s_c)/width)^2)`. The result is still ruled.
pub fn bump_base_curve(surf: &RuledSurface, s_c: f64, t_c: f64, amplitude: f64, width: f64) -> Result<RuledSurface> {
    let n = surf.unit_normal(s_c, t_c, DEFAULT_TAU_ND)?.n;
    let g = surf.gamma.clone();
    let gamma = Curve::analytic(g.domain(), g.max_order(), move |s| {
        let u = (s - s_c) / width;
        let w = (-(u * u)).exp() * amplitude;
        g.jet(s) + VJet::constant(n).scale(w)
    });
    Ok(RuledSurface { gamma, ..surf.clone() })
}

/// A 5% bump of the base curve at the centre of the domain: amplitude
/// `0.05 max(1, |gamma(s_c)|)` and width a quarter of the `s` range.
pub fn standard_bump(surf: &RuledSurface) -> Result<RuledSurface> {
    let (s_c, t_c) = (surf.s_domain.mid(), surf.t_domain.mid());
    let amp = 0.05 * surf.gamma.position(s_c).euclid_norm().max(1.0);
    bump_base_curve(surf, s_c, t_c, amp, 0.25 * surf.s_domain.width())
}
