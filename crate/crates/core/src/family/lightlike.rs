//! Timelike self-expanders with lightlike rulings: `gamma = a beta + b beta'`
//! over a null director with `<beta', beta'> = 1` and `(beta'', beta, beta') = 1`.

use crate::curve::{Curve, Interval, ScalarFn};
use crate::error::{Error, Result};
use crate::jet::{Jet, VJet, JET_ORDER};
use crate::mink::mixed;
use crate::ruled::RuledSurface;
use crate::soliton::{classify, SolitonSpec};

/// Samples used to validate the director hypotheses and the sign of `b`.
pub const HYPOTHESIS_SAMPLES: usize = 201;
/// Relative tolerance for the director hypotheses.
pub const HYPOTHESIS_TOL: f64 = 1e-9;

/// `A s^2 + B s + C` with `A = (0, a0, a0)`, `B = (1, 1, 1)`,
/// `C = (1/(2 a0), 0, 1/(2 a0))`.
pub fn make_lightlike_director_quadratic(a0: f64) -> Result<Curve> {
    if !(a0 > 0.0 && a0.is_finite()) {
        return Err(Error::Param(format!("quadratic director needs a0 > 0, got {a0}")));
    }
    let c0 = 0.5 / a0;
    Ok(Curve::analytic(Interval::unbounded(), JET_ORDER, move |s| {
        let s2 = s * s;
        VJet::new(s + c0, s2 * a0 + s, s2 * a0 + s + c0)
    }))
}

/// `(cos s, sin s, 1)`, already oriented so that `(beta'', beta, beta') = 1`.
pub fn make_lightlike_director_circular() -> Curve {
    Curve::analytic(Interval::unbounded(), JET_ORDER, |s| VJet::new(s.cos(), s.sin(), Jet::constant(1.0)))
}

/// `(-cos s, -sin s, -1)`: the circular director with the opposite
/// orientation, `(beta'', beta, beta') = -1`.
pub fn circular_director_reversed() -> Curve {
    Curve::analytic(Interval::unbounded(), JET_ORDER, |s| {
        VJet::new(-s.cos(), -s.sin(), Jet::constant(-1.0))
    })
}

/// Build `X = a beta + b beta' + t beta` and check the director hypotheses on
/// a sample of `s_domain`.
///
/// A director with `(beta'', beta, beta') = -1` is replaced by `-beta` and
/// `(a, b)` by `(-a, -b)`, which leaves the surface unchanged.
pub fn make_lightlike_expander(
    director: &Curve,
    a: &ScalarFn,
    b: &ScalarFn,
    s_domain: Interval,
    t_domain: Interval,
) -> Result<(RuledSurface, SolitonSpec)> {
    let samples = s_domain.linspace(HYPOTHESIS_SAMPLES);
    let mut orientation = 0.0;
    for &s in &samples {
        let [beta, d1, d2] = director.frame2(s);
        let scale = 1.0 + beta.max_abs().max(d1.max_abs()).max(d2.max_abs()).powi(2);
        if beta.sq().abs() > HYPOTHESIS_TOL * scale {
            return Err(Error::Hypothesis(format!("director is not null at s = {s}: <b, b> = {}", beta.sq())));
        }
        if (d1.sq() - 1.0).abs() > HYPOTHESIS_TOL * scale {
            return Err(Error::Hypothesis(format!("director speed is not 1 at s = {s}: <b', b'> = {}", d1.sq())));
        }
        let m = mixed(&d2, &beta, &d1);
        let sign = if (m - 1.0).abs() <= HYPOTHESIS_TOL * scale * scale {
            1.0
        } else if (m + 1.0).abs() <= HYPOTHESIS_TOL * scale * scale {
            -1.0
        } else {
            return Err(Error::Hypothesis(format!("(b'', b, b') = {m} at s = {s}, expected +1 or -1")));
        };
        if orientation == 0.0 {
            orientation = sign;
        } else if sign != orientation {
            return Err(Error::Hypothesis(format!("(b'', b, b') changes sign near s = {s}")));
        }
    }
    let mut b_sign = 0.0;
    for &s in &samples {
        let v = b.eval(s);
        if v == 0.0 || !v.is_finite() || (b_sign != 0.0 && v.signum() != b_sign) {
            return Err(Error::ZeroB { s });
        }
        b_sign = v.signum();
    }

    let flip = orientation < 0.0;
    let dir = director.clone();
    let beta = if flip {
        let d = dir.clone();
        Curve::analytic(s_domain, dir.max_order(), move |s| -d.jet(s))
    } else {
        dir.with_domain(s_domain)
    };
    let (af, bf) = if flip { (a.negated(), b.negated()) } else { (a.clone(), b.clone()) };
    let bj = beta.clone();
    let gamma = Curve::analytic(s_domain, beta.max_order() - 1, move |s| {
        let sv = Jet::variable(s.value());
        let v = bj.jet(sv);
        (v.scale(af.jet(sv)) + v.derivative().scale(bf.jet(sv))).compose(s)
    });
    let surface = RuledSurface::new(gamma, beta, s_domain, t_domain);
    Ok((surface, classify(1.0, 1.0)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mink::LVec3;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn quadratic_director_examples() {
        let b = make_lightlike_director_quadratic(1.0).unwrap();
        assert_eq!(b.position(0.0), LVec3::new(0.5, 0.0, 0.5));
        assert_eq!(b.position(0.0).sq(), 0.0);
        assert_eq!(b.position(2.0), LVec3::new(2.5, 6.0, 6.5));
        for a0 in [0.25, 1.0, 3.0] {
            let b = make_lightlike_director_quadratic(a0).unwrap();
            for s in [-1.3, 0.0, 2.0] {
                let [p, d1, d2] = b.frame2(s);
                assert!(p.sq().abs() < 1e-12);
                assert!((d1.sq() - 1.0).abs() < 1e-12);
                assert!((mixed(&d2, &p, &d1) - 1.0).abs() < 1e-12);
            }
        }
        assert!(make_lightlike_director_quadratic(0.0).is_err());
        assert!(make_lightlike_director_quadratic(-1.0).is_err());
    }

    #[test]
    fn circular_director_examples() {
        let b = make_lightlike_director_circular();
        let r = circular_director_reversed();
        for s in [-2.0, 0.0, 0.9] {
            let [p, d1, d2] = b.frame2(s);
            assert!(p.sq().abs() < 1e-15);
            assert!((d1.sq() - 1.0).abs() < 1e-15);
            assert!((mixed(&d2, &p, &d1) - 1.0).abs() < 1e-15);
            let [p, d1, d2] = r.frame2(s);
            assert!((mixed(&d2, &p, &d1) + 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn reversed_director_gives_same_surface() {
        let a = ScalarFn::new(|s| s.cos());
        let b = ScalarFn::new(|s| s.sin() * s.sin() + 1.0);
        let (raw, _) = make_lightlike_expander(&circular_director_reversed(), &a, &b, iv(-3.0, 3.0), iv(-1.0, 1.0)).unwrap();
        for (s, t) in [(0.0, 0.0), (1.2, -0.7), (-2.5, 0.4)] {
            let rb = circular_director_reversed();
            let want = rb.position(s) * (a.eval(s) + t) + rb.eval(s, 1).unwrap() * b.eval(s);
            let got = raw.position(s, -t);
            assert!((got - want).max_abs() < 1e-14, "{got} vs {want}");
            let [p, d1, d2] = raw.beta.frame2(s);
            assert!((mixed(&d2, &p, &d1) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn derivative_base_has_constant_f() {
        let beta = make_lightlike_director_quadratic(1.0).unwrap();
        let (surf, spec) = make_lightlike_expander(
            &beta,
            &ScalarFn::constant(0.0),
            &ScalarFn::constant(1.0),
            iv(-2.0, 2.0),
            iv(-1.0, 1.0),
        )
        .unwrap();
        assert_eq!(spec.c, 1.0);
        for s in [-2.0, 0.0, 1.5] {
            assert!((surf.first_form(s, 0.5).unwrap().f + 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn hypotheses_are_enforced() {
        let spacelike = Curve::analytic(Interval::unbounded(), 4, |s| VJet::new(s.cos(), s.sin(), Jet::constant(0.0)));
        let one = ScalarFn::constant(1.0);
        let e = make_lightlike_expander(&spacelike, &one, &one, iv(0.0, 1.0), iv(-1.0, 1.0)).unwrap_err();
        assert!(matches!(e, Error::Hypothesis(ref m) if m.contains("not null")));
        let slow = Curve::analytic(Interval::unbounded(), 4, |s| {
            let h = s * 0.5;
            VJet::new(h.cos(), h.sin(), Jet::constant(1.0))
        });
        let e = make_lightlike_expander(&slow, &one, &one, iv(0.0, 1.0), iv(-1.0, 1.0)).unwrap_err();
        assert!(matches!(e, Error::Hypothesis(ref m) if m.contains("speed")));
        let beta = make_lightlike_director_quadratic(1.0).unwrap();
        let b = ScalarFn::new(|s| s - 0.5);
        assert!(matches!(
            make_lightlike_expander(&beta, &one, &b, iv(0.0, 1.0), iv(-1.0, 1.0)),
            Err(Error::ZeroB { .. })
        ));
    }
}
