//! Parametrized curves in L^3 with exact derivatives, plus a finite
//! difference oracle and arc-length diagnostics.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jet::{Jet, VJet, JET_ORDER};
use crate::mink::LVec3;

/// Default step for [`fd_derivative`].
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Closed parameter interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::Param(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    /// The whole real line.
    pub const fn unbounded() -> Self {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.lo && s <= self.hi
    }

    pub fn contains_interval(&self, o: &Interval) -> bool {
        o.lo >= self.lo && o.hi <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// `n >= 2` evenly spaced nodes including both endpoints.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        match n {
            0 => vec![],
            1 => vec![self.mid()],
            _ => (0..n)
                .map(|i| {
                    if i == n - 1 {
                        self.hi
                    } else {
                        self.lo + self.width() * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }

    pub(crate) fn check(&self, what: &'static str, value: f64) -> Result<()> {
        if self.contains(value) {
            Ok(())
        } else {
            Err(Error::Domain {
                what,
                value,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

type ScalarJetFn = dyn Fn(Jet) -> Jet + Send + Sync;
type CurveJetFn = dyn Fn(Jet) -> VJet + Send + Sync;

/// A smooth real function of the curve parameter, evaluated on jets.
#[derive(Clone)]
pub struct ScalarFn {
    f: Arc<ScalarJetFn>,
}

impl ScalarFn {
    pub fn new(f: impl Fn(Jet) -> Jet + Send + Sync + 'static) -> Self {
        ScalarFn { f: Arc::new(f) }
    }

    pub fn constant(c: f64) -> Self {
        ScalarFn::new(move |_| Jet::constant(c))
    }

    /// `c0 + c1 s + c2 s^2 + ...`
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        ScalarFn::new(move |s| {
            coeffs
                .iter()
                .rev()
                .fold(Jet::constant(0.0), |acc, &c| acc * s + c)
        })
    }

    pub fn jet(&self, s: Jet) -> Jet {
        (self.f)(s)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.jet(Jet::constant(s)).value()
    }

    pub fn eval_jet(&self, s: f64) -> Jet {
        self.jet(Jet::variable(s))
    }

    /// `-self`.
    pub fn negated(&self) -> Self {
        let f = self.f.clone();
        ScalarFn::new(move |s| -f(s))
    }
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ScalarFn")
    }
}

/// How the derivatives of a curve are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeKind {
    /// Exact derivatives carried by jets.
    Analytic,
    /// Centered differences of positions with the given step.
    FiniteDifference(f64),
}

/// A smooth parametrized map `s -> L^3` on a closed interval.
#[derive(Clone)]
pub struct Curve {
    f: Arc<CurveJetFn>,
    domain: Interval,
    max_order: usize,
    kind: DerivativeKind,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Curve")
            .field("domain", &self.domain)
            .field("max_order", &self.max_order)
            .field("kind", &self.kind)
            .finish()
    }
}

impl Curve {
    /// Curve with exact derivatives up to `max_order` (at least 2).
    pub fn analytic(
        domain: Interval,
        max_order: usize,
        f: impl Fn(Jet) -> VJet + Send + Sync + 'static,
    ) -> Self {
        assert!((2..=JET_ORDER).contains(&max_order), "max_order must lie in 2..=4");
        Curve {
            f: Arc::new(f),
            domain,
            max_order,
            kind: DerivativeKind::Analytic,
        }
    }

    /// Curve known only through positions; derivatives are centered
    /// differences with step `h`. Points whose stencil leaves the domain are
    /// evaluated anyway, so keep `h` small relative to the domain margin.
    pub fn from_positions(
        domain: Interval,
        h: f64,
        f: impl Fn(f64) -> LVec3 + Send + Sync + 'static,
    ) -> Self {
        let pos = Arc::new(f);
        Curve {
            f: Arc::new(move |s: Jet| {
                let s0 = s.value();
                let p = |k: f64| pos(s0 + k * h);
                let (m2, m1, c, p1, p2) = (p(-2.0), p(-1.0), p(0.0), p(1.0), p(2.0));
                let d1 = (p1 - m1) * (0.5 / h);
                let d2 = (p1 - c * 2.0 + m1) * (1.0 / (h * h));
                let d3 = (p2 - p1 * 2.0 + m1 * 2.0 - m2) * (0.5 / (h * h * h));
                let comp = |get: fn(&LVec3) -> f64| {
                    s.compose([get(&c), get(&d1), get(&d2), get(&d3), f64::NAN])
                };
                VJet::new(comp(|v| v.x), comp(|v| v.y), comp(|v| v.z))
            }),
            domain,
            max_order: 3,
            kind: DerivativeKind::FiniteDifference(h),
        }
    }

    /// Straight line `p + s v`.
    pub fn line(domain: Interval, p: LVec3, v: LVec3) -> Self {
        Curve::analytic(domain, JET_ORDER, move |s| {
            VJet::new(s * v.x + p.x, s * v.y + p.y, s * v.z + p.z)
        })
    }

    /// Constant curve.
    pub fn constant(domain: Interval, v: LVec3) -> Self {
        Curve::analytic(domain, JET_ORDER, move |_| VJet::constant(v))
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn derivative_kind(&self) -> DerivativeKind {
        self.kind
    }

    /// Same map restricted (or extended) to another interval.
    pub fn with_domain(&self, domain: Interval) -> Self {
        Curve {
            domain,
            ..self.clone()
        }
    }

    /// Evaluate on a parameter jet; used to compose curves.
    pub fn jet(&self, s: Jet) -> VJet {
        (self.f)(s)
    }

    /// All carried derivatives at `s`.
    pub fn jet_at(&self, s: f64) -> VJet {
        self.jet(Jet::variable(s))
    }

    /// The `order`-th derivative at `s`.
    pub fn eval(&self, s: f64, order: usize) -> Result<LVec3> {
        if order > self.max_order {
            return Err(Error::OrderUnavailable {
                order,
                max: self.max_order,
            });
        }
        Ok(self.jet_at(s).at(order))
    }

    pub fn position(&self, s: f64) -> LVec3 {
        self.jet(Jet::constant(s)).at(0)
    }

    /// Position and first two derivatives, always available.
    pub fn frame2(&self, s: f64) -> [LVec3; 3] {
        let j = self.jet_at(s);
        [j.at(0), j.at(1), j.at(2)]
    }
}

/// Centered difference of `eval(., order - 1)` with step `h`; error O(h^2).
///
/// The stencil `[s - order*h, s + order*h]` must lie inside the domain;
/// one-sided stencils are refused.
pub fn fd_derivative(c: &Curve, s: f64, order: usize, h: f64) -> Result<LVec3> {
    if !(1..=3).contains(&order) {
        return Err(Error::Param(format!("finite-difference order {order} not in 1..=3")));
    }
    if !(h > 0.0) {
        return Err(Error::Param(format!("finite-difference step must be positive, got {h}")));
    }
    let reach = order as f64 * h;
    let dom = c.domain();
    dom.check("s - order*h", s - reach)?;
    dom.check("s + order*h", s + reach)?;
    let lower = order - 1;
    let fwd = c.eval(s + h, lower)?;
    let bwd = c.eval(s - h, lower)?;
    Ok((fwd - bwd) * (0.5 / h))
}

/// Arc-length diagnostic `<g'(s), g'(s)> - delta_target`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcLengthReport {
    pub s: f64,
    pub defect: f64,
}

pub fn arclength_defect(c: &Curve, s: f64, delta_target: f64) -> Result<ArcLengthReport> {
    c.domain().check("s", s)?;
    let d1 = c.eval(s, 1)?;
    Ok(ArcLengthReport {
        s,
        defect: d1.sq() - delta_target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_circle_yz() -> Curve {
        Curve::analytic(Interval::new(-4.0, 4.0).unwrap(), 4, |s| {
            VJet::new(Jet::constant(0.0), s.cos(), s.sin())
        })
    }

    fn quad_director() -> Curve {
        Curve::analytic(Interval::new(-3.0, 3.0).unwrap(), 4, |s| {
            let s2 = s * s;
            VJet::new(s + 0.5, s2 + s, s2 + s + 0.5)
        })
    }

    #[test]
    fn fd_of_line_is_exact() {
        let c = Curve::line(
            Interval::new(-1.0, 1.0).unwrap(),
            LVec3::E1,
            LVec3::new(0.0, 1.0, 1.0),
        );
        let d = fd_derivative(&c, 0.0, 1, 1e-3).unwrap();
        assert_eq!(d, LVec3::new(0.0, 1.0, 1.0));
        let d = fd_derivative(&c, 0.37, 1, 1e-3).unwrap();
        assert!((d - LVec3::new(0.0, 1.0, 1.0)).max_abs() < 1e-12);
    }

    #[test]
    fn fd_second_derivative_of_circle() {
        let d = fd_derivative(&unit_circle_yz(), 0.0, 2, 1e-4).unwrap();
        assert!((d - LVec3::new(0.0, -1.0, 0.0)).max_abs() < 1e-7);
    }

    #[test]
    fn fd_second_derivative_of_quadratic_director() {
        // exact: beta'' = 2 (0, 1, 1)
        for s in [-1.0, 0.0, 0.6] {
            let d = fd_derivative(&quad_director(), s, 2, 1e-5).unwrap();
            assert!((d - LVec3::new(0.0, 2.0, 2.0)).max_abs() < 1e-6);
        }
    }

    #[test]
    fn fd_refuses_stencil_outside_domain() {
        let c = quad_director();
        assert!(matches!(fd_derivative(&c, 3.0, 1, 1e-5), Err(Error::Domain { .. })));
        assert!(matches!(
            fd_derivative(&c, -3.0 + 1.5e-5, 2, 1e-5),
            Err(Error::Domain { .. })
        ));
        assert!(fd_derivative(&c, 0.0, 4, 1e-5).is_err());
        assert!(fd_derivative(&c, 0.0, 1, 0.0).is_err());
    }

    #[test]
    fn analytic_derivatives_match_fd_oracle() {
        for c in [unit_circle_yz(), quad_director()] {
            for s in c.domain().linspace(100) {
                for k in 1..=2 {
                    let Ok(fd) = fd_derivative(&c, s, k, 1e-5) else { continue };
                    let ex = c.eval(s, k).unwrap();
                    assert!((fd - ex).max_abs() <= 1e-6 * (1.0 + ex.max_abs()));
                }
            }
        }
    }

    #[test]
    fn arclength_examples() {
        let hyp = Curve::analytic(Interval::new(-2.0, 2.0).unwrap(), 4, |s| {
            VJet::new(Jet::constant(0.0), s.sinh(), s.cosh())
        });
        let circ = Curve::analytic(Interval::new(-2.0, 2.0).unwrap(), 4, |s| {
            VJet::new(s.cos(), s.sin(), Jet::constant(0.0))
        });
        let line = Curve::line(Interval::new(-2.0, 2.0).unwrap(), LVec3::ZERO, LVec3::new(0.0, 2.0, 0.0));
        for s in [-1.5, 0.0, 0.7] {
            assert!(arclength_defect(&hyp, s, 1.0).unwrap().defect.abs() < 1e-14);
            assert!(arclength_defect(&circ, s, 1.0).unwrap().defect.abs() < 1e-15);
            assert_eq!(arclength_defect(&line, s, 1.0).unwrap().defect, 3.0);
        }
        assert!(arclength_defect(&line, 5.0, 1.0).is_err());
    }

    #[test]
    fn order_beyond_carried_is_reported() {
        let c = Curve::from_positions(Interval::new(-1.0, 1.0).unwrap(), 1e-4, |s| {
            LVec3::new(s, s * s, 0.0)
        });
        assert!(matches!(c.eval(0.0, 4), Err(Error::OrderUnavailable { .. })));
        let d2 = c.eval(0.2, 2).unwrap();
        assert!((d2 - LVec3::new(0.0, 2.0, 0.0)).max_abs() < 1e-6);
    }

    #[test]
    fn scalar_polynomial_derivatives() {
        let p = ScalarFn::polynomial(vec![1.0, 0.0, 1.0]); // s^2 + 1
        let j = p.eval_jet(1.5);
        assert_eq!(j.0[..4], [3.25, 3.0, 2.0, 0.0]);
        assert_eq!(p.negated().eval(1.5), -3.25);
    }
}
