#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use ruled_imcf::curve::{Curve, Interval, ScalarFn};
use ruled_imcf::family::lightlike::circular_director_reversed;
use ruled_imcf::family::{
    make_cyl_spacelike, make_cyl_timelike, make_lightlike_director_quadratic, make_lightlike_expander,
    make_noncyl_surface, DEFAULT_QUAD_TOL,
};
use ruled_imcf::jet::{Jet, VJet};
use ruled_imcf::mink::LVec3;
use ruled_imcf::ruled::RuledSurface;
use ruled_imcf::soliton::SolitonSpec;

pub fn iv(a: f64, b: f64) -> Interval {
    Interval::new(a, b).unwrap()
}

/// How the `t`-polynomial of a family's residual is known in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coeffs {
    Orthogonal { delta: f64 },
    Lightlike,
}

pub struct Case {
    pub name: &'static str,
    pub surface: RuledSurface,
    pub spec: SolitonSpec,
    pub coeffs: Coeffs,
}

pub fn circle() -> Case {
    let (surface, spec) = make_cyl_timelike(2.0, 1.0, 1.0, 1.0, iv(-3.1, 3.1), iv(-1.0, 1.0), DEFAULT_QUAD_TOL).unwrap();
    Case { name: "circle cylinder C=2 k=1", surface, spec, coeffs: Coeffs::Orthogonal { delta: -1.0 } }
}

pub fn hyperbola() -> Case {
    let (surface, spec) = make_cyl_spacelike(2.0, 1.0, 1.0, 1.0, 1.0, iv(-2.0, 2.0), iv(-1.0, 1.0), DEFAULT_QUAD_TOL).unwrap();
    Case { name: "hyperbola cylinder C=2 delta=1 k=1", surface, spec, coeffs: Coeffs::Orthogonal { delta: 1.0 } }
}

pub fn timelike_hyperbola() -> Case {
    let (surface, spec) = make_cyl_spacelike(2.0, -1.0, -1.0, 1.0, 1.0, iv(-2.0, 2.0), iv(-1.0, 1.0), DEFAULT_QUAD_TOL).unwrap();
    Case { name: "hyperbola cylinder C=2 delta=-1 k=-1", surface, spec, coeffs: Coeffs::Orthogonal { delta: 1.0 } }
}

pub fn cyl_spacelike_c1() -> Case {
    let (surface, spec) = make_cyl_spacelike(1.0, 1.0, 1.0, 1.0, 1.0, iv(-2.0, 2.0), iv(-1.0, 1.0), DEFAULT_QUAD_TOL).unwrap();
    Case { name: "spacelike ruling C=1 delta=1 k=1", surface, spec, coeffs: Coeffs::Orthogonal { delta: 1.0 } }
}

pub fn spiral_c4() -> Case {
    let (surface, spec) = make_cyl_timelike(4.0, 1.0, 1.0, 1.0, iv(-3.0, 3.0), iv(-1.0, 1.0), DEFAULT_QUAD_TOL).unwrap();
    Case { name: "timelike ruling C=4 k=1", surface, spec, coeffs: Coeffs::Orthogonal { delta: -1.0 } }
}

pub fn spiral_c1() -> Case {
    let (surface, spec) = make_cyl_timelike(1.0, 25.0, 1.0, 1.0, iv(-3.5, 3.5), iv(-1.0, 1.0), DEFAULT_QUAD_TOL).unwrap();
    Case { name: "timelike ruling C=1 k=25", surface, spec, coeffs: Coeffs::Orthogonal { delta: -1.0 } }
}

pub fn noncyl_c9() -> Case {
    let (surface, spec) = make_noncyl_surface(9.0, 9.0, 0.0, iv(0.5, 2.0), iv(-1.0, 1.0)).unwrap();
    Case { name: "non-cylindrical C=9 k1=9 k2=0", surface, spec, coeffs: Coeffs::Orthogonal { delta: 1.0 } }
}

pub fn noncyl_c8() -> Case {
    let (surface, spec) = make_noncyl_surface(8.0, 1.0, 0.0, iv(-1.0, 1.0), iv(-1.0, 1.0)).unwrap();
    Case { name: "non-cylindrical C=8 k1=1 k2=0", surface, spec, coeffs: Coeffs::Orthogonal { delta: 1.0 } }
}

pub fn lightlike_quadratic() -> Case {
    let beta = make_lightlike_director_quadratic(1.0).unwrap();
    let a = ScalarFn::new(|s| s);
    let b = ScalarFn::polynomial(vec![1.0, 0.0, 1.0]);
    let (surface, spec) = make_lightlike_expander(&beta, &a, &b, iv(-2.0, 2.0), iv(-1.0, 1.0)).unwrap();
    Case { name: "lightlike quadratic director a=s b=s^2+1", surface, spec, coeffs: Coeffs::Lightlike }
}

pub fn lightlike_circular() -> Case {
    let a = ScalarFn::new(|s| s.cos());
    let b = ScalarFn::new(|s| s.sin() * s.sin() + 1.0);
    let (surface, spec) =
        make_lightlike_expander(&circular_director_reversed(), &a, &b, iv(0.0, std::f64::consts::TAU), iv(-1.0, 1.0)).unwrap();
    Case { name: "lightlike circular director a=cos s b=1+sin^2 s", surface, spec, coeffs: Coeffs::Lightlike }
}

/// Every family member used by the suites.
pub fn all_cases() -> Vec<Case> {
    vec![
        circle(),
        hyperbola(),
        timelike_hyperbola(),
        cyl_spacelike_c1(),
        spiral_c4(),
        spiral_c1(),
        noncyl_c9(),
        noncyl_c8(),
        lightlike_quadratic(),
        lightlike_circular(),
    ]
}

/// The members that are genuine solitons.
pub fn soliton_cases() -> Vec<Case> {
    all_cases().into_iter().filter(|c| !c.name.starts_with("non-cylindrical")).collect()
}

fn rand_poly_curve(rng: &mut ChaCha8Rng) -> Curve {
    let c: Vec<[f64; 4]> = (0..3).map(|_| [0; 4].map(|_| rng.gen_range(-1.0..1.0))).collect();
    let w: [f64; 3] = [0; 3].map(|_| rng.gen_range(0.5..2.0));
    Curve::analytic(Interval::unbounded(), 4, move |s| {
        let comp = |k: usize| s * c[k][1] + (s * s) * c[k][2] + (s * w[k]).sin() * c[k][3] + c[k][0];
        VJet::new(comp(0), comp(1), comp(2))
    })
}

/// Random ruled surface with `<beta, gamma'> = 0` and `<beta, beta> = delta`.
/// `beta` is the normalized `gamma' x w` for a random constant `w`.
pub fn random_orthogonal(rng: &mut ChaCha8Rng) -> (RuledSurface, f64) {
    loop {
        let gamma = rand_poly_curve(rng);
        let w = LVec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let dom = iv(-0.5, 0.5);
        let samples: Vec<f64> = dom.linspace(11).iter().map(|&s| gamma.eval(s, 1).unwrap().cross(&w).sq()).collect();
        let sign = samples[0].signum();
        if samples.iter().any(|v| v.signum() != sign || v.abs() < 0.05) {
            continue;
        }
        let g = gamma.clone();
        let beta = Curve::analytic(Interval::unbounded(), 3, move |s| {
            let sv = Jet::variable(s.value());
            let d = g.jet(sv).derivative();
            let v = VJet::new(
                d.y * w.z - d.z * w.y,
                d.z * w.x - d.x * w.z,
                -(d.x * w.y - d.y * w.x),
            );
            let norm = (v.dot(v) * sign).sqrt();
            v.scale(norm.recip()).compose(s)
        });
        return (RuledSurface::new(gamma, beta, dom, iv(-1.0, 1.0)), sign);
    }
}

/// Random ruled surface with a lightlike director `rho (cos th, sin th, 1)`.
pub fn random_lightlike(rng: &mut ChaCha8Rng) -> RuledSurface {
    let gamma = rand_poly_curve(rng);
    let (r0, r1, t0, t1, t2) = (
        rng.gen_range(0.5..1.5),
        rng.gen_range(-0.5..0.5),
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    );
    let beta = Curve::analytic(Interval::unbounded(), 4, move |s| {
        let rho = s * r1 + r0;
        let th = s * t1 + (s * s) * t2 + t0;
        VJet::new(rho * th.cos(), rho * th.sin(), rho)
    });
    RuledSurface::new(gamma, beta, iv(-0.5, 0.5), iv(-1.0, 1.0))
}
