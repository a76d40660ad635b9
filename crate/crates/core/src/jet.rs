//! Truncated Taylor arithmetic.
//!
//! A [`Jet`] carries a value together with its first four derivatives with
//! respect to a single parameter. Arithmetic propagates them with the Leibniz
//! rule and elementary functions with Faa di Bruno's formula, so every curve
//! built from jets has exact (to rounding) derivatives up to order four.
//!
//! Slots that are not meaningful (for instance after [`Jet::derivative`]
//! drops one order) hold `NaN`. Order `n` of any result only reads orders
//! `<= n` of its inputs, so an invalid top slot never contaminates the lower
//! ones.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::mink::LVec3;

/// Highest derivative order carried by a jet.
pub const JET_ORDER: usize = 4;

const BINOM: [[f64; 5]; 5] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0, 0.0],
    [1.0, 3.0, 3.0, 1.0, 0.0],
    [1.0, 4.0, 6.0, 4.0, 1.0],
];

/// Value and derivatives `[f, f', f'', f''', f'''']` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet(pub [f64; 5]);

impl Jet {
    pub const fn constant(c: f64) -> Self {
        Jet([c, 0.0, 0.0, 0.0, 0.0])
    }

    /// The independent variable evaluated at `s`.
    pub const fn variable(s: f64) -> Self {
        Jet([s, 1.0, 0.0, 0.0, 0.0])
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.0[0]
    }

    #[inline]
    pub fn d(&self, order: usize) -> f64 {
        self.0[order]
    }

    /// Jet of the derivative. The top slot becomes `NaN`.
    pub fn derivative(self) -> Self {
        let a = self.0;
        Jet([a[1], a[2], a[3], a[4], f64::NAN])
    }

    /// Compose an outer function given its derivatives `[g, g', .., g'''']`
    /// at `self.value()`.
    pub fn compose(self, g: [f64; 5]) -> Self {
        let u = self.0;
        let (u1, u2, u3, u4) = (u[1], u[2], u[3], u[4]);
        Jet([
            g[0],
            g[1] * u1,
            g[1] * u2 + g[2] * u1 * u1,
            g[1] * u3 + 3.0 * g[2] * u1 * u2 + g[3] * u1 * u1 * u1,
            g[1] * u4
                + g[2] * (4.0 * u1 * u3 + 3.0 * u2 * u2)
                + 6.0 * g[3] * u1 * u1 * u2
                + g[4] * u1 * u1 * u1 * u1,
        ])
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose([s, c, -s, -c, s])
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose([c, -s, -c, s, c])
    }

    pub fn sinh(self) -> Self {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        self.compose([s, c, s, c, s])
    }

    pub fn cosh(self) -> Self {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        self.compose([c, s, c, s, c])
    }

    pub fn exp(self) -> Self {
        let e = self.value().exp();
        self.compose([e; 5])
    }

    /// Natural logarithm; `NaN` for non-positive values.
    pub fn ln(self) -> Self {
        let u = self.value();
        let r = 1.0 / u;
        self.compose([u.ln(), r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    /// Real power `u^p` for `u > 0`.
    pub fn powf(self, p: f64) -> Self {
        let u = self.value();
        let mut g = [0.0; 5];
        let mut coef = 1.0;
        for (n, slot) in g.iter_mut().enumerate() {
            *slot = coef * u.powf(p - n as f64);
            coef *= p - n as f64;
        }
        self.compose(g)
    }

    /// Integer power, valid for any sign of the base.
    pub fn powi(self, n: i32) -> Self {
        let mut out = Jet::constant(1.0);
        for _ in 0..n.unsigned_abs() {
            out = out * self;
        }
        if n < 0 {
            out.recip()
        } else {
            out
        }
    }

    pub fn sqrt(self) -> Self {
        self.powf(0.5)
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.value();
        self.compose([
            r,
            -r * r,
            2.0 * r * r * r,
            -6.0 * r * r * r * r,
            24.0 * r * r * r * r * r,
        ])
    }

    pub fn scale(self, k: f64) -> Self {
        Jet(self.0.map(|a| a * k))
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let (a, b) = (self.0, o.0);
        Jet([a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3], a[4] + b[4]])
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let (a, b) = (self.0, o.0);
        let mut c = [0.0; 5];
        for (n, slot) in c.iter_mut().enumerate() {
            *slot = (0..=n).map(|k| BINOM[n][k] * a[k] * b[n - k]).sum();
        }
        Jet(c)
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, k: f64) -> Jet {
        let mut a = self.0;
        a[0] += k;
        Jet(a)
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, k: f64) -> Jet {
        self + (-k)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, k: f64) -> Jet {
        self.scale(k)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, j: Jet) -> Jet {
        j.scale(self)
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, k: f64) -> Jet {
        self.scale(1.0 / k)
    }
}

/// A vector-valued jet: one [`Jet`] per coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VJet {
    pub x: Jet,
    pub y: Jet,
    pub z: Jet,
}

impl VJet {
    pub const fn new(x: Jet, y: Jet, z: Jet) -> Self {
        VJet { x, y, z }
    }

    /// A vector that does not depend on the parameter.
    pub fn constant(v: LVec3) -> Self {
        VJet::new(Jet::constant(v.x), Jet::constant(v.y), Jet::constant(v.z))
    }

    /// The `order`-th derivative as a vector.
    #[inline]
    pub fn at(&self, order: usize) -> LVec3 {
        LVec3::new(self.x.0[order], self.y.0[order], self.z.0[order])
    }

    pub fn derivative(self) -> Self {
        VJet::new(self.x.derivative(), self.y.derivative(), self.z.derivative())
    }

    /// Reinterpret `self`, taken at the variable `s.value()`, as a function
    /// composed with the jet `s`.
    pub fn compose(self, s: Jet) -> Self {
        VJet::new(s.compose(self.x.0), s.compose(self.y.0), s.compose(self.z.0))
    }

    pub fn scale(self, k: Jet) -> Self {
        VJet::new(self.x * k, self.y * k, self.z * k)
    }

    /// Lorentzian inner product as a scalar jet.
    pub fn dot(self, o: VJet) -> Jet {
        self.x * o.x + self.y * o.y - self.z * o.z
    }
}

impl Add for VJet {
    type Output = VJet;
    fn add(self, o: VJet) -> VJet {
        VJet::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for VJet {
    type Output = VJet;
    fn sub(self, o: VJet) -> VJet {
        VJet::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for VJet {
    type Output = VJet;
    fn neg(self) -> VJet {
        VJet::new(-self.x, -self.y, -self.z)
    }
}
