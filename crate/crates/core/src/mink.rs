//! Linear algebra of Lorentz-Minkowski space: `R^3` with the metric
//! `dx^2 + dy^2 - dz^2`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Default causal classification tolerance on the normalized `<v, v>`.
pub const DEFAULT_TAU_C: f64 = 1e-10;

/// A vector of L^3.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LVec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Causal character of a vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausalType {
    Spacelike,
    Timelike,
    Lightlike,
}

impl LVec3 {
    pub const ZERO: LVec3 = LVec3::new(0.0, 0.0, 0.0);
    pub const E1: LVec3 = LVec3::new(1.0, 0.0, 0.0);
    pub const E2: LVec3 = LVec3::new(0.0, 1.0, 0.0);
    pub const E3: LVec3 = LVec3::new(0.0, 0.0, 1.0);

    /// Unchecked constructor for internal arithmetic.
    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        LVec3 { x, y, z }
    }

    /// Checked constructor; rejects NaN and infinities.
    pub fn try_new(x: f64, y: f64, z: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() && z.is_finite() {
            Ok(LVec3 { x, y, z })
        } else {
            Err(Error::NonFinite { x, y, z })
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// `<u, v> = u1 v1 + u2 v2 - u3 v3`.
    #[inline]
    pub fn dot(&self, v: &LVec3) -> f64 {
        self.x * v.x + self.y * v.y - self.z * v.z
    }

    /// `<v, v>`, which may be negative.
    #[inline]
    pub fn sq(&self) -> f64 {
        self.dot(self)
    }

    /// `sqrt(|<v, v>|)`.
    pub fn lorentz_norm(&self) -> f64 {
        self.sq().abs().sqrt()
    }

    pub fn euclid_norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    /// Causal character with tolerance `tau_c` applied to `<w, w>` where
    /// `w = v / |v|_inf`. Vectors with `|v|_inf <= tau_c` (including zero)
    /// count as spacelike.
    pub fn causal_type(&self, tau_c: f64) -> CausalType {
        let m = self.max_abs();
        if m == 0.0 || m <= tau_c {
            return CausalType::Spacelike;
        }
        let w = self.scale(1.0 / m);
        let q = w.sq();
        if q < -tau_c {
            CausalType::Timelike
        } else if q > tau_c {
            CausalType::Spacelike
        } else {
            CausalType::Lightlike
        }
    }

    /// The unique `w` with `<w, x> = det(x, u, v)` for every `x`.
    #[inline]
    pub fn cross(&self, v: &LVec3) -> LVec3 {
        let u = self;
        LVec3::new(
            u.y * v.z - u.z * v.y,
            u.z * v.x - u.x * v.z,
            -(u.x * v.y - u.y * v.x),
        )
    }

    #[inline]
    pub fn scale(&self, k: f64) -> LVec3 {
        LVec3::new(self.x * k, self.y * k, self.z * k)
    }

    pub fn euclid_dist(&self, o: &LVec3) -> f64 {
        (*self - *o).euclid_norm()
    }
}

/// Mixed product `(u, v, w) = <u x v, w> = det(u, v, w)`.
#[inline]
pub fn mixed(u: &LVec3, v: &LVec3, w: &LVec3) -> f64 {
    u.cross(v).dot(w)
}

/// Free-function form of [`LVec3::dot`].
#[inline]
pub fn dot(u: &LVec3, v: &LVec3) -> f64 {
    u.dot(v)
}

pub fn lorentz_norm(v: &LVec3) -> f64 {
    v.lorentz_norm()
}

pub fn causal_type(v: &LVec3, tau_c: f64) -> CausalType {
    v.causal_type(tau_c)
}

pub fn cross(u: &LVec3, v: &LVec3) -> LVec3 {
    u.cross(v)
}

impl Add for LVec3 {
    type Output = LVec3;
    #[inline]
    fn add(self, o: LVec3) -> LVec3 {
        LVec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for LVec3 {
    fn add_assign(&mut self, o: LVec3) {
        *self = *self + o;
    }
}

impl Sub for LVec3 {
    type Output = LVec3;
    #[inline]
    fn sub(self, o: LVec3) -> LVec3 {
        LVec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for LVec3 {
    type Output = LVec3;
    fn neg(self) -> LVec3 {
        LVec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for LVec3 {
    type Output = LVec3;
    #[inline]
    fn mul(self, k: f64) -> LVec3 {
        self.scale(k)
    }
}

impl Mul<LVec3> for f64 {
    type Output = LVec3;
    #[inline]
    fn mul(self, v: LVec3) -> LVec3 {
        v.scale(self)
    }
}

impl fmt::Display for LVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn det3(a: &LVec3, b: &LVec3, c: &LVec3) -> f64 {
        // rule of Sarrus, independent of `cross`
        a.x * b.y * c.z + a.y * b.z * c.x + a.z * b.x * c.y
            - a.z * b.y * c.x
            - a.y * b.x * c.z
            - a.x * b.z * c.y
    }

    #[test]
    fn dot_examples() {
        assert_eq!(LVec3::E3.dot(&LVec3::E3), -1.0);
        for s in [-3.0, 0.0, 0.5, 7.25] {
            let v = LVec3::new(1.0, s, s);
            assert_eq!(v.dot(&v), 1.0);
        }
        assert_eq!(LVec3::new(0.0, 1.0, 1.0).dot(&LVec3::E1), 0.0);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(LVec3::new(0.0, 0.0, 2.0).lorentz_norm(), 2.0);
        assert_eq!(LVec3::new(1.0, 0.0, 1.0).lorentz_norm(), 0.0);
        assert_eq!(LVec3::new(3.0, 4.0, 0.0).lorentz_norm(), 5.0);
    }

    #[test]
    fn causal_examples() {
        let tau = DEFAULT_TAU_C;
        assert_eq!(LVec3::E1.causal_type(tau), CausalType::Spacelike);
        assert_eq!(LVec3::E3.causal_type(tau), CausalType::Timelike);
        assert_eq!(LVec3::new(1.0, 0.0, 1.0).causal_type(tau), CausalType::Lightlike);
        assert_eq!(LVec3::ZERO.causal_type(0.0), CausalType::Spacelike);
        assert_eq!(LVec3::ZERO.causal_type(tau), CausalType::Spacelike);
    }

    #[test]
    fn cross_examples() {
        assert_eq!(LVec3::E1.cross(&LVec3::E2), LVec3::new(0.0, 0.0, -1.0));
        let a = LVec3::new(0.0, 1.0, 1.0);
        for s in [-2.0, 0.0, 0.3, 11.0] {
            assert_eq!(a.cross(&LVec3::new(1.0, s, s)), a);
        }
        let u = LVec3::new(0.3, -1.2, 4.0);
        assert_eq!(u.cross(&u), LVec3::ZERO);
    }

    #[test]
    fn mixed_examples() {
        assert_eq!(mixed(&LVec3::E1, &LVec3::E2, &LVec3::E3), 1.0);
        let a = LVec3::new(0.2, -0.7, 1.1);
        let b = LVec3::new(1.5, 0.4, -0.3);
        let c = LVec3::new(-0.9, 2.0, 0.6);
        for s in [-1.0, 0.25, 3.0] {
            let lhs = mixed(&(2.0 * a), &(a * (s * s) + b * s + c), &(a * (2.0 * s) + b));
            let rhs = 2.0 * det3(&a, &c, &b);
            assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()));
        }
        // quadratic lightlike director with a0 = 1
        let (qa, qb, qc) = (
            LVec3::new(0.0, 1.0, 1.0),
            LVec3::new(1.0, 1.0, 1.0),
            LVec3::new(0.5, 0.0, 0.5),
        );
        for s in [-1.0, 0.0, 0.8] {
            let beta = qa * (s * s) + qb * s + qc;
            let d1 = qa * (2.0 * s) + qb;
            let d2 = qa * 2.0;
            assert!((mixed(&d2, &beta, &d1) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn try_new_rejects_non_finite() {
        assert!(LVec3::try_new(f64::NAN, 0.0, 0.0).is_err());
        assert!(LVec3::try_new(0.0, f64::INFINITY, 0.0).is_err());
        assert!(LVec3::try_new(1.0, 2.0, 3.0).is_ok());
    }

    fn arb_vec() -> impl Strategy<Value = LVec3> {
        (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y, z)| LVec3::new(x, y, z))
    }

    proptest! {
        #[test]
        fn lagrange_identity(u in arb_vec(), v in arb_vec()) {
            let w = u.cross(&v);
            let lhs = w.sq();
            let rhs = -u.sq() * v.sq() + u.dot(&v).powi(2);
            let scale = (u.euclid_norm() * v.euclid_norm()).powi(2).max(1e-300);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        }

        #[test]
        fn cross_duality(u in arb_vec(), v in arb_vec(), x in arb_vec()) {
            let lhs = u.cross(&v).dot(&x);
            let rhs = det3(&x, &u, &v);
            let scale = (u.euclid_norm() * v.euclid_norm() * x.euclid_norm()).max(1e-300);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        }

        #[test]
        fn dot_is_symmetric_and_cross_antisymmetric(u in arb_vec(), v in arb_vec()) {
            prop_assert_eq!(u.dot(&v), v.dot(&u));
            prop_assert_eq!(u.cross(&v), -v.cross(&u));
        }

        #[test]
        fn mixed_is_alternating(u in arb_vec(), v in arb_vec(), w in arb_vec()) {
            let a = mixed(&u, &v, &w);
            let scale = u.euclid_norm() * v.euclid_norm() * w.euclid_norm() + 1e-300;
            prop_assert!((a + mixed(&v, &u, &w)).abs() <= 1e-12 * scale);
            prop_assert!((a + mixed(&u, &w, &v)).abs() <= 1e-12 * scale);
            prop_assert!((a - mixed(&v, &w, &u)).abs() <= 1e-12 * scale);
        }

        #[test]
        fn causal_type_scale_invariant(u in arb_vec(), lam in prop_oneof![-50.0..-1e-3f64, 1e-3..50.0f64]) {
            prop_assert_eq!(u.causal_type(0.0), u.scale(lam).causal_type(0.0));
        }

        #[test]
        fn lightlike_orthogonal_iff_dependent(
            a in 0.1..5.0f64, b in 0.1..5.0f64,
            th in 0.0..std::f64::consts::TAU, same in any::<bool>(), dphi in 0.05..6.2f64,
        ) {
            let ph = if same { th } else { th + dphi };
            let u = LVec3::new(a * th.cos(), a * th.sin(), a);
            let v = LVec3::new(b * ph.cos(), b * ph.sin(), b);
            let orth = u.dot(&v).abs() <= 1e-12 * a * b;
            let dependent = u.cross(&v).euclid_norm() <= 1e-12 * a * b;
            prop_assert_eq!(orth, dependent);
            prop_assert_eq!(orth, same);
        }
    }
}
