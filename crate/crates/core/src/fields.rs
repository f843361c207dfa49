//! Equivariant functions `φ(x, θ) = f(x)·e^{-imθ}` and the fiberwise algebra of
//! their real parts.
//!
//! One lift convention is used throughout the crate: the fiber factor is
//! `e^{-imθ}` ([`LIFT_SIGN`] = -1), so that
//!
//! ```text
//! Re φ(x, θ) = Re f(x)·cos(mθ) + Im f(x)·sin(mθ).
//! ```
//!
//! Fields written with `e^{+imθ}` are expressed by negating the weight.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};
use core::fmt;

use num_complex::Complex64;
use num_traits::Euclid;
#[allow(unused_imports)] // needed without std
use num_traits::Float;

use crate::error::{Error, Result};

/// Sign of the exponent in the fiber factor `e^{LIFT_SIGN·i·m·θ}`.
pub const LIFT_SIGN: f64 = -1.0;

/// Tolerance for comparing normalized angles.
pub const ANGLE_TOL: f64 = 1e-10;

/// Base chart a sampler expects its coordinates in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChartId {
    /// Euclidean plane (discs, local charts).
    Plane,
    /// `R²/Z²` with coordinates in `[0, 1)²`.
    Torus2,
    /// Upper half plane, coordinates `(x, y)` with `y > 0`.
    UpperHalfPlane,
}

/// A point of a base chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasePoint {
    pub chart: ChartId,
    pub coords: [f64; 2],
}

impl BasePoint {
    pub fn new(chart: ChartId, x: f64, y: f64) -> Self {
        Self { chart, coords: [x, y] }
    }
}

type Sampler = dyn Fn([f64; 2]) -> Complex64 + Send + Sync;

/// A weight-`m` equivariant function, stored as its base sampler `f`.
pub struct EquivariantField {
    weight: i32,
    chart: ChartId,
    base: Box<Sampler>,
}

impl fmt::Debug for EquivariantField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EquivariantField")
            .field("weight", &self.weight)
            .field("chart", &self.chart)
            .finish_non_exhaustive()
    }
}

impl EquivariantField {
    pub fn new<F>(weight: i32, chart: ChartId, base: F) -> Self
    where
        F: Fn([f64; 2]) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            weight,
            chart,
            base: Box::new(base),
        }
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    pub fn chart(&self) -> ChartId {
        self.chart
    }

    fn check(&self, x: &BasePoint) -> Result<()> {
        if x.chart != self.chart {
            return Err(Error::ChartMismatch {
                expected: self.chart,
                found: x.chart,
            });
        }
        Ok(())
    }

    /// The base value `f(x)`.
    pub fn base_value(&self, x: &BasePoint) -> Result<Complex64> {
        self.check(x)?;
        Ok((self.base)(x.coords))
    }

    /// Base value without the chart check, for grid drivers that have already
    /// validated the chart.
    pub fn base_value_unchecked(&self, coords: [f64; 2]) -> Complex64 {
        (self.base)(coords)
    }

    /// The complex lift `f(x)·e^{-imθ}`.
    pub fn lift(&self, x: &BasePoint, theta: f64) -> Result<Complex64> {
        let f = self.base_value(x)?;
        Ok(f * fiber_phase(self.weight, theta))
    }

    /// `Re φ(x, θ)`.
    pub fn eval_real_part(&self, x: &BasePoint, theta: f64) -> Result<f64> {
        let f = self.base_value(x)?;
        Ok(real_part(f, self.weight, theta))
    }

    /// The fiber zero set over `x`.
    pub fn fiber_zero_set(&self, x: &BasePoint) -> Result<FiberZeroSet> {
        let f = self.base_value(x)?;
        Ok(FiberZeroSet {
            base_point: *x,
            angles: fiber_zeros(f, self.weight.unsigned_abs())?,
        })
    }
}

/// `e^{-imθ}`.
pub fn fiber_phase(weight: i32, theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, LIFT_SIGN * weight as f64 * theta)
}

/// `Re(f·e^{-imθ})`, expanded as `Re f cos mθ + Im f sin mθ`.
#[inline]
pub fn real_part(f: Complex64, weight: i32, theta: f64) -> f64 {
    let (s, c) = (weight as f64 * theta).sin_cos();
    f.re * c - LIFT_SIGN * f.im * s
}

/// Zeros of `θ ↦ Re φ(x, θ)` over a base point with value `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberZeroSet {
    pub base_point: BasePoint,
    /// Sorted, in `[0, 2π)`.
    pub angles: Vec<f64>,
}

/// Normalize an angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = Euclid::rem_euclid(&theta, &TAU);
    if r >= TAU - ANGLE_TOL * 1e-3 {
        0.0
    } else {
        r
    }
}

/// The `2m` zeros in `[0, 2π)` of `θ ↦ Re(f·e^{-imθ})`, spaced by `π/m`.
///
/// `Re(f e^{-imθ}) = |f| cos(mθ - arg f)` vanishes at `mθ = arg f + π/2 + kπ`.
pub fn fiber_zeros(f: Complex64, m: u32) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::InvalidArgument("fiber zeros need a positive weight".into()));
    }
    let modulus = f.norm();
    if modulus == 0.0 || !modulus.is_finite() {
        return Err(Error::SingularFiber { modulus });
    }
    let m = m as f64;
    let phase = LIFT_SIGN * -f.arg();
    let n = 2 * m as usize;
    let mut angles: Vec<f64> = (0..n)
        .map(|k| normalize_angle((phase + FRAC_PI_2 + k as f64 * PI) / m))
        .collect();
    angles.sort_by(f64::total_cmp);
    Ok(angles)
}

/// Compare two angle sets after normalization, at [`ANGLE_TOL`].
pub fn angle_sets_match(a: &[f64], b: &[f64]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut a: Vec<f64> = a.iter().map(|&t| normalize_angle(t)).collect();
    let mut b: Vec<f64> = b.iter().map(|&t| normalize_angle(t)).collect();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).all(|(x, y)| {
        let d = (x - y).abs();
        d <= ANGLE_TOL || (TAU - d) <= ANGLE_TOL
    })
}

/// The flat-torus exponential `e^{2πi⟨k, x⟩}`, a unit-modulus base field.
pub fn torus_exponential(weight: i32, k: [i32; 2]) -> EquivariantField {
    EquivariantField::new(weight, ChartId::Torus2, move |x| {
        Complex64::from_polar(1.0, TAU * (k[0] as f64 * x[0] + k[1] as f64 * x[1]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::vec;

    fn constant(weight: i32, c: Complex64) -> EquivariantField {
        EquivariantField::new(weight, ChartId::Plane, move |_| c)
    }

    fn origin() -> BasePoint {
        BasePoint::new(ChartId::Plane, 0.0, 0.0)
    }

    #[test]
    fn real_part_identity_case() {
        let f = constant(1, Complex64::new(1.0, 0.0));
        assert_abs_diff_eq!(f.eval_real_part(&origin(), 0.0).unwrap(), 1.0);
    }

    #[test]
    fn real_part_follows_negative_convention() {
        let f = constant(1, Complex64::i());
        assert_abs_diff_eq!(f.eval_real_part(&origin(), FRAC_PI_2).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn real_part_matches_complex_multiplication() {
        // Oracle: plain complex product Re((1+i)·e^{-2iπ/8}).
        let c = Complex64::new(1.0, 1.0);
        let theta = PI / 8.0;
        let oracle = (c * Complex64::new((2.0 * theta).cos(), -(2.0 * theta).sin())).re;
        let f = constant(2, c);
        let v = f.eval_real_part(&origin(), theta).unwrap();
        assert_abs_diff_eq!(v, oracle, epsilon = 1e-15);
        assert_abs_diff_eq!(v, 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn chart_mismatch_is_reported() {
        let f = constant(1, Complex64::new(1.0, 0.0));
        let p = BasePoint::new(ChartId::Torus2, 0.1, 0.2);
        assert!(matches!(f.eval_real_part(&p, 0.0), Err(Error::ChartMismatch { .. })));
    }

    #[test]
    fn fiber_zeros_of_cosine() {
        let z = fiber_zeros(Complex64::new(1.0, 0.0), 1).unwrap();
        assert!(angle_sets_match(&z, &[FRAC_PI_2, 3.0 * FRAC_PI_2]));
    }

    #[test]
    fn fiber_zeros_of_sin_two_theta() {
        let z = fiber_zeros(Complex64::i(), 2).unwrap();
        assert!(angle_sets_match(&z, &[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2]));
    }

    fn bisect(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        let mut ga = g(a);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            let gm = g(mid);
            if gm == 0.0 {
                return mid;
            }
            if (gm > 0.0) == (ga > 0.0) {
                a = mid;
                ga = gm;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn fiber_zeros_match_bisection_oracle() {
        let c = Complex64::new(1.0, 1.0);
        let g = |t: f64| (c * Complex64::new(t.cos(), -t.sin())).re;
        let mut oracle = vec![];
        let n = 1000;
        for i in 0..n {
            let (a, b) = (TAU * i as f64 / n as f64, TAU * (i + 1) as f64 / n as f64);
            if g(a) * g(b) < 0.0 {
                oracle.push(bisect(g, a, b));
            }
        }
        assert_eq!(oracle.len(), 2);
        assert_abs_diff_eq!(oracle[1] - oracle[0], PI, epsilon = 1e-12);
        let z = fiber_zeros(c, 1).unwrap();
        assert!(angle_sets_match(&z, &oracle));
    }

    #[test]
    fn singular_fiber_is_an_error() {
        assert!(matches!(
            fiber_zeros(Complex64::new(0.0, 0.0), 3),
            Err(Error::SingularFiber { .. })
        ));
    }

    #[test]
    fn exponential_fields_never_vanish() {
        let f = torus_exponential(3, [2, -1]);
        for i in 0..20 {
            for j in 0..20 {
                let p = BasePoint::new(ChartId::Torus2, i as f64 / 20.0, j as f64 / 20.0);
                assert_abs_diff_eq!(f.lift(&p, 0.3 * i as f64).unwrap().norm(), 1.0, epsilon = 1e-14);
            }
        }
    }

    proptest! {
        #[test]
        fn modulus_is_theta_invariant(re in -5.0..5.0f64, im in -5.0..5.0f64, m in -30i32..30,
                                      t1 in 0.0..TAU, t2 in 0.0..TAU) {
            let f = constant(m, Complex64::new(re, im));
            let a = f.lift(&origin(), t1).unwrap().norm();
            let b = f.lift(&origin(), t2).unwrap().norm();
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
        }

        #[test]
        fn fiber_zeros_are_uniform_sign_changes(re in -5.0..5.0f64, im in -5.0..5.0f64, m in 1u32..30) {
            let c = Complex64::new(re, im);
            prop_assume!(c.norm() > 1e-6);
            let z = fiber_zeros(c, m).unwrap();
            prop_assert_eq!(z.len(), 2 * m as usize);
            let step = PI / m as f64;
            for w in z.windows(2) {
                prop_assert!((w[1] - w[0] - step).abs() < 1e-10);
            }
            let eps = 1e-3 * step;
            for &t in &z {
                let before = real_part(c, m as i32, t - eps);
                let after = real_part(c, m as i32, t + eps);
                prop_assert!(before * after < 0.0);
            }
        }
    }
}
