//! Central finite-difference stencils.
//!
//! The five-point stencils are fourth-order accurate; the three-point ones are
//! second order. Both are generic over `f64` and `Complex64` values.

use core::ops::{Add, Mul, Sub};

/// Anything the stencils can combine.
pub trait FdValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}

impl<T> FdValue for T where T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T> {}

/// Second-order first derivative from `f(x-h), f(x+h)`.
#[inline]
pub fn d1_o2<T: FdValue>(m1: T, p1: T, h: f64) -> T {
    (p1 - m1) * (0.5 / h)
}

/// Second-order second derivative from `f(x-h), f(x), f(x+h)`.
#[inline]
pub fn d2_o2<T: FdValue>(m1: T, c: T, p1: T, h: f64) -> T {
    (p1 + m1 - c * 2.0) * (1.0 / (h * h))
}

/// Fourth-order first derivative from `f(x-2h), f(x-h), f(x+h), f(x+2h)`.
#[inline]
pub fn d1_o4<T: FdValue>(m2: T, m1: T, p1: T, p2: T, h: f64) -> T {
    ((p1 - m1) * 8.0 - (p2 - m2)) * (1.0 / (12.0 * h))
}

/// Fourth-order second derivative from the five samples around `x`.
#[inline]
pub fn d2_o4<T: FdValue>(m2: T, m1: T, c: T, p1: T, p2: T, h: f64) -> T {
    ((p1 + m1) * 16.0 - (p2 + m2) - c * 30.0) * (1.0 / (12.0 * h * h))
}

/// Fourth-order first derivative of a closure at `x`.
#[inline]
pub fn diff1<T: FdValue>(f: impl Fn(f64) -> T, x: f64, h: f64) -> T {
    d1_o4(f(x - 2.0 * h), f(x - h), f(x + h), f(x + 2.0 * h), h)
}

/// Fourth-order second derivative of a closure at `x`.
#[inline]
pub fn diff2<T: FdValue>(f: impl Fn(f64) -> T, x: f64, h: f64) -> T {
    d2_o4(f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h), h)
}
