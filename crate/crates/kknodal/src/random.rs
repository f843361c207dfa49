//! Seeded random test fields.

use std::f64::consts::TAU;

use kknodal_core::Complex64;
use rand::Rng;
use serde::Serialize;

/// `Σ c_{pq} e^{2πi(px + qy)}` over `|p|, |q| ≤ order`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrigField {
    pub order: i32,
    /// `(p, q, re, im)`.
    pub terms: Vec<(i32, i32, f64, f64)>,
}

impl TrigField {
    /// Coefficients uniform in the unit square, damped by `1/(1 + p² + q²)`.
    pub fn random(rng: &mut impl Rng, order: i32) -> Self {
        let mut terms = Vec::new();
        for p in -order..=order {
            for q in -order..=order {
                let damp = 1.0 / (1.0 + (p * p + q * q) as f64);
                terms.push((p, q, damp * rng.gen_range(-1.0..1.0), damp * rng.gen_range(-1.0..1.0)));
            }
        }
        Self { order, terms }
    }

    pub fn eval(&self, x: [f64; 2]) -> Complex64 {
        self.terms
            .iter()
            .map(|&(p, q, re, im)| {
                Complex64::new(re, im) * Complex64::from_polar(1.0, TAU * (p as f64 * x[0] + q as f64 * x[1]))
            })
            .sum()
    }
}

/// `a·cos(2πp(y-s))·cos(2πq(z-t)) + i·b·sin(2πp(y-s))·sin(2πq(z-t))` on the
/// unit torus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CosSinField {
    pub p: u32,
    pub q: u32,
    pub a: f64,
    pub b: f64,
    pub shift: [f64; 2],
}

impl CosSinField {
    pub fn random(rng: &mut impl Rng) -> Self {
        let amp = |rng: &mut dyn rand::RngCore| {
            let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            s * rng.gen_range(0.5..2.0)
        };
        Self {
            p: rng.gen_range(1..=2),
            q: rng.gen_range(1..=2),
            a: amp(rng),
            b: amp(rng),
            shift: [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)],
        }
    }

    pub fn eval(&self, x: [f64; 2]) -> Complex64 {
        let u = TAU * self.p as f64 * (x[0] - self.shift[0]);
        let v = TAU * self.q as f64 * (x[1] - self.shift[1]);
        Complex64::new(self.a * u.cos() * v.cos(), self.b * u.sin() * v.sin())
    }

    /// `cos = 0` on one axis and `sin = 0` on the other: `8pq` points.
    pub fn zero_count(&self) -> usize {
        (8 * self.p * self.q) as usize
    }

    /// Distance between nearest zeros, used to size winding circles.
    pub fn min_zero_spacing(&self) -> f64 {
        let dy = 0.25 / self.p as f64;
        let dz = 0.25 / self.q as f64;
        dy.hypot(dz).min(2.0 * dy).min(2.0 * dz)
    }
}
