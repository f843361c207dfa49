//! Eigenfunctions of the round three-sphere in Hopf coordinates.
//!
//! With `z₁ = e^{iφ} sin α`, `z₂ = e^{iθ} cos α` the metric is
//! `dα² + cos²α dθ² + sin²α dφ²` and
//!
//! ```text
//! T_N^{m₁,m₂} = (cos α e^{iθ})^{m₁+m₂} (sin α e^{iφ})^{m₂-m₁} P_n^{(|m₂-m₁|, |m₁+m₂|)}(cos 2α),
//! n = N/2 - max(|m₁|, |m₂|)
//! ```
//!
//! is a joint eigenfunction of `∂_θ`, `∂_φ` and `Δ_{S³}` with eigenvalue
//! `-N(N+2)`. Negative exponents are realized by conjugating the
//! positive-exponent factor. The normalization constant is fixed to 1.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
#[allow(unused_imports)] // needed without std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fd;

/// `P_n^{(a,b)}(x)` by the three-term recurrence.
pub fn jacobi(n: u32, a: f64, b: f64, x: f64) -> f64 {
    debug_assert!(a > -1.0 && b > -1.0);
    if n == 0 {
        return 1.0;
    }
    let mut p0 = 1.0;
    let mut p1 = 0.5 * (a - b + (a + b + 2.0) * x);
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let c0 = 2.0 * k * (k + a + b) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let p2 = (c1 * p1 - c2 * p0) / c0;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// The Hopf-coordinate eigenfunction `T_N^{m₁,m₂}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfEigenfunction {
    pub degree: u32,
    pub m1: i32,
    pub m2: i32,
    pub normalization: f64,
}

impl HopfEigenfunction {
    /// `N` must be even and `|m_i| ≤ N/2`.
    pub fn new(degree: u32, m1: i32, m2: i32) -> Result<Self> {
        if degree % 2 != 0 {
            return Err(Error::InvalidArgument(alloc::format!(
                "N = {degree}: integer weights need N/2 - m_i integral, so N must be even"
            )));
        }
        let half = (degree / 2) as i32;
        if m1.abs() > half || m2.abs() > half {
            return Err(Error::InvalidArgument(alloc::format!(
                "weights ({m1}, {m2}) exceed N/2 = {half}"
            )));
        }
        Ok(Self {
            degree,
            m1,
            m2,
            normalization: 1.0,
        })
    }

    /// Exponent of `cos α e^{iθ}`.
    pub fn theta_weight(&self) -> i32 {
        self.m1 + self.m2
    }

    /// Exponent of `sin α e^{iφ}`.
    pub fn phi_weight(&self) -> i32 {
        self.m2 - self.m1
    }

    /// Degree of the Jacobi factor.
    pub fn jacobi_degree(&self) -> u32 {
        self.degree / 2 - self.m1.unsigned_abs().max(self.m2.unsigned_abs())
    }

    /// `N(N+2)`.
    pub fn eigenvalue(&self) -> f64 {
        let n = self.degree as f64;
        n * (n + 2.0)
    }

    /// The real α-profile `cos^{|a|}α · sin^{|b|}α · P_n^{(|b|,|a|)}(cos 2α)`.
    pub fn alpha_factor(&self, alpha: f64) -> f64 {
        let a = self.theta_weight().unsigned_abs();
        let b = self.phi_weight().unsigned_abs();
        alpha.cos().powi(a as i32)
            * alpha.sin().powi(b as i32)
            * jacobi(self.jacobi_degree(), b as f64, a as f64, (2.0 * alpha).cos())
    }

    pub fn eval(&self, alpha: f64, theta: f64, phi: f64) -> Result<Complex64> {
        let a = self.theta_weight();
        let b = self.phi_weight();
        let (s, c) = alpha.sin_cos();
        if (a < 0 && c == 0.0) || (b < 0 && s == 0.0) {
            return Err(Error::Pole);
        }
        let phase = Complex64::from_polar(1.0, a as f64 * theta + b as f64 * phi);
        Ok(phase * (self.normalization * self.alpha_factor(alpha)))
    }
}

/// Result of a finite-difference residual check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub value: f64,
    /// Set when the step is too large for the stated accuracy.
    pub coarse: bool,
}

/// Largest step that still counts as accurate.
pub const MAX_ACCURATE_STEP: f64 = 0.05;

/// A box of sample points in Hopf coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfGrid {
    pub alpha: (f64, f64),
    pub n_alpha: usize,
    pub n_theta: usize,
    pub n_phi: usize,
}

impl HopfGrid {
    /// A grid whose α range stays `margin` away from both coordinate poles.
    pub fn interior(margin: f64, n_alpha: usize, n_theta: usize, n_phi: usize) -> Self {
        Self {
            alpha: (margin, FRAC_PI_2 - margin),
            n_alpha,
            n_theta,
            n_phi,
        }
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let step = |lo: f64, hi: f64, n: usize, i: usize| {
            if n == 1 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        };
        let tau = core::f64::consts::TAU;
        (0..self.n_alpha).flat_map(move |i| {
            let a = step(self.alpha.0, self.alpha.1, self.n_alpha, i);
            (0..self.n_theta).flat_map(move |j| {
                let t = tau * (j as f64 + 0.37) / self.n_theta as f64;
                (0..self.n_phi).map(move |k| {
                    let p = tau * (k as f64 + 0.61) / self.n_phi as f64;
                    (a, t, p)
                })
            })
        })
    }
}

/// `max |Δ_{S³}T + N(N+2)T| / max |T|` over the grid, with
/// `Δ = (sin α cos α)⁻¹ ∂_α(sin α cos α ∂_α) + cos⁻²α ∂_θ² + sin⁻²α ∂_φ²`
/// discretized by fourth-order central differences in all three variables.
pub fn s3_laplace_residual(e: &HopfEigenfunction, grid: &HopfGrid, h: f64) -> Result<Residual> {
    residual_against(e, grid, h, e.eigenvalue())
}

fn residual_against(e: &HopfEigenfunction, grid: &HopfGrid, h: f64, lambda: f64) -> Result<Residual> {
    let lo = grid.alpha.0.min(grid.alpha.1);
    let hi = grid.alpha.0.max(grid.alpha.1);
    if lo < 5.0 * h || hi > FRAC_PI_2 - 5.0 * h {
        return Err(Error::InvalidArgument(alloc::format!(
            "α range [{lo}, {hi}] is closer than 5h to a coordinate pole"
        )));
    }
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (a, t, p) in grid.points() {
        let val = e.eval(a, t, p)?;
        let (s, c) = a.sin_cos();
        // (sc)⁻¹ ∂_α(sc ∂_α T) = T_αα + (cot α - tan α) T_α
        let fa = |x: f64| e.eval(x, t, p).unwrap_or_default();
        let t_a = fd::diff1(fa, a, h);
        let t_aa = fd::diff2(fa, a, h);
        let t_tt = fd::diff2(|x: f64| e.eval(a, x, p).unwrap_or_default(), t, h);
        let t_pp = fd::diff2(|x: f64| e.eval(a, t, x).unwrap_or_default(), p, h);
        let lap = t_aa + t_a * (c / s - s / c) + t_tt * (1.0 / (c * c)) + t_pp * (1.0 / (s * s));
        worst = worst.max((lap + val * lambda).norm());
        scale = scale.max(val.norm());
    }
    let value = if scale == 0.0 { worst } else { worst / scale };
    Ok(Residual {
        value,
        coarse: h > MAX_ACCURATE_STEP,
    })
}

/// Zeros in `(0, π/2)` of the α-profile, found by sign-change bisection on a
/// uniform mesh.
pub fn alpha_factor_zeros(e: &HopfEigenfunction) -> Vec<f64> {
    let expected = e.jacobi_degree() as usize;
    // Jacobi zeros in cos 2α are separated by at least ~1/n²; refine until the
    // count matches, which the interlacing property guarantees eventually.
    let mut mesh = 64 * (expected + 1);
    loop {
        let zeros = bracket_zeros(|a| e.alpha_factor(a), 0.0, FRAC_PI_2, mesh);
        if zeros.len() >= expected || mesh > 1 << 20 {
            return zeros;
        }
        mesh *= 4;
    }
}

fn bracket_zeros(g: impl Fn(f64) -> f64, lo: f64, hi: f64, mesh: usize) -> Vec<f64> {
    let mut out = Vec::new();
    let dx = (hi - lo) / mesh as f64;
    // open interval: skip the endpoints, where the trigonometric factors vanish
    let mut prev_x = lo + 0.5 * dx;
    let mut prev = g(prev_x);
    for i in 1..mesh {
        let x = lo + (i as f64 + 0.5) * dx;
        let v = g(x);
        if prev == 0.0 {
            out.push(prev_x);
        } else if prev * v < 0.0 {
            out.push(bisect(&g, prev_x, x));
        }
        prev_x = x;
        prev = v;
    }
    out
}

fn bisect(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut ga = g(a);
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 || (b - a) < 1e-16 {
            return m;
        }
        if (gm > 0.0) == (ga > 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
