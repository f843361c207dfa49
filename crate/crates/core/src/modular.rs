//! q-expansions of the discriminant form and its powers, weight-`k` lifts to
//! `SL₂(Z)\SL₂(R)`, Maass operators, and the fundamental-domain solid.
//!
//! A modular form `F` of weight `k` lifts to
//! `Φ(x, y, θ) = Re(y^{k/2} F(x + iy) e^{-ikθ})`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_3, PI, TAU};

use num_bigint::BigInt;
use num_complex::Complex64;
#[allow(unused_imports)] // needed without std
use num_traits::Float;
use num_traits::{Euclid, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fd;

/// Default relative tolerance for truncating a q-expansion.
pub const TAIL_TOL: f64 = 1e-12;

/// A truncated q-expansion `Σ_{n=n₀}^{N} c_n qⁿ`, `q = e^{2πiz}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QSeries {
    pub weight: u32,
    pub n0: usize,
    /// `coeffs[i]` is the coefficient of `q^{n0 + i}`.
    pub coeffs: Vec<BigInt>,
    /// Tail majorant exponent: `|c_n| ≤ n^{tail_exponent}` for `n > N`.
    pub tail_bound_constant: f64,
    float: Vec<f64>,
}

impl QSeries {
    pub fn new(weight: u32, n0: usize, coeffs: Vec<BigInt>) -> Self {
        let float = coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect();
        Self {
            weight,
            n0,
            coeffs,
            tail_bound_constant: weight as f64,
            float,
        }
    }

    /// Highest exponent kept.
    pub fn truncation(&self) -> usize {
        self.n0 + self.coeffs.len() - 1
    }

    /// Coefficient of `qⁿ` (zero outside the stored range).
    pub fn coeff(&self, n: usize) -> BigInt {
        if n < self.n0 || n > self.truncation() {
            BigInt::zero()
        } else {
            self.coeffs[n - self.n0].clone()
        }
    }

    pub fn leading(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn float_coeffs(&self) -> &[f64] {
        &self.float
    }

    /// Bound on `|Σ_{n>N} c_n qⁿ|` at height `y`, assuming `|c_n| ≤ n^k`.
    pub fn tail_bound(&self, y: f64) -> f64 {
        tail_majorant(self.truncation(), self.tail_bound_constant, y)
    }

    /// Tail bound relative to the leading term `|q^{n₀}|`.
    pub fn relative_tail_bound(&self, y: f64) -> f64 {
        self.tail_bound(y) / (-TAU * y * self.n0 as f64).exp()
    }

    /// Evaluate `F(z)` and a guaranteed bound on the truncation error.
    pub fn eval(&self, z: Complex64) -> Result<FormValue> {
        let rel = self.relative_tail_bound(z.im);
        if !(rel <= TAIL_TOL) {
            return Err(Error::Precision {
                bound: rel,
                have: self.truncation(),
                required: required_truncation(self.tail_bound_constant, self.n0, z.im, TAIL_TOL),
            });
        }
        Ok(FormValue {
            value: self.eval_unchecked(z),
            tail_bound: self.tail_bound(z.im),
        })
    }

    /// Horner evaluation of the stored terms.
    pub fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        let q = q_of(z);
        let mut acc = Complex64::zero();
        for &c in self.float.iter().rev() {
            acc = acc * q + c;
        }
        acc * q.powu(self.n0 as u32)
    }

    /// `y^{k/2} F(z)`, the base function of the weight-`k` lift.
    ///
    /// At `y = ∞` this returns the normalized leading term
    /// `sign(c_{n₀})·e^{2πi n₀ x}`, which carries the sign pattern of the lift
    /// above any height where the leading term dominates.
    pub fn lift_base(&self, x: f64, y: f64) -> Complex64 {
        if y.is_infinite() {
            let s = if self.float[0] >= 0.0 { 1.0 } else { -1.0 };
            return Complex64::from_polar(s, TAU * self.n0 as f64 * x);
        }
        self.eval_unchecked(Complex64::new(x, y)) * y.powf(0.5 * self.weight as f64)
    }

    /// `Φ = Re(y^{k/2} F(z) e^{-ikθ})`.
    pub fn eval_lift(&self, z: Complex64, theta: f64) -> Result<f64> {
        let f = self.eval(z)?.value * z.im.powf(0.5 * self.weight as f64);
        Ok(crate::fields::real_part(f, self.weight as i32, theta))
    }

    /// The lift as an equivariant field on the upper half plane (weight `k`,
    /// convention `e^{-ikθ}`).
    pub fn lift_field(self) -> crate::fields::EquivariantField {
        let k = self.weight as i32;
        crate::fields::EquivariantField::new(k, crate::fields::ChartId::UpperHalfPlane, move |p| {
            self.lift_base(p[0], p[1])
        })
    }
}

/// `F(z)` together with its truncation bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormValue {
    pub value: Complex64,
    pub tail_bound: f64,
}

#[inline]
pub fn q_of(z: Complex64) -> Complex64 {
    Complex64::from_polar((-TAU * z.im).exp(), TAU * z.re)
}

/// `Σ_{n>N} n^k rⁿ ≤ (N+1)^k r^{N+1} / (1 - ρ)` with `ρ = ((N+2)/(N+1))^k r`,
/// since the term ratio is decreasing in `n`.
pub fn tail_majorant(truncation: usize, exponent: f64, y: f64) -> f64 {
    let r = (-TAU * y).exp();
    let n1 = truncation as f64 + 1.0;
    let rho = ((n1 + 1.0) / n1).powf(exponent) * r;
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    (exponent * n1.ln() + n1 * r.ln()).exp() / (1.0 - rho)
}

/// Smallest truncation order whose relative tail bound at height `y_min` is
/// below `tol`.
pub fn required_truncation(exponent: f64, n0: usize, y_min: f64, tol: f64) -> usize {
    let lead = (-TAU * y_min * n0 as f64).exp();
    let mut n = n0.max(1);
    while tail_majorant(n, exponent, y_min) / lead > tol {
        n += 1;
        if n > 1_000_000 {
            break;
        }
    }
    n
}

/// Truncated product of polynomials with coefficients up to degree `deg`.
fn poly_mul(a: &[BigInt], b: &[BigInt], deg: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); deg + 1];
    for (i, x) in a.iter().enumerate().take(deg + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(deg + 1 - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_pow(base: &[BigInt], mut p: u32, deg: usize) -> Vec<BigInt> {
    let mut result = vec![BigInt::zero(); deg + 1];
    result[0] = BigInt::one();
    let mut sq: Vec<BigInt> = base.iter().take(deg + 1).cloned().collect();
    sq.resize(deg + 1, BigInt::zero());
    while p > 0 {
        if p & 1 == 1 {
            result = poly_mul(&result, &sq, deg);
        }
        p >>= 1;
        if p > 0 {
            sq = poly_mul(&sq, &sq, deg);
        }
    }
    result
}

/// `Δ = q ∏_{n≥1} (1 - qⁿ)^{24}` through `q^N`, in exact integers.
pub fn delta_coeffs(n: usize) -> Result<QSeries> {
    if n == 0 {
        return Err(Error::InvalidArgument("truncation order must be at least 1".into()));
    }
    let deg = n - 1;
    let mut euler = vec![BigInt::zero(); deg + 1];
    euler[0] = BigInt::one();
    for k in 1..=deg {
        // multiply by (1 - q^k)
        for i in (k..=deg).rev() {
            let t = euler[i - k].clone();
            euler[i] -= t;
        }
    }
    let coeffs = poly_pow(&euler, 24, deg);
    Ok(QSeries::new(12, 1, coeffs))
}

/// `s^p` through `q^N`.
pub fn power_series(s: &QSeries, p: u32, n: usize) -> Result<QSeries> {
    if p == 0 {
        return Err(Error::InvalidArgument("power must be positive".into()));
    }
    let n0 = s.n0 * p as usize;
    if n < n0 {
        return Err(Error::InvalidArgument(alloc::format!(
            "truncation {n} is below the leading exponent {n0}"
        )));
    }
    let deg = n - n0;
    if s.truncation() - s.n0 < deg {
        return Err(Error::InvalidArgument(alloc::format!(
            "series known through q^{} cannot give s^{p} through q^{n}",
            s.truncation()
        )));
    }
    let coeffs = poly_pow(&s.coeffs, p, deg);
    Ok(QSeries::new(s.weight * p, n0, coeffs))
}

/// `|x| ≤ ½`, `x² + y² ≥ 1`, boundary included.
pub fn in_fundamental_domain(z: Complex64) -> bool {
    const EPS: f64 = 1e-12;
    z.im > 0.0 && z.re.abs() <= 0.5 + EPS && z.norm_sqr() >= 1.0 - EPS
}

/// Nodal-set reference on the front arc `z = e^{iφ}`: `cos(12(φ + 2θ))`.
pub fn front_reference(theta: f64, phi: f64) -> f64 {
    (12.0 * (phi + 2.0 * theta)).cos()
}

/// Phase `δ(φ)` with `Re(F(e^{iφ}) e^{-ikθ}) ∝ cos((k/2)φ + kθ - δ(φ))`.
/// For a weight-`k` form with real coefficients it is constant in `φ`.
pub fn front_phase(s: &QSeries, phi: f64) -> f64 {
    let f = s.eval_unchecked(Complex64::from_polar(1.0, phi));
    let half = 0.5 * s.weight as f64;
    let d = f.arg() + half * phi;
    // reduce to (-π, π]
    let r = Euclid::rem_euclid(&d, &TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Parameters of the truncated fundamental-domain solid `M₀`.
///
/// The base `{|x| ≤ ½, x² + y² ≥ 1, y ≤ y_max}` is charted by `(u, v) ∈ [0,1]²`
/// with `x = cos φ`, `φ = 2π/3 - uπ/3`, and `y = sin φ + v (y_max - sin φ)`,
/// so the front arc is `v = 0`, the sides are `u = 0, 1`, and `φ ↦ π - φ` is
/// `u ↦ 1 - u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalSolid {
    pub y_max: f64,
    /// `(n_u, n_v, n_θ)`.
    pub resolution: [usize; 3],
}

impl FundamentalSolid {
    pub const DEFAULT_Y_MAX: f64 = 2.0;

    pub fn new(y_max: f64, resolution: [usize; 3]) -> Result<Self> {
        if !(y_max > 1.0) {
            return Err(Error::InvalidArgument(alloc::format!("y_max = {y_max} must exceed 1")));
        }
        Ok(Self { y_max, resolution })
    }

    pub fn phi_of_u(u: f64) -> f64 {
        2.0 * FRAC_PI_3 - u * FRAC_PI_3
    }

    pub fn chart(&self, u: f64, v: f64) -> (f64, f64) {
        let phi = Self::phi_of_u(u);
        let (s, c) = phi.sin_cos();
        (c, s + v * (self.y_max - s))
    }

    pub fn u_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.resolution[0] as f64
    }

    pub fn v_center(&self, j: usize) -> f64 {
        (j as f64 + 0.5) / self.resolution[1] as f64
    }

    pub fn theta_center(&self, k: usize) -> f64 {
        TAU * (k as f64 + 0.5) / self.resolution[2] as f64
    }

    /// Angle `φ` of front cell column `i`.
    pub fn front_phi(&self, i: usize) -> f64 {
        Self::phi_of_u(self.u_center(i))
    }

    /// θ-cell shift realizing `θ ↦ θ + φ` for front column `i`. Partner
    /// columns `i` and `n_u - 1 - i` shift by a total of `n_θ/2` cells, matching
    /// the exact half turn `φ + (π - φ) = π`; a self-partnered middle column
    /// (odd `n_u`) shifts by `n_θ/4`.
    pub fn front_shift(&self, i: usize) -> usize {
        let [nu, _, nt] = self.resolution;
        let partner = nu - 1 - i;
        let own = |c: usize| (self.front_phi(c) / TAU * nt as f64).round() as usize;
        if i == partner {
            nt / 4
        } else if i < partner {
            own(i) % nt
        } else {
            (nt / 2 + nt - own(partner) % nt) % nt
        }
    }
}

/// Sign agreement between the lift and a reference on a boundary face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FaceCheck {
    pub compared: usize,
    /// Cells within one cell of the reference zero set.
    pub skipped: usize,
    pub mismatches: usize,
}

impl FaceCheck {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.compared > 0
    }
}

fn compare_face(
    n_a: usize,
    n_b: usize,
    value: impl Fn(usize, usize) -> f64,
    reference: impl Fn(usize, usize) -> f64,
    wrap_b: bool,
) -> FaceCheck {
    let sign = |v: f64| v > 0.0;
    let mut out = FaceCheck::default();
    for a in 0..n_a {
        for b in 0..n_b {
            let r = sign(reference(a, b));
            let mut near = false;
            for da in -1i64..=1 {
                for db in -1i64..=1 {
                    let aa = a as i64 + da;
                    let mut bb = b as i64 + db;
                    if wrap_b {
                        bb = bb.rem_euclid(n_b as i64);
                    }
                    if aa < 0 || bb < 0 || aa >= n_a as i64 || bb >= n_b as i64 {
                        continue;
                    }
                    near |= sign(reference(aa as usize, bb as usize)) != r;
                }
            }
            if near {
                out.skipped += 1;
                continue;
            }
            out.compared += 1;
            if sign(value(a, b)) != r {
                out.mismatches += 1;
            }
        }
    }
    out
}

/// Side face `x = -½`, `y ∈ [√3/2, y_max]`: the lift against `cos(kθ)`.
pub fn side_face_check(s: &QSeries, y_max: f64, n_y: usize, n_theta: usize) -> FaceCheck {
    let y0 = 3f64.sqrt() / 2.0;
    let ys: Vec<f64> = (0..n_y)
        .map(|j| y0 + (j as f64 + 0.5) / n_y as f64 * (y_max - y0))
        .collect();
    let base: Vec<Complex64> = ys.iter().map(|&y| s.lift_base(-0.5, y)).collect();
    let theta = |k: usize| TAU * (k as f64 + 0.5) / n_theta as f64;
    let k = s.weight as i32;
    compare_face(
        n_y,
        n_theta,
        |j, t| crate::fields::real_part(base[j], k, theta(t)),
        |_, t| (k as f64 * theta(t)).cos(),
        true,
    )
}

/// Result of the front-face comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontCheck {
    pub face: FaceCheck,
    /// Mean of `δ(φ)` over the face.
    pub offset: f64,
    /// `max |δ(φ) - offset|`.
    pub offset_spread: f64,
}

/// Front face `z = e^{iφ}`, `φ ∈ [π/3, 2π/3]`: the lift against
/// `cos((k/2)φ + kθ - δ)`, with the offset `δ` measured from the form.
pub fn front_face_check(s: &QSeries, n_phi: usize, n_theta: usize) -> FrontCheck {
    let phis: Vec<f64> = (0..n_phi)
        .map(|i| FundamentalSolid::phi_of_u((i as f64 + 0.5) / n_phi as f64))
        .collect();
    let deltas: Vec<f64> = phis.iter().map(|&p| front_phase(s, p)).collect();
    // circular mean, then deviations wrapped to (-π, π]
    let (sx, sy) = deltas.iter().fold((0.0, 0.0), |(a, b), d| (a + d.cos(), b + d.sin()));
    let offset = sy.atan2(sx);
    let wrap = |d: f64| {
        let r = Euclid::rem_euclid(&(d + PI), &TAU);
        r - PI
    };
    let offset_spread = deltas.iter().map(|&d| wrap(d - offset).abs()).fold(0.0, f64::max);
    let base: Vec<Complex64> = phis
        .iter()
        .map(|&p| {
            let (y, x) = p.sin_cos();
            s.lift_base(x, y)
        })
        .collect();
    let theta = |k: usize| TAU * (k as f64 + 0.5) / n_theta as f64;
    let k = s.weight as f64;
    let face = compare_face(
        n_phi,
        n_theta,
        |i, t| crate::fields::real_part(base[i], s.weight as i32, theta(t)),
        |i, t| (0.5 * k * phis[i] + k * theta(t) - offset).cos(),
        true,
    );
    FrontCheck {
        face,
        offset,
        offset_spread,
    }
}

/// Samples of a complex function on the lattice `(x0 + i h, y0 + j h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneGrid {
    pub x0: f64,
    pub y0: f64,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major in `y`: index `j * nx + i`.
    pub values: Vec<Complex64>,
}

impl PlaneGrid {
    pub fn sample(x0: f64, y0: f64, h: f64, nx: usize, ny: usize, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                values.push(f(x0 + i as f64 * h, y0 + j as f64 * h));
            }
        }
        Self {
            x0,
            y0,
            h,
            nx,
            ny,
            values,
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[j * self.nx + i]
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.h
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.h
    }

    /// Drop `m` points on every side.
    pub fn shrink(&self, m: usize) -> Self {
        let nx = self.nx - 2 * m;
        let ny = self.ny - 2 * m;
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                values.push(self.at(i + m, j + m));
            }
        }
        Self {
            x0: self.x(m),
            y0: self.y(m),
            h: self.h,
            nx,
            ny,
            values,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Apply `op(x, y, u, ∂ₓu, ∂ᵧu, ∂ₓ²u, ∂ᵧ²u)` at interior points with the
    /// fourth-order stencils; the result loses two points on each side.
    fn apply(
        &self,
        op: impl Fn(f64, f64, Complex64, Complex64, Complex64, Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        const M: usize = 2;
        if self.nx <= 2 * M || self.ny <= 2 * M {
            return Err(Error::InvalidArgument(
                "grid too small for the five-point stencil".into(),
            ));
        }
        let h = self.h;
        let mut values = Vec::with_capacity((self.nx - 2 * M) * (self.ny - 2 * M));
        for j in M..self.ny - M {
            for i in M..self.nx - M {
                let c = self.at(i, j);
                let ux = fd::d1_o4(
                    self.at(i - 2, j),
                    self.at(i - 1, j),
                    self.at(i + 1, j),
                    self.at(i + 2, j),
                    h,
                );
                let uy = fd::d1_o4(
                    self.at(i, j - 2),
                    self.at(i, j - 1),
                    self.at(i, j + 1),
                    self.at(i, j + 2),
                    h,
                );
                let uxx = fd::d2_o4(
                    self.at(i - 2, j),
                    self.at(i - 1, j),
                    c,
                    self.at(i + 1, j),
                    self.at(i + 2, j),
                    h,
                );
                let uyy = fd::d2_o4(
                    self.at(i, j - 2),
                    self.at(i, j - 1),
                    c,
                    self.at(i, j + 1),
                    self.at(i, j + 2),
                    h,
                );
                values.push(op(self.x(i), self.y(j), c, ux, uy, uxx, uyy));
            }
        }
        Ok(Self {
            x0: self.x(M),
            y0: self.y(M),
            h,
            nx: self.nx - 2 * M,
            ny: self.ny - 2 * M,
            values,
        })
    }
}

/// Result of applying a difference operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Applied {
    pub grid: PlaneGrid,
    /// The step exceeds [`crate::sphere::MAX_ACCURATE_STEP`].
    pub coarse: bool,
}

/// `D_w = y²(∂ₓ² + ∂ᵧ²) - 2iwy ∂ₓ` by central differences.
pub fn maass_apply(weight: i32, field: &PlaneGrid) -> Result<Applied> {
    let w = weight as f64;
    let i = Complex64::i();
    let grid = field.apply(|_, y, _, ux, _, uxx, uyy| (uxx + uyy) * (y * y) - i * (2.0 * w * y) * ux)?;
    Ok(Applied {
        grid,
        coarse: field.h > crate::sphere::MAX_ACCURATE_STEP,
    })
}

/// Raising operator `K_k = (z - z̄)∂_z + k = 2iy ∂_z + k`.
pub fn raise(k: i32, field: &PlaneGrid) -> Result<PlaneGrid> {
    let i = Complex64::i();
    field.apply(|_, y, u, ux, uy, _, _| i * y * (ux - i * uy) + u * k as f64)
}

/// Lowering operator `L_k = -2i y^{1+k} ∂_z̄ y^{-k} = (z̄ - z)∂_z̄ - k`.
pub fn lower(k: i32, field: &PlaneGrid) -> Result<PlaneGrid> {
    let i = Complex64::i();
    field.apply(|_, y, u, ux, uy, _, _| -i * y * (ux + i * uy) - u * k as f64)
}

/// Outcome of fitting `D_w u = c u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenFit {
    pub weight: i32,
    pub eigenvalue: f64,
    /// `max |D_w u - c u| / max |u|`.
    pub residual: f64,
    pub coarse: bool,
}

/// Least-squares `c` for `D_w u ≈ c u` and the resulting residual.
pub fn maass_fit(weight: i32, field: &PlaneGrid) -> Result<EigenFit> {
    let applied = maass_apply(weight, field)?;
    let u = field.shrink(2);
    let (num, den) = u
        .values
        .iter()
        .zip(&applied.grid.values)
        .fold((Complex64::zero(), 0.0), |(n, d), (a, b)| {
            (n + a.conj() * b, d + a.norm_sqr())
        });
    let c = num / den;
    let worst = u
        .values
        .iter()
        .zip(&applied.grid.values)
        .map(|(a, b)| (b - a * c).norm())
        .fold(0.0, f64::max);
    Ok(EigenFit {
        weight,
        eigenvalue: c.re,
        residual: worst / u.max_abs(),
        coarse: applied.coarse,
    })
}

/// Try each weight and keep the best-fitting one.
pub fn maass_scan(weights: &[i32], field: &PlaneGrid) -> Result<EigenFit> {
    let mut best: Option<EigenFit> = None;
    for &w in weights {
        let fit = maass_fit(w, field)?;
        if best.map_or(true, |b| fit.residual < b.residual) {
            best = Some(fit);
        }
    }
    best.ok_or_else(|| Error::InvalidArgument("no weights to scan".into()))
}

/// `max |D_k u - (L_{k+1} K_k u + k(k+1) u)| / max |u|` on the common interior.
pub fn ladder_identity_residual(k: i32, field: &PlaneGrid) -> Result<f64> {
    let d = maass_apply(k, field)?.grid.shrink(2);
    let lk = lower(k + 1, &raise(k, field)?)?;
    let u = field.shrink(4);
    let kk = (k * (k + 1)) as f64;
    let worst = d
        .values
        .iter()
        .zip(&lk.values)
        .zip(&u.values)
        .map(|((a, b), c)| (a - b - c * kk).norm())
        .fold(0.0, f64::max);
    Ok(worst / u.max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::vec::Vec;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Naive oracle: multiply by (1 - qⁿ) one factor at a time, 24 times each.
    fn naive_delta(n: usize) -> Vec<i64> {
        let mut p = vec![0i64; n + 1];
        p[1] = 1;
        for k in 1..=n {
            for _ in 0..24 {
                for i in (k..=n).rev() {
                    p[i] -= p[i - k];
                }
            }
        }
        p[1..].to_vec()
    }

    #[test]
    fn tau_first_seven() {
        let d = delta_coeffs(7).unwrap();
        assert_eq!(d.coeffs, ints(&[1, -24, 252, -1472, 4830, -6048, -16744]));
        assert_eq!(d.n0, 1);
        assert_eq!(d.weight, 12);
        assert_eq!(d.coeff(6), d.coeff(2) * d.coeff(3));
    }

    #[test]
    fn tau_eight_from_naive_product() {
        let oracle = naive_delta(8);
        assert_eq!(oracle[7], 84480);
        let d = delta_coeffs(30).unwrap();
        let naive = naive_delta(30);
        for n in 1..=30 {
            assert_eq!(d.coeff(n), BigInt::from(naive[n - 1]));
        }
    }

    #[test]
    fn tau_is_multiplicative_and_ramanujan_bounded() {
        let d = delta_coeffs(200).unwrap();
        for (m, n) in [(2, 3), (2, 5), (3, 7), (4, 9), (5, 11), (8, 25)] {
            assert_eq!(d.coeff(m * n), d.coeff(m) * d.coeff(n));
        }
        // Hecke relation at p = 2: τ(2n) = τ(2)τ(n) - 2¹¹ τ(n/2)
        for n in 2..100usize {
            let rhs = d.coeff(2) * d.coeff(n)
                - if n % 2 == 0 {
                    BigInt::from(2048) * d.coeff(n / 2)
                } else {
                    BigInt::zero()
                };
            assert_eq!(d.coeff(2 * n), rhs);
        }
        for n in 1..=200usize {
            let t = d.coeff(n).to_f64().unwrap().abs();
            assert!(t <= (n as f64).powi(12));
        }
    }

    #[test]
    fn big_coefficients_stay_exact() {
        let d = delta_coeffs(600).unwrap();
        let sq = power_series(&d, 2, 600).unwrap();
        assert!(sq.coeffs.iter().any(|c| c.to_i64().is_none()));
        // Deligne-style sanity: |τ(n)| ≤ d(n) n^{11/2} at a few large n
        let t = d.coeff(600).to_f64().unwrap().abs();
        assert!(t < 24.0 * 600f64.powf(5.5));
    }

    #[test]
    fn square_of_delta() {
        let d = delta_coeffs(20).unwrap();
        let d2 = power_series(&d, 2, 20).unwrap();
        assert_eq!(d2.n0, 2);
        assert_eq!(d2.weight, 24);
        assert_eq!(&d2.coeffs[..3], &ints(&[1, -48, 1080])[..]);
        // convolution oracle
        for n in 2..=20usize {
            let conv: BigInt = (1..n).map(|a| d.coeff(a) * d.coeff(n - a)).sum();
            assert_eq!(d2.coeff(n), conv);
        }
        assert_eq!(power_series(&d, 1, 20).unwrap(), d);
        let d4 = power_series(&d, 4, 20).unwrap();
        assert_eq!(power_series(&d2, 2, 20).unwrap().coeffs, d4.coeffs);
        for n in 4..=20usize {
            assert!(d4.coeff(n).to_f64().unwrap().abs() <= (n as f64).powi(48));
        }
    }

    #[test]
    fn power_needs_enough_terms() {
        let d = delta_coeffs(5).unwrap();
        assert!(power_series(&d, 2, 12).is_err());
    }

    #[test]
    fn cusp_leading_term_dominates() {
        let d2 = power_series(&delta_coeffs(60).unwrap(), 2, 60).unwrap();
        for k in 0..20 {
            let y = 2.0 + 0.25 * k as f64;
            let z = Complex64::new(0.13, y);
            let v = d2.eval(z).unwrap();
            let lead = q_of(z).powu(2);
            let rel = (v.value - lead).norm() / lead.norm();
            assert!(rel < 48.0 * (-TAU * y).exp() * 1.01 + 1e-14, "y = {y}");
        }
    }

    #[test]
    fn side_values_are_real() {
        let d = delta_coeffs(40).unwrap();
        for k in 0..10 {
            let v = d.eval(Complex64::new(-0.5, 0.9 + 0.2 * k as f64)).unwrap().value;
            assert!(v.im.abs() <= 1e-14 * v.norm());
        }
    }

    #[test]
    fn delta_never_vanishes_on_a_vertical_line() {
        let d = delta_coeffs(80).unwrap();
        for k in 0..100 {
            let y = 0.5 + 2.5 * k as f64 / 99.0;
            let v = d.eval(Complex64::new(0.0, y)).unwrap();
            assert!(v.value.norm() > 10.0 * v.tail_bound);
        }
    }

    #[test]
    fn precision_error_names_required_order() {
        let d = delta_coeffs(5).unwrap();
        match d.eval(Complex64::new(0.0, 0.5)) {
            Err(Error::Precision { required, have, .. }) => {
                assert_eq!(have, 5);
                let longer = delta_coeffs(required).unwrap();
                assert!(longer.eval(Complex64::new(0.0, 0.5)).is_ok());
                if required > 2 {
                    assert!(delta_coeffs(required - 1)
                        .unwrap()
                        .eval(Complex64::new(0.0, 0.5))
                        .is_err());
                }
            }
            other => panic!("expected precision error, got {other:?}"),
        }
    }

    #[test]
    fn tail_majorant_bounds_the_true_tail() {
        let full = delta_coeffs(120).unwrap();
        let short = delta_coeffs(10).unwrap();
        for y in [0.6, 0.866, 1.2] {
            let z = Complex64::new(0.31, y);
            let err = (full.eval_unchecked(z) - short.eval_unchecked(z)).norm();
            assert!(err <= short.tail_bound(y));
        }
    }

    #[test]
    fn lift_on_side_at_theta_zero_is_nonnegative() {
        let d2 = power_series(&delta_coeffs(40).unwrap(), 2, 40).unwrap();
        for k in 0..10 {
            let z = Complex64::new(-0.5, 0.9 + 0.3 * k as f64);
            assert!(d2.eval_lift(z, 0.0).unwrap() >= 0.0);
        }
    }

    #[test]
    fn lift_fiber_zeros_are_those_of_cos_24_theta_on_the_side() {
        let d2 = power_series(&delta_coeffs(40).unwrap(), 2, 40).unwrap();
        let z = Complex64::new(-0.5, 1.3);
        let f = d2.eval(z).unwrap().value * z.im.powi(12);
        let zeros = crate::fields::fiber_zeros(f, 24).unwrap();
        assert_eq!(zeros.len(), 48);
        for (k, t) in zeros.iter().enumerate() {
            assert_abs_diff_eq!(*t, PI / 48.0 + k as f64 * PI / 24.0, epsilon = 1e-10);
            assert!(d2.eval_lift(z, *t).unwrap().abs() < 1e-12 * f.norm());
        }
    }

    #[test]
    fn lift_at_i() {
        let d2 = power_series(&delta_coeffs(40).unwrap(), 2, 40).unwrap();
        let z = Complex64::new(0.0, 1.0);
        let theta = PI / 48.0;
        let f = d2.eval(z).unwrap().value;
        let oracle = (f * Complex64::from_polar(1.0, -24.0 * theta)).re;
        let v = d2.eval_lift(z, theta).unwrap();
        assert_eq!(v.signum(), oracle.signum());
        assert_abs_diff_eq!(v, oracle, epsilon = 1e-12 * f.norm());
    }

    #[test]
    fn front_reference_values() {
        let phi = core::f64::consts::FRAC_PI_2;
        let theta = (PI / 24.0 - phi) / 2.0;
        assert_abs_diff_eq!(front_reference(theta, phi), 0.0, epsilon = 1e-14);
        for k in 0..10 {
            let t = 0.1 * k as f64;
            assert_abs_diff_eq!(
                front_reference(t, 1.3),
                front_reference(t + PI / 12.0, 1.3),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn front_phase_is_constant_along_the_arc() {
        let d2 = power_series(&delta_coeffs(60).unwrap(), 2, 60).unwrap();
        let first = front_phase(&d2, PI / 3.0 + 1e-9);
        for k in 0..=50 {
            let phi = PI / 3.0 + (PI / 3.0) * k as f64 / 50.0;
            let d = front_phase(&d2, phi);
            let diff = (d - first + PI).rem_euclid(TAU) - PI;
            assert!(diff.abs() < 1e-9, "phase drift {diff} at φ = {phi}");
        }
        assert!(first.abs() < 1e-9);
    }

    #[test]
    fn fundamental_domain_membership() {
        assert!(in_fundamental_domain(Complex64::new(0.0, 2.0)));
        assert!(!in_fundamental_domain(Complex64::new(0.4, 0.5)));
        assert!(in_fundamental_domain(Complex64::new(0.5, 3f64.sqrt() / 2.0)));
        assert!(!in_fundamental_domain(Complex64::new(0.6, 2.0)));
    }

    #[test]
    fn solid_chart_covers_the_domain() {
        let s = FundamentalSolid::new(2.0, [16, 16, 32]).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                let (x, y) = s.chart(s.u_center(i), s.v_center(j));
                assert!(in_fundamental_domain(Complex64::new(x, y)) && y <= 2.0);
            }
        }
        let (x0, y0) = s.chart(0.0, 0.3);
        let (x1, y1) = s.chart(1.0, 0.3);
        assert_abs_diff_eq!(x0, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(x1, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(y0, y1, epsilon = 1e-15);
    }

    #[test]
    fn front_shift_pairs_to_half_turn() {
        for res in [[8, 8, 16], [12, 9, 48], [96, 96, 192], [7, 8, 28]] {
            let s = FundamentalSolid::new(2.0, res).unwrap();
            let [nu, _, nt] = res;
            for i in 0..nu {
                let total = (s.front_shift(i) + s.front_shift(nu - 1 - i)) % nt;
                assert_eq!(total, nt / 2);
                let exact = s.front_phi(i) / TAU * nt as f64;
                let d = (s.front_shift(i) as f64 - exact).rem_euclid(nt as f64);
                assert!(d.min(nt as f64 - d) <= 0.5 + 1e-9);
            }
        }
    }

    #[test]
    fn face_restrictions() {
        let d2 = power_series(&delta_coeffs(60).unwrap(), 2, 60).unwrap();
        let side = side_face_check(&d2, 2.0, 48, 192);
        assert!(side.passed(), "{side:?}");
        assert!(side.skipped > 0 && side.compared > 0);
        let front = front_face_check(&d2, 48, 192);
        assert!(front.face.passed(), "{front:?}");
        assert!(front.offset.abs() < 1e-9 && front.offset_spread < 1e-9);
        // front reference of the weight-24 lift is cos(12(φ + 2θ))
        let (phi, theta) = (1.3, 0.2);
        let z = Complex64::from_polar(1.0, phi);
        let v = d2.eval_lift(z, theta).unwrap();
        assert_eq!(v > 0.0, front_reference(theta, phi) > 0.0);
    }

    #[test]
    fn a_wrong_reference_is_caught() {
        let d2 = power_series(&delta_coeffs(60).unwrap(), 2, 60).unwrap();
        let shifted = compare_face(
            16,
            384,
            |j, t| {
                crate::fields::real_part(
                    d2.lift_base(-0.5, 1.0 + j as f64 * 0.05),
                    24,
                    TAU * (t as f64 + 0.5) / 384.0,
                )
            },
            |_, t| (24.0 * TAU * (t as f64 + 0.5) / 384.0 + 1.0).cos(),
            true,
        );
        assert!(shifted.compared > 0 && shifted.mismatches > 0, "{shifted:?}");
    }

    fn delta_lift_grid(h: f64) -> PlaneGrid {
        let d = delta_coeffs(60).unwrap();
        PlaneGrid::sample(-0.05, 0.95, h, 41, 41, |x, y| {
            d.eval_unchecked(Complex64::new(x, y)) * y.powi(6)
        })
    }

    #[test]
    fn maass_constant_is_annihilated() {
        let g = PlaneGrid::sample(0.0, 1.0, 1e-2, 8, 8, |_, _| Complex64::new(3.0, -1.0));
        let out = maass_apply(0, &g).unwrap();
        assert!(out.grid.max_abs() < 1e-9);
        assert!(!out.coarse);
        let coarse = PlaneGrid::sample(0.0, 1.0, 0.1, 8, 8, |_, _| Complex64::new(1.0, 0.0));
        assert!(maass_apply(0, &coarse).unwrap().coarse);
    }

    #[test]
    fn maass_eigenvalue_of_holomorphic_lift() {
        let g = delta_lift_grid(1e-3);
        let best = maass_scan(&[6, -6, 12, -12], &g).unwrap();
        assert_eq!(best.weight, 6);
        assert_abs_diff_eq!(best.eigenvalue, 30.0, epsilon = 1e-5);
        assert!(best.residual < 1e-5, "{best:?}");
        let other = maass_fit(-6, &g).unwrap();
        assert!(other.residual > 1e-2);
    }

    #[test]
    fn ladder_identity_holds() {
        let g = delta_lift_grid(1e-3);
        for k in [6, 0, -3, 12] {
            let r = ladder_identity_residual(k, &g).unwrap();
            assert!(r < 1e-4, "k = {k}: {r}");
        }
    }
}
