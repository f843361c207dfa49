//! An orthogonal eigenbasis of the flat torus `R³/Z³` whose non-constant
//! members all have exactly two nodal domains.
//!
//! Basis functions are short sums of products `f_{j1}(m1 x1)·f_{j2}(m2 x2)·f_{j3}(m3 x3)`
//! with `f_1(t) = cos 2πt` and `f_0(t) = sin 2πt`. They are grouped by how many
//! frequencies vanish:
//!
//! * `Case1`: all three nonzero; `f_J ± f_{1-J}` with `j1 = 0`.
//! * `Case2`: one zero, the other two distinct (`a < b`); the fixed axis carries
//!   `a`, and `b` moves between the two remaining axes.
//! * `Case3`: one zero, the other two equal; six fixed combinations, each with `±`.
//! * `Case4`: one nonzero; `f_j(m x_a) + f_j(m x_b) - ½ f_j(m x_c)`.
//!
//! Coefficients are stored exactly as rationals and elements are not
//! normalized; [`TorusBasisElement::norm`] gives the `L²` norm on the unit cube.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::fmt;

#[allow(unused_imports)] // needed without std
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Case {
    Case1,
    Case2,
    Case3,
    Case4,
    Constant,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::Case1 => "Case1",
            Case::Case2 => "Case2",
            Case::Case3 => "Case3",
            Case::Case4 => "Case4",
            Case::Constant => "Constant",
        }
    }
}

/// `f_j(freq·x)`: `j = 1` is `cos 2π·freq·x`, `j = 0` is `sin 2π·freq·x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub j: u8,
    pub freq: u32,
}

impl Factor {
    pub const ONE: Factor = Factor { j: 1, freq: 0 };

    pub fn cos(freq: u32) -> Self {
        Factor { j: 1, freq }
    }

    pub fn sin(freq: u32) -> Self {
        Factor { j: 0, freq }
    }

    #[inline]
    pub fn eval(self, x: f64) -> f64 {
        let t = TAU * self.freq as f64 * x;
        if self.j == 1 {
            t.cos()
        } else {
            t.sin()
        }
    }

    /// `∫₀¹ f² dx`.
    pub fn norm_sqr(self) -> f64 {
        match (self.j, self.freq) {
            (1, 0) => 1.0,
            (0, 0) => 0.0,
            _ => 0.5,
        }
    }
}

/// An exact rational coefficient; only `±1` and `±1/2` occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coeff {
    pub num: i32,
    pub den: i32,
}

impl Coeff {
    pub const ONE: Coeff = Coeff { num: 1, den: 1 };
    pub const MINUS_ONE: Coeff = Coeff { num: -1, den: 1 };
    pub const MINUS_HALF: Coeff = Coeff { num: -1, den: 2 };

    fn sign(s: i8) -> Self {
        if s >= 0 {
            Self::ONE
        } else {
            Self::MINUS_ONE
        }
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Coeff,
    pub factors: [Factor; 3],
}

impl Term {
    #[inline]
    pub fn eval(&self, x: [f64; 3]) -> f64 {
        self.coeff.value() * self.factors[0].eval(x[0]) * self.factors[1].eval(x[1]) * self.factors[2].eval(x[2])
    }

    fn freqs(&self) -> [u32; 3] {
        [self.factors[0].freq, self.factors[1].freq, self.factors[2].freq]
    }

    fn js(&self) -> [u8; 3] {
        [self.factors[0].j, self.factors[1].j, self.factors[2].j]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorusBasisElement {
    pub case: Case,
    pub terms: Vec<Term>,
    /// Frequencies of the leading term.
    pub frequencies: [u32; 3],
    /// `+1` or `-1`: the `±` choice in the case lists (`+1` for Case 4 and the constant).
    pub sign: i8,
}

impl TorusBasisElement {
    fn new(case: Case, terms: Vec<Term>, sign: i8) -> Self {
        let frequencies = terms[0].freqs();
        debug_assert!(terms.iter().all(|t| freq_sqr(t.freqs()) == freq_sqr(frequencies)));
        Self {
            case,
            terms,
            frequencies,
            sign,
        }
    }

    pub fn constant() -> Self {
        Self::new(
            Case::Constant,
            vec![Term {
                coeff: Coeff::ONE,
                factors: [Factor::ONE; 3],
            }],
            1,
        )
    }

    pub fn is_constant(&self) -> bool {
        self.case == Case::Constant
    }

    /// Exact value at a point of the unit cube (periodic).
    pub fn eval(&self, x: [f64; 3]) -> f64 {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    /// `L²` norm over the unit cube. Terms are distinct product functions, so
    /// they are mutually orthogonal.
    pub fn norm(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let c = t.coeff.value();
                c * c * t.factors.iter().map(|f| f.norm_sqr()).product::<f64>()
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Value of the unit-norm rescaling.
    pub fn eval_normalized(&self, x: [f64; 3]) -> f64 {
        self.eval(x) / self.norm()
    }

    /// `4π²(m₁² + m₂² + m₃²)`, so that `Δe = -λe`. Zero for the constant.
    pub fn eigenvalue(&self) -> f64 {
        4.0 * PI * PI * freq_sqr(self.frequencies) as f64
    }

    fn sort_key(&self) -> (Case, [u32; 3], Vec<([u8; 3], [u32; 3])>, u8) {
        (
            self.case,
            self.frequencies,
            self.terms.iter().map(|t| (t.js(), t.freqs())).collect(),
            if self.sign >= 0 { 0 } else { 1 },
        )
    }
}

fn freq_sqr(f: [u32; 3]) -> u32 {
    f.iter().map(|m| m * m).sum()
}

fn term(coeff: Coeff, factors: [Factor; 3]) -> Term {
    Term { coeff, factors }
}

/// A factor triple with `f` on `axis` and ones elsewhere.
fn single(axis: usize, f: Factor) -> [Factor; 3] {
    let mut out = [Factor::ONE; 3];
    out[axis] = f;
    out
}

fn pair(a: usize, fa: Factor, b: usize, fb: Factor) -> [Factor; 3] {
    let mut out = [Factor::ONE; 3];
    out[a] = fa;
    out[b] = fb;
    out
}

const SIGNS: [i8; 2] = [1, -1];

fn case1(max_freq: u32, out: &mut Vec<TorusBasisElement>) {
    for m1 in 1..=max_freq {
        for m2 in 1..=max_freq {
            for m3 in 1..=max_freq {
                for j2 in 0..2u8 {
                    for j3 in 0..2u8 {
                        for s in SIGNS {
                            let lead = [Factor::sin(m1), Factor { j: j2, freq: m2 }, Factor { j: j3, freq: m3 }];
                            let partner = [
                                Factor::cos(m1),
                                Factor { j: 1 - j2, freq: m2 },
                                Factor { j: 1 - j3, freq: m3 },
                            ];
                            out.push(TorusBasisElement::new(
                                Case::Case1,
                                vec![term(Coeff::ONE, lead), term(Coeff::sign(s), partner)],
                                s,
                            ));
                        }
                    }
                }
            }
        }
    }
}

/// Fixed axis, then the two axes the second frequency moves between.
const CASE2_GROUPS: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 0, 2), (2, 0, 1)];

fn case2(max_freq: u32, out: &mut Vec<TorusBasisElement>) {
    for a in 1..=max_freq {
        for b in (a + 1)..=max_freq {
            for (fixed, p, q) in CASE2_GROUPS {
                for j1 in 0..2u8 {
                    for j2 in 0..2u8 {
                        for s in SIGNS {
                            let lead = pair(fixed, Factor { j: j1, freq: a }, p, Factor { j: j2, freq: b });
                            let partner = pair(fixed, Factor { j: 1 - j1, freq: a }, q, Factor { j: j2, freq: b });
                            out.push(TorusBasisElement::new(
                                Case::Case2,
                                vec![term(Coeff::ONE, lead), term(Coeff::sign(s), partner)],
                                s,
                            ));
                        }
                    }
                }
            }
        }
    }
}

/// The six Case 3 lines as ((axis, j), (axis, j)) ± ((axis, j), (axis, j)).
const CASE3_LINES: [[(usize, u8); 4]; 6] = [
    [(0, 0), (1, 0), (0, 1), (2, 0)],
    [(1, 0), (2, 0), (1, 1), (0, 0)],
    [(2, 0), (0, 0), (2, 1), (1, 0)],
    [(0, 1), (1, 1), (2, 1), (0, 0)],
    [(1, 1), (2, 1), (0, 1), (1, 0)],
    [(2, 1), (0, 1), (1, 1), (2, 0)],
];

fn case3(max_freq: u32, out: &mut Vec<TorusBasisElement>) {
    for m in 1..=max_freq {
        for line in CASE3_LINES {
            for s in SIGNS {
                let f = |(axis, j): (usize, u8)| (axis, Factor { j, freq: m });
                let (a0, f0) = f(line[0]);
                let (a1, f1) = f(line[1]);
                let (a2, f2) = f(line[2]);
                let (a3, f3) = f(line[3]);
                out.push(TorusBasisElement::new(
                    Case::Case3,
                    vec![
                        term(Coeff::ONE, pair(a0, f0, a1, f1)),
                        term(Coeff::sign(s), pair(a2, f2, a3, f3)),
                    ],
                    s,
                ));
            }
        }
    }
}

/// `(a, b, c)` in `f(x_a) + f(x_b) - ½ f(x_c)`.
const CASE4_AXES: [(usize, usize, usize); 3] = [(0, 1, 2), (0, 2, 1), (1, 2, 0)];

fn case4(max_freq: u32, out: &mut Vec<TorusBasisElement>) {
    for m in 1..=max_freq {
        for j in [0u8, 1] {
            for (a, b, c) in CASE4_AXES {
                let f = Factor { j, freq: m };
                out.push(TorusBasisElement::new(
                    Case::Case4,
                    vec![
                        term(Coeff::ONE, single(a, f)),
                        term(Coeff::ONE, single(b, f)),
                        term(Coeff::MINUS_HALF, single(c, f)),
                    ],
                    1,
                ));
            }
        }
    }
}

/// All basis elements with every frequency at most `max_freq`: Case 1 through
/// Case 4, then the constant. Within a case, elements are ordered by the
/// leading term's `(m₁, m₂, m₃, j₁, j₂, j₃)` and then `+` before `-`.
pub fn enumerate_basis(max_freq: u32) -> Result<Vec<TorusBasisElement>> {
    if max_freq == 0 {
        return Err(Error::InvalidArgument("max_freq must be at least 1".into()));
    }
    let mut out = Vec::new();
    case1(max_freq, &mut out);
    case2(max_freq, &mut out);
    case3(max_freq, &mut out);
    case4(max_freq, &mut out);
    out.push(TorusBasisElement::constant());
    out.sort_by_key(|e| e.sort_key());
    Ok(out)
}

/// Pairwise `L²(T³)` inner products (unit volume) by the tensor-product
/// trapezoidal rule with `n_quad` nodes per axis.
///
/// The rule integrates trigonometric polynomials of degree below `n_quad`
/// exactly, so `n_quad ≥ 4·max_freq` makes every entry exact up to rounding.
pub fn gram_matrix(elems: &[TorusBasisElement], n_quad: usize) -> Result<Vec<Vec<f64>>> {
    let max_freq = elems
        .iter()
        .flat_map(|e| e.terms.iter().flat_map(|t| t.factors.iter().map(|f| f.freq)))
        .max()
        .unwrap_or(0) as usize;
    if n_quad < 4 * max_freq.max(1) {
        return Err(Error::InvalidArgument(alloc::format!(
            "n_quad = {n_quad} is below 4·max_freq = {}",
            4 * max_freq.max(1)
        )));
    }
    let nodes: Vec<f64> = (0..n_quad).map(|i| i as f64 / n_quad as f64).collect();
    let npts = n_quad * n_quad * n_quad;
    let samples: Vec<Vec<f64>> = elems
        .iter()
        .map(|e| {
            let mut v = Vec::with_capacity(npts);
            for &a in &nodes {
                for &b in &nodes {
                    for &c in &nodes {
                        v.push(e.eval([a, b, c]));
                    }
                }
            }
            v
        })
        .collect();
    let w = 1.0 / npts as f64;
    let n = elems.len();
    let mut g = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in i..n {
            let s: f64 = samples[i].iter().zip(&samples[k]).map(|(x, y)| x * y).sum::<f64>() * w;
            g[i][k] = s;
            g[k][i] = s;
        }
    }
    Ok(g)
}
