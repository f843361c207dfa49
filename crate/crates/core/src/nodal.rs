//! Cell grids on the bundle geometries, sign sampling, and nodal-domain
//! counting by union-find.
//!
//! Cells of the main lattice are indexed `(i·n₁ + j)·n₂ + k` with the fiber
//! axis `k` fastest. Axis 0 is the slab axis: labeling can be split into
//! contiguous `i`-ranges that are processed independently and then merged
//! across seams (see [`label_slab`] and [`merge_seams`]).
//!
//! Adjacency is face adjacency plus the gluing identifications; zero cells are
//! barriers.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::fmt;
use core::ops::Range;
use core::str::FromStr;

use num_complex::Complex64;
#[allow(unused_imports)] // needed without std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fields::{real_part, EquivariantField};
use crate::modular::FundamentalSolid;
use crate::union_find::{find_in, union_in};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ManifoldTag {
    /// `(ℝ/ℤ)³`.
    Torus3,
    /// The truncated fundamental solid with its side, front and fiber gluings
    /// and a cusp cap above `y_max`.
    ModularSolid,
    /// A disc in the plane times the fiber circle.
    Disc2xCircle,
    /// `(ℝ/ℤ)²`.
    Torus2,
}

impl ManifoldTag {
    pub fn name(self) -> &'static str {
        match self {
            ManifoldTag::Torus3 => "torus3",
            ManifoldTag::ModularSolid => "modular",
            ManifoldTag::Disc2xCircle => "disc-circle",
            ManifoldTag::Torus2 => "torus2",
        }
    }

    /// Number of discretized axes.
    pub fn dimension(self) -> usize {
        match self {
            ManifoldTag::Torus2 => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for ManifoldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ManifoldTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "torus3" | "t3" => ManifoldTag::Torus3,
            "modular" | "modular-solid" => ManifoldTag::ModularSolid,
            "disc-circle" | "disc" => ManifoldTag::Disc2xCircle,
            "torus2" | "t2" => ManifoldTag::Torus2,
            _ => {
                return Err(Error::InvalidArgument(alloc::format!(
                    "unknown manifold `{s}` (expected torus3, torus2, modular or disc-circle)"
                )))
            }
        })
    }
}

/// Geometry parameters that are not cell counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridParams {
    /// Truncation height of the modular solid.
    pub y_max: f64,
    pub disc_center: [f64; 2],
    pub disc_radius: f64,
}

impl Default for GridParams {
    fn default() -> Self {
        Self {
            y_max: FundamentalSolid::DEFAULT_Y_MAX,
            disc_center: [0.0, 0.0],
            disc_radius: 0.5,
        }
    }
}

/// An identification on the boundary of the chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gluing {
    /// Opposite faces along `axis` are identified by translation.
    Periodic { axis: usize },
    /// The `j = 0` face is glued to itself: `(i, 0, k) ~ (n₀-1-i, 0, k + shift[i])`.
    FrontTwist { shift: Vec<usize> },
    /// One extra layer of `n₀ × n₂` cells above `j = n₁-1`, periodic in `i`
    /// and `k`, standing for `y ∈ [y_max, ∞)`.
    CuspCap,
}

/// Where a cell index points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Lattice { i: usize, j: usize, k: usize },
    Cap { i: usize, k: usize },
}

#[derive(Debug, Clone)]
pub struct ChartGrid {
    pub tag: ManifoldTag,
    /// Cells per axis; the third is 1 for two-dimensional grids.
    pub dims: [usize; 3],
    pub params: GridParams,
    pub gluings: Vec<Gluing>,
    periodic: [bool; 3],
    front_shift: Option<Vec<usize>>,
    cap: bool,
    /// Base cells `(i, j)` inside the domain, for masked charts.
    mask: Option<Vec<bool>>,
}

/// Smallest admissible cell count on any axis.
pub const MIN_RESOLUTION: usize = 8;

/// Build the cell grid for `tag`. For [`ManifoldTag::Torus2`] the third
/// resolution entry is ignored.
pub fn build_grid(tag: ManifoldTag, resolution: [usize; 3], params: GridParams) -> Result<ChartGrid> {
    let dims = match tag {
        ManifoldTag::Torus2 => [resolution[0], resolution[1], 1],
        _ => resolution,
    };
    for (axis, &n) in dims.iter().enumerate().take(tag.dimension()) {
        if n < MIN_RESOLUTION {
            return Err(Error::Configuration(alloc::format!(
                "axis {axis} has {n} cells; at least {MIN_RESOLUTION} are required"
            )));
        }
    }
    if dims.iter().product::<usize>() >= u32::MAX as usize {
        return Err(Error::Configuration("grid exceeds 2^32 cells".into()));
    }
    let mut grid = ChartGrid {
        tag,
        dims,
        params,
        gluings: Vec::new(),
        periodic: [false; 3],
        front_shift: None,
        cap: false,
        mask: None,
    };
    match tag {
        ManifoldTag::Torus3 => grid.set_periodic(&[0, 1, 2]),
        ManifoldTag::Torus2 => grid.set_periodic(&[0, 1]),
        ManifoldTag::Disc2xCircle => {
            if !(params.disc_radius > 0.0) {
                return Err(Error::Configuration("disc radius must be positive".into()));
            }
            grid.set_periodic(&[2]);
            grid.mask = Some(disc_mask(&params, dims[0], dims[1]));
        }
        ManifoldTag::ModularSolid => {
            if dims[2] % 2 != 0 {
                return Err(Error::Configuration(alloc::format!(
                    "front gluing needs an even θ count (got {}): partner columns must shift by n_θ/2 in total",
                    dims[2]
                )));
            }
            if dims[0] % 2 == 1 && dims[2] % 4 != 0 {
                return Err(Error::Configuration(alloc::format!(
                    "front gluing with an odd φ count needs the θ count divisible by 4 (got {})",
                    dims[2]
                )));
            }
            let solid = FundamentalSolid::new(params.y_max, dims)?;
            grid.set_periodic(&[0, 2]);
            let shift: Vec<usize> = (0..dims[0]).map(|i| solid.front_shift(i)).collect();
            grid.front_shift = Some(shift.clone());
            grid.gluings.push(Gluing::FrontTwist { shift });
            grid.gluings.push(Gluing::CuspCap);
            grid.cap = true;
        }
    }
    Ok(grid)
}

fn disc_mask(params: &GridParams, n0: usize, n1: usize) -> Vec<bool> {
    let mut mask = Vec::with_capacity(n0 * n1);
    for i in 0..n0 {
        for j in 0..n1 {
            let [x, y] = disc_point(params, n0, n1, i, j);
            let (dx, dy) = (x - params.disc_center[0], y - params.disc_center[1]);
            mask.push(dx * dx + dy * dy <= params.disc_radius * params.disc_radius);
        }
    }
    mask
}

fn disc_point(params: &GridParams, n0: usize, n1: usize, i: usize, j: usize) -> [f64; 2] {
    let r = params.disc_radius;
    [
        params.disc_center[0] - r + 2.0 * r * (i as f64 + 0.5) / n0 as f64,
        params.disc_center[1] - r + 2.0 * r * (j as f64 + 0.5) / n1 as f64,
    ]
}

impl ChartGrid {
    /// A two-dimensional disc grid (no fiber), used for base partitions.
    pub fn disc_base(params: GridParams, n: usize) -> Result<Self> {
        if n < MIN_RESOLUTION {
            return Err(Error::Configuration(alloc::format!(
                "disc grid has {n} cells per side; at least {MIN_RESOLUTION} are required"
            )));
        }
        if !(params.disc_radius > 0.0) {
            return Err(Error::Configuration("disc radius must be positive".into()));
        }
        Ok(Self {
            tag: ManifoldTag::Disc2xCircle,
            dims: [n, n, 1],
            params,
            gluings: Vec::new(),
            periodic: [false; 3],
            front_shift: None,
            cap: false,
            mask: Some(disc_mask(&params, n, n)),
        })
    }

    fn set_periodic(&mut self, axes: &[usize]) {
        for &a in axes {
            self.periodic[a] = true;
            self.gluings.push(Gluing::Periodic { axis: a });
        }
    }

    pub fn periodic(&self, axis: usize) -> bool {
        self.periodic[axis]
    }

    pub fn has_cap(&self) -> bool {
        self.cap
    }

    pub fn lattice_len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn cap_len(&self) -> usize {
        if self.cap {
            self.dims[0] * self.dims[2]
        } else {
            0
        }
    }

    pub fn len(&self) -> usize {
        self.lattice_len() + self.cap_len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cells in one axis-0 slice.
    pub fn slab_stride(&self) -> usize {
        self.dims[1] * self.dims[2]
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn cap_index(&self, i: usize, k: usize) -> usize {
        self.lattice_len() + i * self.dims[2] + k
    }

    pub fn cell(&self, idx: usize) -> Cell {
        let l = self.lattice_len();
        if idx >= l {
            let r = idx - l;
            Cell::Cap {
                i: r / self.dims[2],
                k: r % self.dims[2],
            }
        } else {
            let k = idx % self.dims[2];
            let r = idx / self.dims[2];
            Cell::Lattice {
                i: r / self.dims[1],
                j: r % self.dims[1],
                k,
            }
        }
    }

    /// Whether base cell `(i, j)` belongs to the domain.
    #[inline]
    pub fn in_domain(&self, i: usize, j: usize) -> bool {
        self.mask.as_ref().map_or(true, |m| m[i * self.dims[1] + j])
    }

    /// Chart coordinates of base cell `(i, j)`: `(x₁, x₂)` on tori, `(x, y)`
    /// on the disc and the modular solid (`y = ∞` is not produced here).
    pub fn base_point(&self, i: usize, j: usize) -> [f64; 2] {
        let [n0, n1, _] = self.dims;
        match self.tag {
            ManifoldTag::Torus3 | ManifoldTag::Torus2 => [(i as f64 + 0.5) / n0 as f64, (j as f64 + 0.5) / n1 as f64],
            ManifoldTag::Disc2xCircle => disc_point(&self.params, n0, n1, i, j),
            ManifoldTag::ModularSolid => {
                let s = self.solid();
                let (x, y) = s.chart(s.u_center(i), s.v_center(j));
                [x, y]
            }
        }
    }

    /// Base point of cap column `i`: `(x, ∞)`.
    pub fn cap_point(&self, i: usize) -> [f64; 2] {
        let s = self.solid();
        let (x, _) = s.chart(s.u_center(i), 1.0);
        [x, f64::INFINITY]
    }

    /// Fiber coordinate of layer `k`: an angle in `[0, 2π)` on bundles, the
    /// third torus coordinate in `[0, 1)` on `Torus3`.
    pub fn fiber_coord(&self, k: usize) -> f64 {
        let n2 = self.dims[2] as f64;
        match self.tag {
            ManifoldTag::Torus3 => (k as f64 + 0.5) / n2,
            ManifoldTag::Torus2 => 0.0,
            _ => TAU * (k as f64 + 0.5) / n2,
        }
    }

    /// Fiber angle of layer `k` for equivariant sampling.
    pub fn fiber_angle(&self, k: usize) -> f64 {
        TAU * (k as f64 + 0.5) / self.dims[2] as f64
    }

    pub fn cell_center(&self, idx: usize) -> [f64; 3] {
        match self.cell(idx) {
            Cell::Lattice { i, j, k } => {
                let [a, b] = self.base_point(i, j);
                [a, b, self.fiber_coord(k)]
            }
            Cell::Cap { i, k } => {
                let [a, b] = self.cap_point(i);
                [a, b, self.fiber_coord(k)]
            }
        }
    }

    fn solid(&self) -> FundamentalSolid {
        FundamentalSolid {
            y_max: self.params.y_max,
            resolution: self.dims,
        }
    }

    /// Image of front cell `(i, 0, k)` under the front gluing.
    pub fn front_map(&self, i: usize, k: usize) -> Option<(usize, usize)> {
        let shift = self.front_shift.as_ref()?;
        Some((self.dims[0] - 1 - i, (k + shift[i]) % self.dims[2]))
    }

    /// Edges with both ends in axis-0 slab `range`: all axis-1 and axis-2
    /// edges of its slices, and axis-0 edges between its own slices.
    pub fn for_each_slab_edge(&self, range: Range<usize>, mut f: impl FnMut(usize, usize)) {
        let [_, n1, n2] = self.dims;
        for i in range.clone() {
            for j in 0..n1 {
                for k in 0..n2 {
                    let a = self.index(i, j, k);
                    if k + 1 < n2 {
                        f(a, a + 1);
                    } else if self.periodic[2] && n2 > 2 {
                        f(a, self.index(i, j, 0));
                    }
                    if j + 1 < n1 {
                        f(a, a + n2);
                    } else if self.periodic[1] && n1 > 2 {
                        f(a, self.index(i, 0, k));
                    }
                    if i + 1 < range.end {
                        f(a, a + n1 * n2);
                    }
                }
            }
        }
    }

    /// Edges not covered by the slabs delimited by `bounds`
    /// (`bounds = [0, b₁, …, n₀]`): axis-0 edges across slab seams, the axis-0
    /// wrap, front gluing edges and everything touching the cusp cap.
    pub fn for_each_seam_edge(&self, bounds: &[usize], mut f: impl FnMut(usize, usize)) {
        let [n0, n1, n2] = self.dims;
        let stride = n1 * n2;
        for &b in &bounds[1..bounds.len() - 1] {
            for r in 0..stride {
                f((b - 1) * stride + r, b * stride + r);
            }
        }
        if self.periodic[0] && n0 > 2 {
            for r in 0..stride {
                f((n0 - 1) * stride + r, r);
            }
        }
        if self.front_shift.is_some() {
            for i in 0..n0 {
                for k in 0..n2 {
                    let (i2, k2) = self.front_map(i, k).unwrap();
                    f(self.index(i, 0, k), self.index(i2, 0, k2));
                }
            }
        }
        if self.cap {
            for i in 0..n0 {
                for k in 0..n2 {
                    let c = self.cap_index(i, k);
                    f(self.index(i, n1 - 1, k), c);
                    f(c, self.cap_index((i + 1) % n0, k));
                    f(c, self.cap_index(i, (k + 1) % n2));
                }
            }
        }
    }

    pub fn for_each_edge(&self, mut f: impl FnMut(usize, usize)) {
        self.for_each_slab_edge(0..self.dims[0], &mut f);
        self.for_each_seam_edge(&[0, self.dims[0]], &mut f);
    }

    /// Sorted, deduplicated neighbors of `idx` (excluding itself).
    pub fn neighbors(&self, idx: usize) -> Vec<usize> {
        let mut out = BTreeSet::new();
        self.for_each_edge(|a, b| {
            if a == idx && b != idx {
                out.insert(b);
            } else if b == idx && a != idx {
                out.insert(a);
            }
        });
        out.into_iter().collect()
    }
}

/// Per-cell signs and component labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignLabeling {
    /// `-1`, `0` or `+1`.
    pub signs: Vec<i8>,
    /// `0` for zero cells; otherwise `1..=n_pos + n_neg`, numbered in order of
    /// each component's lowest cell index.
    pub labels: Vec<u32>,
    pub n_pos: usize,
    pub n_neg: usize,
    /// Sign of each component, indexed by `label - 1`.
    pub component_signs: Vec<i8>,
}

impl SignLabeling {
    pub fn total(&self) -> usize {
        self.n_pos + self.n_neg
    }
}

/// What gets sampled on a grid.
#[derive(Clone, Copy)]
pub enum Sampler<'a> {
    /// A real function of the cell center coordinates (see
    /// [`ChartGrid::cell_center`]).
    Scalar(&'a (dyn Fn([f64; 3]) -> f64 + Sync)),
    /// `Re(f(x)·e^{-imθ})`; the base is evaluated once per base cell.
    Equivariant(&'a EquivariantField),
}

impl fmt::Debug for Sampler<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sampler::Scalar(_) => f.write_str("Sampler::Scalar"),
            Sampler::Equivariant(e) => write!(f, "Sampler::Equivariant(weight {})", e.weight()),
        }
    }
}

#[inline]
fn sign_of(v: f64, zero_tol: f64) -> i8 {
    if v.abs() <= zero_tol || v.is_nan() {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

/// Signs of the lattice cells in axis-0 slab `range`; `out` holds exactly those
/// cells.
pub fn fill_slab_signs(grid: &ChartGrid, sampler: Sampler<'_>, zero_tol: f64, range: Range<usize>, out: &mut [i8]) {
    let [_, n1, n2] = grid.dims;
    debug_assert_eq!(out.len(), range.len() * n1 * n2);
    for (si, i) in range.enumerate() {
        for j in 0..n1 {
            let row = &mut out[(si * n1 + j) * n2..(si * n1 + j + 1) * n2];
            if !grid.in_domain(i, j) {
                row.fill(0);
                continue;
            }
            let p = grid.base_point(i, j);
            fill_fiber(grid, sampler, zero_tol, p, row);
        }
    }
}

fn fill_fiber(grid: &ChartGrid, sampler: Sampler<'_>, zero_tol: f64, p: [f64; 2], row: &mut [i8]) {
    match sampler {
        Sampler::Scalar(f) => {
            for (k, s) in row.iter_mut().enumerate() {
                *s = sign_of(f([p[0], p[1], grid.fiber_coord(k)]), zero_tol);
            }
        }
        Sampler::Equivariant(field) => {
            let v = field.base_value_unchecked(p);
            for (k, s) in row.iter_mut().enumerate() {
                *s = sign_of(real_part(v, field.weight(), grid.fiber_angle(k)), zero_tol);
            }
        }
    }
}

/// Signs of the cusp-cap cells (empty when the grid has no cap).
pub fn fill_cap_signs(grid: &ChartGrid, sampler: Sampler<'_>, zero_tol: f64, out: &mut [i8]) {
    let n2 = grid.dims[2];
    for (i, row) in out.chunks_mut(n2).enumerate() {
        fill_fiber(grid, sampler, zero_tol, grid.cap_point(i), row);
    }
}

/// Sign of the sampled function at every cell; `|v| ≤ zero_tol` gives 0.
pub fn sign_field(grid: &ChartGrid, sampler: Sampler<'_>, zero_tol: f64) -> Vec<i8> {
    let mut signs = vec![0i8; grid.len()];
    let (lattice, cap) = signs.split_at_mut(grid.lattice_len());
    fill_slab_signs(grid, sampler, zero_tol, 0..grid.dims[0], lattice);
    fill_cap_signs(grid, sampler, zero_tol, cap);
    signs
}

/// Split `n` slices into `parts` contiguous ranges: `[0, b₁, …, n]`.
pub fn slab_bounds(n: usize, parts: usize) -> Vec<usize> {
    let parts = parts.clamp(1, n.max(1));
    (0..=parts).map(|p| p * n / parts).collect()
}

/// Union same-sign neighbors inside one slab. `parent` is the slab's window
/// of the global parent array and must start as the identity.
pub fn label_slab(grid: &ChartGrid, signs: &[i8], parent: &mut [u32], range: Range<usize>) {
    let offset = (range.start * grid.slab_stride()) as u32;
    grid.for_each_slab_edge(range, |a, b| {
        let s = signs[a];
        if s != 0 && s == signs[b] {
            union_in(parent, offset, a as u32, b as u32);
        }
    });
}

/// Union across slab seams, gluings and the cusp cap on the full parent array.
pub fn merge_seams(grid: &ChartGrid, signs: &[i8], parent: &mut [u32], bounds: &[usize]) {
    grid.for_each_seam_edge(bounds, |a, b| {
        let s = signs[a];
        if s != 0 && s == signs[b] {
            union_in(parent, 0, a as u32, b as u32);
        }
    });
}

/// Turn a finished parent array into sequential labels.
pub fn finish_labeling(signs: Vec<i8>, mut parent: Vec<u32>) -> SignLabeling {
    // Every pointer goes to a smaller index, so one increasing pass compresses
    // all paths.
    for x in 0..parent.len() {
        let p = parent[x] as usize;
        parent[x] = parent[p];
    }
    let mut labels = vec![0u32; signs.len()];
    let mut component_signs = Vec::new();
    let (mut n_pos, mut n_neg) = (0, 0);
    for x in 0..signs.len() {
        let s = signs[x];
        if s == 0 {
            continue;
        }
        let r = parent[x] as usize;
        if r == x {
            component_signs.push(s);
            labels[x] = component_signs.len() as u32;
            if s > 0 {
                n_pos += 1;
            } else {
                n_neg += 1;
            }
        } else {
            labels[x] = labels[r];
        }
    }
    SignLabeling {
        signs,
        labels,
        n_pos,
        n_neg,
        component_signs,
    }
}

/// Connected components of equal nonzero sign, including across gluings.
pub fn label_components(signs: Vec<i8>, grid: &ChartGrid) -> SignLabeling {
    let mut parent: Vec<u32> = (0..grid.len() as u32).collect();
    let n0 = grid.dims[0];
    label_slab(grid, &signs, &mut parent[..grid.lattice_len()], 0..n0);
    merge_seams(grid, &signs, &mut parent, &[0, n0]);
    finish_labeling(signs, parent)
}

/// Counts at a resolution and at its doubling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodalCount {
    pub n_pos: usize,
    pub n_neg: usize,
    pub converged: bool,
    pub resolution: [usize; 3],
    /// `(n_pos, n_neg)` at the base resolution.
    pub coarse: (usize, usize),
    /// `(n_pos, n_neg)` at twice the base resolution.
    pub fine: (usize, usize),
}

impl NodalCount {
    pub fn total(&self) -> usize {
        self.n_pos + self.n_neg
    }

    /// Combine the two passes; the reported counts are the finer ones.
    pub fn from_passes(resolution: [usize; 3], coarse: (usize, usize), fine: (usize, usize)) -> Self {
        Self {
            n_pos: fine.0,
            n_neg: fine.1,
            converged: coarse == fine,
            resolution,
            coarse,
            fine,
        }
    }
}

pub fn doubled(resolution: [usize; 3]) -> [usize; 3] {
    resolution.map(|n| 2 * n)
}

/// Sign grid and labeling at one resolution.
pub fn label_at(
    sampler: Sampler<'_>,
    tag: ManifoldTag,
    resolution: [usize; 3],
    params: GridParams,
    zero_tol: f64,
) -> Result<(ChartGrid, SignLabeling)> {
    let grid = build_grid(tag, resolution, params)?;
    let signs = sign_field(&grid, sampler, zero_tol);
    let labeling = label_components(signs, &grid);
    Ok((grid, labeling))
}

/// Nodal domains of the sampled function, checked against the doubled grid.
pub fn count_nodal_domains(
    sampler: Sampler<'_>,
    tag: ManifoldTag,
    resolution: [usize; 3],
    params: GridParams,
    zero_tol: f64,
) -> Result<NodalCount> {
    let (_, a) = label_at(sampler, tag, resolution, params, zero_tol)?;
    let (_, b) = label_at(sampler, tag, doubled(resolution), params, zero_tol)?;
    Ok(NodalCount::from_passes(
        resolution,
        (a.n_pos, a.n_neg),
        (b.n_pos, b.n_neg),
    ))
}

/// Cells with a nonzero sign that touch a cell of the opposite sign, and the
/// number of components they form. A grid witness for connectivity of the
/// nodal set, not a proof.
pub fn nodal_shell_components(labeling: &SignLabeling, grid: &ChartGrid) -> usize {
    let s = &labeling.signs;
    let mut shell = vec![false; s.len()];
    grid.for_each_edge(|a, b| {
        if s[a] * s[b] < 0 {
            shell[a] = true;
            shell[b] = true;
        }
    });
    let mut parent: Vec<u32> = (0..s.len() as u32).collect();
    // Shell cells of both signs meet across the nodal set; join through
    // shared edges and through opposite-sign contacts alike.
    grid.for_each_edge(|a, b| {
        if shell[a] && shell[b] {
            union_in(&mut parent, 0, a as u32, b as u32);
        }
    });
    (0..s.len())
        .filter(|&x| {
            let mut y = x as u32;
            shell[x] && find_in(&mut parent, 0, &mut y) == x as u32
        })
        .count()
}

/// Sign changes of `θ ↦ Re(f(x)e^{-imθ})` around the fiber over `x`, sampled
/// at `n_θ` equally spaced angles.
pub fn fiber_zero_count(
    field: &EquivariantField,
    base_point: &crate::fields::BasePoint,
    n_theta: usize,
) -> Result<usize> {
    let f = field.base_value(base_point)?;
    let modulus = f.norm();
    if !(modulus > crate::fields::ANGLE_TOL) || !modulus.is_finite() {
        return Err(Error::SingularFiber { modulus });
    }
    let m = field.weight().unsigned_abs() as usize;
    if n_theta <= 2 * m {
        return Err(Error::InvalidArgument(alloc::format!(
            "{n_theta} samples cannot resolve {} fiber zeros",
            2 * m
        )));
    }
    let signs: Vec<i8> = (0..n_theta)
        .map(|j| {
            sign_of(
                real_part(f, field.weight(), TAU * (j as f64 + 0.5) / n_theta as f64),
                0.0,
            )
        })
        .filter(|&s| s != 0)
        .collect();
    let n = signs.len();
    Ok((0..n).filter(|&j| signs[j] != signs[(j + 1) % n]).count())
}

/// Degree of `f/|f|` around a circle divided by the weight `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindingIndex {
    pub degree: i64,
    pub m: u32,
}

impl WindingIndex {
    pub fn value(&self) -> f64 {
        self.degree as f64 / self.m as f64
    }
}

const MAX_WINDING_SAMPLES: usize = 1 << 20;

fn winding_pass(f: &dyn Fn([f64; 2]) -> Complex64, center: [f64; 2], radius: f64, n: usize) -> WindingPass {
    let pt = |j: usize| {
        let t = TAU * j as f64 / n as f64;
        f([center[0] + radius * t.cos(), center[1] + radius * t.sin()])
    };
    let first = pt(0);
    let mut prev = first;
    let mut total = 0.0;
    let mut min_mod = first.norm();
    let mut max_chord: f64 = 0.0;
    let mut max_step: f64 = 0.0;
    for j in 1..=n {
        let cur = if j == n { first } else { pt(j) };
        min_mod = min_mod.min(cur.norm());
        max_chord = max_chord.max((cur - prev).norm());
        let step = (cur / prev).arg();
        max_step = max_step.max(step.abs());
        total += step;
        prev = cur;
    }
    WindingPass {
        winding: total / TAU,
        min_mod,
        interp_error: 0.5 * max_chord,
        max_step,
    }
}

struct WindingPass {
    winding: f64,
    min_mod: f64,
    interp_error: f64,
    max_step: f64,
}

/// Winding index of the zeros of `f` enclosed by a circle.
///
/// The phase is unwrapped with steps capped at `π/2`; the sample count is
/// doubled until the cap holds, `min |f|` exceeds ten times the chord-based
/// interpolation error, and two successive passes agree.
pub fn winding_index(
    f: &dyn Fn([f64; 2]) -> Complex64,
    center: [f64; 2],
    radius: f64,
    n_samples: usize,
    m: u32,
) -> Result<WindingIndex> {
    if m == 0 || !(radius > 0.0) {
        return Err(Error::InvalidArgument(
            "winding index needs m > 0 and a positive radius".into(),
        ));
    }
    let mut n = n_samples.max(8);
    let mut last: Option<i64> = None;
    let mut pass = winding_pass(f, center, radius, n);
    loop {
        let ok = pass.max_step <= PI / 2.0 && pass.min_mod > 10.0 * pass.interp_error;
        if ok {
            let deg = pass.winding.round();
            if (pass.winding - deg).abs() > 0.1 {
                return Err(Error::Sampling { winding: pass.winding });
            }
            let deg = deg as i64;
            if last == Some(deg) {
                return Ok(WindingIndex { degree: deg, m });
            }
            last = Some(deg);
        }
        if n >= MAX_WINDING_SAMPLES {
            if pass.min_mod <= 10.0 * pass.interp_error {
                return Err(Error::Radius {
                    min_modulus: pass.min_mod,
                    interp_error: pass.interp_error,
                });
            }
            return Err(Error::Sampling { winding: pass.winding });
        }
        n *= 2;
        pass = winding_pass(f, center, radius, n);
    }
}

/// A rectangular lattice of `n₀ × n₁` cells in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneLattice {
    pub origin: [f64; 2],
    pub step: [f64; 2],
    pub n: [usize; 2],
    /// The lattice tiles a torus; clusters may wrap.
    pub periodic: bool,
}

impl PlaneLattice {
    /// The unit torus with `n × n` cells, shifted by `offset` cells.
    pub fn unit_torus(n: usize, offset: [f64; 2]) -> Self {
        let h = 1.0 / n as f64;
        Self {
            origin: [offset[0] * h, offset[1] * h],
            step: [h, h],
            n: [n, n],
            periodic: true,
        }
    }

    pub fn node(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.origin[0] + i as f64 * self.step[0],
            self.origin[1] + j as f64 * self.step[1],
        ]
    }

    pub fn cell_center(&self, i: usize, j: usize) -> [f64; 2] {
        self.node(i, j).map2(self.step, |a, h| a + 0.5 * h)
    }
}

trait Map2 {
    fn map2(self, other: [f64; 2], f: impl Fn(f64, f64) -> f64) -> [f64; 2];
}

impl Map2 for [f64; 2] {
    fn map2(self, o: [f64; 2], f: impl Fn(f64, f64) -> f64) -> [f64; 2] {
        [f(self[0], o[0]), f(self[1], o[1])]
    }
}

/// Cells over which both `Re f` and `Im f` change sign between corners.
pub fn base_zero_cells(f: &dyn Fn([f64; 2]) -> Complex64, lattice: &PlaneLattice) -> Vec<[usize; 2]> {
    let [n0, n1] = lattice.n;
    let mut nodes = Vec::with_capacity((n0 + 1) * (n1 + 1));
    for i in 0..=n0 {
        for j in 0..=n1 {
            nodes.push(f(lattice.node(i, j)));
        }
    }
    let at = |i: usize, j: usize| nodes[i * (n1 + 1) + j];
    let changes = |v: [f64; 4]| {
        let pos = v.iter().any(|&x| x > 0.0);
        let neg = v.iter().any(|&x| x < 0.0);
        let zero = v.iter().any(|&x| x == 0.0);
        (pos && neg) || zero
    };
    let mut out = Vec::new();
    for i in 0..n0 {
        for j in 0..n1 {
            let c = [at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)];
            if changes(c.map(|z| z.re)) && changes(c.map(|z| z.im)) {
                out.push([i, j]);
            }
        }
    }
    out
}

/// Group flagged cells into 8-connected clusters (wrapping on periodic
/// lattices) and return each cluster's centroid in plane coordinates.
pub fn zero_clusters(cells: &[[usize; 2]], lattice: &PlaneLattice) -> Vec<[f64; 2]> {
    let [n0, n1] = lattice.n;
    let mut uf = crate::union_find::UnionFind::new(cells.len());
    let pos: alloc::collections::BTreeMap<[usize; 2], usize> = cells.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    for (k, &[i, j]) in cells.iter().enumerate() {
        for di in -1i64..=1 {
            for dj in -1i64..=1 {
                let (mut a, mut b) = (i as i64 + di, j as i64 + dj);
                if lattice.periodic {
                    a = a.rem_euclid(n0 as i64);
                    b = b.rem_euclid(n1 as i64);
                }
                if a < 0 || b < 0 || a >= n0 as i64 || b >= n1 as i64 {
                    continue;
                }
                if let Some(&o) = pos.get(&[a as usize, b as usize]) {
                    uf.union(k as u32, o as u32);
                }
            }
        }
    }
    let mut groups: alloc::collections::BTreeMap<u32, Vec<[usize; 2]>> = Default::default();
    for (k, &c) in cells.iter().enumerate() {
        groups.entry(uf.find(k as u32)).or_default().push(c);
    }
    groups
        .values()
        .map(|g| {
            // unwrap relative to the first cell so wrapped clusters stay compact
            let [i0, j0] = g[0];
            let unwrap = |v: usize, v0: usize, n: usize| {
                let d = v as i64 - v0 as i64;
                if lattice.periodic && d.unsigned_abs() as usize > n / 2 {
                    v as f64 - d.signum() as f64 * n as f64
                } else {
                    v as f64
                }
            };
            let (mut si, mut sj) = (0.0, 0.0);
            for &[i, j] in g {
                si += unwrap(i, i0, n0);
                sj += unwrap(j, j0, n1);
            }
            let len = g.len() as f64;
            [
                lattice.origin[0] + (si / len + 0.5) * lattice.step[0],
                lattice.origin[1] + (sj / len + 0.5) * lattice.step[1],
            ]
        })
        .collect()
}

/// Human-readable resolution like `96x96x192`.
pub fn format_resolution(r: [usize; 3]) -> String {
    alloc::format!("{}x{}x{}", r[0], r[1], r[2])
}
