//! Nodal domains over a disc from the sign partitions of `Re f` and `Im f`.
//!
//! Over a disc `U` the lift `Re(f e^{-imθ})` restricted to the slices
//! `θ = sπ/(2m)` is `Re f`, `Im f`, `-Re f`, `-Im f`, repeating. Its nodal
//! domains are the connected components of the layered graph `G_m` whose
//! vertices are the sign regions on consecutive slices, joined when the
//! regions overlap and carry the same sign.
//!
//! Rows `4j+1` and `4j+3` hold the regions of `Re f` (colored `c_P` and
//! `1 - c_P`), rows `4j+2` and `4j` those of `Im f` (colored `c_Q` and
//! `1 - c_Q`); row `4m` is row `0`.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::nodal::{label_components, ChartGrid};
use crate::union_find::UnionFind;

/// The two sign partitions of a disc and their colorings.
#[derive(Debug, Clone)]
pub struct PartitionPair {
    pub grid: ChartGrid,
    /// Region of `Re f` per base cell, `1..=n_p`; 0 where unassigned.
    pub p_labels: Vec<u32>,
    /// Region of `Im f` per base cell, `1..=n_q`; 0 where unassigned.
    pub q_labels: Vec<u32>,
    pub n_p: usize,
    pub n_q: usize,
    /// `c_P`, indexed by region − 1.
    pub c_p: Vec<u8>,
    /// `c_Q`, indexed by region − 1.
    pub c_q: Vec<u8>,
}

impl PartitionPair {
    /// `(a, b)` pairs, 0-based, for which `Ω_P(a) ∩ Ω_Q(b)` contains a cell.
    pub fn overlaps(&self) -> BTreeSet<(usize, usize)> {
        self.p_labels
            .iter()
            .zip(&self.q_labels)
            .filter(|(&p, &q)| p != 0 && q != 0)
            .map(|(&p, &q)| (p as usize - 1, q as usize - 1))
            .collect()
    }

    fn overlap_matrix(&self) -> Vec<bool> {
        let mut m = vec![false; self.n_p * self.n_q];
        for (a, b) in self.overlaps() {
            m[a * self.n_q + b] = true;
        }
        m
    }
}

/// Sign regions of `Re f` and `Im f` on a disc grid (see
/// [`ChartGrid::disc_base`]). With `colorings_from_sign` a region is colored 1
/// where its function is positive; otherwise all colors start at 0 and may be
/// set by the caller.
pub fn partitions_from_field(
    f: &dyn Fn([f64; 2]) -> Complex64,
    grid: &ChartGrid,
    zero_tol: f64,
    colorings_from_sign: bool,
) -> Result<PartitionPair> {
    let [n0, n1, _] = grid.dims;
    let mut re = vec![0i8; n0 * n1];
    let mut im = vec![0i8; n0 * n1];
    let sign = |v: f64| {
        if v.abs() <= zero_tol || v.is_nan() {
            0
        } else if v > 0.0 {
            1
        } else {
            -1
        }
    };
    for i in 0..n0 {
        for j in 0..n1 {
            if grid.in_domain(i, j) {
                let v = f(grid.base_point(i, j));
                re[i * n1 + j] = sign(v.re);
                im[i * n1 + j] = sign(v.im);
            }
        }
    }
    if re.iter().all(|&s| s == 0) {
        return Err(Error::DegenerateField("Re f"));
    }
    if im.iter().all(|&s| s == 0) {
        return Err(Error::DegenerateField("Im f"));
    }
    let p = label_components(re, grid);
    let q = label_components(im, grid);
    let color = |signs: &[i8]| -> Vec<u8> { signs.iter().map(|&s| u8::from(colorings_from_sign && s > 0)).collect() };
    Ok(PartitionPair {
        grid: grid.clone(),
        n_p: p.total(),
        n_q: q.total(),
        c_p: color(&p.component_signs),
        c_q: color(&q.component_signs),
        p_labels: p.labels,
        q_labels: q.labels,
    })
}

/// A vertex `v_{row, col}`; `col` is 0-based.
pub type Vertex = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredGraph {
    pub m: usize,
    pub n_p: usize,
    pub n_q: usize,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl LayeredGraph {
    pub fn rows(&self) -> usize {
        4 * self.m
    }

    /// Vertices in `row`: `n_P` on odd rows, `n_Q` on even rows.
    pub fn row_len(&self, row: usize) -> usize {
        if row % 2 == 1 {
            self.n_p
        } else {
            self.n_q
        }
    }

    fn row_offset(&self, row: usize) -> usize {
        (row / 2) * (self.n_p + self.n_q) + if row % 2 == 1 { self.n_q } else { 0 }
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.m * (self.n_p + self.n_q)
    }

    pub fn vertex_id(&self, v: Vertex) -> usize {
        self.row_offset(v.0) + v.1
    }
}

/// The graph `G_m(P, Q, c_P, c_Q)`.
pub fn build_graph(pp: &PartitionPair, m: usize) -> LayeredGraph {
    let ov = pp.overlap_matrix();
    let (np, nq) = (pp.n_p, pp.n_q);
    let rows = 4 * m;
    let mut edges = Vec::new();
    let not = |c: u8| 1 - c;
    for j in 0..m {
        let r = 4 * j;
        for a in 0..nq {
            for b in 0..np {
                if !ov[b * nq + a] {
                    continue;
                }
                // Q-region a on rows 4j and 4j+2, P-region b on rows 4j+1 and 4j+3
                if not(pp.c_q[a]) == pp.c_p[b] {
                    edges.push(((r, a), (r + 1, b)));
                }
                if pp.c_q[a] == not(pp.c_p[b]) {
                    edges.push(((r + 2, a), (r + 3, b)));
                }
            }
        }
        for a in 0..np {
            for b in 0..nq {
                if !ov[a * nq + b] {
                    continue;
                }
                if pp.c_p[a] == pp.c_q[b] {
                    edges.push(((r + 1, a), (r + 2, b)));
                }
                if not(pp.c_p[a]) == not(pp.c_q[b]) {
                    edges.push(((r + 3, a), ((r + 4) % rows, b)));
                }
            }
        }
    }
    LayeredGraph {
        m,
        n_p: np,
        n_q: nq,
        edges,
    }
}

/// Per-vertex component ids (smallest vertex id of the component).
pub fn component_roots(g: &LayeredGraph) -> Vec<u32> {
    let mut uf = UnionFind::new(g.vertex_count());
    for &(a, b) in &g.edges {
        uf.union(g.vertex_id(a) as u32, g.vertex_id(b) as u32);
    }
    (0..g.vertex_count() as u32).map(|v| uf.find(v)).collect()
}

pub fn graph_components(g: &LayeredGraph) -> usize {
    component_roots(g)
        .iter()
        .enumerate()
        .filter(|&(v, &r)| v as u32 == r)
        .count()
}

/// Whether every component contains a vertex on an odd row.
pub fn every_component_meets_odd_rows(g: &LayeredGraph) -> bool {
    let roots = component_roots(g);
    let mut hit = vec![false; roots.len()];
    for row in (1..g.rows()).step_by(2) {
        for col in 0..g.row_len(row) {
            hit[roots[g.vertex_id((row, col))] as usize] = true;
        }
    }
    roots.iter().enumerate().all(|(v, &r)| v as u32 != r || hit[v])
}

/// Regions `a₁, a₂` of `P` and `b₁, b₂` of `Q` meeting pairwise, with
/// `c_P(a₁) + c_P(a₂) = c_Q(b₁) + c_Q(b₂) = 1`.
pub fn crossing_witness(pp: &PartitionPair) -> Option<[usize; 4]> {
    let ov = pp.overlap_matrix();
    let nq = pp.n_q;
    for a1 in 0..pp.n_p {
        for a2 in a1 + 1..pp.n_p {
            if pp.c_p[a1] + pp.c_p[a2] != 1 {
                continue;
            }
            for b1 in 0..nq {
                if !(ov[a1 * nq + b1] && ov[a2 * nq + b1]) {
                    continue;
                }
                for b2 in b1 + 1..nq {
                    if pp.c_q[b1] + pp.c_q[b2] == 1 && ov[a1 * nq + b2] && ov[a2 * nq + b2] {
                        return Some([a1, a2, b1, b2]);
                    }
                }
            }
        }
    }
    None
}

/// Largest bounding-box side, in cells, that a cluster of near-common-zero
/// cells may have.
pub const MAX_COMMON_ZERO_EXTENT: usize = 3;

/// Diagnostic from the genericity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Genericity {
    Generic,
    /// A cluster of common-zero cells is too long to be an isolated point.
    Extended {
        extent: usize,
    },
    /// Common-zero cells enclose a hole.
    Loop,
}

/// Heuristic check that `Re f = Im f = 0` contains no closed curve.
///
/// A cell is a common-zero candidate when it is unassigned in `P` or sits on a
/// `P` interface (a face neighbor lies in another region), and likewise for
/// `Q`. Candidates are grouped by 8-connectivity; the pair is rejected if a
/// group spans more than [`MAX_COMMON_ZERO_EXTENT`] cells or if the
/// candidates enclose a region of the disc. Passing is not a proof.
pub fn generic_pair_diagnostic(pp: &PartitionPair) -> Genericity {
    let [n0, n1, _] = pp.grid.dims;
    let idx = |i: usize, j: usize| i * n1 + j;
    let inside = |i: usize, j: usize| pp.grid.in_domain(i, j);
    let interface = |labels: &[u32], i: usize, j: usize| {
        let l = labels[idx(i, j)];
        if l == 0 {
            return true;
        }
        let mut out = false;
        if i + 1 < n0 && inside(i + 1, j) {
            out |= labels[idx(i + 1, j)] != l;
        }
        if j + 1 < n1 && inside(i, j + 1) {
            out |= labels[idx(i, j + 1)] != l;
        }
        out
    };
    let mut cand = vec![false; n0 * n1];
    for i in 0..n0 {
        for j in 0..n1 {
            if inside(i, j) {
                cand[idx(i, j)] = interface(&pp.p_labels, i, j) && interface(&pp.q_labels, i, j);
            }
        }
    }

    // 8-connected candidate clusters
    let mut uf = UnionFind::new(n0 * n1);
    for i in 0..n0 {
        for j in 0..n1 {
            if !cand[idx(i, j)] {
                continue;
            }
            for (di, dj) in [(1i64, 0i64), (0, 1), (1, 1), (1, -1)] {
                let (a, b) = (i as i64 + di, j as i64 + dj);
                if a < n0 as i64 && b >= 0 && b < n1 as i64 && cand[idx(a as usize, b as usize)] {
                    uf.union(idx(i, j) as u32, idx(a as usize, b as usize) as u32);
                }
            }
        }
    }
    let mut boxes: alloc::collections::BTreeMap<u32, [usize; 4]> = Default::default();
    for i in 0..n0 {
        for j in 0..n1 {
            if cand[idx(i, j)] {
                let r = uf.find(idx(i, j) as u32);
                let b = boxes.entry(r).or_insert([i, i, j, j]);
                b[0] = b[0].min(i);
                b[1] = b[1].max(i);
                b[2] = b[2].min(j);
                b[3] = b[3].max(j);
            }
        }
    }
    if let Some(extent) = boxes
        .values()
        .map(|b| (b[1] - b[0] + 1).max(b[3] - b[2] + 1))
        .find(|&e| e > MAX_COMMON_ZERO_EXTENT)
    {
        return Genericity::Extended { extent };
    }

    // Holes: 4-connected non-candidate cells that cannot reach the outside of
    // the disc or the grid border.
    let outside = n0 * n1;
    let mut uf = UnionFind::new(n0 * n1 + 1);
    for i in 0..n0 {
        for j in 0..n1 {
            let here = idx(i, j);
            if cand[here] {
                continue;
            }
            if !inside(i, j) || i == 0 || j == 0 || i + 1 == n0 || j + 1 == n1 {
                uf.union(here as u32, outside as u32);
            }
            if i + 1 < n0 && !cand[idx(i + 1, j)] {
                uf.union(here as u32, idx(i + 1, j) as u32);
            }
            if j + 1 < n1 && !cand[idx(i, j + 1)] {
                uf.union(here as u32, idx(i, j + 1) as u32);
            }
        }
    }
    let out_root = uf.find(outside as u32);
    for x in 0..n0 * n1 {
        if !cand[x] && uf.find(x as u32) != out_root {
            return Genericity::Loop;
        }
    }
    Genericity::Generic
}

pub fn check_generic_pair(pp: &PartitionPair) -> bool {
    generic_pair_diagnostic(pp) == Genericity::Generic
}

/// Number of nodal domains of `Re(f e^{-imθ})` over the disc, from `G_m`.
pub fn count_via_graph(f: &dyn Fn([f64; 2]) -> Complex64, m: usize, grid: &ChartGrid) -> Result<usize> {
    if m == 0 {
        return Err(Error::InvalidArgument("the weight m must be positive".into()));
    }
    let pp = partitions_from_field(f, grid, 0.0, true)?;
    match generic_pair_diagnostic(&pp) {
        Genericity::Generic => Ok(graph_components(&build_graph(&pp, m))),
        Genericity::Extended { extent } => Err(Error::NonGeneric(alloc::format!(
            "common zeros of Re f and Im f form a cluster {extent} cells across"
        ))),
        Genericity::Loop => Err(Error::NonGeneric(String::from(
            "common zeros of Re f and Im f enclose a region",
        ))),
    }
}
