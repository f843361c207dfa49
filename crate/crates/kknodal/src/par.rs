//! Slab-parallel sign sampling and labeling.
//!
//! The lattice is cut into contiguous axis-0 slabs. Each slab is sampled and
//! labeled on its own window of the global parent array; seams, gluings and
//! the cusp cap are merged afterwards on one thread. Because every union-find
//! root is the smallest index of its set, the labels do not depend on how the
//! grid was cut or on the thread count.

use std::ops::Range;

use anyhow::Context;
use kknodal_core::nodal::{
    build_grid, doubled, fill_cap_signs, fill_slab_signs, finish_labeling, label_slab, merge_seams, slab_bounds,
    ChartGrid, GridParams, ManifoldTag, NodalCount, Sampler, SignLabeling,
};
use rayon::prelude::*;

pub struct Parallelism {
    pool: rayon::ThreadPool,
}

impl Parallelism {
    /// `threads = 0` uses all available cores.
    pub fn new(threads: usize) -> anyhow::Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .context("building the thread pool")?;
        Ok(Self { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }
}

fn split_slabs<'a, T>(mut data: &'a mut [T], bounds: &[usize], stride: usize) -> Vec<(Range<usize>, &'a mut [T])> {
    let mut out = Vec::with_capacity(bounds.len() - 1);
    for w in bounds.windows(2) {
        let (head, tail) = data.split_at_mut((w[1] - w[0]) * stride);
        out.push((w[0]..w[1], head));
        data = tail;
    }
    out
}

/// Sign field and component labels of `sampler` on `grid`.
pub fn label(grid: &ChartGrid, sampler: Sampler<'_>, zero_tol: f64, par: &Parallelism) -> SignLabeling {
    par.install(|| {
        let n0 = grid.dims[0];
        let bounds = slab_bounds(n0, (4 * par.threads()).min(n0));
        let stride = grid.slab_stride();
        let lattice = grid.lattice_len();

        let mut signs = vec![0i8; grid.len()];
        let (lat, cap) = signs.split_at_mut(lattice);
        split_slabs(lat, &bounds, stride)
            .into_par_iter()
            .for_each(|(r, out)| fill_slab_signs(grid, sampler, zero_tol, r, out));
        fill_cap_signs(grid, sampler, zero_tol, cap);

        let mut parent: Vec<u32> = (0..grid.len() as u32).collect();
        split_slabs(&mut parent[..lattice], &bounds, stride)
            .into_par_iter()
            .for_each(|(r, p)| label_slab(grid, &signs, p, r));
        merge_seams(grid, &signs, &mut parent, &bounds);
        finish_labeling(signs, parent)
    })
}

pub fn label_at(
    sampler: Sampler<'_>,
    tag: ManifoldTag,
    resolution: [usize; 3],
    params: GridParams,
    zero_tol: f64,
    par: &Parallelism,
) -> kknodal_core::Result<(ChartGrid, SignLabeling)> {
    let grid = build_grid(tag, resolution, params)?;
    let l = label(&grid, sampler, zero_tol, par);
    Ok((grid, l))
}

/// Parallel counterpart of [`kknodal_core::nodal::count_nodal_domains`].
pub fn count_nodal_domains(
    sampler: Sampler<'_>,
    tag: ManifoldTag,
    resolution: [usize; 3],
    params: GridParams,
    zero_tol: f64,
    par: &Parallelism,
) -> kknodal_core::Result<NodalCount> {
    let (_, a) = label_at(sampler, tag, resolution, params, zero_tol, par)?;
    let (_, b) = label_at(sampler, tag, doubled(resolution), params, zero_tol, par)?;
    Ok(NodalCount::from_passes(
        resolution,
        (a.n_pos, a.n_neg),
        (b.n_pos, b.n_neg),
    ))
}
