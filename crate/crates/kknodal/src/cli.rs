//! Argument parsing and subcommand dispatch.

use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use kknodal_core::nodal::ManifoldTag;
use serde::Serialize;

use crate::experiments::{self as ex, FieldKind};
use crate::io::{write_csv, write_json, GraphExport, Summary};
use crate::par::Parallelism;

#[derive(Debug, Parser)]
#[command(
    name = "kknodal",
    version,
    about = "Nodal domains of equivariant eigenfunctions on circle bundles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Manifold the subcommand runs on; rejected if it does not match.
    #[arg(long, global = true)]
    pub manifold: Option<String>,

    /// Worker threads for slab labeling (0 = all cores). Output does not
    /// depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Write the JSON summary here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Report `elapsed_ms` as 0, making summaries byte-identical across runs.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the Laplace eigenbasis of the flat three-torus.
    TorusBasis {
        #[arg(long, default_value_t = 1)]
        max_freq: u32,
    },
    /// Nodal domain count of every torus basis element.
    TorusCount {
        #[arg(long, default_value_t = 1)]
        max_freq: u32,
        #[arg(long, default_value = "32x32x32")]
        res: String,
        #[arg(long, default_value_t = 0.0)]
        zero_tol: f64,
    },
    /// Nodal domains of sin(2πmx)·sin(2πmy) on the two-torus.
    T2Count {
        /// Comma-separated weights.
        #[arg(long, default_value = "1,2,3")]
        m: String,
        #[arg(long, default_value = "64x64")]
        res: String,
        #[arg(long, default_value_t = 0.0)]
        zero_tol: f64,
    },
    /// Coefficients τ(1..n) of the discriminant.
    ModularTau {
        #[arg(long, default_value_t = 7)]
        n: usize,
    },
    /// Nodal domains of Re(y¹²Δ²e^{-24iθ}) on the unit tangent bundle of the
    /// modular surface, with face checks.
    ModularCount {
        #[arg(long, default_value = "96x96x192")]
        res: String,
        #[arg(long, default_value_t = 2.0)]
        ymax: f64,
        #[arg(long, default_value_t = 0.0)]
        zero_tol: f64,
        /// Face samples (side, front, top) with component labels.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Finite-difference residuals of the sphere and Maass eigen-equations.
    SphereCheck {
        /// Difference step.
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
    },
    /// Partition-graph count against the grid count.
    GraphCount {
        #[arg(long, value_enum, default_value_t = FieldKind::Random)]
        field: FieldKind,
        /// Comma-separated weights.
        #[arg(long, default_value = "1,2,3")]
        m: String,
        /// Random fields to test.
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value = "64x64x48")]
        res: String,
        /// Export the graph of a fixed field at the first weight.
        #[arg(long)]
        graph_json: Option<PathBuf>,
    },
    /// Winding indices of the base zeros of random torus fields.
    Index {
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = 128)]
        res: usize,
    },
    /// Sign changes along random regular fibers.
    FiberCount {
        #[arg(long, default_value = "1,2,3,24")]
        m: String,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SeedArg {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::TorusBasis { .. } => "torus-basis",
            Command::TorusCount { .. } => "torus-count",
            Command::T2Count { .. } => "t2-count",
            Command::ModularTau { .. } => "modular-tau",
            Command::ModularCount { .. } => "modular-count",
            Command::SphereCheck { .. } => "sphere-check",
            Command::GraphCount { .. } => "graph-count",
            Command::Index { .. } => "index",
            Command::FiberCount { .. } => "fiber-count",
        }
    }

    /// The manifold a subcommand works on, if it works on one.
    pub fn manifold(&self) -> Option<ManifoldTag> {
        match self {
            Command::TorusBasis { .. } | Command::TorusCount { .. } => Some(ManifoldTag::Torus3),
            Command::T2Count { .. } | Command::Index { .. } => Some(ManifoldTag::Torus2),
            Command::ModularCount { .. } => Some(ManifoldTag::ModularSolid),
            Command::GraphCount { .. } => Some(ManifoldTag::Disc2xCircle),
            _ => None,
        }
    }
}

/// `AxBxC` (or `AxB` when `N = 2`).
pub fn parse_resolution<const N: usize>(s: &str) -> anyhow::Result<[usize; N]> {
    let parts: Vec<&str> = s.split('x').collect();
    if parts.len() != N {
        bail!("resolution `{s}` must have {N} factors separated by `x`");
    }
    let mut out = [0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p
            .trim()
            .parse()
            .with_context(|| format!("resolution `{s}`: `{p}` is not a cell count"))?;
    }
    Ok(out)
}

pub fn parse_list<T: FromStr>(s: &str) -> anyhow::Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    let v = s
        .split(',')
        .map(|p| p.trim().parse::<T>().with_context(|| format!("`{p}` in list `{s}`")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    if v.is_empty() {
        bail!("empty list");
    }
    Ok(v)
}

fn check_zero_tol(t: f64) -> anyhow::Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        bail!("--zero-tol must be a finite non-negative number, got {t}");
    }
    Ok(())
}

struct Emitter<'a> {
    cli: &'a Cli,
    start: Instant,
}

impl Emitter<'_> {
    fn emit<P: Serialize, R: Serialize>(
        &self,
        params: P,
        results: R,
        converged: bool,
        passed: bool,
    ) -> anyhow::Result<bool> {
        let elapsed_ms = if self.cli.no_timing {
            0
        } else {
            self.start.elapsed().as_millis() as u64
        };
        let summary = Summary {
            command: self.cli.command.name(),
            params,
            results,
            converged,
            passed,
            elapsed_ms,
        };
        write_json(&summary, self.cli.out.as_deref())?;
        Ok(passed)
    }
}

/// Runs one subcommand and writes its summary. `Ok(false)` means a check
/// failed.
pub fn run(cli: &Cli) -> anyhow::Result<bool> {
    let start = Instant::now();
    if let Some(m) = &cli.manifold {
        let tag: ManifoldTag = m.parse()?;
        match cli.command.manifold() {
            Some(expected) if expected == tag => {}
            Some(expected) => bail!(
                "--manifold {tag} does not match `{}`, which runs on {expected}",
                cli.command.name()
            ),
            None => bail!("`{}` does not take --manifold", cli.command.name()),
        }
    }
    let par = Parallelism::new(cli.threads)?;
    let out = Emitter { cli, start };

    match &cli.command {
        Command::TorusBasis { max_freq } => {
            let basis = ex::torus_basis(*max_freq)?;
            let gram = ex::gram_report(*max_freq)?;
            #[derive(Serialize)]
            struct R {
                elements: Vec<ex::BasisEntry>,
                gram: ex::GramReport,
                /// Fourier modes with every |frequency| ≤ max_freq; any
                /// shortfall would be multiplicity the enumeration misses.
                box_dimension: usize,
                missing_multiplicity: usize,
            }
            let box_dimension = (2 * *max_freq as usize + 1).pow(3);
            let missing_multiplicity = box_dimension.saturating_sub(basis.len());
            let passed = gram.passed(1e-12) && missing_multiplicity == 0;
            out.emit(
                serde_json::json!({ "max_freq": max_freq }),
                R {
                    elements: basis,
                    gram,
                    box_dimension,
                    missing_multiplicity,
                },
                true,
                passed,
            )
        }
        Command::TorusCount {
            max_freq,
            res,
            zero_tol,
        } => {
            check_zero_tol(*zero_tol)?;
            let r = ex::torus_count(*max_freq, parse_resolution(res)?, *zero_tol, &par)?;
            let (c, p) = (r.converged(), r.passed());
            out.emit(
                serde_json::json!({ "max_freq": max_freq, "res": res, "zero_tol": zero_tol }),
                r,
                c,
                p,
            )
        }
        Command::T2Count { m, res, zero_tol } => {
            check_zero_tol(*zero_tol)?;
            let ms: Vec<u32> = parse_list(m)?;
            let r = ex::t2_count(&ms, parse_resolution(res)?, *zero_tol, &par)?;
            let c = r.iter().all(|e| e.count.converged);
            let p = r.iter().all(|e| e.passed());
            out.emit(
                serde_json::json!({ "m": ms, "res": res, "zero_tol": zero_tol }),
                r,
                c,
                p,
            )
        }
        Command::ModularTau { n } => {
            if *n == 0 {
                bail!("--n must be at least 1");
            }
            let tau = ex::tau(*n)?;
            let nums = tau
                .iter()
                .map(|t| t.to_string().parse::<serde_json::Number>())
                .collect::<Result<Vec<_>, _>>()?;
            out.emit(serde_json::json!({ "n": n }), nums, true, true)
        }
        Command::ModularCount {
            res,
            ymax,
            zero_tol,
            csv,
        } => {
            check_zero_tol(*zero_tol)?;
            let run = ex::modular_count(parse_resolution(res)?, *ymax, *zero_tol, &par)?;
            if let Some(path) = csv {
                write_csv(&ex::face_rows(&run), path)?;
            }
            let r = run.report;
            let (c, p) = (r.count.converged, r.passed());
            out.emit(
                serde_json::json!({ "res": res, "ymax": ymax, "zero_tol": zero_tol }),
                r,
                c,
                p,
            )
        }
        Command::SphereCheck { h } => {
            if !(*h > 0.0) {
                bail!("--h must be positive");
            }
            let r = ex::sphere_check(*h)?;
            let c = r.hopf.iter().all(|x| !x.coarse) && !r.maass.coarse;
            let p = r.passed();
            out.emit(serde_json::json!({ "h": h }), r, c, p)
        }
        Command::GraphCount {
            field,
            m,
            count,
            seed,
            res,
            graph_json,
        } => {
            let ms: Vec<usize> = parse_list(m)?;
            if ms.contains(&0) {
                bail!("weights must be positive");
            }
            let resolution = parse_resolution(res)?;
            if let Some(path) = graph_json {
                let g = ex::fixed_graph(*field, ms[0], resolution[0])?;
                write_json(&GraphExport::from(&g), Some(path))?;
            }
            let r = ex::graph_experiment(*field, &ms, *count, seed.seed, resolution, &par)?;
            let c = r.comparisons().all(|x| x.grid.converged);
            let p = r.passed();
            out.emit(
                serde_json::json!({
                    "field": field, "m": ms, "count": count, "seed": seed.seed, "res": res,
                }),
                r,
                c,
                p,
            )
        }
        Command::Index { count, m, seed, res } => {
            if *m == 0 {
                bail!("--m must be positive");
            }
            let r = ex::index_experiment(*count, *m, *res, seed.seed)?;
            let p = r.passed();
            out.emit(
                serde_json::json!({ "count": count, "m": m, "seed": seed.seed, "res": res }),
                r,
                true,
                p,
            )
        }
        Command::FiberCount { m, count, seed } => {
            let ms: Vec<u32> = parse_list(m)?;
            if ms.contains(&0) {
                bail!("weights must be positive");
            }
            let r = ex::fiber_counts(&ms, *count, seed.seed)?;
            let p = r.iter().all(|x| x.failures == 0);
            out.emit(
                serde_json::json!({ "m": ms, "count": count, "seed": seed.seed }),
                r,
                true,
                p,
            )
        }
    }
}
