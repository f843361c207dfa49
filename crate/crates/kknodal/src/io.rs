//! Output formats: a JSON summary per run and CSV tables of samples.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use kknodal_core::nodal::NodalCount;
use kknodal_core::partition_graph::LayeredGraph;
use kknodal_core::torus_basis::{Factor, TorusBasisElement};
use serde::Serialize;

/// Envelope written by every subcommand.
#[derive(Debug, Serialize)]
pub struct Summary<P: Serialize, R: Serialize> {
    pub command: &'static str,
    pub params: P,
    pub results: R,
    pub converged: bool,
    pub passed: bool,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CountDto {
    pub n_pos: usize,
    pub n_neg: usize,
    pub total: usize,
    pub converged: bool,
    pub coarse: [usize; 2],
    pub fine: [usize; 2],
}

impl From<&NodalCount> for CountDto {
    fn from(c: &NodalCount) -> Self {
        Self {
            n_pos: c.n_pos,
            n_neg: c.n_neg,
            total: c.total(),
            converged: c.converged,
            coarse: [c.coarse.0, c.coarse.1],
            fine: [c.fine.0, c.fine.1],
        }
    }
}

/// One sample on a face of the modular solid.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FaceRow {
    pub face: &'static str,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub value: f64,
    pub sign: i8,
    pub label: u32,
}

fn factor_expr(f: Factor, var: &str) -> Option<String> {
    if f.freq == 0 {
        return (f.j == 0).then(|| "0".to_string());
    }
    let func = if f.j == 1 { "cos" } else { "sin" };
    let arg = if f.freq == 1 {
        format!("2π{var}")
    } else {
        format!("{}π{var}", 2 * f.freq)
    };
    Some(format!("{func}({arg})"))
}

/// Human-readable form, e.g. `cos(2πx)cos(4πy) - 1/2·sin(2πz)`.
pub fn element_expression(e: &TorusBasisElement) -> String {
    let mut out = String::new();
    for (n, t) in e.terms.iter().enumerate() {
        let factors: Vec<String> = t
            .factors
            .iter()
            .zip(["x", "y", "z"])
            .filter_map(|(&f, v)| factor_expr(f, v))
            .collect();
        let negative = t.coeff.num < 0;
        let mag = t.coeff.num.unsigned_abs();
        let coeff = match (mag, t.coeff.den) {
            (1, 1) => String::new(),
            (a, 1) => format!("{a}·"),
            (a, d) => format!("{a}/{d}·"),
        };
        let body = if factors.is_empty() {
            coeff.trim_end_matches('·').to_string()
        } else {
            format!("{coeff}{}", factors.concat())
        };
        let body = if body.is_empty() { "1".to_string() } else { body };
        match (n, negative) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    out
}

#[derive(Debug, Serialize)]
pub struct GraphExport {
    pub m: usize,
    pub n_p: usize,
    pub n_q: usize,
    pub vertices: Vec<[usize; 2]>,
    pub edges: Vec<[[usize; 2]; 2]>,
}

impl From<&LayeredGraph> for GraphExport {
    fn from(g: &LayeredGraph) -> Self {
        let vertices = (0..g.rows())
            .flat_map(|r| (0..g.row_len(r)).map(move |c| [r, c]))
            .collect();
        Self {
            m: g.m,
            n_p: g.n_p,
            n_q: g.n_q,
            vertices,
            edges: g.edges.iter().map(|&(a, b)| [[a.0, a.1], [b.0, b.1]]).collect(),
        }
    }
}

/// Pretty JSON to `path`, or to stdout when `path` is `None`.
pub fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?);
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
            w.flush()?;
        }
        None => {
            let mut w = io::stdout().lock();
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

pub fn write_csv<T: Serialize>(rows: &[T], path: &Path) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
