//! Equivariant Laplace eigenfunctions on circle bundles and the nodal domains
//! of their real parts.
//!
//! Three bundle geometries are covered: the flat three-torus, the round
//! three-sphere in Hopf coordinates, and the unit tangent bundle of the modular
//! surface. Nodal domains are counted two ways: by union-find labeling of a
//! sign grid that carries the manifold's gluing identifications
//! ([`nodal`]), and combinatorially from the sign partitions of `Re f` and
//! `Im f` on a disc ([`partition_graph`]).
//!
//! The crate is `no_std` and needs only `alloc`. Parallel drivers, file formats
//! and the command line live in the `kknodal` companion crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod fd;
pub mod fields;
pub mod modular;
pub mod nodal;
pub mod partition_graph;
pub mod sphere;
pub mod torus_basis;
pub mod union_find;

pub use error::{Error, Result};
pub use fields::{BasePoint, ChartId, EquivariantField, FiberZeroSet};
pub use num_complex::Complex64;
