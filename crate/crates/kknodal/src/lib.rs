//! Parallel drivers, file formats and the `kknodal` command line on top of
//! [`kknodal_core`].

pub mod cli;
pub mod experiments;
pub mod io;
pub mod par;
pub mod random;
