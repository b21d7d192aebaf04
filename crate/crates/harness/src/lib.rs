//! Harness around the nearforest solvers: graph file I/O, instance
//! generators, run records and benchmark sweeps. The `nearforest` binary in
//! this crate exposes all of it on the command line.

pub mod bench;
pub mod gen;
pub mod io;
pub mod record;
