//! Simulation of sublinear-query cycle finding in bounded-outdegree digraphs.

pub mod analysis;
pub mod finders;
pub mod graph;
pub mod harness;
pub mod io;
pub mod oracle;
