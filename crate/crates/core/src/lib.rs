//! Spanning-surface invariants of link diagrams.

// Index loops read better than zipped iterators in the matrix and face code.
#![allow(clippy::needless_range_loop)]

pub mod capsearch;
pub mod diagram;
pub mod essence;
pub mod fixtures;
pub mod forms;
pub mod graphs;
pub mod par;
pub mod plumbing;
pub mod suite;
