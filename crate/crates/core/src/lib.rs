//! Finite-depth constructions of locally rich metric spaces and Euclidean sets.
//!
//! Everything is computed in exact rationals where the geometry allows it;
//! point clouds carry the resolution of the truncation they came from.

pub mod config;
pub mod euclid;
pub mod gh;
pub mod metric;
pub mod pisigma;
pub mod rational;
pub mod sigma;
pub mod zoo;
