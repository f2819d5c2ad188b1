//! Generalized hypergeometric ensembles of directed and undirected multi-edge
//! graphs, and a significance filter for observed dyad weights built on them.
//!
//! The pipeline is: read a weighted edge list ([`graph`]), build the capacity
//! matrix Ξ and propensity matrix Ω of an [`ensemble`], evaluate each observed
//! weight against the marginal distribution of its dyad, and keep the dyads
//! whose weight is improbably high ([`filter`]). [`sampling`] draws graphs
//! from the same ensembles for Monte Carlo checks.

pub mod cli;
pub mod ensemble;
pub mod error;
pub mod filter;
pub mod graph;
pub mod numerics;
pub mod sampling;

pub use error::{Error, Result};
