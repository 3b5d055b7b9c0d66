//! Throughput estimation for arbitrarily-connected mesh optical networks.
//!
//! The pipeline: generate logical topologies ([`topology`]), give their links
//! physical lengths ([`geometry`]), weight links by noise-to-signal ratio from
//! a GN nonlinear-interference model ([`physlayer`]), collect near-equal
//! capacity candidate routes per node pair ([`routing`]), pack as many
//! lightpaths per pair as the C-band allows ([`rwa`]), and aggregate over
//! ensembles ([`experiments`], [`analytics`]).

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analytics;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod io;
pub mod physlayer;
pub mod routing;
pub mod rwa;
pub mod seed;
pub mod topology;

pub use error::{Error, Result};
