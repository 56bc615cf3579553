//! Ordinary reduced polygons in the hyperbolic plane.
//!
//! The crate builds regular and perturbed ordinary reduced n-gons of a given
//! thickness, measures them (area, diameter, thickness), extracts their
//! butterfly decomposition and checks the closed-form area formula and the
//! extremality of regular polygons numerically.
//!
//! All geometry is computed in the hyperboloid model; see [`hypcore`].

pub mod error;
pub mod extremal;
pub mod hypcore;
pub mod io;
pub mod kernel;
pub mod polygeom;
pub mod redpoly;
pub mod search;
pub mod suite;

pub use error::{Error, Result};
