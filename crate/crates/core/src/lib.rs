//! Exact spectral gaps of perforated A2 links, local spectral certificates
//! for property T, matrix-group orders over finite local rings with
//! brute-force verification, and reproducible Monte Carlo runs of the
//! chamber-density phase transitions. Everything stays at desk scale: when a
//! quantity has a closed form it is checked against an independent numeric
//! route, and when it does not, an exhaustive or seeded sweep stands in.

pub mod density;
pub mod error;
pub mod geometry;
pub mod gf;
pub mod local_rings;
pub mod perforation;
pub mod poly;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
