//! Temperley–Lieb–Jones planar algebra engine and the quantum-group
//! constructions built on it.

pub mod scalar;

pub use scalar::{CoeffDomain, Scalar, ScalarError};
pub mod tl;

pub use tl::{Diagram, JonesWord, TlElement, TlError};
pub mod linalg;
pub mod markov;
pub mod certificate;
pub mod checks;
pub mod jones;
pub mod coords;
pub mod aof;
pub mod spectral;
pub mod graph;
pub mod io;
