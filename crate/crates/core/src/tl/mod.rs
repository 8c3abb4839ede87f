//! Temperley–Lieb algebras in the diagram and Jones-word coordinatizations.

pub mod diagram;
pub mod element;
pub mod words;

pub use diagram::{basis, catalan, Diagram, DiagramBasis, DiagramError};
pub use element::{TlElement, TlError};
pub use words::JonesWord;
