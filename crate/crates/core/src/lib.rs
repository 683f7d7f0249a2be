//! Exact symbolic calculus for elliptic representations of `GL_d` over a
//! p-adic field and for the combinatorics of the monodromy filtration on
//! nearby cycles.
//!
//! Everything here is formal: an irreducible elliptic representation is a
//! word of oriented arrows on a cuspidal line, a Jacquet module is a set of
//! value sequences, a perverse-sheaf symbol is a generator of a free abelian
//! group. All arithmetic is exact (big integers and rationals); there is no
//! floating point anywhere in the crate.

pub mod error;
pub mod groth;
pub mod jacquet;
pub mod export;
pub mod render;
pub mod segment;
pub mod sheaf;
pub mod spectral;
pub mod twist;
pub mod verify;

pub use error::CalcError;
pub use groth::VirtualRep;
pub use jacquet::Signature;
pub use segment::{ArrowWord, CuspidalDatum, Direction, JunctionPart, ProductSide};
pub use sheaf::{SheafSymbol, SymbolKind, VirtualSheaf};
pub use spectral::SsPage;
pub use twist::{RecFactor, WeightTwist};

/// Convenience result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, CalcError>;
