//! Exact-arithmetic toolkit for degree-p cyclic covers of the projective
//! line: torsor charts with conductors and residues, validation of cover
//! data and of Hurwitz graphs, the constructive rewrites that bring a cover
//! into liftable form, and the valuation calculus for the Hodge-bundle
//! section of a degenerating hyperelliptic curve.

pub mod covers;
pub mod doc;
pub mod error;
pub mod field;
pub mod graph;
pub mod hodge;
pub mod hurwitz;
pub mod laurent;
pub mod poly;
pub mod rational;
pub mod torsors;
pub mod transforms;

pub use covers::{CoverGraph, ValidationReport};
pub use error::{ArithmeticError, StructureError, TorsorError, TransformError};
pub use field::{FieldSpec, Fq};
pub use graph::{DualGraph, EdgeId, VertexId};
pub use hurwitz::HurwitzGraph;
pub use laurent::LaurentExpansion;
pub use poly::Poly;
pub use rational::{Place, RationalFunction};
