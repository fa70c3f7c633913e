//! Error types shared across the crate.

use thiserror::Error;

/// Errors from exact arithmetic on the projective line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithmeticError {
    #[error("bad field specification: {0}")]
    BadField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("empty window")]
    EmptyWindow,
    #[error("non-rational place")]
    NonRationalPlace,
    #[error("insufficient precision")]
    InsufficientPrecision,
    #[error("mixed fields in one expression")]
    MixedFields,
}

/// Errors from torsor presentations and their rewrites.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorsorError {
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
    #[error("degenerate torsor datum")]
    DegenerateDatum,
    #[error("incomparable")]
    Incomparable,
    #[error("trivial torsor")]
    TrivialTorsor,
    #[error("conductor not prime to p")]
    ConductorDivisible,
    #[error("hypothesis (H₂) violated")]
    BoundaryHypothesis,
    #[error("global chart required")]
    LocalChart,
}

/// Errors from the graph transformations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error(transparent)]
    Torsor(#[from] TorsorError),
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
    #[error("base not of genus 0")]
    BaseNotTree,
    #[error("chart exhausted")]
    ChartExhausted,
    #[error("enlarge field")]
    EnlargeField,
    #[error("no adapted graph on this traversal: {0}")]
    NoAdaptedGraph(String),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("no p-cyclic structure: {0}")]
    NoCyclicStructure(String),
}

/// Errors from malformed containers (index maps out of range and the like).
/// Mathematical violations never raise these; they go into validation reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed data: {0}")]
pub struct StructureError(pub String);
