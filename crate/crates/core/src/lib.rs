//! Cellular sheaves valued in finite lattices.
//!
//! The crate covers the whole pipeline from finite lattices and Galois
//! connections up to three cohomology theories of a lattice-valued sheaf:
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`lattice`] | finite lattices, products, intervals, structure checks |
//! | [`galois`] | connections, adjoint synthesis, sums, kernels, exactness |
//! | [`complex`] | cell complexes with covering relation and incidences |
//! | [`sheaf`] | lattice-valued sheaves, cochains, brute-force sections |
//! | [`tarski`] | Tarski Laplacian, harmonic flow, Tarski cohomology |
//! | [`hodge`] | pseudo-coboundary, up/down Hodge Laplacians and cohomology |
//! | [`grassmann`] | GF(p) linear algebra, subspace lattices, transfer, Grandis cohomology |
//!
//! ```
//! use std::sync::Arc;
//! use tsheaf_core::{complex::CellComplex, lattice::FiniteLattice, sheaf::LatticeSheaf, tarski};
//!
//! let path = CellComplex::graph(&["u", "v", "w"], &[("e1", "u", "v"), ("e2", "v", "w")]).unwrap();
//! let sheaf = LatticeSheaf::constant(Arc::new(path), Arc::new(FiniteLattice::powerset(2).unwrap())).unwrap();
//! let x = sheaf.cochain(0, vec![0b01, 0b11, 0b10]).unwrap();
//! let flow = tarski::harmonic_flow(&sheaf, 0, &x, Default::default()).unwrap();
//! assert_eq!(flow.final_cochain, sheaf.bottom_cochain(0));
//! assert_eq!(flow.steps, 2);
//! ```

pub mod complex;
pub mod galois;
pub mod grassmann;
pub mod hodge;
pub mod lattice;
pub mod sheaf;
pub mod tarski;

mod fixed;

pub use fixed::{FixedPointKind, FixedPointSet, Mode};

use thiserror::Error;

/// Default bound on the number of cochains an enumeration may visit.
pub const DEFAULT_ENUMERATION_LIMIT: u128 = 1 << 22;

/// Size bounds applied by enumerating operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub enumeration: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            enumeration: DEFAULT_ENUMERATION_LIMIT,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("lattice has no elements")]
    EmptyLattice,

    #[error("product of an empty family")]
    EmptyProduct,

    #[error("elements {a} and {b} lack a unique meet or join")]
    NotALattice { a: usize, b: usize },

    #[error("covering relation has a cycle")]
    CyclicCovers,

    #[error("element {elem} out of range for a lattice of size {size}")]
    ElementOutOfRange { elem: usize, size: usize },

    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },

    #[error("interval [{lo}, {hi}] is empty")]
    EmptyInterval { lo: usize, hi: usize },

    #[error("{what}: size {size} exceeds limit {limit}")]
    SizeLimitExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("map has {got} entries, source has {expected} elements")]
    MapLength { expected: usize, got: usize },

    #[error("lower map does not preserve the join of {a} and {b}")]
    NotJoinPreserving { a: usize, b: usize },

    #[error("connections have mismatched domains")]
    DomainMismatch,

    #[error("duplicate cell id {0}")]
    DuplicateCell(String),

    #[error("unknown cell {0}")]
    UnknownCell(String),

    #[error("{face} cannot be a facet of {cell}: dimensions differ by other than one")]
    DimMismatch { face: String, cell: String },

    #[error("face pair {face} < {cell} listed twice")]
    DuplicateFace { face: String, cell: String },

    #[error("incidence [{face}:{cell}] = {value} is not ±1")]
    BadIncidence { face: String, cell: String, value: i8 },

    #[error("incidence [{face}:{cell}] is missing")]
    IncidenceMissing { face: String, cell: String },

    #[error("incidence numbers between {face} and {cell} do not cancel")]
    IncidenceViolation { face: String, cell: String },

    #[error("not a graph: {0}")]
    NotAGraph(String),

    #[error("edge {0} is a loop")]
    LoopEdge(String),

    #[error("{face} is not a face of {cell}")]
    NotAFace { face: String, cell: String },

    #[error("expected {expected} stalks, got {got}")]
    StalkCount { expected: usize, got: usize },

    #[error("no restriction given for {face} < {cell}")]
    MissingRestriction { face: String, cell: String },

    #[error("restriction given for {face} < {cell}, which is not a covering pair")]
    NotACoveringPair { face: String, cell: String },

    #[error("restriction {face} < {cell} does not preserve the join of {a} and {b}")]
    RestrictionNotJoinPreserving {
        face: String,
        cell: String,
        a: usize,
        b: usize,
    },

    #[error("restriction {face} < {cell}: {reason}")]
    InvalidRestriction {
        face: String,
        cell: String,
        reason: String,
    },

    #[error("restrictions from {face} to {cell} depend on the path")]
    FunctorialityViolation { face: String, cell: String },

    #[error("cochain of degree {degree} needs {expected} values, got {got}")]
    CochainLength {
        degree: usize,
        expected: usize,
        got: usize,
    },

    #[error("expected a cochain of degree {expected}, got degree {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("flow did not stabilize within {bound} steps")]
    StepBoundExceeded { bound: usize },

    #[error("cochain #{index} is not a fixed point")]
    NotAFixedPoint { index: usize },

    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
