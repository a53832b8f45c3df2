//! Excitation states of hypergraphs: construction, symmetry, entanglement
//! measures, preparation circuits, parent Hamiltonians and noise fitting.

pub mod circuit;
pub mod entanglement;
pub mod error;
pub mod families;
pub mod hamiltonian;
pub mod hypergraph;
pub mod limits;
pub mod linalg;
pub mod noisefit;
pub mod state;
pub mod symmetry;

pub use error::{Error, Result};
pub use hypergraph::Hypergraph;
pub use state::SparseState;
