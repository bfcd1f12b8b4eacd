//! Graph Hamiltonians over the commutative torus, their re-gauging groupoid,
//! lifted symmetry actions and projective representations at fixed points.

pub mod analysis;
pub mod bandscan;
pub mod builtin;
pub mod error;
pub mod graph;
pub mod hamiltonian;
pub mod io;
pub mod lattice;
pub mod regauge;
pub mod repdecomp;
pub mod symlift;
pub mod torus;

pub use error::{Error, ErrorKind, Result};
pub use graph::{Automorphism, Edge, Graph, OrientedEdge, SpanningTree};
pub use io::WeightedGraph;
pub use torus::{Phase, TorusPoint, TorusPolynomial, UnitaryMonomial, WeightFunction};
