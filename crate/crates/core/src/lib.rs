//! Exact desk-scale tools for perfect matchings in k-uniform hypergraphs:
//! parity-obstructed extremal constructions and their minimum ℓ-degree
//! thresholds, exact and absorbing-method matching search, the auxiliary
//! bipartite graph diagnostics, and executable checks of the supporting
//! counting lemmas.

pub mod absorbing;
pub mod auxgraph;
pub mod binom;
pub mod error;
pub mod extremal;
pub mod hypergraph;
pub mod io;
pub mod lemmas;
pub mod matching;
pub mod suite;
pub mod vset;

pub use binom::binom;
pub use error::{Error, Result};
pub use hypergraph::Hypergraph;
pub use matching::{find_perfect_matching, max_matching_greedy, verify_matching, Matching};
pub use vset::VertexSet;
