//! # morsegrad
//!
//! Discrete Morse preprocessing for multiparameter persistent homology.
//!
//! The library computes a discrete gradient compatible with a
//! multiparameter filtration on a simplicial complex by a local,
//! embarrassingly parallel algorithm: a well-extensible vertex indexing
//! decomposes the complex into index-based lower stars, each lower star is
//! split into equal-multigrade level sets, and every level set is
//! classified independently by homotopy expansion. The critical cells form
//! a much smaller Morse complex with the same homology and the same
//! persistence module as the input, which makes downstream persistence
//! computations cheap.
//!
//! The main pipeline:
//!
//! * [`complex`] — simplicial complexes, multigrades, filtration extension;
//! * [`indexing`] — vertex indexing and the level-set decomposition;
//! * [`expansion`] — homotopy expansion over one level set;
//! * [`gradient`] — the parallel gradient assembly and its validators;
//! * [`morse`] — Morse complex extraction by separatrix parity, Betti
//!   numbers over F2;
//! * [`persistence`] — one-parameter reduction for any Lefschetz complex;
//! * [`foliation`] — persistence spaces of bifiltrations by slicing.
//!
//! [`oracle`] holds independent brute-force checkers (the global
//! `Matching` algorithm, partition equivalence, a rank-invariant
//! calculator) used to certify the pipeline; [`synthetic`] generates
//! test meshes; [`io`] parses OFF and the generic complex format.

pub mod complex;
pub mod expansion;
mod f2;
pub mod foliation;
pub mod gradient;
pub mod indexing;
pub mod io;
pub mod morse;
pub mod oracle;
pub mod persistence;
pub mod synthetic;

#[cfg(test)]
pub(crate) mod testutil;

pub use complex::{
    build_complex, extend_filtration, make_injective, CellId, ComplexError, Multigrade,
    MultiFiltration, Simplex, SimplicialComplex,
};
pub use expansion::{homotopy_expansion, ExpansionResult};
pub use foliation::{
    compute_extremes, compute_persistence_space, compute_persistence_space_on_slices,
    generate_slices, push_to_slice, FoliationError, PersistenceSpace, Slice,
};
pub use gradient::{
    compute_discrete_gradient, verify_compatibility, verify_gradient_acyclic, DiscreteGradient,
    GradientError,
};
pub use indexing::{
    compute_indexing, index_lower_star, split_index_lower_star, LevelSet, VertexIndexing,
};
pub use morse::{
    betti_numbers_f2, boundary_matrix, extract_morse_complex, F2Matrix, LefschetzComplex,
    MorseError,
};
pub use oracle::{
    build_global_indexing, matching_global, rank_invariant_bruteforce, rank_invariant_on,
    verify_partition_equivalence, GlobalIndexing, OracleError, RankInvariant,
};
pub use persistence::{
    filtration_order, reduce_and_pair, PersistenceDiagram, PersistenceError, PersistencePair,
};
