//! Decorated tangles and the diagram algebras built from them: Temperley-Lieb,
//! blob, and the generalized Temperley-Lieb algebras of types B and D.
//!
//! Arithmetic is exact throughout. Coefficients are Laurent polynomials
//! with rational coefficients in `v`, `w`, `d` and `dp`.

pub mod correspondences;
pub mod counting;
pub mod element;
pub mod engine;
pub mod report;
pub mod scalar;
pub mod tangle;
pub mod words;

pub use correspondences::{
    from_symmetric, is_symmetric, symmetric_diagrams, to_symmetric, verify_counts, verify_lemma57,
    verify_presentation, verify_symmetric_representation, CorrespondenceError,
};
pub use element::{
    evaluate_word, evaluate_word_in, span_reachability, structure_constants, Element, ElementError, GeneratorWord,
    StructureTable, TableEntry,
};
pub use engine::{
    classify, count_by_class, enumerate_basis, reduce, AdmissibilityClass, AlgebraKind, Alphabet, EngineError, Family,
    Reduction,
};
pub use report::{Check, VerificationReport};
pub use scalar::{Scalar, ScalarError, Var};
pub use tangle::{enumerate_matchings, DecoratedTangle, Edge, EdgeKind, Face, Generator, NodeRef, TangleError};
pub use words::{
    b_condition, d_condition, line_crossing_length, rewrite_b, rewrite_d, shortest_word_oracle, verify_rewrites,
    verify_word_lemmas, CrossingProfile, ReducedWordOracle, ShortestWords, WordCondition, WordError,
};
