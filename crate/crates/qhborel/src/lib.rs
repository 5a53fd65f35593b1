//! Exact-arithmetic invariants for equivalence classes of quasihereditary
//! algebras.
//!
//! Given the class data of a quasihereditary algebra — its poset, the
//! composition multiplicities of standard and costandard modules, the
//! Hom-space dimensions between standard modules and the simple dimensions —
//! this crate computes the unitriangular invariant matrix `V` and its
//! row-sum length sequence, decides whether the algebra admits a regular
//! exact Borel subalgebra, lists the good representatives of the class, and
//! derives the full numerical profile of the Borel subalgebra (Cartan
//! matrices, lengths, dimension vectors, `dim B`, `dim W`).
//!
//! All arithmetic is exact: big integers in the recursions and big rationals
//! in the solver. See the `cli` module and the README for the command-line
//! front end and the JSON interchange format.

pub mod catalog;
pub mod cli;
pub mod engine;
pub mod exact;
pub mod model;
pub mod poset;

pub use catalog::{generate, morita_twist, FamilySpec};
pub use engine::{
    borel_existence, borel_profile, class_flags, compute_l, compute_v,
    representative_multiplicities, BorelProfile, BorelVerdict, ClassFlags, EngineError, LSequence,
    VMatrix,
};
pub use exact::{unitriangular_solve, IntMat, LinAlgError, RatVec};
pub use model::{FiltrationMatrices, ModelError, QhData, Violation};
pub use poset::{Poset, PosetError, PosetSpec, PosetStats};
