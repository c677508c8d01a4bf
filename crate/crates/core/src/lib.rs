//! Exact-arithmetic engine for noninvertible morphisms: regularity of
//! cycles, obstructions of semiatlases, the regularization 2-category of a
//! finite category, regular braidings and regular (co)algebra laws.
//!
//! All arithmetic is exact (big rationals and Grassmann algebras over them)
//! and every search is brute force over explicitly bounded spaces.

pub mod category;
pub mod grassmann;
pub mod laws;
pub mod matrix;
pub mod monoidal;
pub mod morphism;
pub mod random;
pub mod rational;
pub mod regalgebra;
pub mod semiatlas;

pub use category::{
    build_regularization, enumerate_regular_ncycles, verify_2category_axioms, AxiomReport, CategoryError, FinCategory,
    NCycle, Reg2Category, RegularityMode,
};
pub use grassmann::{berezinian, ginv, gmul, GrassmannError, OrientationClass, SuperDim, SuperMatrix, Supernumber};
pub use laws::LawOutcome;
pub use matrix::{MatrixError, RatMatrix};
pub use monoidal::{
    Braiding, BraidingRule, LegCycle, MonoidalError, MonoidalStructure, ObstructionAssignment, YbeCatalog,
};
pub use morphism::{
    compose, enumerate_morphisms, generalized_inverses, Backend, FinObject, Morphism, MorphismError, Payload,
    SearchBounds,
};
pub use rational::Rational;
pub use regalgebra::{ModuleInstance, RegAlgebraError, StructureMaps};
pub use semiatlas::{obstructedness_degree, SemiAtlas, SemiAtlasError, TowerReport};
