//! Exact arithmetic for Artin–Schreier extensions of k = F_q(T).
//!
//! The crate is layered bottom-up: finite fields, polynomials over them, the
//! rational function field with its places, Laurent-series completions, and
//! finally the Artin–Schreier engine computing classes, ramification and local
//! degrees of composita.

pub mod artin_schreier;
pub mod error;
pub mod expr;
pub mod finite_field;
pub mod linalg;
pub mod local;
pub mod poly;
pub mod rational;

pub use artin_schreier::{
    global_reduce, global_rank_and_degree, local_reduce, ASClass, Classification, CompositumSpec, Engine, Family,
    GlobalASForm, GlobalDegree, LocalDegreeReport,
};
pub use error::{Error, Result};
pub use finite_field::{ArithOp, FieldElement, FiniteField};
pub use poly::{enumerate_monic_irreducibles, Factorization, Polynomial};
pub use rational::{enumerate_places, make_as_generator, ASGenerator, Place, RationalFunction, Valuation};
