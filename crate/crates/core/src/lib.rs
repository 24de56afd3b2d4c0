//! Finite, executable models of coloured signatures, the decoration monads
//! F, S and R, their Kleisli and Eilenberg-Moore categories, operads, combing
//! of term trees, polynomial and analytic functors, and coend calculus over
//! finite categories, together with checkers for the coherence diagrams.

pub mod em;
pub mod error;
pub mod exec;
pub mod finset;
pub mod functor_rep;
pub mod io;
pub mod kleisli;
pub mod laws;
pub mod monads;
pub mod operads;
pub mod presheaf_cat;
pub mod signatures;
pub mod suites;

pub use error::{Error, Result};
