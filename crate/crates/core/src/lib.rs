//! Operational semantics and bounded bisimilarity checking for While with
//! interactive input and output.
//!
//! Program behaviour is a resumption: a lazily built, possibly infinite tree
//! of terminations, input branches, outputs and delay steps. Four semantics
//! produce such trees ([`bigstep`], [`smallstep`], [`delayfree`],
//! [`classical`]), and the checkers in [`resumption`] and [`weak_bisim`]
//! compare them within a [`CheckBudget`].

pub mod bigstep;
pub mod classical;
pub mod delayfree;
pub mod interact;
pub mod resumption;
pub mod smallstep;
pub mod syntax;
pub mod weak_bisim;

pub use resumption::{CheckBudget, Res, SemanticsError, Verdict};
pub use syntax::{parse_program, State, Stmt, Value};
