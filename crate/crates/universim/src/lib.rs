//! Desk-scale workbench for finite simulators.
//!
//! Everything is extensional: sets are lists of labels, morphisms are pair
//! sets, and the interesting questions (is this simulator universal? is one
//! more parsimonious than another? does a spectral obstruction rule out
//! universality? which behaviors are unreachable?) are answered by exhaustive
//! checks that produce machine-readable certificates or counterexamples.

pub mod cli;
pub mod error;
pub mod finrel;
pub mod format;
pub mod instances;
pub mod nogo;
pub mod parsimony;
pub mod report;
pub mod search;
pub mod simulator;
pub mod universality;
pub mod unreachability;

pub use error::{Error, Result};
pub use finrel::{check_cd_laws, check_comonoid, FiniteSet, MorphismKind, Product, Rel, Tup};
pub use parsimony::{compare_parsimony, find_morphism, verify_morphism, ParsimonyRelation};
pub use simulator::{EvalInstance, Simulator};
pub use universality::{check_universality, verify_reduction, Mode};
