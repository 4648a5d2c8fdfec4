//! Concrete instance families: finite function spaces, spin systems, and
//! Turing machines with a fixed run budget.

pub mod finfun;
pub mod interpreter;
pub mod spin;
pub mod turing;
