//! Numerical verification of the congruence between the Merel unit, the
//! reduction of a Stark unit at a Taylor–Wiles prime, and the Eisenstein
//! component of a weight-two form built from a weight-one form of a cubic field.

pub mod cli;
pub mod error;
pub mod ffarith;
pub mod heckeops;
pub mod merel;
pub mod qseries;
pub mod selftest;
pub mod stark;

pub use error::{Error, Result};
pub mod modsym;
