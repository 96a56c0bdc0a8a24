//! Modular symbols for Gamma_0(M) and the q-expansion bases built from them.

pub mod cache;
pub mod heilbronn;
pub mod linalg;
pub mod manin;
pub mod p1;
pub mod qexp;

pub use manin::{genus_x0, manin_space, IntMatrix, ModularSymbolSpace};
pub use p1::{p1_list, P1Element, P1List};
pub use cache::qexp_basis;
pub use qexp::{default_nterms, LevelData, QExpBasis};
