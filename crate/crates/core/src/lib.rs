pub mod classic;
pub mod cli;
pub mod decomp;
pub mod diagram;
pub mod diffmod;
pub mod error;
pub mod field;
pub mod io;
pub mod matrix;
pub mod module;
pub mod poly;
pub mod quiver;
pub mod random;
pub mod resolve;
pub mod selftest;
pub mod shape;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use matrix::Matrix;
pub use module::{Module, ModuleMap};
pub use quiver::{Arrow, BasisPath, QuiverAlgebra, Relation};
