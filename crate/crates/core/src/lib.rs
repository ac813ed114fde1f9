pub mod cli;
pub mod diophantine;
pub mod lattice;
pub mod lie;
pub mod normalform;
pub mod scalar;
pub mod series;
