pub mod cli;
pub mod error;
pub mod groebner;
pub mod ideal;
pub mod linalg;
pub mod multiplicity;
pub mod numeric;
pub mod polytope;
pub mod rational;
