//! Exact and numerical tools for small divisor functions, their mock modular
//! generating functions, holomorphic projection, and the Appell–Lerch and
//! Jacobi theta identities around them.

pub mod arithfn;
pub mod characters;
pub mod exactnum;
pub mod holoproj;
pub mod jacobi;
pub mod qseries;
pub mod report;
pub mod suite;
pub mod tags;
