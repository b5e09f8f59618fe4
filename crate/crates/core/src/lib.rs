//! Exact zero-sum computations over finite abelian groups, parametric
//! solvability of integer linear systems modulo `n`, structure checks for
//! zero-sum free multisets of rank two, and a replayable computer proof of
//! the `Z_3^3` lemmas behind `D(Z_3 + Z_3n + Z_3n) = 6n + 1`.

pub mod abelian;
pub mod decidability;
pub mod error;
pub mod intlinalg;
pub mod proof335;
pub mod rank2;
pub mod zerosum;

pub use error::{Error, Result};
