//! Exact integer lattice algebra: Smith normal form, Hermite bases,
//! quotients of finitely generated abelian groups and ranks.
//!
//! Everything here is exact over arbitrary-precision integers.

mod abelian;
mod lattice;
mod matrix;
mod smith;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

pub use abelian::FgAbelian;
pub use lattice::{
    cokernel, image_lattice, is_finite_index, quotient, relation_lattice, Lattice,
};
pub use matrix::{fmt_vector, IntMatrix};
pub use smith::{kernel, rank, smith, SmithForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("invalid torsion data: {0}")]
    InvalidTorsion(String),
    #[error("lattice is not contained in the ambient lattice")]
    NotASublattice,
}

/// Solves `x * m = v` over the integers (x a row vector). Returns `None` when
/// no integer solution exists.
pub fn solve_left(m: &IntMatrix, v: &[BigInt]) -> Result<Option<Vec<BigInt>>, LatticeError> {
    if v.len() != m.cols() {
        return Err(LatticeError::DimensionMismatch {
            expected: format!("row vector of length {}", m.cols()),
            found: format!("length {}", v.len()),
        });
    }
    let s = smith(m);
    let w = s.right.apply_left(v)?;
    let r = s.rank();
    if w[r..].iter().any(|x| !x.is_zero()) {
        return Ok(None);
    }
    let mut y = vec![BigInt::zero(); m.rows()];
    for i in 0..r {
        let (q, rem) = num_integer::Integer::div_rem(&w[i], &s.diag[i]);
        if !rem.is_zero() {
            return Ok(None);
        }
        y[i] = q;
    }
    Ok(Some(s.left.apply_left(&y)?))
}
