//! Dense matrices of chain operators, for oracle checks on short chains.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::FockBasisState;
use super::op::LinearOp;
use super::state::ChainState;
use crate::error::{Error, Result};

/// Longest chain for which dense matrices are built.
pub const DENSE_MAX_SITES: usize = 4;

/// Matrix in the occupation basis, rows and columns ordered by bit pattern.
pub fn to_dense(op: &LinearOp, sites: usize) -> Result<DMatrix<Complex64>> {
    if sites > DENSE_MAX_SITES {
        return Err(Error::ChainTooLong {
            sites,
            max: DENSE_MAX_SITES,
        });
    }
    let dim = 1usize << (2 * sites);
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let image = op.apply(&ChainState::basis(sites, FockBasisState(col as u64)));
        for (b, a) in image.iter() {
            m[(b.0 as usize, col)] = a;
        }
    }
    Ok(m)
}

/// Largest entry magnitude.
pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
