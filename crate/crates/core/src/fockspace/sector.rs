//! Weights of a state across the integer eigenspaces of an observable.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::op::LinearOp;
use super::state::ChainState;
use crate::error::{Error, Result};

const SPECTRUM_TOL: f64 = 1e-9;

/// Split `|psi|^2` over the eigenvalues of a Hermitian `observable`.
///
/// Occupation-diagonal observables are read off per basis component. Other
/// observables are resolved on the Krylov space generated from `state`.
pub fn sector_decompose(state: &ChainState, observable: &LinearOp) -> Result<BTreeMap<i64, f64>> {
    match diagonal_sectors(state, observable)? {
        Some(map) => Ok(map),
        None => krylov_sectors(state, observable),
    }
}

fn diagonal_sectors(state: &ChainState, observable: &LinearOp) -> Result<Option<BTreeMap<i64, f64>>> {
    let mut out = BTreeMap::new();
    for (b, a) in state.iter() {
        let single = ChainState::basis(state.sites(), b);
        let image = observable.apply(&single);
        let eig = match image.len() {
            0 => Complex64::default(),
            1 if image.amplitude(b) != Complex64::default() => image.amplitude(b),
            _ => return Ok(None),
        };
        let k = integer_eigenvalue(eig)?;
        *out.entry(k).or_insert(0.0) += a.norm_sqr();
    }
    Ok(Some(out))
}

fn integer_eigenvalue(eig: Complex64) -> Result<i64> {
    let k = eig.re.round();
    let residual = (eig - Complex64::new(k, 0.0)).norm();
    if residual > SPECTRUM_TOL {
        Err(Error::NonIntegerSpectrum { residual })
    } else {
        Ok(k as i64)
    }
}

fn krylov_sectors(state: &ChainState, observable: &LinearOp) -> Result<BTreeMap<i64, f64>> {
    let norm = state.norm();
    let mut out = BTreeMap::new();
    if norm == 0.0 {
        return Ok(out);
    }
    // Orthonormal Krylov basis with full reorthogonalization.
    let mut basis: Vec<ChainState> = vec![state.normalized()];
    let mut i = 0;
    while i < basis.len() {
        let mut w = observable.apply(&basis[i]);
        for _ in 0..2 {
            for v in &basis {
                let c = v.inner(&w);
                w.axpy(-c, v);
            }
        }
        let n = w.norm();
        if n > 1e-10 {
            basis.push(w.scale_real(1.0 / n));
        }
        i += 1;
    }
    let dim = basis.len();
    let images: Vec<ChainState> = basis.iter().map(|v| observable.apply(v)).collect();
    let h = DMatrix::from_fn(dim, dim, |r, c| basis[r].inner(&images[c]));
    let eig = h.symmetric_eigen();
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        // state is basis[0], so its overlap with eigenvector k is the first entry.
        let w = eig.eigenvectors[(0, k)].norm_sqr() * norm * norm;
        if w < 1e-24 {
            continue;
        }
        let key = integer_eigenvalue(Complex64::new(lambda, 0.0))?;
        *out.entry(key).or_insert(0.0) += w;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::basis::FockBasisState;

    fn site_number(site: usize) -> LinearOp {
        LinearOp::diagonal_real(move |b: FockBasisState| {
            let o = b.site(site);
            o.c as i32 as f64 + o.d as i32 as f64 - 1.0
        })
    }

    #[test]
    fn vacuum_sits_in_zero_sector() {
        let total = site_number(1) + site_number(2);
        let m = sector_decompose(&ChainState::vacuum(2), &total).unwrap();
        assert_eq!(m.len(), 1);
        assert!((m[&0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn superposition_splits_evenly() {
        let a = ChainState::parse_product("+").unwrap();
        let b = ChainState::parse_product("-").unwrap();
        let s = a.add(&b).normalized();
        let m = sector_decompose(&s, &site_number(1)).unwrap();
        assert!((m[&1] - 0.5).abs() < 1e-12);
        assert!((m[&-1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn non_integer_spectrum_is_reported() {
        let half = LinearOp::identity().scaled_real(0.5);
        let r = sector_decompose(&ChainState::vacuum(1), &half);
        assert!(matches!(r, Err(Error::NonIntegerSpectrum { .. })));
    }

    #[test]
    fn off_diagonal_observable_uses_krylov_path() {
        // sigma_x between |+> and |-> on one site: eigenvalues +-1.
        use crate::fockspace::basis::{mode_index, Ladder, Species};
        let cd = LinearOp::mode(Ladder::Create, mode_index(1, Species::C))
            * LinearOp::mode(Ladder::Create, mode_index(1, Species::D));
        let x = cd.clone() + cd.adjoint();
        let s = ChainState::parse_product("+").unwrap();
        let m = sector_decompose(&s, &x).unwrap();
        assert!((m[&1] - 0.5).abs() < 1e-12);
        assert!((m[&-1] - 0.5).abs() < 1e-12);
    }
}
