//! Pair operators for charge-transfer excitons on the chain.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fockspace::{Chain, FockBasisState, LinearOp};
use crate::qutrit::{number_op, SiteOps};

/// Electron and hole sites of one exciton.
///
/// The usual orientation keeps the electron at the larger index; the
/// reversed one is accepted for the spin-ladder mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExcitonIndex {
    electron: usize,
    hole: usize,
}

impl ExcitonIndex {
    pub fn new(chain: Chain, electron: usize, hole: usize) -> Result<Self> {
        let sites = chain.sites();
        if electron == hole || electron == 0 || hole == 0 || electron > sites || hole > sites {
            return Err(Error::InvalidExciton {
                electron,
                hole,
                sites,
            });
        }
        Ok(ExcitonIndex { electron, hole })
    }

    pub fn electron(self) -> usize {
        self.electron
    }

    pub fn hole(self) -> usize {
        self.hole
    }

    /// Electron-hole distance `y`.
    pub fn span(self) -> usize {
        self.electron.abs_diff(self.hole)
    }

    /// Every electron-above-hole pair with distance `y`.
    pub fn with_span(chain: Chain, y: usize) -> Result<Vec<ExcitonIndex>> {
        check_span(chain, y)?;
        Ok((1..=chain.sites() - y)
            .map(|hole| ExcitonIndex {
                electron: hole + y,
                hole,
            })
            .collect())
    }

    /// Every electron-above-hole pair on the chain.
    pub fn all(chain: Chain) -> Vec<ExcitonIndex> {
        let l = chain.sites();
        (1..=l)
            .flat_map(|hole| (hole + 1..=l).map(move |electron| ExcitonIndex { electron, hole }))
            .collect()
    }
}

pub(crate) fn check_span(chain: Chain, y: usize) -> Result<()> {
    let max = chain.sites().saturating_sub(1);
    if y == 0 || y > max {
        Err(Error::SpanOutOfRange { y, max })
    } else {
        Ok(())
    }
}

/// `(-1)^(n_c + n_d - 1)`, the eigenvalue of `exp(i pi n)` on one site.
fn site_parity(b: FockBasisState, site: usize) -> f64 {
    let o = b.site(site);
    if (o.c as u8 + o.d as u8 + 1).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// String `prod exp(i pi n_delta)` over the sites strictly between `a` and `b`.
pub fn string_op(chain: Chain, a: usize, b: usize) -> Result<LinearOp> {
    chain.check_site(a)?;
    chain.check_site(b)?;
    let (lo, hi) = (a.min(b), a.max(b));
    if hi <= lo + 1 {
        return Ok(LinearOp::identity());
    }
    Ok(LinearOp::diagonal_real(move |s| {
        (lo + 1..hi).map(|d| site_parity(s, d)).product()
    }))
}

/// The same string assembled from closed-form exponentials of the site number operators.
pub fn string_op_from_exponentials(chain: Chain, a: usize, b: usize) -> Result<LinearOp> {
    let (lo, hi) = (a.min(b), a.max(b));
    let factors = (lo + 1..hi)
        .map(|d| Ok(LinearOp::cubic_exp(number_op(chain, d)?, std::f64::consts::PI)))
        .collect::<Result<Vec<_>>>()?;
    Ok(LinearOp::product(factors))
}

/// `a† = g†_e f†_e f_e  xi  f_h g_h g†_h`: turns `|o_e o_h>` into `|+_e -_h>`.
pub fn exciton_create(chain: Chain, idx: ExcitonIndex) -> Result<LinearOp> {
    let e = SiteOps::new(chain, idx.electron)?;
    let h = SiteOps::new(chain, idx.hole)?;
    let xi = string_op(chain, idx.electron, idx.hole)?;
    Ok(LinearOp::product([
        e.g_dag,
        e.f_dag,
        e.f,
        xi,
        h.f,
        h.g,
        h.g_dag,
    ]))
}

/// `a = f†_h g_h g†_h  xi  g_e f†_e f_e`.
pub fn exciton_annihilate(chain: Chain, idx: ExcitonIndex) -> Result<LinearOp> {
    let e = SiteOps::new(chain, idx.electron)?;
    let h = SiteOps::new(chain, idx.hole)?;
    let xi = string_op(chain, idx.electron, idx.hole)?;
    Ok(LinearOp::product([
        h.f_dag,
        h.g,
        h.g_dag,
        xi,
        e.g,
        e.f_dag,
        e.f,
    ]))
}

/// Projector onto `+` at the electron site and `-` at the hole site.
pub fn exciton_number(idx: ExcitonIndex) -> LinearOp {
    LinearOp::diagonal_real(move |s| {
        if s.site_charge(idx.electron) == 1 && s.site_charge(idx.hole) == -1 {
            1.0
        } else {
            0.0
        }
    })
}

/// `J = -i (e^{i phi} f_mu g_mu g†_nu f†_nu - e^{-i phi} f_nu g_nu g†_mu f†_mu)`,
/// swapping `|+_mu -_nu>` and `|-_mu +_nu>`.
pub fn current_op(chain: Chain, mu: usize, nu: usize, phi: f64) -> Result<LinearOp> {
    if mu == nu {
        return Err(Error::InvalidExciton {
            electron: mu,
            hole: nu,
            sites: chain.sites(),
        });
    }
    let m = SiteOps::new(chain, mu)?;
    let n = SiteOps::new(chain, nu)?;
    let forward = LinearOp::product([m.f.clone(), m.g.clone(), n.g_dag.clone(), n.f_dag.clone()]);
    let backward = LinearOp::product([n.f, n.g, m.g_dag, m.f_dag]);
    let j = forward * Complex64::from_polar(1.0, phi) - backward * Complex64::from_polar(1.0, -phi);
    Ok(j * Complex64::new(0.0, -1.0))
}

/// `exp(i Theta J_{mu,nu})`, rotating `|+->` toward `|-+>`.
pub fn polarization(chain: Chain, mu: usize, nu: usize, theta: f64) -> Result<LinearOp> {
    Ok(LinearOp::cubic_exp(current_op(chain, mu, nu, 0.0)?, theta))
}

/// `h = g†_to f†_to f_to  f_from g_from g†_from`, taken verbatim.
///
/// On `|+>` at `from` the right half creates a hole rather than removing the
/// electron, so this product does not transport `+`; see [`hopping_move_op`].
pub fn hopping_op(chain: Chain, to: usize, from: usize) -> Result<LinearOp> {
    let t = SiteOps::new(chain, to)?;
    let f = SiteOps::new(chain, from)?;
    Ok(LinearOp::product([t.g_dag, t.f_dag, t.f, f.f, f.g, f.g_dag]))
}

/// Moves `+` from `from` onto a vacuum site `to`:
/// `g†_to f†_to f_to  xi  g_from f†_from f_from`.
pub fn hopping_move_op(chain: Chain, to: usize, from: usize) -> Result<LinearOp> {
    if to == from {
        return Err(Error::InvalidParameter(format!("hopping needs distinct sites, got {to}")));
    }
    let t = SiteOps::new(chain, to)?;
    let f = SiteOps::new(chain, from)?;
    let xi = string_op(chain, to, from)?;
    Ok(LinearOp::product([t.g_dag, t.f_dag, t.f, xi, f.g, f.f_dag, f.f]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::ChainState;
    use crate::qutrit::total_number_op;
    use std::f64::consts::FRAC_PI_4;

    fn chain(l: usize) -> Chain {
        Chain::new(l).unwrap()
    }

    fn state(text: &str) -> ChainState {
        ChainState::parse_product(text).unwrap()
    }

    #[test]
    fn string_signs() {
        let ch = chain(3);
        assert!(string_op(ch, 1, 2).unwrap().max_column_distance(&LinearOp::identity(), 3) < 1e-15);
        let xi = string_op(ch, 1, 3).unwrap();
        assert!(xi.apply(&state("ooo")).distance(&state("ooo")) < 1e-15);
        assert!(xi.apply(&state("o+o")).distance(&state("o+o").scale_real(-1.0)) < 1e-15);
        let from_exp = string_op_from_exponentials(ch, 1, 3).unwrap();
        for t in ["o+o", "o-o", "ooo", "+o-"] {
            assert!(xi.apply(&state(t)).distance(&from_exp.apply(&state(t))) < 1e-14);
        }
    }

    #[test]
    fn creation_places_pair_with_unit_sign() {
        let ch = chain(3);
        let a = exciton_create(ch, ExcitonIndex::new(ch, 3, 1).unwrap()).unwrap();
        assert!(a.apply(&state("o+o")).distance(&state("++-")) < 1e-14);
        assert!(a.apply(&state("+oo")).is_empty());
        let ch2 = chain(2);
        let a = exciton_create(ch2, ExcitonIndex::new(ch2, 2, 1).unwrap()).unwrap();
        assert!(a.apply(&ch2.vacuum()).distance(&state("+-")) < 1e-14);
        assert!((a.clone() * a).apply(&ch2.vacuum()).is_empty());
    }

    #[test]
    fn annihilation_is_adjoint_of_creation() {
        let ch = chain(3);
        for idx in ExcitonIndex::all(ch) {
            let a = exciton_create(ch, idx).unwrap();
            let b = exciton_annihilate(ch, idx).unwrap();
            assert!(b.max_column_distance(&a.adjoint(), 3) < 1e-14);
        }
    }

    #[test]
    fn pair_creation_conserves_total_number() {
        let ch = chain(3);
        let n = total_number_op(ch).unwrap();
        for idx in ExcitonIndex::all(ch) {
            let a = exciton_create(ch, idx).unwrap();
            assert!(LinearOp::commutator(&a, &n).max_column_norm(3) < 1e-14);
        }
    }

    #[test]
    fn overlapping_pairs_regroup_with_plus_sign() {
        let ch = chain(4);
        let a = |e, h| exciton_create(ch, ExcitonIndex::new(ch, e, h).unwrap()).unwrap();
        let lhs = a(4, 2) * a(3, 1);
        let rhs = a(4, 1) * a(3, 2);
        assert!(lhs.max_column_distance(&rhs, 4) < 1e-14);
        assert!(lhs.apply(&ch.vacuum()).norm() > 0.5);
    }

    #[test]
    fn current_is_hermitian_and_rotates() {
        let ch = chain(2);
        for phi in [0.0, 0.4, 2.0, -1.1] {
            let j = current_op(ch, 2, 1, phi).unwrap();
            assert!(j.adjoint().max_column_distance(&j, 2) < 1e-14);
        }
        let u = polarization(ch, 2, 1, FRAC_PI_4).unwrap();
        let out = u.apply(&state("+-"));
        let expect = state("+-").add(&state("-+")).scale_real(std::f64::consts::FRAC_1_SQRT_2);
        assert!(out.distance(&expect) < 1e-14);
        assert!(polarization(ch, 2, 1, 0.0).unwrap().apply(&state("+-")).distance(&state("+-")) < 1e-15);
    }

    #[test]
    fn literal_hopping_product_vanishes_and_move_transports() {
        let ch = chain(2);
        assert!(hopping_op(ch, 2, 1).unwrap().apply(&state("o+")).is_empty());
        let moved = hopping_move_op(ch, 2, 1).unwrap().apply(&state("o+"));
        assert!(moved.distance(&state("+o")) < 1e-14);
        assert!(hopping_move_op(ch, 2, 1).unwrap().apply(&state("oo")).is_empty());
    }

    #[test]
    fn moving_an_electron_breaks_pair_coherence() {
        let ch = chain(3);
        let pair = polarization(ch, 2, 1, FRAC_PI_4).unwrap().apply(&state("o+-"));
        let moved = hopping_move_op(ch, 3, 2).unwrap().apply(&pair);
        assert!(pair.inner(&moved).norm() < 1e-14);
        assert!(moved.norm() > 0.1);
    }

    #[test]
    fn invalid_indices_are_rejected() {
        let ch = chain(3);
        assert!(ExcitonIndex::new(ch, 2, 2).is_err());
        assert!(ExcitonIndex::new(ch, 4, 1).is_err());
        assert!(ExcitonIndex::with_span(ch, 3).is_err());
    }
}
