//! Carrier injection into a coherent exciton background and diradical generation.

use num_complex::Complex64;
use serde::Serialize;

use super::modes::ModeSpec;
use super::ops::{exciton_create, ExcitonIndex};
use crate::error::{Error, Result};
use crate::fockspace::{Chain, ChainState};
use crate::qutrit::{bogoliubov, MixingAngle, SiteOps};

/// One residual measurement.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualRecord {
    pub relation: String,
    #[serde(rename = "L")]
    pub sites: usize,
    pub y: usize,
    pub lambda: f64,
    pub residual: f64,
    pub tail_weight: f64,
}

/// Largest deviation of the two vacuum seed identities over every pair:
/// `f†_nu a†|o> = -g†_mu|o>` and `g_mu a†|o> = f_nu|o>`.
pub fn seed_residuals(chain: Chain) -> Result<(f64, f64)> {
    let vac = chain.vacuum();
    let mut worst = (0.0f64, 0.0f64);
    for idx in ExcitonIndex::all(chain) {
        let e = SiteOps::new(chain, idx.electron())?;
        let h = SiteOps::new(chain, idx.hole())?;
        let pair = exciton_create(chain, idx)?.apply(&vac);
        let first = h.f_dag.apply(&pair).add(&e.g_dag.apply(&vac));
        let second = e.g.apply(&pair).sub(&h.f.apply(&vac));
        worst.0 = worst.0.max(first.norm());
        worst.1 = worst.1.max(second.norm());
    }
    Ok(worst)
}

/// Sites other than the exciton's own two ends give zero when the image
/// operators act on `a†|o>`; returns the largest such norm.
pub fn seed_selectivity(chain: Chain) -> Result<f64> {
    let vac = chain.vacuum();
    let mut worst = 0.0f64;
    for idx in ExcitonIndex::all(chain) {
        let pair = exciton_create(chain, idx)?.apply(&vac);
        for r in 1..=chain.sites() {
            let s = SiteOps::new(chain, r)?;
            if r != idx.hole() {
                worst = worst.max(s.f_dag.apply(&pair).norm());
            }
            if r != idx.electron() {
                worst = worst.max(s.g.apply(&pair).norm());
            }
        }
    }
    Ok(worst)
}

/// Residuals of `f†_r|l) = -l g†_{r+y}|l)` and `g_{r+y}|l) = l f_r|l)` on the
/// truncated coherent state.
pub fn injection_check(spec: ModeSpec, r: usize, lambda: f64, tail_limit: f64) -> Result<Vec<ResidualRecord>> {
    let l = spec.sites();
    if r == 0 || r + spec.y > l {
        return Err(Error::InvalidParameter(format!(
            "injection site r = {r} needs 1 <= r and r + y <= {l}"
        )));
    }
    let coherent = spec.coherent_state(Complex64::new(lambda, 0.0), tail_limit)?;
    let psi = &coherent.state;
    let low = SiteOps::new(spec.chain, r)?;
    let high = SiteOps::new(spec.chain, r + spec.y)?;
    let first = low.f_dag.apply(psi).add(&high.g_dag.apply(psi).scale_real(lambda));
    let second = high.g.apply(psi).sub(&low.f.apply(psi).scale_real(lambda));
    let record = |relation: &str, residual: f64| ResidualRecord {
        relation: relation.to_string(),
        sites: l,
        y: spec.y,
        lambda,
        residual,
        tail_weight: coherent.tail_weight,
    };
    Ok(vec![
        record("f_dag(r) + lambda g_dag(r+y)", first.norm()),
        record("g(r+y) - lambda f(r)", second.norm()),
    ])
}

/// Split of `exp(i theta gamma_r)|lambda_y)` by the state of site `r` and its partners.
#[derive(Debug, Clone, Serialize)]
pub struct DiradicalReport {
    pub r: usize,
    pub theta: f64,
    /// `+` at `r + y` and `+` at `r` (unpaired electron at `r + y`)
    pub negative_diradical: f64,
    /// `-` at `r` and `-` at `r - y` (unpaired hole at `r - y`)
    pub positive_diradical: f64,
    /// site `r` still bound in a `+ -` pair
    pub paired: f64,
    /// everything else (site `r` neutral)
    pub other: f64,
    pub negative_branch_on_chain: bool,
    pub positive_branch_on_chain: bool,
    pub tail_weight: f64,
}

/// Apply the site rotation at `r` to the coherent background and classify the result.
pub fn diradical_generate(spec: ModeSpec, r: usize, theta: f64, lambda: f64, tail_limit: f64) -> Result<(ChainState, DiradicalReport)> {
    spec.chain.check_site(r)?;
    let coherent = spec.coherent_state(Complex64::new(lambda, 0.0), tail_limit)?;
    let out = bogoliubov(spec.chain, MixingAngle(theta), r)?.apply(&coherent.state);
    let (l, y) = (spec.sites(), spec.y);
    let charge = |b: crate::fockspace::FockBasisState, site: usize| -> Option<i32> {
        (1..=l).contains(&site).then(|| b.site_charge(site))
    };
    let mut rep = DiradicalReport {
        r,
        theta,
        negative_diradical: 0.0,
        positive_diradical: 0.0,
        paired: 0.0,
        other: 0.0,
        negative_branch_on_chain: r + y <= l,
        positive_branch_on_chain: r > y,
        tail_weight: coherent.tail_weight,
    };
    for (b, a) in out.iter() {
        let w = a.norm_sqr();
        let here = b.site_charge(r);
        let above = charge(b, r + y);
        let below = r.checked_sub(y).and_then(|s| charge(b, s));
        match (here, above, below) {
            (1, Some(1), _) => rep.negative_diradical += w,
            (-1, _, Some(-1)) => rep.positive_diradical += w,
            (-1, Some(1), _) | (1, _, Some(-1)) => rep.paired += w,
            _ => rep.other += w,
        }
    }
    Ok((out, rep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn seeds_hold_on_short_chains() {
        for l in 2..=4 {
            let (a, b) = seed_residuals(Chain::new(l).unwrap()).unwrap();
            assert!(a < 1e-14 && b < 1e-14);
            assert!(seed_selectivity(Chain::new(l).unwrap()).unwrap() < 1e-14);
        }
    }

    #[test]
    fn zero_lambda_injection_is_trivial() {
        let spec = ModeSpec::new(Chain::new(4).unwrap(), 1).unwrap();
        for rec in injection_check(spec, 2, 0.0, 1e-6).unwrap() {
            assert!(rec.residual < 1e-14, "{}", rec.relation);
        }
    }

    #[test]
    fn half_turn_leaves_no_bound_partner_at_r() {
        let spec = ModeSpec::new(Chain::new(6).unwrap(), 1).unwrap();
        let (_, rep) = diradical_generate(spec, 3, FRAC_PI_2, 0.3, 1e-3).unwrap();
        assert!(rep.paired < 1e-14);
        assert!(rep.negative_diradical > 0.0 && rep.positive_diradical > 0.0);
        let (out, rep0) = diradical_generate(spec, 3, 0.0, 0.3, 1e-3).unwrap();
        assert!(rep0.negative_diradical + rep0.positive_diradical < 1e-14);
        let c = spec.coherent_state(Complex64::new(0.3, 0.0), 1e-3).unwrap();
        assert!(out.distance(&c.state) < 1e-14);
    }

    #[test]
    fn boundary_site_has_one_branch() {
        let spec = ModeSpec::new(Chain::new(6).unwrap(), 1).unwrap();
        let (_, rep) = diradical_generate(spec, 6, FRAC_PI_2, 0.3, 1e-3).unwrap();
        assert!(!rep.negative_branch_on_chain);
        assert_eq!(rep.negative_diradical, 0.0);
        assert!(rep.positive_diradical > 0.0);
    }
}
