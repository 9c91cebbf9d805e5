//! Chain-level check of the fission step: a long exciton injected into a
//! complementary y = 1 background regroups into two y = 2 excitons.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exciton::modes::{poisson_tail, FilledState, ModeSpec};
use crate::exciton::ops::{exciton_create, ExcitonIndex};
use crate::fockspace::{Chain, ChainState, LinearOp};

#[derive(Debug, Clone, Serialize)]
pub struct FissionReport {
    #[serde(rename = "L")]
    pub sites: usize,
    pub lambda_tilde_1: f64,
    pub lambda_2: f64,
    /// lowest site of the injected y = 3 exciton
    pub r: usize,
    /// weight of `(-, -, +, +)` on sites `r..r+3` after the action, relative to its norm
    pub dominant_fraction: f64,
    /// `|<tau|phi>| / (|tau| |phi|)` with `tau` the single-term image `a†_{r+3,r} zeta a†_{r+2,r+1}`
    pub regrouped_overlap: f64,
    /// number of y = 2 excitons on sites `r..r+3` in the dominant component (min, max)
    pub emergent_y2: (usize, usize),
    /// `| a†_{r+3,r} a†_{r+2,r+1} psi - a†_{r+3,r+1} a†_{r+2,r} psi |`
    pub regroup_residual: f64,
    /// `| b†_1 psi + lambda~_1 psi |` on the truncated background
    pub eigen_residual: f64,
    pub tail_weight: f64,
    pub post_action_norm: f64,
}

/// Normalized truncated background `exp(l2 b†_2) exp(l~1 b_1)|filled_1>`.
pub fn fission_background(chain: Chain, lambda_tilde_1: f64, lambda_2: f64, tail_limit: f64) -> Result<(ChainState, f64)> {
    let m1 = ModeSpec::new(chain, 1)?;
    let m2 = ModeSpec::new(chain, 2)?;
    let comp = m1.complementary_state(Complex64::new(lambda_tilde_1, 0.0), FilledState::LeftAligned)?;
    let tail = poisson_tail(lambda_2 * lambda_2, m2.max_occupation());
    if tail > tail_limit {
        return Err(Error::TailTooHeavy {
            tail,
            limit: tail_limit,
            lambda: lambda_2,
        });
    }
    let psi = m2
        .create()?
        .exp_series_apply(Complex64::new(lambda_2, 0.0), &comp, 0.0, m2.max_occupation() + 1)
        .normalized();
    Ok((psi, tail))
}

fn pair(chain: Chain, electron: usize, hole: usize) -> Result<LinearOp> {
    exciton_create(chain, ExcitonIndex::new(chain, electron, hole)?)
}

/// Apply `a†_{r+3,r} (-b†_1 / l~1)` to the background and locate the result.
pub fn fission_action_check(sites: usize, lambda_tilde_1: f64, lambda_2: f64, r: usize, tail_limit: f64) -> Result<FissionReport> {
    if sites < 4 || r == 0 || r + 3 > sites {
        return Err(Error::InvalidParameter(format!("need 1 <= r and r + 3 <= L, got r = {r}, L = {sites}")));
    }
    if lambda_tilde_1.abs() <= 1.0 {
        return Err(Error::InvalidParameter(format!("|lambda~_1| must exceed 1, got {lambda_tilde_1}")));
    }
    let chain = Chain::new(sites)?;
    let (psi, tail) = fission_background(chain, lambda_tilde_1, lambda_2, tail_limit)?;
    let m1 = ModeSpec::new(chain, 1)?;
    let b1_dag = m1.create()?;

    let eigen_residual = b1_dag.apply(&psi).add(&psi.scale_real(lambda_tilde_1)).norm();
    let long = pair(chain, r + 3, r)?;
    let phi = (long.clone() * b1_dag).apply(&psi).scale_real(-1.0 / lambda_tilde_1);

    let pattern = [(r, -1), (r + 1, -1), (r + 2, 1), (r + 3, 1)];
    let mut hit = 0.0;
    let mut y2 = (usize::MAX, 0usize);
    for (b, a) in phi.iter() {
        if pattern.iter().all(|&(s, q)| b.site_charge(s) == q) {
            hit += a.norm_sqr();
            let n = [(r + 2, r), (r + 3, r + 1)]
                .iter()
                .filter(|&&(e, h)| b.site_charge(e) == 1 && b.site_charge(h) == -1 && e - h == 2)
                .count();
            y2 = (y2.0.min(n), y2.1.max(n));
        }
    }
    let total = phi.norm_sqr();
    if y2.0 == usize::MAX {
        y2 = (0, 0);
    }

    let tau = (long.clone() * m1.zeta_op() * pair(chain, r + 2, r + 1)?)
        .apply(&psi)
        .scale_real(-1.0 / lambda_tilde_1);
    let overlap = if tau.norm() > 0.0 && phi.norm() > 0.0 {
        tau.inner(&phi).norm() / (tau.norm() * phi.norm())
    } else {
        0.0
    };
    let lhs = (long * pair(chain, r + 2, r + 1)?).apply(&psi);
    let rhs = (pair(chain, r + 3, r + 1)? * pair(chain, r + 2, r)?).apply(&psi);
    Ok(FissionReport {
        sites,
        lambda_tilde_1,
        lambda_2,
        r,
        dominant_fraction: if total > 0.0 { hit / total } else { 0.0 },
        regrouped_overlap: overlap,
        emergent_y2: y2,
        regroup_residual: lhs.distance(&rhs),
        eigen_residual,
        tail_weight: tail,
        post_action_norm: total.sqrt(),
    })
}

/// Central injection site `(L - 2) / 2`, clamped to the admissible range.
pub fn central_site(sites: usize) -> usize {
    ((sites.saturating_sub(2)) / 2).clamp(1, sites.saturating_sub(3).max(1))
}

/// Reports for every admissible `r`.
pub fn fission_scan(sites: usize, lambda_tilde_1: f64, lambda_2: f64, tail_limit: f64) -> Result<Vec<FissionReport>> {
    (1..=sites.saturating_sub(3))
        .map(|r| fission_action_check(sites, lambda_tilde_1, lambda_2, r, tail_limit))
        .collect()
}
