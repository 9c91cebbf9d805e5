//! y-exciton mode operators, Fock states and truncated coherent states.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ops::{check_span, exciton_create, polarization, ExcitonIndex};
use crate::error::{Error, Result};
use crate::fockspace::{Chain, ChainState, FockBasisState, LinearOp};
use crate::thermo::packing::{left_aligned_packing, max_packings, packing_counts};

/// Default ceiling on the discarded weight of a truncated coherent state.
pub const DEFAULT_TAIL_LIMIT: f64 = 1e-6;

/// How the sector normalization `zeta(m)` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum ZetaRule {
    /// `sqrt(C(m-1) / (m C(m)))` from the exact packing counts `C`; keeps
    /// every `|m)` normalized on a finite chain.
    #[default]
    Exact,
    /// `(L - y - 2(m - 1))^{-1/2}`; agrees with `Exact` at `m = 1`.
    Closed,
}

/// One y-exciton mode on a chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    pub chain: Chain,
    pub y: usize,
    /// polarization angle `Theta`
    pub theta: f64,
    pub zeta: ZetaRule,
}

impl ModeSpec {
    pub fn new(chain: Chain, y: usize) -> Result<Self> {
        check_span(chain, y)?;
        Ok(ModeSpec {
            chain,
            y,
            theta: 0.0,
            zeta: ZetaRule::Exact,
        })
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_zeta(mut self, zeta: ZetaRule) -> Self {
        self.zeta = zeta;
        self
    }

    pub fn sites(&self) -> usize {
        self.chain.sites()
    }

    pub fn max_occupation(&self) -> usize {
        max_packings(self.sites(), self.y)
    }

    /// `zeta(m)` for `m >= 1`; zero for `m = 0` or past the packing ceiling.
    pub fn zeta_value(&self, m: usize) -> f64 {
        if m == 0 {
            return 0.0;
        }
        match self.zeta {
            ZetaRule::Exact => {
                let c = packing_counts(self.sites(), self.y);
                match (c.get(m - 1), c.get(m)) {
                    (Some(&lo), Some(&hi)) if hi > 0 => (lo as f64 / (m as f64 * hi as f64)).sqrt(),
                    _ => 0.0,
                }
            }
            ZetaRule::Closed => {
                let base = self.sites() as f64 - self.y as f64 - 2.0 * (m as f64 - 1.0);
                if base > 0.0 {
                    base.powf(-0.5)
                } else {
                    0.0
                }
            }
        }
    }

    /// Exciton count of span `y` on a configuration.
    ///
    /// At `Theta = 0` only electron-above-hole pairs occur and they are
    /// counted directly. A nonzero `Theta` also admits the reversed
    /// orientation, so the count becomes a maximum matching of disjoint
    /// opposite-charge pairs along each residue class mod `y`. Greedy
    /// matching is optimal on a path.
    pub fn occupation_of(&self, b: FockBasisState) -> usize {
        let y = self.y;
        if self.theta == 0.0 {
            return (y + 1..=self.sites())
                .filter(|&mu| b.site_charge(mu) == 1 && b.site_charge(mu - y) == -1)
                .count();
        }
        let mut count = 0;
        for start in 1..=y.min(self.sites()) {
            let mut site = start;
            while site + y <= self.sites() {
                if b.site_charge(site) * b.site_charge(site + y) == -1 {
                    count += 1;
                    site += 2 * y;
                } else {
                    site += y;
                }
            }
        }
        count
    }

    /// `sum_{mu - nu = y} m_{mu,nu}`.
    pub fn number_sum(&self) -> LinearOp {
        let spec = *self;
        LinearOp::diagonal_real(move |b| spec.occupation_of(b) as f64)
    }

    /// Sector-diagonal `zeta` scaling.
    pub fn zeta_op(&self) -> LinearOp {
        let spec = *self;
        let table: Vec<f64> = (0..=self.max_occupation() + 1).map(|m| self.zeta_value(m)).collect();
        LinearOp::diagonal_real(move |b| table.get(spec.occupation_of(b)).copied().unwrap_or(0.0))
    }

    /// `sum_{mu - nu = y} exp(i Theta J) a†_{mu,nu}` without normalization.
    pub fn raw_create(&self) -> Result<LinearOp> {
        let terms = ExcitonIndex::with_span(self.chain, self.y)?
            .into_iter()
            .map(|idx| {
                let a = exciton_create(self.chain, idx)?;
                if self.theta == 0.0 {
                    Ok(a)
                } else {
                    Ok(polarization(self.chain, idx.electron(), idx.hole(), self.theta)? * a)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearOp::sum(terms))
    }

    /// `b†_y = zeta * sum exp(i Theta J) a†`, with `m` counted after creation.
    pub fn create(&self) -> Result<LinearOp> {
        Ok(self.zeta_op() * self.raw_create()?)
    }

    /// `b_y = sum a exp(-i Theta J) * zeta`, with `m` counted before annihilation.
    pub fn annihilate(&self) -> Result<LinearOp> {
        Ok(self.create()?.adjoint())
    }

    /// Normalized Fock state `(m!)^{-1/2} (b†)^m |o>`.
    pub fn fock_state(&self, m: usize) -> Result<ChainState> {
        let max = self.max_occupation();
        if m > max {
            return Err(Error::OccupationTooLarge {
                m,
                max,
                sites: self.sites(),
                y: self.y,
            });
        }
        Ok(self.fock_ladder(m)?.pop().unwrap())
    }

    /// `|0), |1), ..., |m)`.
    pub fn fock_ladder(&self, m: usize) -> Result<Vec<ChainState>> {
        let create = self.create()?;
        let mut out = vec![self.chain.vacuum()];
        for k in 1..=m {
            let next = create.apply(out.last().unwrap()).scale_real(1.0 / (k as f64).sqrt());
            out.push(next);
        }
        Ok(out)
    }

    /// Truncated canonical coherent state `exp(lambda b† - |lambda|^2/2)|o>`.
    pub fn coherent_state(&self, lambda: Complex64, tail_limit: f64) -> Result<CoherentState> {
        let m_max = self.max_occupation();
        let x = lambda.norm_sqr();
        let tail = poisson_tail(x, m_max);
        if tail > tail_limit {
            return Err(Error::TailTooHeavy {
                tail,
                limit: tail_limit,
                lambda: lambda.norm(),
            });
        }
        let ladder = self.fock_ladder(m_max)?;
        let mut state = ChainState::zero(self.sites());
        let mut coeff = Complex64::new((-x / 2.0).exp(), 0.0);
        for (m, fock) in ladder.iter().enumerate() {
            if m > 0 {
                coeff *= lambda / (m as f64).sqrt();
            }
            state.axpy(coeff, fock);
        }
        Ok(CoherentState {
            state: state.pruned().normalized(),
            tail_weight: tail,
            m_max,
        })
    }

    /// Truncated complementary state `exp(lambda~ b + |lambda~|^2/2)|filled>`,
    /// normalized. The series is finite because `b` empties the chain.
    pub fn complementary_state(&self, lambda_tilde: Complex64, filled: FilledState) -> Result<ChainState> {
        let base = filled_state(*self, filled)?;
        let b = self.annihilate()?;
        Ok(b.exp_series_apply(lambda_tilde, &base, 0.0, self.max_occupation() + 1)
            .normalized())
    }
}

/// `P(N > m_max)` for `N ~ Poisson(x)`.
pub fn poisson_tail(x: f64, m_max: usize) -> f64 {
    let mut term = (-x).exp();
    let mut head = term;
    for m in 1..=m_max {
        term *= x / m as f64;
        head += term;
    }
    // summing the tail directly avoids cancellation when it is tiny
    let mut tail = 0.0;
    let mut t = term;
    for m in m_max + 1..m_max + 400 {
        t *= x / m as f64;
        tail += t;
        if t < 1e-300 || t < tail * 1e-17 {
            break;
        }
    }
    if tail > 0.0 {
        tail
    } else {
        (1.0 - head).max(0.0)
    }
}

/// Truncated coherent state with its discarded-weight certificate.
#[derive(Debug, Clone)]
pub struct CoherentState {
    pub state: ChainState,
    pub tail_weight: f64,
    pub m_max: usize,
}

/// Realization of the maximally occupied state of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum FilledState {
    /// Single left-aligned maximal packing.
    #[default]
    LeftAligned,
    /// Normalized Fock state at the packing ceiling.
    Uniform,
}

/// The maximally occupied state of one mode at `Theta = 0`.
pub fn filled_state(spec: ModeSpec, kind: FilledState) -> Result<ChainState> {
    match kind {
        FilledState::LeftAligned => {
            let mut state = spec.chain.vacuum();
            for (hole, electron) in left_aligned_packing(spec.sites(), spec.y) {
                let idx = ExcitonIndex::new(spec.chain, electron, hole)?;
                state = exciton_create(spec.chain, idx)?.apply(&state);
            }
            Ok(state)
        }
        FilledState::Uniform => spec.with_theta(0.0).fock_state(spec.max_occupation()),
    }
}

/// Per-mode polarization angles, optionally drawn from a seeded generator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolarizationPhases {
    pub seed: Option<u64>,
    pub theta: BTreeMap<usize, f64>,
}

impl PolarizationPhases {
    /// Field-aligned: every `Theta = 0`.
    pub fn aligned(modes: &[usize]) -> Self {
        PolarizationPhases {
            seed: None,
            theta: modes.iter().map(|&y| (y, 0.0)).collect(),
        }
    }

    /// Uniform angles in `[0, 2 pi)`, reproducible for a fixed seed.
    pub fn random(seed: u64, modes: &[usize]) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sorted = modes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        PolarizationPhases {
            seed: Some(seed),
            theta: sorted.into_iter().map(|y| (y, rng.gen_range(0.0..TAU))).collect(),
        }
    }

    pub fn get(&self, y: usize) -> f64 {
        self.theta.get(&y).copied().unwrap_or(0.0)
    }
}

/// Deviations of the mode ladder relations on `|m)`.
#[derive(Debug, Clone, Serialize)]
pub struct LadderReport {
    pub m: usize,
    pub norm: f64,
    /// `| b† |m) - sqrt(m+1) |m+1) |`
    pub raise_residual: f64,
    /// `| b |m) - sqrt(m) |m-1) |`
    pub lower_residual: f64,
    /// `| (m+1| b† |m) - sqrt(m+1) |`
    pub raise_element_error: f64,
    /// `| (m-1| b |m) - sqrt(m) |`
    pub lower_element_error: f64,
    /// `| b† b |m) - m |m) |`
    pub number_residual: f64,
}

/// Ladder checks for `m = 0..=m_top` (`|m_top + 1)` is used when it exists).
pub fn ladder_reports(spec: ModeSpec, m_top: usize) -> Result<Vec<LadderReport>> {
    let top = (m_top + 1).min(spec.max_occupation());
    let ladder = spec.fock_ladder(top)?;
    let create = spec.create()?;
    let annihilate = spec.annihilate()?;
    let zero = ChainState::zero(spec.sites());
    let mut out = Vec::new();
    for m in 0..=m_top.min(spec.max_occupation()) {
        let ket = &ladder[m];
        let up = create.apply(ket);
        let down = annihilate.apply(ket);
        let up_target = ladder.get(m + 1).map_or(zero.clone(), |s| s.scale_real(((m + 1) as f64).sqrt()));
        let down_target = if m == 0 { zero.clone() } else { ladder[m - 1].scale_real((m as f64).sqrt()) };
        let raise_el = ladder.get(m + 1).map_or(Complex64::default(), |s| s.inner(&up));
        let lower_el = if m == 0 { Complex64::default() } else { ladder[m - 1].inner(&down) };
        let raise_ref = if ladder.get(m + 1).is_some() { ((m + 1) as f64).sqrt() } else { 0.0 };
        let number = create.apply(&down);
        out.push(LadderReport {
            m,
            norm: ket.norm(),
            raise_residual: up.distance(&up_target),
            lower_residual: down.distance(&down_target),
            raise_element_error: (raise_el - raise_ref).norm(),
            lower_element_error: (lower_el - (m as f64).sqrt()).norm(),
            number_residual: number.distance(&ket.scale_real(m as f64)),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(l: usize, y: usize) -> ModeSpec {
        ModeSpec::new(Chain::new(l).unwrap(), y).unwrap()
    }

    #[test]
    fn single_exciton_is_uniform_over_placements() {
        let s = spec(4, 1);
        let one = s.create().unwrap().apply(&s.chain.vacuum());
        let expect = ["oo+-", "o+-o", "+-oo"]
            .iter()
            .map(|t| ChainState::parse_product(t).unwrap())
            .fold(ChainState::zero(4), |acc, x| acc.add(&x))
            .scale_real(1.0 / 3f64.sqrt());
        assert!(one.distance(&expect) < 1e-14);
        let number = s.create().unwrap() * s.annihilate().unwrap();
        assert!(number.apply(&one).distance(&one) < 1e-14);
        assert!(s.annihilate().unwrap().apply(&s.chain.vacuum()).is_empty());
    }

    #[test]
    fn exact_zeta_normalizes_every_fock_state() {
        let s = spec(6, 1);
        for st in s.fock_ladder(3).unwrap() {
            assert!((st.norm() - 1.0).abs() < 1e-12);
        }
        assert!((s.zeta_value(1) - spec(6, 1).with_zeta(ZetaRule::Closed).zeta_value(1)).abs() < 1e-15);
    }

    #[test]
    fn closed_zeta_loses_norm_beyond_one_exciton() {
        let s = spec(6, 1).with_zeta(ZetaRule::Closed);
        let ladder = s.fock_ladder(3).unwrap();
        assert!((ladder[1].norm() - 1.0).abs() < 1e-12);
        assert!((ladder[2].norm() - 1.0).abs() > 0.05);
    }

    #[test]
    fn occupation_above_ceiling_is_refused() {
        assert!(matches!(spec(4, 3).fock_state(2), Err(Error::OccupationTooLarge { max: 1, .. })));
    }

    #[test]
    fn coherent_state_certificate() {
        let s = spec(6, 1);
        assert!(matches!(
            s.coherent_state(Complex64::new(0.3, 0.0), DEFAULT_TAIL_LIMIT),
            Err(Error::TailTooHeavy { .. })
        ));
        let c = s.coherent_state(Complex64::new(0.3, 0.0), 1e-3).unwrap();
        assert!(c.tail_weight < 1e-3);
        let zero = s.coherent_state(Complex64::default(), DEFAULT_TAIL_LIMIT).unwrap();
        assert!(zero.state.distance(&s.chain.vacuum()) < 1e-14);
    }

    #[test]
    fn poisson_tail_small_cases() {
        assert!((poisson_tail(1.0, 0) - (1.0 - (-1f64).exp())).abs() < 1e-15);
        assert_eq!(poisson_tail(0.0, 3), 0.0);
    }

    #[test]
    fn seeded_phases_are_reproducible() {
        let a = PolarizationPhases::random(7, &[1, 2, 3]);
        let b = PolarizationPhases::random(7, &[3, 2, 1]);
        assert_eq!(a, b);
        assert_ne!(a, PolarizationPhases::random(8, &[1, 2, 3]));
    }
}
