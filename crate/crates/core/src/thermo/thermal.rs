//! Thermal product states, the stabilizer split and commutator diagnostics.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exciton::modes::{filled_state, poisson_tail, FilledState, ModeSpec, PolarizationPhases};
use crate::fockspace::{Chain, ChainState, LinearOp};

/// One factor pair: a canonical mode `y` (odd) and optionally the
/// complementary mode `y + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalPair {
    pub y: usize,
    pub lambda: Complex64,
    pub lambda_tilde_next: Option<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermalStateSpec {
    pub pairs: Vec<ThermalPair>,
    pub phases: PolarizationPhases,
    pub tail_limit: f64,
}

impl ThermalStateSpec {
    /// Every mode touched by the pairs, ascending.
    pub fn modes(&self) -> Vec<usize> {
        let mut modes: Vec<usize> = self
            .pairs
            .iter()
            .flat_map(|p| std::iter::once(p.y).chain(p.lambda_tilde_next.map(|_| p.y + 1)))
            .collect();
        modes.sort_unstable();
        modes.dedup();
        modes
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FactorKind {
    Canonical,
    Complementary,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorReport {
    pub y: usize,
    pub kind: FactorKind,
    pub lambda: [f64; 2],
    /// Poisson tail beyond the packing ceiling; zero for complementary factors,
    /// whose series terminates.
    pub tail_weight: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThermalReport {
    #[serde(rename = "L")]
    pub sites: usize,
    pub seed: Option<u64>,
    pub factors: Vec<FactorReport>,
    /// `|<asc|desc>|` between the two orderings of the factors
    pub reorder_overlap: f64,
    /// `arg <asc|desc>`
    pub reorder_phase: f64,
    /// `<T|S|T>`
    pub stabilizer_expectation: f64,
    /// `|(S - s)|T>|`
    pub stabilizer_residual: f64,
}

struct Factor {
    op: LinearOp,
    z: Complex64,
    terms: usize,
}

fn factors(chain: Chain, spec: &ThermalStateSpec) -> Result<(Vec<Factor>, Vec<FactorReport>, Option<ModeSpec>)> {
    let mut canonical = Vec::new();
    let mut complementary = Vec::new();
    let mut reports = Vec::new();
    let mut base_mode: Option<ModeSpec> = None;
    for pair in &spec.pairs {
        if pair.y % 2 == 0 {
            return Err(Error::InvalidParameter(format!("canonical mode y = {} must be odd", pair.y)));
        }
        let mode = ModeSpec::new(chain, pair.y)?.with_theta(spec.phases.get(pair.y));
        let m_max = mode.max_occupation();
        let tail = poisson_tail(pair.lambda.norm_sqr(), m_max);
        if tail > spec.tail_limit {
            return Err(Error::TailTooHeavy {
                tail,
                limit: spec.tail_limit,
                lambda: pair.lambda.norm(),
            });
        }
        reports.push(FactorReport {
            y: pair.y,
            kind: FactorKind::Canonical,
            lambda: [pair.lambda.re, pair.lambda.im],
            tail_weight: tail,
        });
        canonical.push(Factor {
            op: mode.create()?,
            z: pair.lambda,
            terms: m_max + 1,
        });
        if let Some(lt) = pair.lambda_tilde_next {
            let next = ModeSpec::new(chain, pair.y + 1)?.with_theta(spec.phases.get(pair.y + 1));
            if base_mode.is_none_or(|b| next.y < b.y) {
                base_mode = Some(next);
            }
            reports.push(FactorReport {
                y: next.y,
                kind: FactorKind::Complementary,
                lambda: [lt.re, lt.im],
                tail_weight: 0.0,
            });
            complementary.push(Factor {
                op: next.annihilate()?,
                z: lt,
                terms: next.max_occupation() + 1,
            });
        }
    }
    // complementary factors act first on the filled base, canonical ones after
    complementary.extend(canonical);
    Ok((complementary, reports, base_mode))
}

fn assemble<'a>(base: &ChainState, order: impl Iterator<Item = &'a Factor>) -> ChainState {
    order
        .fold(base.clone(), |state, f| f.op.exp_series_apply(f.z, &state, 0.0, f.terms))
        .pruned()
        .normalized()
}

/// Assembles the product of coherent factors on the chain backend.
pub fn build_thermal_state(spec: &ThermalStateSpec, sites: usize) -> Result<(ChainState, ThermalReport)> {
    let chain = Chain::new(sites)?;
    let (factors, reports, base_mode) = factors(chain, spec)?;
    let base = match base_mode {
        Some(mode) => filled_state(mode, FilledState::LeftAligned)?,
        None => chain.vacuum(),
    };
    let forward = assemble(&base, factors.iter());
    if forward.norm() == 0.0 {
        return Err(Error::Infeasible("thermal product vanished on the chain".into()));
    }
    let backward = assemble(&base, factors.iter().rev());
    let overlap = forward.inner(&backward);

    let (s_op, _) = stabilizer_op(chain, &spec.modes(), &spec.phases)?;
    let s_psi = s_op.apply(&forward);
    let s = forward.inner(&s_psi).re;
    let residual = s_psi.sub(&forward.scale_real(s)).norm();

    let report = ThermalReport {
        sites,
        seed: spec.phases.seed,
        factors: reports,
        reorder_overlap: overlap.norm(),
        reorder_phase: overlap.arg(),
        stabilizer_expectation: s,
        stabilizer_residual: residual,
    };
    Ok((forward, report))
}

/// `(S, B)` with `S = sum_y (b_y + b_y†)` and `B` taking `b_y` for odd `y`
/// and `b_y†` for even `y`, so that `S = B + B†` for every mode set.
pub fn stabilizer_op(chain: Chain, modes: &[usize], phases: &PolarizationPhases) -> Result<(LinearOp, LinearOp)> {
    let mut s_terms = Vec::new();
    let mut b_terms = Vec::new();
    for &y in modes {
        let mode = ModeSpec::new(chain, y)?.with_theta(phases.get(y));
        let (create, annihilate) = (mode.create()?, mode.annihilate()?);
        s_terms.push(create.clone());
        s_terms.push(annihilate.clone());
        b_terms.push(if y % 2 == 1 { annihilate } else { create });
    }
    Ok((LinearOp::sum(s_terms), LinearOp::sum(b_terms)))
}

/// `[B, B†]` measured against the ideal bosonic value `#odd - #even`.
#[derive(Debug, Clone, Serialize)]
pub struct CommutatorReport {
    #[serde(rename = "L")]
    pub sites: usize,
    pub modes: Vec<usize>,
    pub seed: Option<u64>,
    pub ideal: i64,
    /// `|([B,B†] - ideal)|o>|`
    pub vacuum_residual: f64,
    /// Same residual on each normalized state reached from the vacuum by
    /// one or two mode operators, labeled by the word applied.
    pub sector_residuals: Vec<(String, f64)>,
}

impl CommutatorReport {
    pub fn max_sector_residual(&self) -> f64 {
        self.sector_residuals.iter().map(|(_, r)| *r).fold(self.vacuum_residual, f64::max)
    }
}

pub fn commutator_report(chain: Chain, modes: &[usize], phases: &PolarizationPhases) -> Result<CommutatorReport> {
    let (_, b) = stabilizer_op(chain, modes, phases)?;
    let comm = LinearOp::commutator(&b, &b.adjoint());
    let ideal = modes.iter().map(|&y| if y % 2 == 1 { 1 } else { -1 }).sum::<i64>();
    let residual = |psi: &ChainState| comm.apply(psi).sub(&psi.scale_real(ideal as f64)).norm();

    let mut letters = Vec::new();
    for &y in modes {
        let mode = ModeSpec::new(chain, y)?.with_theta(phases.get(y));
        letters.push((format!("b{y}+"), mode.create()?));
        letters.push((format!("b{y}"), mode.annihilate()?));
    }
    let vacuum = chain.vacuum();
    let mut sector_residuals = Vec::new();
    for (name1, op1) in &letters {
        let one = op1.apply(&vacuum);
        if one.norm() > 1e-12 {
            sector_residuals.push((name1.clone(), residual(&one.normalized())));
        }
        for (name2, op2) in &letters {
            let two = op2.apply(&one);
            if two.norm() > 1e-12 {
                sector_residuals.push((format!("{name2} {name1}"), residual(&two.normalized())));
            }
        }
    }
    Ok(CommutatorReport {
        sites: chain.sites(),
        modes: modes.to_vec(),
        seed: phases.seed,
        ideal,
        vacuum_residual: residual(&vacuum),
        sector_residuals,
    })
}

/// Sites whose charge in `b_y†|o>` is always `+` or always `-`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionReport {
    pub y: usize,
    #[serde(rename = "L")]
    pub sites: usize,
    pub electron_only: Vec<usize>,
    pub hole_only: Vec<usize>,
    pub mixed: Vec<usize>,
    pub never_charged: Vec<usize>,
}

pub fn electron_hole_rich_regions(chain: Chain, y: usize) -> Result<RegionReport> {
    let mode = ModeSpec::new(chain, y)?;
    let state = mode.create()?.apply(&chain.vacuum());
    let sites = chain.sites();
    let mut seen = vec![(false, false); sites + 1];
    for (basis, amp) in state.iter() {
        if amp.norm() < 1e-12 {
            continue;
        }
        for (site, flags) in seen.iter_mut().enumerate().skip(1) {
            match basis.site_charge(site) {
                1 => flags.0 = true,
                -1 => flags.1 = true,
                _ => {}
            }
        }
    }
    let mut report = RegionReport {
        y,
        sites,
        electron_only: Vec::new(),
        hole_only: Vec::new(),
        mixed: Vec::new(),
        never_charged: Vec::new(),
    };
    for (site, flags) in seen.into_iter().enumerate().skip(1) {
        match flags {
            (true, false) => report.electron_only.push(site),
            (false, true) => report.hole_only.push(site),
            (true, true) => report.mixed.push(site),
            (false, false) => report.never_charged.push(site),
        }
    }
    Ok(report)
}
