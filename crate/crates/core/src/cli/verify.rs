//! Identity suite behind `ternary verify`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{sig12, ExperimentConfig, DEFAULT_TOLERANCE};
use crate::error::Result;
use crate::exciton::injection::seed_residuals;
use crate::exciton::modes::{ladder_reports, ModeSpec, PolarizationPhases};
use crate::exciton::ops::{exciton_annihilate, exciton_create, ExcitonIndex};
use crate::fockspace::{Chain, ChainState, Ladder, LinearOp, QutritLabel, Species};
use crate::moment::expect::{expect_value, int_coeffs, MomentSpec, TruncatedMode};
use crate::moment::formulas::{
    ac_current, dc_current, excited_number_rational, spin_gap_denominator, spin_gap_numerator, spin_gap_rational,
};
use crate::moment::OpPolynomial;
use crate::qutrit::{
    bogoliubov, fermi_dirac, number_op, pair_raise_lower, thermal_excited_state, ChemPotAlpha, MixingAngle, PairAction,
    SiteOps,
};
use crate::thermo::thermal::{commutator_report, stabilizer_op};

/// Backgrounds beyond this length are limited to at most two charged sites.
const EXHAUSTIVE_BACKGROUND_SITES: usize = 6;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    /// Reported-only checks do not affect the overall verdict.
    pub asserted: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    #[serde(rename = "L")]
    pub sites: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub pass: bool,
}

struct Builder<'a> {
    config: &'a ExperimentConfig,
    checks: Vec<Check>,
}

impl Builder<'_> {
    fn push(&mut self, name: &str, residual: f64, default_tol: f64, asserted: bool) {
        let tolerance = self.config.tolerance_for(name, default_tol);
        self.checks.push(Check {
            name: name.to_string(),
            max_residual: sig12(residual),
            tolerance,
            asserted,
            pass: residual <= tolerance,
        });
    }
}

/// Qutrit product states (`+`, `o`, `-` on each site), site 1 first.
pub fn qutrit_backgrounds(sites: usize, max_charged: usize) -> Vec<Vec<QutritLabel>> {
    const LABELS: [QutritLabel; 3] = [QutritLabel::Plus, QutritLabel::Vacuum, QutritLabel::Minus];
    let total = 3usize.pow(sites as u32);
    (0..total)
        .map(|mut code| {
            (0..sites)
                .map(|_| {
                    let l = LABELS[code % 3];
                    code /= 3;
                    l
                })
                .collect::<Vec<_>>()
        })
        .filter(|labels| labels.iter().filter(|&&l| l != QutritLabel::Vacuum).count() <= max_charged)
        .collect()
}

fn max_over<F>(backgrounds: &[Vec<QutritLabel>], f: F) -> f64
where
    F: Fn(&[QutritLabel], &ChainState) -> f64 + Sync,
{
    backgrounds
        .par_iter()
        .map(|labels| f(labels, &ChainState::product(labels)))
        .reduce(|| 0.0, f64::max)
}

fn site_checks(b: &mut Builder<'_>) -> Result<()> {
    let one = Chain::new(1)?;
    let s = SiteOps::new(one, 1)?;
    let id = LinearOp::identity();
    let (f, fd, g, gd) = (&s.f, &s.f_dag, &s.g, &s.g_dag);

    let pairs: [(&LinearOp, &LinearOp, bool); 10] = [
        (f, fd, true),
        (g, gd, true),
        (f, gd, false),
        (g, fd, false),
        (f, g, false),
        (fd, gd, false),
        (f, f, false),
        (g, g, false),
        (fd, fd, false),
        (gd, gd, false),
    ];
    let anti = pairs
        .iter()
        .map(|&(x, y, unit)| {
            let target = if unit { id.clone() } else { LinearOp::zero() };
            LinearOp::anticommutator(x, y).max_column_distance(&target, 1)
        })
        .fold(0.0, f64::max);
    b.push("site.anticommutators", anti, DEFAULT_TOLERANCE, true);

    let nil = [f, fd, g, gd]
        .iter()
        .map(|&op| (op.clone() * op.clone()).max_column_norm(1))
        .fold(0.0, f64::max);
    b.push("site.nilpotency", nil, DEFAULT_TOLERANCE, true);

    use QutritLabel::*;
    let ket = |l: QutritLabel| ChainState::product(&[l]);
    let listed: Vec<(&str, LinearOp, QutritLabel, QutritLabel, f64)> = vec![
        ("f+", fd.clone(), Minus, Vacuum, 1.0),
        ("f", f.clone(), Vacuum, Minus, 1.0),
        ("f", f.clone(), Plus, VacuumPrime, 1.0),
        ("g+", gd.clone(), Vacuum, Plus, 1.0),
        ("g+", gd.clone(), Minus, VacuumPrime, -1.0),
        ("g", g.clone(), Plus, Vacuum, 1.0),
        ("f+f", fd.clone() * f.clone(), Plus, Plus, 1.0),
        ("f+f", fd.clone() * f.clone(), Vacuum, Vacuum, 1.0),
        ("ff+", f.clone() * fd.clone(), Minus, Minus, 1.0),
        ("g+g", gd.clone() * g.clone(), Plus, Plus, 1.0),
        ("gg+", g.clone() * gd.clone(), Vacuum, Vacuum, 1.0),
        ("gg+", g.clone() * gd.clone(), Minus, Minus, 1.0),
        ("fg+", f.clone() * gd.clone(), Vacuum, VacuumPrime, 1.0),
        ("g+f", gd.clone() * f.clone(), Vacuum, VacuumPrime, -1.0),
    ];
    let mut actions = listed
        .iter()
        .map(|(_, op, from, to, sign)| op.apply(&ket(*from)).distance(&ket(*to).scale_real(*sign)))
        .fold(0.0, f64::max);
    // unlisted single-operator actions leave nothing inside the qutrit span
    for (op, name) in [(f, "f"), (fd, "f+"), (g, "g"), (gd, "g+")] {
        for from in [Plus, Vacuum, Minus] {
            if !listed.iter().any(|(n, _, fr, _, _)| *n == name && *fr == from) {
                let (kept, _) = op.apply(&ket(from)).qutrit_project();
                actions = actions.max(kept.norm());
            }
        }
    }
    b.push("site.actions", actions, DEFAULT_TOLERANCE, true);

    let n = number_op(one, 1)?;
    let comm = [(fd, 1.0), (gd, 1.0), (f, -1.0), (g, -1.0)]
        .iter()
        .map(|&(op, sign)| LinearOp::commutator(&n, op).max_column_distance(&op.clone().scaled_real(sign), 1))
        .fold(0.0, f64::max);
    b.push("site.number_commutators", comm, DEFAULT_TOLERANCE, true);

    let occupation = fd.clone() * f.clone();
    let fd_residual = (0..=20)
        .map(|i| {
            let alpha = ChemPotAlpha(-3.0 + 0.3 * i as f64);
            let psi = thermal_excited_state(alpha);
            (occupation.matrix_element(&psi, &psi).re - fermi_dirac(alpha)).abs()
        })
        .fold(0.0, f64::max);
    b.push("site.fermi_dirac", fd_residual, DEFAULT_TOLERANCE, true);

    let mut rot = 0.0f64;
    for theta in [0.0, 0.3, PI / 4.0, 1.1, FRAC_PI_2] {
        let u = bogoliubov(one, MixingAngle(theta), 1)?;
        let expect = ket(Minus).scale_real(theta.cos()).add(&ket(Plus).scale_real(theta.sin()));
        rot = rot.max(u.apply(&ket(Minus)).distance(&expect));
        rot = rot.max((u.adjoint() * u.clone()).max_column_distance(&id, 1));
    }
    b.push("site.bogoliubov_rotation", rot, DEFAULT_TOLERANCE, true);

    let raise = pair_raise_lower(one, 1, PairAction::Raise)?;
    let lower = pair_raise_lower(one, 1, PairAction::Lower)?;
    let pair = raise.apply(&ket(Minus)).distance(&ket(Plus))
        + lower.apply(&ket(Plus)).distance(&ket(Minus))
        + raise.apply(&ket(Plus)).norm();
    b.push("site.pair_raise_lower", pair, DEFAULT_TOLERANCE, true);
    Ok(())
}

fn chain_checks(b: &mut Builder<'_>, chain: Chain) -> Result<()> {
    let l = chain.sites();
    let max_charged = if l <= EXHAUSTIVE_BACKGROUND_SITES { l } else { 2 };
    let backgrounds = qutrit_backgrounds(l, max_charged);

    let mut car = 0.0f64;
    let modes: Vec<(Species, usize)> = (1..=l)
        .flat_map(|s| [(Species::C, s), (Species::D, s)])
        .collect();
    for (i, &(si, ri)) in modes.iter().enumerate() {
        for &(sj, rj) in &modes[i..] {
            let a = chain.mode_op(Ladder::Annihilate, si, ri)?;
            let c = chain.mode_op(Ladder::Create, sj, rj)?;
            let target = if (si, ri) == (sj, rj) { LinearOp::identity() } else { LinearOp::zero() };
            let ac = LinearOp::anticommutator(&a, &c);
            car = car.max(max_over(&backgrounds, |_, psi| ac.apply(psi).distance(&target.apply(psi))));
            let aa = LinearOp::anticommutator(&a, &chain.mode_op(Ladder::Annihilate, sj, rj)?);
            car = car.max(max_over(&backgrounds, |_, psi| aa.apply(psi).norm()));
        }
    }
    b.push("chain.car", car, DEFAULT_TOLERANCE, true);

    let indices = ExcitonIndex::all(chain);
    let creators: Vec<LinearOp> = indices.iter().map(|&i| exciton_create(chain, i)).collect::<Result<_>>()?;
    let annihilators: Vec<LinearOp> = indices.iter().map(|&i| exciton_annihilate(chain, i)).collect::<Result<_>>()?;

    let actions = indices
        .iter()
        .zip(creators.iter().zip(&annihilators))
        .map(|(idx, (a_dag, a))| {
            max_over(&backgrounds, |labels, psi| {
                let out = a_dag.apply(psi);
                let (e, h) = (idx.electron() - 1, idx.hole() - 1);
                if labels[e] == QutritLabel::Vacuum && labels[h] == QutritLabel::Vacuum {
                    let mut target = labels.to_vec();
                    target[e] = QutritLabel::Plus;
                    target[h] = QutritLabel::Minus;
                    let target = ChainState::product(&target);
                    out.distance(&target).max(a.apply(&target).distance(psi))
                } else {
                    out.norm()
                }
            })
        })
        .fold(0.0, f64::max);
    b.push("chain.exciton_actions", actions, DEFAULT_TOLERANCE, true);

    let mut hard_core = creators
        .iter()
        .map(|a| {
            let sq = a.clone() * a.clone();
            max_over(&backgrounds, |_, psi| sq.apply(psi).norm())
        })
        .fold(0.0, f64::max);
    for i in 0..creators.len() {
        for j in i + 1..creators.len() {
            let cc = LinearOp::commutator(&creators[i], &creators[j]);
            let aa = LinearOp::commutator(&annihilators[i], &annihilators[j]);
            hard_core = hard_core.max(max_over(&backgrounds, |_, psi| cc.apply(psi).norm().max(aa.apply(psi).norm())));
        }
    }
    b.push("chain.hard_core", hard_core, DEFAULT_TOLERANCE, true);

    let total_n = crate::qutrit::total_number_op(chain)?;
    let conserve = creators
        .iter()
        .map(|a| {
            let c = LinearOp::commutator(a, &total_n);
            max_over(&backgrounds, |_, psi| c.apply(psi).norm())
        })
        .fold(0.0, f64::max);
    b.push("chain.number_conservation", conserve, DEFAULT_TOLERANCE, true);

    let (s1, s2) = seed_residuals(chain)?;
    b.push("chain.injection_seeds", s1.max(s2), DEFAULT_TOLERANCE, true);

    let mut regroup = 0.0f64;
    for quad in distinct_quadruples(l) {
        let [mu, mu2, nu, nu2] = quad;
        let a = |e, h| -> Result<LinearOp> { exciton_create(chain, ExcitonIndex::new(chain, e, h)?) };
        let lhs = a(mu, nu)? * a(mu2, nu2)?;
        let rhs = a(mu, nu2)? * a(mu2, nu)?;
        regroup = regroup.max(max_over(&backgrounds, |_, psi| lhs.apply(psi).distance(&rhs.apply(psi))));
    }
    b.push("chain.regrouping_same_sign", regroup, DEFAULT_TOLERANCE, true);
    Ok(())
}

fn distinct_quadruples(l: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for mu in 1..=l {
        for mu2 in 1..=l {
            for nu in 1..=l {
                for nu2 in 1..=l {
                    let q = [mu, mu2, nu, nu2];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| q[i] != q[j]));
                    // both electrons above both holes on each side
                    if distinct && mu > mu2 && nu > nu2 && mu2 > nu {
                        out.push(q);
                    }
                }
            }
        }
    }
    out
}

fn mode_checks(b: &mut Builder<'_>, chain: Chain) -> Result<()> {
    let spec = ModeSpec::new(chain, 1)?;
    let top = spec.max_occupation().saturating_sub(1);
    let reports = ladder_reports(spec, top)?;
    let max = |f: fn(&crate::exciton::modes::LadderReport) -> f64| reports.iter().map(f).fold(0.0, f64::max);
    b.push("mode.normalization", max(|r| (r.norm - 1.0).abs()), 1e-10, true);
    b.push("mode.raise", max(|r| r.raise_residual.max(r.raise_element_error)), 1e-10, true);
    b.push("mode.lower_matrix_element", max(|r| r.lower_element_error), 1e-10, true);
    b.push("mode.lower_vector", max(|r| r.lower_residual), 1e-10, false);

    let modes: Vec<usize> = b.config.modes.iter().copied().filter(|&y| y < chain.sites()).collect();
    if !modes.is_empty() {
        let phases = PolarizationPhases::random(b.config.seed, &modes);
        let (s, bb) = stabilizer_op(chain, &modes, &phases)?;
        let split = s.clone() - (bb.clone() + bb.adjoint());
        let backgrounds = qutrit_backgrounds(chain.sites(), 2);
        b.push(
            "mode.stabilizer_split",
            max_over(&backgrounds, |_, psi| split.apply(psi).norm()),
            DEFAULT_TOLERANCE,
            true,
        );
        let report = commutator_report(chain, &modes, &phases)?;
        b.push("mode.commutator_vacuum", report.vacuum_residual, 1e-6, report.ideal == 0);
        b.push("mode.commutator_sectors", report.max_sector_residual(), 1e-6, false);
    }
    Ok(())
}

fn moment_checks(b: &mut Builder<'_>) -> Result<()> {
    let exact = |ok: bool| if ok { 0.0 } else { 1.0 };
    let excited = excited_number_rational()?;
    b.push(
        "moment.excited_number_coefficients",
        exact(excited.numerator == int_coeffs(&[1, 3, 1]) && excited.denominator == int_coeffs(&[1, 1])),
        DEFAULT_TOLERANCE,
        true,
    );
    let gap = spin_gap_rational()?;
    b.push(
        "moment.spin_gap_coefficients",
        exact(gap.numerator == spin_gap_numerator() && gap.denominator == spin_gap_denominator()),
        DEFAULT_TOLERANCE,
        true,
    );

    let words = ["B1+ B1", "B1 B1+", "B1 B1+ B1 B1+", "B1+ B1+ B1 B1", "B1 B1 B1+", "B1+ B1 B1+ B1 B1"];
    let backend = TruncatedMode { ceiling: 40 };
    let spec = MomentSpec::canonical(1);
    let mut worst = 0.0f64;
    for w in words {
        let p: OpPolynomial = w.parse()?;
        for (re, im) in [(0.0, 0.0), (0.5, 0.0), (0.3, -0.7), (1.0, 0.5), (1.5, 0.0), (0.0, 1.5)] {
            let lambda = Complex64::new(re, im);
            let params = BTreeMap::from([(1u32, lambda)]);
            let symbolic = expect_value(&p, &spec, &params)?;
            worst = worst.max((symbolic - backend.expect(&p, lambda)).norm());
        }
    }
    b.push("moment.numeric_backend", worst, 1e-8, true);

    let mut transport = (dc_current(1.0, FRAC_PI_2, 0.0, 0.0) - 0.5).abs();
    for phi in [0.1, 0.7, 2.0, 3.0] {
        transport = transport.max((dc_current(0.8, phi, 0.3, -0.2) + dc_current(0.8, -phi, 0.3, -0.2)).abs());
    }
    transport = transport.max(ac_current(0.0, 0.4, 1.0)?.abs());
    b.push("moment.transport", transport, DEFAULT_TOLERANCE, true);
    Ok(())
}

/// Runs every identity group at the configured chain length.
pub fn run_verify(config: &ExperimentConfig) -> Result<VerifyReport> {
    config.validate()?;
    config.check_memory()?;
    let chain = Chain::new(config.sites)?;
    let mut b = Builder {
        config,
        checks: Vec::new(),
    };
    site_checks(&mut b)?;
    chain_checks(&mut b, chain)?;
    mode_checks(&mut b, chain)?;
    moment_checks(&mut b)?;
    let pass = b.checks.iter().all(|c| c.pass || !c.asserted);
    Ok(VerifyReport {
        suite: config.suite.clone(),
        sites: config.sites,
        seed: config.seed,
        checks: b.checks,
        pass,
    })
}
