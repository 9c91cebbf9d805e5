//! Single-site balanced-ternary operators built from the c/d modes.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::Result;
use crate::fockspace::{Chain, ChainState, Ladder, LinearOp, QutritLabel, Species};

/// Which of the four rotated site operators to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FgKind {
    F,
    G,
    FDag,
    GDag,
}

impl FgKind {
    pub const ALL: [FgKind; 4] = [FgKind::F, FgKind::FDag, FgKind::G, FgKind::GDag];
}

/// `f = (c + d)/sqrt2`, `g = (c - d)/sqrt2` and their adjoints on one site.
pub fn build_fg(chain: Chain, site: usize, which: FgKind) -> Result<LinearOp> {
    let ladder = match which {
        FgKind::F | FgKind::G => Ladder::Annihilate,
        FgKind::FDag | FgKind::GDag => Ladder::Create,
    };
    let sign = match which {
        FgKind::F | FgKind::FDag => 1.0,
        FgKind::G | FgKind::GDag => -1.0,
    };
    let c = chain.mode_op(ladder, Species::C, site)?;
    let d = chain.mode_op(ladder, Species::D, site)?;
    Ok((c + d * sign) * FRAC_1_SQRT_2)
}

/// All four rotated operators of a site, in the order `f, f†, g, g†`.
#[derive(Debug, Clone)]
pub struct SiteOps {
    pub f: LinearOp,
    pub f_dag: LinearOp,
    pub g: LinearOp,
    pub g_dag: LinearOp,
}

impl SiteOps {
    pub fn new(chain: Chain, site: usize) -> Result<Self> {
        Ok(SiteOps {
            f: build_fg(chain, site, FgKind::F)?,
            f_dag: build_fg(chain, site, FgKind::FDag)?,
            g: build_fg(chain, site, FgKind::G)?,
            g_dag: build_fg(chain, site, FgKind::GDag)?,
        })
    }

    pub fn get(&self, which: FgKind) -> &LinearOp {
        match which {
            FgKind::F => &self.f,
            FgKind::FDag => &self.f_dag,
            FgKind::G => &self.g,
            FgKind::GDag => &self.g_dag,
        }
    }
}

/// Ternary particle number `n = f†f - g g†` (eigenvalues `+1, 0, -1`).
pub fn number_op(chain: Chain, site: usize) -> Result<LinearOp> {
    let s = SiteOps::new(chain, site)?;
    Ok(s.f_dag * s.f - s.g * s.g_dag)
}

/// Sum of the site number operators.
pub fn total_number_op(chain: Chain) -> Result<LinearOp> {
    let terms = (1..=chain.sites())
        .map(|site| number_op(chain, site))
        .collect::<Result<Vec<_>>>()?;
    Ok(LinearOp::sum(terms))
}

/// Hermitian pair generator `gamma = i (f g - g† f†)`.
pub fn gamma_op(chain: Chain, site: usize) -> Result<LinearOp> {
    let s = SiteOps::new(chain, site)?;
    Ok((s.f * s.g - s.g_dag * s.f_dag) * Complex64::new(0.0, 1.0))
}

/// `exp(i theta gamma)`, rotating `|->` into `cos theta |-> + sin theta |+>`.
pub fn bogoliubov(chain: Chain, theta: MixingAngle, site: usize) -> Result<LinearOp> {
    Ok(LinearOp::cubic_exp(gamma_op(chain, site)?, theta.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairAction {
    Raise,
    Lower,
}

/// `g† f†` (raise `|->` to `|+>`) or `f g` (lower `|+>` to `|->`).
pub fn pair_raise_lower(chain: Chain, site: usize, which: PairAction) -> Result<LinearOp> {
    let s = SiteOps::new(chain, site)?;
    Ok(match which {
        PairAction::Raise => s.g_dag * s.f_dag,
        PairAction::Lower => s.f * s.g,
    })
}

/// Dimensionless chemical potential difference `alpha = -mu / kT`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ChemPotAlpha(pub f64);

/// Bogoliubov angle with `sin theta = (e^{2 alpha} + 1)^{-1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MixingAngle(pub f64);

impl From<ChemPotAlpha> for MixingAngle {
    fn from(a: ChemPotAlpha) -> Self {
        MixingAngle(fermi_dirac(a).sqrt().asin())
    }
}

impl From<MixingAngle> for ChemPotAlpha {
    /// Valid on `theta` in `(0, pi/2)`: `alpha = ln cot theta`.
    fn from(t: MixingAngle) -> Self {
        ChemPotAlpha((t.0.cos() / t.0.sin()).ln())
    }
}

/// Occupation `1 / (e^{2 alpha} + 1)`.
pub fn fermi_dirac(alpha: ChemPotAlpha) -> f64 {
    // logistic form stays finite for large |alpha|
    let x = 2.0 * alpha.0;
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (x.exp() + 1.0)
    }
}

/// One-site state `(2 cosh alpha)^{-1/2} (e^{alpha/2}|-> + e^{-alpha/2}|+>)`.
pub fn thermal_excited_state(alpha: ChemPotAlpha) -> ChainState {
    // weights normalized without overflowing cosh
    let w_minus = fermi_dirac(ChemPotAlpha(-alpha.0)).sqrt();
    let w_plus = fermi_dirac(alpha).sqrt();
    let minus = ChainState::product(&[QutritLabel::Minus]);
    let plus = ChainState::product(&[QutritLabel::Plus]);
    minus.scale_real(w_minus).add(&plus.scale_real(w_plus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::dense::{max_abs, to_dense};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn one() -> Chain {
        Chain::new(1).unwrap()
    }

    fn label(l: QutritLabel) -> ChainState {
        ChainState::product(&[l])
    }

    #[test]
    fn listed_single_site_actions() {
        use QutritLabel::*;
        let s = SiteOps::new(one(), 1).unwrap();
        let cases: [(&LinearOp, QutritLabel, QutritLabel, f64); 6] = [
            (&s.f_dag, Minus, Vacuum, 1.0),
            (&s.f, Vacuum, Minus, 1.0),
            (&s.f, Plus, VacuumPrime, 1.0),
            (&s.g_dag, Vacuum, Plus, 1.0),
            (&s.g_dag, Minus, VacuumPrime, -1.0),
            (&s.g, Plus, Vacuum, 1.0),
        ];
        for (op, from, to, sign) in cases {
            let out = op.apply(&label(from));
            assert!(out.distance(&label(to).scale_real(sign)) < 1e-15, "{from} -> {to}");
        }
    }

    #[test]
    fn rotated_operators_square_to_zero() {
        for k in FgKind::ALL {
            let op = build_fg(one(), 1, k).unwrap();
            assert!(max_abs(&to_dense(&(op.clone() * op), 1).unwrap()) < 1e-15);
        }
    }

    #[test]
    fn number_eigenvalues() {
        let n = number_op(one(), 1).unwrap();
        for (l, v) in [(QutritLabel::Plus, 1.0), (QutritLabel::Vacuum, 0.0), (QutritLabel::Minus, -1.0), (QutritLabel::VacuumPrime, 0.0)] {
            assert!(n.apply(&label(l)).distance(&label(l).scale_real(v)) < 1e-15);
        }
    }

    #[test]
    fn bogoliubov_rotates_minus() {
        for theta in [0.0, 0.3, FRAC_PI_4, FRAC_PI_2, 2.0] {
            let u = bogoliubov(one(), MixingAngle(theta), 1).unwrap();
            let out = u.apply(&label(QutritLabel::Minus));
            let expect = label(QutritLabel::Minus)
                .scale_real(theta.cos())
                .add(&label(QutritLabel::Plus).scale_real(theta.sin()));
            assert!(out.distance(&expect) < 1e-14);
        }
    }

    #[test]
    fn gamma_is_cubic_idempotent() {
        let g = gamma_op(one(), 1).unwrap();
        assert!(g.pow(3).max_column_distance(&g, 1) < 1e-15);
        assert!(g.adjoint().max_column_distance(&g, 1) < 1e-15);
    }

    #[test]
    fn fermi_dirac_special_points() {
        assert_eq!(fermi_dirac(ChemPotAlpha(0.0)), 0.5);
        let a = 3f64.sqrt().ln();
        assert!((fermi_dirac(ChemPotAlpha(a)) - 0.25).abs() < 1e-15);
        assert!((fermi_dirac(ChemPotAlpha(-a)) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn thermal_state_matches_occupation() {
        let ch = one();
        let s = SiteOps::new(ch, 1).unwrap();
        let ff = s.f_dag * s.f;
        let st = thermal_excited_state(ChemPotAlpha(0.5));
        let v = ff.matrix_element(&st, &st).re;
        assert!((v - 1.0 / (1f64.exp() + 1.0)).abs() < 1e-12);
        let cold = thermal_excited_state(ChemPotAlpha(8.0));
        assert!(cold.inner(&label(QutritLabel::Minus)).norm() >= 1.0 - 1e-6);
    }

    #[test]
    fn angle_alpha_bijection() {
        for theta in [0.1, 0.5, FRAC_PI_4, 1.2] {
            let a = ChemPotAlpha::from(MixingAngle(theta));
            assert!((fermi_dirac(a) - theta.sin().powi(2)).abs() < 1e-14);
            assert!((MixingAngle::from(a).0 - theta).abs() < 1e-12);
        }
    }
}
