//! Closed-form observables and their derivation from the moment engine.

use serde::Serialize;

use super::expect::{int_coeffs, poly_eval, MomentSpec, RationalInX};
use super::word::{OpPolynomial, OpWord};
use crate::error::{Error, Result};
use crate::qutrit::{ChemPotAlpha, MixingAngle};

const POLE_GUARD: f64 = 1e-9;

/// `(1 + 3x + x^2)/(1 + x)`, `x = |lambda|^2`.
pub fn excited_number(lambda: f64) -> f64 {
    let x = lambda * lambda;
    (1.0 + 3.0 * x + x * x) / (1.0 + x)
}

/// `1 + x - x^2/(1 + x)`.
pub fn absorbed_number(lambda: f64) -> f64 {
    let x = lambda * lambda;
    1.0 + x - x * x / (1.0 + x)
}

/// `<b b† b b†> / <b b†>` on a canonical mode, derived by the engine.
pub fn excited_number_rational() -> Result<RationalInX> {
    let num: OpPolynomial = "B1 B1+ B1 B1+".parse()?;
    let den: OpPolynomial = "B1 B1+".parse()?;
    RationalInX::from_words(&num, &den, &MomentSpec::canonical(1), 1)
}

/// Number variance `<m^2> - <m>^2` on a canonical mode, as a polynomial in `x`.
pub fn fluctuation_coefficients() -> Result<Vec<num_rational::BigRational>> {
    use super::expect::expect;
    let m: OpPolynomial = "B1+ B1".parse()?;
    let spec = MomentSpec::canonical(1);
    let second = expect(&(&m * &m), &spec)?.modulus_coefficients(1)?;
    let first = expect(&m, &spec)?.modulus_coefficients(1)?;
    let sq = poly_mul(&first, &first);
    Ok(poly_sub(&second, &sq))
}

fn poly_mul(a: &[num_rational::BigRational], b: &[num_rational::BigRational]) -> Vec<num_rational::BigRational> {
    use num_traits::Zero;
    let mut out = vec![num_rational::BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + x * y;
        }
    }
    out
}

fn poly_sub(a: &[num_rational::BigRational], b: &[num_rational::BigRational]) -> Vec<num_rational::BigRational> {
    use num_traits::Zero;
    let n = a.len().max(b.len());
    let mut out: Vec<_> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(num_rational::BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(num_rational::BigRational::zero);
            x - y
        })
        .collect();
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Numerator of the spin gap, lowest degree first: `-6 + 18x - 9x^2 + x^3`.
pub fn spin_gap_numerator() -> Vec<num_rational::BigRational> {
    int_coeffs(&[-6, 18, -9, 1])
}

/// Denominator of the spin gap: `2 - 4x + x^2`.
pub fn spin_gap_denominator() -> Vec<num_rational::BigRational> {
    int_coeffs(&[2, -4, 1])
}

/// `<b†^3 b^3> / <b†^2 b^2>` on a complementary mode, derived by the engine.
pub fn spin_gap_rational() -> Result<RationalInX> {
    let num = OpPolynomial::word(OpWord::normal(1, 3, 3));
    let den = OpPolynomial::word(OpWord::normal(1, 2, 2));
    RationalInX::from_words(&num, &den, &MomentSpec::complementary(1), 1)
}

/// `(x^3 - 9x^2 + 18x - 6)/(x^2 - 4x + 2)` with `x = |lambda~|^2`.
pub fn spin_gap(lambda_tilde: f64) -> Result<f64> {
    let x = lambda_tilde * lambda_tilde;
    let den = poly_eval(&spin_gap_denominator(), x);
    if den.abs() < POLE_GUARD {
        return Err(Error::PoleProximity {
            what: "spin gap",
            denominator: den,
        });
    }
    Ok(poly_eval(&spin_gap_numerator(), x) / den)
}

/// Bisection for a sign change of `f` on `[lo, hi]` down to width `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::InvalidParameter(format!("no sign change on [{lo}, {hi}]")));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `|lambda~_c|`: square root of the largest root of the spin-gap numerator.
pub fn curie_threshold() -> f64 {
    let num = spin_gap_numerator();
    let f = |l: f64| poly_eval(&num, l * l);
    // the largest root lies above the upper pole 2 + sqrt2 and below the
    // Cauchy bound 1 + 18 on x
    let lo = (2.0 + std::f64::consts::SQRT_2).sqrt();
    let hi = 19f64.sqrt();
    bisect(f, lo, hi, 1e-12).expect("cubic changes sign above its upper pole")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Thermicity {
    Exothermal,
    Endothermal,
    Boundary,
}

/// Energy change `2/x - 1` of the fission step, `x = |lambda~_1|^2`.
pub fn fission_energy(lambda_tilde_1: f64) -> Result<(f64, Thermicity)> {
    if lambda_tilde_1.abs() <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "fission needs |lambda~_1| > 1, got {lambda_tilde_1}"
        )));
    }
    let e = 2.0 / (lambda_tilde_1 * lambda_tilde_1) - 1.0;
    let class = if e.abs() <= 1e-12 {
        Thermicity::Boundary
    } else if e < 0.0 {
        Thermicity::Exothermal
    } else {
        Thermicity::Endothermal
    };
    Ok((e, class))
}

/// Zero of the fission energy located by bisection on `(1, 2]`.
pub fn fission_boundary() -> f64 {
    bisect(|l| 2.0 / (l * l) - 1.0, 1.0 + 1e-9, 2.0, 1e-15).expect("sign change on (1, 2]")
}

/// `lambda^2 sin(phi) / (2 cosh(alpha_L) cosh(alpha_1))`.
pub fn dc_current(lambda: f64, phi: f64, alpha_l: f64, alpha_1: f64) -> f64 {
    lambda * lambda * phi.sin() / (2.0 * alpha_l.cosh() * alpha_1.cosh())
}

/// The same current through the end-site angles:
/// `2 lambda^2 sin(phi) sin(t_L) cos(t_L) sin(t_1) cos(t_1)`.
pub fn dc_current_two_step(lambda: f64, phi: f64, alpha_l: f64, alpha_1: f64) -> f64 {
    let tl = MixingAngle::from(ChemPotAlpha(alpha_l)).0;
    let t1 = MixingAngle::from(ChemPotAlpha(alpha_1)).0;
    2.0 * lambda * lambda * phi.sin() * tl.sin() * tl.cos() * t1.sin() * t1.cos()
}

/// `omega sin(2 theta) / (1 - e^{-beta})`.
pub fn ac_current(omega: f64, theta: f64, beta: f64) -> Result<f64> {
    if beta <= 0.0 || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("beta_E must be positive and finite, got {beta}")));
    }
    Ok(omega * (2.0 * theta).sin() / (1.0 - (-beta).exp()))
}

/// Parameters of one odd-`y` factor pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeAssignment {
    pub y: usize,
    pub lambda_sq: f64,
    pub lambda_tilde_next_sq: f64,
}

impl BeAssignment {
    pub fn occupation(&self) -> f64 {
        self.lambda_sq + self.lambda_tilde_next_sq - 1.0
    }

    /// `|lambda~|^2 - 1 - |lambda|^2`; zero when both factors carry the same mean energy.
    pub fn energy_mismatch(&self) -> f64 {
        self.lambda_tilde_next_sq - 1.0 - self.lambda_sq
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BeMatch {
    pub beta: f64,
    pub total: f64,
    pub assignments: Vec<BeAssignment>,
}

/// Split the Bose-Einstein occupation `1/(e^beta - 1)` evenly over the odd
/// modes; within a pair the share is halved between the two factors.
pub fn be_match(beta: f64, odd_ys: &[usize]) -> Result<BeMatch> {
    if odd_ys.is_empty() {
        return Err(Error::InvalidParameter("no odd modes given".into()));
    }
    if let Some(y) = odd_ys.iter().find(|&&y| y % 2 == 0) {
        return Err(Error::InvalidParameter(format!("mode {y} is not odd")));
    }
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::Infeasible(format!("beta_E = {beta} gives no positive occupation")));
    }
    let total = 1.0 / beta.exp_m1();
    let share = total / odd_ys.len() as f64;
    if share < 0.0 || !share.is_finite() {
        return Err(Error::Infeasible(format!("share {share}")));
    }
    Ok(BeMatch {
        beta,
        total,
        assignments: odd_ys
            .iter()
            .map(|&y| BeAssignment {
                y,
                lambda_sq: share / 2.0,
                lambda_tilde_next_sq: 1.0 + share / 2.0,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, SQRT_2};

    #[test]
    fn excited_and_absorbed() {
        assert_eq!(excited_number(0.0), 1.0);
        assert_eq!(absorbed_number(0.0), 1.0);
        assert!((excited_number(1.0) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn engine_derives_excited_number() {
        let r = excited_number_rational().unwrap();
        assert_eq!(r.numerator, int_coeffs(&[1, 3, 1]));
        assert_eq!(r.denominator, int_coeffs(&[1, 1]));
        assert_eq!(fluctuation_coefficients().unwrap(), int_coeffs(&[0, 1]));
    }

    #[test]
    fn spin_gap_values() {
        assert!((spin_gap(3.0).unwrap() - 156.0 / 47.0).abs() < 1e-12);
        assert!((spin_gap(SQRT_2).unwrap() + 1.0).abs() < 1e-12);
        assert!(spin_gap(2.0).unwrap() < 0.0);
        let pole = (2.0 + SQRT_2).sqrt();
        assert!(matches!(spin_gap(pole), Err(Error::PoleProximity { .. })));
    }

    #[test]
    fn engine_derives_spin_gap() {
        let r = spin_gap_rational().unwrap();
        assert_eq!(r.numerator, spin_gap_numerator());
        assert_eq!(r.denominator, spin_gap_denominator());
    }

    #[test]
    fn curie_threshold_value() {
        // largest root via the trigonometric solution of t^3 - 9t - 6 = 0, x = t + 3
        let (p, q) = (-9.0f64, -6.0f64);
        let m = 2.0 * (-p / 3.0).sqrt();
        let phi = ((3.0 * q / (p * m)).acos()) / 3.0;
        let root = 3.0 + m * phi.cos();
        let c = curie_threshold();
        assert!((c - root.sqrt()).abs() < 1e-10);
        assert!((2.50..2.51).contains(&c));
        assert!((c - 2.5).abs() < 0.01);
    }

    #[test]
    fn fission_classification() {
        assert_eq!(fission_energy(SQRT_2).unwrap().1, Thermicity::Boundary);
        let (e, c) = fission_energy(2.0).unwrap();
        assert!((e + 0.5).abs() < 1e-15 && c == Thermicity::Exothermal);
        let (e, c) = fission_energy(1.2).unwrap();
        assert!((e - (2.0 / 1.44 - 1.0)).abs() < 1e-15 && c == Thermicity::Endothermal);
        assert!(fission_energy(1.0).is_err());
        assert!((fission_boundary() - SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn transport_values() {
        assert_eq!(dc_current(1.0, 0.0, 0.3, 0.2), 0.0);
        assert!((dc_current(1.0, FRAC_PI_2, 0.0, 0.0) - 0.5).abs() < 1e-15);
        for (a, b) in [(0.0, 0.0), (0.7, -0.4), (2.0, 1.0)] {
            let d = dc_current(0.8, 1.1, a, b);
            assert!((d - dc_current_two_step(0.8, 1.1, a, b)).abs() < 1e-14);
        }
        assert_eq!(ac_current(0.0, 0.3, 1.0).unwrap(), 0.0);
        assert!((ac_current(1.0, FRAC_PI_4, LN_2).unwrap() - 2.0).abs() < 1e-14);
        assert!((ac_current(1.0, FRAC_PI_4, 60.0).unwrap() - 1.0).abs() < 1e-14);
        assert!(ac_current(1.0, 0.2, 0.0).is_err());
    }

    #[test]
    fn be_match_uniform_rule() {
        let m = be_match(LN_2, &[1]).unwrap();
        assert!((m.total - 1.0).abs() < 1e-12);
        let a = m.assignments[0];
        assert!((a.lambda_sq - 0.5).abs() < 1e-12 && (a.lambda_tilde_next_sq - 1.5).abs() < 1e-12);
        assert!(a.energy_mismatch().abs() < 1e-15);
        let cold = be_match(80.0, &[1, 3]).unwrap();
        assert!(cold.assignments.iter().all(|a| a.lambda_sq < 1e-30));
        assert!(be_match(1.0, &[2]).is_err());
        assert!(matches!(be_match(-1.0, &[1]), Err(Error::Infeasible(_))));
    }
}
