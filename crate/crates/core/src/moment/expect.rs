//! Expectation values of mode polynomials in coherent and complementary coherent states.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::word::{coeff_int, coeff_to_f64, reorder, Coeff, OpPolynomial, OpWord, Ordering, RewriteStrategy};
use crate::error::{Error, Result};

/// State of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModeKind {
    /// eigenstate of `b` with eigenvalue `lambda`
    Canonical,
    /// eigenstate of `b†` with eigenvalue `-lambda~`
    Complementary,
}

impl ModeKind {
    fn ordering(self) -> Ordering {
        match self {
            ModeKind::Canonical => Ordering::Normal,
            ModeKind::Complementary => Ordering::Antinormal,
        }
    }
}

/// Per-mode declaration; every mode in an evaluated word must appear.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MomentSpec {
    modes: BTreeMap<u32, ModeKind>,
}

impl MomentSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, mode: u32, kind: ModeKind) -> Self {
        self.modes.insert(mode, kind);
        self
    }

    pub fn canonical(mode: u32) -> Self {
        Self::new().with(mode, ModeKind::Canonical)
    }

    pub fn complementary(mode: u32) -> Self {
        Self::new().with(mode, ModeKind::Complementary)
    }

    pub fn kind(&self, mode: u32) -> Result<ModeKind> {
        self.modes.get(&mode).copied().ok_or(Error::UndeclaredMode(mode))
    }

    /// Rewrite so that canonical modes are normal-ordered and complementary
    /// modes antinormal-ordered.
    pub fn order(&self, p: &OpPolynomial) -> Result<OpPolynomial> {
        for m in p.modes() {
            self.kind(m)?;
        }
        Ok(reorder(p, |m| self.modes[&m].ordering(), RewriteStrategy::Leftmost))
    }
}

/// Monomial `prod_y conj(l_y)^a l_y^b`, stored as sorted `(y, a, b)`.
pub type Monomial = Vec<(u32, u32, u32)>;

/// Polynomial in the mode parameters and their conjugates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParamPoly(pub BTreeMap<Monomial, Coeff>);

impl ParamPoly {
    fn add_term(&mut self, m: Monomial, c: Coeff) {
        let e = self.0.entry(m.clone()).or_insert_with(Coeff::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.0.remove(&m);
        }
    }

    /// Substitute parameter values.
    pub fn evaluate(&self, params: &BTreeMap<u32, Complex64>) -> Result<Complex64> {
        let mut total = Complex64::default();
        for (mono, c) in &self.0 {
            let mut v = coeff_to_f64(c);
            for &(y, a, b) in mono {
                let l = *params.get(&y).ok_or(Error::UndeclaredMode(y))?;
                v *= l.conj().powu(a) * l.powu(b);
            }
            total += v;
        }
        Ok(total)
    }

    /// Coefficients in `x = |l_y|^2`, lowest degree first, when the polynomial
    /// depends on mode `y` only through its modulus.
    pub fn modulus_coefficients(&self, y: u32) -> Result<Vec<BigRational>> {
        let mut out: Vec<BigRational> = Vec::new();
        for (mono, c) in &self.0 {
            let deg = match mono.as_slice() {
                [] => 0,
                [(m, a, b)] if *m == y && a == b => *a as usize,
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "monomial {mono:?} is not a power of |lambda_{y}|^2"
                    )))
                }
            };
            if !c.im.is_zero() {
                return Err(Error::InvalidParameter("complex coefficient in modulus polynomial".into()));
            }
            if out.len() <= deg {
                out.resize(deg + 1, BigRational::zero());
            }
            out[deg] = &out[deg] + &c.re;
        }
        if out.is_empty() {
            out.push(BigRational::zero());
        }
        Ok(out)
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (mono, c)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.im.is_zero() {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({} + {}i)", c.re, c.im)?;
            }
            for (y, a, b) in mono {
                if *a > 0 {
                    write!(f, "·conj(l{y})^{a}")?;
                }
                if *b > 0 {
                    write!(f, "·l{y}^{b}")?;
                }
            }
        }
        Ok(())
    }
}

/// Symbolic expectation value of `p`.
///
/// Canonical: `<b†^m b^n> = conj(l)^m l^n`. Complementary:
/// `<b^m b†^n> = (-conj(l~))^m (-l~)^n`.
pub fn expect(p: &OpPolynomial, spec: &MomentSpec) -> Result<ParamPoly> {
    let ordered = spec.order(p)?;
    let mut out = ParamPoly::default();
    for (w, c) in ordered.terms() {
        let (mono, sign) = monomial_of(w, spec)?;
        out.add_term(mono, if sign { -c.clone() } else { c.clone() });
    }
    Ok(out)
}

fn monomial_of(w: &OpWord, spec: &MomentSpec) -> Result<(Monomial, bool)> {
    let mut powers: BTreeMap<u32, (u32, u32)> = BTreeMap::new();
    let mut negative = false;
    for l in &w.0 {
        let e = powers.entry(l.mode).or_default();
        match spec.kind(l.mode)? {
            ModeKind::Canonical => {
                if l.dagger {
                    e.0 += 1
                } else {
                    e.1 += 1
                }
            }
            ModeKind::Complementary => {
                negative = !negative;
                if l.dagger {
                    e.1 += 1
                } else {
                    e.0 += 1
                }
            }
        }
    }
    Ok((powers.into_iter().map(|(y, (a, b))| (y, a, b)).collect(), negative))
}

/// Numeric expectation value.
pub fn expect_value(p: &OpPolynomial, spec: &MomentSpec, params: &BTreeMap<u32, Complex64>) -> Result<Complex64> {
    expect(p, spec)?.evaluate(params)
}

/// Ratio of two polynomials in `x`, kept unreduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalInX {
    pub numerator: Vec<BigRational>,
    pub denominator: Vec<BigRational>,
}

impl RationalInX {
    /// `<num> / <den>` for a single mode `y`.
    pub fn from_words(num: &OpPolynomial, den: &OpPolynomial, spec: &MomentSpec, y: u32) -> Result<Self> {
        Ok(RationalInX {
            numerator: expect(num, spec)?.modulus_coefficients(y)?,
            denominator: expect(den, spec)?.modulus_coefficients(y)?,
        })
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        poly_eval(&self.numerator, x) / poly_eval(&self.denominator, x)
    }
}

/// Integer coefficient list helper.
pub fn int_coeffs(c: &[i64]) -> Vec<BigRational> {
    c.iter().map(|&n| coeff_int(n).re).collect()
}

pub fn poly_eval(c: &[BigRational], x: f64) -> f64 {
    use num_traits::ToPrimitive;
    c.iter().rev().fold(0.0, |acc, a| acc * x + a.to_f64().unwrap_or(f64::NAN))
}

/// Ceiling-truncated single-mode Fock space for numerical cross-checks.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedMode {
    pub ceiling: usize,
}

impl TruncatedMode {
    /// Normalized truncated coherent state amplitudes.
    pub fn coherent(&self, lambda: Complex64) -> Vec<Complex64> {
        let mut v = Vec::with_capacity(self.ceiling + 1);
        let mut c = Complex64::one();
        for n in 0..=self.ceiling {
            if n > 0 {
                c *= lambda / (n as f64).sqrt();
            }
            v.push(c);
        }
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        v.iter().map(|a| a / norm).collect()
    }

    fn apply_letter(&self, v: &[Complex64], dagger: bool) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); v.len()];
        for n in 0..v.len() {
            if dagger {
                if n + 1 < v.len() {
                    out[n + 1] += v[n] * ((n + 1) as f64).sqrt();
                }
            } else if n > 0 {
                out[n - 1] += v[n] * (n as f64).sqrt();
            }
        }
        out
    }

    /// `<lambda| p |lambda>` for a single-mode polynomial.
    pub fn expect(&self, p: &OpPolynomial, lambda: Complex64) -> Complex64 {
        let psi = self.coherent(lambda);
        let mut total = Complex64::default();
        for (w, c) in p.terms() {
            let mut v = psi.clone();
            for l in w.0.iter().rev() {
                v = self.apply_letter(&v, l.dagger);
            }
            let amp: Complex64 = psi.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            total += coeff_to_f64(c) * amp;
        }
        total
    }
}
