//! Words and polynomials in bosonic mode letters, with ordering rewriters.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact complex coefficient.
pub type Coeff = Complex<BigRational>;

pub fn coeff_int(n: i64) -> Coeff {
    Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
}

pub fn coeff_to_f64(c: &Coeff) -> num_complex::Complex64 {
    use num_traits::ToPrimitive;
    num_complex::Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN))
}

/// `b_y` or `b†_y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub mode: u32,
    pub dagger: bool,
}

impl Letter {
    pub fn create(mode: u32) -> Self {
        Letter { mode, dagger: true }
    }

    pub fn annihilate(mode: u32) -> Self {
        Letter { mode, dagger: false }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}{}", self.mode, if self.dagger { "+" } else { "" })
    }
}

/// Product of letters, leftmost first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OpWord(pub Vec<Letter>);

impl OpWord {
    pub fn empty() -> Self {
        OpWord(Vec::new())
    }

    /// `b†^m b^n` on one mode.
    pub fn normal(mode: u32, m: usize, n: usize) -> Self {
        let mut v = vec![Letter::create(mode); m];
        v.extend(std::iter::repeat_n(Letter::annihilate(mode), n));
        OpWord(v)
    }

    /// `b^m b†^n` on one mode.
    pub fn antinormal(mode: u32, m: usize, n: usize) -> Self {
        let mut v = vec![Letter::annihilate(mode); m];
        v.extend(std::iter::repeat_n(Letter::create(mode), n));
        OpWord(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn modes(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().map(|l| l.mode)
    }

    pub fn concat(&self, other: &OpWord) -> OpWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        OpWord(v)
    }
}

impl FromStr for OpWord {
    type Err = Error;

    /// Whitespace-separated letters such as `"B1+ B1+ B1 B1"`; `1` is the empty word.
    fn from_str(text: &str) -> Result<Self> {
        let fail = |reason: String| Error::WordParse {
            text: text.to_string(),
            reason,
        };
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let body = tok
                .strip_prefix('B')
                .or_else(|| tok.strip_prefix('b'))
                .ok_or_else(|| fail(format!("letter {tok:?} must start with B")))?;
            let (digits, dagger) = match body.strip_suffix('+') {
                Some(d) => (d, true),
                None => (body, false),
            };
            let mode = digits
                .parse::<u32>()
                .map_err(|_| fail(format!("bad mode number in {tok:?}")))?;
            letters.push(Letter { mode, dagger });
        }
        Ok(OpWord(letters))
    }
}

impl fmt::Display for OpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Linear combination of words with exact coefficients; zero terms are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OpPolynomial(BTreeMap<OpWord, Coeff>);

impl OpPolynomial {
    pub fn zero() -> Self {
        OpPolynomial(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::word(OpWord::empty())
    }

    pub fn word(w: OpWord) -> Self {
        Self::term(w, Coeff::one())
    }

    pub fn term(w: OpWord, c: Coeff) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn letter(l: Letter) -> Self {
        Self::word(OpWord(vec![l]))
    }

    pub fn add_term(&mut self, w: OpWord, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(w.clone()).or_insert_with(Coeff::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.0.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpWord, &Coeff)> {
        self.0.iter()
    }

    pub fn coefficient(&self, w: &OpWord) -> Coeff {
        self.0.get(w).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = Self::zero();
        for (w, a) in &self.0 {
            out.add_term(w.clone(), a * c);
        }
        out
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Modes appearing in any word.
    pub fn modes(&self) -> Vec<u32> {
        let mut m: Vec<u32> = self.0.keys().flat_map(|w| w.modes().collect::<Vec<_>>()).collect();
        m.sort_unstable();
        m.dedup();
        m
    }
}

impl FromStr for OpPolynomial {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        Ok(Self::word(text.parse()?))
    }
}

impl From<OpWord> for OpPolynomial {
    fn from(w: OpWord) -> Self {
        Self::word(w)
    }
}

impl Add for &OpPolynomial {
    type Output = OpPolynomial;
    fn add(self, rhs: &OpPolynomial) -> OpPolynomial {
        let mut out = self.clone();
        for (w, c) in &rhs.0 {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &OpPolynomial {
    type Output = OpPolynomial;
    fn sub(self, rhs: &OpPolynomial) -> OpPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &OpPolynomial {
    type Output = OpPolynomial;
    fn neg(self) -> OpPolynomial {
        self.scale(&coeff_int(-1))
    }
}

impl Mul for &OpPolynomial {
    type Output = OpPolynomial;
    fn mul(self, rhs: &OpPolynomial) -> OpPolynomial {
        let mut out = OpPolynomial::zero();
        for (a, ca) in &self.0 {
            for (b, cb) in &rhs.0 {
                out.add_term(a.concat(b), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for OpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.im.is_zero() {
                write!(f, "({})", c.re)?;
            } else {
                write!(f, "({} + {}i)", c.re, c.im)?;
            }
            write!(f, "·{w}")?;
        }
        Ok(())
    }
}

/// Per-mode target ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ordering {
    /// creation letters first: `b†^m b^n`
    Normal,
    /// annihilation letters first: `b^m b†^n`
    Antinormal,
}

/// Which redex the rewriter picks next; the result must not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RewriteStrategy {
    #[default]
    Leftmost,
    Rightmost,
}

/// Canonical position: letters that lead in their mode's ordering come first,
/// then by mode number.
fn sort_key(l: Letter, order: Ordering) -> (bool, u32) {
    let trailing = match order {
        Ordering::Normal => !l.dagger,
        Ordering::Antinormal => l.dagger,
    };
    (trailing, l.mode)
}

/// Rewrite into the per-mode ordering chosen by `order_of`, using
/// `[b_y, b†_y'] = delta_{y y'}` and commuting distinct modes.
pub fn reorder<F>(p: &OpPolynomial, order_of: F, strategy: RewriteStrategy) -> OpPolynomial
where
    F: Fn(u32) -> Ordering,
{
    let mut done = OpPolynomial::zero();
    let mut work: Vec<(OpWord, Coeff)> = p.0.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
    while let Some((w, c)) = work.pop() {
        let out_of_order = |i: usize| {
            let (a, b) = (w.0[i], w.0[i + 1]);
            sort_key(a, order_of(a.mode)) > sort_key(b, order_of(b.mode))
        };
        let n = w.len().saturating_sub(1);
        let redex = match strategy {
            RewriteStrategy::Leftmost => (0..n).find(|&i| out_of_order(i)),
            RewriteStrategy::Rightmost => (0..n).rev().find(|&i| out_of_order(i)),
        };
        let Some(i) = redex else {
            done.add_term(w, c);
            continue;
        };
        let (a, b) = (w.0[i], w.0[i + 1]);
        let mut swapped = w.clone();
        swapped.0.swap(i, i + 1);
        work.push((swapped, c.clone()));
        if a.mode == b.mode && a.dagger != b.dagger {
            // b b† = b† b + 1, b† b = b b† - 1
            let mut contracted = w.0.clone();
            contracted.drain(i..=i + 1);
            let sign = if a.dagger { coeff_int(-1) } else { coeff_int(1) };
            work.push((OpWord(contracted), &c * &sign));
        }
    }
    done
}

pub fn normal_order(p: &OpPolynomial) -> OpPolynomial {
    reorder(p, |_| Ordering::Normal, RewriteStrategy::Leftmost)
}

pub fn antinormal_order(p: &OpPolynomial) -> OpPolynomial {
    reorder(p, |_| Ordering::Antinormal, RewriteStrategy::Leftmost)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(text: &str) -> OpPolynomial {
        text.parse().unwrap()
    }

    #[test]
    fn commutator_rewrite() {
        let n = normal_order(&poly("B1 B1+"));
        assert_eq!(n, &poly("B1+ B1") + &OpPolynomial::one());
    }

    #[test]
    fn double_pair_rewrite() {
        let n = normal_order(&poly("B1 B1+ B1 B1+"));
        let expect = &(&poly("B1+ B1+ B1 B1") + &poly("B1+ B1").scale(&coeff_int(3))) + &OpPolynomial::one();
        assert_eq!(n, expect);
    }

    #[test]
    fn distinct_modes_commute_without_constant() {
        assert_eq!(normal_order(&poly("B1 B2+")), poly("B2+ B1"));
    }

    #[test]
    fn strategies_agree() {
        for w in ["B1 B1+ B1 B1+ B1", "B2 B1 B1+ B2+ B1+", "B1 B1 B1 B1+ B1+ B1+"] {
            let p = poly(w);
            for order in [Ordering::Normal, Ordering::Antinormal] {
                let a = reorder(&p, |_| order, RewriteStrategy::Leftmost);
                let b = reorder(&p, |_| order, RewriteStrategy::Rightmost);
                assert_eq!(a, b, "{w}");
            }
        }
    }

    #[test]
    fn normal_and_antinormal_are_inverse() {
        let p = poly("B1 B1+ B1+ B1 B1+");
        assert_eq!(normal_order(&antinormal_order(&p)), normal_order(&p));
        assert_eq!(antinormal_order(&normal_order(&p)), antinormal_order(&p));
    }

    #[test]
    fn word_text_round_trip() {
        let w: OpWord = "B1+ B1+ B1 B1".parse().unwrap();
        assert_eq!(w, OpWord::normal(1, 2, 2));
        assert_eq!(w.to_string(), "B1+ B1+ B1 B1");
        assert!("C1".parse::<OpWord>().is_err());
        assert!("Bx".parse::<OpWord>().is_err());
    }
}
