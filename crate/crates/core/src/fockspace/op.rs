//! Composable matrix-free operators on [`ChainState`]s.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use super::basis::{mode_index, FockBasisState, Ladder, Species, MAX_SITES};
use super::state::{ChainState, PRUNE};
use crate::error::{Error, Result};

/// Diagonal entry as a function of the basis configuration.
pub type DiagonalFn = Arc<dyn Fn(FockBasisState) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum Node {
    Identity,
    Zero,
    Mode { ladder: Ladder, mode: usize },
    Diagonal { f: DiagonalFn, conjugate: bool },
    Scaled(Complex64, LinearOp),
    Sum(Vec<LinearOp>),
    /// Factors applied right to left.
    Product(Vec<LinearOp>),
    /// `exp(i theta G)` for a Hermitian generator with `G^3 = G`.
    CubicExp { theta: f64, generator: LinearOp },
}

/// Immutable operator handle; cloning is cheap.
#[derive(Clone)]
pub struct LinearOp(Arc<Node>);

impl LinearOp {
    fn wrap(node: Node) -> Self {
        LinearOp(Arc::new(node))
    }

    pub fn identity() -> Self {
        Self::wrap(Node::Identity)
    }

    pub fn zero() -> Self {
        Self::wrap(Node::Zero)
    }

    /// Bare fermionic ladder operator on a global mode index.
    pub fn mode(ladder: Ladder, mode: usize) -> Self {
        Self::wrap(Node::Mode { ladder, mode })
    }

    /// Operator diagonal in the occupation basis.
    pub fn diagonal<F>(f: F) -> Self
    where
        F: Fn(FockBasisState) -> Complex64 + Send + Sync + 'static,
    {
        Self::wrap(Node::Diagonal {
            f: Arc::new(f),
            conjugate: false,
        })
    }

    /// Real diagonal operator.
    pub fn diagonal_real<F>(f: F) -> Self
    where
        F: Fn(FockBasisState) -> f64 + Send + Sync + 'static,
    {
        Self::diagonal(move |s| Complex64::new(f(s), 0.0))
    }

    pub fn scaled(self, z: Complex64) -> Self {
        Self::wrap(Node::Scaled(z, self))
    }

    pub fn scaled_real(self, x: f64) -> Self {
        self.scaled(Complex64::new(x, 0.0))
    }

    pub fn sum<I: IntoIterator<Item = LinearOp>>(terms: I) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        match terms.len() {
            0 => Self::zero(),
            1 => terms.into_iter().next().unwrap(),
            _ => Self::wrap(Node::Sum(terms)),
        }
    }

    /// Product with the first factor leftmost (applied last).
    pub fn product<I: IntoIterator<Item = LinearOp>>(factors: I) -> Self {
        let mut flat = Vec::new();
        for f in factors {
            match &*f.0 {
                Node::Product(inner) => flat.extend(inner.iter().cloned()),
                Node::Identity => {}
                _ => flat.push(f),
            }
        }
        match flat.len() {
            0 => Self::identity(),
            1 => flat.into_iter().next().unwrap(),
            _ => Self::wrap(Node::Product(flat)),
        }
    }

    /// `exp(i theta G)` evaluated in closed form as
    /// `1 + (cos theta - 1) G^2 + i sin theta G`.
    /// The generator must be Hermitian and satisfy `G^3 = G`.
    pub fn cubic_exp(generator: LinearOp, theta: f64) -> Self {
        Self::wrap(Node::CubicExp { theta, generator })
    }

    pub fn commutator(a: &LinearOp, b: &LinearOp) -> Self {
        a.clone() * b.clone() - b.clone() * a.clone()
    }

    pub fn anticommutator(a: &LinearOp, b: &LinearOp) -> Self {
        a.clone() * b.clone() + b.clone() * a.clone()
    }

    pub fn pow(&self, n: usize) -> Self {
        Self::product(std::iter::repeat_n(self.clone(), n))
    }

    pub fn adjoint(&self) -> Self {
        match &*self.0 {
            Node::Identity | Node::Zero => self.clone(),
            Node::Mode { ladder, mode } => Self::mode(ladder.flip(), *mode),
            Node::Diagonal { f, conjugate } => Self::wrap(Node::Diagonal {
                f: f.clone(),
                conjugate: !conjugate,
            }),
            Node::Scaled(z, op) => op.adjoint().scaled(z.conj()),
            Node::Sum(terms) => Self::sum(terms.iter().map(|t| t.adjoint())),
            Node::Product(factors) => Self::product(factors.iter().rev().map(|f| f.adjoint())),
            Node::CubicExp { theta, generator } => Self::cubic_exp(generator.clone(), -theta),
        }
    }

    /// Apply to a state; the input is left untouched.
    pub fn apply(&self, state: &ChainState) -> ChainState {
        let mut out = self.apply_raw(state);
        out.prune(PRUNE);
        out
    }

    fn apply_raw(&self, state: &ChainState) -> ChainState {
        match &*self.0 {
            Node::Identity => state.clone(),
            Node::Zero => ChainState::zero(state.sites()),
            Node::Mode { ladder, mode } => {
                let mut out = ChainState::zero(state.sites());
                for (b, a) in state.iter() {
                    if let Some((nb, sign)) = b.apply(*ladder, *mode) {
                        out.add_amp(nb, a * sign);
                    }
                }
                out
            }
            Node::Diagonal { f, conjugate } => {
                let mut out = ChainState::zero(state.sites());
                for (b, a) in state.iter() {
                    let d = f(b);
                    let d = if *conjugate { d.conj() } else { d };
                    if d != Complex64::default() {
                        out.add_amp(b, a * d);
                    }
                }
                out
            }
            Node::Scaled(z, op) => op.apply_raw(state).scale(*z),
            Node::Sum(terms) => {
                let mut out = ChainState::zero(state.sites());
                for t in terms {
                    out.axpy(Complex64::new(1.0, 0.0), &t.apply_raw(state));
                }
                out
            }
            Node::Product(factors) => {
                let mut cur = state.clone();
                for f in factors.iter().rev() {
                    cur = f.apply(&cur);
                    if cur.is_empty() {
                        break;
                    }
                }
                cur
            }
            Node::CubicExp { theta, generator } => {
                if *theta == 0.0 {
                    return state.clone();
                }
                let g1 = generator.apply(state);
                let g2 = generator.apply(&g1);
                let mut out = state.clone();
                out.axpy(Complex64::new(theta.cos() - 1.0, 0.0), &g2);
                out.axpy(Complex64::new(0.0, theta.sin()), &g1);
                out
            }
        }
    }

    /// `exp(z A) |psi>` by Taylor series, stopping when a term's norm drops below `tol`.
    /// Nilpotent actions terminate exactly.
    pub fn exp_series_apply(&self, z: Complex64, state: &ChainState, tol: f64, max_terms: usize) -> ChainState {
        let mut out = state.clone();
        let mut term = state.clone();
        for k in 1..=max_terms {
            term = self.apply(&term).scale(z / k as f64);
            if term.is_empty() || term.norm() < tol {
                out.axpy(Complex64::new(1.0, 0.0), &term);
                break;
            }
            out.axpy(Complex64::new(1.0, 0.0), &term);
        }
        out.pruned()
    }

    /// `<bra| A |ket>`
    pub fn matrix_element(&self, bra: &ChainState, ket: &ChainState) -> Complex64 {
        bra.inner(&self.apply(ket))
    }

    /// Largest column distance `|(A - B)|s>|` over every basis state of an `L`-site chain.
    pub fn max_column_distance(&self, other: &LinearOp, sites: usize) -> f64 {
        all_basis_states(sites)
            .map(|b| {
                let s = ChainState::basis(sites, b);
                self.apply(&s).distance(&other.apply(&s))
            })
            .fold(0.0, f64::max)
    }

    /// Largest column norm `|A|s>|` over every basis state.
    pub fn max_column_norm(&self, sites: usize) -> f64 {
        all_basis_states(sites)
            .map(|b| self.apply(&ChainState::basis(sites, b)).norm())
            .fold(0.0, f64::max)
    }
}

/// All `4^L` occupation configurations.
pub fn all_basis_states(sites: usize) -> impl Iterator<Item = FockBasisState> {
    (0..1u64 << (2 * sites)).map(FockBasisState)
}

impl fmt::Debug for LinearOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Identity => write!(f, "1"),
            Node::Zero => write!(f, "0"),
            Node::Mode { ladder, mode } => {
                let dag = if *ladder == Ladder::Create { "+" } else { "" };
                write!(f, "m{mode}{dag}")
            }
            Node::Diagonal { conjugate, .. } => write!(f, "diag{}", if *conjugate { "*" } else { "" }),
            Node::Scaled(z, op) => write!(f, "({z})*{op:?}"),
            Node::Sum(t) => f.debug_list().entries(t.iter()).finish(),
            Node::Product(p) => {
                for (i, x) in p.iter().enumerate() {
                    if i > 0 {
                        write!(f, "·")?;
                    }
                    write!(f, "{x:?}")?;
                }
                Ok(())
            }
            Node::CubicExp { theta, generator } => write!(f, "exp(i{theta}{generator:?})"),
        }
    }
}

impl Add for LinearOp {
    type Output = LinearOp;
    fn add(self, rhs: LinearOp) -> LinearOp {
        LinearOp::sum([self, rhs])
    }
}

impl Sub for LinearOp {
    type Output = LinearOp;
    fn sub(self, rhs: LinearOp) -> LinearOp {
        LinearOp::sum([self, -rhs])
    }
}

impl Neg for LinearOp {
    type Output = LinearOp;
    fn neg(self) -> LinearOp {
        self.scaled_real(-1.0)
    }
}

impl Mul for LinearOp {
    type Output = LinearOp;
    fn mul(self, rhs: LinearOp) -> LinearOp {
        LinearOp::product([self, rhs])
    }
}

impl Mul<Complex64> for LinearOp {
    type Output = LinearOp;
    fn mul(self, rhs: Complex64) -> LinearOp {
        self.scaled(rhs)
    }
}

impl Mul<f64> for LinearOp {
    type Output = LinearOp;
    fn mul(self, rhs: f64) -> LinearOp {
        self.scaled_real(rhs)
    }
}

/// Site-validated operator factory for an `L`-site chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chain {
    sites: usize,
}

impl Chain {
    pub fn new(sites: usize) -> Result<Self> {
        if sites == 0 || sites > MAX_SITES {
            return Err(Error::ChainTooLong {
                sites,
                max: MAX_SITES,
            });
        }
        Ok(Chain { sites })
    }

    pub fn sites(self) -> usize {
        self.sites
    }

    pub fn check_site(self, site: usize) -> Result<()> {
        if site == 0 || site > self.sites {
            Err(Error::SiteOutOfRange {
                site,
                sites: self.sites,
            })
        } else {
            Ok(())
        }
    }

    /// `c_site`, `c†_site`, `d_site` or `d†_site` with the Jordan-Wigner sign.
    pub fn mode_op(self, ladder: Ladder, species: Species, site: usize) -> Result<LinearOp> {
        self.check_site(site)?;
        Ok(LinearOp::mode(ladder, mode_index(site, species)))
    }

    pub fn vacuum(self) -> ChainState {
        ChainState::vacuum(self.sites)
    }

    pub fn reference(self) -> ChainState {
        ChainState::reference(self.sites)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::basis::QutritLabel;

    fn c64(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn d_on_reference_gives_minus() {
        let ch = Chain::new(1).unwrap();
        let d = ch.mode_op(Ladder::Annihilate, Species::D, 1).unwrap();
        let out = d.apply(&ch.reference());
        let minus = ChainState::product(&[QutritLabel::Minus]);
        assert!(out.distance(&minus) < 1e-15);
    }

    #[test]
    fn double_creation_vanishes() {
        let ch = Chain::new(2).unwrap();
        let cd = ch.mode_op(Ladder::Create, Species::C, 2).unwrap();
        assert!((cd.clone() * cd).apply(&ch.reference()).is_empty());
    }

    #[test]
    fn out_of_range_site_is_rejected() {
        let ch = Chain::new(3).unwrap();
        assert!(matches!(
            ch.mode_op(Ladder::Create, Species::C, 4),
            Err(Error::SiteOutOfRange { site: 4, sites: 3 })
        ));
    }

    #[test]
    fn adjoint_reverses_products() {
        let ch = Chain::new(2).unwrap();
        let a = ch.mode_op(Ladder::Create, Species::C, 1).unwrap();
        let b = ch.mode_op(Ladder::Annihilate, Species::D, 2).unwrap().scaled(Complex64::new(0.3, 0.7));
        let lhs = (a.clone() * b.clone()).adjoint();
        let rhs = b.adjoint() * a.adjoint();
        assert!(lhs.max_column_distance(&rhs, 2) < 1e-15);
        assert!(a.adjoint().adjoint().max_column_distance(&a, 2) < 1e-15);
    }

    #[test]
    fn cubic_exp_of_parity_generator() {
        // G = diag(0, 1, -1) style: n_c - n_d on one site satisfies G^3 = G.
        let g = LinearOp::diagonal_real(|b| {
            let o = b.site(1);
            o.c as i32 as f64 - o.d as i32 as f64
        });
        let u = LinearOp::cubic_exp(g, 0.4);
        let s = ChainState::basis(1, FockBasisState(0b01));
        let out = u.apply(&s);
        let expect = s.scale(Complex64::from_polar(1.0, 0.4));
        assert!(out.distance(&expect) < 1e-14);
        let back = u.adjoint().apply(&out);
        assert!(back.distance(&s) < 1e-14);
    }

    #[test]
    fn exp_series_of_nilpotent_terminates() {
        let ch = Chain::new(1).unwrap();
        let cdag = ch.mode_op(Ladder::Create, Species::C, 1).unwrap();
        let out = cdag.exp_series_apply(c64(2.0), &ch.reference(), 1e-15, 50);
        assert!((out.norm_sqr() - 5.0).abs() < 1e-12);
    }
}
