use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::{mode_index, FockBasisState, QutritLabel, SiteGlyph, Species, MAX_SITES};
use crate::error::{Error, Result};

/// Amplitudes below this magnitude are dropped after every primitive action.
pub const PRUNE: f64 = 1e-14;

/// Sparse amplitude map over Fock configurations of an `L`-site chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    sites: usize,
    amps: BTreeMap<FockBasisState, Complex64>,
}

impl ChainState {
    pub fn zero(sites: usize) -> Self {
        assert!(sites <= MAX_SITES, "chain of {sites} sites exceeds {MAX_SITES}");
        ChainState {
            sites,
            amps: BTreeMap::new(),
        }
    }

    pub fn basis(sites: usize, state: FockBasisState) -> Self {
        let mut s = Self::zero(sites);
        s.amps.insert(state, Complex64::new(1.0, 0.0));
        s
    }

    /// Closed-shell reference `|0>` (every site `(n_c, n_d) = (0, 1)`).
    pub fn reference(sites: usize) -> Self {
        Self::basis(sites, FockBasisState::reference(sites))
    }

    /// Chain vacuum: every site in the ternary vacuum `|o>`.
    pub fn vacuum(sites: usize) -> Self {
        Self::product(&vec![QutritLabel::Vacuum; sites])
    }

    /// Product state; `labels[0]` is site 1.
    pub fn product(labels: &[QutritLabel]) -> Self {
        let glyphs: Vec<SiteGlyph> = labels.iter().map(|&l| SiteGlyph::Label(l)).collect();
        Self::from_glyphs(&glyphs)
    }

    fn from_glyphs(glyphs: &[SiteGlyph]) -> Self {
        let sites = glyphs.len();
        let mut partial: Vec<(u64, f64)> = vec![(0, 1.0)];
        for (i, g) in glyphs.iter().enumerate() {
            let site = i + 1;
            let mut next = Vec::with_capacity(partial.len() * 2);
            for &(bits, amp) in &partial {
                for &((c, d), w) in g.decomposition() {
                    let mut b = bits;
                    if c {
                        b |= 1 << mode_index(site, Species::C);
                    }
                    if d {
                        b |= 1 << mode_index(site, Species::D);
                    }
                    next.push((b, amp * w));
                }
            }
            partial = next;
        }
        let mut s = Self::zero(sites);
        for (bits, amp) in partial {
            let b = FockBasisState(bits);
            let phase = b.qutrit_phase(sites);
            s.add_amp(b, Complex64::new(amp * phase, 0.0));
        }
        s
    }

    /// Parse a fixture string, highest site first: `"+o-"` is site 3 = `+`,
    /// site 2 = `o`, site 1 = `-`.
    pub fn parse_product(text: &str) -> Result<Self> {
        let mut glyphs = Vec::new();
        for ch in text.chars().rev() {
            let g = SiteGlyph::parse(ch).ok_or_else(|| Error::Fixture {
                text: text.to_string(),
                reason: format!("unknown site character {ch:?}"),
            })?;
            glyphs.push(g);
        }
        if glyphs.is_empty() || glyphs.len() > MAX_SITES {
            return Err(Error::Fixture {
                text: text.to_string(),
                reason: format!("need 1..={MAX_SITES} sites"),
            });
        }
        Ok(Self::from_glyphs(&glyphs))
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (FockBasisState, Complex64)> + '_ {
        self.amps.iter().map(|(k, v)| (*k, *v))
    }

    pub fn amplitude(&self, state: FockBasisState) -> Complex64 {
        self.amps.get(&state).copied().unwrap_or_default()
    }

    pub fn add_amp(&mut self, state: FockBasisState, amp: Complex64) {
        let e = self.amps.entry(state).or_default();
        *e += amp;
    }

    pub fn prune(&mut self, threshold: f64) {
        self.amps.retain(|_, a| a.norm() >= threshold);
    }

    pub fn pruned(mut self) -> Self {
        self.prune(PRUNE);
        self
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).fold(0.0, |acc, x| acc + x)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &ChainState) -> Complex64 {
        let (small, large, conj_small) = if self.len() <= other.len() {
            (self, other, true)
        } else {
            (other, self, false)
        };
        let mut acc = Complex64::default();
        for (k, a) in &small.amps {
            if let Some(b) = large.amps.get(k) {
                acc += if conj_small { a.conj() * b } else { b.conj() * a };
            }
        }
        acc
    }

    pub fn scale(&self, z: Complex64) -> Self {
        let mut out = self.clone();
        for a in out.amps.values_mut() {
            *a *= z;
        }
        out.pruned()
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(Complex64::new(x, 0.0))
    }

    /// `self += z * other`
    pub fn axpy(&mut self, z: Complex64, other: &ChainState) {
        for (k, a) in &other.amps {
            self.add_amp(*k, z * a);
        }
    }

    pub fn add(&self, other: &ChainState) -> Self {
        let mut out = self.clone();
        out.axpy(Complex64::new(1.0, 0.0), other);
        out.pruned()
    }

    pub fn sub(&self, other: &ChainState) -> Self {
        let mut out = self.clone();
        out.axpy(Complex64::new(-1.0, 0.0), other);
        out.pruned()
    }

    /// Unit-norm copy; the zero state stays zero.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            self.clone()
        } else {
            self.scale_real(1.0 / n)
        }
    }

    pub fn distance(&self, other: &ChainState) -> f64 {
        let mut acc = 0.0;
        for (k, a) in &self.amps {
            acc += (a - other.amplitude(*k)).norm_sqr();
        }
        for (k, b) in &other.amps {
            if !self.amps.contains_key(k) {
                acc += b.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Drop every component containing the screened `|o'>` on any site.
    /// Returns the projected (unnormalized) state and the removed weight.
    pub fn qutrit_project(&self) -> (ChainState, f64) {
        let mut current = self.amps.clone();
        for site in 1..=self.sites {
            let c = 1u64 << mode_index(site, Species::C);
            let d = 1u64 << mode_index(site, Species::D);
            let mut next = BTreeMap::new();
            for (k, a) in &current {
                let bits = k.0;
                let occ = k.site(site);
                if !occ.is_odd() {
                    *next.entry(*k).or_insert_with(Complex64::default) += a;
                    continue;
                }
                // |o><o| with |o> = (|01> + |10>)/sqrt2 on this site
                let half = a * 0.5;
                let other = FockBasisState(bits ^ c ^ d);
                *next.entry(*k).or_insert_with(Complex64::default) += half;
                *next.entry(other).or_insert_with(Complex64::default) += half;
            }
            current = next;
        }
        let mut out = ChainState {
            sites: self.sites,
            amps: current,
        };
        out.prune(PRUNE);
        let removed = (self.norm_sqr() - out.norm_sqr()).max(0.0);
        (out, removed)
    }

    /// Components on the orthonormal qutrit product basis `{+, o, -, p}^L`,
    /// keyed by fixture strings (highest site first).
    pub fn qutrit_components(&self) -> BTreeMap<String, Complex64> {
        const S: f64 = std::f64::consts::FRAC_1_SQRT_2;
        let mut out: BTreeMap<String, Complex64> = BTreeMap::new();
        for (k, a) in &self.amps {
            let phase = k.qutrit_phase(self.sites);
            let mut partial: Vec<(Vec<char>, f64)> = vec![(Vec::new(), phase)];
            for site in 1..=self.sites {
                let occ = k.site(site);
                let opts: &[(char, f64)] = match (occ.c, occ.d) {
                    (true, true) => &[('+', 1.0)],
                    (false, false) => &[('-', 1.0)],
                    (false, true) => &[('o', S), ('p', S)],
                    (true, false) => &[('o', S), ('p', -S)],
                };
                let mut next = Vec::with_capacity(partial.len() * 2);
                for (chars, w) in &partial {
                    for &(ch, x) in opts {
                        let mut c2 = chars.clone();
                        c2.push(ch);
                        next.push((c2, w * x));
                    }
                }
                partial = next;
            }
            for (chars, w) in partial {
                let key: String = chars.iter().rev().collect();
                *out.entry(key).or_default() += a * w;
            }
        }
        out.retain(|_, a| a.norm() >= PRUNE);
        out
    }

    pub fn to_fixture(&self) -> StateFixture {
        StateFixture {
            sites: self.sites,
            components: self
                .qutrit_components()
                .into_iter()
                .map(|(k, a)| (k, [a.re, a.im]))
                .collect(),
        }
    }

    pub fn from_fixture(fixture: &StateFixture) -> Result<Self> {
        let mut out = ChainState::zero(fixture.sites);
        for (text, [re, im]) in &fixture.components {
            let s = Self::parse_product(text)?;
            if s.sites != fixture.sites {
                return Err(Error::SiteMismatch {
                    expected: fixture.sites,
                    found: s.sites,
                });
            }
            out.axpy(Complex64::new(*re, *im), &s);
        }
        Ok(out.pruned())
    }

    /// Ternary label string when this state is (up to a scalar) a single
    /// `{+, o, -}` product.
    pub fn as_single_product(&self) -> Option<(String, Complex64)> {
        let comps = self.qutrit_components();
        if comps.len() != 1 {
            return None;
        }
        comps.into_iter().next()
    }
}

/// JSON fixture: qutrit-product components with `(re, im)` amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFixture {
    pub sites: usize,
    pub components: Vec<(String, [f64; 2])>,
}

impl fmt::Display for ChainState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps = self.qutrit_components();
        if comps.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in comps {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)|{}>", a.re, a.im, k)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn vacuum_is_normalized_product() {
        let v = ChainState::vacuum(3);
        assert!((v.norm() - 1.0).abs() < 1e-12);
        assert_eq!(v.len(), 8);
        let comps = v.qutrit_components();
        assert_eq!(comps.len(), 1);
        assert!((comps["ooo"].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fixture_order_is_highest_site_first() {
        let s = ChainState::parse_product("+-").unwrap();
        let (bits, _) = s.iter().next().unwrap();
        assert_eq!(bits.site_charge(2), 1);
        assert_eq!(bits.site_charge(1), -1);
    }

    #[test]
    fn reference_projects_to_half_weight() {
        let (p, removed) = ChainState::reference(1).qutrit_project();
        assert!((removed - 0.5).abs() < 1e-12);
        let comps = p.qutrit_components();
        assert_eq!(comps.len(), 1);
        assert!((comps["o"].re - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn ternary_products_survive_projection() {
        let s = ChainState::parse_product("+o-o").unwrap();
        let (p, removed) = s.qutrit_project();
        assert!(removed < 1e-14);
        assert!(p.distance(&s) < 1e-14);
    }

    #[test]
    fn prime_component_is_removed() {
        let s = ChainState::parse_product("p+").unwrap();
        let (p, removed) = s.qutrit_project();
        assert!(p.is_empty());
        assert!((removed - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fixture_json_reproduces_state() {
        let a = ChainState::parse_product("+o-").unwrap();
        let b = ChainState::parse_product("o0p").unwrap();
        let mut s = a.scale(Complex64::new(0.6, 0.0));
        s.axpy(Complex64::new(0.0, 0.8), &b);
        let json = serde_json::to_string(&s.to_fixture()).unwrap();
        let back: StateFixture = serde_json::from_str(&json).unwrap();
        let s2 = ChainState::from_fixture(&back).unwrap();
        assert!(s.distance(&s2) < 1e-12);
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_bra() {
        let a = ChainState::parse_product("+o").unwrap();
        let b = a.scale(Complex64::new(0.0, 2.0));
        assert!((a.inner(&b) - Complex64::new(0.0, 2.0)).norm() < 1e-12);
        assert!((b.inner(&a) - Complex64::new(0.0, -2.0)).norm() < 1e-12);
    }
}
