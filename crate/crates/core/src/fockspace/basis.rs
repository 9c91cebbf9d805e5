//! Fermionic basis labels for a chain with two modes (c, d) per site.
//!
//! Modes are ordered `c_1, d_1, c_2, d_2, ...`; bit `2 (site - 1) + species`
//! of a [`FockBasisState`] is the occupation of that mode. A creation or
//! annihilation on mode `k` picks up `(-1)^(occupied modes below k)`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest chain that fits the 64-bit occupation word.
pub const MAX_SITES: usize = 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Species {
    /// conduction (electron) mode
    C,
    /// valence (hole) mode
    D,
}

impl Species {
    fn offset(self) -> usize {
        match self {
            Species::C => 0,
            Species::D => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ladder {
    Create,
    Annihilate,
}

impl Ladder {
    pub fn flip(self) -> Self {
        match self {
            Ladder::Create => Ladder::Annihilate,
            Ladder::Annihilate => Ladder::Create,
        }
    }
}

/// Position of a mode in the global ordering.
pub fn mode_index(site: usize, species: Species) -> usize {
    2 * (site - 1) + species.offset()
}

/// Per-site occupation `(n_c, n_d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SiteOccupation {
    pub c: bool,
    pub d: bool,
}

impl SiteOccupation {
    /// Odd sites carry one fermion; they are the neutral (vacuum-like) sites.
    pub fn is_odd(self) -> bool {
        self.c != self.d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FockBasisState(pub u64);

impl FockBasisState {
    /// Closed-shell reference: every d mode filled, every c mode empty.
    pub fn reference(sites: usize) -> Self {
        let mut bits = 0u64;
        for site in 1..=sites {
            bits |= 1 << mode_index(site, Species::D);
        }
        FockBasisState(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_occupied(self, mode: usize) -> bool {
        (self.0 >> mode) & 1 == 1
    }

    pub fn site(self, site: usize) -> SiteOccupation {
        SiteOccupation {
            c: self.is_occupied(mode_index(site, Species::C)),
            d: self.is_occupied(mode_index(site, Species::D)),
        }
    }

    /// Jordan-Wigner parity of the modes strictly below `mode`.
    pub fn sign_below(self, mode: usize) -> f64 {
        let mask = (1u64 << mode) - 1;
        if (self.0 & mask).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// Apply one ladder operator; `None` when the result vanishes.
    pub fn apply(self, ladder: Ladder, mode: usize) -> Option<(FockBasisState, f64)> {
        let occupied = self.is_occupied(mode);
        match (ladder, occupied) {
            (Ladder::Create, false) | (Ladder::Annihilate, true) => {
                Some((FockBasisState(self.0 ^ (1 << mode)), self.sign_below(mode)))
            }
            _ => None,
        }
    }

    /// Charge of a site in the ternary reading: `+1` for (1,1), `-1` for (0,0), `0` otherwise.
    pub fn site_charge(self, site: usize) -> i32 {
        let occ = self.site(site);
        match (occ.c, occ.d) {
            (true, true) => 1,
            (false, false) => -1,
            _ => 0,
        }
    }

    /// Phase attached to every qutrit product state containing this Fock
    /// configuration: `(-1)^P`, with `P` the number of site pairs `a < b`
    /// where `a` is charged (even parity) and `b` is neutral (odd parity).
    ///
    /// With this phase the pair operators place `+` and `-` with a positive
    /// amplitude regardless of the sites in between, and single-site actions
    /// are untouched on a one-site chain.
    pub fn qutrit_phase(self, sites: usize) -> f64 {
        let mut charged_seen = 0u32;
        let mut pairs = 0u32;
        for site in 1..=sites {
            if self.site(site).is_odd() {
                pairs += charged_seen;
            } else {
                charged_seen += 1;
            }
        }
        if pairs.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

/// Per-site ternary label (plus the screened fourth state).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QutritLabel {
    Plus,
    Vacuum,
    Minus,
    VacuumPrime,
}

impl QutritLabel {
    pub const ALL: [QutritLabel; 4] = [
        QutritLabel::Plus,
        QutritLabel::Vacuum,
        QutritLabel::Minus,
        QutritLabel::VacuumPrime,
    ];
    pub const TERNARY: [QutritLabel; 3] = [QutritLabel::Plus, QutritLabel::Vacuum, QutritLabel::Minus];

    /// Components on the site occupations `(n_c, n_d)`.
    pub fn decomposition(self) -> &'static [((bool, bool), f64)] {
        const S: f64 = FRAC_1_SQRT_2;
        match self {
            QutritLabel::Plus => &[((true, true), 1.0)],
            QutritLabel::Minus => &[((false, false), 1.0)],
            QutritLabel::Vacuum => &[((false, true), S), ((true, false), S)],
            QutritLabel::VacuumPrime => &[((false, true), S), ((true, false), -S)],
        }
    }

    pub fn glyph(self) -> char {
        match self {
            QutritLabel::Plus => '+',
            QutritLabel::Vacuum => 'o',
            QutritLabel::Minus => '-',
            QutritLabel::VacuumPrime => 'p',
        }
    }

    /// Ternary particle number (`None` for the screened state).
    pub fn charge(self) -> Option<i32> {
        match self {
            QutritLabel::Plus => Some(1),
            QutritLabel::Vacuum => Some(0),
            QutritLabel::Minus => Some(-1),
            QutritLabel::VacuumPrime => None,
        }
    }
}

/// One fixture character per site: a ternary label or the closed-shell reference `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteGlyph {
    Label(QutritLabel),
    Reference,
}

impl SiteGlyph {
    pub fn parse(ch: char) -> Option<Self> {
        Some(match ch {
            '+' => SiteGlyph::Label(QutritLabel::Plus),
            'o' => SiteGlyph::Label(QutritLabel::Vacuum),
            '-' => SiteGlyph::Label(QutritLabel::Minus),
            'p' => SiteGlyph::Label(QutritLabel::VacuumPrime),
            '0' => SiteGlyph::Reference,
            _ => return None,
        })
    }

    pub fn decomposition(self) -> &'static [((bool, bool), f64)] {
        match self {
            SiteGlyph::Label(l) => l.decomposition(),
            SiteGlyph::Reference => &[((false, true), 1.0)],
        }
    }
}

impl fmt::Display for QutritLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.glyph())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_fills_every_d_mode() {
        let r = FockBasisState::reference(3);
        for site in 1..=3 {
            assert_eq!(r.site(site), SiteOccupation { c: false, d: true });
        }
    }

    #[test]
    fn creation_on_occupied_mode_vanishes() {
        let r = FockBasisState::reference(2);
        assert!(r.apply(Ladder::Create, mode_index(1, Species::D)).is_none());
        assert!(r.apply(Ladder::Annihilate, mode_index(2, Species::C)).is_none());
    }

    #[test]
    fn jordan_wigner_sign_counts_lower_modes() {
        // d_1 and d_2 occupied: annihilating d_2 passes one occupied mode.
        let r = FockBasisState::reference(2);
        let (_, sign) = r.apply(Ladder::Annihilate, mode_index(2, Species::D)).unwrap();
        assert_eq!(sign, -1.0);
        let (_, sign) = r.apply(Ladder::Annihilate, mode_index(1, Species::D)).unwrap();
        assert_eq!(sign, 1.0);
    }

    #[test]
    fn all_neutral_configurations_have_trivial_phase() {
        for sites in 1..8 {
            assert_eq!(FockBasisState::reference(sites).qutrit_phase(sites), 1.0);
        }
    }
}
