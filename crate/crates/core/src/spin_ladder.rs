//! Spin-half ladder: interleaved indexing, the four nearest-neighbour exciton
//! spin modes, maximal placements and their classification.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exciton::ops::{exciton_create, ExcitonIndex};
use crate::fockspace::{Chain, ChainState};
use crate::moment::formulas::{curie_threshold, fission_energy, spin_gap, Thermicity};

/// Largest ladder enumerated exhaustively.
pub const MAX_ENUM_RUNGS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Spin {
    Up,
    Down,
}

/// A site of the two-leg ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SpinSite {
    pub rung: usize,
    pub spin: Spin,
}

/// Chain position of a ladder site: down-spin of rung `r` sits at `2r - 1`,
/// up-spin at `2r`.
pub fn interleave_index(site: SpinSite) -> usize {
    match site.spin {
        Spin::Down => 2 * site.rung - 1,
        Spin::Up => 2 * site.rung,
    }
}

pub fn deinterleave(index: usize) -> SpinSite {
    assert!(index >= 1, "chain positions start at 1");
    SpinSite {
        rung: index.div_ceil(2),
        spin: if index.is_multiple_of(2) { Spin::Up } else { Spin::Down },
    }
}

/// Nearest-neighbour exciton spin modes; arrows point from electron to hole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SpinMode {
    /// `⇀`: both charges on the up leg
    ParallelUp,
    /// `⇁`: both charges on the down leg
    ParallelDown,
    /// `↘`: electron up, hole down
    CrossedDown,
    /// `↗`: electron down, hole up
    CrossedUp,
}

impl SpinMode {
    pub const ALL: [SpinMode; 4] = [
        SpinMode::ParallelUp,
        SpinMode::ParallelDown,
        SpinMode::CrossedDown,
        SpinMode::CrossedUp,
    ];

    pub fn glyph(self) -> char {
        match self {
            SpinMode::ParallelUp => '⇀',
            SpinMode::ParallelDown => '⇁',
            SpinMode::CrossedDown => '↘',
            SpinMode::CrossedUp => '↗',
        }
    }

    pub fn from_glyph(c: char) -> Option<Self> {
        SpinMode::ALL.into_iter().find(|m| m.glyph() == c)
    }

    pub fn is_parallel(self) -> bool {
        matches!(self, SpinMode::ParallelUp | SpinMode::ParallelDown)
    }

    fn legs(self) -> (Spin, Spin) {
        match self {
            SpinMode::ParallelUp => (Spin::Up, Spin::Up),
            SpinMode::ParallelDown => (Spin::Down, Spin::Down),
            SpinMode::CrossedDown => (Spin::Up, Spin::Down),
            SpinMode::CrossedUp => (Spin::Down, Spin::Up),
        }
    }

    /// Electron at rung `anchor`, hole at rung `anchor + 1`.
    pub fn sites(self, anchor: usize) -> (SpinSite, SpinSite) {
        let (e, h) = self.legs();
        (
            SpinSite { rung: anchor, spin: e },
            SpinSite { rung: anchor + 1, spin: h },
        )
    }

    /// Twice the spin projection, with a missing down-hole counted as an up-spin.
    pub fn magnetization(self) -> i32 {
        let (e, h) = self.legs();
        let s = |spin| if spin == Spin::Up { 1 } else { -1 };
        (s(e) - s(h)) / 2
    }
}

impl fmt::Display for SpinMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.glyph())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Placement {
    pub anchor: usize,
    pub mode: SpinMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Occupant {
    Electron(SpinMode),
    Hole(SpinMode),
}

/// Placement of nearest-neighbour excitons on a ladder of `rungs` rungs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LadderConfiguration {
    pub rungs: usize,
    pub placements: Vec<Placement>,
}

impl LadderConfiguration {
    pub fn new(rungs: usize, mut placements: Vec<Placement>) -> Result<Self> {
        placements.sort();
        let config = LadderConfiguration { rungs, placements };
        let mut used = BTreeSet::new();
        for p in &config.placements {
            if p.anchor == 0 || p.anchor >= rungs {
                return Err(Error::InvalidParameter(format!(
                    "anchor {} outside 1..{}",
                    p.anchor,
                    rungs.saturating_sub(1)
                )));
            }
            let (e, h) = p.mode.sites(p.anchor);
            if !used.insert(e) || !used.insert(h) {
                return Err(Error::InvalidParameter(format!("site doubly occupied by {:?}", p)));
            }
        }
        Ok(config)
    }

    /// Every anchor carrying `mode`.
    pub fn uniform(rungs: usize, mode: SpinMode) -> Self {
        LadderConfiguration {
            rungs,
            placements: (1..rungs).map(|anchor| Placement { anchor, mode }).collect(),
        }
    }

    pub fn occupant(&self, site: SpinSite) -> Option<Occupant> {
        self.placements.iter().find_map(|p| {
            let (e, h) = p.mode.sites(p.anchor);
            if e == site {
                Some(Occupant::Electron(p.mode))
            } else if h == site {
                Some(Occupant::Hole(p.mode))
            } else {
                None
            }
        })
    }

    fn used(&self) -> BTreeSet<SpinSite> {
        self.placements
            .iter()
            .flat_map(|p| {
                let (e, h) = p.mode.sites(p.anchor);
                [e, h]
            })
            .collect()
    }

    pub fn empty_sites(&self) -> Vec<SpinSite> {
        let used = self.used();
        all_sites(self.rungs).filter(|s| !used.contains(s)).collect()
    }

    /// No further exciton of any mode fits.
    pub fn is_maximal(&self) -> bool {
        let used = self.used();
        (1..self.rungs).all(|anchor| {
            SpinMode::ALL.iter().all(|m| {
                let (e, h) = m.sites(anchor);
                used.contains(&e) || used.contains(&h)
            })
        })
    }

    pub fn modes(&self) -> BTreeSet<SpinMode> {
        self.placements.iter().map(|p| p.mode).collect()
    }

    /// Two-line picture, up leg on top, rungs ascending left to right. Each
    /// cell is the mode glyph with `+` for the electron or `-` for the hole.
    pub fn text_art(&self) -> String {
        let leg = |spin| {
            (1..=self.rungs)
                .map(|rung| match self.occupant(SpinSite { rung, spin }) {
                    Some(Occupant::Electron(m)) => format!("{}+", m.glyph()),
                    Some(Occupant::Hole(m)) => format!("{}-", m.glyph()),
                    None => "· ".to_string(),
                })
                .collect::<Vec<_>>()
                .join(" ")
                .trim_end()
                .to_string()
        };
        format!("{}\n{}", leg(Spin::Up), leg(Spin::Down))
    }

    /// The same excitons created on the interleaved spinless chain.
    pub fn to_chain_state(&self) -> Result<ChainState> {
        let chain = Chain::new(2 * self.rungs)?;
        self.placements.iter().try_fold(chain.vacuum(), |state, p| {
            let (e, h) = p.mode.sites(p.anchor);
            let idx = ExcitonIndex::new(chain, interleave_index(e), interleave_index(h))?;
            Ok(exciton_create(chain, idx)?.apply(&state))
        })
    }
}

fn all_sites(rungs: usize) -> impl Iterator<Item = SpinSite> {
    (1..=rungs).flat_map(|rung| [Spin::Up, Spin::Down].map(|spin| SpinSite { rung, spin }))
}

/// Calls `visit` once per maximal placement, in a fixed order.
pub fn for_each_maximal<F: FnMut(&LadderConfiguration)>(rungs: usize, mut visit: F) -> Result<()> {
    if !(2..=MAX_ENUM_RUNGS).contains(&rungs) {
        return Err(Error::InvalidParameter(format!("rungs must be in 2..={MAX_ENUM_RUNGS}")));
    }
    // Subsets of modes that fit at one anchor without overlap.
    let choices: Vec<Vec<SpinMode>> = (0u8..16)
        .map(|mask| SpinMode::ALL.into_iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, m)| m).collect::<Vec<_>>())
        .filter(|set| {
            let mut seen = BTreeSet::new();
            set.iter().all(|m| {
                let (e, h) = m.sites(1);
                seen.insert(e) && seen.insert(h)
            })
        })
        .collect();
    let mut config = LadderConfiguration {
        rungs,
        placements: Vec::new(),
    };
    let mut used = BTreeSet::new();
    descend(1, &choices, &mut config, &mut used, &mut visit);
    Ok(())
}

fn blocked(used: &BTreeSet<SpinSite>, anchor: usize) -> bool {
    SpinMode::ALL.iter().all(|m| {
        let (e, h) = m.sites(anchor);
        used.contains(&e) || used.contains(&h)
    })
}

fn descend<F: FnMut(&LadderConfiguration)>(
    anchor: usize,
    choices: &[Vec<SpinMode>],
    config: &mut LadderConfiguration,
    used: &mut BTreeSet<SpinSite>,
    visit: &mut F,
) {
    // anchors below `anchor` are decided, so rungs up to `anchor - 1` are final
    if anchor >= 3 && !blocked(used, anchor - 2) {
        return;
    }
    if anchor == config.rungs {
        if blocked(used, anchor - 1) {
            visit(config);
        }
        return;
    }
    for set in choices {
        let sites: Vec<SpinSite> = set
            .iter()
            .flat_map(|m| {
                let (e, h) = m.sites(anchor);
                [e, h]
            })
            .collect();
        if sites.iter().any(|s| used.contains(s)) {
            continue;
        }
        used.extend(sites.iter().copied());
        let before = config.placements.len();
        config.placements.extend(set.iter().map(|&mode| Placement { anchor, mode }));
        descend(anchor + 1, choices, config, used, visit);
        config.placements.truncate(before);
        for s in &sites {
            used.remove(s);
        }
    }
}

pub fn enumerate_configs(rungs: usize) -> Result<Vec<LadderConfiguration>> {
    let mut out = Vec::new();
    for_each_maximal(rungs, |c| out.push(c.clone()))?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ModeClass {
    Single,
    Double,
    Multiple,
}

/// A move that reshuffles local spin modes without changing the total spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpinWitness {
    /// A parallel exciton can switch legs.
    ParallelSwap(Placement),
    /// Two neighbouring excitons with opposite crossed spins can become two
    /// parallel ones.
    OppositePair(Placement, Placement),
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub class: ModeClass,
    pub modes: Vec<SpinMode>,
    /// Structural flag; the gap size comes from the moment formulas.
    pub spin_gap: bool,
    pub witness: Option<SpinWitness>,
}

pub fn classify(config: &LadderConfiguration) -> Classification {
    let modes: Vec<SpinMode> = config.modes().into_iter().collect();
    let class = match modes.len() {
        0 | 1 => ModeClass::Single,
        2 => ModeClass::Double,
        _ => ModeClass::Multiple,
    };
    let witness = config
        .placements
        .iter()
        .find(|p| p.mode.is_parallel())
        .map(|&p| SpinWitness::ParallelSwap(p))
        .or_else(|| {
            config
                .placements
                .windows(2)
                .find(|w| w[0].mode.magnetization() + w[1].mode.magnetization() == 0)
                .map(|w| SpinWitness::OppositePair(w[0], w[1]))
        });
    Classification {
        class,
        modes,
        spin_gap: witness.is_none(),
        witness,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerationSummary {
    pub rungs: usize,
    pub total: usize,
    pub single: usize,
    pub double: usize,
    pub multiple: usize,
    pub parallel_only_single: usize,
    pub double_parallel: usize,
    pub double_crossed: usize,
    /// First configuration seen for each distinct mode set.
    pub representatives: Vec<LadderConfiguration>,
}

pub fn summarize(rungs: usize) -> Result<EnumerationSummary> {
    let mut summary = EnumerationSummary {
        rungs,
        total: 0,
        single: 0,
        double: 0,
        multiple: 0,
        parallel_only_single: 0,
        double_parallel: 0,
        double_crossed: 0,
        representatives: Vec::new(),
    };
    let mut seen_sets = BTreeSet::new();
    for_each_maximal(rungs, |c| {
        summary.total += 1;
        let modes = c.modes();
        match modes.len() {
            0 | 1 => {
                summary.single += 1;
                if modes.iter().all(|m| m.is_parallel()) {
                    summary.parallel_only_single += 1;
                }
            }
            2 => {
                summary.double += 1;
                if modes.iter().all(|m| m.is_parallel()) {
                    summary.double_parallel += 1;
                }
                if modes.iter().all(|m| !m.is_parallel()) {
                    summary.double_crossed += 1;
                }
            }
            _ => summary.multiple += 1,
        }
        if seen_sets.insert(modes) {
            summary.representatives.push(c.clone());
        }
    })?;
    Ok(summary)
}

/// Signed, span-labelled exciton in a two-exciton superposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LabeledExciton {
    pub sign: i8,
    pub y: usize,
    pub mode: SpinMode,
}

#[derive(Debug, Clone, Serialize)]
pub struct FissionMap {
    pub input: [LabeledExciton; 2],
    pub output: [LabeledExciton; 2],
    /// `(electrons, holes)` before and after
    pub charges: ((usize, usize), (usize, usize)),
    /// Summed magnetization before and after
    pub magnetization: (i32, i32),
}

impl FissionMap {
    pub fn conserves_charges(&self) -> bool {
        self.charges.0 == self.charges.1
    }
}

/// `|2⇀) - |1⇁)  ->  |1↘) + |2↗)`: the parallel pair (singlet / T0 mixture)
/// turns into the crossed pair (T+ and T-).
pub fn singlet_fission_map(input: [LabeledExciton; 2]) -> Result<FissionMap> {
    let mut sorted = input;
    sorted.sort_by_key(|e| std::cmp::Reverse(e.y));
    let expected = [
        LabeledExciton { sign: 1, y: 2, mode: SpinMode::ParallelUp },
        LabeledExciton { sign: -1, y: 1, mode: SpinMode::ParallelDown },
    ];
    if sorted != expected {
        return Err(Error::PatternMismatch(format!(
            "expected +|2⇀) -|1⇁), got {:+}|{}{}) {:+}|{}{})",
            sorted[0].sign, sorted[0].y, sorted[0].mode, sorted[1].sign, sorted[1].y, sorted[1].mode
        )));
    }
    let output = [
        LabeledExciton { sign: 1, y: 1, mode: SpinMode::CrossedDown },
        LabeledExciton { sign: 1, y: 2, mode: SpinMode::CrossedUp },
    ];
    // every nearest-neighbour exciton carries one electron and one hole
    let count = |xs: &[LabeledExciton; 2]| (xs.len(), xs.len());
    let mag = |xs: &[LabeledExciton; 2]| xs.iter().map(|e| e.mode.magnetization()).sum();
    Ok(FissionMap {
        input,
        output,
        charges: (count(&input), count(&output)),
        magnetization: (mag(&input), mag(&output)),
    })
}

/// Spin map combined with the energy sign of the fission step.
#[derive(Debug, Clone, Serialize)]
pub struct FissionPipeline {
    pub lambda_tilde_1: f64,
    pub energy_change: f64,
    pub thermicity: Thermicity,
    pub map: FissionMap,
    pub output_all_crossed: bool,
}

pub fn fission_pipeline(lambda_tilde_1: f64) -> Result<FissionPipeline> {
    let (energy_change, thermicity) = fission_energy(lambda_tilde_1)?;
    let map = singlet_fission_map([
        LabeledExciton { sign: 1, y: 2, mode: SpinMode::ParallelUp },
        LabeledExciton { sign: -1, y: 1, mode: SpinMode::ParallelDown },
    ])?;
    let output_all_crossed = map.output.iter().all(|e| !e.mode.is_parallel());
    Ok(FissionPipeline {
        lambda_tilde_1,
        energy_change,
        thermicity,
        map,
        output_all_crossed,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CurieRow {
    pub lambda_tilde: f64,
    /// `None` next to a pole of the denominator
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurieReport {
    pub rows: Vec<CurieRow>,
    /// Grid brackets where the gap changes sign.
    pub sign_changes: Vec<(f64, f64)>,
    pub threshold: f64,
    pub stated_threshold: f64,
}

pub fn curie_report(lo: f64, hi: f64, step: f64) -> Result<CurieReport> {
    if !(step > 0.0 && lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::InvalidParameter("curie grid needs lo <= hi and step > 0".into()));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    let rows: Vec<CurieRow> = (0..=n)
        .map(|i| {
            let lambda_tilde = lo + i as f64 * step;
            CurieRow {
                lambda_tilde,
                gap: spin_gap(lambda_tilde).ok(),
            }
        })
        .collect();
    let sign_changes = rows
        .windows(2)
        .filter_map(|w| match (w[0].gap, w[1].gap) {
            (Some(a), Some(b)) if a.signum() != b.signum() => Some((w[0].lambda_tilde, w[1].lambda_tilde)),
            _ => None,
        })
        .collect();
    Ok(CurieReport {
        rows,
        sign_changes,
        threshold: curie_threshold(),
        stated_threshold: 2.5,
    })
}
