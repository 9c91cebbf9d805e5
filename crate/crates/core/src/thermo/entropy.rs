//! Entropies, temperatures and degeneracy counts of exciton ensembles.

use serde::Serialize;

use super::packing::{binomial, max_packings, packing_counts};

/// Gibbs entropy estimate `ln(L/2)`.
pub fn gibbs_entropy(sites: usize) -> f64 {
    (sites as f64 / 2.0).ln()
}

/// `ln(max m)` from exact packing counts.
pub fn gibbs_entropy_exact(sites: usize, y: usize) -> f64 {
    (max_packings(sites, y) as f64).ln()
}

/// Boltzmann entropy estimate `(L/2) ln m`.
pub fn boltzmann_entropy(sites: usize, m: usize) -> f64 {
    sites as f64 / 2.0 * (m as f64).ln()
}

/// `T_B = (dS_B/dm)^{-1} = 2m/L`.
pub fn boltzmann_temperature(sites: usize, m: usize) -> f64 {
    2.0 * m as f64 / sites as f64
}

/// Count of mode orderings `(L-1)! / (k!)^2`, `k = floor((L-1)/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Degeneracy {
    pub value: u128,
    /// false when `L - 1` is odd and the floor convention was used
    pub exact_binomial: bool,
}

pub fn degeneracy(sites: usize) -> Degeneracy {
    let n = sites.saturating_sub(1) as u128;
    let k = n / 2;
    // (n)! / (k!)^2 = C(n, k) * (n - k)! / k!
    let ratio: u128 = (k + 1..=n - k).product();
    Degeneracy {
        value: binomial(n, k) * ratio,
        exact_binomial: n.is_multiple_of(2),
    }
}

/// `(L - 1) ln 2`.
pub fn thermal_entropy(sites: usize) -> f64 {
    sites.saturating_sub(1) as f64 * std::f64::consts::LN_2
}

/// One row of the packing table.
#[derive(Debug, Clone, Serialize)]
pub struct PackingRow {
    #[serde(rename = "L")]
    pub sites: usize,
    pub y: usize,
    pub m: usize,
    pub count: u128,
    /// `ln count`
    pub s_exact: f64,
    /// `(L/2) ln m`
    pub s_estimate: f64,
}

pub fn packing_rows(sites: usize) -> Vec<PackingRow> {
    let mut rows = Vec::new();
    for y in 1..sites {
        for (m, &count) in packing_counts(sites, y).iter().enumerate() {
            rows.push(PackingRow {
                sites,
                y,
                m,
                count,
                s_exact: (count as f64).ln(),
                s_estimate: boltzmann_entropy(sites, m),
            });
        }
    }
    rows
}

/// Interior `m` where `ln C(m)` fails to be concave, with the second difference.
pub fn concavity_violations(sites: usize, y: usize) -> Vec<(usize, f64)> {
    let logs: Vec<f64> = packing_counts(sites, y).iter().map(|&c| (c as f64).ln()).collect();
    (1..logs.len().saturating_sub(1))
        .filter_map(|m| {
            let d2 = logs[m + 1] - 2.0 * logs[m] + logs[m - 1];
            (d2 > 1e-12).then_some((m, d2))
        })
        .collect()
}
