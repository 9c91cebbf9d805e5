//! Parameter sweeps emitting `#`-commented CSV.

use std::f64::consts::{FRAC_PI_4, TAU};
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use super::config::{fmt12, ExperimentConfig, GridSpec};
use crate::error::{Error, Result};
use crate::moment::formulas::{
    absorbed_number, ac_current, curie_threshold, dc_current, excited_number, fission_energy, spin_gap,
};
use crate::thermo::entropy::{
    boltzmann_entropy, boltzmann_temperature, degeneracy, gibbs_entropy, gibbs_entropy_exact, packing_rows,
    thermal_entropy,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    Excited,
    Absorbed,
    SpinGap,
    Fission,
    Dc,
    Ac,
    Entropy,
    Packings,
    Curie,
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "excited" => Observable::Excited,
            "absorbed" => Observable::Absorbed,
            "spin_gap" => Observable::SpinGap,
            "fission" => Observable::Fission,
            "dc" => Observable::Dc,
            "ac" => Observable::Ac,
            "entropy" => Observable::Entropy,
            "packings" => Observable::Packings,
            "curie" => Observable::Curie,
            other => return Err(Error::UnknownObservable(other.to_string())),
        })
    }
}

impl Observable {
    fn formula(self) -> &'static str {
        match self {
            Observable::Excited => "(1 + 3x + x^2)/(1 + x), x = |lambda|^2",
            Observable::Absorbed => "1 + x - x^2/(1 + x), x = |lambda|^2",
            Observable::SpinGap | Observable::Curie => "(x^3 - 9x^2 + 18x - 6)/(x^2 - 4x + 2), x = |lambda_tilde|^2",
            Observable::Fission => "2/x - 1, x = |lambda_tilde|^2",
            Observable::Dc => "lambda^2 sin(phi) / (2 cosh(alpha)^2), equal chemical potentials at both ends",
            Observable::Ac => "omega sin(2 theta) / (1 - exp(-beta))",
            Observable::Entropy => "S_G = ln(L/2), S_exact = ln(max m), S_B = (L/2) ln m and T_B = 2m/L at m = L/2, S_T = (L-1) ln 2",
            Observable::Packings => "exact packing counts by dynamic programming, S_exact = ln count, S_estimate = (L/2) ln m",
        }
    }
}

fn axis(spec: &Option<GridSpec>, default: GridSpec) -> Result<Vec<f64>> {
    spec.clone().unwrap_or(default).points()
}

fn range(start: f64, stop: f64, step: f64) -> GridSpec {
    GridSpec::Range { start, stop, step }
}

/// Cartesian product, last axis fastest.
fn grid3(a: &[f64], b: &[f64], c: &[f64]) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(a.len() * b.len() * c.len());
    for &x in a {
        for &y in b {
            out.extend(c.iter().map(|&z| (x, y, z)));
        }
    }
    out
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "nan".to_string(), fmt12)
}

/// One CSV document, header comments first, rows in grid order.
pub fn run_sweep(config: &ExperimentConfig, observable: Observable) -> Result<String> {
    config.validate()?;
    let g = &config.grid;
    let (columns, rows): (&str, Vec<String>) = match observable {
        Observable::Excited | Observable::Absorbed => {
            let f = if observable == Observable::Excited { excited_number } else { absorbed_number };
            let pts = axis(&g.lambda, range(0.0, 2.0, 0.1))?;
            ("lambda,value", pts.par_iter().map(|&l| format!("{},{}", fmt12(l), fmt12(f(l)))).collect())
        }
        Observable::SpinGap | Observable::Curie => {
            let pts = axis(&g.lambda_tilde, range(1.1, 4.0, 0.01))?;
            let gaps: Vec<Option<f64>> = pts.par_iter().map(|&l| spin_gap(l).ok()).collect();
            let rows = pts
                .iter()
                .enumerate()
                .map(|(i, &l)| {
                    let flip = i > 0
                        && matches!((gaps[i - 1], gaps[i]), (Some(a), Some(b)) if a.signum() != b.signum());
                    if observable == Observable::Curie {
                        format!("{},{},{}", fmt12(l), opt(gaps[i]), u8::from(flip))
                    } else {
                        format!("{},{}", fmt12(l), opt(gaps[i]))
                    }
                })
                .collect();
            let cols = if observable == Observable::Curie { "lambda_tilde,gap,sign_change" } else { "lambda_tilde,gap" };
            (cols, rows)
        }
        Observable::Fission => {
            let pts = axis(&g.lambda_tilde, range(1.1, 4.0, 0.1))?;
            let rows = pts
                .par_iter()
                .map(|&l| match fission_energy(l) {
                    Ok((e, class)) => format!("{},{},{:?}", fmt12(l), fmt12(e), class),
                    Err(_) => format!("{},nan,undefined", fmt12(l)),
                })
                .collect();
            ("lambda_tilde,energy_change,thermicity", rows)
        }
        Observable::Dc => {
            let lambdas = axis(&g.lambda, GridSpec::Values(vec![1.0]))?;
            let phis = axis(&g.phi, range(0.0, TAU, TAU / 32.0))?;
            let alphas = axis(&g.alpha, GridSpec::Values(vec![0.0]))?;
            let points = grid3(&lambdas, &phis, &alphas);
            let rows = points
                .par_iter()
                .map(|&(l, p, a)| format!("{},{},{},{}", fmt12(l), fmt12(p), fmt12(a), fmt12(dc_current(l, p, a, a))))
                .collect();
            ("lambda,phi,alpha,current", rows)
        }
        Observable::Ac => {
            let omegas = axis(&g.omega, range(0.0, 2.0, 0.25))?;
            let thetas = axis(&g.theta, GridSpec::Values(vec![FRAC_PI_4]))?;
            let betas = axis(&g.beta, GridSpec::Values(vec![1.0]))?;
            let points = grid3(&omegas, &thetas, &betas);
            let rows = points
                .par_iter()
                .map(|&(o, t, b)| {
                    let v = ac_current(o, t, b).ok();
                    format!("{},{},{},{}", fmt12(o), fmt12(t), fmt12(b), opt(v))
                })
                .collect();
            ("omega,theta,beta,current", rows)
        }
        Observable::Entropy => {
            let rows = (2..=config.sites)
                .into_par_iter()
                .map(|l| {
                    let m = l / 2;
                    let d = degeneracy(l);
                    format!(
                        "{l},{},{},{},{},{},{},{}",
                        fmt12(gibbs_entropy(l)),
                        fmt12(gibbs_entropy_exact(l, 1)),
                        fmt12(boltzmann_entropy(l, m)),
                        fmt12(boltzmann_temperature(l, m)),
                        fmt12(thermal_entropy(l)),
                        d.value,
                        d.exact_binomial
                    )
                })
                .collect();
            ("L,S_G,S_exact_y1,S_B,T_B,S_T,degeneracy,exact_binomial", rows)
        }
        Observable::Packings => {
            let rows: Vec<Vec<String>> = (2..=config.sites)
                .into_par_iter()
                .map(|l| {
                    packing_rows(l)
                        .into_iter()
                        .map(|r| format!("{},{},{},{},{},{}", r.sites, r.y, r.m, r.count, fmt12(r.s_exact), fmt12(r.s_estimate)))
                        .collect()
                })
                .collect();
            ("L,y,m,count,S_exact,S_estimate", rows.into_iter().flatten().collect())
        }
    };
    let mut out = String::new();
    let name = format!("{observable:?}").to_lowercase();
    writeln!(out, "# observable = {name}").ok();
    writeln!(out, "# formula = {}", observable.formula()).ok();
    writeln!(out, "# seed = {}", config.seed).ok();
    writeln!(out, "# L = {}", config.sites).ok();
    if observable == Observable::Curie {
        writeln!(out, "# threshold = {}", fmt12(curie_threshold())).ok();
    }
    writeln!(out, "{columns}").ok();
    for r in rows {
        writeln!(out, "{r}").ok();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data_rows(csv: &str) -> Vec<Vec<String>> {
        csv.lines()
            .filter(|l| !l.starts_with('#'))
            .skip(1)
            .map(|l| l.split(',').map(str::to_string).collect())
            .collect()
    }

    #[test]
    fn spin_gap_sweep_changes_sign_near_threshold() {
        let csv = run_sweep(&ExperimentConfig::default(), Observable::Curie).unwrap();
        let flips: Vec<f64> = data_rows(&csv)
            .iter()
            .filter(|r| r[2] == "1")
            .map(|r| r[0].parse().unwrap())
            .collect();
        // one flip at the pole near 1.85, one at the threshold
        let near: Vec<_> = flips.iter().filter(|&&l| (l - 2.5068).abs() <= 0.01).collect();
        assert_eq!(near.len(), 1, "{flips:?}");
    }

    #[test]
    fn dc_sweep_is_odd_in_phi() {
        let config = ExperimentConfig {
            grid: crate::cli::config::Grids {
                phi: Some(GridSpec::Values(vec![-1.0, 1.0])),
                ..Default::default()
            },
            ..Default::default()
        };
        let rows = data_rows(&run_sweep(&config, Observable::Dc).unwrap());
        let a: f64 = rows[0][3].parse().unwrap();
        let b: f64 = rows[1][3].parse().unwrap();
        assert!((a + b).abs() < 1e-12);
    }

    #[test]
    fn packing_table_covers_every_span() {
        let config = ExperimentConfig {
            sites: 14,
            ..Default::default()
        };
        let rows = data_rows(&run_sweep(&config, Observable::Packings).unwrap());
        assert!(rows.iter().any(|r| r[0] == "14" && r[1] == "13" && r[2] == "1" && r[3] == "1"));
        assert!(rows.iter().any(|r| r[0] == "4" && r[1] == "1" && r[2] == "1" && r[3] == "3"));
    }

    #[test]
    fn unknown_observable_is_rejected() {
        assert!(matches!("bogus".parse::<Observable>(), Err(Error::UnknownObservable(_))));
    }
}
