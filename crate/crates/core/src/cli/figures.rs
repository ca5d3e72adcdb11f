//! Canned parameter grids behind the thirteen reference figure panels.
//!
//! Each dataset carries the panel's fixed parameters as metadata comments
//! and one row per (curve label, grid point) pair in grid order. Grid
//! densities are chosen so the plotted structure (peaks, plateaus,
//! crossings) is resolved; axis ranges follow the reference panels.

use super::output::{Dataset, Field, Row};
use super::{comment, qsnr_gamma, GridSpec, Spacing};
use crate::environment::QuadratureConfig;
use crate::error::Result;
use crate::optimize::{critical_eta, enhancement_factor, find_optimum};
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    F1a,
    F1b,
    F2a,
    F2b,
    F3,
    F4a,
    F4b,
    F5a,
    F5b,
    F5c,
    F5d,
    F6a,
    F6b,
}

pub const ALL_FIGURES: [FigureId; 13] = [
    FigureId::F1a,
    FigureId::F1b,
    FigureId::F2a,
    FigureId::F2b,
    FigureId::F3,
    FigureId::F4a,
    FigureId::F4b,
    FigureId::F5a,
    FigureId::F5b,
    FigureId::F5c,
    FigureId::F5d,
    FigureId::F6a,
    FigureId::F6b,
];

impl FigureId {
    pub fn name(self) -> &'static str {
        match self {
            FigureId::F1a => "1a",
            FigureId::F1b => "1b",
            FigureId::F2a => "2a",
            FigureId::F2b => "2b",
            FigureId::F3 => "3",
            FigureId::F4a => "4a",
            FigureId::F4b => "4b",
            FigureId::F5a => "5a",
            FigureId::F5b => "5b",
            FigureId::F5c => "5c",
            FigureId::F5d => "5d",
            FigureId::F6a => "6a",
            FigureId::F6b => "6b",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(raw: &str) -> std::result::Result<Self, String> {
        ALL_FIGURES
            .iter()
            .copied()
            .find(|id| id.name() == raw)
            .ok_or_else(|| {
                format!(
                    "unknown figure id {raw:?}; valid ids: 1a, 1b, 2a, 2b, 3, 4a, 4b, 5a, 5b, 5c, 5d, 6a, 6b"
                )
            })
    }
}

fn lin(min: f64, max: f64, points: usize) -> Vec<f64> {
    GridSpec { min, max, points, spacing: Spacing::Linear }.values()
}

fn logspace(min: f64, max: f64, points: usize) -> Vec<f64> {
    GridSpec { min, max, points, spacing: Spacing::Log }.values()
}

/// One row per (label, x), outer loop over labels, evaluated in parallel.
fn family_rows<F>(labels: &[f64], xs: &[f64], n_values: usize, eval: F) -> Vec<Row>
where
    F: Fn(f64, f64) -> Result<Vec<f64>> + Sync,
{
    let pairs: Vec<(f64, f64)> = labels
        .iter()
        .flat_map(|&label| xs.iter().map(move |&x| (label, x)))
        .collect();
    pairs
        .par_iter()
        .map(|&(label, x)| {
            let mut fields = vec![Field::Num(label), Field::Num(x)];
            match eval(label, x) {
                Ok(values) => {
                    debug_assert_eq!(values.len(), n_values);
                    fields.extend(values.into_iter().map(Field::Num));
                    Row::ok(fields)
                }
                Err(e) => {
                    fields.extend(std::iter::repeat_with(|| Field::Empty).take(n_values));
                    Row::failed(fields, e.to_string())
                }
            }
        })
        .collect()
}

fn single_rows<F>(xs: &[f64], n_values: usize, eval: F) -> Vec<Row>
where
    F: Fn(f64) -> Result<Vec<f64>> + Sync,
{
    xs.par_iter()
        .map(|&x| {
            let mut fields = vec![Field::Num(x)];
            match eval(x) {
                Ok(values) => {
                    debug_assert_eq!(values.len(), n_values);
                    fields.extend(values.into_iter().map(Field::Num));
                    Row::ok(fields)
                }
                Err(e) => {
                    fields.extend(std::iter::repeat_with(|| Field::Empty).take(n_values));
                    Row::failed(fields, e.to_string())
                }
            }
        })
        .collect()
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Dataset for one figure panel. Row-level failures stay in the rows.
pub fn figure_dataset(id: FigureId, quad: &QuadratureConfig) -> Dataset {
    match id {
        FigureId::F1a => qsnr_time_panel(
            id,
            &[0.1, 0.5, 1.0],
            1.0,
            0.0,
            lin(0.0, 10.0, 401),
            quad,
        ),
        FigureId::F1b => qsnr_time_panel(
            id,
            &[200.0, 300.0, 400.0],
            1.0,
            0.0,
            lin(0.0, 0.3, 301),
            quad,
        ),
        FigureId::F2a => optimum_vs_eta_panel(id, "q_opt", quad),
        FigureId::F2b => optimum_vs_eta_panel(id, "tau_opt", quad),
        FigureId::F3 => {
            let etas = [0.01, 0.1, 1.0];
            let ss = lin(0.1, 10.0, 100);
            let rows = family_rows(&etas, &ss, 1, |eta, s| {
                Ok(vec![find_optimum(eta, s, 0.0, quad)?.q_opt])
            });
            Dataset {
                comments: vec![
                    comment("figure", id),
                    comment("theta", 0),
                    comment("eta", join(&etas)),
                    comment("grid", "s linear [0.1, 10] x 100"),
                    comment("quantity", "q_opt versus s per eta"),
                ],
                columns: vec!["eta", "s", "q_opt"],
                rows,
            }
        }
        FigureId::F4a => temperature_time_panel(id, &[0.0, 1.0, 10.0, 100.0], lin(0.0, 5.0, 251), quad),
        FigureId::F4b => temperature_time_panel(id, &[200.0, 300.0, 400.0], lin(0.0, 1.0, 201), quad),
        FigureId::F5a => optimum_vs_theta_panel(id, Family::OhmicityAtEta(0.1), "q_opt", quad),
        FigureId::F5b => optimum_vs_theta_panel(id, Family::CouplingAtS(1.0), "q_opt", quad),
        FigureId::F5c => optimum_vs_theta_panel(id, Family::OhmicityAtEta(0.1), "tau_opt", quad),
        FigureId::F5d => optimum_vs_theta_panel(id, Family::CouplingAtS(1.0), "tau_opt", quad),
        FigureId::F6a => {
            let ss = [0.5, 1.0, 2.0];
            let etas = logspace(1e-2, 1.0, 25);
            let rows = family_rows(&ss, &etas, 2, |s, eta| {
                let r = enhancement_factor(eta, s, quad)?;
                Ok(vec![r.r, r.q_opt_zero_t])
            });
            Dataset {
                comments: vec![
                    comment("figure", id),
                    comment("s", join(&ss)),
                    comment("grid", "eta log [0.01, 1] x 25"),
                    comment("quantity", "high-temperature enhancement factor r versus eta per s"),
                ],
                columns: vec!["s", "eta", "r", "q_opt_zero_t"],
                rows,
            }
        }
        FigureId::F6b => {
            let ss = lin(0.3, 3.0, 28);
            let rows = single_rows(&ss, 1, |s| Ok(vec![critical_eta(s, quad)?]));
            Dataset {
                comments: vec![
                    comment("figure", id),
                    comment("grid", "s linear [0.3, 3] x 28"),
                    comment("quantity", "critical coupling eta_c versus s"),
                ],
                columns: vec!["s", "eta_c"],
                rows,
            }
        }
    }
}

fn qsnr_time_panel(
    id: FigureId,
    etas: &[f64],
    s: f64,
    theta: f64,
    taus: Vec<f64>,
    quad: &QuadratureConfig,
) -> Dataset {
    let grid_note = format!("tau linear [{}, {}] x {}", taus[0], taus[taus.len() - 1], taus.len());
    let rows = family_rows(etas, &taus, 2, |eta, tau| {
        let (q, gamma) = qsnr_gamma(eta, s, tau, theta, quad)?;
        Ok(vec![q, gamma])
    });
    Dataset {
        comments: vec![
            comment("figure", id),
            comment("s", s),
            comment("theta", theta),
            comment("eta", join(etas)),
            comment("grid", grid_note),
            comment("quantity", "q and gamma versus tau per eta"),
        ],
        columns: vec!["eta", "tau", "q", "gamma"],
        rows,
    }
}

fn temperature_time_panel(
    id: FigureId,
    thetas: &[f64],
    taus: Vec<f64>,
    quad: &QuadratureConfig,
) -> Dataset {
    let (eta, s) = (0.1, 1.0);
    let grid_note = format!("tau linear [{}, {}] x {}", taus[0], taus[taus.len() - 1], taus.len());
    let rows = family_rows(thetas, &taus, 2, |theta, tau| {
        let (q, gamma) = qsnr_gamma(eta, s, tau, theta, quad)?;
        Ok(vec![q, gamma])
    });
    Dataset {
        comments: vec![
            comment("figure", id),
            comment("eta", eta),
            comment("s", s),
            comment("theta", join(thetas)),
            comment("grid", grid_note),
            comment("quantity", "q and gamma versus tau per theta"),
        ],
        columns: vec!["theta", "tau", "q", "gamma"],
        rows,
    }
}

fn optimum_vs_eta_panel(id: FigureId, quantity: &'static str, quad: &QuadratureConfig) -> Dataset {
    let ss = [0.5, 1.0, 2.0];
    let etas = logspace(1e-2, 1e3, 51);
    let want_tau = quantity == "tau_opt";
    let rows = family_rows(&ss, &etas, 1, |s, eta| {
        let o = find_optimum(eta, s, 0.0, quad)?;
        Ok(vec![if want_tau { o.tau_opt } else { o.q_opt }])
    });
    Dataset {
        comments: vec![
            comment("figure", id),
            comment("theta", 0),
            comment("s", join(&ss)),
            comment("grid", "eta log [0.01, 1000] x 51"),
            comment("quantity", format!("{quantity} versus eta per s")),
        ],
        columns: vec!["s", "eta", quantity],
        rows,
    }
}

#[derive(Clone, Copy)]
enum Family {
    OhmicityAtEta(f64),
    CouplingAtS(f64),
}

fn optimum_vs_theta_panel(
    id: FigureId,
    family: Family,
    quantity: &'static str,
    quad: &QuadratureConfig,
) -> Dataset {
    let thetas = logspace(1e-2, 1e5, 29);
    let want_tau = quantity == "tau_opt";
    let (labels, label_col): (Vec<f64>, &'static str) = match family {
        Family::OhmicityAtEta(_) => (vec![0.5, 1.0, 2.0], "s"),
        Family::CouplingAtS(_) => (vec![0.05, 0.2, 0.5], "eta"),
    };
    let rows = family_rows(&labels, &thetas, 1, |label, theta| {
        let (eta, s) = match family {
            Family::OhmicityAtEta(eta) => (eta, label),
            Family::CouplingAtS(s) => (label, s),
        };
        let o = find_optimum(eta, s, theta, quad)?;
        Ok(vec![if want_tau { o.tau_opt } else { o.q_opt }])
    });
    let fixed = match family {
        Family::OhmicityAtEta(eta) => comment("eta", eta),
        Family::CouplingAtS(s) => comment("s", s),
    };
    Dataset {
        comments: vec![
            comment("figure", id),
            fixed,
            comment(label_col, join(&labels)),
            comment("grid", "theta log [0.01, 100000] x 29"),
            comment("quantity", format!("{quantity} versus theta per {label_col}")),
        ],
        columns: vec![label_col, "theta", quantity],
        rows,
    }
}
