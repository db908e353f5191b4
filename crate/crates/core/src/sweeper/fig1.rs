use std::path::Path;

use rayon::prelude::*;

use super::{csv_err, fmt_real};
use crate::channels::{apply_n, ChannelKind, ChannelSpec, Side};
use crate::coherence::l1_coherence;
use crate::error::Result;
use crate::states::{build_named, NamedFamily};

pub const FIG1_HEADER: [&str; 5] = ["family", "gamma", "p0", "n", "coherence"];

/// Sweep of `p0` over `[0, 1]` for the `m2` and `m3` families with the
/// channel acting on the first qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Config {
    pub gammas: Vec<f64>,
    pub n: u32,
    pub p0_steps: usize,
}

impl Default for Fig1Config {
    fn default() -> Self {
        Fig1Config {
            gammas: vec![0.2, 0.5, 0.8],
            n: 2,
            p0_steps: 101,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig1Row {
    pub family: &'static str,
    pub gamma: f64,
    pub p0: f64,
    pub n: u32,
    pub coherence: f64,
}

impl Fig1Config {
    pub fn p0_grid(&self) -> Vec<f64> {
        let last = (self.p0_steps - 1) as f64;
        (0..self.p0_steps).map(|i| i as f64 / last).collect()
    }
}

/// Evaluates the sweep by iterating the channel; rows are ordered by
/// family, then `gamma`, then `p0`.
pub fn fig1_rows(cfg: &Fig1Config) -> Result<Vec<Fig1Row>> {
    if cfg.p0_steps < 2 {
        return Err(crate::Error::Parse {
            location: "p0_steps".into(),
            message: format!("need at least 2 points, got {}", cfg.p0_steps),
        });
    }
    let kinds = cfg
        .gammas
        .iter()
        .map(|&g| ChannelKind::amplitude(g))
        .collect::<Result<Vec<_>>>()?;
    let grid = cfg.p0_grid();
    let mut points = Vec::new();
    for family in ["m2", "m3"] {
        for kind in &kinds {
            for &p0 in &grid {
                points.push((family, *kind, p0));
            }
        }
    }
    points
        .into_par_iter()
        .map(|(family, kind, p0)| {
            let f = match family {
                "m2" => NamedFamily::M2 { p0 },
                _ => NamedFamily::M3 { p0 },
            };
            let rho = build_named(&f)?;
            let out = apply_n(&rho, ChannelSpec::new(kind, Side::Left, cfg.n))?;
            Ok(Fig1Row {
                family,
                gamma: kind.param(),
                p0,
                n: cfg.n,
                coherence: l1_coherence(out.matrix()),
            })
        })
        .collect()
}

/// Renders the sweep as CSV text.
pub fn fig1_csv(rows: &[Fig1Row]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(FIG1_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.family.to_string(),
            fmt_real(r.gamma),
            fmt_real(r.p0),
            r.n.to_string(),
            fmt_real(r.coherence),
        ])
        .map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| crate::Error::Io(e.into_error()))
}

/// Runs the sweep and writes the CSV to `out`.
pub fn cmd_fig1(cfg: &Fig1Config, out: &Path) -> Result<Vec<Fig1Row>> {
    let rows = fig1_rows(cfg)?;
    std::fs::write(out, fig1_csv(&rows)?).map_err(crate::Error::file(out))?;
    Ok(rows)
}
