//! Command implementations behind the `damplab` binary: single-state
//! evolution reports, the `p0` sweep over the two maximally
//! incoherent-coherent families, and the randomized verification battery.

mod fig1;
mod verify;

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::channels::{trajectory, ChannelKind, ChannelSpec, Side};
use crate::coherence::{l1_coherence, CoherenceReport};
use crate::error::{Error, Result};
use crate::qmat::DensityMatrix4;
use crate::states::{build_named, from_json, max_coherent_qubit, random_density, NamedFamily};

pub use fig1::{cmd_fig1, fig1_csv, fig1_rows, Fig1Config, Fig1Row, FIG1_HEADER};
pub use verify::{cmd_verify, Check, VerifyConfig, VerifyReport};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VALIDATION: i32 = 2;
    pub const INVARIANT: i32 = 3;
    pub const IO: i32 = 4;
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) | Error::File { .. } => exit::IO,
        _ => exit::VALIDATION,
    }
}

/// Environment variable overriding the closed-form comparison tolerance.
pub const TOL_ENV: &str = "DAMPLAB_TOL";

/// Formats a real with 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parameters that select a state by its command-line id.
#[derive(Debug, Clone, PartialEq)]
pub struct StateRequest {
    pub id: String,
    pub p0: f64,
    pub theta0: f64,
    pub theta1: f64,
    pub seed: u64,
}

impl StateRequest {
    pub fn new(id: impl Into<String>) -> Self {
        StateRequest {
            id: id.into(),
            p0: 0.5,
            theta0: 0.0,
            theta1: 0.0,
            seed: 0,
        }
    }

    pub fn with_p0(mut self, p0: f64) -> Self {
        self.p0 = p0;
        self
    }

    /// Whether `p0` parameterizes the selected state.
    pub fn uses_p0(&self) -> bool {
        matches!(self.id.as_str(), "m1" | "m2" | "m3" | "incoco" | "coinco")
    }

    /// Resolves `m1`, `m2`, `m3`, `bell`, `incoco`, `coinco`, `random` or
    /// `file:<path>`. `incoco`/`coinco` use maximally coherent qubit parts
    /// with phases `theta0`, `theta1`.
    pub fn resolve(&self) -> Result<DensityMatrix4> {
        let p0 = self.p0;
        let family = match self.id.as_str() {
            "m1" => NamedFamily::M1 { p0 },
            "m2" => NamedFamily::M2 { p0 },
            "m3" => NamedFamily::M3 { p0 },
            "bell" => NamedFamily::BellPhiPlus,
            "incoco" => NamedFamily::IncoCo {
                p0,
                rho0: max_coherent_qubit(self.theta0),
                rho1: max_coherent_qubit(self.theta1),
            },
            "coinco" => NamedFamily::CoInco {
                p0,
                rho0: max_coherent_qubit(self.theta0),
                rho1: max_coherent_qubit(self.theta1),
            },
            "random" => return Ok(random_density(self.seed)),
            id => {
                return match id.strip_prefix("file:") {
                    Some(path) => from_json(&std::fs::read(path).map_err(Error::file(path))?),
                    None => Err(Error::UnknownState(id.to_string())),
                }
            }
        };
        build_named(&family)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Parse {
                location: "format".into(),
                message: format!("unknown format `{other}`, expected json, table or csv"),
            }),
        }
    }
}

/// One evaluated `(state, channel, n)` point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub state_id: String,
    pub p0: Option<f64>,
    pub gamma: f64,
    pub n: u32,
    pub side: Side,
    pub c_in: f64,
    pub c_iterative: f64,
    pub c_analytic: Option<f64>,
    pub c_limit: Option<f64>,
    /// `|C(both) - C(left) C(right)|`, only for two-sided runs.
    pub factorization_residual: Option<f64>,
    pub frozen: bool,
}

pub const SWEEP_HEADER: [&str; 11] = [
    "state_id",
    "p0",
    "gamma",
    "n",
    "side",
    "c_in",
    "c_iterative",
    "c_analytic",
    "c_limit",
    "factorization_residual",
    "frozen",
];

impl SweepRow {
    fn record(&self) -> Vec<String> {
        let opt = |x: Option<f64>| x.map(fmt_real).unwrap_or_default();
        vec![
            self.state_id.clone(),
            opt(self.p0),
            fmt_real(self.gamma),
            self.n.to_string(),
            self.side.as_str().to_string(),
            fmt_real(self.c_in),
            fmt_real(self.c_iterative),
            opt(self.c_analytic),
            opt(self.c_limit),
            opt(self.factorization_residual),
            self.frozen.to_string(),
        ]
    }
}

/// Output of `evolve`: the report plus one row per step.
#[derive(Debug, Clone)]
pub struct Evolution {
    pub report: CoherenceReport,
    pub rows: Vec<SweepRow>,
}

/// Evolves the requested state and collects the coherence report.
pub fn cmd_evolve(state: &StateRequest, spec: ChannelSpec) -> Result<Evolution> {
    spec.kind.validate()?;
    let rho = state.resolve()?;
    let report = CoherenceReport::build(&rho, spec)?;

    let factorization = if spec.side == Side::Both {
        let one_sided = |side| -> Result<Vec<f64>> {
            Ok(trajectory(&rho, ChannelSpec { side, ..spec })?
                .iter()
                .map(|s| l1_coherence(s.matrix()))
                .collect())
        };
        let (left, right) = (one_sided(Side::Left)?, one_sided(Side::Right)?);
        Some(
            report
                .trajectory
                .iter()
                .map(|&(n, c)| (c - left[n as usize] * right[n as usize]).abs())
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };

    let analytic_at = |n: u32| -> Result<Option<f64>> {
        match spec.kind {
            ChannelKind::AmplitudeDamping { gamma } => {
                crate::coherence::analytic_coherence_ad(&rho, gamma, spec.side, n).map(Some)
            }
            ChannelKind::PhaseDamping { .. } => Ok(None),
        }
    };
    let rows = report
        .trajectory
        .iter()
        .map(|&(n, c)| {
            Ok(SweepRow {
                state_id: state.id.clone(),
                p0: state.uses_p0().then_some(state.p0),
                gamma: spec.kind.param(),
                n,
                side: spec.side,
                c_in: report.c_in,
                c_iterative: c,
                c_analytic: analytic_at(n)?,
                c_limit: report.c_limit,
                factorization_residual: factorization.as_ref().map(|f| f[n as usize]),
                frozen: report.frozen.frozen,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Evolution { report, rows })
}

impl Evolution {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.report).expect("report serializes") + "\n"),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(SWEEP_HEADER).map_err(csv_err)?;
                for row in &self.rows {
                    w.write_record(row.record()).map_err(csv_err)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
                Ok(String::from_utf8(bytes).expect("ascii csv"))
            }
            Format::Table => {
                let r = &self.report;
                let mut s = String::new();
                let opt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.12}"));
                writeln!(s, "c_in       {:.12}", r.c_in).unwrap();
                writeln!(s, "c_analytic {}", opt(r.c_analytic)).unwrap();
                writeln!(s, "c_limit    {}", opt(r.c_limit)).unwrap();
                writeln!(
                    s,
                    "frozen     {} ({})",
                    r.frozen.frozen,
                    serde_json::to_value(r.frozen.reason).unwrap().as_str().unwrap()
                )
                .unwrap();
                writeln!(s, "{:>6}  {:>16}", "n", "coherence").unwrap();
                for (n, c) in &r.trajectory {
                    writeln!(s, "{n:>6}  {c:>16.12}").unwrap();
                }
                Ok(s)
            }
        }
    }
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// Writes `text` to `out`, or to stdout when `out` is `None`.
pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(Error::file(path))?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
