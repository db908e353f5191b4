//! Damping channels on one or both qubits, iterated `n` times.
//!
//! [`apply_n`] iterates the single-step Kraus map. [`closed_form_ad`] writes
//! the `n`-step amplitude-damping output down directly from the input
//! entries; the two agree to rounding and each is used to check the other.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{apply_kraus, c, tensor, validate_density, DensityMatrix4, Matrix, Matrix4, QubitOperator};
use crate::TOL_STRUCT;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelKind {
    AmplitudeDamping { gamma: f64 },
    PhaseDamping { lambda: f64 },
}

fn check_unit_interval(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::ParamOutOfRange { name, value })
    }
}

impl ChannelKind {
    pub fn amplitude(gamma: f64) -> Result<Self> {
        check_unit_interval("gamma", gamma).map(|gamma| ChannelKind::AmplitudeDamping { gamma })
    }

    pub fn phase(lambda: f64) -> Result<Self> {
        check_unit_interval("lambda", lambda).map(|lambda| ChannelKind::PhaseDamping { lambda })
    }

    /// Builds a channel from its short code (`ad` or `pd`).
    pub fn from_code(code: &str, param: f64) -> Result<Self> {
        match code {
            "ad" => Self::amplitude(param),
            "pd" => Self::phase(param),
            other => Err(Error::Parse {
                location: "kind".into(),
                message: format!("unknown channel `{other}`, expected `ad` or `pd`"),
            }),
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            ChannelKind::AmplitudeDamping { .. } => "ad",
            ChannelKind::PhaseDamping { .. } => "pd",
        }
    }

    pub fn param(&self) -> f64 {
        match *self {
            ChannelKind::AmplitudeDamping { gamma } => gamma,
            ChannelKind::PhaseDamping { lambda } => lambda,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ChannelKind::AmplitudeDamping { gamma } => check_unit_interval("gamma", gamma).map(drop),
            ChannelKind::PhaseDamping { lambda } => check_unit_interval("lambda", lambda).map(drop),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
    Both,
}

impl Side {
    pub const ALL: [Side; 3] = [Side::Left, Side::Right, Side::Both];

    pub fn as_str(&self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::Both => "both",
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            "both" => Ok(Side::Both),
            other => Err(Error::Parse {
                location: "side".into(),
                message: format!("unknown side `{other}`, expected left, right or both"),
            }),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawChannel {
    kind: String,
    param: f64,
    side: Side,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<u32>,
}

/// A channel acting on the chosen side(s), without repetition count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "RawChannel", try_from = "RawChannel")]
pub struct ChannelConfig {
    pub kind: ChannelKind,
    pub side: Side,
}

/// A channel applied `n` times to the chosen side(s).
///
/// Serializes as `{"kind":"ad"|"pd","param":x,"side":"left"|"right"|"both","n":k}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "RawChannel", try_from = "RawChannel")]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub side: Side,
    pub n: u32,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, side: Side, n: u32) -> Self {
        ChannelSpec { kind, side, n }
    }

    pub fn config(&self) -> ChannelConfig {
        ChannelConfig {
            kind: self.kind,
            side: self.side,
        }
    }
}

impl From<ChannelSpec> for RawChannel {
    fn from(s: ChannelSpec) -> Self {
        RawChannel {
            kind: s.kind.code().into(),
            param: s.kind.param(),
            side: s.side,
            n: Some(s.n),
        }
    }
}

impl TryFrom<RawChannel> for ChannelSpec {
    type Error = Error;

    fn try_from(raw: RawChannel) -> Result<Self> {
        let n = raw.n.ok_or_else(|| Error::Parse {
            location: "n".into(),
            message: "missing repetition count".into(),
        })?;
        Ok(ChannelSpec {
            kind: ChannelKind::from_code(&raw.kind, raw.param)?,
            side: raw.side,
            n,
        })
    }
}

impl From<ChannelConfig> for RawChannel {
    fn from(s: ChannelConfig) -> Self {
        RawChannel {
            kind: s.kind.code().into(),
            param: s.kind.param(),
            side: s.side,
            n: None,
        }
    }
}

impl TryFrom<RawChannel> for ChannelConfig {
    type Error = Error;

    fn try_from(raw: RawChannel) -> Result<Self> {
        Ok(ChannelConfig {
            kind: ChannelKind::from_code(&raw.kind, raw.param)?,
            side: raw.side,
        })
    }
}

/// The two single-qubit Kraus operators of a damping channel.
///
/// Amplitude damping: `E0 = diag(1, sqrt(1-γ))`, `E1 = [[0, sqrt(γ)], [0, 0]]`.
/// Phase damping: `K0 = diag(1, sqrt(1-λ))`, `K1 = diag(0, sqrt(λ))`.
pub fn kraus_ops(kind: ChannelKind) -> Result<(QubitOperator, QubitOperator)> {
    kind.validate()?;
    Ok(match kind {
        ChannelKind::AmplitudeDamping { gamma } => {
            let e0 = QubitOperator::diag([1.0, (1.0 - gamma).sqrt()]);
            let e1 = QubitOperator::from_real([[0.0, gamma.sqrt()], [0.0, 0.0]]);
            (e0, e1)
        }
        ChannelKind::PhaseDamping { lambda } => {
            let k0 = QubitOperator::diag([1.0, (1.0 - lambda).sqrt()]);
            let k1 = QubitOperator::diag([0.0, lambda.sqrt()]);
            (k0, k1)
        }
    })
}

/// Two-qubit Kraus operators for one application on a single side.
/// `Side::Both` has no single Kraus pair here; it is composed from the two.
fn lifted_ops(kind: ChannelKind, side: Side) -> Result<[Matrix4; 2]> {
    let (k0, k1) = kraus_ops(kind)?;
    let id = QubitOperator::identity();
    Ok(match side {
        Side::Left => [tensor(&k0, &id), tensor(&k1, &id)],
        Side::Right => [tensor(&id, &k0), tensor(&id, &k1)],
        Side::Both => unreachable!("both-sided steps are composed from left and right"),
    })
}

struct Stepper {
    left: Option<[Matrix4; 2]>,
    right: Option<[Matrix4; 2]>,
}

impl Stepper {
    fn new(kind: ChannelKind, side: Side) -> Result<Self> {
        let left = matches!(side, Side::Left | Side::Both)
            .then(|| lifted_ops(kind, Side::Left))
            .transpose()?;
        let right = matches!(side, Side::Right | Side::Both)
            .then(|| lifted_ops(kind, Side::Right))
            .transpose()?;
        Ok(Stepper { left, right })
    }

    // both-sided step = left step, then right step
    fn step(&self, rho: &DensityMatrix4) -> Result<DensityMatrix4> {
        let mut out = *rho;
        if let Some(ops) = &self.left {
            out = apply_kraus(&out, ops)?;
        }
        if let Some(ops) = &self.right {
            out = apply_kraus(&out, ops)?;
        }
        Ok(out)
    }
}

/// Applies the channel `spec.n` times by iterating the Kraus map.
pub fn apply_n(rho: &DensityMatrix4, spec: ChannelSpec) -> Result<DensityMatrix4> {
    let stepper = Stepper::new(spec.kind, spec.side)?;
    (0..spec.n).try_fold(*rho, |acc, _| stepper.step(&acc))
}

/// States after `0, 1, ..., spec.n` applications; the first entry is `rho`.
pub fn trajectory(rho: &DensityMatrix4, spec: ChannelSpec) -> Result<Vec<DensityMatrix4>> {
    let stepper = Stepper::new(spec.kind, spec.side)?;
    let mut out = Vec::with_capacity(spec.n as usize + 1);
    out.push(*rho);
    for _ in 0..spec.n {
        let next = stepper.step(out.last().expect("non-empty"))?;
        out.push(next);
    }
    Ok(out)
}

/// Powers of `q = 1 - γ` that appear in the `n`-step amplitude-damping output.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DecayFactors {
    /// `q^(n/2)`
    pub half: f64,
    /// `q^n`
    pub full: f64,
    /// `q^(3n/2)`
    pub three_half: f64,
    /// `q^(2n)`
    pub double: f64,
    /// `1 - q^n`, the population transferred to `|0>`
    pub transfer: f64,
}

impl DecayFactors {
    pub fn new(gamma: f64, n: u32) -> Result<Self> {
        check_unit_interval("gamma", gamma)?;
        let q = 1.0 - gamma;
        let n = f64::from(n);
        let full = q.powf(n);
        Ok(DecayFactors {
            half: q.powf(n / 2.0),
            full,
            three_half: q.powf(1.5 * n),
            double: q.powf(2.0 * n),
            transfer: 1.0 - full,
        })
    }
}

/// The `n`-step amplitude-damping output written entry by entry from the
/// input, without iterating the channel.
pub fn closed_form_ad(rho: &DensityMatrix4, gamma: f64, side: Side, n: u32) -> Result<DensityMatrix4> {
    let f = DecayFactors::new(gamma, n)?;
    let a = |i: usize, j: usize| rho.a(i, j);
    let (h, q, r) = (f.half, f.full, f.transfer);
    let m = match side {
        Side::Left => Matrix([
            [a(1, 1) + a(3, 3) * r, a(1, 2) + a(3, 4) * r, a(1, 3) * h, a(1, 4) * h],
            [a(2, 1) + a(4, 3) * r, a(2, 2) + a(4, 4) * r, a(2, 3) * h, a(2, 4) * h],
            [a(3, 1) * h, a(3, 2) * h, a(3, 3) * q, a(3, 4) * q],
            [a(4, 1) * h, a(4, 2) * h, a(4, 3) * q, a(4, 4) * q],
        ]),
        Side::Right => Matrix([
            [a(1, 1) + a(2, 2) * r, a(1, 2) * h, a(1, 3) + a(2, 4) * r, a(1, 4) * h],
            [a(2, 1) * h, a(2, 2) * q, a(2, 3) * h, a(2, 4) * q],
            [a(3, 1) + a(4, 2) * r, a(3, 2) * h, a(3, 3) + a(4, 4) * r, a(3, 4) * h],
            [a(4, 1) * h, a(4, 2) * q, a(4, 3) * h, a(4, 4) * q],
        ]),
        Side::Both => {
            let t = f.three_half;
            let main = Matrix([
                [
                    a(1, 1) + a(3, 3) * r,
                    (a(1, 2) + a(3, 4) * r) * h,
                    a(1, 3) * h,
                    a(1, 4) * q,
                ],
                [
                    (a(2, 1) + a(4, 3) * r) * h,
                    (a(2, 2) + a(4, 4) * r) * q,
                    a(2, 3) * q,
                    a(2, 4) * t,
                ],
                [a(3, 1) * h, a(3, 2) * q, a(3, 3) * q, a(3, 4) * t],
                [a(4, 1) * q, a(4, 2) * t, a(4, 3) * t, a(4, 4) * f.double],
            ]);
            let z = c(0.0, 0.0);
            let transferred = Matrix([
                [(a(2, 2) + a(4, 4) * r) * r, z, a(2, 4) * h * r, z],
                [z, z, z, z],
                [a(4, 2) * h * r, z, a(4, 4) * q * r, z],
                [z, z, z, z],
            ]);
            main + transferred
        }
    };
    validate_density(m, TOL_STRUCT).map_err(Error::InvalidState)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleModel {
    /// `γ = 1 - exp(-2Γt)`
    SpontaneousEmission { decay_rate: f64 },
    /// `γ = 1 - cos²(χt)`
    OscillatorCoupling { coupling: f64 },
}

/// Damping strength reached after time `t` under a physical model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaSchedule {
    pub model: ScheduleModel,
    pub t: f64,
}

pub fn gamma_from_time(sched: GammaSchedule) -> f64 {
    let t = sched.t;
    match sched.model {
        ScheduleModel::SpontaneousEmission { decay_rate } => -(-2.0 * decay_rate * t).exp_m1(),
        ScheduleModel::OscillatorCoupling { coupling } => {
            let cos = (coupling * t).cos();
            (1.0 - cos * cos).clamp(0.0, 1.0)
        }
    }
}
