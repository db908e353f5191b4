//! Coherence structure of two-qubit states and frozen-coherence decisions.
//!
//! A state is incoherent-coherent when it is block diagonal with respect to
//! the first qubit (`a13 = a14 = a23 = a24 = 0`), coherent-incoherent when it
//! is block diagonal with respect to the second (`a12 = a14 = a23 = a34 = 0`),
//! and incoherent when it is diagonal.
//!
//! Frozen means the coherence is unchanged for every repetition count and
//! every damping strength. The verdicts ignore the degenerate strengths 0
//! (identity channel) and 1 for amplitude damping, under which more states
//! keep their coherence.

use serde::Serialize;

use crate::channels::{ChannelConfig, ChannelKind, Side};
use crate::qmat::{ComplexScalar, DensityMatrix4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StateClass {
    Incoherent,
    IncoherentCoherent,
    CoherentIncoherent,
    GeneralCoherent,
}

impl StateClass {
    /// Diagonal in the first qubit's basis.
    pub fn first_incoherent(&self) -> bool {
        matches!(self, StateClass::Incoherent | StateClass::IncoherentCoherent)
    }

    /// Diagonal in the second qubit's basis.
    pub fn second_incoherent(&self) -> bool {
        matches!(self, StateClass::Incoherent | StateClass::CoherentIncoherent)
    }
}

pub fn classify(rho: &DensityMatrix4, tol: f64) -> StateClass {
    let small = |pairs: &[(usize, usize)]| pairs.iter().all(|&(i, j)| rho.a(i, j).norm() <= tol);
    let first = small(&[(1, 3), (1, 4), (2, 3), (2, 4)]);
    let second = small(&[(1, 2), (1, 4), (2, 3), (3, 4)]);
    match (first, second) {
        (true, true) => StateClass::Incoherent,
        (true, false) => StateClass::IncoherentCoherent,
        (false, true) => StateClass::CoherentIncoherent,
        (false, false) => StateClass::GeneralCoherent,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrozenReason {
    /// A damped subsystem carries coherence.
    SubsystemCoherent,
    /// The undamped subsystem's coherent entries point in different
    /// directions, so population transfer partially cancels them.
    ArgumentMismatch,
    Frozen,
    /// No coherence at all; trivially frozen at zero.
    IncoherentInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrozenVerdict {
    pub frozen: bool,
    pub reason: FrozenReason,
    pub channel_config: ChannelConfig,
}

/// True when `z1` and `z2` have the same argument, i.e. when
/// `|z1 + k z2| = |z1| + k |z2|` for every `k >= 0`. Vacuously true when
/// either modulus is at most `tol`.
pub fn same_argument(z1: ComplexScalar, z2: ComplexScalar, tol: f64) -> bool {
    let (m1, m2) = (z1.norm(), z2.norm());
    if m1 <= tol || m2 <= tol {
        return true;
    }
    let w = z1.conj() * z2;
    w.im.abs() <= tol * m1 * m2 && w.re >= 0.0
}

/// Decides whether the coherence of `rho` is frozen under repeated action of
/// `kind` on `side`.
///
/// Amplitude damping on the first qubit freezes exactly the
/// incoherent-coherent states whose `a12` and `a34` share an argument; on the
/// second qubit, the coherent-incoherent states with matching `a13`, `a24`.
/// Damping both qubits freezes only incoherent states. Phase damping needs
/// the damped qubits to be incoherent and nothing more.
pub fn frozen_predicate(rho: &DensityMatrix4, kind: ChannelKind, side: Side, tol: f64) -> FrozenVerdict {
    let class = classify(rho, tol);
    let verdict = |frozen, reason| FrozenVerdict {
        frozen,
        reason,
        channel_config: ChannelConfig { kind, side },
    };
    if class == StateClass::Incoherent {
        return verdict(true, FrozenReason::IncoherentInput);
    }
    let damped_incoherent = match side {
        Side::Left => class.first_incoherent(),
        Side::Right => class.second_incoherent(),
        Side::Both => false,
    };
    if !damped_incoherent {
        return verdict(false, FrozenReason::SubsystemCoherent);
    }
    if let ChannelKind::AmplitudeDamping { .. } = kind {
        let aligned = match side {
            Side::Left => same_argument(rho.a(1, 2), rho.a(3, 4), tol),
            Side::Right => same_argument(rho.a(1, 3), rho.a(2, 4), tol),
            Side::Both => unreachable!("both-sided freezing requires incoherent input"),
        };
        if !aligned {
            return verdict(false, FrozenReason::ArgumentMismatch);
        }
    }
    verdict(true, FrozenReason::Frozen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{c, validate_density, Matrix4};
    use crate::states::{build_named, NamedFamily};
    use crate::TOL_ARG;

    fn ad(g: f64) -> ChannelKind {
        ChannelKind::amplitude(g).unwrap()
    }

    #[test]
    fn classification_examples() {
        let diag = validate_density(Matrix4::diag([0.4, 0.3, 0.2, 0.1]), 1e-9).unwrap();
        assert_eq!(classify(&diag, 1e-9), StateClass::Incoherent);
        let m2 = build_named(&NamedFamily::M2 { p0: 0.5 }).unwrap();
        assert_eq!(classify(&m2, 1e-9), StateClass::IncoherentCoherent);
        let bell = build_named(&NamedFamily::BellPhiPlus).unwrap();
        assert_eq!(classify(&bell, 1e-9), StateClass::GeneralCoherent);
    }

    #[test]
    fn same_argument_examples() {
        assert!(same_argument(c(0.0, 0.0), c(-3.0, 1.0), TOL_ARG));
        assert!(same_argument(c(0.3, 0.0), c(0.1, 0.0), TOL_ARG));
        assert!(!same_argument(c(0.25, 0.0), c(-0.25, 0.0), TOL_ARG));
        assert!(same_argument(c(0.1, 0.1), c(0.3, 0.3), TOL_ARG));
        assert!(!same_argument(c(0.5, 0.0), c(0.0, 0.5), TOL_ARG));
    }

    #[test]
    fn named_family_verdicts() {
        let m1 = build_named(&NamedFamily::M1 { p0: 0.3 }).unwrap();
        let v = frozen_predicate(&m1, ad(0.5), Side::Left, TOL_ARG);
        assert!(v.frozen);
        assert_eq!(v.reason, FrozenReason::Frozen);

        let m2 = build_named(&NamedFamily::M2 { p0: 0.5 }).unwrap();
        let v = frozen_predicate(&m2, ad(0.5), Side::Left, TOL_ARG);
        assert!(!v.frozen);
        assert_eq!(v.reason, FrozenReason::ArgumentMismatch);

        // phase damping needs no argument condition
        let v = frozen_predicate(&m2, ChannelKind::phase(0.5).unwrap(), Side::Left, TOL_ARG);
        assert!(v.frozen);

        // right side damps the coherent qubit
        let v = frozen_predicate(&m2, ad(0.5), Side::Right, TOL_ARG);
        assert_eq!(v.reason, FrozenReason::SubsystemCoherent);
        let v = frozen_predicate(&m2, ad(0.5), Side::Both, TOL_ARG);
        assert_eq!(v.reason, FrozenReason::SubsystemCoherent);
    }

    #[test]
    fn incoherent_input_frozen_everywhere() {
        let diag = validate_density(Matrix4::diag([0.1, 0.2, 0.3, 0.4]), 1e-9).unwrap();
        for kind in [ad(0.3), ChannelKind::phase(0.3).unwrap()] {
            for side in Side::ALL {
                let v = frozen_predicate(&diag, kind, side, TOL_ARG);
                assert!(v.frozen);
                assert_eq!(v.reason, FrozenReason::IncoherentInput);
            }
        }
    }

    #[test]
    fn block_state_with_aligned_entries_is_frozen() {
        use crate::channels::{apply_n, ChannelSpec};
        use crate::coherence::l1_coherence;
        let mut m = Matrix4::diag([0.3, 0.3, 0.2, 0.2]);
        m.0[0][1] = c(0.2, 0.0);
        m.0[1][0] = c(0.2, 0.0);
        m.0[2][3] = c(0.1, 0.0);
        m.0[3][2] = c(0.1, 0.0);
        let rho = validate_density(m, 1e-9).unwrap();
        assert!(frozen_predicate(&rho, ad(0.3), Side::Left, TOL_ARG).frozen);
        let c_in = l1_coherence(rho.matrix());
        for gamma in [0.3, 0.7] {
            for n in 1..=10 {
                let out = apply_n(&rho, ChannelSpec::new(ad(gamma), Side::Left, n)).unwrap();
                assert!((l1_coherence(out.matrix()) - c_in).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn verdict_json() {
        let m2 = build_named(&NamedFamily::M2 { p0: 0.5 }).unwrap();
        let v = frozen_predicate(&m2, ad(0.5), Side::Left, TOL_ARG);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"frozen":false,"reason":"argument_mismatch","channel_config":{"kind":"ad","param":0.5,"side":"left"}}"#
        );
    }
}
