//! l1-norm coherence and its closed-form evolution under amplitude damping.

use serde::Serialize;

use crate::channels::{trajectory, ChannelKind, ChannelSpec, DecayFactors, Side};
use crate::error::Result;
use crate::qmat::{DensityMatrix4, Matrix};
use crate::structure::{frozen_predicate, FrozenVerdict};
use crate::TOL_ARG;

/// Sum of the moduli of all off-diagonal entries.
pub fn l1_coherence<const N: usize>(m: &Matrix<N>) -> f64 {
    let mut sum = 0.0;
    for (i, row) in m.0.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            if i != j {
                sum += z.norm();
            }
        }
    }
    sum
}

/// Coherence after `n` amplitude-damping steps, evaluated from the input
/// entries without building the evolved matrix.
pub fn analytic_coherence_ad(rho: &DensityMatrix4, gamma: f64, side: Side, n: u32) -> Result<f64> {
    let f = DecayFactors::new(gamma, n)?;
    let a = |i, j| rho.a(i, j);
    let m = |i, j| rho.a(i, j).norm();
    let r = f.transfer;
    let c = match side {
        Side::Left => {
            2.0 * ((a(1, 2) + a(3, 4) * r).norm() + f.half * (m(1, 3) + m(1, 4) + m(2, 3) + m(2, 4) + m(3, 4) * f.half))
        }
        Side::Right => {
            2.0 * ((a(1, 3) + a(2, 4) * r).norm() + f.half * (m(1, 2) + m(1, 4) + m(2, 3) + m(3, 4) + m(2, 4) * f.half))
        }
        Side::Both => {
            2.0 * ((a(1, 2) + a(3, 4) * r).norm()
                + (a(1, 3) + a(2, 4) * r).norm()
                + (m(1, 4) + m(2, 3)) * f.half
                + (m(2, 4) + m(3, 4)) * f.full)
                * f.half
        }
    };
    Ok(c)
}

/// Limit of the amplitude-damping coherence as `n -> ∞`, from the input
/// entries.
///
/// `γ = 0` is the identity channel and returns the input coherence. For
/// `γ ∈ (0, 1]` the left limit is `2|a12 + a34|`, the right limit
/// `2|a13 + a24|`, and the two-sided limit 0.
pub fn asymptotic_coherence_ad(rho: &DensityMatrix4, side: Side, gamma: f64) -> Result<f64> {
    ChannelKind::amplitude(gamma)?;
    if gamma == 0.0 {
        return Ok(l1_coherence(rho.matrix()));
    }
    Ok(match side {
        Side::Left => 2.0 * (rho.a(1, 2) + rho.a(3, 4)).norm(),
        Side::Right => 2.0 * (rho.a(1, 3) + rho.a(2, 4)).norm(),
        Side::Both => 0.0,
    })
}

/// True iff every diagonal entry and every off-diagonal modulus equals
/// `1/d` within `tol`.
pub fn is_maximally_coherent<const N: usize>(m: &Matrix<N>, tol: f64) -> bool {
    let target = 1.0 / N as f64;
    m.0.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, z)| {
            if i == j {
                (z.re - target).abs() <= tol && z.im.abs() <= tol
            } else {
                (z.norm() - target).abs() <= tol
            }
        })
    })
}

/// Coherence of one evolution run: input value, the per-step trajectory,
/// the closed-form and asymptotic values, and the frozen verdict.
///
/// `c_analytic` and `c_limit` are only defined for amplitude damping and
/// are `None` for phase damping.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherenceReport {
    pub c_in: f64,
    pub trajectory: Vec<(u32, f64)>,
    pub c_analytic: Option<f64>,
    pub c_limit: Option<f64>,
    pub frozen: FrozenVerdict,
}

impl CoherenceReport {
    pub fn build(rho: &DensityMatrix4, spec: ChannelSpec) -> Result<Self> {
        let states = trajectory(rho, spec)?;
        let trajectory = states
            .iter()
            .zip(0u32..)
            .map(|(s, n)| (n, l1_coherence(s.matrix())))
            .collect();
        let (c_analytic, c_limit) = match spec.kind {
            ChannelKind::AmplitudeDamping { gamma } => (
                Some(analytic_coherence_ad(rho, gamma, spec.side, spec.n)?),
                Some(asymptotic_coherence_ad(rho, spec.side, gamma)?),
            ),
            ChannelKind::PhaseDamping { .. } => (None, None),
        };
        Ok(CoherenceReport {
            c_in: l1_coherence(rho.matrix()),
            trajectory,
            c_analytic,
            c_limit,
            frozen: frozen_predicate(rho, spec.kind, spec.side, TOL_ARG),
        })
    }

    /// Coherence after the last step.
    pub fn c_final(&self) -> f64 {
        self.trajectory.last().map_or(self.c_in, |&(_, c)| c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{c, Matrix4, QubitOperator};
    use crate::states::{build_named, max_coherent_qubit, random_density, NamedFamily};

    #[test]
    fn incoherent_and_saturating_states() {
        assert_eq!(l1_coherence(&Matrix4::diag([0.25; 4])), 0.0);
        let plus_plus = crate::qmat::Matrix([[c(0.25, 0.0); 4]; 4]);
        assert!((l1_coherence(&plus_plus) - 3.0).abs() < 1e-15);
        assert!(is_maximally_coherent(&plus_plus, 1e-12));
    }

    #[test]
    fn m2_has_unit_coherence() {
        let rho = build_named(&NamedFamily::M2 { p0: 0.5 }).unwrap();
        assert!((l1_coherence(rho.matrix()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn analytic_at_zero_steps() {
        for seed in 0..20 {
            let rho = random_density(seed);
            for side in Side::ALL {
                let v = analytic_coherence_ad(&rho, 0.6, side, 0).unwrap();
                assert!((v - l1_coherence(rho.matrix())).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn named_family_values() {
        // |p0 - p1(1-q^n)| + p1 q^n and sqrt(p0² + p1²(1-q^n)²) + p1 q^n at p0 = p1 = 1/2, q^n = 1/4
        let m2 = build_named(&NamedFamily::M2 { p0: 0.5 }).unwrap();
        let m3 = build_named(&NamedFamily::M3 { p0: 0.5 }).unwrap();
        assert!((analytic_coherence_ad(&m2, 0.5, Side::Left, 2).unwrap() - 0.25).abs() < 1e-15);
        assert!((analytic_coherence_ad(&m3, 0.5, Side::Left, 2).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn asymptotes() {
        let m2 = build_named(&NamedFamily::M2 { p0: 0.75 }).unwrap();
        assert!((asymptotic_coherence_ad(&m2, Side::Left, 0.5).unwrap() - 0.5).abs() < 1e-15);
        let m3 = build_named(&NamedFamily::M3 { p0: 0.6 }).unwrap();
        let expected = (0.36f64 + 0.16).sqrt();
        assert!((asymptotic_coherence_ad(&m3, Side::Left, 0.5).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.7211).abs() < 1e-4);
        let inc = crate::qmat::validate_density(Matrix4::diag([0.4, 0.3, 0.2, 0.1]), 1e-9).unwrap();
        for side in Side::ALL {
            assert_eq!(asymptotic_coherence_ad(&inc, side, 0.3).unwrap(), 0.0);
        }
        assert_eq!(asymptotic_coherence_ad(&m2, Side::Both, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn maximal_coherence_test() {
        assert!(is_maximally_coherent(&max_coherent_qubit(1.2), 1e-12));
        assert!(!is_maximally_coherent(&QubitOperator::diag([0.5, 0.5]), 1e-12));
        assert!(!is_maximally_coherent(&Matrix4::diag([0.25; 4]), 1e-12));
    }

    #[test]
    fn report_for_frozen_state() {
        let rho = build_named(&NamedFamily::M1 { p0: 0.3 }).unwrap();
        let spec = ChannelSpec::new(ChannelKind::amplitude(0.5).unwrap(), Side::Left, 10);
        let report = CoherenceReport::build(&rho, spec).unwrap();
        assert_eq!(report.trajectory.len(), 11);
        assert!(report.trajectory.iter().all(|&(_, c)| (c - 1.0).abs() < 1e-12));
        assert!(report.frozen.frozen);
        let json = serde_json::to_value(&report).unwrap();
        for key in ["c_in", "trajectory", "c_analytic", "c_limit", "frozen"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }
}
