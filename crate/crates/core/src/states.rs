//! Named two-qubit state families, JSON ingestion, and seeded random states.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result, ValidationError};
use crate::qmat::{
    c, hermitian_eigenvalues, matrix_from_json, tensor, validate_density, ComplexScalar, DensityMatrix4, Matrix4,
    QubitOperator,
};
use crate::TOL_STRUCT;

/// `|+><+|`
pub fn plus() -> QubitOperator {
    QubitOperator::from_real([[0.5, 0.5], [0.5, 0.5]])
}

/// `|-><-|`
pub fn minus() -> QubitOperator {
    QubitOperator::from_real([[0.5, -0.5], [-0.5, 0.5]])
}

/// `|r><r|` with `|r> = (|0> + i|1>)/sqrt(2)`.
pub fn plus_i() -> QubitOperator {
    crate::qmat::Matrix([[c(0.5, 0.0), c(0.0, -0.5)], [c(0.0, 0.5), c(0.5, 0.0)]])
}

fn projector(i: usize) -> QubitOperator {
    let mut d = [0.0; 2];
    d[i] = 1.0;
    QubitOperator::diag(d)
}

/// The maximally coherent qubit state `(1/2)[[1, e^{iθ}], [e^{-iθ}, 1]]`.
///
/// `θ = 0` gives `|+><+|`, `θ = π` gives `|-><-|` and `θ = -π/2` gives
/// `|r><r|` (the row index carries the ket, so the `|0><1|` entry is
/// `conj(i)/2`).
pub fn max_coherent_qubit(theta: f64) -> QubitOperator {
    let z = ComplexScalar::from_polar(0.5, theta);
    crate::qmat::Matrix([[c(0.5, 0.0), z], [z.conj(), c(0.5, 0.0)]])
}

#[derive(Debug, Clone, PartialEq)]
pub enum NamedFamily {
    /// `(p0|0><0| + p1|1><1|) ⊗ |+><+|`
    M1 {
        p0: f64,
    },
    /// `p0|0><0| ⊗ |+><+| + p1|1><1| ⊗ |-><-|`
    M2 {
        p0: f64,
    },
    /// `p0|0><0| ⊗ |+><+| + p1|1><1| ⊗ |r><r|`
    M3 {
        p0: f64,
    },
    /// `p0|0><0| ⊗ rho0 + p1|1><1| ⊗ rho1`
    IncoCo {
        p0: f64,
        rho0: QubitOperator,
        rho1: QubitOperator,
    },
    /// `p0 rho0 ⊗ |0><0| + p1 rho1 ⊗ |1><1|`
    CoInco {
        p0: f64,
        rho0: QubitOperator,
        rho1: QubitOperator,
    },
    BellPhiPlus,
    /// Product of two maximally coherent qubits.
    MaxCoherentQubitPair {
        theta0: f64,
        theta1: f64,
    },
}

/// Checks that a 2x2 matrix is a qubit density matrix.
pub fn validate_qubit_density(m: &QubitOperator, tol: f64) -> Result<(), ValidationError> {
    if !m.is_finite() {
        return Err(ValidationError::NonFinite { row: 0, col: 0 });
    }
    let residual = m.hermiticity_residual();
    if residual > tol {
        return Err(ValidationError::NotHermitian { residual });
    }
    let residual = (m.trace() - c(1.0, 0.0)).norm();
    if residual > tol {
        return Err(ValidationError::NotUnitTrace { residual });
    }
    let min_eigenvalue = hermitian_eigenvalues(m)[0];
    if min_eigenvalue < -tol {
        return Err(ValidationError::NotPositive { min_eigenvalue });
    }
    Ok(())
}

fn check_p0(p0: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&p0) {
        Ok(p0)
    } else {
        Err(Error::ParamOutOfRange { name: "p0", value: p0 })
    }
}

fn inco_co(p0: f64, rho0: &QubitOperator, rho1: &QubitOperator) -> Matrix4 {
    tensor(&projector(0), rho0).scale(c(p0, 0.0)) + tensor(&projector(1), rho1).scale(c(1.0 - p0, 0.0))
}

fn co_inco(p0: f64, rho0: &QubitOperator, rho1: &QubitOperator) -> Matrix4 {
    tensor(rho0, &projector(0)).scale(c(p0, 0.0)) + tensor(rho1, &projector(1)).scale(c(1.0 - p0, 0.0))
}

pub fn build_named(family: &NamedFamily) -> Result<DensityMatrix4> {
    let m = match family {
        NamedFamily::M1 { p0 } => inco_co(check_p0(*p0)?, &plus(), &plus()),
        NamedFamily::M2 { p0 } => inco_co(check_p0(*p0)?, &plus(), &minus()),
        NamedFamily::M3 { p0 } => inco_co(check_p0(*p0)?, &plus(), &plus_i()),
        NamedFamily::IncoCo { p0, rho0, rho1 } | NamedFamily::CoInco { p0, rho0, rho1 } => {
            let p0 = check_p0(*p0)?;
            validate_qubit_density(rho0, TOL_STRUCT)?;
            validate_qubit_density(rho1, TOL_STRUCT)?;
            if matches!(family, NamedFamily::IncoCo { .. }) {
                inco_co(p0, rho0, rho1)
            } else {
                co_inco(p0, rho0, rho1)
            }
        }
        NamedFamily::BellPhiPlus => {
            let mut m = Matrix4::zeros();
            for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
                m.0[i][j] = c(0.5, 0.0);
            }
            m
        }
        NamedFamily::MaxCoherentQubitPair { theta0, theta1 } => {
            tensor(&max_coherent_qubit(*theta0), &max_coherent_qubit(*theta1))
        }
    };
    Ok(validate_density(m, TOL_STRUCT)?)
}

/// Parses and validates a state in the JSON matrix format.
pub fn from_json(text: &[u8]) -> Result<DensityMatrix4> {
    let m = matrix_from_json(text)?;
    Ok(validate_density(m, TOL_STRUCT)?)
}

/// Seeded source of random states backed by ChaCha8.
pub struct StateSampler {
    rng: ChaCha8Rng,
}

impl StateSampler {
    pub fn new(seed: u64) -> Self {
        StateSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub fn angle(&mut self) -> f64 {
        TAU * self.uniform()
    }

    /// A standard complex Gaussian, `(x + iy)/sqrt(2)` with `x, y ~ N(0, 1)`.
    pub fn complex_gaussian(&mut self) -> ComplexScalar {
        let x: f64 = self.rng.sample(StandardNormal);
        let y: f64 = self.rng.sample(StandardNormal);
        c(x, y) / 2f64.sqrt()
    }

    /// Ginibre state `G G^dag / tr(G G^dag)`.
    pub fn ginibre(&mut self) -> DensityMatrix4 {
        let mut g = Matrix4::zeros();
        g.0.iter_mut().flatten().for_each(|z| *z = self.complex_gaussian());
        let gg = g * g.adjoint();
        let tr = gg.trace().re;
        validate_density(gg.scale(c(1.0 / tr, 0.0)), TOL_STRUCT).expect("Ginibre construction is a density matrix")
    }

    /// Random qubit state with uniform population and coherence modulus
    /// uniform up to the positivity bound. `phase` fixes the argument of the
    /// `|0><1|` entry; otherwise it is uniform.
    pub fn qubit(&mut self, phase: Option<f64>) -> QubitOperator {
        let x = self.uniform();
        let bound = (x * (1.0 - x)).sqrt();
        let modulus = bound * self.uniform();
        let theta = phase.unwrap_or_else(|| self.angle());
        let z = ComplexScalar::from_polar(modulus, theta);
        crate::qmat::Matrix([[c(x, 0.0), z], [z.conj(), c(1.0 - x, 0.0)]])
    }

    /// Random incoherent-coherent state. With `aligned`, the coherent
    /// entries `a12` and `a34` share a common argument.
    pub fn inco_co(&mut self, aligned: bool) -> DensityMatrix4 {
        let p0 = self.uniform();
        let phase = aligned.then(|| self.angle());
        let rho0 = self.qubit(phase);
        let rho1 = self.qubit(phase);
        build_named(&NamedFamily::IncoCo { p0, rho0, rho1 }).expect("valid parts")
    }

    /// Random coherent-incoherent state; `aligned` shares the argument of
    /// `a13` and `a24`.
    pub fn co_inco(&mut self, aligned: bool) -> DensityMatrix4 {
        let p0 = self.uniform();
        let phase = aligned.then(|| self.angle());
        let rho0 = self.qubit(phase);
        let rho1 = self.qubit(phase);
        build_named(&NamedFamily::CoInco { p0, rho0, rho1 }).expect("valid parts")
    }

    /// Random diagonal state.
    pub fn incoherent(&mut self) -> DensityMatrix4 {
        let mut w = [0.0; 4];
        w.iter_mut().for_each(|x| *x = -(1.0 - self.uniform()).ln());
        let total: f64 = w.iter().sum();
        validate_density(Matrix4::diag(w.map(|x| x / total)), TOL_STRUCT).expect("diagonal probabilities")
    }

    /// Incoherent-coherent state with both qubit parts maximally coherent,
    /// random phases and random weight.
    pub fn max_inco_co(&mut self) -> DensityMatrix4 {
        let p0 = self.uniform();
        let rho0 = max_coherent_qubit(self.angle());
        let rho1 = max_coherent_qubit(self.angle());
        build_named(&NamedFamily::IncoCo { p0, rho0, rho1 }).expect("valid parts")
    }
}

/// Deterministic Ginibre state for `seed`.
pub fn random_density(seed: u64) -> DensityMatrix4 {
    StateSampler::new(seed).ginibre()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::{is_maximally_coherent, l1_coherence};
    use crate::structure::{classify, StateClass};
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn max_coherent_qubit_special_angles() {
        assert!(max_coherent_qubit(0.0).max_abs_diff(&plus()) < 1e-16);
        assert!(max_coherent_qubit(PI).max_abs_diff(&minus()) < 1e-16);
        assert!(max_coherent_qubit(-FRAC_PI_2).max_abs_diff(&plus_i()) < 1e-16);
        // +π/2 is the conjugate state (|0> - i|1>)/sqrt(2)
        // +π/2 gives the conjugate state (|0> - i|1>)/sqrt(2)
        let minus_i = crate::qmat::Matrix([[c(0.5, 0.0), c(0.0, 0.5)], [c(0.0, -0.5), c(0.5, 0.0)]]);
        assert!(max_coherent_qubit(FRAC_PI_2).max_abs_diff(&minus_i) < 1e-16);
    }

    #[test]
    fn max_coherent_qubit_is_rank_one_projector() {
        for theta in [0.0, 0.3, 1.2, 2.9, -1.0] {
            let m = max_coherent_qubit(theta);
            assert!((m * m).max_abs_diff(&m) < 1e-15);
            assert!(is_maximally_coherent(&m, 1e-15));
        }
    }

    #[test]
    fn m1_degenerate_mixture() {
        let rho = build_named(&NamedFamily::M1 { p0: 1.0 }).unwrap();
        assert_eq!(*rho.matrix(), tensor(&projector(0), &plus()));
    }

    #[test]
    fn m2_entries() {
        let rho = build_named(&NamedFamily::M2 { p0: 0.5 }).unwrap();
        let mut expected = Matrix4::zeros();
        for (i, j, v) in [
            (0, 0, 0.25),
            (0, 1, 0.25),
            (1, 0, 0.25),
            (1, 1, 0.25),
            (2, 2, 0.25),
            (2, 3, -0.25),
            (3, 2, -0.25),
            (3, 3, 0.25),
        ] {
            expected.0[i][j] = c(v, 0.0);
        }
        assert_eq!(*rho.matrix(), expected);
    }

    #[test]
    fn m3_phase_convention() {
        let rho = build_named(&NamedFamily::M3 { p0: 0.6 }).unwrap();
        assert!((rho.a(3, 4) - c(0.0, -0.2)).norm() < 1e-16);
        assert!((rho.a(1, 2) - c(0.3, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn incoco_matches_m1() {
        let a = build_named(&NamedFamily::IncoCo {
            p0: 0.6,
            rho0: max_coherent_qubit(0.0),
            rho1: max_coherent_qubit(0.0),
        })
        .unwrap();
        let b = build_named(&NamedFamily::M1 { p0: 0.6 }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn families_classify_and_saturate() {
        for p0 in [0.0, 0.2, 0.5, 0.9, 1.0] {
            for f in [NamedFamily::M1 { p0 }, NamedFamily::M2 { p0 }, NamedFamily::M3 { p0 }] {
                let rho = build_named(&f).unwrap();
                assert!((l1_coherence(rho.matrix()) - 1.0).abs() < 1e-15, "{f:?}");
                assert_eq!(classify(&rho, 1e-9), StateClass::IncoherentCoherent);
            }
        }
        let co = build_named(&NamedFamily::CoInco {
            p0: 0.4,
            rho0: plus(),
            rho1: minus(),
        })
        .unwrap();
        assert_eq!(classify(&co, 1e-9), StateClass::CoherentIncoherent);
        let pair = build_named(&NamedFamily::MaxCoherentQubitPair {
            theta0: 0.4,
            theta1: 2.0,
        })
        .unwrap();
        assert!(is_maximally_coherent(pair.matrix(), 1e-15));
    }

    #[test]
    fn invalid_family_parameters() {
        assert!(matches!(
            build_named(&NamedFamily::M2 { p0: 1.2 }),
            Err(Error::ParamOutOfRange { .. })
        ));
        let bad = QubitOperator::from_real([[0.5, 0.6], [0.6, 0.5]]);
        assert!(matches!(
            build_named(&NamedFamily::IncoCo {
                p0: 0.5,
                rho0: bad,
                rho1: plus()
            }),
            Err(Error::Validation(ValidationError::NotPositive { .. }))
        ));
    }

    #[test]
    fn json_ingestion() {
        let mixed = serde_json::json!({ "matrix": (0..4).map(|i| (0..4).map(|j| [if i == j { 0.25 } else { 0.0 }, 0.0]).collect::<Vec<_>>()).collect::<Vec<_>>() });
        let rho = from_json(mixed.to_string().as_bytes()).unwrap();
        assert_eq!(*rho.matrix(), Matrix4::diag([0.25; 4]));

        let bell = crate::qmat::matrix_to_json(build_named(&NamedFamily::BellPhiPlus).unwrap().matrix());
        assert!((l1_coherence(from_json(bell.as_bytes()).unwrap().matrix()) - 1.0).abs() < 1e-15);

        let heavy = crate::qmat::matrix_to_json(&Matrix4::diag([0.3; 4]));
        assert!(matches!(
            from_json(heavy.as_bytes()),
            Err(Error::Validation(ValidationError::NotUnitTrace { .. }))
        ));
    }

    #[test]
    fn random_density_contract() {
        assert_eq!(random_density(42), random_density(42));
        assert_ne!(random_density(42), random_density(43));
        for seed in 0..50 {
            let rho = random_density(seed);
            let cval = l1_coherence(rho.matrix());
            assert!((0.0..=3.0).contains(&cval));
        }
    }

    #[test]
    fn sampler_structured_states() {
        let mut s = StateSampler::new(9);
        for _ in 0..20 {
            assert!(classify(&s.inco_co(true), 1e-12).first_incoherent());
            assert!(classify(&s.co_inco(false), 1e-12).second_incoherent());
            assert_eq!(classify(&s.incoherent(), 1e-12), StateClass::Incoherent);
        }
    }
}
