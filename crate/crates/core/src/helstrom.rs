//! Minimum-error discrimination between two density operators.
//!
//! With `Λ = p2·ρ2 − p1·ρ1 = Σ_k λ_k |φ_k⟩⟨φ_k|`, any measurement `{Π1, Π2}`
//! has error probability `p1 + Tr(ΛΠ1) = p2 − Tr(ΛΠ2)`. It is minimised by
//! projecting onto the negative eigenspace of `Λ` for outcome 1, which gives
//! `P_E = (1 − Σ_k |λ_k|)/2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix};
use crate::tolerance::Tolerances;

/// Two density operators with their prior probabilities.
///
/// Construction validates both operators (Hermitian, unit trace, PSD) and the
/// priors, so downstream operations can assume a well-formed ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    rho1: ComplexMatrix,
    rho2: ComplexMatrix,
    p1: f64,
    p2: f64,
    tol: Tolerances,
}

impl Ensemble {
    pub fn new(rho1: ComplexMatrix, rho2: ComplexMatrix, p1: f64, p2: f64) -> Result<Self> {
        Self::with_tolerances(rho1, rho2, p1, p2, Tolerances::default())
    }

    pub fn with_tolerances(
        rho1: ComplexMatrix,
        rho2: ComplexMatrix,
        p1: f64,
        p2: f64,
        tol: Tolerances,
    ) -> Result<Self> {
        if rho1.dim() != rho2.dim() {
            return Err(Error::DimensionMismatch(format!("rho1 is {0}x{0}, rho2 is {1}x{1}", rho1.dim(), rho2.dim())));
        }
        let invalid = |reason: &str| Error::InvalidPriors { p1, p2, reason: reason.into() };
        if !p1.is_finite() || !p2.is_finite() {
            return Err(invalid("priors must be finite"));
        }
        if !(0.0..=1.0).contains(&p1) || !(0.0..=1.0).contains(&p2) {
            return Err(invalid("priors must lie in [0, 1]"));
        }
        if (p1 + p2 - 1.0).abs() > tol.norm {
            return Err(invalid("priors must sum to 1"));
        }
        for (which, rho) in [("rho1", &rho1), ("rho2", &rho2)] {
            rho.check_density(&tol).map_err(|e| match e {
                Error::NotDensityOperator { reason, .. } => Error::NotDensityOperator { which: which.into(), reason },
                Error::NotHermitian { deviation, tolerance } => Error::NotDensityOperator {
                    which: which.into(),
                    reason: format!("not Hermitian (deviation {deviation:e} > {tolerance:e})"),
                },
                other => other,
            })?;
        }
        Ok(Self { rho1, rho2, p1, p2, tol })
    }

    pub fn rho1(&self) -> &ComplexMatrix {
        &self.rho1
    }

    pub fn rho2(&self) -> &ComplexMatrix {
        &self.rho2
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn dim(&self) -> usize {
        self.rho1.dim()
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// The same problem with the hypotheses relabelled.
    pub fn swapped(&self) -> Self {
        Self { rho1: self.rho2.clone(), rho2: self.rho1.clone(), p1: self.p2, p2: self.p1, tol: self.tol }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    /// Projective measurement onto the negative and non-negative eigenspaces of Λ.
    Projective,
    /// No positive eigenvalue: guessing ρ1 without measuring is optimal.
    AlwaysGuessRho1,
    /// No negative eigenvalue: guessing ρ2 without measuring is optimal.
    AlwaysGuessRho2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminationResult {
    pub p_error: f64,
    pub pi1: ComplexMatrix,
    pub pi2: ComplexMatrix,
    pub strategy: Strategy,
    /// Spectrum of Λ, ascending.
    pub spectrum: Vec<f64>,
    /// Number of eigenvalues below `-τ_eig`; they form a prefix of `spectrum`.
    pub split_index: usize,
}

/// `Λ = p2·ρ2 − p1·ρ1`.
pub fn lambda_operator(e: &Ensemble) -> ComplexMatrix {
    &e.rho2.scale_real(e.p2) - &e.rho1.scale_real(e.p1)
}

pub fn minimum_error(e: &Ensemble) -> Result<DiscriminationResult> {
    let tol = &e.tol;
    let lambda = lambda_operator(e);
    let eig = hermitian_eig(&lambda, tol)?;
    let n = e.dim();

    let split_index = eig.eigenvalues.iter().take_while(|&&l| l < -tol.eig).count();
    let has_positive = eig.eigenvalues.iter().any(|&l| l > tol.eig);
    let strategy = if split_index == 0 {
        Strategy::AlwaysGuessRho2
    } else if !has_positive {
        Strategy::AlwaysGuessRho1
    } else {
        Strategy::Projective
    };

    let pi1 = eig.projector(0..split_index);
    // zero eigenspace goes to Π2, so Π1 + Π2 = 1 holds by construction
    let pi2 = &ComplexMatrix::identity(n) - &pi1;
    let abs_sum: f64 = eig.eigenvalues.iter().map(|l| l.abs()).sum();
    let p_error = (0.5 * (1.0 - abs_sum)).max(0.0);

    Ok(DiscriminationResult { p_error, pi1, pi2, strategy, spectrum: eig.eigenvalues, split_index })
}

/// `p1·Tr(ρ1Π2) + p2·Tr(ρ2Π1)` for an arbitrary two-outcome POVM.
pub fn error_probability(e: &Ensemble, pi1: &ComplexMatrix, pi2: &ComplexMatrix) -> Result<f64> {
    check_povm(pi1, pi2, &e.tol)?;
    let err = e.p1 * (&e.rho1 * pi2).trace().re + e.p2 * (&e.rho2 * pi1).trace().re;
    Ok(err)
}

/// The two rewritings of the error probability through Λ:
/// `(p1 + Tr(ΛΠ1), p2 − Tr(ΛΠ2))`. They coincide for any valid POVM.
pub fn error_probability_via_lambda(e: &Ensemble, pi1: &ComplexMatrix, pi2: &ComplexMatrix) -> Result<(f64, f64)> {
    check_povm(pi1, pi2, &e.tol)?;
    let lambda = lambda_operator(e);
    Ok((e.p1 + (&lambda * pi1).trace().re, e.p2 - (&lambda * pi2).trace().re))
}

fn check_povm(pi1: &ComplexMatrix, pi2: &ComplexMatrix, tol: &Tolerances) -> Result<()> {
    if pi1.dim() != pi2.dim() {
        return Err(Error::NotAPovm(format!("operator dimensions {} and {} differ", pi1.dim(), pi2.dim())));
    }
    let completeness = (pi1 + pi2).max_abs_diff(&ComplexMatrix::identity(pi1.dim()));
    if completeness > tol.resid {
        return Err(Error::NotAPovm(format!("Pi1 + Pi2 deviates from identity by {completeness:e}")));
    }
    for (name, pi) in [("Pi1", pi1), ("Pi2", pi2)] {
        let eig = hermitian_eig(pi, tol).map_err(|e| Error::NotAPovm(format!("{name}: {e}")))?;
        let min = eig.eigenvalues[0];
        if min < -tol.eig {
            return Err(Error::NotAPovm(format!("{name} has negative eigenvalue {min:e}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{outer, ComplexVector};
    use crate::sampling;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn pure(v: &[f64]) -> ComplexMatrix {
        outer(&ComplexVector::from_real(v).unwrap())
    }

    #[test]
    fn lambda_examples() {
        let rho = ComplexMatrix::from_real_diagonal(&[0.25, 0.75]);
        let e = Ensemble::new(rho.clone(), rho.clone(), 0.5, 0.5).unwrap();
        assert_eq!(lambda_operator(&e), ComplexMatrix::zeros(2));

        let e = Ensemble::new(rho.clone(), pure(&[1.0, 0.0]), 1.0, 0.0).unwrap();
        assert!(lambda_operator(&e).max_abs_diff(&rho.scale_real(-1.0)) < 1e-16);
    }

    #[test]
    fn orthogonal_pure_states_are_perfectly_distinguishable() {
        let e = Ensemble::new(pure(&[1.0, 0.0]), pure(&[0.0, 1.0]), 0.5, 0.5).unwrap();
        let r = minimum_error(&e).unwrap();
        assert_abs_diff_eq!(r.p_error, 0.0, epsilon = 1e-15);
        assert_eq!(r.strategy, Strategy::Projective);
        assert_eq!(r.split_index, 1);
        assert!(r.pi1.max_abs_diff(&pure(&[1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn identical_states_guess_the_likelier_one() {
        let rho = ComplexMatrix::from_real_diagonal(&[0.3, 0.7]);
        let r = minimum_error(&Ensemble::new(rho.clone(), rho.clone(), 0.3, 0.7).unwrap()).unwrap();
        assert_abs_diff_eq!(r.p_error, 0.3, epsilon = 1e-15);
        assert_eq!(r.strategy, Strategy::AlwaysGuessRho2);
        assert_eq!(r.pi1, ComplexMatrix::zeros(2));

        let r = minimum_error(&Ensemble::new(rho.clone(), rho.clone(), 0.8, 0.2).unwrap()).unwrap();
        assert_abs_diff_eq!(r.p_error, 0.2, epsilon = 1e-15);
        assert_eq!(r.strategy, Strategy::AlwaysGuessRho1);

        let r = minimum_error(&Ensemble::new(rho.clone(), rho, 0.5, 0.5).unwrap()).unwrap();
        assert_abs_diff_eq!(r.p_error, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn pure_state_against_maximally_mixed_two_qubits() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let psi = sampling::haar_state(&mut rng, 4);
        let e = Ensemble::new(outer(&psi), ComplexMatrix::identity(4).scale_real(0.25), 0.2, 0.8).unwrap();
        let r = minimum_error(&e).unwrap();
        assert_abs_diff_eq!(r.p_error, 0.2, epsilon = 1e-12);
        assert_eq!(r.strategy, Strategy::AlwaysGuessRho2);
    }

    #[test]
    fn error_probability_trivial_povms() {
        let e = Ensemble::new(pure(&[1.0, 0.0]), ComplexMatrix::identity(2).scale_real(0.5), 0.4, 0.6).unwrap();
        let id = ComplexMatrix::identity(2);
        let zero = ComplexMatrix::zeros(2);
        assert_abs_diff_eq!(error_probability(&e, &zero, &id).unwrap(), 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(error_probability(&e, &id, &zero).unwrap(), 0.6, epsilon = 1e-15);
    }

    #[test]
    fn optimal_operators_reproduce_p_error() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for dim in 2..=6 {
            let e = sampling::random_ensemble(&mut rng, dim);
            let r = minimum_error(&e).unwrap();
            let p = error_probability(&e, &r.pi1, &r.pi2).unwrap();
            assert_abs_diff_eq!(p, r.p_error, epsilon = 1e-10);
            let (a, b) = error_probability_via_lambda(&e, &r.pi1, &r.pi2).unwrap();
            assert_abs_diff_eq!(a, r.p_error, epsilon = 1e-10);
            assert_abs_diff_eq!(b, r.p_error, epsilon = 1e-10);
        }
    }

    #[test]
    fn rejects_invalid_input() {
        let rho = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(matches!(
            Ensemble::new(rho.clone(), ComplexMatrix::identity(3).scale_real(1.0 / 3.0), 0.5, 0.5),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(Ensemble::new(rho.clone(), rho.clone(), 0.5, 0.6), Err(Error::InvalidPriors { .. })));
        assert!(matches!(Ensemble::new(rho.clone(), rho.clone(), -0.1, 1.1), Err(Error::InvalidPriors { .. })));
        let bad = ComplexMatrix::from_real_diagonal(&[1.2, -0.2]);
        match Ensemble::new(rho.clone(), bad, 0.5, 0.5) {
            Err(Error::NotDensityOperator { which, .. }) => assert_eq!(which, "rho2"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_invalid_povm() {
        let rho = ComplexMatrix::identity(2).scale_real(0.5);
        let e = Ensemble::new(rho.clone(), rho, 0.5, 0.5).unwrap();
        let id = ComplexMatrix::identity(2);
        assert!(matches!(error_probability(&e, &id, &id), Err(Error::NotAPovm(_))));
        let neg = ComplexMatrix::from_real_diagonal(&[-0.5, 0.0]);
        let comp = &id - &neg;
        assert!(matches!(error_probability(&e, &neg, &comp), Err(Error::NotAPovm(_))));
    }
}
