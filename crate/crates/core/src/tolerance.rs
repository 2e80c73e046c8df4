//! Numerical tolerances shared by all modules.
//!
//! The defaults are sized for double precision at dimensions up to 8. A whole
//! set can be scaled uniformly with [`Tolerances::scaled`], which is what the
//! CLI `--tolerance` flag does.

use serde::{Deserialize, Serialize};

/// Hermiticity: max |M[i][j] − conj(M[j][i])|.
pub const HERMITIAN: f64 = 1e-10;
/// Unit norm, unit trace, prior normalisation.
pub const NORM: f64 = 1e-9;
/// Pairwise orthonormality of vector sets.
pub const ORTHONORMAL: f64 = 1e-9;
/// Eigen residuals and POVM completeness.
pub const RESIDUAL: f64 = 1e-9;
/// Sign decisions on eigenvalues; also the PSD slack.
pub const EIGENVALUE: f64 = 1e-10;

/// Jacobi sweeps stop once the off-diagonal Frobenius norm drops below this
/// fraction of the input's Frobenius norm.
pub const JACOBI_RELATIVE_OFF_NORM: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues closer than this are treated as one degenerate cluster when
/// spectral projectors are assembled.
pub const DEGENERACY_GAP: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub herm: f64,
    pub norm: f64,
    pub orth: f64,
    pub resid: f64,
    pub eig: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { herm: HERMITIAN, norm: NORM, orth: ORTHONORMAL, resid: RESIDUAL, eig: EIGENVALUE }
    }
}

impl Tolerances {
    /// Multiplies every tolerance by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            herm: self.herm * factor,
            norm: self.norm * factor,
            orth: self.orth * factor,
            resid: self.resid * factor,
            eig: self.eig * factor,
        }
    }

    pub fn is_valid(&self) -> bool {
        [self.herm, self.norm, self.orth, self.resid, self.eig].iter().all(|t| t.is_finite() && *t > 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_is_uniform() {
        let t = Tolerances::default().scaled(10.0);
        assert_eq!(t.herm, 1e-9);
        assert_eq!(t.norm, 1e-8);
        assert_eq!(t.eig, 1e-9);
        assert!(t.is_valid());
        assert!(!Tolerances::default().scaled(0.0).is_valid());
    }
}
