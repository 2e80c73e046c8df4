//! Pure state `|ψ⟩` against the uniform mixture `ρ2 = (1/d)·Σ_j |u_j⟩⟨u_j|` of
//! `d` orthonormal states, with prior `p1 = 1/(d+1)` on the pure state.
//!
//! Everything is governed by the squared norm `x = Σ_j |⟨u_j|ψ⟩|²` of the
//! component of `ψ` inside `span{u_j}`. The spectrum of `Λ` restricted to
//! `span{ψ, u_1..u_d}` is `{−s, s, 1, …, 1}/(d+1)` with `s = √(1 − x)`, so
//!
//! ```text
//! P_E = (1 − √(1 − x)) / (d + 1)
//! ```
//!
//! The unambiguous-filtering failure probability `Q_F = 2√x/(d+1)` is carried
//! along as a benchmark value only; no optimality claim is attached to it here.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::helstrom::Ensemble;
use crate::linalg::{check_orthonormal, outer, ComplexMatrix, ComplexVector};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct FilteringProblem {
    psi: ComplexVector,
    u: Vec<ComplexVector>,
    overlaps: Vec<Complex64>,
    parallel: ComplexVector,
    perpendicular: ComplexVector,
    parallel_norm_sq: f64,
    perpendicular_norm_sq: f64,
    tol: Tolerances,
}

impl FilteringProblem {
    pub fn new(psi: ComplexVector, u: Vec<ComplexVector>) -> Result<Self> {
        Self::with_tolerances(psi, u, Tolerances::default())
    }

    /// Validates `‖ψ‖ = 1`, `⟨u_i|u_j⟩ = δ_ij` and `d ≤ D_S`. `ψ` is
    /// renormalised after validation.
    pub fn with_tolerances(psi: ComplexVector, u: Vec<ComplexVector>, tol: Tolerances) -> Result<Self> {
        let dim = psi.dim();
        if u.is_empty() {
            return Err(Error::InvalidParameters("the mixture needs at least one component".into()));
        }
        if u.len() > dim {
            return Err(Error::DimensionMismatch(format!(
                "{} orthonormal components cannot fit in dimension {dim}",
                u.len()
            )));
        }
        if let Some((j, v)) = u.iter().enumerate().find(|(_, v)| v.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "component u_{} has dimension {}, psi has {dim}",
                j + 1,
                v.dim()
            )));
        }
        psi.check_unit(&tol)?;
        check_orthonormal(&u, &tol)?;
        let psi = psi.normalized().expect("unit vector");

        let overlaps: Vec<Complex64> = u.iter().map(|uj| uj.inner(&psi)).collect();
        let mut parallel = ComplexVector::zeros(dim);
        for (uj, c) in u.iter().zip(&overlaps) {
            parallel = &parallel + &uj.scale(*c);
        }
        let mut perpendicular = &psi - &parallel;
        // second projection pass keeps the residual orthogonal to the span
        // when ψ lies almost inside it
        for uj in &u {
            let c = uj.inner(&perpendicular);
            perpendicular = &perpendicular - &uj.scale(c);
        }
        let parallel_norm_sq = overlaps.iter().map(|c| c.norm_sqr()).sum::<f64>().clamp(0.0, 1.0);
        let perpendicular_norm_sq = perpendicular.norm_sq().clamp(0.0, 1.0);

        Ok(Self { psi, u, overlaps, parallel, perpendicular, parallel_norm_sq, perpendicular_norm_sq, tol })
    }

    pub fn psi(&self) -> &ComplexVector {
        &self.psi
    }

    pub fn components(&self) -> &[ComplexVector] {
        &self.u
    }

    /// `⟨u_j|ψ⟩` for `j = 1..d`.
    pub fn overlaps(&self) -> &[Complex64] {
        &self.overlaps
    }

    /// Number of mixture components.
    pub fn d(&self) -> usize {
        self.u.len()
    }

    /// Dimension of the state space.
    pub fn dim(&self) -> usize {
        self.psi.dim()
    }

    /// Prior of the pure state and of each mixture component, `1/(d+1)`.
    pub fn eta(&self) -> f64 {
        1.0 / (self.d() as f64 + 1.0)
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// `ψ` lies in `span{u_j}` up to `τ_norm`, i.e. `‖ψ∥‖ ≥ 1 − τ_norm`.
    pub fn is_linearly_dependent(&self) -> bool {
        self.parallel_norm_sq.sqrt() >= 1.0 - self.tol.norm
    }

    /// `√(1 − ‖ψ∥‖²)`, computed from the perpendicular residual rather than
    /// by subtraction so it stays accurate when `ψ` nearly lies in the span.
    pub fn perpendicular_norm(&self) -> f64 {
        self.perpendicular_norm_sq.sqrt()
    }

    /// The explicit ensemble `(|ψ⟩⟨ψ|, (1/d)Σ|u_j⟩⟨u_j|)` with priors
    /// `(1/(d+1), d/(d+1))`.
    pub fn ensemble(&self) -> Result<Ensemble> {
        let d = self.d() as f64;
        let rho1 = outer(&self.psi);
        let rho2 =
            self.u.iter().fold(ComplexMatrix::zeros(self.dim()), |acc, uj| &acc + &outer(uj)).scale_real(1.0 / d);
        Ensemble::with_tolerances(rho1, rho2, 1.0 / (d + 1.0), d / (d + 1.0), self.tol)
    }
}

/// `‖ψ∥‖² = Σ_j |⟨u_j|ψ⟩|²`, clamped to `[0, 1]`.
pub fn parallel_norm_sq(fp: &FilteringProblem) -> f64 {
    fp.parallel_norm_sq
}

/// The `d + 1` eigenvalues `{−s, s, 1, …, 1}/(d+1)` with `s = √(1 − ‖ψ∥‖²)`,
/// ascending.
pub fn closed_form_spectrum(fp: &FilteringProblem) -> Vec<f64> {
    let eta = fp.eta();
    let s = fp.perpendicular_norm();
    let mut out = Vec::with_capacity(fp.d() + 1);
    out.push(-s * eta);
    out.push(s * eta);
    out.extend(std::iter::repeat_n(eta, fp.d() - 1));
    out
}

/// `P_E = (1 − √(1 − ‖ψ∥‖²))/(d+1)`.
pub fn closed_form_pe(fp: &FilteringProblem) -> f64 {
    // 1 − √(1−x) = x/(1 + √(1−x)) avoids cancellation for small x
    fp.parallel_norm_sq / (1.0 + fp.perpendicular_norm()) * fp.eta()
}

/// Failure probability of optimal unambiguous filtering at equal priors,
/// `Q_F = 2‖ψ∥‖/(d+1)`. Benchmark value.
pub fn unambiguous_qf(fp: &FilteringProblem) -> f64 {
    2.0 * fp.parallel_norm_sq.sqrt() * fp.eta()
}

/// `|u_0⟩ = (ψ − ψ∥)/‖ψ − ψ∥‖`, phased so that `⟨u_0|ψ⟩ > 0`.
pub fn complete_basis_vector(fp: &FilteringProblem) -> Result<ComplexVector> {
    if fp.is_linearly_dependent() {
        return Err(Error::LinearlyDependent);
    }
    Ok(fp.perpendicular.normalized().expect("non-zero residual"))
}

/// The orthonormal basis `{u_0, u_1, …, u_d}`, or `{u_1, …, u_d}` when `ψ`
/// lies in the span.
pub fn adapted_basis(fp: &FilteringProblem) -> Vec<ComplexVector> {
    let mut basis = Vec::with_capacity(fp.d() + 1);
    if let Ok(u0) = complete_basis_vector(fp) {
        basis.push(u0);
    }
    basis.extend(fp.u.iter().cloned());
    basis
}

fn compress(op: &ComplexMatrix, basis: &[ComplexVector]) -> ComplexMatrix {
    let n = basis.len();
    let mut out = ComplexMatrix::zeros(n);
    for (a, ba) in basis.iter().enumerate() {
        let image = op.mul_vec(ba);
        for (b, bb) in basis.iter().enumerate() {
            out[(b, a)] = bb.inner(&image);
        }
    }
    out
}

/// `F(λ) = (d+1)λ·1 + |ψ⟩⟨ψ| − Σ_j |u_j⟩⟨u_j|` in the [`adapted_basis`].
/// Its determinant vanishes exactly at the eigenvalues of `Λ`.
pub fn characteristic_operator(fp: &FilteringProblem, lam: f64) -> ComplexMatrix {
    let n = fp.dim();
    let scale = (fp.d() as f64 + 1.0) * lam;
    let mut op = &ComplexMatrix::identity(n).scale_real(scale) + &outer(&fp.psi);
    for uj in &fp.u {
        op = &op - &outer(uj);
    }
    compress(&op, &adapted_basis(fp))
}

/// The pair `F1(λ) = |ψ∥⟩⟨ψ∥| + [(d+1)λ − 1]·1_d` on `span{u_1..u_d}` and
/// `F2(λ) = |ψ⟩⟨ψ| + [(d+1)λ − 1]·1_{d+1}` on `span{u_0..u_d}`, whose
/// determinants sum to `det F(λ)`.
pub fn split_operators(fp: &FilteringProblem, lam: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = fp.dim();
    let shift = (fp.d() as f64 + 1.0) * lam - 1.0;
    let shifted = ComplexMatrix::identity(n).scale_real(shift);
    let f1 = compress(&(&outer(&fp.parallel) + &shifted), &fp.u);
    let u0 = complete_basis_vector(fp)?;
    let mut basis = vec![u0];
    basis.extend(fp.u.iter().cloned());
    let f2 = compress(&(&outer(&fp.psi) + &shifted), &basis);
    Ok((f1, f2))
}

/// Closed forms of `(det F1(λ), det F2(λ))` with `t = (d+1)λ − 1`:
/// `(‖ψ∥‖² + t)·t^{d−1}` and `(t + 1)·t^d`.
pub fn split_determinants(fp: &FilteringProblem, lam: f64) -> (f64, f64) {
    let d = fp.d() as i32;
    let t = (d as f64 + 1.0) * lam - 1.0;
    ((fp.parallel_norm_sq + t) * t.powi(d - 1), (t + 1.0) * t.powi(d))
}

/// Maximum deviation between the closed-form spectrum and a numeric spectrum
/// of `Λ` on the full `D_S`-dimensional space, matched as multisets.
///
/// `Λ` carries `D_S − (d+1)` additional exact zeros when `D_S > d+1`; when
/// `D_S = d` the closed form has one surplus zero (`±s` with `s = 0`).
pub fn spectrum_deviation(closed: &[f64], numeric: &[f64]) -> f64 {
    let mut expected = closed.to_vec();
    while expected.len() < numeric.len() {
        expected.push(0.0);
    }
    while expected.len() > numeric.len() {
        let (idx, _) =
            expected.iter().enumerate().min_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).expect("non-empty spectrum");
        expected.remove(idx);
    }
    let mut got = numeric.to_vec();
    expected.sort_by(f64::total_cmp);
    got.sort_by(f64::total_cmp);
    expected.iter().zip(&got).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}
