//! Two-qubit filtering: collective versus local measurements.
//!
//! States are expanded in `|v_1..v_4⟩ = |00⟩, |01⟩, |10⟩, |11⟩` where the
//! first label is party A. A pure state has amplitudes `a_k`; the mixture
//! components `|u_j⟩ = Σ_k c_jk |v_k⟩` are the rows of an [`OrthonormalSet`].
//!
//! The collective error probability comes from the filtering closed form.
//! A party restricted to its own qubit must discriminate the reduced
//! operators, whose difference `Λ^A` is a 2×2 matrix with elements
//! [`LocalLambda`]. For `d = 3` both eigenvalues of `Λ^A` are non-negative,
//! so the local optimum is `1/4`: no local measurement beats guessing.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::filtering::{self, FilteringProblem};
use crate::helstrom::Ensemble;
use crate::linalg::{check_orthonormal, outer, partial_trace, ComplexMatrix, ComplexVector, Subsystem};
use crate::tolerance::Tolerances;

pub type Amplitudes = [Complex64; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn r(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    a: Amplitudes,
}

impl TwoQubitState {
    pub fn new(a: Amplitudes) -> Result<Self> {
        Self::with_tolerances(a, &Tolerances::default())
    }

    /// Requires `Σ|a_k|² = 1` within `τ_norm`; the stored amplitudes are
    /// renormalised.
    pub fn with_tolerances(a: Amplitudes, tol: &Tolerances) -> Result<Self> {
        let v = ComplexVector::new(a.to_vec())?;
        v.check_unit(tol)?;
        let n = v.norm();
        Ok(Self { a: a.map(|z| z / n) })
    }

    /// `(|01⟩ − |10⟩)/√2`.
    pub fn singlet() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self { a: [ZERO, r(s), r(-s), ZERO] }
    }

    /// Computational basis state `|v_{k+1}⟩`, `k ∈ 0..4`.
    pub fn basis(k: usize) -> Self {
        let mut a = [ZERO; 4];
        a[k] = r(1.0);
        Self { a }
    }

    pub fn amplitudes(&self) -> &Amplitudes {
        &self.a
    }

    pub fn to_vector(&self) -> ComplexVector {
        ComplexVector::new(self.a.to_vec()).expect("finite amplitudes")
    }
}

/// Between one and four orthonormal two-qubit states, stored as coefficient
/// rows `c_j = (c_j1, …, c_j4)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalSet {
    rows: Vec<Amplitudes>,
    tol: Tolerances,
}

impl OrthonormalSet {
    pub fn new(rows: Vec<Amplitudes>) -> Result<Self> {
        Self::with_tolerances(rows, Tolerances::default())
    }

    pub fn with_tolerances(rows: Vec<Amplitudes>, tol: Tolerances) -> Result<Self> {
        if rows.is_empty() || rows.len() > 4 {
            return Err(Error::InvalidParameters(format!(
                "a two-qubit orthonormal set has 1 to 4 rows, got {}",
                rows.len()
            )));
        }
        let vectors = rows.iter().map(|row| ComplexVector::new(row.to_vec())).collect::<Result<Vec<_>>>()?;
        check_orthonormal(&vectors, &tol)?;
        Ok(Self { rows, tol })
    }

    pub fn rows(&self) -> &[Amplitudes] {
        &self.rows
    }

    pub fn d(&self) -> usize {
        self.rows.len()
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn to_vectors(&self) -> Vec<ComplexVector> {
        self.rows.iter().map(|row| ComplexVector::new(row.to_vec()).expect("finite coefficients")).collect()
    }

    /// Rows completing this set to an orthonormal basis of the two-qubit
    /// space, obtained by Gram–Schmidt on the computational basis.
    pub fn completion(&self) -> Vec<Amplitudes> {
        let mut basis = self.to_vectors();
        let mut extra = Vec::new();
        while basis.len() < 4 {
            let best = (0..4)
                .map(|k| {
                    let mut v = ComplexVector::basis(4, k);
                    for _ in 0..2 {
                        for b in &basis {
                            let c = b.inner(&v);
                            v = &v - &b.scale(c);
                        }
                    }
                    v
                })
                .max_by(|x, y| x.norm().total_cmp(&y.norm()))
                .expect("four candidates");
            let v = best.normalized().expect("complement is non-trivial");
            let mut row = [ZERO; 4];
            row.copy_from_slice(v.entries());
            extra.push(row);
            basis.push(v);
        }
        extra
    }
}

/// `u_1 = |00⟩`, `u_2 = |11⟩`, `u_3 = (|01⟩ + |10⟩)/√2`.
pub fn make_symmetric_triplet() -> OrthonormalSet {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    OrthonormalSet {
        rows: vec![[r(1.0), ZERO, ZERO, ZERO], [ZERO, ZERO, ZERO, r(1.0)], [ZERO, r(s), r(s), ZERO]],
        tol: Tolerances::default(),
    }
}

/// The filtering problem `(ψ, {u_j})` embedded in the four-dimensional space.
pub fn filtering_problem(psi: &TwoQubitState, set: &OrthonormalSet) -> Result<FilteringProblem> {
    FilteringProblem::with_tolerances(psi.to_vector(), set.to_vectors(), set.tol)
}

/// Minimum error probability over all (collective) two-qubit measurements.
/// When `d = 4` the mixture is maximally mixed and the result is `1/5`.
pub fn collective_pe(psi: &TwoQubitState, set: &OrthonormalSet) -> Result<f64> {
    if set.d() == 4 {
        return Ok(0.2);
    }
    Ok(filtering::closed_form_pe(&filtering_problem(psi, set)?))
}

/// `P_E = ¼(1 − |a_2 − a_3|/√2)` for the mixture of the symmetric triplet.
pub fn symmetric_case_pe(psi: &TwoQubitState) -> f64 {
    let a = psi.amplitudes();
    (0.25 * (1.0 - (a[1] - a[2]).norm() * std::f64::consts::FRAC_1_SQRT_2)).max(0.0)
}

/// Elements `L_{m1 m2} = ⟨m1|Λ^A|m2⟩` of the reduced operator seen by one
/// party. `L10 = conj(L01)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalLambda {
    pub l00: f64,
    pub l01: Complex64,
    pub l11: f64,
    pub d: usize,
}

impl LocalLambda {
    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_rows(vec![vec![r(self.l00), self.l01], vec![self.l01.conj(), r(self.l11)]])
            .expect("2x2 matrix")
    }

    /// `L00 + L11 − (d−1)/(d+1)`.
    pub fn trace_defect(&self) -> f64 {
        let d = self.d as f64;
        self.l00 + self.l11 - (d - 1.0) / (d + 1.0)
    }
}

/// Indices `k` of `|v_k⟩` (zero based) whose `party` qubit is in state `m`.
fn party_indices(party: Subsystem, m: usize) -> [usize; 2] {
    match party {
        Subsystem::A => [2 * m, 2 * m + 1],
        Subsystem::B => [m, m + 2],
    }
}

/// Matrix elements of `Λ^X = Tr_{other}(Λ)` for the measuring party `X`,
/// written directly in terms of `a_k` and `c_jk` (prior `p1 = 1/(d+1)`).
pub fn local_lambda(psi: &TwoQubitState, set: &OrthonormalSet, party: Subsystem) -> LocalLambda {
    let d = set.d();
    let eta = 1.0 / (d as f64 + 1.0);
    let a = psi.amplitudes();
    let rows = set.rows();

    let diag = |m: usize| -> f64 {
        party_indices(party, m)
            .iter()
            .map(|&k| rows.iter().map(|c| c[k].norm_sqr()).sum::<f64>() - a[k].norm_sqr())
            .sum::<f64>()
            * eta
    };
    let off: Complex64 = party_indices(party, 0)
        .iter()
        .zip(party_indices(party, 1))
        .map(|(&k, l)| rows.iter().map(|c| c[k] * c[l].conj()).sum::<Complex64>() - a[k] * a[l].conj())
        .sum::<Complex64>()
        * eta;

    LocalLambda { l00: diag(0), l01: off, l11: diag(1), d }
}

/// `λ_{1,2} = (L00+L11)/2 ∓ √((L00−L11)²/4 + |L01|²)`, ascending.
pub fn local_eigenvalues(l: &LocalLambda) -> (f64, f64) {
    let mean = 0.5 * (l.l00 + l.l11);
    let half_gap = 0.5 * (l.l00 - l.l11);
    let radius = (half_gap * half_gap + l.l01.norm_sqr()).sqrt();
    (mean - radius, mean + radius)
}

/// `P_E^loc = (1 − |λ_1| − |λ_2|)/2` for the measuring `party`.
pub fn local_pe(psi: &TwoQubitState, set: &OrthonormalSet, party: Subsystem) -> f64 {
    let (l1, l2) = local_eigenvalues(&local_lambda(psi, set, party));
    0.5 * (1.0 - l1.abs() - l2.abs())
}

/// Reduced ensemble `(Tr_other ρ1, Tr_other ρ2)` with priors
/// `(1/(d+1), d/(d+1))`, the input a numeric local Helstrom computation needs.
pub fn reduced_ensemble(psi: &TwoQubitState, set: &OrthonormalSet, party: Subsystem) -> Result<Ensemble> {
    let d = set.d() as f64;
    let rho1 = partial_trace(&outer(&psi.to_vector()), party.other())?;
    let rho2 = set.to_vectors().iter().fold(ComplexMatrix::zeros(4), |acc, u| &acc + &outer(u)).scale_real(1.0 / d);
    let rho2 = partial_trace(&rho2, party.other())?;
    Ensemble::with_tolerances(rho1, rho2, 1.0 / (d + 1.0), d / (d + 1.0), set.tol)
}

/// For `d = 3`, the pair `(L00·L11, |L01|²)` rewritten through the completing
/// row `c_0` of the set:
///
/// ```text
/// L00·L11 = (1/16)·Σ_{k=1,2}(|c_0k|² + |a_k|²)·Σ_{k=3,4}(|c_0k|² + |a_k|²)
/// |L01|²  = (1/16)·|c_01 c*_03 + c_02 c*_04 + a_1 a*_3 + a_2 a*_4|²
/// ```
///
/// By Cauchy–Schwarz the second never exceeds the first, so both local
/// eigenvalues are non-negative. Party A only.
pub fn schwarz_form(psi: &TwoQubitState, set: &OrthonormalSet) -> Result<(f64, f64)> {
    if set.d() != 3 {
        return Err(Error::InvalidParameters(format!("the completing-row form applies to d = 3, got d = {}", set.d())));
    }
    let c0 = set.completion()[0];
    let a = psi.amplitudes();
    let block = |ks: [usize; 2]| ks.iter().map(|&k| c0[k].norm_sqr() + a[k].norm_sqr()).sum::<f64>();
    let product = block([0, 1]) * block([2, 3]) / 16.0;
    let cross =
        (c0[0] * c0[2].conj() + c0[1] * c0[3].conj() + a[0] * a[2].conj() + a[1] * a[3].conj()).norm_sqr() / 16.0;
    Ok((product, cross))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalResult {
    pub party: Subsystem,
    pub lambda: LocalLambda,
    pub eigenvalues: (f64, f64),
    pub p_error: f64,
}

impl LocalResult {
    /// `true` when the two reduced eigenvalues have opposite signs beyond
    /// `τ_eig`, i.e. a non-trivial local measurement helps.
    pub fn mixed_signs(&self, tol: &Tolerances) -> bool {
        self.eigenvalues.0 < -tol.eig && self.eigenvalues.1 > tol.eig
    }
}

pub fn local_analysis(psi: &TwoQubitState, set: &OrthonormalSet, party: Subsystem) -> LocalResult {
    let lambda = local_lambda(psi, set, party);
    let eigenvalues = local_eigenvalues(&lambda);
    LocalResult { party, lambda, eigenvalues, p_error: 0.5 * (1.0 - eigenvalues.0.abs() - eigenvalues.1.abs()) }
}
