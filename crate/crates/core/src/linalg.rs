//! Dense complex linear algebra for the small matrices (dimension ≤ 8) used
//! throughout the crate.
//!
//! Matrices are square and stored row-major. The eigensolver is a cyclic
//! Jacobi method applying complex plane rotations directly to the Hermitian
//! input, which is accurate to round-off at these sizes and easy to audit.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Range, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::{self, Tolerances};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameters("vector must have at least one entry".into()));
        }
        if entries.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite("vector entries".into()));
        }
        Ok(Self { entries })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The `k`-th computational basis vector of dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut entries = vec![ZERO; dim];
        entries[k] = ONE;
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { entries: vec![ZERO; dim] }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.entries.iter().zip(&other.entries).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { entries: self.entries.iter().map(|z| z * factor).collect() }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        Self { entries: self.entries.iter().map(|z| z * factor).collect() }
    }

    /// Returns `self / ‖self‖`, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale_real(1.0 / n))
    }

    pub fn check_unit(&self, tol: &Tolerances) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > tol.norm {
            return Err(Error::NotNormalized { norm, tolerance: tol.norm });
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.entries[i]
    }
}

impl Add for &ComplexVector {
    type Output = ComplexVector;

    fn add(self, rhs: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        ComplexVector { entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &ComplexVector {
    type Output = ComplexVector;

    fn sub(self, rhs: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        ComplexVector { entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect() }
    }
}

/// Checks `⟨u_i|u_j⟩ = δ_ij` for every pair.
pub fn check_orthonormal(vectors: &[ComplexVector], tol: &Tolerances) -> Result<()> {
    for i in 0..vectors.len() {
        for j in i..vectors.len() {
            let expected = if i == j { ONE } else { ZERO };
            let deviation = (vectors[i].inner(&vectors[j]) - expected).norm();
            if deviation > tol.orth {
                return Err(Error::NotOrthonormal { i, j, deviation, tolerance: tol.orth });
            }
        }
    }
    Ok(())
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameters("matrix dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!("{} entries cannot form a {dim}x{dim} matrix", data.len())));
        }
        if data.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite("matrix entries".into()));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != dim) {
            return Err(Error::DimensionMismatch(format!("row {i} has {} entries, matrix has {dim} rows", row.len())));
        }
        Self::new(dim, rows.into_iter().flatten().collect())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<_> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.dim)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * factor).collect() }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * factor).collect() }
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim, v.dim(), "matrix-vector dimension mismatch");
        let entries = self.rows().map(|row| row.iter().zip(v.entries()).map(|(a, b)| a * b).sum()).collect();
        ComplexVector { entries }
    }

    /// `⟨a|M|b⟩`.
    pub fn sandwich(&self, a: &ComplexVector, b: &ComplexVector) -> Complex64 {
        a.inner(&self.mul_vec(b))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// max |M[i][j] − conj(M[j][i])|.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn check_hermitian(&self, tol: &Tolerances) -> Result<()> {
        let deviation = self.hermitian_deviation();
        if deviation > tol.herm {
            return Err(Error::NotHermitian { deviation, tolerance: tol.herm });
        }
        Ok(())
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out[(i, i)] = Complex64::new(self[(i, i)].re, 0.0);
            for j in i + 1..self.dim {
                let z = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        out
    }

    /// Validates the density-operator role: Hermitian, unit trace and
    /// positive semidefinite.
    pub fn check_density(&self, tol: &Tolerances) -> Result<()> {
        let not_density = |reason: String| Error::NotDensityOperator { which: String::new(), reason };
        self.check_hermitian(tol)?;
        let tr = self.trace().re;
        if (tr - 1.0).abs() > tol.norm {
            return Err(not_density(format!("trace {tr} differs from 1 by more than {:e}", tol.norm)));
        }
        let min = hermitian_eig(self, tol)?.eigenvalues[0];
        if min < -tol.eig {
            return Err(not_density(format!("eigenvalue {min:e} below -{:e}", tol.eig)));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `|v⟩⟨v|`, i.e. `result[i][j] = v[i]·conj(v[j])`.
pub fn outer(v: &ComplexVector) -> ComplexMatrix {
    let n = v.dim();
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = v[i] * v[j].conj();
        }
    }
    m
}

/// Eigenvalues in ascending order with index-aligned orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<ComplexVector>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Σ_{k ∈ range} |φ_k⟩⟨φ_k|`.
    pub fn projector(&self, range: Range<usize>) -> ComplexMatrix {
        let mut p = ComplexMatrix::zeros(self.dim());
        for v in &self.eigenvectors[range] {
            p = &p + &outer(v);
        }
        p
    }

    /// Index ranges of eigenvalue clusters whose neighbouring gaps are below
    /// [`tolerance::DEGENERACY_GAP`]. Only projectors onto whole clusters are
    /// basis independent.
    pub fn clusters(&self) -> Vec<Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for k in 1..=self.dim() {
            if k == self.dim() || self.eigenvalues[k] - self.eigenvalues[k - 1] >= tolerance::DEGENERACY_GAP {
                out.push(start..k);
                start = k;
            }
        }
        out
    }

    /// `Σ_k λ_k |φ_k⟩⟨φ_k|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim());
        for (lam, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            m = &m + &outer(v).scale_real(*lam);
        }
        m
    }

    /// max_k ‖M|φ_k⟩ − λ_k|φ_k⟩‖.
    pub fn max_residual(&self, m: &ComplexMatrix) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .map(|(lam, v)| (&m.mul_vec(v) - &v.scale_real(*lam)).norm())
            .fold(0.0, f64::max)
    }

    /// max_{k,l} |⟨φ_k|φ_l⟩ − δ_kl|.
    pub fn orthonormality_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for (k, a) in self.eigenvectors.iter().enumerate() {
            for (l, b) in self.eigenvectors.iter().enumerate().skip(k) {
                let expected = if k == l { ONE } else { ZERO };
                dev = dev.max((a.inner(b) - expected).norm());
            }
        }
        dev
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// The input is first replaced by its Hermitian part. Sweeps stop when the
/// off-diagonal Frobenius norm is at most `1e-12·‖M‖_F`.
pub fn hermitian_eig(m: &ComplexMatrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    m.check_hermitian(tol)?;
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = tolerance::JACOBI_RELATIVE_OFF_NORM * a.frobenius_norm();

    let mut converged = false;
    for _ in 0..tolerance::JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        let off_norm = off_diagonal_norm(&a);
        if off_norm > threshold {
            return Err(Error::NoConvergence { sweeps: tolerance::JACOBI_MAX_SWEEPS, off_norm });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep the Jacobi diagonal order
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = order.iter().map(|&k| ComplexVector { entries: (0..n).map(|i| v[(i, k)]).collect() }).collect();
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p][q]` with `A ← G†AG`, `V ← VG`, where
/// `G = diag(1, e^{-iφ})·R(θ)` on the (p, q) plane and `a[p][q] = r·e^{iφ}`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{iφ}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * r);
    let t =
        if theta.abs() > 1e150 { 0.5 / theta } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let g00 = Complex64::new(c, 0.0);
    let g01 = Complex64::new(s, 0.0);
    let g10 = -phase.conj() * s;
    let g11 = phase.conj() * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g00 + akq * g10;
        a[(k, q)] = akp * g01 + akq * g11;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g00.conj() * apk + g10.conj() * aqk;
        a[(q, k)] = g01.conj() * apk + g11.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(app - t * r, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * r, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g00 + vkq * g10;
        v[(k, q)] = vkp * g01 + vkq * g11;
    }
}

/// `Tr√(M†M)`, which for Hermitian `M` is the sum of absolute eigenvalues.
pub fn trace_norm(m: &ComplexMatrix, tol: &Tolerances) -> Result<f64> {
    Ok(hermitian_eig(m, tol)?.eigenvalues.iter().map(|l| l.abs()).sum())
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(m: &ComplexMatrix) -> Complex64 {
    let n = m.dim();
    if n == 1 {
        return m[(0, 0)];
    }
    let mut a = m.clone();
    let mut det = ONE;
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm())).unwrap();
        if a[(pivot, col)] == ZERO {
            return ZERO;
        }
        if pivot != col {
            for j in 0..n {
                let tmp = a[(col, j)];
                a[(col, j)] = a[(pivot, j)];
                a[(pivot, j)] = tmp;
            }
            det = -det;
        }
        let p = a[(col, col)];
        det *= p;
        for i in col + 1..n {
            let factor = a[(i, col)] / p;
            if factor == ZERO {
                continue;
            }
            for j in col + 1..n {
                let sub = factor * a[(col, j)];
                a[(i, j)] -= sub;
            }
        }
    }
    det
}

/// One party of a two-qubit system; the basis ordering is
/// `|00⟩, |01⟩, |10⟩, |11⟩` with the first label belonging to A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subsystem::A => "A",
            Subsystem::B => "B",
        })
    }
}

/// Partial trace of a two-qubit operator over `traced`, e.g.
/// `partial_trace(m, Subsystem::B)` is `Tr_B(m)`, an operator on A.
pub fn partial_trace(m: &ComplexMatrix, traced: Subsystem) -> Result<ComplexMatrix> {
    if m.dim() != 4 {
        return Err(Error::WrongDimension { expected: 4, actual: m.dim() });
    }
    let mut out = ComplexMatrix::zeros(2);
    for r in 0..2 {
        for c in 0..2 {
            out[(r, c)] = (0..2)
                .map(|k| match traced {
                    Subsystem::B => m[(2 * r + k, 2 * c + k)],
                    Subsystem::A => m[(2 * k + r, 2 * k + c)],
                })
                .sum();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha20Rng, n: usize) -> ComplexMatrix {
        let data = (0..n * n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        ComplexMatrix::new(n, data).unwrap()
    }

    fn random_hermitian(rng: &mut ChaCha20Rng, n: usize) -> ComplexMatrix {
        random_matrix(rng, n).hermitian_part()
    }

    #[test]
    fn identity_eigenvalues() {
        let e = hermitian_eig(&ComplexMatrix::identity(3), &Tolerances::default()).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0, 1.0]);
        assert!(e.orthonormality_deviation() < 1e-15);
    }

    #[test]
    fn pauli_x_eigenvalues() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let e = hermitian_eig(&x, &Tolerances::default()).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvalues[1], 1.0, epsilon = 1e-14);
        assert!(e.max_residual(&x) < 1e-14);
    }

    #[test]
    fn pauli_y_has_complex_eigenvectors() {
        let y = ComplexMatrix::from_rows(vec![vec![c(0., 0.), c(0., -1.)], vec![c(0., 1.), c(0., 0.)]]).unwrap();
        let e = hermitian_eig(&y, &Tolerances::default()).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvalues[1], 1.0, epsilon = 1e-14);
        assert!(e.max_residual(&y) < 1e-14);
    }

    #[test]
    fn random_six_by_six_residual() {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let h = random_hermitian(&mut rng, 6);
        let e = hermitian_eig(&h, &Tolerances::default()).unwrap();
        assert!(e.max_residual(&h) < 1e-9);
        assert!(e.orthonormality_deviation() < 1e-9);
        assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let sum: f64 = e.eigenvalues.iter().sum();
        assert_abs_diff_eq!(sum, h.trace().re, epsilon = 6e-9);
    }

    #[test]
    fn completeness_and_reconstruction() {
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        for n in 1..=8 {
            let h = random_hermitian(&mut rng, n);
            let e = hermitian_eig(&h, &Tolerances::default()).unwrap();
            assert!(e.projector(0..n).max_abs_diff(&ComplexMatrix::identity(n)) < 1e-9);
            assert!(e.reconstruct().max_abs_diff(&h) < 1e-9);
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eig(&m, &Tolerances::default()), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eig_of_zero_matrix() {
        let e = hermitian_eig(&ComplexMatrix::zeros(4), &Tolerances::default()).unwrap();
        assert!(e.eigenvalues.iter().all(|&l| l == 0.0));
    }

    #[test]
    fn degenerate_cluster_projector_is_stable() {
        // diag(1, 1, 2) rotated by a random unitary: the λ = 1 projector is
        // well defined even though its eigenvectors are not.
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let u = hermitian_eig(&random_hermitian(&mut rng, 3), &Tolerances::default()).unwrap();
        let d = ComplexMatrix::from_real_diagonal(&[1.0, 1.0, 2.0]);
        let mut m = ComplexMatrix::zeros(3);
        let mut expected = ComplexMatrix::zeros(3);
        for (k, v) in u.eigenvectors.iter().enumerate() {
            m = &m + &outer(v).scale(d[(k, k)]);
            if k < 2 {
                expected = &expected + &outer(v);
            }
        }
        let e = hermitian_eig(&m, &Tolerances::default()).unwrap();
        assert_eq!(e.clusters(), vec![0..2, 2..3]);
        assert!(e.projector(0..2).max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn trace_norm_examples() {
        let tol = Tolerances::default();
        let m = ComplexMatrix::from_real_diagonal(&[0.3, -0.2]);
        assert_abs_diff_eq!(trace_norm(&m, &tol).unwrap(), 0.5, epsilon = 1e-15);
        assert_eq!(trace_norm(&ComplexMatrix::zeros(3), &tol).unwrap(), 0.0);
    }

    #[test]
    fn trace_norm_bounds_trace() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        for n in 2..=8 {
            let h = random_hermitian(&mut rng, n);
            assert!(trace_norm(&h, &Tolerances::default()).unwrap() >= h.trace().re.abs() - 1e-12);
        }
    }

    #[test]
    fn determinant_examples() {
        for n in 1..=5 {
            assert_abs_diff_eq!(determinant(&ComplexMatrix::identity(n)).re, 1.0, epsilon = 1e-15);
        }
        let d = determinant(&ComplexMatrix::from_diagonal(&[c(2.0, 0.0), c(0.0, 3.0)]));
        assert_abs_diff_eq!(d.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.im, 6.0, epsilon = 1e-15);
        assert_eq!(determinant(&ComplexMatrix::new(1, vec![c(2.5, -1.0)]).unwrap()), c(2.5, -1.0));
        let singular = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert!(determinant(&singular).norm() < 1e-15);
    }

    #[test]
    fn determinant_gram_consistency() {
        // |det M|² = det(M†M)
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let m = random_matrix(&mut rng, 5);
        let lhs = determinant(&m).norm_sqr();
        let rhs = determinant(&(&m.adjoint() * &m));
        assert!((lhs - rhs.re).abs() < 1e-10 * lhs.max(1.0));
        assert!(rhs.im.abs() < 1e-10 * lhs.max(1.0));
        // det(M†M) is also the product of its (non-negative) eigenvalues
        let e = hermitian_eig(&(&m.adjoint() * &m).hermitian_part(), &Tolerances::default()).unwrap();
        let prod: f64 = e.eigenvalues.iter().product();
        assert!((prod - lhs).abs() < 1e-9 * lhs.max(1.0));
    }

    #[test]
    fn partial_trace_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = ComplexVector::from_real(&[s, 0.0, 0.0, s]).unwrap();
        let reduced = partial_trace(&outer(&phi), Subsystem::B).unwrap();
        assert!(reduced.max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);

        let ket01 = ComplexVector::basis(4, 1);
        let reduced = partial_trace(&outer(&ket01), Subsystem::B).unwrap();
        assert_eq!(reduced, outer(&ComplexVector::basis(2, 0)));
        let reduced = partial_trace(&outer(&ket01), Subsystem::A).unwrap();
        assert_eq!(reduced, outer(&ComplexVector::basis(2, 1)));

        let all: ComplexMatrix =
            (0..4).map(|k| outer(&ComplexVector::basis(4, k))).fold(ComplexMatrix::zeros(4), |acc, p| &acc + &p);
        assert_eq!(partial_trace(&all, Subsystem::B).unwrap(), ComplexMatrix::identity(2).scale_real(2.0));

        assert!(matches!(
            partial_trace(&ComplexMatrix::identity(3), Subsystem::B),
            Err(Error::WrongDimension { expected: 4, actual: 3 })
        ));
    }

    #[test]
    fn outer_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(
            outer(&ComplexVector::from_real(&[1.0, 0.0]).unwrap()),
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]).unwrap()
        );
        let plus = outer(&ComplexVector::from_real(&[s, s]).unwrap());
        assert!(plus.as_slice().iter().all(|z| (z - c(0.5, 0.0)).norm() < 1e-15));
        let v = ComplexVector::new(vec![c(s, 0.0), c(0.0, s)]).unwrap();
        let expected =
            ComplexMatrix::from_rows(vec![vec![c(0.5, 0.0), c(0.0, -0.5)], vec![c(0.0, 0.5), c(0.5, 0.0)]]).unwrap();
        assert!(outer(&v).max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(matches!(ComplexMatrix::new(2, vec![ZERO; 3]), Err(Error::DimensionMismatch(_))));
        assert!(matches!(ComplexMatrix::new(1, vec![c(f64::NAN, 0.0)]), Err(Error::NonFinite(_))));
        assert!(ComplexVector::new(vec![]).is_err());
        assert!(ComplexMatrix::from_rows(vec![vec![ONE, ZERO], vec![ONE]]).is_err());
    }

    #[test]
    fn density_validation() {
        let tol = Tolerances::default();
        assert!(ComplexMatrix::identity(2).scale_real(0.5).check_density(&tol).is_ok());
        assert!(ComplexMatrix::identity(2).check_density(&tol).is_err());
        assert!(ComplexMatrix::from_real_diagonal(&[1.5, -0.5]).check_density(&tol).is_err());
    }
}
