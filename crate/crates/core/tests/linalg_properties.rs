use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qdiscrim::linalg::{determinant, hermitian_eig, outer, partial_trace, trace_norm, ComplexMatrix, Subsystem};
use qdiscrim::{sampling, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn random_matrix(rng: &mut ChaCha20Rng, n: usize) -> ComplexMatrix {
    let data = (0..n * n).map(|_| sampling::complex_gaussian(rng)).collect();
    ComplexMatrix::new(n, data).unwrap()
}

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.dim(), m.dim(), m.as_slice())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn eigen_residual_and_completeness(seed in any::<u64>(), n in 2usize..=8) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let h = sampling::random_hermitian(&mut rng, n);
        let e = hermitian_eig(&h, &Tolerances::default()).unwrap();
        prop_assert!(e.max_residual(&h) <= 1e-9);
        prop_assert!(e.orthonormality_deviation() <= 1e-9);
        prop_assert!(e.projector(0..n).max_abs_diff(&ComplexMatrix::identity(n)) <= 1e-9);
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let sum: f64 = e.eigenvalues.iter().sum();
        prop_assert!((sum - h.trace().re).abs() <= 1e-9 * n as f64);
    }

    #[test]
    fn trace_norm_is_absolute_spectrum_sum(seed in any::<u64>(), n in 2usize..=8) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let h = sampling::random_hermitian(&mut rng, n);
        let tol = Tolerances::default();
        let e = hermitian_eig(&h, &tol).unwrap();
        let tn = trace_norm(&h, &tol).unwrap();
        prop_assert_eq!(tn, e.eigenvalues.iter().map(|l| l.abs()).sum::<f64>());
        prop_assert!(tn >= h.trace().re.abs() - 1e-12);
    }

    #[test]
    fn partial_trace_is_linear(seed in any::<u64>(), alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let m = random_matrix(&mut rng, 4);
        let n = random_matrix(&mut rng, 4);
        for traced in [Subsystem::A, Subsystem::B] {
            let lhs = partial_trace(&(&m.scale_real(alpha) + &n.scale_real(beta)), traced).unwrap();
            let rhs = &partial_trace(&m, traced).unwrap().scale_real(alpha) + &partial_trace(&n, traced).unwrap().scale_real(beta);
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
            prop_assert!((partial_trace(&m, traced).unwrap().trace() - m.trace()).norm() <= 1e-12);
        }
    }

    #[test]
    fn determinant_is_multiplicative(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, n);
        let b = random_matrix(&mut rng, n);
        let lhs = determinant(&(&a * &b));
        let rhs = determinant(&a) * determinant(&b);
        prop_assert!((lhs - rhs).norm() <= 1e-8 * rhs.norm().max(1e-300));
    }
}

#[test]
fn eigenvalues_agree_with_nalgebra() {
    let mut rng = ChaCha20Rng::seed_from_u64(99);
    for n in 1..=8 {
        for _ in 0..20 {
            let h = sampling::random_hermitian(&mut rng, n);
            let ours = hermitian_eig(&h, &Tolerances::default()).unwrap().eigenvalues;
            let mut theirs: Vec<f64> = to_nalgebra(&h).symmetric_eigenvalues().iter().copied().collect();
            theirs.sort_by(f64::total_cmp);
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a - b).abs() < 1e-10, "n = {n}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn determinant_agrees_with_nalgebra() {
    let mut rng = ChaCha20Rng::seed_from_u64(100);
    for n in 1..=8 {
        let m = random_matrix(&mut rng, n);
        let ours = determinant(&m);
        let theirs = to_nalgebra(&m).determinant();
        assert!((ours - theirs).norm() < 1e-10 * theirs.norm().max(1.0));
    }
}

#[test]
fn jacobi_handles_degenerate_and_clustered_spectra() {
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let tol = Tolerances::default();
    let basis = hermitian_eig(&sampling::random_hermitian(&mut rng, 6), &tol).unwrap().eigenvectors;
    let spectrum = [-0.5, -0.5, 0.0, 0.0, 1e-13, 2.0];
    let m = basis.iter().zip(spectrum).fold(ComplexMatrix::zeros(6), |acc, (v, l)| &acc + &outer(v).scale_real(l));
    let e = hermitian_eig(&m, &tol).unwrap();
    for (got, want) in e.eigenvalues.iter().zip(spectrum) {
        assert!((got - want).abs() < 1e-12);
    }
    assert!(e.max_residual(&m) < 1e-12);
    assert_eq!(e.clusters().len(), 3);
}

#[test]
fn eigensolver_handles_widely_scaled_entries() {
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let mut h = sampling::random_hermitian(&mut rng, 5);
    for i in 0..5 {
        let s = 10f64.powi(2 * i as i32 - 4);
        h[(i, i)] = Complex64::new(s * rng.random_range(0.5..1.5), 0.0);
    }
    let e = hermitian_eig(&h, &Tolerances::default()).unwrap();
    assert!(e.max_residual(&h) < 1e-9 * h.frobenius_norm());
}
