//! Random problem instances.
//!
//! Haar-random states are normalised vectors of independent standard complex
//! Gaussians. Orthonormal sets come from Gram–Schmidt on such vectors, with a
//! re-draw whenever the residual pivot norm falls below [`PIVOT_FLOOR`].

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::helstrom::Ensemble;
use crate::linalg::{hermitian_eig, outer, ComplexMatrix, ComplexVector};
use crate::tolerance::Tolerances;

pub const PIVOT_FLOOR: f64 = 1e-8;

/// Name of the generator every seeded computation in this crate uses.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha 0.9), stream = trial index";

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexVector {
    ComplexVector::new((0..dim).map(|_| complex_gaussian(rng)).collect()).expect("finite gaussian samples")
}

pub fn haar_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexVector {
    loop {
        if let Some(v) = gaussian_vector(rng, dim).normalized() {
            return v;
        }
    }
}

/// `count` orthonormal vectors in dimension `dim`, distributed as the first
/// `count` columns of a Haar unitary.
pub fn orthonormal_set<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> Vec<ComplexVector> {
    assert!(count <= dim, "cannot fit {count} orthonormal vectors in dimension {dim}");
    let mut out: Vec<ComplexVector> = Vec::with_capacity(count);
    while out.len() < count {
        let mut v = gaussian_vector(rng, dim);
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for u in &out {
                let overlap = u.inner(&v);
                v = &v - &u.scale(overlap);
            }
        }
        if v.norm() < PIVOT_FLOOR {
            continue;
        }
        out.push(v.normalized().unwrap());
    }
    out
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let data = (0..dim * dim).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::new(dim, data).unwrap().hermitian_part()
}

/// Density operator of random rank between 1 and `dim`, built as `GG†/Tr(GG†)`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let rank = rng.random_range(1..=dim);
    let mut m = ComplexMatrix::zeros(dim);
    for _ in 0..rank {
        m = &m + &outer(&gaussian_vector(rng, dim));
    }
    let tr = m.trace().re;
    m.scale_real(1.0 / tr).hermitian_part()
}

pub fn random_ensemble<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Ensemble {
    let p1: f64 = rng.random_range(0.0..1.0);
    Ensemble::new(random_density(rng, dim), random_density(rng, dim), p1, 1.0 - p1).expect("sampled ensemble is valid")
}

/// A random two-outcome POVM `(Π1, 1 − Π1)` with `Π1 = U·diag(w)·U†`,
/// weights `w` uniform in `[0, 1]` and `U` from a random Hermitian eigenbasis.
/// A third of the draws use 0/1 weights so that projective measurements are
/// covered too.
pub fn random_povm<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> (ComplexMatrix, ComplexMatrix) {
    let basis = hermitian_eig(&random_hermitian(rng, dim), &Tolerances::default())
        .expect("random Hermitian matrix diagonalises");
    let projective = rng.random_range(0..3) == 0;
    let mut pi1 = ComplexMatrix::zeros(dim);
    for v in &basis.eigenvectors {
        let w: f64 = if projective { f64::from(u8::from(rng.random_bool(0.5))) } else { rng.random_range(0.0..=1.0) };
        pi1 = &pi1 + &outer(v).scale_real(w);
    }
    let pi1 = pi1.hermitian_part();
    let pi2 = (&ComplexMatrix::identity(dim) - &pi1).hermitian_part();
    (pi1, pi2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::check_orthonormal;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn haar_states_are_unit() {
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        for dim in 1..=8 {
            assert!((haar_state(&mut rng, dim).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn orthonormal_sets_are_orthonormal() {
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        for dim in 1..=8 {
            for count in 0..=dim {
                let set = orthonormal_set(&mut rng, dim, count);
                assert_eq!(set.len(), count);
                check_orthonormal(&set, &Tolerances::default().scaled(1e-4)).unwrap();
            }
        }
    }

    #[test]
    fn haar_mean_overlap_matches_uniform_measure() {
        // E|<0|psi>|^2 = 1/dim for the unitarily invariant measure.
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let n = 20_000;
        let mean: f64 = (0..n).map(|_| haar_state(&mut rng, 4)[0].norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean - 0.25).abs() < 0.01, "mean overlap {mean}");
    }

    #[test]
    fn sampled_povms_are_valid() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let tol = Tolerances::default();
        for dim in 2..=8 {
            let (pi1, pi2) = random_povm(&mut rng, dim);
            assert!((&pi1 + &pi2).max_abs_diff(&ComplexMatrix::identity(dim)) < 1e-12);
            assert!(hermitian_eig(&pi1, &tol).unwrap().eigenvalues[0] > -1e-12);
            assert!(hermitian_eig(&pi2, &tol).unwrap().eigenvalues[0] > -1e-12);
        }
    }
}
