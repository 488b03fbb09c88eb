//! Seeded random matrices.
//!
//! All randomness flows through [`Rng`], ChaCha8 seeded from a `u64`, so a
//! seed reproduces the same matrices on every platform.

use num_complex::Complex;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::blockstruct::BlockPartition;
use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::Real;

/// The crate-wide generator.
pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<T: Real>(rng: &mut Rng) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

/// Matrix of independent standard complex Gaussians.
pub fn gaussian_matrix<T: Real>(n: usize, rng: &mut Rng) -> CMatrix<T> {
    CMatrix::from_fn(n, |_, _| gaussian(rng))
}

/// GUE-style Hermitian matrix: `(G + G†)/2` from complex Gaussians, rescaled so
/// that `‖H‖_F = scale`.
pub fn random_hermitian<T: Real>(n: usize, rng: &mut Rng, scale: T) -> Result<CMatrix<T>> {
    if n < 1 {
        return Err(Error::Dimension("random matrix needs n >= 1".into()));
    }
    let g = gaussian_matrix::<T>(n, rng);
    let h = CMatrix::from_fn(n, |i, j| {
        if i == j {
            Complex::new(g[(i, i)].re, T::zero())
        } else if i < j {
            (g[(i, j)] + g[(j, i)].conj()) * T::lit(0.5)
        } else {
            (g[(j, i)] + g[(i, j)].conj()).conj() * T::lit(0.5)
        }
    });
    let norm = h.frobenius_norm();
    Ok(h.scale_real(scale / norm))
}

/// Deterministic seeded GUE matrix with `‖H‖_F = scale`.
pub fn generate_random_hermitian<T: Real>(n: usize, seed: u64, scale: T) -> Result<CMatrix<T>> {
    random_hermitian(n, &mut rng_from_seed(seed), scale)
}

/// Haar-distributed unitary: Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary<T: Real>(n: usize, rng: &mut Rng) -> CMatrix<T> {
    let g = gaussian_matrix::<T>(n, rng);
    let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        // two passes keep the columns orthonormal to rounding
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex<T> = q
                    .iter()
                    .zip(&v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi = *vi - *qi * proj;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        for vi in v.iter_mut() {
            *vi = *vi / norm;
        }
        cols.push(v);
    }
    CMatrix::from_fn(n, |i, j| cols[j][i])
}

/// Block-diagonal unitary with an independent Haar factor on each block.
pub fn random_block_unitary<T: Real>(p: &BlockPartition, rng: &mut Rng) -> CMatrix<T> {
    let mut v = CMatrix::zeros(p.n());
    for block in p.blocks() {
        let u = random_unitary::<T>(block.len(), rng);
        for (a, &i) in block.iter().enumerate() {
            for (b, &j) in block.iter().enumerate() {
                v[(i, j)] = u[(a, b)];
            }
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockstruct::off_block_norm;

    #[test]
    fn hermitian_is_deterministic_and_normalized() {
        let a = generate_random_hermitian::<f64>(6, 42, 2.5).unwrap();
        let b = generate_random_hermitian::<f64>(6, 42, 2.5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, a.adjoint());
        assert!((a.frobenius_norm() - 2.5).abs() < 1e-12);
        assert_ne!(a, generate_random_hermitian::<f64>(6, 43, 2.5).unwrap());
        assert!(generate_random_hermitian::<f64>(0, 1, 1.0).is_err());
    }

    #[test]
    fn unitaries() {
        let mut rng = rng_from_seed(7);
        let u = random_unitary::<f64>(6, &mut rng);
        assert!(u.unitary_deviation() < 1e-13);
        let p = BlockPartition::contiguous(&[3, 1, 2]).unwrap();
        let v = random_block_unitary::<f64>(&p, &mut rng);
        assert!(v.unitary_deviation() < 1e-13);
        assert_eq!(off_block_norm(&v, &p).unwrap(), 0.0);
    }
}
