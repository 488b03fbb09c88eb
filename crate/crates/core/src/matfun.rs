//! Hermitian eigendecomposition and the spectral matrix functions built on it.
//!
//! Every function here takes a Hermitian or unitary argument, so each one is
//! evaluated through an eigendecomposition `A = X·diag(E)·X†` and a scalar map
//! on `E`. Branch choices are explicit: the inverse square root keeps the
//! positive root and the logarithm keeps phases in `(−π, π)`.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::blockstruct::BlockPartition;
use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::Real;
use crate::tolerance::Tolerances;

const MAX_SWEEPS: usize = 60;

/// Eigenvalues paired with the columns of a unitary eigenvector matrix.
#[derive(Clone, Debug)]
pub struct Eigendecomposition<T: Real> {
    pub eigenvalues: Vec<T>,
    /// Columns are orthonormal eigenvectors.
    pub vectors: CMatrix<T>,
    /// Smallest `|E_m − E_n|` over `m ≠ n`; infinite for a 1×1 matrix.
    pub min_gap: T,
}

impl<T: Real> Eigendecomposition<T> {
    fn new(eigenvalues: Vec<T>, vectors: CMatrix<T>) -> Self {
        let min_gap = min_gap(&eigenvalues);
        Self {
            eigenvalues,
            vectors,
            min_gap,
        }
    }

    /// `X·diag(E)·X†`.
    pub fn reconstruct(&self) -> CMatrix<T> {
        CMatrix::from_spectral(&self.vectors, &self.eigenvalues)
    }
}

fn min_gap<T: Real>(e: &[T]) -> T {
    let mut sorted = e.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(T::infinity(), T::min)
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Eigenvalues are returned in ascending order.
pub fn hermitian_eig<T: Real>(a: &CMatrix<T>) -> Result<Eigendecomposition<T>> {
    hermitian_eig_with(a, T::check_tol())
}

pub fn hermitian_eig_with<T: Real>(a: &CMatrix<T>, hermitian_tol: T) -> Result<Eigendecomposition<T>> {
    a.ensure_hermitian(hermitian_tol)?;
    let n = a.dim();
    let mut w = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = w.frobenius_norm();
    let target = T::epsilon() * T::lit(45.0) * scale;
    let skip = T::epsilon() * T::lit(1e-2);

    let mut converged = scale == T::zero();
    for _ in 0..MAX_SWEEPS {
        if converged || w.off_diagonal_norm() <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w[(p, q)];
                let b = apq.norm();
                let app = w[(p, p)].re;
                let aqq = w[(q, q)].re;
                if b == T::zero() || b <= skip * (app.abs() + aqq.abs()) {
                    w[(p, q)] = Complex::zero();
                    w[(q, p)] = Complex::zero();
                    continue;
                }
                rotate(&mut w, &mut v, p, q, apq / b, (aqq - app) / (T::lit(2.0) * b));
            }
        }
    }
    if !converged && w.off_diagonal_norm() > target {
        return Err(Error::NoConvergence(format!(
            "Jacobi did not converge in {MAX_SWEEPS} sweeps (off-diagonal norm {:.3e})",
            w.off_diagonal_norm().as_f64()
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        w[(i, i)]
            .re
            .partial_cmp(&w[(j, j)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    let eigenvalues = order.iter().map(|&i| w[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(Eigendecomposition::new(eigenvalues, vectors))
}

/// Applies `w ← J†·w·J` and `v ← v·J` for the plane rotation that annihilates
/// `w[p][q] = |w[p][q]|·phase`, where `tau = (w[q][q] − w[p][p]) / (2|w[p][q]|)`.
fn rotate<T: Real>(w: &mut CMatrix<T>, v: &mut CMatrix<T>, p: usize, q: usize, phase: Complex<T>, tau: T) {
    let n = w.dim();
    let one = T::one();
    let sign = if tau >= T::zero() { one } else { -one };
    let t = sign / (tau.abs() + (one + tau * tau).sqrt());
    let c = one / (one + t * t).sqrt();
    let s = t * c;
    let s_ph = phase * s;
    let s_phc = phase.conj() * s;

    let column_step = |m: &mut CMatrix<T>| {
        for k in 0..n {
            let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
            m[(k, p)] = mkp * c - s_phc * mkq;
            m[(k, q)] = s_ph * mkp + mkq * c;
        }
    };
    column_step(w);
    column_step(v);
    for k in 0..n {
        let (wpk, wqk) = (w[(p, k)], w[(q, k)]);
        w[(p, k)] = wpk * c - s_ph * wqk;
        w[(q, k)] = s_phc * wpk + wqk * c;
    }
    w[(p, q)] = Complex::zero();
    w[(q, p)] = Complex::zero();
    w[(p, p)] = Complex::new(w[(p, p)].re, T::zero());
    w[(q, q)] = Complex::new(w[(q, q)].re, T::zero());
}

/// Reorders and rephases eigenvectors so that `X` is as close to `I` as the
/// block structure allows.
///
/// Each column is assigned to the block carrying most of its weight
/// `‖P_b v‖²`; inside a block, columns take the slots where their components
/// are largest (greedy, descending). Column `j` is then rephased so that
/// `X[j][j]` is real and nonnegative.
pub fn align_eigenvectors<T: Real>(
    d: &Eigendecomposition<T>,
    p: &BlockPartition,
) -> Result<Eigendecomposition<T>> {
    align_eigenvectors_with(d, p, Tolerances::default().ambiguity)
}

pub fn align_eigenvectors_with<T: Real>(
    d: &Eigendecomposition<T>,
    p: &BlockPartition,
    ambiguity: T,
) -> Result<Eigendecomposition<T>> {
    let x = &d.vectors;
    p.check_dim(x)?;
    let n = x.dim();
    let nb = p.num_blocks();

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); nb];
    for col in 0..n {
        let mut weights = vec![T::zero(); nb];
        for i in 0..n {
            weights[p.block_of(i)] = weights[p.block_of(i)] + x[(i, col)].norm_sqr();
        }
        let mut ranked: Vec<usize> = (0..nb).collect();
        ranked.sort_by(|&a, &b| {
            weights[b]
                .partial_cmp(&weights[a])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        if nb > 1 && weights[ranked[0]] - weights[ranked[1]] < ambiguity {
            return Err(Error::GaugeAmbiguity {
                column: col,
                first: weights[ranked[0]].as_f64(),
                second: weights[ranked[1]].as_f64(),
            });
        }
        members[ranked[0]].push(col);
    }
    for (b, cols) in members.iter().enumerate() {
        let expected = p.blocks()[b].len();
        if cols.len() != expected {
            return Err(Error::BlockMismatch {
                block: b,
                expected,
                found: cols.len(),
            });
        }
    }

    let mut slot_of = vec![usize::MAX; n];
    for (b, cols) in members.iter().enumerate() {
        let slots = &p.blocks()[b];
        let mut pairs: Vec<(T, usize, usize)> = cols
            .iter()
            .flat_map(|&c| slots.iter().map(move |&s| (x[(s, c)].norm_sqr(), c, s)))
            .collect();
        pairs.sort_by(|a, b| {
            b.0.partial_cmp(&a.0)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.1.cmp(&b.1))
                .then(a.2.cmp(&b.2))
        });
        let mut slot_taken = vec![false; n];
        for (_, c, s) in pairs {
            if slot_of[c] == usize::MAX && !slot_taken[s] {
                slot_of[c] = s;
                slot_taken[s] = true;
            }
        }
    }

    let mut vectors = CMatrix::zeros(n);
    let mut eigenvalues = vec![T::zero(); n];
    for (col, &slot) in slot_of.iter().enumerate() {
        let mut v = x.column(col);
        let diag = v[slot];
        let r = diag.norm();
        if r > T::zero() {
            let ph = diag.conj() / r;
            for z in v.iter_mut() {
                *z = *z * ph;
            }
            v[slot] = Complex::new(r, T::zero());
        }
        vectors.set_column(slot, &v);
        eigenvalues[slot] = d.eigenvalues[col];
    }
    Ok(Eigendecomposition::new(eigenvalues, vectors))
}

/// `A^{−1/2}` on the principal branch for Hermitian positive-definite `A`.
pub fn hpd_inv_sqrt<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    hpd_inv_sqrt_with(a, &Tolerances::default())
}

pub fn hpd_inv_sqrt_with<T: Real>(a: &CMatrix<T>, tol: &Tolerances<T>) -> Result<CMatrix<T>> {
    let eig = hermitian_eig_with(a, tol.hermitian)?;
    if let Some(&bad) = eig.eigenvalues.iter().find(|&&e| !(e > tol.eps_pd)) {
        return Err(Error::Branch(format!(
            "matrix is not positive definite: eigenvalue {:.3e} <= {:.1e}",
            bad.as_f64(),
            tol.eps_pd.as_f64()
        )));
    }
    let inv_roots: Vec<T> = eig.eigenvalues.iter().map(|&e| e.sqrt().recip()).collect();
    Ok(CMatrix::from_spectral(&eig.vectors, &inv_roots).hermitian_part())
}

/// `e^{−iS}` for Hermitian `S`.
pub fn matrix_exp_i<T: Real>(s: &CMatrix<T>) -> Result<CMatrix<T>> {
    matrix_exp_i_with(s, T::check_tol())
}

pub fn matrix_exp_i_with<T: Real>(s: &CMatrix<T>, hermitian_tol: T) -> Result<CMatrix<T>> {
    let eig = hermitian_eig_with(s, hermitian_tol)?;
    let phases: Vec<Complex<T>> = eig
        .eigenvalues
        .iter()
        .map(|&th| Complex::new(th.cos(), -th.sin()))
        .collect();
    Ok(CMatrix::from_spectral_complex(&eig.vectors, &phases))
}

/// Hermitian `S` with spectrum in `(−π, π)` such that `e^{−iS} = U`.
///
/// The eigenbasis of `U` is obtained from the Hermitian Cayley transform
/// `C = i(I − U)(I + U)^{−1}`, whose eigenvalues are `tan(θ/2)` for the
/// eigenphases `e^{iθ}` of `U`; the phases themselves are then read off as
/// `arg(v† U v)`.
pub fn unitary_log_principal<T: Real>(u: &CMatrix<T>) -> Result<CMatrix<T>> {
    unitary_log_principal_with(u, &Tolerances::default())
}

pub fn unitary_log_principal_with<T: Real>(u: &CMatrix<T>, tol: &Tolerances<T>) -> Result<CMatrix<T>> {
    let n = u.dim();
    let dev = u.unitary_deviation();
    let bound = tol.unitary * T::lit(n.max(1) as f64).sqrt();
    if !(dev <= bound) {
        return Err(Error::NotUnitary {
            deviation: dev.as_f64(),
            tol: bound.as_f64(),
        });
    }
    let id = CMatrix::identity(n);
    let near_minus_one = || {
        Error::Branch(format!(
            "unitary has an eigenvalue within {:.1e} of -1",
            tol.neg_one_cutoff.as_f64()
        ))
    };
    let inv = (&id + u)
        .inverse(tol.neg_one_cutoff * T::lit(0.1))
        .ok_or_else(near_minus_one)?;
    let cayley = (&(&id - u) * &inv).scale(Complex::i()).hermitian_part();
    let eig = hermitian_eig_with(&cayley, T::one())?;

    let mut gen = Vec::with_capacity(n);
    for k in 0..n {
        let v = eig.vectors.column(k);
        let mut rq = Complex::<T>::zero();
        for i in 0..n {
            let mut uv = Complex::zero();
            for j in 0..n {
                uv = uv + u[(i, j)] * v[j];
            }
            rq = rq + v[i].conj() * uv;
        }
        let theta = rq.arg();
        if (Complex::<T>::one() + Complex::from_polar(T::one(), theta)).norm() < tol.neg_one_cutoff {
            return Err(near_minus_one());
        }
        gen.push(-theta);
    }
    Ok(CMatrix::from_spectral(&eig.vectors, &gen).hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::generate_random_hermitian;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn dist(a: &CMatrix<f64>, b: &CMatrix<f64>) -> f64 {
        (a - b).frobenius_norm()
    }

    #[test]
    fn eig_of_diagonal() {
        let d = hermitian_eig(&CMatrix::from_real_diag(&[1.0, 2.0])).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0, 2.0]);
        assert_eq!(d.vectors, CMatrix::identity(2));
        assert_eq!(d.min_gap, 1.0);
    }

    #[test]
    fn eig_of_pauli_x() {
        let sx = CMatrix::from_row_major(vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap();
        let d = hermitian_eig(&sx).unwrap();
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-15);
        // eigenvector for −1 is ∝ (1, −1)
        let v = d.vectors.column(0);
        assert!((v[0] + v[1]).norm() < 1e-15);
        assert!((v[0].norm() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        for seed in 0..20 {
            let a = generate_random_hermitian::<f64>(8, seed, 3.0).unwrap();
            let d = hermitian_eig(&a).unwrap();
            assert!(dist(&d.reconstruct(), &a) <= 1e-12 * a.frobenius_norm());
            assert!(d.vectors.unitary_deviation() < 1e-12);
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let a = CMatrix::from_row_major(vec![c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        assert!(matches!(hermitian_eig(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn align_removes_permutation_and_phases() {
        let p = BlockPartition::contiguous(&[2, 3]).unwrap();
        let perm = [1usize, 0, 4, 2, 3];
        let x = CMatrix::from_fn(5, |i, j| {
            if i == perm[j] {
                Complex::from_polar(1.0, 0.7 * j as f64 + 0.3)
            } else {
                Complex::zero()
            }
        });
        let d = Eigendecomposition::new(vec![0.0, 1.0, 2.0, 3.0, 4.0], x);
        let a = align_eigenvectors(&d, &p).unwrap();
        assert!(dist(&a.vectors, &CMatrix::identity(5)) < 1e-15);
        assert_eq!(a.eigenvalues, vec![1.0, 0.0, 3.0, 4.0, 2.0]);
    }

    #[test]
    fn align_detects_mismatch_and_ambiguity() {
        let p = BlockPartition::contiguous(&[1, 1]).unwrap();
        // both columns dominated by block 0
        let x = CMatrix::from_row_major(vec![c(0.9f64.sqrt(), 0.), c(0.9f64.sqrt(), 0.), c(0.1f64.sqrt(), 0.), c(-(0.1f64.sqrt()), 0.)]).unwrap();
        let d = Eigendecomposition::new(vec![0.0, 1.0], x);
        assert!(matches!(align_eigenvectors(&d, &p), Err(Error::BlockMismatch { .. })));
        let h = 0.5f64.sqrt();
        let x = CMatrix::from_row_major(vec![c(h, 0.), c(h, 0.), c(h, 0.), c(-h, 0.)]).unwrap();
        let d = Eigendecomposition::new(vec![0.0, 1.0], x);
        assert!(matches!(align_eigenvectors(&d, &p), Err(Error::GaugeAmbiguity { .. })));
    }

    #[test]
    fn inv_sqrt_examples() {
        assert!(dist(&hpd_inv_sqrt(&CMatrix::<f64>::identity(3)).unwrap(), &CMatrix::identity(3)) < 1e-15);
        let r = hpd_inv_sqrt(&CMatrix::from_real_diag(&[4.0, 9.0])).unwrap();
        assert!(dist(&r, &CMatrix::from_real_diag(&[0.5, 1.0 / 3.0])) < 1e-15);
        let bad = CMatrix::from_real_diag(&[1.0, -1e-3]);
        assert!(matches!(hpd_inv_sqrt(&bad), Err(Error::Branch(_))));
    }

    #[test]
    fn exp_i_examples() {
        assert!(dist(&matrix_exp_i(&CMatrix::<f64>::zeros(3)).unwrap(), &CMatrix::identity(3)) < 1e-15);
        let h = PI / 2.0;
        let sy = CMatrix::from_row_major(vec![c(0., 0.), c(0., -h), c(0., h), c(0., 0.)]).unwrap();
        let want = CMatrix::from_row_major(vec![c(0., 0.), c(-1., 0.), c(1., 0.), c(0., 0.)]).unwrap();
        assert!(dist(&matrix_exp_i(&sy).unwrap(), &want) < 1e-15);
    }

    #[test]
    fn log_examples() {
        assert!(unitary_log_principal(&CMatrix::<f64>::identity(4)).unwrap().frobenius_norm() < 1e-15);
        let u = CMatrix::from_row_major(vec![Complex::from_polar(1.0, PI / 4.0), c(0., 0.), c(0., 0.), c(1., 0.)]).unwrap();
        let s = unitary_log_principal(&u).unwrap();
        assert!(dist(&s, &CMatrix::from_real_diag(&[-PI / 4.0, 0.0])) < 1e-14);
        let minus = CMatrix::from_real_diag(&[-1.0, 1.0]);
        assert!(matches!(unitary_log_principal(&minus), Err(Error::Branch(_))));
        let not_unitary = CMatrix::from_real_diag(&[1.1, 1.0]);
        assert!(matches!(unitary_log_principal(&not_unitary), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn single_precision_smoke() {
        let a = generate_random_hermitian::<f32>(5, 3, 1.0).unwrap();
        let d = hermitian_eig(&a).unwrap();
        assert!((&d.reconstruct() - &a).frobenius_norm() < 1e-5);
        let u = matrix_exp_i(&a).unwrap();
        let s = unitary_log_principal(&u).unwrap();
        assert!((&s - &a).frobenius_norm() < 1e-4);
    }
}
