//! Closed-form low-order coefficients, written out term by term.
//!
//! Nothing on the main code path calls into this module. It exists so the
//! generic series composition in the parent module can be checked against
//! independently typed formulas: the T₁–T₃ coefficients of the least-action
//! unitary, the s₁–s₃ generator coefficients, the Gram-matrix pieces
//! `B(X)B(X†)` and their inverse square root, and the commutator form of the
//! effective Hamiltonian through λ³. Inputs `z1, z2, z3` are the first three
//! coefficients of `Z` with `X = e^{−iZ}`.

use num_complex::Complex;

use crate::blockstruct::BlockPartition;
use crate::matrix::CMatrix;
use crate::scalar::Real;

type M<T> = CMatrix<T>;

fn cx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

fn add<T: Real>(terms: &[M<T>]) -> M<T> {
    let mut acc = M::zeros(terms[0].dim());
    for t in terms {
        acc += t;
    }
    acc
}

fn mul3<T: Real>(a: &M<T>, b: &M<T>, c: &M<T>) -> M<T> {
    &(a * b) * c
}

/// `[T₁, T₂, T₃]` of the least-action unitary.
pub fn t_coefficients<T: Real>(z1: &M<T>, z2: &M<T>, z3: &M<T>, p: &BlockPartition) -> [M<T>; 3] {
    let b = |a: &M<T>| p.project_unchecked(a);
    let (b1, b2, b3) = (b(z1), b(z2), b(z3));
    let z1sq = z1 * z1;
    let z1cu = &z1sq * z1;
    let b_z1sq = b(&z1sq);

    let t1 = (z1 - &b1).scale(cx(0.0, -1.0));

    let t2 = add(&[
        (z2 - &b2).scale(cx(0.0, -1.0)),
        z1sq.scale(cx(-0.5, 0.0)),
        (&b1 * &b1).scale(cx(-0.5, 0.0)),
        z1 * &b1,
    ]);

    let t3 = add(&[
        (z3 - &b3).scale(cx(0.0, -1.0)),
        (&z1cu - &b(&z1cu)).scale(cx(0.0, 1.0 / 6.0)),
        mul3(&b1, &b1, &b1).scale(cx(0.0, -0.5)),
        (&(z1 * z2) + &(z2 * z1)).scale(cx(-0.5, 0.0)),
        (&(&b1 * &b2) + &(&b2 * &b1)).scale(cx(-0.5, 0.0)),
        &(z1 * &b2) + &(z2 * &b1),
        (&(&b1 * &b_z1sq) + &(&b_z1sq * &b1)).scale(cx(0.0, 0.25)),
        (&(&z1sq * &b1) - &mul3(z1, &b1, &b1)).scale(cx(0.0, -0.5)),
    ]);

    [t1, t2, t3]
}

/// `[s₁, s₂, s₃]` of the least-action generator.
pub fn s_coefficients<T: Real>(z1: &M<T>, z2: &M<T>, z3: &M<T>, p: &BlockPartition) -> [M<T>; 3] {
    let b = |a: &M<T>| p.project_unchecked(a);
    let (b1, b2, b3) = (b(z1), b(z2), b(z3));
    let z1sq = z1 * z1;
    let b_z1sq = b(&z1sq);
    let b1sq = &b1 * &b1;

    let s1 = z1 - &b1;

    let s2 = &(z2 - &b2) + &z1.commutator(&b1).scale(cx(0.0, 0.5));

    let s3 = add(&[
        z3 - &b3,
        b(&(&z1sq * z1)).scale(cx(1.0 / 6.0, 0.0)),
        (&b1sq * &b1).scale(cx(1.0 / 3.0, 0.0)),
        (&z1.commutator(&b2) + &z2.commutator(&b1)).scale(cx(0.0, 0.5)),
        (&(&b1 * &b_z1sq) + &(&b_z1sq * &b1)).scale(cx(-0.25, 0.0)),
        add(&[
            &b1sq * z1,
            z1 * &b1sq,
            -&(&z1sq * &b1),
            -&(&b1 * &z1sq),
        ])
        .scale(cx(-1.0 / 12.0, 0.0)),
        (&mul3(z1, &b1, z1) - &mul3(&b1, z1, &b1)).scale(cx(-1.0 / 6.0, 0.0)),
    ]);

    [s1, s2, s3]
}

/// λ² and λ³ coefficients of `B(X)·B(X†)`; the constant term is `I` and the
/// λ¹ term vanishes.
pub fn gram_coefficients<T: Real>(z1: &M<T>, z2: &M<T>, p: &BlockPartition) -> [M<T>; 2] {
    let b = |a: &M<T>| p.project_unchecked(a);
    let (b1, b2) = (b(z1), b(z2));
    let b_z1sq = b(&(z1 * z1));
    let g2 = &(&b1 * &b1) - &b_z1sq;
    let g3 = add(&[
        -&(&b(&(z1 * z2)) + &b(&(z2 * z1))),
        &(&b1 * &b2) + &(&b2 * &b1),
        (&(&b1 * &b_z1sq) - &(&b_z1sq * &b1)).scale(cx(0.0, 0.5)),
    ]);
    [g2, g3]
}

/// λ² and λ³ coefficients of `(B(X)·B(X†))^{−1/2}`: minus one half of the
/// Gram coefficients.
pub fn gram_inv_sqrt_coefficients<T: Real>(z1: &M<T>, z2: &M<T>, p: &BlockPartition) -> [M<T>; 2] {
    let [g2, g3] = gram_coefficients(z1, z2, p);
    [g2.scale_real(T::lit(-0.5)), g3.scale_real(T::lit(-0.5))]
}

/// `[H₀, H₁', H₂', H₃']` of `e^{iS}(H₀ + λH₁)e^{−iS}` in commutator form.
pub fn h_block_coefficients<T: Real>(
    h0: &M<T>,
    h1: &M<T>,
    s1: &M<T>,
    s2: &M<T>,
    s3: &M<T>,
) -> [M<T>; 4] {
    let i = cx::<T>(0.0, 1.0);
    let c = |a: &M<T>, b: &M<T>| a.commutator(b);

    let k1 = &c(s1, h0).scale(i) + h1;

    let k2 = add(&[
        c(s2, h0).scale(i),
        c(s1, &c(s1, h0)).scale(cx(-0.5, 0.0)),
        c(s1, h1).scale(i),
    ]);

    let k3 = add(&[
        c(s3, h0).scale(i),
        c(s1, &c(s1, &c(s1, h0))).scale(cx(0.0, -1.0 / 6.0)),
        (&c(s1, &c(s2, h0)) + &c(s2, &c(s1, h0))).scale(cx(-0.5, 0.0)),
        c(s2, h1).scale(i),
        c(s1, &c(s1, h1)).scale(cx(-0.5, 0.0)),
    ]);

    [h0.clone(), k1, k2, k3]
}
