//! Small dense complex helpers shared by every module.
//!
//! Inner products follow the physics-of-operators convention used throughout
//! the crate: `<x, y>` is linear in `x` and conjugate-linear in `y`.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use num_traits::Float;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub type C64 = Complex<f64>;
pub type CVector = DVector<C64>;
pub type CMatrix = DMatrix<C64>;

#[cfg(test)]
pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// `<x, y> = sum_i x_i conj(y_i)`.
pub fn inner(x: &CVector, y: &CVector) -> C64 {
    y.dotc(x)
}

pub fn basis_vector(dim: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[index] = ONE;
    v
}

/// Kronecker product of a list of vectors, first factor most significant.
pub fn kron_all(vectors: &[CVector]) -> CVector {
    let mut out = CVector::from_element(1, ONE);
    for v in vectors {
        out = out.kronecker(v);
    }
    out
}

/// `M[i][j] = v[i * cols + j]`.
pub fn to_matrix(v: &CVector, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |i, j| v[i * cols + j])
}

pub fn from_matrix(m: &CMatrix) -> CVector {
    let cols = m.ncols();
    CVector::from_fn(m.nrows() * cols, |idx, _| m[(idx / cols, idx % cols)])
}

/// `x y^dagger`, the operator `t_{x,y}`.
pub fn outer(x: &CVector, y: &CVector) -> CMatrix {
    x * y.adjoint()
}

/// `(x y^dagger + y x^dagger) / 2`.
pub fn hermitian_outer(x: &CVector, y: &CVector) -> CMatrix {
    let t = outer(x, y);
    (&t + t.adjoint()).scale(0.5)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn trace_norm(m: &CMatrix) -> f64 {
    m.clone().svd(false, false).singular_values.iter().sum()
}

pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values[0]
}

/// Ascending eigenvalues and matching eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, Vec<CVector>) {
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    (values, vectors)
}

/// Eigenvector of the largest eigenvalue of a Hermitian matrix.
pub fn top_eigenvector(m: &CMatrix) -> (f64, CVector) {
    let (values, mut vectors) = hermitian_eigen(m);
    let v = vectors.pop().expect("non-empty matrix");
    (values[values.len() - 1], v)
}

/// Thin SVD `m = U diag(s) V^dagger` with singular values in decreasing order.
pub struct Svd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v_t: CMatrix,
}

pub fn svd(m: &CMatrix) -> Svd {
    let d = m.clone().svd(true, true);
    Svd {
        u: d.u.expect("u requested"),
        s: d.singular_values.iter().copied().collect(),
        v_t: d.v_t.expect("v_t requested"),
    }
}

impl Svd {
    /// `U diag(profile) V^dagger`; the profile may be shorter than `s`.
    pub fn rebuild(&self, profile: &[f64]) -> CMatrix {
        let mut out = CMatrix::zeros(self.u.nrows(), self.v_t.ncols());
        for (r, &p) in profile.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let col = self.u.column(r);
            let row = self.v_t.row(r);
            out += (col * row).scale(p);
        }
        out
    }
}

/// Rotate `v` so its first component above `tol` is real and positive.
/// Returns the applied phase factor.
pub fn fix_phase(v: &mut CVector, tol: f64) -> C64 {
    let scale = v.norm().max(f64::MIN_POSITIVE);
    for i in 0..v.len() {
        let z = v[i];
        if z.norm() > tol * scale {
            let phase = z.conj() / z.norm();
            *v *= phase;
            return phase;
        }
    }
    ONE
}

/// Takagi factorization of a complex symmetric matrix, `s = sum_i sigma_i u_i u_i^T`
/// with orthonormal `u_i` and `sigma` in decreasing order.
///
/// Uses the real symmetric embedding `[[Re s, Im s], [Im s, -Re s]]`, whose
/// positive eigenpairs `(sigma, (x; y))` give `u = x + i y`.
pub fn takagi(s: &CMatrix) -> (Vec<f64>, Vec<CVector>) {
    let n = s.nrows();
    let sym = (s + s.transpose()).scale(0.5);
    let big = nalgebra::DMatrix::<f64>::from_fn(2 * n, 2 * n, |i, j| {
        let z = sym[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) => z.re,
            (false, false) => -z.re,
            _ => z.im,
        }
    });
    let eig = big.symmetric_eigen();
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for &i in order.iter().take(n) {
        let col = eig.eigenvectors.column(i);
        let u = CVector::from_fn(n, |r, _| C64::new(col[r], col[r + n]));
        let norm = u.norm();
        values.push(eig.eigenvalues[i].max(0.0));
        vectors.push(if norm > 0.0 { u.unscale(norm) } else { u });
    }
    (values, vectors)
}

/// Orthonormal-coordinate real vectorization of a Hermitian `m x m` matrix:
/// diagonal entries, then `sqrt(2) Re` and `sqrt(2) Im` of the strict upper
/// triangle in row-major order. The map is an isometry for the trace inner product.
pub fn hermitian_to_real(h: &CMatrix) -> Vec<f64> {
    let m = h.nrows();
    let mut out = Vec::with_capacity(m * m);
    for i in 0..m {
        out.push(h[(i, i)].re);
    }
    let r2 = core::f64::consts::SQRT_2;
    for i in 0..m {
        for j in i + 1..m {
            out.push(r2 * h[(i, j)].re);
            out.push(r2 * h[(i, j)].im);
        }
    }
    out
}

pub fn real_to_hermitian(v: &[f64], m: usize) -> CMatrix {
    let mut h = CMatrix::zeros(m, m);
    for i in 0..m {
        h[(i, i)] = C64::new(v[i], 0.0);
    }
    let r2 = core::f64::consts::SQRT_2;
    let mut idx = m;
    for i in 0..m {
        for j in i + 1..m {
            let z = C64::new(v[idx] / r2, v[idx + 1] / r2);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            idx += 2;
        }
    }
    h
}

/// Deterministic generator for one worker of a multistart run.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    CVector::from_fn(dim, |_, _| gaussian(rng))
}

/// Haar-distributed unit vector.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    loop {
        let v = random_vector(rng, dim);
        let n = v.norm();
        if n > 1e-12 {
            return v.unscale(n);
        }
    }
}

/// Haar-distributed unitary via QR with the diagonal phase correction.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random Hermitian matrix with unit Frobenius norm.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let h = (&g + g.adjoint()).scale(0.5);
    let n = h.norm();
    h.unscale(n)
}

/// Uniform sample from the probability simplex.
pub fn random_simplex<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..len)
        .map(|_| -Float::ln(1.0 - rng.random::<f64>()))
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// Pool-adjacent-violators projection of `w` onto non-increasing sequences.
pub fn decreasing_isotonic(w: &[f64]) -> Vec<f64> {
    // blocks of (sum, count)
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(w.len());
    for &x in w {
        blocks.push((x, 1));
        while blocks.len() >= 2 {
            let (s1, c1) = blocks[blocks.len() - 2];
            let (s2, c2) = blocks[blocks.len() - 1];
            if s1 / c1 as f64 >= s2 / c2 as f64 {
                break;
            }
            blocks.pop();
            let last = blocks.len() - 1;
            blocks[last] = (s1 + s2, c1 + c2);
        }
    }
    let mut out = Vec::with_capacity(w.len());
    for (s, c) in blocks {
        for _ in 0..c {
            out.push(s / c as f64);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_is_linear_in_first_argument() {
        let x = CVector::from_vec(alloc::vec![C64::new(0.0, 1.0), ONE]);
        let y = CVector::from_vec(alloc::vec![ONE, ZERO]);
        assert_eq!(inner(&x, &y), C64::new(0.0, 1.0));
        assert_eq!(inner(&y, &x), C64::new(0.0, -1.0));
    }

    #[test]
    fn hermitian_vectorization_is_isometric() {
        let mut rng = stream_rng(3, 0);
        let a = random_hermitian(&mut rng, 4);
        let b = random_hermitian(&mut rng, 4);
        let va = hermitian_to_real(&a);
        let vb = hermitian_to_real(&b);
        let dot: f64 = va.iter().zip(&vb).map(|(x, y)| x * y).sum();
        let tr = (&a * &b).trace().re;
        assert!((dot - tr).abs() < 1e-12);
        let back = real_to_hermitian(&va, 4);
        assert!(max_abs(&(back - a)) < 1e-14);
    }

    #[test]
    fn isotonic_pools_violators() {
        let out = decreasing_isotonic(&[3.0, 1.0, 2.0]);
        assert_eq!(out, alloc::vec![3.0, 1.5, 1.5]);
        assert_eq!(decreasing_isotonic(&[1.0, 2.0]), alloc::vec![1.5, 1.5]);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = stream_rng(9, 1);
        let u = random_unitary(&mut rng, 5);
        let eye = CMatrix::identity(5, 5);
        assert!(max_abs(&(u.adjoint() * &u - eye)) < 1e-12);
    }

    #[test]
    fn takagi_reconstructs_symmetric_matrix() {
        let mut rng = stream_rng(5, 2);
        let g = CMatrix::from_fn(4, 4, |_, _| gaussian(&mut rng));
        let s = &g + g.transpose();
        let (sigma, us) = takagi(&s);
        let mut rebuilt = CMatrix::zeros(4, 4);
        for (v, u) in sigma.iter().zip(&us) {
            rebuilt += (u * u.transpose()).scale(*v);
        }
        assert!(max_abs(&(rebuilt - &s)) < 1e-10);
        assert!((sigma[0] - op_norm(&s)).abs() < 1e-10);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(factorial(3), 6);
    }
}
