//! Dense multilinear algebra on `(C^n)^{⊗k}`.
//!
//! Multi-indices are flattened row-major: `(i_1, ..., i_k)` sits at
//! `i_1 n^{k-1} + ... + i_k`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{inner, kron_all, outer, CMatrix, CVector, C64, ONE};

pub const STATE_NORM_TOL: f64 = 1e-12;
pub const DENSITY_TOL: f64 = 1e-10;
const WEDGE_ZERO_TOL: f64 = 1e-12;

/// A unit vector of `(C^n)^{⊗k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    parties: usize,
    local_dim: usize,
    amplitudes: CVector,
}

impl PureState {
    pub fn new(parties: usize, local_dim: usize, amplitudes: CVector) -> Result<Self> {
        check_shape(parties, local_dim)?;
        let expected = local_dim.pow(parties as u32);
        if amplitudes.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            parties,
            local_dim,
            amplitudes,
        })
    }

    /// Rescales a nonzero vector to unit length.
    pub fn normalized(parties: usize, local_dim: usize, amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(parties, local_dim, amplitudes.unscale(norm))
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    pub fn density(&self) -> DensityFunctional {
        DensityFunctional {
            parties: self.parties,
            local_dim: self.local_dim,
            matrix: outer(&self.amplitudes, &self.amplitudes),
        }
    }
}

/// A density matrix on `(C^n)^{⊗k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityFunctional {
    parties: usize,
    local_dim: usize,
    matrix: CMatrix,
}

impl DensityFunctional {
    pub fn new(parties: usize, local_dim: usize, matrix: CMatrix) -> Result<Self> {
        check_shape(parties, local_dim)?;
        let dim = local_dim.pow(parties as u32);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::LengthMismatch {
                expected: dim * dim,
                found: matrix.nrows() * matrix.ncols(),
            });
        }
        let deviation = crate::linalg::hermitian_deviation(&matrix);
        if deviation > DENSITY_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > DENSITY_TOL {
            return Err(Error::TraceInvalid { trace });
        }
        let (values, _) = crate::linalg::hermitian_eigen(&matrix);
        let min_eigenvalue = values.first().copied().unwrap_or(0.0);
        if min_eigenvalue < -DENSITY_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self {
            parties,
            local_dim,
            matrix,
        })
    }

    /// Convex combination `sum_i w_i |xi_i><xi_i|`; weights are renormalized.
    pub fn mixture(states: &[PureState], weights: &[f64]) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        if states.len() != weights.len() {
            return Err(Error::InvalidArgument(
                "mixture needs one weight per state".into(),
            ));
        }
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidArgument(
                "mixture weights must be nonnegative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidArgument("mixture weights sum to zero".into()));
        }
        let dim = first.amplitudes.len();
        let mut matrix = CMatrix::zeros(dim, dim);
        for (s, &w) in states.iter().zip(weights) {
            if s.parties != first.parties || s.local_dim != first.local_dim {
                return Err(Error::InvalidArgument(
                    "mixture components have different shapes".into(),
                ));
            }
            matrix += outer(&s.amplitudes, &s.amplitudes).scale(w / total);
        }
        Self::new(first.parties, first.local_dim, matrix)
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `phi(x) = tr(rho x)`.
    pub fn apply(&self, x: &CMatrix) -> C64 {
        (&self.matrix * x).trace()
    }

    pub fn trace_norm(&self) -> f64 {
        crate::linalg::trace_norm(&self.matrix)
    }
}

impl From<&PureState> for DensityFunctional {
    fn from(s: &PureState) -> Self {
        s.density()
    }
}

fn check_shape(parties: usize, local_dim: usize) -> Result<()> {
    if parties == 0 || local_dim == 0 {
        return Err(Error::InvalidArgument(
            "parties and local dimension must be positive".into(),
        ));
    }
    if local_dim.checked_pow(parties as u32).is_none() {
        return Err(Error::InvalidArgument("state dimension overflows".into()));
    }
    Ok(())
}

/// Element of `S_k` together with its sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
    sign: i8,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let k = image.len();
        let mut seen = vec![false; k];
        for &i in &image {
            if i >= k || seen[i] {
                return Err(Error::InvalidArgument(
                    "permutation image is not a bijection".into(),
                ));
            }
            seen[i] = true;
        }
        let sign = parity(&image);
        Ok(Self { image, sign })
    }

    pub fn identity(k: usize) -> Self {
        Self {
            image: (0..k).collect(),
            sign: 1,
        }
    }

    pub fn transposition(k: usize, a: usize, b: usize) -> Result<Self> {
        let mut image: Vec<usize> = (0..k).collect();
        if a >= k || b >= k {
            return Err(Error::InvalidArgument("transposition out of range".into()));
        }
        image.swap(a, b);
        Self::new(image)
    }

    /// All of `S_k` in lexicographic order of images.
    pub fn all(k: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = Vec::with_capacity(k);
        let mut used = vec![false; k];
        fn rec(k: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == k {
                out.push(Permutation {
                    image: cur.clone(),
                    sign: parity(cur),
                });
                return;
            }
            for i in 0..k {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    rec(k, cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        rec(k, &mut current, &mut used, &mut out);
        out
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn inverse(&self) -> Self {
        let mut image = vec![0; self.image.len()];
        for (m, &p) in self.image.iter().enumerate() {
            image[p] = m;
        }
        Self {
            image,
            sign: self.sign,
        }
    }
}

fn parity(image: &[usize]) -> i8 {
    let mut inversions = 0usize;
    for a in 0..image.len() {
        for b in a + 1..image.len() {
            if image[a] > image[b] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetrySector {
    Full,
    Bosonic,
    Fermionic,
}

pub fn multi_index(mut index: usize, n: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in (0..k).rev() {
        out[slot] = index % n;
        index /= n;
    }
    out
}

pub fn flat_index(multi: &[usize], n: usize) -> usize {
    multi.iter().fold(0, |acc, &i| acc * n + i)
}

fn check_len(v: &CVector, n: usize, k: usize) -> Result<()> {
    let expected = n.pow(k as u32);
    if v.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            found: v.len(),
        });
    }
    Ok(())
}

/// `U_pi v` on a raw vector.
pub fn permute_vector(v: &CVector, n: usize, perm: &Permutation) -> Result<CVector> {
    let k = perm.len();
    check_len(v, n, k)?;
    let mut out = CVector::zeros(v.len());
    let mut target = vec![0usize; k];
    for idx in 0..v.len() {
        let src = multi_index(idx, n, k);
        for m in 0..k {
            target[m] = src[perm.image[m]];
        }
        out[flat_index(&target, n)] = v[idx];
    }
    Ok(out)
}

pub fn apply_permutation(state: &PureState, perm: &Permutation) -> Result<PureState> {
    if perm.len() != state.parties {
        return Err(Error::InvalidArgument(alloc::format!(
            "permutation on {} slots applied to {} parties",
            perm.len(),
            state.parties
        )));
    }
    let amplitudes = permute_vector(&state.amplitudes, state.local_dim, perm)?;
    Ok(PureState {
        parties: state.parties,
        local_dim: state.local_dim,
        amplitudes,
    })
}

/// `P_+ v`, `P_- v`, or `v` for the full sector.
pub fn project_vector(v: &CVector, n: usize, k: usize, sector: SymmetrySector) -> Result<CVector> {
    check_len(v, n, k)?;
    if sector == SymmetrySector::Full {
        return Ok(v.clone());
    }
    if k < 2 {
        return Err(Error::InvalidArgument(
            "symmetry sectors need at least two parties".into(),
        ));
    }
    let perms = Permutation::all(k);
    let mut out = CVector::zeros(v.len());
    for p in &perms {
        let pv = permute_vector(v, n, p)?;
        let s = match sector {
            SymmetrySector::Fermionic => f64::from(p.sign),
            _ => 1.0,
        };
        out += pv.scale(s);
    }
    Ok(out.unscale(perms.len() as f64))
}

pub fn project_sector(state: &PureState, sector: SymmetrySector) -> Result<CVector> {
    project_vector(&state.amplitudes, state.local_dim, state.parties, sector)
}

fn factor_dims(vectors: &[CVector]) -> Result<usize> {
    let n = vectors
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty factor list".into()))?
        .len();
    if vectors.iter().any(|v| v.len() != n) {
        return Err(Error::InvalidArgument("factors of different lengths".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("zero-dimensional factors".into()));
    }
    Ok(n)
}

/// `eta_1 ∧ ... ∧ eta_k = sqrt(k!) P_-(eta_1 ⊗ ... ⊗ eta_k)`.
pub fn wedge(vectors: &[CVector]) -> Result<CVector> {
    let n = factor_dims(vectors)?;
    let k = vectors.len();
    let product = kron_all(vectors);
    if k == 1 {
        return Ok(product);
    }
    let scale: f64 = Float::sqrt(crate::linalg::factorial(k) as f64);
    let mut out = project_vector(&product, n, k, SymmetrySector::Fermionic)?.scale(scale);
    let bound: f64 = vectors.iter().map(|v| v.norm()).product();
    if out.norm() <= WEDGE_ZERO_TOL * bound {
        out.fill(C64::new(0.0, 0.0));
    }
    Ok(out)
}

/// `eta_1 ∨ ... ∨ eta_k = P_+(eta_1 ⊗ ... ⊗ eta_k)`, without a `sqrt(k!)` factor.
pub fn vee(vectors: &[CVector]) -> Result<CVector> {
    let n = factor_dims(vectors)?;
    let k = vectors.len();
    let product = kron_all(vectors);
    if k == 1 {
        return Ok(product);
    }
    project_vector(&product, n, k, SymmetrySector::Bosonic)
}

/// Determinant of `G` with `G[i][j] = <xs_j, ys_i>`.
pub fn wedge_gram_inner(xs: &[CVector], ys: &[CVector]) -> Result<C64> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidArgument(alloc::format!(
            "gram determinant of {} and {} vectors",
            xs.len(),
            ys.len()
        )));
    }
    let n = factor_dims(xs)?;
    if factor_dims(ys)? != n {
        return Err(Error::InvalidArgument("factors of different lengths".into()));
    }
    let k = xs.len();
    let g = CMatrix::from_fn(k, k, |i, j| inner(&xs[j], &ys[i]));
    Ok(g.determinant())
}

/// Orthogonal system with the same wedge product and no longer vectors.
///
/// Splits every later vector against the current head and recurses on the
/// orthogonal remainders.
pub fn wedge_orthogonalize(vectors: &[CVector]) -> Result<Vec<CVector>> {
    factor_dims(vectors)?;
    let mut out: Vec<CVector> = vectors.to_vec();
    for head in 0..out.len() {
        let h = out[head].clone();
        let hh = h.norm_squared();
        if hh == 0.0 {
            continue;
        }
        for later in out.iter_mut().skip(head + 1) {
            let coeff = inner(later, &h) / hh;
            *later -= &h * coeff;
        }
    }
    Ok(out)
}

/// Operator form of the sector projector as an `n^k x n^k` matrix.
pub fn projector_matrix(n: usize, k: usize, sector: SymmetrySector) -> Result<CMatrix> {
    let dim = n.pow(k as u32);
    let mut out = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        let e = crate::linalg::basis_vector(dim, j);
        out.set_column(j, &project_vector(&e, n, k, sector)?);
    }
    Ok(out)
}

/// Orthonormal basis of a sector: `e_I` for the full space, `e_{i_1} ∧ ... ∧ e_{i_k}`
/// with `i_1 < ... < i_k` for the fermionic one and normalized `P_+ e_I` with
/// `i_1 <= ... <= i_k` for the bosonic one.
pub fn sector_basis(n: usize, k: usize, sector: SymmetrySector) -> Result<Vec<CVector>> {
    let dim = n.pow(k as u32);
    let mut out = Vec::new();
    for idx in 0..dim {
        let multi = multi_index(idx, n, k);
        let keep = match sector {
            SymmetrySector::Full => true,
            SymmetrySector::Fermionic => multi.windows(2).all(|w| w[0] < w[1]),
            SymmetrySector::Bosonic => multi.windows(2).all(|w| w[0] <= w[1]),
        };
        if !keep {
            continue;
        }
        let e = crate::linalg::basis_vector(dim, idx);
        let v = project_vector(&e, n, k, sector)?;
        let norm = v.norm();
        out.push(v.unscale(norm));
    }
    Ok(out)
}

/// Columns of `sector_basis` as a matrix.
pub fn sector_isometry(n: usize, k: usize, sector: SymmetrySector) -> Result<CMatrix> {
    let basis = sector_basis(n, k, sector)?;
    Ok(CMatrix::from_columns(&basis))
}

/// Tensor product of unit copies `a^{⊗k}`.
pub fn power(a: &CVector, k: usize) -> CVector {
    let mut out = CVector::from_element(1, ONE);
    for _ in 0..k {
        out = out.kronecker(a);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{basis_vector, random_unit, random_vector, stream_rng};
    use proptest::prelude::*;

    fn e(n: usize, i: usize) -> CVector {
        basis_vector(n, i)
    }

    fn singlet_vec() -> CVector {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        CVector::from_vec(vec![
            C64::new(0.0, 0.0),
            C64::new(s, 0.0),
            C64::new(-s, 0.0),
            C64::new(0.0, 0.0),
        ])
    }

    #[test]
    fn identity_permutation_is_noop() {
        let mut rng = stream_rng(1, 0);
        let v = random_unit(&mut rng, 27);
        let s = PureState::new(3, 3, v).unwrap();
        let out = apply_permutation(&s, &Permutation::identity(3)).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn swap_transposes_basis_product() {
        let s = PureState::new(2, 2, kron_all(&[e(2, 0), e(2, 1)])).unwrap();
        let swap = Permutation::transposition(2, 0, 1).unwrap();
        let out = apply_permutation(&s, &swap).unwrap();
        assert_eq!(out.amplitudes(), &kron_all(&[e(2, 1), e(2, 0)]));
    }

    #[test]
    fn swap_negates_singlet() {
        let s = PureState::new(2, 2, singlet_vec()).unwrap();
        let swap = Permutation::transposition(2, 0, 1).unwrap();
        let out = apply_permutation(&s, &swap).unwrap();
        assert!((out.amplitudes() + s.amplitudes()).norm() < 1e-15);
    }

    #[test]
    fn permutation_arity_mismatch_is_rejected() {
        let s = PureState::new(2, 2, singlet_vec()).unwrap();
        assert!(matches!(
            apply_permutation(&s, &Permutation::identity(3)),
            Err(Error::InvalidArgument(_))
        ));
        assert!(Permutation::new(vec![0, 0]).is_err());
    }

    #[test]
    fn permutation_signs() {
        let all = Permutation::all(3);
        assert_eq!(all.len(), 6);
        assert_eq!(all.iter().filter(|p| p.sign() == 1).count(), 3);
        assert_eq!(Permutation::new(vec![1, 2, 0]).unwrap().sign(), 1);
        assert_eq!(Permutation::new(vec![1, 0, 2]).unwrap().sign(), -1);
    }

    #[test]
    fn antisymmetrizer_kills_repeated_factor() {
        let v = kron_all(&[e(3, 0), e(3, 0)]);
        let p = project_vector(&v, 3, 2, SymmetrySector::Fermionic).unwrap();
        assert!(p.norm() < 1e-15);
    }

    #[test]
    fn antisymmetrizer_on_basis_pair() {
        let v = kron_all(&[e(2, 0), e(2, 1)]);
        let p = project_vector(&v, 2, 2, SymmetrySector::Fermionic).unwrap();
        let expected = CVector::from_vec(vec![
            C64::new(0.0, 0.0),
            C64::new(0.5, 0.0),
            C64::new(-0.5, 0.0),
            C64::new(0.0, 0.0),
        ]);
        assert!((p.clone() - expected).norm() < 1e-15);
        assert!((p.norm() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn wedge_examples() {
        let w = wedge(&[e(2, 0), e(2, 1)]).unwrap();
        assert!((w - singlet_vec()).norm() < 1e-15);
        assert_eq!(wedge(&[e(2, 0), e(2, 0)]).unwrap().norm(), 0.0);
        let lhs = wedge(&[e(2, 0), e(2, 0) + e(2, 1)]).unwrap();
        let rhs = wedge(&[e(2, 0), e(2, 1)]).unwrap();
        assert!((lhs - rhs).norm() < 1e-15);
        assert!(wedge(&[]).is_err());
    }

    #[test]
    fn vee_examples() {
        let mut rng = stream_rng(2, 0);
        let a = random_unit(&mut rng, 3);
        let v = vee(&[a.clone(), a.clone(), a.clone()]).unwrap();
        assert!((v - power(&a, 3)).norm() < 1e-14);
        let v = vee(&[e(2, 0), e(2, 1)]).unwrap();
        assert!((v[1] - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((v[2] - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((v.norm() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(vee(&[]).is_err());
    }

    #[test]
    fn gram_examples() {
        let xs = [e(2, 0), e(2, 1)];
        assert!((wedge_gram_inner(&xs, &xs).unwrap() - ONE).norm() < 1e-15);
        let ys = [e(2, 1), e(2, 0)];
        assert!((wedge_gram_inner(&xs, &ys).unwrap() + ONE).norm() < 1e-15);
        let xs = [e(2, 0), e(2, 0) + e(2, 1)];
        let ys = [e(2, 0), e(2, 1)];
        assert!((wedge_gram_inner(&xs, &ys).unwrap() - ONE).norm() < 1e-15);
        assert!(wedge_gram_inner(&xs, &ys[..1]).is_err());
    }

    #[test]
    fn orthogonalize_examples() {
        let input = [e(3, 0), e(3, 1), e(3, 2)];
        assert_eq!(wedge_orthogonalize(&input).unwrap(), input.to_vec());
        let out = wedge_orthogonalize(&[e(2, 0), e(2, 0) + e(2, 1)]).unwrap();
        assert!((&out[0] - e(2, 0)).norm() < 1e-15);
        assert!((&out[1] - e(2, 1)).norm() < 1e-15);
    }

    #[test]
    fn sector_bases_are_orthonormal_with_expected_sizes() {
        for (sector, size) in [
            (SymmetrySector::Full, 64),
            (SymmetrySector::Fermionic, 4),
            (SymmetrySector::Bosonic, 20),
        ] {
            let b = sector_isometry(4, 3, sector).unwrap();
            assert_eq!(b.ncols(), size);
            let gram = b.adjoint() * &b;
            let eye = CMatrix::identity(size, size);
            assert!(crate::linalg::max_abs(&(gram - eye)) < 1e-13);
        }
    }

    #[test]
    fn projector_matrix_matches_action() {
        let mut rng = stream_rng(4, 0);
        let v = random_vector(&mut rng, 9);
        let p = projector_matrix(3, 2, SymmetrySector::Bosonic).unwrap();
        let direct = project_vector(&v, 3, 2, SymmetrySector::Bosonic).unwrap();
        assert!((p * v - direct).norm() < 1e-13);
    }

    fn planted_overlap_tuple(seed: u64, n: usize, k: usize) -> Vec<CVector> {
        let mut rng = stream_rng(seed, 7);
        let mut vs: Vec<CVector> = (0..k).map(|_| random_unit(&mut rng, n)).collect();
        // pull the second vector towards the first so |<v1, v0>| >= 0.1
        let mixed = vs[0].scale(0.5) + vs[1].scale(0.5);
        vs[1] = mixed.unscale(mixed.norm());
        vs
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn projectors_are_idempotent_with_orthogonal_ranges(seed in any::<u64>(), k in 2usize..=3, n in 2usize..=3) {
            let mut rng = stream_rng(seed, 0);
            let dim = n.pow(k as u32);
            let x = random_vector(&mut rng, dim);
            let y = random_vector(&mut rng, dim);
            for sector in [SymmetrySector::Bosonic, SymmetrySector::Fermionic] {
                let p = project_vector(&x, n, k, sector).unwrap();
                let pp = project_vector(&p, n, k, sector).unwrap();
                prop_assert!((pp - &p).norm() <= 1e-12 * x.norm());
            }
            let plus = project_vector(&x, n, k, SymmetrySector::Bosonic).unwrap();
            let minus = project_vector(&y, n, k, SymmetrySector::Fermionic).unwrap();
            prop_assert!(inner(&plus, &minus).norm() <= 1e-12 * x.norm() * y.norm());
        }

        #[test]
        fn permutation_adjoint_is_inverse(seed in any::<u64>(), k in 2usize..=3) {
            let n: usize = 3;
            let mut rng = stream_rng(seed, 1);
            let dim = n.pow(k as u32);
            let x = random_unit(&mut rng, dim);
            let y = random_unit(&mut rng, dim);
            let perms = Permutation::all(k);
            let p = &perms[(seed as usize) % perms.len()];
            let lhs = inner(&permute_vector(&x, n, p).unwrap(), &y);
            let rhs = inner(&x, &permute_vector(&y, n, &p.inverse()).unwrap());
            prop_assert!((lhs - rhs).norm() <= 1e-12);
        }

        #[test]
        fn wedge_norm_is_bounded_by_factor_norms(seed in any::<u64>(), k in 2usize..=3, n in 3usize..=5) {
            let mut rng = stream_rng(seed, 2);
            let vs: Vec<CVector> = (0..k).map(|_| random_vector(&mut rng, n)).collect();
            let bound: f64 = vs.iter().map(|v| v.norm()).product();
            prop_assert!(wedge(&vs).unwrap().norm() <= bound + 1e-10);

            let ortho = wedge_orthogonalize(&vs).unwrap();
            let ob: f64 = ortho.iter().map(|v| v.norm()).product();
            prop_assert!((wedge(&ortho).unwrap().norm() - ob).abs() <= 1e-10);

            let planted = planted_overlap_tuple(seed, n, k);
            prop_assert!(inner(&planted[1], &planted[0]).norm() >= 0.1);
            let pb: f64 = planted.iter().map(|v| v.norm()).product();
            prop_assert!(wedge(&planted).unwrap().norm() < pb - 1e-6);
        }

        #[test]
        fn gram_determinant_matches_brute_force(seed in any::<u64>(), k in 2usize..=3, n in 3usize..=4) {
            let mut rng = stream_rng(seed, 3);
            let xs: Vec<CVector> = (0..k).map(|_| random_vector(&mut rng, n)).collect();
            let ys: Vec<CVector> = (0..k).map(|_| random_vector(&mut rng, n)).collect();
            // explicit antisymmetrization, independent of `wedge`
            let explicit = |vs: &[CVector]| {
                let mut acc = CVector::zeros(n.pow(k as u32));
                for p in Permutation::all(k) {
                    let permuted: Vec<CVector> = p.image().iter().map(|&i| vs[i].clone()).collect();
                    acc += kron_all(&permuted).scale(f64::from(p.sign()));
                }
                acc.unscale(Float::sqrt(crate::linalg::factorial(k) as f64))
            };
            let brute = inner(&explicit(&xs), &explicit(&ys));
            let gram = wedge_gram_inner(&xs, &ys).unwrap();
            let scale: f64 = xs.iter().chain(&ys).map(|v| v.norm()).product();
            prop_assert!((brute - gram).norm() <= 1e-10 * scale.max(1.0));
        }

        #[test]
        fn orthogonalization_preserves_wedge(seed in any::<u64>(), k in 2usize..=3) {
            let n: usize = 5;
            let mut rng = stream_rng(seed, 4);
            let vs: Vec<CVector> = (0..k).map(|_| random_vector(&mut rng, n)).collect();
            let out = wedge_orthogonalize(&vs).unwrap();
            for i in 0..k {
                prop_assert!(out[i].norm() <= vs[i].norm() + 1e-12);
                for j in 0..i {
                    prop_assert!(inner(&out[i], &out[j]).norm() <= 1e-10 * vs[i].norm() * vs[j].norm());
                }
            }
            prop_assert!((wedge(&out).unwrap() - wedge(&vs).unwrap()).norm() <= 1e-10);
        }

        #[test]
        fn fermionic_scale_of_orthonormal_tuples(seed in any::<u64>(), k in 2usize..=3) {
            let n: usize = 4;
            let mut rng = stream_rng(seed, 5);
            let u = crate::linalg::random_unitary(&mut rng, n);
            let cols: Vec<CVector> = (0..k).map(|i| u.column(i).into_owned()).collect();
            prop_assert!((wedge(&cols).unwrap().norm() - 1.0).abs() <= 1e-12);
            let units: Vec<CVector> = (0..k).map(|_| random_unit(&mut rng, n)).collect();
            prop_assert!(wedge(&units).unwrap().norm() < 1.0);
        }

        #[test]
        fn bosonic_projection_of_unit_products(seed in any::<u64>(), k in 2usize..=3) {
            let n: usize = 3;
            let mut rng = stream_rng(seed, 6);
            let units: Vec<CVector> = (0..k).map(|_| random_unit(&mut rng, n)).collect();
            prop_assert!(vee(&units).unwrap().norm() <= 1.0 + 1e-12);
            let a = random_unit(&mut rng, n);
            let copies: Vec<CVector> = (0..k).map(|_| a.clone()).collect();
            prop_assert!((vee(&copies).unwrap().norm() - 1.0).abs() <= 1e-12);
        }
    }
}
