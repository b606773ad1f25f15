//! Canonical and random states.

use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{basis_vector, binomial, kron_all, outer, random_simplex, random_unit, CMatrix, CVector};
use crate::tensor::{project_vector, sector_basis, wedge, DensityFunctional, PureState, SymmetrySector};

/// `(e_1 ⊗ e_2 - e_2 ⊗ e_1) / sqrt(2)` in `C^2 ⊗ C^2`.
pub fn singlet() -> PureState {
    let v = wedge(&[basis_vector(2, 0), basis_vector(2, 1)]).expect("two basis vectors");
    PureState::new(2, 2, v).expect("unit wedge of orthonormal vectors")
}

/// `(1/sqrt(m)) sum_{i<m} e_i ∧ f_i` with `e_i = b_{2i}` and `f_i = b_{2i+1}`.
pub fn xi_family(terms: usize, local_dim: usize) -> Result<PureState> {
    if terms == 0 {
        return Err(Error::InvalidArgument("xi family needs at least one term".into()));
    }
    if local_dim < 2 * terms {
        return Err(Error::InvalidArgument(alloc::format!(
            "xi family with {terms} terms needs local dimension >= {}",
            2 * terms
        )));
    }
    let mut v = CVector::zeros(local_dim * local_dim);
    for i in 0..terms {
        v += wedge(&[basis_vector(local_dim, 2 * i), basis_vector(local_dim, 2 * i + 1)])?;
    }
    PureState::normalized(2, local_dim, v)
}

/// Uniform mixture of the orthonormal basis `e_{i_1} ∧ ... ∧ e_{i_k}` of the
/// fermionic sector.
pub fn tracial_wedge(local_dim: usize, parties: usize) -> Result<DensityFunctional> {
    if parties < 2 || parties > local_dim {
        return Err(Error::InvalidArgument(alloc::format!(
            "tracial wedge state needs 2 <= k <= n, got k = {parties}, n = {local_dim}"
        )));
    }
    let basis = sector_basis(local_dim, parties, SymmetrySector::Fermionic)?;
    let count = binomial(local_dim, parties) as f64;
    let dim = basis[0].len();
    let mut m = CMatrix::zeros(dim, dim);
    for b in &basis {
        m += outer(b, b);
    }
    DensityFunctional::new(parties, local_dim, m.unscale(count))
}

pub fn haar_pure<R: Rng + ?Sized>(rng: &mut R, local_dim: usize, parties: usize) -> Result<PureState> {
    let dim = local_dim
        .checked_pow(parties as u32)
        .ok_or_else(|| Error::InvalidArgument("state dimension overflows".into()))?;
    PureState::new(parties, local_dim, random_unit(rng, dim))
}

/// Haar-random unit vector of a symmetry sector.
pub fn haar_sector_pure<R: Rng + ?Sized>(
    rng: &mut R,
    local_dim: usize,
    parties: usize,
    sector: SymmetrySector,
) -> Result<PureState> {
    let basis = sector_basis(local_dim, parties, sector)?;
    if basis.is_empty() {
        return Err(Error::InvalidArgument("sector is trivial".into()));
    }
    let coeffs = random_unit(rng, basis.len());
    let mut v = CVector::zeros(basis[0].len());
    for (c, b) in coeffs.iter().zip(&basis) {
        v += b * *c;
    }
    PureState::normalized(parties, local_dim, v)
}

/// Mixture of `rank` Haar-random sector vectors with simplex-uniform weights.
pub fn haar_mixed<R: Rng + ?Sized>(
    rng: &mut R,
    local_dim: usize,
    parties: usize,
    rank: usize,
    sector: SymmetrySector,
) -> Result<DensityFunctional> {
    if rank == 0 {
        return Err(Error::InvalidArgument("mixture rank must be positive".into()));
    }
    let states = (0..rank)
        .map(|_| haar_sector_pure(rng, local_dim, parties, sector))
        .collect::<Result<Vec<_>>>()?;
    let weights = random_simplex(rng, rank);
    DensityFunctional::mixture(&states, &weights)
}

/// Mixture of `terms` random product vectors; separable by construction.
pub fn product_mixture<R: Rng + ?Sized>(
    rng: &mut R,
    local_dim: usize,
    parties: usize,
    terms: usize,
) -> Result<DensityFunctional> {
    if terms == 0 {
        return Err(Error::InvalidArgument("mixture needs at least one term".into()));
    }
    let states = (0..terms)
        .map(|_| {
            let factors: Vec<CVector> = (0..parties).map(|_| random_unit(rng, local_dim)).collect();
            PureState::normalized(parties, local_dim, kron_all(&factors))
        })
        .collect::<Result<Vec<_>>>()?;
    let weights = random_simplex(rng, terms);
    DensityFunctional::mixture(&states, &weights)
}

/// Haar-random pure state of `H^{∧2}` obtained by antisymmetrizing a Haar vector.
pub fn haar_antisymmetric<R: Rng + ?Sized>(rng: &mut R, local_dim: usize) -> Result<PureState> {
    let v = random_unit(rng, local_dim * local_dim);
    let p = project_vector(&v, local_dim, 2, SymmetrySector::Fermionic)?;
    let scale = p.norm();
    if !(scale > 0.0) || !Float::is_finite(scale) {
        return Err(Error::InvalidArgument("fermionic sector is trivial".into()));
    }
    PureState::normalized(2, local_dim, p)
}
