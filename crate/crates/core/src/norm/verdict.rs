//! Separability verdicts and the fermionic coupling `q^∧ = q^⊗ / k!`.

use num_traits::Float;

use super::bracket::{check_dims, q_bracket, ExtReal, NormBracket};
use super::spec::{Budget, Family, VSetSpec};
use crate::error::{Error, Result};
use crate::linalg::{factorial, max_abs};
use crate::tensor::{projector_matrix, DensityFunctional, SymmetrySector};

const SUPPORT_TOL: f64 = 1e-10;
const COUPLING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Certified `q_K <= 1 + tol`.
    Separable,
    /// Certified `q_K >= 1 + tol`.
    Entangled,
    Inconclusive,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Separable => "separable",
            Status::Entangled => "entangled",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub measure: VSetSpec,
    pub bracket: NormBracket,
    /// `lower - 1` when entangled, `upper - 1` when separable, and the
    /// bracket width otherwise.
    pub threshold_gap: f64,
}

pub fn verdict(phi: &DensityFunctional, spec: &VSetSpec, budget: &Budget) -> Result<Verdict> {
    let bracket = q_bracket(phi, spec, budget)?;
    let tol = budget.tol;
    let (status, threshold_gap) = match (bracket.lower, bracket.upper) {
        (_, ExtReal::Finite(u)) if u <= 1.0 + tol => (Status::Separable, u - 1.0),
        (ExtReal::Infinite, _) => (Status::Entangled, f64::INFINITY),
        (ExtReal::Finite(l), _) if l >= 1.0 + tol => (Status::Entangled, l - 1.0),
        _ => (Status::Inconclusive, bracket.width().value()),
    };
    Ok(Verdict {
        status,
        measure: *spec,
        bracket,
        threshold_gap,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingReport {
    pub arity: usize,
    pub tensor: NormBracket,
    pub wedge: NormBracket,
    /// Intersection of the wedge bracket with the tensor bracket divided by `k!`.
    pub improved_wedge: (f64, f64),
    /// Whether the two scaled brackets intersect.
    pub consistent: bool,
}

/// Brackets `q^⊗` and `q^∧` of a state supported on the fermionic sector and
/// checks them against `q^∧ = q^⊗ / k!`.
pub fn fermionic_coupling(phi: &DensityFunctional, budget: &Budget) -> Result<CouplingReport> {
    let n = phi.local_dim();
    let k = phi.parties();
    let tensor_spec = VSetSpec::plain(k, n, Family::Tensor)?;
    let wedge_spec = VSetSpec::plain(k, n, Family::Wedge)?;
    check_dims(phi, &wedge_spec)?;
    let p = projector_matrix(n, k, SymmetrySector::Fermionic)?;
    let rho = phi.matrix();
    let residual = max_abs(&(rho - &p * rho * &p));
    if residual > SUPPORT_TOL {
        return Err(Error::NotFermionicSupport { residual });
    }
    let tensor = q_bracket(phi, &tensor_spec, budget)?;
    let wedge = q_bracket(phi, &wedge_spec, budget)?;
    let scale = factorial(k) as f64;
    let lower = wedge.lower.value().max(tensor.lower.value() / scale);
    let upper = wedge.upper.value().min(tensor.upper.value() / scale);
    let consistent = lower <= upper + COUPLING_TOL * Float::max(1.0, upper.abs());
    Ok(CouplingReport {
        arity: k,
        tensor,
        wedge,
        improved_wedge: (lower, upper),
        consistent,
    })
}
