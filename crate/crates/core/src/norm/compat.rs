//! Compatibility of the sector projectors with the product families, and the
//! contraction property of `x -> P x P`.

use alloc::vec::Vec;

use num_traits::Float;

use super::estimate::estimate_k_norm;
use super::members::{best_response, default_member, is_member, sample};
use super::spec::{Budget, Family, VSetSpec};
use crate::decompose::slater_raw;
use crate::error::{Error, Result};
use crate::linalg::{
    basis_vector, factorial, inner, kron_all, random_hermitian, random_unit, random_vector,
    stream_rng, to_matrix, CMatrix, CVector,
};
use crate::tensor::{
    permute_vector, project_vector, projector_matrix, wedge, wedge_orthogonalize, Permutation,
    SymmetrySector,
};

const ASCENT_ITERS: usize = 500;
const ASCENT_TOL: f64 = 1e-15;
const MEMBERSHIP_TOL: f64 = 1e-8;
const CONTRACTION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct CompatibilityReport {
    pub sector: SymmetrySector,
    pub lambda: f64,
    /// `1 / sup_{xi in V} ‖P xi‖`.
    pub mu: f64,
    pub compatible: bool,
    /// A normalized `P xi` that is not a rescaled image of a member.
    pub counterexample: Option<CVector>,
    /// Largest distance from a normalized `P xi` to `lambda P V` over the
    /// samples, or the distance of the counterexample from the family.
    pub membership_residual: f64,
}

fn require_tensor(spec: &VSetSpec, sector: SymmetrySector) -> Result<()> {
    if spec.family() != Family::Tensor {
        return Err(Error::InvalidArgument(
            "compatibility is defined for the product families".into(),
        ));
    }
    if sector != SymmetrySector::Full && spec.arity() < 2 {
        return Err(Error::InvalidArgument(
            "symmetry sectors need at least two parties".into(),
        ));
    }
    Ok(())
}

/// `sup_{xi in V} ‖P xi‖^2` by monotone ascent: the best response to `P xi`
/// never decreases `<P xi, xi>` since `P` is a positive contraction.
fn projected_sup(spec: &VSetSpec, sector: SymmetrySector, samples: usize, seed: u64) -> f64 {
    let n = spec.local_dim();
    let k = spec.arity();
    let weight = |v: &CVector| -> f64 {
        let p = project_vector(v, n, k, sector).expect("length");
        inner(&p, v).re
    };
    let mut best = 0.0f64;
    for s in 0..=samples {
        let mut xi = if s == 0 {
            default_member(spec)
        } else {
            let mut rng = stream_rng(seed, s as u64);
            sample(spec, &mut rng)
        };
        let mut value = weight(&xi);
        for _ in 0..ASCENT_ITERS {
            let p = project_vector(&xi, n, k, sector).expect("length");
            let (next, _) = best_response(spec, &p);
            let next_value = weight(&next);
            if next_value <= value * (1.0 + ASCENT_TOL) {
                break;
            }
            xi = next;
            value = next_value;
        }
        best = best.max(value);
    }
    best
}

/// Distance of `P_- xi / ‖P_- xi‖` from `lambda P_- V`, via an explicit member.
fn fermionic_membership(spec: &VSetSpec, rng: &mut rand_chacha::ChaCha8Rng) -> Option<f64> {
    let n = spec.local_dim();
    let k = spec.arity();
    let l = spec.rank_bound();
    if l == 1 {
        let factors: Vec<CVector> = (0..k).map(|_| random_unit(rng, n)).collect();
        let xi = kron_all(&factors);
        let p = project_vector(&xi, n, k, SymmetrySector::Fermionic).ok()?;
        let norm = p.norm();
        if norm < 1e-8 {
            return None;
        }
        let target = p.unscale(norm);
        let ortho = wedge_orthogonalize(&factors).ok()?;
        let units: Vec<CVector> = ortho.iter().map(|u| u.unscale(u.norm())).collect();
        let zeta = kron_all(&units);
        if !is_member(spec, &zeta, MEMBERSHIP_TOL) {
            return Some(f64::INFINITY);
        }
        let lambda = Float::sqrt(factorial(k) as f64);
        let image = project_vector(&zeta, n, k, SymmetrySector::Fermionic).ok()?.scale(lambda);
        return Some((image - &target).norm());
    }
    let mut xi = CVector::zeros(n * n);
    for _ in 0..l {
        xi += kron_all(&[random_vector(rng, n), random_vector(rng, n)]);
    }
    let p = project_vector(&xi, n, 2, SymmetrySector::Fermionic).ok()?;
    let norm = p.norm();
    if norm < 1e-8 {
        return None;
    }
    let target = p.unscale(norm);
    let form = slater_raw(&to_matrix(&target, n, n), 1e-14, false).ok()?;
    let mut zeta = CVector::zeros(n * n);
    let mut rebuilt = CVector::zeros(n * n);
    for (c, (e, f)) in form.coefficients.iter().zip(&form.pair_frame) {
        zeta += kron_all(&[e.clone(), f.clone()]).scale(*c);
        rebuilt += wedge(&[e.clone(), f.clone()]).ok()?.scale(*c);
    }
    if !is_member(spec, &zeta, MEMBERSHIP_TOL) {
        return Some(f64::INFINITY);
    }
    let image = project_vector(&zeta, n, 2, SymmetrySector::Fermionic)
        .ok()?
        .scale(core::f64::consts::SQRT_2);
    Some((image - &target).norm().max((rebuilt - &target).norm()))
}

/// Bosonic counterexample `P_+(e_1 ⊗ e_2 ⊗ ... ⊗ e_2)`, normalized.
fn bosonic_counterexample(n: usize, k: usize) -> Option<CVector> {
    if n < 2 {
        return None;
    }
    let mut factors = alloc::vec![basis_vector(n, 1); k];
    factors[0] = basis_vector(n, 0);
    let p = project_vector(&kron_all(&factors), n, k, SymmetrySector::Bosonic).ok()?;
    let norm = p.norm();
    Some(p.unscale(norm))
}

/// `lambda`, `mu` and the membership test for the sector projector `P` on
/// the product family `spec` (plain, or rank-bounded with two parties).
pub fn check_compatibility(
    spec: &VSetSpec,
    sector: SymmetrySector,
    samples: usize,
    seed: u64,
) -> Result<CompatibilityReport> {
    require_tensor(spec, sector)?;
    let k = spec.arity();
    let n = spec.local_dim();
    let sup = projected_sup(spec, sector, samples, seed);
    let mu = 1.0 / Float::sqrt(sup);
    match sector {
        SymmetrySector::Fermionic => {
            if k > n {
                return Err(Error::InvalidArgument(
                    "the fermionic sector is trivial for k > n".into(),
                ));
            }
            let lambda = if spec.rank_bound() == 1 {
                Float::sqrt(factorial(k) as f64)
            } else {
                core::f64::consts::SQRT_2
            };
            let mut rng = stream_rng(seed ^ 0xc0ffee, 0);
            let mut residual = 0.0f64;
            for _ in 0..samples.max(1) {
                if let Some(r) = fermionic_membership(spec, &mut rng) {
                    residual = residual.max(r);
                }
            }
            Ok(CompatibilityReport {
                sector,
                lambda,
                mu,
                compatible: residual <= MEMBERSHIP_TOL,
                counterexample: None,
                membership_residual: residual,
            })
        }
        SymmetrySector::Bosonic => {
            let counterexample = bosonic_counterexample(n, k);
            let residual = counterexample.as_ref().map_or(0.0, |c| {
                let plain = VSetSpec::plain(k, n, Family::Tensor).expect("valid");
                let (_, overlap) = best_response(&plain, c);
                1.0 - overlap * overlap
            });
            Ok(CompatibilityReport {
                sector,
                lambda: 1.0,
                mu,
                compatible: counterexample.is_none(),
                counterexample,
                membership_residual: residual,
            })
        }
        SymmetrySector::Full => Ok(CompatibilityReport {
            sector,
            lambda: 1.0,
            mu,
            compatible: true,
            counterexample: None,
            membership_residual: 0.0,
        }),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionSample {
    /// Estimate of `‖P x P‖_K` with its maximizing pair.
    pub lhs: f64,
    /// Largest of the estimate of `‖x‖_K` and `|<x U_sigma xi*, U_pi eta*>|`
    /// over the left pair mapped through all permutations.
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionReport {
    pub sector: SymmetrySector,
    pub samples: Vec<ContractionSample>,
    pub violations: usize,
    /// `max(lhs - rhs)` over the samples.
    pub max_excess: f64,
}

/// Compares `‖P x P‖_K` against `‖x‖_K` for each operator in `ops`.
pub fn check_contraction_ops(
    spec: &VSetSpec,
    sector: SymmetrySector,
    ops: &[CMatrix],
    budget: &Budget,
) -> Result<ContractionReport> {
    require_tensor(spec, sector)?;
    let n = spec.local_dim();
    let k = spec.arity();
    let p = projector_matrix(n, k, sector)?;
    let perms = if sector == SymmetrySector::Full {
        alloc::vec![Permutation::identity(k)]
    } else {
        Permutation::all(k)
    };
    let mut samples = Vec::with_capacity(ops.len());
    for x in ops {
        let pxp = &p * x * &p;
        let left = estimate_k_norm(&pxp, spec, budget)?;
        let mut rhs = estimate_k_norm(x, spec, budget)?.value;
        let xs: Vec<CVector> = perms
            .iter()
            .map(|s| permute_vector(&left.xi, n, s))
            .collect::<Result<_>>()?;
        let ys: Vec<CVector> = perms
            .iter()
            .map(|s| permute_vector(&left.eta, n, s))
            .collect::<Result<_>>()?;
        for a in &xs {
            let xa = x * a;
            for b in &ys {
                rhs = rhs.max(inner(&xa, b).norm());
            }
        }
        samples.push(ContractionSample {
            lhs: left.value,
            rhs,
        });
    }
    let violations = samples
        .iter()
        .filter(|s| s.lhs > s.rhs + CONTRACTION_TOL)
        .count();
    let max_excess = samples
        .iter()
        .map(|s| s.lhs - s.rhs)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(ContractionReport {
        sector,
        samples,
        violations,
        max_excess,
    })
}

/// `check_contraction_ops` on `count` seeded random Hermitian operators.
pub fn check_contraction(
    spec: &VSetSpec,
    sector: SymmetrySector,
    count: usize,
    seed: u64,
    budget: &Budget,
) -> Result<ContractionReport> {
    let ops: Vec<CMatrix> = (0..count)
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            random_hermitian(&mut rng, spec.dim())
        })
        .collect();
    check_contraction_ops(spec, sector, &ops, budget)
}
