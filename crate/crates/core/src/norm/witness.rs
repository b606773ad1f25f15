//! Operators with a certified bound on `‖x‖_K`, used for lower bounds on `q_K`.

use alloc::vec::Vec;

use super::members::{dual_ball_lmo, member_overlap_sup};
use super::spec::{Budget, Family, VSetSpec};
use crate::linalg::{factorial, hermitian_eigen, inner, outer, random_unit, stream_rng, CMatrix, CVector};
use crate::par::map_indexed;
use crate::tensor::{project_vector, projector_matrix, sector_isometry, SymmetrySector};

const EIGEN_STARTS: usize = 4;
const ASCENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// `x = P / bound` for a sector projector with `bound >= sup_{xi in V} ‖P xi‖^2`.
    SectorProjector { sector: SymmetrySector, bound: f64 },
    /// `x = psi psi^† / bound` with `bound >= sup_{xi in V} |<xi, psi>|^2`.
    RankOne { psi: CVector, bound: f64 },
    /// `x = 1 - P` for the sector carrying the family; it vanishes on `V`.
    SectorComplement { sector: SymmetrySector },
}

impl Witness {
    pub fn operator(&self, spec: &VSetSpec) -> CMatrix {
        let n = spec.local_dim();
        let k = spec.arity();
        match self {
            Witness::SectorProjector { sector, bound } => projector_matrix(n, k, *sector)
                .expect("valid sector")
                .unscale(*bound),
            Witness::RankOne { psi, bound } => outer(psi, psi).unscale(*bound),
            Witness::SectorComplement { sector } => {
                let dim = spec.dim();
                CMatrix::identity(dim, dim) - projector_matrix(n, k, *sector).expect("valid sector")
            }
        }
    }

    /// Proven upper bound on `‖operator‖_K`.
    pub fn norm_bound(&self) -> f64 {
        match self {
            Witness::SectorComplement { .. } => 0.0,
            _ => 1.0,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Witness::SectorProjector { .. } => "sector_projector",
            Witness::RankOne { .. } => "rank_one",
            Witness::SectorComplement { .. } => "sector_complement",
        }
    }
}

/// Weight of `rho` on a sector, `tr(P rho)`.
pub(crate) fn sector_weight(rho: &CMatrix, n: usize, k: usize, sector: SymmetrySector) -> f64 {
    if sector == SymmetrySector::Full {
        return rho.trace().re;
    }
    let b = sector_isometry(n, k, sector).expect("valid sector");
    (b.adjoint() * rho * &b).trace().re
}

/// Sector projectors with their proven `sup_V ‖P xi‖^2`.
fn projector_atoms(spec: &VSetSpec) -> Vec<(SymmetrySector, f64)> {
    let k = spec.arity();
    match spec.family() {
        Family::Tensor => {
            let mut atoms = alloc::vec![(SymmetrySector::Full, 1.0)];
            if k >= 2 {
                atoms.push((SymmetrySector::Bosonic, 1.0));
                if k <= spec.local_dim() {
                    let bound = if spec.rank_bound() == 1 {
                        1.0 / factorial(k) as f64
                    } else {
                        1.0
                    };
                    atoms.push((SymmetrySector::Fermionic, bound));
                }
            }
            atoms
        }
        Family::Wedge => alloc::vec![(SymmetrySector::Fermionic, 1.0)],
        Family::Vee => alloc::vec![(SymmetrySector::Bosonic, 1.0)],
    }
}

fn ratio(rho: &CMatrix, spec: &VSetSpec, psi: &CVector) -> f64 {
    let bound = member_overlap_sup(spec, psi);
    if !(bound > 0.0) {
        return 0.0;
    }
    inner(&(rho * psi), psi).re / bound
}

fn rank_one_ascent(rho: &CMatrix, spec: &VSetSpec, start: CVector, max_iters: usize) -> (f64, CVector) {
    let mut psi = start;
    let mut best = ratio(rho, spec, &psi);
    for _ in 0..max_iters {
        let Some(next) = dual_ball_lmo(spec, &(rho * &psi)) else {
            break;
        };
        let value = ratio(rho, spec, &next);
        if value <= best * (1.0 + ASCENT_TOL) {
            if value > best {
                psi = next;
                best = value;
            }
            break;
        }
        psi = next;
        best = value;
    }
    (best, psi)
}

/// Best certified witness found; the returned value is `|phi(x)|` with `‖x‖_K <= 1`.
pub(crate) fn search(rho: &CMatrix, spec: &VSetSpec, budget: &Budget) -> (f64, Witness) {
    let n = spec.local_dim();
    let k = spec.arity();
    let mut best: (f64, Witness) = (f64::NEG_INFINITY, Witness::SectorProjector {
        sector: SymmetrySector::Full,
        bound: 1.0,
    });
    for (sector, bound) in projector_atoms(spec) {
        let value = sector_weight(rho, n, k, sector) / bound;
        if value > best.0 {
            best = (value, Witness::SectorProjector { sector, bound });
        }
    }

    let (_, vectors) = hermitian_eigen(rho);
    let eigen_starts: Vec<CVector> = vectors.into_iter().rev().take(EIGEN_STARTS).collect();
    let spectral = eigen_starts.len();
    let total = spectral + budget.multistarts;
    let sector = spec.sector();
    let runs = map_indexed(total, |i| {
        let raw = if i < spectral {
            eigen_starts[i].clone()
        } else {
            let mut rng = stream_rng(budget.seed ^ 0x9e37_79b9_7f4a_7c15, i as u64);
            random_unit(&mut rng, spec.dim())
        };
        let start = project_vector(&raw, n, k, sector).expect("matching length");
        let norm = start.norm();
        if !(norm > 1e-12) {
            return (0.0, start);
        }
        rank_one_ascent(rho, spec, start.unscale(norm), budget.max_iters)
    });
    for (value, psi) in runs {
        if value > best.0 * (1.0 + ASCENT_TOL) {
            let unit = psi.unscale(psi.norm());
            let bound = member_overlap_sup(spec, &unit);
            let exact = inner(&(rho * &unit), &unit).re / bound;
            best = (exact, Witness::RankOne { psi: unit, bound });
        }
    }
    best
}
