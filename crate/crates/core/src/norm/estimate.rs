//! Multistart alternating maximization of `|<x xi, eta>|` over `xi, eta in V`.

use alloc::vec::Vec;

use super::members::{best_response, sample};
use super::spec::{Budget, VSetSpec};
use crate::error::{Error, Result};
use crate::linalg::{inner, stream_rng, svd, CMatrix, CVector};
use crate::par::map_indexed;

const RELATIVE_IMPROVEMENT: f64 = 1e-10;
/// Deterministic starts taken from the leading right singular vectors.
const SPECTRAL_STARTS: usize = 3;

/// A feasible pair and its value; `value` is a lower bound on `‖x‖_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub xi: CVector,
    pub eta: CVector,
}

fn ascend(op: &CMatrix, adjoint: &CMatrix, spec: &VSetSpec, start: CVector, max_iters: usize) -> NormEstimate {
    let mut xi = start;
    let (mut eta, mut value) = best_response(spec, &(op * &xi));
    for _ in 0..max_iters {
        let (next_xi, _) = best_response(spec, &(adjoint * &eta));
        let (next_eta, next_value) = best_response(spec, &(op * &next_xi));
        if next_value <= value * (1.0 + RELATIVE_IMPROVEMENT) {
            if next_value > value {
                xi = next_xi;
                eta = next_eta;
            }
            break;
        }
        xi = next_xi;
        eta = next_eta;
        value = next_value;
    }
    // recompute from the final pair so the reported value is exactly feasible
    let exact = inner(&(op * &xi), &eta).norm();
    NormEstimate {
        value: exact,
        xi,
        eta,
    }
}

/// One ascent per start, in start order. Starts are the leading right singular
/// vectors of `op` mapped into `V`, then seeded random members.
pub(crate) fn estimate_runs(op: &CMatrix, spec: &VSetSpec, budget: &Budget) -> Result<Vec<NormEstimate>> {
    let dim = spec.dim();
    if op.nrows() != dim || op.ncols() != dim {
        return Err(Error::InvalidArgument(alloc::format!(
            "operator is {}x{}, family acts on dimension {dim}",
            op.nrows(),
            op.ncols()
        )));
    }
    let adjoint = op.adjoint();
    let d = svd(op);
    let spectral = SPECTRAL_STARTS.min(dim);
    let total = budget.multistarts.max(1) + spectral;
    let runs = map_indexed(total, |i| {
        let start = if i < spectral {
            best_response(spec, &d.v_t.row(i).adjoint()).0
        } else {
            let mut rng = stream_rng(budget.seed, i as u64);
            sample(spec, &mut rng)
        };
        ascend(op, &adjoint, spec, start, budget.max_iters)
    });
    Ok(runs)
}

/// Lower estimate of `‖op‖_K = sup |<op xi, eta>|` with the maximizing pair.
pub fn estimate_k_norm(op: &CMatrix, spec: &VSetSpec, budget: &Budget) -> Result<NormEstimate> {
    let runs = estimate_runs(op, spec, budget)?;
    Ok(runs
        .into_iter()
        .reduce(|best, r| if r.value > best.value { r } else { best })
        .expect("at least one start"))
}
