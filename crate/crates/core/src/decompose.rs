//! Schmidt and Slater canonical forms of bipartite vectors.

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{fix_phase, inner, kron_all, svd, to_matrix, CMatrix, CVector};
use crate::tensor::{wedge, PureState};

pub const DEFAULT_RANK_CUTOFF: f64 = 1e-10;
/// Relative gap below which neighbouring singular values share a block.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// Blocks whose singular value is below this are dropped from a Slater form.
pub const SLATER_BLOCK_CUTOFF: f64 = 1e-12;
/// Singular values below this are numerical zeros and never reported.
const ZERO_COEFFICIENT: f64 = 1e-15;
const ANTISYMMETRY_TOL: f64 = 1e-10;
const PHASE_TOL: f64 = 1e-12;

/// `xi = sum_i lambda_i e_i ⊗ f_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtForm {
    pub coefficients: Vec<f64>,
    pub left_frame: Vec<CVector>,
    pub right_frame: Vec<CVector>,
}

impl SchmidtForm {
    pub fn reconstruct(&self) -> CVector {
        let n = self.left_frame.first().map_or(0, |v| v.len());
        let mut out = CVector::zeros(n * n);
        for ((c, e), f) in self
            .coefficients
            .iter()
            .zip(&self.left_frame)
            .zip(&self.right_frame)
        {
            out += kron_all(&[e.clone(), f.clone()]).scale(*c);
        }
        out
    }
}

/// `xi = sum_i lambda_i e_i ∧ f_i` with `{e_i} ∪ {f_i}` orthonormal.
#[derive(Debug, Clone, PartialEq)]
pub struct SlaterForm {
    pub coefficients: Vec<f64>,
    pub pair_frame: Vec<(CVector, CVector)>,
    /// Squared norm of blocks that fell below the cutoff and were dropped.
    pub truncated_weight: f64,
}

impl SlaterForm {
    pub fn reconstruct(&self) -> CVector {
        let n = self.pair_frame.first().map_or(0, |(e, _)| e.len());
        let mut out = CVector::zeros(n * n);
        for (c, (e, f)) in self.coefficients.iter().zip(&self.pair_frame) {
            out += wedge(&[e.clone(), f.clone()])
                .expect("pair of equal-length vectors")
                .scale(*c);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankKind {
    Schmidt,
    Slater,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankReport {
    pub rank: usize,
    pub kind: RankKind,
    pub numerical_cutoff: f64,
}

pub trait CanonicalForm {
    const KIND: RankKind;
    fn coefficients(&self) -> &[f64];
}

impl CanonicalForm for SchmidtForm {
    const KIND: RankKind = RankKind::Schmidt;
    fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }
}

impl CanonicalForm for SlaterForm {
    const KIND: RankKind = RankKind::Slater;
    fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }
}

pub fn rank<F: CanonicalForm>(form: &F, cutoff: f64) -> RankReport {
    RankReport {
        rank: form.coefficients().iter().filter(|&&c| c > cutoff).count(),
        kind: F::KIND,
        numerical_cutoff: cutoff,
    }
}

fn require_bipartite(state: &PureState) -> Result<()> {
    if state.parties() != 2 {
        return Err(Error::UnsupportedArity {
            expected: 2,
            found: state.parties(),
        });
    }
    Ok(())
}

pub(crate) fn coefficient_matrix(state: &PureState) -> CMatrix {
    let n = state.local_dim();
    to_matrix(state.amplitudes(), n, n)
}

/// Schmidt decomposition of the vector whose coefficient matrix is `m`.
pub(crate) fn schmidt_raw(m: &CMatrix) -> SchmidtForm {
    let d = svd(m);
    let mut out = SchmidtForm {
        coefficients: Vec::new(),
        left_frame: Vec::new(),
        right_frame: Vec::new(),
    };
    for (r, &s) in d.s.iter().enumerate() {
        if s <= ZERO_COEFFICIENT {
            continue;
        }
        let mut e = d.u.column(r).into_owned();
        let mut f = d.v_t.row(r).transpose();
        let phase = fix_phase(&mut e, PHASE_TOL);
        f *= phase.conj();
        out.coefficients.push(s);
        out.left_frame.push(e);
        out.right_frame.push(f);
    }
    out
}

pub fn schmidt_decompose(state: &PureState) -> Result<SchmidtForm> {
    require_bipartite(state)?;
    Ok(schmidt_raw(&coefficient_matrix(state)))
}

pub(crate) fn antisymmetry_residual(m: &CMatrix) -> f64 {
    (m + m.transpose()).norm() / 2.0
}

/// Slater form of an antisymmetric coefficient matrix.
///
/// Singular values are grouped into blocks of (relatively) equal value. On a
/// block the matrix acts as `s E F^T` with `span F = span E`, and pairs are
/// peeled off with `h = -B conj(g)`. With `strict`, an odd block above the
/// cutoff is an error; otherwise its unpaired direction is dropped.
pub(crate) fn slater_raw(m: &CMatrix, cutoff: f64, strict: bool) -> Result<SlaterForm> {
    let n = m.nrows();
    let d = svd(m);
    let mut form = SlaterForm {
        coefficients: Vec::new(),
        pair_frame: Vec::new(),
        truncated_weight: 0.0,
    };
    let mut start = 0;
    while start < d.s.len() {
        let head = d.s[start];
        let mut end = start + 1;
        while end < d.s.len() && (head - d.s[end]) <= DEGENERACY_TOL * head.max(f64::MIN_POSITIVE)
        {
            end += 1;
        }
        let block = start..end;
        start = end;
        if head <= cutoff {
            form.truncated_weight += block.map(|r| d.s[r] * d.s[r]).sum::<f64>();
            continue;
        }
        let dim = block.len();
        if dim % 2 == 1 && strict {
            return Err(Error::OddSlaterBlock { dim, value: head });
        }
        let e_cols: Vec<CVector> = block.clone().map(|r| d.u.column(r).into_owned()).collect();
        let mut b = CMatrix::zeros(n, n);
        for r in block {
            let f = d.v_t.row(r).transpose();
            b += (d.u.column(r) * f.transpose()).scale(d.s[r]);
        }
        let mut chosen: Vec<CVector> = Vec::new();
        for _ in 0..dim / 2 {
            // largest remaining direction of the block frame
            let mut best: Option<CVector> = None;
            let mut best_norm = 0.0;
            for e in &e_cols {
                let mut r = e.clone();
                for c in &chosen {
                    r -= c * inner(&r, c);
                }
                let rn = r.norm();
                if rn > best_norm {
                    best_norm = rn;
                    best = Some(r);
                }
            }
            let Some(mut g) = best else { break };
            if best_norm < 1e-6 {
                break;
            }
            g.unscale_mut(best_norm);
            fix_phase(&mut g, PHASE_TOL);
            let mut h = -(&b * g.conjugate());
            for c in &chosen {
                h -= c * inner(&h, c);
            }
            h -= &g * inner(&h, &g);
            let sigma = h.norm();
            if sigma <= cutoff {
                break;
            }
            h.unscale_mut(sigma);
            let term = (&g * h.transpose() - &h * g.transpose()).scale(sigma);
            b -= term;
            form.coefficients.push(Float::sqrt(2.0) * sigma);
            chosen.push(g.clone());
            chosen.push(h.clone());
            form.pair_frame.push((g, h));
        }
    }
    let mut order: Vec<usize> = (0..form.coefficients.len()).collect();
    order.sort_by(|&a, &b| form.coefficients[b].total_cmp(&form.coefficients[a]));
    form.coefficients = order.iter().map(|&i| form.coefficients[i]).collect();
    form.pair_frame = order.iter().map(|&i| form.pair_frame[i].clone()).collect();
    Ok(form)
}

pub fn slater_decompose(state: &PureState) -> Result<SlaterForm> {
    slater_decompose_with_cutoff(state, SLATER_BLOCK_CUTOFF)
}

pub fn slater_decompose_with_cutoff(state: &PureState, cutoff: f64) -> Result<SlaterForm> {
    require_bipartite(state)?;
    let m = coefficient_matrix(state);
    let residual = antisymmetry_residual(&m);
    if residual > ANTISYMMETRY_TOL {
        return Err(Error::NotAntisymmetric { residual });
    }
    slater_raw(&m, cutoff, true)
}

/// `A = sqrt(2) M` where `M` is the coefficient matrix of `xi`, so that
/// `xi = sum_{i<j} A_ij e_i ∧ e_j`.
pub fn antisymmetric_coefficient_matrix(state: &PureState) -> Result<CMatrix> {
    require_bipartite(state)?;
    let m = coefficient_matrix(state);
    let residual = antisymmetry_residual(&m);
    if residual > ANTISYMMETRY_TOL {
        return Err(Error::NotAntisymmetric { residual });
    }
    let a = m.scale(Float::sqrt(2.0));
    Ok((&a - a.transpose()).scale(0.5))
}
