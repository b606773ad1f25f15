//! Operations on members of a vector family `V`.
//!
//! Members are always handled as full vectors of `(C^n)^{⊗k}`.

use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;

use super::spec::{Family, VSetSpec};
use crate::decompose::slater_raw;
use crate::linalg::{
    basis_vector, decreasing_isotonic, factorial, from_matrix, inner, kron_all, op_norm,
    random_unit, random_vector, svd, takagi, to_matrix, CMatrix, CVector, C64, ONE,
};
use crate::tensor::{multi_index, power, project_vector, wedge, SymmetrySector};

const SWEEPS: usize = 60;
const SWEEP_TOL: f64 = 1e-13;

/// Party `slot` as rows, remaining parties (in order) as columns.
pub(crate) fn flattening(v: &CVector, n: usize, k: usize, slot: usize) -> CMatrix {
    let cols = v.len() / n;
    let mut m = CMatrix::zeros(n, cols);
    for idx in 0..v.len() {
        let multi = multi_index(idx, n, k);
        let col = multi
            .iter()
            .enumerate()
            .filter(|&(s, _)| s != slot)
            .fold(0, |acc, (_, &i)| acc * n + i);
        m[(multi[slot], col)] = v[idx];
    }
    m
}

/// `c_i = sum_{I : i_slot = i} prod_{m != slot} a_m[i_m] conj(y_I)`, so that
/// `<⊗a, y> = sum_i a_slot[i] c_i`.
fn contract_except(y: &CVector, factors: &[CVector], n: usize, slot: usize) -> CVector {
    let k = factors.len();
    let mut c = CVector::zeros(n);
    for idx in 0..y.len() {
        let multi = multi_index(idx, n, k);
        let mut w = y[idx].conj();
        for (m, &i) in multi.iter().enumerate() {
            if m != slot {
                w *= factors[m][i];
            }
        }
        c[multi[slot]] += w;
    }
    c
}

fn normalize(v: CVector) -> Option<CVector> {
    let n = v.norm();
    if n > 0.0 && n.is_finite() {
        Some(v.unscale(n))
    } else {
        None
    }
}

/// Some fixed member of the family, used when the target has no overlap with it.
pub fn default_member(spec: &VSetSpec) -> CVector {
    let n = spec.local_dim();
    let k = spec.arity();
    match spec.family() {
        Family::Tensor | Family::Vee => power(&basis_vector(n, 0), k),
        Family::Wedge => {
            let vs: Vec<CVector> = (0..k).map(|i| basis_vector(n, i)).collect();
            wedge(&vs).expect("k <= n basis vectors")
        }
    }
}

/// Rotate `xi` so that `<xi, y>` is real and nonnegative.
fn align(mut xi: CVector, y: &CVector) -> (CVector, f64) {
    let z = inner(&xi, y);
    let value = z.norm();
    if value > 0.0 {
        xi *= z.conj() / value;
    }
    (xi, value)
}

/// A member `xi` maximizing `|<xi, y>|`, rotated so the overlap is real and
/// nonnegative, together with the overlap. Exact for two parties.
pub fn best_response(spec: &VSetSpec, y: &CVector) -> (CVector, f64) {
    let n = spec.local_dim();
    let k = spec.arity();
    let l = spec.rank_bound();
    let candidate = match (spec.family(), k) {
        (Family::Tensor, 2) => {
            let d = svd(&to_matrix(y, n, n));
            let keep = l.min(d.s.len());
            normalize(from_matrix(&d.rebuild(&d.s[..keep])))
        }
        (Family::Wedge, 2) => {
            let ya = project_vector(y, n, 2, SymmetrySector::Fermionic).expect("matching length");
            let form = slater_raw(&to_matrix(&ya, n, n), 0.0, false).expect("lenient mode");
            let mut acc = CVector::zeros(n * n);
            for (c, (e, f)) in form.coefficients.iter().zip(&form.pair_frame).take(l) {
                acc += wedge(&[e.clone(), f.clone()]).expect("pair").scale(*c);
            }
            normalize(acc)
        }
        (Family::Vee, 2) => {
            let m = to_matrix(y, n, n).map(|z| z.conj());
            let (_, us) = takagi(&m);
            let a = us[0].map(|z| z.conj());
            Some(kron_all(&[a.clone(), a]))
        }
        (Family::Tensor, _) => product_response(y, n, k),
        (Family::Wedge, _) => wedge_response(y, n, k),
        (Family::Vee, _) => symmetric_response(y, n, k),
    };
    align(candidate.unwrap_or_else(|| default_member(spec)), y)
}

fn top_left_singular(m: &CMatrix, index: usize) -> CVector {
    let d = svd(m);
    d.u.column(index.min(d.u.ncols() - 1)).into_owned()
}

fn product_response(y: &CVector, n: usize, k: usize) -> Option<CVector> {
    let mut factors: Vec<CVector> = (0..k)
        .map(|slot| top_left_singular(&flattening(y, n, k, slot), 0))
        .collect();
    let mut last = 0.0;
    for _ in 0..SWEEPS {
        let mut value = 0.0;
        for slot in 0..k {
            let c = contract_except(y, &factors, n, slot);
            value = c.norm();
            factors[slot] = normalize(c.map(|z| z.conj()))?;
        }
        if value - last <= SWEEP_TOL * value.max(1.0) {
            break;
        }
        last = value;
    }
    Some(kron_all(&factors))
}

fn wedge_response(y: &CVector, n: usize, k: usize) -> Option<CVector> {
    let ya = project_vector(y, n, k, SymmetrySector::Fermionic).ok()?;
    let d = svd(&flattening(&ya, n, k, 0));
    let mut factors: Vec<CVector> = (0..k).map(|i| d.u.column(i).into_owned()).collect();
    let mut last = 0.0;
    for _ in 0..SWEEPS {
        let mut value = 0.0;
        for slot in 0..k {
            let c = contract_except(&ya, &factors, n, slot);
            value = c.norm();
            let mut a = c.map(|z| z.conj());
            for (m, f) in factors.iter().enumerate() {
                if m != slot {
                    a -= f * inner(&a, f);
                }
            }
            match normalize(a) {
                Some(a) => factors[slot] = a,
                None => break,
            }
        }
        if value - last <= SWEEP_TOL * value.max(1.0) {
            break;
        }
        last = value;
    }
    normalize(wedge(&factors).ok()?)
}

fn symmetric_response(y: &CVector, n: usize, k: usize) -> Option<CVector> {
    let ys = project_vector(y, n, k, SymmetrySector::Bosonic).ok()?;
    let mut a = top_left_singular(&flattening(&ys, n, k, 0), 0);
    let mut best = (inner(&power(&a, k), &ys).norm(), a.clone());
    for _ in 0..SWEEPS {
        let copies: Vec<CVector> = (0..k).map(|_| a.clone()).collect();
        let c = contract_except(&ys, &copies, n, 0);
        // shifted power step keeps the iteration from oscillating
        let shifted = c.map(|z| z.conj()) + a.scale(best.0);
        a = normalize(shifted)?;
        let value = inner(&power(&a, k), &ys).norm();
        if value <= best.0 * (1.0 + SWEEP_TOL) {
            if value > best.0 {
                best = (value, a.clone());
            }
            break;
        }
        best = (value, a.clone());
    }
    Some(power(&best.1, k))
}

/// A random member of the family.
pub fn sample<R: Rng + ?Sized>(spec: &VSetSpec, rng: &mut R) -> CVector {
    let n = spec.local_dim();
    let k = spec.arity();
    let l = spec.rank_bound();
    let v = match spec.family() {
        Family::Tensor if k == 2 && l > 1 => {
            let mut acc = CVector::zeros(n * n);
            for _ in 0..l {
                acc += kron_all(&[random_vector(rng, n), random_vector(rng, n)]);
            }
            acc
        }
        Family::Tensor => {
            let fs: Vec<CVector> = (0..k).map(|_| random_unit(rng, n)).collect();
            kron_all(&fs)
        }
        Family::Wedge if k == 2 && l > 1 => {
            let mut acc = CVector::zeros(n * n);
            for _ in 0..l {
                acc += wedge(&[random_vector(rng, n), random_vector(rng, n)]).expect("pair");
            }
            acc
        }
        Family::Wedge => {
            let fs: Vec<CVector> = (0..k).map(|_| random_vector(rng, n)).collect();
            wedge(&fs).expect("nonempty")
        }
        Family::Vee => power(&random_unit(rng, n), k),
    };
    normalize(v).unwrap_or_else(|| default_member(spec))
}

/// Certified upper bound on `sup_{xi in V} |<xi, psi>|^2`; exact for two parties.
pub fn member_overlap_sup(spec: &VSetSpec, psi: &CVector) -> f64 {
    let n = spec.local_dim();
    let k = spec.arity();
    let l = spec.rank_bound();
    if k == 2 {
        match spec.family() {
            Family::Tensor => {
                let d = svd(&to_matrix(psi, n, n));
                d.s.iter().take(l).map(|s| s * s).sum()
            }
            Family::Wedge => {
                let pa = project_vector(psi, n, 2, SymmetrySector::Fermionic).expect("length");
                let d = svd(&to_matrix(&pa, n, n));
                d.s.iter().take(2 * l).map(|s| s * s).sum()
            }
            Family::Vee => {
                let ps = project_vector(psi, n, 2, SymmetrySector::Bosonic).expect("length");
                let s = op_norm(&to_matrix(&ps, n, n));
                s * s
            }
        }
    } else {
        let (target, scale) = match spec.family() {
            Family::Tensor => (psi.clone(), 1.0),
            Family::Wedge => (
                project_vector(psi, n, k, SymmetrySector::Fermionic).expect("length"),
                factorial(k) as f64,
            ),
            Family::Vee => (
                project_vector(psi, n, k, SymmetrySector::Bosonic).expect("length"),
                1.0,
            ),
        };
        let best = (0..k)
            .map(|slot| op_norm(&flattening(&target, n, k, slot)))
            .fold(f64::INFINITY, f64::min);
        scale * best * best
    }
}

/// A maximizer of `Re <g, psi>` over `{psi : member_overlap_sup(psi) <= 1}`.
/// Exact for two parties; a normalized power step otherwise.
pub fn dual_ball_lmo(spec: &VSetSpec, g: &CVector) -> Option<CVector> {
    let n = spec.local_dim();
    let k = spec.arity();
    let sector = spec.sector();
    let g = project_vector(g, n, k, sector).ok()?;
    if k != 2 {
        let bound = member_overlap_sup(spec, &g);
        return if bound > 0.0 {
            Some(g.unscale(Float::sqrt(bound)))
        } else {
            None
        };
    }
    let width = match spec.family() {
        Family::Tensor => spec.rank_bound(),
        Family::Wedge => 2 * spec.rank_bound(),
        Family::Vee => 1,
    };
    let d = svd(&to_matrix(&g, n, n));
    let top = d.s.first().copied().unwrap_or(0.0);
    if !(top > 0.0) {
        return None;
    }
    let live = d.s.iter().take_while(|&&s| s > 1e-14 * top).count();
    let width = width.min(live);
    let mut w: Vec<f64> = d.s[..width - 1].to_vec();
    w.push(d.s[width - 1..live].iter().sum());
    let mut head = decreasing_isotonic(&w);
    let norm = Float::sqrt(head.iter().map(|x| x * x).sum::<f64>());
    for x in head.iter_mut() {
        *x /= norm;
    }
    let mut profile = head.clone();
    let tail = head[width - 1];
    profile.extend(core::iter::repeat(tail).take(live - width));
    let psi = from_matrix(&d.rebuild(&profile));
    project_vector(&psi, n, k, sector).ok()
}

/// Whether `v` belongs to the family up to `tol`.
pub fn is_member(spec: &VSetSpec, v: &CVector, tol: f64) -> bool {
    if v.len() != spec.dim() || (v.norm() - 1.0).abs() > tol {
        return false;
    }
    let (_, overlap) = best_response(spec, v);
    overlap >= 1.0 - tol
}

/// Phase factor with unit modulus.
pub(crate) fn phase(z: C64) -> C64 {
    let r = z.norm();
    if r > 0.0 {
        z / r
    } else {
        ONE
    }
}
