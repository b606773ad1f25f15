//! Dense primal-dual interior-point method for `min c^T x` subject to
//! `A x = b`, `x >= 0`, with `A` of full row rank.

use alloc::vec::Vec;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use num_traits::Float;

const MAX_ITERS: usize = 120;
const TOLERANCE: f64 = 1e-11;
const STEP_FRACTION: f64 = 0.995;
const REFINEMENT_STEPS: usize = 3;

#[derive(Debug, Clone)]
pub(crate) struct LpResult {
    pub x: Vec<f64>,
    /// Row multipliers `y` with dual slacks `c - A^T y >= 0`.
    pub dual: Vec<f64>,
}

fn max_step(v: &DVector<f64>, dv: &DVector<f64>) -> f64 {
    v.iter()
        .zip(dv.iter())
        .filter(|(_, &d)| d < 0.0)
        .map(|(&x, &d)| -x / d)
        .fold(1.0, f64::min)
}

/// Factorization of `A D A^T`, regularized as needed, with iterative
/// refinement against the unregularized matrix.
struct NormalSystem {
    m: DMatrix<f64>,
    factor: Cholesky<f64, Dyn>,
}

impl NormalSystem {
    fn new(a: &DMatrix<f64>, d: &DVector<f64>) -> Option<Self> {
        let scaled = DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * Float::sqrt(d[j]));
        let m = &scaled * scaled.transpose();
        let mut delta = 1e-15 * m.diagonal().amax().max(1e-300);
        for _ in 0..10 {
            let mut reg = m.clone();
            for i in 0..reg.nrows() {
                reg[(i, i)] += delta;
            }
            if let Some(factor) = reg.cholesky() {
                return Some(Self { m, factor });
            }
            delta *= 100.0;
        }
        None
    }

    fn solve(&self, r: &DVector<f64>) -> DVector<f64> {
        let mut z = self.factor.solve(r);
        for _ in 0..REFINEMENT_STEPS {
            let correction = self.factor.solve(&(r - &self.m * &z));
            z += correction;
        }
        z
    }
}

/// Mehrotra predictor-corrector. The program must be feasible and bounded.
pub(crate) fn minimize(a: &DMatrix<f64>, b: &[f64], c: &[f64]) -> LpResult {
    let n = a.ncols();
    let b = DVector::from_column_slice(b);
    let c = DVector::from_column_slice(c);
    let at = a.transpose();
    let ones = DVector::from_element(n, 1.0);

    // starting point from the least-squares solutions
    let (mut x, mut y) = match NormalSystem::new(a, &ones) {
        Some(system) => (&at * system.solve(&b), system.solve(&(a * &c))),
        None => (ones.clone(), DVector::zeros(a.nrows())),
    };
    let mut s = &c - &at * &y;
    let dx = (-1.5 * x.min()).max(0.0);
    let ds = (-1.5 * s.min()).max(0.0);
    x.add_scalar_mut(dx);
    s.add_scalar_mut(ds);
    let xs = x.dot(&s);
    x.add_scalar_mut(0.5 * xs / s.sum().max(1e-300) + 1e-12);
    s.add_scalar_mut(0.5 * xs / x.sum().max(1e-300) + 1e-12);

    let b_scale = 1.0 + b.amax();
    let c_scale = 1.0 + c.amax();
    for _ in 0..MAX_ITERS {
        let rb = a * &x - &b;
        let rc = &at * &y + &s - &c;
        let mu = x.dot(&s) / n as f64;
        let objective = c.dot(&x);
        if rb.amax() <= TOLERANCE * b_scale
            && rc.amax() <= TOLERANCE * c_scale
            && n as f64 * mu <= TOLERANCE * (1.0 + objective.abs())
        {
            break;
        }
        let d = x.component_div(&s);
        let Some(system) = NormalSystem::new(a, &d) else {
            break;
        };
        let direction = |r_xs: &DVector<f64>| -> (DVector<f64>, DVector<f64>, DVector<f64>) {
            let inner = r_xs.component_div(&s) + d.component_mul(&rc);
            let rhs = -&rb - a * &inner;
            let dy = system.solve(&rhs);
            let ds = -&rc - &at * &dy;
            let dx = r_xs.component_div(&s) - d.component_mul(&ds);
            (dx, dy, ds)
        };
        let affine_rhs = -x.component_mul(&s);
        let (dx_a, _, ds_a) = direction(&affine_rhs);
        let ap = max_step(&x, &dx_a);
        let ad = max_step(&s, &ds_a);
        let mu_aff = (&x + &dx_a * ap).dot(&(&s + &ds_a * ad)) / n as f64;
        let sigma = (mu_aff / mu).powi(3).min(1.0);
        let corrector = &affine_rhs - dx_a.component_mul(&ds_a) + DVector::from_element(n, sigma * mu);
        let (dx, dy, ds) = direction(&corrector);
        let ap = (STEP_FRACTION * max_step(&x, &dx)).min(1.0);
        let ad = (STEP_FRACTION * max_step(&s, &ds)).min(1.0);
        x += &dx * ap;
        y += &dy * ad;
        s += &ds * ad;
        if !x.iter().chain(y.iter()).all(|v| v.is_finite()) {
            break;
        }
    }
    LpResult {
        x: x.iter().map(|v| v.max(0.0)).collect(),
        dual: y.iter().copied().collect(),
    }
}

/// Orthonormal basis (as columns) of the span of `b` and the columns of `a`.
pub(crate) fn range_basis(a: &DMatrix<f64>, b: &[f64]) -> DMatrix<f64> {
    let rows = a.nrows();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let push = |basis: &mut Vec<Vec<f64>>, v: &[f64]| {
        let scale: f64 = Float::sqrt(v.iter().map(|x| x * x).sum::<f64>());
        if scale == 0.0 {
            return;
        }
        let mut w = v.to_vec();
        for _ in 0..2 {
            for q in basis.iter() {
                let d: f64 = w.iter().zip(q).map(|(x, y)| x * y).sum();
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= d * qi;
                }
            }
        }
        let norm: f64 = Float::sqrt(w.iter().map(|x| x * x).sum::<f64>());
        if norm > 1e-10 * scale {
            for wi in w.iter_mut() {
                *wi /= norm;
            }
            basis.push(w);
        }
    };
    push(&mut basis, b);
    for j in 0..a.ncols() {
        if basis.len() == rows {
            break;
        }
        let col: Vec<f64> = a.column(j).iter().copied().collect();
        push(&mut basis, &col);
    }
    DMatrix::from_fn(rows, basis.len(), |i, j| basis[j][i])
}
