//! Certified two-sided bounds on `q_K(phi)`.
//!
//! The lower side comes from a witness with a proven `‖x‖_K <= 1`. The upper
//! side comes from an explicit decomposition `rho = sum_j w_j (xi_j eta_j^† +
//! eta_j xi_j^†) / 2 + R` with `xi_j, eta_j in V`, found by column generation
//! on the membership program, plus a frame bound on the leftover `R`.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::estimate::estimate_runs;
use super::lp::{minimize, range_basis};
use super::members::{default_member, phase};
use super::spec::{Budget, Family, VSetSpec};
use super::witness::{search, sector_weight, Witness};
use crate::decompose::{schmidt_raw, slater_raw};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, hermitian_outer, svd, hermitian_to_real, inner, kron_all, random_unit,
    real_to_hermitian, stream_rng, takagi, to_matrix, CMatrix, CVector, C64,
};
use crate::tensor::{power, sector_isometry, DensityFunctional, SymmetrySector};

/// Weight outside the family's sector above which `q_K` is infinite.
pub const SECTOR_LEAK_TOL: f64 = 1e-10;
const PRICING_TOL: f64 = 1e-9;
const GAP_TOL: f64 = 1e-9;
const EIGEN_CUTOFF: f64 = 1e-13;
const DUPLICATE_TOL: f64 = 1e-10;
const MAX_NEW_COLUMNS: usize = 200;
/// Relative weight below which a column is folded into the residual.
const WEIGHT_CUTOFF: f64 = 1e-12;
/// Rounds without relative improvement above `STALL_TOL` before stopping.
const STALL_ROUNDS: usize = 4;
const STALL_TOL: f64 = 1e-6;
const CENTER_WEIGHTS: [f64; 2] = [0.2, 0.5];

/// Extended nonnegative real with an explicit `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn value(self) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            ExtReal::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinite => None,
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        use core::cmp::Ordering;
        match (self, other) {
            (ExtReal::Infinite, ExtReal::Infinite) => Some(Ordering::Equal),
            (ExtReal::Infinite, _) => Some(Ordering::Greater),
            (_, ExtReal::Infinite) => Some(Ordering::Less),
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl core::fmt::Display for ExtReal {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::Infinite => f.write_str("inf"),
        }
    }
}

/// How one side of a bracket was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMethod {
    ClosedForm,
    Witness,
    SectorLeak,
    ColumnGeneration,
    Disabled,
}

impl BoundMethod {
    pub fn name(self) -> &'static str {
        match self {
            BoundMethod::ClosedForm => "closed_form",
            BoundMethod::Witness => "witness",
            BoundMethod::SectorLeak => "sector_leak",
            BoundMethod::ColumnGeneration => "column_generation",
            BoundMethod::Disabled => "disabled",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionTerm {
    pub weight: f64,
    pub xi: CVector,
    pub eta: CVector,
}

/// `rho = sum_j w_j (xi_j eta_j^† + eta_j xi_j^†) / 2 + residual`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub terms: Vec<DecompositionTerm>,
    /// Frobenius norm of the residual.
    pub residual_norm: f64,
    /// Proven upper bound on `q_K` of the residual functional.
    pub residual_bound: f64,
}

impl Decomposition {
    pub fn total_weight(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    /// `sum_j w_j (xi_j eta_j^† + eta_j xi_j^†) / 2`.
    pub fn reconstruct(&self, dim: usize) -> CMatrix {
        let mut out = CMatrix::zeros(dim, dim);
        for t in &self.terms {
            out += hermitian_outer(&t.xi, &t.eta).scale(t.weight);
        }
        out
    }

    /// The certified upper bound carried by the decomposition.
    pub fn bound(&self) -> f64 {
        self.total_weight() + self.residual_bound
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormBracket {
    pub lower: ExtReal,
    pub upper: ExtReal,
    pub witness: Option<Witness>,
    pub decomposition: Option<Decomposition>,
    pub lower_method: BoundMethod,
    pub upper_method: BoundMethod,
    /// Membership programs solved while tightening the upper side.
    pub lp_rounds: usize,
}

impl NormBracket {
    pub fn exact(value: f64) -> Self {
        Self {
            lower: ExtReal::Finite(value),
            upper: ExtReal::Finite(value),
            witness: None,
            decomposition: None,
            lower_method: BoundMethod::ClosedForm,
            upper_method: BoundMethod::ClosedForm,
            lp_rounds: 0,
        }
    }

    /// Whether `value` lies in `[lower - tol, upper + tol]`.
    pub fn contains(&self, value: f64, tol: f64) -> bool {
        let above = match self.lower {
            ExtReal::Finite(l) => value >= l - tol,
            ExtReal::Infinite => false,
        };
        let below = match self.upper {
            ExtReal::Finite(u) => value <= u + tol,
            ExtReal::Infinite => true,
        };
        above && below
    }

    pub fn width(&self) -> ExtReal {
        match (self.lower, self.upper) {
            (ExtReal::Finite(l), ExtReal::Finite(u)) => ExtReal::Finite((u - l).max(0.0)),
            (ExtReal::Infinite, ExtReal::Infinite) => ExtReal::Finite(0.0),
            _ => ExtReal::Infinite,
        }
    }

    pub fn is_consistent(&self, tol: f64) -> bool {
        match (self.lower, self.upper) {
            (ExtReal::Finite(l), ExtReal::Finite(u)) => l <= u + tol,
            (ExtReal::Infinite, ExtReal::Finite(_)) => false,
            _ => true,
        }
    }
}

pub(crate) fn check_dims(phi: &DensityFunctional, spec: &VSetSpec) -> Result<()> {
    if phi.parties() != spec.arity() || phi.local_dim() != spec.local_dim() {
        return Err(Error::InvalidArgument(alloc::format!(
            "state on {} parties of dimension {} does not match family on {} parties of dimension {}",
            phi.parties(),
            phi.local_dim(),
            spec.arity(),
            spec.local_dim()
        )));
    }
    Ok(())
}

/// Certified bracket on `q_K(phi)` for the family `spec`.
pub fn q_bracket(phi: &DensityFunctional, spec: &VSetSpec, budget: &Budget) -> Result<NormBracket> {
    check_dims(phi, spec)?;
    let rho = phi.matrix();
    let n = spec.local_dim();
    let k = spec.arity();
    let sector = spec.sector();
    if sector != SymmetrySector::Full {
        let leak = 1.0 - sector_weight(rho, n, k, sector);
        if leak > SECTOR_LEAK_TOL {
            return Ok(NormBracket {
                lower: ExtReal::Infinite,
                upper: ExtReal::Infinite,
                witness: Some(Witness::SectorComplement { sector }),
                decomposition: None,
                lower_method: BoundMethod::SectorLeak,
                upper_method: BoundMethod::SectorLeak,
                lp_rounds: 0,
            });
        }
    }
    let (lower, witness) = search(rho, spec, budget);
    let mut bracket = NormBracket {
        lower: ExtReal::Finite(lower),
        upper: ExtReal::Infinite,
        witness: Some(witness),
        decomposition: None,
        lower_method: BoundMethod::Witness,
        upper_method: BoundMethod::Disabled,
        lp_rounds: 0,
    };
    if budget.lp_pool == 0 || budget.lp_rounds == 0 {
        return Ok(bracket);
    }
    let mut engine = Engine::new(rho, spec, budget)?;
    let center = bracket.witness.as_ref().map(|w| w.operator(spec));
    let (decomposition, rounds) = engine.run(lower, center);
    if let Some(d) = decomposition {
        bracket.upper = ExtReal::Finite(d.bound());
        bracket.decomposition = Some(d);
        bracket.upper_method = BoundMethod::ColumnGeneration;
    }
    bracket.lp_rounds = rounds;
    Ok(bracket)
}

/// Frame of `V`-members used to bound the residual functional.
enum ResidualFrame {
    /// The sector basis itself consists of members.
    Orthonormal,
    /// Members `f_j` spanning the sector, with `pinv` the pseudo-inverse of
    /// their sector coordinates.
    Spanning { members: Vec<CVector>, pinv: CMatrix },
}

struct Column {
    xi: CVector,
    eta: CVector,
    coords: Vec<f64>,
}

struct Engine<'a> {
    spec: &'a VSetSpec,
    budget: &'a Budget,
    iso: CMatrix,
    rho_s: CMatrix,
    target: Vec<f64>,
    frame: ResidualFrame,
    pool: Vec<Column>,
    rho: &'a CMatrix,
}

impl<'a> Engine<'a> {
    fn new(rho: &'a CMatrix, spec: &'a VSetSpec, budget: &'a Budget) -> Result<Self> {
        let n = spec.local_dim();
        let k = spec.arity();
        let iso = sector_isometry(n, k, spec.sector())?;
        let rho_s = iso.adjoint() * rho * &iso;
        let target = hermitian_to_real(&rho_s);
        let frame = match spec.family() {
            Family::Vee => {
                let m = iso.ncols();
                let mut rng = stream_rng(budget.seed ^ 0x0f0f_0f0f, 0);
                let members: Vec<CVector> =
                    (0..2 * m).map(|_| power(&random_unit(&mut rng, n), k)).collect();
                let coords = iso.adjoint() * CMatrix::from_columns(&members);
                let pinv = coords
                    .pseudo_inverse(1e-12)
                    .map_err(|e| Error::InvalidArgument(e.into()))?;
                ResidualFrame::Spanning { members, pinv }
            }
            _ => ResidualFrame::Orthonormal,
        };
        Ok(Self {
            spec,
            budget,
            iso,
            rho_s,
            target,
            frame,
            pool: Vec::new(),
            rho,
        })
    }

    fn frame_members(&self) -> Vec<CVector> {
        match &self.frame {
            ResidualFrame::Orthonormal => (0..self.iso.ncols())
                .map(|j| self.iso.column(j).into_owned())
                .collect(),
            ResidualFrame::Spanning { members, .. } => members.clone(),
        }
    }

    /// Coefficients of `v` (full coordinates) against the residual frame.
    fn frame_expansion(&self, v: &CVector) -> Vec<(C64, CVector)> {
        let members = self.frame_members();
        let coeffs: Vec<C64> = match &self.frame {
            ResidualFrame::Orthonormal => members.iter().map(|b| inner(v, b)).collect(),
            ResidualFrame::Spanning { pinv, .. } => {
                let c = pinv * (self.iso.adjoint() * v);
                c.iter().copied().collect()
            }
        };
        coeffs.into_iter().zip(members).collect()
    }

    fn residual_bound(&self, r_s: &CMatrix) -> f64 {
        let c = match &self.frame {
            ResidualFrame::Orthonormal => r_s.clone(),
            ResidualFrame::Spanning { pinv, .. } => pinv * r_s * pinv.adjoint(),
        };
        c.iter().map(|z| z.norm()).sum()
    }

    fn push(&mut self, xi: CVector, eta: CVector) -> bool {
        let xs = self.iso.adjoint() * &xi;
        let ys = self.iso.adjoint() * &eta;
        let h = hermitian_outer(&xs, &ys);
        if h.norm() < 1e-14 {
            return false;
        }
        let coords = hermitian_to_real(&h);
        let duplicate = self.pool.iter().any(|c| {
            let dist: f64 = c
                .coords
                .iter()
                .zip(&coords)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            let anti: f64 = c
                .coords
                .iter()
                .zip(&coords)
                .map(|(a, b)| (a + b) * (a + b))
                .sum();
            dist.min(anti) < DUPLICATE_TOL * DUPLICATE_TOL
        });
        if duplicate {
            return false;
        }
        self.pool.push(Column { xi, eta, coords });
        true
    }

    /// Adds the pairs of a member expansion `v = sum_a alpha_a zeta_a`, which
    /// exactly decompose `v v^†`.
    fn push_expansion(&mut self, expansion: &[(C64, CVector)]) {
        for a in 0..expansion.len() {
            for b in a..expansion.len() {
                let (alpha, ref za) = expansion[a];
                let (beta, ref zb) = expansion[b];
                if alpha.norm() * beta.norm() < 1e-15 {
                    continue;
                }
                let rotated = za * phase(alpha * beta.conj());
                self.push(rotated, zb.clone());
            }
        }
    }

    fn member_expansion(&self, v: &CVector) -> Vec<(C64, CVector)> {
        let n = self.spec.local_dim();
        let l = self.spec.rank_bound();
        if self.spec.arity() != 2 {
            return self.frame_expansion(v);
        }
        let chunked = |terms: Vec<(f64, CVector)>| -> Vec<(C64, CVector)> {
            terms
                .chunks(l)
                .filter_map(|chunk| {
                    let mut acc = CVector::zeros(n * n);
                    for (c, t) in chunk {
                        acc += t.scale(*c);
                    }
                    let norm = acc.norm();
                    (norm > 0.0).then(|| (C64::new(norm, 0.0), acc.unscale(norm)))
                })
                .collect()
        };
        match self.spec.family() {
            Family::Tensor => {
                let form = schmidt_raw(&to_matrix(v, n, n));
                chunked(
                    form.coefficients
                        .iter()
                        .zip(form.left_frame.iter().zip(&form.right_frame))
                        .map(|(c, (e, f))| (*c, kron_all(&[e.clone(), f.clone()])))
                        .collect(),
                )
            }
            Family::Wedge => match slater_raw(&to_matrix(v, n, n), 1e-14, false) {
                Ok(form) => chunked(
                    form.coefficients
                        .iter()
                        .zip(&form.pair_frame)
                        .map(|(c, (e, f))| {
                            (*c, crate::tensor::wedge(&[e.clone(), f.clone()]).expect("pair"))
                        })
                        .collect(),
                ),
                Err(_) => self.frame_expansion(v),
            },
            Family::Vee => {
                let (sigma, us) = takagi(&to_matrix(v, n, n));
                sigma
                    .into_iter()
                    .zip(us)
                    .filter(|(s, _)| *s > 1e-15)
                    .map(|(s, u)| (C64::new(s, 0.0), kron_all(&[u.clone(), u])))
                    .collect()
            }
        }
    }

    fn seed_spectral(&mut self) {
        let (values, vectors) = hermitian_eigen(self.rho);
        for (p, v) in values.into_iter().zip(vectors).rev() {
            if p <= EIGEN_CUTOFF {
                continue;
            }
            let expansion = self.member_expansion(&v);
            self.push_expansion(&expansion);
        }
    }

    /// Operator Schmidt terms `rho = sum_j s_j A_j ⊗ B_j` split into rank-one
    /// pieces, giving product pairs with total weight `sum_j s_j ‖A_j‖_1 ‖B_j‖_1`.
    fn seed_operator_schmidt(&mut self) {
        let n = self.spec.local_dim();
        if self.spec.family() != Family::Tensor || self.spec.arity() != 2 {
            return;
        }
        // realigned matrix: row (i, k), column (j, l) holds rho[(i j), (k l)]
        let realigned = CMatrix::from_fn(n * n, n * n, |r, c| {
            let (i, k) = (r / n, r % n);
            let (j, l) = (c / n, c % n);
            self.rho[(i * n + j, k * n + l)]
        });
        let d = svd(&realigned);
        let top = d.s.first().copied().unwrap_or(0.0);
        for (t, &s) in d.s.iter().enumerate() {
            if s <= EIGEN_CUTOFF * top.max(1.0) {
                break;
            }
            let a = to_matrix(&d.u.column(t).into_owned(), n, n);
            let b = to_matrix(&d.v_t.row(t).transpose(), n, n);
            let da = svd(&a);
            let db = svd(&b);
            for p in 0..n {
                if da.s[p] <= EIGEN_CUTOFF {
                    break;
                }
                for q in 0..n {
                    if db.s[q] <= EIGEN_CUTOFF {
                        break;
                    }
                    let xi = kron_all(&[da.u.column(p).into_owned(), db.u.column(q).into_owned()]);
                    let eta = kron_all(&[
                        da.v_t.row(p).adjoint(),
                        db.v_t.row(q).adjoint(),
                    ]);
                    self.push(xi, eta);
                }
            }
        }
    }

    fn seed_frame(&mut self) {
        let members = self.frame_members();
        let i_unit = C64::new(0.0, 1.0);
        for a in 0..members.len() {
            for b in a..members.len() {
                self.push(members[a].clone(), members[b].clone());
                if a != b {
                    self.push(members[a].scale(1.0) * i_unit, members[b].clone());
                }
            }
        }
    }

    /// Solves the membership program over the current pool, with elastic
    /// columns `±q_i` along an orthonormal basis of the active rows priced at
    /// their residual bound, so the program is always feasible. Returns the
    /// certificate, the pool weights and the dual operator in full coordinates.
    fn solve(&self) -> (Decomposition, Vec<f64>, CMatrix) {
        let rows = self.target.len();
        let m = self.rho_s.nrows();
        let p = self.pool.len();
        let a = DMatrix::from_fn(rows, 2 * p, |i, j| {
            let v = self.pool[j / 2].coords[i];
            if j % 2 == 0 {
                v
            } else {
                -v
            }
        });
        let q = range_basis(&a, &self.target);
        let r = q.ncols();
        let a_pool = q.transpose() * &a;
        let a_red = DMatrix::from_fn(r, 2 * p + 2 * r, |i, j| {
            if j < 2 * p {
                a_pool[(i, j)]
            } else {
                let e = (j - 2 * p) / 2;
                let sign = if (j - 2 * p) % 2 == 0 { 1.0 } else { -1.0 };
                if e == i {
                    sign
                } else {
                    0.0
                }
            }
        });
        let b_full = DVector::from_column_slice(&self.target);
        let b_red = q.transpose() * &b_full;
        let mut costs = alloc::vec![1.0; 2 * p];
        for i in 0..r {
            let direction: Vec<f64> = q.column(i).iter().copied().collect();
            let kappa = self.residual_bound(&real_to_hermitian(&direction, m)).max(1.0);
            costs.push(kappa);
            costs.push(kappa);
        }
        let result = minimize(&a_red, b_red.as_slice(), &costs);

        let weights: Vec<f64> = (0..p).map(|j| result.x[2 * j] - result.x[2 * j + 1]).collect();
        let largest = weights.iter().fold(0.0f64, |acc, w| acc.max(w.abs()));
        let mut terms = Vec::new();
        let mut approx = CMatrix::zeros(m, m);
        for (col, &w) in self.pool.iter().zip(&weights) {
            // negligible weights are left to the residual
            if w.abs() <= WEIGHT_CUTOFF * largest {
                continue;
            }
            let xi = if w > 0.0 { col.xi.clone() } else { -col.xi.clone() };
            approx += real_to_hermitian(&col.coords, m).scale(w);
            terms.push(DecompositionTerm {
                weight: w.abs(),
                xi,
                eta: col.eta.clone(),
            });
        }
        let residual = &self.rho_s - approx;
        let decomposition = Decomposition {
            terms,
            residual_norm: residual.norm(),
            residual_bound: self.residual_bound(&residual),
        };
        let y_full: Vec<f64> = (&q * DVector::from_vec(result.dual)).iter().copied().collect();
        let y_sector = real_to_hermitian(&y_full, m);
        let dual = &self.iso * y_sector * self.iso.adjoint();
        (decomposition, weights, dual)
    }

    /// Keeps the heaviest columns of the last solution, then the newest.
    fn prune(&mut self, weights: &[f64]) {
        let cap = self.budget.lp_pool;
        if self.pool.len() <= cap {
            return;
        }
        let largest = weights.iter().fold(0.0f64, |acc, w| acc.max(w.abs()));
        let mut heavy: Vec<usize> = (0..weights.len())
            .filter(|&j| weights[j].abs() > WEIGHT_CUTOFF * largest)
            .collect();
        heavy.sort_by(|&x, &y| weights[y].abs().total_cmp(&weights[x].abs()));
        heavy.truncate(cap / 2);
        let mut keep = alloc::vec![false; self.pool.len()];
        for &j in &heavy {
            keep[j] = true;
        }
        let mut left = cap - heavy.len();
        for j in (0..self.pool.len()).rev() {
            if left == 0 {
                break;
            }
            if !keep[j] {
                keep[j] = true;
                left -= 1;
            }
        }
        let mut idx = 0;
        self.pool.retain(|_| {
            let k = keep[idx];
            idx += 1;
            k
        });
    }

    /// Adds violated columns: the ascent pairs themselves, then every pair of
    /// distinct members they visited, most violated first.
    fn price(&mut self, dual: &CMatrix, runs: Vec<super::estimate::NormEstimate>) -> usize {
        let mut members: Vec<CVector> = Vec::new();
        for r in &runs {
            for v in [&r.xi, &r.eta] {
                if !members.iter().any(|m| inner(m, v).norm() > 1.0 - DUPLICATE_TOL) {
                    members.push(v.clone());
                }
            }
        }
        let images: Vec<CVector> = members.iter().map(|m| dual * m).collect();
        let mut candidates: Vec<(f64, usize, usize, C64)> = Vec::new();
        for a in 0..members.len() {
            for b in 0..members.len() {
                let z = inner(&images[a], &members[b]);
                if z.norm() > 1.0 + PRICING_TOL {
                    candidates.push((z.norm(), a, b, z));
                }
            }
        }
        candidates.sort_by(|x, y| y.0.total_cmp(&x.0));
        let mut added = 0;
        for (_, a, b, z) in candidates.into_iter().take(MAX_NEW_COLUMNS) {
            let xi = &members[a] * phase(z).conj();
            if self.push(xi, members[b].clone()) {
                added += 1;
            }
        }
        added
    }

    /// Column generation. `center` is a dual point with `‖center‖_K <= 1`;
    /// pricing also runs at convex combinations with the current dual. Columns
    /// violated there are violated by the dual itself, and the combinations
    /// keep the search near the optimal face when the dual is degenerate.
    fn run(&mut self, lower: f64, center: Option<CMatrix>) -> (Option<Decomposition>, usize) {
        let mut center = center.map(|w| {
            let p = &self.iso * self.iso.adjoint();
            &p * w * &p
        });
        if self.budget.spectral_seed {
            self.seed_spectral();
            self.seed_operator_schmidt();
        }
        if self.pool.is_empty() {
            self.seed_frame();
        }
        if self.pool.is_empty() {
            let m = default_member(self.spec);
            self.push(m.clone(), m);
        }
        let mut best: Option<Decomposition> = None;
        let mut rounds = 0;
        let mut stalled = 0;
        while rounds < self.budget.lp_rounds {
            rounds += 1;
            let (decomposition, weights, dual) = self.solve();
            let bound = decomposition.bound();
            match best.as_ref().map(Decomposition::bound) {
                Some(previous) if bound >= previous * (1.0 - STALL_TOL) => stalled += 1,
                _ => stalled = 0,
            }
            if best.as_ref().map_or(true, |b| bound < b.bound()) {
                best = Some(decomposition);
            }
            if stalled >= STALL_ROUNDS {
                break;
            }
            let current = best.as_ref().expect("set above").bound();
            if current - lower <= GAP_TOL * current {
                break;
            }
            let mut added = 0;
            // in-out pricing: mixes the center cannot separate become the new center
            if let Some(w) = center.clone() {
                for t in CENTER_WEIGHTS {
                    let mix = dual.scale(1.0 - t) + w.scale(t);
                    let Ok(runs) = estimate_runs(&mix, self.spec, self.budget) else {
                        break;
                    };
                    let peak = runs.iter().map(|r| r.value).fold(0.0, f64::max);
                    if peak <= 1.0 + PRICING_TOL {
                        center = Some(mix);
                        break;
                    }
                    added += self.price(&dual, runs);
                }
            }
            if let Ok(runs) = estimate_runs(&dual, self.spec, self.budget) {
                added += self.price(&dual, runs);
            }
            if added == 0 {
                break;
            }
            self.prune(&weights);
        }
        (best, rounds)
    }
}
