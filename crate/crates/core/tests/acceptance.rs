//! Acceptance suite. Runs each criterion against oracles built here from
//! nalgebra and rand directly, prints one line per criterion and exits
//! non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use qgauge_core::decompose::{antisymmetric_coefficient_matrix, rank, schmidt_decompose, slater_decompose};
use qgauge_core::norm::{
    check_compatibility, check_contraction, estimate_k_norm, fermionic_coupling, is_member, q_bracket,
    q_pure_closed_form, verdict, Budget, ExtReal, Family, NormBracket, Status, VSetSpec,
};
use qgauge_core::states::{singlet, tracial_wedge, xi_family};
use qgauge_core::tensor::{projector_matrix, wedge, DensityFunctional, PureState, SymmetrySector};

type Vector = DVector<Complex64>;
type Matrix = DMatrix<Complex64>;

// ---------------------------------------------------------------- oracles

struct Oracle {
    rng: ChaCha20Rng,
}

impl Oracle {
    fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    fn normal(&mut self) -> Complex64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        Complex64::new(re, im)
    }

    fn vector(&mut self, dim: usize) -> Vector {
        Vector::from_fn(dim, |_, _| self.normal())
    }

    fn unit(&mut self, dim: usize) -> Vector {
        let v = self.vector(dim);
        let norm = v.norm();
        v.unscale(norm)
    }

    /// Antisymmetrized Gaussian in `C^n ⊗ C^n`, normalized.
    fn antisymmetric_unit(&mut self, n: usize) -> Vector {
        let g = Matrix::from_fn(n, n, |_, _| self.normal());
        let a = &g - g.transpose();
        let v = flatten(&a);
        let norm = v.norm();
        v.unscale(norm)
    }

    fn unitary(&mut self, n: usize) -> Matrix {
        let g = Matrix::from_fn(n, n, |_, _| self.normal());
        g.qr().q()
    }

    /// Unit vector of tensor rank at most `l` in `C^n ⊗ C^n`.
    fn rank_bounded_unit(&mut self, n: usize, l: usize) -> Vector {
        let mut v = Vector::zeros(n * n);
        for _ in 0..l {
            let a = self.vector(n);
            let b = self.vector(n);
            v += a.kronecker(&b);
        }
        let norm = v.norm();
        v.unscale(norm)
    }

    fn weights(&mut self, len: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..len).map(|_| self.rng.random::<f64>() + 1e-3).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / total).collect()
    }
}

/// Row-major: entry `(i, j)` goes to `i n + j`.
fn flatten(m: &Matrix) -> Vector {
    let n = m.ncols();
    Vector::from_fn(m.nrows() * n, |r, _| m[(r / n, r % n)])
}

fn unflatten(v: &Vector, n: usize) -> Matrix {
    Matrix::from_fn(n, n, |i, j| v[i * n + j])
}

fn singular_values(v: &Vector, n: usize) -> Vec<f64> {
    let mut s: Vec<f64> = unflatten(v, n).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `(sum of Schmidt coefficients)^2`.
fn projective_pure(v: &Vector, n: usize) -> f64 {
    let s: f64 = singular_values(v, n).iter().sum();
    s * s
}

fn swap(n: usize) -> Matrix {
    let d = n * n;
    Matrix::from_fn(d, d, |r, c| {
        let (i, j) = (c / n, c % n);
        if r == j * n + i {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn max_abs(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

fn density(parties: usize, n: usize, states: &[Vector], weights: &[f64]) -> DensityFunctional {
    let d = states[0].len();
    let mut m = Matrix::zeros(d, d);
    for (v, w) in states.iter().zip(weights) {
        m += (v * v.adjoint()).scale(*w);
    }
    DensityFunctional::new(parties, n, m).expect("valid density")
}

fn pure(parties: usize, n: usize, v: Vector) -> PureState {
    PureState::new(parties, n, v).expect("unit vector")
}

// ---------------------------------------------------------------- bookkeeping

#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    count: usize,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn near(&mut self, label: &str, observed: f64, expected: f64, tol: f64) {
        self.check((observed - expected).abs() <= tol, || {
            format!("{label}: observed {observed:.12e}, expected {expected:.12e} within {tol:e}")
        });
    }
}

/// Every bracket computed during the run, for the consistency property.
#[derive(Default)]
struct Brackets {
    seen: usize,
    inconsistent: Vec<String>,
}

impl Brackets {
    fn record(&mut self, label: &str, b: &NormBracket) {
        self.seen += 1;
        if !b.is_consistent(1e-9) {
            self.inconsistent.push(format!("{label}: [{}, {}]", b.lower, b.upper));
        }
    }
}

fn bracket_str(b: &NormBracket) -> String {
    format!("[{}, {}]", b.lower, b.upper)
}

/// Re-verifies the witness and the decomposition attached to a bracket.
fn verify_certificates(c: &mut Checks, label: &str, phi: &DensityFunctional, spec: &VSetSpec, b: &NormBracket) {
    if let (Some(w), ExtReal::Finite(l)) = (&b.witness, b.lower) {
        let x = w.operator(spec);
        let norm = estimate_k_norm(&x, spec, &Budget::default()).expect("dims").value;
        c.check(norm <= 1.0 + 1e-8, || format!("{label}: witness norm estimate {norm}"));
        c.near(&format!("{label}: witness value"), phi.apply(&x).norm(), l, 1e-8);
    }
    if let Some(d) = &b.decomposition {
        let members = d
            .terms
            .iter()
            .all(|t| t.weight > 0.0 && is_member(spec, &t.xi, 1e-8) && is_member(spec, &t.eta, 1e-8));
        c.check(members, || format!("{label}: decomposition term outside the family"));
        let residual = (phi.matrix() - d.reconstruct(spec.dim())).norm();
        c.near(&format!("{label}: residual norm"), residual, d.residual_norm, 1e-8);
        c.check(d.bound() >= b.upper.value() - 1e-9, || {
            format!("{label}: decomposition bound {} below upper {}", d.bound(), b.upper)
        });
    }
}

// ---------------------------------------------------------------- criteria

fn singlet_example(c: &mut Checks, _: &mut Brackets) {
    let oracle = {
        let mut v = Vector::zeros(4);
        v[1] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        v[2] = -v[1];
        v
    };
    let s = singlet();
    c.near("singlet amplitudes", (s.amplitudes() - &oracle).norm(), 0.0, 1e-15);
    let tensor = VSetSpec::plain(2, 2, Family::Tensor).unwrap();
    let wedge_spec = VSetSpec::plain(2, 2, Family::Wedge).unwrap();
    c.near("q tensor oracle", projective_pure(&oracle, 2), 2.0, 1e-12);
    c.near("q tensor", q_pure_closed_form(&s, &tensor).unwrap(), 2.0, 1e-9);
    c.near("q wedge", q_pure_closed_form(&s, &wedge_spec).unwrap(), 1.0, 1e-9);
    let budget = Budget::default();
    let t = verdict(&s.density(), &tensor, &budget).unwrap();
    c.check(t.status == Status::Entangled, || format!("tensor verdict {}", t.status.name()));
    let w = verdict(&s.density(), &wedge_spec, &budget).unwrap();
    c.check(w.status == Status::Separable, || format!("wedge verdict {}", w.status.name()));
}

fn antisymmetric_qutrits(c: &mut Checks, _: &mut Brackets) {
    let mut o = Oracle::new(2);
    let tensor = VSetSpec::plain(2, 3, Family::Tensor).unwrap();
    let wedge_spec = VSetSpec::plain(2, 3, Family::Wedge).unwrap();
    for i in 0..100 {
        let v = o.antisymmetric_unit(3);
        let s = pure(2, 3, v.clone());
        let slater = rank(&slater_decompose(&s).unwrap(), 1e-10).rank;
        c.check(slater == 1, || format!("state {i}: Slater rank {slater}"));
        let sv = singular_values(&v, 3);
        c.check(sv[2] < 1e-10 && (sv[0] - sv[1]).abs() < 1e-10, || {
            format!("state {i}: singular values {sv:?}")
        });

        let a = antisymmetric_coefficient_matrix(&s).unwrap();
        let kernel = Vector::from_vec(vec![a[(1, 2)], -a[(0, 2)], a[(0, 1)]]);
        let kernel = kernel.unscale(kernel.norm());
        let expected = Matrix::identity(3, 3) - &kernel * kernel.adjoint();
        c.near(&format!("state {i}: A^†A"), max_abs(&(a.adjoint() * &a - expected)), 0.0, 1e-9);

        c.near(&format!("state {i}: q tensor oracle"), projective_pure(&v, 3), 2.0, 1e-8);
        c.near(&format!("state {i}: q tensor"), q_pure_closed_form(&s, &tensor).unwrap(), 2.0, 1e-8);
        c.near(&format!("state {i}: q wedge"), q_pure_closed_form(&s, &wedge_spec).unwrap(), 1.0, 1e-8);
    }
}

fn tracial_state(c: &mut Checks, brackets: &mut Brackets) {
    let (n, k) = (3, 2);
    let phi = tracial_wedge(n, k).unwrap();
    let p = (Matrix::identity(n * n, n * n) - swap(n)).scale(0.5);
    let oracle = p.unscale(binomial(n, k) as f64);
    c.near("tracial density", max_abs(&(phi.matrix() - oracle)), 0.0, 1e-14);

    let budget = Budget::default();
    let wedge_spec = VSetSpec::plain(k, n, Family::Wedge).unwrap();
    let w = q_bracket(&phi, &wedge_spec, &budget).unwrap();
    brackets.record("tracial wedge", &w);
    verify_certificates(c, "tracial wedge", &phi, &wedge_spec, &w);
    c.check(w.decomposition.is_some(), || "no decomposition certificate".into());
    let slack = w.decomposition.as_ref().map_or(0.0, |d| d.residual_bound).max(1e-8);
    c.near("wedge upper", w.upper.value(), 1.0, slack);
    c.check(w.lower.value() >= 1.0 - 1e-6, || format!("wedge lower {}", w.lower));

    let tensor = VSetSpec::plain(k, n, Family::Tensor).unwrap();
    let t = q_bracket(&phi, &tensor, &budget).unwrap();
    brackets.record("tracial tensor", &t);
    verify_certificates(c, "tracial tensor", &phi, &tensor, &t);
    let target = factorial(k) as f64;
    c.check(t.contains(target, 1e-9), || format!("tensor bracket {} misses {target}", bracket_str(&t)));
    c.check(t.width().value() <= 0.05, || format!("tensor width {}", t.width()));
}

fn fermionic_coupling_check(c: &mut Checks, brackets: &mut Brackets) {
    let mut o = Oracle::new(4);
    for i in 0..50 {
        let n = 4 + i % 3;
        let v = o.antisymmetric_unit(n);
        let s = pure(2, n, v.clone());
        let t = q_pure_closed_form(&s, &VSetSpec::plain(2, n, Family::Tensor).unwrap()).unwrap();
        let w = q_pure_closed_form(&s, &VSetSpec::plain(2, n, Family::Wedge).unwrap()).unwrap();
        c.near(&format!("pure {i}: q tensor oracle"), t, projective_pure(&v, n), 1e-9);
        c.near(&format!("pure {i}: q tensor - 2 q wedge"), t - 2.0 * w, 0.0, 1e-9);
    }
    let budget = Budget::default();
    for i in 0..10 {
        let states: Vec<Vector> = (0..3).map(|_| o.antisymmetric_unit(4)).collect();
        let weights = o.weights(3);
        let phi = density(2, 4, &states, &weights);
        let r = fermionic_coupling(&phi, &budget).unwrap();
        brackets.record("coupling tensor", &r.tensor);
        brackets.record("coupling wedge", &r.wedge);
        let lo = r.wedge.lower.value().max(r.tensor.lower.value() / 2.0);
        let hi = r.wedge.upper.value().min(r.tensor.upper.value() / 2.0);
        c.check(lo <= hi + 1e-9 && r.consistent, || {
            format!(
                "mixed {i}: wedge {} and tensor/2 {} do not intersect",
                bracket_str(&r.wedge),
                bracket_str(&r.tensor)
            )
        });
    }
}

/// `(1/sqrt(m)) sum_{i<m} e_{2i} ∧ e_{2i+1}`.
fn xi_oracle(m: usize, n: usize) -> Vector {
    let mut v = Vector::zeros(n * n);
    let amp = Complex64::new((2.0 * m as f64).sqrt().recip(), 0.0);
    for i in 0..m {
        v[(2 * i) * n + 2 * i + 1] += amp;
        v[(2 * i + 1) * n + 2 * i] -= amp;
    }
    v
}

fn rank_bounded_tight_cases(c: &mut Checks, brackets: &mut Brackets) {
    let budget = Budget::default();
    let mut o = Oracle::new(5);
    for l in [2usize, 3] {
        let n = 2 * l;
        let tensor = VSetSpec::new(2, n, Family::Tensor, l).unwrap();
        let wedge_spec = VSetSpec::new(2, n, Family::Wedge, l).unwrap();

        let m = (l / 2).max(1);
        let right = xi_family(m, n).unwrap();
        c.near(&format!("l={l}: xi_{m}"), (right.amplitudes() - xi_oracle(m, n)).norm(), 0.0, 1e-15);
        for (spec, name) in [(&tensor, "tensor"), (&wedge_spec, "wedge")] {
            let b = q_bracket(&right.density(), spec, &budget).unwrap();
            brackets.record("right", &b);
            verify_certificates(c, &format!("l={l} right {name}"), &right.density(), spec, &b);
            c.check(b.contains(1.0, 1e-6) && b.width().value() <= 1e-4, || {
                format!("l={l} right {name}: {}", bracket_str(&b))
            });
        }

        let left = xi_family(l, n).unwrap();
        let psi = xi_oracle(l, n);
        c.near(&format!("l={l}: xi_{l}"), (left.amplitudes() - &psi).norm(), 0.0, 1e-15);
        // the witness 2 psi psi^†: its norm on V_l is twice the top-l Schmidt weight
        let x = (&psi * psi.adjoint()).scale(2.0);
        let exact: f64 = 2.0 * singular_values(&psi, n).iter().take(l).map(|s| s * s).sum::<f64>();
        c.check(exact <= 1.0 + 1e-12, || format!("l={l}: exact witness norm {exact}"));
        let members: Vec<Vector> = (0..10_000).map(|_| o.rank_bounded_unit(n, l)).collect();
        let mut sampled: f64 = 0.0;
        for (i, a) in members.iter().enumerate() {
            let xa = &x * a;
            sampled = sampled.max(xa.dotc(a).norm());
            sampled = sampled.max(xa.dotc(&members[(i + 1) % members.len()]).norm());
        }
        c.check(sampled <= 1.0 + 1e-8, || format!("l={l}: sampled witness norm {sampled}"));
        c.near(&format!("l={l}: witness value"), left.density().apply(&x).re, 2.0, 1e-12);

        let b = q_bracket(&left.density(), &tensor, &budget).unwrap();
        brackets.record("left tensor", &b);
        verify_certificates(c, &format!("l={l} left tensor"), &left.density(), &tensor, &b);
        c.check(b.lower.value() >= 2.0 - 1e-6 && b.upper.value() <= 2.05, || {
            format!("l={l} left tensor: {}", bracket_str(&b))
        });
        let b = q_bracket(&left.density(), &wedge_spec, &budget).unwrap();
        brackets.record("left wedge", &b);
        verify_certificates(c, &format!("l={l} left wedge"), &left.density(), &wedge_spec, &b);
        c.check(b.contains(1.0, 1e-6), || format!("l={l} left wedge: {}", bracket_str(&b)));
    }
}

fn gram(xs: &[Vector], ys: &[Vector]) -> Matrix {
    Matrix::from_fn(xs.len(), ys.len(), |i, j| ys[j].dotc(&xs[i]))
}

fn property_suites(c: &mut Checks, brackets: &mut Brackets) {
    let mut o = Oracle::new(6);

    // wedge norm bound and the Gram-determinant identity
    for trial in 0..200 {
        let n = 3 + trial % 3;
        let k = 2 + trial % 2;
        let xs: Vec<Vector> = (0..k).map(|_| o.vector(n)).collect();
        let ys: Vec<Vector> = (0..k).map(|_| o.vector(n)).collect();
        let wx = wedge(&xs).unwrap();
        let wy = wedge(&ys).unwrap();
        let product: f64 = xs.iter().map(|v| v.norm()).product();
        c.check(wx.norm() <= product * (1.0 + 1e-12), || format!("tuple {trial}: wedge norm above product"));
        let det = gram(&xs, &ys).determinant();
        let scale = det.norm().max(1.0);
        c.check((wy.dotc(&wx) - det).norm() <= 1e-10 * scale, || {
            format!("tuple {trial}: Gram determinant {det} vs inner {}", wy.dotc(&wx))
        });
        // orthogonal tuples attain the bound
        let u = o.unitary(n);
        let orth: Vec<Vector> = (0..k).map(|i| u.column(i).scale(1.0 + i as f64)).collect();
        let p: f64 = (1..=k).map(|i| i as f64).product();
        c.near(&format!("tuple {trial}: orthogonal equality"), wedge(&orth).unwrap().norm(), p, 1e-10 * p);
    }

    // projector algebra
    for (n, k) in [(3, 2), (3, 3), (4, 2), (4, 3)] {
        let plus = projector_matrix(n, k, SymmetrySector::Bosonic).unwrap();
        let minus = projector_matrix(n, k, SymmetrySector::Fermionic).unwrap();
        for (p, name, dim) in [(&plus, "bosonic", binomial(n + k - 1, k)), (&minus, "fermionic", binomial(n, k))] {
            c.near(&format!("{name} n={n} k={k}: idempotent"), max_abs(&(p * p - p)), 0.0, 1e-12);
            c.near(&format!("{name} n={n} k={k}: self-adjoint"), max_abs(&(p.adjoint() - p)), 0.0, 1e-12);
            c.near(&format!("{name} n={n} k={k}: trace"), p.trace().re, dim as f64, 1e-10);
        }
        c.near(&format!("n={n} k={k}: orthogonal ranges"), max_abs(&(&plus * &minus)), 0.0, 1e-12);
        if k == 2 {
            let oracle = (Matrix::identity(n * n, n * n) - swap(n)).scale(0.5);
            c.near(&format!("n={n}: antisymmetrizer"), max_abs(&(&minus - oracle)), 0.0, 1e-14);
        }
    }

    // compatibility scales
    let sqrt = |x: f64| x.sqrt();
    for (k, n, l, sector, expected) in [
        (2, 3, 1, SymmetrySector::Bosonic, 1.0),
        (3, 3, 1, SymmetrySector::Bosonic, 1.0),
        (2, 3, 1, SymmetrySector::Fermionic, sqrt(2.0)),
        (3, 3, 1, SymmetrySector::Fermionic, sqrt(6.0)),
        (3, 4, 1, SymmetrySector::Fermionic, sqrt(6.0)),
        (2, 4, 2, SymmetrySector::Fermionic, 1.0),
        (2, 6, 3, SymmetrySector::Fermionic, 1.0),
    ] {
        let spec = VSetSpec::new(k, n, Family::Tensor, l).unwrap();
        let r = check_compatibility(&spec, sector, 200, 7).unwrap();
        c.near(&format!("mu {sector:?} k={k} n={n} l={l}"), r.mu, expected, 1e-8);
        let compatible = sector == SymmetrySector::Fermionic;
        c.check(r.compatible == compatible, || {
            format!("{sector:?} k={k} n={n} l={l}: compatible = {}", r.compatible)
        });
    }

    // contraction of x -> P x P
    let budget = Budget::default();
    for (spec, sector) in [
        (VSetSpec::plain(2, 3, Family::Tensor).unwrap(), SymmetrySector::Bosonic),
        (VSetSpec::plain(2, 3, Family::Tensor).unwrap(), SymmetrySector::Fermionic),
        (VSetSpec::new(2, 4, Family::Tensor, 2).unwrap(), SymmetrySector::Fermionic),
    ] {
        let r = check_contraction(&spec, sector, 50, 11, &budget).unwrap();
        c.check(r.samples.len() == 50 && r.violations == 0, || {
            format!("contraction {sector:?}: {} violations, max excess {:e}", r.violations, r.max_excess)
        });
    }

    // canonical forms: round trip, frames and coefficient uniqueness
    for i in 0..100 {
        let n = 2 + i % 4;
        let v = o.unit(n * n);
        let s = pure(2, n, v.clone());
        let f = schmidt_decompose(&s).unwrap();
        c.near(&format!("Schmidt {i}: round trip"), (f.reconstruct() - &v).norm(), 0.0, 1e-10);
        for (frame, side) in [(&f.left_frame, "left"), (&f.right_frame, "right")] {
            let g = gram(frame, frame);
            let id = Matrix::identity(g.nrows(), g.ncols());
            c.near(&format!("Schmidt {i}: {side} frame"), max_abs(&(g - id)), 0.0, 1e-10);
        }
        let oracle = singular_values(&v, n);
        let dev = f
            .coefficients
            .iter()
            .zip(&oracle)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        c.near(&format!("Schmidt {i}: coefficients"), dev, 0.0, 1e-10);
        let rotated = o.unitary(n).kronecker(&o.unitary(n)) * &v;
        let g = schmidt_decompose(&pure(2, n, rotated)).unwrap();
        let dev = f
            .coefficients
            .iter()
            .zip(&g.coefficients)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        c.near(&format!("Schmidt {i}: local unitary invariance"), dev, 0.0, 1e-10);

        let n = 2 + i % 5;
        let v = o.antisymmetric_unit(n);
        let s = pure(2, n, v.clone());
        let f = slater_decompose(&s).unwrap();
        c.near(&format!("Slater {i}: round trip"), (f.reconstruct() - &v).norm(), 0.0, 1e-10);
        let frame: Vec<Vector> = f.pair_frame.iter().flat_map(|(e, g)| [e.clone(), g.clone()]).collect();
        let g = gram(&frame, &frame);
        let id = Matrix::identity(g.nrows(), g.ncols());
        c.near(&format!("Slater {i}: frame"), max_abs(&(g - id)), 0.0, 1e-10);
        // each Slater coefficient shows up twice among the singular values, divided by sqrt 2
        let sv = singular_values(&v, n);
        let dev = f
            .coefficients
            .iter()
            .enumerate()
            .map(|(j, lambda)| (lambda / std::f64::consts::SQRT_2 - sv[2 * j]).abs())
            .fold(0.0, f64::max);
        c.near(&format!("Slater {i}: coefficients"), dev, 0.0, 1e-10);
        let u = o.unitary(n);
        let g = slater_decompose(&pure(2, n, u.kronecker(&u) * &v)).unwrap();
        let dev = f
            .coefficients
            .iter()
            .zip(&g.coefficients)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        c.check(f.coefficients.len() == g.coefficients.len() && dev <= 1e-10, || {
            format!("Slater {i}: coefficients change under U ⊗ U by {dev:e}")
        });
    }

    // bracket consistency, here and on every bracket computed earlier in the run
    let small = Budget {
        multistarts: 8,
        lp_rounds: 8,
        ..Budget::default()
    };
    for i in 0..12 {
        let n = 2 + i % 2;
        let family = [Family::Tensor, Family::Wedge, Family::Vee][i % 3];
        let spec = VSetSpec::plain(2, n, family).unwrap();
        let p = projector_matrix(n, 2, family.sector()).unwrap();
        let states: Vec<Vector> = (0..2)
            .map(|_| {
                let v = &p * o.vector(n * n);
                let norm = v.norm();
                v.unscale(norm)
            })
            .collect();
        let phi = density(2, n, &states, &o.weights(2));
        let b = q_bracket(&phi, &spec, &small).unwrap();
        brackets.record("random mixed", &b);
        verify_certificates(c, &format!("mixed {i} {}", family.name()), &phi, &spec, &b);
    }
    c.check(brackets.inconsistent.is_empty(), || {
        format!("inconsistent brackets: {}", brackets.inconsistent.join("; "))
    });
}

fn oracle_equivalence(c: &mut Checks, brackets: &mut Brackets) {
    let mut o = Oracle::new(7);
    let spec = VSetSpec::plain(2, 2, Family::Tensor).unwrap();
    let states: Vec<Vector> = (0..20).map(|_| o.unit(4)).collect();
    for spectral_seed in [true, false] {
        let budget = Budget {
            spectral_seed,
            ..Budget::default()
        };
        for (i, v) in states.iter().enumerate() {
            let exact = projective_pure(v, 2);
            let b = q_bracket(&pure(2, 2, v.clone()).density(), &spec, &budget).unwrap();
            brackets.record("tiny", &b);
            let far = (b.lower.value() - exact).abs().max((b.upper.value() - exact).abs());
            c.check(far <= 0.02 && b.contains(exact, 1e-8), || {
                format!("state {i} (spectral seed {spectral_seed}): {} vs {exact}", bracket_str(&b))
            });
        }
    }
}

// ---------------------------------------------------------------- runner

type Criterion = fn(&mut Checks, &mut Brackets);

fn main() -> ExitCode {
    let criteria: [(&str, &str, Duration, Criterion); 7] = [
        ("C1", "singlet closed forms and verdicts", Duration::from_secs(1), singlet_example),
        ("C2", "antisymmetric states on C^3 x C^3", Duration::from_secs(10), antisymmetric_qutrits),
        ("C3", "tracial antisymmetric state", Duration::from_secs(60), tracial_state),
        ("C4", "fermionic coupling", Duration::from_secs(300), fermionic_coupling_check),
        ("C5", "rank-bounded tight cases", Duration::from_secs(600), rank_bounded_tight_cases),
        ("C6", "property suites", Duration::from_secs(600), property_suites),
        ("C7", "bracket against closed form, n = 2", Duration::from_secs(600), oracle_equivalence),
    ];
    let mut brackets = Brackets::default();
    let mut failed = 0;
    for (id, title, limit, run) in criteria {
        let mut checks = Checks::default();
        let start = Instant::now();
        run(&mut checks, &mut brackets);
        let elapsed = start.elapsed();
        checks.check(elapsed <= limit, || format!("runtime {elapsed:.2?} exceeds {limit:.0?}"));
        let pass = checks.failures.is_empty();
        println!(
            "{id} {:<4} {title} ({} checks, {:.2} s)",
            if pass { "PASS" } else { "FAIL" },
            checks.count,
            elapsed.as_secs_f64()
        );
        for f in &checks.failures {
            println!("     {f}");
        }
        failed += usize::from(!pass);
    }
    println!("{} brackets computed, {} inconsistent", brackets.seen, brackets.inconsistent.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
