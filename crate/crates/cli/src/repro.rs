//! Reproduction cases. Each row compares an observed number against a known
//! value at a stated tolerance; failures are rows, never panics.

use qgauge_core::decompose::{antisymmetric_coefficient_matrix, rank, slater_decompose};
use qgauge_core::linalg::{inner, max_abs, outer, random_unit, random_unitary, stream_rng, CMatrix, CVector, C64};
use qgauge_core::norm::{
    check_compatibility, fermionic_coupling, q_bracket, q_pure_closed_form, sample, verdict, Budget, Family,
    NormBracket, Status, VSetSpec,
};
use qgauge_core::states::{haar_mixed, haar_sector_pure, singlet, tracial_wedge, xi_family};
use qgauge_core::tensor::{wedge, SymmetrySector};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CaseName {
    Example1,
    Example2,
    Example3,
    Coupling,
    Pg,
    WedgeBound,
    Mu,
    All,
}

impl CaseName {
    const EACH: [CaseName; 7] = [
        CaseName::Example1,
        CaseName::Example2,
        CaseName::Example3,
        CaseName::Coupling,
        CaseName::Pg,
        CaseName::WedgeBound,
        CaseName::Mu,
    ];
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproCase {
    pub id: String,
    pub description: String,
    pub expected: String,
    pub observed: String,
    pub tolerance: String,
    /// How the expected value is known.
    pub reference: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Default)]
pub struct ReproOptions {
    /// Local dimension override for the tracial case.
    pub n: Option<usize>,
    /// Party count override for the tracial case.
    pub k: Option<usize>,
    /// Rank bound for the `pg` case; both 2 and 3 when unset.
    pub l: Option<usize>,
    pub budget: Budget,
}

struct Row<'a> {
    id: &'a str,
    description: &'a str,
    reference: &'a str,
}

impl Row<'_> {
    fn within(&self, expected: f64, observed: f64, tol: f64) -> ReproCase {
        self.finish(
            fmt(expected),
            fmt(observed),
            format!("{tol:e}"),
            (observed - expected).abs() <= tol,
        )
    }

    fn at_most(&self, bound: f64, observed: f64) -> ReproCase {
        self.finish(format!("<= {}", fmt(bound)), fmt(observed), "-".into(), observed <= bound)
    }

    fn at_least(&self, bound: f64, observed: f64) -> ReproCase {
        self.finish(format!(">= {}", fmt(bound)), fmt(observed), "-".into(), observed >= bound)
    }

    fn equals(&self, expected: &str, observed: &str) -> ReproCase {
        self.finish(expected.into(), observed.into(), "exact".into(), expected == observed)
    }

    fn bracket(&self, expected: f64, b: &NormBracket, tol: f64, max_width: f64) -> ReproCase {
        let width = b.width().value();
        self.finish(
            format!("{} in bracket, width <= {}", fmt(expected), fmt(max_width)),
            format!("[{}, {}]", b.lower, b.upper),
            format!("{tol:e}"),
            b.contains(expected, tol) && width <= max_width,
        )
    }

    fn error(&self, err: impl std::fmt::Display) -> ReproCase {
        self.finish("-".into(), format!("error: {err}"), "-".into(), false)
    }

    fn finish(&self, expected: String, observed: String, tolerance: String, pass: bool) -> ReproCase {
        ReproCase {
            id: self.id.into(),
            description: self.description.into(),
            expected,
            observed,
            tolerance,
            reference: self.reference.into(),
            pass,
        }
    }
}

fn fmt(v: f64) -> String {
    if v == 0.0 || (1e-4..1e6).contains(&v.abs()) {
        format!("{v:.12}").trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.6e}")
    }
}

fn row<'a>(id: &'a str, description: &'a str, reference: &'a str) -> Row<'a> {
    Row {
        id,
        description,
        reference,
    }
}

fn status_name(s: Status) -> &'static str {
    s.name()
}

pub fn run(case: CaseName, opts: &ReproOptions) -> Vec<ReproCase> {
    match case {
        CaseName::All => CaseName::EACH.iter().flat_map(|&c| run(c, opts)).collect(),
        CaseName::Example1 => example1(opts),
        CaseName::Example2 => example2(opts),
        CaseName::Example3 => example3(opts),
        CaseName::Coupling => coupling(opts),
        CaseName::Pg => rank_bounded(opts),
        CaseName::WedgeBound => wedge_bound(opts),
        CaseName::Mu => mu(opts),
    }
}

fn example1(opts: &ReproOptions) -> Vec<ReproCase> {
    let s = singlet();
    let tensor = VSetSpec::plain(2, 2, Family::Tensor).expect("valid spec");
    let wedge_spec = VSetSpec::plain(2, 2, Family::Wedge).expect("valid spec");
    let mut out = Vec::new();
    let r = row("example1.q_tensor", "singlet, product family, closed form", "closed form");
    out.push(match q_pure_closed_form(&s, &tensor) {
        Ok(v) => r.within(2.0, v, 1e-9),
        Err(e) => r.error(e),
    });
    let r = row("example1.q_wedge", "singlet, antisymmetric family, closed form", "closed form");
    out.push(match q_pure_closed_form(&s, &wedge_spec) {
        Ok(v) => r.within(1.0, v, 1e-9),
        Err(e) => r.error(e),
    });
    for (spec, expected, id) in [
        (tensor, "entangled", "example1.verdict_tensor"),
        (wedge_spec, "separable", "example1.verdict_wedge"),
    ] {
        let r = row(id, "singlet verdict", "closed form");
        out.push(match verdict(&s.density(), &spec, &opts.budget) {
            Ok(v) => r.equals(expected, status_name(v.status)),
            Err(e) => r.error(e),
        });
    }
    out
}

/// `max |A^† A - (1 - v v^†)|` with `v` spanning the kernel of the 3x3 antisymmetric `A`.
fn kernel_identity_deviation(a: &CMatrix) -> f64 {
    let v = CVector::from_vec(vec![a[(1, 2)], -a[(0, 2)], a[(0, 1)]]);
    let v = v.unscale(v.norm());
    let expected = CMatrix::identity(3, 3) - outer(&v, &v);
    max_abs(&(a.adjoint() * a - expected))
}

fn example2(opts: &ReproOptions) -> Vec<ReproCase> {
    let count = 100;
    let tensor = VSetSpec::plain(2, 3, Family::Tensor).expect("valid spec");
    let wedge_spec = VSetSpec::plain(2, 3, Family::Wedge).expect("valid spec");
    let mut rng = stream_rng(opts.budget.seed, 2);
    let mut max_rank = 0;
    let mut max_gram: f64 = 0.0;
    let mut max_tensor: f64 = 0.0;
    let mut max_wedge: f64 = 0.0;
    let mut first = None;
    for _ in 0..count {
        let computed = (|| -> qgauge_core::Result<()> {
            let s = haar_sector_pure(&mut rng, 3, 2, SymmetrySector::Fermionic)?;
            max_rank = max_rank.max(rank(&slater_decompose(&s)?, 1e-10).rank);
            max_gram = max_gram.max(kernel_identity_deviation(&antisymmetric_coefficient_matrix(&s)?));
            max_tensor = max_tensor.max((q_pure_closed_form(&s, &tensor)? - 2.0).abs());
            max_wedge = max_wedge.max((q_pure_closed_form(&s, &wedge_spec)? - 1.0).abs());
            first.get_or_insert(s);
            Ok(())
        })();
        if let Err(e) = computed {
            return vec![row("example2", "random antisymmetric states on C^3 x C^3", "closed form").error(e)];
        }
    }
    let mut out = vec![
        row("example2.slater_rank", "largest Slater rank over 100 states", "closed form")
            .equals("1", &max_rank.to_string()),
        row("example2.gram", "max |A^†A - (1 - v v^†)| over 100 states", "closed form").within(0.0, max_gram, 1e-9),
        row("example2.q_tensor", "max |q_tensor - 2| over 100 states", "closed form").within(0.0, max_tensor, 1e-8),
        row("example2.q_wedge", "max |q_wedge - 1| over 100 states", "closed form").within(0.0, max_wedge, 1e-8),
    ];
    let r = row("example2.verdict_wedge", "verdict of a random state, antisymmetric family", "closed form");
    out.push(match verdict(&first.expect("count > 0").density(), &wedge_spec, &opts.budget) {
        Ok(v) => r.equals("separable", status_name(v.status)),
        Err(e) => r.error(e),
    });
    out
}

fn example3(opts: &ReproOptions) -> Vec<ReproCase> {
    let n = opts.n.unwrap_or(3);
    let k = opts.k.unwrap_or(2);
    let factorial = (1..=k).product::<usize>() as f64;
    let phi = match tracial_wedge(n, k) {
        Ok(p) => p,
        Err(e) => return vec![row("example3", "tracial antisymmetric state", "closed form").error(e)],
    };
    let mut out = Vec::new();
    match VSetSpec::plain(k, n, Family::Wedge).and_then(|s| q_bracket(&phi, &s, &opts.budget)) {
        Ok(b) => {
            out.push(
                row("example3.wedge_upper", "decomposition certificate, antisymmetric family", "closed form")
                    .within(1.0, b.upper.value(), 1e-8),
            );
            out.push(
                row("example3.wedge_lower", "witness, antisymmetric family", "closed form")
                    .at_least(1.0 - 1e-6, b.lower.value()),
            );
        }
        Err(e) => out.push(row("example3.wedge", "antisymmetric family", "closed form").error(e)),
    }
    let r = row("example3.q_tensor", "product family bracket contains k!", "closed form");
    out.push(
        match VSetSpec::plain(k, n, Family::Tensor).and_then(|s| q_bracket(&phi, &s, &opts.budget)) {
            Ok(b) => r.bracket(factorial, &b, 1e-9, 0.05),
            Err(e) => r.error(e),
        },
    );
    out
}

fn coupling(opts: &ReproOptions) -> Vec<ReproCase> {
    let mut rng = stream_rng(opts.budget.seed, 4);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let n = 4 + i % 3;
        let gap = (|| -> qgauge_core::Result<f64> {
            let s = haar_sector_pure(&mut rng, n, 2, SymmetrySector::Fermionic)?;
            let t = q_pure_closed_form(&s, &VSetSpec::plain(2, n, Family::Tensor)?)?;
            let w = q_pure_closed_form(&s, &VSetSpec::plain(2, n, Family::Wedge)?)?;
            Ok((t - 2.0 * w).abs())
        })();
        match gap {
            Ok(g) => worst = worst.max(g),
            Err(e) => return vec![row("coupling.pure", "closed forms", "coupling identity").error(e)],
        }
    }
    let mut out = vec![row("coupling.pure", "max |q_tensor - 2 q_wedge|, 50 pure states, n = 4..6", "coupling identity")
        .within(0.0, worst, 1e-9)];
    let mut consistent = 0;
    let total = 10;
    for _ in 0..total {
        let report = haar_mixed(&mut rng, 4, 2, 3, SymmetrySector::Fermionic)
            .and_then(|phi| fermionic_coupling(&phi, &opts.budget));
        match report {
            Ok(r) if r.consistent => consistent += 1,
            Ok(_) => {}
            Err(e) => {
                out.push(row("coupling.mixed", "scaled brackets intersect", "coupling identity").error(e));
                return out;
            }
        }
    }
    out.push(
        row("coupling.mixed", "mixed states, n = 4, scaled brackets intersect", "coupling identity")
            .equals(&format!("{total}/{total}"), &format!("{consistent}/{total}")),
    );
    out
}

/// Largest `|<x xi, eta>|` over sampled members, pairing each with itself and its successor.
fn sampled_norm(x: &CMatrix, spec: &VSetSpec, count: usize, seed: u64) -> f64 {
    let mut rng = stream_rng(seed, 9);
    let members: Vec<CVector> = (0..count).map(|_| sample(spec, &mut rng)).collect();
    let mut best: f64 = 0.0;
    for (i, m) in members.iter().enumerate() {
        let xm = x * m;
        best = best.max(inner(&xm, m).norm());
        best = best.max(inner(&xm, &members[(i + 1) % count]).norm());
    }
    best
}

fn rank_bounded(opts: &ReproOptions) -> Vec<ReproCase> {
    let ls = match opts.l {
        Some(l) => vec![l],
        None => vec![2, 3],
    };
    let mut out = Vec::new();
    for l in ls {
        let n = 2 * l;
        let id = |s: &str| format!("pg.l{l}.{s}");
        let specs = VSetSpec::new(2, n, Family::Tensor, l).and_then(|t| Ok((t, VSetSpec::new(2, n, Family::Wedge, l)?)));
        let states = xi_family((l / 2).max(1), n).and_then(|r| Ok((r, xi_family(l, n)?)));
        let ((tensor, wedge_spec), (right, left)) = match (specs, states) {
            (Ok(s), Ok(x)) => (s, x),
            (Err(e), _) | (_, Err(e)) => {
                out.push(row(&id("setup"), "rank-bounded families", "tight family").error(e));
                continue;
            }
        };
        for (spec, name) in [(tensor, "right_tensor"), (wedge_spec, "right_wedge")] {
            let r_id = id(name);
            let r = row(&r_id, "xi_k with k = l/2 brackets 1", "tight family");
            out.push(match q_bracket(&right.density(), &spec, &opts.budget) {
                Ok(b) => r.bracket(1.0, &b, 1e-6, 1e-4),
                Err(e) => r.error(e),
            });
        }

        // the rank-one witness 2 xi_l xi_l^† has unit norm on the rank-l family
        let psi = left.amplitudes();
        let x = outer(psi, psi).scale(2.0);
        let sampled = sampled_norm(&x, &tensor, 10_000, opts.budget.seed);
        out.push(
            row(&id("witness_norm"), "witness norm over 10^4 sampled members", "tight family")
                .at_most(1.0 + 1e-8, sampled),
        );
        out.push(
            row(&id("witness_value"), "witness value on xi_l", "tight family")
                .within(2.0, left.density().apply(&x).re, 1e-12),
        );
        let left_id = id("left_tensor");
        let r = row(&left_id, "xi_l, product family: lower >= 2 - 1e-6, upper <= 2.05", "tight family");
        out.push(match q_bracket(&left.density(), &tensor, &opts.budget) {
            Ok(b) => r.finish(
                "[>= 2 - 1e-6, <= 2.05]".into(),
                format!("[{}, {}]", b.lower, b.upper),
                "-".into(),
                b.lower.value() >= 2.0 - 1e-6 && b.upper.value() <= 2.05,
            ),
            Err(e) => r.error(e),
        });
        let wedge_id = id("left_wedge");
        let r = row(&wedge_id, "xi_l, antisymmetric family brackets 1", "tight family");
        out.push(match q_bracket(&left.density(), &wedge_spec, &opts.budget) {
            Ok(b) => r.bracket(1.0, &b, 1e-6, 1e-4),
            Err(e) => r.error(e),
        });
    }
    out
}

fn wedge_bound(opts: &ReproOptions) -> Vec<ReproCase> {
    let mut rng = stream_rng(opts.budget.seed, 6);
    let mut excess = f64::NEG_INFINITY;
    let mut equality: f64 = 0.0;
    let mut strict = f64::INFINITY;
    for trial in 0..200 {
        let n = 3 + trial % 3;
        let k = 2 + trial % 2;
        let scales: Vec<f64> = (0..k).map(|i| 0.5 + i as f64).collect();
        let tuple: Vec<CVector> = (0..k)
            .map(|i| random_unit(&mut rng, n).scale(scales[i]))
            .collect();
        let product: f64 = scales.iter().product();
        let norm = wedge(&tuple).expect("equal lengths").norm();
        excess = excess.max(norm - product);

        let u = random_unitary(&mut rng, n);
        let orthogonal: Vec<CVector> = (0..k)
            .map(|i| u.column(i).into_owned() * C64::new(scales[i], 0.0))
            .collect();
        equality = equality.max((wedge(&orthogonal).expect("equal lengths").norm() - product).abs() / product);

        let mut planted = orthogonal.clone();
        planted[1] = (&orthogonal[0].unscale(scales[0]) * C64::new(0.6, 0.0)
            + &orthogonal[1].unscale(scales[1]) * C64::new(0.8, 0.0))
            .scale(scales[1]);
        strict = strict.min(product - wedge(&planted).expect("equal lengths").norm());
    }
    vec![
        row("wedge_bound.random", "max(‖∧η‖ - Π‖η‖), 200 tuples", "norm inequality").at_most(1e-10, excess),
        row("wedge_bound.orthogonal", "relative equality gap on orthogonal tuples", "norm inequality")
            .within(0.0, equality, 1e-10),
        row("wedge_bound.overlap", "min(Π‖η‖ - ‖∧η‖) with overlap 0.6", "norm inequality").at_least(1e-6, strict),
    ]
}

fn mu(opts: &ReproOptions) -> Vec<ReproCase> {
    let samples = 200;
    let cases: [(&str, &str, usize, usize, usize, SymmetrySector, f64); 4] = [
        ("mu.bosonic", "symmetric projector on products, k = 2", 2, 3, 1, SymmetrySector::Bosonic, 1.0),
        ("mu.fermionic_k2", "antisymmetric projector on products, k = 2", 2, 3, 1, SymmetrySector::Fermionic, 2f64.sqrt()),
        ("mu.fermionic_k3", "antisymmetric projector on products, k = 3", 3, 3, 1, SymmetrySector::Fermionic, 6f64.sqrt()),
        ("mu.fermionic_rank2", "antisymmetric projector on rank-2 family", 2, 4, 2, SymmetrySector::Fermionic, 1.0),
    ];
    let mut out = Vec::new();
    for (id, description, k, n, l, sector, expected) in cases {
        let r = row(id, description, "projector scale");
        let report = VSetSpec::new(k, n, Family::Tensor, l)
            .and_then(|spec| check_compatibility(&spec, sector, samples, opts.budget.seed));
        out.push(match report {
            Ok(c) => {
                r.within(expected, c.mu, 1e-8)
            }
            Err(e) => r.error(e),
        });
    }
    out
}
