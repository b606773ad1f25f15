//! Serializable views of core results and the run manifest.

use qgauge_core::linalg::CVector;
use qgauge_core::norm::{Budget, ExtReal, NormBracket, VSetSpec, Witness};
use qgauge_core::tensor::SymmetrySector;
use serde::Serialize;

/// Everything needed to rerun a command; identical inputs on the same build
/// reproduce identical numbers.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input: Option<String>,
    pub seed: u64,
    pub budget: BudgetEcho,
    pub spec: Option<SpecEcho>,
    pub wall_time_seconds: f64,
}

impl RunManifest {
    pub fn new(command: &str, input: Option<String>, budget: &Budget, spec: Option<&VSetSpec>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            input,
            seed: budget.seed,
            budget: BudgetEcho::from(budget),
            spec: spec.map(SpecEcho::from),
            wall_time_seconds: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BudgetEcho {
    pub multistarts: usize,
    pub max_iters: usize,
    pub lp_pool: usize,
    pub lp_rounds: usize,
    pub seed: u64,
    pub tol: f64,
    pub spectral_seed: bool,
}

impl From<&Budget> for BudgetEcho {
    fn from(b: &Budget) -> Self {
        Self {
            multistarts: b.multistarts,
            max_iters: b.max_iters,
            lp_pool: b.lp_pool,
            lp_rounds: b.lp_rounds,
            seed: b.seed,
            tol: b.tol,
            spectral_seed: b.spectral_seed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecEcho {
    pub family: &'static str,
    pub parties: usize,
    pub local_dim: usize,
    pub rank_bound: usize,
}

impl From<&VSetSpec> for SpecEcho {
    fn from(s: &VSetSpec) -> Self {
        Self {
            family: s.family().name(),
            parties: s.arity(),
            local_dim: s.local_dim(),
            rank_bound: s.rank_bound(),
        }
    }
}

pub fn sector_name(s: SymmetrySector) -> &'static str {
    match s {
        SymmetrySector::Full => "full",
        SymmetrySector::Bosonic => "bosonic",
        SymmetrySector::Fermionic => "fermionic",
    }
}

pub fn pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

/// `null` for an infinite bound.
pub fn ext(v: ExtReal) -> Option<f64> {
    v.finite()
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessView {
    pub kind: &'static str,
    pub sector: Option<&'static str>,
    /// Proven bound used to normalize the witness operator.
    pub bound: Option<f64>,
    pub vector: Option<Vec<[f64; 2]>>,
}

impl From<&Witness> for WitnessView {
    fn from(w: &Witness) -> Self {
        match w {
            Witness::SectorProjector { sector, bound } => Self {
                kind: w.kind(),
                sector: Some(sector_name(*sector)),
                bound: Some(*bound),
                vector: None,
            },
            Witness::RankOne { psi, bound } => Self {
                kind: w.kind(),
                sector: None,
                bound: Some(*bound),
                vector: Some(pairs(psi)),
            },
            Witness::SectorComplement { sector } => Self {
                kind: w.kind(),
                sector: Some(sector_name(*sector)),
                bound: None,
                vector: None,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TermView {
    pub weight: f64,
    pub xi: Vec<[f64; 2]>,
    pub eta: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionView {
    pub total_weight: f64,
    pub residual_norm: f64,
    pub residual_bound: f64,
    pub terms: Vec<TermView>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BracketView {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub width: Option<f64>,
    pub lower_method: &'static str,
    pub upper_method: &'static str,
    pub lp_rounds: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionView>,
}

impl BracketView {
    /// `certificates` controls whether witness and decomposition are included.
    pub fn new(b: &NormBracket, certificates: bool) -> Self {
        Self {
            lower: ext(b.lower),
            upper: ext(b.upper),
            width: ext(b.width()),
            lower_method: b.lower_method.name(),
            upper_method: b.upper_method.name(),
            lp_rounds: b.lp_rounds,
            witness: certificates.then(|| b.witness.as_ref().map(WitnessView::from)).flatten(),
            decomposition: certificates
                .then(|| {
                    b.decomposition.as_ref().map(|d| DecompositionView {
                        total_weight: d.total_weight(),
                        residual_norm: d.residual_norm,
                        residual_bound: d.residual_bound,
                        terms: d
                            .terms
                            .iter()
                            .map(|t| TermView {
                                weight: t.weight,
                                xi: pairs(&t.xi),
                                eta: pairs(&t.eta),
                            })
                            .collect(),
                    })
                })
                .flatten(),
        }
    }
}
