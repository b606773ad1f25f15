//! Argument parsing, dispatch and the exit-code contract: 0 success or
//! separable, 1 entangled or a failed repro case, 2 invalid input,
//! 3 inconclusive.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qgauge_core::decompose::{rank, schmidt_decompose, slater_decompose};
use qgauge_core::norm::{q_bracket, q_pure_closed_form, verdict, Budget, Family, Status, VSetSpec};
use qgauge_core::tensor::PureState;
use serde::Serialize;
use serde_json::json;

use crate::generate::{generate, GeneratorName, Params, SectorName};
use crate::repro::{self, CaseName, ReproOptions};
use crate::report::{pairs, BracketView, RunManifest};
use crate::state_io::{read_state, to_toml, write_state, State, StateFile, StateIoError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "qgauge", version, about = "Gauge-norm entanglement measures for product, bosonic and fermionic states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Schmidt or Slater form of a two-party pure state
    Decompose(DecomposeArgs),
    /// q_K of a state, in closed form or as a certified bracket
    #[command(visible_alias = "estimate")]
    Norm(NormArgs),
    /// Separability verdict from the certified bracket
    Verdict(MeasureArgs),
    /// Write a named state to a state file
    Generate(GenerateArgs),
    /// Recompute the reference values and print a pass/fail table
    Repro(ReproArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Print machine-readable JSON with the same fields as the table
    #[arg(long)]
    pub json: bool,
    /// Write the full JSON report, certificates included, to PATH
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    #[arg(long, value_name = "N")]
    pub multistarts: Option<usize>,
    #[arg(long, value_name = "N")]
    pub max_iters: Option<usize>,
    /// Column cap of the membership program; 0 leaves the upper bound open
    #[arg(long, value_name = "N")]
    pub lp_pool: Option<usize>,
    #[arg(long, value_name = "N")]
    pub lp_rounds: Option<usize>,
    #[arg(long, value_name = "S")]
    pub seed: Option<u64>,
    /// Verdict margin around 1
    #[arg(long, value_name = "T")]
    pub tol: Option<f64>,
}

impl BudgetArgs {
    pub fn budget(&self) -> Result<Budget, CliError> {
        let d = Budget::default();
        let b = Budget {
            multistarts: self.multistarts.unwrap_or(d.multistarts),
            max_iters: self.max_iters.unwrap_or(d.max_iters),
            lp_pool: self.lp_pool.unwrap_or(d.lp_pool),
            lp_rounds: self.lp_rounds.unwrap_or(d.lp_rounds),
            seed: self.seed.unwrap_or(d.seed),
            tol: self.tol.unwrap_or(d.tol),
            spectral_seed: d.spectral_seed,
        };
        if !(b.tol >= 0.0 && b.tol.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be a finite nonnegative number, got {}", b.tol)));
        }
        Ok(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormKind {
    Schmidt,
    Slater,
}

#[derive(Debug, Clone, Args)]
pub struct DecomposeArgs {
    /// State file
    pub path: PathBuf,
    #[arg(long, value_enum, default_value = "schmidt")]
    pub kind: FormKind,
    /// Coefficients at or below this count as zero for the rank
    #[arg(long, default_value_t = 1e-10)]
    pub cutoff: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Tensor,
    Vee,
    Wedge,
}

impl FamilyArg {
    fn family(self) -> Family {
        match self {
            FamilyArg::Tensor => Family::Tensor,
            FamilyArg::Vee => Family::Vee,
            FamilyArg::Wedge => Family::Wedge,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct MeasureArgs {
    /// State file
    pub path: PathBuf,
    #[arg(long, value_enum, default_value = "tensor")]
    pub family: FamilyArg,
    #[arg(long, value_name = "L", default_value_t = 1)]
    pub rank_bound: usize,
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    Bracket,
}

#[derive(Debug, Clone, Args)]
pub struct NormArgs {
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[arg(long, value_enum, default_value = "bracket")]
    pub method: MethodArg,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub name: GeneratorName,
    /// Local dimension
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Number of parties
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Wedge terms for xi_k, product terms for product_mixture
    #[arg(long, default_value_t = 1)]
    pub terms: usize,
    /// Number of mixed pure states for haar_mixed
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
    #[arg(long, value_enum, default_value = "full")]
    pub sector: SectorName,
    #[arg(long, default_value_t = Budget::default().seed)]
    pub seed: u64,
    /// State file to write; the file goes to stdout when absent
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReproArgs {
    #[arg(value_enum, default_value = "all")]
    pub case: CaseName,
    /// Local dimension for example3
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of parties for example3
    #[arg(long)]
    pub k: Option<usize>,
    /// Rank bound for pg
    #[arg(long)]
    pub l: Option<usize>,
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    State(#[from] StateIoError),
    #[error(transparent)]
    Core(#[from] qgauge_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

fn dispatch(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Decompose(a) => cmd_decompose(&a),
        Command::Norm(a) => cmd_norm(&a),
        Command::Verdict(a) => cmd_verdict(&a),
        Command::Generate(a) => cmd_generate(&a),
        Command::Repro(a) => cmd_repro(&a),
    }
}

fn emit<T: Serialize>(output: &OutputArgs, summary: &T, full: &T, table: &[(&str, String)]) -> Result<(), CliError> {
    if let Some(path) = &output.out {
        let text = serde_json::to_string_pretty(full).expect("report serializes");
        std::fs::write(path, text + "\n").map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    if output.json {
        println!("{}", serde_json::to_string_pretty(summary).expect("report serializes"));
    } else {
        let width = table.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in table {
            println!("{k:<width$}  {v}");
        }
    }
    Ok(())
}

fn describe(path: &Path, state: &State) -> String {
    format!(
        "{} ({}, {} parties, local dimension {})",
        path.display(),
        state.kind(),
        state.parties(),
        state.local_dim()
    )
}

fn pure_input(path: &Path) -> Result<PureState, CliError> {
    match read_state(path)?.state {
        State::Pure(s) => Ok(s),
        State::Mixed(_) => Err(CliError::Usage(format!(
            "{}: decompositions need a pure state",
            path.display()
        ))),
    }
}

fn list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|c| format!("{c:.12}")).collect();
    format!("[{}]", items.join(", "))
}

fn bound_text(v: Option<f64>) -> String {
    v.map_or_else(|| "inf".to_string(), |x| format!("{x:.12}"))
}

fn cmd_decompose(a: &DecomposeArgs) -> Result<u8, CliError> {
    let state = pure_input(&a.path)?;
    let (coefficients, rank_value, residual, frames, truncated) = match a.kind {
        FormKind::Schmidt => {
            let f = schmidt_decompose(&state)?;
            let residual = (f.reconstruct() - state.amplitudes()).norm();
            let frames: Vec<_> = f
                .left_frame
                .iter()
                .zip(&f.right_frame)
                .map(|(e, g)| [pairs(e), pairs(g)])
                .collect();
            (f.coefficients.clone(), rank(&f, a.cutoff).rank, residual, frames, None)
        }
        FormKind::Slater => {
            let f = slater_decompose(&state)?;
            let residual = (f.reconstruct() - state.amplitudes()).norm();
            let frames: Vec<_> = f.pair_frame.iter().map(|(e, g)| [pairs(e), pairs(g)]).collect();
            (f.coefficients.clone(), rank(&f, a.cutoff).rank, residual, frames, Some(f.truncated_weight))
        }
    };
    let kind = match a.kind {
        FormKind::Schmidt => "schmidt",
        FormKind::Slater => "slater",
    };
    let summary = json!({
        "kind": kind,
        "coefficients": coefficients,
        "rank": rank_value,
        "cutoff": a.cutoff,
        "residual": residual,
        "truncated_weight": truncated,
    });
    let mut full = summary.clone();
    full["frames"] = json!(frames);
    let mut table = vec![
        ("kind", kind.to_string()),
        ("coefficients", list(&coefficients)),
        ("rank", rank_value.to_string()),
        ("residual", format!("{residual:e}")),
    ];
    if let Some(t) = truncated {
        table.push(("truncated weight", format!("{t:e}")));
    }
    emit(&a.output, &summary, &full, &table)?;
    Ok(EXIT_OK)
}

fn measure_setup(a: &MeasureArgs) -> Result<(State, VSetSpec, Budget), CliError> {
    let state = read_state(&a.path)?.state;
    let spec = VSetSpec::new(state.parties(), state.local_dim(), a.family.family(), a.rank_bound)?;
    Ok((state, spec, a.budget.budget()?))
}

fn cmd_norm(a: &NormArgs) -> Result<u8, CliError> {
    let m = &a.measure;
    let (state, spec, budget) = measure_setup(m)?;
    let start = Instant::now();
    let mut manifest = RunManifest::new("norm", Some(m.path.display().to_string()), &budget, Some(&spec));
    let mut table = vec![
        ("state", describe(&m.path, &state)),
        ("family", spec.family().name().to_string()),
        ("rank bound", spec.rank_bound().to_string()),
    ];
    match a.method {
        MethodArg::Closed => {
            let State::Pure(pure) = &state else {
                return Err(CliError::Usage(
                    "the closed form needs a pure state; use --method bracket".into(),
                ));
            };
            let value = q_pure_closed_form(pure, &spec).map_err(|e| {
                CliError::Usage(format!("{e}; the closed form covers two-party pure states with the tensor or wedge family and rank bound 1, use --method bracket"))
            })?;
            manifest.wall_time_seconds = start.elapsed().as_secs_f64();
            table.push(("method", "closed_form".into()));
            table.push(("value", format!("{value:.12}")));
            let summary = json!({
                "method": "closed_form",
                "family": spec.family().name(),
                "rank_bound": spec.rank_bound(),
                "value": value,
                "manifest": manifest,
            });
            emit(&m.output, &summary, &summary, &table)?;
        }
        MethodArg::Bracket => {
            let b = q_bracket(&state.density(), &spec, &budget)?;
            manifest.wall_time_seconds = start.elapsed().as_secs_f64();
            table.push(("method", "bracket".into()));
            table.push(("lower", bound_text(b.lower.finite())));
            table.push(("upper", bound_text(b.upper.finite())));
            table.push(("width", bound_text(b.width().finite())));
            table.push(("lower method", b.lower_method.name().into()));
            table.push(("upper method", b.upper_method.name().into()));
            table.push(("lp rounds", b.lp_rounds.to_string()));
            let summary = json!({
                "method": "bracket",
                "family": spec.family().name(),
                "rank_bound": spec.rank_bound(),
                "bracket": BracketView::new(&b, false),
                "manifest": manifest,
            });
            let full = json!({
                "method": "bracket",
                "family": spec.family().name(),
                "rank_bound": spec.rank_bound(),
                "bracket": BracketView::new(&b, true),
                "manifest": manifest,
            });
            emit(&m.output, &summary, &full, &table)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verdict(a: &MeasureArgs) -> Result<u8, CliError> {
    let (state, spec, budget) = measure_setup(a)?;
    let start = Instant::now();
    let v = verdict(&state.density(), &spec, &budget)?;
    let mut manifest = RunManifest::new("verdict", Some(a.path.display().to_string()), &budget, Some(&spec));
    manifest.wall_time_seconds = start.elapsed().as_secs_f64();
    let table = vec![
        ("state", describe(&a.path, &state)),
        ("family", spec.family().name().to_string()),
        ("rank bound", spec.rank_bound().to_string()),
        ("status", v.status.name().to_string()),
        ("lower", bound_text(v.bracket.lower.finite())),
        ("upper", bound_text(v.bracket.upper.finite())),
        ("threshold gap", format!("{:e}", v.threshold_gap)),
    ];
    let body = |certificates: bool| {
        json!({
            "status": v.status.name(),
            "family": spec.family().name(),
            "rank_bound": spec.rank_bound(),
            "threshold_gap": v.threshold_gap.is_finite().then_some(v.threshold_gap),
            "bracket": BracketView::new(&v.bracket, certificates),
            "manifest": manifest,
        })
    };
    emit(&a.output, &body(false), &body(true), &table)?;
    Ok(match v.status {
        Status::Separable => EXIT_OK,
        Status::Entangled => EXIT_NEGATIVE,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn cmd_generate(a: &GenerateArgs) -> Result<u8, CliError> {
    let params = Params {
        local_dim: a.n,
        parties: a.k,
        terms: a.terms,
        rank: a.rank,
        sector: a.sector,
    };
    let file: StateFile = generate(a.name, &params, a.seed)?;
    match &a.out {
        Some(path) => {
            write_state(&file, path)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{}", to_toml(&file)),
    }
    Ok(EXIT_OK)
}

fn cmd_repro(a: &ReproArgs) -> Result<u8, CliError> {
    let budget = a.budget.budget()?;
    let opts = ReproOptions {
        n: a.n,
        k: a.k,
        l: a.l,
        budget,
    };
    let start = Instant::now();
    let cases = repro::run(a.case, &opts);
    let mut manifest = RunManifest::new("repro", None, &budget, None);
    manifest.wall_time_seconds = start.elapsed().as_secs_f64();
    let passed = cases.iter().filter(|c| c.pass).count();
    let report = json!({
        "cases": cases,
        "passed": passed,
        "total": cases.len(),
        "manifest": manifest,
    });
    if let Some(path) = &a.output.out {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        std::fs::write(path, text + "\n").map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    if a.output.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print_cases(&cases);
        println!("{passed}/{} passed", cases.len());
    }
    Ok(if passed == cases.len() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn print_cases(cases: &[repro::ReproCase]) {
    let header = ["case", "expected", "observed", "tolerance", "reference", "status"];
    let rows: Vec<[String; 6]> = cases
        .iter()
        .map(|c| {
            [
                c.id.clone(),
                c.expected.clone(),
                c.observed.clone(),
                c.tolerance.clone(),
                c.reference.clone(),
                if c.pass { "pass".into() } else { "FAIL".into() },
            ]
        })
        .collect();
    let mut widths = header.map(|h| h.chars().count());
    for r in &rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        println!("{}", padded.join("  ").trim_end());
    };
    line(&header.map(String::from));
    for r in &rows {
        line(r);
    }
}
