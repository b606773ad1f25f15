//! Versioned TOML state files.
//!
//! ```toml
//! format_version = 1
//! kind = "pure"            # or "mixed"
//! parties = 2
//! local_dim = 2
//! data = [[0.0, 0.0], [0.7071067811865476, 0.0], ...]   # [re, im], row-major
//!
//! [metadata]
//! generator = "singlet"
//! ```
//!
//! Pure files carry `local_dim^parties` amplitudes, mixed files the
//! `local_dim^(2 parties)` entries of the density matrix.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use qgauge_core::linalg::{CMatrix, CVector, C64};
use qgauge_core::tensor::{DensityFunctional, PureState};
use serde::Deserialize;

pub const FORMAT_VERSION: i64 = 1;

#[derive(Debug, thiserror::Error)]
pub enum StateIoError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}, column {col}: {message}")]
    Parse { line: usize, col: usize, message: String },
    #[error("unsupported format_version {found}, this build reads version {FORMAT_VERSION}")]
    Version { found: i64 },
    #[error("field `data`: {kind} state on {parties} parties of local dimension {local_dim} needs {expected} entries, found {found}")]
    LengthMismatch {
        kind: Kind,
        parties: usize,
        local_dim: usize,
        expected: usize,
        found: usize,
    },
    #[error("field `data`: density matrix has trace {trace}, expected 1")]
    TraceInvalid { trace: f64 },
    #[error("field `{field}`: {message}")]
    Invalid { field: &'static str, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Pure,
    Mixed,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Pure => "pure",
            Kind::Mixed => "mixed",
        }
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(PureState),
    Mixed(DensityFunctional),
}

impl State {
    pub fn kind(&self) -> Kind {
        match self {
            State::Pure(_) => Kind::Pure,
            State::Mixed(_) => Kind::Mixed,
        }
    }

    pub fn parties(&self) -> usize {
        match self {
            State::Pure(s) => s.parties(),
            State::Mixed(s) => s.parties(),
        }
    }

    pub fn local_dim(&self) -> usize {
        match self {
            State::Pure(s) => s.local_dim(),
            State::Mixed(s) => s.local_dim(),
        }
    }

    pub fn density(&self) -> DensityFunctional {
        match self {
            State::Pure(s) => s.density(),
            State::Mixed(s) => s.clone(),
        }
    }

    /// Entries in file order.
    fn entries(&self) -> Vec<C64> {
        match self {
            State::Pure(s) => s.amplitudes().iter().copied().collect(),
            // nalgebra is column-major; the file is row-major
            State::Mixed(s) => s.matrix().transpose().iter().copied().collect(),
        }
    }
}

impl From<PureState> for State {
    fn from(s: PureState) -> Self {
        State::Pure(s)
    }
}

impl From<DensityFunctional> for State {
    fn from(s: DensityFunctional) -> Self {
        State::Mixed(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateFile {
    pub state: State,
    pub metadata: BTreeMap<String, String>,
}

impl StateFile {
    pub fn new(state: impl Into<State>) -> Self {
        Self {
            state: state.into(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }
}

#[derive(Deserialize)]
struct Header {
    format_version: Option<toml::Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[allow(dead_code)]
    format_version: i64,
    kind: Kind,
    parties: usize,
    local_dim: usize,
    data: Vec<[f64; 2]>,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn parse_error(text: &str, err: toml::de::Error) -> StateIoError {
    let (line, col) = err.span().map_or((1, 1), |s| line_col(text, s.start));
    StateIoError::Parse {
        line,
        col,
        message: err.message().trim().to_string(),
    }
}

fn invalid(field: &'static str, err: qgauge_core::Error) -> StateIoError {
    StateIoError::Invalid {
        field,
        message: err.to_string(),
    }
}

pub fn parse_state(text: &str) -> Result<StateFile, StateIoError> {
    let header: Header = toml::from_str(text).map_err(|e| parse_error(text, e))?;
    match header.format_version {
        None => {
            return Err(StateIoError::Invalid {
                field: "format_version",
                message: "missing".into(),
            })
        }
        Some(toml::Value::Integer(v)) if v == FORMAT_VERSION => {}
        Some(toml::Value::Integer(v)) => return Err(StateIoError::Version { found: v }),
        Some(other) => {
            return Err(StateIoError::Invalid {
                field: "format_version",
                message: format!("expected an integer, found {}", other.type_str()),
            })
        }
    }
    let raw: RawFile = toml::from_str(text).map_err(|e| parse_error(text, e))?;
    if raw.parties == 0 || raw.local_dim == 0 {
        return Err(StateIoError::Invalid {
            field: if raw.parties == 0 { "parties" } else { "local_dim" },
            message: "must be positive".into(),
        });
    }
    let dim = raw
        .local_dim
        .checked_pow(raw.parties as u32)
        .filter(|d| d.checked_mul(*d).is_some())
        .ok_or_else(|| StateIoError::Invalid {
            field: "parties",
            message: "state dimension overflows".into(),
        })?;
    let expected = match raw.kind {
        Kind::Pure => dim,
        Kind::Mixed => dim * dim,
    };
    if raw.data.len() != expected {
        return Err(StateIoError::LengthMismatch {
            kind: raw.kind,
            parties: raw.parties,
            local_dim: raw.local_dim,
            expected,
            found: raw.data.len(),
        });
    }
    if let Some(i) = raw.data.iter().position(|[re, im]| !re.is_finite() || !im.is_finite()) {
        return Err(StateIoError::Invalid {
            field: "data",
            message: format!("entry {i} is not finite"),
        });
    }
    let values = raw.data.iter().map(|&[re, im]| C64::new(re, im));
    let state = match raw.kind {
        Kind::Pure => {
            let v = CVector::from_iterator(dim, values);
            State::Pure(PureState::new(raw.parties, raw.local_dim, v).map_err(|e| invalid("data", e))?)
        }
        Kind::Mixed => {
            let m = CMatrix::from_row_iterator(dim, dim, values);
            let density = DensityFunctional::new(raw.parties, raw.local_dim, m).map_err(|e| match e {
                qgauge_core::Error::TraceInvalid { trace } => StateIoError::TraceInvalid { trace },
                other => invalid("data", other),
            })?;
            State::Mixed(density)
        }
    };
    Ok(StateFile {
        state,
        metadata: raw.metadata,
    })
}

pub fn read_state(path: &Path) -> Result<StateFile, StateIoError> {
    let text = std::fs::read_to_string(path).map_err(|source| StateIoError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_state(&text)
}

fn toml_key(key: &str) -> String {
    let bare = !key.is_empty()
        && key
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
    if bare {
        key.to_string()
    } else {
        toml::Value::String(key.to_string()).to_string()
    }
}

/// Serializes with 17 significant digits per float, which round-trips exactly.
pub fn to_toml(file: &StateFile) -> String {
    let mut out = String::new();
    let state = &file.state;
    writeln!(out, "format_version = {FORMAT_VERSION}").unwrap();
    writeln!(out, "kind = \"{}\"", state.kind()).unwrap();
    writeln!(out, "parties = {}", state.parties()).unwrap();
    writeln!(out, "local_dim = {}", state.local_dim()).unwrap();
    out.push_str("data = [\n");
    for z in state.entries() {
        writeln!(out, "  [{:.16e}, {:.16e}],", z.re, z.im).unwrap();
    }
    out.push_str("]\n");
    if !file.metadata.is_empty() {
        out.push_str("\n[metadata]\n");
        for (k, v) in &file.metadata {
            writeln!(out, "{} = {}", toml_key(k), toml::Value::String(v.clone())).unwrap();
        }
    }
    out
}

/// Writes to a temporary file in the target directory, then renames it into place.
pub fn write_state(file: &StateFile, path: &Path) -> Result<(), StateIoError> {
    let io = |source| StateIoError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(to_toml(file).as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
