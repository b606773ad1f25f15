use crate::error::{Error, Result};
use crate::tensor::SymmetrySector;

/// Which balanced vector family defines the measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Unit product vectors, or unit vectors of Schmidt rank at most `l`.
    Tensor,
    /// Symmetric products `a ⊗ ... ⊗ a` of a unit vector.
    Vee,
    /// Unit wedge products, or unit antisymmetric vectors of Slater rank at most `l`.
    Wedge,
}

impl Family {
    pub fn sector(self) -> SymmetrySector {
        match self {
            Family::Tensor => SymmetrySector::Full,
            Family::Vee => SymmetrySector::Bosonic,
            Family::Wedge => SymmetrySector::Fermionic,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Tensor => "tensor",
            Family::Vee => "vee",
            Family::Wedge => "wedge",
        }
    }
}

impl core::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tensor" => Ok(Family::Tensor),
            "vee" => Ok(Family::Vee),
            "wedge" => Ok(Family::Wedge),
            other => Err(Error::InvalidArgument(alloc::format!(
                "unknown family {other:?} (expected tensor, vee or wedge)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VSetSpec {
    arity: usize,
    local_dim: usize,
    family: Family,
    rank_bound: usize,
}

impl VSetSpec {
    pub fn new(arity: usize, local_dim: usize, family: Family, rank_bound: usize) -> Result<Self> {
        if arity == 0 || local_dim == 0 {
            return Err(Error::InvalidArgument(
                "arity and local dimension must be positive".into(),
            ));
        }
        if rank_bound == 0 {
            return Err(Error::InvalidArgument("rank bound must be positive".into()));
        }
        if family == Family::Vee && rank_bound != 1 {
            return Err(Error::InvalidArgument(
                "the vee family has no rank-bounded variant".into(),
            ));
        }
        if rank_bound >= 2 && arity != 2 {
            return Err(Error::UnsupportedArity {
                expected: 2,
                found: arity,
            });
        }
        if family != Family::Tensor && arity < 2 {
            return Err(Error::InvalidArgument(
                "symmetric families need at least two parties".into(),
            ));
        }
        if family == Family::Wedge && arity > local_dim {
            return Err(Error::InvalidArgument(alloc::format!(
                "no nonzero wedge of {arity} vectors in dimension {local_dim}"
            )));
        }
        if local_dim.checked_pow(arity as u32).is_none() {
            return Err(Error::InvalidArgument("state dimension overflows".into()));
        }
        Ok(Self {
            arity,
            local_dim,
            family,
            rank_bound,
        })
    }

    pub fn plain(arity: usize, local_dim: usize, family: Family) -> Result<Self> {
        Self::new(arity, local_dim, family, 1)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank_bound(&self) -> usize {
        self.rank_bound
    }

    pub fn sector(&self) -> SymmetrySector {
        self.family.sector()
    }

    /// `n^k`.
    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.arity as u32)
    }
}

/// Iteration and multistart limits shared by every search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub multistarts: usize,
    pub max_iters: usize,
    /// Column cap of the membership program; `0` disables the upper bound.
    pub lp_pool: usize,
    pub lp_rounds: usize,
    pub seed: u64,
    /// Verdict margin around the separability threshold `1`.
    pub tol: f64,
    /// Seed the column pool from the spectral decomposition of the state.
    pub spectral_seed: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            multistarts: 32,
            max_iters: 200,
            lp_pool: 800,
            lp_rounds: 30,
            seed: 0x5eed,
            tol: 1e-6,
            spectral_seed: true,
        }
    }
}
