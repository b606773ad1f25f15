//! Named state generators. Seeded generators are deterministic per seed.

use qgauge_core::linalg::stream_rng;
use qgauge_core::states;
use qgauge_core::tensor::SymmetrySector;
use qgauge_core::Result;

use crate::state_io::StateFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum GeneratorName {
    Singlet,
    XiK,
    TracialWedge,
    HaarPure,
    HaarAntisymmetric,
    HaarMixed,
    ProductMixture,
}

impl GeneratorName {
    pub fn id(self) -> &'static str {
        match self {
            GeneratorName::Singlet => "singlet",
            GeneratorName::XiK => "xi_k",
            GeneratorName::TracialWedge => "tracial_wedge",
            GeneratorName::HaarPure => "haar_pure",
            GeneratorName::HaarAntisymmetric => "haar_antisymmetric",
            GeneratorName::HaarMixed => "haar_mixed",
            GeneratorName::ProductMixture => "product_mixture",
        }
    }

    fn seeded(self) -> bool {
        !matches!(
            self,
            GeneratorName::Singlet | GeneratorName::XiK | GeneratorName::TracialWedge
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SectorName {
    Full,
    Bosonic,
    Fermionic,
}

impl SectorName {
    pub fn sector(self) -> SymmetrySector {
        match self {
            SectorName::Full => SymmetrySector::Full,
            SectorName::Bosonic => SymmetrySector::Bosonic,
            SectorName::Fermionic => SymmetrySector::Fermionic,
        }
    }

    fn id(self) -> &'static str {
        match self {
            SectorName::Full => "full",
            SectorName::Bosonic => "bosonic",
            SectorName::Fermionic => "fermionic",
        }
    }
}

/// Generator parameters; each generator reads the ones it needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Params {
    /// Local dimension `n`.
    pub local_dim: usize,
    /// Number of parties `k`.
    pub parties: usize,
    /// Wedge terms for `xi_k`, product terms for `product_mixture`.
    pub terms: usize,
    pub rank: usize,
    pub sector: SectorName,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            local_dim: 2,
            parties: 2,
            terms: 1,
            rank: 2,
            sector: SectorName::Full,
        }
    }
}

pub fn generate(name: GeneratorName, params: &Params, seed: u64) -> Result<StateFile> {
    let Params {
        local_dim: n,
        parties: k,
        terms,
        rank,
        sector,
    } = *params;
    let mut rng = stream_rng(seed, 0);
    let file = match name {
        GeneratorName::Singlet => StateFile::new(states::singlet()),
        GeneratorName::XiK => StateFile::new(states::xi_family(terms, n)?)
            .with("n", n)
            .with("terms", terms),
        GeneratorName::TracialWedge => StateFile::new(states::tracial_wedge(n, k)?)
            .with("n", n)
            .with("k", k),
        GeneratorName::HaarPure => StateFile::new(states::haar_pure(&mut rng, n, k)?)
            .with("n", n)
            .with("k", k),
        GeneratorName::HaarAntisymmetric => {
            StateFile::new(states::haar_antisymmetric(&mut rng, n)?).with("n", n)
        }
        GeneratorName::HaarMixed => {
            StateFile::new(states::haar_mixed(&mut rng, n, k, rank, sector.sector())?)
                .with("n", n)
                .with("k", k)
                .with("rank", rank)
                .with("sector", sector.id())
        }
        GeneratorName::ProductMixture => {
            StateFile::new(states::product_mixture(&mut rng, n, k, terms)?)
                .with("n", n)
                .with("k", k)
                .with("terms", terms)
        }
    };
    let file = file.with("generator", name.id());
    Ok(if name.seeded() { file.with("seed", seed) } else { file })
}
