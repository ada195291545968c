//! State families evaluated at a visibility `x`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use gme_core::states::{ghz_state, random_density, w_state, white_noise_mix};
use gme_core::{statefile, DensityMatrix, SystemDims};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    WNoise,
    GhzNoise,
    Random,
    File,
}

impl FromStr for FamilyKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "w-noise" => Ok(Self::WNoise),
            "ghz-noise" => Ok(Self::GhzNoise),
            "random" => Ok(Self::Random),
            "file" => Ok(Self::File),
            other => Err(CliError::Usage(format!(
                "unknown family {other:?} (expected w-noise, ghz-noise, random or file)"
            ))),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::WNoise => "w-noise",
            Self::GhzNoise => "ghz-noise",
            Self::Random => "random",
            Self::File => "file",
        })
    }
}

/// User-facing description of a family before anything is loaded.
#[derive(Debug, Clone, Default)]
pub struct FamilySpec {
    pub family: Option<FamilyKind>,
    pub input: Option<PathBuf>,
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub seed: Option<u64>,
}

/// A pure (or loaded) state mixed with white noise: `x rho + (1 - x) I / D`.
#[derive(Debug, Clone)]
pub struct Family {
    pub kind: FamilyKind,
    pub base: DensityMatrix,
}

impl Family {
    pub fn w_noise() -> Self {
        Self { kind: FamilyKind::WNoise, base: w_state() }
    }

    pub fn ghz_noise(n: usize, d: usize) -> Result<Self> {
        Ok(Self { kind: FamilyKind::GhzNoise, base: ghz_state(n, d)? })
    }

    pub fn from_state(base: DensityMatrix) -> Self {
        Self { kind: FamilyKind::File, base }
    }

    pub fn resolve(spec: &FamilySpec) -> Result<Self> {
        let kind = match (spec.family, &spec.input) {
            (Some(k), _) => k,
            (None, Some(_)) => FamilyKind::File,
            (None, None) => return Err(CliError::Usage("one of --family or --input is required".into())),
        };
        if spec.input.is_some() && kind != FamilyKind::File {
            return Err(CliError::Usage(format!("--input cannot be combined with --family {kind}")));
        }
        match kind {
            FamilyKind::WNoise => {
                if spec.n.is_some_and(|n| n != 3) || spec.d.is_some_and(|d| d != 2) {
                    return Err(CliError::Usage("w-noise is the three-qubit W state (n=3, d=2)".into()));
                }
                Ok(Self::w_noise())
            }
            FamilyKind::GhzNoise => Self::ghz_noise(spec.n.unwrap_or(4), spec.d.unwrap_or(2)),
            FamilyKind::Random => {
                let seed = spec
                    .seed
                    .ok_or_else(|| CliError::Usage("--seed is required for the random family".into()))?;
                let dims = SystemDims::uniform(spec.n.unwrap_or(3), spec.d.unwrap_or(2))?;
                Ok(Self { kind, base: random_density(&dims, 1, seed)? })
            }
            FamilyKind::File => {
                let path = spec
                    .input
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("--family file needs --input".into()))?;
                let base = statefile::read_state(path).map_err(|e| match e {
                    gme_core::Error::Io(io) => CliError::Usage(format!("cannot read {}: {io}", path.display())),
                    other => CliError::Usage(format!("{}: {other}", path.display())),
                })?;
                Ok(Self { kind, base })
            }
        }
    }

    pub fn state_at(&self, x: f64) -> Result<DensityMatrix> {
        Ok(white_noise_mix(&self.base, x)?)
    }

    pub fn dims(&self) -> &SystemDims {
        self.base.dims()
    }
}
