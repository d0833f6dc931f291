use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use scmul_core::encoder::{maximal_taps, parse_seed, DEFAULT_SEED_X, DEFAULT_SEED_Y};
use scmul_core::{GateLibrary, LfsrConfig, MultiplierKind};

pub const DEFAULT_WIDTH: u32 = 8;
pub const DEFAULT_BUCKETS: usize = 16;
pub const EXHAUSTIVE_MAX_WIDTH: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Design {
    Proposed,
    Gaines,
    Jenson,
    Umul,
    All,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Operand width B in bits (2..=16)
    #[arg(long = "b", global = true)]
    pub width: Option<u32>,
    #[arg(long, value_enum, global = true)]
    pub design: Option<Design>,
    /// Output directory for CSV files
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Gate library JSON file
    #[arg(long, global = true, env = "SCMUL_GATE_LIB")]
    pub gate_lib: Option<PathBuf>,
    /// Gaines X-side LFSR seed (hex like 0x01 or decimal)
    #[arg(long, global = true, value_parser = parse_seed)]
    pub seed1: Option<u64>,
    /// Gaines Y-side LFSR seed
    #[arg(long, global = true, value_parser = parse_seed)]
    pub seed2: Option<u64>,
    /// Gaines LFSR taps, comma separated (e.g. 8,6,5,4)
    #[arg(long, global = true, value_delimiter = ',')]
    pub taps: Option<Vec<u32>>,
    /// Truncate the Jenson streams to this many cycles
    #[arg(long, global = true)]
    pub truncate: Option<u64>,
    /// Histogram bucket count K
    #[arg(long, global = true)]
    pub buckets: Option<usize>,
    /// Sample N random operand pairs instead of sweeping all of them
    #[arg(long, global = true)]
    pub sample: Option<usize>,
    /// RNG seed for sampled sweeps
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// JSON run configuration; explicit flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GainesFile {
    pub x_gen: Option<LfsrConfig>,
    pub y_gen: Option<LfsrConfig>,
}

/// On-disk form of a run configuration. Every field is optional.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub b: Option<u32>,
    pub design: Option<Design>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub gate_lib: Option<PathBuf>,
    pub gaines: Option<GainesFile>,
    pub truncate: Option<u64>,
    pub buckets: Option<usize>,
    pub sample: Option<usize>,
    pub seed: Option<u64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub width: u32,
    pub design: Design,
    pub out: PathBuf,
    pub threads: Option<usize>,
    pub gate_lib: GateLibrary,
    pub gaines: (LfsrConfig, LfsrConfig),
    pub truncate: Option<u64>,
    pub buckets: usize,
    pub sample: Option<usize>,
    pub seed: u64,
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let file = match &args.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let width = args.width.or(file.b).unwrap_or(DEFAULT_WIDTH);
        if !(2..=16).contains(&width) {
            bail!("--b must be in 2..=16, got {width}");
        }

        let gate_lib = match args.gate_lib.as_ref().or(file.gate_lib.as_ref()) {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                GateLibrary::from_json(&text)?
            }
            None => GateLibrary::calibrated(),
        };

        let from_file = file.gaines.unwrap_or_default();
        let mask = (1u64 << width) - 1;
        let taps = match &args.taps {
            Some(t) => t.clone(),
            None => maximal_taps(width).map(<[u32]>::to_vec).unwrap_or_default(),
        };
        let generator = |flag: Option<u64>, file_gen: Option<LfsrConfig>, default_seed: u64| -> Result<LfsrConfig> {
            match (flag, file_gen, &args.taps) {
                (None, Some(g), None) => Ok(g),
                (flag, file_gen, _) => {
                    let seed = flag.or(file_gen.map(|g| g.seed)).unwrap_or(default_seed & mask);
                    Ok(LfsrConfig::new(width, taps.clone(), seed)?)
                }
            }
        };
        let gaines = (
            generator(args.seed1, from_file.x_gen, DEFAULT_SEED_X)?,
            generator(args.seed2, from_file.y_gen, DEFAULT_SEED_Y)?,
        );

        let buckets = args.buckets.or(file.buckets).unwrap_or(DEFAULT_BUCKETS);
        if buckets == 0 {
            bail!("--buckets must be at least 1");
        }

        Ok(Self {
            width,
            design: args.design.or(file.design).unwrap_or(Design::All),
            out: args.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from(".")),
            threads: args.threads.or(file.threads),
            gate_lib,
            gaines,
            truncate: args.truncate.or(file.truncate),
            buckets,
            sample: args.sample.or(file.sample),
            seed: args.seed.or(file.seed).unwrap_or(0),
        })
    }

    pub fn kinds(&self) -> Vec<MultiplierKind> {
        let gaines = MultiplierKind::Gaines { x_gen: self.gaines.0.clone(), y_gen: self.gaines.1.clone() };
        let jenson = MultiplierKind::Jenson { truncate: self.truncate };
        match self.design {
            Design::Proposed => vec![MultiplierKind::Proposed],
            Design::Gaines => vec![gaines],
            Design::Jenson => vec![jenson],
            Design::Umul => vec![MultiplierKind::Umul],
            Design::All => vec![MultiplierKind::Proposed, gaines, jenson, MultiplierKind::Umul],
        }
    }

    /// Comment line recording the sweep mode and its randomness.
    pub fn sweep_comment(&self) -> String {
        match self.sample {
            Some(n) => format!("# sweep sampled pairs={n} seed={} B={}", self.seed, self.width),
            None => format!("# sweep exhaustive B={}", self.width),
        }
    }

    pub fn check_sweep_mode(&self) -> Result<()> {
        if self.sample.is_none() && self.width > EXHAUSTIVE_MAX_WIDTH {
            bail!("exhaustive sweep needs B <= {EXHAUSTIVE_MAX_WIDTH} (got {}); pass --sample N", self.width);
        }
        if self.sample == Some(0) {
            bail!("--sample must be at least 1");
        }
        Ok(())
    }
}
