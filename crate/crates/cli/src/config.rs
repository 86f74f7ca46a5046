use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use qinfo::qkd::{
    AdversaryModel, DEFAULT_ABORT_THRESHOLD, DEFAULT_CHECK_FRACTION, DEFAULT_CHSH_PAIRS,
    DEFAULT_RECON_ROUNDS,
};
use qinfo::rng::RngSeed;

use crate::ConfigError;

pub const SEED_ENV: &str = "QINFO_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Subcommand, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Teleport random single-qubit states through a shared singlet.
    Teleport,
    /// Send random two-bit messages by superdense coding.
    Superdense,
    /// Entangle two remote qubits by a Bell measurement on their partners.
    Swap,
    /// Estimate Bloch vectors of random (or given) qubit states.
    Tomography,
    /// Prepare-and-measure BB84 sessions.
    Bb84,
    /// Entanglement-based BB84 sessions with a CHSH check.
    Bb84Entangled,
    /// Entanglement analytics for a pure state read from a JSON file.
    Analyze,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Teleport => "teleport",
            Command::Superdense => "superdense",
            Command::Swap => "swap",
            Command::Tomography => "tomography",
            Command::Bb84 => "bb84",
            Command::Bb84Entangled => "bb84-entangled",
            Command::Analyze => "analyze",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "qinfo",
    version,
    about = "Run and verify quantum-information protocol experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

/// Every flag is optional so that a config file can fill the gaps.
#[derive(Debug, Default, Args)]
pub struct Flags {
    /// JSON config file; flags given on the command line take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// Base seed [default: $QINFO_SEED, else 0]. Trial i uses seed + i.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Qubits (or pairs) sent per BB84 session.
    #[arg(long, global = true)]
    pub qubits: Option<usize>,
    /// none, intercept-zx, intercept-fixed:z, intercept-fixed:x or depolarize:<p>
    #[arg(long, global = true)]
    pub adversary: Option<String>,
    #[arg(long, global = true)]
    pub check_fraction: Option<f64>,
    #[arg(long, global = true)]
    pub abort_threshold: Option<f64>,
    #[arg(long, global = true)]
    pub recon_rounds: Option<usize>,
    /// Extra pairs for the CHSH check in bb84-entangled (0 disables it).
    #[arg(long, global = true)]
    pub chsh_pairs: Option<usize>,
    /// Shots per basis for tomography.
    #[arg(long, global = true)]
    pub shots: Option<usize>,
    /// Report path; stdout when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// State file (JSON) for analyze and tomography.
    #[arg(long, global = true)]
    pub state: Option<PathBuf>,
    /// Analyze: the first `cut` qubits form side A.
    #[arg(long, global = true)]
    pub cut: Option<usize>,
    /// Directory for per-trial JSON-lines transcripts.
    #[arg(long, global = true)]
    pub transcripts: Option<PathBuf>,
}

/// Config file schema. Same names as the flags, snake_case.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub command: Option<Command>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub qubits: Option<usize>,
    pub adversary: Option<String>,
    pub check_fraction: Option<f64>,
    pub abort_threshold: Option<f64>,
    pub recon_rounds: Option<usize>,
    pub chsh_pairs: Option<usize>,
    pub shots: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub state: Option<PathBuf>,
    pub cut: Option<usize>,
    pub transcripts: Option<PathBuf>,
}

/// Fully resolved experiment settings, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub trials: u64,
    pub seed: RngSeed,
    pub qubits: usize,
    pub adversary: AdversaryModel,
    pub check_fraction: f64,
    pub abort_threshold: f64,
    pub recon_rounds: usize,
    pub chsh_pairs: usize,
    pub shots: usize,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    pub format: Format,
    pub state: Option<PathBuf>,
    pub cut: usize,
    #[serde(skip)]
    pub transcripts: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            command,
            trials: 1,
            seed: RngSeed(0),
            qubits: 10_000,
            adversary: AdversaryModel::None,
            check_fraction: DEFAULT_CHECK_FRACTION,
            abort_threshold: DEFAULT_ABORT_THRESHOLD,
            recon_rounds: DEFAULT_RECON_ROUNDS,
            chsh_pairs: DEFAULT_CHSH_PAIRS,
            shots: 10_000,
            output: None,
            format: Format::Json,
            state: None,
            cut: 1,
            transcripts: None,
        }
    }

    /// Merges flags over the optional config file over `env_seed`.
    pub fn resolve(command: Command, flags: Flags, env_seed: Option<&str>) -> Result<Self> {
        let file = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config file {}", path.display()))
                    .map_err(ConfigError::wrap)?;
                serde_json::from_str::<ConfigFile>(&text)
                    .with_context(|| format!("parsing config file {}", path.display()))
                    .map_err(ConfigError::wrap)?
            }
            None => ConfigFile::default(),
        };
        if let Some(c) = file.command {
            if c != command {
                return Err(ConfigError::msg(format!(
                    "config file is for `{}` but `{}` was requested",
                    c.name(),
                    command.name()
                )));
            }
        }
        let env_seed = match env_seed {
            Some(s) => Some(s.trim().parse::<u64>().map_err(|_| {
                ConfigError::msg(format!("{SEED_ENV}={s:?} is not an unsigned integer"))
            })?),
            None => None,
        };

        let mut cfg = ExperimentConfig::new(command);
        macro_rules! pick {
            ($field:ident) => {
                if let Some(v) = flags.$field.or(file.$field) {
                    cfg.$field = v;
                }
            };
        }
        pick!(trials);
        pick!(qubits);
        pick!(check_fraction);
        pick!(abort_threshold);
        pick!(recon_rounds);
        pick!(chsh_pairs);
        pick!(shots);
        pick!(format);
        pick!(cut);
        cfg.output = flags.output.or(file.output);
        cfg.state = flags.state.or(file.state);
        cfg.transcripts = flags.transcripts.or(file.transcripts);
        cfg.seed = RngSeed(flags.seed.or(file.seed).or(env_seed).unwrap_or(0));
        if let Some(a) = flags.adversary.or(file.adversary) {
            cfg.adversary = a
                .parse()
                .map_err(|e| ConfigError::msg(format!("--adversary: {e}")))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(ConfigError::msg(m));
        if self.trials == 0 {
            return fail("--trials must be positive".into());
        }
        if self.shots == 0 {
            return fail("--shots must be positive".into());
        }
        if self.command == Command::Analyze {
            if self.state.is_none() {
                return fail("analyze needs --state".into());
            }
            if self.cut == 0 {
                return fail("--cut must be at least 1".into());
            }
        }
        if matches!(self.command, Command::Bb84 | Command::Bb84Entangled) {
            if let Err(e) = self.bb84_config(self.seed).validate() {
                bail!(ConfigError(e.to_string()));
            }
        }
        Ok(())
    }

    pub fn bb84_config(&self, seed: RngSeed) -> qinfo::qkd::Bb84Config {
        let mut c = qinfo::qkd::Bb84Config::new(self.qubits, seed).with_adversary(self.adversary);
        c.check_fraction = self.check_fraction;
        c.qber_abort_threshold = self.abort_threshold;
        c.recon_rounds = self.recon_rounds;
        c.chsh_pairs = self.chsh_pairs;
        c
    }
}
