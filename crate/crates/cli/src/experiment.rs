//! TOML experiment files for `rmprod simulate`.
//!
//! ```toml
//! seed = 1
//! ebn0_db = [3.0, 3.5, 4.0]
//! decoders = ["SCL(8)", "BP(100)"]
//! genie = true
//!
//! [stop]
//! min_errors = 100
//! max_trials = 1000000
//!
//! [[code]]
//! inner = "eH(16,11) x SPC(8,7)"
//! outer = "CRC(0x89,70)"
//! interleaver = "random"
//! interleaver_seed = 7
//! ```

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Deserialize;
use rmprod::scl::{CheckRule, DecoderConfig, MetricRule};
use rmprod::sim::{run_experiment_with, DecoderSpec, SimCode, SimConfig, StopRule, CSV_HEADER};

use crate::{config_err, runtime_err, CliResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub workers: usize,
    pub output: Option<PathBuf>,
    pub ebn0_db: Vec<f64>,
    pub decoders: Vec<String>,
    /// Also count genie-aided ML lower-bound errors for list decoders.
    #[serde(default)]
    pub genie: bool,
    #[serde(default = "default_batch")]
    pub batch_size: u64,
    #[serde(default)]
    pub check_rule: CheckName,
    #[serde(default)]
    pub metric: MetricName,
    #[serde(default)]
    pub stop: StopSection,
    pub code: Vec<CodeSection>,
}

fn default_batch() -> u64 {
    1000
}

#[derive(Debug, Default, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    #[default]
    Exact,
    MinSum,
}

#[derive(Debug, Default, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricName {
    #[default]
    Soft,
    Hard,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopSection {
    #[serde(default = "default_min_errors")]
    pub min_errors: u64,
    #[serde(default = "default_max_trials")]
    pub max_trials: u64,
}

fn default_min_errors() -> u64 {
    StopRule::default().min_errors
}

fn default_max_trials() -> u64 {
    StopRule::default().max_trials
}

impl Default for StopSection {
    fn default() -> Self {
        Self {
            min_errors: default_min_errors(),
            max_trials: default_max_trials(),
        }
    }
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterleaverName {
    #[default]
    Trivial,
    Random,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSection {
    /// Label for the `code_id` column; defaults to the code name.
    pub id: Option<String>,
    /// Product descriptor.
    pub inner: String,
    /// `CRC(POLY,K_O)` or `id(N,N)`.
    pub outer: Option<String>,
    #[serde(default)]
    pub interleaver: InterleaverName,
    pub interleaver_seed: Option<u64>,
}

impl CodeSection {
    fn descriptor(&self) -> CliResult<String> {
        let Some(outer) = &self.outer else {
            if self.interleaver != InterleaverName::Trivial || self.interleaver_seed.is_some() {
                return Err(config_err(format!("code {:?}: interleaver given without an outer code", self.inner)));
            }
            return Ok(self.inner.clone());
        };
        Ok(match (self.interleaver, self.interleaver_seed) {
            (InterleaverName::Trivial, None) => format!("{outer} + {}", self.inner),
            (InterleaverName::Random, Some(s)) => format!("{outer} ~pi({s}) + {}", self.inner),
            (InterleaverName::Trivial, Some(_)) => {
                return Err(config_err("interleaver_seed needs interleaver = \"random\""))
            }
            (InterleaverName::Random, None) => {
                return Err(config_err("interleaver = \"random\" needs interleaver_seed"))
            }
        })
    }
}

pub fn parse_experiment(text: &str) -> CliResult<ExperimentFile> {
    toml::from_str(text).map_err(config_err)
}

/// One simulation job per (code, decoder) pair, in file order.
pub fn build_configs(file: &ExperimentFile) -> CliResult<Vec<SimConfig>> {
    if file.code.is_empty() || file.decoders.is_empty() {
        return Err(config_err("need at least one [[code]] and one decoder"));
    }
    let decoder_config = DecoderConfig {
        check: match file.check_rule {
            CheckName::Exact => CheckRule::Exact,
            CheckName::MinSum => CheckRule::MinSum,
        },
        metric: match file.metric {
            MetricName::Soft => MetricRule::Exact,
            MetricName::Hard => MetricRule::Hard,
        },
    };
    let mut configs = Vec::new();
    for section in &file.code {
        let code = SimCode::parse(&section.descriptor()?).map_err(config_err)?;
        for name in &file.decoders {
            let decoder = DecoderSpec::parse(name).map_err(config_err)?;
            let mut cfg = SimConfig::new(code.clone(), decoder, file.ebn0_db.clone());
            if let Some(id) = &section.id {
                cfg.code_id = id.clone();
            }
            cfg.decoder_config = decoder_config;
            cfg.genie = file.genie && decoder.list_size().is_some();
            cfg.seed = file.seed;
            cfg.workers = file.workers;
            cfg.batch_size = file.batch_size;
            cfg.stop = StopRule {
                min_errors: file.stop.min_errors,
                max_trials: file.stop.max_trials,
            };
            cfg.progress = true;
            cfg.validate().map_err(config_err)?;
            configs.push(cfg);
        }
    }
    Ok(configs)
}

pub fn simulate(path: &Path, seed: Option<u64>, workers: Option<usize>, output: Option<&Path>) -> CliResult<()> {
    let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    let mut file = parse_experiment(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    if let Some(s) = seed {
        file.seed = s;
    }
    if let Some(w) = workers {
        file.workers = w;
    }
    let configs = build_configs(&file)?;
    let target = output.map(Path::to_path_buf).or(file.output.clone());
    let mut sink: Box<dyn Write> = match &target {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| runtime_err(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    let io_err = |e: io::Error| runtime_err(format!("writing CSV: {e}"));
    writeln!(sink, "{CSV_HEADER}").map_err(io_err)?;
    for cfg in &configs {
        let mut write_result = Ok(());
        run_experiment_with(cfg, |r| {
            if write_result.is_ok() {
                write_result = writeln!(sink, "{}", r.csv_row()).and_then(|()| sink.flush());
            }
        })
        .map_err(runtime_err)?;
        write_result.map_err(io_err)?;
    }
    sink.flush().map_err(io_err)
}
