//! `rmprod` command-line front end.

mod experiment;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rmprod::analysis::{
    concat_avg_min_weight, product_min_term, rational_to_f64, BoundCurve, WeightTerm,
};
use rmprod::codes::gf2::{bits_to_string, parse_bit_string};
use rmprod::scl::{CheckRule, DecoderConfig, MetricRule};
use rmprod::sim::{decode_llrs, DecoderSpec, SimCode};

#[derive(Debug, Parser)]
#[command(name = "rmprod", version, about = "Reed-Muller product codes: construction, decoding, simulation and bounds")]
struct Cli {
    /// Master seed (overrides the experiment file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for simulation, 0 for one per core (overrides the experiment file).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output file (frozen vector, codeword, CSV).
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print (n,k,d), A_d and the frozen vector of a code.
    Construct {
        /// Code descriptor, e.g. "eH(16,11) x SPC(8,7)" or "CRC(0x89,70) + eH(16,11) x SPC(8,7)".
        descriptor: String,
    },
    /// Encode one message.
    Encode {
        descriptor: String,
        /// Message bits, e.g. 0110.
        #[arg(long, short)]
        message: String,
        /// Place the message on the frozen-vector positions of u instead of the systematic positions.
        #[arg(long)]
        nonsystematic: bool,
    },
    /// Decode one LLR vector.
    Decode {
        descriptor: String,
        /// Comma or whitespace separated LLRs (positive favours 0).
        #[arg(long, conflicts_with = "llr_file", required_unless_present = "llr_file")]
        llrs: Option<String>,
        /// File holding the LLRs.
        #[arg(long)]
        llr_file: Option<PathBuf>,
        /// SC, SCL(L), SCL(L)+CRC, BP(iters) or BP(iters)+outer.
        #[arg(long, short, default_value = "SCL(8)")]
        decoder: String,
        #[command(flatten)]
        numerics: Numerics,
    },
    /// Run a Monte-Carlo experiment described by a TOML file.
    Simulate {
        config: PathBuf,
    },
    /// Minimum-weight multiplicity and truncated union bound.
    Analyze {
        descriptor: String,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        snr_start: f64,
        #[arg(long, default_value_t = 8.0, allow_negative_numbers = true)]
        snr_stop: f64,
        #[arg(long, default_value_t = 0.5)]
        snr_step: f64,
    },
}

#[derive(Debug, Args, Clone, Copy)]
struct Numerics {
    /// Min-sum check-node rule instead of the exact rule.
    #[arg(long)]
    min_sum: bool,
    /// Hard-decision path metric instead of the exact soft metric.
    #[arg(long)]
    hard_metric: bool,
}

impl Numerics {
    fn config(self) -> DecoderConfig {
        DecoderConfig {
            check: if self.min_sum { CheckRule::MinSum } else { CheckRule::Exact },
            metric: if self.hard_metric { MetricRule::Hard } else { MetricRule::Exact },
        }
    }
}

/// Exit code 2 for bad input, 3 for failures while running.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

pub fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

pub fn runtime_err(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rmprod: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let output = cli.output.as_deref();
    match &cli.command {
        Command::Construct { descriptor } => construct(descriptor, output),
        Command::Encode {
            descriptor,
            message,
            nonsystematic,
        } => encode(descriptor, message, *nonsystematic, output),
        Command::Decode {
            descriptor,
            llrs,
            llr_file,
            decoder,
            numerics,
        } => {
            let text = match (llrs, llr_file) {
                (Some(t), _) => t.clone(),
                (None, Some(p)) => fs::read_to_string(p).map_err(|e| config_err(format!("{}: {e}", p.display())))?,
                (None, None) => return Err(config_err("no LLRs given")),
            };
            decode(descriptor, &text, decoder, numerics.config(), output)
        }
        Command::Simulate { config } => experiment::simulate(config, cli.seed, cli.workers, output),
        Command::Analyze {
            descriptor,
            snr_start,
            snr_stop,
            snr_step,
        } => analyze(descriptor, *snr_start, *snr_stop, *snr_step, output),
    }
}

fn write_output(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| runtime_err(format!("{}: {e}", path.display())))
}

fn construct(descriptor: &str, output: Option<&Path>) -> CliResult<()> {
    let code = SimCode::parse(descriptor).map_err(config_err)?;
    let inner = code.inner();
    match &code {
        SimCode::Product(pc) => {
            println!("{}", pc.name());
            println!("({},{},{}), A_d={}", pc.n(), pc.k(), pc.d(), pc.min_weight_multiplicity());
        }
        SimCode::Concat(cc) => {
            println!("{}", cc.name());
            println!("({},{}), rate={:.4}", cc.n(), cc.k(), cc.rate());
            println!(
                "inner ({},{},{}), A_d={}",
                inner.n(),
                inner.k(),
                inner.d(),
                inner.min_weight_multiplicity()
            );
        }
    }
    let f = bits_to_string(inner.frozen().bits());
    println!("f = {f}");
    if let Some(path) = output {
        write_output(path, &format!("{f}\n"))?;
    }
    Ok(())
}

fn encode(descriptor: &str, message: &str, nonsystematic: bool, output: Option<&Path>) -> CliResult<()> {
    let code = SimCode::parse(descriptor).map_err(config_err)?;
    let bits = parse_bit_string(message).map_err(config_err)?;
    let codeword = match (&code, nonsystematic) {
        (SimCode::Product(pc), true) => pc.encode_nonsystematic(&bits),
        (SimCode::Concat(_), true) => {
            return Err(config_err("--nonsystematic applies to product codes only"))
        }
        (code, false) => code.encode(&bits),
    }
    .map_err(config_err)?;
    let text = bits_to_string(&codeword);
    println!("{text}");
    if let Some(path) = output {
        write_output(path, &format!("{text}\n"))?;
    }
    Ok(())
}

fn parse_llrs(text: &str) -> CliResult<Vec<f64>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| config_err(format!("bad LLR {t:?}: {e}"))))
        .collect()
}

fn decode(descriptor: &str, llr_text: &str, decoder: &str, config: DecoderConfig, output: Option<&Path>) -> CliResult<()> {
    let code = SimCode::parse(descriptor).map_err(config_err)?;
    let spec = DecoderSpec::parse(decoder).map_err(config_err)?;
    let llrs = parse_llrs(llr_text)?;
    if llrs.len() != code.n() {
        return Err(config_err(format!("expected {} LLRs, got {}", code.n(), llrs.len())));
    }
    let out = decode_llrs(&code, spec, config, &llrs).map_err(config_err)?;
    let codeword = bits_to_string(&out.chosen_codeword);
    let message = match &code {
        SimCode::Product(pc) => Some(pc.systematic_info(&out.chosen_codeword)),
        SimCode::Concat(cc) => cc.message_of(&out.chosen_codeword).ok(),
    };
    println!("codeword = {codeword}");
    match &message {
        Some(m) => println!("message = {}", bits_to_string(m)),
        None => println!("message = (decision is not a codeword)"),
    }
    if let Some(i) = out.chosen_index() {
        println!("candidate = {i} of {}, metric = {:.6}", out.candidates.len(), out.candidates[i].metric);
    }
    if let (Some(c), Some(it)) = (out.converged, out.iterations) {
        println!("converged = {c}, iterations = {it}");
    }
    if let Some(path) = output {
        write_output(path, &format!("{codeword}\n"))?;
    }
    Ok(())
}

fn analyze(descriptor: &str, start: f64, stop: f64, step: f64, output: Option<&Path>) -> CliResult<()> {
    if !start.is_finite() || !stop.is_finite() || step.is_nan() || step <= 0.0 || stop < start {
        return Err(config_err("SNR grid needs snr_step > 0 and snr_stop >= snr_start"));
    }
    let code = SimCode::parse(descriptor).map_err(config_err)?;
    let term = match &code {
        SimCode::Product(pc) => {
            let term = product_min_term(pc);
            println!("A_{} = {}", pc.d(), pc.min_weight_multiplicity());
            term
        }
        SimCode::Concat(cc) => {
            let avg = concat_avg_min_weight(cc).map_err(runtime_err)?;
            let d = cc.inner().d();
            let x = rational_to_f64(&avg);
            println!("A_bar_{d} = {x:.1}");
            println!("A_bar_{d} exact = {avg}");
            WeightTerm::new(d, x)
        }
    };
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    let grid: Vec<f64> = (0..count).map(|i| start + step * i as f64).collect();
    let curve = BoundCurve::new(&[term], code.rate(), &grid).map_err(config_err)?;
    let csv = curve.to_csv();
    match output {
        Some(path) => write_output(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}
