//! Monte-Carlo codeword error rate estimation over the B-AWGN channel.
//!
//! Each trial draws a uniformly random message, encodes it, maps it to BPSK
//! (`0 → +1`), adds Gaussian noise and decodes. The random stream of a trial
//! is a ChaCha8 generator keyed by `(seed, SNR index, trial index)`, and
//! trials are grouped into fixed batches whose counts are summed, so results
//! do not depend on the number of workers. Runs with the same seed share
//! their random numbers trial-for-trial, whatever the decoder.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::bp::{BpDecoder, DEFAULT_MAX_ITER};
use crate::codes::{crc_code, polar_transform, ComponentCode, Polynomial};
use crate::concat::{build_concat, encode_concat, ConcatenatedCode, Interleaver, OuterChecker};
use crate::error::{Error, Result};
use crate::product::ProductCode;
use crate::scl::{clamp_llr, DecodeOutcome, DecoderConfig, ListChecker, SclDecoder};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959964;

pub const CSV_HEADER: &str =
    "code_id,decoder,list_size,max_iter,ebn0_db,trials,block_errors,cer,ci_low,ci_high,genie_lb_errors,seed";

/// Noise standard deviation for rate `rate` at `ebn0_db`.
pub fn noise_sigma(ebn0_db: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidParameter(format!("code rate {rate} outside (0, 1]")));
    }
    if !ebn0_db.is_finite() {
        return Err(Error::InvalidParameter(format!("Eb/N0 {ebn0_db} dB is not finite")));
    }
    Ok((1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))).sqrt())
}

/// Channel LLRs `2y/σ²` for BPSK over AWGN, clamped.
pub fn biawgn_llrs<R: Rng + ?Sized>(codeword: &[u8], ebn0_db: f64, rate: f64, rng: &mut R) -> Result<Vec<f64>> {
    let sigma = noise_sigma(ebn0_db, rate)?;
    let scale = 2.0 / (sigma * sigma);
    Ok(codeword
        .iter()
        .map(|&c| {
            let z: f64 = rng.sample(StandardNormal);
            let y = 1.0 - 2.0 * f64::from(c & 1) + sigma * z;
            clamp_llr(scale * y)
        })
        .collect())
}

/// Random stream of one trial.
pub fn trial_rng(seed: u64, snr_index: usize, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(snr_index as u64).to_le_bytes());
    key[16..24].copy_from_slice(&trial.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Wilson score interval for `errors` out of `trials`.
pub fn wilson_interval(errors: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Clone)]
pub enum SimCode {
    Product(ProductCode),
    Concat(ConcatenatedCode),
}

impl SimCode {
    /// Parses a product descriptor such as `eH(16,11) x SPC(8,7)`, or a
    /// concatenation `OUTER [~pi(SEED)] + PRODUCT` with `OUTER` one of
    /// `CRC(POLY,K_O)` (polynomial in hex or binary) or `id(N,N)`.
    pub fn parse(descriptor: &str) -> Result<Self> {
        let Some((outer, inner)) = descriptor.split_once('+') else {
            return Ok(SimCode::Product(ProductCode::parse(descriptor)?));
        };
        let inner = ProductCode::parse(inner)?;
        let (outer, seed) = match outer.split_once('~') {
            Some((o, pi)) => {
                let pi = pi.trim();
                let seed = pi
                    .strip_prefix("pi(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("expected ~pi(SEED), got {pi:?}")))?
                    .trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("bad interleaver seed in {pi:?}: {e}")))?;
                (o.trim(), Some(seed))
            }
            None => (outer.trim(), None),
        };
        let outer_code = if outer.to_ascii_lowercase().starts_with("crc(") {
            let args = outer[4..]
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("missing ')' in {outer:?}")))?;
            let (poly, k) = args
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected CRC(POLY,K_O), got {outer:?}")))?;
            let k = k
                .trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad CRC dimension in {outer:?}: {e}")))?;
            crc_code(&Polynomial::parse(poly.trim())?, k)?
        } else {
            ComponentCode::parse(outer)?
        };
        let n_o = outer_code.n();
        let pi = match seed {
            Some(s) => Interleaver::random(n_o, s),
            None => Interleaver::trivial(n_o),
        };
        Ok(SimCode::Concat(build_concat(outer_code, pi, inner)?))
    }

    pub fn inner(&self) -> &ProductCode {
        match self {
            SimCode::Product(p) => p,
            SimCode::Concat(c) => c.inner(),
        }
    }

    pub fn n(&self) -> usize {
        self.inner().n()
    }

    pub fn k(&self) -> usize {
        match self {
            SimCode::Product(p) => p.k(),
            SimCode::Concat(c) => c.k(),
        }
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    pub fn name(&self) -> String {
        match self {
            SimCode::Product(p) => p.name(),
            SimCode::Concat(c) => c.name(),
        }
    }

    /// Systematic encoding of a length-`k` message.
    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        match self {
            SimCode::Product(p) => p.encode_systematic_flat(message),
            SimCode::Concat(c) => encode_concat(c, message),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecoderSpec {
    Sc,
    Scl { list_size: usize },
    /// SCL whose final list is tested against the outer code.
    SclCrc { list_size: usize },
    Bp { max_iter: usize },
    /// BP with the outer-code check node.
    BpOuter { max_iter: usize },
}

impl DecoderSpec {
    pub fn label(&self) -> &'static str {
        match self {
            DecoderSpec::Sc => "SC",
            DecoderSpec::Scl { .. } => "SCL",
            DecoderSpec::SclCrc { .. } => "SCL+CRC",
            DecoderSpec::Bp { .. } => "BP",
            DecoderSpec::BpOuter { .. } => "BP+outer",
        }
    }

    pub fn list_size(&self) -> Option<usize> {
        match *self {
            DecoderSpec::Sc => Some(1),
            DecoderSpec::Scl { list_size } | DecoderSpec::SclCrc { list_size } => Some(list_size),
            _ => None,
        }
    }

    pub fn max_iter(&self) -> Option<usize> {
        match *self {
            DecoderSpec::Bp { max_iter } | DecoderSpec::BpOuter { max_iter } => Some(max_iter),
            _ => None,
        }
    }

    /// Parses `SC`, `SCL(L)`, `SCL(L)+CRC`, `BP`, `BP(iters)`, `BP+outer`, `BP(iters)+outer`.
    pub fn parse(text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_uppercase();
        let (head, suffix) = match t.split_once('+') {
            Some((h, s)) => (h.to_string(), Some(s.to_string())),
            None => (t.clone(), None),
        };
        let (name, arg) = match head.split_once('(') {
            Some((n, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("missing ')' in decoder {text:?}")))?;
                let v = inner
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad decoder parameter in {text:?}: {e}")))?;
                (n.to_string(), Some(v))
            }
            None => (head.clone(), None),
        };
        let spec = match (name.as_str(), arg, suffix.as_deref()) {
            ("SC", None, None) => DecoderSpec::Sc,
            ("SCL", Some(l), None) => DecoderSpec::Scl { list_size: l },
            ("SCL", Some(l), Some("CRC")) => DecoderSpec::SclCrc { list_size: l },
            ("BP", it, None) => DecoderSpec::Bp {
                max_iter: it.unwrap_or(DEFAULT_MAX_ITER),
            },
            ("BP", it, Some("OUTER")) => DecoderSpec::BpOuter {
                max_iter: it.unwrap_or(DEFAULT_MAX_ITER),
            },
            _ => return Err(Error::Parse(format!("unknown decoder {text:?}"))),
        };
        spec.validate_params()?;
        Ok(spec)
    }

    fn validate_params(&self) -> Result<()> {
        if self.list_size() == Some(0) {
            return Err(Error::InvalidParameter("list size must be at least 1".into()));
        }
        if self.max_iter() == Some(0) {
            return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

impl std::fmt::Display for DecoderSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            DecoderSpec::Sc => write!(f, "SC"),
            DecoderSpec::Scl { list_size } => write!(f, "SCL({list_size})"),
            DecoderSpec::SclCrc { list_size } => write!(f, "SCL({list_size})+CRC"),
            DecoderSpec::Bp { max_iter } => write!(f, "BP({max_iter})"),
            DecoderSpec::BpOuter { max_iter } => write!(f, "BP({max_iter})+outer"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub min_errors: u64,
    pub max_trials: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_errors: 100,
            max_trials: 10_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub code_id: String,
    pub code: SimCode,
    pub decoder: DecoderSpec,
    pub decoder_config: DecoderConfig,
    /// Record genie-aided ML lower-bound errors (list decoders only).
    pub genie: bool,
    pub ebn0_db: Vec<f64>,
    pub seed: u64,
    pub stop: StopRule,
    /// Worker threads; 0 uses the rayon default.
    pub workers: usize,
    /// Trials per batch; the stop rule is evaluated between batches.
    pub batch_size: u64,
    /// Print per-point progress to standard error.
    pub progress: bool,
}

impl SimConfig {
    pub fn new(code: SimCode, decoder: DecoderSpec, ebn0_db: Vec<f64>) -> Self {
        Self {
            code_id: code.name(),
            code,
            decoder,
            decoder_config: DecoderConfig::default(),
            genie: false,
            ebn0_db,
            seed: 0,
            stop: StopRule::default(),
            workers: 0,
            batch_size: 1000,
            progress: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ebn0_db.is_empty() {
            return Err(Error::InvalidParameter("SNR grid is empty".into()));
        }
        if let Some(s) = self.ebn0_db.iter().find(|s| !s.is_finite()) {
            return Err(Error::InvalidParameter(format!("Eb/N0 {s} dB is not finite")));
        }
        if self.stop.min_errors == 0 || self.stop.max_trials == 0 {
            return Err(Error::InvalidParameter("stop rule needs min_errors >= 1 and max_trials >= 1".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidParameter("batch size must be at least 1".into()));
        }
        self.decoder.validate_params()?;
        let is_concat = matches!(self.code, SimCode::Concat(_));
        match self.decoder {
            DecoderSpec::SclCrc { .. } | DecoderSpec::BpOuter { .. } if !is_concat => {
                return Err(Error::Unsupported(format!(
                    "decoder {} needs a concatenated code",
                    self.decoder
                )))
            }
            DecoderSpec::Bp { .. } | DecoderSpec::BpOuter { .. } if self.code.inner().components().len() != 2 => {
                return Err(Error::Unsupported("BP needs a 2-dimensional product code".into()))
            }
            _ => {}
        }
        if self.genie && matches!(self.decoder, DecoderSpec::Bp { .. } | DecoderSpec::BpOuter { .. }) {
            return Err(Error::Unsupported("genie bound needs a list decoder".into()));
        }
        Ok(())
    }
}

/// Error counts of one batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BatchCounts {
    pub trials: u64,
    pub errors: u64,
    pub genie_errors: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimRecord {
    pub code_id: String,
    pub decoder: DecoderSpec,
    pub ebn0_db: f64,
    pub trials: u64,
    pub block_errors: u64,
    pub cer: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub genie_lb_errors: Option<u64>,
    pub seed: u64,
    pub batches: Vec<BatchCounts>,
    pub wall_seconds: f64,
}

impl SimRecord {
    pub fn genie_cer(&self) -> Option<f64> {
        self.genie_lb_errors.map(|e| e as f64 / self.trials as f64)
    }

    pub fn genie_interval(&self) -> Option<(f64, f64)> {
        self.genie_lb_errors.map(|e| wilson_interval(e, self.trials, Z_95))
    }

    /// One CSV row matching [`CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{:.6e},{:.6e},{:.6e},{},{}",
            csv_field(&self.code_id),
            self.decoder.label(),
            opt(self.decoder.list_size()),
            opt(self.decoder.max_iter()),
            self.ebn0_db,
            self.trials,
            self.block_errors,
            self.cer,
            self.ci_low,
            self.ci_high,
            self.genie_lb_errors.map(|g| g.to_string()).unwrap_or_default(),
            self.seed
        )
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn records_to_csv(records: &[SimRecord]) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    for r in records {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

enum Worker {
    Scl(SclDecoder),
    Bp(BpDecoder),
}

struct Context<'a> {
    cfg: &'a SimConfig,
    checker: Option<OuterChecker>,
}

impl Context<'_> {
    fn worker(&self) -> Worker {
        let cfg = self.cfg;
        match (cfg.decoder, &cfg.code) {
            (DecoderSpec::Bp { .. }, code) => Worker::Bp(BpDecoder::new(code.inner()).expect("validated")),
            (DecoderSpec::BpOuter { .. }, SimCode::Concat(cc)) => {
                Worker::Bp(BpDecoder::concatenated(cc).expect("validated"))
            }
            (spec, _) => Worker::Scl(
                SclDecoder::new(spec.list_size().unwrap_or(1), cfg.decoder_config).expect("validated"),
            ),
        }
    }

    /// Returns `(block error, genie error)`.
    fn trial(&self, worker: &mut Worker, snr_index: usize, trial: u64) -> Result<(bool, bool)> {
        let cfg = self.cfg;
        let code = &cfg.code;
        let mut rng = trial_rng(cfg.seed, snr_index, trial);
        let message: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2u8)).collect();
        let codeword = code.encode(&message)?;
        let llrs = biawgn_llrs(&codeword, cfg.ebn0_db[snr_index], code.rate(), &mut rng)?;
        let frozen = code.inner().frozen();
        let checker = self.checker.as_ref().map(|c| c as &dyn ListChecker);
        let out: DecodeOutcome = match worker {
            Worker::Bp(dec) => dec.decode(&llrs, cfg.decoder.max_iter().unwrap_or(DEFAULT_MAX_ITER))?,
            Worker::Scl(dec) if cfg.genie => {
                let mut truth_u = codeword.clone();
                polar_transform(&mut truth_u);
                dec.decode_with_genie(&llrs, frozen, checker, &truth_u)?
            }
            Worker::Scl(dec) => dec.decode(&llrs, frozen, checker)?,
        };
        let error = out.chosen_codeword != codeword;
        let genie_error = out.genie.is_some_and(|g| !g.truth_selected);
        Ok((error, genie_error))
    }
}

/// Decodes one LLR vector of `code` with `decoder`.
pub fn decode_llrs(code: &SimCode, decoder: DecoderSpec, config: DecoderConfig, llrs: &[f64]) -> Result<DecodeOutcome> {
    decoder.validate_params()?;
    match (decoder, code) {
        (DecoderSpec::Bp { max_iter }, code) => BpDecoder::new(code.inner())?.decode(llrs, max_iter),
        (DecoderSpec::BpOuter { max_iter }, SimCode::Concat(cc)) => BpDecoder::concatenated(cc)?.decode(llrs, max_iter),
        (DecoderSpec::SclCrc { list_size }, SimCode::Concat(cc)) => {
            let checker = cc.checker();
            SclDecoder::new(list_size, config)?.decode(llrs, cc.inner().frozen(), Some(&checker))
        }
        (DecoderSpec::Sc | DecoderSpec::Scl { .. }, code) => {
            SclDecoder::new(decoder.list_size().unwrap_or(1), config)?.decode(llrs, code.inner().frozen(), None)
        }
        (spec, _) => Err(Error::Unsupported(format!("{spec} needs a concatenated code"))),
    }
}

/// Runs every SNR point of `cfg`.
pub fn run_experiment(cfg: &SimConfig) -> Result<Vec<SimRecord>> {
    run_experiment_with(cfg, |_| {})
}

/// As [`run_experiment`], handing each record to `on_record` when its point finishes.
pub fn run_experiment_with(cfg: &SimConfig, mut on_record: impl FnMut(&SimRecord)) -> Result<Vec<SimRecord>> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
    let ctx = Context {
        cfg,
        checker: match (&cfg.code, cfg.decoder) {
            (SimCode::Concat(cc), DecoderSpec::SclCrc { .. }) => Some(cc.checker()),
            _ => None,
        },
    };
    let mut records = Vec::with_capacity(cfg.ebn0_db.len());
    for (snr_index, &ebn0_db) in cfg.ebn0_db.iter().enumerate() {
        let start = Instant::now();
        let mut batches = Vec::new();
        let (mut trials, mut errors, mut genie_errors) = (0u64, 0u64, 0u64);
        while trials < cfg.stop.max_trials && errors < cfg.stop.min_errors {
            let end = (trials + cfg.batch_size).min(cfg.stop.max_trials);
            let counts = pool.install(|| {
                (trials..end)
                    .into_par_iter()
                    .map_init(
                        || ctx.worker(),
                        |w, t| ctx.trial(w, snr_index, t),
                    )
                    .try_fold(BatchCounts::default, |mut acc, r| {
                        let (e, g) = r?;
                        acc.trials += 1;
                        acc.errors += u64::from(e);
                        acc.genie_errors += u64::from(g);
                        Ok::<_, Error>(acc)
                    })
                    .try_reduce(BatchCounts::default, |a, b| {
                        Ok(BatchCounts {
                            trials: a.trials + b.trials,
                            errors: a.errors + b.errors,
                            genie_errors: a.genie_errors + b.genie_errors,
                        })
                    })
            })?;
            trials = end;
            errors += counts.errors;
            genie_errors += counts.genie_errors;
            batches.push(counts);
        }
        let (ci_low, ci_high) = wilson_interval(errors, trials, Z_95);
        let record = SimRecord {
            code_id: cfg.code_id.clone(),
            decoder: cfg.decoder,
            ebn0_db,
            trials,
            block_errors: errors,
            cer: errors as f64 / trials as f64,
            ci_low,
            ci_high,
            genie_lb_errors: cfg.genie.then_some(genie_errors),
            seed: cfg.seed,
            batches,
            wall_seconds: start.elapsed().as_secs_f64(),
        };
        if cfg.progress {
            eprintln!(
                "{} {} Eb/N0={} dB: {}/{} errors, CER={:.3e} ({:.1}s)",
                record.code_id,
                cfg.decoder,
                ebn0_db,
                errors,
                trials,
                record.cer,
                record.wall_seconds
            );
        }
        on_record(&record);
        records.push(record);
    }
    Ok(records)
}

/// Eb/N0 at which the CER curve crosses `target`, interpolating `log10(CER)`
/// linearly between the first pair of points that brackets it.
pub fn ebn0_at_cer(records: &[SimRecord], target: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.ebn0_db, r.cer)).collect();
    interpolate_crossing(&pts, target)
}

pub fn interpolate_crossing(points: &[(f64, f64)], target: f64) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if y0 >= target && y1 < target && y1 > 0.0 {
            let (l0, l1, lt) = (y0.log10(), y1.log10(), target.log10());
            Some(x0 + (x1 - x0) * (l0 - lt) / (l0 - l1))
        } else if y0 >= target && y1 < target {
            Some(x1)
        } else {
            None
        }
    })
}
