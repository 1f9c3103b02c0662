//! Successive cancellation (SC) and successive cancellation list (SCL)
//! decoding over the Hadamard kernel, for any frozen vector.
//!
//! The code bits are `c = u · K_2^{⊗m}` in natural (non bit-reversed) order.
//! Splitting `u = (u_a, u_b)` into halves gives `c = (v_a ⊕ v_b, v_b)` with
//! `v_a = u_a · K_2^{⊗(m−1)}` and `v_b = u_b · K_2^{⊗(m−1)}`, so the left half
//! is decoded from `check(L_a, L_b)` and the right half from
//! `combine(L_a, L_b, v̂_a)`.
//!
//! Path metrics are additive penalties (smaller is more likely). With the
//! default exact check rule and exact penalty the final metric of a path is
//! `−ln P(u | y)` up to a constant, so list selection is maximum likelihood
//! among the surviving candidates.

mod llr;

pub use llr::{
    clamp_llr, hard_decision, llr_check, llr_check_minsum, llr_combine, CheckRule, MetricRule,
    LLR_CLAMP,
};

use crate::codes::{polar_transform, FrozenVector};
use crate::error::{check_len, Error, Result};

/// Decoder numerics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct DecoderConfig {
    pub check: CheckRule,
    pub metric: MetricRule,
}

/// Membership test applied to each final-list candidate `u` vector.
pub trait ListChecker: Sync {
    fn accepts(&self, u: &[u8]) -> bool;
}

impl<F: Fn(&[u8]) -> bool + Sync> ListChecker for F {
    fn accepts(&self, u: &[u8]) -> bool {
        self(u)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub u: Vec<u8>,
    pub metric: f64,
    /// Checker verdict, when a checker was supplied.
    pub passes: Option<bool>,
}

/// Genie-aided bookkeeping for one trial: the true `u` vector is compared
/// against the final list as if it had been inserted before selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenieReport {
    pub truth_in_list: bool,
    pub truth_metric: f64,
    /// True iff selection over `list ∪ {truth}` returns the truth. A `false`
    /// proves a more likely (checker-passing) codeword exists, so counting
    /// `false` outcomes lower-bounds the ML error rate.
    pub truth_selected: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    /// u-domain information bits (the entries of `u` at information positions).
    pub chosen_info: Vec<u8>,
    pub chosen_codeword: Vec<u8>,
    /// Final list, most likely first. Empty for decoders without a list.
    pub candidates: Vec<Candidate>,
    pub genie: Option<GenieReport>,
    /// Set by iterative decoders: whether a valid codeword was reached.
    pub converged: Option<bool>,
    pub iterations: Option<usize>,
}

impl DecodeOutcome {
    /// Index into `candidates` of the chosen path: the first one accepted by
    /// the checker, or the first overall when none is (or no checker ran).
    pub fn chosen_index(&self) -> Option<usize> {
        if self.candidates.is_empty() {
            return None;
        }
        Some(self.candidates.iter().position(|c| c.passes == Some(true)).unwrap_or(0))
    }

    /// True iff any candidate passes the supplied checker.
    pub fn any_passed(&self) -> bool {
        self.candidates.iter().any(|c| c.passes == Some(true))
    }
}

fn validate(llrs: &[f64], frozen: &FrozenVector) -> Result<usize> {
    check_len(frozen.len(), llrs.len())?;
    let n = llrs.len();
    if !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "block length {n} is not a power of two"
        )));
    }
    Ok(n.trailing_zeros() as usize)
}

/// Single-path SC decoding with the default numerics.
pub fn sc_decode(llrs: &[f64], frozen: &FrozenVector) -> Result<DecodeOutcome> {
    sc_decode_with(llrs, frozen, DecoderConfig::default())
}

pub fn sc_decode_with(llrs: &[f64], frozen: &FrozenVector, config: DecoderConfig) -> Result<DecodeOutcome> {
    let m = validate(llrs, frozen)?;
    let mut walk = ScWalk::new(m, config);
    let (u, metric) = walk.run(llrs, frozen, None);
    Ok(finish(vec![Candidate { u, metric, passes: None }], frozen))
}

/// Path metric of a prescribed `u` vector: SC with decisions forced to `u`.
///
/// `u` must be zero on frozen positions.
pub fn path_metric(llrs: &[f64], frozen: &FrozenVector, u: &[u8], config: DecoderConfig) -> Result<f64> {
    let m = validate(llrs, frozen)?;
    check_len(frozen.len(), u.len())?;
    if (0..u.len()).any(|i| !frozen.is_info(i) && u[i] != 0) {
        return Err(Error::InvalidParameter("forced u vector is nonzero on a frozen position".into()));
    }
    Ok(ScWalk::new(m, config).run(llrs, frozen, Some(u)).1)
}

/// SCL decoding with list size `list_size` and an optional list checker.
pub fn scl_decode(
    llrs: &[f64],
    frozen: &FrozenVector,
    list_size: usize,
    checker: Option<&dyn ListChecker>,
) -> Result<DecodeOutcome> {
    SclDecoder::new(list_size, DecoderConfig::default())?.decode(llrs, frozen, checker)
}

/// Evaluates the genie-aided selection for a finished list decode.
///
/// Returns `true` when `list ∪ {truth}` selection (restricted to candidates
/// accepted by the checker, if one was used) picks the truth; ties favour the
/// truth.
pub fn genie_ml_lower_bound(truth_u: &[u8], truth_metric: f64, outcome: &DecodeOutcome) -> bool {
    genie_report(truth_u, truth_metric, outcome).truth_selected
}

fn genie_report(truth_u: &[u8], truth_metric: f64, outcome: &DecodeOutcome) -> GenieReport {
    let truth_in_list = outcome.candidates.iter().any(|c| c.u == truth_u);
    let beaten = outcome
        .candidates
        .iter()
        .filter(|c| c.passes != Some(false) && c.u != truth_u)
        .any(|c| c.metric < truth_metric);
    GenieReport {
        truth_in_list,
        truth_metric,
        truth_selected: !beaten,
    }
}

/// Sorts a final list and picks the decision.
fn finish(mut candidates: Vec<Candidate>, frozen: &FrozenVector) -> DecodeOutcome {
    // Candidates arrive in path-creation order; a stable sort keeps it as the tie-break.
    candidates.sort_by(|a, b| a.metric.total_cmp(&b.metric));
    let mut out = DecodeOutcome {
        chosen_info: Vec::new(),
        chosen_codeword: Vec::new(),
        candidates,
        genie: None,
        converged: None,
        iterations: None,
    };
    let idx = out.chosen_index().unwrap_or(0);
    let u = &out.candidates[idx].u;
    out.chosen_info = frozen.info_positions().iter().map(|&p| u[p]).collect();
    let mut c = u.clone();
    polar_transform(&mut c);
    out.chosen_codeword = c;
    out
}

/// Single-path successive cancellation with level buffers.
struct ScWalk {
    config: DecoderConfig,
    alpha: Vec<Vec<f64>>,
    beta: Vec<Vec<u8>>,
    u: Vec<u8>,
    metric: f64,
}

impl ScWalk {
    fn new(m: usize, config: DecoderConfig) -> Self {
        Self {
            config,
            alpha: (0..=m).map(|l| vec![0.0; 1 << l]).collect(),
            beta: (0..=m).map(|l| vec![0; 1 << l]).collect(),
            u: vec![0; 1 << m],
            metric: 0.0,
        }
    }

    fn run(&mut self, llrs: &[f64], frozen: &FrozenVector, forced: Option<&[u8]>) -> (Vec<u8>, f64) {
        let m = self.alpha.len() - 1;
        for (a, &l) in self.alpha[m].iter_mut().zip(llrs) {
            *a = clamp_llr(l);
        }
        self.metric = 0.0;
        self.node(m, 0, frozen, forced);
        (self.u.clone(), self.metric)
    }

    fn node(&mut self, level: usize, offset: usize, frozen: &FrozenVector, forced: Option<&[u8]>) {
        if level == 0 {
            let llr = self.alpha[0][0];
            let bit = if !frozen.is_info(offset) {
                0
            } else if let Some(f) = forced {
                f[offset]
            } else {
                hard_decision(llr)
            };
            self.metric += self.config.metric.penalty(llr, bit);
            self.u[offset] = bit;
            self.beta[0][0] = bit;
            return;
        }
        let half = 1 << (level - 1);
        let (lower, upper) = self.alpha.split_at_mut(level);
        let (parent, child) = (&upper[0], &mut lower[level - 1]);
        for j in 0..half {
            child[j] = self.config.check.apply(parent[j], parent[j + half]);
        }
        self.node(level - 1, offset, frozen, forced);
        {
            let (lo, hi) = self.beta.split_at_mut(level);
            hi[0][..half].copy_from_slice(&lo[level - 1][..half]);
        }
        let (lower, upper) = self.alpha.split_at_mut(level);
        let (parent, child) = (&upper[0], &mut lower[level - 1]);
        let left = &self.beta[level];
        for j in 0..half {
            child[j] = llr_combine(parent[j], parent[j + half], left[j]);
        }
        self.node(level - 1, offset + half, frozen, forced);
        let (lo, hi) = self.beta.split_at_mut(level);
        let (out, right) = (&mut hi[0], &lo[level - 1]);
        for j in 0..half {
            out[j] ^= right[j];
        }
        out[half..2 * half].copy_from_slice(&right[..half]);
    }
}

/// Reusable SCL decoder. Holds scratch buffers, so one instance serves one
/// thread; create one per worker.
#[derive(Debug, Clone)]
pub struct SclDecoder {
    list_size: usize,
    config: DecoderConfig,
    m: usize,
    /// `alpha[l]`: per-path LLRs at level `l`, path-major, `list_size · 2^l`.
    alpha: Vec<Vec<f64>>,
    /// `beta[l]`: per-path partial sums returned by a level-`l` node.
    beta: Vec<Vec<u8>>,
    /// `left[l]`: left-child partial sums held while the right child runs.
    left: Vec<Vec<u8>>,
    paths: usize,
    metrics: Vec<f64>,
    u: Vec<u8>,
    scratch_metrics: Vec<f64>,
    scratch_u: Vec<u8>,
    order: Vec<usize>,
}

impl SclDecoder {
    pub fn new(list_size: usize, config: DecoderConfig) -> Result<Self> {
        if list_size == 0 {
            return Err(Error::InvalidParameter("list size must be at least 1".into()));
        }
        Ok(Self {
            list_size,
            config,
            m: usize::MAX,
            alpha: Vec::new(),
            beta: Vec::new(),
            left: Vec::new(),
            paths: 0,
            metrics: Vec::new(),
            u: Vec::new(),
            scratch_metrics: Vec::new(),
            scratch_u: Vec::new(),
            order: Vec::new(),
        })
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    pub fn config(&self) -> DecoderConfig {
        self.config
    }

    fn prepare(&mut self, m: usize) {
        if self.m == m {
            return;
        }
        let l = self.list_size;
        self.m = m;
        self.alpha = (0..=m).map(|lv| vec![0.0; l << lv]).collect();
        self.beta = (0..=m).map(|lv| vec![0; l << lv]).collect();
        self.left = (0..=m).map(|lv| vec![0; l << lv]).collect();
        self.metrics = vec![0.0; l];
        self.scratch_metrics = vec![0.0; l];
        self.u = vec![0; l << m];
        self.scratch_u = vec![0; l << m];
        self.order = Vec::with_capacity(2 * l);
    }

    pub fn decode(
        &mut self,
        llrs: &[f64],
        frozen: &FrozenVector,
        checker: Option<&dyn ListChecker>,
    ) -> Result<DecodeOutcome> {
        let m = validate(llrs, frozen)?;
        self.prepare(m);
        for (a, &l) in self.alpha[m].iter_mut().zip(llrs) {
            *a = clamp_llr(l);
        }
        self.paths = 1;
        self.metrics[0] = 0.0;
        self.node(m, 0, frozen);

        let n = 1 << m;
        let candidates = (0..self.paths)
            .map(|p| {
                let u = self.u[p * n..(p + 1) * n].to_vec();
                let passes = checker.map(|c| c.accepts(&u));
                Candidate {
                    u,
                    metric: self.metrics[p],
                    passes,
                }
            })
            .collect();
        Ok(finish(candidates, frozen))
    }

    /// Decodes and records the genie-aided verdict for the known `truth_u`.
    pub fn decode_with_genie(
        &mut self,
        llrs: &[f64],
        frozen: &FrozenVector,
        checker: Option<&dyn ListChecker>,
        truth_u: &[u8],
    ) -> Result<DecodeOutcome> {
        let mut out = self.decode(llrs, frozen, checker)?;
        let truth_metric = path_metric(llrs, frozen, truth_u, self.config)?;
        out.genie = Some(genie_report(truth_u, truth_metric, &out));
        Ok(out)
    }

    /// Decodes the subtree at `level` starting at bit `offset` for the current
    /// `self.paths` paths, whose inputs sit in `alpha[level]`. Leaves the
    /// partial sums in `beta[level]` and returns the ancestry of each output
    /// path (index of its input path), `None` meaning identity.
    fn node(&mut self, level: usize, offset: usize, frozen: &FrozenVector) -> Option<Vec<usize>> {
        if level == 0 {
            return self.leaf(offset, frozen);
        }
        let len = 1 << level;
        let half = len / 2;
        let p_in = self.paths;
        {
            let (lower, upper) = self.alpha.split_at_mut(level);
            let (parent, child) = (&upper[0], &mut lower[level - 1]);
            let rule = self.config.check;
            for p in 0..p_in {
                let src = &parent[p * len..(p + 1) * len];
                let dst = &mut child[p * half..(p + 1) * half];
                for j in 0..half {
                    dst[j] = rule.apply(src[j], src[j + half]);
                }
            }
        }
        let anc_left = self.node(level - 1, offset, frozen);
        let p_mid = self.paths;
        {
            let left = &mut self.left[level];
            left[..p_mid * half].copy_from_slice(&self.beta[level - 1][..p_mid * half]);
            let (lower, upper) = self.alpha.split_at_mut(level);
            let (parent, child) = (&upper[0], &mut lower[level - 1]);
            for q in 0..p_mid {
                let a = anc_left.as_ref().map_or(q, |v| v[q]);
                let src = &parent[a * len..(a + 1) * len];
                let sums = &left[q * half..(q + 1) * half];
                let dst = &mut child[q * half..(q + 1) * half];
                for j in 0..half {
                    dst[j] = llr_combine(src[j], src[j + half], sums[j]);
                }
            }
        }
        let anc_right = self.node(level - 1, offset + half, frozen);
        let p_out = self.paths;
        {
            let (lo, hi) = self.beta.split_at_mut(level);
            let right = &lo[level - 1];
            let out = &mut hi[0];
            let left = &self.left[level];
            for r in 0..p_out {
                let q = anc_right.as_ref().map_or(r, |v| v[r]);
                let l = &left[q * half..(q + 1) * half];
                let rt = &right[r * half..(r + 1) * half];
                let o = &mut out[r * len..(r + 1) * len];
                for j in 0..half {
                    o[j] = l[j] ^ rt[j];
                    o[j + half] = rt[j];
                }
            }
        }
        match (anc_left, anc_right) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (Some(a), Some(b)) => Some(b.iter().map(|&q| a[q]).collect()),
        }
    }

    fn leaf(&mut self, offset: usize, frozen: &FrozenVector) -> Option<Vec<usize>> {
        let p_in = self.paths;
        let n = 1 << self.m;
        let rule = self.config.metric;
        if !frozen.is_info(offset) {
            for p in 0..p_in {
                let llr = self.alpha[0][p];
                self.metrics[p] += rule.penalty(llr, 0);
                self.u[p * n + offset] = 0;
                self.beta[0][p] = 0;
            }
            return None;
        }

        // Candidate c extends path c / 2 with bit c % 2 (path-creation order).
        let cand_metric = |c: usize, alpha: &[f64], metrics: &[f64]| {
            metrics[c / 2] + rule.penalty(alpha[c / 2], (c % 2) as u8)
        };
        let total = 2 * p_in;
        self.order.clear();
        self.order.extend(0..total);
        if total > self.list_size {
            let (alpha, metrics) = (&self.alpha[0], &self.metrics);
            let key = |c: &usize| (cand_metric(*c, alpha, metrics), *c);
            let cmp = |a: &usize, b: &usize| {
                let (ma, ia) = key(a);
                let (mb, ib) = key(b);
                ma.total_cmp(&mb).then(ia.cmp(&ib))
            };
            self.order.select_nth_unstable_by(self.list_size - 1, cmp);
            self.order.truncate(self.list_size);
            self.order.sort_unstable();
        }

        let p_out = self.order.len();
        for (r, &c) in self.order.iter().enumerate() {
            let parent = c / 2;
            self.scratch_metrics[r] = cand_metric(c, &self.alpha[0], &self.metrics);
            self.scratch_u[r * n..r * n + offset]
                .copy_from_slice(&self.u[parent * n..parent * n + offset]);
            self.scratch_u[r * n + offset] = (c % 2) as u8;
        }
        std::mem::swap(&mut self.metrics, &mut self.scratch_metrics);
        std::mem::swap(&mut self.u, &mut self.scratch_u);
        for (r, &c) in self.order.iter().enumerate() {
            self.beta[0][r] = (c % 2) as u8;
        }
        self.paths = p_out;
        Some(self.order.iter().map(|&c| c / 2).collect())
    }
}

#[cfg(test)]
mod tests;
