//! Syndrome-former trellis and log-domain BCJR.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::codes::{BitMatrix, CodeKind, ComponentCode};
use crate::error::{check_len, Error, Result};
use crate::scl::LLR_CLAMP;

/// Redundancy limit for Reed–Muller component trellises.
pub const MAX_COMPONENT_REDUNDANCY: usize = 8;
/// Redundancy limit for any trellis (outer CRC codes).
pub const MAX_TRELLIS_REDUNDANCY: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: u32,
    pub to: u32,
    pub bit: u8,
}

/// Trellis whose stage-`t` states are the partial syndromes
/// `Σ_{j<t} c_j h_j` that can still reach the all-zero syndrome.
#[derive(Debug, Clone)]
pub struct Trellis {
    columns: Vec<u64>,
    /// Number of states at each of the `n + 1` stages.
    widths: Vec<usize>,
    sections: Vec<Vec<Edge>>,
}

/// Trellis of a component code from its parity-check matrix.
pub fn build_trellis(code: &ComponentCode) -> Result<Trellis> {
    let r = code.n() - code.k();
    let limit = match code.kind() {
        CodeKind::ReedMuller { .. } => MAX_COMPONENT_REDUNDANCY,
        _ => MAX_TRELLIS_REDUNDANCY,
    };
    if r > limit {
        return Err(Error::SizeLimit {
            what: "trellis redundancy n-k",
            value: r,
            limit,
        });
    }
    Trellis::from_parity_check(&code.parity_check())
}

impl Trellis {
    pub fn from_parity_check(h: &BitMatrix) -> Result<Self> {
        let r = h.rows();
        if r > MAX_TRELLIS_REDUNDANCY {
            return Err(Error::SizeLimit {
                what: "trellis redundancy n-k",
                value: r,
                limit: MAX_TRELLIS_REDUNDANCY,
            });
        }
        let n = h.cols();
        let columns: Vec<u64> = (0..n)
            .map(|j| (0..r).fold(0u64, |acc, i| acc | (u64::from(h.get(i, j)) << i)))
            .collect();
        let size = 1usize << r;

        let mut fwd = vec![vec![false; size]; n + 1];
        fwd[0][0] = true;
        for t in 0..n {
            for s in 0..size {
                if fwd[t][s] {
                    fwd[t + 1][s] = true;
                    fwd[t + 1][s ^ columns[t] as usize] = true;
                }
            }
        }
        let mut alive = vec![vec![false; size]; n + 1];
        alive[n][0] = fwd[n][0];
        for t in (0..n).rev() {
            for s in 0..size {
                alive[t][s] = fwd[t][s] && (alive[t + 1][s] || alive[t + 1][s ^ columns[t] as usize]);
            }
        }

        let index: Vec<Vec<u32>> = alive
            .iter()
            .map(|stage| {
                let mut next = 0u32;
                stage
                    .iter()
                    .map(|&a| {
                        let i = next;
                        next += u32::from(a);
                        if a {
                            i
                        } else {
                            u32::MAX
                        }
                    })
                    .collect()
            })
            .collect();
        let widths = alive.iter().map(|s| s.iter().filter(|&&a| a).count()).collect();
        let sections = (0..n)
            .map(|t| {
                let mut edges = Vec::new();
                for s in (0..size).filter(|&s| alive[t][s]) {
                    for bit in 0..2u8 {
                        let next = if bit == 1 { s ^ columns[t] as usize } else { s };
                        if alive[t + 1][next] {
                            edges.push(Edge {
                                from: index[t][s],
                                to: index[t + 1][next],
                                bit,
                            });
                        }
                    }
                }
                edges
            })
            .collect();
        Ok(Self {
            columns,
            widths,
            sections,
        })
    }

    pub fn len(&self) -> usize {
        self.sections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sections.is_empty()
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn max_states(&self) -> usize {
        self.widths.iter().copied().max().unwrap_or(0)
    }

    pub fn section(&self, t: usize) -> &[Edge] {
        &self.sections[t]
    }

    /// Number of start-to-end paths.
    pub fn path_count(&self) -> BigUint {
        let mut counts = vec![BigUint::one()];
        for (t, edges) in self.sections.iter().enumerate() {
            let mut next = vec![BigUint::zero(); self.widths[t + 1]];
            for e in edges {
                next[e.to as usize] += &counts[e.from as usize];
            }
            counts = next;
        }
        counts.into_iter().next().unwrap_or_default()
    }

    /// Syndrome test of a hard-decision word.
    pub fn is_codeword(&self, bits: &[u8]) -> bool {
        bits.len() == self.columns.len()
            && bits
                .iter()
                .zip(&self.columns)
                .fold(0u64, |acc, (&b, &c)| if b & 1 == 1 { acc ^ c } else { acc })
                == 0
    }

    /// Bitwise MAP extrinsic LLRs by forward–backward recursion.
    pub fn siso(&self, intrinsic: &[f64]) -> Result<Vec<f64>> {
        let mut scratch = SisoScratch::default();
        let mut out = vec![0.0; self.len()];
        self.siso_into(intrinsic, &mut out, &mut scratch)?;
        Ok(out)
    }

    /// As [`siso`](Self::siso) with caller-provided buffers.
    pub fn siso_into(&self, intrinsic: &[f64], out: &mut [f64], scratch: &mut SisoScratch) -> Result<()> {
        let n = self.len();
        check_len(n, intrinsic.len())?;
        check_len(n, out.len())?;
        let total: usize = self.widths.iter().sum();
        scratch.offsets.clear();
        let mut acc = 0;
        for &w in &self.widths {
            scratch.offsets.push(acc);
            acc += w;
        }
        scratch.alpha.clear();
        scratch.alpha.resize(total, f64::NEG_INFINITY);
        scratch.beta.clear();
        scratch.beta.resize(total, f64::NEG_INFINITY);
        let off = &scratch.offsets;
        let (alpha, beta) = (&mut scratch.alpha, &mut scratch.beta);

        let gamma = |t: usize, bit: u8| if bit == 0 { intrinsic[t] / 2.0 } else { -intrinsic[t] / 2.0 };
        alpha[0] = 0.0;
        for (t, edges) in self.sections.iter().enumerate() {
            for e in edges {
                let a = alpha[off[t] + e.from as usize] + gamma(t, e.bit);
                let slot = &mut alpha[off[t + 1] + e.to as usize];
                *slot = max_star(*slot, a);
            }
        }
        beta[off[n]] = 0.0;
        for (t, edges) in self.sections.iter().enumerate().rev() {
            for e in edges {
                let b = beta[off[t + 1] + e.to as usize] + gamma(t, e.bit);
                let slot = &mut beta[off[t] + e.from as usize];
                *slot = max_star(*slot, b);
            }
        }
        for (t, edges) in self.sections.iter().enumerate() {
            let mut lik = [f64::NEG_INFINITY; 2];
            for e in edges {
                let v = alpha[off[t] + e.from as usize] + beta[off[t + 1] + e.to as usize];
                lik[e.bit as usize] = max_star(lik[e.bit as usize], v);
            }
            out[t] = match (lik[0].is_finite(), lik[1].is_finite()) {
                (true, true) => (lik[0] - lik[1]).clamp(-LLR_CLAMP, LLR_CLAMP),
                (true, false) => LLR_CLAMP,
                (false, true) => -LLR_CLAMP,
                (false, false) => 0.0,
            };
        }
        Ok(())
    }
}

/// Reusable forward–backward buffers.
#[derive(Debug, Clone, Default)]
pub struct SisoScratch {
    offsets: Vec<usize>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

/// `ln(e^a + e^b)`.
#[inline]
pub fn max_star(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    a.max(b) + (-(a - b).abs()).exp().ln_1p()
}
