//! Iterative belief propagation for 2-dimensional product codes.
//!
//! Every row and column of the code array is a check node decoded exactly by
//! BCJR on its component trellis. A row pass updates all rows from the
//! channel LLRs plus the current column extrinsics, then a column pass does
//! the same with the new row extrinsics. For a concatenated code a third
//! pass runs the outer-code trellis over the systematic positions.
//!
//! The array is `n_1 × n_2`, row-major: columns are codewords of `C_1`,
//! rows are codewords of `C_2`.

mod trellis;

pub use trellis::{
    build_trellis, max_star, Edge, SisoScratch, Trellis, MAX_COMPONENT_REDUNDANCY,
    MAX_TRELLIS_REDUNDANCY,
};

use crate::codes::polar_transform;
use crate::concat::ConcatenatedCode;
use crate::error::{check_len, Error, Result};
use crate::product::ProductCode;
use crate::scl::{hard_decision, DecodeOutcome};

/// Iteration cap used in the reference experiments.
pub const DEFAULT_MAX_ITER: usize = 100;

/// Check node that sees the bits at `positions` as one codeword of `trellis`.
#[derive(Debug, Clone)]
struct CheckGroup {
    trellis: Trellis,
    fibers: Vec<Vec<usize>>,
}

/// Reusable BP decoder for a fixed code.
#[derive(Debug, Clone)]
pub struct BpDecoder {
    code: ProductCode,
    groups: Vec<CheckGroup>,
    outer_check: Option<(Trellis, Vec<usize>)>,
    scratch: SisoScratch,
}

impl BpDecoder {
    pub fn new(code: &ProductCode) -> Result<Self> {
        let shape = code.shape();
        if shape.len() != 2 {
            return Err(Error::Unsupported(format!(
                "belief propagation needs a 2-dimensional product code, got {} dimensions",
                shape.len()
            )));
        }
        let (n1, n2) = (shape[0], shape[1]);
        let rows = CheckGroup {
            trellis: build_trellis(&code.components()[1])?,
            fibers: (0..n1).map(|i| (0..n2).map(|j| i * n2 + j).collect()).collect(),
        };
        let cols = CheckGroup {
            trellis: build_trellis(&code.components()[0])?,
            fibers: (0..n2).map(|j| (0..n1).map(|i| i * n2 + j).collect()).collect(),
        };
        Ok(Self {
            code: code.clone(),
            groups: vec![rows, cols],
            outer_check: None,
            scratch: SisoScratch::default(),
        })
    }

    /// Decoder for the inner code's graph joined with an outer-code check node.
    pub fn concatenated(cc: &ConcatenatedCode) -> Result<Self> {
        let mut dec = Self::new(cc.inner())?;
        let trellis = build_trellis(cc.outer())?;
        let positions = cc.outer_positions().to_vec();
        dec.groups.push(CheckGroup {
            trellis: trellis.clone(),
            fibers: vec![positions.clone()],
        });
        dec.outer_check = Some((trellis, positions));
        Ok(dec)
    }

    pub fn code(&self) -> &ProductCode {
        &self.code
    }

    pub fn decode(&mut self, llrs: &[f64], max_iter: usize) -> Result<DecodeOutcome> {
        let n = self.code.n();
        check_len(n, llrs.len())?;
        if max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
        }
        let passes = self.groups.len();
        let mut ext = vec![vec![0.0; n]; passes];
        let mut hard = vec![0u8; n];
        let mut converged = false;
        let mut iterations = 0;
        let mut input = Vec::new();
        let mut output = Vec::new();
        while iterations < max_iter && !converged {
            iterations += 1;
            for p in 0..passes {
                let group = &self.groups[p];
                for fiber in &group.fibers {
                    input.clear();
                    input.extend(fiber.iter().map(|&i| {
                        llrs[i] + (0..passes).filter(|&q| q != p).map(|q| ext[q][i]).sum::<f64>()
                    }));
                    output.resize(fiber.len(), 0.0);
                    group.trellis.siso_into(&input, &mut output, &mut self.scratch)?;
                    for (&i, &e) in fiber.iter().zip(&output) {
                        ext[p][i] = e;
                    }
                }
            }
            for (i, h) in hard.iter_mut().enumerate() {
                *h = hard_decision(llrs[i] + ext.iter().map(|e| e[i]).sum::<f64>());
            }
            converged = self.is_valid(&hard);
        }
        let mut u = hard.clone();
        polar_transform(&mut u);
        Ok(DecodeOutcome {
            chosen_info: self.code.info_positions().iter().map(|&p| u[p]).collect(),
            chosen_codeword: hard,
            candidates: Vec::new(),
            genie: None,
            converged: Some(converged),
            iterations: Some(iterations),
        })
    }

    fn is_valid(&self, word: &[u8]) -> bool {
        self.code.is_codeword(word)
            && self.outer_check.as_ref().is_none_or(|(t, pos)| {
                let bits: Vec<u8> = pos.iter().map(|&p| word[p]).collect();
                t.is_codeword(&bits)
            })
    }
}

/// BP on the row/column graph of a 2-dimensional product code.
pub fn bp_decode(code: &ProductCode, llrs: &[f64], max_iter: usize) -> Result<DecodeOutcome> {
    BpDecoder::new(code)?.decode(llrs, max_iter)
}

/// BP on the product graph with an extra outer-code check node.
pub fn bp_decode_concatenated(cc: &ConcatenatedCode, llrs: &[f64], max_iter: usize) -> Result<DecodeOutcome> {
    BpDecoder::concatenated(cc)?.decode(llrs, max_iter)
}
