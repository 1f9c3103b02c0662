//! Serial concatenation of an outer code, an interleaver and an inner
//! systematic product code.
//!
//! A message `m` is encoded by the outer code as `v = m · G_o`, permuted to
//! `w = v · Π` and handed to the inner systematic encoder. Writing the inner
//! systematic generator as `S · G_nsys`, the overall generator is
//! `G = G_o Π S · G_nsys = G_mo · G_nsys`, so the u-domain information bits
//! seen by an SC/SCL decoder form a codeword of the modified outer code
//! generated by `G_mo`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::codes::gf2::pack;
use crate::codes::{BitMatrix, CodeKind, ComponentCode};
use crate::error::{check_len, Error, Result};
use crate::product::ProductCode;
use crate::scl::ListChecker;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InterleaverKind {
    Trivial,
    Random { seed: u64 },
}

/// Permutation `Π` acting as `w[j] = v[perm[j]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interleaver {
    kind: InterleaverKind,
    perm: Vec<usize>,
}

impl Interleaver {
    pub fn trivial(n: usize) -> Self {
        Self {
            kind: InterleaverKind::Trivial,
            perm: (0..n).collect(),
        }
    }

    /// Uniform shuffle driven by a ChaCha8 stream seeded with `seed`.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Self {
            kind: InterleaverKind::Random { seed },
            perm,
        }
    }

    pub fn new(kind: InterleaverKind, n: usize) -> Self {
        match kind {
            InterleaverKind::Trivial => Self::trivial(n),
            InterleaverKind::Random { seed } => Self::random(n, seed),
        }
    }

    pub fn kind(&self) -> InterleaverKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply(&self, v: &[u8]) -> Vec<u8> {
        self.perm.iter().map(|&p| v[p]).collect()
    }

    /// The `n × n` permutation matrix `Π` with `v · Π = apply(v)`.
    pub fn matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.len(), self.len());
        for (j, &p) in self.perm.iter().enumerate() {
            m.set(p, j, 1);
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct ConcatenatedCode {
    outer: ComponentCode,
    pi: Interleaver,
    inner: ProductCode,
    g_outer: BitMatrix,
    g_mo: BitMatrix,
    h_mo: BitMatrix,
    outer_positions: Vec<usize>,
}

/// Builds `outer → Π → inner`. The outer code is used in systematic form.
pub fn build_concat(outer: ComponentCode, pi: Interleaver, inner: ProductCode) -> Result<ConcatenatedCode> {
    if !matches!(outer.kind(), CodeKind::Crc { .. } | CodeKind::Identity) {
        return Err(Error::Unsupported(format!(
            "outer code {} is neither a CRC nor an identity code",
            outer.name()
        )));
    }
    if outer.n() != inner.k() {
        return Err(Error::DimensionMismatch(format!(
            "outer length {} differs from inner dimension {}",
            outer.n(),
            inner.k()
        )));
    }
    if pi.len() != outer.n() {
        return Err(Error::DimensionMismatch(format!(
            "interleaver size {} differs from outer length {}",
            pi.len(),
            outer.n()
        )));
    }
    let g_outer = outer.systematic_generator();
    let g_mo = g_outer
        .mul(&pi.matrix())?
        .mul(inner.change_of_basis())?;
    if g_mo.rank() != outer.k() {
        return Err(Error::InvalidParameter("modified outer generator is rank deficient".into()));
    }
    let h_mo = g_mo.null_space();
    let info = inner.info_positions();
    let mut outer_positions = vec![0; outer.n()];
    for (j, &p) in pi.permutation().iter().enumerate() {
        outer_positions[p] = info[j];
    }
    let cc = ConcatenatedCode {
        outer,
        pi,
        inner,
        g_outer,
        g_mo,
        h_mo,
        outer_positions,
    };
    // Both encoders are linear, so agreeing on unit messages proves G = G_mo · G_nsys.
    let mut e = vec![0u8; cc.k()];
    for i in 0..cc.k() {
        e[i] = 1;
        let (a, b) = cc.encode_both(&e)?;
        if a != b {
            return Err(Error::InvalidParameter(format!(
                "encoder paths disagree on unit message {i}"
            )));
        }
        e[i] = 0;
    }
    Ok(cc)
}

impl ConcatenatedCode {
    pub fn outer(&self) -> &ComponentCode {
        &self.outer
    }

    pub fn interleaver(&self) -> &Interleaver {
        &self.pi
    }

    pub fn inner(&self) -> &ProductCode {
        &self.inner
    }

    pub fn n(&self) -> usize {
        self.inner.n()
    }

    pub fn k(&self) -> usize {
        self.outer.k()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    /// Systematic outer generator `G_o`.
    pub fn outer_generator(&self) -> &BitMatrix {
        &self.g_outer
    }

    /// `G_mo = G_o Π S` (k_o × k_i).
    pub fn modified_outer_generator(&self) -> &BitMatrix {
        &self.g_mo
    }

    /// Parity-check matrix of the code generated by `G_mo`.
    pub fn modified_outer_parity_check(&self) -> &BitMatrix {
        &self.h_mo
    }

    /// `G_mo · G_nsys` (k_o × n).
    pub fn generator(&self) -> BitMatrix {
        self.g_mo
            .mul(&self.inner.generator_nonsystematic())
            .expect("dimensions agree")
    }

    /// Inner codeword position of each outer codeword bit.
    pub fn outer_positions(&self) -> &[usize] {
        &self.outer_positions
    }

    pub fn name(&self) -> String {
        let pi = match self.pi.kind {
            InterleaverKind::Trivial => String::new(),
            InterleaverKind::Random { seed } => format!(" ~pi({seed})"),
        };
        format!("{}{} + {}", self.outer.name(), pi, self.inner.name())
    }

    /// Encodes through `G_o`, `Π` and the inner systematic encoder, and
    /// through `G_mo` and the transform encoder.
    pub fn encode_both(&self, message: &[u8]) -> Result<(Vec<u8>, Vec<u8>)> {
        check_len(self.k(), message.len())?;
        let v = self.g_outer.vec_mul(message)?;
        let chain = self.inner.encode_systematic_flat(&self.pi.apply(&v))?;
        let u_info = self.g_mo.vec_mul(message)?;
        let direct = self.inner.encode_nonsystematic(&u_info)?;
        Ok((chain, direct))
    }

    /// Recovers the message of a concatenated codeword from its systematic part.
    pub fn message_of(&self, codeword: &[u8]) -> Result<Vec<u8>> {
        check_len(self.n(), codeword.len())?;
        let info = self.outer.information_set();
        Ok(info.iter().map(|&i| codeword[self.outer_positions[i]]).collect())
    }

    /// List checker testing u-domain information bits against `G_mo`.
    pub fn checker(&self) -> OuterChecker {
        OuterChecker {
            rows: (0..self.h_mo.rows()).map(|r| self.h_mo.row_words(r).to_vec()).collect(),
            info_positions: self.inner.info_positions().to_vec(),
        }
    }
}

/// Encodes `message`; both encoder paths are evaluated and must agree.
pub fn encode_concat(cc: &ConcatenatedCode, message: &[u8]) -> Result<Vec<u8>> {
    let (chain, direct) = cc.encode_both(message)?;
    debug_assert_eq!(chain, direct);
    Ok(chain)
}

/// Outer-code membership test on candidate `u` vectors.
#[derive(Debug, Clone)]
pub struct OuterChecker {
    rows: Vec<Vec<u64>>,
    info_positions: Vec<usize>,
}

impl OuterChecker {
    /// True iff the information bits `u_I` lie in the row space of `G_mo`.
    pub fn accepts_info(&self, u_info: &[u8]) -> bool {
        let packed = pack(u_info);
        self.rows.iter().all(|row| {
            row.iter()
                .zip(&packed)
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                & 1
                == 0
        })
    }
}

impl ListChecker for OuterChecker {
    fn accepts(&self, u: &[u8]) -> bool {
        let info: Vec<u8> = self.info_positions.iter().map(|&p| u[p]).collect();
        self.accepts_info(&info)
    }
}

/// Checker for the modified outer code of `cc`.
pub fn outer_checker_from_crc(cc: &ConcatenatedCode) -> OuterChecker {
    cc.checker()
}

#[cfg(test)]
mod tests;
