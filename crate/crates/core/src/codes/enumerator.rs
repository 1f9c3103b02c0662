//! Exact weight enumerators: brute-force codeword enumeration and the
//! MacWilliams transform.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::gf2::BitMatrix;
use crate::error::{Error, Result};

/// Largest dimension enumerated exhaustively (2^28 codewords).
pub const MAX_ENUM_DIMENSION: usize = 28;

/// `coeffs[w]` is the number of codewords of Hamming weight `w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightEnumerator {
    coeffs: Vec<BigUint>,
}

impl WeightEnumerator {
    pub fn new(coeffs: Vec<BigUint>) -> Self {
        Self { coeffs }
    }

    pub fn from_counts(counts: &[u64]) -> Self {
        Self::new(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    /// Block length `n` (the vector has `n + 1` entries).
    pub fn length(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn get(&self, w: usize) -> BigUint {
        self.coeffs.get(w).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    /// Smallest nonzero weight with a nonzero count, with its multiplicity.
    pub fn min_distance(&self) -> Option<(usize, BigUint)> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, c)| !c.is_zero())
            .map(|(w, c)| (w, c.clone()))
    }

    /// CSV rows `w,A_w`, header included.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("w,A_w\n");
        for (w, c) in self.coeffs.iter().enumerate() {
            s.push_str(&format!("{w},{c}\n"));
        }
        s
    }
}

/// Enumerates all `2^k` codewords spanned by the rows of `gen`.
///
/// Rows are assumed linearly independent; the result counts each message once.
pub fn weight_enumerator_bruteforce(gen: &BitMatrix) -> Result<WeightEnumerator> {
    let k = gen.rows();
    let n = gen.cols();
    if k > MAX_ENUM_DIMENSION {
        return Err(Error::SizeLimit {
            what: "enumeration dimension",
            value: k,
            limit: MAX_ENUM_DIMENSION,
        });
    }
    let chunk_bits = if k >= 16 { 8 } else { 0 };
    let per_chunk = 1u64 << (k - chunk_bits);
    let counts = (0..1u64 << chunk_bits)
        .into_par_iter()
        .map(|chunk| {
            let mut counts = vec![0u64; n + 1];
            let start = chunk * per_chunk;
            // Gray-code walk: word t is the combination of rows selected by gray(t).
            let mut word = vec![0u64; n.div_ceil(64).max(1)];
            if k > 0 {
                let g = start ^ (start >> 1);
                for r in 0..k {
                    if (g >> r) & 1 == 1 {
                        xor_into(&mut word, gen.row_words(r));
                    }
                }
            }
            counts[weight(&word)] += 1;
            for t in start + 1..start + per_chunk {
                let r = t.trailing_zeros() as usize;
                xor_into(&mut word, gen.row_words(r));
                counts[weight(&word)] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(WeightEnumerator::from_counts(&counts))
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (a, b) in dst.iter_mut().zip(src) {
        *a ^= *b;
    }
}

#[inline]
fn weight(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

/// Primal weight enumerator from the dual code's enumerator via the
/// MacWilliams identity `A_w = 2^{-(n-k)} Σ_i B_i K_w(i)` with Krawtchouk
/// polynomials `K_w(i) = Σ_j (-1)^j C(i, j) C(n-i, w-j)`.
pub fn macwilliams_transform(dual_we: &WeightEnumerator, n: usize, k: usize) -> Result<WeightEnumerator> {
    if dual_we.coeffs.len() != n + 1 {
        return Err(Error::LengthMismatch {
            expected: n + 1,
            actual: dual_we.coeffs.len(),
        });
    }
    if k > n {
        return Err(Error::InvalidParameter(format!("dimension {k} exceeds length {n}")));
    }
    let dual_size = BigUint::one() << (n - k);
    if dual_we.total() != dual_size {
        return Err(Error::InvalidParameter(format!(
            "dual enumerator sums to {}, expected 2^{}",
            dual_we.total(),
            n - k
        )));
    }
    let mut acc = vec![BigInt::zero(); n + 1];
    for (i, b) in dual_we.coeffs.iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        let b = BigInt::from(b.clone());
        for (w, kw) in krawtchouk_column(n, i).into_iter().enumerate() {
            acc[w] += &b * kw;
        }
    }
    let divisor = BigInt::from(dual_size);
    let coeffs = acc
        .into_iter()
        .enumerate()
        .map(|(w, a)| {
            if a.is_negative() || !(&a % &divisor).is_zero() {
                return Err(Error::InvalidParameter(format!(
                    "inconsistent dual enumerator: non-integral or negative A_{w}"
                )));
            }
            Ok((a / &divisor).to_biguint().expect("non-negative"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightEnumerator::new(coeffs))
}

/// `K_w(i)` for `w = 0..=n` by the three-term recurrence
/// `(w+1) K_{w+1} = (n - 2i) K_w - (n - w + 1) K_{w-1}`.
fn krawtchouk_column(n: usize, i: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n + 1);
    let a = BigInt::from(n as i64 - 2 * i as i64);
    out.push(BigInt::one());
    if n >= 1 {
        out.push(a.clone());
    }
    for w in 1..n {
        let next = (&a * &out[w] - BigInt::from(n - w + 1) * &out[w - 1]) / BigInt::from(w + 1);
        out.push(next);
    }
    out
}

/// Weight enumerator of the code generated by `gen` (full row rank assumed),
/// enumerating whichever of the code and its dual is smaller.
pub fn weight_enumerator(gen: &BitMatrix) -> Result<WeightEnumerator> {
    let n = gen.cols();
    let k = gen.rows();
    if k <= n - k || n - k > MAX_ENUM_DIMENSION {
        weight_enumerator_bruteforce(gen)
    } else {
        let dual = weight_enumerator_bruteforce(&gen.null_space())?;
        macwilliams_transform(&dual, n, k)
    }
}

/// `C(n, k)` as an arbitrary-precision integer.
pub fn binomial_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}
