//! Hadamard-kernel transforms and Reed–Muller frozen vectors.
//!
//! Row `i` (0-based) of `K_2^{⊗m}` has a one in column `j` iff the binary
//! digits of `j` are a subset of those of `i`, so its weight is `2^{popcount(i)}`.
//! Positions are 0-based here; documentation elsewhere writes `u_1 … u_n` for
//! what is `u[0] … u[n-1]` in code.

use super::gf2::BitMatrix;
use super::FrozenVector;
use crate::error::{Error, Result};

/// Largest `m` for which the explicit `2^m × 2^m` matrix is materialized.
pub const MAX_HADAMARD_LOG: usize = 12;

/// `K_2^{⊗m}`, lower triangular with an all-ones diagonal.
pub fn hadamard_matrix(m: usize) -> Result<BitMatrix> {
    if m > MAX_HADAMARD_LOG {
        return Err(Error::SizeLimit {
            what: "Hadamard log-size",
            value: m,
            limit: MAX_HADAMARD_LOG,
        });
    }
    let n = 1usize << m;
    let mut g = BitMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            if j & !i == 0 {
                g.set(i, j, 1);
            }
        }
    }
    Ok(g)
}

/// In-place `x ← x · K_2^{⊗m}` for `x.len() == 2^m`.
///
/// The transform is an involution over GF(2), so the same call maps a
/// codeword back to its `u` vector.
pub fn polar_transform(x: &mut [u8]) {
    let n = x.len();
    debug_assert!(n.is_power_of_two());
    let mut half = 1;
    while half < n {
        for block in x.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        half *= 2;
    }
}

/// Frozen vector of `RM(r, m)`: `f_i = 1` iff row `i` of `K_2^{⊗m}` has
/// weight at least `2^{m-r}`.
pub fn rm_frozen_vector(r: usize, m: usize) -> Result<FrozenVector> {
    if r > m {
        return Err(Error::InvalidParameter(format!("RM order r={r} exceeds m={m}")));
    }
    if m > MAX_HADAMARD_LOG {
        return Err(Error::SizeLimit {
            what: "RM log-length",
            value: m,
            limit: MAX_HADAMARD_LOG,
        });
    }
    let bits = (0..1usize << m)
        .map(|i| u8::from(i.count_ones() as usize >= m - r))
        .collect();
    Ok(FrozenVector::new(bits))
}

/// `G = F · K_2^{⊗m}`: the rows of the Hadamard matrix at the information
/// positions of `f`, in ascending order.
pub fn generator_from_frozen(f: &FrozenVector) -> Result<BitMatrix> {
    let n = f.len();
    if !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "frozen vector length {n} is not a power of two"
        )));
    }
    let g = hadamard_matrix(n.trailing_zeros() as usize)?;
    Ok(g.select_rows(&f.info_positions()))
}

/// Dimension of `RM(r, m)`: `Σ_{i≤r} C(m, i)`.
pub fn rm_dimension(r: usize, m: usize) -> usize {
    (0..=r.min(m)).map(|i| binomial(m, i)).sum()
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_small_cases() {
        assert_eq!(hadamard_matrix(0).unwrap().to_ascii(), "1\n");
        assert_eq!(hadamard_matrix(1).unwrap().to_ascii(), "10\n11\n");
        let g3 = hadamard_matrix(3).unwrap();
        let weights: Vec<usize> = (0..8).map(|r| g3.row_weight(r)).collect();
        assert_eq!(weights, vec![1, 2, 2, 4, 2, 4, 4, 8]);
        assert!(hadamard_matrix(MAX_HADAMARD_LOG + 1).is_err());
    }

    #[test]
    fn hadamard_is_iterated_kronecker() {
        let k2 = hadamard_matrix(1).unwrap();
        let mut acc = BitMatrix::identity(1);
        for m in 0..=5 {
            assert_eq!(hadamard_matrix(m).unwrap(), acc);
            acc = acc.kron(&k2);
        }
    }

    #[test]
    fn transform_matches_matrix_product() {
        let g = hadamard_matrix(4).unwrap();
        for seed in 0u32..64 {
            let u: Vec<u8> = (0..16).map(|i| ((seed.wrapping_mul(2654435761) >> i) & 1) as u8).collect();
            let mut c = u.clone();
            polar_transform(&mut c);
            assert_eq!(c, g.vec_mul(&u).unwrap());
            polar_transform(&mut c);
            assert_eq!(c, u);
        }
    }

    #[test]
    fn frozen_vectors_from_example() {
        assert_eq!(rm_frozen_vector(0, 1).unwrap().bits(), &[0, 1]);
        assert_eq!(rm_frozen_vector(1, 2).unwrap().bits(), &[0, 1, 1, 1]);
        assert_eq!(rm_frozen_vector(2, 4).unwrap().popcount(), 11);
        assert!(rm_frozen_vector(3, 2).is_err());
    }

    #[test]
    fn generators_from_frozen() {
        let g = generator_from_frozen(&FrozenVector::new(vec![0, 1])).unwrap();
        assert_eq!(g.to_ascii(), "11\n");
        let g = generator_from_frozen(&FrozenVector::new(vec![0, 1, 1, 1])).unwrap();
        assert_eq!(g.to_ascii(), "1100\n1010\n1111\n");
        let g = generator_from_frozen(&FrozenVector::new(vec![1; 4])).unwrap();
        assert_eq!(g, hadamard_matrix(2).unwrap());
        assert!(generator_from_frozen(&FrozenVector::new(vec![1; 6])).is_err());
    }

    #[test]
    fn rm_parameters_for_every_order() {
        for m in 0..=8 {
            let g = hadamard_matrix(m).unwrap();
            for r in 0..=m {
                let f = rm_frozen_vector(r, m).unwrap();
                assert_eq!(f.popcount(), rm_dimension(r, m));
                let gen = generator_from_frozen(&f).unwrap();
                assert_eq!(gen.rank(), f.popcount());
                let min_w = f.info_positions().iter().map(|&i| g.row_weight(i)).min();
                assert_eq!(min_w, Some(1 << (m - r)));
            }
        }
    }
}
