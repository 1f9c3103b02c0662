//! Analytic performance estimates: truncated union bounds, minimum-weight
//! input–output weight enumerators of systematic product codes, and the
//! average minimum-weight multiplicity of a concatenated ensemble.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use statrs::function::erf::erfc;

use crate::codes::enumerator::binomial_big;
use crate::codes::{weight_enumerator_bruteforce, BitMatrix, ComponentCode, WeightEnumerator};
use crate::concat::ConcatenatedCode;
use crate::error::{Error, Result};
use crate::product::ProductCode;

/// Largest dimension for [`min_distance_bruteforce`].
pub const MAX_BRUTE_DISTANCE_DIMENSION: usize = 24;
/// Largest dimension for message enumeration of a component IOWE.
pub const MAX_BRUTE_IOWE_DIMENSION: usize = 20;
/// Largest number of weight-`d` supports scanned for a component IOWE.
pub const MAX_SUPPORT_SCAN: u64 = 50_000_000;

/// One union-bound term: `multiplicity` codewords of Hamming weight `weight`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightTerm {
    pub weight: usize,
    pub multiplicity: f64,
}

impl WeightTerm {
    pub fn new(weight: usize, multiplicity: f64) -> Self {
        Self { weight, multiplicity }
    }
}

/// Both forms of the truncated union bound at one SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubPoint {
    pub ebn0_db: f64,
    /// `Σ A_w β^w` with `β = exp(−R·Eb/N0)`.
    pub bhattacharyya: f64,
    /// `Σ A_w Q(√(2wR·Eb/N0))`.
    pub qform: f64,
}

/// Gaussian tail function.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

fn check_rate_snr(rate: f64, ebn0_db: f64) -> Result<()> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidParameter(format!("code rate {rate} outside (0, 1]")));
    }
    if !ebn0_db.is_finite() {
        return Err(Error::InvalidParameter(format!("Eb/N0 {ebn0_db} dB is not finite")));
    }
    Ok(())
}

/// Truncated union bound over the supplied terms. With the single term
/// `(d, A_d)` the Bhattacharyya form is `A_d β^d`.
pub fn tub(terms: &[WeightTerm], rate: f64, ebn0_db: f64) -> Result<TubPoint> {
    check_rate_snr(rate, ebn0_db)?;
    if terms.is_empty() || terms.iter().any(|t| t.multiplicity.is_nan() || t.multiplicity < 0.0) {
        return Err(Error::InvalidParameter("union bound needs non-negative multiplicities".into()));
    }
    let snr = 10f64.powf(ebn0_db / 10.0);
    let beta = (-rate * snr).exp();
    let mut point = TubPoint {
        ebn0_db,
        bhattacharyya: 0.0,
        qform: 0.0,
    };
    for t in terms {
        point.bhattacharyya += t.multiplicity * beta.powi(t.weight as i32);
        point.qform += t.multiplicity * q_function((2.0 * t.weight as f64 * rate * snr).sqrt());
    }
    Ok(point)
}

/// Union-bound values over an SNR grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    pub points: Vec<TubPoint>,
}

pub const BOUND_CSV_HEADER: &str = "ebn0_db,tub_bhattacharyya,tub_qform";

impl BoundCurve {
    pub fn new(terms: &[WeightTerm], rate: f64, grid_db: &[f64]) -> Result<Self> {
        let points = grid_db
            .iter()
            .map(|&s| tub(terms, rate, s))
            .collect::<Result<_>>()?;
        Ok(Self { points })
    }

    /// Both bound columns are non-increasing along an increasing SNR grid.
    pub fn is_monotone(&self) -> bool {
        self.points.windows(2).all(|w| {
            w[1].ebn0_db < w[0].ebn0_db
                || (w[1].bhattacharyya <= w[0].bhattacharyya && w[1].qform <= w[0].qform)
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("{BOUND_CSV_HEADER}\n");
        for p in &self.points {
            s.push_str(&format!("{},{:.6e},{:.6e}\n", p.ebn0_db, p.bhattacharyya, p.qform));
        }
        s
    }
}

/// Minimum-weight input–output weight enumerator: `table[j]` counts
/// weight-`d` codewords whose systematic input has weight `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinWeightIowe {
    pub d: usize,
    pub table: BTreeMap<usize, BigUint>,
}

impl MinWeightIowe {
    pub fn total(&self) -> BigUint {
        self.table.values().sum()
    }

    pub fn get(&self, j: usize) -> BigUint {
        self.table.get(&j).cloned().unwrap_or_default()
    }
}

/// Minimum-weight IOWE of a component code in systematic form (input bits on
/// its information set).
pub fn component_min_weight_iowe(code: &ComponentCode) -> Result<MinWeightIowe> {
    let d = code.min_distance()?;
    let n = code.n();
    let info = code.information_set();
    let mut is_info = vec![false; n];
    for &i in &info {
        is_info[i] = true;
    }
    let h = code.parity_check();
    let supports = binomial_big(n, d).to_u64().unwrap_or(u64::MAX);
    let mut counts = vec![0u64; d + 1];
    if d > n {
        return Ok(MinWeightIowe { d, table: BTreeMap::new() });
    }
    if h.rows() <= 64 && supports <= MAX_SUPPORT_SCAN {
        let columns: Vec<u64> = (0..n)
            .map(|j| (0..h.rows()).fold(0u64, |acc, i| acc | (u64::from(h.get(i, j)) << i)))
            .collect();
        scan_supports(&columns, &is_info, d, 0, 0, 0, &mut counts);
    } else if code.k() <= MAX_BRUTE_IOWE_DIMENSION {
        let g = code.systematic_generator();
        for m in 0u64..1 << code.k() {
            let msg: Vec<u8> = (0..code.k()).map(|i| ((m >> i) & 1) as u8).collect();
            let c = g.vec_mul(&msg)?;
            if c.iter().map(|&b| usize::from(b)).sum::<usize>() == d {
                counts[m.count_ones() as usize] += 1;
            }
        }
    } else {
        return Err(Error::SizeLimit {
            what: "component dimension for IOWE enumeration",
            value: code.k(),
            limit: MAX_BRUTE_IOWE_DIMENSION,
        });
    }
    let table = counts
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(j, c)| (j, BigUint::from(c)))
        .collect();
    Ok(MinWeightIowe { d, table })
}

fn scan_supports(
    columns: &[u64],
    is_info: &[bool],
    left: usize,
    start: usize,
    syndrome: u64,
    input_weight: usize,
    counts: &mut [u64],
) {
    if left == 0 {
        if syndrome == 0 {
            counts[input_weight] += 1;
        }
        return;
    }
    for p in start..=columns.len() - left {
        scan_supports(
            columns,
            is_info,
            left - 1,
            p + 1,
            syndrome ^ columns[p],
            input_weight + usize::from(is_info[p]),
            counts,
        );
    }
}

/// `A^i_{j,d} = Σ_{j_1 j_2 = j} A^{(1)}_{j_1,d_1} A^{(2)}_{j_2,d_2}` for a
/// 2-dimensional systematic product code. Minimum-weight product codewords
/// are outer products of component minimum-weight codewords.
pub fn min_weight_iowe_product(code: &ProductCode) -> Result<MinWeightIowe> {
    let comps = code.components();
    if comps.len() != 2 {
        return Err(Error::Unsupported(format!(
            "minimum-weight IOWE needs a 2-dimensional product, got {} dimensions",
            comps.len()
        )));
    }
    let a = component_min_weight_iowe(&comps[0])?;
    let b = component_min_weight_iowe(&comps[1])?;
    let mut table = BTreeMap::new();
    for (j1, c1) in &a.table {
        for (j2, c2) in &b.table {
            *table.entry(j1 * j2).or_insert_with(BigUint::zero) += c1 * c2;
        }
    }
    Ok(MinWeightIowe { d: a.d * b.d, table })
}

/// `Ā_d = Σ_j A^o_j A^i_{j,d} / C(n_o, j)`, exactly.
pub fn ensemble_avg_min_weight(outer: &WeightEnumerator, iowe: &MinWeightIowe, n_o: usize) -> Result<BigRational> {
    if outer.length() != n_o {
        return Err(Error::LengthMismatch {
            expected: n_o,
            actual: outer.length(),
        });
    }
    let mut sum = BigRational::zero();
    for (&j, a_i) in &iowe.table {
        if j == 0 || j > n_o {
            return Err(Error::InvalidParameter(format!(
                "input weight {j} outside 1..={n_o}"
            )));
        }
        let num = BigInt::from(outer.get(j) * a_i);
        sum += BigRational::new(num, BigInt::from(binomial_big(n_o, j)));
    }
    Ok(sum)
}

/// [`ensemble_avg_min_weight`] for the ensemble containing `cc`.
pub fn concat_avg_min_weight(cc: &ConcatenatedCode) -> Result<BigRational> {
    let iowe = min_weight_iowe_product(cc.inner())?;
    ensemble_avg_min_weight(cc.outer().weight_enumerator()?, &iowe, cc.outer().n())
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exhaustive minimum distance and multiplicity of the code generated by `gen`.
pub fn min_distance_bruteforce(gen: &BitMatrix) -> Result<(usize, BigUint)> {
    if gen.rows() > MAX_BRUTE_DISTANCE_DIMENSION {
        return Err(Error::SizeLimit {
            what: "dimension for exhaustive distance",
            value: gen.rows(),
            limit: MAX_BRUTE_DISTANCE_DIMENSION,
        });
    }
    weight_enumerator_bruteforce(gen)?
        .min_distance()
        .ok_or_else(|| Error::InvalidParameter("code has no nonzero codeword".into()))
}

/// Minimum-distance union-bound term `(d, A_d)` of a product code.
pub fn product_min_term(code: &ProductCode) -> WeightTerm {
    WeightTerm::new(
        code.d(),
        code.min_weight_multiplicity().to_f64().unwrap_or(f64::INFINITY),
    )
}
