//! Product codes with Reed–Muller components as Reed–Muller subcodes.
//!
//! For components `RM(r_ℓ, m_ℓ)` with frozen vectors `f_ℓ`, the product code
//! is generated by `F · K_2^{⊗(m_1+…+m_μ)}` with `F = F_1 ⊗ … ⊗ F_μ`, so its
//! frozen vector is `f_1 ⊗ … ⊗ f_μ`. Codeword index `i` of the product
//! corresponds to the multi-index `(i_1, …, i_μ)` in row-major order, i.e.
//! component 1 varies slowest.
//!
//! Two encoders share the same code: the non-systematic transform encoder
//! `c = u · K_2^{⊗m}`, and the row–column systematic encoder which places the
//! message on the Kronecker product of the per-axis information sets (the
//! information positions of each `f_ℓ`). Because both sets coincide with the
//! information positions of `f`, the message of a systematic codeword `c` is
//! simply `c` restricted to those positions.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;

use crate::codes::{
    generator_from_frozen, polar_transform, BitMatrix, ComponentCode, FrozenVector,
};
use crate::error::{check_len, Error, Result};

/// Largest supported product length, `2^12`.
pub const MAX_PRODUCT_LOG: usize = 12;
/// Largest supported number of product dimensions.
pub const MAX_AXES: usize = 4;

/// A μ-dimensional product code with RM-family components.
#[derive(Debug, Clone)]
pub struct ProductCode {
    components: Vec<ComponentCode>,
    n: usize,
    k: usize,
    d: usize,
    log_len: usize,
    min_weight_multiplicity: BigUint,
    frozen: FrozenVector,
    info_positions: Vec<usize>,
    axis_systematic: Vec<BitMatrix>,
    axis_parity: Vec<BitMatrix>,
    basis: OnceLock<(BitMatrix, BitMatrix)>,
}

/// Information array of shape `k_1 × … × k_μ`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfoArray {
    shape: Vec<usize>,
    bits: Vec<u8>,
}

impl InfoArray {
    pub fn new(shape: Vec<usize>, bits: Vec<u8>) -> Result<Self> {
        check_len(shape.iter().product(), bits.len())?;
        Ok(Self { shape, bits })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }
}

/// Builds the product of `components` in the given order.
pub fn build_product(components: &[ComponentCode]) -> Result<ProductCode> {
    if components.is_empty() {
        return Err(Error::InvalidParameter("product needs at least one component".into()));
    }
    if components.len() > MAX_AXES {
        return Err(Error::SizeLimit {
            what: "product dimensions",
            value: components.len(),
            limit: MAX_AXES,
        });
    }
    let mut log_len = 0;
    for c in components {
        match c.log_length() {
            Some(m) => log_len += m,
            None => {
                return Err(Error::Unsupported(format!(
                    "component {} is not a Reed-Muller code",
                    c.name()
                )))
            }
        }
    }
    if log_len > MAX_PRODUCT_LOG {
        return Err(Error::SizeLimit {
            what: "product log-length",
            value: log_len,
            limit: MAX_PRODUCT_LOG,
        });
    }

    let mut frozen = FrozenVector::new(vec![1]);
    let mut d = 1;
    let mut a_d = BigUint::one();
    for c in components {
        frozen = frozen.kron(c.frozen().expect("RM component has a frozen vector"));
        let d_c = c.min_distance()?;
        d *= d_c;
        a_d *= c.weight_enumerator()?.get(d_c);
    }
    let info_positions = frozen.info_positions();
    Ok(ProductCode {
        n: frozen.len(),
        k: info_positions.len(),
        d,
        log_len,
        min_weight_multiplicity: a_d,
        axis_systematic: components.iter().map(ComponentCode::systematic_generator).collect(),
        axis_parity: components.iter().map(ComponentCode::parity_check).collect(),
        components: components.to_vec(),
        frozen,
        info_positions,
        basis: OnceLock::new(),
    })
}

impl ProductCode {
    /// Parses `A x B x …`, e.g. `eH(16,11) x SPC(8,7)`.
    pub fn parse(descriptor: &str) -> Result<Self> {
        let parts: Vec<ComponentCode> = descriptor
            .split(['x', '×', '*'])
            .map(ComponentCode::parse)
            .collect::<Result<_>>()?;
        build_product(&parts)
    }

    pub fn components(&self) -> &[ComponentCode] {
        &self.components
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// `A_d = Π A^{(ℓ)}_{d_ℓ}`.
    pub fn min_weight_multiplicity(&self) -> &BigUint {
        &self.min_weight_multiplicity
    }

    /// Total `m = Σ m_ℓ`, so that `n = 2^m`.
    pub fn log_length(&self) -> usize {
        self.log_len
    }

    pub fn frozen(&self) -> &FrozenVector {
        &self.frozen
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    /// Array shape `(n_1, …, n_μ)`.
    pub fn shape(&self) -> Vec<usize> {
        self.components.iter().map(ComponentCode::n).collect()
    }

    /// Information array shape `(k_1, …, k_μ)`.
    pub fn info_shape(&self) -> Vec<usize> {
        self.components.iter().map(ComponentCode::k).collect()
    }

    pub fn name(&self) -> String {
        let parts: Vec<String> = self.components.iter().map(ComponentCode::name).collect();
        parts.join(" x ")
    }

    /// `F · K_2^{⊗m}` (k × n).
    pub fn generator_nonsystematic(&self) -> BitMatrix {
        generator_from_frozen(&self.frozen).expect("product length within limits")
    }

    /// Kronecker product of the per-axis systematic generators (k × n).
    pub fn generator_systematic(&self) -> BitMatrix {
        self.axis_systematic
            .iter()
            .skip(1)
            .fold(self.axis_systematic[0].clone(), |acc, g| acc.kron(g))
    }

    /// `c = u · K_2^{⊗m}` with `u` zero on frozen positions and `info` on the rest.
    pub fn encode_nonsystematic(&self, info: &[u8]) -> Result<Vec<u8>> {
        check_len(self.k, info.len())?;
        let mut u = vec![0u8; self.n];
        for (&pos, &b) in self.info_positions.iter().zip(info) {
            u[pos] = b & 1;
        }
        polar_transform(&mut u);
        Ok(u)
    }

    /// Row–column systematic encoding; the result is the flattened
    /// `n_1 × … × n_μ` array.
    pub fn encode_systematic(&self, info: &InfoArray) -> Result<Vec<u8>> {
        let expect = self.info_shape();
        if info.shape != expect {
            return Err(Error::DimensionMismatch(format!(
                "information array shape {:?}, expected {:?}",
                info.shape, expect
            )));
        }
        self.encode_systematic_flat(&info.bits)
    }

    /// As [`encode_systematic`](Self::encode_systematic) for a row-major message of length `k`.
    pub fn encode_systematic_flat(&self, info: &[u8]) -> Result<Vec<u8>> {
        check_len(self.k, info.len())?;
        let mut shape = self.info_shape();
        let mut data = info.to_vec();
        for (axis, gen) in self.axis_systematic.iter().enumerate() {
            data = encode_axis(&data, &shape, axis, gen);
            shape[axis] = gen.cols();
        }
        Ok(data)
    }

    /// `S` with `G_sys = S · G_nsys`, obtained by inverting the non-systematic
    /// generator restricted to the information set.
    pub fn change_of_basis(&self) -> &BitMatrix {
        &self.basis().0
    }

    /// `S^{-1}`: maps u-domain information bits to the systematic message.
    pub fn change_of_basis_inverse(&self) -> &BitMatrix {
        &self.basis().1
    }

    fn basis(&self) -> &(BitMatrix, BitMatrix) {
        self.basis.get_or_init(|| {
            let t = self.generator_nonsystematic().select_cols(&self.info_positions);
            let s = t.inverse().expect("information set of the transform is invertible");
            (s, t)
        })
    }

    /// u-domain information bits `u_I` of a codeword.
    pub fn u_info_from_codeword(&self, codeword: &[u8]) -> Result<Vec<u8>> {
        check_len(self.n, codeword.len())?;
        let mut u = codeword.to_vec();
        polar_transform(&mut u);
        Ok(self.info_positions.iter().map(|&p| u[p]).collect())
    }

    /// Systematic message of a codeword: its bits on the information set.
    pub fn systematic_info(&self, codeword: &[u8]) -> Vec<u8> {
        self.info_positions.iter().map(|&p| codeword[p]).collect()
    }

    /// True iff every axis fiber is a codeword of its component code.
    pub fn is_codeword(&self, word: &[u8]) -> bool {
        if word.len() != self.n {
            return false;
        }
        let shape = self.shape();
        self.axis_parity.iter().enumerate().all(|(axis, h)| {
            fibers(&shape, axis).all(|(start, stride)| {
                let fiber: Vec<u8> = (0..shape[axis]).map(|i| word[start + i * stride]).collect();
                h.mul_vec(&fiber).expect("fiber length").iter().all(|&s| s == 0)
            })
        })
    }
}

/// `(start, stride)` of every fiber along `axis` in a row-major array.
pub(crate) fn fibers(shape: &[usize], axis: usize) -> impl Iterator<Item = (usize, usize)> {
    let stride: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let len = shape[axis];
    (0..outer).flat_map(move |o| (0..stride).map(move |s| (o * len * stride + s, stride)))
}

fn encode_axis(data: &[u8], shape: &[usize], axis: usize, gen: &BitMatrix) -> Vec<u8> {
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let (k_ax, n_ax) = (gen.rows(), gen.cols());
    let mut out = vec![0u8; outer * n_ax * inner];
    let mut fiber = vec![0u8; k_ax];
    for o in 0..outer {
        for s in 0..inner {
            for (i, f) in fiber.iter_mut().enumerate() {
                *f = data[(o * k_ax + i) * inner + s];
            }
            let coded = gen.vec_mul(&fiber).expect("fiber length");
            for (j, b) in coded.into_iter().enumerate() {
                out[(o * n_ax + j) * inner + s] = b;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::hadamard_matrix;

    fn example1() -> ProductCode {
        ProductCode::parse("rep(2,1) x SPC(4,3)").unwrap()
    }

    #[test]
    fn example_frozen_vector() {
        let pc = example1();
        assert_eq!(pc.frozen().to_string(), "00000111");
        assert_eq!((pc.n(), pc.k(), pc.d()), (8, 3, 4));
        assert_eq!(pc.min_weight_multiplicity(), &BigUint::from(6u8));
        let f = pc.frozen().selection_matrix();
        assert_eq!(f.to_ascii(), "00000100\n00000010\n00000001\n");
    }

    #[test]
    fn table_rows() {
        let pc = ProductCode::parse("eH(16,11) x SPC(8,7)").unwrap();
        assert_eq!((pc.n(), pc.k(), pc.d()), (128, 77, 8));
        assert_eq!(pc.min_weight_multiplicity(), &BigUint::from(3920u32));
        let pc = ProductCode::parse("SPC(64,63) x eH(16,11)").unwrap();
        assert_eq!((pc.n(), pc.k(), pc.d()), (1024, 693, 8));
        assert_eq!(pc.min_weight_multiplicity(), &BigUint::from(282240u32));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(build_product(&[]).is_err());
        let crc = crate::codes::crc_code(&crate::codes::Polynomial::parse("11").unwrap(), 3).unwrap();
        assert!(matches!(build_product(&[crc]), Err(Error::Unsupported(_))));
        assert!(matches!(
            ProductCode::parse("SPC(64,63) x SPC(64,63) x SPC(2,1)"),
            Err(Error::SizeLimit { .. })
        ));
        let pc = example1();
        assert!(pc.encode_nonsystematic(&[1, 0]).is_err());
        let bad = InfoArray::new(vec![3, 1], vec![0, 0, 0]).unwrap();
        assert!(pc.encode_systematic(&bad).is_err());
    }

    #[test]
    fn nonsystematic_basis_rows() {
        let pc = example1();
        let g3 = hadamard_matrix(3).unwrap();
        assert_eq!(pc.encode_nonsystematic(&[0, 0, 0]).unwrap(), vec![0; 8]);
        assert_eq!(pc.encode_nonsystematic(&[1, 0, 0]).unwrap(), g3.row_bits(5));
        for (i, &pos) in pc.info_positions().iter().enumerate() {
            let mut info = vec![0u8; 3];
            info[i] = 1;
            assert_eq!(pc.encode_nonsystematic(&info).unwrap(), g3.row_bits(pos));
        }
    }

    #[test]
    fn systematic_words_are_codewords() {
        let pc = example1();
        let h = pc.generator_nonsystematic().null_space();
        for msg in 0u8..8 {
            let bits: Vec<u8> = (0..3).map(|i| (msg >> i) & 1).collect();
            let info = InfoArray::new(pc.info_shape(), bits.clone()).unwrap();
            let c = pc.encode_systematic(&info).unwrap();
            assert!(h.mul_vec(&c).unwrap().iter().all(|&s| s == 0));
            assert!(pc.is_codeword(&c));
            assert_eq!(pc.systematic_info(&c), bits);
        }
    }

    #[test]
    fn change_of_basis_relates_generators() {
        let pc = example1();
        let s = pc.change_of_basis();
        assert_eq!(s.rank(), 3);
        assert_eq!(s.mul(&pc.generator_nonsystematic()).unwrap(), pc.generator_systematic());

        let pc = ProductCode::parse("eH(16,11) x SPC(8,7)").unwrap();
        let s = pc.change_of_basis();
        assert_eq!(s.rank(), 77);
        assert_eq!(s.mul(&pc.generator_nonsystematic()).unwrap(), pc.generator_systematic());
        assert_eq!(
            s.mul(pc.change_of_basis_inverse()).unwrap(),
            BitMatrix::identity(77)
        );
    }

    #[test]
    fn repetition_product_has_identity_basis() {
        let pc = ProductCode::parse("rep(2,1) x rep(4,1)").unwrap();
        assert_eq!(pc.generator_nonsystematic(), pc.generator_systematic());
        assert_eq!(pc.change_of_basis(), &BitMatrix::identity(1));
    }

    #[test]
    fn u_info_round_trip() {
        let pc = ProductCode::parse("eH(16,11) x SPC(8,7)").unwrap();
        let info: Vec<u8> = (0..77).map(|i| ((i * 5 + 1) % 3 == 0) as u8).collect();
        let c = pc.encode_nonsystematic(&info).unwrap();
        assert_eq!(pc.u_info_from_codeword(&c).unwrap(), info);
        let x = pc.change_of_basis_inverse().vec_mul(&info).unwrap();
        assert_eq!(pc.encode_systematic_flat(&x).unwrap(), c);
    }
}
