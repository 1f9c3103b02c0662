//! Component codes: the Reed–Muller family built on the Hadamard kernel and
//! systematic CRC codes, plus GF(2) linear algebra and weight enumerators.

pub mod crc;
pub mod enumerator;
pub mod gf2;
pub mod rm;

use std::fmt;
use std::sync::OnceLock;

pub use crc::Polynomial;
pub use enumerator::{
    macwilliams_transform, weight_enumerator, weight_enumerator_bruteforce, WeightEnumerator,
    MAX_ENUM_DIMENSION,
};
pub use gf2::BitMatrix;
pub use rm::{generator_from_frozen, hadamard_matrix, polar_transform, rm_frozen_vector};

use crate::error::{Error, Result};

/// Length-`n` frozen vector; `1` marks an information position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrozenVector {
    bits: Vec<u8>,
}

impl FrozenVector {
    pub fn new(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Self { bits }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(Self::new(gf2::parse_bit_string(text.trim())?))
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Number of information positions (the code dimension).
    pub fn popcount(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    #[inline]
    pub fn is_info(&self, i: usize) -> bool {
        self.bits[i] == 1
    }

    /// Ascending information indices `v_1 < … < v_k` (0-based).
    pub fn info_positions(&self) -> Vec<usize> {
        (0..self.bits.len()).filter(|&i| self.bits[i] == 1).collect()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut bits = Vec::with_capacity(self.len() * other.len());
        for &a in &self.bits {
            bits.extend(other.bits.iter().map(|&b| a & b));
        }
        Self::new(bits)
    }

    /// Row-selection matrix `F` (k × n) with `F[i][v_i] = 1`.
    pub fn selection_matrix(&self) -> BitMatrix {
        let info = self.info_positions();
        let mut f = BitMatrix::zeros(info.len(), self.len());
        for (i, &v) in info.iter().enumerate() {
            f.set(i, v, 1);
        }
        f
    }
}

impl fmt::Display for FrozenVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&gf2::bits_to_string(&self.bits))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CodeKind {
    ReedMuller { r: usize, m: usize },
    Crc { poly: Polynomial },
    /// Uncoded `(n, n)` code with `G = I`.
    Identity,
}

/// A binary linear component code with its generator matrix.
#[derive(Debug, Clone)]
pub struct ComponentCode {
    kind: CodeKind,
    n: usize,
    k: usize,
    frozen: Option<FrozenVector>,
    generator: BitMatrix,
    enumerator: OnceLock<WeightEnumerator>,
}

impl PartialEq for ComponentCode {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.k == other.k
    }
}

impl Eq for ComponentCode {}

impl ComponentCode {
    /// `RM(r, m)`: generator rows are the rows of `K_2^{⊗m}` of weight ≥ `2^{m-r}`.
    pub fn reed_muller(r: usize, m: usize) -> Result<Self> {
        let frozen = rm_frozen_vector(r, m)?;
        let generator = generator_from_frozen(&frozen)?;
        Ok(Self {
            kind: CodeKind::ReedMuller { r, m },
            n: frozen.len(),
            k: frozen.popcount(),
            frozen: Some(frozen),
            generator,
            enumerator: OnceLock::new(),
        })
    }

    /// `(n, 1)` repetition code, `RM(0, log2 n)`.
    pub fn repetition(n: usize) -> Result<Self> {
        Self::reed_muller(0, log2_exact(n)?)
    }

    /// `(n, n-1)` single parity-check code, `RM(m-1, m)`.
    pub fn spc(n: usize) -> Result<Self> {
        let m = log2_exact(n)?;
        if m == 0 {
            return Err(Error::InvalidParameter("SPC code needs n >= 2".into()));
        }
        Self::reed_muller(m - 1, m)
    }

    /// `(2^m, 2^m - m - 1)` extended Hamming code, `RM(m-2, m)`.
    pub fn extended_hamming(n: usize) -> Result<Self> {
        let m = log2_exact(n)?;
        if m < 2 {
            return Err(Error::InvalidParameter("extended Hamming code needs n >= 4".into()));
        }
        Self::reed_muller(m - 2, m)
    }

    /// `(n, n)` code with identity generator.
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("identity code needs n >= 1".into()));
        }
        Ok(Self {
            kind: CodeKind::Identity,
            n,
            k: n,
            frozen: None,
            generator: BitMatrix::identity(n),
            enumerator: OnceLock::new(),
        })
    }

    pub fn kind(&self) -> &CodeKind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_reed_muller(&self) -> bool {
        matches!(self.kind, CodeKind::ReedMuller { .. })
    }

    /// `m` for an RM code, `None` otherwise.
    pub fn log_length(&self) -> Option<usize> {
        match self.kind {
            CodeKind::ReedMuller { m, .. } => Some(m),
            CodeKind::Crc { .. } | CodeKind::Identity => None,
        }
    }

    pub fn frozen(&self) -> Option<&FrozenVector> {
        self.frozen.as_ref()
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    /// Minimum distance: `2^{m-r}` for RM codes, from the weight enumerator otherwise.
    pub fn min_distance(&self) -> Result<usize> {
        match self.kind {
            CodeKind::ReedMuller { r, m } => Ok(1 << (m - r)),
            CodeKind::Identity => Ok(1),
            CodeKind::Crc { .. } => Ok(self
                .weight_enumerator()?
                .min_distance()
                .map_or(self.n + 1, |(d, _)| d)),
        }
    }

    /// Exact weight enumerator, computed once and cached.
    pub fn weight_enumerator(&self) -> Result<&WeightEnumerator> {
        if let Some(we) = self.enumerator.get() {
            return Ok(we);
        }
        let we = weight_enumerator(&self.generator)?;
        Ok(self.enumerator.get_or_init(|| we))
    }

    /// Coordinates carrying the message under systematic encoding: the
    /// information positions of `f` for RM codes, the first `k` positions for
    /// CRC codes.
    pub fn information_set(&self) -> Vec<usize> {
        match &self.frozen {
            Some(f) => f.info_positions(),
            None => (0..self.k).collect(),
        }
    }

    /// Generator with the identity on [`information_set`](Self::information_set).
    pub fn systematic_generator(&self) -> BitMatrix {
        let t = self.generator.select_cols(&self.information_set());
        let t_inv = t
            .inverse()
            .expect("information set columns of the generator are invertible");
        t_inv.mul(&self.generator).expect("dimensions agree")
    }

    pub fn parity_check(&self) -> BitMatrix {
        self.generator.null_space()
    }

    /// Short human-readable name, e.g. `SPC(8,7)` or `eH(16,11)`.
    pub fn name(&self) -> String {
        match &self.kind {
            CodeKind::ReedMuller { r, m } => {
                let (n, k) = (self.n, self.k);
                if *m >= 1 && *r == 0 {
                    format!("rep({n},{k})")
                } else if *m >= 1 && *r == m - 1 {
                    format!("SPC({n},{k})")
                } else if *m >= 3 && *r == m - 2 {
                    format!("eH({n},{k})")
                } else {
                    format!("RM({r},{m})")
                }
            }
            CodeKind::Crc { poly } => {
                format!("CRC-{}({},{})", poly.degree(), self.n, self.k)
            }
            CodeKind::Identity => format!("id({},{})", self.n, self.k),
        }
    }

    /// Parses `rep(n,1)`, `SPC(n,n-1)`, `eH(n,k)`, `RM(r,m)` or `id(n,n)`
    /// (case-insensitive names).
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let open = t
            .find('(')
            .ok_or_else(|| Error::Parse(format!("expected NAME(a,b), got {t:?}")))?;
        if !t.ends_with(')') {
            return Err(Error::Parse(format!("missing ')' in {t:?}")));
        }
        let name = t[..open].trim().to_ascii_lowercase();
        let args: Vec<usize> = t[open + 1..t.len() - 1]
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad number {a:?} in {t:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        let [a, b] = args[..] else {
            return Err(Error::Parse(format!("expected two parameters in {t:?}")));
        };
        let code = match name.as_str() {
            "rm" => Self::reed_muller(a, b)?,
            "rep" | "repetition" => Self::repetition(a)?,
            "spc" => Self::spc(a)?,
            "eh" | "ehamming" => Self::extended_hamming(a)?,
            "id" | "identity" => Self::identity(a)?,
            other => return Err(Error::Parse(format!("unknown component code {other:?}"))),
        };
        if name != "rm" && code.k != b {
            return Err(Error::Parse(format!(
                "{t}: dimension should be {} for length {a}",
                code.k
            )));
        }
        Ok(code)
    }
}

impl fmt::Display for ComponentCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Systematic `(k_o + deg g, k_o)` CRC code; codeword = message ‖ remainder.
pub fn crc_code(poly: &Polynomial, k_o: usize) -> Result<ComponentCode> {
    if k_o == 0 {
        return Err(Error::InvalidParameter("CRC code dimension must be positive".into()));
    }
    let generator = crc::crc_generator(poly, k_o);
    Ok(ComponentCode {
        kind: CodeKind::Crc { poly: poly.clone() },
        n: k_o + poly.degree(),
        k: k_o,
        frozen: None,
        generator,
        enumerator: OnceLock::new(),
    })
}

pub(crate) fn log2_exact(n: usize) -> Result<usize> {
    if n.is_power_of_two() {
        Ok(n.trailing_zeros() as usize)
    } else {
        Err(Error::InvalidParameter(format!("length {n} is not a power of two")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn named_family_members() {
        let id = ComponentCode::parse("id(5,5)").unwrap();
        assert_eq!((id.n(), id.k(), id.min_distance().unwrap()), (5, 5, 1));
        assert_eq!(id.weight_enumerator().unwrap().get(2), BigUint::from(10u32));
        assert!(ComponentCode::parse("id(5,4)").is_err());
        let rep = ComponentCode::repetition(2).unwrap();
        assert_eq!((rep.n(), rep.k(), rep.min_distance().unwrap()), (2, 1, 2));
        assert_eq!(rep.name(), "rep(2,1)");
        let spc = ComponentCode::spc(8).unwrap();
        assert_eq!((spc.n(), spc.k(), spc.min_distance().unwrap()), (8, 7, 2));
        let eh = ComponentCode::extended_hamming(16).unwrap();
        assert_eq!((eh.n(), eh.k(), eh.min_distance().unwrap()), (16, 11, 4));
        assert_eq!(eh.kind(), &CodeKind::ReedMuller { r: 2, m: 4 });
        assert_eq!(eh.name(), "eH(16,11)");
    }

    #[test]
    fn parse_descriptors() {
        assert_eq!(ComponentCode::parse("eH(16,11)").unwrap().k(), 11);
        assert_eq!(ComponentCode::parse(" spc(64,63) ").unwrap().n(), 64);
        assert_eq!(ComponentCode::parse("RM(1,3)").unwrap().k(), 4);
        assert!(ComponentCode::parse("SPC(8,6)").is_err());
        assert!(ComponentCode::parse("SPC(12,11)").is_err());
        assert!(ComponentCode::parse("BCH(15,7)").is_err());
        assert!(ComponentCode::parse("SPC 8 7").is_err());
    }

    #[test]
    fn crc1_is_parity() {
        let code = crc_code(&Polynomial::parse("11").unwrap(), 3).unwrap();
        assert_eq!((code.n(), code.k()), (4, 3));
        let spc = ComponentCode::spc(4).unwrap();
        assert_eq!(code.weight_enumerator().unwrap(), spc.weight_enumerator().unwrap());
        assert_eq!(code.min_distance().unwrap(), 2);
    }

    #[test]
    fn crc_codes_from_concatenations() {
        let crc7 = crc_code(&Polynomial::parse("0x89").unwrap(), 70).unwrap();
        assert_eq!((crc7.n(), crc7.k()), (77, 70));
        let g = crc7.generator();
        let left = g.select_cols(&(0..70).collect::<Vec<_>>());
        assert_eq!(left, BitMatrix::identity(70));
        let we = crc7.weight_enumerator().unwrap();
        assert_eq!(we.total(), BigUint::from(1u8) << 70);
        assert_eq!(we.get(0), BigUint::from(1u8));

        let crc10 = crc_code(&Polynomial::parse("0x633").unwrap(), 683).unwrap();
        assert_eq!((crc10.n(), crc10.k()), (693, 683));
        assert!(crc_code(&Polynomial::parse("11").unwrap(), 0).is_err());
    }

    #[test]
    fn systematic_generators_span_the_code() {
        for code in [
            ComponentCode::extended_hamming(16).unwrap(),
            ComponentCode::spc(8).unwrap(),
            ComponentCode::reed_muller(1, 4).unwrap(),
        ] {
            let gs = code.systematic_generator();
            let info = code.information_set();
            assert_eq!(gs.select_cols(&info), BitMatrix::identity(code.k()));
            let h = code.parity_check();
            assert_eq!(h.rows(), code.n() - code.k());
            let syn = gs.mul(&h.transpose()).unwrap();
            assert_eq!(syn, BitMatrix::zeros(code.k(), code.n() - code.k()));
        }
    }

    #[test]
    fn frozen_kron_and_selection() {
        let f1 = FrozenVector::new(vec![0, 1]);
        let f2 = FrozenVector::new(vec![0, 1, 1, 1]);
        let f = f1.kron(&f2);
        assert_eq!(f.to_string(), "00000111");
        let sel = f.selection_matrix();
        assert_eq!(sel.to_ascii(), "00000100\n00000010\n00000001\n");
        let e = vec![1u8; sel.rows()];
        assert_eq!(sel.vec_mul(&e).unwrap(), f.bits());
    }
}
