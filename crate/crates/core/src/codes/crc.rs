//! Systematic CRC codes.
//!
//! Convention: MSB-first polynomial division with a zero initial register and
//! no final XOR. A codeword is the message followed by the remainder of
//! `x^{deg g} · m(x)` modulo `g(x)`, so every codeword polynomial is a
//! multiple of `g(x)`.

use super::gf2::BitMatrix;
use crate::error::{Error, Result};

/// Generator polynomial, coefficients stored highest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<u8>,
}

impl Polynomial {
    /// `coeffs[0]` is the coefficient of `x^deg`; both end coefficients must be 1.
    pub fn new(coeffs: Vec<u8>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidParameter(
                "CRC polynomial must have degree at least 1".into(),
            ));
        }
        if coeffs.iter().any(|&b| b > 1) {
            return Err(Error::InvalidParameter("polynomial coefficients must be bits".into()));
        }
        if coeffs[0] != 1 || coeffs[coeffs.len() - 1] != 1 {
            return Err(Error::InvalidParameter(
                "CRC polynomial needs nonzero leading and constant coefficients".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    /// Parses `0x…` hex (full representation including the `x^deg` term) or a
    /// binary string such as `10001001`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let bits: Vec<u8> = if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
            let v = u128::from_str_radix(hex, 16)
                .map_err(|e| Error::Parse(format!("bad hex polynomial {t:?}: {e}")))?;
            if v == 0 {
                return Err(Error::InvalidParameter("zero polynomial".into()));
            }
            let deg = 127 - v.leading_zeros() as usize;
            (0..=deg).rev().map(|i| ((v >> i) & 1) as u8).collect()
        } else {
            let bits = super::gf2::parse_bit_string(t.strip_prefix("0b").unwrap_or(t))?;
            let first = bits.iter().position(|&b| b == 1).unwrap_or(bits.len());
            bits[first..].to_vec()
        };
        Self::new(bits)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    /// CRC remainder of `x^{deg} · m(x)` for a message given MSB first.
    pub fn remainder(&self, message: &[u8]) -> Vec<u8> {
        let deg = self.degree();
        let mut reg = vec![0u8; deg];
        for &bit in message {
            let feedback = (bit ^ reg[0]) & 1;
            reg.rotate_left(1);
            reg[deg - 1] = 0;
            if feedback == 1 {
                for (r, &g) in reg.iter_mut().zip(&self.coeffs[1..]) {
                    *r ^= g;
                }
            }
        }
        reg
    }

    pub fn to_hex(&self) -> String {
        let mut s = String::from("0x");
        let width = self.coeffs.len().div_ceil(4);
        let padded: Vec<u8> = std::iter::repeat_n(0u8, width * 4 - self.coeffs.len())
            .chain(self.coeffs.iter().copied())
            .collect();
        for nib in padded.chunks(4) {
            let v = nib.iter().fold(0u8, |acc, &b| (acc << 1) | b);
            s.push(char::from_digit(u32::from(v), 16).unwrap());
        }
        s
    }
}

/// Systematic generator `[I | P]` of the `(k_o + deg g, k_o)` CRC code.
pub(crate) fn crc_generator(poly: &Polynomial, k_o: usize) -> BitMatrix {
    let deg = poly.degree();
    let mut g = BitMatrix::zeros(k_o, k_o + deg);
    // rem holds x^{deg + j} mod g for j = 0, 1, ...; row i needs j = k_o - 1 - i.
    let mut rem: Vec<u8> = poly.coeffs[1..].to_vec();
    for j in 0..k_o {
        let row = k_o - 1 - j;
        g.set(row, row, 1);
        for (t, &b) in rem.iter().enumerate() {
            g.set(row, k_o + t, b);
        }
        let carry = rem[0];
        rem.rotate_left(1);
        rem[deg - 1] = 0;
        if carry == 1 {
            for (r, &c) in rem.iter_mut().zip(&poly.coeffs[1..]) {
                *r ^= c;
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms_agree() {
        let a = Polynomial::parse("0x89").unwrap();
        let b = Polynomial::parse("10001001").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.degree(), 7);
        assert_eq!(a.to_hex(), "0x89");
        let crc10 = Polynomial::parse("0x633").unwrap();
        assert_eq!(crc10.coeffs(), &[1, 1, 0, 0, 0, 1, 1, 0, 0, 1, 1]);
        assert!(Polynomial::parse("0x1").is_err());
        assert!(Polynomial::parse("0x8").is_err());
        assert!(Polynomial::parse("zz").is_err());
    }

    #[test]
    fn generator_rows_match_register_division() {
        let g = Polynomial::parse("0x89").unwrap();
        let k = 20;
        let gen = crc_generator(&g, k);
        for i in 0..k {
            let mut msg = vec![0u8; k];
            msg[i] = 1;
            let mut expect = msg.clone();
            expect.extend(g.remainder(&msg));
            assert_eq!(gen.row_bits(i), expect);
        }
    }

    #[test]
    fn codewords_are_multiples_of_generator() {
        // A full codeword run through the register leaves a zero remainder.
        let g = Polynomial::parse("0x633").unwrap();
        let msg: Vec<u8> = (0..50).map(|i| ((i * 7 + 3) % 5 == 0) as u8).collect();
        let mut cw = msg.clone();
        cw.extend(g.remainder(&msg));
        // Dividing c(x) by g(x) directly: the remainder of x^deg c(x) is zero iff g | c.
        assert!(g.remainder(&cw).iter().all(|&b| b == 0));
    }
}
