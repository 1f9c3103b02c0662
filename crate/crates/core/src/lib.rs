//! Product codes with Reed–Muller component codes, viewed as Reed–Muller
//! subcodes through the Kronecker structure of the `2 × 2` Hadamard kernel.
//!
//! The crate covers construction ([`codes`], [`product`], [`concat`]),
//! decoding ([`scl`] for successive cancellation and list decoding, [`bp`] for
//! turbo-product belief propagation), analytic performance estimates
//! ([`analysis`]) and a reproducible B-AWGN Monte-Carlo engine ([`sim`]).
//!
//! Bit positions are 0-based throughout: the information bit written `u_i`
//! in textbook notation is `u[i - 1]` here.

pub mod analysis;
pub mod bp;
pub mod codes;
pub mod concat;
pub mod error;
pub mod product;
pub mod scl;
pub mod sim;

pub use codes::{BitMatrix, ComponentCode, FrozenVector, Polynomial, WeightEnumerator};
pub use error::{Error, Result};
pub use product::{build_product, InfoArray, ProductCode};
