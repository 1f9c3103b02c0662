use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::codes::{crc_code, polar_transform, Polynomial};

fn crc7_concat(pi: Interleaver) -> ConcatenatedCode {
    let inner = ProductCode::parse("eH(16,11) x SPC(8,7)").unwrap();
    let outer = crc_code(&Polynomial::parse("0x89").unwrap(), 70).unwrap();
    build_concat(outer, pi, inner).unwrap()
}

fn random_bits(n: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..2u8)).collect()
}

#[test]
fn interleavers_are_bijective_and_seeded() {
    let a = Interleaver::random(77, 4);
    let b = Interleaver::random(77, 4);
    assert_eq!(a, b);
    assert_ne!(a.permutation(), Interleaver::random(77, 5).permutation());
    let mut seen = a.permutation().to_vec();
    seen.sort_unstable();
    assert_eq!(seen, (0..77).collect::<Vec<_>>());
    let v: Vec<u8> = (0..77).map(|i| (i % 3 == 0) as u8).collect();
    assert_eq!(a.matrix().vec_mul(&v).unwrap(), a.apply(&v));
    assert_eq!(Interleaver::trivial(5).apply(&[1, 0, 0, 1, 1]), vec![1, 0, 0, 1, 1]);
}

#[test]
fn crc7_concatenation_parameters() {
    let cc = crc7_concat(Interleaver::trivial(77));
    assert_eq!((cc.n(), cc.k()), (128, 70));
    assert_eq!(cc.modified_outer_generator().rank(), 70);
    assert_eq!(cc.generator().rank(), 70);
    assert_eq!(cc.modified_outer_parity_check().rows(), 7);
    assert_eq!(cc.name(), "CRC-7(77,70) + eH(16,11) x SPC(8,7)");
}

#[test]
fn crc10_concatenation_parameters() {
    let inner = ProductCode::parse("eH(16,11) x SPC(64,63)").unwrap();
    let outer = crc_code(&Polynomial::parse("0x633").unwrap(), 683).unwrap();
    let cc = build_concat(outer, Interleaver::trivial(693), inner).unwrap();
    assert_eq!((cc.n(), cc.k()), (1024, 683));
    assert_eq!(cc.modified_outer_generator().rank(), 683);
}

#[test]
fn encoder_paths_agree() {
    for pi in [Interleaver::trivial(77), Interleaver::random(77, 99)] {
        let cc = crc7_concat(pi);
        assert_eq!(encode_concat(&cc, &[0; 70]).unwrap(), vec![0; 128]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let m = random_bits(70, &mut rng);
            let (a, b) = cc.encode_both(&m).unwrap();
            assert_eq!(a, b);
            assert!(cc.inner().is_codeword(&a));
            assert_eq!(cc.message_of(&a).unwrap(), m);
        }
    }
}

#[test]
fn identity_outer_code_is_transparent() {
    let inner = ProductCode::parse("eH(16,11) x SPC(8,7)").unwrap();
    let cc = build_concat(ComponentCode::identity(77).unwrap(), Interleaver::trivial(77), inner.clone()).unwrap();
    assert_eq!(cc.modified_outer_parity_check().rows(), 0);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let m = random_bits(77, &mut rng);
        assert_eq!(encode_concat(&cc, &m).unwrap(), inner.encode_systematic_flat(&m).unwrap());
        assert!(cc.checker().accepts_info(&m));
    }
}

#[test]
fn checker_accepts_codewords_and_detects_single_flips() {
    let cc = crc7_concat(Interleaver::trivial(77));
    let checker = outer_checker_from_crc(&cc);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let m = random_bits(70, &mut rng);
        let mut u = encode_concat(&cc, &m).unwrap();
        polar_transform(&mut u);
        assert!(checker.accepts(&u));
    }
    let m = random_bits(70, &mut rng);
    let u_info = cc.modified_outer_generator().vec_mul(&m).unwrap();
    assert!(checker.accepts_info(&u_info));
    for i in 0..77 {
        let mut flipped = u_info.clone();
        flipped[i] ^= 1;
        assert!(!checker.accepts_info(&flipped), "flip at {i} undetected");
    }
}

#[test]
fn checker_acceptance_density() {
    let cc = crc7_concat(Interleaver::random(77, 8));
    let checker = cc.checker();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let trials = 200_000;
    let accepted = (0..trials)
        .filter(|_| checker.accepts_info(&random_bits(77, &mut rng)))
        .count() as f64;
    let p = 1.0 / 128.0;
    let sd = (trials as f64 * p * (1.0 - p)).sqrt();
    assert!((accepted - trials as f64 * p).abs() < 5.0 * sd, "{accepted}");
}

#[test]
fn build_errors() {
    let inner = ProductCode::parse("eH(16,11) x SPC(8,7)").unwrap();
    let short = crc_code(&Polynomial::parse("0x89").unwrap(), 60).unwrap();
    assert!(matches!(
        build_concat(short, Interleaver::trivial(67), inner.clone()),
        Err(Error::DimensionMismatch(_))
    ));
    let outer = crc_code(&Polynomial::parse("0x89").unwrap(), 70).unwrap();
    assert!(matches!(
        build_concat(outer, Interleaver::trivial(70), inner.clone()),
        Err(Error::DimensionMismatch(_))
    ));
    let cc = crc7_concat(Interleaver::trivial(77));
    assert!(encode_concat(&cc, &[0; 69]).is_err());
    let rm = ComponentCode::reed_muller(1, 3).unwrap();
    assert!(matches!(
        build_concat(rm, Interleaver::trivial(8), ProductCode::parse("SPC(4,3) x rep(2,1)").unwrap()),
        Err(Error::Unsupported(_))
    ));
}
