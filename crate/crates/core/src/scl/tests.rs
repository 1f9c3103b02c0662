use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::*;
use crate::product::ProductCode;

fn noisy_llrs(codeword: &[u8], sigma: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let noise = Normal::new(0.0, sigma).unwrap();
    codeword
        .iter()
        .map(|&c| {
            let y = 1.0 - 2.0 * f64::from(c) + noise.sample(rng);
            2.0 * y / (sigma * sigma)
        })
        .collect()
}

/// Exhaustive ML: codeword maximizing `Σ (1 − 2c_i) L_i`.
fn brute_force_ml(pc: &ProductCode, llrs: &[f64]) -> Vec<u8> {
    let k = pc.k();
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for msg in 0u32..(1 << k) {
        let info: Vec<u8> = (0..k).map(|i| ((msg >> i) & 1) as u8).collect();
        let c = pc.encode_nonsystematic(&info).unwrap();
        let score: f64 = c.iter().zip(llrs).map(|(&b, &l)| (1.0 - 2.0 * f64::from(b)) * l).sum();
        if score > best.0 {
            best = (score, c);
        }
    }
    best.1
}

fn random_info(k: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
    (0..k).map(|_| rng.random_range(0..2u8)).collect()
}

#[test]
fn noiseless_all_zero() {
    let pc = ProductCode::parse("eH(16,11) x SPC(8,7)").unwrap();
    let llrs = vec![LLR_CLAMP; pc.n()];
    let out = sc_decode(&llrs, pc.frozen()).unwrap();
    assert!(out.chosen_info.iter().all(|&b| b == 0));
    assert_eq!(out.candidates.len(), 1);
}

#[test]
fn noiseless_example_code_exhaustive() {
    let pc = ProductCode::parse("rep(2,1) x SPC(4,3)").unwrap();
    for msg in 0u8..8 {
        let info: Vec<u8> = (0..3).map(|i| (msg >> i) & 1).collect();
        let c = pc.encode_nonsystematic(&info).unwrap();
        let llrs: Vec<f64> = c.iter().map(|&b| if b == 0 { 8.0 } else { -8.0 }).collect();
        let out = sc_decode(&llrs, pc.frozen()).unwrap();
        assert_eq!(out.chosen_info, info);
        assert_eq!(out.chosen_codeword, c);
        let out = scl_decode(&llrs, pc.frozen(), 4, None).unwrap();
        assert_eq!(out.chosen_info, info);
    }
}

#[test]
fn repetition_follows_stronger_observation() {
    let f = FrozenVector::new(vec![0, 1]);
    let out = sc_decode(&[3.0, -1.0], &f).unwrap();
    assert_eq!(out.chosen_codeword, vec![0, 0]);
    let out = sc_decode(&[-3.0, 1.0], &f).unwrap();
    assert_eq!(out.chosen_codeword, vec![1, 1]);
}

#[test]
fn input_validation() {
    let f = FrozenVector::new(vec![0, 1, 1, 1]);
    assert!(matches!(sc_decode(&[1.0; 3], &f), Err(Error::LengthMismatch { .. })));
    assert!(SclDecoder::new(0, DecoderConfig::default()).is_err());
    let f6 = FrozenVector::new(vec![1; 6]);
    assert!(scl_decode(&[1.0; 6], &f6, 2, None).is_err());
    assert!(path_metric(&[1.0; 4], &f, &[1, 0, 0, 0], DecoderConfig::default()).is_err());
}

#[test]
fn list_of_one_is_sc() {
    let pc = ProductCode::parse("eH(16,11) x SPC(8,7)").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for config in [
        DecoderConfig::default(),
        DecoderConfig { check: CheckRule::MinSum, metric: MetricRule::Hard },
    ] {
        let mut dec = SclDecoder::new(1, config).unwrap();
        for _ in 0..500 {
            let llrs: Vec<f64> = (0..pc.n()).map(|_| rng.random_range(-6.0..6.0)).collect();
            let sc = sc_decode_with(&llrs, pc.frozen(), config).unwrap();
            let scl = dec.decode(&llrs, pc.frozen(), None).unwrap();
            assert_eq!(sc.candidates[0].u, scl.candidates[0].u);
            assert_eq!(sc.candidates[0].metric.to_bits(), scl.candidates[0].metric.to_bits());
        }
    }
}

#[test]
fn full_list_is_maximum_likelihood() {
    let pc = ProductCode::parse("rep(2,1) x SPC(4,3)").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for config in [
        DecoderConfig::default(),
        DecoderConfig { check: CheckRule::MinSum, metric: MetricRule::Hard },
    ] {
        let mut dec = SclDecoder::new(8, config).unwrap();
        for _ in 0..2000 {
            let info = random_info(3, &mut rng);
            let c = pc.encode_nonsystematic(&info).unwrap();
            let llrs = noisy_llrs(&c, 1.0, &mut rng);
            let out = dec.decode(&llrs, pc.frozen(), None).unwrap();
            assert_eq!(out.candidates.len(), 8);
            assert_eq!(out.chosen_codeword, brute_force_ml(&pc, &llrs));
        }
    }
}

#[test]
fn final_metrics_track_likelihood() {
    // Exact numerics: metric(u) = −ln P(u|y) + const, so metric differences
    // equal correlation differences / 2.
    let pc = ProductCode::parse("rep(2,1) x SPC(4,3)").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let c = pc.encode_nonsystematic(&[1, 0, 1]).unwrap();
    let llrs = noisy_llrs(&c, 0.9, &mut rng);
    let out = scl_decode(&llrs, pc.frozen(), 8, None).unwrap();
    let corr = |u: &[u8]| {
        let mut c = u.to_vec();
        polar_transform(&mut c);
        c.iter().zip(&llrs).map(|(&b, &l)| (1.0 - 2.0 * f64::from(b)) * l / 2.0).sum::<f64>()
    };
    let base = &out.candidates[0];
    for cand in &out.candidates {
        let lhs = cand.metric - base.metric;
        let rhs = corr(&base.u) - corr(&cand.u);
        assert!((lhs - rhs).abs() < 1e-9, "{lhs} vs {rhs}");
    }
}

#[test]
fn candidates_are_codewords_and_sorted() {
    let pc = ProductCode::parse("eH(16,11) x SPC(8,7)").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut dec = SclDecoder::new(8, DecoderConfig::default()).unwrap();
    for _ in 0..50 {
        let info = random_info(pc.k(), &mut rng);
        let c = pc.encode_nonsystematic(&info).unwrap();
        let llrs = noisy_llrs(&c, 0.8, &mut rng);
        let out = dec.decode(&llrs, pc.frozen(), None).unwrap();
        assert!(out.candidates.len() <= 8);
        assert!(out.candidates.windows(2).all(|w| w[0].metric <= w[1].metric));
        for cand in &out.candidates {
            assert!((0..pc.n()).all(|i| pc.frozen().is_info(i) || cand.u[i] == 0));
        }
        assert!(pc.is_codeword(&out.chosen_codeword));
    }
}

#[test]
fn genie_dominates_and_reports_truth() {
    let pc = ProductCode::parse("eH(16,11) x SPC(8,7)").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut dec = SclDecoder::new(4, DecoderConfig::default()).unwrap();
    let (mut scl_errors, mut genie_errors) = (0, 0);
    for _ in 0..400 {
        let info = random_info(pc.k(), &mut rng);
        let c = pc.encode_nonsystematic(&info).unwrap();
        let mut truth_u = c.clone();
        polar_transform(&mut truth_u);
        let llrs = noisy_llrs(&c, 0.85, &mut rng);
        let out = dec.decode_with_genie(&llrs, pc.frozen(), None, &truth_u).unwrap();
        let genie = out.genie.unwrap();
        let scl_err = out.chosen_codeword != c;
        scl_errors += usize::from(scl_err);
        genie_errors += usize::from(!genie.truth_selected);
        // A genie error is always an SCL error.
        assert!(genie.truth_selected || scl_err);
        if genie.truth_in_list {
            let listed = out.candidates.iter().find(|x| x.u == truth_u).unwrap();
            assert_eq!(listed.metric.to_bits(), genie.truth_metric.to_bits());
        }
    }
    assert!(genie_errors <= scl_errors);
    assert!(scl_errors > 0, "operating point should produce errors");

    let llrs: Vec<f64> = pc.encode_nonsystematic(&vec![0; pc.k()]).unwrap().iter().map(|_| 20.0).collect();
    let out = dec.decode_with_genie(&llrs, pc.frozen(), None, &vec![0; pc.n()]).unwrap();
    let g = out.genie.unwrap();
    assert!(g.truth_in_list && g.truth_selected);
    assert_eq!(out.candidates[0].u, vec![0; pc.n()]);
}

#[test]
fn checker_selects_best_passing_candidate() {
    let pc = ProductCode::parse("eH(16,11) x SPC(8,7)").unwrap();
    let info_pos = pc.info_positions().to_vec();
    // Accept only u vectors with an even number of ones among the first 10 info bits.
    let checker = move |u: &[u8]| info_pos[..10].iter().map(|&p| u[p]).sum::<u8>() % 2 == 0;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut dec = SclDecoder::new(8, DecoderConfig::default()).unwrap();
    for _ in 0..200 {
        let mut info = random_info(pc.k(), &mut rng);
        let parity = info[..10].iter().sum::<u8>() % 2;
        info[0] ^= parity;
        let c = pc.encode_nonsystematic(&info).unwrap();
        let llrs = noisy_llrs(&c, 0.85, &mut rng);
        let out = dec.decode(&llrs, pc.frozen(), Some(&checker)).unwrap();
        let idx = out.chosen_index().unwrap();
        if out.any_passed() {
            assert_eq!(out.candidates[idx].passes, Some(true));
            assert!(out.candidates[..idx].iter().all(|c| c.passes == Some(false)));
        } else {
            assert_eq!(idx, 0);
        }
        let truth = out.candidates.iter().find(|x| {
            let mut cw = x.u.clone();
            polar_transform(&mut cw);
            cw == c
        });
        if let Some(t) = truth {
            assert!(out.candidates[idx].metric <= t.metric);
        }
    }
}

#[test]
fn larger_lists_do_not_lose_batches() {
    let pc = ProductCode::parse("eH(16,11) x SPC(8,7)").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let trials: Vec<(Vec<u8>, Vec<f64>)> = (0..600)
        .map(|_| {
            let info = random_info(pc.k(), &mut rng);
            let c = pc.encode_nonsystematic(&info).unwrap();
            let llrs = noisy_llrs(&c, 0.85, &mut rng);
            (c, llrs)
        })
        .collect();
    let errors: Vec<usize> = [1usize, 2, 4, 8]
        .iter()
        .map(|&l| {
            let mut dec = SclDecoder::new(l, DecoderConfig::default()).unwrap();
            trials
                .iter()
                .filter(|(c, llrs)| dec.decode(llrs, pc.frozen(), None).unwrap().chosen_codeword != *c)
                .count()
        })
        .collect();
    assert!(errors.windows(2).all(|w| w[1] <= w[0]), "{errors:?}");
}
