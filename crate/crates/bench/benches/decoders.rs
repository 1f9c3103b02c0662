use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rmprod::bp::{build_trellis, BpDecoder};
use rmprod::codes::{crc_code, polar_transform, ComponentCode, Polynomial};
use rmprod::concat::{build_concat, encode_concat, Interleaver};
use rmprod::scl::{DecoderConfig, SclDecoder};
use rmprod::sim::biawgn_llrs;
use rmprod::ProductCode;

const SNR_DB: f64 = 3.5;

fn product() -> ProductCode {
    ProductCode::parse("eH(16,11) x SPC(8,7)").unwrap()
}

fn noisy_words(pc: &ProductCode, count: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..count)
        .map(|_| {
            let m: Vec<u8> = (0..pc.k()).map(|_| rng.random_range(0..2u8)).collect();
            let c = pc.encode_systematic_flat(&m).unwrap();
            biawgn_llrs(&c, SNR_DB, pc.rate(), &mut rng).unwrap()
        })
        .collect()
}

fn scl(c: &mut Criterion) {
    let pc = product();
    let words = noisy_words(&pc, 64);
    let mut group = c.benchmark_group("scl_128_77");
    group.throughput(Throughput::Elements(words.len() as u64));
    for l in [1, 4, 8, 32] {
        let mut dec = SclDecoder::new(l, DecoderConfig::default()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(l), &words, |b, words| {
            b.iter(|| {
                for w in words {
                    black_box(dec.decode(w, pc.frozen(), None).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn bp(c: &mut Criterion) {
    let pc = product();
    let words = noisy_words(&pc, 64);
    let mut dec = BpDecoder::new(&pc).unwrap();
    let mut group = c.benchmark_group("bp_128_77");
    group.throughput(Throughput::Elements(words.len() as u64));
    group.bench_function("100_iterations", |b| {
        b.iter(|| {
            for w in &words {
                black_box(dec.decode(w, 100).unwrap());
            }
        })
    });
    group.finish();
}

fn bcjr(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut group = c.benchmark_group("trellis_siso");
    for name in ["SPC(8,7)", "eH(16,11)", "RM(3,5)"] {
        let code = ComponentCode::parse(name).unwrap();
        let t = build_trellis(&code).unwrap();
        let llrs: Vec<f64> = (0..code.n()).map(|_| rng.random_range(-4.0..4.0)).collect();
        group.bench_function(name, |b| b.iter(|| black_box(t.siso(black_box(&llrs)).unwrap())));
    }
    group.finish();
}

fn encoders(c: &mut Criterion) {
    let pc = product();
    let outer = crc_code(&Polynomial::parse("0x89").unwrap(), 70).unwrap();
    let cc = build_concat(outer, Interleaver::random(77, 1), pc.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m77: Vec<u8> = (0..77).map(|_| rng.random_range(0..2u8)).collect();
    let m70 = m77[..70].to_vec();
    let mut group = c.benchmark_group("encode");
    group.bench_function("hadamard_128", |b| {
        b.iter(|| {
            let mut u = black_box(vec![1u8; 128]);
            polar_transform(&mut u);
            u
        })
    });
    group.bench_function("systematic_128_77", |b| b.iter(|| pc.encode_systematic_flat(black_box(&m77)).unwrap()));
    group.bench_function("concat_128_70", |b| b.iter(|| encode_concat(&cc, black_box(&m70)).unwrap()));
    group.finish();
}

criterion_group!(benches, scl, bp, bcjr, encoders);
criterion_main!(benches);
