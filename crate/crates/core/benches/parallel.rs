//! Benchmarks for the data-parallel inner loops.
//!
//! Each benchmark name ends in `par` or `seq` depending on whether the
//! crate was built with the `parallel` feature, so the two modes can be
//! compared from their saved baselines:
//!
//!   cargo bench -p carlitz-core
//!   cargo bench -p carlitz-core --no-default-features
//!
//! The numeric results are identical either way; only wall time differs.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use carlitz_core::binomial::{
    builtin, check_binomial, check_multiplicative, gen_function, BuiltinSeq,
};
use carlitz_core::carlitz::{carlitz_gen, is_in_carlitz_image, LinearSeq};
use carlitz_core::divided::DividedRing;
use carlitz_core::explorer::{enumerate, EnumerateConfig};
use carlitz_core::field::Fq;
use carlitz_core::poly::{PolyRing, Var};
use carlitz_core::ring::Ring;

#[cfg(feature = "parallel")]
const MODE: &str = "par";
#[cfg(not(feature = "parallel"))]
const MODE: &str = "seq";

fn xring(q: u64) -> PolyRing<Fq> {
    PolyRing::new(Fq::from_order(q).unwrap(), Var::X)
}

fn bench_check_binomial(c: &mut Criterion) {
    let ring = xring(2);
    let seq = builtin(&ring, BuiltinSeq::DigitSum { q: 2 }, 192);
    c.bench_function(&format!("check_binomial/digitsum_n192/{MODE}"), |b| {
        b.iter(|| {
            assert!(check_binomial(black_box(&seq)).passed());
        })
    });
}

fn bench_check_multiplicative(c: &mut Criterion) {
    let ring = xring(3);
    let e = LinearSeq::new(
        ring.clone(),
        vec![ring.gen(), ring.monomial(ring.base().one(), 3)],
    )
    .unwrap();
    let f = carlitz_gen(&e, 96);
    c.bench_function(&format!("check_multiplicative/carlitz_n96/{MODE}"), |b| {
        b.iter(|| {
            assert!(check_multiplicative(black_box(&ring), black_box(&f)).passed());
        })
    });
}

fn bench_dp_mul_dense(c: &mut Criterion) {
    let field = Fq::prime(3).unwrap();
    let dp = DividedRing::new(field.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let trunc = 2048usize;
    let dense = |rng: &mut ChaCha8Rng| {
        let mut f = dp.zero(trunc);
        for i in 0..trunc as u64 {
            dp.set_coeff(&mut f, i, field.from_u64(rng.gen_range(0..3)));
        }
        f
    };
    let f = dense(&mut rng);
    let g = dense(&mut rng);
    c.bench_function(&format!("dp_mul/dense_scalar_trunc2048/{MODE}"), |b| {
        b.iter(|| dp.mul(black_box(&f), black_box(&g)))
    });
}

fn bench_image_membership(c: &mut Criterion) {
    let ring = xring(2);
    let e = LinearSeq::new(
        ring.clone(),
        vec![
            ring.gen(),
            ring.monomial(ring.base().one(), 2),
            ring.monomial(ring.base().one(), 4),
        ],
    )
    .unwrap();
    let f = carlitz_gen(&e, 256);
    c.bench_function(&format!("is_in_carlitz_image/n256/{MODE}"), |b| {
        b.iter(|| {
            assert!(is_in_carlitz_image(black_box(&ring), black_box(&f), 2)
                .unwrap()
                .is_yes());
        })
    });
}

fn bench_enumerate(c: &mut Criterion) {
    let cfg = EnumerateConfig {
        p: 2,
        n: 5,
        degree_bound: 3,
        budget: usize::MAX,
        parallel: cfg!(feature = "parallel"),
    };
    c.bench_function(&format!("enumerate/p2_n5_d3/{MODE}"), |b| {
        b.iter(|| enumerate(black_box(&cfg)).unwrap().sequences.len())
    });
}

fn bench_gen_function_pow(c: &mut Criterion) {
    let ring = xring(2);
    let seq = builtin(&ring, BuiltinSeq::DigitSum { q: 2 }, 512);
    let dp = DividedRing::new(ring.clone());
    let f = gen_function(&seq);
    c.bench_function(&format!("dp_pow/p_digitsum_n512/{MODE}"), |b| {
        b.iter(|| {
            assert_eq!(dp.pow(black_box(&f), 2), dp.one(512));
        })
    });
}

criterion_group!(
    benches,
    bench_check_binomial,
    bench_check_multiplicative,
    bench_dp_mul_dense,
    bench_image_membership,
    bench_enumerate,
    bench_gen_function_pow
);
criterion_main!(benches);
