use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;
use rankopt::arrangement::{Arrangement, Cell};
use rankopt::ccc_solver::{minimize_ccc, CccOptions};
use rankopt::ellipsoid_oracle::Ellipsoid;
use rankopt::exact_numeric::diophantine_approx;
use rankopt::gen_solver::{minimize_gen, GenOptions};
use rankopt::lp_exact::LinearProgram;
use rankopt::Rational;
use rankopt_bench::{centred_scores, dataset, rational};

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_cells");
    for &(n, p) in &[(6, 1), (6, 2), (8, 2), (6, 3)] {
        let d = dataset(n, p, 1);
        let arr = Arrangement::new(&d);
        group.bench_with_input(BenchmarkId::from_parameter(format!("n{n}_p{p}")), &arr, |b, arr| {
            b.iter(|| {
                let mut count = 0usize;
                arr.enumerate_cells(0, &mut |_: &Cell| count += 1).unwrap();
                black_box(count)
            })
        });
    }
    group.finish();
}

fn gen(c: &mut Criterion) {
    let d = dataset(7, 2, 2);
    let a = centred_scores(7);
    c.bench_function("minimize_gen/n7_p2", |b| {
        b.iter(|| black_box(minimize_gen(&d, &a, &GenOptions::default()).unwrap()))
    });
}

fn ccc(c: &mut Criterion) {
    let mut group = c.benchmark_group("minimize_ccc");
    group.sample_size(10);
    let d = dataset(4, 1, 3);
    let a = centred_scores(4);
    for fast in [false, true] {
        let options = CccOptions {
            fast,
            ..CccOptions::default()
        };
        let name = if fast { "n4_p1_fast" } else { "n4_p1" };
        group.bench_function(name, |b| b.iter(|| black_box(minimize_ccc(&d, &a, &options).unwrap())));
    }
    group.finish();
}

fn lp(c: &mut Criterion) {
    // small dense program of the size seen per cell
    let mut program = LinearProgram::maximize(vec![rational(3, 1), rational(-2, 1), rational(1, 2)]);
    for k in 0..6i64 {
        program.le(
            vec![rational(k - 2, 1), rational(1, k + 1), rational(2 - k, 3)],
            rational(k + 4, 1),
        );
    }
    c.bench_function("lp_solve/6x3", |b| b.iter(|| black_box(program.solve())));
}

fn diophantine(c: &mut Criterion) {
    let m = BigInt::from(1u64 << 40);
    let target = Rational::new(BigInt::from(123_456_789_011u64), BigInt::from(987_654_321_017u64));
    let gamma = &target + Rational::new(BigInt::from(1), BigInt::from(1u128 << 90));
    c.bench_function("diophantine/2^40", |b| b.iter(|| black_box(diophantine_approx(&gamma, &m))));
}

fn cut(c: &mut Criterion) {
    let mut group = c.benchmark_group("central_cut");
    for &prec in &[256usize, 2048] {
        let e = Ellipsoid::ball(3, &rational(1, 1), prec);
        let s = [rational(1, 1), rational(-2, 3), rational(5, 7)];
        group.bench_with_input(BenchmarkId::from_parameter(prec), &e, |b, e| {
            b.iter(|| black_box(e.central_cut(&s).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, enumeration, gen, ccc, lp, diophantine, cut);
criterion_main!(benches);
