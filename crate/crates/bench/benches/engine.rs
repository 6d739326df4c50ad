use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use critexp::explore::min_exponent_search;
use critexp::{build_cr, critical_exponent, make_schedule, parse_rational, thue_morse_prefix, ExtensionState, FiniteWord, SearchConfig};

fn exponent(c: &mut Criterion) {
    let mut group = c.benchmark_group("critical_exponent");
    for len in [256usize, 1024, 4096] {
        let w = thue_morse_prefix(len);
        group.bench_with_input(BenchmarkId::from_parameter(len), &w, |b, w| b.iter(|| critical_exponent(black_box(w))));
    }
    group.finish();
}

fn extension(c: &mut Criterion) {
    let w = thue_morse_prefix(4096);
    let state = ExtensionState::from_word(&w);
    c.bench_function("extension_push_4096", |b| b.iter(|| black_box(&state).extend(0).unwrap().exponent()));
}

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("min_exponent_search");
    let empty = FiniteWord::empty(2);
    for d in [12usize, 16] {
        for parallel in [false, true] {
            let config = SearchConfig::default().parallel(parallel);
            let id = BenchmarkId::new(if parallel { "parallel" } else { "sequential" }, d);
            group.bench_with_input(id, &d, |b, &d| b.iter(|| min_exponent_search(&empty, d, &config).unwrap()));
        }
    }
    group.finish();
}

fn digits(c: &mut Criterion) {
    let point = build_cr(&make_schedule(&parse_rational("5/2").unwrap(), 4).unwrap()).unwrap();
    c.bench_function("cr_prefix_65536", |b| b.iter(|| point.prefix(black_box(1 << 16))));
}

criterion_group!(benches, exponent, extension, search, digits);
criterion_main!(benches);
