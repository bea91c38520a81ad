use std::hint::black_box;

use bia_core::dof::{appendix_slack_row, asymptotic_check, dof_report};
use bia_core::verify::verify_realization;
use bia_core::{draw_channel, Construction, ConstructionMode, Representation, SchemeParams};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("construct");
    for (k, r, mode) in [
        (5, 2, ConstructionMode::PaperExact),
        (6, 2, ConstructionMode::PaperExact),
        (7, 3, ConstructionMode::Padded),
        (10, 3, ConstructionMode::Padded),
    ] {
        let params = SchemeParams::derive(k, Some(r), mode).unwrap();
        group.bench_with_input(
            BenchmarkId::new(mode.as_str(), format!("K{k}r{r}")),
            &params,
            |b, &p| b.iter(|| Construction::new(black_box(p)).unwrap()),
        );
    }
    group.finish();
}

fn verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(20);
    for (k, r, mode) in [
        (5, 2, ConstructionMode::PaperExact),
        (5, 2, ConstructionMode::Padded),
        (7, 3, ConstructionMode::Padded),
    ] {
        let params = SchemeParams::derive(k, Some(r), mode).unwrap();
        let construction = Construction::new(params).unwrap();
        for repr in [Representation::ExactRational, Representation::Floating] {
            let ch = draw_channel(&params, 7, repr);
            let id = BenchmarkId::new(format!("{mode}/{repr:?}"), format!("K{k}r{r}"));
            group.bench_with_input(id, &ch, |b, ch| {
                b.iter(|| verify_realization(&construction, black_box(ch)).unwrap())
            });
        }
    }
    group.finish();
}

fn dof(c: &mut Criterion) {
    c.bench_function("dof/report K=1000", |b| b.iter(|| dof_report(black_box(1000)).unwrap()));
    c.bench_function("dof/slack row K=1000", |b| {
        b.iter(|| appendix_slack_row(black_box(1000)).unwrap())
    });
    let ks: Vec<u64> = (1..=10_000).collect();
    c.bench_function("dof/table K=1..10^4", |b| {
        b.iter(|| asymptotic_check(black_box(&ks)).unwrap())
    });
}

criterion_group!(benches, construction, verification, dof);
criterion_main!(benches);
