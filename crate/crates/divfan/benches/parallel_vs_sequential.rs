use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use divfan::constructions::{cotangent_generators, danilov_gizatullin_generators, DGParams, FanData};
use divfan::fan::generate_fan;
use divfan::io::CheckReport;
use divfan::par;

fn closure(c: &mut Criterion) {
    let cases = [
        ("dg_2_3", danilov_gizatullin_generators(&DGParams::new(2, 3)).unwrap()),
        ("cotangent_p2", cotangent_generators(&FanData::p2()).unwrap()),
    ];
    let mut group = c.benchmark_group("generate_fan");
    group.sample_size(10);
    for (name, gens) in &cases {
        for sequential in [false, true] {
            let mode = if sequential { "sequential" } else { "parallel" };
            group.bench_with_input(BenchmarkId::new(mode, name), gens, |b, gens| {
                par::set_sequential(sequential);
                b.iter(|| generate_fan(gens).unwrap());
            });
        }
    }
    group.finish();
    par::set_sequential(false);
}

fn report(c: &mut Criterion) {
    let gens = danilov_gizatullin_generators(&DGParams::new(2, 3)).unwrap();
    let mut group = c.benchmark_group("check_report");
    group.sample_size(10);
    for sequential in [false, true] {
        let mode = if sequential { "sequential" } else { "parallel" };
        group.bench_function(mode, |b| {
            par::set_sequential(sequential);
            b.iter(|| CheckReport::run(&gens, 3).unwrap());
        });
    }
    group.finish();
    par::set_sequential(false);
}

criterion_group!(benches, closure, report);
criterion_main!(benches);
