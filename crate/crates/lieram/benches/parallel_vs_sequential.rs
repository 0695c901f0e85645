use criterion::{criterion_group, criterion_main, Criterion};
use lieram::admissible::{self, SelectionOverrides};
use lieram::par;
use lieram::params::desk;
use lieram::verify;
use std::hint::black_box;

fn modes(c: &mut Criterion, name: &str, f: impl Fn()) {
    let mut g = c.benchmark_group(name);
    g.sample_size(10);
    for (label, seq) in [("parallel", false), ("sequential", true)] {
        par::set_sequential(seq);
        g.bench_function(label, |b| b.iter(&f));
    }
    par::set_sequential(false);
    g.finish();
}

fn benches(c: &mut Criterion) {
    let c3 = desk::c3();
    let ov = SelectionOverrides {
        n_star: Some(9),
        ..Default::default()
    };
    let sel = admissible::select(&c3, &ov).unwrap();
    modes(c, "enumerate_c3_nstar9", || {
        black_box(admissible::enumerate_a0(&c3, &sel));
    });
    modes(c, "bch_group_c3", || {
        black_box(verify::bch_group(1));
    });
    modes(c, "filtration_c2", || {
        black_box(verify::filtration_on(&desk::c2()));
    });
}

criterion_group!(group, benches);
criterion_main!(group);
