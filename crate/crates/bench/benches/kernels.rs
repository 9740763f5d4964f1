use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use sperner_core::sampling::SpernerSampler;
use sperner_core::{
    complete_fragment, decide_membership, enumerate_msf, is_maximal, is_maximal_naive, EnumTask,
    Family, Fragment, GroundSize, Limits, PrefixFamilySpec, Subset,
};

fn membership(c: &mut Criterion) {
    let spec = PrefixFamilySpec::new(15, 2).unwrap();
    let subsets: Vec<Subset> = (0..1u64 << 15).map(Subset::from_bits).collect();
    c.bench_function("decide_membership/n15_all", |b| {
        b.iter(|| {
            subsets
                .iter()
                .filter(|s| decide_membership(**s, &spec))
                .count()
        })
    });
}

fn maximality(c: &mut Criterion) {
    let mut sampler = SpernerSampler::new(1);
    let samples: Vec<_> = (0..32).map(|_| sampler.sample(10, 4).unwrap()).collect();
    let mut group = c.benchmark_group("maximality_n10");
    group.bench_function("layered", |b| {
        b.iter(|| samples.iter().filter(|t| is_maximal(t)).count())
    });
    group.bench_function("naive", |b| {
        b.iter(|| {
            samples
                .iter()
                .filter(|t| is_maximal_naive(t).unwrap())
                .count()
        })
    });
    group.finish();
}

fn completion(c: &mut Criterion) {
    let mut group = c.benchmark_group("complete_singleton");
    for n in [9usize, 13, 17] {
        let ground = GroundSize::new(n).unwrap();
        let k = n / 2;
        let a = Subset::from_elements(0..=k);
        let frag = Fragment::new(Family::new(ground, [a]).unwrap(), 0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &frag, |b, f| {
            b.iter(|| complete_fragment(black_box(f)).union.len())
        });
    }
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let task = EnumTask::families(6, 2).unwrap();
    c.bench_function("enumerate_msf/n6_k2", |b| {
        b.iter(|| enumerate_msf(&task, &Limits::default(), |_| {}).unwrap())
    });
}

criterion_group!(benches, membership, maximality, completion, enumeration);
criterion_main!(benches);
