use criterion::{black_box, criterion_group, criterion_main, Criterion};

use mg_core::{sheaf, zmod, Hecke, MomentGraph, ParabolicModule, Setting, WeylGroup};

fn group(c: &mut Criterion) {
    c.bench_function("weyl group B3", |b| b.iter(|| WeylGroup::from_label(black_box("B3")).unwrap()));
    let g = WeylGroup::from_label("A3").unwrap();
    let pd = g.parabolic(&[]).unwrap();
    c.bench_function("bruhat graph A3", |b| b.iter(|| MomentGraph::bruhat(&g, &pd)));
}

fn bases(c: &mut Criterion) {
    let g = WeylGroup::from_label("A3").unwrap();
    c.bench_function("KL basis A3 longest", |b| {
        b.iter(|| {
            let h = Hecke::new(&g);
            h.kl_basis(g.longest())
        })
    });
    let pd = g.parabolic(&[1]).unwrap();
    let top = *pd.reps.last().unwrap();
    c.bench_function("Deodhar basis A3 J={2} top", |b| {
        b.iter(|| ParabolicModule::new(&g, &pd).deodhar_basis(top).unwrap())
    });
}

fn sheaves(c: &mut Criterion) {
    let g = WeylGroup::from_label("A3").unwrap();
    let pd = g.parabolic(&[]).unwrap();
    let set = Setting::new(&g, &pd);
    let w = set.vertex(g.parse_word("2 1 3 2").unwrap()).unwrap();
    c.bench_function("BMP sheaf A3 2132", |b| b.iter(|| sheaf::bmp_sheaf(&set.graph, w, None).unwrap()));
    let (_, m) = zmod::bmp_module(&set, g.parse_word("2 1 3 2").unwrap()).unwrap();
    c.bench_function("subquotient ranks A3 2132", |b| b.iter(|| zmod::subquotient_ranks(&set.graph, &m).unwrap()));

    let g = WeylGroup::from_label("B2").unwrap();
    let pd = g.parabolic(&[]).unwrap();
    let set = Setting::new(&g, &pd);
    let m = (0..4).fold(zmod::module_be(&set), |m, k| zmod::translate(&set, k % 2, &m).unwrap());
    c.bench_function("translation B2 rank 16 -> 32", |b| b.iter(|| zmod::translate(&set, 0, &m).unwrap()));
}

criterion_group!(benches, group, bases, sheaves);
criterion_main!(benches);
