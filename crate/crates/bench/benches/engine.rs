use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use regcat_core::category::double_count;
use regcat_core::grassmann::SuperDim;
use regcat_core::monoidal::{search_ybe_solutions, ObstructionAssignment};
use regcat_core::random::{random_category, random_graded_supermatrix, random_invertible_atlas, seeded};
use regcat_core::{
    berezinian, build_regularization, generalized_inverses, obstructedness_degree, verify_2category_axioms,
    FinCategory, FinObject, MonoidalStructure, Morphism, RegularityMode, SearchBounds,
};

fn morphisms(c: &mut Criterion) {
    let f = Morphism::fin_map(3, 3, vec![0, 0, 2]).unwrap();
    let bounds = SearchBounds::default();
    c.bench_function("generalized inverses 3→3", |b| {
        b.iter(|| generalized_inverses(&f, &bounds).unwrap())
    });
}

fn atlases(c: &mut Criterion) {
    let mut rng = seeded(1);
    let atlas = random_invertible_atlas(&mut rng, 5);
    c.bench_function("obstructedness degree, 5 charts", |b| {
        b.iter(|| obstructedness_degree(&atlas, Some(5)))
    });
}

fn berezinians(c: &mut Criterion) {
    let mut rng = seeded(4);
    c.bench_function("Berezinian (2|2), 4 generators", |b| {
        b.iter_batched(
            || random_graded_supermatrix(&mut rng, SuperDim::new(2, 2), 4),
            |m| berezinian(&m).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn regularization(c: &mut Criterion) {
    let bounds = SearchBounds::default();
    let mode = RegularityMode::AllRotations;
    let four = FinCategory::full(vec![("X", FinObject::set(2))], &bounds).unwrap();
    c.bench_function("regularize four-map category, n = 2", |b| {
        b.iter(|| verify_2category_axioms(&build_regularization(&four, 2, mode, &bounds).unwrap()))
    });
    let cat = random_category(&mut seeded(2024));
    c.bench_function("double count, random category, n = 3", |b| {
        b.iter(|| double_count(&cat, 3, mode, &bounds).unwrap())
    });
}

fn ybe(c: &mut Criterion) {
    let m = MonoidalStructure::cartesian();
    let e = ObstructionAssignment::identities();
    let bounds = SearchBounds::default();
    c.bench_function("YBE search on a two-point set", |b| {
        b.iter(|| search_ybe_solutions(&m, &e, &FinObject::set(2), 2, &bounds).unwrap())
    });
}

criterion_group!(benches, morphisms, atlases, berezinians, regularization, ybe);
criterion_main!(benches);
