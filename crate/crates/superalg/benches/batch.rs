//! Compares sequential and data-parallel evaluation of a batch of decision
//! problems (the same code paths the CLI uses for array inputs).

use criterion::{criterion_group, criterion_main, Criterion};

use superalg::certificate::{AlgebraSpec, FieldSpec, RecipeSpec};
use superalg::cli::decide_specs_sequential;

fn spec(field: FieldSpec, algebra: RecipeSpec) -> AlgebraSpec {
    AlgebraSpec {
        schema: "v1".into(),
        field,
        algebra,
        extension: None,
    }
}

fn first_kind_batch() -> Vec<AlgebraSpec> {
    let mut specs = Vec::new();
    for n in 1..=3usize {
        for m in 1..=3usize {
            specs.push(spec(FieldSpec::Q, RecipeSpec::Matrix { n, m, inner: None }));
        }
    }
    for (a, b) in [(-1, -1), (1, 1), (-1, 2), (2, 3), (-2, -3), (1, -1)] {
        specs.push(spec(
            FieldSpec::Q,
            RecipeSpec::Gquat {
                a: a.to_string(),
                b: b.to_string(),
            },
        ));
    }
    for coeffs in [vec![1i64, -1], vec![1, 1, 2], vec![2, -3, 1]] {
        specs.push(spec(
            FieldSpec::Q,
            RecipeSpec::Clifford {
                coeffs: coeffs.iter().map(|c| c.to_string()).collect(),
            },
        ));
    }
    specs
}

fn second_kind_batch() -> Vec<AlgebraSpec> {
    let mus = [
        "0+1*sqrt(-1)",
        "0+2*sqrt(-1)",
        "0+3*sqrt(-1)",
        "1+1*sqrt(-1)",
        "2+1*sqrt(-1)",
        "3+2*sqrt(-1)",
        "1",
        "2",
        "3",
        "5",
        "-1+2*sqrt(-1)",
        "4+0*sqrt(-1)",
    ];
    mus.iter()
        .map(|mu| {
            spec(
                FieldSpec::Qsqrt(-1),
                RecipeSpec::Quadratic { a: (*mu).into() },
            )
        })
        .collect()
}

fn assert_all_ok(results: &[Result<superalg::certificate::CertificateDocument, String>]) {
    for r in results {
        assert!(r.is_ok(), "batch member failed: {:?}", r);
    }
}

fn bench_batches(c: &mut Criterion) {
    let fk = first_kind_batch();
    let sk = second_kind_batch();

    let mut group = c.benchmark_group("batch");
    group.sample_size(10);

    group.bench_function("first-kind sequential", |b| {
        b.iter(|| assert_all_ok(&decide_specs_sequential("first-kind", &fk)))
    });
    #[cfg(feature = "parallel")]
    group.bench_function("first-kind parallel", |b| {
        b.iter(|| assert_all_ok(&superalg::cli::decide_specs("first-kind", &fk, None)))
    });

    group.bench_function("second-kind sequential", |b| {
        b.iter(|| assert_all_ok(&decide_specs_sequential("second-kind", &sk)))
    });
    #[cfg(feature = "parallel")]
    group.bench_function("second-kind parallel", |b| {
        b.iter(|| assert_all_ok(&superalg::cli::decide_specs("second-kind", &sk, None)))
    });

    group.finish();
}

criterion_group!(benches, bench_batches);
criterion_main!(benches);
