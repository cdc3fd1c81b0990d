//! Compares the sequential and parallel minor sweeps behind the last-column
//! resultant development, on the perturbed matrices of two golden systems.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dppe_core::matrix::{minor_determinants_par, minor_determinants_seq, Matrix};
use dppe_core::parse::parse_document;
use dppe_core::pertpoly::PertPoly;
use dppe_core::perturb::{default_phi, perturb};
use dppe_core::resultant::{build_ml, profile};

fn perturbed_block(doc: &str) -> Matrix<PertPoly> {
    let sys = parse_document(doc).unwrap().system;
    let prof = profile(&sys.h).unwrap();
    let phi = default_phi(&prof);
    let pert = perturb(&sys, &phi).unwrap();
    let (block, _) = build_ml(&pert.h, &pert.a, &prof);
    block
}

fn minor_sweep(c: &mut Criterion) {
    let three_eq = "field: Q\n\
                    params: u1, u2\n\
                    x1 = -u1 + u2 - u1' + u1'' + 4*u2' + 3*u2''\n\
                    x2 = -u2 - u1' + u2''\n\
                    x3 = -u2 - u1' - u2'\n";
    let four_eq = "field: Q\n\
                   params: u1, u2, u3\n\
                   x1 = 2*u1 - u3 + 3*u2' - u3'\n\
                   x2 = -2*u1 + u3 + u1' - 3*u2'' + u3''\n\
                   x3 = -2*u1 + u3 - 2*u2' - u3''\n\
                   x4 = -2*u1 + u3 - 3*u2' + 2*u3'\n";

    let mut group = c.benchmark_group("minor_sweep");
    for (name, doc) in [("13x12", three_eq), ("18x17", four_eq)] {
        let block = perturbed_block(doc);
        group.bench_with_input(BenchmarkId::new("sequential", name), &block, |b, m| {
            b.iter(|| minor_determinants_seq(m))
        });
        group.bench_with_input(BenchmarkId::new("parallel", name), &block, |b, m| {
            b.iter(|| minor_determinants_par(m))
        });
    }
    group.finish();
}

criterion_group!(benches, minor_sweep);
criterion_main!(benches);
