use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ffp_core::carlitz::carlitz_product_formula;
use ffp_core::lfunctions::{z_v_rational, ClassFunctionQ, LocalGaloisDatum};
use ffp_core::local::{solve_frobenius_recursion, LocalFieldTower};
use ffp_core::shtuka::{omega_period, CMAlgebra, Embedding};
use ffp_core::TowerConfig;

fn ell_recursion(c: &mut Criterion) {
    let mut g = c.benchmark_group("ell_recursion");
    for q in [2u64, 3] {
        g.bench_with_input(BenchmarkId::from_parameter(q), &q, |b, &q| {
            b.iter(|| {
                let t = LocalFieldTower::new(q, TowerConfig::default()).unwrap();
                let z = t.z();
                solve_frobenius_recursion(&t, &z, q, 2).unwrap()
            })
        });
    }
    g.finish();
}

fn omega(c: &mut Criterion) {
    let mut g = c.benchmark_group("omega_period");
    for (q, f, e) in [(2u64, 2u32, 3u64), (3, 2, 4)] {
        let cm = CMAlgebra::tame(q, f, e).unwrap();
        let phi = Embedding::new(0, 0, 0);
        let psi = Embedding::new(0, 0, 1);
        g.bench_function(format!("q{q}_f{f}_e{e}"), |b| {
            b.iter(|| omega_period(&cm, &phi, &psi, 3, TowerConfig::default()).unwrap())
        });
    }
    g.finish();
}

fn zeta(c: &mut Criterion) {
    let d = LocalGaloisDatum::tame(3, 2, 4, TowerConfig::default()).unwrap();
    let a = ClassFunctionQ::trivial(&d);
    c.bench_function("z_v_rational/q3_f2_e4", |b| b.iter(|| z_v_rational(&d, &a).unwrap()));
}

fn product_formula(c: &mut Criterion) {
    let mut g = c.benchmark_group("carlitz_product_formula");
    for q in [2u64, 3, 4, 5] {
        g.bench_with_input(BenchmarkId::from_parameter(q), &q, |b, &q| {
            b.iter(|| carlitz_product_formula(q, 2, 2, TowerConfig::default()).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, ell_recursion, omega, zeta, product_formula);
criterion_main!(benches);
