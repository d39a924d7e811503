use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use masep_algebra::par::Exec;
use masep_algebra::rat;
use masep_hecke::{nonsymmetric_e_with, HeckeContext, HeckeParams};
use masep_lattice::{IdentityName, ModelSpec, ParamPoint, Rates, Verifier};
use masep_sim::{simulate, SimConfig};

fn point() -> ParamPoint {
    ParamPoint::new(rat(1, 3), rat(-2, 1), rat(-3, 1), rat(1, 5), rat(1, 7))
}

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn identities(c: &mut Criterion) {
    let spec = ModelSpec::new(3, 1, point()).unwrap();
    let ids = [
        IdentityName::ExchBulk,
        IdentityName::Commute,
        IdentityName::DualForm,
    ];
    let mut g = c.benchmark_group("verify_n3_r1");
    g.sample_size(10);
    for (name, exec) in MODES {
        let v = Verifier::new(&spec).unwrap().with_exec(exec);
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| v.verify_many(&ids, &[1, 2]).unwrap())
        });
    }
    g.finish();
}

fn eigenfunction(c: &mut Criterion) {
    let hp = HeckeParams::new(rat(1, 3), rat(2, 1), rat(3, 1), rat(-1, 5), rat(-1, 7));
    let ctx = HeckeContext::new(3, hp, rat(7, 3)).unwrap();
    let mut g = c.benchmark_group("nonsymmetric_e_n3");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| nonsymmetric_e_with(&ctx, &[-2, 1, 2], exec).unwrap())
        });
    }
    g.finish();
}

fn simulation(c: &mut Criterion) {
    let spec = ModelSpec::new(5, 1, point()).unwrap();
    let rt = Rates {
        alpha: rat(1, 1),
        beta: rat(1, 1),
        gamma: rat(1, 2),
        delta: rat(1, 2),
        t: rat(1, 2),
    };
    let mut g = c.benchmark_group("simulate_n5");
    g.sample_size(10);
    for (name, exec) in MODES {
        let cfg = SimConfig::with_rates(&spec, &rt, &[1, 1, 1, 0, 0])
            .unwrap()
            .events(200_000)
            .trajectories(8)
            .exec(exec);
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| simulate(&cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, identities, eigenfunction, simulation);
criterion_main!(benches);
