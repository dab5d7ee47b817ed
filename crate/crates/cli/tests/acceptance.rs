//! One line per acceptance criterion; exits nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use chiral_tduality::cdr::Cdr;
use chiral_tduality::coeffring::BasePatch;
use chiral_tduality::parse::Parser;
use chiral_tduality::sample::{Sampler, Shape};
use chiral_tduality::tduality::DualityPair;
use chiral_tduality::twisted::BundleScene;
use chiral_tduality::vertex::{State, VertexAlgebra};
use chiral_tduality::Q;
use chiralt::checks;
use chiralt::{Check, Settings, Which};

fn settings(samples: usize) -> Settings {
    let mut s = Settings::new(BundleScene::std2d());
    s.samples = samples;
    s
}

fn pick(checks: Vec<Check>, prefixes: &[&str]) -> Vec<Check> {
    checks.into_iter().filter(|c| prefixes.iter().any(|p| c.name.starts_with(p))).collect()
}

fn summary(checks: &[Check]) -> (bool, String) {
    match checks.iter().find(|c| !c.passed) {
        Some(c) => (false, format!("{} {}", c.name, c.detail)),
        None => (!checks.is_empty(), format!("{} checks", checks.len())),
    }
}

fn topological() -> (bool, String) {
    summary(&checks::topological_ranks())
}

fn cdr_differential() -> (bool, String) {
    summary(&pick(checks::d2(&settings(300)), &["d2.cdr."]))
}

fn untwisting() -> (bool, String) {
    summary(&checks::untwist(&settings(200)))
}

fn exotic_consistency() -> (bool, String) {
    summary(&pick(checks::opes(&settings(0)), &["opes.exotic.consistency", "opes.exotic.relations"]))
}

fn square_zero() -> (bool, String) {
    summary(&pick(checks::d2(&settings(500)), &["d2.exotic."]))
}

fn duality() -> (bool, String) {
    summary(&checks::phi(&settings(200)))
}

fn round_trips() -> (bool, String) {
    summary(&checks::roundtrip(&settings(200)))
}

fn weight_zero() -> (bool, String) {
    let c = checks::weight0(&settings(200));
    let (ok, detail) = summary(&c);
    let logged = c.iter().find(|c| c.name == "weight0.positive-counterexample").map(|c| c.detail.clone()).unwrap_or_default();
    (ok && logged.starts_with("counterexample"), format!("{detail}; {logged}"))
}

fn homotopy() -> (bool, String) {
    summary(&checks::homotopy(&settings(200)))
}

fn random_state(alg: &VertexAlgebra, sm: &mut Sampler) -> State {
    let mut out = State::zero();
    for k in 0..1 + sm.rng_index(3) {
        out.add_scaled(&sm.monomial(alg, Shape::default()), Q::new(sm.rng_range(-5, 5) as i128, k as i128 + 1));
    }
    out
}

fn determinism_and_parsing() -> (bool, String) {
    let run = || Command::new(env!("CARGO_BIN_EXE_chiralt")).args(["suite", "all", "--seed", "5", "--format", "lines"]).output().unwrap();
    let (a, b) = (run(), run());
    if a.stdout != b.stdout || a.status.code() != Some(0) {
        return (false, "reports differ between runs".into());
    }

    let pair = DualityPair::new(&BundleScene::std2d());
    let cdr = Cdr::with_circle(BasePatch::standard(2), "t");
    let algebras = [cdr.algebra(), pair.twisted().algebra(), pair.exotic().algebra()];
    let mut sm = Sampler::new(10);
    for i in 0..500 {
        let alg = algebras[i % 3];
        let x = random_state(alg, &mut sm);
        let text = alg.show(&x);
        match Parser::new(alg).parse(&text) {
            Ok(y) if y == x && alg.show(&y) == text => {}
            _ => return (false, format!("round trip fails on {text}")),
        }
    }

    let mut mutations = 0;
    let std2d = BundleScene::std2d();
    let sizes = [
        (Which::Cdr, Cdr::new(std2d.patch().clone()).algebra().table().count()),
        (Which::Twisted, pair.twisted().algebra().table().count()),
        (Which::Exotic, pair.exotic().algebra().table().count()),
    ];
    for (which, size) in sizes {
        for n in 0..size {
            let mut s = settings(0);
            s.algebra = which;
            s.mutate = Some(n);
            if checks::opes(&s).iter().all(|c| c.passed) {
                return (false, format!("mutation {n} of {which:?} not detected"));
            }
            mutations += 1;
        }
    }
    let cli = Command::new(env!("CARGO_BIN_EXE_chiralt")).args(["check", "opes", "--algebra", "exotic", "--mutate-entry", "0"]).output().unwrap();
    (cli.status.code() == Some(1), format!("identical reports; 500 round trips; {mutations} mutations detected"))
}

fn main() {
    let criteria: [(&str, fn() -> (bool, String), u64); 10] = [
        ("topological algebra", topological, 5),
        ("cdr differential", cdr_differential, 30),
        ("untwisting", untwisting, 10),
        ("exotic consistency", exotic_consistency, 30),
        ("square zero", square_zero, 300),
        ("duality isomorphism", duality, 60),
        ("round trips", round_trips, 60),
        ("weight-zero agreement", weight_zero, 60),
        ("trivial-bundle homotopy", homotopy, 60),
        ("determinism and parsing", determinism_and_parsing, 30),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = run();
        let took = start.elapsed();
        let ok = ok && took <= Duration::from_secs(budget);
        println!("criterion {:>2} {} {name}: {detail} ({:.2}s)", i + 1, if ok { "PASS" } else { "FAIL" }, took.as_secs_f64());
        if !ok {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
