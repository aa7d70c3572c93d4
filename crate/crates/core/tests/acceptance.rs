//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Set `QUASIDET_BLESS=1` to rewrite the golden CLI outputs.

mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use quasidet::funmatrix::MapMatrix;
use quasidet::scalar::int;
use quasidet::solver::{self, Classification, LinearSystem};
use quasidet::{builtin_algebra, validate_algebra, Error, LinMap, RatMatrix};
use rand::seq::SliceRandom;
use rand::Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn validation() -> Check {
    let start = Instant::now();
    for name in quasidet::algebra::BUILTIN_NAMES {
        let alg = builtin_algebra(name).map_err(|e| format!("{name}: {e}"))?;
        ensure(validate_algebra(alg.constants()).is_ok(), || format!("{name} rejected"))?;
    }
    let table = builtin_algebra("quaternion").unwrap().constants().clone();
    let nonzero: Vec<(usize, usize, usize)> = (0..4)
        .flat_map(|i| (0..4).flat_map(move |j| (0..4).map(move |k| (i, j, k))))
        .filter(|&(i, j, k)| !table.get(i, j, k).is_zero())
        .collect();
    let mut rng = common::rng(1);
    let mut rejected = 0;
    for _ in 0..100 {
        let &(i, j, k) = nonzero.choose(&mut rng).unwrap();
        let mut c = table.clone();
        c.set(i, j, k, -table.get(i, j, k).clone());
        let ok = validate_algebra(&c).is_ok();
        ensure(ok == common::brute_force_is_algebra(&c), || {
            format!("verdict differs from brute force at ({i},{j},{k})")
        })?;
        rejected += usize::from(!ok);
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("5 builtins valid, {rejected}/100 perturbations rejected"))
}

fn homomorphism() -> Check {
    let start = Instant::now();
    let q = builtin_algebra("quaternion").unwrap();
    let mut rng = common::rng(2);
    for n in 0..500 {
        let (f, g) = (common::linmap(&mut rng, &q), common::linmap(&mut rng, &q));
        let fg = f.compose(&g).map_err(|e| e.to_string())?;
        ensure(fg.operator_matrix() == f.operator_matrix().mul(&g.operator_matrix()), || {
            format!("pair {n} breaks the homomorphism")
        })?;
    }
    for n in 0..200 {
        let (f, g, h) = (
            common::linmap(&mut rng, &q),
            common::linmap(&mut rng, &q),
            common::linmap(&mut rng, &q),
        );
        let lhs = f.compose(&g).and_then(|x| x.compose(&h)).map_err(|e| e.to_string())?;
        let rhs = g.compose(&h).and_then(|x| f.compose(&x)).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("triple {n} is not associative"))?;
    }
    within(start, Duration::from_secs(10))?;
    Ok("500 pairs, 200 triples".into())
}

fn rank_one() -> Check {
    let mut rng = common::rng(3);
    for name in ["quaternion", "mat2"] {
        let alg = builtin_algebra(name).unwrap();
        for n in 0..250 {
            let [a, b, c, d] = [(); 4].map(|_| common::element(&mut rng, &alg));
            let lhs = LinMap::tensor(&a, &b).unwrap().compose(&LinMap::tensor(&c, &d).unwrap()).unwrap();
            let rhs = LinMap::tensor(&a.mul(&c).unwrap(), &d.mul(&b).unwrap()).unwrap();
            ensure(lhs == rhs, || format!("{name} quadruple {n}"))?;
        }
    }
    Ok("500 quadruples over quaternion and mat2".into())
}

fn inverse_instances() -> Vec<MapMatrix> {
    let q = builtin_algebra("quaternion").unwrap();
    let mut rng = common::rng(4);
    (0..200)
        .map(|_| {
            let order = rng.gen_range(1..=3);
            common::tensor_matrix(&mut rng, &q, order, 2)
        })
        .collect()
}

fn round_trip(instances: &[MapMatrix]) -> Check {
    let start = Instant::now();
    let (mut nonsingular, mut pivoted) = (0, 0);
    for (n, a) in instances.iter().enumerate() {
        match solver::classify_matrix(a) {
            Classification::Nonsingular => {
                nonsingular += 1;
                let inv = a.rc_inverse().map_err(|e| format!("instance {n}: {e}"))?;
                pivoted += usize::from(inv.method == quasidet::funmatrix::InverseMethod::Pivoted);
                let id = MapMatrix::identity(a.algebra(), a.rows()).unwrap();
                ensure(a.rc_product(&inv.inverse).unwrap() == id, || format!("instance {n}: A X != I"))?;
                ensure(inv.inverse.rc_product(a).unwrap() == id, || format!("instance {n}: X A != I"))?;
            }
            Classification::Singular { .. } => match a.rc_inverse() {
                Err(Error::Singular(_)) => {}
                other => return Err(format!("instance {n}: singular but got {other:?}")),
            },
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{nonsingular}/200 nonsingular, {pivoted} needed pivoting"))
}

fn quasidet_relation(instances: &[MapMatrix]) -> Check {
    let mut checked = 0;
    for (n, a) in instances.iter().enumerate() {
        let Ok(inv) = a.rc_inverse() else { continue };
        for i in 0..a.rows() {
            for j in 0..a.rows() {
                let Ok(qd) = a.quasideterminant(j, i) else { continue };
                let Ok(e) = qd.value.invert() else { continue };
                ensure(inv.inverse.get(i, j) == &e, || format!("instance {n}, entry ({i},{j})"))?;
                checked += 1;
            }
        }
    }
    ensure(checked > 0, || "no defined entries".into())?;
    Ok(format!("{checked} defined entries"))
}

fn gelfand() -> Check {
    let start = Instant::now();
    let f = builtin_algebra("field").unwrap();
    let mut rng = common::rng(6);
    let mut count = 0;
    while count < 100 {
        let order = rng.gen_range(2..=4);
        let a = common::field_matrix(&mut rng, &f, order, order, 5);
        let m = common::field_entries(&a);
        let det = common::cofactor_det(&m);
        let minors: Vec<_> = (0..order)
            .flat_map(|p| (0..order).map(move |q| (p, q)))
            .map(|(p, q)| ((p, q), common::cofactor_det(&common::drop_row_col(&m, p, q))))
            .collect();
        if det.is_zero() || minors.iter().any(|(_, d)| d.is_zero()) {
            continue;
        }
        count += 1;
        for ((p, q), minor) in minors {
            let qd = a.quasideterminant(p, q).map_err(|e| format!("({p},{q}): {e}"))?;
            let sign = if (p + q) % 2 == 0 { int(1) } else { int(-1) };
            ensure(qd.value.coeff(0, 0) == &(sign * &det / minor), || {
                format!("matrix {count}, entry ({p},{q})")
            })?;
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok("100 matrices of order 2-4".into())
}

fn solver_equivalence() -> Check {
    let start = Instant::now();
    let mut rng = common::rng(7);
    let (mut solved, mut componentwise, mut drawn) = (0, 0, 0);
    let algebras = [builtin_algebra("quaternion").unwrap(), builtin_algebra("mat2").unwrap()];
    while solved < 200 {
        drawn += 1;
        let alg = &algebras[solved % 2];
        let order = rng.gen_range(1..=3);
        let a = common::tensor_matrix(&mut rng, alg, order, 2);
        let b = (0..order).map(|_| common::element(&mut rng, alg)).collect();
        let sys = LinearSystem::new(a, b).unwrap();
        if solver::classify(&sys) != Classification::Nonsingular {
            continue;
        }
        let r = solver::solve_reduction(&sys).map_err(|e| format!("system {solved}: {e}"))?;
        let q = solver::solve_quasidet(&sys).map_err(|e| format!("system {solved}: {e}"))?;
        ensure(r.solution.is_some() && r.solution == q.solution, || format!("system {solved}: solutions differ"))?;
        ensure(r.residual_zero && q.residual_zero, || format!("system {solved}: nonzero residual"))?;
        componentwise += usize::from(q.componentwise_checked);
        solved += 1;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("200 systems ({drawn} drawn), componentwise form cross-checked on {componentwise}"))
}

fn identity_matrix() -> Check {
    for name in quasidet::algebra::BUILTIN_NAMES {
        let alg = builtin_algebra(name).unwrap();
        let n = alg.dim();
        for m in 1..=4 {
            let id = MapMatrix::identity(&alg, m).unwrap();
            for i in 0..m {
                for j in 0..m {
                    let f = id.get(i, j);
                    for k in 0..n {
                        for l in 0..n {
                            let want = i == j && k == 0 && l == 0;
                            let c = f.coeff(k, l);
                            ensure(if want { c.is_one() } else { c.is_zero() }, || {
                                format!("{name}, m={m}, entry ({i},{j}), coefficient ({k},{l})")
                            })?;
                        }
                    }
                }
            }
            ensure(id.operator_matrix() == RatMatrix::identity(m * n), || format!("{name}, m={m}"))?;
        }
    }
    Ok("m = 1..4 over every builtin".into())
}

struct Golden {
    name: &'static str,
    args: &'static [&'static str],
    code: i32,
}

const GOLDEN: &[Golden] = &[
    Golden { name: "quaternion_solve", args: &["solve", "quaternion_system.json"], code: 0 },
    Golden { name: "scalar_quasidet", args: &["quasidet", "scalar_matrix.json"], code: 0 },
    Golden { name: "scalar_quasidet_pivot", args: &["quasidet", "scalar_matrix.json", "--pivot", "1,2"], code: 0 },
    Golden { name: "dual_map_invert", args: &["map-invert", "dual_eps.json"], code: 1 },
    Golden { name: "dual_solve", args: &["solve", "dual_system.json"], code: 1 },
];

fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn run_cli(args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_quasidet"))
        .args(args)
        .current_dir(tests_dir().join("fixtures"))
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn golden_files() -> Check {
    let bless = std::env::var_os("QUASIDET_BLESS").is_some();
    for g in GOLDEN {
        let path = tests_dir().join("golden").join(format!("{}.out", g.name));
        let first = run_cli(g.args)?;
        let second = run_cli(g.args)?;
        ensure(first == second, || format!("{}: runs differ", g.name))?;
        ensure(first.0 == g.code, || format!("{}: exit {} (expected {})", g.name, first.0, g.code))?;
        if bless {
            std::fs::write(&path, &first.1).map_err(|e| e.to_string())?;
        }
        let want = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure(want == first.1, || format!("{}: output differs from golden file", g.name))?;
    }
    Ok(format!("{} fixtures, two runs each", GOLDEN.len()))
}

fn main() -> ExitCode {
    let instances = inverse_instances();
    let criteria: Vec<(&str, Box<dyn Fn() -> Check + '_>)> = vec![
        ("algebra validation", Box::new(validation)),
        ("composition homomorphism", Box::new(homomorphism)),
        ("rank-one product law", Box::new(rank_one)),
        ("inverse round trip", Box::new(|| round_trip(&instances))),
        ("quasideterminant-inverse relation", Box::new(|| quasidet_relation(&instances))),
        ("scalar Gelfand identity", Box::new(gelfand)),
        ("solver equivalence", Box::new(solver_equivalence)),
        ("identity matrix", Box::new(identity_matrix)),
        ("CLI golden files", Box::new(golden_files)),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match result {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} [{t:.2?}]", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why} [{t:.2?}]", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
