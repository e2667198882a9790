//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any failed.
//!
//! Run with `cargo test -p conehilb-cli --test acceptance`.

#[path = "../../../core/tests/common/mod.rs"]
mod common;

use std::collections::HashSet;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use conehilb::arith::dot as bdot;
use conehilb::hull::hull;
use conehilb::simplex::fundamental_points;
use conehilb::subdivide::approx::{
    approx_candidates, approximate_cone, cross_section, cube_face_decomposition, reconstructs,
};
use conehilb::subdivide::ip::{solve_star_ip, IpOutcome};
use conehilb::subdivide::{recursive_subdivide, StellarStep, Strategy, SubdivisionConfig};
use conehilb::{compute, compute_traced, ComputationResult, ComputeOptions, ConeInput, OrderVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn config(strategy: Strategy, bound: i64) -> SubdivisionConfig {
    SubdivisionConfig {
        strategy,
        volume_bound: BigInt::from(bound),
        ..Default::default()
    }
}

fn options(strategy: Strategy, bound: i64) -> ComputeOptions {
    ComputeOptions {
        subdivision: config(strategy, bound),
        ..Default::default()
    }
}

/// Simplex input graded by its own height form, which is positive on every generator.
fn graded_simplex(rows: &[V]) -> ConeInput {
    ConeInput {
        ambient_dim: rows.len(),
        generators: Some(mat(rows)),
        grading: Some(simplex(rows).height_normal()),
        ..Default::default()
    }
}

fn same_results(a: &ComputationResult, b: &ComputationResult) -> bool {
    a.hilbert_basis == b.hilbert_basis && a.series == b.series
}

fn hilbert_basis_oracle() -> Outcome {
    let mut rng = rng(101);
    let mut spent = Duration::ZERO;
    let opts = ComputeOptions {
        series: false,
        ..Default::default()
    };
    for case in 0..200 {
        let d = 2 + case % 2;
        let gens = random_cone(&mut rng, d, 30, 1000);
        let input = ConeInput {
            ambient_dim: d,
            generators: Some(mat(&gens)),
            ..Default::default()
        };
        let start = Instant::now();
        let r = compute(&input, &opts).map_err(|e| format!("{gens:?}: {e}"))?;
        spent += start.elapsed();
        let got: HashSet<V> = r.hilbert_basis.iter().map(|x| small(x)).collect();
        ensure!(got.len() == r.hilbert_basis.len(), "{gens:?}: repeated elements");
        ensure!(got == oracle_hilbert_basis(&gens), "{gens:?}: differs from enumeration");
    }
    ensure!(spent < Duration::from_secs(60), "pipeline took {spent:?}");
    Ok(format!("200 cones equal, pipeline time {:.2} s", spent.as_secs_f64()))
}

/// Cramer check of `x = sum q_i rows_i` with every `0 <= q_i < 1`.
fn in_parallelepiped(rows: &[V], x: &[i64]) -> bool {
    let total = det(rows);
    (0..rows.len()).all(|i| {
        let mut m = rows.to_vec();
        m[i] = x.to_vec();
        let q = det(&m) * total.signum();
        0 <= q && q < total.abs()
    })
}

fn domain_size() -> Outcome {
    let mut rng = rng(102);
    for case in 0..500 {
        let d = 2 + case % 3;
        let entry = [0, 0, 60, 15, 6][d];
        let rows = random_simplex(&mut rng, d, entry, 10_000);
        let points = fundamental_points(&simplex(&rows)).map_err(|e| e.to_string())?.points;
        let want = det(&rows).unsigned_abs() as usize;
        ensure!(points.len() == want, "{rows:?}: {} points, det {want}", points.len());
        let distinct: HashSet<V> = points.iter().map(|p| small(p)).collect();
        ensure!(distinct.len() == want, "{rows:?}: repeated points");
        ensure!(
            distinct.iter().all(|p| in_parallelepiped(&rows, p)),
            "{rows:?}: point outside the parallelepiped"
        );
    }
    Ok("500 simplices, |E| = |det|".into())
}

fn series_counts() -> Outcome {
    let mut rng = rng(103);
    for case in 0..100 {
        let d = 2 + case % 2;
        let gens = random_cone(&mut rng, d, 30, 1000);
        let mut grading = vec![0; d];
        grading[0] = 1;
        let input = ConeInput {
            ambient_dim: d,
            generators: Some(mat(&gens)),
            grading: Some(big(&grading)),
            ..Default::default()
        };
        let h = compute(&input, &ComputeOptions::default())
            .map_err(|e| format!("{gens:?}: {e}"))?
            .series
            .ok_or("no series")?;
        let want: Vec<BigInt> = oracle_counts(&gens, 21).into_iter().map(BigInt::from).collect();
        ensure!(h.expand(21) == want, "{gens:?}: expansion differs from point counts");
        ensure!(h.has_negative_degree(), "{gens:?}: numerator degree {}", h.numerator().len());
    }
    let worked = ConeInput::from_generators(&[&[1, 0], &[3, 5]]).with_grading(&[1, 0]);
    let h = compute(&worked, &ComputeOptions::default()).map_err(|e| e.to_string())?.series.unwrap();
    ensure!(h.numerator() == big(&[1, 2, 4, 4, 3, 1]).as_slice(), "worked numerator {:?}", h.numerator());
    ensure!((h.period(), h.rank()) == (3, 2), "worked denominator");
    Ok("100 cones through t^20, worked fixture".into())
}

fn subdivision_soundness(steps: &mut Vec<StellarStep>) -> Outcome {
    let mut rng = rng(104);
    let mut subdivided = 0;
    for case in 0..40 {
        let d = 2 + case % 2;
        let rows = random_simplex(&mut rng, d, 12, 10_000);
        let s = simplex(&rows);
        let order = OrderVector::interior_of(s.gens());
        let probe = vec![if d == 2 { (-25, 25) } else { (-7, 7) }; d];
        let input = graded_simplex(&rows);
        let plain = compute(&input, &options(Strategy::None, 1)).map_err(|e| e.to_string())?;
        for bound in [2, 10, 100] {
            let out = recursive_subdivide(&s, &config(Strategy::Ip, bound), &order).map_err(|e| e.to_string())?;
            subdivided += !out.steps.is_empty() as usize;
            let mut x = vec![0; d];
            let mut bad = None;
            scan(&mut x, 0, &probe, &mut |x| {
                let hits = out.leaves.iter().filter(|t| t.contains_half_open(&big(x))).count();
                if hits != in_simplex(&rows, x) as usize && bad.is_none() {
                    bad = Some((x.to_vec(), hits));
                }
            });
            ensure!(bad.is_none(), "{rows:?} bound {bound}: probe {bad:?}");
            let used: BigInt = out.leaves.iter().map(|t| t.det().clone()).sum();
            ensure!(&used <= s.det(), "{rows:?} bound {bound}: leaves {used} > {}", s.det());
            steps.extend(out.steps);

            for strategy in [Strategy::Ip, Strategy::IpThenApprox] {
                let t = compute_traced(&input, &options(strategy, bound)).map_err(|e| e.to_string())?;
                ensure!(same_results(&t.result, &plain), "{rows:?} {strategy:?} {bound}: results differ");
                steps.extend(t.steps);
            }
        }
    }
    ensure!(subdivided > 0, "no simplex was subdivided");
    Ok(format!("40 simplices x 3 bounds, {subdivided} subdivided runs"))
}

fn ip_optimality() -> Outcome {
    let mut rng = rng(105);
    let (mut optimal, mut infeasible) = (0, 0);
    for case in 0..100 {
        let d = 2 + case % 3;
        let rows = loop {
            let r = random_simplex(&mut rng, d, 8, 10_000);
            if box_size(&r) <= 400_000 {
                break r;
            }
        };
        let s = simplex(&rows);
        let want = oracle_star_min(&rows, &small(&s.height_normal()));
        match solve_star_ip(&s, &SubdivisionConfig::default()) {
            IpOutcome::Optimal { point, value } => {
                optimal += 1;
                let Some((v, _)) = want else {
                    return Err(format!("{rows:?}: solver found {point:?}, search found nothing"));
                };
                ensure!(value.to_i128() == Some(v), "{rows:?}: value {value}, want {v}");
                ensure!(bdot(&s.height_normal(), &point) == value, "{rows:?}: point off its value");
                ensure!(in_simplex(&rows, &small(&point)), "{rows:?}: {point:?} outside");
            }
            IpOutcome::Infeasible => {
                infeasible += 1;
                ensure!(want.is_none(), "{rows:?}: infeasible, search found {want:?}");
            }
            other => return Err(format!("{rows:?}: {other:?}")),
        }
    }
    let s = simplex(&[vec![1, 0], vec![3, 5]]);
    let fixture = solve_star_ip(&s, &SubdivisionConfig::default());
    ensure!(
        fixture == IpOutcome::Optimal { point: big(&[1, 1]), value: BigInt::from(3) },
        "fixture gave {fixture:?}"
    );
    let worked = ConeInput::from_generators(&[&[1, 0], &[3, 5]]).with_grading(&[1, 0]);
    let r = compute(&worked, &options(Strategy::Ip, 2)).map_err(|e| e.to_string())?;
    ensure!(r.stats.improvement_factor().to_string() == "5/3", "improvement {}", r.stats.improvement_factor());
    Ok(format!("100 simplices ({optimal} optimal, {infeasible} infeasible), fixture 5/3"))
}

fn stellar_identity(steps: &[StellarStep]) -> Outcome {
    ensure!(!steps.is_empty(), "no steps recorded");
    for st in steps {
        let total: BigInt = st.piece_dets.iter().sum();
        ensure!(
            &total * &st.gen_height == &st.parent_det * &st.point_height,
            "step {st:?} breaks the identity"
        );
    }
    Ok(format!("{} steps", steps.len()))
}

fn approximation() -> Outcome {
    let mut rng = rng(106);
    let mut both = 0;
    for case in 0..200 {
        let d = 2 + case % 3;
        let entry = [0, 0, 40, 12, 6][d];
        let rows = random_simplex(&mut rng, d, entry, 10_000);
        let s = simplex(&rows);
        let normal = s.height_normal();
        let height = s.generator_height();
        for level in 1..=3 {
            let over = approximate_cone(&s, level).map_err(|e| format!("{rows:?}: {e}"))?;
            let forms = hull(&over.generators, d).map_err(|e| e.to_string())?.forms;
            for g in s.gens() {
                ensure!(
                    forms.iter().all(|f| !bdot(f, g).is_negative()),
                    "{rows:?} level {level}: generator outside the overcone"
                );
            }
            if d <= 3 {
                let oforms = oracle_forms(&over.generators.iter().map(|g| small(g)).collect::<Vec<_>>());
                ensure!(
                    oforms.len() < d || rows.iter().all(|g| in_cone(&oforms, g)),
                    "{rows:?} level {level}: oracle facets exclude a generator"
                );
            }
            for v in cross_section(&s, level).lattice_vertices() {
                let parts = cube_face_decomposition(&v);
                ensure!(reconstructs(&v, &parts), "{v:?}: decomposition is wrong");
                if !v.iter().all(|x| x.is_integer()) {
                    ensure!(parts.len() <= d, "{v:?}: {} cube vertices", parts.len());
                }
            }
            for b in approx_candidates(&s, level).map_err(|e| e.to_string())? {
                ensure!(in_simplex(&rows, &small(&b)), "{rows:?}: {b:?} outside");
                ensure!(bdot(&normal, &b) < height, "{rows:?}: {b:?} not below the generators");
            }
        }

        let ip_point = solve_star_ip(&s, &SubdivisionConfig::default()).point().is_some();
        if ip_point && !approx_candidates(&s, 1).map_err(|e| e.to_string())?.is_empty() {
            both += 1;
            let input = graded_simplex(&rows);
            let plain = compute(&input, &options(Strategy::None, 1)).map_err(|e| e.to_string())?;
            for strategy in [Strategy::Approx, Strategy::Ip] {
                let r = compute(&input, &options(strategy, 2)).map_err(|e| e.to_string())?;
                ensure!(same_results(&r, &plain), "{rows:?} {strategy:?}: results differ");
            }
        }
    }
    Ok(format!("200 simplices x 3 levels, {both} with points from both strategies"))
}

fn hard_simplex(rng: &mut rand_chacha::ChaCha8Rng) -> Vec<V> {
    loop {
        // positive first coordinates so that x[0] grades the cone with small degrees
        let rows: Vec<V> = (0..5)
            .map(|_| (0..5).map(|j| rng.random_range(if j == 0 { 1 } else { -14 }..=14)).collect())
            .collect();
        let v = det(&rows).abs();
        if (1_000_000..=10_000_000).contains(&v) {
            return rows;
        }
    }
}

fn desk_scale_family() -> Outcome {
    let mut rng = rng(107);
    let n = 10;
    let bound = 10_000;
    let (mut good, mut with, mut without) = (0, Duration::ZERO, Duration::ZERO);
    let mut factors = Vec::new();
    for _ in 0..n {
        let rows = hard_simplex(&mut rng);
        let input = ConeInput {
            ambient_dim: 5,
            generators: Some(mat(&rows)),
            grading: Some(big(&[1, 0, 0, 0, 0])),
            ..Default::default()
        };
        let start = Instant::now();
        let sub = compute(&input, &options(Strategy::IpThenApprox, bound)).map_err(|e| e.to_string())?;
        with += start.elapsed();
        let start = Instant::now();
        let plain = compute(&input, &options(Strategy::None, bound)).map_err(|e| e.to_string())?;
        without += start.elapsed();

        ensure!(same_results(&sub, &plain), "{rows:?}: results differ");
        let st = &sub.stats;
        let f = st.improvement_factor();
        ensure!(
            f.clone() * BigRational::from_integer(st.volume_used.clone())
                == BigRational::from_integer(st.simplex_volume.clone()),
            "{rows:?}: improvement factor {f} is not simplex_volume / volume_used"
        );
        good += (f >= BigRational::from_integer(5.into())) as usize;
        factors.push(f.to_f64().unwrap_or(f64::NAN));
    }
    let speedup = without.as_secs_f64() / with.as_secs_f64();
    let summary = format!(
        "improvement >= 5 on {good}/{n} (factors {}), speedup {speedup:.1}x ({:.1} s vs {:.1} s)",
        factors.iter().map(|f| format!("{f:.0}")).collect::<Vec<_>>().join(" "),
        without.as_secs_f64(),
        with.as_secs_f64()
    );
    ensure!(good * 10 >= n * 8 && speedup >= 2.0, "{summary}");
    Ok(summary)
}

fn determinism() -> Outcome {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut names: Vec<String> = fs::read_dir(&fixtures)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok()?.file_name().into_string().ok())
        .filter(|n| n.ends_with(".in"))
        .collect();
    names.sort();
    ensure!(!names.is_empty(), "no fixtures");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for name in &names {
        let mut outputs = Vec::new();
        for threads in ["1", "8"] {
            let path = dir.path().join(name);
            fs::copy(fixtures.join(name), &path).map_err(|e| e.to_string())?;
            let status = Command::new(env!("CARGO_BIN_EXE_conehilb"))
                .arg(&path)
                .args(["--threads", threads])
                .status()
                .map_err(|e| e.to_string())?;
            ensure!(status.success(), "{name}: exit {status}");
            outputs.push(fs::read(path.with_extension("out")).map_err(|e| e.to_string())?);
        }
        ensure!(outputs[0] == outputs[1], "{name}: outputs differ between 1 and 8 threads");
    }
    Ok(format!("{} fixtures byte-identical", names.len()))
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    })
}

fn main() {
    let mut steps = Vec::new();
    let checks: Vec<(&str, Box<dyn FnOnce() -> Outcome + '_>)> = vec![
        ("Hilbert basis vs enumeration", Box::new(hilbert_basis_oracle)),
        ("fundamental domain size", Box::new(domain_size)),
        ("Hilbert series vs point counts", Box::new(series_counts)),
        ("subdivision soundness", Box::new(|| subdivision_soundness(&mut steps))),
        ("IP optimality", Box::new(ip_optimality)),
    ];
    let mut failed = 0;
    let mut report = |i: usize, name: &str, start: Instant, outcome: Outcome| {
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {i} {name}: {detail} [{secs:.1} s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {i} {name}: {detail} [{secs:.1} s]");
            }
        }
    };
    for (i, (name, check)) in checks.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = guarded(check);
        report(i + 1, name, start, outcome);
    }
    let rest: Vec<(&str, Box<dyn FnOnce() -> Outcome>)> = vec![
        ("stellar volume identity", Box::new(move || stellar_identity(&steps))),
        ("approximation properties", Box::new(approximation)),
        ("desk-scale hard family", Box::new(desk_scale_family)),
        ("determinism across thread counts", Box::new(determinism)),
    ];
    for (i, (name, check)) in rest.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = guarded(check);
        report(i + 6, name, start, outcome);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
