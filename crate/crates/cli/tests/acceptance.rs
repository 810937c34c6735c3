//! One line per acceptance criterion. Runs the `umps` binary where a
//! subcommand exists and the libraries otherwise.
//!
//! Exits nonzero on a failed criterion only when `UMPS_ACCEPTANCE_STRICT`
//! is set, so the rest of the workspace suite still runs.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;
use umps_core::arith::CyclotomicField;
use umps_core::necklace::cyc_dim;
use umps_core::sample::{random_invertible, random_rational_tuple, rng_from_seed};
use umps_core::umps::{act_cyclic_tensor, act_gl, conjugate, evaluate_umps, join_tuples};
use umps_lab::membership_lab::decide_membership_224_rational;
use umps_lab::trace_algebra::{
    evaluate_parametrization, invariants_of, parse_word, trace_parametrization,
    verify_word_identity,
};
use umps_lab::variety_lab::{expected_dimension, jacobian_dimension, linear_span_dimension};

const SLOPE_TOLERANCE: f64 = 0.1;
const INSTANCES: u64 = 500;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn umps(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_umps"))
        .args(args)
        .output()
        .expect("binary runs");
    match serde_json::from_slice(&out.stdout) {
        Ok(v) => v,
        Err(_) => panic!(
            "umps {args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        ),
    }
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("umps-acceptance-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

fn minimal_generators(report: &Value, degree: u64) -> u64 {
    report["result"]["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["degree"] == degree)
        .map_or(0, |r| r["minimal_generators"].as_u64().unwrap())
}

fn ambient_dimensions() -> Verdict {
    let dims: Vec<u64> = (1..=7).map(|n| cyc_dim(n, 2)).collect();
    verdict(
        dims == [2, 3, 4, 6, 8, 14, 20],
        format!("cyc_dim(1..7, 2) = {dims:?}"),
    )
}

fn expected_dimensions() -> Verdict {
    let mut cells: Vec<(usize, usize, usize)> = (1..=3)
        .flat_map(|bond| (3..=6).map(move |n| (bond, 2, n)))
        .collect();
    cells.push((2, 3, 3));
    let wrong: Vec<String> = cells
        .iter()
        .filter_map(|&(bond, d, n)| {
            let r = jacobian_dimension(bond, d, n, 8, 1).unwrap();
            let want = expected_dimension(bond, d, n);
            (r.jacobian_rank != want)
                .then(|| format!("({bond},{d},{n}): {} vs {want}", r.jacobian_rank))
        })
        .collect();
    verdict(
        wrong.is_empty(),
        format!("{} cells, mismatches {wrong:?}", cells.len()),
    )
}

fn hypersurface() -> Verdict {
    let r = umps(&["implicitize", "2", "2", "4", "--bound", "6"]);
    let below: u64 = (1..6).map(|k| minimal_generators(&r, k)).sum();
    let sextics = minimal_generators(&r, 6);
    let golden = r["result"]["matches_golden_f224"] == true;
    verdict(
        below == 0 && sextics == 1 && golden && r["result"]["counts_agree"] == true,
        format!("{below} generators below degree 6, {sextics} sextic, matches f224: {golden}"),
    )
}

fn generator_counts() -> Verdict {
    let five = umps(&["implicitize", "2", "2", "5", "--bound", "6"]);
    let six = umps(&["implicitize", "2", "2", "6", "--bound", "3"]);
    let counts5: Vec<u64> = (1..=6).map(|k| minimal_generators(&five, k)).collect();
    let counts6: Vec<u64> = (1..=3).map(|k| minimal_generators(&six, k)).collect();
    let agree = five["result"]["counts_agree"] == true && six["result"]["counts_agree"] == true;
    verdict(
        counts5[1] == 3 && counts6 == [1, 6, 17] && agree,
        format!(
            "(2,2,5) quadrics {} (want 3), sextics {} (want 27, not gating), by degree {counts5:?}; \
             (2,2,6) {counts6:?} (want [1, 6, 17]); two primes agree: {agree}",
            counts5[1], counts5[5]
        ),
    )
}

fn span_defect() -> Verdict {
    let span = linear_span_dimension(2, 2, 6, 40, 1).unwrap().rank;
    let identity = verify_word_identity(
        &parse_word("110010").unwrap(),
        &parse_word("110100").unwrap(),
    )
    .unwrap();
    verdict(
        span == 13 && identity,
        format!("span dimension {span}, word identity {identity}"),
    )
}

fn surjectivity() -> Verdict {
    let r = umps(&["surjectivity", "--example", "324"]);
    let dim = &r["result"]["ideal_dim"];
    let rank = jacobian_dimension(3, 2, 4, 8, 1).unwrap().jacobian_rank;
    verdict(
        *dim == 0 && rank == 6,
        format!("ideal dim {dim}, jacobian rank {rank}"),
    )
}

fn identifiability() -> Verdict {
    let mut seen = Vec::new();
    let mut ok = true;
    for n in [5usize, 6] {
        for seed in ["1", "2", "3"] {
            let r = umps(&["--seed", seed, "fiber", &n.to_string()])["result"].clone();
            ok &= r["ideal_dim"] == 0 && r["degree"] == n as u64;
            seen.push(format!("N={n} seed {seed}: degree {}", r["degree"]));
        }
    }
    verdict(ok, seen.join(", "))
}

fn certificates() -> Verdict {
    let e012 = umps(&["certify", "e012"]);
    let w = umps(&["certify", "wstate", "3", "4", "5", "6"]);
    let verdicts: Vec<String> = w["result"]["certificates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["verdict"].as_str().unwrap().to_string())
        .collect();
    let e012_ok = e012["pass"] == true;
    let ok =
        e012_ok && verdicts[0] == "member" && verdicts[1..].iter().all(|v| v == "not a member");
    verdict(
        ok,
        format!("e012 certified: {e012_ok}; W_3..W_6: {verdicts:?}"),
    )
}

fn limit_rates() -> Verdict {
    let r = umps(&["limits", "e012", "wstate(4)", "wstate(5)"]);
    let families = r["result"]["families"].as_array().unwrap();
    let mut ok = true;
    let mut lines = Vec::new();
    for (f, want) in families.iter().zip([6.0, 4.0, 5.0]) {
        let slope = f["slope"].as_f64().unwrap_or(f64::NAN);
        ok &= (slope - want).abs() <= SLOPE_TOLERANCE;
        lines.push(format!(
            "{} slope {slope:.3} (want {want})",
            f["family"].as_str().unwrap()
        ));
    }
    verdict(ok, lines.join(", "))
}

fn membership() -> Verdict {
    let cases = [
        ("e0101", r#"{"0101": "1"}"#, true, true),
        ("e0001", r#"{"0001": "1"}"#, true, false),
        (
            "e0011+sqrt2*e0101",
            r#"{"0011": "1", "0101": "sqrt2"}"#,
            true,
            false,
        ),
        (
            "e0011-sqrt2*e0101",
            r#"{"0011": "1", "0101": "-1*sqrt2"}"#,
            true,
            false,
        ),
    ];
    let mut ok = true;
    let mut lines = Vec::new();
    for (i, (name, coords, closure, set)) in cases.iter().enumerate() {
        let text = format!(r#"{{"N": 4, "d": 2, "field": "QQ(sqrt2)", "coords": {coords}}}"#);
        let path = scratch(&format!("point{i}.json"), &text);
        let r = umps(&["membership", path.to_str().unwrap()])["result"].clone();
        std::fs::remove_file(path).ok();
        ok &= r["in_closure"] == *closure && r["in_set"] == *set;
        lines.push(format!(
            "{name}: closure {} set {}",
            r["in_closure"], r["in_set"]
        ));
    }
    let mut rng = rng_from_seed(1);
    let members = (0..1000)
        .filter(|_| {
            let t = evaluate_umps(&random_rational_tuple(&mut rng, 2, 2, 100), 4).unwrap();
            decide_membership_224_rational(&t).unwrap().in_set == Some(true)
        })
        .count();
    ok &= members == 1000;
    lines.push(format!("random samples in set {members}/1000"));
    verdict(ok, lines.join(", "))
}

fn property_suites() -> Verdict {
    let mut failures = [0u64; 5];
    for seed in 0..INSTANCES {
        let mut rng = rng_from_seed(seed);
        let t = random_rational_tuple(&mut rng, 2, 2, 9);
        let n = 2 + (seed % 5) as usize;
        let a = random_invertible(&mut rng, 2, 9);
        if evaluate_umps(&act_gl(&a, &t).unwrap(), n).unwrap()
            != act_cyclic_tensor(&a, &evaluate_umps(&t, n).unwrap()).unwrap()
        {
            failures[0] += 1;
        }
        let b = random_rational_tuple(&mut rng, 3, 2, 9);
        let joined = evaluate_umps(&join_tuples(&[t.clone(), b.clone()]).unwrap(), n).unwrap();
        if joined
            != evaluate_umps(&t, n)
                .unwrap()
                .add(&evaluate_umps(&b, n).unwrap())
        {
            failures[1] += 1;
        }
        let p = random_invertible(&mut rng, 2, 9);
        if evaluate_umps(&conjugate(&t, &p).unwrap(), n).unwrap() != evaluate_umps(&t, n).unwrap() {
            failures[2] += 1;
        }
        let field = CyclotomicField::new(n as u32);
        let lifted = t.map(|x| field.from_rational(x.clone()));
        if evaluate_umps(&lifted.scale(&field.zeta_pow(1)), n).unwrap()
            != evaluate_umps(&lifted, n).unwrap()
        {
            failures[3] += 1;
        }
        let m = n + 1;
        let phi = trace_parametrization(m).unwrap();
        let inv = invariants_of(&t).unwrap();
        let via_phi = evaluate_parametrization(&phi, inv.as_slice(), |q| q.clone()).unwrap();
        if via_phi != evaluate_umps(&t, m).unwrap().into_coords() {
            failures[4] += 1;
        }
    }
    let names = [
        "GL-equivariance",
        "join additivity",
        "conjugation",
        "root of unity",
        "phi_N o pi = T_N",
    ];
    let detail = names
        .iter()
        .zip(failures)
        .map(|(n, f)| format!("{n} {f}/{INSTANCES}"))
        .collect::<Vec<_>>()
        .join(", ");
    verdict(
        failures.iter().all(|&f| f == 0),
        format!("failures: {detail}"),
    )
}

fn main() {
    let criteria: [(&str, u64, fn() -> Verdict); 11] = [
        ("ambient dimensions", 1, ambient_dimensions),
        ("expected dimensions", 30, expected_dimensions),
        ("hypersurface recovery", 120, hypersurface),
        ("generator counts", 1800, generator_counts),
        ("linear span defect", 60, span_defect),
        ("surjectivity of (3,2,4)", 300, surjectivity),
        ("identifiability", 1200, identifiability),
        ("non-closedness certificates", 600, certificates),
        ("limit rates", 1, limit_rates),
        ("constructible membership", 120, membership),
        ("property suites", 300, property_suites),
    ];
    let mut passed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*budget);
        let pass = v.pass && in_time;
        passed += usize::from(pass);
        println!(
            "criterion {:>2} {}: {name}: {} [{:.1}s of {budget}s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {passed} of {} criteria pass", criteria.len());
    if passed < criteria.len() && std::env::var_os("UMPS_ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
