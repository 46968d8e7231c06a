//! One line per acceptance criterion. Criteria that cannot hold as stated
//! are listed in `KNOWN` with the exact deviations expected; anything else
//! failing fails the test.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use klat::kummer::realize::all_realizations;
use klat::named;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

/// Criterion number and the deviations (table/row/column) it is known to show.
const KNOWN: [(u32, &[&str]); 2] = [(2, &["3.1/7.1/a", "3.3/4.2/T_X"]), (4, &["5-embeddings/9/T_G(X)"])];

struct Outcome {
    ok: bool,
    detail: String,
    deviations: Vec<String>,
}

fn klat(args: &[&str]) -> (Vec<u8>, i32, Duration) {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_klat")).args(args).output().expect("run klat");
    (out.stdout, out.status.code().unwrap_or(-1), t.elapsed())
}

fn verify(table: &str) -> (Value, i32, Duration) {
    let (stdout, code, dt) = klat(&["verify", "--table", table, "--json"]);
    (serde_json::from_slice(&stdout).expect("json report"), code, dt)
}

fn rows(report: &Value) -> &Vec<Value> {
    report["rows"].as_array().expect("rows")
}

fn verified(row: &Value) -> bool {
    row["status"]["kind"] == "verified"
}

fn issues(row: &Value) -> Vec<(String, String, String)> {
    row["issues"]
        .as_array()
        .expect("issues")
        .iter()
        .map(|i| {
            (
                i["column"].as_str().unwrap_or_default().to_string(),
                i["kind"].as_str().unwrap_or_default().to_string(),
                i["detail"].as_str().unwrap_or_default().to_string(),
            )
        })
        .collect()
}

fn deviations(report: &Value) -> Vec<String> {
    let mut out = Vec::new();
    for r in rows(report) {
        for (col, _, _) in issues(r) {
            out.push(format!("{}/{}/{}", r["table"].as_str().unwrap(), r["row"].as_str().unwrap(), col));
        }
    }
    out
}

fn secs(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

fn criterion_1() -> Outcome {
    let (mut total, mut counts, mut good, mut devs, mut exits) = (Duration::ZERO, Vec::new(), 0, Vec::new(), true);
    for t in ["2.1", "2.2", "2.3", "2.4", "2.5"] {
        let (rep, code, dt) = verify(t);
        total += dt;
        exits &= code == 0;
        counts.push(rows(&rep).len());
        good += rows(&rep).iter().filter(|r| verified(r)).count();
        devs.extend(deviations(&rep));
    }
    let ok = counts == [7, 5, 4, 1, 1] && good == 18 && exits && total < Duration::from_secs(10);
    Outcome { ok, detail: format!("rows {counts:?}, {good}/18 verified, {} (limit 10 s)", secs(total)), deviations: devs }
}

fn criterion_2() -> Outcome {
    let (mut total, mut devs, mut plain, mut plain_ok) = (Duration::ZERO, Vec::new(), 0, 0);
    for t in ["3.1", "3.2", "3.4"] {
        let (rep, _, dt) = verify(t);
        total += dt;
        plain += rows(&rep).len();
        plain_ok += rows(&rep).iter().filter(|r| verified(r)).count();
        devs.extend(deviations(&rep));
    }
    let (rep, _, dt) = verify("3.3");
    total += dt;
    let mut d_cells = 0;
    for r in rows(&rep) {
        for (col, kind, detail) in issues(r) {
            if col == "d" && kind == "analytically-impossible" && detail.contains("Z/3") {
                d_cells += 1;
            }
        }
    }
    let flagged_33 = deviations(&rep);
    devs.extend(flagged_33.iter().filter(|d| !d.ends_with("/d")).cloned());
    let ok = plain_ok == plain && d_cells == 2 && flagged_33.len() == 2 && total < Duration::from_secs(60);
    Outcome {
        ok,
        detail: format!(
            "3.1/3.2/3.4: {plain_ok}/{plain} rows verified; 3.3: {d_cells} Z/3 d-cells, {} flagged cells; {} (limit 60 s)",
            flagged_33.len(),
            secs(total)
        ),
        deviations: devs,
    }
}

fn table_5() -> &'static (Value, Duration) {
    static CELL: std::sync::OnceLock<(Value, Duration)> = std::sync::OnceLock::new();
    CELL.get_or_init(|| {
        let (rep, _, dt) = verify("5");
        (rep, dt)
    })
}

fn criterion_3() -> Outcome {
    let (rep, dt) = table_5();
    let groups: Vec<&Value> = rows(rep).iter().filter(|r| r["table"] == "5-groups").collect();
    let orders: Vec<String> = groups.iter().map(|r| r["recomputed"]["|G|"].as_str().unwrap_or("?").to_string()).collect();
    let expected = ["2", "3", "4", "6", "12", "8", "12", "24", "18", "60", "96"];
    let ok = orders == expected && groups.iter().all(|r| verified(r)) && *dt < Duration::from_secs(120);
    Outcome { ok, detail: format!("orders {}, {} for table 5 (limit 120 s)", orders.join(","), secs(*dt)), deviations: vec![] }
}

fn criterion_4() -> Outcome {
    let (rep, dt) = table_5();
    let emb: Vec<&Value> = rows(rep).iter().filter(|r| r["table"] == "5-embeddings" && r["row"] != "A1^4").collect();
    let mut within = 0;
    for r in &emb {
        let bounded = r["notes"].as_array().unwrap().iter().filter_map(|n| n.as_str()).any(|n| {
            n.strip_prefix("embedding coordinates bounded by ").and_then(|k| k.parse::<i64>().ok()).is_some_and(|k| k <= 6)
        });
        if verified(r) && bounded {
            within += 1;
        }
    }
    let d4 = emb.iter().find(|r| r["row"] == "10");
    let d4_det = d4.and_then(|r| named::parse(r["tNamed"].as_str()?).ok()).map(|l| l.det());
    let d4_ok = d4.is_some_and(|r| verified(r)) && d4_det == Some(BigInt::from(24));
    let devs: Vec<String> = deviations(rep).into_iter().filter(|d| d.starts_with("5-embeddings/")).collect();
    let ok = emb.len() == 10 && within == 10 && d4_ok && *dt < Duration::from_secs(300);
    Outcome {
        ok,
        detail: format!(
            "{within}/{} rows with a wall-free embedding at coordinates ≤ 6 and matching complement; D4 det {}; {}",
            emb.len(),
            d4_det.map(|d| d.to_string()).unwrap_or("?".into()),
            secs(*dt)
        ),
        deviations: devs,
    }
}

fn criterion_5() -> Outcome {
    let (rep, _, dt) = verify("6");
    let find = |row: &str| rows(&rep).iter().find(|r| r["row"] == row);
    let dims: Vec<String> = ["1.1", "1.5", "5.1"]
        .iter()
        .map(|r| find(r).map(|r| r["recomputed"]["minimal dimension"].as_str().unwrap_or("?").to_string()).unwrap_or_default())
        .collect();
    let a1 = (2..=5).all(|n| find(&format!("A1^4 n={n}")).is_some_and(verified));
    let a2 = |n: u32| find(&format!("A2^2 n={n}")).and_then(|r| r["recomputed"]["construction"].as_str()).unwrap_or("?").to_string();
    let a2_ok = a2(3) == "succeeds" && a2(2) == "fails" && a2(5) == "fails";
    let crit: Vec<&Value> = rows(&rep).iter().filter(|r| r["row"].as_str().unwrap().starts_with("criterion ")).collect();
    let crit_ok = crit.len() == 11 && crit.iter().all(|r| verified(r));
    let ok = dims == ["8", "6", "6"] && a1 && a2_ok && crit_ok && dt < Duration::from_secs(120);
    Outcome {
        ok,
        detail: format!(
            "dims {}; A1^4 n=2..5 {}; A2^2 n=2,3,5 {}/{}/{}; criterion {}/11; {} (limit 120 s)",
            dims.join(","),
            if a1 { "walls everywhere" } else { "gap" },
            a2(2),
            a2(3),
            a2(5),
            crit.iter().filter(|r| verified(r)).count(),
            secs(dt)
        ),
        deviations: deviations(&rep),
    }
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut bad = Vec::new();
    for _ in 0..50 {
        let g = support::random_definite(&mut rng, 4);
        let bound = 2 * rng.gen_range(1..=6);
        if support::library_short_vectors(&g, bound) != support::naive_short_vectors(&g, bound) {
            bad.push(format!("short vectors {g:?} ≤ {bound}"));
        }
    }
    for _ in 0..100 {
        let g = support::random_even(&mut rng, 6);
        let l = klat::Lattice::from_i64(&g).unwrap();
        let snf: Vec<i128> = l.gram().smith().diag.iter().map(|d| i128::try_from(d).unwrap()).collect();
        if snf != support::naive_invariant_factors(&g) {
            bad.push(format!("smith {g:?}"));
        }
        if l.signature().unwrap() != support::naive_signature(&g) {
            bad.push(format!("signature {g:?}"));
        }
        let v: Vec<i64> = (0..g.len()).map(|_| rng.gen_range(-4..=4)).collect();
        if v.iter().any(|&x| x != 0) {
            let vb: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
            if l.divisibility(&vb).unwrap() != BigInt::from(support::naive_divisibility(&g, &v)) {
                bad.push(format!("divisibility {g:?} {v:?}"));
            }
        }
    }
    Outcome {
        ok: bad.is_empty(),
        detail: format!("50 definite + 100 indefinite lattices, {} disagreements, {}", bad.len(), secs(t.elapsed())),
        deviations: bad,
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let all = all_realizations().expect("shipped isometries load");
    let mut bad = Vec::new();
    for (table, row, g) in &all {
        bad.extend(support::lemma_failures(&format!("{table} row {row}"), g, &mut rng, 100));
    }
    Outcome { ok: bad.is_empty(), detail: format!("{} isometries × 100 vectors, {} failures", all.len(), bad.len()), deviations: bad }
}

fn criterion_8() -> Outcome {
    let (a, ca, _) = klat(&["verify", "--table", "all", "--jobs", "1", "--json"]);
    let (b, cb, _) = klat(&["verify", "--table", "all", "--jobs", "8", "--json"]);
    let ok = a == b && ca == 0 && cb == 0 && !a.is_empty();
    Outcome { ok, detail: format!("{} bytes, identical: {}", a.len(), a == b), deviations: vec![] }
}

#[test]
fn acceptance() {
    let criteria: [(u32, &str, fn() -> Outcome); 8] = [
        (1, "Lambda tables", criterion_1),
        (2, "fourfold tables", criterion_2),
        (3, "symplectic groups", criterion_3),
        (4, "symplectic embeddings", criterion_4),
        (5, "higher dimensions", criterion_5),
        (6, "oracle equivalence", criterion_6),
        (7, "lemma suite", criterion_7),
        (8, "determinism", criterion_8),
    ];
    let mut unexpected = Vec::new();
    for (n, name, check) in criteria {
        let o = check();
        let known: Option<BTreeSet<&str>> = KNOWN.iter().find(|(k, _)| *k == n).map(|(_, d)| d.iter().copied().collect());
        let seen: BTreeSet<&str> = o.deviations.iter().map(String::as_str).collect();
        let line = if o.ok {
            "PASS"
        } else if known.as_ref() == Some(&seen) {
            "FAIL (known)"
        } else {
            unexpected.push(n);
            "FAIL"
        };
        let extra = if o.ok || o.deviations.is_empty() { String::new() } else { format!(" [{}]", o.deviations.join(", ")) };
        // Written to the handle directly so the lines survive output capture.
        writeln!(std::io::stderr(), "criterion {n} {name}: {line}: {}{extra}", o.detail).ok();
    }
    assert!(unexpected.is_empty(), "criteria failing beyond the known deviations: {unexpected:?}");
}
