use std::fs;
use std::path::Path;
use std::process::ExitCode;

use klat::automorphism::{orthogonal_group, restricted_group};
use klat::embeddings::{find_primitive_embeddings, represent_primitive};
use klat::enumerate::short_vectors;
use klat::genus::{is_prime, p_elementary_invariants};
use klat::io::{parse_lattice, LatticeOut};
use klat::kummer::report::{check_pins, render_markdown, shipped_pins, ClassificationRow, PinCheck, Summary};
use klat::kummer::{has_trivial_divisibility, verify_table};
use klat::{DiscriminantGroup, Error, Lattice, Result, Sublattice};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use serde_json::json;

fn load(path: &Path) -> Result<Lattice> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_lattice(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

pub fn info(path: &Path, as_json: bool) -> Result<ExitCode> {
    let l = load(path)?;
    let (plus, minus) = l.signature()?;
    let disc = DiscriminantGroup::of(&l)?;
    let orders = strings(&disc.cyclic_orders);
    let group = if orders.is_empty() { "unimodular".to_string() } else { orders.iter().map(|o| format!("Z/{o}")).collect::<Vec<_>>().join(" + ") };
    let q: Vec<String> = disc.q_values.iter().map(ToString::to_string).collect();
    let p_elementary = disc
        .cyclic_orders
        .first()
        .and_then(|d| d.to_u64())
        .filter(|&p| is_prime(p))
        .and_then(|p| p_elementary_invariants(&l, p).ok());
    if as_json {
        print_json(&json!({
            "rank": l.rank(),
            "signature": [plus, minus],
            "determinant": l.det().to_string(),
            "discriminantGroup": orders,
            "qValues": q,
            "pElementary": p_elementary,
        }));
    } else {
        if orders.is_empty() {
            println!("rank {}, signature ({plus},{minus}), unimodular", l.rank());
        } else {
            println!("rank {}, signature ({plus},{minus}), disc {group}", l.rank());
        }
        println!("determinant {}", l.det());
        if !orders.is_empty() {
            println!("q on generators: {}", q.join(", "));
        }
        if let Some(inv) = p_elementary {
            match inv.delta {
                Some(d) => println!("{}-elementary: r = {}, a = {}, delta = {d}", inv.p, inv.r, inv.a),
                None => println!("{}-elementary: r = {}, a = {}", inv.p, inv.r, inv.a),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Report<'a> {
    tool_version: &'static str,
    command: String,
    rows: &'a [ClassificationRow],
    summary: &'a Summary,
    unexpected: &'a [String],
    missing: &'a [String],
}

pub fn verify(table: &str, out: Option<&Path>, jobs: Option<usize>, as_json: bool) -> Result<ExitCode> {
    if let Some(j) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    }
    let rows = verify_table(table)?;
    let PinCheck { summary, unexpected, missing } = check_pins(&rows, &shipped_pins());
    let report = Report {
        tool_version: env!("CARGO_PKG_VERSION"),
        command: format!("verify --table {table}"),
        rows: &rows,
        summary: &summary,
        unexpected: &unexpected,
        missing: &missing,
    };
    let text = serde_json::to_string_pretty(&report).expect("serializable");
    if let Some(path) = out {
        fs::write(path, format!("{text}\n")).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    }
    if as_json {
        println!("{text}");
    } else {
        print!("{}", render_markdown(&rows));
        println!(
            "{} rows: {} verified, {} mismatch, {} analytically impossible",
            summary.rows, summary.verified, summary.mismatch, summary.impossible
        );
        for u in &unexpected {
            println!("unexpected: {u}");
        }
        for m in &missing {
            println!("pinned but not observed: {m}");
        }
    }
    Ok(if unexpected.is_empty() && missing.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn wall_kind(d: &BigInt) -> Option<&'static str> {
    match d.to_u32()? {
        6 => Some("div-6"),
        3 => Some("div-3"),
        2 => Some("div-2"),
        _ => None,
    }
}

pub fn walls(n: u32, path: &Path, max_norm: i64, bound: i64) -> Result<ExitCode> {
    if n != 2 {
        return Err(Error::Inapplicable(format!(
            "walls are only tabulated for n = 2 (got {n}); every wall has nontrivial divisibility, test sublattices with `embed`"
        )));
    }
    let l = load(path)?;
    let mut counts = std::collections::BTreeMap::new();
    let mut vectors = Vec::new();
    for norm in (2..=max_norm.abs()).step_by(2) {
        let target = BigInt::from(-norm);
        let reps = represent_primitive(&l, &target, None, bound)?;
        for v in reps.vectors {
            let d = v.divisibility();
            let Some(kind) = (norm == 6).then(|| wall_kind(&d)).flatten() else { continue };
            *counts.entry(kind).or_insert(0usize) += 1;
            vectors.push(json!({ "coords": v.coords, "divisibility": v.divisibility, "kind": kind }));
        }
    }
    print_json(&json!({ "n": n, "bound": bound, "maxNorm": max_norm, "counts": counts, "walls": vectors }));
    Ok(ExitCode::SUCCESS)
}

/// `n` when `ambient` looks like `U³ ⊕ ⟨−2n−2⟩`.
fn kummer_n(ambient: &Lattice) -> Option<u32> {
    let (plus, minus) = ambient.signature().ok()?;
    let disc = DiscriminantGroup::of(ambient).ok()?;
    if ambient.rank() != 7 || (plus, minus) != (3, 4) || disc.cyclic_orders.len() != 1 {
        return None;
    }
    let k = ambient.det().abs().to_u32()?;
    (k >= 6 && k % 2 == 0).then(|| k / 2 - 1)
}

pub fn embed(sub: &Path, ambient: &Path, bound: i64, limit: usize) -> Result<ExitCode> {
    let s = load(sub)?;
    let l = load(ambient)?;
    let found = find_primitive_embeddings(&s, &l, bound, limit)?;
    let n = kummer_n(&l);
    let mut out = Vec::new();
    for sol in &found.solutions {
        let mut entry = json!({
            "images": sol.images.to_string_rows(),
            "primitive": sol.primitive,
            "glueIndex": sol.glue_index.to_string(),
        });
        if let Some(n) = n {
            let sl = sol.sublattice(&l)?;
            if s.is_definite() {
                entry["trivialDivisibility"] = json!(has_trivial_divisibility(&sl)?);
            }
            if n == 2 && s.is_definite() {
                entry["walls"] = json!(walls_in(&sl)?);
                entry["wallContaining"] = json!(!walls_in(&sl)?.is_empty());
            }
        }
        out.push(entry);
    }
    print_json(&json!({
        "bound": found.bound,
        "complete": found.complete,
        "truncated": found.truncated,
        "kummerN": n,
        "solutions": out,
    }));
    Ok(ExitCode::SUCCESS)
}

/// Square −6 classes of a definite `S ⊂ L₂` with divisibility 2, 3 or 6.
fn walls_in(s: &Sublattice) -> Result<Vec<serde_json::Value>> {
    let sl = s.lattice()?;
    let mut out = Vec::new();
    for v in short_vectors(&sl, &BigInt::from(6))? {
        if v.norm.abs() != BigInt::from(6) || v.norm.is_positive() {
            continue;
        }
        let w = s.to_ambient(&v.coords);
        let d = s.ambient().divisibility(&w)?;
        if let Some(kind) = wall_kind(&d) {
            out.push(json!({ "coords": strings(&w), "kind": kind }));
        }
    }
    Ok(out)
}

pub fn group(path: &Path, restricted: bool) -> Result<ExitCode> {
    let l = load(path)?;
    let g = if restricted { restricted_group(&l)? } else { orthogonal_group(&l)? };
    let generators: Vec<Vec<Vec<String>>> = g.generators().iter().map(|h| h.matrix().to_string_rows()).collect();
    print_json(&json!({
        "lattice": LatticeOut::from(&l),
        "restricted": restricted,
        "order": g.order(),
        "generators": generators,
    }));
    Ok(ExitCode::SUCCESS)
}
