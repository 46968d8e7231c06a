//! Symplectic actions: restricted groups of Dynkin lattices of rank at most
//! four and their wall-free embeddings `R(−1) ⊂ U³ ⊕ ⟨−6⟩`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use super::gluing::glued_embedding;
use super::report::{ClassificationRow, RowBuilder};
use super::{has_trivial_divisibility, identify, nontrivial_divisibility_witness, Identification, KummerContext};
use crate::automorphism::restricted_group;
use crate::discriminant::DiscriminantGroup;
use crate::embeddings::{contains_u_summand, find_embedding_where, find_primitive_embeddings, EmbeddingSolution, DEFAULT_BOUND};
use crate::error::{Error, Result};
use crate::genus::is_square;
use crate::groups::{matches_label, AbstractGroup, Label};
use crate::lattice::{Lattice, Sublattice};
use crate::named;

/// Dynkin lattices of rank ≤ 4 with a nontrivial restricted group, and
/// the printed group label.
pub const DYNKIN: [(&str, &str); 11] = [
    ("A1^2", "2"),
    ("A2", "3"),
    ("A1^3", "2^2"),
    ("A1+A2", "S3"),
    ("A3", "A4"),
    ("A1^4", "2^3"),
    ("A1^2+A2", "2.S3"),
    ("A1+A3", "S4"),
    ("A2^2", "2.3^2"),
    ("A4", "A5"),
    ("D4", "2^3.A4"),
];

/// Second table: `R`, group, printed `T_G(X)` and the induced flag.
pub const EMBEDDING_ROWS: [(&str, &str, &str, bool); 10] = [
    ("A1^2", "2", "U+A1^2+(-6)", true),
    ("A2", "3", "U+A2+(-6)", true),
    ("A1^3", "2^2", "(-6)+A1^3", true),
    ("A1+A2", "S3", "(-6)+A1+A2", true),
    ("A3", "A4", "(-6)+A3", true),
    ("A1^2+A2", "2.S3", "[[4,-2,0],[-2,4,0],[0,0,6]]", false),
    ("A1+A3", "S4", "A1^2+(12)", false),
    ("A4", "A5", "A1+[[2,-1],[-1,8]]", false),
    ("A4", "A5", "A2+(10)", false),
    ("D4", "2^3.A4", "[[4,-2,6],[-2,4,0],[6,0,14]]", false),
];

pub const GROUP_TABLE: &str = "5-groups";
pub const EMBEDDING_TABLE: &str = "5-embeddings";

fn group_row(index: usize) -> ClassificationRow {
    let (name, label) = DYNKIN[index];
    let mut b = RowBuilder::new(GROUP_TABLE, &(index + 1).to_string(), name, "");
    let run = |b: &mut RowBuilder| -> Result<()> {
        let r = named::parse(name)?;
        let label_parsed = Label::parse(label)?;
        let g = restricted_group(&r)?;
        b.cell("rank", r.rank().to_string(), r.rank().to_string());
        b.cell("|G|", label_parsed.order(), g.order());
        let ag = AbstractGroup::from_table(g.cayley_table())?;
        b.cell("G", label, if matches_label(&ag, &label_parsed) { label.to_string() } else { format!("not {label}") });
        Ok(())
    };
    if let Err(e) = run(&mut b) {
        b.failed("computation", "ok", e);
    }
    b.finish()
}

pub fn verify_groups() -> Vec<ClassificationRow> {
    (0..DYNKIN.len()).into_par_iter().map(group_row).collect()
}

/// A wall-free primitive embedding of `R(−1)` into `L₂` whose complement
/// matches `printed`.
#[derive(Clone, Debug)]
pub struct SymplecticEmbedding {
    pub solution: EmbeddingSolution,
    pub coinvariant: Sublattice,
    pub complement: Lattice,
    pub identification: Identification,
}

pub fn wall_free_embedding(ctx: &KummerContext, r: &Lattice, printed: &Lattice, bound: i64) -> Result<Option<SymplecticEmbedding>> {
    let s = r.negate();
    let accept = |sol: &EmbeddingSolution| -> bool {
        let Ok(sub) = sol.sublattice(&ctx.l_n) else { return false };
        if !has_trivial_divisibility(&sub).unwrap_or(false) {
            return false;
        }
        let Ok(comp) = sub.orthogonal_complement().lattice() else { return false };
        identify(&comp, printed).is_ok_and(|id| id.matches())
    };
    let solution = match find_embedding_where(&s, &ctx.l_n, bound, &accept)? {
        Some(sol) => sol,
        None => match glued_embedding(ctx, &s, printed, &accept)? {
            Some(sol) => sol,
            None => return Ok(None),
        },
    };
    let coinvariant = solution.sublattice(&ctx.l_n)?;
    let complement = coinvariant.orthogonal_complement().lattice()?;
    let identification = identify(&complement, printed)?;
    Ok(Some(SymplecticEmbedding { solution, coinvariant, complement, identification }))
}

fn primes_of(n: u64) -> Vec<u64> {
    let (mut n, mut out, mut p) = (n, Vec::new(), 2);
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Multiset of `q` on the `p`-primary part, negated on request.
fn p_part_values(l: &Lattice, p: u64, negate: bool) -> Result<BTreeMap<String, usize>> {
    let f = DiscriminantGroup::of(l)?.finite_form().ok_or_else(|| Error::Inapplicable("discriminant group too large".into()))?;
    let f = if negate { f.negated() } else { f };
    let mut out = BTreeMap::new();
    for x in f.elements() {
        let mut y = x.clone();
        for _ in 0..64 {
            if y.iter().all(|&c| c == 0) {
                break;
            }
            y = y.iter().zip(&f.orders).map(|(c, d)| c * p % d).collect();
        }
        if y.iter().all(|&c| c == 0) {
            *out.entry(f.q_of(&x).to_string()).or_insert(0) += 1;
        }
    }
    Ok(out)
}

/// For primes absent from `A_L`, a primitive `S ⊕ T ⊂ L` glues the `p`-parts
/// of `A_S` and `A_T` by an anti-isometry. Differing value multisets rule
/// out every primitive embedding with complement `T`.
pub fn glue_obstruction(s: &Lattice, t: &Lattice, ambient: &Lattice) -> Result<Option<String>> {
    let det = |l: &Lattice| l.det().abs().to_u64().ok_or_else(|| Error::Overflow(l.det().to_string()));
    let (ds, dt, dl) = (det(s)?, det(t)?, det(ambient)?);
    for p in primes_of(ds * dt) {
        if dl % p == 0 {
            continue;
        }
        let (qs, qt) = (p_part_values(s, p, false)?, p_part_values(t, p, true)?);
        if qs != qt {
            let show = |m: &BTreeMap<String, usize>| m.keys().cloned().collect::<Vec<_>>().join(", ");
            return Ok(Some(format!(
                "A_L has no {p}-torsion, so the {p}-parts of A_S and A_T must be anti-isometric; q takes {{{}}} on A_S and −q takes {{{}}} on A_T",
                show(&qs),
                show(&qt)
            )));
        }
    }
    Ok(None)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "Yes"
    } else {
        "No"
    }
}

fn embedding_row(ctx: &KummerContext, index: usize) -> ClassificationRow {
    let (name, label, t_name, induced) = EMBEDDING_ROWS[index];
    let s_name = format!("{name}(-1)");
    let mut b = RowBuilder::new(EMBEDDING_TABLE, &(index + 1).to_string(), &s_name, t_name);
    let run = |b: &mut RowBuilder| -> Result<()> {
        let r = named::parse(name)?;
        let printed = named::parse(t_name)?;
        let g = restricted_group(&r)?;
        b.cell("|G|", Label::parse(label)?.order(), g.order());
        if let Some(why) = glue_obstruction(&r.negate(), &printed, &ctx.l_n)? {
            b.impossible("T_G(X)", t_name, "none", why);
            return Ok(());
        }
        let Some(e) = wall_free_embedding(ctx, &r, &printed, DEFAULT_BOUND)? else {
            return Err(Error::Inconsistent(format!(
                "no wall-free primitive embedding with matching complement up to coordinate bound {DEFAULT_BOUND}"
            )));
        };
        let reach = e.solution.images.to_rows().iter().flatten().map(|x| x.abs()).max().unwrap_or_default();
        b.note(format!("embedding coordinates bounded by {reach}"));
        b.cell("rank", r.rank(), e.coinvariant.rank());
        b.cell("rank S + rank T", 7, e.coinvariant.rank() + e.complement.rank());
        let q = (e.coinvariant.det() * e.complement.det()).abs();
        let square = &q % 6 == BigInt::from(0) && is_square(&(&q / 6));
        b.cell("det S·det T/6", "square", if square { "square" } else { "not a square" });
        b.cell("trivial divisibility", "yes", "yes");
        if let Some(n) = e.identification.note() {
            b.note(format!("T_G(X): {n}"));
        }
        b.cell("T_G(X)", t_name, t_name);
        let in_lambda = ctx.embedding.images.mul(&e.solution.images);
        let t_lambda = Sublattice::new(ctx.lambda.clone(), in_lambda)?.orthogonal_complement().lattice()?;
        b.cell("induced", yes_no(induced), yes_no(contains_u_summand(&t_lambda, DEFAULT_BOUND)?.is_yes()));
        Ok(())
    };
    if let Err(e) = run(&mut b) {
        b.failed("computation", "ok", e);
    }
    b.finish()
}

pub fn verify_embeddings() -> Vec<ClassificationRow> {
    let ctx = KummerContext::new(2).expect("n = 2");
    (0..EMBEDDING_ROWS.len()).into_par_iter().map(|i| embedding_row(&ctx, i)).collect()
}

/// A wall-free `S ⊂ L` forces `A_S ↪ A_{S^⊥}`, hence `l(A_S) ≤ rank L − rank S`.
pub fn length_obstruction(r: &Lattice, ambient_rank: usize) -> Result<bool> {
    let l = DiscriminantGroup::of(r)?.length();
    Ok(r.rank() + l > ambient_rank)
}

/// `A1⁴(−1)` in `L₂`: the length bound and, for every embedding found up to
/// `bound`, an explicit class of nontrivial divisibility.
pub fn a1_4_row(bound: i64, limit: usize) -> ClassificationRow {
    let mut b = RowBuilder::new(EMBEDDING_TABLE, "A1^4", "A1^4(-1)", "absent");
    let run = |b: &mut RowBuilder| -> Result<()> {
        let ctx = KummerContext::new(2)?;
        let r = named::parse("A1^4")?;
        b.cell("rank + l(A)", "8", r.rank() + DiscriminantGroup::of(&r)?.length());
        b.cell("length obstruction", "yes", if length_obstruction(&r, ctx.l_n.rank())? { "yes" } else { "no" });
        let found = find_primitive_embeddings(&r.negate(), &ctx.l_n, bound, limit)?;
        let mut with_witness = 0;
        for sol in &found.solutions {
            let sub = sol.sublattice(&ctx.l_n)?;
            if let Some((w, p)) = nontrivial_divisibility_witness(&sub)? {
                if ctx.l_n.divisibility(&w)? % p == BigInt::from(0) {
                    with_witness += 1;
                }
            }
        }
        b.cell("embeddings with a wall class", found.solutions.len(), with_witness);
        b.note(format!(
            "{} primitive embeddings examined (coordinate bound {}, search {})",
            found.solutions.len(),
            found.bound,
            if found.truncated { "truncated" } else { "exhausted" }
        ));
        if found.solutions.is_empty() {
            return Err(Error::Inconsistent("no embedding of A1^4(-1) found to test".into()));
        }
        Ok(())
    };
    if let Err(e) = run(&mut b) {
        b.failed("computation", "ok", e);
    }
    b.finish()
}

/// Both tables plus the `A1⁴` check.
pub fn verify_symplectic() -> Vec<ClassificationRow> {
    let mut rows = verify_groups();
    rows.extend(verify_embeddings());
    rows.push(a1_4_row(1, 200));
    rows
}
