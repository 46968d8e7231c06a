//! Coinvariant and invariant lattices of prime order isometries of `Λ = U⁴`.

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use super::identify;
use super::realize::realization;
use super::report::{ClassificationRow, RowBuilder};
use crate::embeddings::{contains_u_summand, hyperbolic_pair, DEFAULT_BOUND};
use crate::error::Result;
use crate::genus::{bcms_square_condition, exists_2elementary_hyperbolic, exists_pelementary_hyperbolic, p_elementary_invariants, Criterion};
use crate::isometry::{invariant_coinvariant, Decomposition, Isometry};
use crate::lattice::{Lattice, Sublattice};
use crate::named;

/// A printed row: `S_G(Λ)`, `T_G(Λ)`, `rk T`, `a`, `δ` and the induced flag.
#[derive(Clone, Copy, Debug)]
pub struct LambdaRow {
    pub table: &'static str,
    pub row: &'static str,
    pub p: u64,
    pub s: &'static str,
    pub t: &'static str,
    pub rank_t: usize,
    pub a: usize,
    pub delta: Option<u8>,
    pub induced: Option<bool>,
}

const fn row2(
    table: &'static str,
    row: &'static str,
    s: &'static str,
    t: &'static str,
    rank_t: usize,
    a: usize,
    delta: u8,
    induced: Option<bool>,
) -> LambdaRow {
    LambdaRow { table, row, p: 2, s, t, rank_t, a, delta: Some(delta), induced }
}

const fn row_odd(table: &'static str, p: u64, row: &'static str, s: &'static str, t: &'static str, rank_t: usize, a: usize, induced: bool) -> LambdaRow {
    LambdaRow { table, row, p, s, t, rank_t, a, delta: None, induced: Some(induced) }
}

pub const LAMBDA_ROWS: [LambdaRow; 18] = [
    row2("2.1", "1", "U^2+<-2>^2", "<2>^2", 2, 2, 1, Some(false)),
    row2("2.1", "2", "U^2", "U^2", 4, 0, 0, Some(true)),
    row2("2.1", "3", "U+U(2)", "U+U(2)", 4, 2, 0, Some(true)),
    row2("2.1", "4", "U+<2>+<-2>", "U+<2>+<-2>", 4, 2, 1, Some(true)),
    row2("2.1", "5", "U(2)+U(2)", "U(2)+U(2)", 4, 4, 0, Some(false)),
    row2("2.1", "6", "U(2)+<2>+<-2>", "U(2)+<2>+<-2>", 4, 4, 1, Some(false)),
    row2("2.1", "7", "<2>^2", "U^2+<-2>^2", 6, 2, 1, Some(true)),
    row2("2.2", "1", "U^3", "U", 2, 0, 0, None),
    row2("2.2", "2", "U^2+U(2)", "U(2)", 2, 2, 0, None),
    row2("2.2", "3", "U^2+<2>+<-2>", "<2>+<-2>", 2, 2, 1, None),
    row2("2.2", "4", "U+<2>^2", "U+<-2>^2", 4, 2, 1, None),
    row2("2.2", "5", "<2>^3+<-2>", "<2>+<-2>^3", 4, 4, 1, None),
    row_odd("2.3", 3, "1", "U^2+A2(-1)", "A2", 2, 1, false),
    row_odd("2.3", 3, "2", "U^2", "U^2", 4, 0, true),
    row_odd("2.3", 3, "3", "U+U(3)", "U+U(3)", 4, 2, true),
    row_odd("2.3", 3, "4", "A2", "U^2+A2(-1)", 6, 1, true),
    row_odd("2.4", 5, "1", "U+H5", "U+H5", 4, 1, true),
    row_odd("2.5", 7, "1", "U^2+K7(-1)", "K7", 2, 1, false),
];

pub const LAMBDA_TABLES: [&str; 5] = ["2.1", "2.2", "2.3", "2.4", "2.5"];

pub fn lambda_row(table: &str, row: &str) -> Option<&'static LambdaRow> {
    LAMBDA_ROWS.iter().find(|r| r.table == table && r.row == row)
}

/// The shipped isometry of a row with its decomposition.
#[derive(Clone, Debug)]
pub struct Realized {
    pub isometry: Isometry,
    pub decomposition: Decomposition,
    pub invariant: Lattice,
    pub coinvariant: Lattice,
}

pub fn realized(table: &str, row: &str) -> Result<Realized> {
    let isometry = realization(table, row)?;
    let decomposition = invariant_coinvariant(&isometry)?;
    let invariant = decomposition.invariant.lattice()?;
    let coinvariant = decomposition.coinvariant.lattice()?;
    Ok(Realized { isometry, decomposition, invariant, coinvariant })
}

/// Splits off copies of `U` (found explicitly) until the signature is
/// `(1, *)` or `(*, 1)`; `None` when `L` is definite or no pair turns up.
pub fn hyperbolic_core(l: &Lattice) -> Result<Option<Lattice>> {
    if l.is_definite() {
        return Ok(None);
    }
    let mut core = l.clone();
    loop {
        let (plus, minus) = core.signature()?;
        if plus.min(minus) <= 1 {
            return Ok(Some(core));
        }
        let Some((x, y)) = hyperbolic_pair(&core, DEFAULT_BOUND)? else { return Ok(None) };
        let plane = Sublattice::from_columns(core.clone(), &[x, y])?;
        core = plane.orthogonal_complement().lattice()?;
    }
}

/// The hyperbolic existence criterion applied to the hyperbolic core of `L`
/// (orientation is irrelevant: `(r, a, δ)` are unchanged by `L ↦ L(−1)`).
pub fn existence_on_core(l: &Lattice, p: u64) -> Result<Option<Criterion>> {
    let Some(core) = hyperbolic_core(l)? else { return Ok(None) };
    let inv = p_elementary_invariants(&core, p)?;
    Ok(Some(match inv.delta {
        Some(delta) => exists_2elementary_hyperbolic(inv.r, inv.a, delta),
        None => exists_pelementary_hyperbolic(inv.r, inv.a, p)?,
    }))
}

fn criterion_text(c: &Criterion) -> String {
    match c.failing_clause {
        None => "holds".into(),
        Some(clause) => format!("fails ({clause})"),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn identification_cell(b: &mut RowBuilder, column: &str, found: &Lattice, printed_name: &str) -> Result<()> {
    let printed = named::parse(printed_name)?;
    let id = identify(found, &printed)?;
    let got = match &id {
        super::Identification::Different(why) => format!("not {printed_name} ({why})"),
        _ => printed_name.to_string(),
    };
    if let Some(n) = id.note() {
        b.note(format!("{column}: {n}"));
    }
    b.cell(column, printed_name, got);
    Ok(())
}

fn fill(b: &mut RowBuilder, spec: &LambdaRow) -> Result<()> {
    let r = realized(spec.table, spec.row)?;
    let (s, t, dec) = (&r.coinvariant, &r.invariant, &r.decomposition);
    let p = spec.p;
    identification_cell(b, "S", s, spec.s)?;
    identification_cell(b, "T", t, spec.t)?;
    let s_sign = if spec.table == "2.2" { 3 } else { 2 };
    b.cell("sign S", format!("({s_sign},*)"), format!("({},*)", s.signature()?.0));
    b.cell("rk T", spec.rank_t, t.rank());
    let (is, it) = (p_elementary_invariants(s, p)?, p_elementary_invariants(t, p)?);
    let a = if is.a == it.a && it.a == dec.a { dec.a.to_string() } else { format!("S {} T {} glue {}", is.a, it.a, dec.a) };
    b.cell("a", spec.a, a);
    if let Some(delta) = spec.delta {
        let d = match (is.delta, it.delta) {
            (Some(x), Some(y)) if x == y => x.to_string(),
            (x, y) => format!("S {x:?} T {y:?}"),
        };
        b.cell("δ", delta, d);
    }
    let pa = BigInt::from(p).pow(spec.a as u32);
    let index = &dec.glue_index;
    let consistent = (s.det() * t.det()).abs() == index * index && dec.a <= dec.m;
    b.cell("glue", &pa, if consistent { index.to_string() } else { format!("inconsistent ({index})") });
    for (name, l) in [("existence S", s), ("existence T", t)] {
        match existence_on_core(l, p)? {
            Some(c) => b.cell(name, "holds", criterion_text(&c)),
            None => b.note(format!("{name}: criterion not applicable (definite or no U splits off)")),
        }
    }
    if p > 2 && s.rank() == p as usize - 1 {
        b.cell("square condition", "holds", if bcms_square_condition(p, s.rank(), &s.det())? { "holds" } else { "fails" });
    }
    if let Some(induced) = spec.induced {
        let has_u = contains_u_summand(t, DEFAULT_BOUND)?;
        b.cell("induced", yes_no(induced), yes_no(has_u.is_yes()));
    }
    Ok(())
}

pub fn verify_row(spec: &LambdaRow) -> ClassificationRow {
    let mut b = RowBuilder::new(spec.table, spec.row, spec.s, spec.t);
    if let Err(e) = fill(&mut b, spec) {
        b.failed("computation", "ok", e);
    }
    b.finish()
}

/// Every row of the requested tables, in printed order.
pub fn verify_lambda_tables(tables: &[&str]) -> Vec<ClassificationRow> {
    let rows: Vec<&LambdaRow> = LAMBDA_ROWS.iter().filter(|r| tables.contains(&r.table)).collect();
    rows.par_iter().map(|r| verify_row(r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_counts() {
        let counts: Vec<usize> = LAMBDA_TABLES.iter().map(|t| LAMBDA_ROWS.iter().filter(|r| r.table == *t).count()).collect();
        assert_eq!(counts, vec![7, 5, 4, 1, 1]);
    }

    #[test]
    fn core_criterion() {
        let l = named::parse("U+<2>+<-2>").unwrap();
        assert!(existence_on_core(&l, 2).unwrap().unwrap().holds);
        assert!(existence_on_core(&named::parse("U(2)+U(2)").unwrap(), 2).unwrap().is_none());
        assert_eq!(hyperbolic_core(&named::parse("U^2+<-2>^2").unwrap()).unwrap().unwrap().rank(), 4);
        assert!(existence_on_core(&named::parse("A2").unwrap(), 3).unwrap().is_none());
        assert!(existence_on_core(&named::parse("U^2+K7(-1)").unwrap(), 7).unwrap().unwrap().holds);
    }

    #[test]
    fn all_lambda_rows_verify() {
        for r in verify_lambda_tables(&LAMBDA_TABLES) {
            assert!(r.status.is_verified(), "{} row {}: {:?} {:?}", r.table, r.row, r.status, r.recomputed);
        }
    }
}
