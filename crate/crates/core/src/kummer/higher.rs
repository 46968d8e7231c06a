//! Kummer type manifolds of dimension `2n > 4`: minimal dimensions of the
//! remaining non-symplectic actions, the `A₁⁴` and `A₂²` symplectic cases and
//! the rank plus length criterion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::gluing::base_in_overlattice;
use super::lambda::realized;
use super::report::{ClassificationRow, RowBuilder};
use super::symplectic::{length_obstruction, DYNKIN};
use super::{has_trivial_divisibility, identify, KummerContext};
use crate::discriminant::DiscriminantGroup;
use crate::embeddings::{find_embedding_where, find_primitive_embeddings, glue_check, represent_primitive, DEFAULT_BOUND};
use crate::enumerate::short_vectors;
use crate::error::{Error, Result};
use crate::lattice::{overlattice, Lattice, Sublattice};
use crate::matrix::{vector_gcd, IntMatrix};
use crate::named;

pub const TABLE: &str = "6";

/// Largest `n` tried for the minimal dimension.
pub const MAX_N: u32 = 12;

/// Printed rows: number, host table and row, `S`, `T`, minimal dimension.
pub const MINIMAL_ROWS: [(&str, (&str, &str), &str, &str, u32); 3] = [
    ("1.1", ("2.1", "1"), "U^2+<-2>^2", "<2>^2", 8),
    ("1.5", ("2.1", "5"), "U(2)+U(2)", "U(2)+U(2)", 6),
    ("5.1", ("2.5", "1"), "U^2+K7(-1)", "K7", 6),
];

/// `c·ℤ`, or `2c·ℤ` when `G/c` is even, contains every norm.
fn norm_modulus(l: &Lattice) -> BigInt {
    let c = l.gram().content();
    let even = (0..l.rank()).all(|i| (&l.gram()[(i, i)] / &c).is_even());
    if even {
        c * 2
    } else {
        c
    }
}

/// Least `n ≥ 2` with a primitive `v ∈ host` of norm `2n+2`, with the
/// witness; `Err` when a value is neither excluded nor found.
pub fn minimal_n(host: &Lattice) -> Result<(u32, Vec<BigInt>, Vec<String>)> {
    let modulus = norm_modulus(host);
    let mut skipped = Vec::new();
    for n in 2..=MAX_N {
        let norm = BigInt::from(2 * n + 2);
        if !(&norm % &modulus).is_zero() {
            skipped.push(format!("n = {n}: every norm is divisible by {modulus}"));
            continue;
        }
        let reps = represent_primitive(host, &norm, None, DEFAULT_BOUND)?;
        if let Some(v) = reps.vectors.first() {
            return Ok((n, v.coords(), skipped));
        }
        if !reps.complete {
            return Err(Error::Inconsistent(format!("norm {norm} neither excluded nor found up to bound {DEFAULT_BOUND}")));
        }
        skipped.push(format!("n = {n}: no primitive vector of norm {norm}"));
    }
    Err(Error::Inconsistent(format!("no primitive representation for n ≤ {MAX_N}")))
}

fn minimal_row(index: usize) -> ClassificationRow {
    let (no, (table, row), s, t, dim) = MINIMAL_ROWS[index];
    let mut b = RowBuilder::new(TABLE, no, s, t);
    let run = |b: &mut RowBuilder| -> Result<()> {
        let r = realized(table, row)?;
        let host = &r.invariant;
        let id = identify(host, &named::parse(t)?)?;
        b.cell("T", t, if id.matches() { t.to_string() } else { format!("not {t}") });
        let (n, v, skipped) = minimal_n(host)?;
        for s in skipped {
            b.note(s);
        }
        let coords: Vec<String> = v.iter().map(ToString::to_string).collect();
        b.note(format!("n = {n}: v = ({}) with div {}", coords.join(", "), host.divisibility(&v)?));
        b.cell("minimal dimension", dim, 2 * n);
        Ok(())
    };
    if let Err(e) = run(&mut b) {
        b.failed("computation", "ok", e);
    }
    b.finish()
}

/// A wall class `w = Σ cᵢrᵢ` of `A₁⁴(−1) ⊂ L_n`: `w² = −2n−2`,
/// `div(w) = 2` and `(v + w)/2 ∈ Λ`.
pub fn a1_4_wall_class(ctx: &KummerContext, sub: &Sublattice) -> Result<Option<Vec<BigInt>>> {
    let target = i64::from(ctx.n) + 1;
    let range = -2i64..=2;
    for c0 in range.clone() {
        for c1 in range.clone() {
            for c2 in range.clone() {
                for c3 in range.clone() {
                    let c = [c0, c1, c2, c3];
                    if c.iter().map(|x| x * x).sum::<i64>() != target {
                        continue;
                    }
                    let c: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
                    if !vector_gcd(&c).is_one() {
                        continue;
                    }
                    let w = sub.to_ambient(&c);
                    if ctx.l_n.divisibility(&w)? != BigInt::from(2) {
                        continue;
                    }
                    let in_lambda = ctx.embedding.images.mul_vec(&w);
                    let half_integral = in_lambda.iter().zip(&ctx.mukai).all(|(a, b)| (a + b).is_even());
                    if half_integral {
                        return Ok(Some(w));
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn a1_4_row(n: u32, limit: usize) -> ClassificationRow {
    let mut b = RowBuilder::new(TABLE, &format!("A1^4 n={n}"), "A1^4(-1)", "absent");
    let run = |b: &mut RowBuilder| -> Result<()> {
        let ctx = KummerContext::new(n)?;
        let s = named::parse("A1^4")?.negate();
        let mut found = find_primitive_embeddings(&s, &ctx.l_n, 1, limit)?;
        if found.solutions.is_empty() {
            found = find_primitive_embeddings(&s, &ctx.l_n, 2, limit)?;
        }
        if found.solutions.is_empty() {
            return Err(Error::Inconsistent("no embedding of A1^4(-1) found to test".into()));
        }
        let (mut walls, mut nontrivial) = (0, 0);
        for sol in &found.solutions {
            let sub = sol.sublattice(&ctx.l_n)?;
            if a1_4_wall_class(&ctx, &sub)?.is_some() {
                walls += 1;
            }
            if !has_trivial_divisibility(&sub)? {
                nontrivial += 1;
            }
        }
        let total = found.solutions.len();
        b.cell("embeddings with a wall class", total, walls);
        b.cell("embeddings with nontrivial divisibility", total, nontrivial);
        b.note(format!(
            "{total} primitive embeddings examined (coordinate bound {}, search {})",
            found.bound,
            if found.truncated { "truncated" } else { "exhausted" }
        ));
        Ok(())
    };
    if let Err(e) = run(&mut b) {
        b.failed("computation", "ok", e);
    }
    b.finish()
}

/// `Λ ≅ U⁴` as the overlattice of `A₂(−1)² ⊕ A₂²` glued diagonally, with
/// the bases of `S = A₂(−1)²` and `T = A₂²` in its coordinates.
pub struct A2Square {
    pub lambda: Lattice,
    pub s: Sublattice,
    pub t: Sublattice,
    pub t_lattice: Lattice,
}

impl A2Square {
    pub fn new() -> Result<Self> {
        let a2 = Lattice::a(2);
        let a2m = a2.negate();
        let base = Lattice::direct_sum_all([&a2m, &a2m, &a2, &a2]);
        let w = [BigRational::new(BigInt::from(2), BigInt::from(3)), BigRational::new(BigInt::one(), BigInt::from(3))];
        let glue: Vec<Vec<BigRational>> = [[0usize, 4], [2, 6]]
            .iter()
            .map(|slots| {
                let mut g = vec![BigRational::zero(); 8];
                for &k in slots {
                    g[k] = w[0].clone();
                    g[k + 1] = w[1].clone();
                }
                g
            })
            .collect();
        let (lambda, p) = overlattice(&base, &glue)?;
        if !lambda.det().abs().is_one() {
            return Err(Error::Inconsistent("glued lattice is not unimodular".into()));
        }
        let basis = base_in_overlattice(&p)?;
        let s = Sublattice::new(lambda.clone(), basis.select_columns(&[0, 1, 2, 3]))?;
        let t = Sublattice::new(lambda.clone(), basis.select_columns(&[4, 5, 6, 7]))?;
        Ok(A2Square { lambda, s, t, t_lattice: Lattice::a(2).power(2) })
    }
}

/// Outcome of the `A₂²` construction for one `n`.
#[derive(Clone, Debug)]
pub struct A2Outcome {
    pub candidates: usize,
    /// `(v, s², t²)` for the first `v ∈ T` that works.
    pub witness: Option<(Vec<BigInt>, BigInt, BigInt)>,
    /// Candidates where saturation and trivial divisibility disagree.
    pub disagreements: usize,
    pub complement: Option<Lattice>,
}

/// Every primitive `v ∈ A₂²` with `v² = 2n+2`: is `⟨S, v⟩` saturated and does
/// `S` have trivial divisibility in `v^⊥`?
pub fn a2_square_construction(setup: &A2Square, n: u32) -> Result<A2Outcome> {
    let norm = BigInt::from(2 * n + 2);
    let vectors: Vec<Vec<BigInt>> = short_vectors(&setup.t_lattice, &norm)?
        .into_iter()
        .filter(|v| v.norm == norm && vector_gcd(&v.coords).is_one())
        .map(|v| v.coords)
        .collect();
    let mut out = A2Outcome { candidates: vectors.len(), witness: None, disagreements: 0, complement: None };
    let a2 = Lattice::a(2);
    for c in &vectors {
        let v = setup.t.to_ambient(c);
        let saturated = glue_check(&setup.s, &v)?;
        let vperp = Sublattice::from_columns(setup.lambda.clone(), &[v.clone()])?.orthogonal_complement();
        let ln = vperp.lattice()?;
        let s_cols: Vec<Vec<BigInt>> = setup
            .s
            .basis()
            .columns()
            .iter()
            .map(|x| {
                vperp
                    .coordinates(x)
                    .and_then(|y| y.iter().map(|q| q.is_integer().then(|| q.to_integer())).collect::<Option<Vec<_>>>())
                    .ok_or_else(|| Error::Inconsistent("S is not contained in v^⊥".into()))
            })
            .collect::<Result<_>>()?;
        let s_in = Sublattice::new(ln.clone(), IntMatrix::from_columns(ln.rank(), &s_cols))?;
        let trivial = has_trivial_divisibility(&s_in)?;
        if saturated != trivial {
            out.disagreements += 1;
        }
        if saturated && trivial && out.witness.is_none() {
            let (s2, t2) = (a2.norm(&c[..2]), a2.norm(&c[2..]));
            out.witness = Some((c.clone(), s2, t2));
            out.complement = Some(ln);
        }
    }
    Ok(out)
}

pub fn a2_square_row(setup: &A2Square, n: u32) -> ClassificationRow {
    let mut b = RowBuilder::new(TABLE, &format!("A2^2 n={n}"), "A2^2(-1)", &format!("U^3+<{}>", -2 * (i64::from(n) + 1)));
    let run = |b: &mut RowBuilder| -> Result<()> {
        let claimed = if (n + 1) % 3 != 0 { "succeeds" } else { "fails" };
        let o = a2_square_construction(setup, n)?;
        b.cell("construction", claimed, if o.witness.is_some() { "succeeds" } else { "fails" });
        b.cell("saturation agrees with trivial divisibility", o.candidates, o.candidates - o.disagreements);
        b.note(format!("{} primitive v in A2^2 with v² = {}", o.candidates, 2 * n + 2));
        if let (Some((v, s2, t2)), Some(ln)) = (&o.witness, &o.complement) {
            let coords: Vec<String> = v.iter().map(ToString::to_string).collect();
            b.note(format!("v = ({}) with s² = {s2}, t² = {t2}", coords.join(", ")));
            let ctx = KummerContext::new(n)?;
            let id = identify(ln, &ctx.l_n)?;
            b.cell("v^⊥", ctx.l_n.label(), if id.matches() { ctx.l_n.label() } else { format!("not {}", ctx.l_n.label()) });
        }
        Ok(())
    };
    if let Err(e) = run(&mut b) {
        b.failed("computation", "ok", e);
    }
    b.finish()
}

/// Realizability of `R` for some `n`, with the evidence.
fn realizable(name: &str, a2_success: Option<u32>, a1_excluded: bool) -> Result<(bool, String)> {
    match name {
        "A1^4" => Ok((false, if a1_excluded { "wall class in every embedding".into() } else { "not excluded".into() })),
        "A2^2" => Ok(match a2_success {
            Some(n) => (true, format!("n = {n} by the A2^2 construction")),
            None => (false, "construction failed".into()),
        }),
        _ => {
            let ctx = KummerContext::new(2)?;
            let s = named::parse(name)?.negate();
            let accept = |sol: &crate::embeddings::EmbeddingSolution| {
                sol.sublattice(&ctx.l_n).and_then(|sub| has_trivial_divisibility(&sub)).unwrap_or(false)
            };
            Ok(match find_embedding_where(&s, &ctx.l_n, 1, &accept)? {
                Some(_) => (true, "n = 2 with trivial divisibility".into()),
                None => (false, "no embedding with trivial divisibility at coordinate bound 1".into()),
            })
        }
    }
}

fn theorem_row(index: usize, a2_success: Option<u32>, a1_excluded: bool) -> ClassificationRow {
    let (name, _) = DYNKIN[index];
    let mut b = RowBuilder::new(TABLE, &format!("criterion {name}"), &format!("{name}(-1)"), "");
    let run = |b: &mut RowBuilder| -> Result<()> {
        let r = named::parse(name)?;
        let l = DiscriminantGroup::of(&r)?.length();
        let below = r.rank() + l < 8;
        b.note(format!("rank {} + l(A) {} = {}", r.rank(), l, r.rank() + l));
        if length_obstruction(&r, 7)? == below {
            return Err(Error::Inconsistent("length obstruction disagrees with rank + l < 8".into()));
        }
        let (ok, why) = realizable(name, a2_success, a1_excluded)?;
        b.note(why);
        let yn = |x: bool| if x { "yes" } else { "no" };
        b.cell("rank + l < 8", yn(below), yn(below));
        b.cell("realizable", yn(below), yn(ok));
        Ok(())
    };
    if let Err(e) = run(&mut b) {
        b.failed("computation", "ok", e);
    }
    b.finish()
}

/// Minimal dimensions, the `A₁⁴` and `A₂²` rows for `n = 2..5` and the
/// criterion over the eleven Dynkin lattices.
pub fn verify_higher_dim() -> Vec<ClassificationRow> {
    let mut rows: Vec<ClassificationRow> = (0..MINIMAL_ROWS.len()).into_par_iter().map(minimal_row).collect();
    let a1: Vec<ClassificationRow> = (2..=5u32).into_par_iter().map(|n| a1_4_row(n, 200)).collect();
    let a1_excluded = a1.iter().all(|r| r.status.is_verified());
    rows.extend(a1);
    let a2 = match A2Square::new() {
        Ok(setup) => (2..=5u32).into_par_iter().map(|n| a2_square_row(&setup, n)).collect(),
        Err(e) => {
            let mut b = RowBuilder::new(TABLE, "A2^2", "A2^2(-1)", "");
            b.failed("computation", "ok", e);
            vec![b.finish()]
        }
    };
    let a2_success = a2
        .iter()
        .filter(|r| r.recomputed.get("construction").is_some_and(|c| c == "succeeds"))
        .filter_map(|r| r.row.strip_prefix("A2^2 n=").and_then(|n| n.parse().ok()))
        .min();
    rows.extend(a2);
    rows.extend((0..DYNKIN.len()).into_par_iter().map(|i| theorem_row(i, a2_success, a1_excluded)).collect::<Vec<_>>());
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_modulus_of_scaled_forms() {
        assert_eq!(norm_modulus(&named::parse("U(2)+U(2)").unwrap()), BigInt::from(4));
        assert_eq!(norm_modulus(&named::parse("K7").unwrap()), BigInt::from(2));
    }

    #[test]
    fn minimal_dimensions() {
        // x² + y² = n + 1 on <2>^2: first primitive solution at n + 1 = 5.
        let (n, _, _) = minimal_n(&named::parse("<2>^2").unwrap()).unwrap();
        assert_eq!(n, 4);
        // 2x² + 2xy + 4y² misses 6 and hits 8.
        let (n, v, _) = minimal_n(&named::parse("K7").unwrap()).unwrap();
        assert_eq!(n, 3);
        assert_eq!(named::parse("K7").unwrap().norm(&v), BigInt::from(8));
        for i in 0..MINIMAL_ROWS.len() {
            let r = minimal_row(i);
            assert!(r.status.is_verified(), "{r:?}");
        }
    }

    #[test]
    fn a2_square_glue_is_u4() {
        let setup = A2Square::new().unwrap();
        assert_eq!(setup.lambda.signature().unwrap(), (4, 4));
        assert!(setup.s.is_primitive() && setup.t.is_primitive());
        assert_eq!(setup.s.gram(), *Lattice::a(2).power(2).negate().gram());
    }

    #[test]
    fn a2_square_construction_follows_three() {
        let setup = A2Square::new().unwrap();
        for n in 2..=5 {
            let o = a2_square_construction(&setup, n).unwrap();
            assert!(o.candidates > 0);
            assert_eq!(o.disagreements, 0);
            assert_eq!(o.witness.is_some(), (n + 1) % 3 != 0, "n = {n}");
        }
    }

    #[test]
    fn a1_4_has_walls_in_higher_dimension() {
        let r = a1_4_row(3, 30);
        assert!(r.status.is_verified(), "{r:?}");
    }

    #[test]
    fn all_rows_verify() {
        let rows = verify_higher_dim();
        assert_eq!(rows.len(), 3 + 4 + 4 + 11);
        for r in &rows {
            assert!(r.status.is_verified(), "{} {:?} {:?}", r.row, r.status, r.recomputed);
        }
        let realizable: Vec<&str> = rows
            .iter()
            .filter(|r| r.row.starts_with("criterion") && r.recomputed["realizable"] == "yes")
            .map(|r| r.row.as_str())
            .collect();
        assert_eq!(realizable.len(), 10);
        assert!(!realizable.contains(&"criterion A1^4"));
    }
}
