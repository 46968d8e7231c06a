//! Primitive embeddings, hyperbolic planes and primitive representations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::automorphism::orthogonal_group;
use crate::discriminant::DiscriminantGroup;
use crate::enumerate::{leading_positive, short_vectors};
use crate::error::{Error, Result};
use crate::genus::splits_off_u;
use crate::lattice::{glue_index, Lattice, Sublattice};
use crate::matrix::{bezout, to_i64, vector_gcd, IntMatrix};

pub const DEFAULT_BOUND: i64 = 6;

/// Images of the basis of `S` in the ambient basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingSolution {
    pub images: IntMatrix,
    pub primitive: bool,
    /// `[L : S ⊕ S^⊥]`.
    pub glue_index: BigInt,
}

impl EmbeddingSolution {
    pub fn sublattice(&self, ambient: &Lattice) -> Result<Sublattice> {
        Sublattice::new(ambient.clone(), self.images.clone())
    }
}

/// Depth-first search for `x` in the box `|xᵢ| ≤ radius` with `x·G·x = norm`
/// and `x·G·yⱼ = targetⱼ`, where the constraint rows `G·yⱼ` are given.
/// The last coordinate is solved exactly rather than enumerated.
pub struct VectorSearch<'a> {
    gram: &'a [Vec<i64>],
    radius: i64,
    norm: i64,
    rows: Vec<Vec<i64>>,
    targets: Vec<i64>,
    /// For each constraint, the last coordinate with a nonzero coefficient.
    last_nonzero: Vec<Option<usize>>,
}

impl<'a> VectorSearch<'a> {
    pub fn new(gram: &'a [Vec<i64>], radius: i64, norm: i64, rows: Vec<Vec<i64>>, targets: Vec<i64>) -> Self {
        let last_nonzero = rows.iter().map(|r| r.iter().rposition(|c| *c != 0)).collect();
        VectorSearch { gram, radius, norm, rows, targets, last_nonzero }
    }

    /// Visit every solution in a fixed order; `visit` returns false to stop.
    pub fn run(&self, visit: &mut dyn FnMut(&[i64]) -> bool) {
        let n = self.gram.len();
        if n == 0 {
            return;
        }
        let mut x = vec![0i64; n];
        self.descend(0, &mut x, visit);
    }

    fn descend(&self, i: usize, x: &mut Vec<i64>, visit: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        let n = x.len();
        if i + 1 == n {
            return self.solve_last(x, visit);
        }
        for v in spiral(self.radius) {
            x[i] = v;
            if !self.linear_ok(i, x) {
                continue;
            }
            if !self.descend(i + 1, x, visit) {
                x[i] = 0;
                return false;
            }
        }
        x[i] = 0;
        true
    }

    /// Constraints whose support ends at or before `i` must already hold.
    fn linear_ok(&self, i: usize, x: &[i64]) -> bool {
        self.rows.iter().zip(&self.targets).zip(&self.last_nonzero).all(|((row, t), last)| match last {
            Some(l) if *l > i => true,
            _ => row.iter().take(i + 1).zip(x).map(|(a, b)| a * b).sum::<i64>() == *t,
        })
    }

    fn solve_last(&self, x: &mut Vec<i64>, visit: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        let k = x.len() - 1;
        x[k] = 0;
        let g = self.gram;
        let n = x.len();
        let gx0: Vec<i64> = (0..n).map(|r| (0..n).map(|c| g[r][c] * x[c]).sum()).collect();
        let q0: i64 = gx0.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
        let mut forced: Option<i64> = None;
        for (row, t) in self.rows.iter().zip(&self.targets) {
            let l0: i64 = row.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
            let c = row[k];
            if c == 0 {
                if l0 != *t {
                    return true;
                }
            } else {
                let num = t - l0;
                if num % c != 0 {
                    return true;
                }
                let v = num / c;
                if forced.is_some_and(|f| f != v) {
                    return true;
                }
                forced = Some(v);
            }
        }
        let a = g[k][k];
        let b = 2 * gx0[k];
        let c = q0 - self.norm;
        let mut candidates: Vec<i64> = Vec::new();
        match forced {
            Some(t) => candidates.push(t),
            None if a == 0 && b == 0 => {
                if c == 0 {
                    candidates.extend(spiral(self.radius));
                }
            }
            None if a == 0 => {
                if (-c) % b == 0 {
                    candidates.push(-c / b);
                }
            }
            None => {
                let disc = b * b - 4 * a * c;
                if disc >= 0 {
                    let s = isqrt(disc);
                    if s * s == disc {
                        for num in [-b + s, -b - s] {
                            if num % (2 * a) == 0 {
                                candidates.push(num / (2 * a));
                            }
                        }
                        candidates.dedup();
                    }
                }
            }
        }
        candidates.sort_by_key(|t| (t.abs(), -t.signum()));
        for t in candidates {
            if t.abs() > self.radius {
                continue;
            }
            if a * t * t + b * t + c != 0 {
                continue;
            }
            x[k] = t;
            let ok = x.iter().any(|v| *v != 0) && visit(x);
            x[k] = 0;
            if !ok && x.iter().any(|v| *v != 0) {
                return false;
            }
        }
        true
    }
}

/// `0, 1, −1, 2, −2, …, r, −r`.
fn spiral(r: i64) -> impl Iterator<Item = i64> + Clone {
    std::iter::once(0).chain((1..=r).flat_map(|k| [k, -k]))
}

fn isqrt(n: i64) -> i64 {
    if n < 2 {
        return n.max(0);
    }
    let mut s = (n as f64).sqrt() as i64;
    while s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    s
}

fn gram_i64(l: &Lattice) -> Result<Vec<Vec<i64>>> {
    l.gram().to_i64()
}

fn mat_vec(g: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    g.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// All vectors in the box with the given norm (the zero vector excluded).
pub fn vectors_with_norm(l: &Lattice, norm: i64, radius: i64) -> Result<Vec<Vec<i64>>> {
    let g = gram_i64(l)?;
    let mut out = Vec::new();
    VectorSearch::new(&g, radius, norm, vec![], vec![]).run(&mut |x| {
        out.push(x.to_vec());
        true
    });
    Ok(out)
}

struct EmbeddingSearch<'a> {
    sub: Vec<Vec<i64>>,
    gram: &'a [Vec<i64>],
    radius: i64,
}

impl EmbeddingSearch<'_> {
    fn column(&self, j: usize, chosen: &[Vec<i64>], visit: &mut dyn FnMut(&[i64]) -> bool) {
        let rows: Vec<Vec<i64>> = chosen.iter().map(|y| mat_vec(self.gram, y)).collect();
        let targets: Vec<i64> = (0..chosen.len()).map(|i| self.sub[j][i]).collect();
        VectorSearch::new(self.gram, self.radius, self.sub[j][j], rows, targets).run(visit);
    }

    fn extend(&self, chosen: &mut Vec<Vec<i64>>, visit: &mut dyn FnMut(&[Vec<i64>]) -> bool) -> bool {
        let j = chosen.len();
        if j == self.sub.len() {
            return visit(chosen);
        }
        let mut go_on = true;
        let mut cands = Vec::new();
        self.column(j, chosen, &mut |x| {
            cands.push(x.to_vec());
            true
        });
        for x in cands {
            chosen.push(x);
            go_on = self.extend(chosen, visit);
            chosen.pop();
            if !go_on {
                break;
            }
        }
        go_on
    }
}

fn solution(ambient: &Lattice, cols: &[Vec<i64>]) -> Result<EmbeddingSolution> {
    let n = ambient.rank();
    let images = IntMatrix::from_columns(n, &cols.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<_>>());
    let sub = Sublattice::new(ambient.clone(), images.clone())?;
    let primitive = sub.is_primitive();
    let comp = sub.orthogonal_complement();
    let glue = glue_index(&sub, &comp)?;
    Ok(EmbeddingSolution { images, primitive, glue_index: glue })
}

/// Result of a bounded search; `complete` is false when the box may hide
/// further solutions.
#[derive(Clone, Debug)]
pub struct EmbeddingSearchResult {
    pub solutions: Vec<EmbeddingSolution>,
    pub bound: i64,
    pub complete: bool,
    pub truncated: bool,
}

/// Primitive embeddings of `S` into `L` with all image coordinates in
/// `[−bound, bound]`, at most `limit` of them.
pub fn find_primitive_embeddings(s: &Lattice, l: &Lattice, bound: i64, limit: usize) -> Result<EmbeddingSearchResult> {
    if s.rank() > l.rank() {
        return Ok(EmbeddingSearchResult { solutions: vec![], bound, complete: true, truncated: false });
    }
    let g = gram_i64(l)?;
    let search = EmbeddingSearch { sub: gram_i64(s)?, gram: &g, radius: bound };
    let mut solutions = Vec::new();
    let mut err = None;
    let mut truncated = false;
    search.extend(&mut Vec::new(), &mut |cols| match solution(l, cols) {
        Ok(sol) if sol.primitive => {
            solutions.push(sol);
            truncated = solutions.len() >= limit;
            !truncated
        }
        Ok(_) => true,
        Err(e) => {
            err = Some(e);
            false
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let complete = !truncated && l.is_definite();
    Ok(EmbeddingSearchResult { solutions, bound, complete, truncated })
}

/// First primitive embedding (by increasing box radius up to `max_bound`,
/// deterministic order) accepted by `accept`.
pub fn find_embedding_where(
    s: &Lattice,
    l: &Lattice,
    max_bound: i64,
    accept: &(dyn Fn(&EmbeddingSolution) -> bool + Sync),
) -> Result<Option<EmbeddingSolution>> {
    if s.rank() > l.rank() || s.rank() == 0 {
        return Ok(None);
    }
    let g = gram_i64(l)?;
    let sub = gram_i64(s)?;
    for radius in 1..=max_bound {
        let search = EmbeddingSearch { sub: sub.clone(), gram: &g, radius };
        let mut firsts = Vec::new();
        search.column(0, &[], &mut |x| {
            firsts.push(x.to_vec());
            true
        });
        let found = firsts.par_iter().find_map_first(|x0| {
            let mut hit = None;
            search.extend(&mut vec![x0.clone()], &mut |cols| match solution(l, cols) {
                Ok(sol) if sol.primitive && accept(&sol) => {
                    hit = Some(Ok(sol));
                    false
                }
                Ok(_) => true,
                Err(e) => {
                    hit = Some(Err(e));
                    false
                }
            });
            hit
        });
        if let Some(r) = found {
            return r.map(Some);
        }
    }
    Ok(None)
}

/// Outcome of the search for a hyperbolic plane `U` as a direct summand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum USummand {
    /// `x² = y² = 0`, `x·y = 1`.
    Yes { x: Vec<String>, y: Vec<String> },
    /// The name contains a literal `U` summand.
    Syntactic,
    YesByCriterion,
    No { reason: String },
    Inconclusive,
}

impl USummand {
    pub fn is_yes(&self) -> bool {
        matches!(self, USummand::Yes { .. } | USummand::Syntactic | USummand::YesByCriterion)
    }
}

/// Whether a top-level summand of a lattice name is a bare `U` or `U^k`.
pub fn has_syntactic_u(name: &str) -> bool {
    let cleaned: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    let mut depth = 0;
    let mut parts = Vec::new();
    let mut cur = String::new();
    for c in cleaned.chars() {
        match c {
            '(' | '[' | '<' | '⟨' => depth += 1,
            ')' | ']' | '>' | '⟩' => depth -= 1,
            _ => {}
        }
        if (c == '+' || c == '⊕') && depth == 0 {
            parts.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    parts.push(cur);
    parts.iter().any(|p| {
        p == "U" || p.strip_prefix("U^").is_some_and(|k| k.chars().all(|c| c.is_ascii_digit()))
    })
}

pub fn contains_u_summand(l: &Lattice, bound: i64) -> Result<USummand> {
    if l.name().is_some_and(has_syntactic_u) {
        return Ok(USummand::Syntactic);
    }
    if l.rank() < 2 || l.is_definite() {
        return Ok(USummand::No { reason: "lattice is definite".into() });
    }
    let content = l.gram().content();
    if content > BigInt::one() {
        return Ok(USummand::No { reason: format!("all pairings are divisible by {content}") });
    }
    let disc = DiscriminantGroup::of(l)?;
    if disc.length() + 2 > l.rank() {
        return Ok(USummand::No { reason: format!("l(A) = {} exceeds rank - 2", disc.length()) });
    }
    if splits_off_u(l)?.is_yes() {
        return Ok(USummand::YesByCriterion);
    }
    match hyperbolic_pair(l, bound)? {
        Some((x, y)) => Ok(USummand::Yes {
            x: x.iter().map(ToString::to_string).collect(),
            y: y.iter().map(ToString::to_string).collect(),
        }),
        None => Ok(USummand::Inconclusive),
    }
}

/// An isotropic `x` of divisibility one within the box, completed to a
/// hyperbolic pair `(x, y)`.
pub fn hyperbolic_pair(l: &Lattice, bound: i64) -> Result<Option<(Vec<BigInt>, Vec<BigInt>)>> {
    let g = gram_i64(l)?;
    for radius in 1..=bound {
        let mut found = None;
        VectorSearch::new(&g, radius, 0, vec![], vec![]).run(&mut |x| {
            let gx = mat_vec(&g, x);
            if gx.iter().fold(0i64, |a, b| a.gcd(b)) == 1 {
                found = Some(x.to_vec());
                return false;
            }
            true
        });
        if let Some(x) = found {
            let x: Vec<BigInt> = x.into_iter().map(BigInt::from).collect();
            return Ok(Some(complete_pair(l, &x)));
        }
    }
    Ok(None)
}

/// Given isotropic `x` with `div(x) = 1`, find `y` with `y² = 0`, `x·y = 1`.
pub fn complete_pair(l: &Lattice, x: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let gx = l.gram().mul_vec(x);
    let (_, coeffs) = bezout(&gx);
    let half = l.norm(&coeffs) / BigInt::from(2);
    let y: Vec<BigInt> = coeffs.iter().zip(x).map(|(c, xi)| c - &half * xi).collect();
    (x.to_vec(), y)
}

/// A basis of an even unimodular indefinite lattice in which the Gram is
/// `U ⊕ … ⊕ U`, when the lattice is of that form (signature `(k, k)`).
pub fn split_hyperbolic(l: &Lattice, bound: i64) -> Result<Option<IntMatrix>> {
    let n = l.rank();
    if !l.det().abs().is_one() {
        return Err(Error::Inapplicable("lattice is not unimodular".into()));
    }
    let (p, m) = l.signature()?;
    if p != m {
        return Ok(None);
    }
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    let mut rest = Sublattice::full(l.clone());
    while rest.rank() > 0 {
        let sub = rest.lattice()?;
        let pair = if sub.rank() == 2 { binary_isotropic(&sub).map(|x| complete_pair(&sub, &x)) } else { hyperbolic_pair(&sub, bound)? };
        let Some((x, y)) = pair else { return Ok(None) };
        let xa = rest.to_ambient(&x);
        let ya = rest.to_ambient(&y);
        basis.push(xa);
        basis.push(ya);
        rest = Sublattice::from_columns(l.clone(), &basis)?.orthogonal_complement();
    }
    Ok(Some(IntMatrix::from_columns(n, &basis)))
}

/// Primitive isotropic vector of an even binary form of determinant −1.
fn binary_isotropic(l: &Lattice) -> Option<Vec<BigInt>> {
    let g = l.gram();
    let (a, b) = (&g[(0, 0)], &g[(0, 1)]);
    if a.is_zero() {
        return Some(vec![BigInt::one(), BigInt::zero()]);
    }
    // a x² + 2b x y + c y² = 0 with b² − ac = 1: x / y = (−b ± 1) / a.
    let num = -b + BigInt::one();
    let d = num.gcd(a);
    Some(vec![&num / &d, a / &d])
}

/// Primitive vectors of a given norm with their divisibility.
#[derive(Clone, Debug, Serialize)]
pub struct Representations {
    pub norm: String,
    pub vectors: Vec<RepresentedVector>,
    /// For definite lattices, indices into `vectors` grouped by `O(L)`-orbit.
    pub orbits: Option<Vec<Vec<usize>>>,
    pub complete: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepresentedVector {
    pub coords: Vec<String>,
    pub divisibility: String,
}

impl RepresentedVector {
    pub fn coords(&self) -> Vec<BigInt> {
        self.coords.iter().map(|c| c.parse().expect("decimal")).collect()
    }

    pub fn divisibility(&self) -> BigInt {
        self.divisibility.parse().expect("decimal")
    }
}

pub fn represent_primitive(l: &Lattice, norm: &BigInt, d_filter: Option<&BigInt>, bound: i64) -> Result<Representations> {
    let mut reps = Representations { norm: norm.to_string(), vectors: vec![], orbits: None, complete: true, note: None };
    if norm.is_odd() {
        reps.note = Some("odd norm in an even lattice".into());
        return Ok(reps);
    }
    if let Some(d) = d_filter {
        if let Err(why) = divisibility_prefilter(l, norm, d)? {
            reps.note = Some(why);
            return Ok(reps);
        }
    }
    let raw: Vec<Vec<BigInt>> = if l.is_definite() {
        short_vectors(l, &norm.abs())?.into_iter().filter(|v| &v.norm == norm).map(|v| v.coords).collect()
    } else {
        reps.complete = false;
        let n = to_i64(norm)?;
        vectors_with_norm(l, n, bound)?
            .into_iter()
            .map(|v| v.into_iter().map(BigInt::from).collect::<Vec<_>>())
            .filter(|v| leading_positive(v))
            .collect()
    };
    let mut vectors: Vec<(Vec<BigInt>, BigInt)> = Vec::new();
    for v in raw {
        if !vector_gcd(&v).is_one() {
            continue;
        }
        let d = l.divisibility(&v)?;
        if d_filter.is_some_and(|f| f != &d) {
            continue;
        }
        vectors.push((v, d));
    }
    vectors.sort();
    if l.is_definite() && !vectors.is_empty() {
        reps.orbits = Some(orbits(l, &vectors.iter().map(|(v, _)| v.clone()).collect::<Vec<_>>())?);
    }
    reps.vectors = vectors
        .into_iter()
        .map(|(v, d)| RepresentedVector { coords: v.iter().map(ToString::to_string).collect(), divisibility: d.to_string() })
        .collect();
    Ok(reps)
}

fn canonical_sign(v: Vec<BigInt>) -> Vec<BigInt> {
    if leading_positive(&v) {
        v
    } else {
        v.into_iter().map(|x| -x).collect()
    }
}

fn orbits(l: &Lattice, vectors: &[Vec<BigInt>]) -> Result<Vec<Vec<usize>>> {
    let group = orthogonal_group(l)?;
    let elements = group.elements();
    let index: std::collections::BTreeMap<&Vec<BigInt>, usize> = vectors.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut orbit_of = vec![usize::MAX; vectors.len()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in 0..vectors.len() {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let k = out.len();
        let mut members = Vec::new();
        for g in &elements {
            let img = canonical_sign(g.apply(&vectors[i]));
            if let Some(&j) = index.get(&img) {
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = k;
                    members.push(j);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    Ok(out)
}

/// Necessary condition for a primitive `v` with `v² = norm` and
/// `div(v) = d`: the class of `v/d` has order exactly `d` in `A_L` and
/// quadratic value `norm/d² mod 2`. `Err` carries the explanation.
pub fn divisibility_prefilter(l: &Lattice, norm: &BigInt, d: &BigInt) -> Result<std::result::Result<(), String>> {
    if d.is_one() {
        return Ok(Ok(()));
    }
    let disc = DiscriminantGroup::of(l)?;
    let exp = disc.exponent();
    if !exp.is_multiple_of(d) {
        let orders: Vec<String> = disc.cyclic_orders.iter().map(ToString::to_string).collect();
        let group = if orders.is_empty() { "trivial".to_string() } else { orders.iter().map(|o| format!("Z/{o}")).collect::<Vec<_>>().join("+") };
        return Ok(Err(format!(
            "div {d} needs a class of order {d} in A_L = {group}, which has exponent {exp}"
        )));
    }
    let Some(form) = disc.finite_form() else { return Ok(Ok(())) };
    if form.size() > 1 << 16 {
        return Ok(Ok(()));
    }
    let want = crate::discriminant::rat_mod(&BigRational::new(norm.clone(), d * d), 2);
    let d64: u64 = d.try_into().map_err(|_| Error::Overflow(d.to_string()))?;
    let hit = form.elements().iter().any(|c| {
        let order = element_order(&form.orders, c);
        order == d64 && form.q_of(c) == want
    });
    if hit {
        Ok(Ok(()))
    } else {
        Ok(Err(format!("no class of order {d} in A_L has q = {want} mod 2")))
    }
}

fn element_order(orders: &[u64], c: &[u64]) -> u64 {
    orders.iter().zip(c).map(|(o, x)| o / o.gcd(x)).fold(1, |a, b| a.lcm(&b))
}

/// Whether `S + ℤv` is primitive; `v` must be orthogonal to `S`.
pub fn glue_check(s: &Sublattice, v: &[BigInt]) -> Result<bool> {
    let gv = s.ambient().gram().mul_vec(v);
    if s.basis().columns().iter().any(|c| !crate::matrix::dot(c, &gv).is_zero()) {
        return Err(Error::NotOrthogonal);
    }
    span_is_saturated(s, v)
}

/// Whether `S + ℤv` is primitive, with no orthogonality requirement.
pub fn span_is_saturated(s: &Sublattice, v: &[BigInt]) -> Result<bool> {
    Ok(s.extend(&[v.to_vec()])?.is_primitive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::parse;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn embeds_minus_two_into_u() {
        let r = find_primitive_embeddings(&parse("<-2>").unwrap(), &Lattice::u(), 2, 10).unwrap();
        assert!(r.solutions.iter().any(|s| s.images.col(0) == ints(&[1, -1])));
        assert!(r.solutions.iter().all(|s| s.primitive));
    }

    #[test]
    fn six_not_in_two_squares() {
        let r = find_primitive_embeddings(&parse("<6>").unwrap(), &parse("<2>+<2>").unwrap(), 6, 10).unwrap();
        assert!(r.solutions.is_empty());
        assert!(r.complete);
    }

    #[test]
    fn a2_into_kummer_lattice() {
        let l = parse("U^3+<-6>").unwrap();
        let sol = find_embedding_where(&parse("A2(-1)").unwrap(), &l, 2, &|_| true).unwrap().unwrap();
        assert_eq!(&sol.images.congruence(l.gram()), parse("A2(-1)").unwrap().gram());
        assert!(sol.primitive);
    }

    #[test]
    fn u_summands() {
        assert_eq!(contains_u_summand(&parse("U+U(3)").unwrap(), 3).unwrap(), USummand::Syntactic);
        assert!(matches!(contains_u_summand(&parse("A2").unwrap(), 3).unwrap(), USummand::No { .. }));
        assert!(matches!(contains_u_summand(&parse("<2>^2").unwrap(), 3).unwrap(), USummand::No { .. }));
        assert!(matches!(contains_u_summand(&parse("U(2)+U(2)").unwrap(), 3).unwrap(), USummand::No { .. }));
        // U ⊕ U(2) in a scrambled basis still has a hyperbolic plane.
        let l = Lattice::new(parse("U+U(2)").unwrap().gram().clone()).unwrap();
        let p = IntMatrix::from_i64(&[vec![1, 1, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 1, 1], vec![0, 0, 0, 1]]);
        let scrambled = l.change_basis(&p).unwrap();
        assert!(matches!(contains_u_summand(&scrambled, 3).unwrap(), USummand::Yes { .. }));
    }

    #[test]
    fn hyperbolic_splitting_of_u4() {
        let l = Lattice::new(parse("U^2").unwrap().gram().clone()).unwrap();
        let p = IntMatrix::from_i64(&[vec![1, 2, 0, 1], vec![0, 1, 1, 0], vec![0, 0, 1, 3], vec![0, 0, 0, 1]]);
        let scrambled = l.change_basis(&p).unwrap();
        let b = split_hyperbolic(&scrambled, 3).unwrap().unwrap();
        assert_eq!(b.congruence(scrambled.gram()), parse("U^2").unwrap().gram().clone());
    }

    #[test]
    fn representations_in_a2_and_k7() {
        let r = represent_primitive(&Lattice::a(2), &BigInt::from(6), None, 6).unwrap();
        assert!(!r.vectors.is_empty());
        assert!(r.vectors.iter().all(|v| v.divisibility == "3"));
        assert_eq!(r.orbits.as_ref().unwrap().len(), 1);
        let k7 = parse("K7").unwrap();
        assert!(represent_primitive(&k7, &BigInt::from(6), None, 6).unwrap().vectors.is_empty());
        let r8 = represent_primitive(&k7, &BigInt::from(8), None, 6).unwrap();
        assert!(r8.vectors.iter().any(|v| v.coords == ["1", "1"]));
        let odd = represent_primitive(&k7, &BigInt::from(7), None, 6).unwrap();
        assert!(odd.vectors.is_empty() && odd.note.is_some());
    }

    #[test]
    fn prefilter_rules_out_even_divisibility_in_a2() {
        let why = divisibility_prefilter(&Lattice::a(2), &BigInt::from(6), &BigInt::from(2)).unwrap().unwrap_err();
        assert!(why.contains("Z/3"), "{why}");
        assert!(divisibility_prefilter(&Lattice::a(2), &BigInt::from(6), &BigInt::from(3)).unwrap().is_ok());
    }

    #[test]
    fn glue_checks() {
        let u = Lattice::u();
        let s = Sublattice::from_columns(u.clone(), &[ints(&[1, -1])]).unwrap();
        assert!(!glue_check(&s, &ints(&[1, 1])).unwrap());
        let e = Sublattice::from_columns(u, &[ints(&[1, 0])]).unwrap();
        assert_eq!(glue_check(&e, &ints(&[-3, 1])), Err(Error::NotOrthogonal));
        assert!(span_is_saturated(&e, &ints(&[-3, 1])).unwrap());
    }
}
