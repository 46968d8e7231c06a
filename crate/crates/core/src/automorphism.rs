//! Orthogonal groups and isometry testing for definite lattices.
//!
//! Both searches run on LLL-reduced bases: the images of the basis vectors
//! are chosen among vectors of the right norm, constrained by the pairings
//! with the images already chosen.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::discriminant::DiscriminantGroup;
use crate::enumerate::fincke_pohst;
use crate::error::{Error, Result};
use crate::isometry::Isometry;
use crate::lattice::{Definiteness, Lattice};
use crate::matrix::{to_i64, IntMatrix};
use crate::reduce::lll;

pub const RANK_CAP: usize = 8;
pub const ELEMENT_CAP: usize = 200_000;

/// A finite group of isometries of one lattice, fully materialized.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    lattice: Lattice,
    /// Row-major `n×n` integer matrices, sorted; the identity is among them.
    elements: Vec<Vec<i64>>,
    generators: Vec<usize>,
}

impl FiniteMatrixGroup {
    fn from_elements(lattice: Lattice, mut elements: Vec<Vec<i64>>) -> Self {
        elements.sort();
        elements.dedup();
        let n = lattice.rank();
        let generators = greedy_generators(&elements, n);
        FiniteMatrixGroup { lattice, elements, generators }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn element_matrices(&self) -> &[Vec<i64>] {
        &self.elements
    }

    pub fn elements(&self) -> Vec<Isometry> {
        self.elements.iter().map(|e| self.isometry(e)).collect()
    }

    pub fn generators(&self) -> Vec<Isometry> {
        self.generators.iter().map(|&i| self.isometry(&self.elements[i])).collect()
    }

    fn isometry(&self, e: &[i64]) -> Isometry {
        let n = self.rank();
        let rows: Vec<Vec<i64>> = e.chunks(n.max(1)).map(<[i64]>::to_vec).collect();
        Isometry::new(self.lattice.clone(), IntMatrix::from_i64(&rows)).expect("group elements are isometries")
    }

    /// Subgroup of the elements satisfying `keep`; closure is asserted.
    pub fn filter(&self, keep: impl Fn(&[i64]) -> bool) -> FiniteMatrixGroup {
        let kept: Vec<Vec<i64>> = self.elements.iter().filter(|e| keep(e)).cloned().collect();
        FiniteMatrixGroup::from_elements(self.lattice.clone(), kept)
    }

    /// Multiplication table over the sorted element list.
    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let index: HashMap<&[i64], usize> = self.elements.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();
        self.elements
            .iter()
            .map(|a| {
                self.elements
                    .iter()
                    .map(|b| *index.get(mul(a, b, n).as_slice()).expect("element set is closed under products"))
                    .collect()
            })
            .collect()
    }

    /// Whether the element set is closed under products and inverses.
    pub fn is_closed(&self) -> bool {
        let n = self.rank();
        let set: HashSet<&[i64]> = self.elements.iter().map(Vec::as_slice).collect();
        let id = identity(n);
        if !set.contains(id.as_slice()) {
            return false;
        }
        self.elements.iter().all(|a| {
            let has_inverse = self.elements.iter().any(|b| mul(a, b, n) == id);
            has_inverse && self.elements.iter().all(|b| set.contains(mul(a, b, n).as_slice()))
        })
    }
}

pub(crate) fn mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut c = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

fn identity(n: usize) -> Vec<i64> {
    let mut e = vec![0i64; n * n];
    for i in 0..n {
        e[i * n + i] = 1;
    }
    e
}

fn greedy_generators(elements: &[Vec<i64>], n: usize) -> Vec<usize> {
    let mut closure: HashSet<Vec<i64>> = HashSet::from([identity(n)]);
    let mut gens: Vec<usize> = Vec::new();
    for (i, e) in elements.iter().enumerate() {
        if closure.contains(e) {
            continue;
        }
        gens.push(i);
        let mut frontier: Vec<Vec<i64>> = closure.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = mul(&x, &elements[g], n);
                if closure.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
    }
    gens
}

struct Reduction {
    /// Positive definite Gram of the reduced basis.
    gram: Vec<Vec<i64>>,
    /// Reduced basis in original coordinates and its inverse.
    p: IntMatrix,
    p_inv: IntMatrix,
}

fn prepare(lattice: &Lattice) -> Result<Reduction> {
    if lattice.rank() > RANK_CAP {
        return Err(Error::RankCap { rank: lattice.rank(), cap: RANK_CAP });
    }
    let g = match lattice.definiteness()? {
        Definiteness::Positive => lattice.gram().clone(),
        Definiteness::Negative => lattice.gram().neg(),
        Definiteness::Indefinite => return Err(Error::Indefinite),
    };
    let red = lll(&g)?;
    let p_inv = red.transform.unimodular_inverse().ok_or_else(|| Error::Inconsistent("LLL transform".into()))?;
    Ok(Reduction { gram: red.gram.to_i64()?, p: red.transform, p_inv })
}

/// Vectors of the reduced lattice with norm at most `bound`, both signs,
/// grouped by norm.
fn candidates(gram: &[Vec<i64>], bound: i64) -> Result<HashMap<i64, Vec<Vec<i64>>>> {
    let g = IntMatrix::from_i64(gram);
    let mut out: HashMap<i64, Vec<Vec<i64>>> = HashMap::new();
    let mut overflow = None;
    fincke_pohst(&g, &BigInt::from(bound), &mut |x, norm| {
        match (x.iter().map(to_i64).collect::<Result<Vec<i64>>>(), to_i64(norm)) {
            (Ok(v), Ok(nm)) => out.entry(nm).or_default().push(v),
            (Err(e), _) | (_, Err(e)) => overflow = Some(e),
        }
    })?;
    if let Some(e) = overflow {
        return Err(e);
    }
    for v in out.values_mut() {
        v.sort();
    }
    Ok(out)
}

/// Backtracking over images of basis vectors of a source Gram `src` inside a
/// target lattice with Gram `tgt`, all positive definite of equal rank.
struct Search<'a> {
    n: usize,
    src: &'a [Vec<i64>],
    /// For each source basis index, candidate images with `tgt·x` precomputed.
    cands: Vec<Vec<(Vec<i64>, Vec<i64>)>>,
}

impl<'a> Search<'a> {
    fn new(src: &'a [Vec<i64>], tgt: &[Vec<i64>]) -> Result<Self> {
        let n = src.len();
        let bound = (0..n).map(|i| src[i][i]).max().unwrap_or(0);
        let by_norm = candidates(tgt, bound)?;
        let cands = (0..n)
            .map(|i| {
                by_norm
                    .get(&src[i][i])
                    .map(|vs| {
                        vs.iter()
                            .map(|v| {
                                let gv: Vec<i64> = (0..n).map(|r| (0..n).map(|c| tgt[r][c] * v[c]).sum()).collect();
                                (v.clone(), gv)
                            })
                            .collect()
                    })
                    .unwrap_or_default()
            })
            .collect();
        Ok(Search { n, src, cands })
    }

    /// Depth-first completion of `chosen`; `visit` returns false to stop.
    fn extend(&self, chosen: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let i = chosen.len();
        if i == self.n {
            return visit(chosen);
        }
        'cand: for (k, (_, gx)) in self.cands[i].iter().enumerate() {
            for (j, &cj) in chosen.iter().enumerate() {
                let xj = &self.cands[j][cj].0;
                let pair: i64 = gx.iter().zip(xj).map(|(a, b)| a * b).sum();
                if pair != self.src[i][j] {
                    continue 'cand;
                }
            }
            chosen.push(k);
            let go_on = self.extend(chosen, visit);
            chosen.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    /// Column-major images → row-major matrix with those columns.
    fn matrix(&self, chosen: &[usize]) -> Vec<i64> {
        let n = self.n;
        let mut m = vec![0i64; n * n];
        for (j, &c) in chosen.iter().enumerate() {
            for i in 0..n {
                m[i * n + j] = self.cands[j][c].0[i];
            }
        }
        m
    }
}

fn conjugate(m: &[i64], p: &IntMatrix, p_inv: &IntMatrix, n: usize) -> Result<Vec<i64>> {
    let rows: Vec<Vec<i64>> = m.chunks(n).map(<[i64]>::to_vec).collect();
    let full = p.mul(&IntMatrix::from_i64(&rows)).mul(p_inv);
    Ok(full.to_i64()?.concat())
}

/// `O(L)` for a definite lattice of rank at most 8.
pub fn orthogonal_group(lattice: &Lattice) -> Result<FiniteMatrixGroup> {
    orthogonal_group_capped(lattice, ELEMENT_CAP)
}

pub fn orthogonal_group_capped(lattice: &Lattice, cap: usize) -> Result<FiniteMatrixGroup> {
    let n = lattice.rank();
    if n == 0 {
        return Ok(FiniteMatrixGroup::from_elements(lattice.clone(), vec![vec![]]));
    }
    let red = prepare(lattice)?;
    let search = Search::new(&red.gram, &red.gram)?;
    let count = AtomicUsize::new(0);
    let exceeded = AtomicBool::new(false);
    let parts: Vec<Vec<Vec<i64>>> = (0..search.cands[0].len())
        .into_par_iter()
        .map(|first| {
            let mut found = Vec::new();
            let mut chosen = vec![first];
            search.extend(&mut chosen, &mut |c| {
                if count.fetch_add(1, Ordering::Relaxed) >= cap {
                    exceeded.store(true, Ordering::Relaxed);
                    return false;
                }
                found.push(search.matrix(c));
                true
            });
            found
        })
        .collect();
    if exceeded.load(Ordering::Relaxed) {
        return Err(Error::GroupTooLarge { cap });
    }
    let elements = parts
        .into_iter()
        .flatten()
        .map(|m| conjugate(&m, &red.p, &red.p_inv, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(FiniteMatrixGroup::from_elements(lattice.clone(), elements))
}

/// Elements of `O(R)` with determinant one acting trivially on `A_R`.
pub fn restricted_group(lattice: &Lattice) -> Result<FiniteMatrixGroup> {
    let full = orthogonal_group(lattice)?;
    restrict(&full)
}

pub fn restrict(full: &FiniteMatrixGroup) -> Result<FiniteMatrixGroup> {
    let disc = DiscriminantGroup::of(full.lattice())?;
    let n = full.rank();
    // Generators of A_R as integer vectors over a common denominator.
    let gens: Vec<(i64, Vec<i64>)> = disc
        .generators
        .iter()
        .map(|g| {
            let d = g.iter().fold(BigInt::from(1), |l, x| num_integer::Integer::lcm(&l, x.denom()));
            let v: Vec<i64> = g
                .iter()
                .map(|x| to_i64(&(x * num_rational::BigRational::from(d.clone())).to_integer()))
                .collect::<Result<_>>()?;
            Ok((to_i64(&d)?, v))
        })
        .collect::<Result<_>>()?;
    Ok(full.filter(|m| {
        det_i64(m, n) == 1
            && gens.iter().all(|(d, v)| {
                (0..n).all(|i| {
                    let img: i64 = (0..n).map(|j| m[i * n + j] * v[j]).sum();
                    (img - v[i]) % d == 0
                })
            })
    }))
}

fn det_i64(m: &[i64], n: usize) -> i64 {
    if n == 0 {
        return 1;
    }
    let rows: Vec<Vec<i64>> = m.chunks(n).map(<[i64]>::to_vec).collect();
    let d = IntMatrix::from_i64(&rows).det();
    to_i64(&d).unwrap_or(0)
}

/// A witness `W` with `Wᵀ·G₂·W = G₁` (columns: images of the basis of `L₁`
/// in the basis of `L₂`), or `None` if the lattices are not isometric.
pub fn are_isometric(l1: &Lattice, l2: &Lattice) -> Result<Option<IntMatrix>> {
    let d1 = l1.definiteness()?;
    let d2 = l2.definiteness()?;
    if d1 == Definiteness::Indefinite || d2 == Definiteness::Indefinite {
        return Err(Error::Indefinite);
    }
    if l1.rank() != l2.rank() {
        return Ok(None);
    }
    if l1.rank() == 0 {
        return Ok(Some(IntMatrix::zeros(0, 0)));
    }
    if d1 != d2 {
        return Err(Error::MixedSignature);
    }
    if l1.det() != l2.det() {
        return Ok(None);
    }
    let r1 = prepare(l1)?;
    let r2 = prepare(l2)?;
    let search = Search::new(&r1.gram, &r2.gram)?;
    let mut witness = None;
    search.extend(&mut Vec::new(), &mut |c| {
        witness = Some(search.matrix(c));
        false
    });
    let Some(w) = witness else { return Ok(None) };
    let n = l1.rank();
    let rows: Vec<Vec<i64>> = w.chunks(n).map(<[i64]>::to_vec).collect();
    let full = r2.p.mul(&IntMatrix::from_i64(&rows)).mul(&r1.p_inv);
    debug_assert_eq!(&full.congruence(l2.gram()), l1.gram());
    Ok(Some(full))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::parse;

    fn order(name: &str) -> usize {
        orthogonal_group(&parse(name).unwrap()).unwrap().order()
    }

    fn restricted(name: &str) -> usize {
        restricted_group(&parse(name).unwrap()).unwrap().order()
    }

    #[test]
    fn full_orders() {
        assert_eq!(order("A1^2"), 8);
        assert_eq!(order("A2"), 12);
        assert_eq!(order("D4"), 1152);
        assert_eq!(order("A2(-1)"), 12);
    }

    #[test]
    fn restricted_orders() {
        assert_eq!(restricted("A1^2"), 2);
        assert_eq!(restricted("A2"), 3);
        assert_eq!(restricted("A3"), 12);
        assert_eq!(restricted("D4"), 96);
    }

    #[test]
    fn groups_are_closed() {
        let g = restricted_group(&parse("A3").unwrap()).unwrap();
        assert!(g.is_closed());
        let table = g.cayley_table();
        assert_eq!(table.len(), 12);
        assert!(!g.generators().is_empty());
    }

    #[test]
    fn isometry_witnesses() {
        let a = parse("A1+A1").unwrap();
        let b = parse("<2>+<2>").unwrap();
        assert!(are_isometric(&a, &b).unwrap().is_some());
        let c = parse("[[4,-2],[-2,4]]").unwrap();
        let w = are_isometric(&c, &parse("A2(2)").unwrap()).unwrap().unwrap();
        assert_eq!(&w.congruence(parse("A2(2)").unwrap().gram()), c.gram());
        assert!(are_isometric(&parse("<2>+<8>").unwrap(), &parse("[[2,-1],[-1,8]]").unwrap()).unwrap().is_none());
        // Same determinant, different lattices.
        assert!(are_isometric(&parse("<2>+<6>").unwrap(), &parse("[[4,2],[2,4]]").unwrap()).unwrap().is_none());
        assert_eq!(are_isometric(&parse("A2").unwrap(), &parse("A2(-1)").unwrap()), Err(Error::MixedSignature));
    }

    #[test]
    fn rank_cap() {
        let l = parse("A1^9").unwrap();
        assert_eq!(orthogonal_group(&l).unwrap_err(), Error::RankCap { rank: 9, cap: 8 });
    }
}
