//! Explicit embeddings `S ⊂ L_n` with prescribed complement, built by
//! gluing `S ⊕ T ⊕ ⟨2n+2⟩` to an even unimodular lattice and splitting it
//! as `U⁴` with the last summand carried to the Mukai vector.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::KummerContext;
use crate::discriminant::{DiscriminantGroup, FiniteQuadraticForm};
use crate::embeddings::{split_hyperbolic, EmbeddingSolution, VectorSearch};
use crate::error::{Error, Result};
use crate::lattice::{glue_index, overlattice, Lattice, Sublattice};
use crate::matrix::{IntMatrix, RatMatrix};
use super::realize::scaled_integer;

/// Radius for the isotropic vector search and the hyperbolic splitting.
const SEARCH_RADIUS: i64 = 6;

struct Glue {
    form: FiniteQuadraticForm,
    /// Generator index range of each block.
    blocks: Vec<std::ops::Range<usize>>,
    /// Generator representatives in coordinates of the direct sum.
    reps: Vec<Vec<BigRational>>,
}

impl Glue {
    fn new(parts: &[&Lattice]) -> Result<Self> {
        let total: usize = parts.iter().map(|l| l.rank()).sum();
        let (mut orders, mut q, mut reps, mut blocks) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        let mut bil: Vec<(usize, Vec<Vec<BigRational>>)> = Vec::new();
        let mut offset = 0;
        for l in parts {
            let d = DiscriminantGroup::of(l)?;
            let f = d.finite_form().ok_or_else(|| Error::Inapplicable("discriminant group too large".into()))?;
            let start = orders.len();
            blocks.push(start..start + f.orders.len());
            bil.push((start, f.b.clone()));
            orders.extend(f.orders);
            q.extend(f.q);
            for g in &d.generators {
                let mut r = vec![BigRational::zero(); total];
                for (i, x) in g.iter().enumerate() {
                    r[offset + i] = x.clone();
                }
                reps.push(r);
            }
            offset += l.rank();
        }
        let n = orders.len();
        let mut b = vec![vec![BigRational::zero(); n]; n];
        for (start, block) in bil {
            for (i, row) in block.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    b[start + i][start + j] = x.clone();
                }
            }
        }
        Ok(Glue { form: FiniteQuadraticForm { orders, q, b }, blocks, reps })
    }

    fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).zip(&self.form.orders).map(|((a, b), d)| (a + b) % d).collect()
    }

    fn span(&self, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
        let mut out = BTreeSet::new();
        out.insert(vec![0; self.form.orders.len()]);
        for g in gens {
            let mut frontier: Vec<Vec<u64>> = out.iter().cloned().collect();
            while let Some(x) = frontier.pop() {
                let y = self.add(&x, g);
                if out.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        out
    }

    /// Nonzero and supported on a single block.
    fn single_block(&self, x: &[u64]) -> bool {
        let hit: Vec<bool> = self.blocks.iter().map(|r| x[r.clone()].iter().any(|&c| c != 0)).collect();
        hit.iter().filter(|&&h| h).count() == 1
    }

    fn rep(&self, x: &[u64]) -> Vec<BigRational> {
        let n = self.reps[0].len();
        let mut v = vec![BigRational::zero(); n];
        for (c, r) in x.iter().zip(&self.reps) {
            if *c != 0 {
                let c = BigRational::from(BigInt::from(*c));
                for (vi, ri) in v.iter_mut().zip(r) {
                    *vi += &c * ri;
                }
            }
        }
        v
    }

    /// Isotropic subgroups of the given order meeting no block, in a fixed
    /// order; `visit` returns true to stop.
    fn subgroups(&self, order: usize, visit: &mut dyn FnMut(&[Vec<u64>]) -> Result<bool>) -> Result<()> {
        let isotropic: Vec<Vec<u64>> =
            self.form.elements().into_iter().filter(|x| x.iter().any(|&c| c != 0) && self.form.q_of(x).is_zero()).collect();
        let mut seen = BTreeSet::new();
        self.extend(&isotropic, 0, &mut Vec::new(), order, &mut seen, visit).map(|_| ())
    }

    fn extend(
        &self,
        isotropic: &[Vec<u64>],
        from: usize,
        gens: &mut Vec<Vec<u64>>,
        order: usize,
        seen: &mut BTreeSet<Vec<Vec<u64>>>,
        visit: &mut dyn FnMut(&[Vec<u64>]) -> Result<bool>,
    ) -> Result<bool> {
        let h = self.span(gens);
        if h.len() == order {
            return visit(gens);
        }
        for (i, x) in isotropic.iter().enumerate().skip(from) {
            if h.contains(x) || gens.iter().any(|g| !self.form.b_of(g, x).is_zero()) {
                continue;
            }
            gens.push(x.clone());
            let h2 = self.span(gens);
            let fits = order % h2.len() == 0 && !h2.iter().any(|y| self.single_block(y));
            if fits && seen.insert(h2.into_iter().collect()) && self.extend(isotropic, i + 1, gens, order, seen, visit)? {
                return Ok(true);
            }
            gens.pop();
        }
        Ok(false)
    }
}

fn gram_i64(l: &Lattice) -> Result<Vec<Vec<i64>>> {
    l.gram().to_i64()
}

/// Isotropic `e` with `e·v = 1` in an even unimodular lattice.
fn isotropic_partner(m: &Lattice, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    let g = gram_i64(m)?;
    let gv: Vec<i64> = m.gram().mul_vec(v).iter().map(|x| x.to_i64().ok_or_else(|| Error::Overflow(x.to_string()))).collect::<Result<_>>()?;
    for radius in 1..=SEARCH_RADIUS {
        let mut found = None;
        VectorSearch::new(&g, radius, 0, vec![gv.clone()], vec![1]).run(&mut |x| {
            found = Some(x.to_vec());
            false
        });
        if let Some(x) = found {
            return Ok(Some(x.into_iter().map(BigInt::from).collect()));
        }
    }
    Ok(None)
}

/// Basis of the base lattice in overlattice coordinates, given the
/// overlattice basis `p` in base coordinates.
pub fn base_in_overlattice(p: &RatMatrix) -> Result<IntMatrix> {
    let den = p.denominator();
    let q = scaled_integer(p, &den);
    let qinv = q.rational_inverse().ok_or_else(|| Error::Inconsistent("singular overlattice basis".into()))?;
    let n = p.rows();
    let cols: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            qinv.col(i)
                .iter()
                .map(|x| (x * BigRational::from(den.clone())).to_integer_checked())
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::Inconsistent("base vector outside the overlattice".into()))
        })
        .collect::<Result<_>>()?;
    Ok(IntMatrix::from_columns(n, &cols))
}

/// Columns of `S` in `L_n` coordinates from one unimodular overlattice.
fn place(ctx: &KummerContext, m: &Lattice, p: &RatMatrix, rank_s: usize) -> Result<Option<IntMatrix>> {
    let n = m.rank();
    let base = base_in_overlattice(p)?;
    let in_m = |i: usize| -> Result<Vec<BigInt>> { Ok(base.col(i)) };
    let v = in_m(n - 1)?;
    let k = m.norm(&v);
    let Some(e) = isotropic_partner(m, &v)? else { return Ok(None) };
    let half = &k / BigInt::from(2);
    let f: Vec<BigInt> = v.iter().zip(&e).map(|(a, b)| a - &half * b).collect();
    let plane = Sublattice::from_columns(m.clone(), &[e.clone(), f.clone()])?;
    let rest = plane.orthogonal_complement();
    let Some(split) = split_hyperbolic(&rest.lattice()?, SEARCH_RADIUS)? else { return Ok(None) };
    let mut cols: Vec<Vec<BigInt>> = split.columns().iter().map(|c| rest.to_ambient(c)).collect();
    cols.push(f);
    cols.push(e);
    let phi = IntMatrix::from_columns(n, &cols);
    if phi.congruence(m.gram()) != *ctx.lambda.gram() {
        return Err(Error::Inconsistent("splitting does not give U^4".into()));
    }
    let phi_inv = phi.unimodular_inverse().ok_or_else(|| Error::Inconsistent("splitting is not unimodular".into()))?;
    let host = Sublattice::new(ctx.lambda.clone(), ctx.embedding.images.clone())?;
    let mut out = Vec::with_capacity(rank_s);
    for i in 0..rank_s {
        let y = phi_inv.mul_vec(&in_m(i)?);
        let x = host.coordinates(&y).ok_or_else(|| Error::Inconsistent("image not orthogonal to the Mukai vector".into()))?;
        let x = x.iter().map(|c| c.to_integer_checked()).collect::<Option<Vec<_>>>();
        let Some(x) = x else { return Err(Error::Inconsistent("image not in L_n".into())) };
        out.push(x);
    }
    Ok(Some(IntMatrix::from_columns(ctx.l_n.rank(), &out)))
}

trait ToIntegerChecked {
    fn to_integer_checked(&self) -> Option<BigInt>;
}

impl ToIntegerChecked for BigRational {
    fn to_integer_checked(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.to_integer())
    }
}

/// First primitive embedding of `s` into `L_n` with complement `t` (up to
/// identification by the caller) that `accept` takes, over the glue
/// subgroups of `S ⊕ T ⊕ ⟨2n+2⟩` in a fixed order.
pub fn glued_embedding(
    ctx: &KummerContext,
    s: &Lattice,
    t: &Lattice,
    accept: &dyn Fn(&EmbeddingSolution) -> bool,
) -> Result<Option<EmbeddingSolution>> {
    if s.rank() + t.rank() != ctx.l_n.rank() {
        return Ok(None);
    }
    let k = -ctx.l_n.gram()[(6, 6)].clone();
    let v = Lattice::new(IntMatrix::diagonal(&[k]))?;
    let base = Lattice::direct_sum_all([s, t, &v]);
    let glue = Glue::new(&[s, t, &v])?;
    let size = glue.form.size();
    let order = (size as f64).sqrt().round() as u64;
    if order * order != size {
        return Ok(None);
    }
    let mut result = None;
    glue.subgroups(order as usize, &mut |gens| {
        let vectors: Vec<Vec<BigRational>> = gens.iter().map(|g| glue.rep(g)).collect();
        let (m, p) = overlattice(&base, &vectors)?;
        if !m.det().abs().is_one() {
            return Ok(false);
        }
        let Some(images) = place(ctx, &m, &p, s.rank())? else { return Ok(false) };
        let sub = Sublattice::new(ctx.l_n.clone(), images.clone())?;
        if sub.gram() != *s.gram() {
            return Err(Error::Inconsistent("glued embedding does not preserve the form".into()));
        }
        let comp = sub.orthogonal_complement();
        let sol = EmbeddingSolution { images, primitive: sub.is_primitive(), glue_index: glue_index(&sub, &comp)? };
        if sol.primitive && accept(&sol) {
            result = Some(sol);
            return Ok(true);
        }
        Ok(false)
    })?;
    Ok(result)
}
