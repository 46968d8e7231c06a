//! Short-vector enumeration in definite lattices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Definiteness, Lattice};
use crate::matrix::IntMatrix;

/// A lattice vector (coordinates in the lattice basis) with its norm `v²`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ShortVector {
    pub norm: BigInt,
    pub coords: Vec<BigInt>,
}

/// All nonzero `v` with `|v²| ≤ bound`, one of each `±` pair (first nonzero
/// coordinate positive), sorted by `(|norm|, coords)`.
pub fn short_vectors(lattice: &Lattice, bound: &BigInt) -> Result<Vec<ShortVector>> {
    let sign = match lattice.definiteness()? {
        Definiteness::Positive => 1,
        Definiteness::Negative => -1,
        Definiteness::Indefinite => return Err(Error::Indefinite),
    };
    let g = if sign > 0 { lattice.gram().clone() } else { lattice.gram().neg() };
    let mut out = Vec::new();
    fincke_pohst(&g, bound, &mut |x: &[BigInt], norm: &BigInt| {
        if leading_positive(x) {
            out.push((norm.clone(), x.to_vec()));
        }
    })?;
    let mut res: Vec<ShortVector> = out
        .into_iter()
        .map(|(norm, coords)| ShortVector { norm: if sign > 0 { norm } else { -norm }, coords })
        .collect();
    res.sort_by(|a, b| a.norm.abs().cmp(&b.norm.abs()).then_with(|| a.coords.cmp(&b.coords)));
    Ok(res)
}

/// Vectors of norm exactly `norm` (sign as in the lattice), both signs included.
pub fn vectors_of_norm(lattice: &Lattice, norm: &BigInt) -> Result<Vec<Vec<BigInt>>> {
    let sv = short_vectors(lattice, &norm.abs())?;
    let mut out = Vec::new();
    for v in sv.into_iter().filter(|v| &v.norm == norm) {
        out.push(v.coords.iter().map(|c| -c).collect());
        out.push(v.coords);
    }
    out.sort();
    Ok(out)
}

pub(crate) fn leading_positive(x: &[BigInt]) -> bool {
    x.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_positive())
}

/// Exact Fincke–Pohst: calls `visit(x, x·G·x)` for every nonzero `x` with
/// `x·G·x ≤ bound`, both signs. `g` must be positive definite.
pub fn fincke_pohst(g: &IntMatrix, bound: &BigInt, visit: &mut dyn FnMut(&[BigInt], &BigInt)) -> Result<()> {
    let n = g.rows();
    if n == 0 || bound.is_negative() {
        return Ok(());
    }
    // Q(x) = Σ q[i][i] (x_i + Σ_{j>i} q[i][j] x_j)²
    let mut q = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            q[i][j] = BigRational::from(g[(i, j)].clone());
        }
    }
    for i in 0..n {
        if !q[i][i].is_positive() {
            return Err(Error::Indefinite);
        }
        for j in i + 1..n {
            let t = &q[i][j] / &q[i][i];
            q[j][i] = q[i][j].clone();
            q[i][j] = t;
        }
        for k in i + 1..n {
            for l in k..n {
                let t = &q[k][i] * &q[i][l];
                q[k][l] -= t;
            }
        }
    }
    let mut x = vec![BigInt::zero(); n];
    let mut rem = vec![BigRational::zero(); n + 1];
    rem[n] = BigRational::from(bound.clone());
    descend(&q, n - 1, &mut x, &mut rem, g, visit);
    Ok(())
}

fn descend(
    q: &[Vec<BigRational>],
    i: usize,
    x: &mut Vec<BigInt>,
    rem: &mut Vec<BigRational>,
    g: &IntMatrix,
    visit: &mut dyn FnMut(&[BigInt], &BigInt),
) {
    let n = x.len();
    let mut c = BigRational::zero();
    for j in i + 1..n {
        c += &q[i][j] * BigRational::from(x[j].clone());
    }
    let budget = rem[i + 1].clone();
    let center = (-&c).round().to_integer();
    let cost = |xi: &BigInt| {
        let t = BigRational::from(xi.clone()) + &c;
        &q[i][i] * &t * &t
    };
    // The cost is convex in x_i: walk outward from the centre in both directions.
    for dir in [1i32, -1] {
        let mut xi = if dir == 1 { center.clone() } else { &center - 1 };
        loop {
            let used = cost(&xi);
            if used > budget {
                break;
            }
            x[i] = xi.clone();
            rem[i] = &budget - &used;
            if i == 0 {
                if x.iter().any(|v| !v.is_zero()) {
                    let norm = quadratic(g, x);
                    visit(x, &norm);
                }
            } else {
                descend(q, i - 1, x, rem, g, visit);
            }
            xi += dir;
        }
    }
    x[i] = BigInt::zero();
}

fn quadratic(g: &IntMatrix, x: &[BigInt]) -> BigInt {
    let gx = g.mul_vec(x);
    x.iter().zip(gx.iter()).map(|(a, b)| a * b).sum()
}

/// Naive enumeration of all nonzero `x` with `|x_i| ≤ radius`, for oracles and
/// the bounded indefinite searches.
pub fn box_vectors(rank: usize, radius: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * radius + 1) as u64;
    let total = side.checked_pow(rank as u32).unwrap_or(u64::MAX);
    (0..total).filter_map(move |mut idx| {
        let mut v = vec![0i64; rank];
        for c in v.iter_mut() {
            *c = (idx % side) as i64 - radius;
            idx /= side;
        }
        v.iter().any(|c| *c != 0).then_some(v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::parse;

    fn count(name: &str, bound: i64) -> usize {
        short_vectors(&parse(name).unwrap(), &BigInt::from(bound)).unwrap().len()
    }

    #[test]
    fn root_counts() {
        assert_eq!(count("A2", 2), 3);
        assert_eq!(count("E8", 2), 120);
        assert_eq!(count("D4", 2), 12);
        assert_eq!(count("A1^4", 2), 4);
    }

    #[test]
    fn negative_definite() {
        let sv = short_vectors(&parse("<-6>").unwrap(), &BigInt::from(6)).unwrap();
        assert_eq!(sv, vec![ShortVector { norm: BigInt::from(-6), coords: vec![BigInt::from(1)] }]);
    }

    #[test]
    fn indefinite_rejected() {
        assert_eq!(short_vectors(&Lattice::u(), &BigInt::from(2)), Err(Error::Indefinite));
    }

    #[test]
    fn matches_box_for_a2() {
        let l = parse("A2").unwrap();
        let mut naive: Vec<Vec<BigInt>> = box_vectors(2, 2)
            .map(|v| v.into_iter().map(BigInt::from).collect::<Vec<_>>())
            .filter(|v: &Vec<BigInt>| leading_positive(v) && l.norm(v) <= BigInt::from(2))
            .collect();
        naive.sort();
        let mut got: Vec<Vec<BigInt>> = short_vectors(&l, &BigInt::from(2)).unwrap().into_iter().map(|s| s.coords).collect();
        got.sort();
        assert_eq!(got, naive);
    }
}
