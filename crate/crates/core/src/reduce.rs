//! Exact LLL reduction of positive definite Gram matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Reduced Gram matrix together with the transform `P` (columns are the new
/// basis vectors in old coordinates), so that `Pᵀ·G·P` is the reduced Gram.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub gram: IntMatrix,
    pub transform: IntMatrix,
}

/// LLL with parameter 3/4. The input must be positive definite.
pub fn lll(gram: &IntMatrix) -> Result<Reduced> {
    let n = gram.rows();
    let mut g = gram.clone();
    let mut p = IntMatrix::identity(n);
    if n == 0 {
        return Ok(Reduced { gram: g, transform: p });
    }
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut k = 1;
    let (mut mu, mut b) = gram_schmidt(&g)?;
    while k < n {
        for j in (0..k).rev() {
            if mu[k][j].abs() > half {
                let r = round(&mu[k][j]);
                // b_k -= r b_j
                for row in 0..n {
                    let t = &p[(row, j)] * &r;
                    p[(row, k)] -= t;
                }
                reduce_gram(&mut g, k, j, &r);
                for i in 0..j {
                    let t = &mu[j][i] * BigRational::from(r.clone());
                    mu[k][i] -= t;
                }
                mu[k][j] -= BigRational::from(r);
            }
        }
        let lhs = &b[k] + &mu[k][k - 1] * &mu[k][k - 1] * &b[k - 1];
        if lhs >= &delta * &b[k - 1] {
            k += 1;
        } else {
            swap_basis(&mut g, &mut p, k, k - 1);
            let (m2, b2) = gram_schmidt(&g)?;
            mu = m2;
            b = b2;
            k = k.saturating_sub(1).max(1);
        }
    }
    Ok(Reduced { gram: g, transform: p })
}

fn round(x: &BigRational) -> BigInt {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    (x + half).floor().to_integer()
}

fn reduce_gram(g: &mut IntMatrix, k: usize, j: usize, r: &BigInt) {
    let n = g.rows();
    // column k -= r * column j, then row k -= r * row j.
    for i in 0..n {
        let t = &g[(i, j)] * r;
        g[(i, k)] -= t;
    }
    for i in 0..n {
        let t = &g[(j, i)] * r;
        g[(k, i)] -= t;
    }
}

fn swap_basis(g: &mut IntMatrix, p: &mut IntMatrix, a: usize, b: usize) {
    let n = g.rows();
    for i in 0..n {
        let t = g[(i, a)].clone();
        g[(i, a)] = g[(i, b)].clone();
        g[(i, b)] = t;
    }
    for i in 0..n {
        let t = g[(a, i)].clone();
        g[(a, i)] = g[(b, i)].clone();
        g[(b, i)] = t;
    }
    for i in 0..p.rows() {
        let t = p[(i, a)].clone();
        p[(i, a)] = p[(i, b)].clone();
        p[(i, b)] = t;
    }
}

/// `mu[i][j]` and squared Gram–Schmidt norms `b[i]`; errors if not positive definite.
fn gram_schmidt(g: &IntMatrix) -> Result<(Vec<Vec<BigRational>>, Vec<BigRational>)> {
    let n = g.rows();
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut b = vec![BigRational::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut s = BigRational::from(g[(i, j)].clone());
            for k in 0..j {
                s -= &mu[j][k] * &mu[i][k] * &b[k];
            }
            mu[i][j] = s / &b[j];
        }
        let mut s = BigRational::from(g[(i, i)].clone());
        for k in 0..i {
            s -= &mu[i][k] * &mu[i][k] * &b[k];
        }
        if !s.is_positive() {
            return Err(Error::Indefinite);
        }
        b[i] = s;
        mu[i][i] = BigRational::one();
    }
    Ok((mu, b))
}
