//! Naive reference implementations and random lattices shared by the
//! oracle tests and the acceptance target.
#![allow(dead_code)]

use std::collections::BTreeSet;

use klat::enumerate::short_vectors;
use klat::genus::p_elementary_invariants;
use klat::isometry::{invariant_coinvariant, orbit_sum, Isometry};
use klat::{IntMatrix, Lattice};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn to_i64(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.to_i64().expect("small entries")
}

fn a_gram(r: usize) -> Vec<Vec<i64>> {
    (0..r)
        .map(|i| (0..r).map(|j| if i == j { 2 } else if i.abs_diff(j) == 1 { -1 } else { 0 }).collect())
        .collect()
}

fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    (0..n).map(|i| (0..m).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect()
}

fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

/// Bareiss fraction-free determinant.
pub fn det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// `Bᵀ·A_r·B` for a random nonsingular `B`: even and positive definite.
pub fn random_definite(rng: &mut ChaCha8Rng, max_rank: usize) -> Vec<Vec<i64>> {
    let r = rng.gen_range(1..=max_rank);
    loop {
        let b: Vec<Vec<i64>> = (0..r).map(|_| (0..r).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        if det(&b) == 0 {
            continue;
        }
        return mul(&mul(&transpose(&b), &a_gram(r)), &b);
    }
}

/// Random nondegenerate even symmetric matrix.
pub fn random_even(rng: &mut ChaCha8Rng, max_rank: usize) -> Vec<Vec<i64>> {
    let r = rng.gen_range(1..=max_rank);
    loop {
        let mut g = vec![vec![0i64; r]; r];
        for i in 0..r {
            g[i][i] = 2 * rng.gen_range(-3..=3);
            for j in i + 1..r {
                let x = rng.gen_range(-3..=3);
                g[i][j] = x;
                g[j][i] = x;
            }
        }
        if det(&g) != 0 {
            return g;
        }
    }
}

fn canonical(v: &[i64]) -> Vec<i64> {
    match v.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => v.iter().map(|c| -c).collect(),
        _ => v.to_vec(),
    }
}

/// Nonzero vectors with `v² ≤ bound` by scanning the box given by the
/// diagonal of the inverse Gram (Cramer's rule via cofactors).
pub fn naive_short_vectors(g: &[Vec<i64>], bound: i64) -> BTreeSet<Vec<i64>> {
    let n = g.len();
    let d = det(g);
    let radius: Vec<i64> = (0..n)
        .map(|i| {
            let minor: Vec<Vec<i64>> =
                (0..n).filter(|&r| r != i).map(|r| (0..n).filter(|&c| c != i).map(|c| g[r][c]).collect()).collect();
            let inv_ii = det(&minor) as f64 / d as f64;
            (bound as f64 * inv_ii).sqrt().floor() as i64 + 1
        })
        .collect();
    let mut out = BTreeSet::new();
    let mut x: Vec<i64> = radius.iter().map(|r| -r).collect();
    loop {
        let norm: i64 = (0..n).map(|i| (0..n).map(|j| x[i] * g[i][j] * x[j]).sum::<i64>()).sum();
        if norm > 0 && norm <= bound {
            out.insert(canonical(&x));
        }
        let mut i = 0;
        while i < n {
            x[i] += 1;
            if x[i] <= radius[i] {
                break;
            }
            x[i] = -radius[i];
            i += 1;
        }
        if i == n {
            break;
        }
    }
    out
}

pub fn library_short_vectors(g: &[Vec<i64>], bound: i64) -> BTreeSet<Vec<i64>> {
    let l = Lattice::from_i64(g).expect("even");
    short_vectors(&l, &BigInt::from(bound))
        .expect("definite")
        .iter()
        .map(|v| canonical(&v.coords.iter().map(|c| c.to_i64().expect("small")).collect::<Vec<_>>()))
        .collect()
}

/// Largest `d` dividing every `v·eᵢ`, by trial from the top.
pub fn naive_divisibility(g: &[Vec<i64>], v: &[i64]) -> i64 {
    let pairings: Vec<i64> = g.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect();
    let top = pairings.iter().map(|x| x.abs()).max().unwrap_or(0);
    (1..=top).rev().find(|d| pairings.iter().all(|p| p % d == 0)).unwrap_or(0)
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors as quotients of determinantal divisors (gcd of all
/// `k×k` minors).
pub fn naive_invariant_factors(m: &[Vec<i64>]) -> Vec<i128> {
    let n = m.len();
    let mut divisors = vec![1i128];
    for k in 1..=n {
        let mut g = 0i128;
        for rows in subsets(n, k) {
            for cols in subsets(n, k) {
                let minor: Vec<Vec<i64>> = rows.iter().map(|&r| cols.iter().map(|&c| m[r][c]).collect()).collect();
                g = gcd(g, det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| w[1] / w[0]).collect()
}

/// Signature from the characteristic polynomial (Faddeev–LeVerrier) and
/// Descartes' rule, which is exact for real-rooted polynomials.
pub fn naive_signature(g: &[Vec<i64>]) -> (usize, usize) {
    let n = g.len();
    let a: Vec<Vec<i128>> = g.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut coeffs = vec![1i128];
    let mut mk = vec![vec![0i128; n]; n];
    for k in 1..=n {
        let mut next = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).map(|t| a[i][t] * mk[t][j]).sum::<i128>() + if i == j { coeffs[k - 1] } else { 0 };
            }
        }
        mk = next;
        let tr: i128 = (0..n).map(|i| (0..n).map(|t| a[i][t] * mk[t][i]).sum::<i128>()).sum();
        coeffs.push(-tr / k as i128);
    }
    let changes = |c: &[i128]| {
        let nz: Vec<i128> = c.iter().copied().filter(|x| *x != 0).collect();
        nz.windows(2).filter(|w| (w[0] < 0) != (w[1] < 0)).count()
    };
    let reflected: Vec<i128> = coeffs.iter().enumerate().map(|(i, c)| if (n - i) % 2 == 1 { -c } else { *c }).collect();
    (changes(&coeffs), changes(&reflected))
}

/// Torsion lemma checks for one isometry of prime order on `count` random
/// vectors; returns a list of failures.
pub fn lemma_failures(name: &str, g: &Isometry, rng: &mut ChaCha8Rng, count: usize) -> Vec<String> {
    let mut fails = Vec::new();
    let d = match invariant_coinvariant(g) {
        Ok(d) => d,
        Err(e) => return vec![format!("{name}: decomposition failed: {e}")],
    };
    let l = g.lattice();
    let gram = l.gram();
    let cross = d.invariant.basis().transpose().mul(gram).mul(d.coinvariant.basis());
    if !cross.is_zero() {
        fails.push(format!("{name}: T and S are not orthogonal"));
    }
    let p = d.p as u64;
    let pa = BigInt::from(p).pow(d.a as u32);
    if d.glue_index != pa {
        fails.push(format!("{name}: glue index {} is not {p}^{}", d.glue_index, d.a));
    }
    for (part, sub) in [("T", &d.invariant), ("S", &d.coinvariant)] {
        if sub.rank() == 0 {
            continue;
        }
        match sub.lattice().and_then(|x| p_elementary_invariants(&x, p)) {
            Ok(inv) if inv.a == d.a => {}
            Ok(inv) => fails.push(format!("{name}: a({part}) = {} but glue has a = {}", inv.a, d.a)),
            Err(e) => fails.push(format!("{name}: {part} is not {p}-elementary: {e}")),
        }
    }
    if d.a > d.m {
        fails.push(format!("{name}: a = {} exceeds m = {}", d.a, d.m));
    }
    let n = l.rank();
    for _ in 0..count {
        let x: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-5i64..=5))).collect();
        if x.iter().all(Zero::is_zero) {
            continue;
        }
        let sum = orbit_sum(g, &x, d.p);
        if g.apply(&sum) != sum || !d.in_invariant(&sum) {
            fails.push(format!("{name}: orbit sum of {x:?} is not invariant"));
        }
        let diff: Vec<BigInt> = x.iter().zip(g.apply(&x)).map(|(a, b)| a - b).collect();
        if !d.in_coinvariant(&diff) {
            fails.push(format!("{name}: x - gx not in S for {x:?}"));
        }
        let px: Vec<BigInt> = x.iter().map(|c| c * BigInt::from(p)).collect();
        if !d.in_sum(&px) {
            fails.push(format!("{name}: p·x not in T + S for {x:?}"));
        }
    }
    fails
}
