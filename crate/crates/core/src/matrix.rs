//! Dense integer matrices over arbitrary-precision integers, with the exact
//! normal forms (Hermite, Smith) the lattice code is built on.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension { expected: c, got: row.len() });
            }
            data.extend(row);
        }
        Ok(IntMatrix { rows: r, cols: c, data })
    }

    /// Shape-checked constructor from machine integers; panics on ragged input.
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    pub fn neg(&self) -> IntMatrix {
        self.scale(&BigInt::from(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| if i == j { self[(i, j)].is_one() } else { self[(i, j)].is_zero() })
            })
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    pub(crate) fn first_asymmetry(&self) -> Option<(usize, usize)> {
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// `selfᵀ · gram · self`.
    pub fn congruence(&self, gram: &IntMatrix) -> IntMatrix {
        self.transpose().mul(gram).mul(self)
    }

    /// Block-diagonal sum.
    pub fn block_diag(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        let mut m = Self::zeros(a.rows + b.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                m[(i, j)] = a[(i, j)].clone();
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                m[(a.rows + i, a.cols + j)] = b[(i, j)].clone();
            }
        }
        m
    }

    /// Horizontal concatenation.
    pub fn hstack(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        assert_eq!(a.rows, b.rows, "hstack row mismatch");
        let mut m = Self::zeros(a.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                m[(i, j)] = a[(i, j)].clone();
            }
            for j in 0..b.cols {
                m[(i, a.cols + j)] = b[(i, j)].clone();
            }
        }
        m
    }

    /// Columns `range` of the matrix.
    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m[(i, k)] = self[(i, j)].clone();
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row_dst += k * row_src
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// col_dst += k * col_src
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    /// Replace rows (a, b) by (s·a + t·b, u·a + v·b).
    fn combine_rows(&mut self, a: usize, b: usize, s: &BigInt, t: &BigInt, u: &BigInt, v: &BigInt) {
        for j in 0..self.cols {
            let x = self[(a, j)].clone();
            let y = self[(b, j)].clone();
            self[(a, j)] = s * &x + t * &y;
            self[(b, j)] = u * &x + v * &y;
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    /// Row-style Hermite normal form of the row lattice: returns the nonzero
    /// rows of the echelon basis (pivots positive, entries above pivots
    /// reduced into `[0, pivot)`).
    pub fn hnf_rows(&self) -> IntMatrix {
        let mut m = self.clone();
        let pr = m.row_echelon(self.cols, None);
        let mut out = Self::zeros(pr, self.cols);
        for i in 0..pr {
            for j in 0..self.cols {
                out[(i, j)] = m[(i, j)].clone();
            }
        }
        out
    }

    /// In-place unimodular row reduction on the first `pivot_cols` columns.
    /// Returns the number of pivot rows; rows below are zero on those columns.
    /// If `transform` is given, the same row operations are applied to it.
    fn row_echelon(&mut self, pivot_cols: usize, mut transform: Option<&mut IntMatrix>) -> usize {
        let r = self.rows;
        let mut pr = 0;
        for col in 0..pivot_cols {
            if pr == r {
                break;
            }
            for i in pr + 1..r {
                if self[(i, col)].is_zero() {
                    continue;
                }
                let a = self[(pr, col)].clone();
                let b = self[(i, col)].clone();
                let eg = a.extended_gcd(&b);
                let (g, s, t) = (eg.gcd, eg.x, eg.y);
                let ua = -(&b / &g);
                let va = &a / &g;
                self.combine_rows(pr, i, &s, &t, &ua, &va);
                if let Some(tr) = transform.as_deref_mut() {
                    tr.combine_rows(pr, i, &s, &t, &ua, &va);
                }
            }
            if self[(pr, col)].is_zero() {
                continue;
            }
            if self[(pr, col)].is_negative() {
                self.negate_row(pr);
                if let Some(tr) = transform.as_deref_mut() {
                    tr.negate_row(pr);
                }
            }
            let p = self[(pr, col)].clone();
            for i in 0..pr {
                let q = -self[(i, col)].div_floor(&p);
                self.add_row_multiple(i, pr, &q);
                if let Some(tr) = transform.as_deref_mut() {
                    tr.add_row_multiple(i, pr, &q);
                }
            }
            pr += 1;
        }
        pr
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_echelon(self.cols, None)
    }

    /// Basis (as columns) of the integer right kernel `{x ∈ ℤⁿ : self·x = 0}`.
    /// The kernel of an integer matrix is always saturated.
    pub fn kernel(&self) -> IntMatrix {
        let n = self.cols;
        let mut aug = self.transpose();
        let mut tr = Self::identity(n);
        let pr = aug.row_echelon(self.rows, Some(&mut tr));
        let k = n - pr;
        if k == 0 {
            return Self::zeros(n, 0);
        }
        let mut basis = Self::zeros(k, n);
        for i in 0..k {
            for j in 0..n {
                basis[(i, j)] = tr[(pr + i, j)].clone();
            }
        }
        basis.hnf_rows().transpose()
    }

    /// Smith normal form `u·self·v = diag(d₁,…)` with `d₁ | d₂ | …`, dᵢ ≥ 0.
    pub fn smith(&self) -> Smith {
        let (r, c) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut u = Self::identity(r);
        let mut v = Self::identity(c);
        let steps = r.min(c);
        for t in 0..steps {
            // pivot: smallest nonzero absolute value in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if !a[(i, j)].is_zero()
                        && best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap_rows(t, bi);
            u.swap_rows(t, bi);
            a.swap_cols(t, bj);
            v.swap_cols(t, bj);
            loop {
                let mut changed = false;
                for i in t + 1..r {
                    if a[(i, t)].is_zero() {
                        continue;
                    }
                    let q = a[(i, t)].div_floor(&a[(t, t)]);
                    let nq = -q;
                    a.add_row_multiple(i, t, &nq);
                    u.add_row_multiple(i, t, &nq);
                    if !a[(i, t)].is_zero() {
                        a.swap_rows(t, i);
                        u.swap_rows(t, i);
                        changed = true;
                    }
                }
                for j in t + 1..c {
                    if a[(t, j)].is_zero() {
                        continue;
                    }
                    let q = a[(t, j)].div_floor(&a[(t, t)]);
                    let nq = -q;
                    a.add_col_multiple(j, t, &nq);
                    v.add_col_multiple(j, t, &nq);
                    if !a[(t, j)].is_zero() {
                        a.swap_cols(t, j);
                        v.swap_cols(t, j);
                        changed = true;
                    }
                }
                if changed {
                    continue;
                }
                // divisibility condition on the trailing block
                let p = a[(t, t)].clone();
                let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&p)));
                match bad {
                    Some(i) => {
                        let one = BigInt::one();
                        a.add_row_multiple(t, i, &one);
                        u.add_row_multiple(t, i, &one);
                    }
                    None => break,
                }
            }
            if a[(t, t)].is_negative() {
                a.negate_row(t);
                u.negate_row(t);
            }
        }
        let diag = (0..steps).map(|i| a[(i, i)].clone()).collect();
        Smith { u, v, diag }
    }

    /// Reduced row echelon form modulo a prime, with the pivot columns.
    fn rref_mod(&self, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
        let pb = BigInt::from(p);
        let mut m: Vec<Vec<u64>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self[(i, j)].mod_floor(&pb).to_u64().expect("reduced residue fits"))
                    .collect()
            })
            .collect();
        let mut pivots = Vec::new();
        for col in 0..self.cols {
            let rank = pivots.len();
            let Some(piv) = (rank..self.rows).find(|&i| m[i][col] != 0) else { continue };
            m.swap(rank, piv);
            let inv = mod_inverse(m[rank][col], p);
            for j in 0..self.cols {
                m[rank][j] = (m[rank][j] as u128 * inv as u128 % p as u128) as u64;
            }
            for i in 0..self.rows {
                if i != rank && m[i][col] != 0 {
                    let f = m[i][col];
                    for j in 0..self.cols {
                        let sub = (f as u128 * m[rank][j] as u128 % p as u128) as u64;
                        m[i][j] = (m[i][j] + p - sub) % p;
                    }
                }
            }
            pivots.push(col);
        }
        (m, pivots)
    }

    /// Rank of the matrix reduced modulo a prime.
    pub fn rank_mod(&self, p: u64) -> usize {
        self.rref_mod(p).1.len()
    }

    /// Basis of the right kernel modulo a prime, entries in `[0, p)`.
    pub fn kernel_mod(&self, p: u64) -> Vec<Vec<u64>> {
        let (m, pivots) = self.rref_mod(p);
        (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![0u64; self.cols];
                v[free] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - m[r][free]) % p;
                }
                v
            })
            .collect()
    }

    /// Exact inverse over ℚ, `None` when singular.
    pub fn rational_inverse(&self) -> Option<RatMatrix> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..n).map(|j| BigRational::from(self[(i, j)].clone())).collect();
                row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&i| !a[i][col].is_zero())?;
            a.swap(col, piv);
            let inv = a[col][col].recip();
            for x in a[col].iter_mut() {
                *x *= &inv;
            }
            for i in 0..n {
                if i != col && !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    for j in 0..2 * n {
                        let s = &f * &a[col][j];
                        a[i][j] -= s;
                    }
                }
            }
        }
        Some(RatMatrix { rows: n, cols: n, data: a.into_iter().flat_map(|r| r.into_iter().skip(n)).collect() })
    }

    /// Inverse of a unimodular matrix, `None` if the determinant is not ±1.
    pub fn unimodular_inverse(&self) -> Option<IntMatrix> {
        self.rational_inverse()?.to_integer()
    }

    /// Machine-integer copy for enumeration kernels.
    pub fn to_i64(&self) -> Result<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| to_i64(&self[(i, j)])).collect())
            .collect()
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| BigRational::from(x.clone())).collect(),
        }
    }

    /// Content (gcd of all entries).
    pub fn content(&self) -> BigInt {
        self.data.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// Decimal-string rows, the serialised form used in reports.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)].to_string()).collect()).collect()
    }
}

/// Result of a Smith normal form computation.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub diag: Vec<BigInt>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }
}

/// Dense rational matrix, used for inverses and rational change of basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigRational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn col(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum()).collect()
    }

    /// Integer matrix if every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self[(i, j)].is_integer() {
                    return None;
                }
                m[(i, j)] = self[(i, j)].to_integer();
            }
        }
        Some(m)
    }

    /// Least common denominator of all entries.
    pub fn denominator(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
    }
}

pub(crate) fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Overflow(x.to_string()))
}

pub(crate) fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "{a} not invertible mod {p}");
    t.rem_euclid(p as i128) as u64
}

/// Gcd of a vector's entries (nonnegative).
pub fn vector_gcd(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Bezout coefficients `c` with `Σ cᵢ·vᵢ = gcd(v)`.
pub fn bezout(v: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut coeffs = vec![BigInt::zero(); v.len()];
    for (i, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let eg = g.extended_gcd(x);
        for c in coeffs.iter_mut().take(i) {
            *c *= &eg.x;
        }
        coeffs[i] = eg.y;
        g = eg.gcd;
    }
    if g.is_negative() {
        g = -g;
        for c in coeffs.iter_mut() {
            *c = -c.clone();
        }
    }
    (g, coeffs)
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = m(&[vec![4, -2, 6], vec![-2, 4, 0], vec![6, 0, 14]]);
        assert_eq!(a.det(), BigInt::from(24));
        assert_eq!(m(&[vec![0, 1], vec![1, 0]]).det(), BigInt::from(-1));
        assert_eq!(m(&[vec![0, 0], vec![0, 1]]).det(), BigInt::zero());
    }

    #[test]
    fn smith_form_of_basis_matrix() {
        // span(e+f, e-f) in Z²: elementary divisors 1, 2
        let b = m(&[vec![1, 1], vec![1, -1]]);
        let s = b.smith();
        assert_eq!(s.diag, vec![BigInt::from(1), BigInt::from(2)]);
        let d = s.u.mul(&b).mul(&s.v);
        assert_eq!(d, IntMatrix::diagonal(&s.diag));
    }

    #[test]
    fn smith_form_divisibility_chain() {
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = a.smith();
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        assert_eq!(s.u.mul(&a).mul(&s.v), IntMatrix::diagonal(&s.diag));
        assert!(s.u.det().abs().is_one() && s.v.det().abs().is_one());
    }

    #[test]
    fn kernel_is_saturated() {
        let a = m(&[vec![2, 4, 6]]);
        let k = a.kernel();
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).is_zero());
        assert!(k.smith().diag.iter().all(One::is_one));
    }

    #[test]
    fn rank_mod_prime() {
        let a = m(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(a.rank_mod(2), 0);
        assert_eq!(a.rank_mod(3), 2);
        let b = m(&[vec![1, 2, 3], vec![2, 4, 1]]);
        let k = b.kernel_mod(7);
        assert_eq!(k.len(), 1);
        assert_eq!(b.kernel_mod(5).len(), 2);
        for v in k {
            for r in 0..2 {
                let s: i64 = (0..3).map(|j| b[(r, j)].to_i64().unwrap() * v[j] as i64).sum();
                assert_eq!(s % 7, 0);
            }
        }
    }

    #[test]
    fn bezout_identity() {
        let v: Vec<BigInt> = [6, 10, 15].iter().map(|&x| BigInt::from(x)).collect();
        let (g, c) = bezout(&v);
        assert!(g.is_one());
        assert_eq!(dot(&v, &c), g);
    }

    #[test]
    fn rational_inverse_roundtrip() {
        let a = m(&[vec![2, -1], vec![-1, 2]]);
        let inv = a.rational_inverse().unwrap();
        let prod = a.to_rational().mul(&inv);
        assert_eq!(prod.to_integer().unwrap(), IntMatrix::identity(2));
    }
}
