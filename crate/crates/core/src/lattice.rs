//! Even integral lattices given by Gram matrices, and the primitive
//! sublattice calculus (saturation, orthogonal complements, overlattices).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{vector_gcd, IntMatrix, RatMatrix};

/// An even integral lattice: a symmetric Gram matrix with even diagonal.
#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
    name: Option<String>,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => write!(f, "Lattice({n}: {:?})", self.gram),
            None => write!(f, "Lattice({:?})", self.gram),
        }
    }
}

/// Sign behaviour of a nondegenerate form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Definiteness {
    Positive,
    Negative,
    Indefinite,
}

impl Lattice {
    /// Validated constructor: square, symmetric, even and nondegenerate.
    pub fn new(gram: IntMatrix) -> Result<Self> {
        let l = Self::new_possibly_degenerate(gram)?;
        if l.rank() > 0 && l.det().is_zero() {
            return Err(degenerate_error(&l.gram));
        }
        Ok(l)
    }

    /// Symmetry and evenness are checked; degeneracy is allowed. Only used
    /// for intermediate objects such as kernels before saturation.
    pub fn new_possibly_degenerate(gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare { rows: gram.rows(), cols: gram.cols() });
        }
        if let Some((row, col)) = gram.first_asymmetry() {
            return Err(Error::NotSymmetric { row, col });
        }
        for i in 0..gram.rows() {
            if gram[(i, i)].is_odd() {
                return Err(Error::NotEven { index: i, value: gram[(i, i)].to_string() });
            }
        }
        Ok(Lattice { gram, name: None })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(IntMatrix::from_i64(rows))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Name if present, otherwise the Gram matrix.
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("{:?}", self.gram))
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> BigInt {
        self.gram.det()
    }

    /// The zero lattice.
    pub fn zero() -> Self {
        Lattice { gram: IntMatrix::zeros(0, 0), name: Some("0".into()) }
    }

    /// Hyperbolic plane `[[0,1],[1,0]]`.
    pub fn u() -> Self {
        Self::from_i64(&[vec![0, 1], vec![1, 0]]).unwrap().with_name("U")
    }

    /// `U(n)`.
    pub fn u_scaled(n: i64) -> Self {
        Self::u().rescale(&BigInt::from(n))
    }

    /// Rank-one lattice `⟨k⟩`, `k` even and nonzero.
    pub fn rank_one(k: i64) -> Result<Self> {
        Ok(Self::new(IntMatrix::from_i64(&[vec![k]]))?.with_name(format!("<{k}>")))
    }

    /// Root lattice `A_n` in the simple-root basis.
    pub fn a(n: usize) -> Self {
        let mut g = IntMatrix::zeros(n, n);
        for i in 0..n {
            g[(i, i)] = BigInt::from(2);
            if i + 1 < n {
                g[(i, i + 1)] = BigInt::from(-1);
                g[(i + 1, i)] = BigInt::from(-1);
            }
        }
        Lattice::new(g).expect("A_n is nondegenerate").with_name(format!("A{n}"))
    }

    /// Root lattice `D_n`, `n ≥ 3`, simple roots with the branch node last.
    pub fn d(n: usize) -> Self {
        assert!(n >= 3, "D_n needs n >= 3");
        let mut g = IntMatrix::zeros(n, n);
        for i in 0..n {
            g[(i, i)] = BigInt::from(2);
        }
        let mut link = |a: usize, b: usize| {
            g[(a, b)] = BigInt::from(-1);
            g[(b, a)] = BigInt::from(-1);
        };
        for i in 0..n - 2 {
            link(i, i + 1);
        }
        link(n - 3, n - 1);
        Lattice::new(g).expect("D_n is nondegenerate").with_name(format!("D{n}"))
    }

    /// Root lattice `E8` (Bourbaki numbering of the simple roots).
    pub fn e8() -> Self {
        let mut g = IntMatrix::zeros(8, 8);
        for i in 0..8 {
            g[(i, i)] = BigInt::from(2);
        }
        for (a, b) in [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)] {
            g[(a, b)] = BigInt::from(-1);
            g[(b, a)] = BigInt::from(-1);
        }
        Lattice::new(g).expect("E8 is nondegenerate").with_name("E8")
    }

    /// `H5 = [[2,1],[1,-2]]`, even of signature (1,1) and determinant −5.
    pub fn h5() -> Self {
        Self::from_i64(&[vec![2, 1], vec![1, -2]]).unwrap().with_name("H5")
    }

    /// `K7 = [[2,1],[1,4]]`, positive definite of determinant 7.
    pub fn k7() -> Self {
        Self::from_i64(&[vec![2, 1], vec![1, 4]]).unwrap().with_name("K7")
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let name = match (&self.name, &other.name) {
            (Some(a), Some(b)) => Some(format!("{a}+{b}")),
            _ => None,
        };
        Lattice { gram: IntMatrix::block_diag(&self.gram, &other.gram), name }
    }

    pub fn direct_sum_all<'a>(parts: impl IntoIterator<Item = &'a Lattice>) -> Lattice {
        parts.into_iter().fold(None, |acc: Option<Lattice>, l| match acc {
            None => Some(l.clone()),
            Some(a) => Some(a.direct_sum(l)),
        })
        .unwrap_or_else(Lattice::zero)
    }

    /// `L^{⊕k}`.
    pub fn power(&self, k: usize) -> Lattice {
        let mut out = Lattice::zero();
        for i in 0..k {
            out = if i == 0 { self.clone() } else { out.direct_sum(self) };
        }
        if let Some(n) = &self.name {
            if k > 1 {
                out.name = Some(format!("{}^{k}", wrap_name(n)));
            }
        }
        out
    }

    /// `L(n)`: every Gram entry multiplied by `n`.
    pub fn rescale(&self, n: &BigInt) -> Lattice {
        let name = self.name.as_ref().map(|s| format!("{}({n})", wrap_name(s)));
        Lattice { gram: self.gram.scale(n), name }
    }

    pub fn negate(&self) -> Lattice {
        self.rescale(&BigInt::from(-1))
    }

    /// Bilinear form on coordinate vectors.
    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        crate::matrix::dot(x, &self.gram.mul_vec(y))
    }

    pub fn norm(&self, x: &[BigInt]) -> BigInt {
        self.pair(x, x)
    }

    /// Gram matrix of the given columns.
    pub fn gram_of(&self, basis: &IntMatrix) -> IntMatrix {
        basis.congruence(&self.gram)
    }

    /// Exact inertia `(r₊, r₋)` via symmetric rational elimination.
    pub fn signature(&self) -> Result<(usize, usize)> {
        let (diag, _) = self.diagonalize()?;
        let pos = diag.iter().filter(|d| d.is_positive()).count();
        Ok((pos, diag.len() - pos))
    }

    /// Rational orthogonal basis: returns the diagonal entries and the basis
    /// vectors (columns, in lattice coordinates) realising them.
    pub fn diagonalize(&self) -> Result<(Vec<BigRational>, RatMatrix)> {
        let n = self.rank();
        if n > 0 && self.det().is_zero() {
            return Err(degenerate_error(&self.gram));
        }
        let mut a = self.gram.to_rational();
        let mut basis = IntMatrix::identity(n).to_rational();
        let mut diag = Vec::with_capacity(n);
        for k in 0..n {
            if a[(k, k)].is_zero() {
                if let Some(i) = (k + 1..n).find(|&i| !a[(i, i)].is_zero()) {
                    sym_swap(&mut a, &mut basis, k, i);
                } else {
                    let j = (k + 1..n)
                        .find(|&j| !a[(k, j)].is_zero())
                        .ok_or_else(|| Error::Inconsistent("zero pivot row in nondegenerate form".into()))?;
                    // x_k <- x_k + x_j gives a nonzero diagonal entry 2·a_kj
                    sym_add(&mut a, &mut basis, k, j, &BigRational::one());
                }
            }
            let pivot = a[(k, k)].clone();
            for j in k + 1..n {
                if !a[(k, j)].is_zero() {
                    let c = -(&a[(k, j)] / &pivot);
                    sym_add(&mut a, &mut basis, j, k, &c);
                }
            }
            diag.push(pivot);
        }
        Ok((diag, basis))
    }

    pub fn definiteness(&self) -> Result<Definiteness> {
        let (p, m) = self.signature()?;
        Ok(if m == 0 {
            Definiteness::Positive
        } else if p == 0 {
            Definiteness::Negative
        } else {
            Definiteness::Indefinite
        })
    }

    pub fn is_definite(&self) -> bool {
        matches!(self.definiteness(), Ok(Definiteness::Positive | Definiteness::Negative))
    }

    /// Divisibility: the positive generator of the ideal `(v, L)`.
    pub fn divisibility(&self, v: &[BigInt]) -> Result<BigInt> {
        if v.len() != self.rank() {
            return Err(Error::Dimension { expected: self.rank(), got: v.len() });
        }
        if v.iter().all(Zero::is_zero) {
            return Err(Error::ZeroVector);
        }
        let g = vector_gcd(&self.gram.mul_vec(v));
        if g.is_zero() {
            return Err(degenerate_error(&self.gram));
        }
        Ok(g)
    }

    /// Lattice with the same form in a new basis (columns of `basis`).
    pub fn change_basis(&self, basis: &IntMatrix) -> Result<Lattice> {
        Lattice::new(self.gram_of(basis))
    }
}

fn wrap_name(s: &str) -> String {
    if s.contains('+') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

fn degenerate_error(gram: &IntMatrix) -> Error {
    let k = gram.kernel();
    let kernel = if k.cols() > 0 { k.col(0).iter().map(ToString::to_string).collect() } else { vec![] };
    Error::Degenerate { kernel }
}

fn sym_swap(a: &mut RatMatrix, basis: &mut RatMatrix, i: usize, j: usize) {
    let n = a.rows();
    for c in 0..n {
        let t = a[(i, c)].clone();
        a[(i, c)] = a[(j, c)].clone();
        a[(j, c)] = t;
    }
    for r in 0..n {
        let t = a[(r, i)].clone();
        a[(r, i)] = a[(r, j)].clone();
        a[(r, j)] = t;
    }
    for r in 0..basis.rows() {
        let t = basis[(r, i)].clone();
        basis[(r, i)] = basis[(r, j)].clone();
        basis[(r, j)] = t;
    }
}

/// Basis change `b_dst += c·b_src`, applied congruently to the form.
fn sym_add(a: &mut RatMatrix, basis: &mut RatMatrix, dst: usize, src: usize, c: &BigRational) {
    let n = a.rows();
    for col in 0..n {
        let v = c * &a[(src, col)];
        a[(dst, col)] += v;
    }
    for row in 0..n {
        let v = c * &a[(row, src)];
        a[(row, dst)] += v;
    }
    for r in 0..basis.rows() {
        let v = c * &basis[(r, src)];
        basis[(r, dst)] += v;
    }
}

/// A sublattice given by independent columns in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    ambient: Lattice,
    basis: IntMatrix,
}

impl Sublattice {
    pub fn new(ambient: Lattice, basis: IntMatrix) -> Result<Self> {
        if basis.rows() != ambient.rank() {
            return Err(Error::Dimension { expected: ambient.rank(), got: basis.rows() });
        }
        if basis.rank() != basis.cols() {
            return Err(Error::Inapplicable("sublattice basis columns are dependent".into()));
        }
        Ok(Sublattice { ambient, basis })
    }

    pub fn from_columns(ambient: Lattice, columns: &[Vec<BigInt>]) -> Result<Self> {
        let n = ambient.rank();
        Self::new(ambient, IntMatrix::from_columns(n, columns))
    }

    /// The whole ambient lattice.
    pub fn full(ambient: Lattice) -> Self {
        let n = ambient.rank();
        Sublattice { ambient, basis: IntMatrix::identity(n) }
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// Inherited Gram matrix `Bᵀ·G·B`.
    pub fn gram(&self) -> IntMatrix {
        self.ambient.gram_of(&self.basis)
    }

    /// The sublattice as a lattice in its own right.
    pub fn lattice(&self) -> Result<Lattice> {
        if self.rank() == 0 {
            return Ok(Lattice::zero());
        }
        Lattice::new(self.gram())
    }

    /// Rational determinant of the inherited form (1 for the zero lattice).
    pub fn det(&self) -> BigInt {
        self.gram().det()
    }

    /// Elementary divisors of the basis matrix; all ones iff primitive.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        self.basis.smith().diag
    }

    pub fn is_primitive(&self) -> bool {
        self.elementary_divisors().iter().all(One::is_one)
    }

    /// `[sat(S) : S]`.
    pub fn saturation_index(&self) -> BigInt {
        self.elementary_divisors().iter().product()
    }

    /// Smallest primitive sublattice with the same rational span.
    pub fn saturate(&self) -> Sublattice {
        let n = self.ambient.rank();
        if self.rank() == 0 {
            return self.clone();
        }
        if self.rank() == n {
            return Sublattice::full(self.ambient.clone());
        }
        // left null space of the basis, then its null space
        let left = self.basis.transpose().kernel();
        let sat = left.transpose().kernel();
        Sublattice { ambient: self.ambient.clone(), basis: sat }
    }

    /// `{x ∈ ambient : (x, s) = 0 ∀ s ∈ S}`, saturated by construction.
    pub fn orthogonal_complement(&self) -> Sublattice {
        let n = self.ambient.rank();
        if self.rank() == 0 {
            return Sublattice::full(self.ambient.clone());
        }
        let m = self.basis.transpose().mul(self.ambient.gram());
        let k = m.kernel();
        Sublattice { ambient: self.ambient.clone(), basis: if k.cols() == 0 { IntMatrix::zeros(n, 0) } else { k } }
    }

    /// Span of this sublattice together with extra ambient vectors.
    pub fn extend(&self, vectors: &[Vec<BigInt>]) -> Result<Sublattice> {
        let n = self.ambient.rank();
        let extra = IntMatrix::from_columns(n, vectors);
        Sublattice::new(self.ambient.clone(), IntMatrix::hstack(&self.basis, &extra))
    }

    /// Coordinates of an ambient vector in this basis, if it lies in the ℚ-span.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<Vec<BigRational>> {
        let g = self.basis.transpose().mul(&self.basis);
        let inv = g.rational_inverse()?;
        let rhs: Vec<BigRational> =
            self.basis.transpose().mul_vec(x).into_iter().map(BigRational::from).collect();
        let c = inv.mul_vec(&rhs);
        // verify x really is in the span
        let back: Vec<BigRational> = (0..self.ambient.rank())
            .map(|i| (0..self.rank()).map(|j| BigRational::from(self.basis[(i, j)].clone()) * &c[j]).sum())
            .collect();
        let xr: Vec<BigRational> = x.iter().cloned().map(BigRational::from).collect();
        (back == xr).then_some(c)
    }

    /// Map a vector given in sublattice coordinates to ambient coordinates.
    pub fn to_ambient(&self, coords: &[BigInt]) -> Vec<BigInt> {
        self.basis.mul_vec(coords)
    }

    /// Same rational span, expressed with a different (unimodularly related) basis.
    pub fn with_basis_change(&self, change: &IntMatrix) -> Sublattice {
        Sublattice { ambient: self.ambient.clone(), basis: self.basis.mul(change) }
    }

    /// The same basis vectors pushed into a larger ambient lattice by an embedding.
    pub fn push_forward(&self, embedding: &IntMatrix, target: &Lattice) -> Sublattice {
        Sublattice { ambient: target.clone(), basis: embedding.mul(&self.basis) }
    }
}

/// `|ambient / (A ⊕ B)|` for two sublattices of complementary rank.
pub fn glue_index(a: &Sublattice, b: &Sublattice) -> Result<BigInt> {
    let m = IntMatrix::hstack(a.basis(), b.basis());
    if !m.is_square() {
        return Err(Error::Dimension { expected: a.ambient().rank(), got: m.cols() });
    }
    Ok(m.det().abs())
}

/// Overlattice of `base` spanned by its basis and rational glue vectors
/// (coordinates in the basis of `base`). Returns the overlattice and the
/// rational matrix whose columns are its basis in `base` coordinates.
pub fn overlattice(base: &Lattice, glue: &[Vec<BigRational>]) -> Result<(Lattice, RatMatrix)> {
    let n = base.rank();
    let mut gens: Vec<Vec<BigRational>> =
        IntMatrix::identity(n).columns().into_iter().map(|c| c.into_iter().map(BigRational::from).collect()).collect();
    gens.extend(glue.iter().cloned());
    let denom = gens.iter().flatten().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let rows: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| g.iter().map(|x| (x * BigRational::from(denom.clone())).to_integer()).collect())
        .collect();
    let h = IntMatrix::from_rows(rows)?.hnf_rows();
    if h.rows() != n {
        return Err(Error::Inconsistent("overlattice generators have wrong rank".into()));
    }
    let mut p = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            p[(j, i)] = BigRational::new(h[(i, j)].clone(), denom.clone());
        }
    }
    let g = base.gram().to_rational();
    let pt = transpose_rat(&p);
    let gram = pt.mul(&g).mul(&p).to_integer().ok_or_else(|| Error::Inapplicable("glue is not integral".into()))?;
    Ok((Lattice::new(gram)?, p))
}

pub(crate) fn transpose_rat(m: &RatMatrix) -> RatMatrix {
    let mut t = RatMatrix::zeros(m.cols(), m.rows());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            t[(j, i)] = m[(i, j)].clone();
        }
    }
    t
}
