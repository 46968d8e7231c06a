//! Finite-order isometries and their invariant/coinvariant decompositions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::discriminant::DiscriminantGroup;
use crate::error::{Error, Result};
use crate::genus::{is_prime, p_adic_length};
use crate::lattice::{glue_index, overlattice, Lattice, Sublattice};
use crate::matrix::{dot, IntMatrix, RatMatrix};

pub const DEFAULT_ORDER_CAP: u32 = 120;

/// An integer matrix `M` with `Mᵀ·G·M = G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    lattice: Lattice,
    matrix: IntMatrix,
}

impl Isometry {
    pub fn new(lattice: Lattice, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != lattice.rank() || matrix.cols() != lattice.rank() {
            return Err(Error::Dimension { expected: lattice.rank(), got: matrix.rows() });
        }
        if &matrix.congruence(lattice.gram()) != lattice.gram() {
            return Err(Error::NotIsometry);
        }
        Ok(Isometry { lattice, matrix })
    }

    pub fn identity(lattice: Lattice) -> Self {
        let n = lattice.rank();
        Isometry { lattice, matrix: IntMatrix::identity(n) }
    }

    pub fn minus_identity(lattice: Lattice) -> Self {
        let n = lattice.rank();
        Isometry { lattice, matrix: IntMatrix::identity(n).neg() }
    }

    /// Reflection `x ↦ x − 2(x,v)/v² · v`; fails unless it is integral.
    pub fn reflection(lattice: Lattice, v: &[BigInt]) -> Result<Self> {
        let vv = lattice.norm(v);
        if vv.is_zero() {
            return Err(Error::Inapplicable("cannot reflect in an isotropic vector".into()));
        }
        let n = lattice.rank();
        let gv = lattice.gram().mul_vec(v);
        let mut m = IntMatrix::identity(n);
        for j in 0..n {
            let num = BigInt::from(2) * &gv[j];
            if !num.is_multiple_of(&vv) {
                return Err(Error::Inapplicable("reflection is not integral".into()));
            }
            let c = num / &vv;
            for i in 0..n {
                m[(i, j)] -= &c * &v[i];
            }
        }
        Isometry::new(lattice, m)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(x)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry { lattice: self.lattice.clone(), matrix: self.matrix.mul(&other.matrix) }
    }

    pub fn power(&self, k: u32) -> Isometry {
        let mut acc = IntMatrix::identity(self.lattice.rank());
        for _ in 0..k {
            acc = acc.mul(&self.matrix);
        }
        Isometry { lattice: self.lattice.clone(), matrix: acc }
    }

    pub fn inverse(&self) -> Isometry {
        let inv = self.matrix.unimodular_inverse().expect("isometries are unimodular");
        Isometry { lattice: self.lattice.clone(), matrix: inv }
    }

    pub fn order(&self, cap: u32) -> Result<u32> {
        let mut acc = self.matrix.clone();
        for k in 1..=cap {
            if acc.is_identity() {
                return Ok(k);
            }
            acc = acc.mul(&self.matrix);
        }
        Err(Error::InfiniteOrder { cap })
    }

    pub fn determinant(&self) -> i8 {
        if self.matrix.det().is_negative() {
            -1
        } else {
            1
        }
    }

    /// Column `j` is the class of the image of the `j`-th discriminant generator.
    pub fn discriminant_action(&self, disc: &DiscriminantGroup) -> Result<Vec<Vec<BigInt>>> {
        disc.action(&self.matrix.to_rational())
    }

    pub fn chi(&self) -> Result<Chi> {
        let disc = DiscriminantGroup::of(&self.lattice)?;
        chi_of(&disc, &self.discriminant_action(&disc)?)
    }

    /// Whether the induced action on `A_L` is trivial.
    pub fn acts_trivially_on_discriminant(&self, disc: &DiscriminantGroup) -> Result<bool> {
        Ok(disc.generators.iter().all(|g| {
            let img = self.matrix.to_rational().mul_vec(g);
            let diff: Vec<BigRational> = img.iter().zip(g).map(|(a, b)| a - b).collect();
            diff.iter().all(BigRational::is_integer)
        }))
    }
}

/// Induced action on `A_L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chi {
    /// The action is `±1`.
    Sign(i8),
    /// Cyclic group, multiplication by a unit other than `±1`.
    Unit(String),
    /// Columns are the images of the generators in generator coordinates.
    Action(Vec<Vec<String>>),
}

impl Chi {
    pub fn sign(&self) -> Option<i8> {
        match self {
            Chi::Sign(s) => Some(*s),
            _ => None,
        }
    }
}

fn chi_of(disc: &DiscriminantGroup, action: &[Vec<BigInt>]) -> Result<Chi> {
    let k = disc.cyclic_orders.len();
    if k == 0 {
        return Ok(Chi::Sign(1));
    }
    let scalar = |s: i64| {
        (0..k).all(|j| {
            (0..k).all(|i| {
                let want = if i == j { BigInt::from(s) } else { BigInt::zero() };
                (&action[j][i] - want).is_multiple_of(&disc.cyclic_orders[i])
            })
        })
    };
    if scalar(1) {
        return Ok(Chi::Sign(1));
    }
    if scalar(-1) {
        return Ok(Chi::Sign(-1));
    }
    if k == 1 {
        return Ok(Chi::Unit(action[0][0].to_string()));
    }
    Ok(Chi::Action(action.iter().map(|c| c.iter().map(ToString::to_string).collect()).collect()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsometryInvariants {
    pub order: u32,
    pub determinant: i8,
    pub chi: Chi,
}

pub fn isometry_invariants(g: &Isometry) -> Result<IsometryInvariants> {
    Ok(IsometryInvariants { order: g.order(DEFAULT_ORDER_CAP)?, determinant: g.determinant(), chi: g.chi()? })
}

/// `T = ker(g − 1)`, `S = T^⊥` and the glue `L/(T ⊕ S) ≅ (ℤ/p)^a`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub p: u32,
    pub invariant: Sublattice,
    pub coinvariant: Sublattice,
    pub a: usize,
    pub m: usize,
    pub glue_index: BigInt,
}

impl Decomposition {
    pub fn in_invariant(&self, x: &[BigInt]) -> bool {
        self.invariant.coordinates(x).is_some_and(|c| c.iter().all(BigRational::is_integer))
    }

    pub fn in_coinvariant(&self, x: &[BigInt]) -> bool {
        let g = self.invariant.ambient().gram();
        let gx = g.mul_vec(x);
        // S is the full orthogonal complement of T.
        self.invariant.basis().columns().iter().all(|t| dot(t, &gx).is_zero())
    }

    /// Whether `x ∈ T ⊕ S`.
    pub fn in_sum(&self, x: &[BigInt]) -> bool {
        let both = IntMatrix::hstack(self.invariant.basis(), self.coinvariant.basis());
        match both.rational_inverse() {
            Some(inv) => {
                let xr: Vec<BigRational> = x.iter().cloned().map(BigRational::from).collect();
                inv.mul_vec(&xr).iter().all(BigRational::is_integer)
            }
            None => false,
        }
    }
}

pub fn invariant_coinvariant(g: &Isometry) -> Result<Decomposition> {
    let order = g.order(DEFAULT_ORDER_CAP)?;
    if !is_prime(order as u64) {
        return Err(Error::NotPrimeOrder(order));
    }
    let n = g.lattice().rank();
    let ambient = g.lattice().clone();
    let fixed = g.matrix().sub(&IntMatrix::identity(n)).kernel();
    let t = Sublattice::new(ambient.clone(), fixed)?;
    let s = t.orthogonal_complement();
    let index = glue_index(&t, &s)?;
    let lhs = &index * &index * ambient.det().abs();
    let rhs = (t.det() * s.det()).abs();
    if lhs != rhs {
        return Err(Error::Inconsistent(format!("glue index {index} does not match the determinants")));
    }
    let p = BigInt::from(order);
    let both = IntMatrix::hstack(t.basis(), s.basis());
    if let Some(bad) = both.smith().diag.iter().find(|d| !d.is_one() && **d != p) {
        return Err(Error::Inconsistent(format!("glue group has an elementary divisor {bad}")));
    }
    let a = p_adic_length(&index, order as u64)
        .ok_or_else(|| Error::Inconsistent(format!("glue index {index} is not a power of {order}")))?;
    if s.rank() % (order as usize - 1) != 0 {
        return Err(Error::Inconsistent("rank of the coinvariant lattice is not divisible by p-1".into()));
    }
    let m = s.rank() / (order as usize - 1);
    if a > m {
        return Err(Error::Inconsistent(format!("a = {a} exceeds m = {m}")));
    }
    Ok(Decomposition { p: order, invariant: t, coinvariant: s, a, m, glue_index: index })
}

/// The involution acting as `+1` on the span of `t_basis` and `−1` on the span
/// of `s_basis`, two orthogonal sublattices of full total rank.
pub fn realize_involution(ambient: &Lattice, t_basis: &IntMatrix, s_basis: &IntMatrix) -> Result<Isometry> {
    let n = ambient.rank();
    if t_basis.cols() + s_basis.cols() != n {
        return Err(Error::Dimension { expected: n, got: t_basis.cols() + s_basis.cols() });
    }
    let cross = t_basis.transpose().mul(ambient.gram()).mul(s_basis);
    if !cross.is_zero() {
        return Err(Error::NotOrthogonal);
    }
    let both = IntMatrix::hstack(t_basis, s_basis);
    if let Some(bad) = both.smith().diag.iter().find(|d| !(d.is_one() || **d == BigInt::from(2))) {
        return Err(Error::GlueNotTwoTorsion(bad.to_string()));
    }
    let inv = both.rational_inverse().ok_or(Error::Inapplicable("sublattices do not span".into()))?;
    let signs: Vec<BigInt> =
        (0..n).map(|i| if i < t_basis.cols() { BigInt::one() } else { -BigInt::one() }).collect();
    let m = both.to_rational().mul(&IntMatrix::diagonal(&signs).to_rational()).mul(&inv);
    let m = m.to_integer().ok_or_else(|| Error::GlueNotTwoTorsion("extension is not integral".into()))?;
    Isometry::new(ambient.clone(), m)
}

/// Involution `(+1) ⊕ (−1)` on the overlattice of `T ⊕ S` spanned by the glue
/// vectors (rational coordinates in the basis of `T ⊕ S`). Returns the
/// overlattice and the involution in its basis.
pub fn realize_glued_involution(t: &Lattice, s: &Lattice, glue: &[Vec<BigRational>]) -> Result<Isometry> {
    let base = t.direct_sum(s);
    for v in glue {
        if let Some(bad) = v.iter().find(|x| !(*x * BigRational::from(BigInt::from(2))).is_integer()) {
            return Err(Error::GlueNotTwoTorsion(bad.to_string()));
        }
    }
    let (over, p) = overlattice(&base, glue)?;
    let n = base.rank();
    let mut d = RatMatrix::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = BigRational::from(if i < t.rank() { BigInt::one() } else { -BigInt::one() });
    }
    let pinv = invert_rational(&p)?;
    let m = pinv.mul(&d).mul(&p).to_integer().ok_or_else(|| Error::GlueNotTwoTorsion("extension is not integral".into()))?;
    Isometry::new(over, m)
}

fn invert_rational(p: &RatMatrix) -> Result<RatMatrix> {
    let denom = p.denominator();
    let scaled = IntMatrix::from_rows(
        (0..p.rows())
            .map(|i| (0..p.cols()).map(|j| (&p[(i, j)] * BigRational::from(denom.clone())).to_integer()).collect())
            .collect(),
    )?;
    let inv = scaled.rational_inverse().ok_or(Error::Inapplicable("singular overlattice basis".into()))?;
    let mut out = inv;
    for i in 0..out.rows() {
        for j in 0..out.cols() {
            out[(i, j)] = &out[(i, j)] * BigRational::from(denom.clone());
        }
    }
    Ok(out)
}

/// `Σ_{i<k} gⁱ v` for `k` the order of `g`.
pub fn orbit_sum(g: &Isometry, v: &[BigInt], order: u32) -> Vec<BigInt> {
    let mut acc = vec![BigInt::zero(); v.len()];
    let mut cur = v.to_vec();
    for _ in 0..order {
        for (a, c) in acc.iter_mut().zip(&cur) {
            *a += c;
        }
        cur = g.apply(&cur);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::parse;

    fn kummer() -> Lattice {
        parse("U^3+<-6>").unwrap()
    }

    #[test]
    fn invariants_of_simple_isometries() {
        let l = kummer();
        let id = isometry_invariants(&Isometry::identity(l.clone())).unwrap();
        assert_eq!(id, IsometryInvariants { order: 1, determinant: 1, chi: Chi::Sign(1) });
        let m = isometry_invariants(&Isometry::minus_identity(l.clone())).unwrap();
        assert_eq!(m, IsometryInvariants { order: 2, determinant: -1, chi: Chi::Sign(-1) });
        let mut delta = vec![BigInt::zero(); 7];
        delta[6] = BigInt::one();
        let r = Isometry::reflection(l, &delta).unwrap();
        assert_eq!(
            isometry_invariants(&r).unwrap(),
            IsometryInvariants { order: 2, determinant: -1, chi: Chi::Sign(-1) }
        );
    }

    #[test]
    fn non_isometry_rejected() {
        let m = IntMatrix::from_i64(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(Isometry::new(Lattice::u(), m), Err(Error::NotIsometry));
    }

    #[test]
    fn swap_of_two_planes() {
        let l = parse("U+U").unwrap();
        let m = IntMatrix::from_i64(&[vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        let d = invariant_coinvariant(&Isometry::new(l, m).unwrap()).unwrap();
        assert_eq!((d.a, d.m), (2, 2));
        assert_eq!(d.invariant.det(), BigInt::from(-4));
        assert_eq!(d.coinvariant.det(), BigInt::from(-4));
        assert_eq!(d.glue_index, BigInt::from(4));
    }

    #[test]
    fn minus_identity_and_rotation() {
        let l = parse("U+<-2>").unwrap();
        let d = invariant_coinvariant(&Isometry::minus_identity(l)).unwrap();
        assert_eq!((d.invariant.rank(), d.coinvariant.rank(), d.a), (0, 3, 0));
        let rot = Isometry::new(Lattice::a(2), IntMatrix::from_i64(&[vec![0, -1], vec![1, -1]])).unwrap();
        let d = invariant_coinvariant(&rot).unwrap();
        assert_eq!((d.invariant.rank(), d.a, d.m), (0, 0, 1));
        assert_eq!(isometry_invariants(&rot).unwrap().chi, Chi::Sign(1));
    }

    #[test]
    fn identity_is_not_prime_order() {
        assert_eq!(invariant_coinvariant(&Isometry::identity(Lattice::u())).unwrap_err(), Error::NotPrimeOrder(1));
    }

    #[test]
    fn involution_from_sublattices() {
        let u4 = parse("U^4").unwrap();
        let cols = |v: &[Vec<i64>]| {
            IntMatrix::from_columns(8, &v.iter().map(|c| c.iter().map(|x| BigInt::from(*x)).collect()).collect::<Vec<_>>())
        };
        let t = cols(&[
            vec![1, 0, 0, 0, 0, 0, 0, 0],
            vec![0, 1, 0, 0, 0, 0, 0, 0],
            vec![0, 0, 1, 0, 0, 0, 0, 0],
            vec![0, 0, 0, 1, 0, 0, 0, 0],
        ]);
        let s = cols(&[
            vec![0, 0, 0, 0, 1, 0, 0, 0],
            vec![0, 0, 0, 0, 0, 1, 0, 0],
            vec![0, 0, 0, 0, 0, 0, 1, 0],
            vec![0, 0, 0, 0, 0, 0, 0, 1],
        ]);
        let g = realize_involution(&u4, &t, &s).unwrap();
        let d = invariant_coinvariant(&g).unwrap();
        assert_eq!(d.invariant.basis(), &t);
        assert_eq!(d.a, 0);
    }

    #[test]
    fn glued_involution_on_u_from_two_lines() {
        // <2> ⊕ <-2> glued by (1/2, 1/2) is U.
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let g = realize_glued_involution(&parse("<2>").unwrap(), &parse("<-2>").unwrap(), &[vec![half.clone(), half]])
            .unwrap();
        assert_eq!(g.lattice().det(), BigInt::from(-1));
        let d = invariant_coinvariant(&g).unwrap();
        assert_eq!(d.a, 1);
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        assert!(matches!(
            realize_glued_involution(&parse("<2>").unwrap(), &parse("<-2>").unwrap(), &[vec![third.clone(), third]]),
            Err(Error::GlueNotTwoTorsion(_))
        ));
    }
}
