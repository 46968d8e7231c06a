//! Discriminant groups `L*/L` with their finite quadratic forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::RatMatrix;

/// `x mod m` for rationals, as the canonical representative in `[0, m)`.
pub fn rat_mod(x: &BigRational, m: i64) -> BigRational {
    let m = BigRational::from(BigInt::from(m));
    let q = (x / &m).floor();
    x - q * m
}

/// `A_L = L*/L` as a product of cyclic groups with the discriminant form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantGroup {
    /// Invariant factors `d₁ | d₂ | …`, all > 1.
    pub cyclic_orders: Vec<BigInt>,
    /// Rational representatives (lattice coordinates) of the generators.
    pub generators: Vec<Vec<BigRational>>,
    /// `q(gᵢ)` in `[0, 2)`.
    pub q_values: Vec<BigRational>,
    /// `b(gᵢ, gⱼ)` in `[0, 1)`.
    pub bilinear: Vec<Vec<BigRational>>,
    /// Rows of `D·V⁻¹` for the kept Smith indices: reading off class coordinates.
    coordinate_rows: Vec<Vec<BigRational>>,
}

impl DiscriminantGroup {
    pub fn of(lattice: &Lattice) -> Result<Self> {
        let n = lattice.rank();
        if n == 0 {
            return Ok(Self::trivial());
        }
        if lattice.det().is_zero() {
            return Err(Error::Degenerate { kernel: vec![] });
        }
        let smith = lattice.gram().smith();
        let vinv = smith
            .v
            .rational_inverse()
            .ok_or_else(|| Error::Inconsistent("smith transform not invertible".into()))?;
        let g = lattice.gram().to_rational();
        let mut cyclic_orders = Vec::new();
        let mut generators = Vec::new();
        let mut coordinate_rows = Vec::new();
        for (i, d) in smith.diag.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            let dq = BigRational::from(d.clone());
            let gen: Vec<BigRational> = (0..n).map(|r| BigRational::from(smith.v[(r, i)].clone()) / &dq).collect();
            let row: Vec<BigRational> = (0..n).map(|c| &vinv[(i, c)] * &dq).collect();
            cyclic_orders.push(d.clone());
            generators.push(gen);
            coordinate_rows.push(row);
        }
        let pair = |x: &[BigRational], y: &[BigRational]| -> BigRational {
            let gy = g.mul_vec(y);
            x.iter().zip(&gy).map(|(a, b)| a * b).sum()
        };
        let q_values = generators.iter().map(|x| rat_mod(&pair(x, x), 2)).collect();
        let bilinear = generators
            .iter()
            .map(|x| generators.iter().map(|y| rat_mod(&pair(x, y), 1)).collect())
            .collect();
        Ok(DiscriminantGroup { cyclic_orders, generators, q_values, bilinear, coordinate_rows })
    }

    pub fn trivial() -> Self {
        DiscriminantGroup {
            cyclic_orders: vec![],
            generators: vec![],
            q_values: vec![],
            bilinear: vec![],
            coordinate_rows: vec![],
        }
    }

    pub fn order(&self) -> BigInt {
        self.cyclic_orders.iter().product()
    }

    /// Minimal number of generators `l(A_L)`.
    pub fn length(&self) -> usize {
        self.cyclic_orders.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.cyclic_orders.is_empty()
    }

    /// Exponent (largest invariant factor), 1 for the trivial group.
    pub fn exponent(&self) -> BigInt {
        self.cyclic_orders.last().cloned().unwrap_or_else(BigInt::one)
    }

    /// Class of a dual vector `x ∈ L*` as coordinates modulo the cyclic orders.
    /// Errors if `x` is not in the dual lattice.
    pub fn class_of(&self, x: &[BigRational]) -> Result<Vec<BigInt>> {
        self.coordinate_rows
            .iter()
            .zip(&self.cyclic_orders)
            .map(|(row, d)| {
                let c: BigRational = row.iter().zip(x).map(|(a, b)| a * b).sum();
                if !c.is_integer() {
                    return Err(Error::Inapplicable("vector is not in the dual lattice".into()));
                }
                Ok(c.to_integer().mod_floor(d))
            })
            .collect()
    }

    /// Whether `x` represents the zero class, i.e. lies in `L`.
    pub fn is_zero_class(&self, x: &[BigRational]) -> Result<bool> {
        Ok(self.class_of(x)?.iter().all(Zero::is_zero))
    }

    /// Action of a lattice automorphism on the generators: column `j` holds
    /// the class of `M·gⱼ`.
    pub fn action(&self, matrix: &RatMatrix) -> Result<Vec<Vec<BigInt>>> {
        self.generators.iter().map(|g| self.class_of(&matrix.mul_vec(g))).collect()
    }

    /// Finite quadratic form with small machine integers, for brute force.
    pub fn finite_form(&self) -> Option<FiniteQuadraticForm> {
        let orders: Option<Vec<u64>> = self.cyclic_orders.iter().map(ToPrimitive::to_u64).collect();
        let orders = orders?;
        Some(FiniteQuadraticForm { orders, q: self.q_values.clone(), b: self.bilinear.clone() })
    }

    /// `q(x)` for a class given by coordinates.
    pub fn q_of_class(&self, c: &[BigInt]) -> BigRational {
        quadratic_value(&self.q_values, &self.bilinear, c.iter().map(|x| BigRational::from(x.clone())).collect())
    }

    /// δ = 0 iff q is integer valued (meaningful for 2-elementary groups,
    /// where q is determined by its values on generators).
    pub fn parity(&self) -> u8 {
        if self.q_values.iter().all(BigRational::is_integer) {
            0
        } else {
            1
        }
    }
}

fn quadratic_value(q: &[BigRational], b: &[Vec<BigRational>], c: Vec<BigRational>) -> BigRational {
    let mut total = BigRational::zero();
    for i in 0..c.len() {
        if c[i].is_zero() {
            continue;
        }
        total += &c[i] * &c[i] * &q[i];
        for j in i + 1..c.len() {
            total += BigRational::from(BigInt::from(2)) * &c[i] * &c[j] * &b[i][j];
        }
    }
    rat_mod(&total, 2)
}

/// A finite quadratic form `⊕ ℤ/dᵢ` with generator values, for brute-force
/// isomorphism testing of small discriminant forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuadraticForm {
    pub orders: Vec<u64>,
    pub q: Vec<BigRational>,
    pub b: Vec<Vec<BigRational>>,
}

impl FiniteQuadraticForm {
    pub fn size(&self) -> u64 {
        self.orders.iter().product()
    }

    /// All elements as coordinate tuples.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &d in &self.orders {
            out = out
                .into_iter()
                .flat_map(|e| {
                    (0..d).map(move |x| {
                        let mut e2 = e.clone();
                        e2.push(x);
                        e2
                    })
                })
                .collect();
        }
        out
    }

    pub fn q_of(&self, c: &[u64]) -> BigRational {
        quadratic_value(&self.q, &self.b, c.iter().map(|&x| BigRational::from(BigInt::from(x))).collect())
    }

    pub fn b_of(&self, x: &[u64], y: &[u64]) -> BigRational {
        let mut t = BigRational::zero();
        for i in 0..x.len() {
            for j in 0..y.len() {
                if x[i] != 0 && y[j] != 0 {
                    t += BigRational::from(BigInt::from(x[i] * y[j])) * &self.b[i][j];
                }
            }
        }
        rat_mod(&t, 1)
    }

    fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).zip(&self.orders).map(|((a, b), d)| (a + b) % d).collect()
    }

    fn element_order(&self, x: &[u64]) -> u64 {
        x.iter().zip(&self.orders).fold(1, |acc, (&a, &d)| {
            let o = d / num_integer::gcd(a, d);
            num_integer::lcm(acc, o)
        })
    }

    /// The form with all values negated.
    pub fn negated(&self) -> Self {
        FiniteQuadraticForm {
            orders: self.orders.clone(),
            q: self.q.iter().map(|x| rat_mod(&-x, 2)).collect(),
            b: self.b.iter().map(|r| r.iter().map(|x| rat_mod(&-x, 1)).collect()).collect(),
        }
    }

    /// Brute-force isomorphism test: map generators to elements of the
    /// target with compatible order, q-value and pairings, then check that
    /// the images generate the whole target.
    pub fn is_isomorphic(&self, other: &FiniteQuadraticForm) -> bool {
        if self.orders != other.orders {
            return false;
        }
        if self.orders.is_empty() {
            return true;
        }
        let elems = other.elements();
        let candidates: Vec<Vec<&Vec<u64>>> = self
            .orders
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                elems
                    .iter()
                    .filter(|e| other.element_order(e) == d && other.q_of(e) == self.q[i])
                    .collect()
            })
            .collect();
        let mut chosen: Vec<&Vec<u64>> = Vec::new();
        self.extend_iso(other, &candidates, &mut chosen)
    }

    fn extend_iso<'a>(
        &self,
        other: &FiniteQuadraticForm,
        candidates: &[Vec<&'a Vec<u64>>],
        chosen: &mut Vec<&'a Vec<u64>>,
    ) -> bool {
        let i = chosen.len();
        if i == candidates.len() {
            return self.images_generate(other, chosen);
        }
        for &c in &candidates[i] {
            if (0..i).all(|j| other.b_of(chosen[j], c) == self.b[j][i]) {
                chosen.push(c);
                if self.extend_iso(other, candidates, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    fn images_generate(&self, other: &FiniteQuadraticForm, images: &[&Vec<u64>]) -> bool {
        // orders match, so surjective iff the subgroup has full size
        let mut seen = std::collections::HashSet::new();
        let mut frontier = vec![vec![0u64; other.orders.len()]];
        seen.insert(frontier[0].clone());
        while let Some(x) = frontier.pop() {
            for g in images {
                let y = other.add(&x, g);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        seen.len() as u64 == other.size()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rank_one_minus_six() {
        let a = DiscriminantGroup::of(&Lattice::rank_one(-6).unwrap()).unwrap();
        assert_eq!(a.cyclic_orders, vec![BigInt::from(6)]);
        // generator ±1/6 of (-6): q = -1/6 mod 2 = 11/6
        assert_eq!(a.q_values, vec![r(11, 6)]);
    }

    #[test]
    fn unimodular_is_trivial() {
        assert!(DiscriminantGroup::of(&Lattice::u()).unwrap().is_trivial());
        assert!(DiscriminantGroup::of(&Lattice::e8()).unwrap().is_trivial());
    }

    #[test]
    fn a2_generator_value() {
        let a = DiscriminantGroup::of(&Lattice::a(2)).unwrap();
        assert_eq!(a.cyclic_orders, vec![BigInt::from(3)]);
        assert_eq!(a.q_values, vec![r(2, 3)]);
    }

    #[test]
    fn order_matches_determinant() {
        for l in [Lattice::a(4), Lattice::d(4), Lattice::k7(), Lattice::h5(), Lattice::u_scaled(3)] {
            let a = DiscriminantGroup::of(&l).unwrap();
            assert_eq!(a.order(), l.det().magnitude().clone().into());
        }
    }

    #[test]
    fn isomorphism_of_forms() {
        // U(3) and A2 + A2(-1) have isomorphic discriminant forms
        let u3 = DiscriminantGroup::of(&Lattice::u_scaled(3)).unwrap().finite_form().unwrap();
        let a2a2 = DiscriminantGroup::of(&Lattice::a(2).direct_sum(&Lattice::a(2).negate()))
            .unwrap()
            .finite_form()
            .unwrap();
        assert!(u3.is_isomorphic(&a2a2));
        // A2 + A2 does not (its form is anisotropic)
        let a2a2p = DiscriminantGroup::of(&Lattice::a(2).power(2)).unwrap().finite_form().unwrap();
        assert!(!u3.is_isomorphic(&a2a2p));
    }

    #[test]
    fn class_coordinates_detect_lattice_vectors() {
        let l = Lattice::a(2);
        let a = DiscriminantGroup::of(&l).unwrap();
        let x = vec![r(2, 3), r(1, 3)];
        assert!(!a.is_zero_class(&x).unwrap());
        let y = vec![r(2, 1), r(-1, 1)];
        assert!(a.is_zero_class(&y).unwrap());
    }
}
