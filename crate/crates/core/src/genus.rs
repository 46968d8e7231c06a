//! Existence, splitting and uniqueness criteria for even lattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::discriminant::DiscriminantGroup;
use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// `(r, a, δ)` of a p-elementary lattice; `delta` is only present for p = 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PElementaryInvariants {
    pub p: u64,
    pub r: usize,
    pub a: usize,
    pub delta: Option<u8>,
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub fn p_elementary_invariants(lattice: &Lattice, p: u64) -> Result<PElementaryInvariants> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let disc = DiscriminantGroup::of(lattice)?;
    let pb = BigInt::from(p);
    if let Some(bad) = disc.cyclic_orders.iter().find(|d| **d != pb) {
        return Err(Error::NotPElementary { p, factor: bad.to_string() });
    }
    Ok(PElementaryInvariants {
        p,
        r: lattice.rank(),
        a: disc.length(),
        delta: (p == 2).then(|| disc.parity()),
    })
}

/// Outcome of a clause-by-clause existence test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Criterion {
    pub holds: bool,
    /// The first violated clause, as displayed in the theorem.
    pub failing_clause: Option<&'static str>,
    /// Whether the invariants determine the lattice up to isometry.
    pub unique: bool,
}

impl Criterion {
    fn from_clauses(clauses: &[(&'static str, bool)], unique: bool) -> Self {
        let failing_clause = clauses.iter().find(|(_, ok)| !ok).map(|(c, _)| *c);
        Criterion { holds: failing_clause.is_none(), failing_clause, unique }
    }
}

fn implies(a: bool, b: bool) -> bool {
    !a || b
}

fn modulo(x: i64, m: i64) -> i64 {
    x.rem_euclid(m)
}

/// Even hyperbolic 2-elementary lattices of invariants `(r, a, δ)`.
pub fn exists_2elementary_hyperbolic(r: usize, a: usize, delta: u8) -> Criterion {
    let (ri, ai) = (r as i64, a as i64);
    let clauses = [
        ("a≤r", a <= r),
        ("r≡a mod 2", modulo(ri - ai, 2) == 0),
        ("if δ=0, then r≡2 mod 4", implies(delta == 0, modulo(ri, 4) == 2)),
        ("if a=0, then δ=0", implies(a == 0, delta == 0)),
        (
            "if a≤1, then r≡2±a mod 8",
            implies(a <= 1, modulo(ri - 2 - ai, 8) == 0 || modulo(ri - 2 + ai, 8) == 0),
        ),
        ("if a=2 and r≡6 mod 8, then δ=0", implies(a == 2 && modulo(ri, 8) == 6, delta == 0)),
        ("if δ=0 and a=r, then r≡2 mod 8", implies(delta == 0 && a == r, modulo(ri, 8) == 2)),
    ];
    Criterion::from_clauses(&clauses, true)
}

/// Even hyperbolic p-elementary lattices of invariants `(r, a)`, p odd.
pub fn exists_pelementary_hyperbolic(r: usize, a: usize, p: u64) -> Result<Criterion> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let (ri, ai, pi) = (r as i64, a as i64, p as i64);
    let sign = if (ri / 2 - 1).rem_euclid(2) == 0 { 1 } else { -1 };
    let clauses = [
        ("a≤r", a <= r),
        ("r≡0 mod 2", ri % 2 == 0),
        ("if a≡0 mod 2, then r≡2 mod 4", implies(ai % 2 == 0, modulo(ri, 4) == 2)),
        ("if a≡1 mod 2, then p≡(-1)^(r/2-1) mod 4", implies(ai % 2 == 1, modulo(pi - sign, 4) == 0)),
        ("if r≢2 mod 8, then r>a>0", implies(modulo(ri, 8) != 2, r > a && a > 0)),
    ];
    Ok(Criterion::from_clauses(&clauses, r >= 3))
}

/// Sufficient criteria never answer "no".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    YesByCriterion,
    Inconclusive,
}

impl Verdict {
    pub fn is_yes(self) -> bool {
        self == Verdict::YesByCriterion
    }
}

/// `L ≅ U ⊕ L₀` whenever L is indefinite and `rank ≥ 3 + l(A_L)`.
pub fn splits_off_u(lattice: &Lattice) -> Result<Verdict> {
    if lattice.is_definite() {
        return Ok(Verdict::Inconclusive);
    }
    let l = DiscriminantGroup::of(lattice)?.length();
    Ok(if lattice.rank() >= 3 + l { Verdict::YesByCriterion } else { Verdict::Inconclusive })
}

/// L is unique in its genus whenever it is indefinite and `l(A_L) ≤ rank − 2`.
pub fn unique_in_genus(lattice: &Lattice) -> Result<Verdict> {
    if lattice.is_definite() {
        return Ok(Verdict::Inconclusive);
    }
    let l = DiscriminantGroup::of(lattice)?.length();
    Ok(if l + 2 <= lattice.rank() { Verdict::YesByCriterion } else { Verdict::Inconclusive })
}

/// For a lattice of rank `p − 1` carrying an action of order p,
/// `|det| / p^(p−2)` must be a rational square.
pub fn bcms_square_condition(p: u64, rank: usize, det: &BigInt) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if rank as u64 != p - 1 {
        return Err(Error::Inapplicable(format!("rank {rank} is not p-1 = {}", p - 1)));
    }
    let q = BigRational::new(det.abs(), BigInt::from(p).pow(p as u32 - 2));
    Ok(is_square(q.numer()) && is_square(q.denom()))
}

pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    if n.is_zero() || n.is_one() {
        return true;
    }
    let s = n.sqrt();
    &(&s * &s) == n
}

pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    is_square(n).then(|| n.sqrt())
}

/// Exact square root of a rational square.
pub fn rational_square_root(q: &BigRational) -> Option<BigRational> {
    let n = exact_sqrt(q.numer())?;
    let d = exact_sqrt(q.denom())?;
    Some(BigRational::new(n, d))
}

/// `|A|` as `p^a` for p-groups; `None` when the order is not a power of p.
pub fn p_adic_length(order: &BigInt, p: u64) -> Option<usize> {
    let pb = BigInt::from(p);
    let mut n = order.abs();
    let mut a = 0;
    while !n.is_one() {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() || q.is_zero() {
            return None;
        }
        n = q;
        a += 1;
    }
    Some(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::parse;

    fn inv(name: &str, p: u64) -> PElementaryInvariants {
        p_elementary_invariants(&parse(name).unwrap(), p).unwrap()
    }

    #[test]
    fn table_invariants() {
        assert_eq!(inv("U(2)+U(2)", 2), PElementaryInvariants { p: 2, r: 4, a: 4, delta: Some(0) });
        assert_eq!(inv("<2>+<-2>", 2), PElementaryInvariants { p: 2, r: 2, a: 2, delta: Some(1) });
        assert_eq!(inv("U+U(3)", 3), PElementaryInvariants { p: 3, r: 4, a: 2, delta: None });
        let err = p_elementary_invariants(&parse("<-6>").unwrap(), 2).unwrap_err();
        assert_eq!(err, Error::NotPElementary { p: 2, factor: "6".into() });
    }

    #[test]
    fn two_elementary_clauses() {
        assert!(exists_2elementary_hyperbolic(2, 0, 0).holds);
        assert_eq!(exists_2elementary_hyperbolic(2, 0, 1).failing_clause, Some("if a=0, then δ=0"));
        assert_eq!(
            exists_2elementary_hyperbolic(6, 2, 1).failing_clause,
            Some("if a=2 and r≡6 mod 8, then δ=0")
        );
    }

    #[test]
    fn odd_clauses() {
        assert!(exists_pelementary_hyperbolic(4, 1, 3).unwrap().holds);
        assert_eq!(
            exists_pelementary_hyperbolic(4, 2, 3).unwrap().failing_clause,
            Some("if a≡0 mod 2, then r≡2 mod 4")
        );
        assert_eq!(exists_pelementary_hyperbolic(3, 1, 3).unwrap().failing_clause, Some("r≡0 mod 2"));
        assert!(exists_pelementary_hyperbolic(2, 1, 5).unwrap().holds);
        assert!(exists_pelementary_hyperbolic(4, 1, 7).unwrap().holds);
    }

    #[test]
    fn split_and_unique() {
        assert!(splits_off_u(&parse("U^2+A2(-1)").unwrap()).unwrap().is_yes());
        assert!(!splits_off_u(&parse("<2>+<-2>").unwrap()).unwrap().is_yes());
        assert!(!splits_off_u(&parse("E8(-1)").unwrap()).unwrap().is_yes());
        assert!(unique_in_genus(&parse("U+U(3)").unwrap()).unwrap().is_yes());
        assert!(!unique_in_genus(&parse("<2>+<-2>").unwrap()).unwrap().is_yes());
        assert!(unique_in_genus(&parse("U^3+<-6>").unwrap()).unwrap().is_yes());
    }

    #[test]
    fn square_condition() {
        assert!(bcms_square_condition(5, 4, &BigInt::from(5)).unwrap());
        assert!(!bcms_square_condition(5, 4, &BigInt::from(25)).unwrap());
        assert!(bcms_square_condition(3, 2, &BigInt::from(3)).unwrap());
        assert!(bcms_square_condition(5, 3, &BigInt::from(5)).is_err());
    }

    #[test]
    fn parity_from_generators_matches_all_elements() {
        for name in ["U(2)+U(2)", "<2>+<-2>", "<2>^3+<-2>", "U+<2>^2", "A1^4", "D4", "U(2)+<2>+<-2>"] {
            let d = DiscriminantGroup::of(&parse(name).unwrap()).unwrap();
            let f = d.finite_form().unwrap();
            let all_integral = f.elements().iter().all(|e| f.q_of(e).is_integer());
            assert_eq!(d.parity() == 0, all_integral, "{name}");
        }
    }
}
