//! Generalised Kummer lattices `L_n = U³ ⊕ ⟨−2n−2⟩ ⊂ Λ = U⁴`, wall divisors,
//! monodromy, and the classification table verifiers.

pub mod fourfold;
pub mod gluing;
pub mod higher;
pub mod lambda;
pub mod realize;
pub mod report;
pub mod symplectic;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::automorphism::are_isometric;
use crate::discriminant::DiscriminantGroup;
use crate::embeddings::EmbeddingSolution;
use crate::error::{Error, Result};
use crate::genus::{is_prime, unique_in_genus};
use crate::isometry::Isometry;
use crate::lattice::{Lattice, Sublattice};
use crate::matrix::{vector_gcd, IntMatrix};

/// `H²` of a generalised Kummer `2n`-fold inside its Mukai lattice.
#[derive(Clone, Debug)]
pub struct KummerContext {
    pub n: u32,
    pub l_n: Lattice,
    pub lambda: Lattice,
    pub embedding: EmbeddingSolution,
    /// `v = e + (n+1) f` in the last copy of `U`, spanning `L_n^⊥`.
    pub mukai: Vec<BigInt>,
}

impl KummerContext {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Inapplicable(format!("Kummer lattices need n >= 2, got {n}")));
        }
        let k = i64::from(n) + 1;
        let l_n = Lattice::u()
            .power(3)
            .direct_sum(&Lattice::rank_one(-2 * k)?)
            .with_name(format!("U^3+<{}>", -2 * k));
        let lambda = Lattice::u().power(4).with_name("U^4");
        let mut cols: Vec<Vec<BigInt>> = (0..6)
            .map(|i| (0..8).map(|j| BigInt::from(i64::from(i == j))).collect())
            .collect();
        let mut delta = vec![BigInt::zero(); 8];
        delta[6] = BigInt::one();
        delta[7] = BigInt::from(-k);
        cols.push(delta);
        let images = IntMatrix::from_columns(8, &cols);
        if images.congruence(lambda.gram()) != *l_n.gram() {
            return Err(Error::Inconsistent("canonical embedding does not preserve the form".into()));
        }
        let sub = Sublattice::new(lambda.clone(), images.clone())?;
        let comp = sub.orthogonal_complement();
        let mut mukai = vec![BigInt::zero(); 8];
        mukai[6] = BigInt::one();
        mukai[7] = BigInt::from(k);
        if comp.rank() != 1 || comp.basis().col(0).iter().map(|x| x.abs()).ne(mukai.iter().cloned()) {
            return Err(Error::Inconsistent("complement of L_n is not spanned by the Mukai vector".into()));
        }
        let glue = crate::lattice::glue_index(&sub, &comp)?;
        let embedding = EmbeddingSolution { images, primitive: sub.is_primitive(), glue_index: glue };
        Ok(KummerContext { n, l_n, lambda, embedding, mukai })
    }

    /// `L_n` as a sublattice of `Λ`.
    pub fn h2(&self) -> Sublattice {
        Sublattice::new(self.lambda.clone(), self.embedding.images.clone()).expect("canonical embedding")
    }

    /// Image in `Λ` of a vector of `L_n`.
    pub fn to_lambda(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.embedding.images.mul_vec(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WallKind {
    Div6,
    Div3,
    Div2,
}

impl WallKind {
    pub fn divisibility(self) -> u32 {
        match self {
            WallKind::Div6 => 6,
            WallKind::Div3 => 3,
            WallKind::Div2 => 2,
        }
    }
}

/// Wall divisors of Kummer fourfolds: square −6 and divisibility 2, 3 or 6.
pub fn is_wall_divisor(ctx: &KummerContext, v: &[BigInt]) -> Result<Option<WallKind>> {
    if ctx.n != 2 {
        return Err(Error::Inapplicable(
            "the wall list is only tabulated for n = 2; use has_trivial_divisibility".into(),
        ));
    }
    if ctx.l_n.norm(v) != BigInt::from(-6) {
        return Ok(None);
    }
    let d = ctx.l_n.divisibility(v)?;
    Ok([WallKind::Div6, WallKind::Div3, WallKind::Div2].into_iter().find(|k| d == BigInt::from(k.divisibility())))
}

/// Primes at which `S → Hom(L, ℤ)` can fail to stay injective.
fn relevant_primes(l: &Lattice) -> Vec<u64> {
    let mut d = l.det().abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= d {
        if d.is_multiple_of(&p) {
            out.push(u64::try_from(&p).expect("small prime"));
            while d.is_multiple_of(&p) {
                d /= &p;
            }
        }
        p += 1;
    }
    if d > BigInt::one() {
        out.push(u64::try_from(&d).expect("determinant prime fits u64"));
    }
    out
}

fn check_definite(s: &Sublattice) -> Result<()> {
    if s.rank() > 0 && !s.lattice()?.is_definite() {
        return Err(Error::Unsupported("trivial-divisibility check needs a definite sublattice".into()));
    }
    Ok(())
}

/// Whether every primitive element of `S` has divisibility one in the
/// ambient lattice: `S/pS → Hom(L, 𝔽_p)` must be injective for each prime
/// `p | det L`.
pub fn has_trivial_divisibility(s: &Sublattice) -> Result<bool> {
    check_definite(s)?;
    Ok(nontrivial_divisibility_witness(s)?.is_none())
}

/// A primitive `s ∈ S` with `p | div_L(s)`, when one exists.
pub fn nontrivial_divisibility_witness(s: &Sublattice) -> Result<Option<(Vec<BigInt>, u64)>> {
    check_definite(s)?;
    let l = s.ambient();
    let m = s.basis().transpose().mul(l.gram());
    for p in relevant_primes(l) {
        if m.rank_mod(p) == s.rank() {
            continue;
        }
        let kernel = m.transpose().kernel_mod(p);
        let c: Vec<BigInt> = kernel[0].iter().map(|&x| BigInt::from(x)).collect();
        let g = vector_gcd(&c);
        let c: Vec<BigInt> = c.iter().map(|x| x / &g).collect();
        return Ok(Some((s.to_ambient(&c), p)));
    }
    Ok(None)
}

/// Sign of the action on orientations of positive definite subspaces.
pub fn orientation_character(g: &Isometry) -> Result<i8> {
    let l = g.lattice();
    let (diag, basis) = l.diagonalize()?;
    let positive: Vec<usize> = (0..diag.len()).filter(|&i| diag[i].is_positive()).collect();
    if positive.is_empty() {
        return Ok(1);
    }
    // Positive multiples of the rational basis vectors, cleared to integers.
    let cols: Vec<Vec<BigInt>> = positive
        .iter()
        .map(|&i| {
            let col = basis.col(i);
            let den = col.iter().fold(BigInt::one(), |a, x| a.lcm(x.denom()));
            col.iter().map(|x| (x * BigRational::from(den.clone())).to_integer()).collect()
        })
        .collect();
    let k = cols.len();
    let m: Vec<Vec<BigInt>> = (0..k).map(|i| (0..k).map(|j| l.pair(&cols[i], &g.apply(&cols[j]))).collect()).collect();
    let det = IntMatrix::from_rows(m)?.det();
    Ok(if det.is_positive() { 1 } else { -1 })
}

/// Orientation preserving, acting by `±1` on the discriminant, with
/// `det(g)·χ(g) = 1`.
pub fn is_monodromy(g: &Isometry) -> Result<bool> {
    if orientation_character(g)? != 1 {
        return Ok(false);
    }
    Ok(match g.chi()?.sign() {
        Some(chi) => g.determinant() * chi == 1,
        None => false,
    })
}

/// Dimension of the family of manifolds with a non-symplectic action of
/// prime order `p` and coinvariant lattice `S_X` of signature `(2, *)`.
pub fn family_dimension(p: u64, s_rank: usize) -> Result<i64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let m = p as usize - 1;
    if s_rank % m != 0 {
        return Err(Error::Inconsistent(format!("rank {s_rank} is not a multiple of p-1 = {m}")));
    }
    let q = (s_rank / m) as i64;
    Ok(if p == 2 { q - 2 } else { q - 1 })
}

/// Outcome of matching a computed lattice against a printed one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Identification {
    Isometric,
    /// Same signature and discriminant form; `unique` when the genus has
    /// one class by the indefinite uniqueness criterion.
    SameGenus { unique: bool },
    Different(String),
}

impl Identification {
    pub fn matches(&self) -> bool {
        !matches!(self, Identification::Different(_))
    }

    pub fn note(&self) -> Option<String> {
        match self {
            Identification::SameGenus { unique: false } => Some("identified up to genus".into()),
            _ => None,
        }
    }
}

pub fn identify(found: &Lattice, printed: &Lattice) -> Result<Identification> {
    if found.rank() != printed.rank() {
        return Ok(Identification::Different(format!("rank {} vs {}", found.rank(), printed.rank())));
    }
    let (sf, sp) = (found.signature()?, printed.signature()?);
    if sf != sp {
        return Ok(Identification::Different(format!("signature {sf:?} vs {sp:?}")));
    }
    if found.det() != printed.det() {
        return Ok(Identification::Different(format!("det {} vs {}", found.det(), printed.det())));
    }
    if found.is_definite() {
        return Ok(match are_isometric(found, printed)? {
            Some(_) => Identification::Isometric,
            None => Identification::Different("not isometric".into()),
        });
    }
    if !same_discriminant_form(found, printed)? {
        return Ok(Identification::Different("discriminant forms differ".into()));
    }
    Ok(Identification::SameGenus { unique: unique_in_genus(printed)?.is_yes() })
}

pub fn same_discriminant_form(a: &Lattice, b: &Lattice) -> Result<bool> {
    let (da, db) = (DiscriminantGroup::of(a)?, DiscriminantGroup::of(b)?);
    if da.cyclic_orders != db.cyclic_orders {
        return Ok(false);
    }
    match (da.finite_form(), db.finite_form()) {
        (Some(x), Some(y)) => Ok(x.is_isomorphic(&y)),
        _ => Err(Error::Unsupported("discriminant group too large to compare".into())),
    }
}

/// Table ids accepted by [`verify_table`], in report order.
pub const TABLE_IDS: [&str; 11] = ["2.1", "2.2", "2.3", "2.4", "2.5", "3.1", "3.2", "3.3", "3.4", "5", "6"];

/// Rows of one table id, or of every table for `"all"`.
pub fn verify_table(id: &str) -> Result<Vec<report::ClassificationRow>> {
    Ok(match id {
        "all" => {
            let mut rows = Vec::new();
            for t in TABLE_IDS {
                rows.extend(verify_table(t)?);
            }
            rows
        }
        t if lambda::LAMBDA_TABLES.contains(&t) => lambda::verify_lambda_tables(&[t]),
        t if fourfold::FOURFOLD_TABLES.contains(&t) => fourfold::verify_fourfold_tables(&[t]),
        "5" => symplectic::verify_symplectic(),
        "6" => higher::verify_higher_dim(),
        other => return Err(Error::Parse(format!("unknown table {other:?}; expected one of {} or all", TABLE_IDS.join(", ")))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::parse;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn contexts() {
        let c2 = KummerContext::new(2).unwrap();
        assert_eq!(c2.to_lambda(&ints(&[0, 0, 0, 0, 0, 0, 1])), ints(&[0, 0, 0, 0, 0, 0, 1, -3]));
        assert_eq!(c2.lambda.norm(&c2.mukai), BigInt::from(6));
        let d = DiscriminantGroup::of(&c2.l_n).unwrap();
        assert_eq!(d.cyclic_orders, ints(&[6]));
        let c3 = KummerContext::new(3).unwrap();
        assert_eq!(c3.l_n.norm(&ints(&[0, 0, 0, 0, 0, 0, 1])), BigInt::from(-8));
        assert_eq!(c3.lambda.norm(&c3.mukai), BigInt::from(8));
        assert!(KummerContext::new(1).is_err());
    }

    #[test]
    fn walls() {
        let c2 = KummerContext::new(2).unwrap();
        let delta = ints(&[0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(is_wall_divisor(&c2, &delta).unwrap(), Some(WallKind::Div6));
        assert_eq!(is_wall_divisor(&c2, &ints(&[1, -1, 0, 0, 0, 0, 0])).unwrap(), None);
        let found = crate::embeddings::vectors_with_norm(&c2.l_n, -6, 3).unwrap();
        let kinds: std::collections::BTreeSet<WallKind> = found
            .iter()
            .filter_map(|v| is_wall_divisor(&c2, &ints(v)).unwrap())
            .collect();
        assert_eq!(kinds.len(), 3);
        assert!(is_wall_divisor(&KummerContext::new(3).unwrap(), &delta).is_err());
    }

    #[test]
    fn trivial_divisibility() {
        let c2 = KummerContext::new(2).unwrap();
        let s = Sublattice::from_columns(c2.l_n.clone(), &[ints(&[1, -1, 0, 0, 0, 0, 0])]).unwrap();
        assert!(has_trivial_divisibility(&s).unwrap());
        let delta = Sublattice::from_columns(c2.l_n.clone(), &[ints(&[0, 0, 0, 0, 0, 0, 1])]).unwrap();
        assert!(!has_trivial_divisibility(&delta).unwrap());
        let e8 = Sublattice::full(Lattice::e8());
        assert!(has_trivial_divisibility(&e8).unwrap());
        let u = Sublattice::full(Lattice::u());
        assert!(has_trivial_divisibility(&u).is_err());
    }

    #[test]
    fn monodromy() {
        let c2 = KummerContext::new(2).unwrap();
        let id = Isometry::identity(c2.l_n.clone());
        assert!(is_monodromy(&id).unwrap());
        let r = Isometry::reflection(c2.l_n.clone(), &ints(&[0, 0, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!((r.determinant(), r.chi().unwrap().sign()), (-1, Some(-1)));
        assert!(is_monodromy(&r).unwrap());
        let minus = Isometry::minus_identity(c2.l_n.clone());
        assert!(!is_monodromy(&minus).unwrap());
        assert!(is_monodromy(&minus.compose(&minus)).unwrap());
        assert!(is_monodromy(&r.compose(&r)).unwrap());
    }

    #[test]
    fn dimensions() {
        assert_eq!(family_dimension(2, 4).unwrap(), 2);
        assert_eq!(family_dimension(3, 6).unwrap(), 2);
        assert_eq!(family_dimension(5, 4).unwrap(), 0);
        assert!(family_dimension(3, 5).is_err());
    }

    #[test]
    fn identifications() {
        assert_eq!(identify(&parse("[[4,-2],[-2,4]]").unwrap(), &parse("A2(2)").unwrap()).unwrap(), Identification::Isometric);
        let found = Lattice::new(parse("U+<-6>").unwrap().gram().clone()).unwrap();
        assert_eq!(identify(&found, &parse("U+<-6>").unwrap()).unwrap(), Identification::SameGenus { unique: true });
        assert!(!identify(&parse("U+<-6>").unwrap(), &parse("U(2)+<2>").unwrap()).unwrap().matches());
    }
}
