//! Explicit prime-order isometries of `Λ = U⁴` realizing the classification
//! rows. Involutions are block diagonal on the four copies of `U`; the
//! odd-order ones are glued from a fixed-point-free piece and shipped as
//! data files, validated on load.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::discriminant::{rat_mod, DiscriminantGroup};
use crate::embeddings::split_hyperbolic;
use crate::error::{Error, Result};
use crate::io::parse_isometry;
use crate::isometry::Isometry;
use crate::lattice::{overlattice, Lattice};
use crate::matrix::{IntMatrix, RatMatrix};

/// Action on one copy of `U` (basis `e, f`), or on two copies at once.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    Id,
    Minus,
    /// `e ↔ f`: fixes `⟨2⟩`, negates `⟨−2⟩`.
    Swap,
    /// `e ↦ −f`: fixes `⟨−2⟩`, negates `⟨2⟩`.
    MinusSwap,
    /// Exchanges two consecutive copies of `U`.
    Exchange,
}

impl Block {
    fn width(self) -> usize {
        if self == Block::Exchange {
            4
        } else {
            2
        }
    }

    fn matrix(self) -> IntMatrix {
        match self {
            Block::Id => IntMatrix::identity(2),
            Block::Minus => IntMatrix::identity(2).neg(),
            Block::Swap => IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]),
            Block::MinusSwap => IntMatrix::from_i64(&[vec![0, -1], vec![-1, 0]]),
            Block::Exchange => IntMatrix::from_i64(&[
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
            ]),
        }
    }
}

pub fn lambda() -> Lattice {
    Lattice::u().power(4).with_name("U^4")
}

pub fn involution(blocks: &[Block]) -> Result<Isometry> {
    let width: usize = blocks.iter().map(|b| b.width()).sum();
    if width != 8 {
        return Err(Error::Dimension { expected: 8, got: width });
    }
    let m = blocks.iter().skip(1).fold(blocks[0].matrix(), |acc, b| IntMatrix::block_diag(&acc, &b.matrix()));
    Isometry::new(lambda(), m)
}

use Block::{Exchange, Id, Minus, MinusSwap, Swap};

/// Rows of the order-two tables with coinvariant signature `(2, *)`.
pub const TABLE_2_1: [(&str, [Block; 4]); 7] = [
    ("1", [Swap, Swap, Minus, Minus]),
    ("2", [Id, Id, Minus, Minus]),
    ("3", [Exchange, Id, Minus, Minus]),
    ("4", [Swap, MinusSwap, Id, Minus]),
    ("5", [Exchange, Exchange, Id, Id]),
    ("6", [Exchange, Swap, MinusSwap, Id]),
    ("7", [MinusSwap, MinusSwap, Id, Id]),
];

/// Same, coinvariant signature `(3, *)`.
pub const TABLE_2_2: [(&str, [Block; 4]); 5] = [
    ("1", [Id, Minus, Minus, Minus]),
    ("2", [Exchange, Minus, Minus, Minus]),
    ("3", [Swap, MinusSwap, Minus, Minus]),
    ("4", [MinusSwap, MinusSwap, Id, Minus]),
    ("5", [MinusSwap, MinusSwap, MinusSwap, Swap]),
];

/// The blocks actually used, dropping the padding after an exchange.
fn used_blocks(blocks: &[Block; 4]) -> Vec<Block> {
    let mut out = Vec::new();
    let mut width = 0;
    for &b in blocks {
        if width < 8 {
            out.push(b);
            width += b.width();
        }
    }
    out
}

pub fn table_involution(rows: &[(&str, [Block; 4])], label: &str) -> Result<Isometry> {
    let (_, blocks) = rows
        .iter()
        .find(|(l, _)| *l == label)
        .ok_or_else(|| Error::Parse(format!("no row {label}")))?;
    involution(&used_blocks(blocks))
}

/// The order-3 rotation of `A₂`.
pub fn a2_rotation() -> IntMatrix {
    IntMatrix::from_i64(&[vec![0, -1], vec![1, -1]])
}

/// Companion matrix of the `p`-th cyclotomic polynomial.
pub fn cyclotomic_companion(p: usize) -> IntMatrix {
    let n = p - 1;
    let mut rows = vec![vec![0i64; n]; n];
    for (i, row) in rows.iter_mut().enumerate().skip(1) {
        row[i - 1] = 1;
    }
    for row in rows.iter_mut() {
        row[n - 1] = -1;
    }
    IntMatrix::from_i64(&rows)
}

/// Integral basis of the symmetric matrices `G` with `CᵀGC = G`.
pub fn invariant_forms(c: &IntMatrix) -> Vec<IntMatrix> {
    let n = c.rows();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let unit = |k: usize| {
        let (i, j) = pairs[k];
        let mut m = IntMatrix::zeros(n, n);
        m[(i, j)] = BigInt::one();
        m[(j, i)] = BigInt::one();
        m
    };
    // Column k of the linear map is CᵀE_kC − E_k, flattened.
    let cols: Vec<Vec<BigInt>> = (0..pairs.len())
        .map(|k| {
            let e = unit(k);
            let d = c.congruence(&e).sub(&e);
            pairs.iter().map(|&(i, j)| d[(i, j)].clone()).collect()
        })
        .collect();
    let map = IntMatrix::from_columns(pairs.len(), &cols);
    let kernel = map.kernel();
    (0..kernel.cols())
        .map(|k| {
            let mut g = IntMatrix::zeros(n, n);
            for (idx, &(i, j)) in pairs.iter().enumerate() {
                g[(i, j)] = kernel[(idx, k)].clone();
                g[(j, i)] = kernel[(idx, k)].clone();
            }
            g
        })
        .collect()
}

/// Small combinations of the invariant forms accepted by `keep`, first
/// match in a fixed order.
fn search_form(basis: &[IntMatrix], radius: i64, keep: &dyn Fn(&Lattice) -> bool) -> Option<Lattice> {
    let k = basis.len();
    for coeffs in crate::enumerate::box_vectors(k, radius) {
        let mut g = IntMatrix::zeros(basis[0].rows(), basis[0].cols());
        for (c, b) in coeffs.iter().zip(basis) {
            g = g.add(&b.scale(&BigInt::from(*c)));
        }
        if g.det().is_zero() {
            continue;
        }
        let Ok(l) = Lattice::new(g) else { continue };
        if keep(&l) {
            return Some(l);
        }
    }
    None
}

/// Overlattice of `s ⊕ t` glued along one vector, carrying `g ⊕ h`,
/// rewritten in a basis where the Gram matrix is `U ⊕ … ⊕ U`.
fn glue_and_split(s: &Lattice, g: &IntMatrix, t: &Lattice, h: &IntMatrix, glue: Vec<BigRational>) -> Result<(Lattice, IntMatrix)> {
    let base = s.direct_sum(t);
    let action = IntMatrix::block_diag(g, h);
    let (over, basis) = overlattice(&base, &[glue])?;
    let den = basis.denominator();
    let scaled = scaled_integer(&basis, &den);
    let inv = scaled.rational_inverse().ok_or_else(|| Error::Inconsistent("overlattice basis is singular".into()))?;
    // B⁻¹·A·B with B = scaled / den.
    let conj = inv.mul(&action.mul(&scaled).to_rational());
    let m = conj.to_integer().ok_or_else(|| Error::Inconsistent("action does not preserve the overlattice".into()))?;
    let iso = Isometry::new(over.clone(), m)?;
    let p = split_hyperbolic(&over, 3)?.ok_or_else(|| Error::Inconsistent("no hyperbolic splitting found".into()))?;
    let p_inv = p.unimodular_inverse().ok_or_else(|| Error::Inconsistent("splitting basis is not unimodular".into()))?;
    let in_u = p_inv.mul(iso.matrix()).mul(&p);
    let u = over.change_basis(&p)?;
    Ok((u, in_u))
}

fn first_generator(l: &Lattice) -> Result<Vec<BigRational>> {
    let d = DiscriminantGroup::of(l)?;
    if d.generators.len() != 1 {
        return Err(Error::Inconsistent(format!("discriminant of {} is not cyclic", l.label())));
    }
    Ok(d.generators[0].clone())
}

/// `(A₂ ⊕ A₂(−1))` glued to `U²`, with the rotation on the chosen factors.
pub fn a2_piece(rotate_first: bool, rotate_second: bool) -> Result<IntMatrix> {
    let a2 = Lattice::a(2);
    let minus = a2.negate();
    let r = a2_rotation();
    let id = IntMatrix::identity(2);
    let w = first_generator(&a2)?;
    let glue: Vec<BigRational> = w.iter().chain(w.iter()).cloned().collect();
    let (u, m) = glue_and_split(&a2, if rotate_first { &r } else { &id }, &minus, if rotate_second { &r } else { &id }, glue)?;
    if u.gram() != Lattice::u().power(2).gram() {
        return Err(Error::Inconsistent("glued A2 piece is not U^2".into()));
    }
    Ok(m)
}

/// Fixed-point-free order-`p` piece of rank `p − 1` glued with a fixed
/// lattice to `U⁴`, for `p = 5` (fixed part `S(−1)`) and `p = 7` (fixed part `K₇`).
pub fn cyclotomic_piece(p: usize) -> Result<IntMatrix> {
    let c = cyclotomic_companion(p);
    let forms = invariant_forms(&c);
    let pb = BigInt::from(p as i64);
    let (fixed, signature): (Option<Lattice>, (usize, usize)) = match p {
        5 => (None, (2, 2)),
        7 => (Some(Lattice::k7()), (2, 4)),
        _ => return Err(Error::Unsupported(format!("no cyclotomic construction for p = {p}"))),
    };
    let target_form = fixed.as_ref().map(|f| DiscriminantGroup::of(&f.negate()).ok().and_then(|d| d.finite_form()));
    let keep = |l: &Lattice| {
        if l.det().abs() != pb || l.signature().ok() != Some(signature) {
            return false;
        }
        let Ok(d) = DiscriminantGroup::of(l) else { return false };
        let Ok(iso) = Isometry::new(l.clone(), c.clone()) else { return false };
        if !iso.acts_trivially_on_discriminant(&d).unwrap_or(false) {
            return false;
        }
        match &target_form {
            Some(Some(t)) => d.finite_form().is_some_and(|f| f.is_isomorphic(t)),
            Some(None) => false,
            None => true,
        }
    };
    let s = search_form(&forms, 3, &keep).ok_or_else(|| Error::Inconsistent(format!("no invariant form found for p = {p}")))?;
    let w = first_generator(&s)?;
    let t = fixed.unwrap_or_else(|| s.negate());
    let id = IntMatrix::identity(t.rank());
    let u = first_generator(&t)?;
    let qw = rational_norm(&s, &w);
    // Multiple of the fixed generator with the opposite value.
    let k = (1..p as i64)
        .find(|&k| {
            let x: Vec<BigRational> = u.iter().map(|c| c * BigRational::from(BigInt::from(k))).collect();
            rat_mod(&(rational_norm(&t, &x) + &qw), 2).is_zero()
        })
        .ok_or_else(|| Error::Inconsistent("no anti-isometric glue".into()))?;
    let glue: Vec<BigRational> =
        w.iter().cloned().chain(u.iter().map(|c| c * BigRational::from(BigInt::from(k)))).collect();
    let (lat, m) = glue_and_split(&s, &c, &t, &id, glue)?;
    if lat.gram() != lambda().gram() {
        return Err(Error::Inconsistent("glued piece is not U^4".into()));
    }
    Ok(m)
}

/// Constructed odd-order isometries of `Λ` keyed by `(table, row)`.
pub fn construct_odd() -> Result<Vec<((&'static str, &'static str), Isometry)>> {
    let lam = lambda();
    let id2 = IntMatrix::identity(4);
    let p3a = a2_piece(true, false)?;
    let p3b = a2_piece(false, true)?;
    let p3c = a2_piece(true, true)?;
    let rows = vec![
        (("2.3", "1"), IntMatrix::block_diag(&p3b, &p3c)),
        (("2.3", "2"), IntMatrix::block_diag(&p3c, &id2)),
        (("2.3", "3"), IntMatrix::block_diag(&p3a, &p3b)),
        (("2.3", "4"), IntMatrix::block_diag(&p3a, &id2)),
        (("2.4", "1"), cyclotomic_piece(5)?),
        (("2.5", "1"), cyclotomic_piece(7)?),
    ];
    rows.into_iter().map(|(k, m)| Ok((k, Isometry::new(lam.clone(), m)?))).collect()
}

const SHIPPED: [((&str, &str), &str); 6] = [
    (("2.3", "1"), include_str!("../../data/isometries/p3-row1.json")),
    (("2.3", "2"), include_str!("../../data/isometries/p3-row2.json")),
    (("2.3", "3"), include_str!("../../data/isometries/p3-row3.json")),
    (("2.3", "4"), include_str!("../../data/isometries/p3-row4.json")),
    (("2.4", "1"), include_str!("../../data/isometries/p5.json")),
    (("2.5", "1"), include_str!("../../data/isometries/p7.json")),
];

pub fn shipped_file_name(table: &str, row: &str) -> String {
    match table {
        "2.3" => format!("p3-row{row}.json"),
        "2.4" => "p5.json".into(),
        _ => "p7.json".into(),
    }
}

/// The shipped odd-order isometry for a row, validated on load.
pub fn shipped_odd(table: &str, row: &str) -> Result<Isometry> {
    let (_, text) = SHIPPED
        .iter()
        .find(|((t, r), _)| *t == table && *r == row)
        .ok_or_else(|| Error::Parse(format!("no shipped isometry for {table} row {row}")))?;
    let g = parse_isometry(text, &|p| Err(Error::Parse(format!("unexpected file reference {p}"))))?;
    if g.lattice().gram() != lambda().gram() {
        return Err(Error::Inconsistent("shipped isometry does not act on U^4".into()));
    }
    Ok(g)
}

/// Every shipped explicit isometry, keyed by `(table, row)`.
pub fn all_realizations() -> Result<Vec<(String, String, Isometry)>> {
    let mut out = Vec::new();
    for (label, _) in TABLE_2_1 {
        out.push(("2.1".to_string(), label.to_string(), table_involution(&TABLE_2_1, label)?));
    }
    for (label, _) in TABLE_2_2 {
        out.push(("2.2".to_string(), label.to_string(), table_involution(&TABLE_2_2, label)?));
    }
    for ((t, r), _) in SHIPPED {
        out.push((t.to_string(), r.to_string(), shipped_odd(t, r)?));
    }
    Ok(out)
}

pub fn realization(table: &str, row: &str) -> Result<Isometry> {
    match table {
        "2.1" => table_involution(&TABLE_2_1, row),
        "2.2" => table_involution(&TABLE_2_2, row),
        _ => shipped_odd(table, row),
    }
}

pub(crate) fn scaled_integer(m: &RatMatrix, den: &BigInt) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| (&m[(i, j)] * BigRational::from(den.clone())).to_integer()).collect())
        .collect();
    IntMatrix::from_rows(rows).expect("rectangular")
}

fn rational_norm(l: &Lattice, x: &[BigRational]) -> BigRational {
    let g = l.gram();
    let mut s = BigRational::zero();
    for i in 0..l.rank() {
        for j in 0..l.rank() {
            s += &x[i] * &x[j] * BigRational::from(g[(i, j)].clone());
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_files_match_construction() {
        for ((t, r), g) in construct_odd().unwrap() {
            assert_eq!(shipped_odd(t, r).unwrap().matrix(), g.matrix(), "{t} row {r}");
        }
    }

    #[test]
    fn realizations_are_isometries_of_expected_order() {
        for (t, r, g) in all_realizations().unwrap() {
            let want = match t.as_str() {
                "2.1" | "2.2" => 2,
                "2.3" => 3,
                "2.4" => 5,
                _ => 7,
            };
            assert_eq!(g.order(12).unwrap(), want, "{t} row {r}");
            let d = DiscriminantGroup::of(g.lattice()).unwrap();
            assert!(g.acts_trivially_on_discriminant(&d).unwrap());
        }
    }

    #[test]
    fn a2_rotation_has_order_three() {
        let a2 = Lattice::new(IntMatrix::from_i64(&[vec![2, -1], vec![-1, 2]])).unwrap();
        let g = Isometry::new(a2, a2_rotation()).unwrap();
        assert_eq!(g.order(6).unwrap(), 3);
    }

    #[test]
    fn companion_forms_are_invariant() {
        for p in [3, 5, 7] {
            let c = cyclotomic_companion(p);
            for f in invariant_forms(&c) {
                assert_eq!(c.congruence(&f), f);
            }
        }
    }
}
