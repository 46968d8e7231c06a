//! JSON file formats for lattices, vectors and isometries. Integers are
//! written as decimal strings; plain JSON numbers are accepted on input.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isometry::Isometry;
use crate::lattice::Lattice;
use crate::matrix::IntMatrix;
use crate::named;

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Int {
    Num(i64),
    Str(String),
}

impl Int {
    fn value(&self) -> Result<BigInt> {
        match self {
            Int::Num(n) => Ok(BigInt::from(*n)),
            Int::Str(s) => s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        }
    }
}

fn matrix(rows: &[Vec<Int>]) -> Result<IntMatrix> {
    let rows = rows.iter().map(|r| r.iter().map(Int::value).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    IntMatrix::from_rows(rows)
}

#[derive(Clone, Debug, Deserialize)]
struct LatticeIn {
    name: Option<String>,
    gram: Option<Vec<Vec<Int>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub gram: Vec<Vec<String>>,
}

impl From<&Lattice> for LatticeOut {
    fn from(l: &Lattice) -> Self {
        LatticeOut { name: l.name().map(str::to_string), gram: l.gram().to_string_rows() }
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
}

fn lattice_value(v: LatticeIn) -> Result<Lattice> {
    match (v.gram, v.name) {
        (Some(g), name) => {
            let l = Lattice::new(matrix(&g)?)?;
            Ok(match name {
                Some(n) => l.with_name(n),
                None => l,
            })
        }
        (None, Some(name)) => named::parse(&name),
        (None, None) => Err(Error::Parse("lattice needs a gram or a name".into())),
    }
}

/// `{"name": optional, "gram": [[…]]}`; a file with only a name is parsed
/// as a lattice expression such as `"U^3+<-6>"`.
pub fn parse_lattice(text: &str) -> Result<Lattice> {
    let v: LatticeIn = serde_json::from_str(text).map_err(json_error)?;
    lattice_value(v)
}

pub fn lattice_to_json(l: &Lattice) -> String {
    serde_json::to_string_pretty(&LatticeOut::from(l)).expect("serializable")
}

#[derive(Deserialize)]
struct VectorIn {
    coords: Vec<Int>,
}

pub fn parse_vector(text: &str) -> Result<Vec<BigInt>> {
    let v: VectorIn = serde_json::from_str(text).map_err(json_error)?;
    v.coords.iter().map(Int::value).collect()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LatticeRef {
    Inline(LatticeIn),
    Path(String),
}

#[derive(Deserialize)]
struct IsometryIn {
    lattice: LatticeRef,
    matrix: Vec<Vec<Int>>,
}

#[derive(Serialize)]
pub struct IsometryOut {
    pub lattice: LatticeOut,
    pub matrix: Vec<Vec<String>>,
}

/// `{"lattice": <inline lattice or file path>, "matrix": [[…]]}`; paths are
/// resolved by `load`.
pub fn parse_isometry(text: &str, load: &dyn Fn(&str) -> Result<String>) -> Result<Isometry> {
    let v: IsometryIn = serde_json::from_str(text).map_err(json_error)?;
    let lattice = match v.lattice {
        LatticeRef::Inline(l) => lattice_value(l)?,
        LatticeRef::Path(p) => parse_lattice(&load(&p)?)?,
    };
    Isometry::new(lattice, matrix(&v.matrix)?)
}

pub fn isometry_to_json(g: &Isometry) -> String {
    let out = IsometryOut { lattice: LatticeOut::from(g.lattice()), matrix: g.matrix().to_string_rows() };
    serde_json::to_string_pretty(&out).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_round_trip() {
        let l = named::parse("U^3+<-6>").unwrap();
        let back = parse_lattice(&lattice_to_json(&l)).unwrap();
        assert_eq!(back.gram(), l.gram());
        assert_eq!(back.name(), Some("U^3+<-6>"));
    }

    #[test]
    fn numbers_or_strings() {
        let l = parse_lattice(r#"{"gram": [[2, "-1"], ["-1", 2]]}"#).unwrap();
        assert_eq!(l.det(), BigInt::from(3));
        assert_eq!(parse_lattice(r#"{"name": "E8"}"#).unwrap().rank(), 8);
    }

    #[test]
    fn odd_gram_rejected() {
        let e = parse_lattice(r#"{"gram": [[1]]}"#).unwrap_err();
        assert!(e.to_string().contains("lattice not even"), "{e}");
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse_lattice("{\n \"gram\": [[2,]]}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }

    #[test]
    fn isometry_file() {
        let text = r#"{"lattice": {"name": "A2"}, "matrix": [[0, -1], [1, -1]]}"#;
        let g = parse_isometry(text, &|_| unreachable!()).unwrap();
        assert_eq!(g.order(10).unwrap(), 3);
        assert!(parse_isometry(r#"{"lattice": {"name": "A2"}, "matrix": [[1, 1], [0, 1]]}"#, &|_| unreachable!()).is_err());
    }
}
