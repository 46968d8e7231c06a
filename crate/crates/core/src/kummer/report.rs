//! Classification rows, pinned expectations and the report summary.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IssueKind {
    Mismatch,
    AnalyticallyImpossible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellIssue {
    pub column: String,
    pub kind: IssueKind,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Status {
    Verified,
    Mismatch { detail: String },
    AnalyticallyImpossible { detail: String },
}

impl Status {
    pub fn is_verified(&self) -> bool {
        *self == Status::Verified
    }
}

/// One printed table row with its recomputed counterpart.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassificationRow {
    pub table: String,
    pub row: String,
    pub s_named: String,
    pub t_named: String,
    /// Column order as printed; `claimed` and `recomputed` share the keys.
    pub columns: Vec<String>,
    pub claimed: BTreeMap<String, String>,
    pub recomputed: BTreeMap<String, String>,
    pub issues: Vec<CellIssue>,
    pub notes: Vec<String>,
    pub status: Status,
}

pub struct RowBuilder {
    row: ClassificationRow,
}

impl RowBuilder {
    pub fn new(table: &str, row: &str, s_named: &str, t_named: &str) -> Self {
        RowBuilder {
            row: ClassificationRow {
                table: table.into(),
                row: row.into(),
                s_named: s_named.into(),
                t_named: t_named.into(),
                columns: Vec::new(),
                claimed: BTreeMap::new(),
                recomputed: BTreeMap::new(),
                issues: Vec::new(),
                notes: Vec::new(),
                status: Status::Verified,
            },
        }
    }

    fn record(&mut self, column: &str, claimed: String, recomputed: String) {
        if !self.row.columns.iter().any(|c| c == column) {
            self.row.columns.push(column.into());
        }
        self.row.claimed.insert(column.into(), claimed);
        self.row.recomputed.insert(column.into(), recomputed);
    }

    /// Records a cell; differing strings are a mismatch.
    pub fn cell(&mut self, column: &str, claimed: impl Display, recomputed: impl Display) {
        let (c, r) = (claimed.to_string(), recomputed.to_string());
        if c != r {
            self.row.issues.push(CellIssue {
                column: column.into(),
                kind: IssueKind::Mismatch,
                detail: format!("printed {c}, recomputed {r}"),
            });
        }
        self.record(column, c, r);
    }

    pub fn impossible(&mut self, column: &str, claimed: impl Display, recomputed: impl Display, why: impl Into<String>) {
        self.row.issues.push(CellIssue {
            column: column.into(),
            kind: IssueKind::AnalyticallyImpossible,
            detail: why.into(),
        });
        self.record(column, claimed.to_string(), recomputed.to_string());
    }

    /// A cell whose recomputation failed outright.
    pub fn failed(&mut self, column: &str, claimed: impl Display, why: impl Display) {
        let why = why.to_string();
        self.row.issues.push(CellIssue { column: column.into(), kind: IssueKind::Mismatch, detail: why.clone() });
        self.record(column, claimed.to_string(), format!("error: {why}"));
    }

    pub fn note(&mut self, note: impl Into<String>) {
        let note = note.into();
        if !self.row.notes.contains(&note) {
            self.row.notes.push(note);
        }
    }

    pub fn finish(mut self) -> ClassificationRow {
        let detail = |kind| {
            self.row
                .issues
                .iter()
                .filter(|i| i.kind == kind)
                .map(|i| format!("{}: {}", i.column, i.detail))
                .collect::<Vec<_>>()
                .join("; ")
        };
        let mismatches = detail(IssueKind::Mismatch);
        let impossible = detail(IssueKind::AnalyticallyImpossible);
        self.row.status = if !mismatches.is_empty() {
            Status::Mismatch { detail: mismatches }
        } else if !impossible.is_empty() {
            Status::AnalyticallyImpossible { detail: impossible }
        } else {
            Status::Verified
        };
        self.row
    }
}

/// A cell the verifier is expected to flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pin {
    pub table: String,
    pub row: String,
    pub column: String,
    pub kind: IssueKind,
    pub reason: String,
}

#[derive(Deserialize)]
struct PinFile {
    pin: Vec<Pin>,
}

const PINNED: &str = include_str!("../../data/pinned.toml");

pub fn parse_pins(text: &str) -> Result<Vec<Pin>> {
    let f: PinFile = toml::from_str(text).map_err(|e| Error::Parse(format!("pinned expectations: {e}")))?;
    Ok(f.pin)
}

pub fn shipped_pins() -> Vec<Pin> {
    parse_pins(PINNED).expect("shipped pins parse")
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub verified: usize,
    pub mismatch: usize,
    pub impossible: usize,
}

/// Tally of rows plus the comparison against pinned expectations.
#[derive(Clone, Debug, Serialize)]
pub struct PinCheck {
    pub summary: Summary,
    /// Flagged cells not covered by a pin.
    pub unexpected: Vec<String>,
    /// Pins for the tables in scope that were not observed.
    pub missing: Vec<String>,
}

impl PinCheck {
    pub fn ok(&self) -> bool {
        self.unexpected.is_empty() && self.missing.is_empty()
    }
}

pub fn check_pins(rows: &[ClassificationRow], pins: &[Pin]) -> PinCheck {
    let mut summary = Summary { rows: rows.len(), ..Summary::default() };
    let mut unexpected = Vec::new();
    for r in rows {
        match r.status {
            Status::Verified => summary.verified += 1,
            Status::Mismatch { .. } => summary.mismatch += 1,
            Status::AnalyticallyImpossible { .. } => summary.impossible += 1,
        }
        for i in &r.issues {
            let pinned = pins.iter().any(|p| p.table == r.table && p.row == r.row && p.column == i.column && p.kind == i.kind);
            if !pinned {
                unexpected.push(format!("{} row {} column {}: {}", r.table, r.row, i.column, i.detail));
            }
        }
    }
    let missing = pins
        .iter()
        .filter(|p| rows.iter().any(|r| r.table == p.table))
        .filter(|p| {
            !rows.iter().any(|r| {
                r.table == p.table && r.row == p.row && r.issues.iter().any(|i| i.column == p.column && i.kind == p.kind)
            })
        })
        .map(|p| format!("{} row {} column {}", p.table, p.row, p.column))
        .collect();
    PinCheck { summary, unexpected, missing }
}

fn cell_text(row: &ClassificationRow, column: &str) -> String {
    let c = &row.claimed[column];
    let r = &row.recomputed[column];
    if c == r {
        c.replace('|', "/")
    } else {
        format!("{} → {}", c, r).replace('|', "/")
    }
}

/// Markdown rendering, one table per table id, printed column order.
pub fn render_markdown(rows: &[ClassificationRow]) -> String {
    let mut out = String::new();
    let mut tables: Vec<&str> = Vec::new();
    for r in rows {
        if !tables.contains(&r.table.as_str()) {
            tables.push(&r.table);
        }
    }
    for t in tables {
        let group: Vec<&ClassificationRow> = rows.iter().filter(|r| r.table == t).collect();
        let mut columns: Vec<String> = Vec::new();
        for r in &group {
            for c in &r.columns {
                if !columns.contains(c) {
                    columns.push(c.clone());
                }
            }
        }
        out.push_str(&format!("### Table {t}\n\n| No. | {} | status |\n", columns.join(" | ")));
        out.push_str(&format!("|{}\n", "---|".repeat(columns.len() + 2)));
        for r in group {
            let cells: Vec<String> = columns
                .iter()
                .map(|c| if r.claimed.contains_key(c) { cell_text(r, c) } else { String::new() })
                .collect();
            let status = match &r.status {
                Status::Verified => "verified",
                Status::Mismatch { .. } => "mismatch",
                Status::AnalyticallyImpossible { .. } => "analytically-impossible",
            };
            out.push_str(&format!("| {} | {} | {} |\n", r.row, cells.join(" | "), status));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_status() {
        let mut b = RowBuilder::new("x", "1", "S", "T");
        b.cell("a", 1, 1);
        assert!(b.finish().status.is_verified());
        let mut b = RowBuilder::new("x", "1", "S", "T");
        b.cell("a", 1, 2);
        b.impossible("d", 2, 3, "no 2-torsion");
        let r = b.finish();
        assert!(matches!(r.status, Status::Mismatch { .. }));
        assert_eq!(r.issues.len(), 2);
    }

    #[test]
    fn pins_parse_and_match() {
        let pins = shipped_pins();
        assert!(pins.iter().any(|p| p.table == "3.1" && p.row == "7.1" && p.column == "a"));
        let mut b = RowBuilder::new("3.1", "7.1", "S", "T");
        b.cell("a", 1, 2);
        let check = check_pins(&[b.finish()], &pins);
        assert!(check.ok(), "{check:?}");
        let mut b = RowBuilder::new("3.1", "7.1", "S", "T");
        b.cell("a", 1, 1);
        assert!(!check_pins(&[b.finish()], &pins).ok());
    }
}
