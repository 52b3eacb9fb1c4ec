//! The 85-row tie knot table, computed and golden, and its aggregations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{analyze_sequence, ClassifyError, KnotName, ReferenceTable};
use crate::grammar::{enumerate_sequences, parse_sequence, TieSequence, DEFAULT_MAX_MOVES};

const APPENDIX: &str = include_str!("../data/appendix_a.csv");

pub const CSV_HEADER: [&str; 5] = ["fm_number", "moves", "sequence", "knot_type", "twist_type"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub fm_number: u32,
    pub moves: usize,
    pub sequence: String,
    pub knot_type: String,
    pub twist_type: Option<u8>,
}

impl TableRow {
    fn sort_key(&self) -> (u32, u32, u32) {
        let k = KnotName::parse(&self.knot_type).expect("row knot names are valid");
        (k.crossing_number, k.table_index, self.fm_number)
    }
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("sequence {0} has no FM number")]
    Unnumbered(String),
}

/// The bundled golden table, in its stored order.
pub fn golden_rows() -> Vec<TableRow> {
    read_csv(APPENDIX.as_bytes()).expect("bundled table is valid")
}

pub fn read_csv(source: impl std::io::Read) -> Result<Vec<TableRow>, TableError> {
    let mut reader = csv::Reader::from_reader(source);
    Ok(reader.deserialize().collect::<Result<Vec<TableRow>, _>>()?)
}

pub fn write_csv(rows: &[TableRow]) -> Result<String, TableError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// FM number of a classic sequence, by its text.
pub fn fm_number(seq: &TieSequence) -> Option<u32> {
    let text = seq.to_string();
    golden_rows().into_iter().find(|r| r.sequence == text).map(|r| r.fm_number)
}

/// Classifies every enumerated sequence; rows sorted by knot type then FM number.
pub fn compute_rows(table: &ReferenceTable) -> Result<Vec<TableRow>, TableError> {
    let numbers: BTreeMap<String, u32> = golden_rows().into_iter().map(|r| (r.sequence, r.fm_number)).collect();
    let mut rows = Vec::new();
    for seq in enumerate_sequences(3, DEFAULT_MAX_MOVES).expect("default range is valid") {
        let text = seq.to_string();
        let fm = *numbers.get(&text).ok_or_else(|| TableError::Unnumbered(text.clone()))?;
        let c = analyze_sequence(&seq, table)?;
        rows.push(TableRow {
            fm_number: fm,
            moves: seq.len(),
            sequence: text,
            knot_type: c.knot.to_string(),
            twist_type: c.family.twist().map(|(form, _)| form),
        });
    }
    rows.sort_by_key(TableRow::sort_key);
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MovesRow {
    pub moves: usize,
    pub knot_types: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MovesCount {
    pub count: usize,
    pub moves: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyRow {
    pub knot_type: String,
    pub count: usize,
    pub by_moves: Vec<MovesCount>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub count: usize,
    pub knot_types: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub types_by_moves: Vec<MovesRow>,
    pub family_counts: Vec<FamilyRow>,
    pub other_counts: Vec<CountRow>,
}

/// Types broken out move by move; all others are only counted.
pub const FAMILY_TYPES: [&str; 9] = ["0_1", "3_1", "4_1", "5_1", "5_2", "6_1", "7_1", "7_2", "8_1"];

fn knot_order(name: &str) -> (u32, u32) {
    let k = KnotName::parse(name).expect("valid name");
    (k.crossing_number, k.table_index)
}

pub fn summarize(rows: &[TableRow]) -> Summary {
    let mut by_moves: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    let mut by_type: BTreeMap<(u32, u32), (String, BTreeMap<usize, usize>)> = BTreeMap::new();
    for r in rows {
        let names = by_moves.entry(r.moves).or_default();
        if !names.contains(&r.knot_type) {
            names.push(r.knot_type.clone());
        }
        let e = by_type.entry(knot_order(&r.knot_type)).or_insert_with(|| (r.knot_type.clone(), BTreeMap::new()));
        *e.1.entry(r.moves).or_default() += 1;
    }
    let types_by_moves = by_moves
        .into_iter()
        .map(|(moves, mut knot_types)| {
            knot_types.sort_by_key(|n| knot_order(n));
            MovesRow { moves, knot_types }
        })
        .collect();

    let mut family_counts = Vec::new();
    let mut others: BTreeMap<std::cmp::Reverse<usize>, Vec<String>> = BTreeMap::new();
    for (name, counts) in by_type.into_values() {
        let count = counts.values().sum();
        if FAMILY_TYPES.contains(&name.as_str()) {
            let by_moves = counts.into_iter().map(|(moves, count)| MovesCount { count, moves }).collect();
            family_counts.push(FamilyRow { knot_type: name, count, by_moves });
        } else {
            others.entry(std::cmp::Reverse(count)).or_default().push(name);
        }
    }
    let other_counts =
        others.into_iter().map(|(c, knot_types)| CountRow { count: c.0, knot_types }).collect();
    Summary { types_by_moves, family_counts, other_counts }
}

/// Parses the sequence column of a row.
pub fn row_sequence(row: &TableRow) -> TieSequence {
    parse_sequence(&row.sequence).expect("row sequences parse")
}
