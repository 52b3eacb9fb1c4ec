//! Knot identification by invariant fingerprints, syntactic family
//! recognition on reduced words, and the two-bridge allowlist.

use std::collections::BTreeSet;
use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{build_diagram, DiagramError};
use crate::grammar::{Direction, Region, TieSequence};
use crate::invariants::{determinant, jones, InvariantError};
use crate::pd::PdCode;
use crate::poly::LaurentPolynomial;
use crate::rewrite::{reduce_fully, ReducedWord, RewriteError, Symbol};

const DEFAULT_TABLE: &str = include_str!("../data/reference_knots.jsonl");
const EXTENDED_TABLE: &str = include_str!("../data/knots_upto_8.jsonl");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Chirality {
    SameAsReference,
    MirrorOfReference,
    Amphichiral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KnotName {
    pub crossing_number: u32,
    pub table_index: u32,
    pub chirality: Chirality,
}

impl KnotName {
    pub fn base(crossing_number: u32, table_index: u32) -> KnotName {
        KnotName { crossing_number, table_index, chirality: Chirality::SameAsReference }
    }

    /// Parses `"6_2"`; the unknot is `"0_1"`.
    pub fn parse(name: &str) -> Result<KnotName, ClassifyError> {
        let bad = || ClassifyError::BadName(name.to_string());
        let (c, i) = name.split_once('_').ok_or_else(bad)?;
        let c: u32 = c.parse().map_err(|_| bad())?;
        let i: u32 = i.parse().map_err(|_| bad())?;
        if i == 0 || (c == 0 && i != 1) || c == 1 || c == 2 {
            return Err(bad());
        }
        Ok(KnotName::base(c, i))
    }

    pub fn same_type(&self, other: &KnotName) -> bool {
        (self.crossing_number, self.table_index) == (other.crossing_number, other.table_index)
    }
}

impl fmt::Display for KnotName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.crossing_number, self.table_index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    pub jones: LaurentPolynomial,
    pub determinant: u64,
}

impl Fingerprint {
    pub fn of(pd: &PdCode) -> Result<Fingerprint, InvariantError> {
        Ok(Fingerprint { jones: jones(pd)?, determinant: determinant(pd)? })
    }

    /// How `self` relates to `reference`, if it is the same knot type.
    pub fn compare(&self, reference: &Fingerprint) -> Option<Chirality> {
        if self.determinant != reference.determinant {
            return None;
        }
        let same = self.jones == reference.jones;
        let mirrored = self.jones.invert_variable() == reference.jones;
        match (same, mirrored) {
            (true, true) => Some(Chirality::Amphichiral),
            (true, false) => Some(Chirality::SameAsReference),
            (false, true) => Some(Chirality::MirrorOfReference),
            (false, false) => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReferenceEntry {
    pub name: KnotName,
    pub pd: PdCode,
    pub fingerprint: Fingerprint,
}

#[derive(Debug, Clone)]
pub struct ReferenceTable {
    entries: Vec<ReferenceEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("line {line}: {message}")]
    Json { line: usize, message: String },
    #[error("reading reference table: {0}")]
    Io(String),
    #[error("bad knot name {0:?}")]
    BadName(String),
    #[error("knot {0} listed twice")]
    DuplicateName(String),
    #[error("knot {name}: {source}")]
    MalformedPd { name: String, source: InvariantError },
    #[error("knots {first} and {second} have the same fingerprint")]
    Collision { first: String, second: String },
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("no reference knot matches {sequence} (Jones {jones}, determinant {determinant})")]
    NoMatch { sequence: String, jones: String, determinant: u64 },
    #[error("{0} has more than 8 crossings; the two-bridge list only covers knots up to 8 crossings")]
    OutsideAllowlist(String),
}

#[derive(Deserialize)]
struct Row {
    name: String,
    pd: Vec<[u32; 4]>,
}

/// Reads JSON lines `{"name":"6_2","pd":[[...],...]}` and fingerprints each knot.
pub fn load_reference_table(source: impl BufRead) -> Result<ReferenceTable, ClassifyError> {
    let mut entries: Vec<ReferenceEntry> = Vec::new();
    let mut names = BTreeSet::new();
    for (i, line) in source.lines().enumerate() {
        let line = line.map_err(|e| ClassifyError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Row =
            serde_json::from_str(&line).map_err(|e| ClassifyError::Json { line: i + 1, message: e.to_string() })?;
        let name = KnotName::parse(&row.name)?;
        if !names.insert((name.crossing_number, name.table_index)) {
            return Err(ClassifyError::DuplicateName(row.name));
        }
        let pd = PdCode::new(row.pd);
        let fingerprint =
            Fingerprint::of(&pd).map_err(|source| ClassifyError::MalformedPd { name: row.name.clone(), source })?;
        if let Some(other) = entries.iter().find(|e| fingerprint.compare(&e.fingerprint).is_some()) {
            return Err(ClassifyError::Collision { first: other.name.to_string(), second: row.name });
        }
        entries.push(ReferenceEntry { name, pd, fingerprint });
    }
    Ok(ReferenceTable { entries })
}

impl ReferenceTable {
    /// The 27 knot types tied by the 85 classic ties.
    pub fn builtin() -> ReferenceTable {
        load_reference_table(DEFAULT_TABLE.as_bytes()).expect("bundled table is valid")
    }

    /// Every prime knot with at most 8 crossings, plus the unknot.
    pub fn builtin_up_to_eight() -> ReferenceTable {
        load_reference_table(EXTENDED_TABLE.as_bytes()).expect("bundled table is valid")
    }

    pub fn entries(&self) -> &[ReferenceEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&ReferenceEntry> {
        let name = KnotName::parse(name).ok()?;
        self.entries.iter().find(|e| e.name.same_type(&name))
    }

    pub fn identify(&self, fingerprint: &Fingerprint) -> Option<KnotName> {
        self.entries.iter().find_map(|e| {
            fingerprint.compare(&e.fingerprint).map(|chirality| KnotName { chirality, ..e.name })
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Handedness {
    Right,
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyReport {
    Unknot,
    /// Also a twist knot with one twist, written in twist form 1 or 3.
    Trefoil { handedness: Handedness, twist_form: u8 },
    Twist { form: u8, n: u32 },
    Torus { p: u32 },
    None,
}

impl FamilyReport {
    pub fn label(&self) -> String {
        match self {
            FamilyReport::Unknot => "unknot".into(),
            FamilyReport::Trefoil { handedness: Handedness::Right, .. } => "trefoil/right".into(),
            FamilyReport::Trefoil { handedness: Handedness::Left, .. } => "trefoil/left".into(),
            FamilyReport::Twist { form, n } => format!("twist/type{form}/n{n}"),
            FamilyReport::Torus { p } => format!("torus/p{p}"),
            FamilyReport::None => "none".into(),
        }
    }

    /// `(form, n)` for twist knots, the trefoil included.
    pub fn twist(&self) -> Option<(u8, u32)> {
        match *self {
            FamilyReport::Trefoil { twist_form, .. } => Some((twist_form, 1)),
            FamilyReport::Twist { form, n } => Some((form, n)),
            _ => None,
        }
    }

    /// `p` for `(2,p)` torus knots, the trefoil included.
    pub fn torus(&self) -> Option<u32> {
        match *self {
            FamilyReport::Trefoil { .. } => Some(3),
            FamilyReport::Torus { p } => Some(p),
            _ => None,
        }
    }

    /// The knot type the family determines.
    pub fn knot(&self) -> Option<KnotName> {
        match *self {
            FamilyReport::Unknot => Some(KnotName::base(0, 1)),
            FamilyReport::Trefoil { .. } => Some(KnotName::base(3, 1)),
            FamilyReport::Twist { n, .. } => twist_knot(n),
            FamilyReport::Torus { p } => Some(KnotName::base(p, 1)),
            FamilyReport::None => None,
        }
    }
}

/// Table name of the twist knot with `n` half twists, where tabulated.
pub fn twist_knot(n: u32) -> Option<KnotName> {
    let (c, i) = match n {
        1 => (3, 1),
        2 => (4, 1),
        3 => (5, 2),
        4 => (6, 1),
        5 => (7, 2),
        6 => (8, 1),
        _ => return None,
    };
    Some(KnotName::base(c, i))
}

/// Recognizes the unknot, trefoil, twist and `(2,p)` torus patterns.
pub fn recognize_word(reduced: &ReducedWord) -> FamilyReport {
    let s = reduced.word().symbols();
    if s.is_empty() {
        return FamilyReport::Unknot;
    }
    let star = s[s.len() - 1];
    let star_is_t1 = matches!(star, Symbol::Tuck1(_));
    let body: Vec<Region> = s[..s.len() - 1].iter().filter_map(|x| x.region()).collect();
    use Region::{C, L, R};

    if body == [L, C] {
        let handedness = match s[0] {
            Symbol::Move(m) if m.direction == Direction::In => Handedness::Right,
            _ => Handedness::Left,
        };
        return FamilyReport::Trefoil { handedness, twist_form: if star_is_t1 { 1 } else { 3 } };
    }
    let (head, centre) = body.split_at(body.len() - 1);
    if centre == [C] && !head.contains(&C) {
        let n = head.len() as u32;
        if n == 2 && !star_is_t1 {
            return FamilyReport::Twist { form: 2, n: 2 };
        }
        return FamilyReport::Twist { form: 1, n };
    }
    let repeats = |tail: &[Region], unit: [Region; 2]| {
        tail.len() >= 2 && tail.len() % 2 == 0 && tail.chunks(2).all(|c| c == unit)
    };
    if body.starts_with(&[L, R, C]) && repeats(&body[3..], [R, C]) {
        return FamilyReport::Twist { form: 2, n: 2 + (body.len() as u32 - 3) };
    }
    if body.starts_with(&[L, C]) && repeats(&body[2..], [R, C]) {
        return FamilyReport::Twist { form: 3, n: 1 + (body.len() as u32 - 2) };
    }
    if repeats(&body, [L, C]) {
        return FamilyReport::Torus { p: s.len() as u32 };
    }
    FamilyReport::None
}

pub fn recognize_family(seq: &TieSequence) -> Result<FamilyReport, ClassifyError> {
    let (reduced, _) = reduce_fully(seq)?;
    Ok(recognize_word(&reduced))
}

/// Everything the classifier derives for one tie sequence.
#[derive(Debug, Clone)]
pub struct Classification {
    pub sequence: TieSequence,
    pub reduced: ReducedWord,
    pub reduced_crossings: usize,
    pub fingerprint: Fingerprint,
    pub knot: KnotName,
    pub family: FamilyReport,
}

pub fn analyze_sequence(seq: &TieSequence, table: &ReferenceTable) -> Result<Classification, ClassifyError> {
    let (reduced, _) = reduce_fully(seq)?;
    let diagram = build_diagram(reduced.word())?;
    let fingerprint = Fingerprint::of(diagram.pd_code())?;
    let knot = table.identify(&fingerprint).ok_or_else(|| ClassifyError::NoMatch {
        sequence: seq.to_string(),
        jones: fingerprint.jones.to_string(),
        determinant: fingerprint.determinant,
    })?;
    Ok(Classification {
        sequence: seq.clone(),
        family: recognize_word(&reduced),
        reduced_crossings: diagram.crossing_count(),
        reduced,
        fingerprint,
        knot,
    })
}

pub fn classify_sequence(seq: &TieSequence, table: &ReferenceTable) -> Result<KnotName, ClassifyError> {
    Ok(analyze_sequence(seq, table)?.knot)
}

/// False exactly for the knots up to 8 crossings with bridge number three.
pub fn is_two_bridge_listed(name: &KnotName) -> Result<bool, ClassifyError> {
    if name.crossing_number > 8 {
        return Err(ClassifyError::OutsideAllowlist(name.to_string()));
    }
    let three_bridge = name.crossing_number == 8 && matches!(name.table_index, 5 | 10 | 15..=21);
    Ok(!three_bridge)
}
