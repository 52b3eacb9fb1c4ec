//! Tie moves, tie sequences and the tie rules.
//!
//! A tie sequence is an ordered list of moves into the left, right or centre
//! region, each made either over (`in`) or under (`out`) the passive strand,
//! optionally finished by a tuck `T`. The canonical text form concatenates
//! two-character tokens: `LiRoLiCoT`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

/// Default bound on the number of moves (rule 4).
pub const DEFAULT_MAX_MOVES: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    L,
    R,
    C,
}

impl Region {
    pub const ALL: [Region; 3] = [Region::L, Region::R, Region::C];

    pub fn letter(self) -> char {
        match self {
            Region::L => 'L',
            Region::R => 'R',
            Region::C => 'C',
        }
    }

    /// The other side region: `L` ↔ `R`. `C` has no partner.
    pub fn opposite_side(self) -> Option<Region> {
        match self {
            Region::L => Some(Region::R),
            Region::R => Some(Region::L),
            Region::C => None,
        }
    }

    pub fn is_side(self) -> bool {
        self != Region::C
    }
}

/// `In` puts the active strand over the passive strand, `Out` under it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    In,
    Out,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::In => Direction::Out,
            Direction::Out => Direction::In,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Direction::In => 'i',
            Direction::Out => 'o',
        }
    }

    pub fn is_over(self) -> bool {
        self == Direction::In
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TieMove {
    pub region: Region,
    pub direction: Direction,
}

impl TieMove {
    pub const fn new(region: Region, direction: Direction) -> Self {
        TieMove { region, direction }
    }

    pub fn flipped(self) -> TieMove {
        TieMove::new(self.region, self.direction.flip())
    }
}

impl fmt::Display for TieMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.region.letter(), self.direction.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TieSequence {
    moves: Vec<TieMove>,
    tucked: bool,
}

impl TieSequence {
    /// Fails only when `tucked` is set on an empty move list.
    pub fn new(moves: Vec<TieMove>, tucked: bool) -> Result<Self, ParseError> {
        if tucked && moves.is_empty() {
            return Err(ParseError::TuckWithoutMoves);
        }
        Ok(TieSequence { moves, tucked })
    }

    pub fn moves(&self) -> &[TieMove] {
        &self.moves
    }

    pub fn tucked(&self) -> bool {
        self.tucked
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_sequence(text)
    }
}

impl fmt::Display for TieSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.moves {
            write!(f, "{m}")?;
        }
        if self.tucked {
            f.write_str("T")?;
        }
        Ok(())
    }
}

impl FromStr for TieSequence {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_sequence(s)
    }
}

impl Serialize for TieSequence {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty tie sequence")]
    Empty,
    #[error("unknown token {token:?} at offset {offset}")]
    UnknownToken { token: String, offset: usize },
    #[error("tuck T at offset {offset} is not the final token")]
    TuckNotFinal { offset: usize },
    #[error("tuck T needs at least one preceding move")]
    TuckWithoutMoves,
}

/// A lexical token with its byte offset in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Token {
    Move(TieMove),
    Tuck,
    /// `t1`, optionally suffixed with a direction; only diagram words use it.
    Tuck1(Direction),
}

fn is_separator(c: char) -> bool {
    c == '_' || c.is_whitespace()
}

/// Splits text into tokens, skipping whitespace and underscores. Shared by
/// the tie-sequence and diagram-word parsers.
pub(crate) fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let chars: Vec<(usize, char)> = text
        .char_indices()
        .filter(|(_, c)| !is_separator(*c))
        .collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (offset, c) = chars[i];
        let next = chars.get(i + 1).map(|&(_, c)| c.to_ascii_lowercase());
        let region = match c.to_ascii_uppercase() {
            'L' => Some(Region::L),
            'R' => Some(Region::R),
            'C' => Some(Region::C),
            _ => None,
        };
        if let Some(region) = region {
            let direction = match next {
                Some('i') => Direction::In,
                Some('o') => Direction::Out,
                _ => return Err(unknown(&chars, i, offset)),
            };
            out.push((Token::Move(TieMove::new(region, direction)), offset));
            i += 2;
            continue;
        }
        if c.eq_ignore_ascii_case(&'T') {
            if next == Some('1') {
                let direction = match chars.get(i + 2).map(|&(_, c)| c.to_ascii_lowercase()) {
                    Some('i') => Some(Direction::In),
                    Some('o') => Some(Direction::Out),
                    _ => None,
                };
                match direction {
                    Some(d) => {
                        out.push((Token::Tuck1(d), offset));
                        i += 3;
                    }
                    None => {
                        out.push((Token::Tuck1(Direction::In), offset));
                        i += 2;
                    }
                }
            } else {
                out.push((Token::Tuck, offset));
                i += 1;
            }
            continue;
        }
        return Err(unknown(&chars, i, offset));
    }
    Ok(out)
}

fn unknown(chars: &[(usize, char)], i: usize, offset: usize) -> ParseError {
    let token: String = chars[i..].iter().take(2).map(|&(_, c)| c).collect();
    ParseError::UnknownToken { token, offset }
}

/// Parses a tie sequence. Accepts any case, underscores and whitespace:
/// `"L_iR_oL_iC_oT"`, `"lo ri co t"` and `"LoRiCoT"` are all fine.
pub fn parse_sequence(text: &str) -> Result<TieSequence, ParseError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut moves = Vec::with_capacity(tokens.len());
    let mut tucked = false;
    for (idx, &(token, offset)) in tokens.iter().enumerate() {
        match token {
            Token::Move(m) => moves.push(m),
            Token::Tuck => {
                if idx + 1 != tokens.len() {
                    return Err(ParseError::TuckNotFinal { offset });
                }
                tucked = true;
            }
            Token::Tuck1(_) => {
                let token = text[offset..].chars().filter(|c| !is_separator(*c)).take(2).collect();
                return Err(ParseError::UnknownToken { token, offset });
            }
        }
    }
    TieSequence::new(moves, tucked)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: u8,
    /// 1-based move position the violation refers to.
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport { valid: violations.is_empty(), violations }
    }

    pub fn violates(&self, rule: u8) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    /// True when rules 0-3 hold, whatever rule 4 says.
    pub fn structurally_valid(&self) -> bool {
        self.violations.iter().all(|v| v.rule == 4)
    }
}

const ENDING_LR: [TieMove; 3] = [
    TieMove::new(Region::L, Direction::Out),
    TieMove::new(Region::R, Direction::In),
    TieMove::new(Region::C, Direction::Out),
];
const ENDING_RL: [TieMove; 3] = [
    TieMove::new(Region::R, Direction::Out),
    TieMove::new(Region::L, Direction::In),
    TieMove::new(Region::C, Direction::Out),
];

/// Checks rules 0-4. `max_moves = None` leaves the length unbounded.
pub fn validate_fm(seq: &TieSequence, max_moves: Option<usize>) -> ValidationReport {
    let moves = seq.moves();
    let mut violations = Vec::new();

    if let Some(first) = moves.first() {
        if first.region != Region::L {
            violations.push(Violation {
                rule: 0,
                position: 1,
                message: format!("sequence must begin with Li or Lo, found {first}"),
            });
        }
        // Working back from the final Co, the first direction is fixed by parity.
        if seq.tucked() {
            let expected = if moves.len() % 2 == 0 { Direction::In } else { Direction::Out };
            if first.direction != expected {
                violations.push(Violation {
                    rule: 0,
                    position: 1,
                    message: format!(
                        "a {}-move sequence must start with an {} move",
                        moves.len(),
                        if expected == Direction::In { "in" } else { "out" }
                    ),
                });
            }
        }
    }

    for (i, pair) in moves.windows(2).enumerate() {
        if pair[0].region == pair[1].region {
            violations.push(Violation {
                rule: 1,
                position: i + 2,
                message: format!("region {} repeated", pair[1].region.letter()),
            });
        }
    }
    for (i, pair) in moves.windows(2).enumerate() {
        if pair[0].direction == pair[1].direction {
            violations.push(Violation {
                rule: 2,
                position: i + 2,
                message: format!("direction does not alternate: {}{}", pair[0], pair[1]),
            });
        }
    }

    let tail = moves.len().saturating_sub(3);
    let ends_ok = moves.len() >= 3 && (moves[tail..] == ENDING_LR || moves[tail..] == ENDING_RL);
    if !seq.tucked() || !ends_ok {
        violations.push(Violation {
            rule: 3,
            position: tail + 1,
            message: "sequence must end with LoRiCoT or RoLiCoT".to_string(),
        });
    }

    if let Some(max) = max_moves {
        if moves.len() > max {
            violations.push(Violation {
                rule: 4,
                position: max + 1,
                message: format!("{} moves exceed the maximum of {max}", moves.len()),
            });
        }
    }

    ValidationReport::from_violations(violations)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid move range {min}..={max}: need 3 <= min <= max")]
pub struct RangeError {
    pub min: usize,
    pub max: usize,
}

/// Every tucked sequence with `min..=max` moves satisfying rules 0-3, sorted
/// by canonical text.
pub fn enumerate_sequences(min: usize, max: usize) -> Result<Vec<TieSequence>, RangeError> {
    if min < 3 || min > max {
        return Err(RangeError { min, max });
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(max);
    for first in [Direction::In, Direction::Out] {
        prefix.push(TieMove::new(Region::L, first));
        extend(&mut prefix, min, max, &mut out);
        prefix.pop();
    }
    let mut keyed: Vec<(String, TieSequence)> = out.into_iter().map(|s| (s.to_string(), s)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed.into_iter().map(|(_, s)| s).collect())
}

fn extend(prefix: &mut Vec<TieMove>, min: usize, max: usize, out: &mut Vec<TieSequence>) {
    let n = prefix.len();
    if n >= min && n >= 3 && (prefix[n - 3..] == ENDING_LR || prefix[n - 3..] == ENDING_RL) {
        out.push(TieSequence { moves: prefix.clone(), tucked: true });
    }
    if n == max {
        return;
    }
    let last = prefix[n - 1];
    for region in Region::ALL {
        if region == last.region {
            continue;
        }
        prefix.push(TieMove::new(region, last.direction.flip()));
        extend(prefix, min, max, out);
        prefix.pop();
    }
}
