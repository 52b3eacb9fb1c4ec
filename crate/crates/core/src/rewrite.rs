//! Diagram words, the reduction rewrite system and the mirror and extension
//! constructions on tie sequences.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::grammar::{tokenize, validate_fm, Direction, ParseError, Region, TieMove, TieSequence, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Move(TieMove),
    /// The first tuck crossing on its own, left behind by reduction I.
    Tuck1(Direction),
}

impl Symbol {
    pub fn region(self) -> Option<Region> {
        match self {
            Symbol::Move(m) => Some(m.region),
            Symbol::Tuck1(_) => None,
        }
    }

    pub fn flipped(self) -> Symbol {
        match self {
            Symbol::Move(m) => Symbol::Move(m.flipped()),
            Symbol::Tuck1(d) => Symbol::Tuck1(d.flip()),
        }
    }

    fn is_side(self) -> bool {
        self.region().is_some_and(Region::is_side)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Move(m) => write!(f, "{m}"),
            Symbol::Tuck1(Direction::In) => f.write_str("t1"),
            Symbol::Tuck1(Direction::Out) => f.write_str("t1o"),
        }
    }
}

const fn mv(region: Region, direction: Direction) -> Symbol {
    Symbol::Move(TieMove::new(region, direction))
}

/// A word over moves and `t1`, optionally tucked. Unlike a tie sequence it
/// need not satisfy the tie rules.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DiagramWord {
    symbols: Vec<Symbol>,
    tucked: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("t1 may only be the final symbol")]
    Tuck1NotFinal,
    #[error("a word cannot end with both t1 and a tuck")]
    DoubleTuck,
    #[error("word {word} is not a reduced form")]
    NotReduced { word: String },
}

impl DiagramWord {
    pub fn new(symbols: Vec<Symbol>, tucked: bool) -> Result<Self, WordError> {
        if let Some(i) = symbols.iter().position(|s| matches!(s, Symbol::Tuck1(_))) {
            if i + 1 != symbols.len() {
                return Err(WordError::Tuck1NotFinal);
            }
            if tucked {
                return Err(WordError::DoubleTuck);
            }
        }
        if tucked && symbols.is_empty() {
            return Err(ParseError::TuckWithoutMoves.into());
        }
        Ok(DiagramWord { symbols, tucked })
    }

    pub fn empty() -> Self {
        DiagramWord::default()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn tucked(&self) -> bool {
        self.tucked
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// Every direction switched, including the one on `t1`.
    pub fn flipped(&self) -> DiagramWord {
        DiagramWord { symbols: self.symbols.iter().map(|s| s.flipped()).collect(), tucked: self.tucked }
    }
}

impl From<&TieSequence> for DiagramWord {
    fn from(seq: &TieSequence) -> Self {
        DiagramWord { symbols: seq.moves().iter().map(|&m| Symbol::Move(m)).collect(), tucked: seq.tucked() }
    }
}

impl fmt::Display for DiagramWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return f.write_str("∅");
        }
        for s in &self.symbols {
            write!(f, "{s}")?;
        }
        if self.tucked {
            f.write_str("T")?;
        }
        Ok(())
    }
}

impl FromStr for DiagramWord {
    type Err = WordError;

    /// Accepts tie-sequence syntax plus a final `t1`/`t_1`; `∅` or blank is the empty word.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if trimmed.is_empty() || trimmed == "∅" {
            return Ok(DiagramWord::empty());
        }
        let tokens = tokenize(trimmed)?;
        let mut symbols = Vec::new();
        let mut tucked = false;
        for (i, &(tok, offset)) in tokens.iter().enumerate() {
            match tok {
                Token::Move(m) => symbols.push(Symbol::Move(m)),
                Token::Tuck1(d) => symbols.push(Symbol::Tuck1(d)),
                Token::Tuck => {
                    if i + 1 != tokens.len() {
                        return Err(ParseError::TuckNotFinal { offset }.into());
                    }
                    tucked = true;
                }
            }
        }
        DiagramWord::new(symbols, tucked)
    }
}

impl Serialize for DiagramWord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReducedShape {
    Empty,
    /// `L…C∗` with `∗` an `L` or `R` move.
    CentreStar,
    /// `L…C t1`.
    CentreTuck1,
}

/// A diagram word in one of the three normal forms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ReducedWord(DiagramWord);

impl ReducedWord {
    pub fn new(word: DiagramWord) -> Result<Self, WordError> {
        match reduced_shape(&word) {
            Some(_) => Ok(ReducedWord(word)),
            None => Err(WordError::NotReduced { word: word.to_string() }),
        }
    }

    pub fn word(&self) -> &DiagramWord {
        &self.0
    }

    pub fn shape(&self) -> ReducedShape {
        reduced_shape(&self.0).expect("checked on construction")
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn reduced_shape(word: &DiagramWord) -> Option<ReducedShape> {
    if word.tucked {
        return None;
    }
    let s = &word.symbols;
    if s.is_empty() {
        return Some(ReducedShape::Empty);
    }
    if s.len() < 3 || s[0].region() != Some(Region::L) || s[s.len() - 2].region() != Some(Region::C) {
        return None;
    }
    match s[s.len() - 1] {
        Symbol::Tuck1(_) => Some(ReducedShape::CentreTuck1),
        last if last.is_side() => Some(ReducedShape::CentreStar),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RuleId {
    Replace,
    R0,
    RI,
    RII,
    RIII,
    RIV,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub rule: RuleId,
    /// 0-based index of the first symbol the rule rewrites.
    pub position: usize,
    pub before: String,
    pub after: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        self.steps
            .iter()
            .map(|s| serde_json::to_string(s).expect("trace steps serialize") + "\n")
            .collect()
    }

    pub fn rules(&self) -> Vec<RuleId> {
        self.steps.iter().map(|s| s.rule).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("sequence fails the tie rules: {0}")]
    Invalid(String),
    #[error("no C followed by an L or R move at position {at}")]
    PatternAbsent { at: usize },
    #[error("extension needs at least one step")]
    ZeroSteps,
}

fn check_fm(seq: &TieSequence) -> Result<(), RewriteError> {
    let report = validate_fm(seq, None);
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(RewriteError::Invalid(format!("rule {} at position {}: {}", v.rule, v.position, v.message))),
    }
}

/// `C X` becomes `C X' X` at index `at`, where `X'` is the other side region
/// and takes `X`'s direction.
pub fn crossing_replace(w: &DiagramWord, at: usize) -> Result<DiagramWord, RewriteError> {
    let s = &w.symbols;
    let pattern = match (s.get(at), s.get(at + 1)) {
        (Some(Symbol::Move(c)), Some(Symbol::Move(x))) if c.region == Region::C && x.region.is_side() => Some(*x),
        _ => None,
    };
    let x = pattern.ok_or(RewriteError::PatternAbsent { at })?;
    let other = x.region.opposite_side().expect("side region");
    let mut symbols = s.clone();
    symbols.insert(at + 1, mv(other, x.direction));
    Ok(DiagramWord { symbols, tucked: w.tucked })
}

fn is_move(s: Symbol, region: Region, direction: Direction) -> bool {
    s == mv(region, direction)
}

/// Applies the first applicable rule; `None` at a fixpoint.
fn step(w: &DiagramWord, trace: &mut ReductionTrace) -> Option<DiagramWord> {
    use Direction::{In, Out};
    let s = &w.symbols;
    let k = s.len();
    let mut record = |rule, position, before: &DiagramWord, after: &DiagramWord| {
        trace.steps.push(TraceStep { rule, position, before: before.to_string(), after: after.to_string() });
    };

    if w.tucked {
        // Rule 0: the whole word is LoRiCoT.
        if k == 3 && is_move(s[0], Region::L, Out) && is_move(s[1], Region::R, In) && is_move(s[2], Region::C, Out) {
            let out = DiagramWord::empty();
            record(RuleId::R0, 0, w, &out);
            return Some(out);
        }
        let tail_ok = k >= 4
            && is_move(s[k - 1], Region::C, Out)
            && s[k - 3].is_side()
            && s[k - 2].is_side()
            && s[k - 3] == mv(s[k - 3].region().unwrap(), Out)
            && s[k - 2] == mv(s[k - 2].region().unwrap(), In)
            && s[k - 3].region() != s[k - 2].region();
        if tail_ok {
            // Rule II: C_i Y_o X_i C_o T, via the crossing replacement.
            if k >= 5 && is_move(s[k - 4], Region::C, In) {
                let replaced = crossing_replace(w, k - 4).expect("C followed by a side move");
                record(RuleId::Replace, k - 4, w, &replaced);
                let out = DiagramWord { symbols: s[..k - 4].to_vec(), tucked: false };
                record(RuleId::RII, k - 4, &replaced, &out);
                return Some(out);
            }
            // Rule I: X_i Y_o X_i C_o T becomes X_i C_o t1.
            if s[k - 4] == mv(s[k - 2].region().unwrap(), In) {
                let mut symbols = s[..k - 3].to_vec();
                symbols.push(mv(Region::C, Out));
                symbols.push(Symbol::Tuck1(In));
                let out = DiagramWord { symbols, tucked: false };
                record(RuleId::RI, k - 4, w, &out);
                return Some(out);
            }
        }
        return None;
    }

    // Rule IV: C followed by two or more side moves keeps only the first.
    if let Some(c) = s.iter().rposition(|x| x.region() == Some(Region::C)) {
        if k - c > 2 && s[c + 1..].iter().all(|x| x.is_side()) {
            let out = DiagramWord { symbols: s[..c + 2].to_vec(), tucked: false };
            record(RuleId::RIV, c, w, &out);
            return Some(out);
        }
        return None;
    }
    // Rule III: a word of side moves only.
    if k > 0 && s.iter().all(|x| x.is_side()) {
        let out = DiagramWord::empty();
        record(RuleId::RIII, 0, w, &out);
        return Some(out);
    }
    None
}

/// Rewrites a diagram word to a fixpoint under the fixed rule order
/// 0, II, I, IV, III.
pub fn reduce_word(w: &DiagramWord) -> (DiagramWord, ReductionTrace) {
    let mut trace = ReductionTrace::default();
    let mut current = w.clone();
    while let Some(next) = step(&current, &mut trace) {
        current = next;
    }
    (current, trace)
}

pub fn reduce_fully(seq: &TieSequence) -> Result<(ReducedWord, ReductionTrace), RewriteError> {
    check_fm(seq)?;
    let (word, trace) = reduce_word(&DiagramWord::from(seq));
    let reduced = ReducedWord::new(word).expect("tie sequences always reach a reduced form");
    Ok((reduced, trace))
}

/// Which reduction fires first on a valid tie sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ending {
    Zero,
    One,
    Two,
}

fn ending(seq: &TieSequence) -> Ending {
    let m = seq.moves();
    let k = m.len();
    if k == 3 {
        Ending::Zero
    } else if m[k - 4].region == Region::C {
        Ending::Two
    } else {
        Ending::One
    }
}

const FACADES: [[TieMove; 4]; 2] = [
    [
        TieMove::new(Region::C, Direction::In),
        TieMove::new(Region::R, Direction::Out),
        TieMove::new(Region::L, Direction::In),
        TieMove::new(Region::C, Direction::Out),
    ],
    [
        TieMove::new(Region::C, Direction::In),
        TieMove::new(Region::L, Direction::Out),
        TieMove::new(Region::R, Direction::In),
        TieMove::new(Region::C, Direction::Out),
    ],
];

/// Alternating side moves starting at `region` with `direction`.
fn side_run(region: Region, direction: Direction, len: usize) -> Vec<TieMove> {
    let mut out = Vec::with_capacity(len);
    let (mut r, mut d) = (region, direction);
    for _ in 0..len {
        out.push(TieMove::new(r, d));
        r = r.opposite_side().expect("side region");
        d = d.flip();
    }
    out
}

fn finish(mut moves: Vec<TieMove>, facade: &[TieMove; 4]) -> TieSequence {
    moves.extend_from_slice(facade);
    let seq = TieSequence::new(moves, true).expect("nonempty");
    debug_assert!(validate_fm(&seq, None).valid, "{seq}");
    seq
}

fn flip_moves(moves: &[TieMove]) -> Vec<TieMove> {
    moves.iter().map(|m| m.flipped()).collect()
}

/// A tie sequence for the mirror image of `seq`'s knot. The unknot is its own
/// mirror, so the smallest tie maps to itself.
pub fn mirror_sequence(seq: &TieSequence) -> Result<TieSequence, RewriteError> {
    check_fm(seq)?;
    let m = seq.moves();
    let k = m.len();
    Ok(match ending(seq) {
        Ending::Zero => seq.clone(),
        Ending::One => {
            // p X_i C_o t1 is equivalent to p X_i C_o L_i; mirror that prefix.
            let mut moves = flip_moves(&m[..k - 3]);
            moves.push(TieMove::new(Region::C, Direction::In));
            moves.push(TieMove::new(Region::L, Direction::Out));
            finish(moves, &FACADES[0])
        }
        Ending::Two => {
            let w = &m[..k - 4];
            let mut moves = flip_moves(w);
            let last = w.last().expect("a C_i is never first").region;
            moves.push(TieMove::new(last.opposite_side().expect("side region"), Direction::Out));
            finish(moves, &FACADES[0])
        }
    })
}

/// Longer tie sequences for the same knot type: two alternating runs times two
/// facades. After reduction I the prefix is mirrored to keep the directions
/// alternating, so those outputs tie the mirror image. Unknots admit only the
/// `L`-first run, so they yield two sequences.
pub fn extend_sequence(seq: &TieSequence, steps: usize) -> Result<Vec<TieSequence>, RewriteError> {
    check_fm(seq)?;
    if steps == 0 {
        return Err(RewriteError::ZeroSteps);
    }
    let m = seq.moves();
    let k = m.len();
    let mut out = Vec::new();
    match ending(seq) {
        Ending::Zero => {
            for facade in &FACADES {
                out.push(finish(side_run(Region::L, Direction::Out, 2 * steps - 1), facade));
            }
        }
        Ending::One => {
            let prefix = flip_moves(&m[..k - 3]);
            for start in [Region::L, Region::R] {
                for facade in &FACADES {
                    let mut moves = prefix.clone();
                    moves.push(TieMove::new(Region::C, Direction::In));
                    moves.extend(side_run(start, Direction::Out, 2 * steps - 1));
                    out.push(finish(moves, facade));
                }
            }
        }
        Ending::Two => {
            let w = &m[..k - 4];
            match w.iter().rposition(|x| x.region == Region::C) {
                Some(c) => {
                    let run_len = w.len() - c - 1 + 2 * steps;
                    let direction = w[c].direction.flip();
                    for start in [Region::L, Region::R] {
                        for facade in &FACADES {
                            let mut moves = w[..=c].to_vec();
                            moves.extend(side_run(start, direction, run_len));
                            out.push(finish(moves, facade));
                        }
                    }
                }
                None => {
                    for facade in &FACADES {
                        out.push(finish(side_run(Region::L, w[0].direction, w.len() + 2 * steps), facade));
                    }
                }
            }
        }
    }
    out.sort_by_key(|s| s.to_string());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{enumerate_sequences, parse_sequence};

    fn seq(s: &str) -> TieSequence {
        parse_sequence(s).unwrap()
    }

    fn reduce(s: &str) -> String {
        reduce_fully(&seq(s)).unwrap().0.to_string()
    }

    #[test]
    fn word_text_round_trip() {
        for text in ["∅", "LiCot1", "LoCit1o", "LiRoCiLoRoLiCoT", "LoCiLo"] {
            assert_eq!(text.parse::<DiagramWord>().unwrap().to_string(), text);
        }
        assert_eq!("L_iC_ot_1".parse::<DiagramWord>().unwrap().to_string(), "LiCot1");
        assert_eq!("Lit1Co".parse::<DiagramWord>(), Err(WordError::Tuck1NotFinal));
    }

    #[test]
    fn crossing_replace_examples() {
        let w = DiagramWord::from(&seq("L_iR_oC_iR_oL_iC_oT"));
        assert_eq!(crossing_replace(&w, 2).unwrap().to_string(), "LiRoCiLoRoLiCoT");
        let w: DiagramWord = "LoCiLoRiCoT".parse().unwrap();
        assert_eq!(crossing_replace(&w, 1).unwrap().to_string(), "LoCiRoLoRiCoT");
        assert_eq!(crossing_replace(&w, 0), Err(RewriteError::PatternAbsent { at: 0 }));
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(reduce("L_oR_iC_oT"), "∅");
        assert_eq!(reduce("L_iR_oL_iC_oT"), "LiCot1");
        assert_eq!(reduce("L_iR_oC_iR_oL_iC_oT"), "∅");
        assert_eq!(reduce("L_oC_iL_oC_iR_oL_iC_oT"), "LoCiLo");
    }

    #[test]
    fn reduction_traces() {
        let (_, trace) = reduce_fully(&seq("L_iR_oC_iR_oL_iC_oT")).unwrap();
        assert_eq!(trace.rules(), vec![RuleId::Replace, RuleId::RII, RuleId::RIII]);
        assert_eq!(trace.steps[1].after, "LiRo");
        let lines = trace.to_json_lines();
        assert_eq!(lines.lines().count(), 3);
        assert!(lines.starts_with(r#"{"rule":"Replace","position":2,"before":"LiRoCiRoLiCoT","after":"LiRoCiLoRoLiCoT"}"#));
        let (_, trace) = reduce_fully(&seq("LoCiRoLiRoLiCoT")).unwrap();
        assert_eq!(trace.rules(), vec![RuleId::RI]);
    }

    #[test]
    fn rule_four_keeps_first_side_move() {
        let (w, trace) = reduce_word(&"LiCoRiLoRi".parse().unwrap());
        assert_eq!(w.to_string(), "LiCoRi");
        assert_eq!(trace.rules(), vec![RuleId::RIV]);
    }

    #[test]
    fn invalid_input_is_rejected() {
        assert!(matches!(reduce_fully(&seq("LiRoLiRoT")), Err(RewriteError::Invalid(_))));
        assert!(matches!(mirror_sequence(&seq("RiLoCiLoRiCoT")), Err(RewriteError::Invalid(_))));
    }

    #[test]
    fn all_ties_reduce_to_normal_forms() {
        for s in enumerate_sequences(3, 9).unwrap() {
            let (r, trace) = reduce_fully(&s).unwrap();
            assert!(r.word().len() < s.len(), "{s}");
            let first = trace.steps.first().unwrap();
            assert_eq!(first.before, s.to_string());
            for pair in trace.steps.windows(2) {
                assert_eq!(pair[0].after, pair[1].before);
            }
            assert_eq!(trace.steps.last().unwrap().after, r.to_string());
        }
    }

    #[test]
    fn mirror_of_four_in_hand() {
        assert_eq!(mirror_sequence(&seq("L_iR_oL_iC_oT")).unwrap().to_string(), "LoCiLoCiRoLiCoT");
        assert_eq!(mirror_sequence(&seq("LoRiCoT")).unwrap().to_string(), "LoRiCoT");
    }

    #[test]
    fn mirrors_are_valid_ties() {
        for s in enumerate_sequences(3, 9).unwrap() {
            let m = mirror_sequence(&s).unwrap();
            assert!(validate_fm(&m, None).valid, "{s} -> {m}");
            let (r, _) = reduce_fully(&s).unwrap();
            let (rm, _) = reduce_fully(&m).unwrap();
            assert_eq!(r.is_empty(), rm.is_empty(), "{s}");
        }
    }

    #[test]
    fn extension_of_four_in_hand() {
        let out = extend_sequence(&seq("L_iR_oL_iC_oT"), 1).unwrap();
        let texts: Vec<String> = out.iter().map(|s| s.to_string()).collect();
        assert_eq!(out.len(), 4);
        assert!(texts.contains(&"LoCiRoCiRoLiCoT".to_string()));
        assert!(out.iter().all(|s| s.len() == 7 && validate_fm(s, None).valid));
        assert_eq!(extend_sequence(&seq("L_iR_oL_iC_oT"), 2).unwrap()[0].len(), 9);
        assert_eq!(extend_sequence(&seq("L_iR_oL_iC_oT"), 0), Err(RewriteError::ZeroSteps));
    }

    #[test]
    fn extension_lengths() {
        for s in enumerate_sequences(3, 9).unwrap() {
            for steps in 1..=2 {
                let out = extend_sequence(&s, steps).unwrap();
                let expected = match ending(&s) {
                    Ending::One => s.len() + 1 + 2 * steps,
                    _ => s.len() + 2 * steps,
                };
                for e in &out {
                    assert_eq!(e.len(), expected, "{s} -> {e}");
                    assert!(validate_fm(e, None).valid, "{s} -> {e}");
                }
                let (r, _) = reduce_fully(&s).unwrap();
                assert_eq!(out.len(), if r.is_empty() { 2 } else { 4 }, "{s}");
            }
        }
    }
}
