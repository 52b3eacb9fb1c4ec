//! Compiles tie sequences and diagram words into planar knot diagrams.
//!
//! The passive strand runs from point `b` up the straight strand to the
//! junction, up the left arc, around the neck and down the right arc to point
//! `a`, where the active strand begins in region `R`. Each move crosses the
//! passive segment separating the old and new regions, always at the
//! outermost free slot of that segment (downward on the straight strand,
//! away from the junction on the arcs). The tuck adds `t1` on the arc opposite
//! the final centre move, then runs over (`t2`) and under (`t3`) the active
//! loop that ends at the last straight-strand crossing before reaching `b`.

use serde::Serialize;
use thiserror::Error;

use crate::grammar::{validate_fm, Direction, Region, TieSequence};
use crate::pd::{GaussCode, PdCode, PdError};
use crate::rewrite::{DiagramWord, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PassiveSegment {
    StraightStrand,
    LeftArc,
    RightArc,
}

impl PassiveSegment {
    /// The segment separating two distinct regions.
    pub fn between(a: Region, b: Region) -> PassiveSegment {
        match (a, b) {
            (Region::L, Region::R) | (Region::R, Region::L) => PassiveSegment::StraightStrand,
            (Region::L, Region::C) | (Region::C, Region::L) => PassiveSegment::LeftArc,
            (Region::R, Region::C) | (Region::C, Region::R) => PassiveSegment::RightArc,
            _ => unreachable!("regions must differ"),
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Side of the oriented passive strand a region lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

fn side(segment: PassiveSegment, region: Region) -> Side {
    match (segment, region) {
        (PassiveSegment::StraightStrand, Region::L) => Side::Left,
        (PassiveSegment::StraightStrand, Region::R) => Side::Right,
        (_, Region::C) => Side::Right,
        _ => Side::Left,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CrossingKind {
    Move { segment: PassiveSegment, slot: usize },
    TuckT1 { segment: PassiveSegment, slot: usize },
    TuckT2,
    TuckT3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub id: usize,
    pub kind: CrossingKind,
    /// For `t2`/`t3` this is the tuck end passing over the earlier loop.
    pub active_over: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StrandEnd {
    pub arc: u32,
    pub incoming: bool,
    pub over: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieDiagram {
    crossings: Vec<Crossing>,
    /// Counterclockwise strand ends per crossing, from the incoming under end.
    rotation: Vec<[StrandEnd; 4]>,
    /// Arc carrying point `a` and arc carrying point `b`.
    endpoints: Option<(u32, u32)>,
    pd: PdCode,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("sequence fails the tie rules: {0}")]
    Invalid(String),
    #[error("diagram words must begin with an L move")]
    FirstMove,
    #[error("region repeated at position {position}")]
    RepeatedRegion { position: usize },
    #[error("t1 must follow a centre move")]
    Tuck1WithoutCentre,
    #[error("a tucked word must end with two straight-strand crossings and a centre move")]
    TuckShape,
    #[error("an untucked word cannot end in the centre region")]
    OpenCentre,
    #[error("internal layout error: {0}")]
    Layout(#[from] PdError),
}

#[derive(Clone, Copy)]
enum Role {
    Base,
    Crosser,
}

struct CrossingPlan {
    kind: CrossingKind,
    crosser_over: bool,
    crosser_left_to_right: bool,
}

/// Builds the diagram of a full tie sequence after checking rules 0-3.
pub fn build_sequence_diagram(seq: &TieSequence) -> Result<TieDiagram, DiagramError> {
    let report = validate_fm(seq, None);
    if let Some(v) = report.violations.first() {
        return Err(DiagramError::Invalid(format!("rule {} at position {}: {}", v.rule, v.position, v.message)));
    }
    build_diagram(&DiagramWord::from(seq))
}

pub fn build_diagram(word: &DiagramWord) -> Result<TieDiagram, DiagramError> {
    let moves: Vec<_> = word
        .symbols()
        .iter()
        .filter_map(|s| match s {
            Symbol::Move(m) => Some(*m),
            Symbol::Tuck1(_) => None,
        })
        .collect();
    let tuck1 = match word.symbols().last() {
        Some(Symbol::Tuck1(d)) => Some(*d),
        _ => None,
    };
    let tucked = word.tucked();
    let k = moves.len();
    if k == 0 {
        if tuck1.is_some() {
            return Err(DiagramError::Tuck1WithoutCentre);
        }
        return Ok(TieDiagram { crossings: vec![], rotation: vec![], endpoints: None, pd: PdCode::default() });
    }
    if moves[0].region != Region::L {
        return Err(DiagramError::FirstMove);
    }
    // regions[i] is the region after i moves; the active end starts in R.
    let mut regions = vec![Region::R];
    for (i, m) in moves.iter().enumerate() {
        if m.region == regions[i] {
            return Err(DiagramError::RepeatedRegion { position: i + 1 });
        }
        regions.push(m.region);
    }
    let last = regions[k];
    if tuck1.is_some() && last != Region::C {
        return Err(DiagramError::Tuck1WithoutCentre);
    }
    if tucked {
        let ok = k >= 3 && last == Region::C && regions[k - 2..k].iter().all(|r| r.is_side());
        if !ok {
            return Err(DiagramError::TuckShape);
        }
    } else if tuck1.is_none() && last == Region::C {
        return Err(DiagramError::OpenCentre);
    }

    let mut next_slot = [0usize; 3];
    let mut specs = Vec::new();
    for (i, m) in moves.iter().enumerate() {
        let segment = PassiveSegment::between(regions[i], m.region);
        let slot = next_slot[segment.index()];
        next_slot[segment.index()] += 1;
        specs.push(CrossingPlan {
            kind: CrossingKind::Move { segment, slot },
            crosser_over: m.direction.is_over(),
            crosser_left_to_right: side(segment, regions[i]) == Side::Left
                && side(segment, m.region) == Side::Right,
        });
    }
    if tucked || tuck1.is_some() {
        let segment = match regions[k - 1] {
            Region::L => PassiveSegment::RightArc,
            _ => PassiveSegment::LeftArc,
        };
        let slot = next_slot[segment.index()];
        specs.push(CrossingPlan {
            kind: CrossingKind::TuckT1 { segment, slot },
            crosser_over: tuck1.map_or(true, Direction::is_over),
            crosser_left_to_right: false,
        });
    }
    if tucked {
        // The loop lies to the right of its own direction when it bulges into R.
        let into_loop_left_to_right = regions[k - 2] == Region::R;
        specs.push(CrossingPlan { kind: CrossingKind::TuckT2, crosser_over: true, crosser_left_to_right: into_loop_left_to_right });
        specs.push(CrossingPlan { kind: CrossingKind::TuckT3, crosser_over: false, crosser_left_to_right: !into_loop_left_to_right });
    }
    let t1 = k;
    let (t2, t3) = (k + 1, k + 2);

    let mut visits: Vec<(usize, Role)> = Vec::with_capacity(2 * specs.len());
    for i in 0..k {
        visits.push((i, Role::Crosser));
        if tucked && i + 3 == k {
            visits.push((t2, Role::Base));
            visits.push((t3, Role::Base));
        }
    }
    if tucked || tuck1.is_some() {
        visits.push((t1, Role::Crosser));
    }
    if tucked {
        visits.push((t2, Role::Crosser));
        visits.push((t3, Role::Crosser));
    }
    let active_visits = visits.len();
    let on = |seg: PassiveSegment| {
        let mut v: Vec<(usize, usize)> = specs
            .iter()
            .enumerate()
            .filter_map(|(c, s)| match s.kind {
                CrossingKind::Move { segment, slot } | CrossingKind::TuckT1 { segment, slot } if segment == seg => {
                    Some((slot, c))
                }
                _ => None,
            })
            .collect();
        v.sort();
        v
    };
    for (_, c) in on(PassiveSegment::StraightStrand).into_iter().rev() {
        visits.push((c, Role::Base));
    }
    for (_, c) in on(PassiveSegment::LeftArc) {
        visits.push((c, Role::Base));
    }
    for (_, c) in on(PassiveSegment::RightArc).into_iter().rev() {
        visits.push((c, Role::Base));
    }

    let m = visits.len();
    let n = specs.len();
    debug_assert_eq!(m, 2 * n);
    let mut base = vec![(0u32, 0u32); n];
    let mut crosser = vec![(0u32, 0u32); n];
    for (v, &(c, role)) in visits.iter().enumerate() {
        let arcs = (v as u32 + 1, ((v + 1) % m) as u32 + 1);
        match role {
            Role::Base => base[c] = arcs,
            Role::Crosser => crosser[c] = arcs,
        }
    }

    let mut rotation = Vec::with_capacity(n);
    let mut crossings = Vec::with_capacity(n);
    for (c, s) in specs.iter().enumerate() {
        let end = |arc, incoming, over| StrandEnd { arc, incoming, over };
        let b_over = !s.crosser_over;
        let (b_in, b_out) = base[c];
        let (x_in, x_out) = crosser[c];
        let mut ends = if s.crosser_left_to_right {
            [end(b_out, false, b_over), end(x_in, true, s.crosser_over), end(b_in, true, b_over), end(x_out, false, s.crosser_over)]
        } else {
            [end(b_out, false, b_over), end(x_out, false, s.crosser_over), end(b_in, true, b_over), end(x_in, true, s.crosser_over)]
        };
        let start = ends.iter().position(|e| e.incoming && !e.over).expect("one incoming under end");
        ends.rotate_left(start);
        rotation.push(ends);
        crossings.push(Crossing { id: c, kind: s.kind, active_over: s.crosser_over });
    }
    let pd = PdCode::new(rotation.iter().map(|r| r.map(|e| e.arc)).collect());
    pd.validate()?;
    Ok(TieDiagram { crossings, rotation, endpoints: Some((1, active_visits as u32 + 1)), pd })
}

impl TieDiagram {
    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn rotation(&self) -> &[[StrandEnd; 4]] {
        &self.rotation
    }

    /// Arcs carrying the endpoints `a` and `b`; `None` without crossings.
    pub fn endpoint_arcs(&self) -> Option<(u32, u32)> {
        self.endpoints
    }

    pub fn pd_code(&self) -> &PdCode {
        &self.pd
    }
}

pub fn to_pd_code(d: &TieDiagram) -> PdCode {
    d.pd.clone()
}

pub fn to_gauss_code(d: &TieDiagram) -> GaussCode {
    d.pd.to_gauss().expect("built diagrams are planar")
}

pub fn writhe(d: &TieDiagram) -> i64 {
    d.pd.writhe().expect("built diagrams are planar")
}

pub fn is_alternating(d: &TieDiagram) -> bool {
    d.pd.is_alternating().expect("built diagrams are planar")
}

pub fn is_nugatory_free(d: &TieDiagram) -> bool {
    d.pd.is_nugatory_free().expect("built diagrams are planar")
}

pub fn is_prime_diagram(d: &TieDiagram) -> bool {
    d.pd.is_prime_diagram().expect("built diagrams are planar")
}
