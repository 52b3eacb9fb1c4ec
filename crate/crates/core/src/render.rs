//! SVG sketch of a tie diagram: passive strand as stem plus neck loop,
//! crossings at their slots, active strand as a polyline through them.

use std::fmt::Write;

use crate::diagram::{CrossingKind, PassiveSegment, TieDiagram};

const WIDTH: f64 = 320.0;
const HEIGHT: f64 = 360.0;
const CX: f64 = 160.0;
const LOOP_CY: f64 = 110.0;
const LOOP_R: f64 = 80.0;
const JUNCTION_Y: f64 = LOOP_CY + LOOP_R;
const B_Y: f64 = 330.0;

type Point = (f64, f64);

fn slot_count(d: &TieDiagram, seg: PassiveSegment) -> usize {
    d.crossings()
        .iter()
        .filter_map(|c| match c.kind {
            CrossingKind::Move { segment, slot } | CrossingKind::TuckT1 { segment, slot } if segment == seg => {
                Some(slot + 1)
            }
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

fn slot_point(seg: PassiveSegment, slot: usize, count: usize) -> Point {
    let f = (slot + 1) as f64 / (count + 1) as f64;
    match seg {
        PassiveSegment::StraightStrand => (CX, JUNCTION_Y + f * (B_Y - JUNCTION_Y - 20.0)),
        // Arc angles measured from the junction at the bottom of the loop.
        PassiveSegment::LeftArc | PassiveSegment::RightArc => {
            let theta = f * std::f64::consts::PI;
            let dx = LOOP_R * theta.sin();
            let dy = LOOP_R * theta.cos();
            let x = if seg == PassiveSegment::LeftArc { CX - dx } else { CX + dx };
            (x, LOOP_CY + dy)
        }
    }
}

fn lerp(a: Point, b: Point, t: f64) -> Point {
    (a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t)
}

/// Crossing positions indexed by crossing id.
fn positions(d: &TieDiagram) -> Vec<Point> {
    let counts = [
        slot_count(d, PassiveSegment::StraightStrand),
        slot_count(d, PassiveSegment::LeftArc),
        slot_count(d, PassiveSegment::RightArc),
    ];
    let count = |seg: PassiveSegment| counts[seg as usize];
    let mut pos: Vec<Point> = d
        .crossings()
        .iter()
        .map(|c| match c.kind {
            CrossingKind::Move { segment, slot } | CrossingKind::TuckT1 { segment, slot } => {
                slot_point(segment, slot, count(segment))
            }
            _ => (0.0, 0.0),
        })
        .collect();
    let moves = d.crossings().iter().filter(|c| matches!(c.kind, CrossingKind::Move { .. })).count();
    if moves >= 3 {
        let (p, q) = (pos[moves - 3], pos[moves - 2]);
        for c in d.crossings() {
            match c.kind {
                CrossingKind::TuckT2 => pos[c.id] = lerp(p, q, 1.0 / 3.0),
                CrossingKind::TuckT3 => pos[c.id] = lerp(p, q, 2.0 / 3.0),
                _ => {}
            }
        }
    }
    pos
}

pub fn render_svg(d: &TieDiagram, title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    // passive strand
    let _ = writeln!(
        s,
        "<path d=\"M {CX} {B_Y} L {CX} {JUNCTION_Y} A {LOOP_R} {LOOP_R} 0 1 1 {:.1} {:.1}\" fill=\"none\" stroke=\"#888\" stroke-width=\"6\"/>",
        CX + 6.0,
        JUNCTION_Y - 0.2
    );
    let _ = writeln!(s, "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\">b</text>", CX + 6.0, B_Y + 4.0);
    let _ = writeln!(s, "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\">a</text>", CX + 10.0, JUNCTION_Y + 14.0);

    let pos = positions(d);
    let moves = d.crossings().iter().filter(|c| matches!(c.kind, CrossingKind::Move { .. })).count();
    let mut path: Vec<Point> = vec![(CX + 60.0, JUNCTION_Y + 40.0)];
    for c in d.crossings() {
        if let CrossingKind::Move { .. } = c.kind {
            path.push(pos[c.id]);
            if c.id + 3 == moves {
                path.extend(d.crossings().iter().filter(|x| matches!(x.kind, CrossingKind::TuckT2 | CrossingKind::TuckT3)).map(|x| pos[x.id]));
            }
        }
    }
    path.extend(d.crossings().iter().filter(|c| !matches!(c.kind, CrossingKind::Move { .. })).map(|c| pos[c.id]));
    let points: Vec<String> = path.iter().map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
    if path.len() > 1 {
        let _ = writeln!(
            s,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"3\" stroke-linejoin=\"round\"/>",
            points.join(" ")
        );
    }
    for c in d.crossings() {
        let (x, y) = pos[c.id];
        let fill = if c.active_over { "#1f4e9c" } else { "white" };
        let _ = writeln!(s, "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"5\" fill=\"{fill}\" stroke=\"#1f4e9c\"/>");
        let label = match c.kind {
            CrossingKind::Move { .. } => format!("{}", c.id + 1),
            CrossingKind::TuckT1 { .. } => "t1".into(),
            CrossingKind::TuckT2 => "t2".into(),
            CrossingKind::TuckT3 => "t3".into(),
        };
        let _ = writeln!(s, "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\">{label}</text>", x + 7.0, y - 6.0);
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
