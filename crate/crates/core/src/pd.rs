//! Planar-diagram codes, Gauss codes and the combinatorial predicates that
//! only need the rotation system: signs, faces, alternation, nugatory
//! crossings and diagram primality.
//!
//! A crossing `[i, j, k, l]` lists its four arc labels counterclockwise,
//! starting from the incoming under-strand arc, so the under strand runs
//! `i -> k`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PdCode {
    pub pd: Vec<[u32; 4]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PdError {
    #[error("arc label {label} appears {count} times; every label must appear exactly twice")]
    LabelCount { label: u32, count: usize },
    #[error("arc label {label} outside 1..={max}")]
    LabelRange { label: u32, max: u32 },
    #[error("crossing {crossing} is entered inconsistently along the strand")]
    Orientation { crossing: usize },
    #[error("diagram has more than one component")]
    MultipleComponents,
    #[error("rotation system is not planar: {faces} faces, expected {expected}")]
    NonPlanar { faces: usize, expected: usize },
    #[error("malformed Gauss code: {0}")]
    Gauss(String),
}

/// One pass of the strand through a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Visit {
    pub crossing: usize,
    pub in_port: usize,
    pub over: bool,
}

impl Visit {
    pub fn out_port(&self) -> usize {
        (self.in_port + 2) % 4
    }
}

/// Derived planar structure of a valid PD code.
#[derive(Debug, Clone)]
pub struct PlanarMap {
    /// Visits in strand order; visit 0 is the head of arc 1.
    pub traversal: Vec<Visit>,
    pub signs: Vec<i8>,
    /// `corner_face[c][q]` is the face in the sector between ports `q` and `q + 1`.
    pub corner_face: Vec<[usize; 4]>,
    pub face_count: usize,
}

impl PdCode {
    pub fn new(pd: Vec<[u32; 4]>) -> Self {
        PdCode { pd }
    }

    pub fn len(&self) -> usize {
        self.pd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pd.is_empty()
    }

    /// The other port carrying the same arc label.
    fn partner(&self, c: usize, p: usize) -> (usize, usize) {
        let label = self.pd[c][p];
        for (c2, x) in self.pd.iter().enumerate() {
            for (p2, &l) in x.iter().enumerate() {
                if l == label && (c2, p2) != (c, p) {
                    return (c2, p2);
                }
            }
        }
        unreachable!("labels are checked before partners are looked up")
    }

    fn check_labels(&self) -> Result<(), PdError> {
        let max = 2 * self.pd.len() as u32;
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for x in &self.pd {
            for &l in x {
                if l == 0 || l > max {
                    return Err(PdError::LabelRange { label: l, max });
                }
                *counts.entry(l).or_default() += 1;
            }
        }
        for label in 1..=max {
            let count = counts.get(&label).copied().unwrap_or(0);
            if count != 2 {
                return Err(PdError::LabelCount { label, count });
            }
        }
        Ok(())
    }

    /// Validates labels, orientation, connectivity and planarity.
    pub fn planar_map(&self) -> Result<PlanarMap, PdError> {
        self.check_labels()?;
        let n = self.pd.len();
        if n == 0 {
            return Ok(PlanarMap { traversal: vec![], signs: vec![], corner_face: vec![], face_count: 2 });
        }

        // Walk the strand from the incoming under-arc of crossing 0.
        let mut traversal = Vec::with_capacity(2 * n);
        let mut seen = vec![[false; 2]; n];
        let (mut c, mut p) = (0usize, 0usize);
        loop {
            let over = p % 2 == 1;
            if std::mem::replace(&mut seen[c][usize::from(over)], true) {
                return Err(PdError::Orientation { crossing: c });
            }
            traversal.push(Visit { crossing: c, in_port: p, over });
            (c, p) = self.partner(c, (p + 2) % 4);
            if (c, p) == (0, 0) {
                break;
            }
        }
        if traversal.len() != 2 * n {
            return Err(PdError::MultipleComponents);
        }
        // Under strands must enter at port 0.
        for v in &traversal {
            if !v.over && v.in_port != 0 {
                return Err(PdError::Orientation { crossing: v.crossing });
            }
        }
        let start = traversal
            .iter()
            .position(|v| self.pd[v.crossing][v.in_port] == 1)
            .expect("arc 1 has a head");
        traversal.rotate_left(start);

        let signs = (0..n)
            .map(|c| {
                let v = traversal.iter().find(|v| v.crossing == c && v.over).expect("over visit");
                if v.in_port == 3 { 1 } else { -1 }
            })
            .collect();

        let mut corner_face = vec![[usize::MAX; 4]; n];
        let mut face_count = 0;
        for c0 in 0..n {
            for q0 in 0..4 {
                if corner_face[c0][q0] != usize::MAX {
                    continue;
                }
                // Corner q sits between ports q and q+1; leave along port q+1.
                let (mut c, mut q) = (c0, q0);
                while corner_face[c][q] == usize::MAX {
                    corner_face[c][q] = face_count;
                    let (c2, p2) = self.partner(c, (q + 1) % 4);
                    c = c2;
                    q = p2;
                }
                face_count += 1;
            }
        }
        if face_count != n + 2 {
            return Err(PdError::NonPlanar { faces: face_count, expected: n + 2 });
        }
        Ok(PlanarMap { traversal, signs, corner_face, face_count })
    }

    pub fn validate(&self) -> Result<(), PdError> {
        self.planar_map().map(|_| ())
    }

    pub fn writhe(&self) -> Result<i64, PdError> {
        Ok(self.planar_map()?.signs.iter().map(|&s| i64::from(s)).sum())
    }

    /// Crossing switch at every crossing.
    pub fn mirror(&self) -> Result<PdCode, PdError> {
        let map = self.planar_map()?;
        let pd = self
            .pd
            .iter()
            .zip(&map.signs)
            .map(|(&[i, j, k, l], &s)| if s > 0 { [l, i, j, k] } else { [j, k, l, i] })
            .collect();
        Ok(PdCode { pd })
    }

    pub fn is_alternating(&self) -> Result<bool, PdError> {
        let map = self.planar_map()?;
        let t = &map.traversal;
        Ok((0..t.len()).all(|i| t[i].over != t[(i + 1) % t.len()].over))
    }

    /// A crossing is nugatory when one face meets it in two corners.
    pub fn nugatory_crossings(&self) -> Result<Vec<usize>, PdError> {
        let map = self.planar_map()?;
        Ok(map
            .corner_face
            .iter()
            .enumerate()
            .filter(|(_, f)| f[0] == f[2] || f[1] == f[3])
            .map(|(c, _)| c)
            .collect())
    }

    pub fn is_nugatory_free(&self) -> Result<bool, PdError> {
        Ok(self.nugatory_crossings()?.is_empty())
    }

    /// True when no two arcs disconnect the crossing graph into two parts
    /// that both contain crossings.
    pub fn is_prime_diagram(&self) -> Result<bool, PdError> {
        self.planar_map()?;
        let n = self.pd.len();
        if n <= 1 {
            return Ok(true);
        }
        let mut ends: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (c, x) in self.pd.iter().enumerate() {
            for &l in x {
                ends.entry(l).or_default().push(c);
            }
        }
        let edges: Vec<(usize, usize)> = ends.values().map(|v| (v[0], v[1])).collect();
        for a in 0..edges.len() {
            for b in a + 1..edges.len() {
                if !connected_without(n, &edges, a, b) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn to_gauss(&self) -> Result<GaussCode, PdError> {
        let map = self.planar_map()?;
        let entries = map
            .traversal
            .iter()
            .map(|v| GaussEntry { crossing: v.crossing + 1, over: v.over, sign: map.signs[v.crossing] })
            .collect();
        Ok(GaussCode { entries })
    }

    /// Rebuilds a PD whose arcs are numbered along the Gauss traversal.
    pub fn from_gauss(code: &GaussCode) -> Result<PdCode, PdError> {
        let m = code.entries.len();
        if m % 2 != 0 {
            return Err(PdError::Gauss("odd number of entries".into()));
        }
        let n = m / 2;
        let mut under = vec![None; n];
        let mut over = vec![None; n];
        let mut sign = vec![0i8; n];
        for (v, e) in code.entries.iter().enumerate() {
            if e.crossing == 0 || e.crossing > n {
                return Err(PdError::Gauss(format!("crossing id {} out of range", e.crossing)));
            }
            let c = e.crossing - 1;
            let slot = if e.over { &mut over[c] } else { &mut under[c] };
            if slot.replace(v).is_some() {
                return Err(PdError::Gauss(format!("crossing {} repeated", e.crossing)));
            }
            if sign[c] != 0 && sign[c] != e.sign {
                return Err(PdError::Gauss(format!("crossing {} has inconsistent signs", e.crossing)));
            }
            sign[c] = e.sign;
        }
        let arc_in = |v: usize| v as u32 + 1;
        let arc_out = |v: usize| ((v + 1) % m) as u32 + 1;
        let mut pd = Vec::with_capacity(n);
        for c in 0..n {
            let (u, o) = match (under[c], over[c]) {
                (Some(u), Some(o)) => (u, o),
                _ => return Err(PdError::Gauss(format!("crossing {} not visited twice", c + 1))),
            };
            pd.push(if sign[c] > 0 {
                [arc_in(u), arc_out(o), arc_out(u), arc_in(o)]
            } else {
                [arc_in(u), arc_in(o), arc_out(u), arc_out(o)]
            });
        }
        let pd = PdCode { pd };
        pd.validate()?;
        Ok(pd)
    }

    /// Connected sum, cutting both diagrams at arc 1.
    pub fn connected_sum(&self, other: &PdCode) -> Result<PdCode, PdError> {
        let first = self.planar_map()?;
        let second = other.planar_map()?;
        if self.is_empty() {
            return Ok(other.clone());
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        let shift = 2 * self.pd.len() as u32;
        let joined = shift + 1;
        let mut pd: Vec<[u32; 4]> = self.pd.clone();
        // Arc 1 of the first diagram now ends in the second one, and the
        // second diagram's arc 1 comes back to the first.
        let tail_of_one = |map: &PlanarMap| {
            let last = map.traversal.last().expect("nonempty");
            (last.crossing, last.out_port())
        };
        let (c1, p1) = tail_of_one(&first);
        pd[c1][p1] = joined;
        let mut tail = other.pd.clone();
        for x in tail.iter_mut() {
            for l in x.iter_mut() {
                *l += shift;
            }
        }
        let (c2, p2) = tail_of_one(&second);
        tail[c2][p2] = 1;
        pd.extend(tail);
        let pd = PdCode { pd };
        pd.validate()?;
        Ok(pd)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("PD codes always serialize")
    }
}

fn connected_without(n: usize, edges: &[(usize, usize)], skip_a: usize, skip_b: usize) -> bool {
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        if i != skip_a && i != skip_b {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaussEntry {
    /// 1-based crossing id, the index of the PD tuple plus one.
    pub crossing: usize,
    pub over: bool,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GaussCode {
    pub entries: Vec<GaussEntry>,
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            let ou = if e.over { 'O' } else { 'U' };
            let s = if e.sign > 0 { '+' } else { '-' };
            write!(f, "{ou}{}{s}", e.crossing)?;
        }
        Ok(())
    }
}

impl FromStr for GaussCode {
    type Err = PdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(GaussCode::default());
        }
        let entries = s
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                let bad = || PdError::Gauss(format!("bad token {tok:?}"));
                let over = match tok.chars().next() {
                    Some('O') => true,
                    Some('U') => false,
                    _ => return Err(bad()),
                };
                let sign = match tok.chars().last() {
                    Some('+') => 1,
                    Some('-') => -1,
                    _ => return Err(bad()),
                };
                let crossing = tok
                    .get(1..tok.len() - 1)
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(bad)?;
                Ok(GaussEntry { crossing, over, sign })
            })
            .collect::<Result<_, _>>()?;
        Ok(GaussCode { entries })
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn trefoil() -> PdCode {
        PdCode::new(vec![[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]])
    }

    pub fn figure_eight() -> PdCode {
        PdCode::new(vec![[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]])
    }

    pub fn positive_kink() -> PdCode {
        PdCode::new(vec![[1, 1, 2, 2]])
    }

    #[test]
    fn trefoil_structure() {
        let map = trefoil().planar_map().unwrap();
        assert_eq!(map.traversal.len(), 6);
        assert_eq!(map.face_count, 5);
        assert_eq!(trefoil().writhe().unwrap(), 3);
        assert!(trefoil().is_alternating().unwrap());
        assert!(trefoil().is_nugatory_free().unwrap());
        assert!(trefoil().is_prime_diagram().unwrap());
    }

    #[test]
    fn kink_is_nugatory() {
        let k = positive_kink();
        assert_eq!(k.writhe().unwrap(), 1);
        assert!(!k.is_nugatory_free().unwrap());
        assert_eq!(k.mirror().unwrap().writhe().unwrap(), -1);
    }

    #[test]
    fn empty_diagram() {
        let e = PdCode::default();
        assert_eq!(e.writhe().unwrap(), 0);
        assert!(e.is_alternating().unwrap());
        assert!(e.is_nugatory_free().unwrap());
        assert!(e.is_prime_diagram().unwrap());
        assert_eq!(e.to_json(), r#"{"pd":[]}"#);
    }

    #[test]
    fn label_errors() {
        let bad = PdCode::new(vec![[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 6]]);
        assert!(matches!(bad.validate(), Err(PdError::LabelCount { .. })));
        let bad = PdCode::new(vec![[1, 7, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]]);
        assert!(matches!(bad.validate(), Err(PdError::LabelRange { .. })));
    }

    #[test]
    fn mirror_negates_writhe() {
        for pd in [trefoil(), figure_eight()] {
            let m = pd.mirror().unwrap();
            assert_eq!(m.writhe().unwrap(), -pd.writhe().unwrap());
            assert_eq!(m.mirror().unwrap(), pd);
        }
    }

    #[test]
    fn connected_sum_is_not_prime() {
        let sum = trefoil().connected_sum(&trefoil()).unwrap();
        assert_eq!(sum.len(), 6);
        assert!(sum.is_alternating().unwrap());
        assert!(sum.is_nugatory_free().unwrap());
        assert!(!sum.is_prime_diagram().unwrap());
    }

    #[test]
    fn gauss_round_trip() {
        for pd in [trefoil(), figure_eight()] {
            let g = pd.to_gauss().unwrap();
            let text = g.to_string();
            let parsed: GaussCode = text.parse().unwrap();
            assert_eq!(parsed, g);
            assert_eq!(PdCode::from_gauss(&parsed).unwrap(), pd);
        }
        assert_eq!(trefoil().to_gauss().unwrap().to_string(), "U1+,O3+,U2+,O1+,U3+,O2+");
    }

    #[test]
    fn json_round_trip() {
        let text = trefoil().to_json();
        assert_eq!(text, r#"{"pd":[[1,5,2,4],[3,1,4,6],[5,3,6,2]]}"#);
        let back: PdCode = serde_json::from_str(&text).unwrap();
        assert_eq!(back, trefoil());
    }
}
