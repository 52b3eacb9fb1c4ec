//! Self-check suite: nine end-to-end criteria over the classic 85 ties,
//! each with a wall-clock limit where one applies.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::classify::{analyze_sequence, classify_sequence, Chirality, FamilyReport, ReferenceTable};
use crate::diagram::{build_diagram, build_sequence_diagram, is_alternating, is_nugatory_free, is_prime_diagram};
use crate::grammar::{enumerate_sequences, validate_fm, TieSequence};
use crate::invariants::{jones, kauffman_bracket};
use crate::pd::PdCode;
use crate::poly::{bracket_span, LaurentPolynomial, Variable};
use crate::rewrite::{extend_sequence, mirror_sequence, reduce_fully, ReducedShape};
use crate::tables::{compute_rows, golden_rows, row_sequence, summarize};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub number: u8,
    pub title: &'static str,
    pub passed: bool,
    pub failures: Vec<String>,
    pub elapsed_ms: u128,
    pub limit_ms: Option<u128>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!("criterion {} {status} {} ({} ms", self.number, self.title, self.elapsed_ms);
        if let Some(limit) = self.limit_ms {
            s.push_str(&format!(", limit {limit} ms"));
        }
        s.push(')');
        if !self.failures.is_empty() {
            s.push_str(&format!(": {} problem(s), first: {}", self.failures.len(), self.failures[0]));
        }
        s
    }
}

type Check = fn(&ReferenceTable) -> Vec<String>;

pub const CRITERIA: [(u8, &str, Option<u64>, Check); 9] = [
    (1, "enumeration", Some(1), enumeration),
    (2, "classification table", Some(10), classification_table),
    (3, "reduction soundness", Some(10), reduction_soundness),
    (4, "reduced forms", None, reduced_forms),
    (5, "reduced diagram theorems", None, diagram_theorems),
    (6, "family formulas", None, family_formulas),
    (7, "mirror construction", None, mirror_construction),
    (8, "extension construction", Some(30), extension_construction),
    (9, "invariant engine", None, invariant_engine),
];

pub fn run_criterion(number: u8, table: &ReferenceTable) -> Option<CriterionResult> {
    let &(number, title, limit, check) = CRITERIA.iter().find(|c| c.0 == number)?;
    let start = Instant::now();
    let failures = check(table);
    let elapsed = start.elapsed();
    let limit = limit.map(Duration::from_secs);
    let in_time = limit.is_none_or(|l| elapsed <= l);
    Some(CriterionResult {
        number,
        title,
        passed: failures.is_empty() && in_time,
        failures,
        elapsed_ms: elapsed.as_millis(),
        limit_ms: limit.map(|l| l.as_millis()),
    })
}

pub fn run_all(table: &ReferenceTable) -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|c| run_criterion(c.0, table)).collect()
}

fn classic() -> Vec<(u32, TieSequence, String)> {
    golden_rows().into_iter().map(|r| (r.fm_number, row_sequence(&r), r.knot_type)).collect()
}

fn enumeration(_: &ReferenceTable) -> Vec<String> {
    let mut out = Vec::new();
    let seqs = match enumerate_sequences(3, 9) {
        Ok(s) => s,
        Err(e) => return vec![e.to_string()],
    };
    let got: BTreeSet<String> = seqs.iter().map(|s| s.to_string()).collect();
    let want: BTreeSet<String> = golden_rows().into_iter().map(|r| r.sequence).collect();
    if seqs.len() != 85 {
        out.push(format!("{} sequences", seqs.len()));
    }
    for s in got.symmetric_difference(&want) {
        out.push(format!("{s} in only one of enumeration and table"));
    }
    let counts: Vec<usize> = (3..=9).map(|k| seqs.iter().filter(|s| s.len() == k).count()).collect();
    if counts != [1, 1, 3, 5, 11, 21, 43] {
        out.push(format!("counts by length {counts:?}"));
    }
    out
}

fn classification_table(table: &ReferenceTable) -> Vec<String> {
    let computed = match compute_rows(table) {
        Ok(r) => r,
        Err(e) => return vec![e.to_string()],
    };
    let golden = golden_rows();
    let mut out = Vec::new();
    for g in &golden {
        let Some(c) = computed.iter().find(|c| c.fm_number == g.fm_number) else {
            out.push(format!("FM {} missing", g.fm_number));
            continue;
        };
        if c.knot_type != g.knot_type {
            out.push(format!("FM {}: knot {} expected {}", g.fm_number, c.knot_type, g.knot_type));
        }
        if c.twist_type != g.twist_type {
            out.push(format!("FM {}: twist type {:?} expected {:?}", g.fm_number, c.twist_type, g.twist_type));
        }
    }
    if summarize(&computed) != summarize(&golden) {
        out.push("summary tables differ".into());
    }
    out
}

fn reduced_jones(seq: &TieSequence) -> Result<LaurentPolynomial, String> {
    let (r, _) = reduce_fully(seq).map_err(|e| e.to_string())?;
    let d = build_diagram(r.word()).map_err(|e| e.to_string())?;
    jones(d.pd_code()).map_err(|e| e.to_string())
}

fn full_jones(seq: &TieSequence) -> Result<LaurentPolynomial, String> {
    let d = build_sequence_diagram(seq).map_err(|e| e.to_string())?;
    jones(d.pd_code()).map_err(|e| e.to_string())
}

fn reduction_soundness(_: &ReferenceTable) -> Vec<String> {
    let mut out = Vec::new();
    for (fm, seq, _) in classic() {
        match (full_jones(&seq), reduced_jones(&seq)) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(a), Ok(b)) => out.push(format!("FM {fm}: full {a} reduced {b}")),
            (Err(e), _) | (_, Err(e)) => out.push(format!("FM {fm}: {e}")),
        }
    }
    out
}

fn reduced_forms(_: &ReferenceTable) -> Vec<String> {
    let mut out = Vec::new();
    for (fm, seq, knot) in classic() {
        match reduce_fully(&seq) {
            Ok((r, _)) => {
                if knot == "0_1" && r.shape() != ReducedShape::Empty {
                    out.push(format!("FM {fm}: unknot reduces to {}", r.word()));
                }
            }
            Err(e) => out.push(format!("FM {fm}: {e}")),
        }
    }
    out
}

fn diagram_theorems(table: &ReferenceTable) -> Vec<String> {
    let mut out = Vec::new();
    for (fm, seq, _) in classic() {
        let result = (|| -> Result<Vec<String>, String> {
            let c = analyze_sequence(&seq, table).map_err(|e| e.to_string())?;
            let d = build_diagram(c.reduced.word()).map_err(|e| e.to_string())?;
            let n = d.crossing_count();
            let mut bad = Vec::new();
            if !is_alternating(&d) {
                bad.push("not alternating".to_string());
            }
            if !is_nugatory_free(&d) {
                bad.push("has a nugatory crossing".into());
            }
            if !is_prime_diagram(&d) {
                bad.push("not a prime diagram".into());
            }
            if n + 1 > seq.len() {
                bad.push(format!("{n} crossings from {} moves", seq.len()));
            }
            if n as u32 != c.knot.crossing_number {
                bad.push(format!("{n} crossings for {}", c.knot));
            }
            let span = bracket_span(&kauffman_bracket(d.pd_code()).map_err(|e| e.to_string())?);
            if span != Some(4 * n as u32) {
                bad.push(format!("bracket span {span:?} with {n} crossings"));
            }
            Ok(bad)
        })();
        match result {
            Ok(bad) => out.extend(bad.into_iter().map(|b| format!("FM {fm}: {b}"))),
            Err(e) => out.push(format!("FM {fm}: {e}")),
        }
    }
    out
}

fn family_formulas(table: &ReferenceTable) -> Vec<String> {
    let mut out = Vec::new();
    for (fm, seq, _) in classic() {
        let c = match analyze_sequence(&seq, table) {
            Ok(c) => c,
            Err(e) => {
                out.push(format!("FM {fm}: {e}"));
                continue;
            }
        };
        let det = c.fingerprint.determinant;
        if let Some(p) = c.family.torus() {
            if det != u64::from(p) {
                out.push(format!("FM {fm}: torus p = {p}, determinant {det}"));
            }
        }
        if let Some((form, n)) = c.family.twist() {
            if det != 2 * u64::from(n) + 1 {
                out.push(format!("FM {fm}: {n} twists, determinant {det}"));
            }
            if (form == 2 && n % 2 != 0) || (form == 3 && n % 2 != 1) {
                out.push(format!("FM {fm}: form {form} with {n} twists"));
            }
        }
        if c.family != FamilyReport::None && c.family.knot().is_none_or(|k| !k.same_type(&c.knot)) {
            out.push(format!("FM {fm}: family {} but knot {}", c.family.label(), c.knot));
        }
    }
    out
}

fn mirror_construction(table: &ReferenceTable) -> Vec<String> {
    let mut out = Vec::new();
    for (fm, seq, _) in classic() {
        let m = match mirror_sequence(&seq) {
            Ok(m) => m,
            Err(e) => {
                out.push(format!("FM {fm}: {e}"));
                continue;
            }
        };
        if !validate_fm(&m, None).valid {
            out.push(format!("FM {fm}: mirror {m} is not a valid tie"));
            continue;
        }
        match (full_jones(&seq), full_jones(&m)) {
            (Ok(v), Ok(w)) if w == v.invert_variable() => {}
            (Ok(_), Ok(_)) => out.push(format!("FM {fm}: mirror {m} has the wrong Jones polynomial")),
            (Err(e), _) | (_, Err(e)) => out.push(format!("FM {fm}: {e}")),
        }
    }
    let fm2 = golden_rows().into_iter().find(|r| r.fm_number == 2).map(|r| row_sequence(&r));
    let pair = fm2.and_then(|s| {
        let m = mirror_sequence(&s).ok()?;
        Some((classify_sequence(&s, table).ok()?, classify_sequence(&m, table).ok()?))
    });
    match pair {
        Some((a, b)) if a.to_string() == "3_1" && b.to_string() == "3_1" && a.chirality != b.chirality => {
            if a.chirality == Chirality::Amphichiral {
                out.push("trefoil reported amphichiral".into());
            }
        }
        other => out.push(format!("FM 2 mirror: {other:?}")),
    }
    out
}

fn extension_construction(table: &ReferenceTable) -> Vec<String> {
    let mut out = Vec::new();
    for (fm, seq, knot) in classic() {
        let ext = match extend_sequence(&seq, 1) {
            Ok(e) => e,
            Err(e) => {
                out.push(format!("FM {fm}: {e}"));
                continue;
            }
        };
        if ext.len() != 4 {
            out.push(format!("FM {fm} ({knot}): {} extensions", ext.len()));
        }
        for e in &ext {
            if !validate_fm(e, None).valid {
                out.push(format!("FM {fm}: extension {e} is not a valid tie"));
                continue;
            }
            match classify_sequence(e, table) {
                Ok(k) if k.to_string() == knot => {}
                Ok(k) => out.push(format!("FM {fm}: extension {e} is {k}, not {knot}")),
                Err(err) => out.push(format!("FM {fm}: extension {e}: {err}")),
            }
        }
        if fm == 2 && !ext.iter().any(|e| e.to_string() == "LoCiRoCiRoLiCoT") {
            out.push("FM 2 extensions miss FM 19".into());
        }
    }
    out
}

fn invariant_engine(table: &ReferenceTable) -> Vec<String> {
    let mut out = Vec::new();
    let one = LaurentPolynomial::one(Variable::A);
    if kauffman_bracket(&PdCode::default()).ok() != Some(one) {
        out.push("bracket of the empty diagram is not 1".into());
    }
    let kink = PdCode::new(vec![[1, 1, 2, 2]]);
    let expect = |e| Some(LaurentPolynomial::monomial(Variable::A, -1, e));
    if kauffman_bracket(&kink).ok() != expect(3) {
        out.push("positive kink bracket is not -A^3".into());
    }
    if kink.mirror().ok().and_then(|m| kauffman_bracket(&m).ok()) != expect(-3) {
        out.push("negative kink bracket is not -A^-3".into());
    }
    for e in table.entries() {
        let mirrored = e.pd.mirror().ok().and_then(|m| jones(&m).ok());
        if mirrored != Some(e.fingerprint.jones.invert_variable()) {
            out.push(format!("{}: mirror law fails", e.name));
        }
    }
    let entries = table.entries();
    for (i, a) in entries.iter().enumerate() {
        for b in &entries[i + 1..] {
            if a.fingerprint.compare(&b.fingerprint).is_some() {
                out.push(format!("{} and {} share a fingerprint", a.name, b.name));
            }
        }
    }
    out
}
