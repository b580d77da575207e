//! Input parsing, report emission, DOT export and PPM rasters.
//!
//! File formats, all byte-stable for a fixed input:
//!
//! * digit-set JSON: `{"k": int, "n": int, "digits": [[int,...],...]}`,
//!   digits in any order on input, lexicographic on output;
//! * digit-set plain text: a `k n` header line, one digit per line as
//!   space-separated integers, `#` starts a comment line;
//! * problem JSON: either a single digit-set object (self-intersection
//!   mode) or `{"d1": {...}, "d2": {...}}`;
//! * reports: a JSON document plus a human-readable table;
//! * graphs: DOT with node ids `"F_(a1,...,ak)"` and edge labels `#G=m`;
//! * rasters: ASCII PPM (P3), one pixel per depth-p cell, y axis up.

use serde::{Deserialize, Serialize};

use crate::digits::DigitSet;
use crate::error::{Error, Result};
use crate::face::{enumerate_face_vectors, FaceVector};
use crate::graph::{
    self_intersection_report, CardinalityClass, ExactPoint, IntersectionProblem, StructureGraph,
};

/// Default bound on the raster side length `n^p`.
pub const DEFAULT_MAX_IMAGE: i64 = 4096;

/// Finite intersections with more points than this are reported by count
/// only; the point list is left out of the report.
pub const MAX_REPORTED_POINTS: u64 = 100_000;

/// A parsed problem file.
#[derive(Clone, Debug)]
pub enum ProblemInput {
    /// Two distinct cubes.
    Pair(IntersectionProblem),
    /// One cube intersected with its own translates.
    SelfIntersection(DigitSet),
}

impl ProblemInput {
    /// The intersection problem either way: a self-intersection is the
    /// pair (D, D).
    pub fn problem(&self) -> Result<IntersectionProblem> {
        match self {
            ProblemInput::Pair(p) => Ok(p.clone()),
            ProblemInput::SelfIntersection(d) => IntersectionProblem::self_intersection(d),
        }
    }

    pub fn is_self(&self) -> bool {
        matches!(self, ProblemInput::SelfIntersection(_))
    }
}

#[derive(Serialize, Deserialize)]
struct DigitSetFile {
    k: usize,
    n: i64,
    digits: Vec<Vec<i64>>,
}

impl DigitSetFile {
    fn from_set(d: &DigitSet) -> Self {
        DigitSetFile {
            k: d.dim(),
            n: d.order(),
            digits: d.digits().to_vec(),
        }
    }

    fn into_set(self, context: &str) -> Result<DigitSet> {
        DigitSet::new(self.k, self.n, self.digits)
            .map_err(|e| Error::Parse(format!("{context}: {e}")))
    }
}

/// Parses a problem file: JSON (single or pair) or plain text (single).
pub fn parse_problem(bytes: &[u8]) -> Result<ProblemInput> {
    let text = std::str::from_utf8(bytes)
        .map_err(|_| Error::Parse("input is not valid UTF-8".into()))?;
    if text.trim_start().starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("top-level JSON value must be an object".into()))?;
        if obj.contains_key("d1") || obj.contains_key("d2") {
            let pair: PairFile = serde_json::from_value(value.clone())
                .map_err(|e| Error::Parse(format!("invalid problem object: {e}")))?;
            let d1 = pair.d1.into_set("d1")?;
            let d2 = pair.d2.into_set("d2")?;
            return Ok(ProblemInput::Pair(IntersectionProblem::new(d1, d2)?));
        }
        if obj.contains_key("digits") {
            let single: DigitSetFile = serde_json::from_value(value)
                .map_err(|e| Error::Parse(format!("invalid digit set object: {e}")))?;
            return Ok(ProblemInput::SelfIntersection(single.into_set("digits")?));
        }
        return Err(Error::Parse(
            "JSON object must contain either \"digits\" or \"d1\"/\"d2\"".into(),
        ));
    }
    Ok(ProblemInput::SelfIntersection(parse_digit_set_text(text)?))
}

#[derive(Deserialize)]
struct PairFile {
    d1: DigitSetFile,
    d2: DigitSetFile,
}

/// Parses a file that must contain a single digit set.
pub fn parse_digit_set(bytes: &[u8]) -> Result<DigitSet> {
    match parse_problem(bytes)? {
        ProblemInput::SelfIntersection(d) => Ok(d),
        ProblemInput::Pair(_) => Err(Error::Parse(
            "expected a single digit set, found a problem pair".into(),
        )),
    }
}

fn parse_digit_set_text(text: &str) -> Result<DigitSet> {
    let mut header: Option<(usize, i64)> = None;
    let mut digits = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let numbers = fields
            .iter()
            .map(|f| {
                f.parse::<i64>().map_err(|_| {
                    Error::Parse(format!("line {}: invalid integer {f:?}", lineno + 1))
                })
            })
            .collect::<Result<Vec<i64>>>()?;
        match header {
            None => {
                if numbers.len() != 2 {
                    return Err(Error::Parse(format!(
                        "line {}: header must be \"k n\"",
                        lineno + 1
                    )));
                }
                let k = usize::try_from(numbers[0]).map_err(|_| {
                    Error::Parse(format!("line {}: invalid dimension", lineno + 1))
                })?;
                header = Some((k, numbers[1]));
            }
            Some((k, _)) => {
                if numbers.len() != k {
                    return Err(Error::Parse(format!(
                        "line {}: expected {k} coordinates, found {}",
                        lineno + 1,
                        numbers.len()
                    )));
                }
                digits.push(numbers);
            }
        }
    }
    let (k, n) = header.ok_or_else(|| Error::Parse("missing \"k n\" header line".into()))?;
    DigitSet::new(k, n, digits).map_err(|e| Error::Parse(e.to_string()))
}

/// Canonical JSON form of a digit set.
pub fn digit_set_json(d: &DigitSet) -> String {
    serde_json::to_string(&DigitSetFile::from_set(d)).expect("digit sets serialize cleanly")
}

/// Canonical plain-text form of a digit set.
pub fn digit_set_text(d: &DigitSet) -> String {
    let mut out = format!("{} {}\n", d.dim(), d.order());
    for digit in d.digits() {
        let line = digit
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Deterministic DOT rendering of a pruned structure graph. Vertices come
/// first in lexicographic order, then all edges sorted by source and
/// target; loops are drawn dashed.
pub fn export_dot(graph: &StructureGraph) -> String {
    let mut out = String::from("digraph structure_graph {\n");
    for v in graph.vertices() {
        out.push_str(&format!("    \"F_{v}\";\n"));
    }
    let mut edges: Vec<(String, String, usize, bool)> = graph
        .edges()
        .iter()
        .map(|e| {
            (
                graph.face(e.from).to_string(),
                graph.face(e.to).to_string(),
                e.label.len(),
                false,
            )
        })
        .collect();
    for v in graph.loop_vertices() {
        let label = graph.loop_set(v).expect("loop vertex is a valid face");
        edges.push((v.to_string(), v.to_string(), label.len(), true));
    }
    edges.sort();
    for (from, to, size, is_loop) in edges {
        let style = if is_loop { ", style=dashed" } else { "" };
        out.push_str(&format!(
            "    \"F_{from}\" -> \"F_{to}\" [label=\"#G={size}\"{style}];\n"
        ));
    }
    out.push_str("}\n");
    out
}

const WHITE: [u8; 3] = [255, 255, 255];
const BLACK: [u8; 3] = [0, 0, 0];
const RED: [u8; 3] = [255, 0, 0];
const BLUE: [u8; 3] = [0, 0, 255];
const PURPLE: [u8; 3] = [128, 0, 128];

/// ASCII PPM raster of the depth-p cover of a square: black cells on white.
pub fn render_single(d: &DigitSet, depth: u32, max_side: i64) -> Result<Vec<u8>> {
    let (side, cells) = raster_cells(d, depth, max_side)?;
    let mut mask = vec![0u8; (side * side) as usize];
    mark_cells(&mut mask, &cells, side, 1);
    Ok(write_ppm(side, &mask, |m| if m != 0 { BLACK } else { WHITE }))
}

/// ASCII PPM raster of two covers over each other: red where only the
/// first cube has a cell, blue where only the second, purple where both.
pub fn render_overlay(d1: &DigitSet, d2: &DigitSet, depth: u32, max_side: i64) -> Result<Vec<u8>> {
    let (side, cells1) = raster_cells(d1, depth, max_side)?;
    let (side2, cells2) = raster_cells(d2, depth, max_side)?;
    if side != side2 {
        return Err(Error::OrderMismatch(d1.order(), d2.order()));
    }
    let mut mask = vec![0u8; (side * side) as usize];
    mark_cells(&mut mask, &cells1, side, 1);
    mark_cells(&mut mask, &cells2, side, 2);
    Ok(write_ppm(side, &mask, |m| match m {
        1 => RED,
        2 => BLUE,
        3 => PURPLE,
        _ => WHITE,
    }))
}

fn raster_cells(d: &DigitSet, depth: u32, max_side: i64) -> Result<(i64, DigitSet)> {
    if d.dim() != 2 {
        return Err(Error::RasterDimension(d.dim()));
    }
    if depth == 0 {
        return Err(Error::InvalidDepth);
    }
    let side = crate::digits::refined_order(d.order(), depth)?;
    if side > max_side {
        return Err(Error::ImageGuardExceeded {
            side,
            max: max_side,
        });
    }
    let cells = d.refine_guarded(depth, (side * side) as u64)?;
    Ok((side, cells))
}

fn mark_cells(mask: &mut [u8], cells: &DigitSet, side: i64, bit: u8) {
    for cell in cells.digits() {
        mask[(cell[1] * side + cell[0]) as usize] |= bit;
    }
}

fn write_ppm(side: i64, mask: &[u8], color: impl Fn(u8) -> [u8; 3]) -> Vec<u8> {
    let mut out = format!("P3\n{side} {side}\n255\n").into_bytes();
    for row in 0..side {
        let y = side - 1 - row;
        let mut line = String::new();
        for x in 0..side {
            if x > 0 {
                line.push(' ');
            }
            let [r, g, b] = color(mask[(y * side + x) as usize]);
            line.push_str(&format!("{r} {g} {b}"));
        }
        line.push('\n');
        out.extend_from_slice(line.as_bytes());
    }
    out
}

/// The per-face analysis record of the report.
#[derive(Clone, Debug, Serialize)]
pub struct AlphaRecord {
    pub alpha: String,
    pub alive: bool,
    pub nu: u64,
    pub dimension: f64,
    pub measure_finite: Option<bool>,
    pub cardinality: CardinalityRecord,
    pub points: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CardinalityRecord {
    pub class: String,
    pub count: Option<u64>,
}

impl CardinalityRecord {
    fn from_class(class: &CardinalityClass) -> Self {
        let (name, count) = match class {
            CardinalityClass::Empty => ("empty", None),
            CardinalityClass::Finite(c) => ("finite", Some(*c)),
            CardinalityClass::CountablyInfinite => ("countably_infinite", None),
            CardinalityClass::Uncountable => ("uncountable", None),
        };
        CardinalityRecord {
            class: name.to_string(),
            count,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfProperties {
    pub one_point: bool,
    pub finite_intersection: bool,
    pub chain_one_point_criterion: bool,
    pub chain_finite_criterion: bool,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GraphCounts {
    pub vertices: usize,
    pub edges: usize,
    pub loops: usize,
}

/// A complete analysis of a problem file: the pruned graph plus one record
/// per face vector (all of them for a pair, the nonzero ones for a
/// self-intersection, where the zero vertex is the cube itself).
#[derive(Clone, Debug)]
pub struct Analysis {
    pub input: ProblemInput,
    pub graph: StructureGraph,
    pub records: Vec<AlphaRecord>,
    pub self_properties: Option<SelfProperties>,
}

/// Runs the full classification for every reported face vector.
pub fn analyze(input: &ProblemInput) -> Result<Analysis> {
    let problem = input.problem()?;
    let graph = problem.structure_graph();
    let faces = enumerate_face_vectors(problem.dim())?;

    let mut records = Vec::new();
    for a in &faces {
        if input.is_self() && a.is_zero() {
            continue;
        }
        records.push(alpha_record(&graph, a)?);
    }

    let self_properties = match input {
        ProblemInput::SelfIntersection(d) => {
            let report = self_intersection_report(d)?;
            Some(SelfProperties {
                one_point: report.one_point,
                finite_intersection: report.finite_intersection,
                chain_one_point_criterion: report.chain_one_point,
                chain_finite_criterion: report.chain_finite,
            })
        }
        ProblemInput::Pair(_) => None,
    };

    Ok(Analysis {
        input: input.clone(),
        graph,
        records,
        self_properties,
    })
}

fn alpha_record(graph: &StructureGraph, a: &FaceVector) -> Result<AlphaRecord> {
    let alive = graph.is_alive(a)?;
    let cardinality = graph.classify_cardinality(a)?;
    let (nu, dimension, measure_finite) = if alive {
        let d = graph.dimension(a)?;
        (d.nu, d.value, Some(graph.measure_finite(a)?))
    } else {
        (0, 0.0, None)
    };
    let points = match cardinality {
        CardinalityClass::Finite(count) if count <= MAX_REPORTED_POINTS => {
            let pts = graph.enumerate_finite_points(a)?;
            Some(pts.iter().map(point_strings).collect())
        }
        _ => None,
    };
    Ok(AlphaRecord {
        alpha: a.to_string(),
        alive,
        nu,
        dimension,
        measure_finite: Some(measure_finite).flatten(),
        cardinality: CardinalityRecord::from_class(&cardinality),
        points,
    })
}

fn point_strings(p: &ExactPoint) -> Vec<String> {
    p.coords().iter().map(|c| c.to_string()).collect()
}

/// One entry of a faces listing: the face vector, the dimension of its
/// digit set (smaller than the cube's when normalized) and the digits.
pub fn face_entry_json(a: &FaceVector, set: &DigitSet) -> serde_json::Value {
    serde_json::json!({
        "alpha": a.to_string(),
        "k": set.dim(),
        "digits": set.digits(),
    })
}

/// A faces listing document, byte-stable for fixed input.
pub fn faces_document_json(d: &DigitSet, entries: &[serde_json::Value]) -> String {
    let doc = serde_json::json!({
        "k": d.dim(),
        "n": d.order(),
        "faces": entries,
    });
    let mut out = serde_json::to_string_pretty(&doc).expect("faces document serializes cleanly");
    out.push('\n');
    out
}

#[derive(Serialize)]
struct ReportDocument<'a> {
    problem: ProblemEcho,
    graph: GraphCounts,
    results: &'a [AlphaRecord],
    self_intersection: Option<&'a SelfProperties>,
}

#[derive(Serialize)]
struct ProblemEcho {
    mode: &'static str,
    k: usize,
    n: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<DigitSetFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d1: Option<DigitSetFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d2: Option<DigitSetFile>,
}

/// The JSON report document. Byte-stable for a fixed input.
pub fn report_json(analysis: &Analysis) -> String {
    let summary = analysis.graph.summary();
    let echo = match &analysis.input {
        ProblemInput::Pair(p) => ProblemEcho {
            mode: "pair",
            k: p.dim(),
            n: p.order(),
            d: None,
            d1: Some(DigitSetFile::from_set(p.d1())),
            d2: Some(DigitSetFile::from_set(p.d2())),
        },
        ProblemInput::SelfIntersection(d) => ProblemEcho {
            mode: "self",
            k: d.dim(),
            n: d.order(),
            d: Some(DigitSetFile::from_set(d)),
            d1: None,
            d2: None,
        },
    };
    let doc = ReportDocument {
        problem: echo,
        graph: GraphCounts {
            vertices: summary.vertices,
            edges: summary.edges,
            loops: summary.loops,
        },
        results: &analysis.records,
        self_intersection: analysis.self_properties.as_ref(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("report serializes cleanly");
    out.push('\n');
    out
}

/// The human-readable table. One row per face vector, then the graph
/// summary and, in self mode, the property footers.
pub fn report_table(analysis: &Analysis) -> String {
    let mut out = String::new();
    let summary = analysis.graph.summary();
    match &analysis.input {
        ProblemInput::Pair(p) => {
            out.push_str(&format!(
                "problem: pair k={} n={} #d1={} #d2={}\n",
                p.dim(),
                p.order(),
                p.d1().len(),
                p.d2().len()
            ));
        }
        ProblemInput::SelfIntersection(d) => {
            out.push_str(&format!(
                "problem: self k={} n={} #d={}\n",
                d.dim(),
                d.order(),
                d.len()
            ));
        }
    }
    out.push_str(&format!(
        "graph: vertices={} edges={} loops={}\n",
        summary.vertices, summary.edges, summary.loops
    ));
    for r in &analysis.records {
        out.push_str(&record_row(r));
        out.push('\n');
    }
    if let Some(props) = &analysis.self_properties {
        out.push_str(&format!(
            "one-point: {}, finite-intersection: {}\n",
            yes_no(props.one_point),
            yes_no(props.finite_intersection)
        ));
        out.push_str(&format!(
            "chain-criterion: one-point: {}, finite-intersection: {}\n",
            yes_no(props.chain_one_point_criterion),
            yes_no(props.chain_finite_criterion)
        ));
    }
    out
}

fn record_row(r: &AlphaRecord) -> String {
    if !r.alive {
        return format!("{} empty", r.alpha);
    }
    let measure = match r.measure_finite {
        Some(true) => "finite",
        Some(false) => "infinite",
        None => "unknown",
    };
    let card = match (&r.cardinality.class[..], r.cardinality.count) {
        ("finite", Some(c)) => format!("finite({c})"),
        (class, _) => class.to_string(),
    };
    format!(
        "{} alive ν={} dim={} {} card={}",
        r.alpha, r.nu, r.dimension, measure, card
    )
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
