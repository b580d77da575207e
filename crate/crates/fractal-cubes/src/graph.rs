//! Intersections of two fractal cubes via the structure graph.
//!
//! For fractal k-cubes `K1`, `K2` of the same order `n` and a face vector
//! `a`, write `F_a = K1 ∩ (K2 + a)`. The family of all `F_a` satisfies a
//! closed system of set equations: each `F_a` is a finite union of copies of
//! the `F_b` over superfaces `b` of `a`, scaled by `1/n` and translated by
//! digit sets
//!
//! ```text
//! G_a  = D1 ∩ (D2 + (n-1)·a)          (loop set of the vertex a)
//! G_ab = D1 ∩ (D2 + n·a - b)          (label of the edge a -> b)
//! ```
//!
//! Pruning empty vertices and dead edges leaves the *structure graph*, a DAG
//! plus loops from which everything else is read off exactly: which `F_a`
//! are nonempty, their Hausdorff dimension `log_n v(a)` where `v(a)` is the
//! largest loop set reachable from `a`, whether the measure in that
//! dimension is finite, the cardinality class, and, for finite
//! intersections, the full list of points as exact rationals.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::digits::DigitSet;
use crate::error::{Error, Result};
use crate::face::{enumerate_face_vectors, FaceVector};

/// A point with exact rational coordinates in the unit cube.
///
/// Points of finite intersections always have coordinates of the form
/// `m / ((n-1) * n^j)`; arbitrary rationals are accepted for membership
/// queries.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExactPoint(Vec<BigRational>);

impl ExactPoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        ExactPoint(coords)
    }

    /// A point with integer coordinates `numers` divided by `denom`.
    pub fn from_fractions(numers: &[i64], denom: i64) -> Self {
        ExactPoint(
            numers
                .iter()
                .map(|&a| BigRational::new(BigInt::from(a), BigInt::from(denom)))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    /// True iff every coordinate lies in `[0, 1]`.
    pub fn in_unit_cube(&self) -> bool {
        self.0
            .iter()
            .all(|c| !c.is_negative() && *c <= BigRational::one())
    }

    /// The point translated by `-a`, i.e. the preimage under `x -> x + a`.
    pub fn minus_face(&self, a: &FaceVector) -> ExactPoint {
        ExactPoint(
            self.0
                .iter()
                .zip(a.entries())
                .map(|(c, &e)| c - BigRational::from(BigInt::from(e)))
                .collect(),
        )
    }
}

impl fmt::Display for ExactPoint {
    /// Token form with reduced fractions, e.g. `(0,1/3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for ExactPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("point token must look like (p,q,...), got {s:?}")))?;
        let coords = inner
            .split(',')
            .map(|t| {
                let t = t.trim();
                let (num, den) = match t.split_once('/') {
                    Some((a, b)) => (a.trim(), b.trim()),
                    None => (t, "1"),
                };
                let num = BigInt::from_str(num)
                    .map_err(|_| Error::Parse(format!("invalid numerator {num:?}")))?;
                let den = BigInt::from_str(den)
                    .map_err(|_| Error::Parse(format!("invalid denominator {den:?}")))?;
                if den.is_zero() {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok(BigRational::new(num, den))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactPoint(coords))
    }
}

/// `v(a)` and the dimension `log_n v(a)` it induces.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct DimensionValue {
    /// Largest loop-set cardinality over vertices reachable from `a`.
    pub nu: u64,
    /// Order of the cubes.
    pub order: i64,
    /// `log_order(nu)`.
    pub value: f64,
}

impl DimensionValue {
    fn new(nu: u64, order: i64) -> Self {
        DimensionValue {
            nu,
            order,
            value: (nu as f64).ln() / (order as f64).ln(),
        }
    }
}

/// Exact cardinality classification of an intersection `F_a`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CardinalityClass {
    Empty,
    Finite(u64),
    CountablyInfinite,
    Uncountable,
}

impl CardinalityClass {
    pub fn is_finite(&self) -> bool {
        matches!(self, CardinalityClass::Finite(_))
    }
}

/// A pair of fractal cubes of equal dimension and order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntersectionProblem {
    d1: DigitSet,
    d2: DigitSet,
}

impl IntersectionProblem {
    pub fn new(d1: DigitSet, d2: DigitSet) -> Result<Self> {
        if d1.dim() != d2.dim() {
            return Err(Error::DimensionMismatch(d1.dim(), d2.dim()));
        }
        if d1.order() != d2.order() {
            return Err(Error::OrderMismatch(d1.order(), d2.order()));
        }
        if d1.is_empty() || d2.is_empty() {
            return Err(Error::EmptyDigitSet);
        }
        Ok(IntersectionProblem { d1, d2 })
    }

    /// The problem `K ∩ (K + a)` for a single cube.
    pub fn self_intersection(d: &DigitSet) -> Result<Self> {
        IntersectionProblem::new(d.clone(), d.clone())
    }

    /// The problem with the two cubes exchanged.
    pub fn swapped(&self) -> Self {
        IntersectionProblem {
            d1: self.d2.clone(),
            d2: self.d1.clone(),
        }
    }

    pub fn d1(&self) -> &DigitSet {
        &self.d1
    }

    pub fn d2(&self) -> &DigitSet {
        &self.d2
    }

    pub fn dim(&self) -> usize {
        self.d1.dim()
    }

    pub fn order(&self) -> i64 {
        self.d1.order()
    }

    /// The loop set `G_a = D1 ∩ (D2 + (n-1)·a)`, sorted, possibly empty.
    pub fn g_set(&self, a: &FaceVector) -> Result<Vec<Vec<i64>>> {
        self.check_dim(a)?;
        let shift: Vec<i64> = a
            .entries()
            .iter()
            .map(|&e| (self.order() - 1) * e as i64)
            .collect();
        Ok(self.intersect_shifted(&shift))
    }

    /// The edge label `G_ab = D1 ∩ (D2 + n·a - b)` for a subface pair
    /// `a ⊑ b`. With `b = a` this is exactly the loop set.
    pub fn g_edge_set(&self, a: &FaceVector, b: &FaceVector) -> Result<Vec<Vec<i64>>> {
        self.check_dim(a)?;
        if !a.is_subface_of(b)? {
            return Err(Error::NotSubface(a.to_string(), b.to_string()));
        }
        let shift: Vec<i64> = a
            .entries()
            .iter()
            .zip(b.entries())
            .map(|(&ea, &eb)| self.order() * ea as i64 - eb as i64)
            .collect();
        Ok(self.intersect_shifted(&shift))
    }

    fn intersect_shifted(&self, shift: &[i64]) -> Vec<Vec<i64>> {
        self.d1
            .digits()
            .iter()
            .filter(|d| {
                let back: Vec<i64> = d.iter().zip(shift).map(|(&c, &s)| c - s).collect();
                self.d2.contains(&back)
            })
            .cloned()
            .collect()
    }

    /// Computes every loop set and edge label, runs the emptiness fixpoint
    /// over vertices in decreasing support order, and prunes dead vertices
    /// and dead edges.
    pub fn structure_graph(&self) -> StructureGraph {
        let k = self.dim();
        let faces = enumerate_face_vectors(k).expect("dimension validated at construction");
        let count = faces.len();
        let loop_sets: Vec<Vec<Vec<i64>>> = faces
            .iter()
            .map(|a| self.g_set(a).expect("same dimension"))
            .collect();

        let mut alive = vec![false; count];
        let mut edges_from: Vec<Vec<GraphEdge>> = vec![Vec::new(); count];
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(faces[i].weight()));

        for idx in order {
            let a = &faces[idx];
            let mut outs = Vec::new();
            for gamma in a.complementary_set() {
                if gamma.is_zero() {
                    continue;
                }
                let b = a.plus(&gamma).expect("complementary by construction");
                let j = b.lex_index();
                if !alive[j] {
                    continue;
                }
                let label = self.g_edge_set(a, &b).expect("subface by construction");
                if !label.is_empty() {
                    outs.push(GraphEdge {
                        from: idx,
                        to: j,
                        label,
                    });
                }
            }
            alive[idx] = !loop_sets[idx].is_empty() || !outs.is_empty();
            if alive[idx] {
                edges_from[idx] = outs;
            }
        }

        let mut edges: Vec<GraphEdge> = edges_from.into_iter().flatten().collect();
        edges.sort_by_key(|e| (e.from, e.to));
        let mut out_edges = vec![Vec::new(); count];
        for (i, e) in edges.iter().enumerate() {
            out_edges[e.from].push(i);
        }

        StructureGraph {
            k,
            n: self.order(),
            faces,
            loop_sets,
            alive,
            edges,
            out_edges,
        }
    }

    fn check_dim(&self, a: &FaceVector) -> Result<()> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), a.dim()));
        }
        Ok(())
    }
}

/// A pruned edge of the structure graph. `from` and `to` are positions in
/// the lexicographic enumeration of face vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    /// The nonempty digit set `G_ab ⊆ D1`.
    pub label: Vec<Vec<i64>>,
}

/// Vertex, edge and loop counts of a pruned structure graph.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub loops: usize,
}

/// The pruned structure graph of an intersection problem.
///
/// Every face vector keeps its raw loop set and an `alive` flag
/// (`F_a ≠ ∅`); the edge list contains only edges between alive vertices
/// with a nonempty label.
#[derive(Clone, Debug)]
pub struct StructureGraph {
    k: usize,
    n: i64,
    faces: Vec<FaceVector>,
    loop_sets: Vec<Vec<Vec<i64>>>,
    alive: Vec<bool>,
    edges: Vec<GraphEdge>,
    out_edges: Vec<Vec<usize>>,
}

impl StructureGraph {
    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> i64 {
        self.n
    }

    /// The face vector at a given lexicographic position.
    pub fn face(&self, idx: usize) -> &FaceVector {
        &self.faces[idx]
    }

    /// All face vectors in lexicographic order, alive or not.
    pub fn faces(&self) -> &[FaceVector] {
        &self.faces
    }

    pub fn is_alive(&self, a: &FaceVector) -> Result<bool> {
        Ok(self.alive[self.index_of(a)?])
    }

    /// The raw loop set `G_a`, kept even for dead vertices.
    pub fn loop_set(&self, a: &FaceVector) -> Result<&[Vec<i64>]> {
        Ok(&self.loop_sets[self.index_of(a)?])
    }

    /// Alive face vectors in lexicographic order.
    pub fn vertices(&self) -> Vec<&FaceVector> {
        self.faces
            .iter()
            .enumerate()
            .filter(|(i, _)| self.alive[*i])
            .map(|(_, a)| a)
            .collect()
    }

    /// The pruned non-loop edges, sorted by (source, target).
    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    /// Alive vertices with a nonempty loop set.
    pub fn loop_vertices(&self) -> Vec<&FaceVector> {
        self.faces
            .iter()
            .enumerate()
            .filter(|(i, _)| self.alive[*i] && !self.loop_sets[*i].is_empty())
            .map(|(_, a)| a)
            .collect()
    }

    pub fn summary(&self) -> GraphSummary {
        GraphSummary {
            vertices: self.alive.iter().filter(|&&b| b).count(),
            edges: self.edges.len(),
            loops: self.loop_vertices().len(),
        }
    }

    /// Every vertex reachable from `a` along pruned edges, including `a`
    /// itself, in lexicographic order.
    pub fn reachable(&self, a: &FaceVector) -> Result<Vec<FaceVector>> {
        let start = self.require_alive(a)?;
        let mut idxs = self.reachable_idx(start);
        idxs.sort_unstable();
        Ok(idxs.into_iter().map(|i| self.faces[i].clone()).collect())
    }

    fn reachable_idx(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.faces.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut out = vec![start];
        while let Some(v) = queue.pop_front() {
            for &ei in &self.out_edges[v] {
                let to = self.edges[ei].to;
                if !seen[to] {
                    seen[to] = true;
                    out.push(to);
                    queue.push_back(to);
                }
            }
        }
        out
    }

    /// `v(a) = max { #G_b : b reachable from a }` and the induced
    /// Hausdorff dimension `log_n v(a)`. At least 1 for alive vertices.
    pub fn dimension(&self, a: &FaceVector) -> Result<DimensionValue> {
        let start = self.require_alive(a)?;
        let nu = self
            .reachable_idx(start)
            .into_iter()
            .map(|i| self.loop_sets[i].len() as u64)
            .max()
            .expect("reachable set contains the start vertex");
        Ok(DimensionValue::new(nu, self.n))
    }

    /// Whether the Hausdorff measure of `F_a` in its own dimension is
    /// finite: true iff no two distinct maximizers of the loop-set
    /// cardinality are connected by a directed path.
    pub fn measure_finite(&self, a: &FaceVector) -> Result<bool> {
        let start = self.require_alive(a)?;
        let nu = self.dimension(a)?.nu as usize;
        let maximizers: Vec<usize> = self
            .reachable_idx(start)
            .into_iter()
            .filter(|&i| self.loop_sets[i].len() == nu)
            .collect();
        for &m in &maximizers {
            let reach = self.reachable_idx(m);
            for &other in &maximizers {
                if other != m && reach.contains(&other) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Total cardinality classification. Dead vertices are `Empty`;
    /// any reachable loop set with two or more digits makes `F_a`
    /// uncountable; otherwise the split between finite and countably
    /// infinite is exactly the finiteness of the counting measure.
    pub fn classify_cardinality(&self, a: &FaceVector) -> Result<CardinalityClass> {
        let idx = self.index_of(a)?;
        if !self.alive[idx] {
            return Ok(CardinalityClass::Empty);
        }
        let dim = self.dimension(a)?;
        if dim.nu >= 2 {
            return Ok(CardinalityClass::Uncountable);
        }
        if self.measure_finite(a)? {
            let mut memo = HashMap::new();
            Ok(CardinalityClass::Finite(self.finite_count(idx, &mut memo)?))
        } else {
            Ok(CardinalityClass::CountablyInfinite)
        }
    }

    /// Sum over all edge chains from `idx` to maximal vertices of the
    /// product of label cardinalities.
    fn finite_count(&self, idx: usize, memo: &mut HashMap<usize, u64>) -> Result<u64> {
        if let Some(&c) = memo.get(&idx) {
            return Ok(c);
        }
        let count = if self.out_edges[idx].is_empty() {
            1
        } else {
            let mut total: u64 = 0;
            for &ei in &self.out_edges[idx] {
                let e = &self.edges[ei];
                let sub = self.finite_count(e.to, memo)?;
                let term = (e.label.len() as u64)
                    .checked_mul(sub)
                    .ok_or(Error::CountOverflow)?;
                total = total.checked_add(term).ok_or(Error::CountOverflow)?;
            }
            total
        };
        memo.insert(idx, count);
        Ok(count)
    }

    /// All points of a finite intersection, deduplicated and sorted.
    ///
    /// Maximal vertices carry a single loop digit `g` and contribute the
    /// fixed point `g/(n-1)`; every other vertex is the union over its
    /// edges of `(points(target) + G_ab) / n`.
    pub fn enumerate_finite_points(&self, a: &FaceVector) -> Result<Vec<ExactPoint>> {
        if !self.classify_cardinality(a)?.is_finite() {
            return Err(Error::NotFinite(a.to_string()));
        }
        let idx = self.index_of(a)?;
        let mut memo: HashMap<usize, Vec<ExactPoint>> = HashMap::new();
        Ok(self.finite_points(idx, &mut memo))
    }

    fn finite_points(&self, idx: usize, memo: &mut HashMap<usize, Vec<ExactPoint>>) -> Vec<ExactPoint> {
        if let Some(pts) = memo.get(&idx) {
            return pts.clone();
        }
        let n = BigInt::from(self.n);
        let mut pts = Vec::new();
        if self.out_edges[idx].is_empty() {
            let g = &self.loop_sets[idx][0];
            pts.push(ExactPoint::from_fractions(g, self.n - 1));
        } else {
            for &ei in &self.out_edges[idx] {
                let e = &self.edges[ei];
                let inner = self.finite_points(e.to, memo);
                for g in &e.label {
                    for pt in &inner {
                        let coords = pt
                            .coords()
                            .iter()
                            .zip(g)
                            .map(|(c, &gi)| (c + BigRational::from(BigInt::from(gi))) / BigRational::from(n.clone()))
                            .collect();
                        pts.push(ExactPoint::new(coords));
                    }
                }
            }
            pts.sort();
            pts.dedup();
        }
        memo.insert(idx, pts.clone());
        pts
    }

    fn index_of(&self, a: &FaceVector) -> Result<usize> {
        if a.dim() != self.k {
            return Err(Error::DimensionMismatch(self.k, a.dim()));
        }
        Ok(a.lex_index())
    }

    fn require_alive(&self, a: &FaceVector) -> Result<usize> {
        let idx = self.index_of(a)?;
        if !self.alive[idx] {
            return Err(Error::NotAlive(a.to_string()));
        }
        Ok(idx)
    }
}

/// Per-face result of a self-intersection analysis.
#[derive(Clone, Debug)]
pub struct SelfIntersectionEntry {
    pub alpha: FaceVector,
    pub cardinality: CardinalityClass,
    /// `None` for dead vertices.
    pub dimension: Option<DimensionValue>,
}

/// Analysis of all face intersections `K ∩ (K + a)`, `a ≠ 0`, of one cube.
#[derive(Clone, Debug)]
pub struct SelfIntersectionReport {
    /// Nonzero face vectors in lexicographic order.
    pub entries: Vec<SelfIntersectionEntry>,
    /// Every nonzero alive vertex is a single point.
    pub one_point: bool,
    /// Every nonzero alive vertex is a finite set.
    pub finite_intersection: bool,
    /// The graph-shape test for the one-point property: the nonzero alive
    /// part of the graph is a disjoint union of chains reachable from the
    /// zero vertex, all edge labels are singletons, terminal loop sets are
    /// singletons and all other loop sets are empty.
    pub chain_one_point: bool,
    /// The graph-shape test for finite intersections: terminal vertices
    /// have singleton loop sets, every other nonzero vertex has an empty
    /// loop set.
    pub chain_finite: bool,
}

/// Classifies every nonzero face intersection of a single cube.
///
/// Opposite faces give the same intersection, so only one representative
/// of each `±a` pair is classified; the translation identity
/// `G_{-a} = G_a - (n-1)·a` is asserted along the way.
pub fn self_intersection_report(d: &DigitSet) -> Result<SelfIntersectionReport> {
    let problem = IntersectionProblem::self_intersection(d)?;
    let graph = problem.structure_graph();
    let faces = enumerate_face_vectors(d.dim())?;

    let mut results: HashMap<FaceVector, (CardinalityClass, Option<DimensionValue>)> =
        HashMap::new();
    for a in faces.iter().filter(|a| !a.is_zero()) {
        let neg = -a;
        if let Some(res) = results.get(&neg) {
            let res = res.clone();
            assert_translation_symmetry(&problem, a);
            results.insert(a.clone(), res);
            continue;
        }
        let cardinality = graph.classify_cardinality(a)?;
        let dimension = if graph.is_alive(a)? {
            Some(graph.dimension(a)?)
        } else {
            None
        };
        results.insert(a.clone(), (cardinality, dimension));
    }

    let entries: Vec<SelfIntersectionEntry> = faces
        .iter()
        .filter(|a| !a.is_zero())
        .map(|a| {
            let (cardinality, dimension) = results[a].clone();
            SelfIntersectionEntry {
                alpha: a.clone(),
                cardinality,
                dimension,
            }
        })
        .collect();

    let alive_entries: Vec<&SelfIntersectionEntry> = entries
        .iter()
        .filter(|e| e.cardinality != CardinalityClass::Empty)
        .collect();
    let one_point = alive_entries
        .iter()
        .all(|e| e.cardinality == CardinalityClass::Finite(1));
    let finite_intersection = alive_entries.iter().all(|e| e.cardinality.is_finite());
    let (chain_one_point, chain_finite) = chain_criteria(&graph);

    Ok(SelfIntersectionReport {
        entries,
        one_point,
        finite_intersection,
        chain_one_point,
        chain_finite,
    })
}

fn assert_translation_symmetry(problem: &IntersectionProblem, a: &FaceVector) {
    let n = problem.order();
    let g_a = problem.g_set(a).expect("same dimension");
    let g_neg = problem.g_set(&-a).expect("same dimension");
    let translated: Vec<Vec<i64>> = {
        let mut t: Vec<Vec<i64>> = g_a
            .iter()
            .map(|d| {
                d.iter()
                    .zip(a.entries())
                    .map(|(&c, &e)| c - (n - 1) * e as i64)
                    .collect()
            })
            .collect();
        t.sort();
        t
    };
    assert_eq!(
        g_neg, translated,
        "loop sets of opposite faces must differ by the face translation"
    );
}

/// Evaluates the two graph-shape criteria.
///
/// The finite criterion looks at every alive nonzero vertex: terminal ones
/// must carry a singleton loop set, the rest an empty one. The one-point
/// criterion looks at the vertices reachable from the zero vertex (the
/// only intersections picked up by adjacent first-level pieces) and asks
/// that they form disjoint chains with singleton data along the way.
fn chain_criteria(graph: &StructureGraph) -> (bool, bool) {
    let zero_idx = FaceVector::zero(graph.dim())
        .expect("dimension validated")
        .lex_index();

    let mut chain_finite = true;
    for (i, _) in graph.faces().iter().enumerate() {
        if i == zero_idx || !graph.alive[i] {
            continue;
        }
        let terminal = graph.out_edges[i].is_empty();
        let loop_len = graph.loop_sets[i].len();
        if loop_len != usize::from(terminal) {
            chain_finite = false;
        }
    }

    let mut chain_one_point = true;
    let reachable: Vec<usize> = graph
        .reachable_idx(zero_idx)
        .into_iter()
        .filter(|&i| i != zero_idx)
        .collect();
    let mut in_degree: HashMap<usize, usize> = HashMap::new();
    for &v in &reachable {
        if graph.out_edges[v].len() > 1 {
            chain_one_point = false;
        }
        for &ei in &graph.out_edges[v] {
            let e = &graph.edges[ei];
            *in_degree.entry(e.to).or_insert(0) += 1;
            if e.label.len() != 1 {
                chain_one_point = false;
            }
        }
        let terminal = graph.out_edges[v].is_empty();
        if graph.loop_sets[v].len() != usize::from(terminal) {
            chain_one_point = false;
        }
    }
    if reachable.iter().any(|v| in_degree.get(v).copied().unwrap_or(0) > 1) {
        chain_one_point = false;
    }

    (chain_one_point, chain_finite)
}
