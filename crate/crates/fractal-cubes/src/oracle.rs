//! Brute-force verification, independent of the structure graph.
//!
//! Everything here works directly from the defining set equation
//! `n*K = K + D`: depth-p cell covers, adjacency counts between covers,
//! emptiness certificates, box-counting dimension estimates and an exact
//! membership decision for rational points. None of it consults loop sets,
//! edge labels or the pruned graph, so agreement between the two routes is
//! a real cross-check.

use std::collections::HashMap;

use num::{BigInt, Integer, One, Signed};

use crate::digits::DigitSet;
use crate::error::{Error, Result};
use crate::face::FaceVector;
use crate::graph::{ExactPoint, IntersectionProblem};

/// The depth-p cover of a fractal cube by cells of side `n^-p`: exactly the
/// p-th refinement of its digit set, read as cell coordinates.
#[derive(Clone, Debug)]
pub struct CellCover {
    pub depth: u32,
    pub cells: DigitSet,
}

impl CellCover {
    /// Number of cells along each axis, `n^p`.
    pub fn side(&self) -> i64 {
        self.cells.order()
    }
}

/// Builds the depth-p cell cover of a cube.
pub fn cell_cover(d: &DigitSet, depth: u32, max_cells: u64) -> Result<CellCover> {
    Ok(CellCover {
        depth,
        cells: d.refine_guarded(depth, max_cells)?,
    })
}

/// Outcome of an emptiness certification run.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Emptiness {
    /// No adjacent cell pair exists at this depth, so the intersection is
    /// certainly empty.
    Certified(u32),
    /// Adjacent cells persisted through the maximum depth; nothing proved.
    Unknown,
}

/// Counts cells `c1` in the depth-p cover of `K1` that touch some cell of
/// the depth-p cover of `K2 + a` (closed cells, so a coordinate gap of 1
/// still counts). A zero count certifies that the intersection is empty; a
/// nonempty intersection yields a positive count at every depth.
pub fn adjacent_cell_count(
    problem: &IntersectionProblem,
    a: &FaceVector,
    depth: u32,
    max_cells: u64,
) -> Result<u64> {
    scan(problem, a, depth, max_cells, false)
}

/// Runs [`adjacent_cell_count`] for `depth = 1, 2, ...` and reports the
/// first depth with a zero count, or `Unknown` after `max_depth`.
pub fn certify_empty(
    problem: &IntersectionProblem,
    a: &FaceVector,
    max_depth: u32,
    max_cells: u64,
) -> Result<Emptiness> {
    if max_depth == 0 {
        return Err(Error::InvalidDepth);
    }
    for depth in 1..=max_depth {
        if scan(problem, a, depth, max_cells, true)? == 0 {
            return Ok(Emptiness::Certified(depth));
        }
    }
    Ok(Emptiness::Unknown)
}

/// Least-squares slope of `ln N_p` against `p * ln n` over a depth range:
/// an empirical box-counting estimate of the intersection dimension.
pub fn estimate_dimension(
    problem: &IntersectionProblem,
    a: &FaceVector,
    depth_lo: u32,
    depth_hi: u32,
    max_cells: u64,
) -> Result<f64> {
    let table = count_table(problem, a, depth_lo, depth_hi, max_cells)?;
    let ln_n = (problem.order() as f64).ln();
    let points: Vec<(f64, f64)> = table
        .iter()
        .map(|&(p, count)| (p as f64 * ln_n, (count as f64).ln()))
        .collect();
    let len = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / len;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / len;
    let cov = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum::<f64>();
    let var = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum::<f64>();
    Ok(cov / var)
}

/// The table of `(p, N_p)` adjacency counts over a depth range. Errors if
/// any count is zero: the intersection is empty and there is no dimension
/// to estimate.
pub fn count_table(
    problem: &IntersectionProblem,
    a: &FaceVector,
    depth_lo: u32,
    depth_hi: u32,
    max_cells: u64,
) -> Result<Vec<(u32, u64)>> {
    if depth_lo == 0 || depth_lo >= depth_hi {
        return Err(Error::InvalidDepthRange(depth_lo, depth_hi));
    }
    let mut out = Vec::new();
    for depth in depth_lo..=depth_hi {
        let count = scan(problem, a, depth, max_cells, false)?;
        if count == 0 {
            return Err(Error::EmptyAtDepth(depth));
        }
        out.push((depth, count));
    }
    Ok(out)
}

/// Exact membership of a rational point in the attractor of a digit set.
///
/// A point belongs to the cube iff it admits an infinite valid digit
/// expansion, i.e. iff the map `x -> n*x - d` can be iterated forever while
/// staying inside the unit cube for some choice of digits. Scaling by the
/// common denominator makes the state space finite, so the search reduces
/// to finding a reachable cycle.
pub fn exact_member(d: &DigitSet, x: &ExactPoint) -> bool {
    assert_eq!(
        d.dim(),
        x.dim(),
        "point dimension must match the digit set dimension"
    );
    if !x.in_unit_cube() {
        return false;
    }
    let q: BigInt = x
        .coords()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let start: Vec<BigInt> = x
        .coords()
        .iter()
        .map(|c| c.numer() * (&q / c.denom()))
        .collect();
    let n = BigInt::from(d.order());
    let scaled_digits: Vec<Vec<BigInt>> = d
        .digits()
        .iter()
        .map(|dig| dig.iter().map(|&c| &q * BigInt::from(c)).collect())
        .collect();

    #[derive(Clone, Copy)]
    enum Color {
        Gray,
        Done(bool),
    }
    struct Frame {
        state: Vec<BigInt>,
        next: usize,
        found: bool,
    }

    let mut colors: HashMap<Vec<BigInt>, Color> = HashMap::new();
    colors.insert(start.clone(), Color::Gray);
    let mut stack = vec![Frame {
        state: start,
        next: 0,
        found: false,
    }];
    while let Some(top) = stack.last_mut() {
        if top.found || top.next == scaled_digits.len() {
            let Frame { state, found, .. } = stack.pop().expect("stack is nonempty");
            colors.insert(state, Color::Done(found));
            match stack.last_mut() {
                Some(parent) => parent.found = parent.found || found,
                None => return found,
            }
            continue;
        }
        let digit = &scaled_digits[top.next];
        top.next += 1;
        let mut child = Vec::with_capacity(digit.len());
        let mut valid = true;
        for (xi, di) in top.state.iter().zip(digit) {
            let w = &n * xi - di;
            if w.is_negative() || w > q {
                valid = false;
                break;
            }
            child.push(w);
        }
        if !valid {
            continue;
        }
        match colors.get(&child) {
            // Hitting a state on the current path closes a cycle: the
            // expansion can be repeated forever.
            Some(Color::Gray) => top.found = true,
            Some(Color::Done(b)) => top.found = top.found || *b,
            None => {
                colors.insert(child.clone(), Color::Gray);
                stack.push(Frame {
                    state: child,
                    next: 0,
                    found: false,
                });
            }
        }
    }
    unreachable!("the root frame returns before the stack drains");
}

/// Membership of `x` in `K1 ∩ (K2 + a)`: two cube memberships, the second
/// after translating back by `a`.
pub fn verify_point(problem: &IntersectionProblem, a: &FaceVector, x: &ExactPoint) -> bool {
    assert_eq!(
        problem.dim(),
        x.dim(),
        "point dimension must match the problem dimension"
    );
    assert_eq!(problem.dim(), a.dim(), "face vector dimension must match");
    if !exact_member(problem.d1(), x) {
        return false;
    }
    let back = x.minus_face(a);
    back.in_unit_cube() && exact_member(problem.d2(), &back)
}

/// Scans the depth-p cover of `K1` for cells adjacent to the shifted cover
/// of `K2`. The cover is never materialized: cells are enumerated as digit
/// compositions with subtrees pruned as soon as a pinned face coordinate
/// leaves the extreme track, and membership of a probe cell in the other
/// cover is decided digit-by-digit from its base-n expansion.
fn scan(
    problem: &IntersectionProblem,
    a: &FaceVector,
    depth: u32,
    max_cells: u64,
    stop_at_first: bool,
) -> Result<u64> {
    if a.dim() != problem.dim() {
        return Err(Error::DimensionMismatch(problem.dim(), a.dim()));
    }
    if depth == 0 {
        return Err(Error::InvalidDepth);
    }
    for count in [problem.d1().len(), problem.d2().len()] {
        let cells = (count as u128).checked_pow(depth).unwrap_or(u128::MAX);
        if cells > max_cells as u128 {
            return Err(Error::CellGuardExceeded {
                cells,
                max: max_cells,
            });
        }
    }
    let n = problem.order();
    let side = crate::digits::refined_order(n, depth)?;
    let k = problem.dim();
    let depth = depth as usize;

    // Powers n^0 .. n^depth for the face-coordinate prune.
    let mut pows = Vec::with_capacity(depth + 1);
    pows.push(1i64);
    for _ in 0..depth {
        pows.push(pows.last().unwrap() * n);
    }

    // Probe cells differ from c1 by at most 1 per coordinate. Support
    // coordinates are forced: a pinned c1 coordinate admits exactly one
    // in-range neighbour on the shifted side.
    let zero_coords = a.zero_set();
    let mut fixed = vec![0i64; k];
    for (i, &e) in a.entries().iter().enumerate() {
        match e {
            1 => fixed[i] = 0,
            -1 => fixed[i] = side - 1,
            _ => {}
        }
    }
    let mut offsets: Vec<Vec<i64>> = vec![vec![]];
    for _ in &zero_coords {
        offsets = offsets
            .into_iter()
            .flat_map(|base| {
                [0i64, -1, 1].iter().map(move |&t| {
                    let mut o = base.clone();
                    o.push(t);
                    o
                })
            })
            .collect();
    }

    let mut state = Scan {
        d1: problem.d1().digits(),
        d2: problem.d2(),
        n,
        side,
        depth,
        k,
        face: a.entries().to_vec(),
        pows,
        zero_coords,
        fixed,
        offsets,
        prefixes: vec![[0i64; 8]; depth + 1],
        stop_at_first,
        count: 0,
        found: false,
    };
    state.recurse(0);
    Ok(state.count)
}

struct Scan<'a> {
    d1: &'a [Vec<i64>],
    d2: &'a DigitSet,
    n: i64,
    side: i64,
    depth: usize,
    k: usize,
    face: Vec<i8>,
    pows: Vec<i64>,
    zero_coords: Vec<usize>,
    fixed: Vec<i64>,
    offsets: Vec<Vec<i64>>,
    prefixes: Vec<[i64; 8]>,
    stop_at_first: bool,
    count: u64,
    found: bool,
}

impl Scan<'_> {
    fn recurse(&mut self, level: usize) {
        if level == self.depth {
            if self.adjacent() {
                self.count += 1;
                self.found = true;
            }
            return;
        }
        let target = self.pows[level + 1] - 1;
        for di in 0..self.d1.len() {
            let mut ok = true;
            let prev = self.prefixes[level];
            for i in 0..self.k {
                let v = prev[i] * self.n + self.d1[di][i];
                self.prefixes[level + 1][i] = v;
                match self.face[i] {
                    1 => ok &= v == target,
                    -1 => ok &= v == 0,
                    _ => {}
                }
            }
            if !ok {
                continue;
            }
            self.recurse(level + 1);
            if self.found && self.stop_at_first {
                return;
            }
        }
    }

    fn adjacent(&self) -> bool {
        let c1 = &self.prefixes[self.depth];
        'probe: for offset in &self.offsets {
            let mut y = [0i64; 8];
            for i in 0..self.k {
                y[i] = self.fixed[i];
            }
            for (t, &i) in offset.iter().zip(&self.zero_coords) {
                let v = c1[i] + t;
                if v < 0 || v >= self.side {
                    continue 'probe;
                }
                y[i] = v;
            }
            if self.in_refined(&y) {
                return true;
            }
        }
        false
    }

    /// Membership of a cell in the depth-p cover of the second cube: every
    /// base-n digit tuple of the cell coordinates must be a digit of D2.
    fn in_refined(&self, cell: &[i64; 8]) -> bool {
        let mut rest = *cell;
        let mut tuple = [0i64; 8];
        for _ in 0..self.depth {
            for i in 0..self.k {
                tuple[i] = rest[i] % self.n;
                rest[i] /= self.n;
            }
            if !self.d2.contains(&tuple[..self.k]) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::DEFAULT_MAX_CELLS;
    use crate::testdata::{carpet, full_cube, pair24};

    fn fv(entries: &[i8]) -> FaceVector {
        FaceVector::new(entries.to_vec()).unwrap()
    }

    fn carpet_self() -> IntersectionProblem {
        IntersectionProblem::self_intersection(&carpet()).unwrap()
    }

    fn full_self(k: usize, n: i64) -> IntersectionProblem {
        IntersectionProblem::self_intersection(&full_cube(k, n)).unwrap()
    }

    #[test]
    fn cell_counts() {
        let p = pair24();
        assert_eq!(
            adjacent_cell_count(&p, &fv(&[1, 1]), 1, DEFAULT_MAX_CELLS).unwrap(),
            0
        );

        let c = carpet_self();
        for depth in 1..=4 {
            assert_eq!(
                adjacent_cell_count(&c, &fv(&[1, 0]), depth, DEFAULT_MAX_CELLS).unwrap(),
                3u64.pow(depth)
            );
        }

        let f = full_self(2, 2);
        for depth in 1..=3 {
            assert_eq!(
                adjacent_cell_count(&f, &fv(&[0, 0]), depth, DEFAULT_MAX_CELLS).unwrap(),
                4u64.pow(depth)
            );
        }

        assert!(matches!(
            adjacent_cell_count(&c, &fv(&[1, 0]), 9, 1000),
            Err(Error::CellGuardExceeded { .. })
        ));
    }

    #[test]
    fn emptiness_certificates() {
        let p = pair24();
        assert_eq!(
            certify_empty(&p, &fv(&[1, 0]), 4, DEFAULT_MAX_CELLS).unwrap(),
            Emptiness::Certified(1)
        );
        assert_eq!(
            certify_empty(&p, &fv(&[0, 0]), 4, DEFAULT_MAX_CELLS).unwrap(),
            Emptiness::Unknown
        );

        let d1 = DigitSet::new(2, 3, vec![vec![0, 0]]).unwrap();
        let d2 = DigitSet::new(2, 3, vec![vec![0, 0]]).unwrap();
        let p = IntersectionProblem::new(d1, d2).unwrap();
        assert_eq!(
            certify_empty(&p, &fv(&[1, 1]), 3, DEFAULT_MAX_CELLS).unwrap(),
            Emptiness::Certified(1)
        );
    }

    #[test]
    fn dimension_estimates() {
        let c = carpet_self();
        let slope = estimate_dimension(&c, &fv(&[1, 0]), 1, 4, DEFAULT_MAX_CELLS).unwrap();
        assert!((slope - 1.0).abs() < 1e-9);

        let f = full_self(2, 2);
        let slope = estimate_dimension(&f, &fv(&[0, 0]), 1, 3, DEFAULT_MAX_CELLS).unwrap();
        assert!((slope - 2.0).abs() < 1e-9);

        let p = pair24();
        assert!(matches!(
            estimate_dimension(&p, &fv(&[1, 0]), 1, 3, DEFAULT_MAX_CELLS),
            Err(Error::EmptyAtDepth(1))
        ));
        assert!(matches!(
            estimate_dimension(&p, &fv(&[0, 0]), 3, 3, DEFAULT_MAX_CELLS),
            Err(Error::InvalidDepthRange(3, 3))
        ));
    }

    #[test]
    fn exact_membership() {
        let cantor = DigitSet::new(1, 3, vec![vec![0], vec![2]]).unwrap();
        assert!(exact_member(&cantor, &ExactPoint::from_fractions(&[1], 4)));
        assert!(!exact_member(&cantor, &ExactPoint::from_fractions(&[1], 2)));
        assert!(exact_member(&cantor, &ExactPoint::from_fractions(&[1], 1)));
        assert!(!exact_member(&cantor, &ExactPoint::from_fractions(&[5], 4)));

        // Fixed points d0/(n-1) belong to the cube exactly when d0 is a digit.
        for d0 in 0..3 {
            let inside = exact_member(&cantor, &ExactPoint::from_fractions(&[d0], 2));
            assert_eq!(inside, d0 == 0 || d0 == 2);
        }
    }

    #[test]
    fn point_verification() {
        let p = pair24();
        assert!(verify_point(
            &p,
            &fv(&[-1, -1]),
            &ExactPoint::from_fractions(&[0, 0], 1)
        ));
        assert!(!verify_point(
            &p,
            &fv(&[0, 0]),
            &ExactPoint::from_fractions(&[1, 1], 2)
        ));

        let d1 = DigitSet::new(1, 3, vec![vec![1], vec![2]]).unwrap();
        let d2 = DigitSet::new(1, 3, vec![vec![0], vec![2]]).unwrap();
        let p = IntersectionProblem::new(d1, d2).unwrap();
        assert!(verify_point(
            &p,
            &fv(&[0]),
            &ExactPoint::from_fractions(&[26], 27)
        ));
    }

    #[test]
    fn cover_matches_refinement() {
        let cantor = DigitSet::new(1, 3, vec![vec![0], vec![2]]).unwrap();
        let cover = cell_cover(&cantor, 2, DEFAULT_MAX_CELLS).unwrap();
        assert_eq!(cover.side(), 9);
        assert_eq!(cover.cells, cantor.refine(2).unwrap());
    }
}
