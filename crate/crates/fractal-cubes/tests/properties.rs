//! Randomized invariants beyond the acceptance suites, all seeded.

mod common;

use num::{BigInt, One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use fractal_cubes::digits::DEFAULT_MAX_CELLS;
use fractal_cubes::face::enumerate_face_vectors;
use fractal_cubes::oracle::{adjacent_cell_count, estimate_dimension, verify_point};
use fractal_cubes::{CardinalityClass, DigitSet, IntersectionProblem};

use common::{pair24, random_digit_set, random_problem, rng};

#[test]
fn subface_relation_is_a_partial_order() {
    let mut rng = rng(0x0b5e);
    for _ in 0..300 {
        let k = rng.gen_range(1..=4);
        let faces = enumerate_face_vectors(k).unwrap();
        let a = faces.choose(&mut rng).unwrap();
        let b = faces.choose(&mut rng).unwrap();
        let c = faces.choose(&mut rng).unwrap();
        assert!(a.is_subface_of(a).unwrap());
        if a.is_subface_of(b).unwrap() && b.is_subface_of(a).unwrap() {
            assert_eq!(a, b);
        }
        if a.is_subface_of(b).unwrap() && b.is_subface_of(c).unwrap() {
            assert!(a.is_subface_of(c).unwrap());
        }
    }
}

#[test]
fn complementary_sum_is_a_superface() {
    let mut rng = rng(0x0c0d);
    for _ in 0..300 {
        let k = rng.gen_range(1..=4);
        let faces = enumerate_face_vectors(k).unwrap();
        let a = faces.choose(&mut rng).unwrap();
        let b = a.complementary_set().choose(&mut rng).unwrap().clone();
        let sum = a.plus(&b).unwrap();
        assert!(a.is_subface_of(&sum).unwrap());
    }
}

#[test]
fn positive_part_identity_exhaustive() {
    for k in 1..=5usize {
        for a in enumerate_face_vectors(k).unwrap() {
            let lhs = (-&a).positive_part();
            let rhs: Vec<i64> = a
                .positive_part()
                .iter()
                .zip(a.entries())
                .map(|(&p, &e)| p - e as i64)
                .collect();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn refinement_composes_and_counts() {
    let mut rng = rng(0x4ef1);
    for _ in 0..60 {
        let k = rng.gen_range(1..=2);
        let n = rng.gen_range(2..=4i64);
        let len = rng.gen_range(1..=4);
        let d = random_digit_set(&mut rng, k, n, len);
        let p = rng.gen_range(1..=2);
        let q = rng.gen_range(1..=2);
        assert_eq!(
            d.refine(p).unwrap().refine(q).unwrap(),
            d.refine(p * q).unwrap()
        );
        assert_eq!(d.refine(p).unwrap().len(), d.len().pow(p));
    }
}

#[test]
fn projection_commutes_with_refinement() {
    let mut rng = rng(0x9e0);
    for _ in 0..100 {
        let k = rng.gen_range(1..=3);
        let n = rng.gen_range(2..=4i64);
        let len = rng.gen_range(1..=6);
        let d = random_digit_set(&mut rng, k, n, len);
        let p = rng.gen_range(1..=3);
        for a in enumerate_face_vectors(k).unwrap() {
            if a.weight() == 0 {
                continue;
            }
            let lhs = d.refine(p).unwrap().project(&a).unwrap();
            let rhs = d.project(&a).unwrap().refine(p).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn reachable_nu_is_monotone() {
    let mut rng = rng(0x1a);
    for _ in 0..100 {
        let k = rng.gen_range(1..=3);
        let n = rng.gen_range(2..=4i64);
        let graph = random_problem(&mut rng, k, n, 6).structure_graph();
        for a in enumerate_face_vectors(k).unwrap() {
            if !graph.is_alive(&a).unwrap() {
                continue;
            }
            let nu = graph.dimension(&a).unwrap().nu;
            for b in graph.reachable(&a).unwrap() {
                assert!(graph.dimension(&b).unwrap().nu <= nu);
            }
        }
    }
}

#[test]
fn edge_labels_are_contained_in_both_digit_sets() {
    let mut rng = rng(0x1b);
    for _ in 0..100 {
        let k = rng.gen_range(1..=3);
        let n = rng.gen_range(2..=4i64);
        let problem = random_problem(&mut rng, k, n, 6);
        let graph = problem.structure_graph();
        for e in graph.edges() {
            let a = graph.face(e.from);
            let b = graph.face(e.to);
            for digit in &e.label {
                assert!(problem.d1().contains(digit));
                let back: Vec<i64> = digit
                    .iter()
                    .zip(a.entries().iter().zip(b.entries()))
                    .map(|(&c, (&ea, &eb))| c - n * ea as i64 + eb as i64)
                    .collect();
                assert!(problem.d2().contains(&back));
            }
        }
    }
}

/// Re-posing the problem at order n^2 with refined digit sets squares every
/// loop-set cardinality and keeps the alive pattern.
#[test]
fn refined_problem_keeps_the_alive_pattern() {
    let mut rng = rng(0x1c);
    for _ in 0..60 {
        let k = rng.gen_range(1..=2);
        let n = rng.gen_range(2..=4i64);
        let problem = random_problem(&mut rng, k, n, 5);
        let refined = IntersectionProblem::new(
            problem.d1().refine(2).unwrap(),
            problem.d2().refine(2).unwrap(),
        )
        .unwrap();
        let graph = problem.structure_graph();
        let refined_graph = refined.structure_graph();
        for a in enumerate_face_vectors(k).unwrap() {
            assert_eq!(
                refined.g_set(&a).unwrap().len(),
                problem.g_set(&a).unwrap().len().pow(2),
                "loop set at {a}"
            );
            assert_eq!(
                graph.is_alive(&a).unwrap(),
                refined_graph.is_alive(&a).unwrap(),
                "alive flag at {a}"
            );
        }
    }
}

#[test]
fn finite_counts_match_enumeration_and_verify() {
    let mut rng = rng(0x1d);
    let mut finite_seen = 0;
    for _ in 0..200 {
        let k = rng.gen_range(1..=2);
        let n = rng.gen_range(2..=4i64);
        let problem = random_problem(&mut rng, k, n, 4);
        let graph = problem.structure_graph();
        for a in enumerate_face_vectors(k).unwrap() {
            if let CardinalityClass::Finite(count) = graph.classify_cardinality(&a).unwrap() {
                let points = graph.enumerate_finite_points(&a).unwrap();
                assert_eq!(points.len() as u64, count, "count at {a}");
                for pt in &points {
                    assert!(verify_point(&problem, &a, pt), "point {pt} at {a}");
                }
                finite_seen += 1;
            }
        }
    }
    assert!(finite_seen > 20, "too few finite cases sampled: {finite_seen}");
}

/// Once a depth has no adjacent cells, deeper depths cannot have any.
#[test]
fn certification_is_monotone_in_depth() {
    let mut rng = rng(0x1e);
    for _ in 0..100 {
        let k = rng.gen_range(1..=2);
        let n = rng.gen_range(2..=3i64);
        let problem = random_problem(&mut rng, k, n, 4);
        for a in enumerate_face_vectors(k).unwrap() {
            let mut previous_zero = false;
            for depth in 1..=4 {
                let count = adjacent_cell_count(&problem, &a, depth, DEFAULT_MAX_CELLS).unwrap();
                if previous_zero {
                    assert_eq!(count, 0, "adjacency reappeared at depth {depth} for {a}");
                }
                previous_zero = count == 0;
            }
        }
    }
}

#[test]
fn finite_intersections_have_flat_box_counts() {
    let problem = pair24();
    let zero = "(0,0)".parse().unwrap();
    let slope = estimate_dimension(&problem, &zero, 3, 6, DEFAULT_MAX_CELLS).unwrap();
    assert!(slope.abs() < 0.15, "slope {slope}");
}

#[test]
fn enumerated_points_have_expected_denominators() {
    let graph = pair24().structure_graph();
    let zero = "(0,0)".parse().unwrap();
    let points = graph.enumerate_finite_points(&zero).unwrap();
    assert_eq!(points.len(), 24);
    let bound = BigInt::from(36);
    for pt in &points {
        for c in pt.coords() {
            assert!(!c.is_negative() && *c <= num::BigRational::one());
            assert!(
                (&bound % c.denom()).is_zero(),
                "denominator of {pt} does not divide 36"
            );
        }
    }
}

#[test]
fn dimension_value_is_consistent() {
    let mut rng = rng(0x1f);
    for _ in 0..50 {
        let k = rng.gen_range(1..=2);
        let n = rng.gen_range(2..=4i64);
        let graph = random_problem(&mut rng, k, n, 5).structure_graph();
        for a in enumerate_face_vectors(k).unwrap() {
            if graph.is_alive(&a).unwrap() {
                let d = graph.dimension(&a).unwrap();
                assert!(d.nu >= 1);
                assert_eq!(d.value, (d.nu as f64).ln() / (n as f64).ln());
            }
        }
    }
}

#[test]
fn self_reports_agree_with_direct_classification() {
    let mut rng = rng(0x20);
    for _ in 0..60 {
        let k = rng.gen_range(1..=2);
        let n = rng.gen_range(2..=4i64);
        let len = rng.gen_range(1..=5);
        let d = random_digit_set(&mut rng, k, n, len);
        let report = fractal_cubes::graph::self_intersection_report(&d).unwrap();
        let graph = IntersectionProblem::self_intersection(&d)
            .unwrap()
            .structure_graph();
        for entry in &report.entries {
            assert_eq!(
                entry.cardinality,
                graph.classify_cardinality(&entry.alpha).unwrap()
            );
        }
        let alive_all_singletons = report
            .entries
            .iter()
            .filter(|e| e.cardinality != CardinalityClass::Empty)
            .all(|e| e.cardinality == CardinalityClass::Finite(1));
        assert_eq!(report.one_point, alive_all_singletons);
    }
}

#[test]
fn parse_emit_round_trip_on_random_sets() {
    use fractal_cubes::reports::{digit_set_json, digit_set_text, parse_digit_set};
    let mut rng = rng(0x21);
    for _ in 0..100 {
        let k = rng.gen_range(1..=3);
        let n = rng.gen_range(2..=6i64);
        let len = rng.gen_range(1..=8);
        let d = random_digit_set(&mut rng, k, n, len);
        assert_eq!(parse_digit_set(digit_set_json(&d).as_bytes()).unwrap(), d);
        assert_eq!(parse_digit_set(digit_set_text(&d).as_bytes()).unwrap(), d);
    }
}

#[test]
fn boxdim_of_segment_pair_needs_no_guard() {
    // Degenerate pair with comparable maximizers still has N_p >= 1 at
    // every depth; the count stays tiny because the intersection is thin.
    let problem = IntersectionProblem::new(
        DigitSet::new(1, 3, vec![vec![1], vec![2]]).unwrap(),
        DigitSet::new(1, 3, vec![vec![0], vec![2]]).unwrap(),
    )
    .unwrap();
    let zero = "(0)".parse().unwrap();
    for depth in 1..=6 {
        let count = adjacent_cell_count(&problem, &zero, depth, DEFAULT_MAX_CELLS).unwrap();
        assert!(count >= 1);
        assert!(count <= 4 * depth as u64 + 4, "count {count} at {depth}");
    }
}
