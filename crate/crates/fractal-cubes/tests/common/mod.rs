use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fractal_cubes::reports::{parse_problem, ProblemInput};
use fractal_cubes::{DigitSet, IntersectionProblem};

pub fn data_file(name: &str) -> Vec<u8> {
    let path = format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read(&path).unwrap_or_else(|e| panic!("reading {path}: {e}"))
}

pub fn pair24() -> IntersectionProblem {
    match parse_problem(&data_file("ex1.json")).unwrap() {
        ProblemInput::Pair(p) => p,
        _ => panic!("ex1.json is a pair"),
    }
}

pub fn carpet() -> DigitSet {
    match parse_problem(&data_file("carpet.json")).unwrap() {
        ProblemInput::SelfIntersection(d) => d,
        _ => panic!("carpet.json is a single digit set"),
    }
}

pub fn segment_pair() -> IntersectionProblem {
    match parse_problem(&data_file("seg.json")).unwrap() {
        ProblemInput::Pair(p) => p,
        _ => panic!("seg.json is a pair"),
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random digit set with `len` digits drawn uniformly (duplicates allowed
/// in the draw, so the result may be smaller).
pub fn random_digit_set(rng: &mut ChaCha8Rng, k: usize, n: i64, len: usize) -> DigitSet {
    let digits = (0..len)
        .map(|_| (0..k).map(|_| rng.gen_range(0..n)).collect())
        .collect();
    DigitSet::new(k, n, digits).unwrap()
}

/// A random intersection problem with small digit sets.
pub fn random_problem(
    rng: &mut ChaCha8Rng,
    k: usize,
    n: i64,
    max_len: usize,
) -> IntersectionProblem {
    let len1 = rng.gen_range(1..=max_len);
    let len2 = rng.gen_range(1..=max_len);
    let d1 = random_digit_set(rng, k, n, len1);
    let d2 = random_digit_set(rng, k, n, len2);
    IntersectionProblem::new(d1, d2).unwrap()
}
