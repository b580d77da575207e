//! Digit sets and the fractal cubes they define.
//!
//! A digit set `D` of dimension `k` and order `n` is a nonempty subset of
//! `{0,...,n-1}^k`. It defines a fractal k-cube: the unique compact set `K`
//! with `n*K = K + D`. Structural operations on `K` (faces, projections,
//! sections, refinements) descend to exact operations on `D`, which is what
//! this module implements. No point of `K` is ever materialized here.

use crate::error::{Error, Result};
use crate::face::FaceVector;

/// Largest accepted order for user-constructed digit sets. Refinements may
/// exceed this internally (an order-`n^p` set is still a digit set).
pub const MAX_ORDER: i64 = 1_000_000;

/// Default ceiling on the number of digits a refinement may produce.
pub const DEFAULT_MAX_CELLS: u64 = 10_000_000;

/// A canonical digit set: digits sorted lexicographically, no duplicates.
///
/// Face operations may yield an empty digit list (the corresponding face of
/// the cube misses the attractor); an empty set is representable but cannot
/// be built through [`DigitSet::new`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DigitSet {
    k: usize,
    n: i64,
    digits: Vec<Vec<i64>>,
}

impl DigitSet {
    /// Builds a canonical digit set from an arbitrary digit list.
    /// Duplicates are dropped, digits are sorted.
    pub fn new(k: usize, n: i64, digits: Vec<Vec<i64>>) -> Result<Self> {
        if k == 0 || k > crate::face::MAX_DIMENSION {
            return Err(Error::DimensionOutOfRange(k));
        }
        if n < 2 || n > MAX_ORDER {
            return Err(Error::OrderOutOfRange(n));
        }
        if digits.is_empty() {
            return Err(Error::EmptyDigitSet);
        }
        Self::assemble(k, n, digits)
    }

    /// Internal constructor without the user-facing guards: empty digit
    /// lists and orders above [`MAX_ORDER`] are allowed (refinements), and
    /// `k` may be zero (a fully collapsed face).
    pub(crate) fn assemble(k: usize, n: i64, mut digits: Vec<Vec<i64>>) -> Result<Self> {
        for d in &digits {
            if d.len() != k {
                return Err(Error::DigitArity {
                    digit: digit_token(d),
                    got: d.len(),
                    expected: k,
                });
            }
            if d.iter().any(|&c| c < 0 || c >= n) {
                return Err(Error::DigitOutOfRange {
                    digit: digit_token(d),
                    order: n,
                });
            }
        }
        digits.sort();
        digits.dedup();
        Ok(DigitSet { k, n, digits })
    }

    /// Ambient dimension `k`.
    pub fn dim(&self) -> usize {
        self.k
    }

    /// Order `n`: the cube is scaled by `1/n`. For a refined set this is
    /// `n^p`; the type does not remember `p` separately.
    pub fn order(&self) -> i64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[Vec<i64>] {
        &self.digits
    }

    pub fn contains(&self, digit: &[i64]) -> bool {
        self.digits.binary_search_by(|d| d.as_slice().cmp(digit)).is_ok()
    }

    /// The digits lying on the face named by `a`: coordinate `i` is pinned
    /// to `n-1` where `a_i = 1` and to `0` where `a_i = -1`. The result may
    /// be empty. For the zero vector this is the set itself.
    pub fn face_digits(&self, a: &FaceVector) -> Result<DigitSet> {
        self.check_face(a)?;
        let digits = self
            .digits
            .iter()
            .filter(|d| self.on_face(d, a))
            .cloned()
            .collect();
        Ok(DigitSet {
            k: self.k,
            n: self.n,
            digits,
        })
    }

    /// Translates a face digit set back to the origin and drops the pinned
    /// coordinates, producing a digit set of dimension `k - |a|`.
    ///
    /// Errors unless every digit is pinned to the face extremes on the
    /// support of `a`.
    pub fn normalize_face(&self, a: &FaceVector) -> Result<DigitSet> {
        self.check_face(a)?;
        if self.digits.iter().any(|d| !self.on_face(d, a)) {
            return Err(Error::NotFaceConstant(a.to_string()));
        }
        let keep = a.zero_set();
        let digits = self
            .digits
            .iter()
            .map(|d| keep.iter().map(|&i| d[i]).collect())
            .collect();
        DigitSet::assemble(keep.len(), self.n, digits)
    }

    /// Projects onto the support coordinates of `a`, deduplicating. The
    /// projection of the cube is again a fractal cube, of dimension `|a|`.
    pub fn project(&self, a: &FaceVector) -> Result<DigitSet> {
        self.check_face(a)?;
        let support = a.support();
        if support.is_empty() {
            return Err(Error::EmptySupport(a.to_string()));
        }
        let digits = self
            .digits
            .iter()
            .map(|d| support.iter().map(|&i| d[i]).collect())
            .collect();
        DigitSet::assemble(support.len(), self.n, digits)
    }

    /// The digits whose restriction to the support of `a` equals `value`.
    /// These generate the section of the cube by the plane through the
    /// fixed point `value/(n-1)` parallel to the face named by `a`.
    pub fn section(&self, a: &FaceVector, value: &[i64]) -> Result<DigitSet> {
        self.check_face(a)?;
        let support = a.support();
        if support.is_empty() {
            return Err(Error::EmptySupport(a.to_string()));
        }
        if value.len() != support.len() {
            return Err(Error::DigitArity {
                digit: digit_token(value),
                got: value.len(),
                expected: support.len(),
            });
        }
        let digits: Vec<Vec<i64>> = self
            .digits
            .iter()
            .filter(|d| support.iter().zip(value).all(|(&i, &v)| d[i] == v))
            .cloned()
            .collect();
        if digits.is_empty() {
            return Err(Error::SectionNotAttained(digit_token(value)));
        }
        Ok(DigitSet {
            k: self.k,
            n: self.n,
            digits,
        })
    }

    /// The p-th refinement: all base-`n` compositions of length `p`, as a
    /// digit set of order `n^p`. It has exactly `len()^p` digits.
    pub fn refine(&self, p: u32) -> Result<DigitSet> {
        self.refine_guarded(p, DEFAULT_MAX_CELLS)
    }

    /// [`DigitSet::refine`] with an explicit ceiling on the digit count.
    pub fn refine_guarded(&self, p: u32, max_cells: u64) -> Result<DigitSet> {
        if p == 0 {
            return Err(Error::InvalidDepth);
        }
        let cells = (self.len() as u128)
            .checked_pow(p)
            .ok_or(Error::CellGuardExceeded {
                cells: u128::MAX,
                max: max_cells,
            })?;
        if cells > max_cells as u128 {
            return Err(Error::CellGuardExceeded {
                cells,
                max: max_cells,
            });
        }
        let order = refined_order(self.n, p)?;
        let mut current: Vec<Vec<i64>> = vec![vec![0; self.k]];
        for _ in 0..p {
            let mut next = Vec::with_capacity(current.len() * self.len());
            for prefix in &current {
                for d in &self.digits {
                    next.push(
                        prefix
                            .iter()
                            .zip(d)
                            .map(|(&hi, &lo)| hi * self.n + lo)
                            .collect(),
                    );
                }
            }
            current = next;
        }
        current.sort();
        Ok(DigitSet {
            k: self.k,
            n: order,
            digits: current,
        })
    }

    /// Face digit sets for every nonzero face vector, in lexicographic
    /// order. Empty entries are retained: together they decompose the
    /// boundary of the cube.
    pub fn boundary_digits(&self) -> Vec<(FaceVector, DigitSet)> {
        crate::face::enumerate_face_vectors(self.k)
            .expect("dimension validated at construction")
            .into_iter()
            .filter(|a| !a.is_zero())
            .map(|a| {
                let fd = self.face_digits(&a).expect("same dimension");
                (a, fd)
            })
            .collect()
    }

    fn on_face(&self, d: &[i64], a: &FaceVector) -> bool {
        d.iter().zip(a.entries()).all(|(&c, &e)| match e {
            1 => c == self.n - 1,
            -1 => c == 0,
            _ => true,
        })
    }

    fn check_face(&self, a: &FaceVector) -> Result<()> {
        if a.dim() != self.k {
            return Err(Error::DimensionMismatch(self.k, a.dim()));
        }
        Ok(())
    }
}

/// `n^p` as an `i64`, or an overflow error.
pub(crate) fn refined_order(n: i64, p: u32) -> Result<i64> {
    n.checked_pow(p).ok_or(Error::OrderOverflow { order: n, depth: p })
}

pub(crate) fn digit_token(d: &[i64]) -> String {
    let inner = d
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!("({inner})")
}
