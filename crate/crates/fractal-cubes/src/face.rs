//! The face lattice of the unit cube.
//!
//! Faces of the unit k-cube are indexed by vectors in `{-1, 0, 1}^k`: entry
//! `+1` selects the upper facet along a coordinate, `-1` the lower facet and
//! `0` leaves the coordinate free. The all-zero vector indexes the cube
//! itself, vectors with full support index vertices. Two relations organize
//! the family: the subface order (signs agree on the support) and
//! complementarity (disjoint supports).

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported ambient dimension. Enumeration of the index set is
/// `3^k` and intersection graphs grow like `5^k`; capping at 8 keeps the
/// worst case below 400k edges.
pub const MAX_DIMENSION: usize = 8;

/// An index vector in `{-1, 0, 1}^k` naming one face of the unit k-cube.
///
/// The *support* is the set of coordinates with a nonzero entry; its size is
/// the weight `|a|`. The face named by `a` has dimension `k - |a|`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceVector {
    entries: Vec<i8>,
}

impl FaceVector {
    /// Builds a face vector, validating every entry.
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if entries.is_empty() || entries.len() > MAX_DIMENSION {
            return Err(Error::DimensionOutOfRange(entries.len()));
        }
        if entries.iter().any(|e| !(-1..=1).contains(e)) {
            return Err(Error::InvalidFaceEntry);
        }
        Ok(FaceVector { entries })
    }

    /// The all-zero vector, indexing the cube itself.
    pub fn zero(k: usize) -> Result<Self> {
        FaceVector::new(vec![0; k])
    }

    /// Ambient dimension `k`.
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// Weight `|a|`: the number of nonzero entries.
    pub fn weight(&self) -> usize {
        self.entries.iter().filter(|&&e| e != 0).count()
    }

    /// Coordinates with a nonzero entry.
    pub fn support(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.entries[i] != 0).collect()
    }

    /// Coordinates with a zero entry.
    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.entries[i] == 0).collect()
    }

    /// True iff every nonzero entry of `self` is matched by `other`.
    ///
    /// This is the subface order: the face named by `self` contains the face
    /// named by `other` exactly when this holds.
    pub fn is_subface_of(&self, other: &FaceVector) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .all(|(&a, &b)| a == 0 || a == b))
    }

    /// True iff the supports of `self` and `other` are disjoint.
    pub fn is_complementary_to(&self, other: &FaceVector) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .all(|(&a, &b)| a == 0 || b == 0))
    }

    /// All vectors complementary to `self`, in lexicographic order. There
    /// are `3^(k - |a|)` of them.
    pub fn complementary_set(&self) -> Vec<FaceVector> {
        let free = self.zero_set();
        let mut out = Vec::with_capacity(3usize.pow(free.len() as u32));
        let mut current = vec![0i8; self.dim()];
        fill_free(&free, 0, &mut current, &mut out);
        out
    }

    /// Entrywise sum of complementary vectors. The sum names the common
    /// face of the two operands and has `self` as a subface.
    pub fn plus(&self, other: &FaceVector) -> Result<FaceVector> {
        if !self.is_complementary_to(other)? {
            return Err(Error::NotSubface(self.to_string(), other.to_string()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| a + b)
            .collect();
        Ok(FaceVector { entries })
    }

    /// The entrywise positive part, as an integer translation vector.
    ///
    /// It satisfies `(-a).positive_part() = a.positive_part() - a`.
    pub fn positive_part(&self) -> Vec<i64> {
        self.entries.iter().map(|&e| e.max(0) as i64).collect()
    }

    /// The strict superfaces of `self`, i.e. all `b` with `self` a proper
    /// subface of `b`, in lexicographic order. These index the boundary of
    /// the face named by `self`; a vertex (full support) has none.
    pub fn boundary_vectors(&self) -> Vec<FaceVector> {
        self.complementary_set()
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| {
                let entries = self
                    .entries
                    .iter()
                    .zip(g.entries())
                    .map(|(&a, &b)| a + b)
                    .collect();
                FaceVector { entries }
            })
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Position of `self` in the lexicographic enumeration of `{-1,0,1}^k`.
    pub fn lex_index(&self) -> usize {
        self.entries
            .iter()
            .fold(0usize, |acc, &e| acc * 3 + (e + 1) as usize)
    }

    fn check_dim(&self, other: &FaceVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }
}

fn fill_free(free: &[usize], pos: usize, current: &mut Vec<i8>, out: &mut Vec<FaceVector>) {
    if pos == free.len() {
        out.push(FaceVector {
            entries: current.clone(),
        });
        return;
    }
    for v in [-1i8, 0, 1] {
        current[free[pos]] = v;
        fill_free(free, pos + 1, current, out);
    }
    current[free[pos]] = 0;
}

impl Neg for &FaceVector {
    type Output = FaceVector;

    fn neg(self) -> FaceVector {
        FaceVector {
            entries: self.entries.iter().map(|&e| -e).collect(),
        }
    }
}

impl fmt::Display for FaceVector {
    /// Canonical token form, e.g. `(-1,0,1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for FaceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FaceVector{self}")
    }
}

impl FromStr for FaceVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("face vector token must look like (a1,...,ak), got {s:?}")))?;
        let entries = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i8>()
                    .map_err(|_| Error::Parse(format!("invalid face vector entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        FaceVector::new(entries)
    }
}

/// All `3^k` face vectors in lexicographic order with `-1 < 0 < 1`.
pub fn enumerate_face_vectors(k: usize) -> Result<Vec<FaceVector>> {
    if k == 0 || k > MAX_DIMENSION {
        return Err(Error::DimensionOutOfRange(k));
    }
    let mut out = Vec::with_capacity(3usize.pow(k as u32));
    let mut current = vec![-1i8; k];
    loop {
        out.push(FaceVector {
            entries: current.clone(),
        });
        // lexicographic odometer over {-1,0,1}
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if current[i] < 1 {
                current[i] += 1;
                for e in &mut current[i + 1..] {
                    *e = -1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(entries: &[i8]) -> FaceVector {
        FaceVector::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let a1 = enumerate_face_vectors(1).unwrap();
        assert_eq!(a1, vec![fv(&[-1]), fv(&[0]), fv(&[1])]);

        let a2 = enumerate_face_vectors(2).unwrap();
        assert_eq!(a2.len(), 9);
        assert_eq!(a2.first().unwrap(), &fv(&[-1, -1]));
        assert_eq!(a2.last().unwrap(), &fv(&[1, 1]));
        let mut sorted = a2.clone();
        sorted.sort();
        assert_eq!(a2, sorted);

        assert_eq!(enumerate_face_vectors(3).unwrap().len(), 27);
        assert!(matches!(
            enumerate_face_vectors(0),
            Err(Error::DimensionOutOfRange(0))
        ));
        assert!(matches!(
            enumerate_face_vectors(9),
            Err(Error::DimensionOutOfRange(9))
        ));
    }

    #[test]
    fn lex_index_matches_enumeration() {
        for (i, a) in enumerate_face_vectors(3).unwrap().iter().enumerate() {
            assert_eq!(a.lex_index(), i);
        }
    }

    #[test]
    fn subface_checks_sign_agreement() {
        assert!(fv(&[1, 0]).is_subface_of(&fv(&[1, 1])).unwrap());
        assert!(!fv(&[1, 0]).is_subface_of(&fv(&[-1, 1])).unwrap());
        for b in enumerate_face_vectors(2).unwrap() {
            assert!(fv(&[0, 0]).is_subface_of(&b).unwrap());
        }
        assert!(matches!(
            fv(&[1]).is_subface_of(&fv(&[1, 0])),
            Err(Error::DimensionMismatch(1, 2))
        ));
    }

    #[test]
    fn complementarity_checks_disjoint_support() {
        assert!(fv(&[1, 0]).is_complementary_to(&fv(&[0, -1])).unwrap());
        assert!(!fv(&[1, 0]).is_complementary_to(&fv(&[1, 0])).unwrap());
        for b in enumerate_face_vectors(2).unwrap() {
            assert!(fv(&[0, 0]).is_complementary_to(&b).unwrap());
        }
    }

    #[test]
    fn complementary_set_enumerates_free_coordinates() {
        let set = fv(&[1, 0]).complementary_set();
        assert_eq!(set, vec![fv(&[0, -1]), fv(&[0, 0]), fv(&[0, 1])]);
        assert_eq!(fv(&[1, 1]).complementary_set(), vec![fv(&[0, 0])]);
        assert_eq!(fv(&[0, 0]).complementary_set().len(), 9);
        for a in enumerate_face_vectors(3).unwrap() {
            assert_eq!(
                a.complementary_set().len(),
                3usize.pow((3 - a.weight()) as u32)
            );
        }
    }

    #[test]
    fn positive_part_examples() {
        assert_eq!(fv(&[1, -1, 0]).positive_part(), vec![1, 0, 0]);
        assert_eq!(fv(&[0, 0]).positive_part(), vec![0, 0]);
        let a = fv(&[-1, -1]);
        let lhs = (-&a).positive_part();
        let rhs: Vec<i64> = a
            .positive_part()
            .iter()
            .zip(a.entries())
            .map(|(&p, &e)| p - e as i64)
            .collect();
        assert_eq!(lhs, vec![1, 1]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn boundary_vectors_are_strict_superfaces() {
        assert_eq!(
            fv(&[1, 0]).boundary_vectors(),
            vec![fv(&[1, -1]), fv(&[1, 1])]
        );
        assert_eq!(fv(&[0, 0]).boundary_vectors().len(), 8);
        assert!(fv(&[1, 1]).boundary_vectors().is_empty());
    }

    #[test]
    fn token_round_trip() {
        for a in enumerate_face_vectors(3).unwrap() {
            let token = a.to_string();
            assert_eq!(token.parse::<FaceVector>().unwrap(), a);
        }
        assert_eq!(fv(&[-1, 0, 1]).to_string(), "(-1,0,1)");
        assert!("(2,0)".parse::<FaceVector>().is_err());
        assert!("1,0".parse::<FaceVector>().is_err());
    }

    #[test]
    fn same_zero_set_count_is_two_to_weight() {
        for a in enumerate_face_vectors(4).unwrap() {
            let count = enumerate_face_vectors(4)
                .unwrap()
                .iter()
                .filter(|b| b.zero_set() == a.zero_set())
                .count();
            assert_eq!(count, 1 << a.weight());
        }
    }
}
