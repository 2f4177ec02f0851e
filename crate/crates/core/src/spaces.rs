//! Finite labeled spaces given by symmetric distance matrices.
//!
//! A [`DistanceMatrix`] carries no metric axioms of its own: images of
//! metrics under arbitrary functions (nonzero diagonals, zero off-diagonal
//! entries) must be representable. Validity is checked by predicates.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::alphabet::DistanceAlphabet;
use crate::error::{Error, Result};
use crate::functions::GridFunction;

/// Upper bound on the number of points accepted by [`enumerate_spaces`].
pub const DEFAULT_MAX_ENUM_POINTS: usize = 5;

/// Upper bound on the number of candidate matrices one enumeration may visit.
pub const DEFAULT_MAX_ENUM_CANDIDATES: u64 = 10_000_000;

/// Symmetric `n x n` matrix of alphabet indices over labeled points `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DistanceMatrix {
    alphabet: DistanceAlphabet,
    n: usize,
    entries: Vec<usize>,
}

impl DistanceMatrix {
    /// Row-major index matrix, checked for shape, range and symmetry.
    pub fn from_index_rows(alphabet: DistanceAlphabet, rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("a space needs at least one point".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &e in row {
                if e >= alphabet.len() {
                    return Err(Error::IndexOutOfRange {
                        index: e,
                        len: alphabet.len(),
                    });
                }
                entries.push(e);
            }
        }
        let m = Self {
            alphabet,
            n,
            entries,
        };
        for i in 0..n {
            for j in (i + 1)..n {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::InvalidMatrix(format!(
                        "not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(m)
    }

    /// Row-major matrix of scaled values.
    pub fn from_value_rows(alphabet: DistanceAlphabet, rows: &[Vec<u64>]) -> Result<Self> {
        let idx = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&v| alphabet.require_index(v))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_index_rows(alphabet, &idx)
    }

    /// Zero diagonal with the given upper-triangle indices in row-major order.
    fn from_upper(alphabet: DistanceAlphabet, n: usize, upper: &[usize]) -> Self {
        let mut entries = vec![0; n * n];
        let mut it = upper.iter();
        for i in 0..n {
            for j in (i + 1)..n {
                let e = *it.next().expect("upper triangle length");
                entries[i * n + j] = e;
                entries[j * n + i] = e;
            }
        }
        Self {
            alphabet,
            n,
            entries,
        }
    }

    pub fn alphabet(&self) -> &DistanceAlphabet {
        &self.alphabet
    }

    pub fn points(&self) -> usize {
        self.n
    }

    /// Alphabet index of `d(i, j)`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.n + j]
    }

    /// Scaled value of `d(i, j)`.
    #[inline]
    pub fn value(&self, i: usize, j: usize) -> u64 {
        self.alphabet.value(self.get(i, j))
    }

    pub fn index_rows(&self) -> Vec<Vec<usize>> {
        self.entries.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn value_rows(&self) -> Vec<Vec<u64>> {
        self.entries
            .chunks(self.n)
            .map(|row| row.iter().map(|&e| self.alphabet.value(e)).collect())
            .collect()
    }

    fn positive(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| (self.get(i, j) == 0) == (i == j))
        })
    }

    /// Positivity plus the triangle inequality.
    pub fn is_metric(&self) -> bool {
        if !self.positive() {
            return false;
        }
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let dij = self.value(i, j);
                for k in 0..self.n {
                    if k != i && k != j && dij > self.value(i, k) + self.value(k, j) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Positivity plus the strong triangle inequality.
    pub fn is_ultrametric(&self) -> bool {
        if !self.positive() {
            return false;
        }
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let dij = self.get(i, j);
                for k in 0..self.n {
                    if k != i && k != j && dij > self.get(i, k).max(self.get(k, j)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The common off-diagonal value of a discrete metric. One-point spaces
    /// are discrete with no such value.
    pub fn discrete_value(&self) -> Option<Option<u64>> {
        if !self.is_metric() {
            return None;
        }
        if self.n == 1 {
            return Some(None);
        }
        let k = self.get(0, 1);
        let uniform = (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j) == k));
        uniform.then(|| Some(self.alphabet.value(k)))
    }

    pub fn is_discrete(&self) -> bool {
        self.discrete_value().is_some()
    }

    /// Restriction to the listed points, in the given order.
    pub fn subspace(&self, points: &[usize]) -> DistanceMatrix {
        let n = points.len();
        let mut entries = Vec::with_capacity(n * n);
        for &p in points {
            for &q in points {
                entries.push(self.get(p, q));
            }
        }
        Self {
            alphabet: self.alphabet.clone(),
            n,
            entries,
        }
    }

    /// Whether every three-point subspace is discrete. Only defined for
    /// metrics.
    pub fn all_three_point_subspaces_discrete(&self) -> Result<bool> {
        if !self.is_metric() {
            return Err(Error::NotMetric);
        }
        for a in 0..self.n {
            for b in (a + 1)..self.n {
                for c in (b + 1)..self.n {
                    if !self.subspace(&[a, b, c]).is_discrete() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Pointwise image `f(d(i, j))`, diagonal included.
    pub fn transform(&self, f: &GridFunction) -> Result<DistanceMatrix> {
        if f.alphabet() != &self.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        Ok(self.transform_unchecked(f))
    }

    pub(crate) fn transform_unchecked(&self, f: &GridFunction) -> DistanceMatrix {
        Self {
            alphabet: self.alphabet.clone(),
            n: self.n,
            entries: self.entries.iter().map(|&e| f.apply(e)).collect(),
        }
    }

    /// Scaled values occurring in the matrix, diagonal included.
    pub fn distance_set(&self) -> BTreeSet<u64> {
        self.entries.iter().map(|&e| self.alphabet.value(e)).collect()
    }

    /// Whether every alphabet value occurs as a distance.
    pub fn covers_alphabet(&self) -> bool {
        let seen: HashSet<usize> = self.entries.iter().copied().collect();
        seen.len() == self.alphabet.len()
    }
}

impl fmt::Debug for DistanceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.value_rows())
    }
}

/// Finite ultrametric `d(p_i, p_j) = a_max(i, j)` on points `p_0..p_k`,
/// realizing every nonzero alphabet value.
pub fn delhomme_space(alphabet: &DistanceAlphabet) -> DistanceMatrix {
    let n = alphabet.len();
    let mut entries = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                entries[i * n + j] = i.max(j);
            }
        }
    }
    DistanceMatrix {
        alphabet: alphabet.clone(),
        n,
        entries,
    }
}

/// `n` points at pairwise distance `k` (a scaled nonzero value).
pub fn discrete_space(alphabet: &DistanceAlphabet, n: usize, k: u64) -> Result<DistanceMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("a space needs at least one point".into()));
    }
    let ki = alphabet.require_index(k)?;
    if ki == 0 {
        return Err(Error::InvalidParameter("discrete distance must be nonzero".into()));
    }
    let upper = vec![ki; n * (n - 1) / 2];
    Ok(DistanceMatrix::from_upper(alphabet.clone(), n, &upper))
}

/// Which matrices an enumeration keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    Metric,
    Ultrametric,
    Discrete,
    /// Zero diagonal and nonzero off-diagonal entries, no triangle condition.
    Raw,
}

impl SpaceKind {
    pub fn accepts(self, m: &DistanceMatrix) -> bool {
        match self {
            SpaceKind::Metric => m.is_metric(),
            SpaceKind::Ultrametric => m.is_ultrametric(),
            SpaceKind::Discrete => m.is_discrete(),
            SpaceKind::Raw => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::Metric => "metric",
            SpaceKind::Ultrametric => "ultrametric",
            SpaceKind::Discrete => "discrete",
            SpaceKind::Raw => "raw",
        }
    }
}

impl std::str::FromStr for SpaceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "metric" => Ok(SpaceKind::Metric),
            "ultrametric" => Ok(SpaceKind::Ultrametric),
            "discrete" => Ok(SpaceKind::Discrete),
            "raw" => Ok(SpaceKind::Raw),
            other => Err(Error::Parse(format!("unknown space kind {other:?}"))),
        }
    }
}

/// Set of labeled spaces sharing one alphabet, ordered by point count and
/// then row-major entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpaceFamily {
    alphabet: DistanceAlphabet,
    spaces: BTreeSet<DistanceMatrix>,
}

impl SpaceFamily {
    pub fn new(alphabet: DistanceAlphabet) -> Self {
        Self {
            alphabet,
            spaces: BTreeSet::new(),
        }
    }

    pub fn from_spaces<I>(alphabet: DistanceAlphabet, spaces: I) -> Result<Self>
    where
        I: IntoIterator<Item = DistanceMatrix>,
    {
        let mut fam = Self::new(alphabet);
        for m in spaces {
            fam.insert(m)?;
        }
        Ok(fam)
    }

    /// Returns whether the space was new.
    pub fn insert(&mut self, m: DistanceMatrix) -> Result<bool> {
        if m.alphabet != self.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        Ok(self.spaces.insert(m))
    }

    pub fn contains(&self, m: &DistanceMatrix) -> bool {
        self.spaces.contains(m)
    }

    pub fn alphabet(&self) -> &DistanceAlphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &DistanceMatrix> {
        self.spaces.iter()
    }

    pub fn to_vec(&self) -> Vec<DistanceMatrix> {
        self.spaces.iter().cloned().collect()
    }

    pub fn extend(&mut self, other: SpaceFamily) -> Result<()> {
        if other.alphabet != self.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        self.spaces.extend(other.spaces);
        Ok(())
    }
}

impl fmt::Debug for SpaceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.spaces.iter()).finish()
    }
}

/// All labeled matrices on points `0..n` with zero diagonal and nonzero
/// off-diagonal entries, filtered by `kind`, in lexicographic order.
pub fn enumerate_spaces(
    alphabet: &DistanceAlphabet,
    n: usize,
    kind: SpaceKind,
) -> Result<SpaceFamily> {
    enumerate_spaces_with_limits(
        alphabet,
        n,
        kind,
        DEFAULT_MAX_ENUM_POINTS,
        DEFAULT_MAX_ENUM_CANDIDATES,
    )
}

pub fn enumerate_spaces_with_limits(
    alphabet: &DistanceAlphabet,
    n: usize,
    kind: SpaceKind,
    max_points: usize,
    max_candidates: u64,
) -> Result<SpaceFamily> {
    if n == 0 {
        return Err(Error::InvalidParameter("a space needs at least one point".into()));
    }
    if n > max_points {
        return Err(Error::LimitExceeded {
            what: format!("point count {n}"),
            limit: max_points as u64,
        });
    }
    let pairs = n * (n - 1) / 2;
    let digits = alphabet.len() - 1;
    let candidates = (digits as u64)
        .checked_pow(pairs as u32)
        .filter(|&c| c <= max_candidates)
        .ok_or_else(|| Error::LimitExceeded {
            what: format!("{digits}^{pairs} candidate matrices"),
            limit: max_candidates,
        })?;
    let mut family = SpaceFamily::new(alphabet.clone());
    let mut upper = vec![1usize; pairs];
    for _ in 0..candidates {
        let m = DistanceMatrix::from_upper(alphabet.clone(), n, &upper);
        if kind.accepts(&m) {
            family.spaces.insert(m);
        }
        // odometer, last pair least significant
        for d in upper.iter_mut().rev() {
            if *d < digits {
                *d += 1;
                break;
            }
            *d = 1;
        }
    }
    Ok(family)
}

/// Union of [`enumerate_spaces`] over sizes `1..=max_points`.
pub fn enumerate_spaces_up_to(
    alphabet: &DistanceAlphabet,
    max_points: usize,
    kind: SpaceKind,
) -> Result<SpaceFamily> {
    let mut family = SpaceFamily::new(alphabet.clone());
    for n in 1..=max_points {
        family.extend(enumerate_spaces(alphabet, n, kind)?)?;
    }
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc(s: &str) -> DistanceAlphabet {
        DistanceAlphabet::parse(s).unwrap()
    }

    fn m(a: &DistanceAlphabet, rows: &[&[u64]]) -> DistanceMatrix {
        let rows: Vec<Vec<u64>> = rows.iter().map(|r| r.to_vec()).collect();
        DistanceMatrix::from_value_rows(a.clone(), &rows).unwrap()
    }

    #[test]
    fn rejects_malformed() {
        let a = abc("0,1,2");
        assert!(DistanceMatrix::from_value_rows(a.clone(), &[]).is_err());
        assert!(DistanceMatrix::from_value_rows(a.clone(), &[vec![0, 1], vec![2, 0]]).is_err());
        assert!(DistanceMatrix::from_value_rows(a.clone(), &[vec![0, 1], vec![1]]).is_err());
        assert!(DistanceMatrix::from_value_rows(a, &[vec![0, 3], vec![3, 0]]).is_err());
    }

    #[test]
    fn metric_predicate() {
        let a = abc("0,1,2");
        assert!(m(&a, &[&[0, 1], &[1, 0]]).is_metric());
        assert!(m(&a, &[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]).is_metric());
        assert!(!m(&a, &[&[0, 0], &[0, 0]]).is_metric());
        assert!(!m(&a, &[&[1]]).is_metric());
        let b = abc("0,1,3");
        assert!(!m(&b, &[&[0, 1, 3], &[1, 0, 1], &[3, 1, 0]]).is_metric());
    }

    #[test]
    fn ultrametric_predicate() {
        let a = abc("0,1,2");
        assert!(m(&a, &[&[0, 1, 2], &[1, 0, 2], &[2, 2, 0]]).is_ultrametric());
        assert!(!m(&a, &[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]).is_ultrametric());
        assert!(m(&a, &[&[0]]).is_ultrametric());
    }

    #[test]
    fn discrete_predicate() {
        let a = abc("0,1,2");
        let two = m(&a, &[&[0, 2], &[2, 0]]);
        assert_eq!(two.discrete_value(), Some(Some(2)));
        assert!(!m(&a, &[&[0, 1, 2], &[1, 0, 2], &[2, 2, 0]]).is_discrete());
        assert_eq!(m(&a, &[&[0]]).discrete_value(), Some(None));
    }

    #[test]
    fn three_point_reduction() {
        let a = abc("0,1,2");
        assert!(discrete_space(&a, 4, 1)
            .unwrap()
            .all_three_point_subspaces_discrete()
            .unwrap());
        assert!(!m(&a, &[&[0, 1, 2], &[1, 0, 2], &[2, 2, 0]])
            .all_three_point_subspaces_discrete()
            .unwrap());
        assert!(m(&a, &[&[0, 2], &[2, 0]])
            .all_three_point_subspaces_discrete()
            .unwrap());
        assert_eq!(
            m(&a, &[&[0, 0], &[0, 0]]).all_three_point_subspaces_discrete(),
            Err(Error::NotMetric)
        );
    }

    #[test]
    fn transforms() {
        let a = abc("0,1,2");
        let sp = m(&a, &[&[0, 1], &[1, 0]]);
        let f = GridFunction::from_image_values(a.clone(), &[0, 2, 2]).unwrap();
        assert_eq!(sp.transform(&f).unwrap(), m(&a, &[&[0, 2], &[2, 0]]));
        let f1 = GridFunction::f1(&a).unwrap();
        let img = sp.transform(&f1).unwrap();
        assert_eq!(img.value_rows(), vec![vec![1, 0], vec![0, 1]]);
        assert!(!img.is_metric());
        assert_eq!(sp.transform(&GridFunction::identity(&a)).unwrap(), sp);
        let other = GridFunction::identity(&abc("0,1,3"));
        assert_eq!(sp.transform(&other), Err(Error::AlphabetMismatch));
    }

    #[test]
    fn delhomme() {
        let a = abc("0,1,2");
        let d = delhomme_space(&a);
        assert_eq!(d.value_rows(), vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 0]]);
        assert!(d.is_ultrametric());
        assert_eq!(d.distance_set(), BTreeSet::from([0, 1, 2]));
        assert!(d.covers_alphabet());
        assert_eq!(delhomme_space(&abc("0,5")).value_rows(), vec![vec![0, 5], vec![5, 0]]);
    }

    #[test]
    fn discrete_spaces() {
        let a = abc("0,1,3");
        assert_eq!(
            discrete_space(&a, 2, 1).unwrap().value_rows(),
            vec![vec![0, 1], vec![1, 0]]
        );
        let three = discrete_space(&a, 3, 3).unwrap();
        assert_eq!(three.discrete_value(), Some(Some(3)));
        assert_eq!(discrete_space(&a, 1, 3).unwrap().value_rows(), vec![vec![0]]);
        assert!(discrete_space(&a, 2, 0).is_err());
        assert!(discrete_space(&a, 2, 2).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let a = abc("0,1,2");
        assert_eq!(enumerate_spaces(&a, 3, SpaceKind::Metric).unwrap().len(), 8);
        assert_eq!(enumerate_spaces(&a, 3, SpaceKind::Ultrametric).unwrap().len(), 5);
        assert_eq!(enumerate_spaces(&a, 2, SpaceKind::Metric).unwrap().len(), 2);
        assert!(matches!(
            enumerate_spaces(&a, 6, SpaceKind::Raw),
            Err(Error::LimitExceeded { .. })
        ));
        let b = abc("0,1,3");
        // (1,1,3) and its relabelings violate the triangle inequality
        assert_eq!(enumerate_spaces(&b, 3, SpaceKind::Metric).unwrap().len(), 5);
        assert_eq!(enumerate_spaces(&b, 3, SpaceKind::Raw).unwrap().len(), 8);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let a = abc("0,1,2");
        let fam = enumerate_spaces(&a, 3, SpaceKind::Raw).unwrap();
        let first = fam.iter().next().unwrap();
        let last = fam.iter().last().unwrap();
        assert_eq!(first.value_rows(), vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        assert_eq!(last.value_rows(), vec![vec![0, 2, 2], vec![2, 0, 2], vec![2, 2, 0]]);
    }

    #[test]
    fn distance_sets() {
        let a = abc("0,1,2");
        assert_eq!(m(&a, &[&[0, 1], &[1, 0]]).distance_set(), BTreeSet::from([0, 1]));
        assert_eq!(m(&a, &[&[0]]).distance_set(), BTreeSet::from([0]));
    }

    #[test]
    fn family_rejects_foreign_alphabet() {
        let mut fam = SpaceFamily::new(abc("0,1,2"));
        assert!(fam.insert(delhomme_space(&abc("0,1,2"))).unwrap());
        assert!(!fam.insert(delhomme_space(&abc("0,1,2"))).unwrap());
        assert_eq!(fam.insert(delhomme_space(&abc("0,1"))), Err(Error::AlphabetMismatch));
    }
}
