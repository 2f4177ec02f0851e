//! The preservation operator on finite families and the computed function
//! sets built on it.
//!
//! `P_X` for a family `X` is the set of endofunctions `f` such that
//! transforming any member of `X` by `f` lands on a member of `X`, compared
//! by labeled equality. Universes of all metrics or ultrametrics on a bounded
//! number of points are handled by predicate instead of membership.

use crate::alphabet::DistanceAlphabet;
use crate::error::{Error, Result};
use crate::functions::GridFunction;
use crate::monoid::{all_endofunctions, is_submonoid, FunctionSet};
use crate::spaces::{enumerate_spaces_up_to, DistanceMatrix, SpaceFamily, SpaceKind};

/// Class of spaces a universe quantifies over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PreservedKind {
    Metric,
    Ultrametric,
}

impl PreservedKind {
    pub fn space_kind(self) -> SpaceKind {
        match self {
            PreservedKind::Metric => SpaceKind::Metric,
            PreservedKind::Ultrametric => SpaceKind::Ultrametric,
        }
    }

    pub fn name(self) -> &'static str {
        self.space_kind().name()
    }
}

impl std::str::FromStr for PreservedKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "metric" => Ok(PreservedKind::Metric),
            "ultrametric" => Ok(PreservedKind::Ultrametric),
            other => Err(Error::Parse(format!(
                "kind must be metric or ultrametric, got {other:?}"
            ))),
        }
    }
}

/// Bounded stand-in for the class of all metric (ultrametric) spaces: every
/// space of the kind on `1..=max_points` labeled points over the alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreservationUniverse {
    pub alphabet: DistanceAlphabet,
    pub max_points: usize,
    pub kind: PreservedKind,
}

impl PreservationUniverse {
    pub fn new(alphabet: DistanceAlphabet, max_points: usize, kind: PreservedKind) -> Result<Self> {
        if max_points < 2 {
            return Err(Error::InvalidParameter(format!(
                "max_points must be at least 2, got {max_points}"
            )));
        }
        Ok(Self {
            alphabet,
            max_points,
            kind,
        })
    }

    /// Triples decide both axioms, so 3 points suffice.
    pub fn with_default_points(alphabet: DistanceAlphabet, kind: PreservedKind) -> Self {
        Self {
            alphabet,
            max_points: 3,
            kind,
        }
    }

    pub fn spaces(&self) -> Result<SpaceFamily> {
        enumerate_spaces_up_to(&self.alphabet, self.max_points, self.kind.space_kind())
    }
}

/// Whether every member of `x` is mapped by `f` onto a member of `x`.
pub fn is_in_p_x(f: &GridFunction, x: &SpaceFamily) -> Result<bool> {
    if f.alphabet() != x.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(preserves_family(f, x))
}

pub(crate) fn preserves_family(f: &GridFunction, x: &SpaceFamily) -> bool {
    x.iter().all(|m| x.contains(&m.transform_unchecked(f)))
}

/// The full preservation set of a family, drawn from all endofunctions.
pub fn compute_p_x(x: &SpaceFamily) -> Result<FunctionSet> {
    let all = all_endofunctions(x.alphabet())?;
    Ok(all.filter(|f| preserves_family(f, x)))
}

/// Functions mapping every space of the universe to a space of the same kind.
pub fn compute_p_universe(u: &PreservationUniverse) -> Result<FunctionSet> {
    let spaces = u.spaces()?;
    let kind = u.kind.space_kind();
    let all = all_endofunctions(&u.alphabet)?;
    Ok(all.filter(|f| spaces.iter().all(|m| kind.accepts(&m.transform_unchecked(f)))))
}

/// Amenable, increasing and subadditive on the grid.
pub fn compute_si(alphabet: &DistanceAlphabet) -> Result<FunctionSet> {
    Ok(all_endofunctions(alphabet)?
        .filter(|f| f.is_amenable() && f.is_increasing() && f.is_subadditive_on_grid()))
}

/// Functions with `f(0) = 0`.
pub fn compute_f0(alphabet: &DistanceAlphabet) -> Result<FunctionSet> {
    Ok(all_endofunctions(alphabet)?.filter(GridFunction::fixes_zero))
}

pub fn compute_am(alphabet: &DistanceAlphabet) -> Result<FunctionSet> {
    Ok(all_endofunctions(alphabet)?.filter(GridFunction::is_amenable))
}

/// `{ transform(base, f) : f in a }` for a submonoid `a` and a metric base
/// space realizing every alphabet value. Its preservation set is exactly `a`.
pub fn mainth_construction(a: &FunctionSet, base: &DistanceMatrix) -> Result<SpaceFamily> {
    if a.alphabet() != base.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    if !is_submonoid(a) {
        return Err(Error::NotSubmonoid(
            "the function set must contain the identity and be closed under composition"
                .into(),
        ));
    }
    if !base.is_metric() {
        return Err(Error::NotMetric);
    }
    if !base.covers_alphabet() {
        return Err(Error::BaseNotCovering);
    }
    SpaceFamily::from_spaces(
        a.alphabet().clone(),
        a.iter().map(|f| base.transform_unchecked(f)),
    )
}
