//! Finite exact distance alphabets.
//!
//! Every distance value is stored as a nonnegative integer numerator over a
//! common `scale` denominator. Index 0 always holds the value 0.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// Exact rational used for user-facing values.
pub type Rational = Ratio<i64>;

/// Finite, strictly increasing set of admissible distances, starting at 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DistanceAlphabet {
    scale: u64,
    values: Arc<[u64]>,
}

impl DistanceAlphabet {
    /// Builds an alphabet from already-scaled integer values, checking every
    /// invariant. This is the entry point for deserialized data.
    pub fn new(scale: u64, values: Vec<u64>) -> Result<Self> {
        if scale == 0 {
            return Err(Error::InvalidAlphabet("scale must be at least 1".into()));
        }
        if values.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if values[0] != 0 {
            return Err(Error::InvalidAlphabet("first value must be 0".into()));
        }
        if values.len() < 2 {
            return Err(Error::NoNonzeroValue);
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidAlphabet(
                "values must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            scale,
            values: values.into(),
        })
    }

    /// Adjoins 0, sorts, deduplicates and brings every value to the least
    /// common denominator.
    pub fn from_rationals(raw: &[Rational]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if let Some(neg) = raw.iter().find(|r| **r < Rational::from_integer(0)) {
            return Err(Error::NegativeValue(neg.to_string()));
        }
        let scale = raw
            .iter()
            .try_fold(1i64, |acc, r| {
                let l = acc.lcm(r.denom());
                (l > 0).then_some(l)
            })
            .ok_or_else(|| Error::Overflow("common denominator".into()))?;
        let mut values = vec![0u64];
        for r in raw {
            let scaled = r
                .numer()
                .checked_mul(scale / r.denom())
                .ok_or_else(|| Error::Overflow(r.to_string()))?;
            values.push(scaled as u64);
        }
        values.sort_unstable();
        values.dedup();
        Self::new(scale as u64, values)
    }

    /// The alphabet {0, 1, ..., n} with scale 1.
    pub fn uniform_grid(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "uniform grid needs n >= 1".into(),
            ));
        }
        Self::new(1, (0..=n).collect())
    }

    /// Parses CLI shorthand such as `0,1/2,1`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_rationals(&parse_rationals(text)?)
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Scaled value at `index`.
    pub fn value(&self, index: usize) -> u64 {
        self.values[index]
    }

    pub fn checked_value(&self, index: usize) -> Result<u64> {
        self.values
            .get(index)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index,
                len: self.len(),
            })
    }

    /// Index of a scaled value, if it belongs to the alphabet.
    pub fn index_of(&self, value: u64) -> Option<usize> {
        self.values.binary_search(&value).ok()
    }

    pub fn require_index(&self, value: u64) -> Result<usize> {
        self.index_of(value)
            .ok_or_else(|| Error::ValueNotInAlphabet(self.format_scaled(value)))
    }

    /// Index of an exact rational, if it belongs to the alphabet.
    pub fn index_of_rational(&self, r: Rational) -> Option<usize> {
        self.scale_rational(r).and_then(|v| self.index_of(v))
    }

    pub fn require_rational(&self, r: Rational) -> Result<usize> {
        self.index_of_rational(r)
            .ok_or_else(|| Error::ValueNotInAlphabet(r.to_string()))
    }

    /// The scaled integer for `r`, if `r` is a nonnegative multiple of
    /// `1/scale`.
    pub fn scale_rational(&self, r: Rational) -> Option<u64> {
        let num = *r.numer() as i128 * self.scale as i128;
        let den = *r.denom() as i128;
        (num >= 0 && num % den == 0)
            .then(|| u64::try_from(num / den).ok())
            .flatten()
    }

    /// Exact rational for the entry at `index`.
    pub fn rational(&self, index: usize) -> Rational {
        Rational::new(self.values[index] as i64, self.scale as i64)
    }

    /// Index of `values[i] + values[j]` when that sum is itself a member.
    pub fn sum_index(&self, i: usize, j: usize) -> Result<Option<usize>> {
        let a = self.checked_value(i)?;
        let b = self.checked_value(j)?;
        Ok(a.checked_add(b).and_then(|s| self.index_of(s)))
    }

    /// True for `{0, 1, ..., n}` at any scale: an arithmetic progression from 0.
    pub fn is_uniform_grid(&self) -> bool {
        let step = self.values[1];
        self.values
            .iter()
            .enumerate()
            .all(|(i, &v)| v == step * i as u64)
    }

    /// Indices of the nonzero values.
    pub fn nonzero_indices(&self) -> std::ops::Range<usize> {
        1..self.len()
    }

    pub fn format_scaled(&self, value: u64) -> String {
        Rational::new(value as i64, self.scale as i64).to_string()
    }
}

impl fmt::Display for DistanceAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|&v| self.format_scaled(v)).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for DistanceAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DistanceAlphabet[{self}]")
    }
}

/// Parses a comma separated list of rationals (`1`, `1/2`, ...). An empty
/// string yields an empty list.
pub fn parse_rationals(text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_rational)
        .collect()
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let r: Rational = text
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("not a rational: {text:?}")))?;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn adjoins_zero() {
        let a = DistanceAlphabet::from_rationals(&[r(1, 1), r(2, 1)]).unwrap();
        assert_eq!(a.values(), &[0, 1, 2]);
        assert_eq!(a.scale(), 1);
    }

    #[test]
    fn common_denominator() {
        let a = DistanceAlphabet::from_rationals(&[r(1, 2), r(1, 1)]).unwrap();
        assert_eq!(a.values(), &[0, 1, 2]);
        assert_eq!(a.scale(), 2);
        assert_eq!(a.rational(1), r(1, 2));
        assert_eq!(a.index_of_rational(r(1, 1)), Some(2));
    }

    #[test]
    fn rejects_empty_and_negative() {
        assert_eq!(DistanceAlphabet::from_rationals(&[]), Err(Error::EmptyAlphabet));
        assert_eq!(
            DistanceAlphabet::from_rationals(&[r(0, 1)]),
            Err(Error::NoNonzeroValue)
        );
        assert_eq!(
            DistanceAlphabet::from_rationals(&[r(1, 1), r(-1, 3)]),
            Err(Error::NegativeValue("-1/3".into()))
        );
        assert!(DistanceAlphabet::parse("").is_err());
    }

    #[test]
    fn uniform_grids() {
        assert_eq!(DistanceAlphabet::uniform_grid(2).unwrap().values(), &[0, 1, 2]);
        assert_eq!(
            DistanceAlphabet::uniform_grid(3).unwrap().values(),
            &[0, 1, 2, 3]
        );
        assert!(DistanceAlphabet::uniform_grid(0).is_err());
        assert!(DistanceAlphabet::parse("0,1/2,1").unwrap().is_uniform_grid());
        assert!(!DistanceAlphabet::parse("0,1,3").unwrap().is_uniform_grid());
    }

    #[test]
    fn sums() {
        let a = DistanceAlphabet::parse("0,1,2").unwrap();
        assert_eq!(a.sum_index(1, 1).unwrap(), Some(2));
        assert_eq!(a.sum_index(1, 2).unwrap(), None);
        let b = DistanceAlphabet::parse("0,1,3").unwrap();
        assert_eq!(b.sum_index(0, 2).unwrap(), Some(2));
        assert!(matches!(
            b.sum_index(0, 3),
            Err(Error::IndexOutOfRange { index: 3, len: 3 })
        ));
    }

    #[test]
    fn validates_raw_construction() {
        assert!(DistanceAlphabet::new(0, vec![0, 1]).is_err());
        assert!(DistanceAlphabet::new(1, vec![1, 2]).is_err());
        assert!(DistanceAlphabet::new(1, vec![0, 2, 2]).is_err());
        assert!(DistanceAlphabet::new(1, vec![0]).is_err());
    }

    #[test]
    fn display_round_trips() {
        let a = DistanceAlphabet::parse("1/3, 2, 5/6").unwrap();
        assert_eq!(DistanceAlphabet::parse(&a.to_string()).unwrap(), a);
    }
}
