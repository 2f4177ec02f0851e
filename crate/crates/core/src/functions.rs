//! Endofunctions of a distance alphabet and their predicates.

use std::collections::BTreeMap;
use std::fmt;

use crate::alphabet::DistanceAlphabet;
use crate::error::{Error, Result};

/// Total map from an alphabet to itself, stored as a table of value indices.
///
/// `f(0)` is not forced to be 0: functions that break positivity are needed
/// as obstruction witnesses.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridFunction {
    alphabet: DistanceAlphabet,
    table: Vec<usize>,
}

impl GridFunction {
    /// Builds a function from an index table.
    pub fn from_indices(alphabet: DistanceAlphabet, table: Vec<usize>) -> Result<Self> {
        if table.len() != alphabet.len() {
            return Err(Error::NotTotal(format!(
                "table has {} entries, alphabet has {}",
                table.len(),
                alphabet.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&i| i >= alphabet.len()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: alphabet.len(),
            });
        }
        Ok(Self { alphabet, table })
    }

    /// Builds a function from a table of scaled image values, entry `i`
    /// being the image of `values[i]`.
    pub fn from_image_values(alphabet: DistanceAlphabet, images: &[u64]) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::NotTotal(format!(
                "table has {} entries, alphabet has {}",
                images.len(),
                alphabet.len()
            )));
        }
        let table = images
            .iter()
            .map(|&v| {
                alphabet
                    .index_of(v)
                    .ok_or_else(|| Error::ImageOutsideAlphabet(alphabet.format_scaled(v)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { alphabet, table })
    }

    /// Builds a function from `(preimage, image)` pairs of scaled values.
    pub fn from_pairs(alphabet: DistanceAlphabet, pairs: &[(u64, u64)]) -> Result<Self> {
        let mut map: BTreeMap<usize, usize> = BTreeMap::new();
        for &(x, y) in pairs {
            let xi = alphabet.require_index(x)?;
            let yi = alphabet
                .index_of(y)
                .ok_or_else(|| Error::ImageOutsideAlphabet(alphabet.format_scaled(y)))?;
            if let Some(prev) = map.insert(xi, yi) {
                if prev != yi {
                    return Err(Error::ContradictoryPair(alphabet.format_scaled(x)));
                }
            }
        }
        let table = (0..alphabet.len())
            .map(|i| {
                map.get(&i)
                    .copied()
                    .ok_or_else(|| Error::NotTotal(alphabet.format_scaled(alphabet.value(i))))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { alphabet, table })
    }

    pub fn identity(alphabet: &DistanceAlphabet) -> Self {
        Self {
            alphabet: alphabet.clone(),
            table: (0..alphabet.len()).collect(),
        }
    }

    /// Constant function with scaled value `c`.
    pub fn constant(alphabet: &DistanceAlphabet, c: u64) -> Result<Self> {
        let ci = alphabet.require_index(c)?;
        Ok(Self {
            alphabet: alphabet.clone(),
            table: vec![ci; alphabet.len()],
        })
    }

    /// Swaps 0 and the rational 1, fixing everything else. Needs 1 in the
    /// alphabet.
    pub fn f1(alphabet: &DistanceAlphabet) -> Result<Self> {
        let one = alphabet.require_index(alphabet.scale())?;
        let mut table: Vec<usize> = (0..alphabet.len()).collect();
        table.swap(0, one);
        Ok(Self {
            alphabet: alphabet.clone(),
            table,
        })
    }

    /// `0 -> 0`, `v_bc -> c2`, every other value `-> c1`, with `c2 > 2 c1`.
    /// All arguments are scaled values.
    pub fn two_level_separator(
        alphabet: &DistanceAlphabet,
        c1: u64,
        c2: u64,
        v_bc: u64,
    ) -> Result<Self> {
        let c1i = alphabet.require_index(c1)?;
        let c2i = alphabet.require_index(c2)?;
        let bci = alphabet.require_index(v_bc)?;
        if c1 == 0 || c2 == 0 || v_bc == 0 {
            return Err(Error::InvalidParameter(
                "c1, c2 and v_bc must be nonzero".into(),
            ));
        }
        if c2 <= 2 * c1 {
            return Err(Error::InvalidParameter(format!(
                "need c2 > 2*c1, got c1={} c2={}",
                alphabet.format_scaled(c1),
                alphabet.format_scaled(c2)
            )));
        }
        let table = (0..alphabet.len())
            .map(|i| match i {
                0 => 0,
                i if i == bci => c2i,
                _ => c1i,
            })
            .collect();
        Ok(Self {
            alphabet: alphabet.clone(),
            table,
        })
    }

    pub fn alphabet(&self) -> &DistanceAlphabet {
        &self.alphabet
    }

    /// Index table: entry `i` is the index of the image of `values[i]`.
    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Image index of the value at index `i`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    /// Scaled image of the value at index `i`.
    #[inline]
    pub fn image_value(&self, i: usize) -> u64 {
        self.alphabet.value(self.table[i])
    }

    /// Scaled image values, in alphabet order.
    pub fn image_values(&self) -> Vec<u64> {
        (0..self.table.len()).map(|i| self.image_value(i)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &t)| i == t)
    }

    pub fn fixes_zero(&self) -> bool {
        self.table[0] == 0
    }

    /// `f(t) = 0` exactly when `t = 0`.
    pub fn is_amenable(&self) -> bool {
        self.table
            .iter()
            .enumerate()
            .all(|(i, &t)| (i == 0) == (t == 0))
    }

    /// Images are nondecreasing along the sorted alphabet.
    pub fn is_increasing(&self) -> bool {
        self.table.windows(2).all(|w| w[0] <= w[1])
    }

    /// `f(x + y) <= f(x) + f(y)` whenever `x + y` is in the alphabet.
    pub fn is_subadditive_on_grid(&self) -> bool {
        let n = self.alphabet.len();
        for i in 0..n {
            for j in i..n {
                if let Ok(Some(k)) = self.alphabet.sum_index(i, j) {
                    if self.image_value(k) > self.image_value(i) + self.image_value(j) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Every nonzero triangle triplet maps to a triangle triplet.
    pub fn is_triangle_triplet_preserving(&self) -> bool {
        let n = self.alphabet.len();
        for a in 1..n {
            for b in a..n {
                for c in b..n {
                    let (va, vb, vc) = (
                        self.alphabet.value(a),
                        self.alphabet.value(b),
                        self.alphabet.value(c),
                    );
                    if vc > va + vb {
                        // larger c only makes it worse
                        break;
                    }
                    let mut img = [self.image_value(a), self.image_value(b), self.image_value(c)];
                    img.sort_unstable();
                    if img[2] > img[0] + img[1] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub(crate) fn same_alphabet(&self, other: &GridFunction) -> Result<()> {
        if self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }
}

impl fmt::Debug for GridFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.table.len())
            .map(|i| {
                format!(
                    "{}->{}",
                    self.alphabet.format_scaled(self.alphabet.value(i)),
                    self.alphabet.format_scaled(self.image_value(i))
                )
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
