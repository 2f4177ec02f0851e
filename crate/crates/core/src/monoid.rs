//! Composition algebra on sets of grid functions.
//!
//! Composition is classical: `compose(f, g)(t) = f(g(t))`, so `g` is
//! applied first. Closure and submonoid tests take all ordered pairs and
//! are therefore insensitive to the convention.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::alphabet::DistanceAlphabet;
use crate::error::{Error, Result};
use crate::functions::GridFunction;

/// Default bound on `|D|^|D|` for [`all_endofunctions`].
pub const DEFAULT_MAX_ENDOFUNCTIONS: u64 = 1_000_000;

/// `f . g`, i.e. `t -> f(g(t))`.
pub fn compose(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.same_alphabet(g)?;
    Ok(compose_unchecked(f, g))
}

pub(crate) fn compose_unchecked(f: &GridFunction, g: &GridFunction) -> GridFunction {
    let table = g.table().iter().map(|&t| f.apply(t)).collect();
    GridFunction::from_indices(f.alphabet().clone(), table).expect("composition stays in range")
}

/// Set of endofunctions of one alphabet, ordered by table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FunctionSet {
    alphabet: DistanceAlphabet,
    members: BTreeSet<GridFunction>,
}

impl FunctionSet {
    pub fn new(alphabet: DistanceAlphabet) -> Self {
        Self {
            alphabet,
            members: BTreeSet::new(),
        }
    }

    pub fn from_functions<I>(alphabet: DistanceAlphabet, functions: I) -> Result<Self>
    where
        I: IntoIterator<Item = GridFunction>,
    {
        let mut set = Self::new(alphabet);
        for f in functions {
            set.insert(f)?;
        }
        Ok(set)
    }

    /// Returns whether the function was new.
    pub fn insert(&mut self, f: GridFunction) -> Result<bool> {
        if f.alphabet() != &self.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        Ok(self.members.insert(f))
    }

    pub fn contains(&self, f: &GridFunction) -> bool {
        self.members.contains(f)
    }

    pub fn alphabet(&self) -> &DistanceAlphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GridFunction> {
        self.members.iter()
    }

    pub fn to_vec(&self) -> Vec<GridFunction> {
        self.members.iter().cloned().collect()
    }

    pub fn is_subset(&self, other: &FunctionSet) -> bool {
        self.alphabet == other.alphabet && self.members.is_subset(&other.members)
    }

    /// Members satisfying `keep`.
    pub fn filter<P: FnMut(&GridFunction) -> bool>(&self, mut keep: P) -> FunctionSet {
        FunctionSet {
            alphabet: self.alphabet.clone(),
            members: self.members.iter().filter(|f| keep(f)).cloned().collect(),
        }
    }
}

impl fmt::Debug for FunctionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.iter()).finish()
    }
}

/// Smallest superset containing the identity and closed under composition.
pub fn monoid_closure(s: &FunctionSet) -> FunctionSet {
    let mut out = s.clone();
    out.members.insert(GridFunction::identity(&s.alphabet));
    let mut order: Vec<GridFunction> = out.members.iter().cloned().collect();
    let mut queue: VecDeque<usize> = (0..order.len()).collect();
    while let Some(x) = queue.pop_front() {
        // every pair is visited once its later element is dequeued
        for y in 0..=x {
            let (fx, fy) = (order[x].clone(), order[y].clone());
            for h in [compose_unchecked(&fx, &fy), compose_unchecked(&fy, &fx)] {
                if out.members.insert(h.clone()) {
                    order.push(h);
                    queue.push_back(order.len() - 1);
                }
            }
        }
    }
    out
}

/// Contains the identity and is closed under composition.
pub fn is_submonoid(s: &FunctionSet) -> bool {
    s.contains(&GridFunction::identity(&s.alphabet)) && is_closed(s)
}

fn is_closed(s: &FunctionSet) -> bool {
    s.iter()
        .all(|f| s.iter().all(|g| s.contains(&compose_unchecked(f, g))))
}

/// The neutral element of `t` under composition restricted to `t`, if any.
pub fn local_identity(t: &FunctionSet) -> Option<GridFunction> {
    t.iter()
        .find(|e| {
            t.iter().all(|s| {
                &compose_unchecked(e, s) == s && &compose_unchecked(s, e) == s
            })
        })
        .cloned()
}

/// Submonoid test relative to an ambient set `t` that is itself a monoid
/// under composition: `v` must lie in `t`, hold the identity of `t`, and be
/// closed. Returns `None` when `t` has no identity or is not closed.
pub fn is_submonoid_within(v: &FunctionSet, t: &FunctionSet) -> Option<bool> {
    if !is_closed(t) {
        return None;
    }
    let e = local_identity(t)?;
    Some(v.is_subset(t) && v.contains(&e) && is_closed(v))
}

pub fn intersect(s1: &FunctionSet, s2: &FunctionSet) -> Result<FunctionSet> {
    if s1.alphabet != s2.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    Ok(FunctionSet {
        alphabet: s1.alphabet.clone(),
        members: s1.members.intersection(&s2.members).cloned().collect(),
    })
}

/// Every endofunction of the alphabet, in lexicographic table order.
pub fn all_endofunctions(alphabet: &DistanceAlphabet) -> Result<FunctionSet> {
    all_endofunctions_with_limit(alphabet, DEFAULT_MAX_ENDOFUNCTIONS)
}

pub fn all_endofunctions_with_limit(
    alphabet: &DistanceAlphabet,
    limit: u64,
) -> Result<FunctionSet> {
    let mut out = FunctionSet::new(alphabet.clone());
    for f in endofunctions_iter(alphabet, limit)? {
        out.members.insert(f);
    }
    Ok(out)
}

/// Lazily yields every endofunction in lexicographic table order.
pub fn endofunctions_iter(
    alphabet: &DistanceAlphabet,
    limit: u64,
) -> Result<impl Iterator<Item = GridFunction>> {
    let d = alphabet.len();
    let total = (d as u64)
        .checked_pow(d as u32)
        .filter(|&t| t <= limit)
        .ok_or_else(|| Error::LimitExceeded {
            what: format!("{d}^{d} endofunctions"),
            limit,
        })?;
    let alphabet = alphabet.clone();
    let mut table = vec![0usize; d];
    Ok((0..total).map(move |_| {
        let f = GridFunction::from_indices(alphabet.clone(), table.clone())
            .expect("odometer stays in range");
        for t in table.iter_mut().rev() {
            if *t + 1 < d {
                *t += 1;
                break;
            }
            *t = 0;
        }
        f
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc(s: &str) -> DistanceAlphabet {
        DistanceAlphabet::parse(s).unwrap()
    }

    fn set(a: &DistanceAlphabet, fs: Vec<GridFunction>) -> FunctionSet {
        FunctionSet::from_functions(a.clone(), fs).unwrap()
    }

    #[test]
    fn f1_is_an_involution() {
        let a = abc("0,1,2");
        let f1 = GridFunction::f1(&a).unwrap();
        assert!(compose(&f1, &f1).unwrap().is_identity());
    }

    #[test]
    fn order_is_classical() {
        let a = abc("0,1,2");
        let f = GridFunction::from_image_values(a.clone(), &[0, 2, 2]).unwrap();
        let g = GridFunction::from_image_values(a.clone(), &[0, 1, 1]).unwrap();
        // g first: 2 -> 1 -> 2
        assert_eq!(compose(&f, &g).unwrap().image_values(), vec![0, 2, 2]);
        // f first: 1 -> 2 -> 1
        assert_eq!(compose(&g, &f).unwrap().image_values(), vec![0, 1, 1]);
    }

    #[test]
    fn constants_absorb() {
        let a = abc("0,1,2");
        let c = GridFunction::constant(&a, 1).unwrap();
        for g in all_endofunctions(&a).unwrap().iter() {
            assert_eq!(compose(&c, g).unwrap(), c);
        }
    }

    #[test]
    fn mismatched_alphabets() {
        let f = GridFunction::identity(&abc("0,1,2"));
        let g = GridFunction::identity(&abc("0,1,3"));
        assert_eq!(compose(&f, &g), Err(Error::AlphabetMismatch));
        let s1 = set(&abc("0,1,2"), vec![f]);
        let s2 = set(&abc("0,1,3"), vec![g]);
        assert_eq!(intersect(&s1, &s2), Err(Error::AlphabetMismatch));
    }

    #[test]
    fn closures() {
        let a = abc("0,1,2");
        let f1 = GridFunction::f1(&a).unwrap();
        let id = GridFunction::identity(&a);
        let c = monoid_closure(&set(&a, vec![f1.clone()]));
        assert_eq!(c, set(&a, vec![f1.clone(), id.clone()]));
        assert_eq!(monoid_closure(&FunctionSet::new(a.clone())), set(&a, vec![id.clone()]));
        let one = GridFunction::constant(&a, 1).unwrap();
        assert_eq!(
            monoid_closure(&set(&a, vec![one.clone()])),
            set(&a, vec![one, id])
        );
    }

    #[test]
    fn closure_of_everything_is_everything() {
        let a = abc("0,1,2");
        let all = all_endofunctions(&a).unwrap();
        assert_eq!(monoid_closure(&all), all);
        // a transposition and a cycle generate the symmetric group on 3 letters
        let t = GridFunction::from_image_values(a.clone(), &[1, 0, 2]).unwrap();
        let cyc = GridFunction::from_image_values(a.clone(), &[1, 2, 0]).unwrap();
        assert_eq!(monoid_closure(&set(&a, vec![t, cyc])).len(), 6);
    }

    #[test]
    fn submonoids() {
        let a = abc("0,1,2");
        let f1 = GridFunction::f1(&a).unwrap();
        let id = GridFunction::identity(&a);
        assert!(is_submonoid(&set(&a, vec![f1.clone(), id.clone()])));
        assert!(!is_submonoid(&set(&a, vec![f1.clone()])));
        assert!(is_submonoid(&set(&a, vec![id.clone()])));
        let s = set(&a, vec![f1.clone(), id.clone()]);
        assert_eq!(intersect(&s, &s).unwrap(), s);
        assert_eq!(
            intersect(&set(&a, vec![id.clone()]), &s).unwrap(),
            set(&a, vec![id])
        );
    }

    #[test]
    fn relative_identity() {
        let a = abc("0,1,2");
        // {zero} is a monoid on its own whose identity is the zero function
        let zero = GridFunction::constant(&a, 0).unwrap();
        let t = set(&a, vec![zero.clone()]);
        assert_eq!(local_identity(&t), Some(zero));
        assert_eq!(is_submonoid_within(&t, &t), Some(true));
        assert!(!is_submonoid(&t));
    }

    #[test]
    fn universe_sizes() {
        assert_eq!(all_endofunctions(&abc("0,1")).unwrap().len(), 4);
        assert_eq!(all_endofunctions(&abc("0,1,2")).unwrap().len(), 27);
        assert_eq!(all_endofunctions(&abc("0,1,2,3")).unwrap().len(), 256);
        assert!(matches!(
            all_endofunctions(&DistanceAlphabet::uniform_grid(7).unwrap()),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn universe_order_is_lexicographic() {
        let a = abc("0,1");
        let tables: Vec<Vec<usize>> = all_endofunctions(&a)
            .unwrap()
            .iter()
            .map(|f| f.table().to_vec())
            .collect();
        assert_eq!(tables, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }
}
