//! Boolean set algebras used as the domain of step functions.

use std::fmt::Debug;

use num_integer::Integer;

use crate::{Error, Result};

/// A Boolean algebra of subsets of a fixed universe.
pub trait SetAlgebra: Clone + Debug + PartialEq {
    type Set: Clone + Debug + PartialEq;

    fn universe(&self) -> Self::Set;
    fn empty(&self) -> Self::Set;
    fn complement(&self, s: &Self::Set) -> Self::Set;
    fn intersect(&self, a: &Self::Set, b: &Self::Set) -> Self::Set;
    fn is_empty(&self, s: &Self::Set) -> bool;
    fn contains(&self, s: &Self::Set, point: usize) -> bool;

    fn union(&self, a: &Self::Set, b: &Self::Set) -> Self::Set {
        self.complement(&self.intersect(&self.complement(a), &self.complement(b)))
    }

    fn difference(&self, a: &Self::Set, b: &Self::Set) -> Self::Set {
        self.intersect(a, &self.complement(b))
    }
}

/// All subsets of `{0, …, n−1}` as bitmasks, `n ≤ 64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiniteSets {
    n: usize,
}

impl FiniteSets {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::Malformed(format!("finite universe size {n} outside 1..=64")));
        }
        Ok(FiniteSets { n })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn singleton(&self, i: usize) -> u64 {
        assert!(i < self.n, "point {i} outside universe of size {}", self.n);
        1 << i
    }

    pub fn from_points(&self, points: &[usize]) -> u64 {
        points.iter().fold(0, |acc, &i| acc | self.singleton(i))
    }
}

impl SetAlgebra for FiniteSets {
    type Set = u64;

    fn universe(&self) -> u64 {
        self.mask()
    }

    fn empty(&self) -> u64 {
        0
    }

    fn complement(&self, s: &u64) -> u64 {
        !s & self.mask()
    }

    fn intersect(&self, a: &u64, b: &u64) -> u64 {
        a & b
    }

    fn union(&self, a: &u64, b: &u64) -> u64 {
        a | b
    }

    fn is_empty(&self, s: &u64) -> bool {
        *s == 0
    }

    fn contains(&self, s: &u64, point: usize) -> bool {
        point < self.n && (s >> point) & 1 == 1
    }
}

/// An ultimately periodic subset of `ℕ = {0, 1, 2, …}`: membership is
/// `pre[i]` for `i < pre.len()` and `cycle[(i − pre.len()) mod cycle.len()]`
/// afterwards. Kept with minimal period and then minimal preperiod, so
/// equality of values is equality of sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicSet {
    pre: Vec<bool>,
    cycle: Vec<bool>,
}

impl PeriodicSet {
    pub fn new(pre: Vec<bool>, cycle: Vec<bool>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::Malformed("periodic set needs a non-empty cycle".into()));
        }
        Ok(Self::normalized(pre, cycle))
    }

    /// `{0, n, 2n, …}`.
    pub fn multiples_of(n: usize) -> Self {
        assert!(n > 0, "period must be positive");
        let mut cycle = vec![false; n];
        cycle[0] = true;
        Self::normalized(Vec::new(), cycle)
    }

    /// A finite subset.
    pub fn finite(points: &[usize]) -> Self {
        let len = points.iter().map(|p| p + 1).max().unwrap_or(0);
        let mut pre = vec![false; len];
        for &p in points {
            pre[p] = true;
        }
        Self::normalized(pre, vec![false])
    }

    pub fn contains(&self, i: usize) -> bool {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.cycle[(i - self.pre.len()) % self.cycle.len()]
        }
    }

    pub fn preperiod(&self) -> usize {
        self.pre.len()
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    fn normalized(mut pre: Vec<bool>, mut cycle: Vec<bool>) -> Self {
        let p = cycle.len();
        if let Some(d) = (1..=p).find(|d| p.is_multiple_of(*d) && (0..p).all(|i| cycle[i] == cycle[i % d])) {
            cycle.truncate(d);
        }
        while let Some(&last) = pre.last() {
            if last != *cycle.last().expect("cycle is non-empty") {
                break;
            }
            pre.pop();
            cycle.rotate_right(1);
        }
        PeriodicSet { pre, cycle }
    }

    /// Pointwise combination of two sets.
    fn zip_with(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Self {
        let l = self.pre.len().max(other.pre.len());
        let p = self.cycle.len().lcm(&other.cycle.len());
        let pre = (0..l).map(|i| f(self.contains(i), other.contains(i))).collect();
        let cycle = (l..l + p).map(|i| f(self.contains(i), other.contains(i))).collect();
        Self::normalized(pre, cycle)
    }
}

/// Ultimately periodic subsets of `ℕ`: an infinite Boolean algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct PeriodicSets;

impl SetAlgebra for PeriodicSets {
    type Set = PeriodicSet;

    fn universe(&self) -> PeriodicSet {
        PeriodicSet { pre: Vec::new(), cycle: vec![true] }
    }

    fn empty(&self) -> PeriodicSet {
        PeriodicSet { pre: Vec::new(), cycle: vec![false] }
    }

    fn complement(&self, s: &PeriodicSet) -> PeriodicSet {
        PeriodicSet {
            pre: s.pre.iter().map(|b| !b).collect(),
            cycle: s.cycle.iter().map(|b| !b).collect(),
        }
    }

    fn intersect(&self, a: &PeriodicSet, b: &PeriodicSet) -> PeriodicSet {
        a.zip_with(b, |x, y| x && y)
    }

    fn union(&self, a: &PeriodicSet, b: &PeriodicSet) -> PeriodicSet {
        a.zip_with(b, |x, y| x || y)
    }

    fn is_empty(&self, s: &PeriodicSet) -> bool {
        s.pre.is_empty() && s.cycle == [false]
    }

    fn contains(&self, s: &PeriodicSet, point: usize) -> bool {
        s.contains(point)
    }
}
