//! Finite groups and their group algebras `ℂ[G]` with `e_g* = e_{g⁻¹}`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::StarAlgebra;
use crate::linalg::one;
use crate::structure::{analyze, StructureReport};
use crate::{CMatrix, Error, Result};

/// Default bound on the number of elements produced by closure.
pub const DEFAULT_CAP: usize = 10_000;

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

/// All products of `generators` and `identity`, breadth first.
///
/// Fails with [`Error::ClosureCapExceeded`] once more than `cap` elements are
/// found, which is how infinite groups are detected.
pub fn closure<T, F>(generators: &[T], identity: T, mul: F, cap: usize) -> Result<Vec<T>>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let mut seen: HashMap<T, usize> = HashMap::new();
    let mut elems = vec![identity.clone()];
    seen.insert(identity, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in generators {
            let x = mul(&elems[i], g);
            if !seen.contains_key(&x) {
                if elems.len() >= cap {
                    return Err(Error::ClosureCapExceeded { cap });
                }
                seen.insert(x.clone(), elems.len());
                queue.push_back(elems.len());
                elems.push(x);
            }
        }
    }
    Ok(elems)
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    // (a ∘ b)(i) = a(b(i))
    b.iter().map(|&i| a[i]).collect()
}

impl FiniteGroup {
    pub fn from_cayley_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        for row in &table {
            if row.len() != n {
                return Err(Error::NotAGroup("table is not square".into()));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::NotAGroup(format!("entry {x} out of range")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::NotAGroup("no identity".into()))?;
        let mut inverse = vec![0; n];
        for g in 0..n {
            inverse[g] = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| Error::NotAGroup(format!("element {g} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup(format!("({a}·{b})·{c} ≠ {a}·({b}·{c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup { table, identity, inverse })
    }

    /// The permutation group on `degree` points generated by `generators`
    /// (images of `0..degree`).
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>], cap: usize) -> Result<Self> {
        for g in generators {
            let mut sorted = g.clone();
            sorted.sort_unstable();
            if g.len() != degree || sorted != (0..degree).collect::<Vec<_>>() {
                return Err(Error::NotAGroup(format!("{g:?} is not a permutation of {degree} points")));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let elems = closure(generators, identity, |a, b| compose(a, b), cap)?;
        let index: HashMap<&Vec<usize>, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let table = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&compose(a, b)]).collect())
            .collect();
        Self::from_cayley_table(table)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Conjugacy classes, each sorted, ordered by least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut c: Vec<usize> = (0..n).map(|g| self.mul(self.mul(g, x), self.inverse(g))).collect();
            c.sort_unstable();
            c.dedup();
            for &y in &c {
                class_of[y] = classes.len();
            }
            classes.push(c);
        }
        classes
    }

    pub fn class_count(&self) -> usize {
        self.conjugacy_classes().len()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

pub fn cyclic(n: usize) -> FiniteGroup {
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroup::from_cayley_table(table).expect("cyclic group table")
}

/// `S_n` generated by a transposition and an `n`-cycle.
pub fn symmetric(n: usize) -> FiniteGroup {
    if n <= 1 {
        return cyclic(1);
    }
    let mut t: Vec<usize> = (0..n).collect();
    t.swap(0, 1);
    let c: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    FiniteGroup::from_permutations(n, &[t, c], DEFAULT_CAP).expect("symmetric group")
}

/// Symmetries of the regular `n`-gon, of order `2n`.
pub fn dihedral(n: usize) -> FiniteGroup {
    let r: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let s: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    FiniteGroup::from_permutations(n, &[r, s], DEFAULT_CAP).expect("dihedral group")
}

/// `Q₈ = {±1, ±i, ±j, ±k}`; element `2u + s` is `(−1)^s·u` with `u ∈ {1, i, j, k}`.
pub fn quaternion() -> FiniteGroup {
    // unit products: (sign, unit) for u·v
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let table = (0..8)
        .map(|a: usize| {
            (0..8)
                .map(|b: usize| {
                    let (s, u) = UNIT[a / 2][b / 2];
                    2 * u + ((a % 2 + b % 2 + s) % 2)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_cayley_table(table).expect("quaternion table")
}

/// `ℂ[G]` in the basis `{e_g}` with `e_g e_h = e_{gh}` and `e_g* = e_{g⁻¹}`.
pub fn build_group_algebra(g: &FiniteGroup) -> StarAlgebra {
    let n = g.order();
    let mut left = vec![CMatrix::zeros(n, n); n];
    let mut star = CMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            left[a][(g.mul(a, b), b)] = one();
        }
        star[(g.inverse(a), a)] = one();
    }
    let labels = (0..n).map(|i| format!("g{i}")).collect();
    StarAlgebra::new(left, star)
        .expect("group algebra is well-formed")
        .with_labels(labels)
        .expect("label count matches")
}

/// Analyze `ℂ[G]` and check that it is proper, semisimple and Baer, that
/// `Σ n_k² = |G|`, and that the number of blocks equals the number of
/// conjugacy classes.
pub fn certify_group_theorem(g: &FiniteGroup, tol: f64, seed: u64) -> Result<StructureReport> {
    let alg = Arc::new(build_group_algebra(g));
    let report = analyze(&alg, tol, seed)?;
    if !(report.proper && report.semisimple && report.baer) {
        return Err(Error::InternalInconsistency(format!(
            "group algebra reported proper = {}, semisimple = {}, baer = {}",
            report.proper, report.semisimple, report.baer
        )));
    }
    let sum: usize = report.blocks.iter().map(|n| n * n).sum::<usize>() + report.abelian_dim;
    let count = report.blocks.len() + report.abelian_dim;
    let classes = g.class_count();
    if sum != g.order() || count != classes {
        return Err(Error::InternalInconsistency(format!(
            "blocks {:?} + {} linear characters: Σn² = {sum} (|G| = {}), {count} blocks vs {classes} classes",
            report.blocks,
            report.abelian_dim,
            g.order()
        )));
    }
    Ok(report)
}

/// Group interchange format.
///
/// `{"type": "cayley", "table": [[0,1],[1,0]]}` or
/// `{"type": "perm", "degree": 3, "generators": [[1,0,2],[1,2,0]], "cap": 10000}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GroupFile {
    Cayley {
        table: Vec<Vec<usize>>,
    },
    Perm {
        degree: usize,
        generators: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cap: Option<usize>,
    },
}

impl GroupFile {
    pub fn into_group(self) -> Result<FiniteGroup> {
        match self {
            GroupFile::Cayley { table } => FiniteGroup::from_cayley_table(table),
            GroupFile::Perm { degree, generators, cap } => {
                FiniteGroup::from_permutations(degree, &generators, cap.unwrap_or(DEFAULT_CAP))
            }
        }
    }
}

impl FiniteGroup {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: GroupFile = serde_json::from_str(text)?;
        file.into_group()
    }
}

/// Class sizes, keyed by size, for reporting.
pub fn class_size_histogram(g: &FiniteGroup) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for c in g.conjugacy_classes() {
        *out.entry(c.len()).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOL as TOL;

    #[test]
    fn standard_orders() {
        assert_eq!(cyclic(5).order(), 5);
        assert_eq!(symmetric(3).order(), 6);
        assert_eq!(dihedral(4).order(), 8);
        assert_eq!(quaternion().order(), 8);
    }

    #[test]
    fn class_counts() {
        assert_eq!(cyclic(7).class_count(), 7);
        assert_eq!(symmetric(3).class_count(), 3);
        assert_eq!(symmetric(4).class_count(), 5);
        assert_eq!(dihedral(4).class_count(), 5);
        assert_eq!(quaternion().class_count(), 5);
    }

    #[test]
    fn quaternion_relations() {
        let q = quaternion();
        let (i, j, k, minus_one) = (2, 4, 6, 1);
        assert_eq!(q.mul(i, i), minus_one);
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(j, i), k + 1);
        assert!(!q.is_abelian());
    }

    #[test]
    fn non_group_tables_are_rejected() {
        assert!(FiniteGroup::from_cayley_table(vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(FiniteGroup::from_cayley_table(vec![vec![0, 1], vec![1]]).is_err());
        assert!(FiniteGroup::from_cayley_table(vec![vec![0, 2], vec![1, 0]]).is_err());
    }

    #[test]
    fn bad_permutation_is_rejected() {
        assert!(FiniteGroup::from_permutations(3, &[vec![0, 0, 1]], 100).is_err());
    }

    #[test]
    fn cap_detects_infinite_shift() {
        let r = closure(&[1i64], 0i64, |a, b| a + b, 500);
        assert!(matches!(r, Err(Error::ClosureCapExceeded { cap: 500 })));
    }

    #[test]
    fn group_algebra_is_star_algebra() {
        let a = build_group_algebra(&symmetric(3));
        let r = a.validate(TOL);
        assert!(r.passed && r.unital);
    }

    #[test]
    fn s3_theorem() {
        let r = certify_group_theorem(&symmetric(3), TOL, 0).unwrap();
        assert_eq!(r.blocks, vec![2]);
        assert_eq!(r.abelian_dim, 2);
    }

    #[test]
    fn json_formats() {
        let g = FiniteGroup::from_json(r#"{"type": "cayley", "table": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(g.order(), 2);
        let g = FiniteGroup::from_json(r#"{"type": "perm", "degree": 3, "generators": [[1,0,2],[1,2,0]]}"#).unwrap();
        assert_eq!(g.order(), 6);
        let r = FiniteGroup::from_json(r#"{"type": "perm", "degree": 4, "generators": [[1,0,2,3],[1,2,3,0]], "cap": 10}"#);
        assert!(matches!(r, Err(Error::ClosureCapExceeded { cap: 10 })));
    }

    #[test]
    fn histogram_of_s3() {
        let h = class_size_histogram(&symmetric(3));
        assert_eq!(h.get(&1), Some(&1));
        assert_eq!(h.get(&2), Some(&1));
        assert_eq!(h.get(&3), Some(&1));
    }
}
