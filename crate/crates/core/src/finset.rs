//! Skeletal finite sets `(n] = {1..n}`, maps between them, and the quotient
//! engine behind every coequalizer in the crate.
//!
//! Internally elements of `(n]` are the indices `0..n`; the serialized form is
//! 1-based.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A function `(m] -> (n]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinMap {
    target: usize,
    values: Vec<usize>,
}

/// Which hom-set of the skeletal categories of finite sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HomKind {
    All,
    Surjections,
    Bijections,
}

impl FinMap {
    pub fn new(target: usize, values: Vec<usize>) -> Result<Self> {
        if let Some(&v) = values.iter().find(|&&v| v >= target) {
            return Err(Error::Input(format!(
                "map value {} outside target of size {target}",
                v + 1
            )));
        }
        Ok(FinMap { target, values })
    }

    pub fn identity(n: usize) -> Self {
        FinMap {
            target: n,
            values: (0..n).collect(),
        }
    }

    /// The transposition of the first two elements of `(n]`.
    pub fn swap2() -> Self {
        FinMap {
            target: 2,
            values: vec![1, 0],
        }
    }

    pub fn source_size(&self) -> usize {
        self.values.len()
    }

    pub fn target_size(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn is_identity(&self) -> bool {
        self.target == self.values.len() && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_surjection(&self) -> bool {
        let mut hit = vec![false; self.target];
        for &v in &self.values {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injection(&self) -> bool {
        let mut hit = vec![false; self.target];
        for &v in &self.values {
            if hit[v] {
                return false;
            }
            hit[v] = true;
        }
        true
    }

    pub fn is_bijection(&self) -> bool {
        self.values.len() == self.target && self.is_injection()
    }

    pub fn is_kind(&self, kind: HomKind) -> bool {
        match kind {
            HomKind::All => true,
            HomKind::Surjections => self.is_surjection(),
            HomKind::Bijections => self.is_bijection(),
        }
    }

    /// `then ∘ self`: first apply `self`, then `then`.
    pub fn then(&self, then: &FinMap) -> Result<FinMap> {
        compose(self, then)
    }

    pub fn inverse(&self) -> Result<FinMap> {
        if !self.is_bijection() {
            return Err(Error::Input(format!("{self:?} is not a bijection")));
        }
        let mut inv = vec![0; self.target];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v] = i;
        }
        Ok(FinMap {
            target: self.target,
            values: inv,
        })
    }

    /// Image of the map, as a sorted list.
    pub fn image(&self) -> Vec<usize> {
        let mut hit = vec![false; self.target];
        for &v in &self.values {
            hit[v] = true;
        }
        (0..self.target).filter(|&i| hit[i]).collect()
    }

    /// Number of cycles of a permutation.
    pub fn cycle_count(&self) -> usize {
        let n = self.values.len();
        let mut seen = vec![false; n];
        let mut cycles = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.values[i];
            }
        }
        cycles
    }

    /// Precompose a list with this map: `xs ∘ self`, i.e. `[xs[self(0)], ...]`.
    pub fn pull<T: Clone>(&self, xs: &[T]) -> Vec<T> {
        self.values.iter().map(|&v| xs[v].clone()).collect()
    }

    /// The block map of a map `self: (m] -> (n]` against block maps
    /// `blocks[j]: (m_j] -> (n_j]`: it sends `(i, p)` (slot `p` in the copy of
    /// block `self(i)` sitting at position `i`) to the `blocks[self(i)](p)`-th
    /// slot of the `self(i)`-th target block.
    pub fn block_map(&self, blocks: &[FinMap]) -> Result<FinMap> {
        if blocks.len() != self.target {
            return Err(Error::Compose(format!(
                "block map needs {} blocks, got {}",
                self.target,
                blocks.len()
            )));
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut total = 0;
        for b in blocks {
            offsets.push(total);
            total += b.target;
        }
        let mut values = Vec::new();
        for &j in &self.values {
            let b = &blocks[j];
            values.extend(b.values.iter().map(|&p| offsets[j] + p));
        }
        Ok(FinMap {
            target: total,
            values,
        })
    }
}

impl fmt::Debug for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "→{}]", self.target)
    }
}

impl fmt::Display for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        Ok(())
    }
}

/// `g ∘ f`.
pub fn compose(f: &FinMap, g: &FinMap) -> Result<FinMap> {
    if f.target != g.values.len() {
        return Err(Error::Compose(format!(
            "cannot compose {f:?} with {g:?}: {} != {}",
            f.target,
            g.values.len()
        )));
    }
    Ok(FinMap {
        target: g.target,
        values: f.values.iter().map(|&i| g.values[i]).collect(),
    })
}

/// All maps `(m] -> (n]` of the given kind, lexicographic in their value tables.
pub fn enumerate_homs(kind: HomKind, m: usize, n: usize) -> Vec<FinMap> {
    match kind {
        HomKind::Bijections if m != n => return Vec::new(),
        HomKind::Surjections if m < n => return Vec::new(),
        _ => {}
    }
    if m > 0 && n == 0 {
        return Vec::new();
    }
    if kind == HomKind::Bijections {
        return lexicographic_permutations(n);
    }
    let mut out = Vec::new();
    let mut values = vec![0; m];
    loop {
        let f = FinMap {
            target: n,
            values: values.clone(),
        };
        if f.is_kind(kind) {
            out.push(f);
        }
        // odometer, last position fastest
        let mut pos = m;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            values[pos] += 1;
            if values[pos] < n {
                break;
            }
            values[pos] = 0;
        }
    }
}

fn lexicographic_permutations(n: usize) -> Vec<FinMap> {
    let mut values: Vec<usize> = (0..n).collect();
    let mut out = vec![FinMap {
        target: n,
        values: values.clone(),
    }];
    // next permutation in lexicographic order
    loop {
        let Some(i) = (1..n).rev().find(|&i| values[i - 1] < values[i]) else {
            return out;
        };
        let j = (i..n)
            .rev()
            .find(|&j| values[j] > values[i - 1])
            .expect("pivot exists");
        values.swap(i - 1, j);
        values[i..].reverse();
        out.push(FinMap {
            target: n,
            values: values.clone(),
        });
    }
}

pub fn permutations(n: usize) -> Vec<FinMap> {
    enumerate_homs(HomKind::Bijections, n, n)
}

/// An equivalence relation on `0..ground_size`, each element pointing at the
/// least element of its class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    representative: Vec<usize>,
}

impl Partition {
    pub fn ground_size(&self) -> usize {
        self.representative.len()
    }

    pub fn representative(&self, i: usize) -> usize {
        self.representative[i]
    }

    pub fn class_count(&self) -> usize {
        self.representative
            .iter()
            .enumerate()
            .filter(|(i, r)| i == *r)
            .count()
    }

    /// Class representatives in increasing order.
    pub fn representatives(&self) -> Vec<usize> {
        self.representative
            .iter()
            .enumerate()
            .filter(|(i, r)| i == *r)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut by_rep: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, &r) in self.representative.iter().enumerate() {
            by_rep.entry(r).or_default().push(i);
        }
        self.representatives()
            .into_iter()
            .map(|r| by_rep.remove(&r).unwrap())
            .collect()
    }

    /// Index of each element's class in the order of [`Self::representatives`].
    pub fn class_indices(&self) -> Vec<usize> {
        let reps = self.representatives();
        let mut pos = HashMap::new();
        for (k, r) in reps.iter().enumerate() {
            pos.insert(*r, k);
        }
        self.representative.iter().map(|r| pos[r]).collect()
    }

    pub fn same_class(&self, i: usize, j: usize) -> bool {
        self.representative[i] == self.representative[j]
    }
}

/// Union-find with union by size and path compression.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Add a new singleton class and return its index.
    pub fn push(&mut self) -> usize {
        let i = self.parent.len();
        self.parent.push(i);
        self.size.push(1);
        i
    }

    pub fn find(&mut self, i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut i = i;
        while self.parent[i] != root {
            let next = self.parent[i];
            self.parent[i] = root;
            i = next;
        }
        root
    }

    pub fn union(&mut self, i: usize, j: usize) -> bool {
        let (mut a, mut b) = (self.find(i), self.find(j));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    /// Freeze into a partition whose representatives are least class members.
    pub fn into_partition(mut self) -> Partition {
        let n = self.parent.len();
        let mut least: HashMap<usize, usize> = HashMap::new();
        let roots: Vec<usize> = (0..n).map(|i| self.find(i)).collect();
        for (i, &r) in roots.iter().enumerate() {
            least.entry(r).or_insert(i);
        }
        Partition {
            representative: roots.iter().map(|r| least[r]).collect(),
        }
    }
}

/// Smallest equivalence relation on `0..ground_size` containing `pairs`.
pub fn coequalize(ground_size: usize, pairs: &[(usize, usize)]) -> Result<Partition> {
    let mut uf = UnionFind::new(ground_size);
    for &(i, j) in pairs {
        if i >= ground_size || j >= ground_size {
            return Err(Error::Input(format!(
                "pair ({}, {}) outside ground set of size {ground_size}",
                i + 1,
                j + 1
            )));
        }
        uf.union(i, j);
    }
    Ok(uf.into_partition())
}

/// A quotient of an explicit, deterministically ordered list of values.
///
/// Classes are indexed in the order of their least member; the least member
/// (in list order) is the chosen representative.
#[derive(Clone, Debug)]
pub struct Quotient<T: Clone + Eq + Hash> {
    elements: Vec<T>,
    index: HashMap<T, usize>,
    partition: Partition,
    class_of: Vec<usize>,
    reps: Vec<usize>,
}

/// Builder for [`Quotient`].
pub struct QuotientBuilder<T: Clone + Eq + Hash> {
    elements: Vec<T>,
    index: HashMap<T, usize>,
    uf: UnionFind,
}

impl<T: Clone + Eq + Hash + fmt::Debug> QuotientBuilder<T> {
    pub fn new(elements: Vec<T>) -> Self {
        let mut index = HashMap::with_capacity(elements.len());
        let mut uniq = Vec::with_capacity(elements.len());
        for e in elements {
            if !index.contains_key(&e) {
                index.insert(e.clone(), uniq.len());
                uniq.push(e);
            }
        }
        let uf = UnionFind::new(uniq.len());
        QuotientBuilder {
            elements: uniq,
            index,
            uf,
        }
    }

    pub fn contains(&self, x: &T) -> bool {
        self.index.contains_key(x)
    }

    pub fn index_of(&self, x: &T) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Identify two elements; both must belong to the ground list.
    pub fn identify(&mut self, x: &T, y: &T) -> Result<()> {
        let i = self
            .index
            .get(x)
            .ok_or_else(|| Error::Input(format!("{x:?} not in ground set")))?;
        let j = self
            .index
            .get(y)
            .ok_or_else(|| Error::Input(format!("{y:?} not in ground set")))?;
        self.uf.union(*i, *j);
        Ok(())
    }

    /// Index of `x`, adding it to the ground set if it is new.
    pub fn insert(&mut self, x: T) -> usize {
        if let Some(&i) = self.index.get(&x) {
            return i;
        }
        let i = self.uf.push();
        self.index.insert(x.clone(), i);
        self.elements.push(x);
        i
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn identify_indices(&mut self, i: usize, j: usize) {
        self.uf.union(i, j);
    }

    pub fn finish(self) -> Quotient<T> {
        let partition = self.uf.into_partition();
        let reps = partition.representatives();
        let class_of = partition.class_indices();
        Quotient {
            elements: self.elements,
            index: self.index,
            partition,
            class_of,
            reps,
        }
    }
}

impl<T: Clone + Eq + Hash + fmt::Debug> Quotient<T> {
    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn class_of(&self, x: &T) -> Option<usize> {
        self.index.get(x).map(|&i| self.class_of[i])
    }

    pub fn class_of_index(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn representative(&self, class: usize) -> &T {
        &self.elements[self.reps[class]]
    }

    pub fn members(&self, class: usize) -> impl Iterator<Item = &T> + '_ {
        self.elements
            .iter()
            .enumerate()
            .filter(move |(i, _)| self.class_of[*i] == class)
            .map(|(_, x)| x)
    }

    pub fn classes(&self) -> Vec<Vec<&T>> {
        let mut out = vec![Vec::new(); self.reps.len()];
        for (i, x) in self.elements.iter().enumerate() {
            out[self.class_of[i]].push(x);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(target: usize, values: &[usize]) -> FinMap {
        FinMap::new(target, values.to_vec()).unwrap()
    }

    #[test]
    fn identity_composes_to_identity() {
        let id3 = FinMap::identity(3);
        assert_eq!(compose(&id3, &id3).unwrap(), id3);
    }

    #[test]
    fn swap_is_an_involution() {
        let s = FinMap::swap2();
        assert_eq!(compose(&s, &s).unwrap(), FinMap::identity(2));
    }

    #[test]
    fn table_composition() {
        // f = (1↦1, 2↦1), g = (1↦2)
        let f = map(1, &[0, 0]);
        let g = map(2, &[1]);
        let gf = compose(&f, &g).unwrap();
        assert_eq!(gf.values(), &[1, 1]);
        assert_eq!(gf.target_size(), 2);
        assert!(!gf.is_surjection());
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let f = FinMap::identity(2);
        let g = FinMap::identity(3);
        assert!(matches!(compose(&f, &g), Err(Error::Compose(_))));
    }

    #[test]
    fn out_of_range_value_rejected() {
        assert!(FinMap::new(2, vec![0, 2]).is_err());
    }

    #[test]
    fn hom_counts() {
        assert_eq!(enumerate_homs(HomKind::All, 2, 3).len(), 9);
        assert!(enumerate_homs(HomKind::Bijections, 2, 3).is_empty());
        assert_eq!(enumerate_homs(HomKind::Surjections, 2, 2).len(), 2);
        assert_eq!(enumerate_homs(HomKind::All, 0, 0).len(), 1);
        assert_eq!(enumerate_homs(HomKind::All, 0, 2).len(), 1);
        assert!(enumerate_homs(HomKind::All, 1, 0).is_empty());
        assert_eq!(enumerate_homs(HomKind::Surjections, 3, 2).len(), 6);
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(0).len(), 1);
        let filtered: Vec<FinMap> = enumerate_homs(HomKind::All, 3, 3)
            .into_iter()
            .filter(FinMap::is_bijection)
            .collect();
        assert_eq!(permutations(3), filtered);
    }

    #[test]
    fn hom_enumeration_is_lexicographic() {
        let homs = enumerate_homs(HomKind::All, 2, 2);
        let tables: Vec<Vec<usize>> = homs.iter().map(|f| f.values().to_vec()).collect();
        assert_eq!(tables, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn coequalize_examples() {
        let p = coequalize(3, &[]).unwrap();
        assert_eq!(p.class_count(), 3);
        let p = coequalize(3, &[(0, 1)]).unwrap();
        assert_eq!(p.classes(), vec![vec![0, 1], vec![2]]);
        let p = coequalize(4, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(p.classes(), vec![vec![0, 1, 2], vec![3]]);
        assert!(matches!(coequalize(2, &[(0, 5)]), Err(Error::Input(_))));
    }

    #[test]
    fn block_map_of_swap_over_units() {
        let blocks = vec![FinMap::identity(1), FinMap::identity(1)];
        assert_eq!(FinMap::swap2().block_map(&blocks).unwrap(), FinMap::swap2());
        // σ = swap over blocks of sizes 2 and 1: (1,p) reads block 2, (2,p) reads block 1
        let blocks = vec![FinMap::identity(2), FinMap::identity(1)];
        let b = FinMap::swap2().block_map(&blocks).unwrap();
        assert_eq!(b.values(), &[2, 0, 1]);
    }

    #[test]
    fn quotient_picks_least_representatives() {
        let mut qb = QuotientBuilder::new(vec!["c", "a", "b", "d"]);
        qb.identify(&"b", &"c").unwrap();
        let q = qb.finish();
        assert_eq!(q.class_count(), 3);
        assert_eq!(*q.representative(0), "c");
        assert_eq!(q.class_of(&"b"), Some(0));
        assert_eq!(q.class_of(&"a"), Some(1));
    }
}
