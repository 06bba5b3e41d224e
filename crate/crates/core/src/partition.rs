//! The g-partition of the power set: families of subsets on which every
//! feasible code's set function `g` must take a common value.
//!
//! Seeds come from the security equalities `g(B_i) = g(B_i \ {j})`, lifted by
//! monotonicity and submodularity to `g(T ∪ B_i) = g(T ∪ B_i \ {j})` for any
//! `T ⊆ A_i ∪ {i}`. Overlapping seeds are merged with union-find; everything
//! untouched lands in the remaining class, which is always last.
//!
//! Construction visits `Σ_i 2^{|A_i|+1}` seed families (for receivers with a
//! nonempty prohibited list), each with `|P_i| + 1` members.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::subset::SubsetId;

/// `N(i, T) = {T ∪ B_i} ∪ {T ∪ B_i \ {j} : j ∈ P_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedFamily {
    pub receiver: usize,
    pub extension: SubsetId,
    /// `T ∪ B_i` first, then one member per `j ∈ P_i` in ascending `j`.
    pub members: Vec<SubsetId>,
}

pub fn seed_family(p: &Problem, i: usize, extension: SubsetId) -> Result<SeedFamily> {
    if p.prohibited(i).is_empty() {
        return Err(Error::NoProhibited { receiver: i + 1 });
    }
    let b = p.interfering_set(i);
    if !extension.is_disjoint(b) || !extension.is_subset_of(p.full()) {
        return Err(Error::BadExtension { receiver: i + 1, set: extension.to_string() });
    }
    let top = extension.union(b);
    let members = std::iter::once(top)
        .chain(p.prohibited(i).iter().map(|j| top.without(j)))
        .collect();
    Ok(SeedFamily { receiver: i, extension, members })
}

/// Calls `f` on every seed family of `p`, receivers ascending, extensions
/// ascending by bitmask.
pub fn for_each_seed(p: &Problem, mut f: impl FnMut(SeedFamily)) {
    for i in 0..p.n() {
        if p.prohibited(i).is_empty() {
            continue;
        }
        let allowed = p.interfering_set(i).complement(p.n());
        for t in allowed.subsets() {
            f(seed_family(p, i, t).expect("extension drawn from B_i^c"));
        }
    }
}

struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(size: usize) -> Self {
        UnionFind { parent: (0..size as u32).collect(), rank: vec![0; size] }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra as usize].cmp(&self.rank[rb as usize]) {
            std::cmp::Ordering::Less => self.parent[ra as usize] = rb,
            std::cmp::Ordering::Greater => self.parent[rb as usize] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb as usize] = ra;
                self.rank[ra as usize] += 1;
            }
        }
    }
}

/// Partition `{N_1, .., N_γ}` of `2^[n]`.
///
/// Classes `0..γ-1` (zero-based) are the g-subsets, ordered by their smallest
/// member bitmask; class `γ-1` is the remaining class.
#[derive(Debug, Clone)]
pub struct GPartition {
    n: usize,
    g_subsets: Vec<Vec<SubsetId>>,
    class_of: Vec<u32>,
    remaining_len: usize,
}

impl GPartition {
    pub fn build(p: &Problem) -> Self {
        let size = 1usize << p.n();
        let mut uf = UnionFind::new(size);
        let mut seeded = vec![false; size];
        for_each_seed(p, |family| {
            let top = family.members[0];
            seeded[top.index()] = true;
            for &m in &family.members[1..] {
                seeded[m.index()] = true;
                uf.union(top.bits(), m.bits());
            }
        });

        const UNSET: u32 = u32::MAX;
        let mut root_class = vec![UNSET; size];
        let mut class_of = vec![UNSET; size];
        let mut g_subsets: Vec<Vec<SubsetId>> = Vec::new();
        // ascending scan: a class is numbered when its smallest member is met
        for bits in 0..size as u32 {
            if !seeded[bits as usize] {
                continue;
            }
            let root = uf.find(bits) as usize;
            if root_class[root] == UNSET {
                root_class[root] = g_subsets.len() as u32;
                g_subsets.push(Vec::new());
            }
            let k = root_class[root];
            class_of[bits as usize] = k;
            g_subsets[k as usize].push(SubsetId(bits));
        }
        let remaining = g_subsets.len() as u32;
        let mut remaining_len = 0;
        for c in class_of.iter_mut().filter(|c| **c == UNSET) {
            *c = remaining;
            remaining_len += 1;
        }
        GPartition { n: p.n(), g_subsets, class_of, remaining_len }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Class count `γ`, the remaining class included.
    pub fn gamma(&self) -> usize {
        self.g_subsets.len() + 1
    }

    /// Zero-based index of the remaining class (`γ - 1`).
    pub fn remaining_index(&self) -> usize {
        self.g_subsets.len()
    }

    pub fn g_subsets(&self) -> &[Vec<SubsetId>] {
        &self.g_subsets
    }

    /// Members of g-subset `k`, ascending by bitmask.
    pub fn g_subset(&self, k: usize) -> &[SubsetId] {
        &self.g_subsets[k]
    }

    pub fn class_of(&self, s: SubsetId) -> usize {
        self.class_of[s.index()] as usize
    }

    pub fn remaining_len(&self) -> usize {
        self.remaining_len
    }

    pub fn remaining(&self) -> impl Iterator<Item = SubsetId> + '_ {
        let r = self.remaining_index() as u32;
        self.class_of
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c == r)
            .map(|(s, _)| SubsetId(s as u32))
    }

    /// Members of any class, the remaining one included.
    pub fn class_members(&self, k: usize) -> Vec<SubsetId> {
        if k < self.g_subsets.len() {
            self.g_subsets[k].clone()
        } else {
            self.remaining().collect()
        }
    }

    pub fn summary(&self) -> PartitionSummary {
        PartitionSummary {
            gamma: self.gamma(),
            g_subsets: self
                .g_subsets
                .iter()
                .map(|c| c.iter().map(|s| s.to_one_based()).collect())
                .collect(),
            remaining_size: self.remaining_len,
        }
    }
}

/// Serialized form: g-subset members in ascending bitmask order, and only
/// the size of the remaining class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct PartitionSummary {
    pub gamma: usize,
    pub g_subsets: Vec<Vec<Vec<usize>>>,
    pub remaining_size: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn s(labels: &[usize]) -> SubsetId {
        SubsetId::from_one_based(labels)
    }

    #[test]
    fn seed_families_of_example2() {
        let p = fixtures::example2();
        let f = seed_family(&p, 1, SubsetId::EMPTY).unwrap();
        assert_eq!(f.members, vec![s(&[3, 4]), s(&[3])]);
        let f = seed_family(&p, 2, SubsetId::EMPTY).unwrap();
        assert_eq!(f.members, vec![s(&[1, 2, 4, 5]), s(&[2, 4, 5]), s(&[1, 4, 5]), s(&[1, 2, 4])]);
    }

    #[test]
    fn seed_family_errors() {
        let p = fixtures::example2();
        assert_eq!(seed_family(&p, 0, SubsetId::EMPTY), Err(Error::NoProhibited { receiver: 1 }));
        assert!(matches!(seed_family(&p, 1, s(&[3])), Err(Error::BadExtension { receiver: 2, .. })));
    }

    #[test]
    fn toy_seed_and_partition() {
        let p = fixtures::toy();
        let f = seed_family(&p, 0, SubsetId::EMPTY).unwrap();
        assert_eq!(f.members, vec![s(&[2, 3]), s(&[3]), s(&[2])]);
        let part = GPartition::build(&p);
        assert_eq!(part.gamma(), 3);
        assert_eq!(part.g_subset(0), &[s(&[2]), s(&[3]), s(&[2, 3])]);
        assert_eq!(part.g_subset(1), &[s(&[1, 2]), s(&[1, 3]), s(&[1, 2, 3])]);
        let rest: Vec<_> = part.remaining().collect();
        assert_eq!(rest, vec![SubsetId::EMPTY, s(&[1])]);
    }

    #[test]
    fn no_security_gives_single_class() {
        let part = GPartition::build(&fixtures::example1_open());
        assert_eq!(part.gamma(), 1);
        assert_eq!(part.remaining_len(), 512);
        assert!(part.g_subsets().is_empty());
    }

    #[test]
    fn empty_set_can_be_in_a_g_subset() {
        // B_1 = P_1 = {2}: the seed N(1, ∅) is {{2}, ∅}
        let p = Problem::from_one_based(&[&[], &[1]], &[&[2], &[]]).unwrap();
        let part = GPartition::build(&p);
        assert_eq!(part.g_subset(0), &[SubsetId::EMPTY, s(&[2])]);
        assert_eq!(part.class_of(SubsetId::EMPTY), 0);
    }
}
