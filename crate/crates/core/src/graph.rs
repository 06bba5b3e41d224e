//! Side-information digraph primitives: acyclicity of induced subsets, the
//! maximum acyclic induced subgraph (MAIS) and the MDS parameter `κ`.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::subset::SubsetId;

/// Directed graph with an edge `(i, j)` whenever `i ∈ A_j`.
///
/// The MAIS table over all `2^n` subsets is built on first use and shared by
/// every later query.
#[derive(Debug)]
pub struct SideInfoGraph {
    n: usize,
    /// `in_nbrs[j] = A_j`, the tails of edges entering `j`.
    in_nbrs: Vec<SubsetId>,
    table: OnceLock<MaisTable>,
}

impl SideInfoGraph {
    pub fn new(p: &Problem) -> Self {
        SideInfoGraph {
            n: p.n(),
            in_nbrs: (0..p.n()).map(|i| p.side_info(i)).collect(),
            table: OnceLock::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.in_nbrs[to].contains(from)
    }

    /// A vertex of `u` with no in-edge from inside `u`, lowest index first.
    fn source_in(&self, u: SubsetId) -> Option<usize> {
        u.iter().find(|&v| self.in_nbrs[v].is_disjoint(u))
    }

    /// True iff `G|_U` has no directed cycle. Direct peeling, no table.
    pub fn is_acyclic(&self, u: SubsetId) -> bool {
        let mut rest = u;
        while !rest.is_empty() {
            match self.source_in(rest) {
                Some(v) => rest = rest.without(v),
                None => return false,
            }
        }
        true
    }

    pub fn mais_table(&self) -> &MaisTable {
        self.table.get_or_init(|| MaisTable::build(self))
    }

    /// Size of the largest `U ⊆ S` with `G|_U` acyclic.
    pub fn mais(&self, s: SubsetId) -> usize {
        self.mais_table().value(s)
    }

    /// A maximum acyclic `U ⊆ S`, listed as `i_1, .., i_u` with
    /// `{i_1, .., i_{p-1}} ⊆ B_{i_p}` for every `p`.
    pub fn mais_witness(&self, s: SubsetId) -> Vec<usize> {
        let table = self.mais_table();
        let target = table.value(s);
        let mut u = s;
        while !table.is_acyclic(u) {
            let v = u
                .iter()
                .find(|&v| table.value(u.without(v)) == target)
                .expect("some removal keeps the optimum");
            u = u.without(v);
        }
        self.interference_order(u).expect("acyclic set has an order")
    }

    /// Orders an acyclic set so that no vertex knows any earlier one.
    pub fn interference_order(&self, u: SubsetId) -> Option<Vec<usize>> {
        let mut order = Vec::with_capacity(u.len());
        let mut rest = u;
        while !rest.is_empty() {
            let v = self.source_in(rest)?;
            order.push(v);
            rest = rest.without(v);
        }
        order.reverse();
        Some(order)
    }
}

/// `β_MAIS(G|_S)` for every `S ⊆ [n]`, plus the acyclicity bit.
#[derive(Debug, Clone)]
pub struct MaisTable {
    values: Vec<u8>,
    acyclic: Vec<bool>,
}

impl MaisTable {
    fn build(g: &SideInfoGraph) -> Self {
        let size = 1usize << g.n;
        let mut acyclic = vec![false; size];
        let mut values = vec![0u8; size];
        acyclic[0] = true;
        for bits in 1..size as u32 {
            let s = SubsetId(bits);
            // a set is acyclic iff it has a source whose removal leaves an acyclic set
            acyclic[s.index()] = g.source_in(s).is_some_and(|v| acyclic[s.without(v).index()]);
            values[s.index()] = if acyclic[s.index()] {
                s.len() as u8
            } else {
                s.iter().map(|v| values[s.without(v).index()]).max().unwrap_or(0)
            };
        }
        MaisTable { values, acyclic }
    }

    #[inline]
    pub fn value(&self, s: SubsetId) -> usize {
        self.values[s.index()] as usize
    }

    #[inline]
    pub fn is_acyclic(&self, s: SubsetId) -> bool {
        self.acyclic[s.index()]
    }
}

/// `κ(G|_J) = |J| − min_{i ∈ J} |A_i ∩ J|`.
pub fn kappa(p: &Problem, j: SubsetId) -> Result<usize> {
    let min_known = j
        .iter()
        .map(|i| p.side_info(i).intersection(j).len())
        .min()
        .ok_or(Error::EmptySubset)?;
    Ok(j.len() - min_known)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn s(labels: &[usize]) -> SubsetId {
        SubsetId::from_one_based(labels)
    }

    #[test]
    fn toy_acyclicity() {
        let g = SideInfoGraph::new(&fixtures::toy());
        assert!(!g.is_acyclic(s(&[2, 3])));
        assert!(g.is_acyclic(s(&[1, 2])));
        assert!(g.is_acyclic(SubsetId::EMPTY));
        assert!(!g.mais_table().is_acyclic(s(&[2, 3])));
    }

    #[test]
    fn example1_mais_is_three() {
        let g = SideInfoGraph::new(&fixtures::example1());
        assert_eq!(g.mais(SubsetId::full(9)), 3);
        let w = g.mais_witness(SubsetId::full(9));
        assert_eq!(w.len(), 3);
        let p = fixtures::example1();
        for (k, &v) in w.iter().enumerate() {
            for &earlier in &w[..k] {
                assert!(p.interfering_set(v).contains(earlier));
            }
        }
    }

    #[test]
    fn singletons_have_mais_one() {
        let g = SideInfoGraph::new(&fixtures::example2());
        for i in 0..5 {
            assert_eq!(g.mais(SubsetId::singleton(i)), 1);
        }
        assert_eq!(g.mais(SubsetId::EMPTY), 0);
    }

    #[test]
    fn example1_kappa() {
        let p = fixtures::example1();
        assert_eq!(kappa(&p, s(&[1, 2, 8])).unwrap(), 1);
        for j in [s(&[2, 6, 7, 9]), s(&[3, 9]), s(&[4, 5])] {
            assert_eq!(kappa(&p, j).unwrap(), 1);
        }
        assert_eq!(kappa(&p, s(&[4])).unwrap(), 1);
        assert_eq!(kappa(&p, SubsetId::EMPTY), Err(Error::EmptySubset));
    }

    #[test]
    fn kappa_equals_size_when_someone_knows_nothing() {
        let p = fixtures::toy();
        // receiver 1 knows nothing inside {1,2,3}
        assert_eq!(kappa(&p, s(&[1, 2, 3])).unwrap(), 3);
    }
}
