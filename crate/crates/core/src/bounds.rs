//! Lower bounds on the broadcast rate and necessary conditions for secure
//! feasibility, all evaluated over the g-partition.
//!
//! Every infeasibility verdict carries a witness that can be re-checked
//! against the problem and partition without rerunning the search.

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::SideInfoGraph;
use crate::partition::GPartition;
use crate::problem::Problem;
use crate::subset::SubsetId;

/// `β_MAIS(G)`.
pub fn mais_bound(graph: &SideInfoGraph) -> usize {
    graph.mais(SubsetId::full(graph.n()))
}

/// `S, S' ∈ N_k` with `S' ∪ {i} ⊆ S` and `S' ⊆ B_i`: forces `R_i = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetChainWitness {
    /// Zero-based g-subset index.
    pub class: usize,
    pub superset: SubsetId,
    pub subset: SubsetId,
    pub receiver: usize,
}

impl SubsetChainWitness {
    pub fn recheck(&self, p: &Problem, part: &GPartition) -> bool {
        self.class < part.remaining_index()
            && part.class_of(self.superset) == self.class
            && part.class_of(self.subset) == self.class
            && self.subset.with(self.receiver).is_subset_of(self.superset)
            && !self.subset.contains(self.receiver)
            && self.subset.is_subset_of(p.interfering_set(self.receiver))
    }
}

/// `ρ^{N_k} > |S|` for a smallest member `S` of g-subset `N_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhoExcessWitness {
    pub class: usize,
    pub rho: usize,
    pub smallest: SubsetId,
}

impl RhoExcessWitness {
    pub fn recheck(&self, part: &GPartition, state: &RhoState) -> bool {
        self.class < part.remaining_index()
            && part.class_of(self.smallest) == self.class
            && state.rho[self.class] == self.rho
            && self.rho > self.smallest.len()
            && part.g_subset(self.class).iter().all(|s| s.len() >= self.smallest.len())
    }
}

/// Scans g-subsets in order, `S` ascending, `S'` ascending, then `i`
/// ascending, and collects up to `limit` witnesses. The first element is
/// the canonical witness.
pub fn subset_chain_witnesses(p: &Problem, part: &GPartition, limit: usize) -> (Vec<SubsetChainWitness>, usize) {
    let mut found = Vec::new();
    let mut total = 0;
    for (k, members) in part.g_subsets().iter().enumerate() {
        for &s in members {
            for &sub in members {
                if sub == s || !sub.is_subset_of(s) {
                    continue;
                }
                for i in s.difference(sub).iter() {
                    if sub.is_subset_of(p.interfering_set(i)) {
                        total += 1;
                        if found.len() < limit {
                            found.push(SubsetChainWitness { class: k, superset: s, subset: sub, receiver: i });
                        }
                    }
                }
            }
        }
    }
    (found, total)
}

/// First necessary condition: `Some(witness)` means infeasible.
pub fn check_subset_chain(p: &Problem, part: &GPartition) -> Option<SubsetChainWitness> {
    subset_chain_witnesses(p, part, 1).0.into_iter().next()
}

/// One applied update `ρ^{N_k} ← β_MAIS(G|_D) + ρ^{N_ℓ}`, where
/// `D = {j ∈ S \ S' : S' ⊆ B_j}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhoUpdate {
    pub class: usize,
    pub from_class: usize,
    pub superset: SubsetId,
    pub subset: SubsetId,
    pub gain: usize,
    pub old: usize,
    pub new: usize,
    pub capped: bool,
}

/// Per-class `ρ` values after the fixpoint, indexed like the partition
/// (the remaining class last).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhoState {
    pub rho: Vec<usize>,
    pub initial: Vec<usize>,
    pub capped: Vec<bool>,
    pub cap: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SmaisResult {
    pub beta: usize,
    pub state: RhoState,
    pub trace: Vec<RhoUpdate>,
}

impl SmaisResult {
    pub fn cap_hit(&self) -> bool {
        self.state.capped.iter().any(|&c| c)
    }
}

#[derive(Debug, Clone, Copy)]
struct ChainEdge {
    gain: usize,
    superset: SubsetId,
    subset: SubsetId,
}

/// Heaviest gain over all `S ∈ N_k`, `S' ∈ N_ℓ` with `S' ⊆ S`, keyed by `(ℓ, k)`.
fn chain_edges(p: &Problem, part: &GPartition, graph: &SideInfoGraph) -> HashMap<(usize, usize), ChainEdge> {
    let table = graph.mais_table();
    let total_members: usize = part.g_subsets().iter().map(|c| c.len()).sum();
    let all_members: Vec<SubsetId> = part.g_subsets().iter().flatten().copied().collect();
    // S' ⊆ B_j  ⇔  S' avoids A_j ∪ {j}
    let blocked: Vec<SubsetId> = (0..p.n()).map(|j| p.side_info(j).with(j)).collect();
    let remaining = part.remaining_index();

    let mut edges: HashMap<(usize, usize), ChainEdge> = HashMap::new();
    let mut consider = |k: usize, s: SubsetId, sub: SubsetId| {
        let l = part.class_of(sub);
        if l == remaining || l == k {
            return;
        }
        let reach = s.difference(sub).iter().filter(|&j| blocked[j].is_disjoint(sub));
        let gain = table.value(SubsetId::from_indices(reach));
        let e = edges.entry((l, k)).or_insert(ChainEdge { gain, superset: s, subset: sub });
        if gain > e.gain {
            *e = ChainEdge { gain, superset: s, subset: sub };
        }
    };
    for (k, members) in part.g_subsets().iter().enumerate() {
        for &s in members {
            if (1usize << s.len()) <= total_members {
                for sub in s.subsets() {
                    consider(k, s, sub);
                }
            } else {
                for &sub in &all_members {
                    if sub.is_subset_of(s) {
                        consider(k, s, sub);
                    }
                }
            }
        }
    }
    edges
}

/// S-MAIS fixpoint with the default worklist schedule.
pub fn smais(p: &Problem, part: &GPartition, graph: &SideInfoGraph) -> SmaisResult {
    smais_scheduled(p, part, graph, None)
}

/// S-MAIS fixpoint. With `order_seed`, updates are applied in randomized
/// sweeps instead of worklist order; the resulting `ρ` is the same.
///
/// `ρ` is clamped at `n + 1`. A clamped g-subset always has
/// `ρ > min |S|`, so the cap turns a diverging chain into an infeasibility
/// certificate.
pub fn smais_scheduled(p: &Problem, part: &GPartition, graph: &SideInfoGraph, order_seed: Option<u64>) -> SmaisResult {
    let table = graph.mais_table();
    let gamma = part.gamma();
    let cap = p.n() + 1;
    let mut rho = vec![0usize; gamma];
    for (k, members) in part.g_subsets().iter().enumerate() {
        rho[k] = members.iter().map(|&s| table.value(s)).max().unwrap_or(0);
    }
    rho[gamma - 1] = part.remaining().map(|s| table.value(s)).max().unwrap_or(0);
    let initial = rho.clone();
    let mut capped = vec![false; gamma];
    let mut trace = Vec::new();

    let edges = chain_edges(p, part, graph);
    let mut out: Vec<Vec<(usize, ChainEdge)>> = vec![Vec::new(); gamma];
    let mut keys: Vec<_> = edges.keys().copied().collect();
    keys.sort_unstable();
    for key in &keys {
        out[key.0].push((key.1, edges[key]));
    }

    let mut relax = |l: usize, k: usize, e: &ChainEdge, rho: &mut Vec<usize>| -> bool {
        let raw = rho[l] + e.gain;
        if raw <= rho[k] {
            return false;
        }
        let new = raw.min(cap);
        if new <= rho[k] {
            return false;
        }
        trace.push(RhoUpdate {
            class: k,
            from_class: l,
            superset: e.superset,
            subset: e.subset,
            gain: e.gain,
            old: rho[k],
            new,
            capped: raw > cap,
        });
        if raw > cap {
            capped[k] = true;
        }
        rho[k] = new;
        true
    };

    match order_seed {
        None => {
            let mut queue: VecDeque<usize> = (0..gamma - 1).collect();
            let mut queued = vec![true; gamma];
            while let Some(l) = queue.pop_front() {
                queued[l] = false;
                for (k, e) in &out[l] {
                    if relax(l, *k, e, &mut rho) && !queued[*k] {
                        queued[*k] = true;
                        queue.push_back(*k);
                    }
                }
            }
        }
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut order = keys.clone();
            loop {
                order.shuffle(&mut rng);
                let mut changed = false;
                for key in &order {
                    changed |= relax(key.0, key.1, &edges[key], &mut rho);
                }
                if !changed {
                    break;
                }
            }
        }
    }

    let beta = rho.iter().copied().max().unwrap_or(0);
    SmaisResult { beta, state: RhoState { rho, initial, capped, cap }, trace }
}

/// Every g-subset whose `ρ` exceeds its smallest member size, in class order.
pub fn rho_excess_witnesses(state: &RhoState, part: &GPartition) -> Vec<RhoExcessWitness> {
    part.g_subsets()
        .iter()
        .enumerate()
        .filter_map(|(k, members)| {
            let smallest = *members.iter().min_by_key(|s| (s.len(), s.bits()))?;
            (state.rho[k] > smallest.len()).then_some(RhoExcessWitness { class: k, rho: state.rho[k], smallest })
        })
        .collect()
}

/// Second necessary condition: `Some(witness)` means infeasible.
pub fn check_rho_excess(state: &RhoState, part: &GPartition) -> Option<RhoExcessWitness> {
    rho_excess_witnesses(state, part).into_iter().next()
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict<W> {
    Infeasible { witness: W },
    NotDisproved,
}

impl<W> Verdict<W> {
    pub fn from_witness(w: Option<W>) -> Self {
        match w {
            Some(witness) => Verdict::Infeasible { witness },
            None => Verdict::NotDisproved,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, Verdict::Infeasible { .. })
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Infeasible { witness } => Some(witness),
            Verdict::NotDisproved => None,
        }
    }
}

/// Everything the bounds module computes for one problem.
#[derive(Debug, Clone)]
pub struct BoundsReport {
    pub beta_mais: usize,
    pub smais: SmaisResult,
    pub subset_chain: Verdict<SubsetChainWitness>,
    pub rho_excess: Verdict<RhoExcessWitness>,
}

impl BoundsReport {
    pub fn compute(p: &Problem, part: &GPartition, graph: &SideInfoGraph) -> Self {
        let smais = smais(p, part, graph);
        BoundsReport {
            beta_mais: mais_bound(graph),
            subset_chain: Verdict::from_witness(check_subset_chain(p, part)),
            rho_excess: Verdict::from_witness(check_rho_excess(&smais.state, part)),
            smais,
        }
    }

    pub fn infeasible(&self) -> bool {
        self.subset_chain.is_infeasible() || self.rho_excess.is_infeasible()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const NONE: &[usize] = &[];

    fn s(labels: &[usize]) -> SubsetId {
        SubsetId::from_one_based(labels)
    }

    fn run(p: &Problem) -> (GPartition, SideInfoGraph, BoundsReport) {
        let part = GPartition::build(p);
        let graph = SideInfoGraph::new(p);
        let report = BoundsReport::compute(p, &part, &graph);
        (part, graph, report)
    }

    #[test]
    fn mais_bound_extremes() {
        let full = Problem::from_one_based(&[&[2, 3, 4], &[1, 3, 4], &[1, 2, 4], &[1, 2, 3]], &[NONE; 4]).unwrap();
        assert_eq!(mais_bound(&SideInfoGraph::new(&full)), 1);
        let empty = Problem::from_one_based(&[NONE; 4], &[NONE; 4]).unwrap();
        assert_eq!(mais_bound(&SideInfoGraph::new(&empty)), 4);
        assert_eq!(mais_bound(&SideInfoGraph::new(&fixtures::example1())), 3);
    }

    #[test]
    fn example1_smais_is_four() {
        let (part, _, report) = run(&fixtures::example1());
        assert_eq!(report.beta_mais, 3);
        assert_eq!(report.smais.beta, 4);
        assert!(!report.infeasible());
        assert!(!report.smais.cap_hit());
        assert_eq!(report.smais.state.rho.len(), part.gamma());
    }

    #[test]
    fn toy_smais_is_two() {
        let (part, _, report) = run(&fixtures::toy());
        assert_eq!(report.smais.beta, 2);
        assert_eq!(report.smais.state.rho[..2], [1, 2]);
        assert!(report.smais.trace.is_empty());
        assert!(!report.subset_chain.is_infeasible());
        assert!(!report.rho_excess.is_infeasible());
        assert_eq!(part.gamma(), 3);
    }

    #[test]
    fn example2_is_infeasible_both_ways() {
        let p = fixtures::example2();
        let (part, _, report) = run(&p);
        let w3 = report.subset_chain.witness().unwrap();
        assert!(w3.recheck(&p, &part));
        let (all, total) = subset_chain_witnesses(&p, &part, usize::MAX);
        assert_eq!(all.len(), total);
        let listed = SubsetChainWitness {
            class: part.class_of(s(&[1, 3, 4, 5])),
            superset: s(&[1, 3, 4, 5]),
            subset: s(&[1, 3, 5]),
            receiver: 3,
        };
        assert!(all.contains(&listed));
        assert!(all.iter().all(|w| w.recheck(&p, &part)));

        let w5 = report.rho_excess.witness().unwrap();
        assert!(w5.recheck(&part, &report.smais.state));
        let n5 = part.class_of(s(&[3, 5]));
        // 4 after the update from {{3},{3,4}}, then 5 through {{1,3},{1,3,4}}
        let n5_path: Vec<usize> = report.smais.trace.iter().filter(|u| u.class == n5).map(|u| u.new).collect();
        assert_eq!(n5_path, vec![4, 5]);
        assert_eq!(report.smais.state.rho[n5], 5);
        assert!(rho_excess_witnesses(&report.smais.state, &part).iter().any(|w| w.class == n5));
        assert_eq!(part.g_subset(n5).iter().map(|x| x.len()).min(), Some(2));
    }

    #[test]
    fn no_security_is_never_disproved() {
        let p = fixtures::example1_open();
        let (_, graph, report) = run(&p);
        assert!(!report.infeasible());
        assert_eq!(report.smais.beta, mais_bound(&graph));
    }

    #[test]
    fn mimicking_receiver_is_caught() {
        // A_2 ⊆ A_1 ∪ {1} and 2 ∈ P_1
        let p = Problem::from_one_based(&[&[3], &[], &[]], &[&[2], &[], &[]]).unwrap();
        let part = GPartition::build(&p);
        let w = check_subset_chain(&p, &part).expect("infeasible");
        assert!(w.recheck(&p, &part));
    }

    #[test]
    fn random_schedules_agree_on_example2() {
        let p = fixtures::example2();
        let part = GPartition::build(&p);
        let graph = SideInfoGraph::new(&p);
        let base = smais(&p, &part, &graph).state.rho;
        for seed in 0..8 {
            assert_eq!(smais_scheduled(&p, &part, &graph, Some(seed)).state.rho, base);
        }
    }
}
