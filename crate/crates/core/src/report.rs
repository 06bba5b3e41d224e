//! Full analysis of a problem as a single serializable document.
//!
//! The human-readable rendering is produced from the document itself, so
//! both views always agree. Labels are one-based throughout: messages,
//! receivers and g-subset indices (`N_1`, `N_2`, ...).

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::bounds::{self, BoundsReport, RhoExcessWitness, SubsetChainWitness};
use crate::error::Result;
use crate::graph::SideInfoGraph;
use crate::partition::{GPartition, PartitionSummary};
use crate::problem::Problem;
use crate::rates::{self, FlpccSolution, OuterBound, DecodingForm, OUTER_MAX_N, SFLPCC_MAX_N};

/// Witness lists are truncated to this many entries; totals are exact.
pub const WITNESS_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy)]
pub struct AnalyzeOptions {
    pub outer: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { outer: true }
    }
}

pub fn fraction(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainWitness {
    pub class: usize,
    pub superset: Vec<usize>,
    pub subset: Vec<usize>,
    pub receiver: usize,
}

impl From<&SubsetChainWitness> for ChainWitness {
    fn from(w: &SubsetChainWitness) -> Self {
        ChainWitness {
            class: w.class + 1,
            superset: w.superset.to_one_based(),
            subset: w.subset.to_one_based(),
            receiver: w.receiver + 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExcessWitness {
    pub class: usize,
    pub rho: usize,
    pub smallest: Vec<usize>,
    pub smallest_size: usize,
}

impl From<&RhoExcessWitness> for ExcessWitness {
    fn from(w: &RhoExcessWitness) -> Self {
        ExcessWitness {
            class: w.class + 1,
            rho: w.rho,
            smallest: w.smallest.to_one_based(),
            smallest_size: w.smallest.len(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictSection<W> {
    pub infeasible: bool,
    /// Canonical (first) witness.
    pub witness: Option<W>,
    pub witnesses: Vec<W>,
    pub total: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassRho {
    pub class: usize,
    pub initial: usize,
    pub rho: usize,
    pub capped: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceStep {
    pub class: usize,
    pub from_class: usize,
    pub superset: Vec<usize>,
    pub subset: Vec<usize>,
    pub gain: usize,
    pub old: usize,
    pub new: usize,
    pub capped: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SmaisSection {
    pub beta: usize,
    pub cap: usize,
    pub cap_hit: bool,
    pub rho: Vec<ClassRho>,
    pub trace: Vec<TraceStep>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaEntry {
    pub subset: Vec<usize>,
    pub kappa: usize,
    pub weight: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RateSection {
    pub rate: String,
    pub family_size: usize,
    pub lambda: Vec<LambdaEntry>,
}

impl RateSection {
    fn new(sol: &FlpccSolution) -> Self {
        RateSection {
            rate: fraction(&sol.rate),
            family_size: sol.family_size,
            lambda: sol
                .lambda
                .iter()
                .map(|(j, kappa, w)| LambdaEntry { subset: j.to_one_based(), kappa: *kappa, weight: fraction(w) })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum OuterSection {
    Computed {
        rate: String,
        variables: usize,
        constraints: usize,
        decoding_form: DecodingForm,
        certificate: crate::lp::Certificate,
    },
    Skipped {
        reason: String,
    },
}

impl OuterSection {
    pub fn rate(&self) -> Option<&str> {
        match self {
            OuterSection::Computed { rate, .. } => Some(rate),
            OuterSection::Skipped { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapacityBasis {
    /// Inner and outer bounds coincide.
    BoundsMeet,
    /// A necessary condition for feasibility fails.
    Infeasible,
}

#[derive(Debug, Clone, Serialize)]
pub struct CapacitySection {
    pub symmetric_capacity: String,
    pub broadcast_rate: Option<String>,
    pub basis: CapacityBasis,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub problem: serde_json::Value,
    pub partition: PartitionSummary,
    pub beta_mais: usize,
    pub smais: SmaisSection,
    pub subset_chain: VerdictSection<ChainWitness>,
    pub rho_excess: VerdictSection<ExcessWitness>,
    pub infeasible: bool,
    pub flpcc: Option<RateSection>,
    pub sflpcc: Option<RateSection>,
    pub outer: OuterSection,
    pub capacity: Option<CapacitySection>,
}

/// Raw results behind a report, for callers that need exact values.
pub struct Analysis {
    pub partition: GPartition,
    pub graph: SideInfoGraph,
    pub bounds: BoundsReport,
    pub flpcc: Option<FlpccSolution>,
    pub sflpcc: Option<FlpccSolution>,
    pub outer: Option<OuterBound>,
    pub report: AnalysisReport,
}

pub fn analyze(p: &Problem, opts: AnalyzeOptions) -> Result<AnalysisReport> {
    Ok(analyze_full(p, opts)?.report)
}

pub fn analyze_full(p: &Problem, opts: AnalyzeOptions) -> Result<Analysis> {
    let part = GPartition::build(p);
    let graph = SideInfoGraph::new(p);
    let b = BoundsReport::compute(p, &part, &graph);

    let (chains, chain_total) = bounds::subset_chain_witnesses(p, &part, WITNESS_LIMIT);
    let excess = bounds::rho_excess_witnesses(&b.smais.state, &part);
    let subset_chain = VerdictSection {
        infeasible: b.subset_chain.is_infeasible(),
        witness: b.subset_chain.witness().map(ChainWitness::from),
        witnesses: chains.iter().map(ChainWitness::from).collect(),
        total: chain_total,
    };
    let rho_excess = VerdictSection {
        infeasible: b.rho_excess.is_infeasible(),
        witness: b.rho_excess.witness().map(ExcessWitness::from),
        witnesses: excess.iter().take(WITNESS_LIMIT).map(ExcessWitness::from).collect(),
        total: excess.len(),
    };
    let st = &b.smais.state;
    let smais = SmaisSection {
        beta: b.smais.beta,
        cap: st.cap,
        cap_hit: b.smais.cap_hit(),
        rho: (0..st.rho.len())
            .map(|k| ClassRho { class: k + 1, initial: st.initial[k], rho: st.rho[k], capped: st.capped[k] })
            .collect(),
        trace: b
            .smais
            .trace
            .iter()
            .map(|u| TraceStep {
                class: u.class + 1,
                from_class: u.from_class + 1,
                superset: u.superset.to_one_based(),
                subset: u.subset.to_one_based(),
                gain: u.gain,
                old: u.old,
                new: u.new,
                capped: u.capped,
            })
            .collect(),
    };

    let (flpcc, sflpcc) = if p.n() <= SFLPCC_MAX_N {
        (Some(rates::flpcc_symmetric(p)?), Some(rates::sflpcc_symmetric(p)?))
    } else {
        (None, None)
    };
    let outer = if !opts.outer {
        None
    } else if p.n() <= OUTER_MAX_N {
        Some(rates::polymatroidal_outer_symmetric(p)?)
    } else {
        None
    };
    let outer_section = match (&outer, opts.outer) {
        (Some(o), _) => OuterSection::Computed {
            rate: fraction(&o.rate),
            variables: o.variables,
            constraints: o.constraints,
            decoding_form: o.decoding_form,
            certificate: o.certificate,
        },
        (None, false) => OuterSection::Skipped { reason: "disabled".into() },
        (None, true) => OuterSection::Skipped { reason: format!("n = {} exceeds {}", p.n(), OUTER_MAX_N) },
    };

    let infeasible = b.infeasible();
    let capacity = if infeasible {
        Some(BigRational::zero())
    } else {
        match (&sflpcc, &outer) {
            (Some(s), Some(o)) if s.rate == o.rate => Some(s.rate.clone()),
            _ => None,
        }
    }
    .map(|c| CapacitySection {
        broadcast_rate: (!c.is_zero()).then(|| fraction(&c.recip())),
        symmetric_capacity: fraction(&c),
        basis: if infeasible { CapacityBasis::Infeasible } else { CapacityBasis::BoundsMeet },
    });

    let report = AnalysisReport {
        problem: p.to_json_value(),
        partition: part.summary(),
        beta_mais: b.beta_mais,
        smais,
        subset_chain,
        rho_excess,
        infeasible,
        flpcc: flpcc.as_ref().map(RateSection::new),
        sflpcc: sflpcc.as_ref().map(RateSection::new),
        outer: outer_section,
        capacity,
    };
    Ok(Analysis { partition: part, graph, bounds: b, flpcc, sflpcc, outer, report })
}

fn set(v: &[usize]) -> String {
    let inner: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut o = String::new();
        let n = self.problem["n"].as_u64().unwrap_or(0);
        let _ = writeln!(o, "messages: {n}");
        let _ = writeln!(
            o,
            "g-partition: {} classes ({} g-subsets, remaining class of size {})",
            self.partition.gamma,
            self.partition.g_subsets.len(),
            self.partition.remaining_size
        );
        for (k, members) in self.partition.g_subsets.iter().enumerate() {
            let ms: Vec<String> = members.iter().map(|m| set(m)).collect();
            let _ = writeln!(o, "  N_{} ({}): {}", k + 1, members.len(), ms.join(" "));
        }
        let _ = writeln!(o, "beta_MAIS: {}", self.beta_mais);
        let _ = writeln!(o, "beta_S-MAIS: {}{}", self.smais.beta, if self.smais.cap_hit { " (capped)" } else { "" });
        for c in &self.smais.rho {
            let _ = writeln!(o, "  rho(N_{}) = {} (initial {})", c.class, c.rho, c.initial);
        }
        for u in &self.smais.trace {
            let _ = writeln!(
                o,
                "  update N_{} from N_{} via {} ⊇ {}: {} -> {}",
                u.class,
                u.from_class,
                set(&u.superset),
                set(&u.subset),
                u.old,
                u.new
            );
        }
        match &self.subset_chain.witness {
            Some(w) => {
                let _ = writeln!(
                    o,
                    "subset chain: INFEASIBLE ({} witnesses), e.g. in N_{}: {} ∪ {{{}}} ⊆ {}",
                    self.subset_chain.total,
                    w.class,
                    set(&w.subset),
                    w.receiver,
                    set(&w.superset)
                );
            }
            None => o.push_str("subset chain: not disproved\n"),
        }
        match &self.rho_excess.witness {
            Some(w) => {
                let _ = writeln!(
                    o,
                    "rho excess: INFEASIBLE ({} witnesses), e.g. rho(N_{}) = {} > |{}| = {}",
                    self.rho_excess.total,
                    w.class,
                    w.rho,
                    set(&w.smallest),
                    w.smallest_size
                );
            }
            None => o.push_str("rho excess: not disproved\n"),
        }
        for (name, sec) in [("FLPCC", &self.flpcc), ("S-FLPCC", &self.sflpcc)] {
            match sec {
                Some(s) => {
                    let _ = writeln!(o, "{name} symmetric rate: {} ({} candidate sets)", s.rate, s.family_size);
                    for l in &s.lambda {
                        let _ = writeln!(o, "  lambda{} = {} (kappa {})", set(&l.subset), l.weight, l.kappa);
                    }
                }
                None => {
                    let _ = writeln!(o, "{name} symmetric rate: skipped (n too large)");
                }
            }
        }
        match &self.outer {
            OuterSection::Computed { rate, constraints, .. } => {
                let _ = writeln!(o, "polymatroidal outer bound: {rate} ({constraints} constraints)");
            }
            OuterSection::Skipped { reason } => {
                let _ = writeln!(o, "polymatroidal outer bound: skipped ({reason})");
            }
        }
        match &self.capacity {
            Some(c) => {
                let _ = write!(o, "symmetric capacity: {}", c.symmetric_capacity);
                if let Some(b) = &c.broadcast_rate {
                    let _ = write!(o, " (broadcast rate {b})");
                }
                o.push('\n');
            }
            None => o.push_str("symmetric capacity: open (bounds differ)\n"),
        }
        let _ = writeln!(o, "verdict: {}", if self.infeasible { "infeasible" } else { "not disproved" });
        o
    }
}
