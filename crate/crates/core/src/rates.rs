//! Symmetric-rate LPs: the fractional local partial clique cover inner bound,
//! its secure variant restricted to admissible subproblems, and the
//! polymatroidal outer bound with security equalities.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::kappa;
use crate::lp::{int, Certificate, RationalLp, Sense, Var};
use crate::partition::GPartition;
use crate::problem::Problem;
use crate::subset::SubsetId;

pub const SFLPCC_MAX_N: usize = 16;
pub const OUTER_MAX_N: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct FlpccSolution {
    /// Optimal symmetric rate `R`.
    pub rate: BigRational,
    /// Nonzero `λ_J` with `κ(G|_J)`, ascending by bitmask.
    pub lambda: Vec<(SubsetId, usize, BigRational)>,
    /// Number of subsets `J` the LP was allowed to use.
    pub family_size: usize,
    pub secure: bool,
}

impl FlpccSolution {
    pub fn lambda_of(&self, j: SubsetId) -> BigRational {
        self.lambda.iter().find(|(s, _, _)| *s == j).map(|e| e.2.clone()).unwrap_or_else(BigRational::zero)
    }
}

/// `J` may carry weight in the secure scheme iff no member of `J` is barred
/// from another member, and every outsider barred from something in `J`
/// knows fewer than `|J| − κ(G|_J)` of its messages.
pub fn is_admissible(p: &Problem, j: SubsetId) -> bool {
    if j.is_empty() {
        return false;
    }
    if j.iter().any(|i| !p.prohibited(i).is_disjoint(j)) {
        return false;
    }
    let k = kappa(p, j).expect("nonempty");
    let threshold = j.len() - k;
    (0..p.n())
        .filter(|&i| !j.contains(i))
        .all(|i| p.prohibited(i).is_disjoint(j) || p.side_info(i).intersection(j).len() < threshold)
}

/// Every admissible `J`, ascending by bitmask.
pub fn sflpcc_admissible(p: &Problem) -> Vec<SubsetId> {
    SubsetId::all(p.n()).filter(|&j| is_admissible(p, j)).collect()
}

/// Per-receiver constraint check of `(R, λ)` against the clique-cover LP.
pub fn flpcc_feasible(p: &Problem, rate: &BigRational, lambda: &[(SubsetId, BigRational)]) -> bool {
    if lambda.iter().any(|(j, l)| j.is_empty() || *l < BigRational::zero() || *l > BigRational::one()) {
        return false;
    }
    (0..p.n()).all(|i| {
        let mut served = BigRational::zero();
        let mut load = BigRational::zero();
        for (j, l) in lambda {
            if j.contains(i) {
                served += l / int(kappa(p, *j).expect("nonempty") as i64);
            }
            if !j.is_subset_of(p.side_info(i)) {
                load += l;
            }
        }
        *rate <= served && load <= BigRational::one()
    })
}

fn clique_cover(p: &Problem, family: &[SubsetId], secure: bool) -> Result<FlpccSolution> {
    let n = p.n();
    let mut lp = RationalLp::new();
    let r = lp.add_var("R");
    let kappas: Vec<usize> = family.iter().map(|&j| kappa(p, j)).collect::<Result<_>>()?;
    let lambdas: Vec<Var> = family.iter().map(|j| lp.add_var(format!("l{}", j.bits()))).collect();
    lp.set_objective(vec![(r, int(1))]);
    for i in 0..n {
        let mut served = vec![(r, int(1))];
        let mut load = Vec::new();
        for (k, &j) in family.iter().enumerate() {
            if j.contains(i) {
                served.push((lambdas[k], -BigRational::new(1.into(), (kappas[k] as i64).into())));
            }
            if !j.is_subset_of(p.side_info(i)) {
                load.push((lambdas[k], int(1)));
            }
        }
        lp.add_constraint(format!("serve{}", i + 1), served, Sense::Le, int(0));
        lp.add_constraint(format!("load{}", i + 1), load, Sense::Le, int(1));
    }
    let sol = lp.solve()?;
    let rate = sol.optimal_value()?.clone();
    let lambda = family
        .iter()
        .enumerate()
        .filter(|(k, _)| !sol.get(lambdas[*k]).is_zero())
        .map(|(k, &j)| (j, kappas[k], sol.get(lambdas[k]).clone()))
        .collect();
    Ok(FlpccSolution { rate, lambda, family_size: family.len(), secure })
}

fn guard(p: &Problem, what: &'static str, limit: usize) -> Result<()> {
    if p.n() > limit {
        return Err(Error::SizeGuard { what, n: p.n(), limit });
    }
    Ok(())
}

/// Clique-cover inner bound ignoring the prohibited lists.
pub fn flpcc_symmetric(p: &Problem) -> Result<FlpccSolution> {
    guard(p, "clique-cover LP", SFLPCC_MAX_N)?;
    let family: Vec<SubsetId> = SubsetId::all(p.n()).skip(1).collect();
    clique_cover(p, &family, false)
}

/// Clique-cover inner bound with `λ_J = 0` outside the admissible family.
pub fn sflpcc_symmetric(p: &Problem) -> Result<FlpccSolution> {
    guard(p, "secure clique-cover LP", SFLPCC_MAX_N)?;
    clique_cover(p, &sflpcc_admissible(p), true)
}

#[derive(Debug, Clone, Default)]
pub struct OuterOptions {
    /// State `R_i = g(B ∪ {i}) − g(B)` for every `B ⊆ B_i` rather than only
    /// `B = ∅` and `B = B_i`.
    pub full_decoding: bool,
    /// Use `g(S) ≤ g(S ∪ {i})` for every `S` rather than only `S = [n] \ {i}`.
    pub full_monotonicity: bool,
    /// Add `g(S) = g(S')` within every g-subset.
    pub g_subset_equalities: bool,
    /// Lifts the size guard.
    pub allow_large: bool,
}

#[derive(Debug, Clone)]
pub struct OuterBound {
    pub rate: BigRational,
    /// `g(S)` indexed by bitmask; `g[0] = 0`.
    pub g: Vec<BigRational>,
    pub variables: usize,
    pub constraints: usize,
    pub decoding_form: DecodingForm,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecodingForm {
    Endpoints,
    AllSubsets,
}

/// Builds the polymatroidal LP. Variables: `g(S)` for nonempty `S`, then
/// `R_1..R_n`, then `R`.
pub fn polymatroidal_lp(p: &Problem, opts: &OuterOptions) -> Result<(RationalLp, Vec<Option<Var>>, Var)> {
    if !opts.allow_large {
        guard(p, "polymatroidal LP", OUTER_MAX_N)?;
    }
    let n = p.n();
    let full = p.full();
    let mut lp = RationalLp::new();
    let mut g: Vec<Option<Var>> = vec![None; 1 << n];
    for s in SubsetId::all(n).skip(1) {
        g[s.index()] = Some(lp.add_var(format!("g{}", s.bits())));
    }
    let rates: Vec<Var> = (0..n).map(|i| lp.add_var(format!("R{}", i + 1))).collect();
    let r = lp.add_var("R");
    lp.set_objective(vec![(r, int(1))]);

    // g(∅) = 0 is realized by leaving it out of every row
    let term = |s: SubsetId, c: i64| g[s.index()].map(|v| (v, int(c)));
    let row = |parts: &[(SubsetId, i64)]| parts.iter().filter_map(|&(s, c)| term(s, c)).collect::<Vec<_>>();

    lp.add_constraint("total", row(&[(full, 1)]), Sense::Le, int(1));
    if opts.full_monotonicity {
        for s in SubsetId::all(n) {
            for i in full.difference(s).iter() {
                lp.add_constraint(format!("mono{}_{}", s.bits(), i + 1), row(&[(s.with(i), 1), (s, -1)]), Sense::Ge, int(0));
            }
        }
    } else {
        for i in 0..n {
            lp.add_constraint(format!("mono{}", i + 1), row(&[(full, 1), (full.without(i), -1)]), Sense::Ge, int(0));
        }
    }
    for s in SubsetId::all(n) {
        let free = full.difference(s);
        for i in free.iter() {
            for j in free.iter().filter(|&j| j > i) {
                lp.add_constraint(
                    format!("sub{}_{}_{}", s.bits(), i + 1, j + 1),
                    row(&[(s.with(i), 1), (s.with(j), 1), (s.with(i).with(j), -1), (s, -1)]),
                    Sense::Ge,
                    int(0),
                );
            }
        }
    }
    for i in 0..n {
        let b = p.interfering_set(i);
        let bases: Vec<SubsetId> = if opts.full_decoding {
            b.subsets().collect()
        } else if b.is_empty() {
            vec![SubsetId::EMPTY]
        } else {
            vec![SubsetId::EMPTY, b]
        };
        for base in bases {
            let mut t = row(&[(base.with(i), 1), (base, -1)]);
            t.push((rates[i], int(-1)));
            lp.add_constraint(format!("dec{}_{}", i + 1, base.bits()), t, Sense::Eq, int(0));
        }
        for j in p.prohibited(i).iter() {
            lp.add_constraint(format!("sec{}_{}", i + 1, j + 1), row(&[(b, 1), (b.without(j), -1)]), Sense::Eq, int(0));
        }
        lp.add_constraint(format!("sym{}", i + 1), vec![(rates[i], int(1)), (r, int(-1))], Sense::Eq, int(0));
    }
    if opts.g_subset_equalities {
        let part = GPartition::build(p);
        for (k, class) in part.g_subsets().iter().enumerate() {
            for w in class.windows(2) {
                lp.add_constraint(format!("class{}_{}", k + 1, w[1].bits()), row(&[(w[0], 1), (w[1], -1)]), Sense::Eq, int(0));
            }
        }
    }
    Ok((lp, g, r))
}

/// Polymatroidal upper bound on the symmetric capacity.
pub fn polymatroidal_outer_symmetric(p: &Problem) -> Result<OuterBound> {
    polymatroidal_outer_with(p, &OuterOptions::default())
}

pub fn polymatroidal_outer_with(p: &Problem, opts: &OuterOptions) -> Result<OuterBound> {
    let (lp, g, r) = polymatroidal_lp(p, opts)?;
    let sol = lp.solve()?;
    let rate = sol.optimal_value()?.clone();
    let g = g.iter().map(|v| v.map_or_else(BigRational::zero, |v| sol.get(v).clone())).collect();
    debug_assert_eq!(sol.get(r), &rate);
    Ok(OuterBound {
        rate,
        g,
        variables: lp.var_count(),
        constraints: lp.constraint_count(),
        decoding_form: if opts.full_decoding { DecodingForm::AllSubsets } else { DecodingForm::Endpoints },
        certificate: sol.certificate,
    })
}
