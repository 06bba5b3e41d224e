//! Worked instances with frozen expected values, recomputed and compared
//! field by field.

use num_rational::BigRational;
use serde::Serialize;

use crate::codes::{verify_linear_code, CodeSpec};
use crate::error::Result;
use crate::fixtures;
use crate::gf::{FiniteField, GFMatrix};
use crate::oracle::{exact_feasible, OracleVerdict};
use crate::rates::flpcc_feasible;
use crate::report::{analyze_full, fraction, AnalyzeOptions};
use crate::subset::SubsetId;

pub const IDS: &[&str] = &["example1", "example2", "example3", "example4", "toy"];

#[derive(Debug, Clone, Serialize)]
pub struct FieldCheck {
    pub field: String,
    pub expected: String,
    pub computed: String,
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Reproduction {
    pub id: String,
    pub checks: Vec<FieldCheck>,
    pub all_match: bool,
}

impl Reproduction {
    pub fn mismatches(&self) -> impl Iterator<Item = &FieldCheck> {
        self.checks.iter().filter(|c| !c.matches)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("{}:\n", self.id);
        for c in &self.checks {
            let mark = if c.matches { "ok  " } else { "DIFF" };
            out.push_str(&format!(
                "  {mark} {}: expected {}, computed {}\n",
                c.field, c.expected, c.computed
            ));
        }
        out.push_str(if self.all_match { "all fields match\n" } else { "MISMATCH\n" });
        out
    }
}

#[derive(Default)]
struct Checks(Vec<FieldCheck>);

impl Checks {
    fn add(&mut self, field: &str, expected: impl ToString, computed: impl ToString) {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        let matches = expected == computed;
        self.0.push(FieldCheck { field: field.into(), expected, computed, matches });
    }
}

fn s(labels: &[usize]) -> SubsetId {
    SubsetId::from_one_based(labels)
}

fn opt(v: Option<&str>) -> String {
    v.unwrap_or("none").to_string()
}

/// Runs the pipeline for `id`; `None` for an unknown id.
pub fn reproduce(id: &str) -> Option<Result<Reproduction>> {
    let run = match id {
        "example1" => example1,
        "example2" => example2,
        "example3" => example3,
        "example4" => example4,
        "toy" => toy,
        _ => return None,
    };
    Some(run().map(|checks| {
        let all_match = checks.0.iter().all(|c| c.matches);
        Reproduction { id: id.into(), checks: checks.0, all_match }
    }))
}

fn example1() -> Result<Checks> {
    let p = fixtures::example1();
    let a = analyze_full(&p, AnalyzeOptions::default())?;
    let r = &a.report;
    let mut c = Checks::default();
    c.add("beta_mais", 3, r.beta_mais);
    c.add("sflpcc.rate", "1/4", opt(r.sflpcc.as_ref().map(|x| x.rate.as_str())));
    c.add("outer.rate", "1/4", opt(r.outer.rate()));
    c.add("capacity", "1/4", opt(r.capacity.as_ref().map(|x| x.symmetric_capacity.as_str())));
    // frozen from the first verified run
    c.add("flpcc.rate", "1/3", opt(r.flpcc.as_ref().map(|x| x.rate.as_str())));
    let quarter = BigRational::new(1.into(), 4.into());
    let cover: Vec<_> = [s(&[1, 2, 8]), s(&[2, 6, 7, 9]), s(&[3, 9]), s(&[4, 5])]
        .into_iter()
        .map(|j| (j, quarter.clone()))
        .collect();
    c.add("quarter_cover_feasible", true, flpcc_feasible(&p, &quarter, &cover));
    Ok(c)
}

fn example2() -> Result<Checks> {
    let p = fixtures::example2();
    let a = analyze_full(&p, AnalyzeOptions { outer: false })?;
    let part = &a.partition;
    let expected: [Vec<SubsetId>; 5] = [
        vec![s(&[3]), s(&[3, 4])],
        vec![s(&[2, 4, 5]), s(&[1, 4, 5]), s(&[1, 2, 4]), s(&[1, 2, 4, 5])],
        vec![s(&[1, 3]), s(&[1, 3, 4])],
        vec![s(&[2, 3]), s(&[2, 3, 4])],
        vec![
            s(&[1, 2, 3]),
            s(&[1, 2, 3, 4]),
            s(&[3, 5]),
            s(&[1, 3, 5]),
            s(&[2, 3, 5]),
            s(&[1, 2, 3, 5]),
            s(&[3, 4, 5]),
            s(&[1, 3, 4, 5]),
            s(&[2, 3, 4, 5]),
            s(&[1, 2, 3, 4, 5]),
        ],
    ];
    let mut c = Checks::default();
    c.add("gamma", 6, part.gamma());
    for (k, members) in expected.iter().enumerate() {
        let mut want = members.clone();
        want.sort();
        let class = part.class_of(want[0]);
        let mut got = part.class_members(class);
        got.sort();
        let render = |v: &[SubsetId]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        c.add(&format!("N_{}", k + 1), render(&want), render(&got));
    }
    // frozen from the first verified run
    c.add("remaining_size", 12, part.remaining_len());
    Ok(c)
}

fn example3() -> Result<Checks> {
    let p = fixtures::example1();
    let a = analyze_full(&p, AnalyzeOptions { outer: false })?;
    let mut c = Checks::default();
    c.add("beta_mais", 3, a.report.beta_mais);
    c.add("beta_smais", 4, a.report.smais.beta);
    Ok(c)
}

fn example4() -> Result<Checks> {
    let p = fixtures::example2();
    let a = analyze_full(&p, AnalyzeOptions { outer: false })?;
    let r = &a.report;
    let n5 = a.partition.class_of(s(&[3, 5]));
    let mut c = Checks::default();
    c.add("infeasible", true, r.infeasible);
    let chain = r.subset_chain.witnesses.iter().any(|w| {
        w.class == n5 + 1 && w.subset == [1, 3, 5] && w.superset == [1, 3, 4, 5] && w.receiver == 4
    });
    c.add("subset_chain witness {1,3,5} ∪ {4} ⊆ {1,3,4,5}", true, chain);
    c.add("rho(N_5)", 4, a.bounds.smais.state.rho[n5]);
    let min = a.partition.g_subset(n5).iter().map(|x| x.len()).min().unwrap_or(0);
    c.add("min |S| over N_5", 2, min);
    let fires = r.rho_excess.witnesses.iter().any(|w| w.class == n5 + 1);
    c.add("rho_excess fires on N_5", true, fires);
    Ok(c)
}

fn toy() -> Result<Checks> {
    let p = fixtures::toy();
    let a = analyze_full(&p, AnalyzeOptions::default())?;
    let mut c = Checks::default();
    c.add("beta_smais", 2, a.report.smais.beta);
    let found = |v: &OracleVerdict| if v.code().is_some() { "code found" } else { "no code" };
    c.add("oracle r=1", "no code", found(&exact_feasible(&p, 1)?));
    let v2 = exact_feasible(&p, 2)?;
    c.add("oracle r=2", "code found", found(&v2));
    let rate = v2.code().map(|code| fraction(&BigRational::new(1.into(), (code.r as i64).into())));
    c.add("oracle rate", "1/2", opt(rate.as_deref()));
    let f = FiniteField::new(1)?;
    let spec = CodeSpec::from_matrix(f, vec![1, 1, 1], GFMatrix::from_rows(vec![vec![1, 0, 0], vec![0, 1, 1]])?)?;
    c.add("linear code (x1, x2+x3) verifies", true, verify_linear_code(&p, &spec)?.all_pass);
    c.add("sflpcc.rate", "1/2", opt(a.report.sflpcc.as_ref().map(|x| x.rate.as_str())));
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_id() {
        assert!(reproduce("example9").is_none());
    }

    #[test]
    fn small_instances_reproduce() {
        for id in ["example2", "example3", "toy"] {
            let r = reproduce(id).unwrap().unwrap();
            assert!(r.all_match, "{}", r.render_text());
        }
    }

    #[test]
    fn rho_on_last_class_differs_from_stated_value() {
        let r = reproduce("example4").unwrap().unwrap();
        let diffs: Vec<&str> = r.mismatches().map(|c| c.field.as_str()).collect();
        assert_eq!(diffs, vec!["rho(N_5)"]);
    }
}
