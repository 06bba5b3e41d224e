//! Exact rational linear programs.
//!
//! Every variable is implicitly nonnegative. Exact pivoting first runs on
//! 128-bit fractions and restarts on arbitrary precision if any operation
//! overflows. Large programs are first attempted by rounding floating-point
//! primal and dual optima and checking the duality certificate exactly.
//! Either way the returned assignment is re-checked against every
//! constraint.

mod certified;
mod scalar;
mod simplex;

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use simplex::{Outcome, StandardRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub usize);

#[derive(Debug, Clone)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(Var, BigRational)>,
    pub sense: Sense,
    pub rhs: BigRational,
}

#[derive(Debug, Clone, Default)]
pub struct RationalLp {
    names: Vec<String>,
    objective: Vec<(Var, BigRational)>,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Arithmetic {
    Fixed128,
    BigInt,
}

/// Constraint count above which `Method::Auto` tries the certified route.
pub const CERTIFY_ABOVE: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Auto,
    Simplex,
    /// Certified rounding, falling back to exact pivoting when the
    /// certificate does not check.
    Certified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// Optimal basis reached by exact pivoting.
    Simplex,
    /// Exactly verified primal and dual solutions with equal values.
    Duality,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal objective value; `None` unless optimal.
    pub value: Option<BigRational>,
    /// One value per variable; empty unless optimal.
    pub assignment: Vec<BigRational>,
    /// Dual multipliers, one per constraint, when the certified route
    /// succeeded.
    pub dual: Option<Vec<BigRational>>,
    pub pivots: usize,
    pub arithmetic: Arithmetic,
    pub certificate: Certificate,
}

impl LpSolution {
    pub fn get(&self, v: Var) -> &BigRational {
        &self.assignment[v.0]
    }

    pub fn optimal_value(&self) -> Result<&BigRational> {
        self.value.as_ref().ok_or(Error::LpStatus(match self.status {
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
            LpStatus::Optimal => "optimal",
        }))
    }
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

impl RationalLp {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>) -> Var {
        self.names.push(name.into());
        Var(self.names.len() - 1)
    }

    pub fn var_count(&self) -> usize {
        self.names.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn var_name(&self, v: Var) -> &str {
        &self.names[v.0]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn set_objective(&mut self, terms: Vec<(Var, BigRational)>) {
        self.objective = terms;
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(Var, BigRational)>,
        sense: Sense,
        rhs: BigRational,
    ) {
        self.constraints.push(Constraint { name: name.into(), terms, sense, rhs });
    }

    /// Merges duplicate variables, drops zero coefficients and flips rows so
    /// the right-hand side is nonnegative and `≥` appears only with a
    /// positive right-hand side.
    fn standardize(&self) -> Result<(Vec<StandardRow>, Vec<BigRational>)> {
        let nv = self.names.len();
        if nv >= u32::MAX as usize / 2 || self.constraints.len() >= u32::MAX as usize / 2 {
            return Err(Error::LpDimension(format!("{} variables, {} constraints", nv, self.constraints.len())));
        }
        let mut objective = vec![BigRational::zero(); nv];
        for (v, c) in &self.objective {
            self.check_var(*v)?;
            objective[v.0] += c;
        }
        let mut rows = Vec::with_capacity(self.constraints.len());
        for c in &self.constraints {
            let mut terms: Vec<(usize, BigRational)> = Vec::with_capacity(c.terms.len());
            let mut sorted = c.terms.clone();
            sorted.sort_by_key(|(v, _)| *v);
            for (v, a) in sorted {
                self.check_var(v)?;
                match terms.last_mut() {
                    Some((j, acc)) if *j == v.0 => *acc += a,
                    _ => terms.push((v.0, a)),
                }
            }
            terms.retain(|(_, a)| !a.is_zero());
            let (mut sense, mut rhs) = (c.sense, c.rhs.clone());
            // a zero right-hand side lets `≥` rows start on their slack
            if rhs.is_negative() || (rhs.is_zero() && sense == Sense::Ge) {
                rhs = -rhs;
                for t in terms.iter_mut() {
                    t.1 = -t.1.clone();
                }
                sense = match sense {
                    Sense::Le => Sense::Ge,
                    Sense::Ge => Sense::Le,
                    Sense::Eq => Sense::Eq,
                };
            }
            rows.push(StandardRow { terms, sense, rhs });
        }
        Ok((rows, objective))
    }

    fn check_var(&self, v: Var) -> Result<()> {
        if v.0 < self.names.len() {
            Ok(())
        } else {
            Err(Error::LpDimension(format!("unknown variable index {}", v.0)))
        }
    }

    pub fn solve(&self) -> Result<LpSolution> {
        self.solve_with(Method::Auto)
    }

    pub fn solve_with(&self, method: Method) -> Result<LpSolution> {
        let (rows, objective) = self.standardize()?;
        let try_certified = match method {
            Method::Auto => self.constraints.len() > CERTIFY_ABOVE,
            Method::Simplex => false,
            Method::Certified => true,
        };
        if try_certified {
            if let Some(c) = certified::solve(self, &objective) {
                let sol = LpSolution {
                    status: LpStatus::Optimal,
                    value: Some(c.value),
                    assignment: c.primal,
                    dual: Some(c.dual),
                    pivots: 0,
                    arithmetic: Arithmetic::BigInt,
                    certificate: Certificate::Duality,
                };
                self.verify(&sol)?;
                return Ok(sol);
            }
        }
        let nv = self.names.len();
        let (run, arithmetic) = match simplex::run::<scalar::Small>(nv, &rows, &objective) {
            Ok(run) => (run, Arithmetic::Fixed128),
            Err(simplex::Overflow) => match simplex::run::<BigRational>(nv, &rows, &objective) {
                Ok(run) => (run, Arithmetic::BigInt),
                Err(simplex::Overflow) => unreachable!("arbitrary precision cannot overflow"),
            },
        };
        let (status, value, assignment) = match run.outcome {
            Outcome::Optimal { value, x } => (LpStatus::Optimal, Some(value), x),
            Outcome::Infeasible => (LpStatus::Infeasible, None, Vec::new()),
            Outcome::Unbounded => (LpStatus::Unbounded, None, Vec::new()),
        };
        let sol = LpSolution {
            status,
            value,
            assignment,
            dual: None,
            pivots: run.pivots,
            arithmetic,
            certificate: Certificate::Simplex,
        };
        if sol.status == LpStatus::Optimal {
            self.verify(&sol)?;
        }
        Ok(sol)
    }

    /// Re-checks an optimal assignment: nonnegativity, every constraint and
    /// the objective value, all exactly.
    pub fn verify(&self, sol: &LpSolution) -> Result<()> {
        let x = &sol.assignment;
        if x.len() != self.names.len() {
            return Err(Error::LpVerification("assignment length".into()));
        }
        if let Some(k) = x.iter().position(|v| v.is_negative()) {
            return Err(Error::LpVerification(format!("{} is negative", self.names[k])));
        }
        let eval = |terms: &[(Var, BigRational)]| terms.iter().fold(BigRational::zero(), |acc, (v, a)| acc + a * &x[v.0]);
        for c in &self.constraints {
            let lhs = eval(&c.terms);
            let ok = match c.sense {
                Sense::Le => lhs <= c.rhs,
                Sense::Eq => lhs == c.rhs,
                Sense::Ge => lhs >= c.rhs,
            };
            if !ok {
                return Err(Error::LpVerification(format!("constraint {} violated", c.name)));
            }
        }
        if sol.value.as_ref() != Some(&eval(&self.objective)) {
            return Err(Error::LpVerification("objective value".into()));
        }
        Ok(())
    }

    /// CPLEX-style LP text. Coefficients are written as exact fractions.
    pub fn to_lp_text(&self) -> String {
        let fmt_terms = |terms: &[(Var, BigRational)]| {
            if terms.is_empty() {
                return "0".to_string();
            }
            let mut s = String::new();
            for (k, (v, a)) in terms.iter().enumerate() {
                let sign = if a.is_negative() { "-" } else { "+" };
                if k > 0 || a.is_negative() {
                    s.push_str(sign);
                    s.push(' ');
                }
                let mag = a.abs();
                if mag != int(1) {
                    let _ = write!(s, "{} ", mag);
                }
                s.push_str(&self.names[v.0]);
                s.push(' ');
            }
            s.trim_end().to_string()
        };
        let mut out = String::from("Maximize\n obj: ");
        out.push_str(&fmt_terms(&self.objective));
        out.push_str("\nSubject To\n");
        for c in &self.constraints {
            let op = match c.sense {
                Sense::Le => "<=",
                Sense::Eq => "=",
                Sense::Ge => ">=",
            };
            let _ = writeln!(out, " {}: {} {} {}", c.name, fmt_terms(&c.terms), op, c.rhs);
        }
        out.push_str("Bounds\n");
        for name in &self.names {
            let _ = writeln!(out, " {} >= 0", name);
        }
        out.push_str("End\n");
        out
    }
}
