//! Ground truth for tiny instances: one-bit messages, arbitrary encoders.
//!
//! Mutual information is kept exact as `Σ_p c_p log2(p)` over primes `p`
//! with rational `c_p`. Logarithms of distinct primes are linearly
//! independent over the rationals, so the form is canonical and zero
//! exactly when every coefficient is.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::codes::CodeSpec;
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::subset::SubsetId;

pub const ORACLE_MAX_N: usize = 4;

/// Deterministic encoder: input `x` (bit `i` is message `i`) maps to
/// `table[x] ∈ [0, 2^r)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruthTableCode {
    pub n: usize,
    pub r: usize,
    pub table: Vec<u32>,
}

impl TruthTableCode {
    pub fn new(n: usize, r: usize, table: Vec<u32>) -> Result<Self> {
        if n > 20 || r > 31 {
            return Err(Error::BadCode(format!("truth table too large: n = {n}, r = {r}")));
        }
        if table.len() != 1 << n {
            return Err(Error::Dimension(format!("table has {} entries, need {}", table.len(), 1usize << n)));
        }
        if let Some(v) = table.iter().find(|&&v| v >> r != 0) {
            return Err(Error::BadCode(format!("codeword {v} exceeds {r} bits")));
        }
        Ok(TruthTableCode { n, r, table })
    }

    pub fn from_fn(n: usize, r: usize, f: impl Fn(u32) -> u32) -> Result<Self> {
        Self::new(n, r, (0..1u32 << n).map(f).collect())
    }

    /// Tabulates a binary linear code with one symbol per message; output
    /// bit `k` is row `k` of `M`.
    pub fn from_linear(spec: &CodeSpec) -> Result<Self> {
        if spec.field.degree() != 1 || spec.t.iter().any(|&t| t != 1) {
            return Err(Error::BadCode("only GF(2) codes with t = 1 have a truth table here".into()));
        }
        let n = spec.t.len();
        let masks: Vec<u32> = (0..spec.r)
            .map(|k| spec.matrix.row(k).iter().enumerate().filter(|(_, &v)| v == 1).map(|(c, _)| 1u32 << c).sum())
            .collect();
        Self::from_fn(n, spec.r, |x| {
            masks.iter().enumerate().map(|(k, &m)| ((x & m).count_ones() & 1) << k).sum()
        })
    }
}

/// `Σ_p c_p log2(p)` bits, keyed by prime; key 2 carries the rational part.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExactMI {
    terms: BTreeMap<u64, BigRational>,
}

fn factor(mut v: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= v {
        let mut e = 0;
        while v % d == 0 {
            v /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if v > 1 {
        out.push((v, 1));
    }
    out
}

impl ExactMI {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn bits(value: BigRational) -> Self {
        let mut out = Self::zero();
        out.add_term(2, value);
        out
    }

    fn add_term(&mut self, prime: u64, c: BigRational) {
        let entry = self.terms.entry(prime).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&prime);
        }
    }

    /// Adds `c · log2(v)`.
    fn add_log(&mut self, c: &BigRational, v: u64) {
        for (p, e) in factor(v) {
            self.add_term(p, c * BigRational::from_integer(BigInt::from(e)));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when it is rational.
    pub fn rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&2).cloned(),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|(&p, c)| c.to_f64().unwrap_or(f64::NAN) * (p as f64).log2()).sum()
    }
}

impl fmt::Display for ExactMI {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&p, c)| if p == 2 { c.to_string() } else { format!("{c}*log2({p})") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Σ_y c_y log2(c_y)` over codeword counts within each class of inputs
/// sharing the bits in `fixed`.
fn count_entropy_sum(code: &TruthTableCode, fixed: SubsetId, acc: &mut ExactMI, sign: i64) {
    let mut counts: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for (x, &y) in code.table.iter().enumerate() {
        *counts.entry((x as u32 & fixed.bits(), y)).or_insert(0) += 1;
    }
    let s = BigRational::from_integer(BigInt::from(sign));
    for &c in counts.values() {
        acc.add_log(&(&s * BigRational::from_integer(BigInt::from(c))), c);
    }
}

/// `I(X_j; Y | X_A)` under independent uniform bits:
/// `1 − (S_A − S_{A ∪ {j}}) / 2^n` with `S_T = Σ c log2 c` over the codeword
/// counts of each assignment to `T`.
pub fn exact_conditional_mi(code: &TruthTableCode, j: usize, a: SubsetId) -> Result<ExactMI> {
    if j >= code.n || a.contains(j) || !a.is_subset_of(SubsetId::full(code.n)) {
        return Err(Error::BadCode(format!("need j ∉ A within {} messages", code.n)));
    }
    let mut s = ExactMI::zero();
    count_entropy_sum(code, a, &mut s, 1);
    count_entropy_sum(code, a.with(j), &mut s, -1);
    let scale = BigRational::new(BigInt::from(-1), BigInt::from(1u64 << code.n));
    let mut out = ExactMI::bits(BigRational::from_integer(1.into()));
    for (p, c) in s.terms {
        out.add_term(p, c * &scale);
    }
    Ok(out)
}

/// `(y, x_A)` determines `x_i`.
pub fn decodes(code: &TruthTableCode, i: usize, a: SubsetId) -> bool {
    let mut seen: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    for (x, &y) in code.table.iter().enumerate() {
        let bit = (x as u32 >> i) & 1;
        if *seen.entry((y, x as u32 & a.bits())).or_insert(bit) != bit {
            return false;
        }
    }
    true
}

/// Every decoding and zero-leakage condition of `p`.
pub fn satisfies(p: &Problem, code: &TruthTableCode) -> Result<bool> {
    for i in 0..p.n() {
        if !decodes(code, i, p.side_info(i)) {
            return Ok(false);
        }
        for j in p.prohibited(i).iter() {
            if !exact_conditional_mi(code, j, p.side_info(i))?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum OracleVerdict {
    Feasible { code: TruthTableCode },
    NoCodeFound { checked_up_to: usize },
}

impl OracleVerdict {
    pub fn code(&self) -> Option<&TruthTableCode> {
        match self {
            OracleVerdict::Feasible { code } => Some(code),
            OracleVerdict::NoCodeFound { .. } => None,
        }
    }
}

/// One `(i, j, x_{A_i})` class: its inputs split by `x_j`, whose codeword
/// counts must agree at the end.
struct Balance {
    /// Per codeword label, count with `x_j = 0` minus count with `x_j = 1`.
    diff: Vec<i32>,
    /// `Σ max(diff, 0)` and `Σ max(-diff, 0)`.
    surplus: [i32; 2],
    /// Unassigned inputs with `x_j = 0` and with `x_j = 1`.
    remaining: [i32; 2],
}

/// Depth-first search over encoders up to relabeling of codewords: inputs
/// are assigned in ascending order and a new label may only be the next
/// unused one, so each partition of the inputs is visited once.
struct Search<'a> {
    labels: u32,
    assignment: Vec<u32>,
    /// Inputs that some receiver must tell apart, earlier ones only.
    conflicts: Vec<Vec<u32>>,
    /// Balance classes touched by each input, with the side of `x_j`.
    touches: Vec<Vec<(usize, usize)>>,
    balances: Vec<Balance>,
    p: &'a Problem,
}

impl<'a> Search<'a> {
    fn new(p: &'a Problem, r: usize) -> Self {
        let n = p.n();
        let size = 1usize << n;
        let labels = 1u32 << r;
        let mut conflicts = vec![Vec::new(); size];
        for x in 0..size as u32 {
            for x2 in 0..x {
                let apart = (0..n).any(|i| {
                    let a = p.side_info(i).bits();
                    (x ^ x2) >> i & 1 == 1 && (x & a) == (x2 & a)
                });
                if apart {
                    conflicts[x as usize].push(x2);
                }
            }
        }
        let mut touches = vec![Vec::new(); size];
        let mut balances = Vec::new();
        let mut index: BTreeMap<(usize, usize, u32), usize> = BTreeMap::new();
        for i in 0..n {
            let a = p.side_info(i).bits();
            for j in p.prohibited(i).iter() {
                for x in 0..size as u32 {
                    let key = (i, j, x & a);
                    let b = *index.entry(key).or_insert_with(|| {
                        balances.push(Balance { diff: vec![0; labels as usize], surplus: [0, 0], remaining: [0, 0] });
                        balances.len() - 1
                    });
                    let side = (x >> j & 1) as usize;
                    balances[b].remaining[side] += 1;
                    touches[x as usize].push((b, side));
                }
            }
        }
        Search { labels, assignment: Vec::with_capacity(size), conflicts, touches, balances, p }
    }

    /// Applies `delta = ±1` for input `x` at label `y`; returns whether every
    /// touched class can still balance.
    fn apply(&mut self, x: usize, y: u32, delta: i32) -> bool {
        let mut ok = true;
        for &(b, side) in &self.touches[x] {
            let bal = &mut self.balances[b];
            let d = &mut bal.diff[y as usize];
            let before = *d;
            *d += if side == 0 { delta } else { -delta };
            let after = *d;
            bal.surplus[0] += after.max(0) - before.max(0);
            bal.surplus[1] += (-after).max(0) - (-before).max(0);
            bal.remaining[side] -= delta;
            // surplus of x_j = 0 must be met by future x_j = 1 inputs
            if bal.surplus[0] > bal.remaining[1] || bal.surplus[1] > bal.remaining[0] {
                ok = false;
            }
        }
        ok
    }

    fn run(&mut self, used: u32) -> bool {
        let x = self.assignment.len();
        if x == 1 << self.p.n() {
            return true;
        }
        let top = (used + 1).min(self.labels);
        for y in 0..top {
            if self.conflicts[x].iter().any(|&x2| self.assignment[x2 as usize] == y) {
                continue;
            }
            let ok = self.apply(x, y, 1);
            if ok {
                self.assignment.push(y);
                if self.run(used.max(y + 1)) {
                    return true;
                }
                self.assignment.pop();
            }
            self.apply(x, y, -1);
        }
        false
    }
}

fn search(p: &Problem, r: usize) -> Option<TruthTableCode> {
    let mut s = Search::new(p, r);
    if !s.run(0) {
        return None;
    }
    Some(TruthTableCode::new(p.n(), r, s.assignment).expect("labels fit r bits"))
}

/// Smallest `r ≤ r_max` admitting a code with `t_i = 1`, and the
/// lexicographically first canonical encoder at that length. Existence is
/// monotone in `r`, so `r_max` is tried first to settle infeasibility.
pub fn exact_feasible(p: &Problem, r_max: usize) -> Result<OracleVerdict> {
    if p.n() > ORACLE_MAX_N {
        return Err(Error::SizeGuard { what: "exhaustive oracle", n: p.n(), limit: ORACLE_MAX_N });
    }
    if r_max == 0 || r_max > p.n() {
        return Err(Error::BadCode(format!("r_max must be in 1..={}", p.n())));
    }
    if search(p, r_max).is_none() {
        return Ok(OracleVerdict::NoCodeFound { checked_up_to: r_max });
    }
    for r in 1..=r_max {
        if let Some(code) = search(p, r) {
            debug_assert!(satisfies(p, &code).unwrap_or(false));
            return Ok(OracleVerdict::Feasible { code });
        }
    }
    unreachable!("a code exists at r_max")
}
