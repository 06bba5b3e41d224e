//! Linear index codes over `GF(2^m)`: Cauchy and systematic MDS blocks,
//! assembly of the clique-cover scheme into one encoding matrix, rank-based
//! verification, and a seeded search over randomized assemblies.
//!
//! An encoding matrix `M` has `r` rows and `Σ t_i` columns; the columns of
//! message `i` are contiguous and in message order, so `y = M x`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FiniteField, GFMatrix};
use crate::problem::Problem;
use crate::rates::FlpccSolution;
use crate::subset::SubsetId;

/// Longest code the assembler will emit, in output symbols or parities.
pub const MAX_CODE_LENGTH: usize = 4096;

/// Entries `1 / (x_a + y_b)`; every square submatrix is nonsingular when the
/// points are pairwise distinct.
pub fn cauchy_from_points(xs: &[u16], ys: &[u16], f: &FiniteField) -> Result<GFMatrix> {
    let mut all: Vec<u16> = xs.iter().chain(ys).copied().collect();
    if all.iter().any(|&v| !f.contains(v)) {
        return Err(Error::BadCode("Cauchy point outside the field".into()));
    }
    all.sort_unstable();
    if all.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::BadCode("Cauchy points are not distinct".into()));
    }
    let mut m = GFMatrix::zeros(xs.len(), ys.len());
    for (a, &x) in xs.iter().enumerate() {
        for (b, &y) in ys.iter().enumerate() {
            m.set(a, b, f.inv(f.add(x, y)));
        }
    }
    Ok(m)
}

fn check_points(rows: usize, cols: usize, f: &FiniteField) -> Result<()> {
    if rows + cols > f.order() {
        return Err(Error::FieldTooSmall { q: f.order(), needed: rows + cols });
    }
    Ok(())
}

/// Cauchy matrix on the points `0..rows` and `rows..rows+cols`.
pub fn cauchy_superregular(rows: usize, cols: usize, f: &FiniteField) -> Result<GFMatrix> {
    check_points(rows, cols, f)?;
    let xs: Vec<u16> = (0..rows as u16).collect();
    let ys: Vec<u16> = (rows as u16..(rows + cols) as u16).collect();
    cauchy_from_points(&xs, &ys, f)
}

/// Cauchy matrix on `rows + cols` distinct points drawn uniformly.
pub fn random_cauchy(rows: usize, cols: usize, f: &FiniteField, rng: &mut impl Rng) -> Result<GFMatrix> {
    check_points(rows, cols, f)?;
    let pts: Vec<u16> = sample(rng, f.order(), rows + cols).into_iter().map(|v| v as u16).collect();
    cauchy_from_points(&pts[..rows], &pts[rows..], f)
}

/// Generator `[I | C]` of a systematic `(j_size + kappa, j_size)` MDS code.
/// `C` is the all-ones column when `kappa = 1`, otherwise a Cauchy block.
pub fn systematic_mds(j_size: usize, kappa: usize, f: &FiniteField) -> Result<GFMatrix> {
    let parity = mds_parity(j_size, kappa, f)?;
    let mut g = GFMatrix::zeros(j_size, j_size + kappa);
    for a in 0..j_size {
        g.set(a, a, 1);
        for b in 0..kappa {
            g.set(a, j_size + b, parity.get(a, b));
        }
    }
    Ok(g)
}

fn mds_parity(j_size: usize, kappa: usize, f: &FiniteField) -> Result<GFMatrix> {
    if j_size == 0 || kappa == 0 || kappa > j_size {
        return Err(Error::BadCode(format!("no systematic MDS code with |J| = {j_size}, kappa = {kappa}")));
    }
    if kappa == 1 {
        return GFMatrix::from_rows(vec![vec![1]; j_size]);
    }
    cauchy_superregular(j_size, kappa, f)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Checks every square submatrix.
pub fn is_superregular(m: &GFMatrix, f: &FiniteField) -> bool {
    for size in 1..=m.rows().min(m.cols()) {
        let row_sets = combinations(m.rows(), size);
        for cols in combinations(m.cols(), size) {
            let sub = m.select_columns(&cols);
            if row_sets.iter().any(|rows| sub.select_rows(rows).rank(f) < size) {
                return false;
            }
        }
    }
    true
}

/// Checks `samples` random square submatrices.
pub fn sampled_superregular(m: &GFMatrix, f: &FiniteField, samples: usize, rng: &mut impl Rng) -> bool {
    let top = m.rows().min(m.cols());
    (0..samples).all(|_| {
        let size = rng.random_range(1..=top);
        let rows = sample(rng, m.rows(), size).into_vec();
        let cols = sample(rng, m.cols(), size).into_vec();
        m.select_rows(&rows).select_columns(&cols).rank(f) == size
    })
}

/// Metadata for one subproblem of an assembled code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    /// One-based message labels of `J`.
    pub subset: Vec<usize>,
    pub kappa: usize,
    /// Number of symbol positions of each member message coded in `J`.
    pub layers: usize,
    /// `|J| × κ` parity block, hex symbols.
    pub parity: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodeSpec {
    pub field: FiniteField,
    pub t: Vec<usize>,
    pub r: usize,
    /// `r × Σ t_i` encoding matrix.
    pub matrix: GFMatrix,
    pub blocks: Vec<BlockSpec>,
    /// Total parity symbols `K` entering the outer stage.
    pub parity_count: usize,
    /// `r × K` outer combining matrix.
    pub outer: Option<GFMatrix>,
    /// Seed and attempt index that produced the code.
    pub seed: Option<u64>,
    pub attempt: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeDoc {
    m: u32,
    modulus: String,
    t: Vec<usize>,
    r: usize,
    #[serde(rename = "M")]
    matrix: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    blocks: Vec<BlockSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parity_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    outer: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    attempt: Option<usize>,
}

fn parse_hex(s: &str) -> Result<u32> {
    let digits = s.trim().trim_start_matches("0x").trim_start_matches("0X");
    u32::from_str_radix(digits, 16).map_err(|_| Error::BadCode(format!("bad hex symbol {s:?}")))
}

fn hex_rows(m: &GFMatrix, f: &FiniteField) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(|&v| f.format_symbol(v)).collect()).collect()
}

fn parse_rows(rows: &[Vec<String>], f: &FiniteField) -> Result<GFMatrix> {
    let parsed = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| {
                    let v = parse_hex(s)?;
                    if v as usize >= f.order() {
                        return Err(Error::BadCode(format!("symbol {s} outside GF(2^{})", f.degree())));
                    }
                    Ok(v as u16)
                })
                .collect::<Result<Vec<u16>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    GFMatrix::from_rows(parsed)
}

impl CodeSpec {
    /// Bare code from an encoding matrix.
    pub fn from_matrix(field: FiniteField, t: Vec<usize>, matrix: GFMatrix) -> Result<Self> {
        let spec = CodeSpec {
            field,
            r: matrix.rows(),
            t,
            matrix,
            blocks: Vec::new(),
            parity_count: 0,
            outer: None,
            seed: None,
            attempt: None,
        };
        spec.check_shape()?;
        Ok(spec)
    }

    pub fn total_symbols(&self) -> usize {
        self.t.iter().sum()
    }

    fn check_shape(&self) -> Result<()> {
        if self.matrix.rows() != self.r {
            return Err(Error::Dimension(format!("M has {} rows, r = {}", self.matrix.rows(), self.r)));
        }
        if self.matrix.cols() != self.total_symbols() {
            return Err(Error::Dimension(format!(
                "M has {} columns, t sums to {}",
                self.matrix.cols(),
                self.total_symbols()
            )));
        }
        if !self.matrix.all_in_field(&self.field) {
            return Err(Error::BadCode("matrix entry outside the field".into()));
        }
        Ok(())
    }

    /// Columns of `M` belonging to the messages in `set`.
    pub fn columns_of(&self, set: SubsetId) -> Vec<usize> {
        let mut out = Vec::new();
        let mut offset = 0;
        for (i, &ti) in self.t.iter().enumerate() {
            if set.contains(i) {
                out.extend(offset..offset + ti);
            }
            offset += ti;
        }
        out
    }

    pub fn rank_of(&self, set: SubsetId) -> usize {
        self.matrix.select_columns(&self.columns_of(set)).rank(&self.field)
    }

    pub fn to_json(&self) -> String {
        let doc = CodeDoc {
            m: self.field.degree(),
            modulus: format!("{:#x}", self.field.modulus()),
            t: self.t.clone(),
            r: self.r,
            matrix: hex_rows(&self.matrix, &self.field),
            blocks: self.blocks.clone(),
            parity_count: (self.parity_count > 0).then_some(self.parity_count),
            outer: self.outer.as_ref().map(|h| hex_rows(h, &self.field)),
            seed: self.seed,
            attempt: self.attempt,
        };
        serde_json::to_string_pretty(&doc).expect("code serializes")
    }

    pub fn parse(document: &str) -> Result<Self> {
        let doc: CodeDoc = serde_json::from_str(document).map_err(|e| Error::BadCode(e.to_string()))?;
        let field = FiniteField::with_modulus(doc.m, parse_hex(&doc.modulus)?)?;
        let matrix = if doc.matrix.is_empty() {
            GFMatrix::zeros(0, doc.t.iter().sum())
        } else {
            parse_rows(&doc.matrix, &field)?
        };
        let outer = doc.outer.as_deref().map(|rows| parse_rows(rows, &field)).transpose()?;
        let spec = CodeSpec {
            field,
            t: doc.t,
            r: doc.r,
            matrix,
            blocks: doc.blocks,
            parity_count: doc.parity_count.unwrap_or(0),
            outer,
            seed: doc.seed,
            attempt: doc.attempt,
        };
        spec.check_shape()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodingCheck {
    pub receiver: usize,
    /// `rank(M_{B_i ∪ {i}})`.
    pub rank_with: usize,
    /// `rank(M_{B_i})`.
    pub rank_without: usize,
    pub needed: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecurityCheck {
    pub receiver: usize,
    pub message: usize,
    /// `rank(M_{B_i ∪ {i}})`: what the receiver cannot cancel.
    pub rank_unknown: usize,
    /// `rank(M_{(B_i ∪ {i}) \ {j}})`.
    pub rank_unknown_without: usize,
    /// `(rank(M_{B_i}), rank(M_{B_i \ {j}}))`.
    pub interfering_ranks: (usize, usize),
    /// Symbols of `x_j` revealed: `I(X_j; Y | X_{A_i}) / log2 q`.
    pub leakage: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub field: String,
    pub t: Vec<usize>,
    pub r: usize,
    /// `t_i / r` per receiver.
    pub rates: Vec<String>,
    pub decoding: Vec<DecodingCheck>,
    pub security: Vec<SecurityCheck>,
    pub decoding_pass: bool,
    pub security_pass: bool,
    pub all_pass: bool,
}

impl VerificationReport {
    pub fn passed_checks(&self) -> usize {
        self.decoding.iter().filter(|c| c.pass).count() + self.security.iter().filter(|c| c.pass).count()
    }

    pub fn total_checks(&self) -> usize {
        self.decoding.len() + self.security.len()
    }

    /// One line naming the failed checks.
    pub fn failure_summary(&self) -> String {
        let dec: Vec<String> = self.decoding.iter().filter(|c| !c.pass).map(|c| format!("decode {}", c.receiver)).collect();
        let sec: Vec<String> = self
            .security
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("secure ({},{}) leaks {}", c.receiver, c.message, c.leakage))
            .collect();
        let all: Vec<String> = dec.into_iter().chain(sec).collect();
        if all.is_empty() {
            "all checks pass".into()
        } else {
            format!("{} of {} checks fail: {}", all.len(), self.total_checks(), all.join(", "))
        }
    }
}

fn ratio_string(num: usize, den: usize) -> String {
    if den == 0 {
        return "undefined".into();
    }
    BigRational::new(BigInt::from(num), BigInt::from(den)).to_string()
}

/// Decoding of `x_i` holds iff `rank(M_{B_i ∪ {i}}) − rank(M_{B_i}) = t_i`.
/// The leakage of `x_j` to receiver `i` is
/// `rank(M_{B_i ∪ {i}}) − rank(M_{(B_i ∪ {i}) \ {j}})` symbols; when decoding
/// holds this equals `rank(M_{B_i}) − rank(M_{B_i \ {j}})`.
pub fn verify_linear_code(p: &Problem, spec: &CodeSpec) -> Result<VerificationReport> {
    if spec.t.len() != p.n() {
        return Err(Error::Dimension(format!("code has {} messages, problem has {}", spec.t.len(), p.n())));
    }
    spec.check_shape()?;
    let mut decoding = Vec::with_capacity(p.n());
    let mut security = Vec::new();
    for i in 0..p.n() {
        let b = p.interfering_set(i);
        let unknown = b.with(i);
        let rank_with = spec.rank_of(unknown);
        let rank_without = spec.rank_of(b);
        decoding.push(DecodingCheck {
            receiver: i + 1,
            rank_with,
            rank_without,
            needed: spec.t[i],
            pass: rank_with - rank_without == spec.t[i],
        });
        for j in p.prohibited(i).iter() {
            let reduced = spec.rank_of(unknown.without(j));
            let leakage = rank_with - reduced;
            security.push(SecurityCheck {
                receiver: i + 1,
                message: j + 1,
                rank_unknown: rank_with,
                rank_unknown_without: reduced,
                interfering_ranks: (rank_without, spec.rank_of(b.without(j))),
                leakage,
                pass: leakage == 0,
            });
        }
    }
    let decoding_pass = decoding.iter().all(|c| c.pass);
    let security_pass = security.iter().all(|c| c.pass);
    Ok(VerificationReport {
        field: format!("GF(2^{})", spec.field.degree()),
        t: spec.t.clone(),
        r: spec.r,
        rates: spec.t.iter().map(|&ti| ratio_string(ti, spec.r)).collect(),
        decoding,
        security,
        decoding_pass,
        security_pass,
        all_pass: decoding_pass && security_pass,
    })
}

/// Integer symbol accounting for a clique-cover solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssemblyPlan {
    /// Subproblems in the support: `(J, κ_J, s_J)` with `s_J` symbol
    /// positions per member message, `κ_J` parities per position.
    pub blocks: Vec<(SubsetId, usize, usize)>,
    /// Message symbols `t_i`.
    pub t: Vec<usize>,
    /// Coded positions `σ_i = Σ_{J ∋ i} s_J ≥ t_i`.
    pub slots: Vec<usize>,
    /// Output length `r`: most parities any receiver cannot rebuild.
    pub r: usize,
    /// Total parity count `K`.
    pub parity_count: usize,
}

fn to_usize(v: &BigRational) -> Result<usize> {
    if !v.is_integer() || v.is_negative() {
        return Err(Error::BadCode(format!("{v} is not a symbol count")));
    }
    v.to_integer().to_usize().ok_or_else(|| Error::BadCode("symbol count overflow".into()))
}

/// Scales `λ` to integers: `s_J = λ_J L / κ_J`, `K = Σ_J λ_J L`,
/// `r = max_i Σ_{J ⊄ A_i} λ_J L` and `t_i = R r`, with `L` the least scale
/// making every count integral.
pub fn plan_assembly(p: &Problem, sol: &FlpccSolution) -> Result<AssemblyPlan> {
    if sol.rate.is_zero() || sol.lambda.is_empty() {
        return Err(Error::ZeroRate);
    }
    let one = BigInt::one();
    let mut scale = one.clone();
    for (_, kappa, l) in &sol.lambda {
        let per_layer = l / BigRational::from_integer(BigInt::from(*kappa));
        scale = scale.lcm(per_layer.denom());
    }
    let unknown = |scale: &BigInt| -> BigRational {
        (0..p.n())
            .map(|i| {
                sol.lambda
                    .iter()
                    .filter(|(j, _, _)| !j.is_subset_of(p.side_info(i)))
                    .map(|(_, _, l)| l * BigRational::from_integer(scale.clone()))
                    .sum::<BigRational>()
            })
            .max()
            .unwrap_or_else(BigRational::zero)
    };
    let r0 = unknown(&scale);
    scale *= (&sol.rate * &r0).denom();
    let lscale = BigRational::from_integer(scale.clone());
    let r = to_usize(&unknown(&scale))?;
    let mut blocks = Vec::with_capacity(sol.lambda.len());
    let mut slots = vec![0usize; p.n()];
    let mut parity_count = 0;
    for (j, kappa, l) in &sol.lambda {
        let layers = to_usize(&(l * &lscale / BigRational::from_integer(BigInt::from(*kappa))))?;
        for i in j.iter() {
            slots[i] += layers;
        }
        parity_count += layers * kappa;
        blocks.push((*j, *kappa, layers));
    }
    let ti = to_usize(&(&sol.rate * BigRational::from_integer(BigInt::from(r))))?;
    if r > MAX_CODE_LENGTH || parity_count > MAX_CODE_LENGTH {
        return Err(Error::BadCode(format!("code too long: r = {r}, K = {parity_count}")));
    }
    if let Some(i) = slots.iter().position(|&s| s < ti) {
        return Err(Error::BadCode(format!("solution covers only {} of {} symbols of message {}", slots[i], ti, i + 1)));
    }
    Ok(AssemblyPlan { blocks, t: vec![ti; p.n()], slots, r, parity_count })
}

/// `rows × cols` matrix of full column rank: the identity when square,
/// otherwise Cauchy if the field allows, else random with a rank check.
fn embedding(rows: usize, cols: usize, f: &FiniteField, rng: Option<&mut ChaCha8Rng>) -> Result<GFMatrix> {
    match rng {
        None if rows == cols => Ok(GFMatrix::identity(rows)),
        None => cauchy_superregular(rows, cols, f),
        Some(rng) => {
            if rows + cols <= f.order() {
                return random_cauchy(rows, cols, f, rng);
            }
            loop {
                let m = random_matrix(rows, cols, f, rng, false);
                if m.rank(f) == cols {
                    return Ok(m);
                }
            }
        }
    }
}

fn random_matrix(rows: usize, cols: usize, f: &FiniteField, rng: &mut ChaCha8Rng, nonzero: bool) -> GFMatrix {
    let lo = u32::from(nonzero);
    let mut m = GFMatrix::zeros(rows, cols);
    for a in 0..rows {
        for b in 0..cols {
            m.set(a, b, rng.random_range(lo..f.order() as u32) as u16);
        }
    }
    m
}

/// Superregular block when the field has room for distinct Cauchy points;
/// with a generator, falls back to a random matrix with nonzero entries.
fn mixing_block(rows: usize, cols: usize, f: &FiniteField, rng: Option<&mut ChaCha8Rng>) -> Result<GFMatrix> {
    match rng {
        None if cols == 1 => GFMatrix::from_rows(vec![vec![1]; rows]),
        None => cauchy_superregular(rows, cols, f),
        Some(rng) if cols == 1 || rows == 1 => Ok(random_matrix(rows, cols, f, rng, true)),
        Some(rng) if rows + cols <= f.order() => random_cauchy(rows, cols, f, rng),
        Some(rng) => Ok(random_matrix(rows, cols, f, rng, true)),
    }
}

/// Builds the clique-cover code: per subproblem and position, `κ_J` MDS
/// parities of the member symbols; message `i` fills its `σ_i` coded
/// positions through an embedding `E_i` of its `t_i` symbols; the `K`
/// parities are combined by an `r × K` outer block.
///
/// Without a seed all blocks are deterministic Cauchy or all-ones.
pub fn assemble_sflpcc_code(p: &Problem, sol: &FlpccSolution, f: &FiniteField, seed: Option<u64>) -> Result<CodeSpec> {
    assemble_with(p, sol, f, seed.map(|s| (s, 0)))
}

fn attempt_rng(seed: u64, attempt: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt as u64);
    rng
}

fn assemble_with(p: &Problem, sol: &FlpccSolution, f: &FiniteField, seeded: Option<(u64, usize)>) -> Result<CodeSpec> {
    let plan = plan_assembly(p, sol)?;
    let mut rng = seeded.map(|(s, a)| attempt_rng(s, a));
    let n = p.n();

    let embeds: Vec<GFMatrix> =
        (0..n).map(|i| embedding(plan.slots[i], plan.t[i], f, rng.as_mut())).collect::<Result<_>>()?;
    let offsets: Vec<usize> = plan.t.iter().scan(0, |acc, &ti| Some(std::mem::replace(acc, *acc + ti))).collect();
    let total: usize = plan.t.iter().sum();

    let mut parities = GFMatrix::zeros(plan.parity_count, total);
    let mut next_slot = vec![0usize; n];
    let mut row = 0;
    let mut blocks = Vec::with_capacity(plan.blocks.len());
    for &(j, kappa, layers) in &plan.blocks {
        let c = mixing_block(j.len(), kappa, f, rng.as_mut())?;
        for _ in 0..layers {
            for col in 0..kappa {
                for (pos, i) in j.iter().enumerate() {
                    let coeff = c.get(pos, col);
                    let slot = next_slot[i];
                    for k in 0..plan.t[i] {
                        let v = f.mul(coeff, embeds[i].get(slot, k));
                        let cur = parities.get(row, offsets[i] + k);
                        parities.set(row, offsets[i] + k, f.add(cur, v));
                    }
                }
                row += 1;
            }
            for i in j.iter() {
                next_slot[i] += 1;
            }
        }
        blocks.push(BlockSpec { subset: j.to_one_based(), kappa, layers, parity: hex_rows(&c, f) });
    }
    // with r = K every receiver inverts the outer block whole
    let outer = if plan.r == plan.parity_count {
        embedding(plan.r, plan.r, f, rng.as_mut())?
    } else {
        mixing_block(plan.r, plan.parity_count, f, rng.as_mut())?
    };
    let matrix = outer.mul(f, &parities)?;
    Ok(CodeSpec {
        field: f.clone(),
        t: plan.t,
        r: plan.r,
        matrix,
        blocks,
        parity_count: plan.parity_count,
        outer: Some(outer),
        seed: seeded.map(|s| s.0),
        attempt: seeded.map(|s| s.1),
    })
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub spec: CodeSpec,
    pub report: VerificationReport,
    /// Attempts consumed, the successful one included.
    pub attempts: usize,
}

/// Retries seeded assemblies until one passes every check. Attempt `a` uses
/// stream `a` of the generator seeded with `seed`.
pub fn search_secure_assembly(
    p: &Problem,
    sol: &FlpccSolution,
    f: &FiniteField,
    budget: usize,
    seed: u64,
) -> Result<SearchOutcome> {
    let mut best: Option<VerificationReport> = None;
    for attempt in 0..budget {
        let spec = assemble_with(p, sol, f, Some((seed, attempt)))?;
        let report = verify_linear_code(p, &spec)?;
        if report.all_pass {
            if !rates_match(&spec, &sol.rate) {
                return Err(Error::BadCode("rate accounting does not match the solution".into()));
            }
            return Ok(SearchOutcome { spec, report, attempts: attempt + 1 });
        }
        if best.as_ref().is_none_or(|b| report.passed_checks() > b.passed_checks()) {
            best = Some(report);
        }
    }
    Err(Error::SearchExhausted {
        attempts: budget,
        m: f.degree(),
        diagnostic: best.map_or_else(|| "no attempts made".into(), |b| format!("best attempt: {}", b.failure_summary())),
    })
}

/// `t_i / r` equals `rate` for every receiver.
pub fn rates_match(spec: &CodeSpec, rate: &BigRational) -> bool {
    spec.r > 0
        && spec
            .t
            .iter()
            .all(|&ti| BigRational::new(BigInt::from(ti), BigInt::from(spec.r)) == *rate)
}

/// Largest field degree the search escalates to.
pub const ESCALATION_DEGREE: u32 = 16;

#[derive(Debug, Clone)]
pub struct Construction {
    pub outcome: SearchOutcome,
    pub solution: FlpccSolution,
    /// Field degrees tried, in order.
    pub fields_tried: Vec<u32>,
}

/// Solves the secure clique-cover LP and searches for a passing code over
/// `GF(2^m)`, retrying once over `GF(2^16)` if the budget runs out.
pub fn construct_secure_code(p: &Problem, m: u32, seed: u64, budget: usize, escalate: bool) -> Result<Construction> {
    let solution = crate::rates::sflpcc_symmetric(p)?;
    if solution.rate.is_zero() {
        return Err(Error::ZeroRate);
    }
    let mut fields_tried = vec![m];
    let first = FiniteField::new(m)?;
    match search_secure_assembly(p, &solution, &first, budget, seed) {
        Ok(outcome) => Ok(Construction { outcome, solution, fields_tried }),
        Err(Error::SearchExhausted { .. }) if escalate && m < ESCALATION_DEGREE => {
            fields_tried.push(ESCALATION_DEGREE);
            let big = FiniteField::new(ESCALATION_DEGREE)?;
            let outcome = search_secure_assembly(p, &solution, &big, budget, seed)?;
            Ok(Construction { outcome, solution, fields_tried })
        }
        Err(e) => Err(e),
    }
}
