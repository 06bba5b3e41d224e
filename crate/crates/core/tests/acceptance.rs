//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Seeds, instance counts and time limits are pinned below.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use secidx::bounds::{self, mais_bound, smais};
use secidx::codes::{construct_secure_code, verify_linear_code};
use secidx::oracle::{exact_conditional_mi, exact_feasible, ExactMI, TruthTableCode};
use secidx::random::{random_linear_code, random_mixed_problem, random_problem};
use secidx::rates::{flpcc_symmetric, polymatroidal_outer_symmetric, sflpcc_symmetric};
use secidx::report::{analyze_full, AnalyzeOptions};
use secidx::{fixtures, BoundsReport, CodeSpec, FiniteField, GFMatrix, GPartition, SideInfoGraph, SubsetId};

const EXAMPLE1_LIMIT: Duration = Duration::from_secs(60);
const EXAMPLE2_LIMIT: Duration = Duration::from_secs(10);
const TOY_LIMIT: Duration = Duration::from_secs(5);
const SANDWICH_LIMIT: Duration = Duration::from_secs(600);

const SANDWICH_SEED: u64 = 5;
const SANDWICH_COUNT: usize = 200;
const ORACLE_SEED: u64 = 6;
const ORACLE_COUNT: usize = 100;
const MI_SEED: u64 = 7;
const MI_COUNT: usize = 50;
const CONSTRUCT_SEED: u64 = 2024;
const CONSTRUCT_BUDGET: usize = 64;
const OPEN_SEED: u64 = 9;
const OPEN_COUNT: usize = 50;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn s(labels: &[usize]) -> SubsetId {
    SubsetId::from_one_based(labels)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn within(start: Instant, limit: Duration) -> Check {
    let took = start.elapsed();
    if took <= limit {
        Ok(format!("{:.2}s", took.as_secs_f64()))
    } else {
        Err(format!("took {:.2}s, limit {}s", took.as_secs_f64(), limit.as_secs()))
    }
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, expected: T, got: T, errors: &mut Vec<String>) {
    if expected != got {
        errors.push(format!("{what}: expected {expected:?}, got {got:?}"));
    }
}

fn finish(errors: Vec<String>, detail: String) -> Check {
    if errors.is_empty() {
        Ok(detail)
    } else {
        Err(errors.join("; "))
    }
}

fn example1_reproduction() -> Check {
    let start = Instant::now();
    let a = analyze_full(&fixtures::example1(), AnalyzeOptions::default()).map_err(|e| e.to_string())?;
    let r = &a.report;
    let mut errors = Vec::new();
    expect("S-FLPCC rate", Some(rat(1, 4)), a.sflpcc.as_ref().map(|x| x.rate.clone()), &mut errors);
    expect("beta_MAIS", 3, r.beta_mais, &mut errors);
    expect("beta_S-MAIS", 4, r.smais.beta, &mut errors);
    expect("C_sym", Some("1/4"), r.capacity.as_ref().map(|c| c.symmetric_capacity.as_str()), &mut errors);
    let time = within(start, EXAMPLE1_LIMIT).unwrap_or_else(|e| {
        errors.push(e.clone());
        e
    });
    finish(errors, format!("rate 1/4, beta_MAIS 3, beta_S-MAIS 4, C_sym 1/4 in {time}"))
}

fn example2_reproduction() -> Check {
    let start = Instant::now();
    let p = fixtures::example2();
    let a = analyze_full(&p, AnalyzeOptions::default()).map_err(|e| e.to_string())?;
    let mut errors = Vec::new();
    expect("infeasible", true, a.report.infeasible, &mut errors);
    let part = &a.partition;
    let chain = bounds::SubsetChainWitness {
        class: part.class_of(s(&[1, 3, 4, 5])),
        superset: s(&[1, 3, 4, 5]),
        subset: s(&[1, 3, 5]),
        receiver: 3,
    };
    let (chains, _) = bounds::subset_chain_witnesses(&p, part, usize::MAX);
    expect("{1,3,5} ∪ {4} ⊆ {1,3,4,5} among subset-chain witnesses", true, chains.contains(&chain), &mut errors);
    expect("that witness rechecks", true, chain.recheck(&p, part), &mut errors);

    let n5 = part.class_of(s(&[3, 5]));
    let state = &a.bounds.smais.state;
    let fires = bounds::rho_excess_witnesses(state, part).iter().any(|w| w.class == n5 && w.smallest.len() == 2);
    expect("rho-excess witness on N_5 with |S| = 2", true, fires, &mut errors);
    let path: Vec<usize> = a.bounds.smais.trace.iter().filter(|u| u.class == n5).map(|u| u.new).collect();
    expect("rho(N_5)", 4, state.rho[n5], &mut errors);
    if let Err(e) = within(start, EXAMPLE2_LIMIT) {
        errors.push(e);
    }
    let detail = format!("infeasible, both witnesses present, rho(N_5) updates {path:?}");
    finish(errors, detail).map_err(|e| format!("{e} (rho(N_5) updates {path:?})"))
}

fn partition_fixture() -> Check {
    let part = GPartition::build(&fixtures::example2());
    let listed: Vec<Vec<SubsetId>> = vec![
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
    let normalize = |classes: Vec<Vec<SubsetId>>| {
        let mut out: Vec<Vec<SubsetId>> = classes
            .into_iter()
            .map(|mut c| {
                c.sort();
                c
            })
            .collect();
        out.sort();
        out
    };
    let mut errors = Vec::new();
    expect("g-subsets", normalize(listed), normalize(part.g_subsets().to_vec()), &mut errors);
    expect("remaining class size", 12, part.remaining_len(), &mut errors);
    finish(errors, "5 g-subsets set-for-set, remaining class 12".into())
}

fn toy_instance() -> Check {
    let start = Instant::now();
    let p = fixtures::toy();
    let part = GPartition::build(&p);
    let graph = SideInfoGraph::new(&p);
    let mut errors = Vec::new();
    expect("beta_S-MAIS", 2, smais(&p, &part, &graph).beta, &mut errors);
    let r1 = exact_feasible(&p, 1).map_err(|e| e.to_string())?;
    expect("oracle code at r = 1", false, r1.code().is_some(), &mut errors);
    let r2 = exact_feasible(&p, 2).map_err(|e| e.to_string())?;
    expect("oracle code length at r <= 2", Some(2), r2.code().map(|c| c.r), &mut errors);
    let f = FiniteField::new(1).map_err(|e| e.to_string())?;
    let m = GFMatrix::from_rows(vec![vec![1, 0, 0], vec![0, 1, 1]]).map_err(|e| e.to_string())?;
    let spec = CodeSpec::from_matrix(f, vec![1, 1, 1], m).map_err(|e| e.to_string())?;
    let rep = verify_linear_code(&p, &spec).map_err(|e| e.to_string())?;
    expect("(x1, x2+x3) passes", true, rep.all_pass, &mut errors);
    let time = within(start, TOY_LIMIT).unwrap_or_else(|e| {
        errors.push(e.clone());
        e
    });
    finish(errors, format!("beta_S-MAIS 2, oracle none at r=1 and rate 1/2 at r=2, linear code valid, {time}"))
}

fn sandwich_and_dominance() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SANDWICH_SEED);
    let mut violations = Vec::new();
    let mut zero_outer = 0;
    for k in 0..SANDWICH_COUNT {
        let p = random_mixed_problem(&mut rng, 1, 6);
        let inner = sflpcc_symmetric(&p).map_err(|e| e.to_string())?.rate;
        let outer = polymatroidal_outer_symmetric(&p).map_err(|e| e.to_string())?.rate;
        let part = GPartition::build(&p);
        let graph = SideInfoGraph::new(&p);
        let beta_mais = mais_bound(&graph);
        let beta_smais = smais(&p, &part, &graph).beta;
        if outer.is_zero() {
            zero_outer += 1;
        }
        let smais_q = BigRational::from_integer(beta_smais.into());
        let ok = inner <= outer
            && &outer * &smais_q <= BigRational::one()
            && beta_smais >= beta_mais;
        if !ok {
            violations.push(format!("#{k} {}: inner {inner}, outer {outer}, S-MAIS {beta_smais}, MAIS {beta_mais}", p.to_json()));
        }
    }
    let time = within(start, SANDWICH_LIMIT)?;
    if violations.is_empty() {
        Ok(format!("{SANDWICH_COUNT} instances, 0 violations ({zero_outer} with outer 0), {time}"))
    } else {
        Err(format!("{} violations: {}", violations.len(), violations.join(" | ")))
    }
}

fn oracle_consistency() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(ORACLE_SEED);
    let (mut fired, mut violations) = (0, Vec::new());
    for _ in 0..ORACLE_COUNT {
        let p = random_mixed_problem(&mut rng, 1, 4);
        let part = GPartition::build(&p);
        let graph = SideInfoGraph::new(&p);
        if BoundsReport::compute(&p, &part, &graph).infeasible() {
            fired += 1;
            if exact_feasible(&p, p.n()).map_err(|e| e.to_string())?.code().is_some() {
                violations.push(p.to_json());
            }
        }
    }
    if violations.is_empty() {
        Ok(format!("{ORACLE_COUNT} instances, {fired} certified infeasible, 0 violations"))
    } else {
        Err(format!("oracle found codes for: {}", violations.join(" | ")))
    }
}

fn rank_mi_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(MI_SEED);
    let f = FiniteField::new(1).map_err(|e| e.to_string())?;
    let (mut pairs, mut violations) = (0, Vec::new());
    for _ in 0..MI_COUNT {
        let p = loop {
            let n = rng.random_range(2..=4);
            let p = random_problem(&mut rng, n, 0.3, 0.7);
            if p.prohibition_count() > 0 {
                break p;
            }
        };
        let r = rng.random_range(1..=p.n());
        let spec = random_linear_code(&mut rng, &f, vec![1; p.n()], r);
        let report = verify_linear_code(&p, &spec).map_err(|e| e.to_string())?;
        let table = TruthTableCode::from_linear(&spec).map_err(|e| e.to_string())?;
        if report.security.len() != p.prohibition_count() {
            violations.push(format!("{}: {} security checks", p.to_json(), report.security.len()));
        }
        for check in &report.security {
            let (i, j) = (check.receiver - 1, check.message - 1);
            let mi = exact_conditional_mi(&table, j, p.side_info(i)).map_err(|e| e.to_string())?;
            let rank = ExactMI::bits(BigRational::from_integer(check.leakage.into()));
            pairs += 1;
            if mi != rank {
                violations.push(format!("{} receiver {} message {}: rank {}, MI {}", p.to_json(), i + 1, j + 1, check.leakage, mi));
            }
        }
    }
    if violations.is_empty() {
        Ok(format!("{MI_COUNT} codes, {pairs} (i, j) pairs, 0 violations"))
    } else {
        Err(violations.join(" | "))
    }
}

fn secure_construction() -> Check {
    let p = fixtures::example1();
    let built = construct_secure_code(&p, 8, CONSTRUCT_SEED, CONSTRUCT_BUDGET, false).map_err(|e| e.to_string())?;
    // re-check the written document, not the in-memory code
    let spec = CodeSpec::parse(&built.outcome.spec.to_json()).map_err(|e| e.to_string())?;
    let rep = verify_linear_code(&p, &spec).map_err(|e| e.to_string())?;
    let mut errors = Vec::new();
    expect("field", 8, spec.field.degree(), &mut errors);
    expect("decoding checks", 9, rep.decoding.len(), &mut errors);
    expect("decoding passes", 9, rep.decoding.iter().filter(|c| c.pass).count(), &mut errors);
    expect("security checks", p.prohibition_count(), rep.security.len(), &mut errors);
    expect("security passes", p.prohibition_count(), rep.security.iter().filter(|c| c.pass).count(), &mut errors);
    expect("rates", vec!["1/4".to_string(); 9], rep.rates.clone(), &mut errors);
    finish(
        errors,
        format!(
            "GF(2^8), attempt {} of {CONSTRUCT_BUDGET}, t = {}, r = {}, 9/9 decoding, {}/{} prohibitions",
            built.outcome.attempts,
            spec.t[0],
            spec.r,
            rep.security.len(),
            p.prohibition_count()
        ),
    )
}

fn no_security_degeneracy() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(OPEN_SEED);
    let mut violations = Vec::new();
    for _ in 0..OPEN_COUNT {
        let n = rng.random_range(1..=7);
        let side = rng.random_range(0.1..0.9);
        let p = random_problem(&mut rng, n, side, 0.0);
        let part = GPartition::build(&p);
        let graph = SideInfoGraph::new(&p);
        let (mais, smais) = (mais_bound(&graph), smais(&p, &part, &graph).beta);
        let secure = sflpcc_symmetric(&p).map_err(|e| e.to_string())?.rate;
        let plain = flpcc_symmetric(&p).map_err(|e| e.to_string())?.rate;
        if mais != smais || secure != plain {
            violations.push(format!("{}: MAIS {mais} S-MAIS {smais}, FLPCC {plain} S-FLPCC {secure}", p.to_json()));
        }
    }
    if violations.is_empty() {
        Ok(format!("{OPEN_COUNT} instances, 0 violations"))
    } else {
        Err(violations.join(" | "))
    }
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("example1 reproduction", example1_reproduction),
        ("example2 infeasibility witnesses", example2_reproduction),
        ("g-partition fixture", partition_fixture),
        ("toy instance", toy_instance),
        ("sandwich and dominance", sandwich_and_dominance),
        ("oracle consistency", oracle_consistency),
        ("rank/MI equivalence", rank_mi_equivalence),
        ("secure code construction", secure_construction),
        ("no-security degeneracy", no_security_degeneracy),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("acceptance {} PASS {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("acceptance {} FAIL {name}: {detail}", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
