//! Seeded random instances and codes for property checks and benchmarks.

use rand::Rng;

use crate::codes::CodeSpec;
use crate::gf::{FiniteField, GFMatrix};
use crate::problem::Problem;
use crate::subset::SubsetId;

/// Each `j ≠ i` joins `A_i` with probability `side_info`; each remaining
/// interfering message joins `P_i` with probability `prohibit`.
pub fn random_problem(rng: &mut impl Rng, n: usize, side_info: f64, prohibit: f64) -> Problem {
    let full = SubsetId::full(n);
    let a: Vec<SubsetId> = (0..n)
        .map(|i| SubsetId::from_indices((0..n).filter(|&j| j != i && rng.random_bool(side_info))))
        .collect();
    let p: Vec<SubsetId> = (0..n)
        .map(|i| {
            let b = full.difference(a[i]).without(i);
            SubsetId::from_indices(b.iter().filter(|_| rng.random_bool(prohibit)))
        })
        .collect();
    Problem::new(a, p).expect("sampled sets are consistent")
}

/// `random_problem` with `n` uniform in `n_min..=n_max` and the two
/// probabilities uniform in `[0.2, 0.8]`.
pub fn random_mixed_problem(rng: &mut impl Rng, n_min: usize, n_max: usize) -> Problem {
    let n = rng.random_range(n_min..=n_max);
    let side = rng.random_range(0.2..0.8);
    let prohibit = rng.random_range(0.2..0.8);
    random_problem(rng, n, side, prohibit)
}

/// Uniform `r × Σt` matrix over `f`.
pub fn random_linear_code(rng: &mut impl Rng, f: &FiniteField, t: Vec<usize>, r: usize) -> CodeSpec {
    let cols: usize = t.iter().sum();
    let rows = (0..r).map(|_| (0..cols).map(|_| rng.random_range(0..f.order() as u32) as u16).collect()).collect();
    CodeSpec::from_matrix(f.clone(), t, GFMatrix::from_rows(rows).expect("rectangular")).expect("shape matches")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampling_is_seeded_and_valid() {
        let a: Vec<Problem> = (0..20).map(|_| ()).scan(ChaCha8Rng::seed_from_u64(9), |rng, _| Some(random_mixed_problem(rng, 1, 6))).collect();
        let b: Vec<Problem> = (0..20).map(|_| ()).scan(ChaCha8Rng::seed_from_u64(9), |rng, _| Some(random_mixed_problem(rng, 1, 6))).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|p| (1..=6).contains(&p.n())));
    }
}
