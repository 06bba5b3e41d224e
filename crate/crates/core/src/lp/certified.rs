//! Floating-point guided solving with an exact optimality certificate.
//!
//! The primal and the dual are solved in floating point, both solutions are
//! rounded to nearby small-denominator fractions, and the pair is accepted
//! only if, in exact arithmetic, the primal is feasible, the dual is
//! feasible and the two objective values coincide.

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{RationalLp, Sense};

const TOLERANCE: f64 = 1e-9;
const MAX_DENOMINATOR: i64 = 1 << 24;

/// Closest continued-fraction convergent within `TOLERANCE`, if one with a
/// denominator below `MAX_DENOMINATOR` exists.
pub(crate) fn nearby_fraction(v: f64) -> Option<BigRational> {
    if !v.is_finite() {
        return None;
    }
    let target = v.abs();
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut x = target;
    for _ in 0..64 {
        let a = x.floor();
        if a > i64::MAX as f64 / 4.0 {
            return None;
        }
        let a = a as i64;
        let h = a.checked_mul(h1)?.checked_add(h0)?;
        let k = a.checked_mul(k1)?.checked_add(k0)?;
        if k > MAX_DENOMINATOR {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h, k1, k);
        if (target - h as f64 / k as f64).abs() <= TOLERANCE * target.max(1.0) {
            let r = BigRational::new(BigInt::from(h), BigInt::from(k));
            return Some(if v < 0.0 { -r } else { r });
        }
        let frac = x - a as f64;
        if frac == 0.0 {
            return None;
        }
        x = 1.0 / frac;
    }
    None
}

fn to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

fn op(sense: Sense) -> ComparisonOp {
    match sense {
        Sense::Le => ComparisonOp::Le,
        Sense::Eq => ComparisonOp::Eq,
        Sense::Ge => ComparisonOp::Ge,
    }
}

pub(crate) struct Certified {
    pub value: BigRational,
    pub primal: Vec<BigRational>,
    pub dual: Vec<BigRational>,
}

/// Returns `None` when either float solve fails or the rounded pair does
/// not certify optimality; the caller then falls back to exact pivoting.
pub(crate) fn solve(lp: &RationalLp, objective: &[BigRational]) -> Option<Certified> {
    let nv = lp.var_count();
    let mut primal = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = objective.iter().map(|c| primal.add_var(to_f64(c), (0.0, f64::INFINITY))).collect();
    for c in lp.constraints() {
        let expr: Vec<_> = c.terms.iter().map(|(v, a)| (vars[v.0], to_f64(a))).collect();
        primal.add_constraint(&expr[..], op(c.sense), to_f64(&c.rhs));
    }
    let solution = primal.solve().ok()?.into_solution().ok()?;
    let x: Vec<BigRational> = vars.iter().map(|&v| nearby_fraction(solution.var_value(v))).collect::<Option<_>>()?;

    // min b·y  s.t.  Aᵀy ≥ c, with y ≥ 0 on ≤ rows, y ≤ 0 on ≥ rows
    let mut dual = Problem::new(OptimizationDirection::Minimize);
    let mut columns: Vec<Vec<(microlp::Variable, f64)>> = vec![Vec::new(); nv];
    let mut ys = Vec::with_capacity(lp.constraint_count());
    for c in lp.constraints() {
        let bounds = match c.sense {
            Sense::Le => (0.0, f64::INFINITY),
            Sense::Ge => (f64::NEG_INFINITY, 0.0),
            Sense::Eq => (f64::NEG_INFINITY, f64::INFINITY),
        };
        let y = dual.add_var(to_f64(&c.rhs), bounds);
        for (v, a) in &c.terms {
            columns[v.0].push((y, to_f64(a)));
        }
        ys.push(y);
    }
    for (j, col) in columns.iter().enumerate() {
        dual.add_constraint(&col[..], ComparisonOp::Ge, to_f64(&objective[j]));
    }
    let solution = dual.solve().ok()?.into_solution().ok()?;
    let y: Vec<BigRational> = ys.iter().map(|&v| nearby_fraction(solution.var_value(v))).collect::<Option<_>>()?;

    let value: BigRational = objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    check(lp, objective, &x, &y, &value).then_some(Certified { value, primal: x, dual: y })
}

/// Exact check of primal feasibility, dual feasibility and zero gap.
pub(crate) fn check(lp: &RationalLp, objective: &[BigRational], x: &[BigRational], y: &[BigRational], value: &BigRational) -> bool {
    if x.iter().any(|v| v.is_negative()) {
        return false;
    }
    let mut reduced: Vec<BigRational> = vec![BigRational::zero(); lp.var_count()];
    let mut bound = BigRational::zero();
    for (c, yc) in lp.constraints().iter().zip(y) {
        let sign_ok = match c.sense {
            Sense::Le => !yc.is_negative(),
            Sense::Ge => !yc.is_positive(),
            Sense::Eq => true,
        };
        if !sign_ok {
            return false;
        }
        let lhs: BigRational = c.terms.iter().map(|(v, a)| a * &x[v.0]).sum();
        let holds = match c.sense {
            Sense::Le => lhs <= c.rhs,
            Sense::Eq => lhs == c.rhs,
            Sense::Ge => lhs >= c.rhs,
        };
        if !holds {
            return false;
        }
        if !yc.is_zero() {
            for (v, a) in &c.terms {
                reduced[v.0] += a * yc;
            }
            bound += &c.rhs * yc;
        }
    }
    reduced.iter().zip(objective).all(|(r, c)| r >= c) && bound == *value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::rat;

    #[test]
    fn fractions_are_recovered() {
        assert_eq!(nearby_fraction(0.25000000000001), Some(rat(1, 4)));
        assert_eq!(nearby_fraction(-1.0 / 3.0), Some(rat(-1, 3)));
        assert_eq!(nearby_fraction(1e-14), Some(rat(0, 1)));
        assert_eq!(nearby_fraction(f64::NAN), None);
    }
}
