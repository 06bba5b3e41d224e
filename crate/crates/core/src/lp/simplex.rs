//! Two-phase primal simplex on a sparse-row tableau.
//!
//! Entering columns follow Dantzig's largest-coefficient rule. After
//! `STALL_LIMIT` consecutive degenerate pivots the rule switches to Bland's
//! lowest-index choice until the objective strictly improves again. Any
//! cycle would eventually be run entirely under Bland's rule, so the method
//! terminates.

use std::cmp::Ordering;

use num_rational::BigRational;

use super::scalar::Scalar;
use super::Sense;

pub(crate) struct Overflow;

const STALL_LIMIT: usize = 64;

pub(crate) struct StandardRow {
    pub terms: Vec<(usize, BigRational)>,
    pub sense: Sense,
    pub rhs: BigRational,
}

pub(crate) enum Outcome {
    Optimal { value: BigRational, x: Vec<BigRational> },
    Infeasible,
    Unbounded,
}

pub(crate) struct Run {
    pub outcome: Outcome,
    pub pivots: usize,
}

type Row<T> = Vec<(u32, T)>;

struct Tableau<T> {
    rows: Vec<Row<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    obj: Vec<T>,
    obj_value: T,
    first_artificial: usize,
    pivots: usize,
}

fn entry<T>(row: &Row<T>, col: usize) -> Option<&T> {
    row.binary_search_by_key(&(col as u32), |e| e.0).ok().map(|k| &row[k].1)
}

/// `a - f * b` over sorted sparse rows, dropping exact zeros.
fn axpy<T: Scalar>(a: &Row<T>, f: &T, b: &Row<T>) -> Result<Row<T>, Overflow> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut k) = (0, 0);
    while i < a.len() || k < b.len() {
        let take_a = k >= b.len() || (i < a.len() && a[i].0 < b[k].0);
        let take_b = i >= a.len() || (k < b.len() && b[k].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = T::zero().sub(&f.mul(&b[k].1).ok_or(Overflow)?).ok_or(Overflow)?;
            if !v.is_zero() {
                out.push((b[k].0, v));
            }
            k += 1;
        } else {
            let v = a[i].1.sub(&f.mul(&b[k].1).ok_or(Overflow)?).ok_or(Overflow)?;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            k += 1;
        }
    }
    Ok(out)
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, p: usize, q: usize) -> Result<(), Overflow> {
        let piv = entry(&self.rows[p], q).expect("pivot entry is nonzero").clone();
        let mut prow = std::mem::take(&mut self.rows[p]);
        for e in prow.iter_mut() {
            e.1 = e.1.div(&piv).ok_or(Overflow)?;
        }
        self.rhs[p] = self.rhs[p].div(&piv).ok_or(Overflow)?;
        let bp = self.rhs[p].clone();
        for i in 0..self.rows.len() {
            if i == p {
                continue;
            }
            let Some(f) = entry(&self.rows[i], q).cloned() else { continue };
            self.rows[i] = axpy(&self.rows[i], &f, &prow)?;
            self.rhs[i] = self.rhs[i].sub(&f.mul(&bp).ok_or(Overflow)?).ok_or(Overflow)?;
        }
        let dq = self.obj[q].clone();
        if !dq.is_zero() {
            for (j, v) in &prow {
                let j = *j as usize;
                self.obj[j] = self.obj[j].sub(&dq.mul(v).ok_or(Overflow)?).ok_or(Overflow)?;
            }
            self.obj_value = self.obj_value.add(&dq.mul(&bp).ok_or(Overflow)?).ok_or(Overflow)?;
        }
        self.rows[p] = prow;
        self.basis[p] = q;
        self.pivots += 1;
        Ok(())
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let candidates = self.obj[..self.first_artificial].iter().enumerate().filter(|(_, d)| d.is_positive());
        if bland {
            return candidates.map(|(j, _)| j).next();
        }
        let mut best: Option<(usize, &T)> = None;
        for (j, d) in candidates {
            if best.is_none_or(|(_, b)| d.compare(b) == Ordering::Greater) {
                best = Some((j, d));
            }
        }
        best.map(|(j, _)| j)
    }

    /// Minimum-ratio row, ties broken by lowest basic index. Returns the row
    /// and whether the step length is zero.
    fn leaving(&self, q: usize) -> Result<Option<(usize, bool)>, Overflow> {
        let mut best: Option<(usize, T)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            let Some(a) = entry(row, q) else { continue };
            if !a.is_positive() {
                continue;
            }
            let ratio = self.rhs[i].div(a).ok_or(Overflow)?;
            let better = match &best {
                None => true,
                Some((bi, br)) => match ratio.compare(br) {
                    Ordering::Less => true,
                    Ordering::Equal => self.basis[i] < self.basis[*bi],
                    Ordering::Greater => false,
                },
            };
            if better {
                best = Some((i, ratio));
            }
        }
        Ok(best.map(|(i, r)| (i, r.is_zero())))
    }

    /// Returns `false` if the objective is unbounded. With `stop_at_zero`
    /// the run ends once the objective reaches zero, its known maximum in
    /// phase 1.
    fn optimize(&mut self, stop_at_zero: bool) -> Result<bool, Overflow> {
        let mut stalled = 0;
        while let Some(q) = self.entering(stalled >= STALL_LIMIT) {
            if stop_at_zero && self.obj_value.is_zero() {
                break;
            }
            let Some((p, degenerate)) = self.leaving(q)? else {
                return Ok(false);
            };
            self.pivot(p, q)?;
            stalled = if degenerate { stalled + 1 } else { 0 };
        }
        Ok(true)
    }
}

/// Maximizes `objective · x` subject to `rows` and `x ≥ 0`.
pub(crate) fn run<T: Scalar>(nv: usize, rows: &[StandardRow], objective: &[BigRational]) -> Result<Run, Overflow> {
    let conv = |v: &BigRational| T::from_big(v).ok_or(Overflow);
    let m = rows.len();
    let logical = rows.iter().filter(|r| r.sense != Sense::Eq).count();
    let artificial = rows.iter().filter(|r| r.sense != Sense::Le).count();
    let first_artificial = nv + logical;
    let ncols = first_artificial + artificial;

    let mut t = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        obj: vec![T::zero(); ncols],
        obj_value: T::zero(),
        first_artificial,
        pivots: 0,
    };
    let (mut next_logical, mut next_art) = (nv, first_artificial);
    for r in rows {
        let mut row: Row<T> = Vec::with_capacity(r.terms.len() + 2);
        for (j, v) in &r.terms {
            row.push((*j as u32, conv(v)?));
        }
        let basic = match r.sense {
            Sense::Le => {
                row.push((next_logical as u32, T::one()));
                next_logical += 1;
                next_logical - 1
            }
            Sense::Ge => {
                row.push((next_logical as u32, T::zero().sub(&T::one()).ok_or(Overflow)?));
                row.push((next_art as u32, T::one()));
                next_logical += 1;
                next_art += 1;
                next_art - 1
            }
            Sense::Eq => {
                row.push((next_art as u32, T::one()));
                next_art += 1;
                next_art - 1
            }
        };
        t.rows.push(row);
        t.rhs.push(conv(&r.rhs)?);
        t.basis.push(basic);
    }

    // phase 1: maximize -Σ artificials
    if artificial > 0 {
        for i in 0..m {
            if t.basis[i] < first_artificial {
                continue;
            }
            for (j, v) in &t.rows[i] {
                let j = *j as usize;
                if j < first_artificial {
                    t.obj[j] = t.obj[j].add(v).ok_or(Overflow)?;
                }
            }
            t.obj_value = t.obj_value.sub(&t.rhs[i]).ok_or(Overflow)?;
        }
        t.optimize(true)?;
        if t.obj_value.is_negative() {
            return Ok(Run { outcome: Outcome::Infeasible, pivots: t.pivots });
        }
        // pivot zero-level artificials out of the basis; rows with no other
        // nonzero entry are redundant and dropped
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= first_artificial {
                let col = t.rows[i].iter().find(|(j, _)| (*j as usize) < first_artificial).map(|e| e.0 as usize);
                match col {
                    Some(q) => t.pivot(i, q)?,
                    None => {
                        t.rows.swap_remove(i);
                        t.rhs.swap_remove(i);
                        t.basis.swap_remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    // phase 2 reduced costs
    t.obj = vec![T::zero(); ncols];
    t.obj_value = T::zero();
    for (j, c) in objective.iter().enumerate() {
        t.obj[j] = conv(c)?;
    }
    for i in 0..t.rows.len() {
        let b = t.basis[i];
        if b >= nv || objective[b] == num_traits::Zero::zero() {
            continue;
        }
        let cb = conv(&objective[b])?;
        for (j, v) in &t.rows[i] {
            let j = *j as usize;
            t.obj[j] = t.obj[j].sub(&cb.mul(v).ok_or(Overflow)?).ok_or(Overflow)?;
        }
        t.obj_value = t.obj_value.add(&cb.mul(&t.rhs[i]).ok_or(Overflow)?).ok_or(Overflow)?;
    }
    if !t.optimize(false)? {
        return Ok(Run { outcome: Outcome::Unbounded, pivots: t.pivots });
    }
    let mut x = vec![BigRational::from_integer(0.into()); nv];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < nv {
            x[b] = t.rhs[i].to_big();
        }
    }
    Ok(Run { outcome: Outcome::Optimal { value: t.obj_value.to_big(), x }, pivots: t.pivots })
}
