//! Arithmetic in `GF(2^m)` for `1 ≤ m ≤ 16`, and dense matrices over it.

use std::fmt;

use crate::error::{Error, Result};

/// Primitive polynomials, indexed by `m - 1`, with the `x^m` term included.
const PRIMITIVE: [u32; 16] = [
    0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
];

/// Field of order `2^m` with log/antilog tables over a primitive modulus.
#[derive(Clone)]
pub struct FiniteField {
    m: u32,
    modulus: u32,
    exp: Vec<u16>,
    log: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#x}", self.m, self.modulus)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

impl FiniteField {
    pub fn new(m: u32) -> Result<Self> {
        if !(1..=16).contains(&m) {
            return Err(Error::FieldDegree(m));
        }
        Self::with_modulus(m, PRIMITIVE[m as usize - 1])
    }

    /// Builds the field from a caller-supplied modulus, which must be
    /// primitive of degree `m`.
    pub fn with_modulus(m: u32, modulus: u32) -> Result<Self> {
        if !(1..=16).contains(&m) {
            return Err(Error::FieldDegree(m));
        }
        if modulus >> m != 1 {
            return Err(Error::BadCode(format!("modulus {modulus:#x} does not have degree {m}")));
        }
        let order = 1usize << m;
        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u32; order];
        // generator: x, or 1 in GF(2) where the group is trivial
        let g: u32 = if m == 1 { 1 } else { 2 };
        let mut x: u32 = 1;
        for k in 0..order - 1 {
            if k > 0 && x == 1 {
                return Err(Error::BadCode(format!("modulus {modulus:#x} is not primitive")));
            }
            exp[k] = x as u16;
            log[x as usize] = k as u32;
            x = mul_poly(x, g, modulus, m);
        }
        if x != 1 {
            return Err(Error::BadCode(format!("modulus {modulus:#x} is not primitive")));
        }
        for k in order - 1..2 * order {
            exp[k] = exp[k - (order - 1)];
        }
        Ok(FiniteField { m, modulus, exp, log })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        1 << self.m
    }

    pub fn contains(&self, a: u16) -> bool {
        (a as usize) < self.order()
    }

    pub fn add(&self, a: u16, b: u16) -> u16 {
        a ^ b
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: u16) -> u16 {
        assert!(a != 0, "zero has no inverse");
        let q1 = self.order() as u32 - 1;
        self.exp[((q1 - self.log[a as usize]) % q1) as usize]
    }

    pub fn div(&self, a: u16, b: u16) -> u16 {
        self.mul(a, self.inv(b))
    }

    /// Hex rendering padded to the field's symbol width.
    pub fn format_symbol(&self, a: u16) -> String {
        let width = self.m.div_ceil(4) as usize;
        format!("{:0width$x}", a, width = width)
    }
}

fn mul_poly(a: u32, b: u32, modulus: u32, m: u32) -> u32 {
    let (mut a, mut b, mut out) = (a, b, 0u32);
    while b != 0 {
        if b & 1 == 1 {
            out ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> m & 1 == 1 {
            a ^= modulus;
        }
    }
    out
}

/// Row-major dense matrix of field symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GFMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u16>,
}

impl GFMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        GFMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for k in 0..size {
            m.set(k, k, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u16>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(GFMatrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u16 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u16) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u16] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u16>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                out.set(r, k, self.get(r, c));
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), self.cols);
        for (k, &r) in rows.iter().enumerate() {
            out.data[k * self.cols..(k + 1) * self.cols].copy_from_slice(self.row(r));
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn mul(&self, f: &FiniteField, other: &GFMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) ^ f.mul(a, other.get(k, c));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Rank by Gaussian elimination on a copy.
    pub fn rank(&self, f: &FiniteField) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for c in 0..a.cols {
            let Some(pivot) = (rank..a.rows).find(|&r| a.get(r, c) != 0) else { continue };
            if pivot != rank {
                for k in 0..a.cols {
                    a.data.swap(pivot * a.cols + k, rank * a.cols + k);
                }
            }
            let inv = f.inv(a.get(rank, c));
            for r in rank + 1..a.rows {
                let factor = f.mul(a.get(r, c), inv);
                if factor == 0 {
                    continue;
                }
                for k in c..a.cols {
                    let v = a.get(r, k) ^ f.mul(factor, a.get(rank, k));
                    a.set(r, k, v);
                }
            }
            rank += 1;
            if rank == a.rows {
                break;
            }
        }
        rank
    }

    pub fn all_in_field(&self, f: &FiniteField) -> bool {
        self.data.iter().all(|&v| f.contains(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_degree_builds() {
        for m in 1..=16 {
            let f = FiniteField::new(m).unwrap();
            assert_eq!(f.order(), 1 << m);
        }
        assert_eq!(FiniteField::new(0).unwrap_err(), Error::FieldDegree(0));
        assert_eq!(FiniteField::new(17).unwrap_err(), Error::FieldDegree(17));
        assert!(FiniteField::with_modulus(4, 0x1F).is_err());
    }

    #[test]
    fn field_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in [1, 2, 3, 8, 13, 16] {
            let f = FiniteField::new(m).unwrap();
            let q = f.order() as u32;
            for _ in 0..2000 {
                let (a, b, c) = (rng.random_range(0..q) as u16, rng.random_range(0..q) as u16, rng.random_range(0..q) as u16);
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.mul(a, 1), a);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
            }
        }
    }

    #[test]
    fn multiplication_matches_schoolbook() {
        let f = FiniteField::new(8).unwrap();
        for a in 0..256u32 {
            for b in (0..256u32).step_by(7) {
                assert_eq!(f.mul(a as u16, b as u16) as u32, mul_poly(a, b, 0x11D, 8));
            }
        }
    }

    #[test]
    fn rank_examples() {
        let f = FiniteField::new(1).unwrap();
        let m = GFMatrix::from_rows(vec![vec![1, 0, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(m.rank(&f), 2);
        assert_eq!(m.select_columns(&[1, 2]).rank(&f), 1);
        let m = GFMatrix::from_rows(vec![vec![1, 1], vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(m.rank(&f), 2);
        assert_eq!(GFMatrix::zeros(3, 4).rank(&f), 0);
        assert_eq!(GFMatrix::identity(5).rank(&f), 5);
    }

    #[test]
    fn rank_bounded_by_shape() {
        let f = FiniteField::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let (r, c) = (rng.random_range(1..6), rng.random_range(1..6));
            let rows = (0..r).map(|_| (0..c).map(|_| rng.random_range(0..16)).collect()).collect();
            let m = GFMatrix::from_rows(rows).unwrap();
            let k = m.rank(&f);
            assert!(k <= r.min(c));
            assert_eq!(k, m.transpose().rank(&f));
        }
    }
}
