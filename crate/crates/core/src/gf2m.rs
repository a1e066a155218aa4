//! Arithmetic over GF(2^m) and its binary expansion.
//!
//! Elements are bit patterns `< 2^m`, bit `l` holding the coefficient of
//! `x^l` in the polynomial basis. The binary expansion of a matrix replaces
//! each entry by its `m x m` multiplication matrix in that basis, so that
//! `bits(s·M) = bits(s)·expand(M)` for every row vector `s`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

pub type Element = u32;

pub const MAX_DEGREE: u32 = 16;

/// Lexicographically smallest irreducible polynomial of each degree 1..=16.
const DEFAULT_POLYS: [u32; 16] = [
    0b10,
    0b111,
    0b1011,
    0b1_0011,
    0b10_0101,
    0b100_0011,
    0b1000_0011,
    0x11b,
    0x203,
    0x409,
    0x805,
    0x1009,
    0x201b,
    0x4021,
    0x8003,
    0x1_002b,
];

fn poly_degree(p: u32) -> Option<u32> {
    (p != 0).then(|| 31 - p.leading_zeros())
}

/// Remainder of `a` modulo `b` over GF(2)[x].
fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = 63 - b.leading_zeros();
    while a != 0 && 63 - a.leading_zeros() >= db {
        a ^= b << (63 - a.leading_zeros() - db);
    }
    a
}

/// Exhaustive divisor check: no polynomial of degree `1..=deg/2` divides `p`.
pub fn is_irreducible(p: u32) -> bool {
    let Some(deg) = poly_degree(p) else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    let p = p as u64;
    (2u64..(1u64 << (deg / 2 + 1))).all(|d| poly_rem(p, d) != 0)
}

/// A binary extension field GF(2^m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GfField {
    m: u32,
    poly: u32,
}

impl GfField {
    /// Field with the default (lexicographically smallest) modulus.
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::param(
                "m",
                format!("extension degree must be in 1..={MAX_DEGREE}, got {m}"),
            ));
        }
        Ok(GfField {
            m,
            poly: DEFAULT_POLYS[(m - 1) as usize],
        })
    }

    pub fn with_poly(m: u32, poly: u32) -> Result<Self> {
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::param(
                "m",
                format!("extension degree must be in 1..={MAX_DEGREE}, got {m}"),
            ));
        }
        if poly_degree(poly) != Some(m) || !is_irreducible(poly) {
            return Err(Error::Reducible { poly, degree: m });
        }
        Ok(GfField { m, poly })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    pub fn order(&self) -> u32 {
        1 << self.m
    }

    pub fn contains(&self, a: Element) -> bool {
        a < self.order()
    }

    pub fn check(&self, a: Element) -> Result<Element> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(Error::InvalidElement {
                value: a,
                degree: self.m,
            })
        }
    }

    /// Carry-less product reduced modulo the field polynomial.
    pub fn mul(&self, a: Element, b: Element) -> Element {
        debug_assert!(self.contains(a) && self.contains(b));
        let mut prod: u64 = 0;
        let mut b = b as u64;
        let mut a = a as u64;
        while b != 0 {
            if b & 1 == 1 {
                prod ^= a;
            }
            a <<= 1;
            b >>= 1;
        }
        poly_rem(prod, self.poly as u64) as Element
    }

    pub fn pow(&self, a: Element, mut e: u64) -> Element {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via `a^(2^m - 2)`.
    pub fn inv(&self, a: Element) -> Result<Element> {
        self.check(a)?;
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, (self.order() - 2) as u64))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        rng.random_range(0..self.order())
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        rng.random_range(1..self.order())
    }

    /// The `m x m` binary matrix of `y ↦ y·a`: row `k` holds `bits(x^k · a)`.
    pub fn multiplication_matrix(&self, a: Element) -> BitMatrix {
        let m = self.m as usize;
        let mut out = BitMatrix::zeros(m, m);
        for k in 0..m {
            let img = self.mul(1 << k, a);
            for l in 0..m {
                if img >> l & 1 == 1 {
                    out.put(k, l, true);
                }
            }
        }
        out
    }

    pub fn to_bits(&self, a: Element) -> impl Iterator<Item = bool> {
        (0..self.m).map(move |l| a >> l & 1 == 1)
    }

    /// Bit representation of a symbol vector, `m` bits per symbol.
    pub fn vector_to_bits(&self, symbols: &[Element]) -> BitVec {
        BitVec::from_bits(symbols.iter().flat_map(|&s| self.to_bits(s)))
    }

    pub fn bits_to_vector(&self, bits: &BitVec) -> Result<Vec<Element>> {
        let m = self.m as usize;
        if !bits.len().is_multiple_of(m) {
            return Err(Error::DimensionMismatch(format!(
                "{} bits do not split into {m}-bit symbols",
                bits.len()
            )));
        }
        Ok((0..bits.len() / m)
            .map(|i| (0..m).fold(0, |acc, l| acc | (u32::from(bits.get(i * m + l)) << l)))
            .collect())
    }
}

/// A dense matrix over GF(2^m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GfMatrix {
    field: GfField,
    rows: usize,
    cols: usize,
    entries: Vec<Element>,
}

impl GfMatrix {
    pub fn zeros(field: GfField, rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        GfMatrix {
            field,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: GfField, n: usize) -> Self {
        let mut m = GfMatrix::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: GfField, rows: &[Vec<Element>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::DimensionMismatch("empty GF matrix".into()));
        }
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged GF matrix rows".into()));
            }
            for &a in row {
                entries.push(field.check(a)?);
            }
        }
        Ok(GfMatrix {
            field,
            rows: r,
            cols: c,
            entries,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: GfField, columns: &[Vec<Element>]) -> Result<Self> {
        let c = columns.len();
        let r = columns.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::DimensionMismatch("empty GF matrix".into()));
        }
        let mut m = GfMatrix::zeros(field, r, c);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != r {
                return Err(Error::DimensionMismatch("ragged GF matrix columns".into()));
            }
            for (i, &a) in col.iter().enumerate() {
                m.set(i, j, field.check(a)?)?;
            }
        }
        Ok(m)
    }

    pub fn random<R: Rng + ?Sized>(field: GfField, rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = GfMatrix::zeros(field, rows, cols);
        for e in &mut m.entries {
            *e = field.random(rng);
        }
        m
    }

    pub fn field(&self) -> GfField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Result<Element> {
        if i >= self.rows || j >= self.cols {
            return Err(Error::IndexOutOfRange {
                row: i,
                col: j,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.entries[i * self.cols + j])
    }

    pub fn set(&mut self, i: usize, j: usize, a: Element) -> Result<()> {
        if i >= self.rows || j >= self.cols {
            return Err(Error::IndexOutOfRange {
                row: i,
                col: j,
                rows: self.rows,
                cols: self.cols,
            });
        }
        self.entries[i * self.cols + j] = self.field.check(a)?;
        Ok(())
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Element {
        self.entries[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<Element> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> GfMatrix {
        let mut out = GfMatrix::zeros(self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out.entries[i * cols.len() + k] = self.at(i, j);
            }
        }
        out
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|&&a| a != 0).count()
    }

    pub fn mul(&self, other: &GfMatrix) -> Result<GfMatrix> {
        if self.field != other.field {
            return Err(Error::DimensionMismatch("matrices over different fields".into()));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = GfMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] ^= f.mul(a, other.at(k, j));
                }
            }
        }
        Ok(out)
    }

    /// Row-vector product `s·M`.
    pub fn vec_mul(&self, s: &[Element]) -> Result<Vec<Element>> {
        if s.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} times {}x{} matrix",
                s.len(),
                self.rows,
                self.cols
            )));
        }
        let f = self.field;
        Ok((0..self.cols)
            .map(|j| {
                s.iter()
                    .enumerate()
                    .fold(0, |acc, (i, &si)| acc ^ f.mul(si, self.at(i, j)))
            })
            .collect())
    }

    /// Gaussian elimination on a copy; returns the row-echelon pivot columns.
    fn pivot_columns(&self) -> Vec<usize> {
        let f = self.field;
        let mut a = self.entries.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
                continue;
            };
            for j in 0..cols {
                a.swap(r * cols + j, p * cols + j);
            }
            let inv = f.inv(a[r * cols + c]).expect("pivot is nonzero");
            for i in r + 1..rows {
                let factor = f.mul(a[i * cols + c], inv);
                if factor == 0 {
                    continue;
                }
                for j in c..cols {
                    let v = f.mul(factor, a[r * cols + j]);
                    a[i * cols + j] ^= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.pivot_columns().len()
    }

    /// Greedy left-to-right scan keeping each column that raises the rank.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.pivot_columns()
    }

    /// The `wm x lm` binary matrix `B` with `bits(s·M) = bits(s)·B`.
    pub fn binary_expand(&self) -> BitMatrix {
        let m = self.field.m as usize;
        let mut out = BitMatrix::zeros(self.rows * m, self.cols * m);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if a == 0 {
                    continue;
                }
                let block = self.field.multiplication_matrix(a);
                for k in 0..m {
                    for l in block.row(k).ones() {
                        out.put(i * m + k, j * m + l, true);
                    }
                }
            }
        }
        out
    }
}
