//! Dense exact-rational matrices.
//!
//! Every graph operator in this crate is integer valued, so all identities are
//! checked here without rounding. Floating point only enters through
//! [`RationalMatrix::float_eig`], which is used for eigenvector localization.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::{IntPolynomial, Polynomial};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Dense row-major matrix of arbitrary-precision rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// One float eigenpair together with its relative residual
/// `|M v - λ v| / (|M| |v|)`.
#[derive(Clone, Debug, Serialize)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

const EIG_EPS: f64 = 1e-14;
const EIG_MAX_ITER: usize = 10_000;

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from integer rows. All rows must have equal length;
    /// `cols` disambiguates the empty case.
    pub fn from_i64_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged integer rows");
        Self::from_fn(rows.len(), cols, |i, j| rat(rows[i][j]))
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        Self {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Column vector.
    pub fn column(v: &[Rational]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    /// Copy of the block `rows × cols`.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let (r0, c0) = (rows.start, cols.start);
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Reorders rows and columns: entry `(i, j)` of the result is
    /// `self[row_order[i]][col_order[j]]`.
    pub fn select(&self, row_order: &[usize], col_order: &[usize]) -> Self {
        Self::from_fn(row_order.len(), col_order.len(), |i, j| {
            self.get(row_order[i], col_order[j]).clone()
        })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Returns `λ` when `M v = λ v` holds exactly for a nonzero `v`.
    pub fn exact_eigenvalue(&self, v: &[Rational]) -> Option<Rational> {
        let k = v.iter().position(|x| !x.is_zero())?;
        let mv = self.mul_vec(v);
        let lambda = &mv[k] / &v[k];
        mv.iter()
            .zip(v)
            .all(|(a, b)| a == &(&lambda * b))
            .then_some(lambda)
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && self.first_difference(&self.transpose()).is_none()
    }

    pub fn is_integer(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Coordinates of the first entry (row-major) where the two matrices
    /// differ, or `(rows, cols)` of `self` when the shapes differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((self.rows, self.cols));
        }
        self.data
            .iter()
            .zip(&other.data)
            .position(|(a, b)| a != b)
            .map(|k| (k / self.cols, k % self.cols))
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None })
                    .collect()
            })
            .collect()
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_f64().unwrap_or(f64::NAN))
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Integer matrix with each row scaled by the lcm of its denominators,
    /// plus the product of those scale factors.
    fn clear_row_denominators(&self) -> (Vec<BigInt>, BigInt) {
        let mut out = Vec::with_capacity(self.data.len());
        let mut scale = BigInt::one();
        for i in 0..self.rows {
            let l = self
                .row(i)
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            for x in self.row(i) {
                out.push((x * Rational::from_integer(l.clone())).to_integer());
            }
            scale *= l;
        }
        (out, scale)
    }

    /// Exact determinant via fraction-free (Bareiss) elimination.
    /// The 0×0 determinant is 1.
    pub fn det(&self) -> Result<Rational> {
        self.require_square()?;
        let (ints, scale) = self.clear_row_denominators();
        Ok(Rational::new(bareiss_det(ints, self.rows), scale))
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(Error::Singular)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = a.get(col, col).clone();
            for j in 0..n {
                let v = a.get(col, j) / &p;
                a.set(col, j, v);
                let v = inv.get(col, j) / &p;
                inv.set(col, j, v);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let v = a.get(r, j) - &f * a.get(col, j);
                    a.set(r, j, v);
                    let v = inv.get(r, j) - &f * inv.get(col, j);
                    inv.set(r, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Exact rank by row reduction.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            a.swap_rows(pivot, rank);
            let p = a.get(rank, col).clone();
            for r in rank + 1..self.rows {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col) / &p;
                for j in col..self.cols {
                    let v = a.get(r, j) - &f * a.get(rank, j);
                    a.set(r, j, v);
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `det(xI - M)` for a matrix with integer entries, by Faddeev-LeVerrier
    /// over the integers (every division in the recurrence is exact).
    pub fn char_poly(&self) -> Result<IntPolynomial> {
        self.require_square()?;
        if let Some(k) = self.data.iter().position(|x| !x.is_integer()) {
            return Err(Error::NonInteger(k / self.cols, k % self.cols));
        }
        let ints: Vec<BigInt> = self.data.iter().map(|x| x.to_integer()).collect();
        Ok(IntPolynomial::new(faddeev_leverrier(&ints, self.rows)))
    }

    /// `det(xI - M)` for a rational matrix. The matrix is scaled by the least
    /// common denominator `d` of its entries, the integer characteristic
    /// polynomial of `dM` is computed, and coefficients are rescaled by
    /// `d^(i - n)`.
    pub fn char_poly_rational(&self) -> Result<Polynomial> {
        self.require_square()?;
        let n = self.rows;
        let d = self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scaled = self.scale(&Rational::from_integer(d.clone()));
        let int_poly = scaled.char_poly()?;
        let coeffs = int_poly
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let pow = num_traits::pow(d.clone(), n - i);
                Rational::new(c.clone(), pow)
            })
            .collect();
        Ok(Polynomial::new(coeffs))
    }

    /// Float eigenpairs sorted by eigenvalue. The symmetric path uses a
    /// symmetric QR eigensolver; the general path returns only real
    /// eigenvalues, with eigenvectors taken from the null direction of
    /// `M - λI`.
    pub fn float_eig(&self, symmetric: bool) -> Result<Vec<EigenPair>> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(Vec::new());
        }
        let m = self.to_f64();
        let norm = m.norm().max(f64::MIN_POSITIVE);
        let mut pairs: Vec<EigenPair> = if symmetric {
            let eig = nalgebra::SymmetricEigen::try_new(m.clone(), EIG_EPS, EIG_MAX_ITER)
                .ok_or(Error::NoConvergence)?;
            (0..n)
                .map(|k| {
                    let v = eig.eigenvectors.column(k).into_owned();
                    make_pair(&m, norm, eig.eigenvalues[k], v.as_slice().to_vec())
                })
                .collect()
        } else {
            let schur = m
                .clone()
                .try_schur(EIG_EPS, EIG_MAX_ITER)
                .ok_or(Error::NoConvergence)?;
            let mut out = Vec::new();
            for z in schur.complex_eigenvalues().iter() {
                if z.im.abs() > 1e-9 * norm {
                    continue;
                }
                let shifted = &m - DMatrix::identity(n, n) * z.re;
                let svd = shifted.svd(false, true);
                let v_t = svd.v_t.ok_or(Error::NoConvergence)?;
                let (k, _) = svd
                    .singular_values
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(b.1))
                    .ok_or(Error::NoConvergence)?;
                let v: Vec<f64> = v_t.row(k).iter().copied().collect();
                out.push(make_pair(&m, norm, z.re, v));
            }
            out
        };
        pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
        Ok(pairs)
    }
}

fn make_pair(m: &DMatrix<f64>, norm: f64, value: f64, vector: Vec<f64>) -> EigenPair {
    let residual = relative_residual(m, norm, value, &vector);
    EigenPair {
        value,
        vector,
        residual,
    }
}

/// `|M v - λ v| / (|M| |v|)` with Frobenius `|M|`.
pub fn relative_residual(m: &DMatrix<f64>, norm: f64, value: f64, v: &[f64]) -> f64 {
    let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if vn == 0.0 {
        return f64::INFINITY;
    }
    let mut r = 0.0;
    for i in 0..m.nrows() {
        let mv: f64 = (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum();
        let d = mv - value * v[i];
        r += d * d;
    }
    r.sqrt() / (norm.max(f64::MIN_POSITIVE) * vn)
}

fn bareiss_det(mut a: Vec<BigInt>, n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                a[i * n + j] = v / &prev;
            }
        }
        prev = a[k * n + k].clone();
    }
    sign * &a[n * n - 1]
}

fn int_matmul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = &a[i * n + k];
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * &b[k * n + j];
            }
        }
    }
    out
}

/// Coefficients (ascending) of `det(xI - A)`.
fn faddeev_leverrier(a: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m = vec![BigInt::zero(); n * n];
    for k in 1..=n {
        for i in 0..n {
            m[i * n + i] += &c[n - k + 1];
        }
        let am = int_matmul(a, &m, n);
        let tr: BigInt = (0..n).map(|i| am[i * n + i].clone()).sum();
        let (q, r) = tr.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero(), "Faddeev-LeVerrier trace not divisible");
        c[n - k] = -q;
        m = am;
    }
    c
}

macro_rules! elementwise {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&RationalMatrix> for &RationalMatrix {
            type Output = RationalMatrix;
            fn $method(self, rhs: &RationalMatrix) -> RationalMatrix {
                assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
                RationalMatrix {
                    rows: self.rows,
                    cols: self.cols,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| a $op b).collect(),
                }
            }
        }
    };
}

elementwise!(Add, add, +);
elementwise!(Sub, sub, -);

impl Mul<&RationalMatrix> for &RationalMatrix {
    type Output = RationalMatrix;
    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "product shape mismatch");
        let mut out = RationalMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += x * rhs.get(k, j);
                }
            }
        }
        out
    }
}

impl Neg for &RationalMatrix {
    type Output = RationalMatrix;
    fn neg(self) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 || self.cols == 0 {
            return writeln!(f, "[] ({}x{})", self.rows, self.cols);
        }
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

/// Integers as JSON numbers, everything else as a `"p/q"` string.
pub fn rational_json(x: &Rational) -> serde_json::Value {
    match (x.is_integer(), x.to_integer().to_i64()) {
        (true, Some(v)) => serde_json::Value::from(v),
        _ => serde_json::Value::from(x.to_string()),
    }
}

/// For `#[serde(serialize_with)]` on rational fields.
pub fn serialize_rational<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    rational_json(x).serialize(s)
}

/// For `#[serde(serialize_with)]` on rational vectors.
pub fn serialize_rationals<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(rational_json).collect::<Vec<_>>().serialize(s)
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<serde_json::Value>> = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(rational_json)
                    .collect()
            })
            .collect();
        rows.serialize(s)
    }
}

/// `Σ a_i b_i` over rationals.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_i64(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Parses `"p/q"` or an integer string into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("`{s}` is not a rational number"));
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

pub fn is_nonnegative(x: &Rational) -> bool {
    !x.is_negative()
}
