use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::laurent::{LaurentScalar, Valuation};
use super::linalg::QMatrix;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Square matrix of Laurent polynomials over the rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentMatrix {
    n: usize,
    entries: Vec<LaurentScalar>,
}

impl LaurentMatrix {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "matrix size must be positive");
        Self {
            n,
            entries: vec![LaurentScalar::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = LaurentScalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<LaurentScalar>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Dimension("matrix has no rows".into()));
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Dimension(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        Ok(Self {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_constant(m: &QMatrix) -> Self {
        assert_eq!(m.rows(), m.cols());
        Self::from_constant_at(m, 0)
    }

    /// `m * z^power`.
    pub fn from_constant_at(m: &QMatrix, power: i64) -> Self {
        let n = m.rows();
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[i * n + j] = LaurentScalar::monomial(m[(i, j)].clone(), power);
            }
        }
        out
    }

    /// `c z^power E_ij`.
    pub fn elementary(n: usize, i: usize, j: usize, c: Rational, power: i64) -> Self {
        let mut m = Self::zero(n);
        m.entries[i * n + j] = LaurentScalar::monomial(c, power);
        m
    }

    pub fn diagonal(diag: Vec<LaurentScalar>) -> Self {
        let n = diag.len();
        let mut m = Self::zero(n);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i * n + i] = d;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentScalar {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: LaurentScalar) {
        self.entries[i * self.n + j] = value;
    }

    pub(crate) fn entry_mut(&mut self, i: usize, j: usize) -> &mut LaurentScalar {
        &mut self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &LaurentScalar)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .map(move |(k, e)| ((k / self.n, k % self.n), e))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentScalar::is_zero)
    }

    fn check_size(&self, other: &Self, op: &str) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "{op} of {}x{} and {}x{} matrices",
                self.n, self.n, other.n, other.n
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_size(other, "sum")?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_size(other, "difference")?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_size(other, "product")?;
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    let e = out.entry_mut(i, j);
                    for (m, c) in prod.terms() {
                        e.add_term(m, c);
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&LaurentScalar, &LaurentScalar) -> LaurentScalar) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    fn map(&self, f: impl Fn(&LaurentScalar) -> LaurentScalar) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|e| e.scale(c))
    }

    pub fn scale_laurent(&self, f: &LaurentScalar) -> Self {
        self.map(|e| e * f)
    }

    pub fn shift(&self, k: i64) -> Self {
        self.map(|e| e.shift(k))
    }

    pub fn trace(&self) -> LaurentScalar {
        (0..self.n).fold(LaurentScalar::zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Entrywise Euler derivative `z d/dz`.
    pub fn tau(&self) -> Self {
        self.map(LaurentScalar::tau)
    }

    /// Substitutes `z = u^e` in every entry.
    pub fn substitute_power(&self, e: i64) -> Self {
        self.map(|x| x.substitute_power(e))
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn valuation(&self) -> Valuation {
        self.entries
            .iter()
            .map(LaurentScalar::valuation)
            .min()
            .unwrap_or(Valuation::Infinity)
    }

    /// Largest power present in any entry.
    pub fn degree(&self) -> Option<i64> {
        self.entries.iter().filter_map(LaurentScalar::degree).max()
    }

    /// `max(0, -valuation)`.
    pub fn pole_order(&self) -> i64 {
        match self.valuation() {
            Valuation::Finite(v) if v < 0 => -v,
            _ => 0,
        }
    }

    /// Coefficient matrix of `z^power`.
    pub fn coefficient(&self, power: i64) -> QMatrix {
        let n = self.n;
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.get(i, j).coefficient(power);
            }
        }
        m
    }

    /// Sorted list of powers carrying a nonzero coefficient.
    pub fn powers(&self) -> Vec<i64> {
        let mut p: Vec<i64> = self.entries.iter().flat_map(|e| e.terms().map(|(m, _)| m)).collect();
        p.sort_unstable();
        p.dedup();
        p
    }

    /// Entries in the power window `[lo, hi]`.
    pub fn window(&self, lo: i64, hi: i64) -> Self {
        self.map(|e| e.window(lo, hi))
    }

    /// Whether some power of the matrix vanishes over the Laurent field;
    /// decided by `self^n = 0`.
    pub fn is_nilpotent(&self) -> bool {
        let mut p = self.clone();
        for _ in 1..self.n {
            if p.is_zero() {
                return true;
            }
            p = &p * self;
        }
        p.is_zero()
    }

    /// Determinant by fraction-free elimination in the Laurent polynomial
    /// ring.
    pub fn determinant(&self) -> LaurentScalar {
        let n = self.n;
        let mut m: Vec<Vec<LaurentScalar>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = false;
        let mut prev = LaurentScalar::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
                return LaurentScalar::zero();
            };
            if p != k {
                m.swap(p, k);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num.div_exact(&prev).expect("Bareiss step divides exactly");
                }
                m[i][k] = LaurentScalar::zero();
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if sign {
            -det
        } else {
            det
        }
    }

    fn minor(&self, row: usize, col: usize) -> Self {
        let n = self.n;
        let mut out = Self::zero(n - 1);
        for (ii, i) in (0..n).filter(|&i| i != row).enumerate() {
            for (jj, j) in (0..n).filter(|&j| j != col).enumerate() {
                out.entries[ii * (n - 1) + jj] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn adjugate(&self) -> Self {
        let n = self.n;
        if n == 1 {
            return Self::identity(1);
        }
        let mut adj = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(j, i).determinant();
                adj.entries[i * n + j] = if (i + j) % 2 == 0 { c } else { -c };
            }
        }
        adj
    }

    /// Default power window for series inverses:
    /// `pole order + rank + 4`.
    pub fn default_window(&self) -> i64 {
        self.pole_order() + self.n as i64 + 4
    }

    /// Inverse of an invertible Laurent matrix.
    ///
    /// A monomial determinant `c z^k` gives an exact Laurent-polynomial
    /// inverse. Otherwise `1/det` is expanded as a power series truncated to
    /// `[-window, window]`; the result is returned only if it is an exact
    /// two-sided inverse (the series terminated inside the window).
    pub fn invert_unit(&self, window: i64) -> Result<Self> {
        let det = self.determinant();
        let err = |reason: &str| Error::Invertibility {
            determinant: det.to_string(),
            reason: reason.to_string(),
        };
        if det.is_zero() {
            return Err(err("singular matrix"));
        }
        let adj = self.adjugate();
        let inv = if det.is_monomial() {
            let (k, c) = det.terms().next().map(|(k, c)| (k, c.clone())).unwrap();
            adj.scale_laurent(&LaurentScalar::monomial(c.recip(), -k))
        } else {
            let series = truncated_inverse(&det, window);
            adj.scale_laurent(&series).window(-window, window)
        };
        let id = Self::identity(self.n);
        if &inv * self != id || self * &inv != id {
            return Err(err(&format!(
                "inverse series does not terminate within power window [-{window}, {window}]"
            )));
        }
        Ok(inv)
    }
}

/// `1/f` expanded around `z = 0` up to power `hi`.
fn truncated_inverse(f: &LaurentScalar, hi: i64) -> LaurentScalar {
    let v = f.valuation().finite().expect("nonzero");
    let unit = f.shift(-v);
    let u0 = unit.coefficient(0);
    let len = (hi + v).max(0) as usize + 1;
    let mut w: Vec<Rational> = Vec::with_capacity(len);
    w.push(u0.recip());
    for k in 1..len {
        let mut s = Rational::zero();
        for (j, uj) in unit.terms().filter(|(j, _)| *j >= 1 && (*j as usize) <= k) {
            s += uj * &w[k - j as usize];
        }
        w.push(-s / &u0);
    }
    LaurentScalar::from_terms(w.into_iter().enumerate().map(|(k, c)| (k as i64 - v, c)))
}

impl fmt::Debug for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.n {
            if i > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            f.write_str(&row.join(", "))?;
        }
        f.write_str("]")
    }
}

impl Add for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn add(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        self.try_add(rhs).expect("matrix sizes agree")
    }
}

impl Sub for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn sub(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        self.try_sub(rhs).expect("matrix sizes agree")
    }
}

impl Mul for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn mul(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        self.try_mul(rhs).expect("matrix sizes agree")
    }
}

impl Neg for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn neg(self) -> LaurentMatrix {
        self.map(|e| -e)
    }
}
