use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{int, Rational};

/// Valuation of a Laurent polynomial: the least power with a nonzero
/// coefficient, or `Infinity` for zero. Orders with every finite value below
/// `Infinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("+inf"),
        }
    }
}

/// A Laurent polynomial in `z` with exact rational coefficients.
///
/// Stored sparsely: a map from power to nonzero coefficient. The zero
/// polynomial is the empty map, so equality is structural.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentScalar {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Rational, power: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(power, c);
        }
        Self { terms }
    }

    /// `z^power`.
    pub fn z_pow(power: i64) -> Self {
        Self::monomial(Rational::one(), power)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, &c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, power: i64) -> Rational {
        self.terms.get(&power).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn valuation(&self) -> Valuation {
        match self.terms.keys().next() {
            Some(m) => Valuation::Finite(*m),
            None => Valuation::Infinity,
        }
    }

    /// Largest power present, `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == 0)
    }

    pub(crate) fn add_term(&mut self, power: i64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&power) {
            Some(existing) => {
                *existing += c;
                existing.is_zero()
            }
            None => {
                self.terms.insert(power, c.clone());
                false
            }
        };
        if remove {
            self.terms.remove(&power);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, a)| (m + k, a.clone())).collect(),
        }
    }

    /// The Euler derivative `z d/dz`: `z^m -> m z^m`.
    pub fn tau(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| **m != 0)
                .map(|(m, a)| (*m, a * int(*m)))
                .collect(),
        }
    }

    /// Substitutes `z = u^e`.
    pub fn substitute_power(&self, e: i64) -> Self {
        assert!(e >= 1, "substitution exponent must be positive");
        Self {
            terms: self.terms.iter().map(|(m, a)| (m * e, a.clone())).collect(),
        }
    }

    /// Terms with power in `[lo, hi]`.
    pub fn window(&self, lo: i64, hi: i64) -> Self {
        Self {
            terms: self.terms.range(lo..=hi).map(|(m, a)| (*m, a.clone())).collect(),
        }
    }

    /// Exact quotient in the Laurent polynomial ring, `None` if `divisor`
    /// does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let d_lo = divisor.valuation().finite()?;
        let d_hi = divisor.degree()?;
        let lead = divisor.coefficient(d_hi);
        let mut rem = self.clone();
        let mut quotient = Self::zero();
        let self_lo = self.valuation().finite()?;
        // long division from the top; the quotient's lowest power is
        // self_lo - d_lo, so anything below that left over is a remainder
        while let Some(top) = rem.degree() {
            let qpow = top - d_hi;
            if qpow < self_lo - d_lo {
                return None;
            }
            let qc = rem.coefficient(top) / &lead;
            for (m, c) in divisor.terms() {
                rem.add_term(m + qpow, &-(c * &qc));
            }
            quotient.add_term(qpow, &qc);
        }
        Some(quotient)
    }

    /// Residue of the value at `z = point` modulo `p`, used for rank
    /// certification. `None` when some coefficient has a denominator
    /// divisible by `p`.
    pub(crate) fn eval_mod(&self, point: u64, p: u64) -> Option<u64> {
        use super::rational::{mod_prime, mul_mod, pow_mod};
        let inv_point = pow_mod(point, p - 2, p);
        let mut acc = 0u64;
        for (m, c) in self.terms() {
            let base = if m >= 0 { point } else { inv_point };
            let term = mul_mod(mod_prime(c, p)?, pow_mod(base, m.unsigned_abs(), p), p);
            acc = (acc + term) % p;
        }
        Some(acc)
    }
}

impl fmt::Debug for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match m {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{m}")?,
            }
        }
        Ok(())
    }
}

impl Add for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m, c);
        }
        out
    }
}

impl Sub for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m, &-c);
        }
        out
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Mul for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = LaurentScalar::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in rhs.terms() {
                out.add_term(a + b, &(ca * cb));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for LaurentScalar {
            type Output = LaurentScalar;
            fn $method(self, rhs: LaurentScalar) -> LaurentScalar {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        -&self
    }
}
