//! Truncated Laurent series with tracked absolute precision.
//!
//! A [`Series`] stores exact rational coefficients for every power below its
//! precision bound; everything at or above the bound is unknown. Values built
//! from Laurent polynomials carry no bound at all. Arithmetic propagates the
//! bound so that every reported coefficient is exact, which lets the
//! Newton-polygon routine certify valuations without rational-function
//! arithmetic.

use num_traits::Zero;

use super::laurent::LaurentScalar;
use super::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    /// Power of `coeffs[0]`.
    start: i64,
    coeffs: Vec<Rational>,
    /// Coefficients of powers `>= prec` are unknown; `None` means exact.
    prec: Option<i64>,
}

impl Series {
    pub fn exact_zero() -> Self {
        Self {
            start: 0,
            coeffs: Vec::new(),
            prec: None,
        }
    }

    pub fn from_laurent(f: &LaurentScalar) -> Self {
        let Some(lo) = f.valuation().finite() else {
            return Self::exact_zero();
        };
        let hi = f.degree().unwrap();
        let mut coeffs = vec![Rational::zero(); (hi - lo + 1) as usize];
        for (m, c) in f.terms() {
            coeffs[(m - lo) as usize] = c.clone();
        }
        Self {
            start: lo,
            coeffs,
            prec: None,
        }
    }

    fn normalized(mut self) -> Self {
        if let Some(p) = self.prec {
            let keep = (p - self.start).clamp(0, self.coeffs.len() as i64) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.start = 0;
        }
        self
    }

    pub fn precision(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Valuation, when some known coefficient is nonzero.
    pub fn certified_valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_none()
    }

    /// Lower bound for the valuation: the certified valuation, else the
    /// precision bound (`None` = exact zero).
    fn valuation_bound(&self) -> Option<i64> {
        self.certified_valuation().or(self.prec)
    }

    fn coeff(&self, power: i64) -> Rational {
        let k = power - self.start;
        if k < 0 || k >= self.coeffs.len() as i64 {
            Rational::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    fn known_end(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    fn combine(&self, other: &Self, sign: bool) -> Self {
        let prec = min_prec(self.prec, other.prec);
        if self.coeffs.is_empty() && other.coeffs.is_empty() {
            return Self {
                start: 0,
                coeffs: Vec::new(),
                prec,
            };
        }
        let lo = match (self.coeffs.is_empty(), other.coeffs.is_empty()) {
            (true, _) => other.start,
            (_, true) => self.start,
            _ => self.start.min(other.start),
        };
        let mut hi = self.known_end().max(other.known_end());
        if let Some(p) = prec {
            hi = hi.min(p);
        }
        let coeffs = (lo..hi.max(lo))
            .map(|m| {
                let b = other.coeff(m);
                if sign {
                    self.coeff(m) - b
                } else {
                    self.coeff(m) + b
                }
            })
            .collect();
        Self {
            start: lo,
            coeffs,
            prec,
        }
        .normalized()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (Some(va), Some(vb)) = (self.valuation_bound(), other.valuation_bound()) else {
            return Self::exact_zero();
        };
        let prec = min_prec(self.prec.map(|p| p + vb), other.prec.map(|p| p + va));
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self {
                start: 0,
                coeffs: Vec::new(),
                prec,
            };
        }
        let start = self.start + other.start;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(p) = prec {
            len = len.min((p - start).max(0) as usize);
        }
        let mut coeffs = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self { start, coeffs, prec }.normalized()
    }

    /// Multiplicative inverse to at most `relative` terms of relative
    /// precision. `None` when the valuation is not certified.
    pub fn inverse(&self, relative: usize) -> Option<Self> {
        let v = self.certified_valuation()?;
        let own_rel = self.prec.map(|p| (p - v) as usize);
        let rel = own_rel.map_or(relative, |r| r.min(relative)).max(1);
        let u0 = self.coeffs[0].clone();
        let inv0 = u0.recip();
        let mut w: Vec<Rational> = Vec::with_capacity(rel);
        w.push(inv0.clone());
        for k in 1..rel {
            let mut s = Rational::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                let uj = &self.coeffs[j];
                if !uj.is_zero() {
                    s += uj * &w[k - j];
                }
            }
            w.push(-s * &inv0);
        }
        Some(
            Self {
                start: -v,
                coeffs: w,
                prec: Some(-v + rel as i64),
            }
            .normalized(),
        )
    }
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    fn lp(terms: &[(i64, i64)]) -> Series {
        Series::from_laurent(&LaurentScalar::from_terms(terms.iter().map(|&(m, c)| (m, int(c)))))
    }

    #[test]
    fn inverse_of_one_minus_z() {
        let f = lp(&[(0, 1), (1, -1)]);
        let inv = f.inverse(5).unwrap();
        assert_eq!(inv.precision(), Some(5));
        assert_eq!(inv.certified_valuation(), Some(0));
        let prod = inv.mul(&f);
        assert_eq!(prod.certified_valuation(), Some(0));
        assert_eq!(prod.coeff(0), int(1));
        for m in 1..5 {
            assert!(prod.coeff(m).is_zero());
        }
        assert_eq!(prod.precision(), Some(5));
    }

    #[test]
    fn precision_propagates_through_products() {
        let f = lp(&[(-2, 3), (0, 1)]).inverse(4).unwrap();
        // 1/(3z^-2 + 1) = z^2/3 - z^4/9 + ..., known to 4 relative terms
        assert_eq!(f.certified_valuation(), Some(2));
        assert_eq!(f.precision(), Some(6));
        let g = f.mul(&lp(&[(-3, 1)]));
        assert_eq!(g.precision(), Some(3));
        assert_eq!(g.certified_valuation(), Some(-1));
    }

    #[test]
    fn cancellation_below_precision_is_unknown_zero() {
        let a = lp(&[(0, 1)]).inverse(3).unwrap();
        let d = a.sub(&a);
        assert_eq!(d.certified_valuation(), None);
        assert_eq!(d.precision(), Some(3));
        assert!(!d.is_exact_zero());
        assert!(lp(&[(1, 2)]).sub(&lp(&[(1, 2)])).is_exact_zero());
    }
}
