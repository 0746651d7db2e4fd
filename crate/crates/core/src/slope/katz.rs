//! Newton-polygon slope of a connection on a vector bundle, computed from a
//! cyclic vector, plus the lattice-growth trace used as a diagnostic.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::rational::{mul_mod, pow_mod};
use crate::exact::{int, LaurentMatrix, LaurentScalar, Rational, Series, Valuation};

const PRIME: u64 = (1 << 61) - 1;
const EVAL_POINTS: [u64; 3] = [2, 3, 1_000_003];
const RANDOM_CANDIDATES: usize = 24;
const MAX_RELATIVE_PRECISION: usize = 1 << 14;

/// Outcome of the cyclic-vector computation.
#[derive(Clone, Debug, PartialEq)]
pub struct KatzResult {
    pub slope: Rational,
    /// Index of the cyclic vector in the candidate list.
    pub candidate: usize,
    /// Valuations of the operator coefficients `c_0, ..., c_{n-1}`
    /// (`None` for a zero coefficient or one known only to be large).
    pub coefficient_valuations: Vec<Option<i64>>,
}

type Vector = Vec<LaurentScalar>;

/// `(tau + A) v`.
fn apply(a: &LaurentMatrix, v: &Vector) -> Vector {
    let n = a.size();
    (0..n)
        .map(|i| {
            let mut acc = v[i].tau();
            for (j, vj) in v.iter().enumerate() {
                let aij = a.get(i, j);
                if !aij.is_zero() && !vj.is_zero() {
                    acc = &acc + &(aij * vj);
                }
            }
            acc
        })
        .collect()
}

fn candidates(n: usize, seed: u64) -> impl Iterator<Item = Vector> {
    let staircase = std::iter::once((0..n).map(|j| LaurentScalar::z_pow(j as i64)).collect::<Vector>());
    let basis = (0..n).map(move |k| {
        (0..n)
            .map(|j| {
                if j == k {
                    LaurentScalar::one()
                } else {
                    LaurentScalar::zero()
                }
            })
            .collect::<Vector>()
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spread = n as i64;
    let random = (0..RANDOM_CANDIDATES).map(move |_| {
        (0..n)
            .map(|_| {
                LaurentScalar::from_terms((0..3).map(|_| (rng.gen_range(-spread..=spread), int(rng.gen_range(-3..=3)))))
            })
            .collect::<Vector>()
    });
    staircase.chain(basis).chain(random)
}

/// Rank of a matrix of residues modulo `PRIME`.
fn rank_mod(mut rows: Vec<Vec<u64>>) -> usize {
    let p = PRIME;
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][c], p - 2, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = mul_mod(rows[r][c], inv, p);
                for k in c..cols {
                    let sub = mul_mod(f, rows[rank][k], p);
                    rows[r][k] = (rows[r][k] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether the columns are independent over the Laurent field; a full
/// rank at some evaluation point certifies it.
fn independent(columns: &[Vector]) -> bool {
    let n = columns.len();
    EVAL_POINTS.iter().any(|&z0| {
        let rows: Option<Vec<Vec<u64>>> = (0..n)
            .map(|i| columns.iter().map(|col| col[i].eval_mod(z0, PRIME)).collect())
            .collect();
        rows.is_some_and(|r| rank_mod(r) == n)
    })
}

/// Solves `m c = b` over truncated series, pivoting on the least certified
/// valuation. `None` when the precision runs out.
fn solve_series(mut m: Vec<Vec<Series>>, mut b: Vec<Series>, relative: usize) -> Option<Vec<Series>> {
    let n = b.len();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let piv = (k..n)
            .filter_map(|r| m[r][k].certified_valuation().map(|v| (v, r)))
            .min()?
            .1;
        m.swap(k, piv);
        b.swap(k, piv);
        let inv = m[k][k].inverse(relative)?;
        for i in k + 1..n {
            if m[i][k].is_exact_zero() {
                continue;
            }
            let f = m[i][k].mul(&inv);
            for j in k + 1..n {
                if !m[k][j].is_exact_zero() {
                    let t = f.mul(&m[k][j]);
                    m[i][j] = m[i][j].sub(&t);
                }
            }
            b[i] = b[i].sub(&f.mul(&b[k]));
            m[i][k] = Series::exact_zero();
        }
        pivots.push(inv);
    }
    let mut c = vec![Series::exact_zero(); n];
    for k in (0..n).rev() {
        let mut acc = b[k].clone();
        for j in k + 1..n {
            if !m[k][j].is_exact_zero() && !c[j].is_exact_zero() {
                acc = acc.sub(&m[k][j].mul(&c[j]));
            }
        }
        c[k] = acc.mul(&pivots[k]);
    }
    Some(c)
}

/// Maximal Newton-polygon slope of the monic operator
/// `tau^n - sum_i c_i tau^i`, i.e. `max(0, max_i -v(c_i)/(n-i))`.
///
/// Returns `None` when some uncertified coefficient could still raise
/// the maximum.
fn newton_slope(c: &[Series]) -> Option<(Rational, Vec<Option<i64>>)> {
    let n = c.len() as i64;
    let mut best = Rational::zero();
    let mut bounds = Vec::new();
    let mut vals = Vec::with_capacity(c.len());
    for (i, ci) in c.iter().enumerate() {
        let span = int(n - i as i64);
        if ci.is_exact_zero() {
            vals.push(None);
            continue;
        }
        match ci.certified_valuation() {
            Some(v) => {
                vals.push(Some(v));
                let s = int(-v) / &span;
                if s > best {
                    best = s;
                }
            }
            None => {
                vals.push(None);
                let p = ci.precision().expect("inexact series carries a bound");
                bounds.push(int(-p) / &span);
            }
        }
    }
    bounds.iter().all(|b| b <= &best).then_some((best, vals))
}

/// Exact maximal Katz slope of `d + A dz/z` on the defining vector bundle.
pub fn katz_newton_slope(a: &LaurentMatrix) -> Result<Rational> {
    katz_newton_slope_seeded(a, 0).map(|r| r.slope)
}

pub fn katz_newton_slope_seeded(a: &LaurentMatrix, seed: u64) -> Result<KatzResult> {
    let n = a.size();
    if a.is_zero() || n == 0 {
        return Ok(KatzResult {
            slope: Rational::zero(),
            candidate: 0,
            coefficient_valuations: Vec::new(),
        });
    }
    for (index, e) in candidates(n, seed).enumerate() {
        let mut iterates = vec![e];
        for _ in 0..n {
            let next = apply(a, iterates.last().unwrap());
            iterates.push(next);
        }
        let target = iterates.pop().unwrap();
        if !independent(&iterates) {
            continue;
        }
        let mut relative = 4;
        loop {
            let m: Vec<Vec<Series>> = (0..n)
                .map(|i| iterates.iter().map(|col| Series::from_laurent(&col[i])).collect())
                .collect();
            let b: Vec<Series> = target.iter().map(Series::from_laurent).collect();
            if let Some((slope, vals)) = solve_series(m, b, relative).as_deref().and_then(newton_slope) {
                return Ok(KatzResult {
                    slope,
                    candidate: index,
                    coefficient_valuations: vals,
                });
            }
            relative += relative / 2;
            if relative > MAX_RELATIVE_PRECISION {
                return Err(Error::Capability(format!(
                    "series precision exhausted while solving for the operator of a {n}x{n} system"
                )));
            }
        }
    }
    Err(Error::Capability(format!(
        "no cyclic vector found among the candidate list for a {n}x{n} system"
    )))
}

/// Growth data `s_i = max(0, -v((tau + A)^i))` on the standard lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct KatzTrace {
    pub iterate_valuations: Vec<i64>,
    pub horizon: usize,
    pub rate: Rational,
    pub bounded: bool,
}

/// Default horizon `4 n (1 + pole order)`.
pub fn default_horizon(a: &LaurentMatrix) -> usize {
    4 * a.size() * (1 + a.pole_order().max(0) as usize)
}

/// Tracks `s_i - rate * i` over `i <= horizon`; the sequence is judged
/// bounded when its maximum over the second half of the horizon does not
/// exceed the maximum over the first half.
pub fn katz_boundedness_trace(a: &LaurentMatrix, rate: &Rational, horizon: usize) -> Result<KatzTrace> {
    let n = a.size();
    if horizon < 2 * n {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} is below twice the matrix size {n}"
        )));
    }
    let mut v = LaurentMatrix::identity(n);
    let mut s = Vec::with_capacity(horizon + 1);
    for i in 0..=horizon {
        if i > 0 {
            v = &v.tau() + &(a * &v);
        }
        let val = match v.valuation() {
            Valuation::Finite(k) => (-k).max(0),
            Valuation::Infinity => 0,
        };
        s.push(val);
    }
    let d: Vec<Rational> = s
        .iter()
        .enumerate()
        .map(|(i, &si)| int(si) - rate * int(i as i64))
        .collect();
    let half = horizon / 2;
    let first = d[1..=half].iter().max().cloned().unwrap_or_else(Rational::zero);
    let second = d[half + 1..].iter().max().cloned().unwrap_or_else(Rational::zero);
    Ok(KatzTrace {
        iterate_valuations: s,
        horizon,
        rate: rate.clone(),
        bounded: second <= first || second.is_negative(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn z(c: i64, m: i64) -> LaurentScalar {
        LaurentScalar::monomial(int(c), m)
    }

    fn airy(r: i64) -> LaurentMatrix {
        LaurentMatrix::from_rows(vec![
            vec![LaurentScalar::zero(), z(1, -r)],
            vec![z(1, 1 - r), LaurentScalar::zero()],
        ])
        .unwrap()
    }

    #[test]
    fn diagonal_pole() {
        let a = LaurentMatrix::diagonal(vec![z(5, -3), LaurentScalar::zero()]);
        assert_eq!(katz_newton_slope(&a).unwrap(), int(3));
    }

    #[test]
    fn airy_slopes() {
        for r in 1..4 {
            assert_eq!(katz_newton_slope(&airy(r)).unwrap(), int(r) - rat(1, 2));
        }
    }

    #[test]
    fn regular_inputs() {
        let a = LaurentMatrix::from_rows(vec![vec![z(1, 0), z(3, 2)], vec![z(-2, 1), z(7, 0)]]).unwrap();
        assert_eq!(katz_newton_slope(&a).unwrap(), int(0));
        assert_eq!(katz_newton_slope(&LaurentMatrix::zero(3)).unwrap(), int(0));
        // nilpotent pole that gauges away
        let b = LaurentMatrix::from_rows(vec![
            vec![LaurentScalar::zero(), z(1, -1)],
            vec![z(1, 1), LaurentScalar::zero()],
        ])
        .unwrap();
        assert_eq!(katz_newton_slope(&b).unwrap(), int(0));
    }

    #[test]
    fn coxeter_gl3() {
        let mut a = LaurentMatrix::zero(3);
        a.set(0, 2, z(1, -1));
        a.set(1, 0, z(1, 0));
        a.set(2, 1, z(1, 0));
        assert_eq!(katz_newton_slope(&a).unwrap(), rat(1, 3));
    }

    #[test]
    fn boundedness_examples() {
        let a = LaurentMatrix::diagonal(vec![z(1, -3), LaurentScalar::zero()]);
        let h = default_horizon(&a);
        assert!(katz_boundedness_trace(&a, &int(3), h).unwrap().bounded);
        assert!(!katz_boundedness_trace(&a, &int(2), h).unwrap().bounded);
        let t = katz_boundedness_trace(&airy(1), &rat(1, 2), 16).unwrap();
        assert!(t.bounded);
        assert_eq!(t.iterate_valuations.len(), 17);
        assert_eq!(t.iterate_valuations[4], 2);
        assert!(katz_boundedness_trace(&a, &int(3), 3).is_err());
    }
}
