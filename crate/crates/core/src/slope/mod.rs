//! Slopes of flat G-bundles: the adjoint/character computation with the
//! cyclic-vector oracle, cross-checks, the stratum search, ramified
//! pullback and the leading-term checks.

mod adjoint;
mod katz;
mod search;

use std::fmt;

use num_traits::Zero;

pub use adjoint::{adjoint_matrix, character_slopes};
pub use katz::{
    default_horizon, katz_boundedness_trace, katz_newton_slope, katz_newton_slope_seeded, KatzResult, KatzTrace,
};
pub use search::{depth_map, fundamentalize_depth_zero, stratum_search, SearchOutcome};

use crate::error::{Error, Result};
use crate::exact::{int, LaurentMatrix, Rational, Valuation};
use crate::filtration::ConnectionMatrix;
use crate::strata::Stratum;

/// The methods that contribute to a slope report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    StrataSearch,
    AdjointOracle,
    CharacterSlopes,
    KatzDefining,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::StrataSearch => "strata_search",
            Method::AdjointOracle => "adjoint_oracle",
            Method::CharacterSlopes => "character_slopes",
            Method::KatzDefining => "katz_defining",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SlopeReport {
    pub slope: Rational,
    pub regular_singular: bool,
    /// Each method run, with the value it produced.
    pub methods: Vec<(Method, Rational)>,
    pub agreement: bool,
    pub search: SearchOutcome,
}

impl SlopeReport {
    pub fn stratum(&self) -> Option<&Stratum> {
        self.search.stratum.as_ref()
    }

    pub fn method(&self, m: Method) -> Option<&Rational> {
        self.methods.iter().find(|(k, _)| *k == m).map(|(_, v)| v)
    }
}

/// Slope from the adjoint oracle and the characters, with the values of
/// both methods.
pub fn oracle_slope(conn: &ConnectionMatrix) -> Result<(Rational, Rational, Vec<Rational>)> {
    let adjoint = katz_newton_slope(&adjoint_matrix(conn))?;
    let chars = character_slopes(conn);
    let slope = chars
        .iter()
        .fold(adjoint.clone(), |m, c| if *c > m { c.clone() } else { m });
    Ok((slope, adjoint, chars))
}

/// Full slope computation with every cross-check.
///
/// The primary value is `max(adjoint oracle, character slopes)`. The
/// defining-representation oracle must agree, no optimal point may have
/// smaller depth, and any stratum found is certified fundamental at that
/// depth; a violation is an inconsistency error carrying every value.
pub fn slope(conn: &ConnectionMatrix) -> Result<SlopeReport> {
    let (value, adjoint, chars) = oracle_slope(conn)?;
    let mut methods = vec![(Method::AdjointOracle, adjoint)];
    if let Some(c) = chars.iter().max() {
        methods.push((Method::CharacterSlopes, c.clone()));
    }
    let defining = katz_newton_slope(conn.matrix())?;
    methods.push((Method::KatzDefining, defining.clone()));
    let inconsistent = |message: String, methods: &[(Method, Rational)]| Error::Inconsistency {
        message,
        values: methods.iter().map(|(m, v)| (m.to_string(), v.clone())).collect(),
    };
    if defining != value {
        return Err(inconsistent(
            format!("defining-representation slope {defining} differs from {value}"),
            &methods,
        ));
    }
    let search = stratum_search(conn, &value);
    if let Some((x, d)) = search.depth_map.iter().find(|(_, d)| d < &value) {
        return Err(inconsistent(
            format!("depth {d} at {x} is below the slope {value}"),
            &methods,
        ));
    }
    if let Some(s) = &search.stratum {
        methods.push((Method::StrataSearch, s.depth.clone()));
        if s.depth != value || !crate::strata::is_fundamental(s) {
            return Err(inconsistent(
                format!("stratum search returned depth {} at {}", s.depth, s.point),
                &methods,
            ));
        }
    }
    Ok(SlopeReport {
        regular_singular: value.is_zero(),
        slope: value,
        methods,
        agreement: true,
        search,
    })
}

/// Whether the connection is regular singular (slope zero).
pub fn is_regular_singular(conn: &ConnectionMatrix) -> Result<bool> {
    Ok(oracle_slope(conn)?.0.is_zero())
}

/// Pullback along `z = u^e`: `A'(u) = e A(u^e)`.
pub fn pullback_connection(conn: &ConnectionMatrix, e: u32) -> Result<ConnectionMatrix> {
    if e == 0 {
        return Err(Error::InvalidArgument("cover degree must be positive".into()));
    }
    let e = i64::from(e);
    let a = conn.matrix().substitute_power(e).scale(&int(e));
    ConnectionMatrix::new(conn.group().clone(), a)
}

/// Reads the slope `k/e` off a form over the degree-`e` cover whose lowest
/// coefficient `M_{-k}` is nonnilpotent; `None` otherwise.
pub fn frenkel_gross_check(conn: &ConnectionMatrix, e: u32) -> Option<Rational> {
    if e == 0 {
        return None;
    }
    let a: &LaurentMatrix = conn.matrix();
    let Valuation::Finite(v) = a.valuation() else {
        return None;
    };
    if v > 0 || a.coefficient(v).is_nilpotent() {
        return None;
    }
    Some(Rational::new((-v).into(), i64::from(e).into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, LaurentScalar};
    use crate::roots::{GroupData, GroupKind};

    fn z(c: i64, m: i64) -> LaurentScalar {
        LaurentScalar::monomial(int(c), m)
    }

    fn conn(kind: GroupKind, n: usize, a: LaurentMatrix) -> ConnectionMatrix {
        ConnectionMatrix::new(GroupData::build(kind, n).unwrap(), a).unwrap()
    }

    fn sl3_example(m: i64) -> ConnectionMatrix {
        let mut a = LaurentMatrix::zero(3);
        a.set(0, 1, z(1, -1 - m));
        a.set(1, 0, z(1, -m));
        conn(GroupKind::SL, 3, a)
    }

    #[test]
    fn sl3_example_slope() {
        for m in 0..3 {
            let r = slope(&sl3_example(m)).unwrap();
            assert_eq!(r.slope, int(m) + rat(1, 2));
            let s = r.stratum().unwrap();
            assert_eq!(&s.point.coords[0] - &s.point.coords[1], rat(1, 2));
        }
    }

    #[test]
    fn pullback_examples() {
        let g1 = conn(GroupKind::GL, 1, LaurentMatrix::diagonal(vec![z(1, -3)]));
        let p = pullback_connection(&g1, 2).unwrap();
        assert_eq!(p.matrix(), &LaurentMatrix::diagonal(vec![z(2, -6)]));
        assert_eq!(slope(&p).unwrap().slope, int(6));
        assert_eq!(pullback_connection(&g1, 1).unwrap(), g1);
        let p = pullback_connection(&sl3_example(0), 2).unwrap();
        assert_eq!(slope(&p).unwrap().slope, int(1));
    }

    #[test]
    fn frenkel_gross_examples() {
        let a = LaurentMatrix::from_rows(vec![
            vec![LaurentScalar::zero(), z(2, -1)],
            vec![z(2, -1), LaurentScalar::zero()],
        ])
        .unwrap();
        assert_eq!(frenkel_gross_check(&conn(GroupKind::SL, 2, a), 2), Some(rat(1, 2)));
        let n = conn(GroupKind::GL, 2, LaurentMatrix::elementary(2, 0, 1, int(1), -2));
        assert_eq!(frenkel_gross_check(&n, 1), None);
        let c = conn(GroupKind::GL, 2, LaurentMatrix::diagonal(vec![z(1, -3), z(1, -3)]));
        assert_eq!(frenkel_gross_check(&c, 3), Some(int(1)));
    }

    #[test]
    fn regular_singular_examples() {
        let a = LaurentMatrix::from_rows(vec![vec![z(1, 0), z(3, 1)], vec![z(1, 0), z(-1, 0)]]).unwrap();
        assert!(is_regular_singular(&conn(GroupKind::SL, 2, a)).unwrap());
        assert!(!is_regular_singular(&sl3_example(0)).unwrap());
        let b = LaurentMatrix::from_rows(vec![
            vec![LaurentScalar::zero(), z(1, -1)],
            vec![z(1, 1), LaurentScalar::zero()],
        ])
        .unwrap();
        let c = conn(GroupKind::GL, 2, b);
        assert!(is_regular_singular(&c).unwrap());
        let r = slope(&c).unwrap();
        assert!(r.regular_singular);
        assert!(r.stratum().is_some());
    }
}
