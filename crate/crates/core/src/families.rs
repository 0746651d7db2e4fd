//! Standard connections with known slopes, used by the tests, the CLI
//! examples and the documentation.

use crate::error::{Error, Result};
use crate::exact::{int, LaurentMatrix, LaurentScalar};
use crate::filtration::ConnectionMatrix;
use crate::roots::{GroupData, GroupKind};

fn build(kind: GroupKind, size: usize, a: LaurentMatrix) -> Result<ConnectionMatrix> {
    ConnectionMatrix::new(GroupData::build(kind, size)?, a)
}

fn unit(power: i64) -> LaurentScalar {
    LaurentScalar::monomial(int(1), power)
}

fn require(n: usize, least: usize, what: &str) -> Result<()> {
    if n < least {
        return Err(Error::InvalidArgument(format!("{what} needs n >= {least}, got {n}")));
    }
    Ok(())
}

/// `[[0, z^-r], [z^(1-r), 0]]` on `GL_2`; slope `r - 1/2` for `r >= 1`.
pub fn airy(r: i64) -> Result<ConnectionMatrix> {
    let mut a = LaurentMatrix::zero(2);
    a.set(0, 1, unit(-r));
    a.set(1, 0, unit(1 - r));
    build(GroupKind::GL, 2, a)
}

/// `(z^-1 E_{1,n-1} + sum_{i<n-1} E_{i+1,i}) z^-m` on `SL_n`; slope
/// `m + 1/(n-1)`.
pub fn sl_example(n: usize, m: i64) -> Result<ConnectionMatrix> {
    require(n, 3, "the SL_n example")?;
    let mut a = LaurentMatrix::zero(n);
    a.set(0, n - 2, unit(-1 - m));
    for i in 0..n - 2 {
        a.set(i + 1, i, unit(-m));
    }
    build(GroupKind::SL, n, a)
}

/// `(z^-1 (E_13 - E_24) + E_31 + E_42) z^-m` on `Sp_4`; slope `m + 1/2`.
pub fn sp4_example(m: i64) -> Result<ConnectionMatrix> {
    let mut a = LaurentMatrix::zero(4);
    a.set(0, 2, unit(-1 - m));
    a.set(1, 3, -unit(-1 - m));
    a.set(2, 0, unit(-m));
    a.set(3, 1, unit(-m));
    build(GroupKind::Sp, 4, a)
}

/// Principal nilpotent of the negative simple roots plus `z^-1` times the
/// highest root vector, times `z^-m`, on `SL_n`; slope `m + 1/n`.
pub fn coxeter(n: usize, m: i64) -> Result<ConnectionMatrix> {
    require(n, 2, "the Coxeter connection")?;
    let mut a = LaurentMatrix::zero(n);
    a.set(0, n - 1, unit(-1 - m));
    for i in 0..n - 1 {
        a.set(i + 1, i, unit(-m));
    }
    build(GroupKind::SL, n, a)
}

/// `z^-1` times the positive simple root vectors plus the lowest root
/// vector, times `z^-m`, on `SL_n`; slope `m + (n-1)/n`.
pub fn coxeter_variant(n: usize, m: i64) -> Result<ConnectionMatrix> {
    require(n, 2, "the Coxeter variant")?;
    let mut a = LaurentMatrix::zero(n);
    a.set(n - 1, 0, unit(-m));
    for i in 0..n - 1 {
        a.set(i, i + 1, unit(-1 - m));
    }
    build(GroupKind::SL, n, a)
}

/// Diagonal `GL_n` connection with the given `(coefficient, power)` entries.
pub fn diagonal(entries: &[(i64, i64)]) -> Result<ConnectionMatrix> {
    require(entries.len(), 1, "a diagonal connection")?;
    let diag = entries
        .iter()
        .map(|&(c, p)| LaurentScalar::monomial(int(c), p))
        .collect();
    build(GroupKind::GL, entries.len(), LaurentMatrix::diagonal(diag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::slope::oracle_slope;

    #[test]
    fn family_slopes() {
        assert_eq!(oracle_slope(&airy(2).unwrap()).unwrap().0, rat(3, 2));
        assert_eq!(oracle_slope(&sl_example(4, 0).unwrap()).unwrap().0, rat(1, 3));
        assert_eq!(oracle_slope(&sp4_example(1).unwrap()).unwrap().0, rat(3, 2));
        assert_eq!(oracle_slope(&coxeter(3, 1).unwrap()).unwrap().0, rat(4, 3));
        assert_eq!(oracle_slope(&coxeter_variant(3, 0).unwrap()).unwrap().0, rat(2, 3));
        assert_eq!(oracle_slope(&diagonal(&[(1, -2), (3, 0)]).unwrap()).unwrap().0, int(2));
    }

    #[test]
    fn rejects_small_sizes() {
        assert!(sl_example(2, 0).is_err());
        assert!(coxeter(1, 0).is_err());
        assert!(diagonal(&[]).is_err());
    }
}
