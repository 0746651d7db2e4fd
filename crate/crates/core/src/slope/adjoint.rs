//! The adjoint representation and the character slopes.

use crate::exact::{LaurentMatrix, Rational, Valuation};
use crate::filtration::ConnectionMatrix;
use crate::roots::GroupKind;

/// Matrix of `ad(A)` in the basis: torus basis, then root vectors in the
/// group's stored order.
pub fn adjoint_matrix(conn: &ConnectionMatrix) -> LaurentMatrix {
    let group = conn.group();
    let basis = group.lie_basis();
    let dim = basis.len();
    let mut out = LaurentMatrix::zero(dim);
    for (k, b) in basis.iter().enumerate() {
        let image = conn.matrix().commutator(b);
        for (i, c) in group.lie_coordinates(&image).into_iter().enumerate() {
            if !c.is_zero() {
                out.set(i, k, c);
            }
        }
    }
    out
}

/// Slopes of the one-dimensional representations needed alongside the
/// adjoint: the determinant for `GL`, nothing for semisimple groups.
pub fn character_slopes(conn: &ConnectionMatrix) -> Vec<Rational> {
    match conn.group().kind {
        GroupKind::GL => {
            let v = match conn.matrix().trace().valuation() {
                Valuation::Finite(k) => (-k).max(0),
                Valuation::Infinity => 0,
            };
            vec![Rational::from_integer(v.into())]
        }
        GroupKind::SL | GroupKind::Sp => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, LaurentScalar};
    use crate::roots::GroupData;

    fn z(c: i64, m: i64) -> LaurentScalar {
        LaurentScalar::monomial(int(c), m)
    }

    #[test]
    fn gl1_is_abelian() {
        let g = GroupData::build(GroupKind::GL, 1).unwrap();
        let conn = ConnectionMatrix::new(g, LaurentMatrix::diagonal(vec![z(4, -3)])).unwrap();
        assert!(adjoint_matrix(&conn).is_zero());
        assert_eq!(character_slopes(&conn), vec![int(3)]);
    }

    #[test]
    fn sl2_torus_weights() {
        let g = GroupData::build(GroupKind::SL, 2).unwrap();
        let a = LaurentMatrix::diagonal(vec![z(5, -1), z(-5, -1)]);
        let conn = ConnectionMatrix::new(g.clone(), a).unwrap();
        let ad = adjoint_matrix(&conn);
        let e = g.root_at(0, 1).unwrap() + 1;
        let f = g.root_at(1, 0).unwrap() + 1;
        let mut expected = LaurentMatrix::zero(3);
        expected.set(e, e, z(10, -1));
        expected.set(f, f, z(-10, -1));
        assert_eq!(ad, expected);
        assert!(character_slopes(&conn).is_empty());
    }

    #[test]
    fn gl2_trace_in_o() {
        let g = GroupData::build(GroupKind::GL, 2).unwrap();
        let a = LaurentMatrix::diagonal(vec![z(1, -2), &z(-1, -2) + &z(3, 0)]);
        let conn = ConnectionMatrix::new(g, a).unwrap();
        assert_eq!(character_slopes(&conn), vec![int(0)]);
    }
}
