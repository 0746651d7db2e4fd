//! The closed fundamental alcove, its vertices, and the max-min optimal
//! points.
//!
//! Points of the alcove are handled internally in simple-root coordinates
//! `a_i = alpha_i(x)`, where the alcove is the simplex `a >= 0`,
//! `sum_i m_i a_i <= 1` (with `m_i` the marks of the highest root).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::group::{ApartmentPoint, GroupData, GroupKind};
use super::lp::{LinearProgram, LpOutcome};
use crate::exact::{int, QMatrix, Rational};

/// An affine functional `psi(x) = constant + sign * alpha(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineRoot {
    pub constant: i64,
    pub sign: i64,
    /// Index into [`GroupData::roots`].
    pub root: usize,
}

impl AffineRoot {
    pub fn eval(&self, group: &GroupData, x: &ApartmentPoint) -> Rational {
        int(self.constant) + int(self.sign) * group.roots[self.root].eval(&x.coords)
    }

    pub fn label(&self, group: &GroupData) -> String {
        let name = group.roots[self.root].label();
        match (self.constant, self.sign) {
            (0, 1) => name,
            (c, -1) => format!("{c}-({name})"),
            (c, s) => format!("{c}+{s}*({name})"),
        }
    }
}

/// Fundamental alcove of a group's standard apartment.
#[derive(Clone, Debug)]
pub struct Alcove<'g> {
    group: &'g GroupData,
    /// `x = to_point * a` for simple-root coordinates `a`.
    to_point: QMatrix,
}

impl<'g> Alcove<'g> {
    pub fn new(group: &'g GroupData) -> Self {
        let l = group.semisimple_rank();
        let rank = group.rank;
        // rows: simple roots, plus the trace-zero normalization for type A
        let mut rows: Vec<Vec<Rational>> = group
            .simple_roots
            .iter()
            .map(|&k| group.roots[k].coefficients.iter().map(|&c| int(c)).collect())
            .collect();
        if matches!(group.kind, GroupKind::GL | GroupKind::SL) {
            rows.push(vec![Rational::one(); rank]);
        }
        let to_point = if l == 0 {
            QMatrix::zeros(rank, 0)
        } else {
            let inv = QMatrix::from_rows(rows)
                .inverse()
                .expect("simple roots span the normalized apartment");
            // drop the column paired with the normalization row
            let cols: Vec<Vec<Rational>> = (0..l).map(|j| inv.column(j)).collect();
            QMatrix::from_columns(&cols)
        };
        Self { group, to_point }
    }

    pub fn group(&self) -> &GroupData {
        self.group
    }

    /// Simple roots followed by `1 - alpha_0`.
    pub fn affine_minimal_roots(&self) -> Vec<AffineRoot> {
        let g = self.group;
        if g.simple_roots.is_empty() {
            return Vec::new();
        }
        let mut out: Vec<AffineRoot> = g
            .simple_roots
            .iter()
            .map(|&root| AffineRoot {
                constant: 0,
                sign: 1,
                root,
            })
            .collect();
        out.push(AffineRoot {
            constant: 1,
            sign: -1,
            root: g.highest_root,
        });
        out
    }

    pub fn point_from_simple(&self, a: &[Rational]) -> ApartmentPoint {
        if a.is_empty() {
            return ApartmentPoint::origin(self.group.rank);
        }
        ApartmentPoint::new(self.to_point.mul_vec(a))
    }

    pub fn simple_coordinates(&self, x: &ApartmentPoint) -> Vec<Rational> {
        self.group
            .simple_roots
            .iter()
            .map(|&k| self.group.roots[k].eval(&x.coords))
            .collect()
    }

    /// Whether `x` lies in the closed alcove (and, for type A, is
    /// normalized to coordinate sum zero).
    pub fn contains(&self, x: &ApartmentPoint) -> bool {
        if x.coords.len() != self.group.rank {
            return false;
        }
        if matches!(self.group.kind, GroupKind::GL | GroupKind::SL)
            && !x.coords.iter().fold(Rational::zero(), |s, c| s + c).is_zero()
        {
            return false;
        }
        self.affine_minimal_roots().iter().all(|psi| {
            let v = psi.eval(self.group, x);
            !v.is_negative() && v <= Rational::one()
        })
    }

    pub fn vertices(&self) -> Vec<ApartmentPoint> {
        let l = self.group.semisimple_rank();
        let mut out = vec![self.point_from_simple(&vec![Rational::zero(); l])];
        for i in 0..l {
            let mut a = vec![Rational::zero(); l];
            a[i] = Rational::new(BigInt::one(), self.group.highest_root_marks[i].into());
            out.push(self.point_from_simple(&a));
        }
        out
    }

    /// Maximizer of `min_{psi in subset} psi` over the closed alcove, with
    /// ties broken by the lexicographically smallest point.
    pub fn optimal_point(&self, subset: &[AffineRoot]) -> ApartmentPoint {
        let g = self.group;
        let l = g.semisimple_rank();
        let marks: Vec<Rational> = g.highest_root_marks.iter().map(|&m| int(m)).collect();
        // variables (a_1, ..., a_l, t)
        let mut base = LinearProgram::new(vec![Rational::zero(); l + 1]);
        let mut row = marks.clone();
        row.push(Rational::zero());
        base.le(row, Rational::one());
        for psi in subset {
            // t - psi(a) <= 0, written in simple-root coordinates
            let mut row = vec![Rational::zero(); l + 1];
            row[l] = Rational::one();
            let constant = if psi.root == g.highest_root && psi.sign == -1 {
                for (r, m) in row.iter_mut().zip(&marks) {
                    *r = m.clone();
                }
                Rational::one()
            } else {
                let i = g.simple_roots.iter().position(|&k| k == psi.root).expect("simple root");
                row[i] = -Rational::one();
                Rational::zero()
            };
            base.le(row, constant);
        }
        let mut objective = vec![Rational::zero(); l + 1];
        objective[l] = Rational::one();
        base.set_objective(objective);
        let LpOutcome::Optimal { value: best, .. } = base.maximize() else {
            unreachable!("the alcove is a nonempty polytope")
        };
        let mut fixed = base.clone();
        let mut t_row = vec![Rational::zero(); l + 1];
        t_row[l] = Rational::one();
        fixed.eq(t_row, best);
        let mut last = None;
        for k in 0..g.rank {
            // minimize x_k = to_point[k] . a
            let mut obj: Vec<Rational> = (0..l).map(|j| -self.to_point[(k, j)].clone()).collect();
            obj.push(Rational::zero());
            fixed.set_objective(obj.clone());
            let LpOutcome::Optimal { x, value } = fixed.maximize() else {
                unreachable!("restricted alcove face is nonempty")
            };
            obj.pop();
            fixed.eq(
                obj.into_iter().chain(std::iter::once(Rational::zero())).collect(),
                value,
            );
            last = Some(x);
        }
        let a = last.map(|mut x| {
            x.truncate(l);
            x
        });
        self.point_from_simple(&a.unwrap_or_default())
    }

    /// All optimal points: one per nonempty subset of the minimal affine
    /// roots, deduplicated, in order of first appearance.
    pub fn optimal_points(&self) -> Vec<ApartmentPoint> {
        let sigma = self.affine_minimal_roots();
        if sigma.is_empty() {
            return vec![ApartmentPoint::origin(self.group.rank)];
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for mask in 1u64..(1u64 << sigma.len()) {
            let subset: Vec<AffineRoot> = sigma
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| p.clone())
                .collect();
            let x = self.optimal_point(&subset);
            if seen.insert(x.clone()) {
                out.push(x);
            }
        }
        out
    }

    /// The alcove barycenter (the Iwahori point).
    pub fn barycenter(&self) -> ApartmentPoint {
        let sigma = self.affine_minimal_roots();
        if sigma.is_empty() {
            return ApartmentPoint::origin(self.group.rank);
        }
        self.optimal_point(&sigma)
    }

    /// Rational points of the closed alcove with simple-root coordinates in
    /// `(1/denom) Z`.
    pub fn grid(&self, denom: u32) -> Vec<ApartmentPoint> {
        let l = self.group.semisimple_rank();
        let d = i64::from(denom.max(1));
        let marks = &self.group.highest_root_marks;
        let mut out = Vec::new();
        let mut k = vec![0i64; l];
        loop {
            let a: Vec<Rational> = k.iter().map(|&ki| Rational::new(ki.into(), d.into())).collect();
            out.push(self.point_from_simple(&a));
            // odometer over k with sum m_i k_i <= d
            let mut i = 0;
            loop {
                if i == l {
                    return out;
                }
                k[i] += 1;
                let used: i64 = k.iter().zip(marks).map(|(a, m)| a * m).sum();
                if used <= d {
                    break;
                }
                k[i] = 0;
                i += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn pt(c: &[(i64, i64)]) -> ApartmentPoint {
        ApartmentPoint::new(c.iter().map(|&(p, q)| rat(p, q)).collect())
    }

    fn sorted(mut v: Vec<ApartmentPoint>) -> Vec<ApartmentPoint> {
        v.sort();
        v
    }

    #[test]
    fn minimal_affine_roots() {
        let sl2 = GroupData::build(GroupKind::SL, 2).unwrap();
        let labels: Vec<String> = Alcove::new(&sl2)
            .affine_minimal_roots()
            .iter()
            .map(|p| p.label(&sl2))
            .collect();
        assert_eq!(labels, vec!["e1-e2", "1-(e1-e2)"]);
        let sp4 = GroupData::build(GroupKind::Sp, 4).unwrap();
        let labels: Vec<String> = Alcove::new(&sp4)
            .affine_minimal_roots()
            .iter()
            .map(|p| p.label(&sp4))
            .collect();
        assert_eq!(labels, vec!["e1-e2", "2e2", "1-(2e1)"]);
    }

    #[test]
    fn sl2_optimal_points() {
        let g = GroupData::build(GroupKind::SL, 2).unwrap();
        let pts = sorted(Alcove::new(&g).optimal_points());
        assert_eq!(
            pts,
            vec![pt(&[(0, 1), (0, 1)]), pt(&[(1, 4), (-1, 4)]), pt(&[(1, 2), (-1, 2)])]
        );
    }

    #[test]
    fn sl3_optimal_points_are_barycenters() {
        let g = GroupData::build(GroupKind::SL, 3).unwrap();
        let alc = Alcove::new(&g);
        let verts = alc.vertices();
        // barycenters of every nonempty face of the triangle
        let mut expected = Vec::new();
        for mask in 1u32..8 {
            let chosen: Vec<&ApartmentPoint> = (0..3).filter(|i| mask >> i & 1 == 1).map(|i| &verts[i]).collect();
            let k = int(chosen.len() as i64);
            let coords = (0..3)
                .map(|j| chosen.iter().fold(Rational::zero(), |s, p| s + &p.coords[j]) / &k)
                .collect();
            expected.push(ApartmentPoint::new(coords));
        }
        assert_eq!(sorted(alc.optimal_points()), sorted(expected));
        assert_eq!(alc.barycenter(), pt(&[(1, 3), (0, 1), (-1, 3)]));
    }

    #[test]
    fn sp4_optimal_points() {
        let g = GroupData::build(GroupKind::Sp, 4).unwrap();
        let alc = Alcove::new(&g);
        let pts = alc.optimal_points();
        assert_eq!(pts.len(), 7);
        assert!(pts.contains(&pt(&[(1, 4), (1, 4)])));
        for v in alc.vertices() {
            assert!(pts.contains(&v));
        }
        assert_eq!(
            alc.vertices(),
            vec![pt(&[(0, 1), (0, 1)]), pt(&[(1, 2), (0, 1)]), pt(&[(1, 2), (1, 2)])]
        );
    }

    #[test]
    fn optimal_points_lie_in_alcove() {
        for (kind, n) in [
            (GroupKind::GL, 1),
            (GroupKind::GL, 3),
            (GroupKind::SL, 4),
            (GroupKind::Sp, 6),
            (GroupKind::SL, 5),
        ] {
            let g = GroupData::build(kind, n).unwrap();
            let alc = Alcove::new(&g);
            let bound = BigInt::from(g.coxeter_number * g.rank as i64);
            let pts = alc.optimal_points();
            for v in alc.vertices() {
                assert!(pts.contains(&v), "{kind}{n} missing vertex {v}");
            }
            for p in &pts {
                assert!(alc.contains(p), "{kind}{n} {p}");
                assert!(p.coords.iter().all(|c| c.denom() <= &bound));
            }
        }
    }

    #[test]
    fn grid_counts() {
        let g = GroupData::build(GroupKind::SL, 3).unwrap();
        // lattice points of the triangle with side 4: 15
        assert_eq!(Alcove::new(&g).grid(4).len(), 15);
        let sp = GroupData::build(GroupKind::Sp, 4).unwrap();
        let grid = Alcove::new(&sp).grid(8);
        assert!(grid.contains(&pt(&[(1, 4), (1, 4)])));
        assert!(grid.iter().all(|p| Alcove::new(&sp).contains(p)));
    }
}
