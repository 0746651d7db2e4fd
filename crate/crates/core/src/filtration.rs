//! Moy-Prasad gradings of loop-algebra elements at rational apartment points.
//!
//! At a point `x`, the constituent `c z^m E_ij` of a matrix has degree
//! `m + d_i - d_j`, where `d` is the diagonal of `x` embedded in the torus.
//! Torus constituents therefore have degree `m`, and a root constituent has
//! degree `m + alpha(x)`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::exact::{int, LaurentMatrix, LaurentScalar, Rational};
use crate::roots::{ApartmentPoint, GroupData};
use crate::strata::Stratum;

/// The homogeneous part of a matrix in one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedComponent {
    pub degree: Rational,
    pub part: LaurentMatrix,
}

/// A connection `d + A dz/z` for a classical group.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionMatrix {
    a: LaurentMatrix,
    group: GroupData,
}

impl ConnectionMatrix {
    pub fn new(group: GroupData, a: LaurentMatrix) -> Result<Self> {
        group.check_membership(&a)?;
        Ok(Self { a, group })
    }

    pub fn matrix(&self) -> &LaurentMatrix {
        &self.a
    }

    pub fn group(&self) -> &GroupData {
        &self.group
    }

    pub fn into_parts(self) -> (GroupData, LaurentMatrix) {
        (self.group, self.a)
    }

    /// `A - x`, with `x` as a constant torus element.
    pub fn shifted(&self, x: &ApartmentPoint) -> LaurentMatrix {
        &self.a - &self.group.point_matrix(x)
    }
}

/// Torus diagonal of a point in the defining representation.
pub fn point_diagonal(group: &GroupData, x: &ApartmentPoint) -> Vec<Rational> {
    let m = group.point_matrix(x);
    (0..group.size).map(|i| m.get(i, i).coefficient(0)).collect()
}

fn for_each_graded(diag: &[Rational], m: &LaurentMatrix, mut f: impl FnMut(usize, usize, i64, &Rational, Rational)) {
    for ((i, j), e) in m.entries() {
        if e.is_zero() {
            continue;
        }
        let shift = &diag[i] - &diag[j];
        for (p, c) in e.terms() {
            f(i, j, p, c, int(p) + &shift);
        }
    }
}

/// Splits `m` into homogeneous components, sorted by ascending degree.
pub fn graded_decompose_matrix(diag: &[Rational], m: &LaurentMatrix) -> Vec<GradedComponent> {
    let n = m.size();
    let mut parts: BTreeMap<Rational, LaurentMatrix> = BTreeMap::new();
    for_each_graded(diag, m, |i, j, p, c, deg| {
        parts
            .entry(deg)
            .or_insert_with(|| LaurentMatrix::zero(n))
            .entry_mut(i, j)
            .add_term(p, c);
    });
    parts
        .into_iter()
        .map(|(degree, part)| GradedComponent { degree, part })
        .collect()
}

/// Graded decomposition of a Lie-algebra element at `x`.
pub fn graded_decompose(group: &GroupData, x: &ApartmentPoint, m: &LaurentMatrix) -> Result<Vec<GradedComponent>> {
    group.check_membership(m)?;
    group.validate_point(x)?;
    Ok(graded_decompose_matrix(&point_diagonal(group, x), m))
}

/// Least degree of a nonzero constituent, `None` for the zero matrix.
pub fn min_degree(diag: &[Rational], m: &LaurentMatrix) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    for_each_graded(diag, m, |_, _, _, _, deg| {
        if best.as_ref().is_none_or(|b| deg < *b) {
            best = Some(deg);
        }
    });
    best
}

/// The component of `m` in degree exactly `degree`.
pub fn component(diag: &[Rational], m: &LaurentMatrix, degree: &Rational) -> LaurentMatrix {
    let mut out = LaurentMatrix::zero(m.size());
    for_each_graded(diag, m, |i, j, p, c, deg| {
        if &deg == degree {
            out.entry_mut(i, j).add_term(p, c);
        }
    });
    out
}

/// Whether every constituent of `m` has degree exactly `degree`.
pub fn is_homogeneous(diag: &[Rational], m: &LaurentMatrix, degree: &Rational) -> bool {
    let mut ok = true;
    for_each_graded(diag, m, |_, _, _, _, deg| ok &= &deg == degree);
    ok
}

/// Whether every constituent of `m` has degree strictly above `bound`.
pub fn all_above(diag: &[Rational], m: &LaurentMatrix, bound: &Rational) -> bool {
    min_degree(diag, m).is_none_or(|d| &d > bound)
}

/// The critical numbers `Z + U_alpha (alpha(x) + Z)` of the adjoint
/// representation, realized within `[-window, window]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalSet {
    /// Classes modulo `Z`, as representatives in `[0, 1)`.
    pub generators: Vec<Rational>,
    pub window: i64,
}

impl CriticalSet {
    pub fn contains(&self, r: &Rational) -> bool {
        let frac = r - r.floor();
        self.generators.contains(&frac)
    }

    /// All critical numbers in the window, ascending.
    pub fn elements(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        for k in -self.window..=self.window {
            for g in &self.generators {
                let v = int(k) + g;
                if v.abs() <= int(self.window) {
                    out.push(v);
                }
            }
        }
        out.sort();
        out
    }
}

pub fn critical_numbers(group: &GroupData, x: &ApartmentPoint, window: i64) -> CriticalSet {
    let mut gens = vec![Rational::zero()];
    for r in &group.roots {
        let v = r.eval(&x.coords);
        let frac = &v - v.floor();
        if !gens.contains(&frac) {
            gens.push(frac);
        }
    }
    gens.sort();
    CriticalSet {
        generators: gens,
        window: window.max(1),
    }
}

/// Least `r >= 0` with `A - x` in filtration level `-r` at `x`.
pub fn depth_at(conn: &ConnectionMatrix, x: &ApartmentPoint) -> Rational {
    let diag = point_diagonal(conn.group(), x);
    depth_with(&diag, &conn.shifted(x))
}

pub(crate) fn depth_with(diag: &[Rational], shifted: &LaurentMatrix) -> Rational {
    match min_degree(diag, shifted) {
        Some(d) if d.is_negative() => -d,
        _ => Rational::zero(),
    }
}

/// The stratum `(x, r, beta)` contained in the connection at `x`.
pub fn leading_representative(conn: &ConnectionMatrix, x: &ApartmentPoint) -> Stratum {
    let diag = point_diagonal(conn.group(), x);
    let shifted = conn.shifted(x);
    let r = depth_with(&diag, &shifted);
    let rep = component(&diag, &shifted, &-&r);
    Stratum::new(x.clone(), r, rep)
}

/// Bracket `[x, m]` with the point viewed as a constant torus element.
pub fn point_bracket(group: &GroupData, x: &ApartmentPoint, m: &LaurentMatrix) -> LaurentMatrix {
    group.point_matrix(x).commutator(m)
}

/// Multiplies every term of `m` by `z`, which raises degrees by one.
pub fn raise(m: &LaurentMatrix) -> LaurentMatrix {
    m.scale_laurent(&LaurentScalar::z_pow(1))
}
