use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, LaurentMatrix, LaurentScalar, QMatrix, Rational};

/// The supported classical groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    #[serde(rename = "GL")]
    GL,
    #[serde(rename = "SL")]
    SL,
    #[serde(rename = "Sp")]
    Sp,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::GL => "GL",
            GroupKind::SL => "SL",
            GroupKind::Sp => "Sp",
        })
    }
}

impl std::str::FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "GL" | "gl" => Ok(GroupKind::GL),
            "SL" | "sl" => Ok(GroupKind::SL),
            "Sp" | "SP" | "sp" => Ok(GroupKind::Sp),
            other => Err(Error::parse("group.kind", format!("unknown group kind {other:?}"))),
        }
    }
}

/// A root of the diagonal torus, as an integer functional on apartment
/// coordinates together with the matrix entries spanning its root space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootFunctional {
    pub coefficients: Vec<i64>,
    /// Entries `(row, col, sign)`: the root vector is `sum sign * E_{row,col}`.
    /// The first entry is the one read by decompositions.
    pub positions: Vec<(usize, usize, i64)>,
}

impl RootFunctional {
    pub fn eval(&self, coords: &[Rational]) -> Rational {
        self.coefficients
            .iter()
            .zip(coords)
            .filter(|(c, _)| **c != 0)
            .fold(Rational::zero(), |acc, (c, x)| acc + int(*c) * x)
    }

    /// First nonzero coefficient positive.
    pub fn is_positive(&self) -> bool {
        self.coefficients.iter().find(|c| **c != 0).is_some_and(|c| *c > 0)
    }

    /// Root vector times a Laurent scalar.
    pub fn embed(&self, size: usize, coefficient: &LaurentScalar) -> LaurentMatrix {
        let mut m = LaurentMatrix::zero(size);
        for &(i, j, s) in &self.positions {
            m.set(i, j, coefficient.scale(&int(s)));
        }
        m
    }

    /// Coroot `2 alpha / (alpha, alpha)` in apartment coordinates.
    pub fn coroot(&self) -> Vec<Rational> {
        let norm: i64 = self.coefficients.iter().map(|c| c * c).sum();
        self.coefficients
            .iter()
            .map(|c| Rational::new((2 * c).into(), norm.into()))
            .collect()
    }

    pub fn label(&self) -> String {
        let mut s = String::new();
        for (i, c) in self.coefficients.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 {
                "-"
            } else if s.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if mag == 1 {
                s.push_str(&format!("{sign}e{}", i + 1));
            } else {
                s.push_str(&format!("{sign}{mag}e{}", i + 1));
            }
        }
        s
    }
}

/// A rational point of the standard apartment, in torus coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ApartmentPoint {
    pub coords: Vec<Rational>,
}

impl ApartmentPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self { coords }
    }

    pub fn origin(rank: usize) -> Self {
        Self {
            coords: vec![Rational::zero(); rank],
        }
    }

    pub fn scaled(&self, e: i64) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * int(e)).collect(),
        }
    }

    pub fn offset(&self, direction: &[Rational], eps: &Rational) -> Self {
        Self {
            coords: self.coords.iter().zip(direction).map(|(c, d)| c + d * eps).collect(),
        }
    }
}

impl fmt::Display for ApartmentPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Decomposition of a Lie-algebra element into torus and root parts.
#[derive(Clone, Debug, PartialEq)]
pub struct RootDecomposition {
    /// One Laurent scalar per apartment coordinate.
    pub torus: Vec<LaurentScalar>,
    /// One Laurent scalar per root, in the group's stored root order.
    pub roots: Vec<LaurentScalar>,
}

/// Root datum, invariant form and alcove data of a classical group.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupData {
    pub kind: GroupKind,
    /// Size of the defining matrices.
    pub size: usize,
    /// Number of apartment coordinates.
    pub rank: usize,
    pub roots: Vec<RootFunctional>,
    /// Indices into `roots`.
    pub simple_roots: Vec<usize>,
    pub highest_root: usize,
    pub coxeter_number: i64,
    /// Coefficients of the highest root in the simple roots.
    pub highest_root_marks: Vec<i64>,
}

impl GroupData {
    /// Builds the group of the given kind acting on `size`-dimensional space.
    pub fn build(kind: GroupKind, size: usize) -> Result<Self> {
        let fail = |reason: &str| Error::Construction {
            kind: kind.to_string(),
            size,
            reason: reason.into(),
        };
        match kind {
            GroupKind::GL if size < 1 => return Err(fail("size must be at least 1")),
            GroupKind::SL if size < 2 => return Err(fail("size must be at least 2")),
            GroupKind::Sp if size < 2 || size % 2 == 1 => return Err(fail("size must be even and at least 2")),
            _ => {}
        }
        if size > 64 {
            return Err(fail("size above 64 is not supported"));
        }
        let g = match kind {
            GroupKind::GL | GroupKind::SL => Self::type_a(kind, size),
            GroupKind::Sp => Self::type_c(size / 2),
        };
        Ok(g)
    }

    fn type_a(kind: GroupKind, n: usize) -> Self {
        let mut roots = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut coefficients = vec![0; n];
                coefficients[i] = 1;
                coefficients[j] = -1;
                roots.push(RootFunctional {
                    coefficients,
                    positions: vec![(i, j, 1)],
                });
            }
        }
        let find = |i: usize, j: usize| {
            roots
                .iter()
                .position(|r| r.positions[0].0 == i && r.positions[0].1 == j)
                .unwrap()
        };
        let simple_roots: Vec<usize> = (0..n.saturating_sub(1)).map(|i| find(i, i + 1)).collect();
        let highest_root = if n > 1 { find(0, n - 1) } else { 0 };
        Self {
            kind,
            size: n,
            rank: n,
            simple_roots,
            highest_root,
            coxeter_number: n as i64,
            highest_root_marks: vec![1; n.saturating_sub(1)],
            roots,
        }
    }

    fn type_c(n: usize) -> Self {
        let mut roots = Vec::new();
        let vec_with = |pairs: &[(usize, i64)]| {
            let mut c = vec![0; n];
            for &(i, v) in pairs {
                c[i] += v;
            }
            c
        };
        // e_i - e_j
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    roots.push(RootFunctional {
                        coefficients: vec_with(&[(i, 1), (j, -1)]),
                        positions: vec![(i, j, 1), (n + j, n + i, -1)],
                    });
                }
            }
        }
        // +-(e_i + e_j), i < j
        for i in 0..n {
            for j in i + 1..n {
                roots.push(RootFunctional {
                    coefficients: vec_with(&[(i, 1), (j, 1)]),
                    positions: vec![(i, n + j, 1), (j, n + i, 1)],
                });
                roots.push(RootFunctional {
                    coefficients: vec_with(&[(i, -1), (j, -1)]),
                    positions: vec![(n + i, j, 1), (n + j, i, 1)],
                });
            }
        }
        // +-2 e_i
        for i in 0..n {
            roots.push(RootFunctional {
                coefficients: vec_with(&[(i, 2)]),
                positions: vec![(i, n + i, 1)],
            });
            roots.push(RootFunctional {
                coefficients: vec_with(&[(i, -2)]),
                positions: vec![(n + i, i, 1)],
            });
        }
        let find = |c: Vec<i64>| roots.iter().position(|r| r.coefficients == c).unwrap();
        let mut simple_roots: Vec<usize> = (0..n - 1).map(|i| find(vec_with(&[(i, 1), (i + 1, -1)]))).collect();
        simple_roots.push(find(vec_with(&[(n - 1, 2)])));
        let highest_root = find(vec_with(&[(0, 2)]));
        let mut marks = vec![2; n];
        marks[n - 1] = 1;
        Self {
            kind: GroupKind::Sp,
            size: 2 * n,
            rank: n,
            simple_roots,
            highest_root,
            coxeter_number: 2 * n as i64,
            highest_root_marks: marks,
            roots,
        }
    }

    /// Number of simple roots.
    pub fn semisimple_rank(&self) -> usize {
        self.simple_roots.len()
    }

    /// Dimension of the Lie algebra.
    pub fn dimension(&self) -> usize {
        self.torus_dimension() + self.roots.len()
    }

    pub fn torus_dimension(&self) -> usize {
        match self.kind {
            GroupKind::GL | GroupKind::Sp => self.rank,
            GroupKind::SL => self.rank - 1,
        }
    }

    /// The invariant form `<X, Y> = trace(XY)`.
    pub fn form(&self, x: &LaurentMatrix, y: &LaurentMatrix) -> LaurentScalar {
        (x * y).trace()
    }

    /// Matrix `J` of the symplectic form, `<e_i, e_{n+i}> = 1`.
    pub fn symplectic_form(&self) -> QMatrix {
        let n = self.size / 2;
        let mut j = QMatrix::zeros(self.size, self.size);
        for i in 0..n {
            j[(i, n + i)] = Rational::one();
            j[(n + i, i)] = -Rational::one();
        }
        j
    }

    /// Diagonal matrix of a torus coordinate vector.
    pub fn torus_embed(&self, torus: &[LaurentScalar]) -> LaurentMatrix {
        let mut m = LaurentMatrix::zero(self.size);
        for (i, t) in torus.iter().enumerate() {
            m.set(i, i, t.clone());
            if self.kind == GroupKind::Sp {
                m.set(self.rank + i, self.rank + i, -t);
            }
        }
        m
    }

    /// The point `x` as a constant torus element.
    pub fn point_matrix(&self, x: &ApartmentPoint) -> LaurentMatrix {
        let t: Vec<LaurentScalar> = x.coords.iter().map(|c| LaurentScalar::constant(c.clone())).collect();
        self.torus_embed(&t)
    }

    pub fn validate_point(&self, x: &ApartmentPoint) -> Result<()> {
        if x.coords.len() != self.rank {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, {}{} needs {}",
                x.coords.len(),
                self.kind,
                self.size,
                self.rank
            )));
        }
        if self.kind == GroupKind::SL {
            let s = x.coords.iter().fold(Rational::zero(), |a, c| a + c);
            if !s.is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "SL point coordinates must sum to zero, got {s}"
                )));
            }
        }
        Ok(())
    }

    /// Checks that `a` lies in the Lie algebra; the error names the first
    /// violated linear condition.
    pub fn check_membership(&self, a: &LaurentMatrix) -> Result<()> {
        if a.size() != self.size {
            return Err(Error::Dimension(format!(
                "matrix is {}x{}, {}{} needs {}x{}",
                a.size(),
                a.size(),
                self.kind,
                self.size,
                self.size,
                self.size
            )));
        }
        match self.kind {
            GroupKind::GL => Ok(()),
            GroupKind::SL => {
                let tr = a.trace();
                if tr.is_zero() {
                    Ok(())
                } else {
                    Err(Error::Membership(format!("trace(A) = 0 fails: trace is {tr}")))
                }
            }
            GroupKind::Sp => {
                let j = LaurentMatrix::from_constant(&self.symplectic_form());
                let lhs = &(&a.transpose() * &j) + &(&j * a);
                let bad = lhs
                    .entries()
                    .find(|(_, e)| !e.is_zero())
                    .map(|((r, c), e)| (r, c, e.to_string()));
                match bad {
                    None => Ok(()),
                    Some((r, c, e)) => Err(Error::Membership(format!(
                        "(A^T J + J A)[{},{}] = 0 fails: entry is {e}",
                        r + 1,
                        c + 1
                    ))),
                }
            }
        }
    }

    /// Splits a Lie-algebra element into its torus and root-space parts.
    pub fn root_decompose(&self, a: &LaurentMatrix) -> Result<RootDecomposition> {
        self.check_membership(a)?;
        Ok(self.root_decompose_unchecked(a))
    }

    pub(crate) fn root_decompose_unchecked(&self, a: &LaurentMatrix) -> RootDecomposition {
        let torus = (0..self.rank).map(|i| a.get(i, i).clone()).collect();
        let roots = self
            .roots
            .iter()
            .map(|r| {
                let (i, j, s) = r.positions[0];
                a.get(i, j).scale(&int(s))
            })
            .collect();
        RootDecomposition { torus, roots }
    }

    pub fn reassemble(&self, d: &RootDecomposition) -> LaurentMatrix {
        let mut m = self.torus_embed(&d.torus);
        for (r, c) in self.roots.iter().zip(&d.roots) {
            if !c.is_zero() {
                m = &m + &r.embed(self.size, c);
            }
        }
        m
    }

    /// Roots taking integral values at `x`.
    pub fn integral_roots(&self, x: &ApartmentPoint) -> Vec<usize> {
        (0..self.roots.len())
            .filter(|&k| self.roots[k].eval(&x.coords).is_integer())
            .collect()
    }

    /// Root index whose root vector has `(i, j)` as its leading entry.
    pub fn root_at(&self, i: usize, j: usize) -> Option<usize> {
        self.roots
            .iter()
            .position(|r| r.positions.iter().any(|&(a, b, _)| a == i && b == j))
    }

    /// Basis of the Lie algebra: torus basis, then root vectors in stored
    /// order.
    pub fn lie_basis(&self) -> Vec<LaurentMatrix> {
        let mut basis = Vec::with_capacity(self.dimension());
        let one = LaurentScalar::one();
        match self.kind {
            GroupKind::GL | GroupKind::Sp => {
                for i in 0..self.rank {
                    let mut t = vec![LaurentScalar::zero(); self.rank];
                    t[i] = one.clone();
                    basis.push(self.torus_embed(&t));
                }
            }
            GroupKind::SL => {
                for i in 0..self.rank - 1 {
                    let mut t = vec![LaurentScalar::zero(); self.rank];
                    t[i] = one.clone();
                    t[i + 1] = -&one;
                    basis.push(self.torus_embed(&t));
                }
            }
        }
        for r in &self.roots {
            basis.push(r.embed(self.size, &one));
        }
        basis
    }

    /// Coordinates of a Lie-algebra element in [`GroupData::lie_basis`].
    pub fn lie_coordinates(&self, a: &LaurentMatrix) -> Vec<LaurentScalar> {
        let d = self.root_decompose_unchecked(a);
        let mut out = Vec::with_capacity(self.dimension());
        match self.kind {
            GroupKind::GL | GroupKind::Sp => out.extend(d.torus.iter().cloned()),
            GroupKind::SL => {
                // sum_i c_i (e_i - e_{i+1}) has i-th coordinate c_i - c_{i-1}
                let mut acc = LaurentScalar::zero();
                for t in d.torus.iter().take(self.rank - 1) {
                    acc = &acc + t;
                    out.push(acc.clone());
                }
            }
        }
        out.extend(d.roots);
        out
    }

    /// Half-sum of the positive coroots among the given roots.
    pub fn half_sum_positive_coroots(&self, roots: &[usize]) -> Vec<Rational> {
        let mut acc = vec![Rational::zero(); self.rank];
        for &k in roots {
            let r = &self.roots[k];
            if r.is_positive() {
                for (a, c) in acc.iter_mut().zip(r.coroot()) {
                    *a += c;
                }
            }
        }
        acc.iter().map(|a| a / int(2)).collect()
    }
}
