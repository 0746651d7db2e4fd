//! Strata, the gauge action, and the containment, fundamentality and
//! associate predicates.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{int, LaurentMatrix, LaurentScalar, Rational};
use crate::filtration::{self, point_diagonal, ConnectionMatrix};
use crate::roots::{ApartmentPoint, GroupData, GroupKind};

/// A triple `(x, r, beta)`, with `beta` stored as its homogeneous matrix
/// representative of degree `-r` at `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct Stratum {
    pub point: ApartmentPoint,
    pub depth: Rational,
    pub rep: LaurentMatrix,
}

impl Stratum {
    pub fn new(point: ApartmentPoint, depth: Rational, rep: LaurentMatrix) -> Self {
        Self { point, depth, rep }
    }

    /// Checks the stratum invariants against a group.
    pub fn validate(&self, group: &GroupData) -> Result<()> {
        group.validate_point(&self.point)?;
        group.check_membership(&self.rep)?;
        if self.depth < Rational::zero() {
            return Err(Error::InvalidArgument(format!("negative depth {}", self.depth)));
        }
        let diag = point_diagonal(group, &self.point);
        if !filtration::is_homogeneous(&diag, &self.rep, &-&self.depth) {
            return Err(Error::InvalidArgument(format!(
                "representative is not homogeneous of degree -{} at {}",
                self.depth, self.point
            )));
        }
        Ok(())
    }

    /// Image under a monomial gauge element.
    pub fn act(&self, group: &GroupData, g: &GaugeElement) -> Result<Stratum> {
        let point = g.act_on_point(group, &self.point)?;
        let rep = &(&g.g * &self.rep) * &g.inverse;
        Ok(Stratum::new(point, self.depth.clone(), rep))
    }
}

/// An element of the loop group together with its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeElement {
    g: LaurentMatrix,
    inverse: LaurentMatrix,
}

impl GaugeElement {
    pub fn identity(size: usize) -> Self {
        Self {
            g: LaurentMatrix::identity(size),
            inverse: LaurentMatrix::identity(size),
        }
    }

    /// Inverts `g` within the default power window and checks that it lies
    /// in the group.
    pub fn new(group: &GroupData, g: LaurentMatrix) -> Result<Self> {
        let window = g.default_window();
        let inverse = g.invert_unit(window)?;
        Self::from_parts(group, g, inverse)
    }

    pub fn from_parts(group: &GroupData, g: LaurentMatrix, inverse: LaurentMatrix) -> Result<Self> {
        if g.size() != group.size {
            return Err(Error::Dimension(format!(
                "gauge element is {0}x{0}, group needs {1}x{1}",
                g.size(),
                group.size
            )));
        }
        if &g * &inverse != LaurentMatrix::identity(g.size()) {
            return Err(Error::Invertibility {
                determinant: g.determinant().to_string(),
                reason: "supplied inverse does not satisfy g * inverse = I".into(),
            });
        }
        match group.kind {
            GroupKind::GL => {}
            GroupKind::SL => {
                let det = g.determinant();
                if det != LaurentScalar::one() {
                    return Err(Error::Membership(format!("det(g) = 1 fails: determinant is {det}")));
                }
            }
            GroupKind::Sp => {
                let j = LaurentMatrix::from_constant(&group.symplectic_form());
                if &(&g.transpose() * &j) * &g != j {
                    return Err(Error::Membership("g^T J g = J fails".into()));
                }
            }
        }
        Ok(Self { g, inverse })
    }

    pub fn matrix(&self) -> &LaurentMatrix {
        &self.g
    }

    pub fn inverse(&self) -> &LaurentMatrix {
        &self.inverse
    }

    /// `self * other`.
    pub fn compose(&self, other: &GaugeElement) -> GaugeElement {
        GaugeElement {
            g: &self.g * &other.g,
            inverse: &other.inverse * &self.inverse,
        }
    }

    pub fn invert(&self) -> GaugeElement {
        GaugeElement {
            g: self.inverse.clone(),
            inverse: self.g.clone(),
        }
    }

    /// One monomial entry in every row and column.
    pub fn is_monomial(&self) -> bool {
        let n = self.g.size();
        let mut col_used = vec![false; n];
        for i in 0..n {
            let mut found = None;
            for j in 0..n {
                let e = self.g.get(i, j);
                if e.is_zero() {
                    continue;
                }
                if found.is_some() || !e.is_monomial() || col_used[j] {
                    return false;
                }
                found = Some(j);
            }
            match found {
                Some(j) => col_used[j] = true,
                None => return false,
            }
        }
        true
    }

    /// The affine action `x -> g x g^-1 - tau(g) g^-1` of a monomial element
    /// on apartment points.
    pub fn act_on_point(&self, group: &GroupData, x: &ApartmentPoint) -> Result<ApartmentPoint> {
        if !self.is_monomial() {
            return Err(Error::Capability(
                "only monomial gauge elements act on the standard apartment".into(),
            ));
        }
        let xm = group.point_matrix(x);
        let image = &(&(&self.g * &xm) * &self.inverse) - &(&self.g.tau() * &self.inverse);
        let coords: Vec<Rational> = (0..group.rank).map(|i| image.get(i, i).coefficient(0)).collect();
        let y = ApartmentPoint::new(coords);
        if group.point_matrix(&y) != image {
            return Err(Error::Capability(format!(
                "gauge element does not map {x} into the standard apartment"
            )));
        }
        Ok(y)
    }
}

/// `g A g^-1 - tau(g) g^-1`.
pub fn gauge_transform(conn: &ConnectionMatrix, g: &GaugeElement) -> Result<ConnectionMatrix> {
    let a = gauge_matrix(conn.matrix(), g);
    ConnectionMatrix::new(conn.group().clone(), a)
}

pub(crate) fn gauge_matrix(a: &LaurentMatrix, g: &GaugeElement) -> LaurentMatrix {
    &(&(&g.g * a) * &g.inverse) - &(&g.g.tau() * &g.inverse)
}

/// Whether the connection contains the stratum.
pub fn contains(conn: &ConnectionMatrix, s: &Stratum) -> bool {
    let group = conn.group();
    if s.point.coords.len() != group.rank || s.rep.size() != group.size {
        return false;
    }
    let diag = point_diagonal(group, &s.point);
    let bound = -&s.depth;
    if !filtration::is_homogeneous(&diag, &s.rep, &bound) {
        return false;
    }
    let residual = &conn.shifted(&s.point) - &s.rep;
    filtration::all_above(&diag, &residual, &bound)
}

/// Whether the stratum is fundamental, i.e. its representative is not
/// nilpotent.
pub fn is_fundamental(s: &Stratum) -> bool {
    !s.rep.is_nilpotent()
}

/// Decides whether `g s1` and `s2` are associates.
///
/// Both cosets are spanned by monomial constituents, so their translates
/// meet iff every constituent of `g beta_1 g^-1 - beta_2 + delta` lies in
/// one of the two filtration levels `> -r`.
pub fn associates_at(group: &GroupData, g: &GaugeElement, s1: &Stratum, s2: &Stratum) -> Result<bool> {
    let moved = if g.matrix() == &LaurentMatrix::identity(group.size) {
        s1.clone()
    } else if g.is_monomial() {
        s1.act(group, g)?
    } else {
        return Err(Error::Capability(
            "associates are decided only for identity or monomial gauge elements".into(),
        ));
    };
    if moved.depth != s2.depth {
        return Ok(false);
    }
    let r = &s2.depth;
    let mut diff = &moved.rep - &s2.rep;
    if r.is_zero() {
        let delta = &group.point_matrix(&moved.point) - &group.point_matrix(&s2.point);
        diff = &diff + &delta;
    }
    let dx = point_diagonal(group, &moved.point);
    let dy = point_diagonal(group, &s2.point);
    let bound = -r;
    for ((i, j), e) in diff.entries() {
        for (p, _) in e.terms() {
            let p = int(p);
            let deg_x = &p + &dx[i] - &dx[j];
            let deg_y = &p + &dy[i] - &dy[j];
            if deg_x <= bound && deg_y <= bound {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Pullback along the cover `z = u^e`.
pub fn pullback_stratum(s: &Stratum, e: u32) -> Stratum {
    let e = i64::from(e.max(1));
    Stratum::new(
        s.point.scaled(e),
        &s.depth * int(e),
        s.rep.substitute_power(e).scale(&int(e)),
    )
}
