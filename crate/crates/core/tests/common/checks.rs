//! Randomized invariant checks shared by the property tests and the
//! acceptance run. Each check draws one case from the generator.

use num_traits::Zero;
use rand::Rng;

use super::*;
use strata_kit::exact::{int, LaurentMatrix, LaurentScalar, Rational, Valuation};
use strata_kit::filtration::{
    all_above, component, critical_numbers, depth_at, graded_decompose, is_homogeneous, leading_representative,
    point_diagonal, raise, ConnectionMatrix,
};
use strata_kit::roots::GroupKind;
use strata_kit::strata::{associates_at, gauge_transform, is_fundamental, GaugeElement, Stratum};

pub type Check = fn(&mut TestRng) -> Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn valuation_additive(r: &mut TestRng) -> Result<(), String> {
    let f = nonzero_laurent(r, -4, 4, 3);
    let g = nonzero_laurent(r, -4, 4, 3);
    let (Valuation::Finite(a), Valuation::Finite(b)) = (f.valuation(), g.valuation()) else {
        return Err("nonzero scalar with infinite valuation".into());
    };
    ensure!(
        (&f * &g).valuation() == Valuation::Finite(a + b),
        "v({f} * {g}) != {a} + {b}"
    );
    Ok(())
}

pub fn tau_derivation(r: &mut TestRng) -> Result<(), String> {
    let f = laurent(r, -4, 4, 4);
    let g = laurent(r, -4, 4, 4);
    ensure!(
        (&f * &g).tau() == &(&f.tau() * &g) + &(&f * &g.tau()),
        "tau fails Leibniz on {f}, {g}"
    );
    Ok(())
}

pub fn invert_unit(r: &mut TestRng) -> Result<(), String> {
    let n = r.gen_range(1..=4usize);
    let diag: Vec<LaurentScalar> = (0..n)
        .map(|_| LaurentScalar::monomial(nonzero_rational(r), r.gen_range(-3..=3)))
        .collect();
    let mut m = LaurentMatrix::diagonal(diag);
    if n >= 2 {
        for _ in 0..r.gen_range(0..=4) {
            let i = r.gen_range(0..n);
            let j = (i + r.gen_range(1..n)) % n;
            let e = &LaurentMatrix::identity(n)
                + &LaurentMatrix::elementary(n, i, j, small_rational(r), r.gen_range(-2..=2));
            m = if r.gen_bool(0.5) { &m * &e } else { &e * &m };
        }
    }
    let inv = m.invert_unit(m.default_window()).map_err(err)?;
    ensure!(&inv * &m == LaurentMatrix::identity(n), "left inverse fails for {m:?}");
    ensure!(&m * &inv == LaurentMatrix::identity(n), "right inverse fails for {m:?}");
    Ok(())
}

pub fn root_reconstruction(r: &mut TestRng) -> Result<(), String> {
    for g in test_groups() {
        let a = lie_element(r, &g, -3, 2);
        let d = g.root_decompose(&a).map_err(err)?;
        ensure!(
            g.reassemble(&d) == a,
            "{}_{}: reassembly differs for {a:?}",
            g.kind,
            g.size
        );
    }
    Ok(())
}

pub fn graded_reassembly(r: &mut TestRng) -> Result<(), String> {
    for g in test_groups() {
        let a = lie_element(r, &g, -3, 2);
        let x = apartment_point(r, &g);
        let parts = graded_decompose(&g, &x, &a).map_err(err)?;
        let sum = parts.iter().fold(LaurentMatrix::zero(g.size), |acc, p| &acc + &p.part);
        ensure!(sum == a, "graded parts of {a:?} at {x} do not sum back");
        ensure!(
            parts.windows(2).all(|w| w[0].degree < w[1].degree),
            "degrees not strictly increasing"
        );
    }
    Ok(())
}

pub fn eigenvalue_identity(r: &mut TestRng) -> Result<(), String> {
    for g in test_groups() {
        let a = lie_element(r, &g, -3, 2);
        let x = apartment_point(r, &g);
        let xm = g.point_matrix(&x);
        for p in graded_decompose(&g, &x, &a).map_err(err)? {
            let lhs = &p.part.tau() + &xm.commutator(&p.part);
            ensure!(
                lhs == p.part.scale(&p.degree),
                "degree {} part at {x} is not an eigenvector",
                p.degree
            );
        }
    }
    Ok(())
}

pub fn bracket_additivity(r: &mut TestRng) -> Result<(), String> {
    for g in test_groups() {
        let x = apartment_point(r, &g);
        let diag = point_diagonal(&g, &x);
        let pa = graded_decompose(&g, &x, &lie_element(r, &g, -2, 2)).map_err(err)?;
        let pb = graded_decompose(&g, &x, &lie_element(r, &g, -2, 2)).map_err(err)?;
        if pa.is_empty() || pb.is_empty() {
            continue;
        }
        let a = &pa[r.gen_range(0..pa.len())];
        let b = &pb[r.gen_range(0..pb.len())];
        let c = a.part.commutator(&b.part);
        let deg = &a.degree + &b.degree;
        ensure!(
            c.is_zero() || is_homogeneous(&diag, &c, &deg),
            "bracket not homogeneous of degree {deg} at {x}"
        );
    }
    Ok(())
}

pub fn depth_critical(r: &mut TestRng) -> Result<(), String> {
    for g in test_groups() {
        let conn = ConnectionMatrix::new(g.clone(), lie_element(r, &g, -3, 2)).map_err(err)?;
        let x = alcove_point(r, &g);
        let d = depth_at(&conn, &x);
        ensure!(
            d.is_zero() || critical_numbers(&g, &x, 8).contains(&d),
            "depth {d} at {x} is not critical"
        );
    }
    Ok(())
}

pub fn periodicity(r: &mut TestRng) -> Result<(), String> {
    for g in test_groups() {
        let a = lie_element(r, &g, -3, 2);
        let x = apartment_point(r, &g);
        let before: Vec<Rational> = graded_decompose(&g, &x, &a)
            .map_err(err)?
            .into_iter()
            .map(|p| p.degree + int(1))
            .collect();
        let after: Vec<Rational> = graded_decompose(&g, &x, &raise(&a))
            .map_err(err)?
            .into_iter()
            .map(|p| p.degree)
            .collect();
        ensure!(
            before == after,
            "degrees of zX are not those of X shifted by one at {x}"
        );
    }
    Ok(())
}

pub fn gauge_composes(r: &mut TestRng) -> Result<(), String> {
    for g in test_groups() {
        let conn = ConnectionMatrix::new(g.clone(), lie_element(r, &g, -2, 1)).map_err(err)?;
        let a = gauge_word(r, &g, 2);
        let b = gauge_word(r, &g, 2);
        let lhs = gauge_transform(&gauge_transform(&conn, &a).map_err(err)?, &b).map_err(err)?;
        let rhs = gauge_transform(&conn, &b.compose(&a)).map_err(err)?;
        ensure!(lhs == rhs, "{}_{}: h(gA) != (hg)A", g.kind, g.size);
    }
    Ok(())
}

pub fn monomial_equivariance(r: &mut TestRng) -> Result<(), String> {
    for g in [
        group(GroupKind::GL, 2),
        group(GroupKind::GL, 3),
        group(GroupKind::SL, 3),
    ] {
        let conn = ConnectionMatrix::new(g.clone(), lie_element(r, &g, -3, 2)).map_err(err)?;
        let n = monomial_element(r, &g, 2);
        let x = apartment_point(r, &g);
        let y = n.act_on_point(&g, &x).map_err(err)?;
        let moved = gauge_transform(&conn, &n).map_err(err)?;
        let (d1, d0) = (depth_at(&moved, &y), depth_at(&conn, &x));
        ensure!(
            d1 == d0,
            "{}_{}: depth {d1} at {y} after gauge, {d0} at {x} before",
            g.kind,
            g.size
        );
    }
    Ok(())
}

pub fn fundamental_conjugation(r: &mut TestRng) -> Result<(), String> {
    for g in test_groups() {
        let conn = ConnectionMatrix::new(g.clone(), lie_element(r, &g, -2, 1)).map_err(err)?;
        let x = alcove_point(r, &g);
        let s = leading_representative(&conn, &x);
        let mut h = constant_torus(r, &g);
        for _ in 0..2 {
            let root = r.gen_range(0..g.roots.len());
            h = h.compose(&root_unipotent(&g, root, &LaurentScalar::constant(small_rational(r))));
        }
        let conj = &(h.matrix() * &s.rep) * h.inverse();
        let moved = Stratum::new(s.point.clone(), s.depth.clone(), conj);
        ensure!(
            is_fundamental(&moved) == is_fundamental(&s),
            "constant conjugation changed fundamentality"
        );
        if g.kind != GroupKind::Sp {
            let n = monomial_element(r, &g, 0);
            let t = s.act(&g, &n).map_err(err)?;
            t.validate(&g).map_err(err)?;
            ensure!(
                is_fundamental(&t) == is_fundamental(&s),
                "Weyl conjugation changed fundamentality"
            );
        }
    }
    Ok(())
}

pub fn associates_symmetric(r: &mut TestRng) -> Result<(), String> {
    for g in test_groups() {
        let id = GaugeElement::identity(g.size);
        let c1 = ConnectionMatrix::new(g.clone(), lie_element(r, &g, -2, 1)).map_err(err)?;
        let c2 = if r.gen_bool(0.5) {
            c1.clone()
        } else {
            ConnectionMatrix::new(g.clone(), lie_element(r, &g, -2, 1)).map_err(err)?
        };
        let s1 = leading_representative(&c1, &alcove_point(r, &g));
        let s2 = leading_representative(&c2, &alcove_point(r, &g));
        ensure!(
            associates_at(&g, &id, &s1, &s1).map_err(err)?,
            "stratum at {} not self-associate",
            s1.point
        );
        let ab = associates_at(&g, &id, &s1, &s2).map_err(err)?;
        let ba = associates_at(&g, &id, &s2, &s1).map_err(err)?;
        ensure!(ab == ba, "associates not symmetric for {} and {}", s1.point, s2.point);
    }
    Ok(())
}

pub fn unipotent_shift(r: &mut TestRng) -> Result<(), String> {
    for g in test_groups() {
        let conn = ConnectionMatrix::new(g.clone(), lie_element(r, &g, -3, 1)).map_err(err)?;
        let x = alcove_point(r, &g);
        let diag = point_diagonal(&g, &x);
        let root = r.gen_range(0..g.roots.len());
        let alpha = g.roots[root].eval(&x.coords);
        let k = i64::try_from((-alpha.clone()).floor().to_integer()).map_err(err)? + r.gen_range(1..=3);
        let ell = int(k) + &alpha;
        let xv = g.roots[root].embed(g.size, &LaurentScalar::monomial(nonzero_rational(r), k));
        ensure!(
            is_homogeneous(&diag, &xv, &ell),
            "root vector not homogeneous of degree {ell}"
        );
        let id = LaurentMatrix::identity(g.size);
        let u = GaugeElement::from_parts(&g, &id + &xv, &id - &xv).map_err(err)?;
        let moved = gauge_transform(&conn, &u).map_err(err)?.shifted(&x);
        let expected = &(&(u.matrix() * &conn.shifted(&x)) * u.inverse()) - &xv.scale(&ell);
        let residual = &moved - &expected;
        ensure!(
            all_above(&diag, &residual, &ell),
            "residual not above degree {ell} at {x}"
        );
        let doubled = &ell + &ell;
        ensure!(
            residual.is_zero() || component(&diag, &residual, &doubled) == residual,
            "residual not concentrated in degree {doubled}"
        );
    }
    Ok(())
}

/// Every check with its case count.
pub fn all() -> Vec<(&'static str, Check, u32)> {
    vec![
        ("valuation additivity", valuation_additive, 1000),
        ("tau derivation", tau_derivation, 1000),
        ("invert_unit", invert_unit, 500),
        ("root reconstruction", root_reconstruction, 1000),
        ("graded reassembly", graded_reassembly, 1000),
        ("eigenvalue identity", eigenvalue_identity, 1000),
        ("bracket additivity", bracket_additivity, 1000),
        ("depth in critical set", depth_critical, 1000),
        ("periodicity", periodicity, 1000),
        ("gauge action", gauge_composes, 1000),
        ("monomial equivariance", monomial_equivariance, 1000),
        ("fundamental under conjugation", fundamental_conjugation, 1000),
        ("associates reflexive and symmetric", associates_symmetric, 1000),
        ("unipotent gauge shift", unipotent_shift, 1000),
    ]
}
