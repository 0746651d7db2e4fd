#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use strata_kit::exact::{int, rat, LaurentMatrix, LaurentScalar, Rational};
use strata_kit::filtration::ConnectionMatrix;
use strata_kit::roots::{Alcove, ApartmentPoint, GroupData, GroupKind};
use strata_kit::strata::GaugeElement;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn z(c: i64, m: i64) -> LaurentScalar {
    LaurentScalar::monomial(int(c), m)
}

pub fn group(kind: GroupKind, n: usize) -> GroupData {
    GroupData::build(kind, n).unwrap()
}

/// The groups exercised by the randomized checks.
pub fn test_groups() -> Vec<GroupData> {
    vec![
        group(GroupKind::GL, 2),
        group(GroupKind::GL, 3),
        group(GroupKind::SL, 2),
        group(GroupKind::SL, 3),
        group(GroupKind::Sp, 4),
    ]
}

pub fn small_rational(rng: &mut TestRng) -> Rational {
    rat(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

pub fn nonzero_rational(rng: &mut TestRng) -> Rational {
    loop {
        let r = small_rational(rng);
        if r != int(0) {
            return r;
        }
    }
}

/// Laurent scalar with up to `terms` terms, powers in `lo..=hi`.
pub fn laurent(rng: &mut TestRng, lo: i64, hi: i64, terms: usize) -> LaurentScalar {
    let count = rng.gen_range(0..=terms);
    LaurentScalar::from_terms((0..count).map(|_| (rng.gen_range(lo..=hi), small_rational(rng))))
}

pub fn nonzero_laurent(rng: &mut TestRng, lo: i64, hi: i64, terms: usize) -> LaurentScalar {
    loop {
        let f = laurent(rng, lo, hi, terms.max(1));
        if !f.is_zero() {
            return f;
        }
    }
}

/// Random element of the Lie algebra, built from random torus and root
/// coefficients with powers in `lo..=hi`.
pub fn lie_element(rng: &mut TestRng, g: &GroupData, lo: i64, hi: i64) -> LaurentMatrix {
    let torus: Vec<LaurentScalar> = (0..g.rank).map(|_| laurent(rng, lo, hi, 2)).collect();
    let mut a = g.torus_embed(&torus);
    if g.kind == GroupKind::SL {
        let t = a.trace();
        let last = a.get(g.size - 1, g.size - 1).clone();
        a.set(g.size - 1, g.size - 1, &last - &t);
    }
    for root in &g.roots {
        if rng.gen_bool(0.6) {
            a = &a + &root.embed(g.size, &laurent(rng, lo, hi, 2));
        }
    }
    a
}

/// Random connection with integer coefficients in `[-5, 5]`.
pub fn integer_connection(rng: &mut TestRng, g: &GroupData, lo: i64, hi: i64) -> ConnectionMatrix {
    let torus: Vec<LaurentScalar> = (0..g.rank)
        .map(|_| {
            LaurentScalar::from_terms(
                (0..rng.gen_range(0..=2)).map(|_| (rng.gen_range(lo..=hi), int(rng.gen_range(-5..=5)))),
            )
        })
        .collect();
    let mut a = g.torus_embed(&torus);
    if g.kind == GroupKind::SL {
        let t = a.trace();
        let last = a.get(g.size - 1, g.size - 1).clone();
        a.set(g.size - 1, g.size - 1, &last - &t);
    }
    for root in &g.roots {
        if rng.gen_bool(0.6) {
            let f = LaurentScalar::from_terms(
                (0..rng.gen_range(1..=2)).map(|_| (rng.gen_range(lo..=hi), int(rng.gen_range(-5..=5)))),
            );
            a = &a + &root.embed(g.size, &f);
        }
    }
    ConnectionMatrix::new(g.clone(), a).unwrap()
}

/// Random point of the closed fundamental alcove with small denominators.
pub fn alcove_point(rng: &mut TestRng, g: &GroupData) -> ApartmentPoint {
    let alcove = Alcove::new(g);
    if rng.gen_bool(0.4) {
        let pts = alcove.optimal_points();
        return pts.choose(rng).unwrap().clone();
    }
    let grid = alcove.grid([2u32, 3, 4, 6, 8][rng.gen_range(0..5)]);
    grid.choose(rng).unwrap().clone()
}

/// Random rational point of the apartment, not necessarily in the alcove.
pub fn apartment_point(rng: &mut TestRng, g: &GroupData) -> ApartmentPoint {
    let mut coords: Vec<Rational> = (0..g.rank)
        .map(|_| rat(rng.gen_range(-6..=6), rng.gen_range(1..=6)))
        .collect();
    if g.kind == GroupKind::SL {
        let s: Rational = coords.iter().sum();
        let last = coords.last().unwrap().clone();
        *coords.last_mut().unwrap() = last - s;
    }
    ApartmentPoint::new(coords)
}

/// `I + X` for a root vector `X`, with inverse `I - X`.
pub fn root_unipotent(g: &GroupData, root: usize, f: &LaurentScalar) -> GaugeElement {
    let x = g.roots[root].embed(g.size, f);
    let id = LaurentMatrix::identity(g.size);
    GaugeElement::from_parts(g, &id + &x, &id - &x).unwrap()
}

/// `diag(z^k)` in the group, with `k` drawn from `-2..=2`.
pub fn torus_monomial(rng: &mut TestRng, g: &GroupData) -> GaugeElement {
    let mut k: Vec<i64> = (0..g.rank).map(|_| rng.gen_range(-2..=2)).collect();
    let powers: Vec<i64> = match g.kind {
        GroupKind::GL => k,
        GroupKind::SL => {
            let s: i64 = k[..g.size - 1].iter().sum();
            k[g.size - 1] = -s;
            k
        }
        GroupKind::Sp => k.iter().copied().chain(k.iter().map(|x| -x)).collect(),
    };
    let d = LaurentMatrix::diagonal(powers.iter().map(|&p| z(1, p)).collect());
    let inv = LaurentMatrix::diagonal(powers.iter().map(|&p| z(1, -p)).collect());
    GaugeElement::from_parts(g, d, inv).unwrap()
}

/// Constant torus element with small nonzero rational entries.
pub fn constant_torus(rng: &mut TestRng, g: &GroupData) -> GaugeElement {
    let mut c: Vec<Rational> = (0..g.rank).map(|_| nonzero_rational(rng)).collect();
    let diag: Vec<Rational> = match g.kind {
        GroupKind::GL => c,
        GroupKind::SL => {
            let p: Rational = c[..g.size - 1].iter().product();
            c[g.size - 1] = p.recip();
            c
        }
        GroupKind::Sp => c.iter().cloned().chain(c.iter().map(|x| x.recip())).collect(),
    };
    let d = LaurentMatrix::diagonal(diag.iter().map(|v| LaurentScalar::constant(v.clone())).collect());
    let inv = LaurentMatrix::diagonal(diag.iter().map(|v| LaurentScalar::constant(v.recip())).collect());
    GaugeElement::from_parts(g, d, inv).unwrap()
}

/// One of the three generator types: constant (torus times constant
/// unipotent), monomial torus, or unipotent exponential of a Laurent root
/// vector.
pub fn gauge_element(rng: &mut TestRng, g: &GroupData) -> GaugeElement {
    let root = rng.gen_range(0..g.roots.len());
    match rng.gen_range(0..3) {
        0 => {
            let u = root_unipotent(g, root, &LaurentScalar::constant(small_rational(rng)));
            constant_torus(rng, g).compose(&u)
        }
        1 => torus_monomial(rng, g),
        _ => {
            let f = LaurentScalar::monomial(nonzero_rational(rng), rng.gen_range(-2..=2));
            root_unipotent(g, root, &f)
        }
    }
}

/// Product of a few random generators.
pub fn gauge_word(rng: &mut TestRng, g: &GroupData, len: usize) -> GaugeElement {
    (0..len).fold(GaugeElement::identity(g.size), |acc, _| {
        acc.compose(&gauge_element(rng, g))
    })
}

/// Signed permutation times `z`-powers in `-max_power..=max_power`, lying
/// in `GL_n` or `SL_n`.
pub fn monomial_element(rng: &mut TestRng, g: &GroupData, max_power: i64) -> GaugeElement {
    let n = g.size;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut powers: Vec<i64> = (0..n).map(|_| rng.gen_range(-max_power..=max_power)).collect();
    let mut coeffs: Vec<Rational> = (0..n).map(|_| int(if rng.gen_bool(0.5) { 1 } else { -1 })).collect();
    if g.kind == GroupKind::SL {
        let s: i64 = powers[..n - 1].iter().sum();
        powers[n - 1] = -s;
        let mut m = LaurentMatrix::zero(n);
        for i in 0..n {
            m.set(i, perm[i], LaurentScalar::monomial(coeffs[i].clone(), powers[i]));
        }
        let det = m.determinant();
        if det.coefficient(0) != int(1) {
            coeffs[0] = -&coeffs[0];
        }
    }
    let mut m = LaurentMatrix::zero(n);
    let mut inv = LaurentMatrix::zero(n);
    for i in 0..n {
        m.set(i, perm[i], LaurentScalar::monomial(coeffs[i].clone(), powers[i]));
        inv.set(perm[i], i, LaurentScalar::monomial(coeffs[i].recip(), -powers[i]));
    }
    GaugeElement::from_parts(g, m, inv).unwrap()
}
pub mod checks;
