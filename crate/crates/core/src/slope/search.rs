//! Search for a fundamental stratum over the optimal points of the alcove,
//! with a reduction loop for nonfundamental minima and the depth-zero
//! shift construction.

use std::sync::OnceLock;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::exact::{int, LaurentMatrix, LaurentScalar, QMatrix, Rational};
use crate::filtration::{depth_at, leading_representative, point_diagonal, ConnectionMatrix};
use crate::roots::{Alcove, ApartmentPoint, GroupData, GroupKind};
use crate::strata::{contains, gauge_transform, is_fundamental, GaugeElement, Stratum};

/// Result of a stratum search.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// A certified stratum; it is contained in `gauge * A`.
    pub stratum: Option<Stratum>,
    pub gauge: GaugeElement,
    /// The phase that produced the stratum (1 or 2).
    pub phase: Option<u8>,
    /// Depths of the input connection at every optimal point.
    pub depth_map: Vec<(ApartmentPoint, Rational)>,
    pub diagnostics: Vec<String>,
}

fn thread_pool() -> Option<&'static rayon::ThreadPool> {
    static POOL: OnceLock<Option<rayon::ThreadPool>> = OnceLock::new();
    POOL.get_or_init(|| {
        let threads = std::env::var("STRATA_KIT_THREADS").ok()?.parse::<usize>().ok()?;
        rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build().ok()
    })
    .as_ref()
}

/// Order-preserving parallel map, honouring `STRATA_KIT_THREADS`.
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    match thread_pool() {
        Some(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        None => items.par_iter().map(&f).collect(),
    }
}

/// Depth of the connection at each point.
pub fn depth_map(conn: &ConnectionMatrix, points: &[ApartmentPoint]) -> Vec<Rational> {
    par_map(points, |x| depth_at(conn, x))
}

/// Homogeneous representative at `x` with `z` set to 1.
fn constant_part(rep: &LaurentMatrix) -> QMatrix {
    let n = rep.size();
    let mut c = QMatrix::zeros(n, n);
    for ((i, j), e) in rep.entries() {
        c[(i, j)] = e.terms().fold(Rational::zero(), |s, (_, v)| s + v);
    }
    c
}

/// `h_ij z^{d_j - d_i}`, homogeneous of degree zero at the point with
/// torus diagonal `d`.
fn twist(h: &QMatrix, diag: &[Rational]) -> Option<LaurentMatrix> {
    let n = h.rows();
    let mut m = LaurentMatrix::zero(n);
    for i in 0..n {
        for j in 0..n {
            let c = &h[(i, j)];
            if c.is_zero() {
                continue;
            }
            let shift = &diag[j] - &diag[i];
            if !shift.is_integer() {
                return None;
            }
            let p = shift.to_integer().try_into().ok()?;
            m.set(i, j, LaurentScalar::monomial(c.clone(), p));
        }
    }
    Some(m)
}

/// Index blocks of coordinates whose torus entries agree modulo `Z`.
fn integral_blocks(diag: &[Rational]) -> Vec<Vec<usize>> {
    let mut blocks: Vec<(Rational, Vec<usize>)> = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        let class = d - d.floor();
        match blocks.iter_mut().find(|(c, _)| *c == class) {
            Some((_, b)) => b.push(i),
            None => blocks.push((class, vec![i])),
        }
    }
    blocks.into_iter().map(|(_, b)| b).collect()
}

fn in_span(basis: &[Vec<Rational>], v: &[Rational]) -> bool {
    let mut cols = basis.to_vec();
    let before = if cols.is_empty() {
        0
    } else {
        QMatrix::from_columns(&cols).rank()
    };
    cols.push(v.to_vec());
    QMatrix::from_columns(&cols).rank() == before
}

fn power(c: &QMatrix, k: usize) -> QMatrix {
    let mut p = QMatrix::identity(c.rows());
    for _ in 0..k {
        p = p.mul(c);
    }
    p
}

/// Basis change adapted to the kernel flag of a nilpotent `c`, block by
/// block; returns `P` with columns the new basis.
fn kernel_flag_basis(c: &QMatrix, blocks: &[Vec<usize>]) -> QMatrix {
    let n = c.rows();
    let mut p = QMatrix::zeros(n, n);
    for block in blocks {
        let mut chosen: Vec<Vec<Rational>> = Vec::new();
        let mut k = 1;
        while chosen.len() < block.len() {
            let ck = power(c, k);
            let restricted = QMatrix::from_columns(&block.iter().map(|&j| ck.column(j)).collect::<Vec<_>>());
            for v in restricted.kernel() {
                if chosen.len() == block.len() {
                    break;
                }
                if !in_span(&chosen, &v) {
                    chosen.push(v);
                }
            }
            k += 1;
        }
        for (t, w) in chosen.iter().enumerate() {
            for (s, &row) in block.iter().enumerate() {
                p[(row, block[t])] = w[s].clone();
            }
        }
    }
    p
}

/// Symplectic basis `(v_1..v_n, f_1..f_n)` whose isotropic flag is
/// preserved by the nilpotent `c`; `c` becomes strictly positive.
fn isotropic_flag_basis(c: &QMatrix, j: &QMatrix) -> Option<QMatrix> {
    let size = c.rows();
    let n = size / 2;
    let pair = |a: &[Rational], b: &[Rational]| -> Rational {
        let jb = j.mul_vec(b);
        a.iter().zip(&jb).fold(Rational::zero(), |s, (x, y)| s + x * y)
    };
    let mut v: Vec<Vec<Rational>> = Vec::new();
    while v.len() < n {
        // w with <v_i, w> = 0 for all i and c w in span(v)
        let mut rows: Vec<Vec<Rational>> = v.iter().map(|vi| j.transpose().mul_vec(vi)).collect();
        // c w = sum_i a_i v_i: unknowns (w, a)
        let mut system: Vec<Vec<Rational>> = rows
            .drain(..)
            .map(|mut r| {
                r.extend(vec![Rational::zero(); v.len()]);
                r
            })
            .collect();
        for r in 0..size {
            let mut row: Vec<Rational> = (0..size).map(|k| c[(r, k)].clone()).collect();
            row.extend(v.iter().map(|vi| -vi[r].clone()));
            system.push(row);
        }
        let m = QMatrix::from_rows(system);
        let next = m
            .kernel()
            .into_iter()
            .map(|mut s| {
                s.truncate(size);
                s
            })
            .find(|w| !w.iter().all(Zero::is_zero) && !in_span(&v, w))?;
        v.push(next);
    }
    // dual vectors g_k with <v_i, g_k> = delta_ik
    let lhs = QMatrix::from_rows(v.iter().map(|vi| j.transpose().mul_vec(vi)).collect());
    let mut g = Vec::with_capacity(n);
    for k in 0..n {
        let mut rhs = vec![Rational::zero(); n];
        rhs[k] = Rational::one();
        g.push(lhs.solve(&rhs)?);
    }
    let half = Rational::new(1.into(), 2.into());
    let f: Vec<Vec<Rational>> = (0..n)
        .map(|k| {
            let mut fk = g[k].clone();
            for i in 0..n {
                let a = pair(&g[i], &g[k]) * &half;
                for (x, vi) in fk.iter_mut().zip(&v[i]) {
                    *x += &a * vi;
                }
            }
            fk
        })
        .collect();
    let cols: Vec<Vec<Rational>> = v.into_iter().chain(f).collect();
    Some(QMatrix::from_columns(&cols))
}

fn restrict(m: &QMatrix, idx: &[usize]) -> QMatrix {
    QMatrix::from_rows(
        idx.iter()
            .map(|&a| idx.iter().map(|&b| m[(a, b)].clone()).collect())
            .collect(),
    )
}

/// Symplectic basis adapted to `c` inside the integral-root subgroup of a
/// symplectic group: isotropic flags on the self-dual blocks, kernel flags
/// paired with their duals on the others.
fn symplectic_levi_basis(c: &QMatrix, j: &QMatrix, diag: &[Rational]) -> Result<QMatrix, String> {
    let size = c.rows();
    let r = size / 2;
    let partner = |i: usize| if i < r { i + r } else { i - r };
    let blocks = integral_blocks(diag);
    let block_of = |i: usize| blocks.iter().position(|b| b.contains(&i));
    if (0..size).any(|a| (0..size).any(|b| !c[(a, b)].is_zero() && block_of(a) != block_of(b))) {
        return Err("representative leaves the integral-root subgroup".into());
    }
    let mut p = QMatrix::zeros(size, size);
    let mut done = vec![false; blocks.len()];
    for (k, block) in blocks.iter().enumerate() {
        if done[k] {
            continue;
        }
        done[k] = true;
        let dual = block_of(partner(block[0])).ok_or("missing dual block")?;
        if dual == k {
            let first: Vec<usize> = block.iter().copied().filter(|&i| i < r).collect();
            let idx: Vec<usize> = first.iter().copied().chain(first.iter().map(|&i| i + r)).collect();
            let basis =
                isotropic_flag_basis(&restrict(c, &idx), &restrict(j, &idx)).ok_or("no isotropic flag found")?;
            for (t, &col) in idx.iter().enumerate() {
                for (s, &row) in idx.iter().enumerate() {
                    p[(row, col)] = basis[(s, t)].clone();
                }
            }
            continue;
        }
        done[dual] = true;
        let flag = kernel_flag_basis(c, std::slice::from_ref(block));
        let w: Vec<Vec<Rational>> = block.iter().map(|&col| flag.column(col)).collect();
        let support = &blocks[dual];
        let lhs = QMatrix::from_rows(
            w.iter()
                .map(|wi| {
                    let row = j.transpose().mul_vec(wi);
                    support.iter().map(|&i| row[i].clone()).collect()
                })
                .collect(),
        );
        for (t, &col) in block.iter().enumerate() {
            let mut rhs = vec![Rational::zero(); w.len()];
            rhs[t] = j[(col, partner(col))].clone();
            let u = lhs.solve(&rhs).ok_or("no dual flag found")?;
            for i in 0..size {
                p[(i, col)] = w[t][i].clone();
            }
            for (s, &i) in support.iter().enumerate() {
                p[(i, partner(col))] = u[s].clone();
            }
        }
    }
    if p.transpose().mul(j).mul(&p) != *j {
        return Err("flag basis is not symplectic".into());
    }
    Ok(p)
}

/// A constant `h` in the group and in the integral-root subgroup at the
/// point, with `h c h^-1` in positive position.
fn adapted_conjugator(group: &GroupData, diag: &[Rational], c: &QMatrix) -> Result<QMatrix, String> {
    if !c.is_nilpotent() {
        return Err("representative is not nilpotent".into());
    }
    let p = match group.kind {
        GroupKind::GL | GroupKind::SL => {
            let mut p = kernel_flag_basis(c, &integral_blocks(diag));
            if group.kind == GroupKind::SL {
                let det = p.determinant();
                for i in 0..p.rows() {
                    p[(i, 0)] = &p[(i, 0)] / &det;
                }
            }
            p
        }
        GroupKind::Sp => symplectic_levi_basis(c, &group.symplectic_form(), diag)?,
    };
    p.inverse().ok_or_else(|| "flag basis is singular".to_string())
}

/// Twisted constant gauge element attached to `h` at the point.
fn twisted_gauge(group: &GroupData, diag: &[Rational], h: &QMatrix) -> Result<GaugeElement, String> {
    let hinv = h.inverse().ok_or("singular conjugator")?;
    let m = twist(h, diag).ok_or("conjugator is not in the integral-root subgroup")?;
    let minv = twist(&hinv, diag).ok_or("conjugator is not in the integral-root subgroup")?;
    GaugeElement::from_parts(group, m, minv).map_err(|e| e.to_string())
}

/// Direction of the depth-zero shift at `x`: half the sum of positive
/// coroots of the integral roots, falling back to all roots or, without
/// roots, the central direction.
fn shift_direction(group: &GroupData, x: &ApartmentPoint) -> Vec<Rational> {
    let integral = group.integral_roots(x);
    let d = group.half_sum_positive_coroots(&integral);
    if d.iter().any(|c| !c.is_zero()) {
        return d;
    }
    let all: Vec<usize> = (0..group.roots.len()).collect();
    let d = group.half_sum_positive_coroots(&all);
    if d.iter().any(|c| !c.is_zero()) {
        return d;
    }
    vec![Rational::one(); group.rank]
}

/// Turns a depth-zero stratum contained in `A` into a fundamental
/// depth-zero stratum contained in `g A`, shifting the point off its facet.
pub fn fundamentalize_depth_zero(conn: &ConnectionMatrix, s: &Stratum) -> SearchOutcome {
    let group = conn.group();
    let mut out = SearchOutcome {
        stratum: None,
        gauge: GaugeElement::identity(group.size),
        phase: None,
        depth_map: Vec::new(),
        diagnostics: Vec::new(),
    };
    if !s.depth.is_zero() || !contains(conn, s) {
        out.diagnostics
            .push(format!("stratum at {} is not a contained depth-zero stratum", s.point));
        return out;
    }
    if is_fundamental(s) {
        out.stratum = Some(s.clone());
        return out;
    }
    let diag = point_diagonal(group, &s.point);
    let c = constant_part(&s.rep);
    let gauge = match adapted_conjugator(group, &diag, &c).and_then(|h| twisted_gauge(group, &diag, &h)) {
        Ok(g) => g,
        Err(e) => {
            out.diagnostics
                .push(format!("depth-zero conjugation at {} skipped: {e}", s.point));
            return out;
        }
    };
    let moved = match gauge_transform(conn, &gauge) {
        Ok(m) => m,
        Err(e) => {
            out.diagnostics.push(format!("gauge transform failed: {e}"));
            return out;
        }
    };
    let direction = shift_direction(group, &s.point);
    let h = int(group.coxeter_number);
    for eps in [Rational::one() / (int(2) * &h), Rational::one() / (int(4) * &h)] {
        let y = s.point.offset(&direction, &eps);
        let candidate = leading_representative(&moved, &y);
        if candidate.depth.is_zero() && is_fundamental(&candidate) && contains(&moved, &candidate) {
            out.stratum = Some(candidate);
            out.gauge = gauge;
            return out;
        }
        out.diagnostics
            .push(format!("shift by {eps} to {y} did not give a fundamental stratum"));
    }
    out
}

const MAX_REDUCTION_TRIES: usize = 64;

/// Signed permutations `(perm, flips)` of the torus coordinates generating
/// the finite Weyl group; the full group is used only for small rank.
fn weyl_elements(group: &GroupData) -> Vec<(Vec<usize>, Vec<bool>)> {
    let r = group.rank;
    let signed = group.kind == GroupKind::Sp;
    if (signed && r > 3) || (!signed && r > 4) {
        return vec![((0..r).collect(), vec![false; r])];
    }
    let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..r {
        perms = perms
            .into_iter()
            .flat_map(|p| {
                (0..r)
                    .filter(|i| !p.contains(i))
                    .map(|i| [p.clone(), vec![i]].concat())
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    let flips: Vec<Vec<bool>> = if signed {
        (0..1u32 << r)
            .map(|m| (0..r).map(|i| m >> i & 1 == 1).collect())
            .collect()
    } else {
        vec![vec![false; r]]
    };
    perms
        .iter()
        .flat_map(|p| flips.iter().map(move |f| (p.clone(), f.clone())))
        .collect()
}

/// Coroot-lattice translations with entries in `[-bound, bound]`.
fn translations(group: &GroupData, bound: i64) -> Vec<Vec<i64>> {
    let r = group.rank;
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|v| (-bound..=bound).map(move |k| [v.clone(), vec![k]].concat()))
            .collect();
    }
    if group.kind != GroupKind::Sp {
        out.retain(|v| v.iter().sum::<i64>() == 0);
    }
    out.sort_by_key(|v| v.iter().map(|k| k.abs()).sum::<i64>());
    out
}

/// The monomial element `w t_lambda`.
fn monomial_move(group: &GroupData, perm: &[usize], flips: &[bool], lambda: &[i64]) -> Option<GaugeElement> {
    let n = group.size;
    let r = group.rank;
    let mut w = QMatrix::zeros(n, n);
    let mut powers = vec![0i64; n];
    match group.kind {
        GroupKind::GL | GroupKind::SL => {
            for i in 0..n {
                w[(perm[i], i)] = Rational::one();
                powers[i] = lambda[i];
            }
            if group.kind == GroupKind::SL && w.determinant() != Rational::one() {
                w[(perm[0], 0)] = -Rational::one();
            }
        }
        GroupKind::Sp => {
            for i in 0..r {
                let (a, b) = (perm[i], perm[i] + r);
                if flips[i] {
                    w[(b, i)] = Rational::one();
                    w[(a, i + r)] = -Rational::one();
                } else {
                    w[(a, i)] = Rational::one();
                    w[(b, i + r)] = Rational::one();
                }
                powers[i] = lambda[i];
                powers[i + r] = -lambda[i];
            }
        }
    }
    let t = LaurentMatrix::diagonal(
        powers
            .iter()
            .map(|&p| LaurentScalar::monomial(Rational::one(), p))
            .collect(),
    );
    let tinv = LaurentMatrix::diagonal(
        powers
            .iter()
            .map(|&p| LaurentScalar::monomial(Rational::one(), -p))
            .collect(),
    );
    let wl = LaurentMatrix::from_constant(&w);
    let winv = LaurentMatrix::from_constant(&w.inverse()?);
    GaugeElement::from_parts(group, &wl * &t, &tinv * &winv).ok()
}

/// Monomial moves paired with the preimages of the optimal points, so that
/// the depth of `m A` at `x` is the depth of `A` at the preimage.
fn move_table(group: &GroupData, points: &[ApartmentPoint]) -> Vec<(GaugeElement, Vec<ApartmentPoint>)> {
    let bound = if group.rank <= 3 { 2 } else { 1 };
    let mut table = Vec::new();
    let lambdas = translations(group, bound);
    for (perm, flips) in weyl_elements(group) {
        for lambda in &lambdas {
            let Some(m) = monomial_move(group, &perm, &flips, lambda) else {
                continue;
            };
            let back = m.invert();
            let pre: Option<Vec<ApartmentPoint>> = points.iter().map(|x| back.act_on_point(group, x).ok()).collect();
            if let Some(pre) = pre {
                table.push((m, pre));
            }
        }
    }
    table
}

/// Searches the optimal points for a fundamental stratum of depth
/// `target`, reducing nonfundamental minima by constant conjugation and
/// by monomial moves between alcoves.
pub fn stratum_search(conn: &ConnectionMatrix, target: &Rational) -> SearchOutcome {
    let group = conn.group().clone();
    let points = Alcove::new(&group).optimal_points();
    let mut current = conn.clone();
    let mut gauge = GaugeElement::identity(group.size);
    let mut diagnostics = Vec::new();
    let mut best_min: Option<Rational> = None;
    let initial: Vec<(ApartmentPoint, Rational)> = points.iter().cloned().zip(depth_map(conn, &points)).collect();
    let mut moves: Option<Vec<(GaugeElement, Vec<ApartmentPoint>)>> = None;
    let outcome =
        |stratum: Option<Stratum>, g: GaugeElement, phase: Option<u8>, diagnostics: Vec<String>| SearchOutcome {
            stratum,
            gauge: g,
            phase,
            depth_map: initial.clone(),
            diagnostics,
        };
    for round in 0u8.. {
        let phase = if round == 0 { 1 } else { 2 };
        // (move index, point index, depth) over the candidate set
        let candidates: Vec<(Option<usize>, usize, Rational)> = if round == 0 {
            initial
                .iter()
                .enumerate()
                .map(|(k, (_, d))| (None, k, d.clone()))
                .collect()
        } else {
            let table = moves.get_or_insert_with(|| move_table(&group, &points));
            let mut here: Vec<(Option<usize>, usize, Rational)> = depth_map(&current, &points)
                .into_iter()
                .enumerate()
                .map(|(k, d)| (None, k, d))
                .collect();
            let flat: Vec<(usize, usize)> = (0..table.len())
                .flat_map(|m| (0..points.len()).map(move |k| (m, k)))
                .collect();
            let depths = par_map(&flat, |&(m, k)| depth_at(&current, &table[m].1[k]));
            here.extend(flat.into_iter().zip(depths).map(|((m, k), d)| (Some(m), k, d)));
            here
        };
        let moved = |m: Option<usize>| -> Option<(ConnectionMatrix, GaugeElement)> {
            match m {
                None => Some((current.clone(), gauge.clone())),
                Some(m) => {
                    let g = &moves.as_ref()?[m].0;
                    Some((gauge_transform(&current, g).ok()?, g.compose(&gauge)))
                }
            }
        };
        for (m, k, d) in candidates.iter().filter(|(_, _, d)| d == target) {
            let Some((c, g)) = moved(*m) else {
                continue;
            };
            let x = &points[*k];
            let s = leading_representative(&c, x);
            if target.is_zero() {
                let fixed = fundamentalize_depth_zero(&c, &s);
                diagnostics.extend(fixed.diagnostics);
                if let Some(f) = fixed.stratum {
                    return outcome(Some(f), fixed.gauge.compose(&g), Some(phase), diagnostics);
                }
            } else if is_fundamental(&s) {
                return outcome(Some(s), g, Some(phase), diagnostics);
            } else {
                diagnostics.push(format!("stratum of depth {d} at {x} is not fundamental"));
            }
        }
        let Some(d) = candidates.iter().map(|c| c.2.clone()).min() else {
            break;
        };
        if &d < target {
            diagnostics.push(format!("depth {d} below the target {target}"));
            break;
        }
        if best_min.as_ref().is_some_and(|b| &d >= b) {
            diagnostics.push(format!("reduction stalled at depth {d} (round {round})"));
            break;
        }
        best_min = Some(d.clone());
        let mut reduced = false;
        let mut failure = None;
        for (m, k, _) in candidates.iter().filter(|c| c.2 == d).take(MAX_REDUCTION_TRIES) {
            let x = &points[*k];
            let Some((c, g)) = moved(*m) else {
                continue;
            };
            let s = leading_representative(&c, x);
            if is_fundamental(&s) {
                failure = Some(format!(
                    "minimal depth {d} at {x} is fundamental but differs from the target"
                ));
                break;
            }
            let diag = point_diagonal(&group, x);
            let step = adapted_conjugator(&group, &diag, &constant_part(&s.rep))
                .and_then(|h| twisted_gauge(&group, &diag, &h))
                .and_then(|h| gauge_transform(&c, &h).map(|t| (t, h)).map_err(|e| e.to_string()));
            match step {
                Ok((next, h)) => {
                    current = next;
                    gauge = h.compose(&g);
                    reduced = true;
                    break;
                }
                Err(e) => failure = Some(format!("reduction at {x} skipped: {e}")),
            }
        }
        if !reduced {
            diagnostics.extend(failure);
            break;
        }
    }
    outcome(None, GaugeElement::identity(group.size), None, diagnostics)
}
