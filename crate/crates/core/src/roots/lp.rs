//! Exact two-phase simplex method over the rationals.
//!
//! Solves `maximize c.x subject to A x <= b, x >= 0` with Bland's
//! anti-cycling rule. Problems here are tiny (a handful of variables), so
//! a dense tableau is fine.

use num_traits::{One, Signed, Zero};

use crate::exact::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    rows: Vec<(Vec<Rational>, Rational)>,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rational>) -> Self {
        Self {
            objective,
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds `a.x <= b`.
    pub fn le(&mut self, a: Vec<Rational>, b: Rational) -> &mut Self {
        assert_eq!(a.len(), self.num_vars());
        self.rows.push((a, b));
        self
    }

    /// Adds `a.x >= b`.
    pub fn ge(&mut self, a: Vec<Rational>, b: Rational) -> &mut Self {
        self.le(a.into_iter().map(|v| -v).collect(), -b)
    }

    /// Adds `a.x = b`.
    pub fn eq(&mut self, a: Vec<Rational>, b: Rational) -> &mut Self {
        self.le(a.clone(), b.clone());
        self.ge(a, b)
    }

    pub fn set_objective(&mut self, objective: Vec<Rational>) {
        assert_eq!(objective.len(), self.num_vars());
        self.objective = objective;
    }

    pub fn maximize(&self) -> LpOutcome {
        Tableau::build(self).solve(&self.objective)
    }
}

/// Tableau over the columns `[original vars | slacks | artificials | rhs]`.
struct Tableau {
    m: usize,
    n_orig: usize,
    n_cols: usize,
    artificial: Vec<usize>,
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let m = lp.rows.len();
        let n_orig = lp.num_vars();
        let needs_art: Vec<bool> = lp.rows.iter().map(|(_, b)| b.is_negative()).collect();
        let n_art = needs_art.iter().filter(|&&x| x).count();
        let n_cols = n_orig + m + n_art;
        let mut t = vec![vec![Rational::zero(); n_cols + 1]; m];
        let mut basis = vec![0; m];
        let mut artificial = Vec::new();
        let mut next_art = n_orig + m;
        for (i, (a, b)) in lp.rows.iter().enumerate() {
            // rows with negative rhs are negated so the rhs is nonnegative
            let flip = needs_art[i];
            let s = if flip { -Rational::one() } else { Rational::one() };
            for j in 0..n_orig {
                t[i][j] = &a[j] * &s;
            }
            t[i][n_orig + i] = s.clone();
            t[i][n_cols] = b * &s;
            if flip {
                t[i][next_art] = Rational::one();
                basis[i] = next_art;
                artificial.push(next_art);
                next_art += 1;
            } else {
                basis[i] = n_orig + i;
            }
        }
        Self {
            m,
            n_orig,
            n_cols,
            artificial,
            t,
            basis,
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.t[row][col].recip();
        for v in self.t[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.t[row].clone();
        for r in 0..self.m {
            if r == row || self.t[r][col].is_zero() {
                continue;
            }
            let f = self.t[r][col].clone();
            for (v, p) in self.t[r].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations maximizing `cost` over the allowed columns.
    /// Returns `false` if unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            // reduced cost of column j: cost_j - sum_i cost_{basis_i} t[i][j]
            let entering = (0..self.n_cols).filter(|&j| allowed(j)).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut rc = cost[j].clone();
                for i in 0..self.m {
                    if !self.t[i][j].is_zero() {
                        rc -= &cost[self.basis[i]] * &self.t[i][j];
                    }
                }
                rc.is_positive()
            });
            let Some(col) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.m {
                let a = &self.t[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.t[i][self.n_cols] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((row, _)) = best else {
                return false;
            };
            self.pivot(row, col);
        }
    }

    fn solve(mut self, objective: &[Rational]) -> LpOutcome {
        if !self.artificial.is_empty() {
            let mut phase1 = vec![Rational::zero(); self.n_cols];
            for &a in &self.artificial {
                phase1[a] = -Rational::one();
            }
            self.optimize(&phase1, &|_| true);
            let infeasible =
                (0..self.m).any(|i| self.artificial.contains(&self.basis[i]) && !self.t[i][self.n_cols].is_zero());
            if infeasible {
                return LpOutcome::Infeasible;
            }
            // drive zero-level artificials out of the basis where possible
            for i in 0..self.m {
                if self.artificial.contains(&self.basis[i]) {
                    if let Some(col) = (0..self.n_orig + self.m).find(|&j| !self.t[i][j].is_zero()) {
                        self.pivot(i, col);
                    }
                }
            }
        }
        let mut cost = vec![Rational::zero(); self.n_cols];
        cost[..self.n_orig].clone_from_slice(objective);
        let limit = self.n_orig + self.m;
        if !self.optimize(&cost, &|j| j < limit) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); self.n_orig];
        for i in 0..self.m {
            if self.basis[i] < self.n_orig {
                x[self.basis[i]] = self.t[i][self.n_cols].clone();
            }
        }
        let value = x
            .iter()
            .zip(objective)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b);
        LpOutcome::Optimal { x, value }
    }
}
