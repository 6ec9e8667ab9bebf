//! Dense two-phase simplex, generic over the scalar type.
//!
//! Pivoting follows Bland's rule throughout: the entering column is the
//! lowest-index column with a negative reduced cost, and ratio-test ties are
//! broken toward the smallest basic variable index. This rules out cycling
//! and makes every run deterministic. Problem sizes here are small, so the
//! tableau is kept dense and values are cloned freely.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Div, Neg, Sub};

use num_traits::{One, Zero};

use super::{LpProblem, LpSolution, VarBound};
use crate::rational::Rational;

pub(crate) trait Scalar:
    Clone + Debug + PartialOrd + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Div<Output = Self>
{
    /// Sign as seen by pivoting decisions. The floating backend treats
    /// magnitudes within the tolerance as zero; the exact backend ignores
    /// the tolerance entirely.
    fn signum_within(&self, tol: &Self) -> Ordering;
}

impl Scalar for Rational {
    fn signum_within(&self, _tol: &Self) -> Ordering {
        self.cmp(&Rational::zero())
    }
}

impl Scalar for f64 {
    fn signum_within(&self, tol: &Self) -> Ordering {
        if self.abs() <= *tol {
            Ordering::Equal
        } else if *self > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

pub(crate) enum Outcome<T> {
    Optimal { value: T, point: Vec<T> },
    Infeasible,
    Unbounded,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    width: usize,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, row: usize, col: usize, _tol: &T) {
        let p = self.rows[row][col].clone();
        for v in &mut self.rows[row] {
            if !v.is_zero() {
                *v = v.clone() / p.clone();
            }
        }
        self.rhs[row] = self.rhs[row].clone() / p;
        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let f = self.rows[i][col].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..self.width {
                if self.rows[row][j].is_zero() {
                    continue;
                }
                self.rows[i][j] =
                    self.rows[i][j].clone() - f.clone() * self.rows[row][j].clone();
            }
            self.rhs[i] = self.rhs[i].clone() - f * self.rhs[row].clone();
            self.rows[i][col] = T::zero();
        }
        self.basis[row] = col;
    }

    fn drop_row(&mut self, row: usize) {
        self.rows.remove(row);
        self.rhs.remove(row);
        self.basis.remove(row);
    }
}

enum RunResult {
    Optimal,
    Unbounded,
}

/// Pivots until optimality or an unbounded ray, considering the first
/// `allowed` columns as candidates for entering the basis.
fn run<T: Scalar>(tab: &mut Tableau<T>, cost: &[T], allowed: usize, tol: &T) -> RunResult {
    loop {
        let m = tab.rows.len();
        let mut is_basic = vec![false; tab.width];
        for &b in &tab.basis {
            is_basic[b] = true;
        }
        let mut entering = None;
        for j in 0..allowed {
            if is_basic[j] {
                continue;
            }
            let mut reduced = cost[j].clone();
            for i in 0..m {
                let cb = &cost[tab.basis[i]];
                if cb.is_zero() || tab.rows[i][j].is_zero() {
                    continue;
                }
                reduced = reduced - cb.clone() * tab.rows[i][j].clone();
            }
            if reduced.signum_within(tol) == Ordering::Less {
                entering = Some(j);
                break;
            }
        }
        let Some(enter) = entering else {
            return RunResult::Optimal;
        };
        let mut leave: Option<(T, usize, usize)> = None;
        for i in 0..m {
            if tab.rows[i][enter].signum_within(tol) != Ordering::Greater {
                continue;
            }
            let ratio = tab.rhs[i].clone() / tab.rows[i][enter].clone();
            let better = match &leave {
                None => true,
                Some((best, bvar, _)) => {
                    match (ratio.clone() - best.clone()).signum_within(tol) {
                        Ordering::Less => true,
                        Ordering::Equal => tab.basis[i] < *bvar,
                        Ordering::Greater => false,
                    }
                }
            };
            if better {
                leave = Some((ratio, tab.basis[i], i));
            }
        }
        let Some((_, _, row)) = leave else {
            return RunResult::Unbounded;
        };
        tab.pivot(row, enter, tol);
    }
}

/// Solves a problem given as expanded coefficient lists. `bounds` marks free
/// variables, which are split into positive and negative parts internally.
pub(crate) fn solve_generic<T: Scalar>(
    objective: &[T],
    le_rows: &[(Vec<T>, T)],
    eq_rows: &[(Vec<T>, T)],
    bounds: &[VarBound],
    tol: &T,
) -> Outcome<T> {
    let n = objective.len();
    let mut minus_col: Vec<Option<usize>> = vec![None; n];
    let mut ncols = n;
    for j in 0..n {
        if bounds[j] == VarBound::Free {
            minus_col[j] = Some(ncols);
            ncols += 1;
        }
    }
    let slack_start = ncols;
    ncols += le_rows.len();

    let m = le_rows.len() + eq_rows.len();
    let art_start = ncols;
    let width = ncols + m;

    let mut rows: Vec<Vec<T>> = vec![vec![T::zero(); width]; m];
    let mut rhs: Vec<T> = Vec::with_capacity(m);
    for (r, (coeffs, b)) in le_rows.iter().chain(eq_rows.iter()).enumerate() {
        for j in 0..n {
            rows[r][j] = coeffs[j].clone();
            if let Some(mc) = minus_col[j] {
                rows[r][mc] = -coeffs[j].clone();
            }
        }
        if r < le_rows.len() {
            rows[r][slack_start + r] = T::one();
        }
        rhs.push(b.clone());
    }
    // normalize right-hand sides so the artificial basis starts feasible
    for r in 0..m {
        match rhs[r].signum_within(tol) {
            Ordering::Less => {
                for v in &mut rows[r] {
                    if !v.is_zero() {
                        *v = -v.clone();
                    }
                }
                rhs[r] = -rhs[r].clone();
            }
            Ordering::Equal => rhs[r] = T::zero(),
            Ordering::Greater => {}
        }
    }
    for (r, row) in rows.iter_mut().enumerate() {
        row[art_start + r] = T::one();
    }

    let mut tab = Tableau {
        rows,
        rhs,
        basis: (art_start..width).collect(),
        width,
    };

    // phase 1: minimize the sum of artificials
    let mut phase1_cost = vec![T::zero(); width];
    for c in &mut phase1_cost[art_start..] {
        *c = T::one();
    }
    match run(&mut tab, &phase1_cost, width, tol) {
        RunResult::Optimal => {}
        RunResult::Unbounded => {
            debug_assert!(false, "phase-1 objective is bounded below");
            return Outcome::Infeasible;
        }
    }
    let mut residual = T::zero();
    for i in 0..tab.rows.len() {
        if tab.basis[i] >= art_start {
            residual = residual + tab.rhs[i].clone();
        }
    }
    if residual.signum_within(tol) == Ordering::Greater {
        return Outcome::Infeasible;
    }

    // drive leftover artificials out of the basis; rows with no structural
    // entry are redundant and dropped
    let mut r = 0;
    while r < tab.rows.len() {
        if tab.basis[r] >= art_start {
            let pivot_col = (0..art_start)
                .find(|&j| tab.rows[r][j].signum_within(tol) != Ordering::Equal);
            match pivot_col {
                Some(j) => {
                    tab.pivot(r, j, tol);
                    r += 1;
                }
                None => tab.drop_row(r),
            }
        } else {
            r += 1;
        }
    }

    // phase 2 over structural and slack columns only
    let mut phase2_cost = vec![T::zero(); width];
    for j in 0..n {
        phase2_cost[j] = objective[j].clone();
        if let Some(mc) = minus_col[j] {
            phase2_cost[mc] = -objective[j].clone();
        }
    }
    match run(&mut tab, &phase2_cost, art_start, tol) {
        RunResult::Optimal => {}
        RunResult::Unbounded => return Outcome::Unbounded,
    }

    let mut expanded = vec![T::zero(); art_start];
    for (i, &b) in tab.basis.iter().enumerate() {
        debug_assert!(b < art_start);
        expanded[b] = tab.rhs[i].clone();
    }
    let mut point = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = expanded[j].clone();
        if let Some(mc) = minus_col[j] {
            v = v - expanded[mc].clone();
        }
        point.push(v);
    }
    let mut value = T::zero();
    for j in 0..n {
        if objective[j].is_zero() || point[j].is_zero() {
            continue;
        }
        value = value + objective[j].clone() * point[j].clone();
    }
    Outcome::Optimal { value, point }
}

/// Exact entry point used by the engine.
pub(crate) fn solve_rational(problem: &LpProblem) -> LpSolution {
    let zero = Rational::zero();
    let outcome = solve_generic(
        &problem.objective,
        &problem.le_rows,
        &problem.eq_rows,
        &problem.bounds,
        &zero,
    );
    match outcome {
        Outcome::Optimal { value, point } => {
            #[cfg(debug_assertions)]
            verify_exact(problem, &value, &point);
            LpSolution::Optimal { value, point }
        }
        Outcome::Infeasible => LpSolution::Infeasible,
        Outcome::Unbounded => LpSolution::Unbounded,
    }
}

#[cfg(debug_assertions)]
fn verify_exact(problem: &LpProblem, value: &Rational, point: &[Rational]) {
    let dot = |coeffs: &[Rational]| -> Rational {
        coeffs
            .iter()
            .zip(point)
            .map(|(c, x)| c * x)
            .fold(Rational::zero(), |a, b| a + b)
    };
    for (j, bound) in problem.bounds.iter().enumerate() {
        if *bound == VarBound::NonNegative {
            debug_assert!(point[j] >= Rational::zero(), "negative coordinate {j}");
        }
    }
    for (coeffs, rhs) in &problem.le_rows {
        debug_assert!(dot(coeffs) <= *rhs, "violated inequality row");
    }
    for (coeffs, rhs) in &problem.eq_rows {
        debug_assert!(dot(coeffs) == *rhs, "violated equality row");
    }
    debug_assert!(dot(&problem.objective) == *value, "value does not match point");
}
