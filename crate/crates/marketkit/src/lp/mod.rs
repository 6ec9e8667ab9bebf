//! Exact linear programming.
//!
//! Minimization problems are stated as `min c·x` over `A·x ≤ b`, `E·x = d`
//! with every variable bounded below by zero unless explicitly marked free.
//! The solver is a dense two-phase simplex pivoting under Bland's rule, which
//! makes it deterministic and immune to cycling: identical inputs yield
//! identical outputs, and in exact mode the reported point satisfies every
//! constraint with equality-checked big-rational arithmetic.
//!
//! The engine also offers a floating mode for exploratory runs. It executes
//! the same pivoting over `f64` and consults a single global tolerance
//! (default `1e-9`) for status decisions only; exact mode remains the
//! arbiter of every reported result.

mod simplex;

use crate::rational::Rational;
use num_traits::ToPrimitive;
use thiserror::Error;

/// Lower-bound kind for one variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarBound {
    /// `x ≥ 0` (the default).
    NonNegative,
    /// Unrestricted sign.
    Free,
}

/// A linear program in minimization form.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    objective: Vec<Rational>,
    le_rows: Vec<(Vec<Rational>, Rational)>,
    eq_rows: Vec<(Vec<Rational>, Rational)>,
    bounds: Vec<VarBound>,
}

impl LpProblem {
    /// Starts a problem minimizing `objective · x`.
    pub fn minimize(objective: Vec<Rational>) -> Self {
        let bounds = vec![VarBound::NonNegative; objective.len()];
        LpProblem {
            objective,
            le_rows: Vec::new(),
            eq_rows: Vec::new(),
            bounds,
        }
    }

    /// Adds an inequality row `coeffs · x ≤ rhs`.
    pub fn add_le(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.le_rows.push((coeffs, rhs));
        self
    }

    /// Adds an equality row `coeffs · x = rhs`.
    pub fn add_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.eq_rows.push((coeffs, rhs));
        self
    }

    /// Drops the nonnegativity floor of variable `var`.
    pub fn mark_free(&mut self, var: usize) -> &mut Self {
        if var < self.bounds.len() {
            self.bounds[var] = VarBound::Free;
        }
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.objective.len();
        if n == 0 {
            return Err(LpError::MalformedProblem(
                "problem must have at least one variable".into(),
            ));
        }
        for (row, _) in self.le_rows.iter().chain(self.eq_rows.iter()) {
            if row.len() != n {
                return Err(LpError::MalformedProblem(format!(
                    "row width {} does not match objective width {n}",
                    row.len()
                )));
            }
        }
        debug_assert_eq!(self.bounds.len(), n);
        Ok(())
    }
}

/// Solver output. `Optimal` carries the exact objective value and a point
/// attaining it; `Infeasible` and `Unbounded` are certified by the simplex
/// termination state.
#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpSolution::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpSolution::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        matches!(self, LpSolution::Optimal { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("malformed problem: {0}")]
    MalformedProblem(String),
    #[error("value not representable in floating mode")]
    NonFinite,
}

/// Arithmetic backend selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArithmeticMode {
    /// Big-rational arithmetic; no tolerance consulted anywhere.
    Exact,
    /// `f64` arithmetic; `tolerance` decides all sign/status questions.
    Float { tolerance: f64 },
}

/// Handle binding the simplex to an arithmetic mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpEngine {
    mode: ArithmeticMode,
}

impl Default for LpEngine {
    fn default() -> Self {
        LpEngine::exact()
    }
}

impl LpEngine {
    pub const DEFAULT_TOLERANCE: f64 = 1e-9;

    pub fn exact() -> Self {
        LpEngine {
            mode: ArithmeticMode::Exact,
        }
    }

    pub fn float() -> Self {
        Self::with_tolerance(Self::DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(tolerance: f64) -> Self {
        LpEngine {
            mode: ArithmeticMode::Float { tolerance },
        }
    }

    pub fn mode(&self) -> ArithmeticMode {
        self.mode
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.mode, ArithmeticMode::Exact)
    }

    /// Solves `problem` as stated (minimization).
    pub fn solve(&self, problem: &LpProblem) -> Result<LpSolution, LpError> {
        problem.validate()?;
        match self.mode {
            ArithmeticMode::Exact => Ok(simplex::solve_rational(problem)),
            ArithmeticMode::Float { tolerance } => solve_float(problem, tolerance),
        }
    }

    /// Maximizes the stated objective; the reported value is the maximum.
    pub fn maximize(&self, problem: &LpProblem) -> Result<LpSolution, LpError> {
        let mut negated = problem.clone();
        for c in &mut negated.objective {
            *c = -c.clone();
        }
        Ok(match self.solve(&negated)? {
            LpSolution::Optimal { value, point } => LpSolution::Optimal {
                value: -value,
                point,
            },
            other => other,
        })
    }
}

fn to_f64(value: &Rational) -> Result<f64, LpError> {
    match value.to_f64() {
        Some(v) if v.is_finite() => Ok(v),
        _ => Err(LpError::NonFinite),
    }
}

fn from_f64(value: f64) -> Result<Rational, LpError> {
    Rational::from_float(value).ok_or(LpError::NonFinite)
}

fn solve_float(problem: &LpProblem, tolerance: f64) -> Result<LpSolution, LpError> {
    let objective = problem
        .objective
        .iter()
        .map(to_f64)
        .collect::<Result<Vec<_>, _>>()?;
    let conv_rows = |rows: &[(Vec<Rational>, Rational)]| -> Result<Vec<(Vec<f64>, f64)>, LpError> {
        rows.iter()
            .map(|(coeffs, rhs)| {
                let coeffs = coeffs.iter().map(to_f64).collect::<Result<Vec<_>, _>>()?;
                Ok((coeffs, to_f64(rhs)?))
            })
            .collect()
    };
    let outcome = simplex::solve_generic(
        &objective,
        &conv_rows(&problem.le_rows)?,
        &conv_rows(&problem.eq_rows)?,
        &problem.bounds,
        &tolerance,
    );
    Ok(match outcome {
        simplex::Outcome::Optimal { value, point } => LpSolution::Optimal {
            value: from_f64(value)?,
            point: point
                .into_iter()
                .map(from_f64)
                .collect::<Result<Vec<_>, _>>()?,
        },
        simplex::Outcome::Infeasible => LpSolution::Infeasible,
        simplex::Outcome::Unbounded => LpSolution::Unbounded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn solve(p: &LpProblem) -> LpSolution {
        LpEngine::exact().solve(p).unwrap()
    }

    #[test]
    fn nonnegativity_floor() {
        // minimize x subject to x >= 0
        let p = LpProblem::minimize(vec![int(1)]);
        assert_eq!(
            solve(&p),
            LpSolution::Optimal {
                value: int(0),
                point: vec![int(0)],
            }
        );
    }

    #[test]
    fn empty_feasible_set() {
        // minimize 0 subject to x <= -1, x >= 0
        let mut p = LpProblem::minimize(vec![int(0)]);
        p.add_le(vec![int(1)], int(-1));
        assert_eq!(solve(&p), LpSolution::Infeasible);
    }

    #[test]
    fn simplex_segment_minimum() {
        // minimize -(2 m1 + m2) s.t. m1 + m2 = 1, 2 m1 + m2 <= 6/5, m >= 0
        let mut p = LpProblem::minimize(vec![int(-2), int(-1)]);
        p.add_eq(vec![int(1), int(1)], int(1));
        p.add_le(vec![int(2), int(1)], ratio(6, 5));
        let sol = solve(&p);
        assert_eq!(
            sol,
            LpSolution::Optimal {
                value: ratio(-6, 5),
                point: vec![ratio(1, 5), ratio(4, 5)],
            }
        );
    }

    #[test]
    fn maximize_reports_maximum() {
        // maximize m1 over the simplex
        let mut p = LpProblem::minimize(vec![int(1), int(0)]);
        p.add_eq(vec![int(1), int(1)], int(1));
        let sol = LpEngine::exact().maximize(&p).unwrap();
        assert_eq!(sol.value(), Some(&int(1)));

        // maximize 2 m1 + m2 under the same cap as above
        let mut p = LpProblem::minimize(vec![int(2), int(1)]);
        p.add_eq(vec![int(1), int(1)], int(1));
        p.add_le(vec![int(2), int(1)], ratio(6, 5));
        let sol = LpEngine::exact().maximize(&p).unwrap();
        assert_eq!(sol.value(), Some(&ratio(6, 5)));

        // maximize m1 over {m1 + m2 = 1, 2 m1 + m2 <= 1}: forced to 0
        let mut p = LpProblem::minimize(vec![int(1), int(0)]);
        p.add_eq(vec![int(1), int(1)], int(1));
        p.add_le(vec![int(2), int(1)], int(1));
        let sol = LpEngine::exact().maximize(&p).unwrap();
        assert_eq!(sol.value(), Some(&int(0)));
    }

    #[test]
    fn unbounded_below_detected() {
        let mut p = LpProblem::minimize(vec![int(-1)]);
        p.mark_free(0);
        assert_eq!(solve(&p), LpSolution::Unbounded);

        // and without constraints on a nonnegative variable
        let p = LpProblem::minimize(vec![int(-1)]);
        assert_eq!(solve(&p), LpSolution::Unbounded);
    }

    #[test]
    fn free_variable_reaches_negative_optimum() {
        // minimize t s.t. t >= -3 (as -t <= 3), t free
        let mut p = LpProblem::minimize(vec![int(1)]);
        p.add_le(vec![int(-1)], int(3));
        p.mark_free(0);
        let sol = solve(&p);
        assert_eq!(
            sol,
            LpSolution::Optimal {
                value: int(-3),
                point: vec![int(-3)],
            }
        );
    }

    #[test]
    fn malformed_rows_rejected() {
        let mut p = LpProblem::minimize(vec![int(1), int(2)]);
        p.add_le(vec![int(1)], int(0));
        assert!(matches!(
            LpEngine::exact().solve(&p),
            Err(LpError::MalformedProblem(_))
        ));
        let empty = LpProblem::minimize(vec![]);
        assert!(LpEngine::exact().solve(&empty).is_err());
    }

    #[test]
    fn float_mode_matches_exact_statuses() {
        let mut p = LpProblem::minimize(vec![int(-2), int(-1)]);
        p.add_eq(vec![int(1), int(1)], int(1));
        p.add_le(vec![int(2), int(1)], ratio(6, 5));
        let sol = LpEngine::float().solve(&p).unwrap();
        let value = sol.value().unwrap().to_f64().unwrap();
        assert!((value - (-1.2)).abs() < 1e-9);

        let mut q = LpProblem::minimize(vec![int(0)]);
        q.add_le(vec![int(1)], int(-1));
        assert_eq!(LpEngine::float().solve(&q).unwrap(), LpSolution::Infeasible);
    }

    #[test]
    fn row_permutation_preserves_value() {
        let rows: Vec<(Vec<Rational>, Rational)> = vec![
            (vec![int(2), int(1), int(0)], int(4)),
            (vec![int(1), int(3), int(1)], int(6)),
            (vec![int(0), int(1), int(2)], int(5)),
            (vec![int(1), int(1), int(1)], int(3)),
        ];
        let mut base = LpProblem::minimize(vec![int(-1), int(-2), int(-1)]);
        for (coeffs, rhs) in &rows {
            base.add_le(coeffs.clone(), rhs.clone());
        }
        let reference = solve(&base).value().cloned().unwrap();
        // reversed and rotated row orders
        let orders: Vec<Vec<usize>> = vec![vec![3, 2, 1, 0], vec![1, 2, 3, 0], vec![2, 0, 3, 1]];
        for order in orders {
            let mut p = LpProblem::minimize(vec![int(-1), int(-2), int(-1)]);
            for &i in &order {
                p.add_le(rows[i].0.clone(), rows[i].1.clone());
            }
            assert_eq!(solve(&p).value(), Some(&reference));
        }
    }

    #[test]
    fn degenerate_problem_terminates() {
        // redundant constraints meeting at one vertex; Bland's rule must not cycle
        let mut p = LpProblem::minimize(vec![int(-1), int(-1)]);
        p.add_le(vec![int(1), int(0)], int(0));
        p.add_le(vec![int(0), int(1)], int(0));
        p.add_le(vec![int(1), int(1)], int(0));
        p.add_le(vec![int(2), int(1)], int(0));
        let sol = solve(&p);
        assert_eq!(sol.value(), Some(&int(0)));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Constructed primal/dual feasible pairs sandwich the reported
        /// optimum, and solving the explicit dual reproduces it exactly.
        #[test]
        fn weak_and_strong_duality_exact(
            a in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 3), 2),
            xstar in proptest::collection::vec(0i64..=3, 3),
            ystar in proptest::collection::vec(0i64..=3, 2),
            cslack in proptest::collection::vec(0i64..=3, 3),
            bslack in proptest::collection::vec(0i64..=3, 2),
        ) {
            // Primal: min c.x s.t. A x <= b, x >= 0 with
            // c = -A^T y* + e >= dual-feasible slack, b = A x* + s.
            let m = a.len();
            let n = a[0].len();
            let mut c = vec![Rational::from_integer(0.into()); n];
            for j in 0..n {
                let mut acc = int(cslack[j]);
                for i in 0..m {
                    acc -= int(a[i][j] * ystar[i]);
                }
                c[j] = acc;
            }
            let mut b = vec![Rational::from_integer(0.into()); m];
            for i in 0..m {
                let mut acc = int(bslack[i]);
                for j in 0..n {
                    acc += int(a[i][j] * xstar[j]);
                }
                b[i] = acc;
            }
            let mut primal = LpProblem::minimize(c.clone());
            for i in 0..m {
                primal.add_le(a[i].iter().map(|&v| int(v)).collect(), b[i].clone());
            }
            let primal_sol = solve(&primal);
            let LpSolution::Optimal { value, point } = primal_sol else {
                panic!("constructed problem must be solvable, got {primal_sol:?}");
            };
            // primal feasibility of x* bounds the optimum from above
            let mut cx_star = int(0);
            for j in 0..n {
                cx_star += &c[j] * int(xstar[j]);
            }
            prop_assert!(value <= cx_star);
            // dual feasibility of y* bounds it from below: value >= -b.y*
            let mut by_star = int(0);
            for i in 0..m {
                by_star += &b[i] * int(ystar[i]);
            }
            prop_assert!(value >= -by_star.clone());
            // the reported point is feasible and attains the value
            let mut cx = int(0);
            for j in 0..n {
                prop_assert!(point[j] >= int(0));
                cx += &c[j] * &point[j];
            }
            prop_assert_eq!(&cx, &value);
            for i in 0..m {
                let mut row = int(0);
                for j in 0..n {
                    row += int(a[i][j]) * &point[j];
                }
                prop_assert!(row <= b[i]);
            }
            // strong duality: max -b.y s.t. -A^T y <= c, y >= 0
            let mut dual = LpProblem::minimize(b.clone());
            for j in 0..n {
                dual.add_le((0..m).map(|i| int(-a[i][j])).collect(), c[j].clone());
            }
            let dual_sol = solve(&dual);
            let LpSolution::Optimal { value: dual_value, .. } = dual_sol else {
                panic!("dual of a solvable problem must be solvable, got {dual_sol:?}");
            };
            prop_assert_eq!(value, -dual_value);
        }

        /// Exact mode: optimal points satisfy added equality rows exactly.
        #[test]
        fn equality_rows_hold_exactly(
            coeffs in proptest::collection::vec(small_rational(), 3),
            target in small_rational(),
        ) {
            let mut p = LpProblem::minimize(vec![int(1), int(1), int(1)]);
            p.add_eq(coeffs.clone(), target.clone());
            match solve(&p) {
                LpSolution::Optimal { point, .. } => {
                    let mut acc = int(0);
                    for (c, x) in coeffs.iter().zip(&point) {
                        acc += c * x;
                    }
                    prop_assert_eq!(acc, target);
                }
                LpSolution::Infeasible => {
                    // possible when all coefficients have the wrong sign
                }
                LpSolution::Unbounded => prop_assert!(false, "bounded objective"),
            }
        }
    }
}
