//! Pricing measures: the polytope, attainment duality, verdicts and
//! certificates.
//!
//! A pricing measure is a probability on the states that vanishes on the
//! negligible core and integrates every generator to at most its ask. The
//! generator rows suffice to dominate the whole traded set: integrals are
//! linear and the ask-price functional is the cheapest-representation
//! envelope, so `∫X dm ≤ price(X)` for every traded claim follows from the
//! generator constraints together with `Σm = 1`. Imposing `m(core) = 0`
//! explicitly is what makes every pricing measure monotone for the common
//! order (dominated claims have dominated integrals); see the crate docs
//! for the one open reading of this constraint.
//!
//! The central cross-check of the module is exact attainment: for every
//! claim representable after a cash shift, the maximum of `∫X dm` over the
//! polytope equals the cash-additive part of the price, with zero gap in
//! rational arithmetic.
//!
//! No-pure-bubble reduces to indicators here: every strictly positive claim
//! dominates `ε·1ω` for some non-negligible `ω` after truncation, so the
//! condition `sup_m ∫(f∧1) dm > 0` for all `f >* 0` holds exactly when each
//! off-core atom can carry positive mass. That single verdict is also the
//! no-free-lunch verdict and the cash-additive completability verdict, and
//! on a finite space it collapses further: finitely many atoms mix into one
//! strictly positive measure, so a competitive (linear) completion exists
//! exactly when the verdict holds.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lp::{LpEngine, LpError, LpProblem, LpSolution};
use crate::market::{Market, MarketError};
use crate::order::{Claim, CommonOrder, OrderError};
use crate::rational::Rational;

/// The feasible set of pricing measures, kept as its constraint system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PricingPolytope {
    order: CommonOrder,
    payoffs: Vec<Claim>,
    asks: Vec<Rational>,
}

/// Certificate produced by measure searches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeasureCertificate {
    /// Some pricing measure; no positivity promise.
    Pricing { measure: Vec<Rational> },
    /// A pricing measure with `measure[ω] ≥ floor > 0` on every off-core
    /// state.
    StrictlyPositive {
        measure: Vec<Rational>,
        floor: Rational,
    },
    /// No strictly positive pricing measure exists.
    Empty,
}

impl MeasureCertificate {
    pub fn measure(&self) -> Option<&[Rational]> {
        match self {
            MeasureCertificate::Pricing { measure } => Some(measure),
            MeasureCertificate::StrictlyPositive { measure, .. } => Some(measure),
            MeasureCertificate::Empty => None,
        }
    }

    pub fn is_strictly_positive(&self) -> bool {
        matches!(self, MeasureCertificate::StrictlyPositive { .. })
    }
}

/// Largest feasible mass of one off-core atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomSupport {
    pub state: String,
    pub max_mass: Rational,
}

/// Per-atom support profile together with the no-pure-bubble verdict. The
/// verdict doubles as the no-free-lunch verdict and decides whether the
/// market admits a cash-additive completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NpbReport {
    pub profile: Vec<AtomSupport>,
    pub holds: bool,
}

/// One probed claim of the call-overwriting extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedClaimWitness {
    pub claim: Claim,
    /// `sup_m ∫ (claim ∧ 1) dm` over the polytope.
    pub truncated_support: Rational,
    pub positive: bool,
}

/// Verdicts for the call-overwriting extension: `extendable` asks for a
/// positive truncated support claim by claim; `single_measure` asks for one
/// pricing measure positive on all probes at once. On a finite probe set
/// the two agree by convex mixing; both are reported with witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedExtensionReport {
    pub extendable: bool,
    pub single_measure: bool,
    pub witnesses: Vec<RestrictedClaimWitness>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasuresError {
    #[error("the pricing polytope is empty")]
    EmptyPolytope,
    #[error("inconsistent market: a validated market cannot yield an empty polytope")]
    InconsistentMarket,
    #[error("zero fundamental value: the claim is positively priced but integrates to zero")]
    ZeroFundamentalValue,
    #[error("certificate carries no measure")]
    NoMeasure,
    #[error(transparent)]
    Market(#[from] MarketError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

impl PricingPolytope {
    /// Builds the constraint system and certifies nonemptiness. An empty
    /// polytope on a validated market signals an inconsistency (a price
    /// system that slipped validation), reported as a hard error.
    pub fn build(engine: &LpEngine, market: &Market) -> Result<Self, MeasuresError> {
        let polytope = PricingPolytope {
            order: market.order().clone(),
            payoffs: market.assets().iter().map(|a| a.payoff().clone()).collect(),
            asks: market.assets().iter().map(|a| a.ask().clone()).collect(),
        };
        match engine.solve(&polytope.problem(vec![Rational::zero(); polytope.dim()]))? {
            LpSolution::Optimal { .. } => Ok(polytope),
            LpSolution::Infeasible => Err(MeasuresError::InconsistentMarket),
            LpSolution::Unbounded => unreachable!("zero objective cannot be unbounded"),
        }
    }

    pub fn order(&self) -> &CommonOrder {
        &self.order
    }

    pub fn dim(&self) -> usize {
        self.order.space().size()
    }

    /// Base program over measures `m`: `m ≥ 0`, `Σ m = 1`, `m = 0` on the
    /// core, `∫payoffᵢ dm ≤ askᵢ`, minimizing `objective · m`.
    fn problem(&self, objective: Vec<Rational>) -> LpProblem {
        let n = self.dim();
        let mut problem = LpProblem::minimize(objective);
        problem.add_eq(vec![Rational::one(); n], Rational::one());
        for state in 0..n {
            if self.order.is_negligible_state(state) {
                let mut row = vec![Rational::zero(); n];
                row[state] = Rational::one();
                problem.add_eq(row, Rational::zero());
            }
        }
        for (payoff, ask) in self.payoffs.iter().zip(&self.asks) {
            problem.add_le(payoff.values().to_vec(), ask.clone());
        }
        problem
    }

    fn check_dim(&self, claim: &Claim) -> Result<(), MeasuresError> {
        if claim.len() != self.dim() {
            return Err(MeasuresError::Order(OrderError::DimensionMismatch {
                expected: self.dim(),
                found: claim.len(),
            }));
        }
        Ok(())
    }

    fn maximize(&self, engine: &LpEngine, objective: Vec<Rational>) -> Result<(Rational, Vec<Rational>), MeasuresError> {
        match engine.maximize(&self.problem(objective))? {
            LpSolution::Optimal { value, point } => Ok((value, point)),
            LpSolution::Infeasible => Err(MeasuresError::EmptyPolytope),
            LpSolution::Unbounded => unreachable!("measures live in the unit simplex"),
        }
    }

    /// `sup_m ∫X dm`. Attains the cash-additive part of the ask price for
    /// every claim that is representable after a cash shift.
    pub fn attainment_value(&self, engine: &LpEngine, claim: &Claim) -> Result<Rational, MeasuresError> {
        self.check_dim(claim)?;
        Ok(self.maximize(engine, claim.values().to_vec())?.0)
    }

    /// Range of fundamental values `(min, max)` of `∫X dm` over the
    /// polytope.
    pub fn fundamental_value_bounds(
        &self,
        engine: &LpEngine,
        claim: &Claim,
    ) -> Result<(Rational, Rational), MeasuresError> {
        self.check_dim(claim)?;
        let max = self.maximize(engine, claim.values().to_vec())?.0;
        let min = match engine.solve(&self.problem(claim.values().to_vec()))? {
            LpSolution::Optimal { value, .. } => value,
            LpSolution::Infeasible => return Err(MeasuresError::EmptyPolytope),
            LpSolution::Unbounded => unreachable!("measures live in the unit simplex"),
        };
        Ok((min, max))
    }

    /// Any pricing measure, as a certificate of nonemptiness.
    pub fn feasible_measure(&self, engine: &LpEngine) -> Result<MeasureCertificate, MeasuresError> {
        match engine.solve(&self.problem(vec![Rational::zero(); self.dim()]))? {
            LpSolution::Optimal { point, .. } => Ok(MeasureCertificate::Pricing { measure: point }),
            LpSolution::Infeasible => Err(MeasuresError::EmptyPolytope),
            LpSolution::Unbounded => unreachable!("zero objective cannot be unbounded"),
        }
    }

    /// Per-atom support profile and the no-pure-bubble verdict: the maximal
    /// mass of every off-core atom must be positive. Indicators are
    /// exhaustive on a finite space, so this decides the condition for all
    /// strictly positive claims.
    pub fn npb_check(&self, engine: &LpEngine) -> Result<NpbReport, MeasuresError> {
        let mut profile = Vec::new();
        let mut holds = true;
        for state in self.order.off_core() {
            let mut objective = vec![Rational::zero(); self.dim()];
            objective[state] = Rational::one();
            let (max_mass, _) = self.maximize(engine, objective)?;
            holds &= max_mass.is_positive();
            profile.push(AtomSupport {
                state: self.order.space().label(state).to_string(),
                max_mass,
            });
        }
        Ok(NpbReport { profile, holds })
    }

    /// Searches for a measure with a uniform positive floor on off-core
    /// atoms by maximizing the floor. A positive optimum certifies a
    /// strictly positive pricing measure; zero certifies there is none.
    pub fn strictly_positive_measure(
        &self,
        engine: &LpEngine,
    ) -> Result<MeasureCertificate, MeasuresError> {
        let n = self.dim();
        // variables: m_1..m_n, floor
        let mut objective = vec![Rational::zero(); n];
        objective.push(-Rational::one());
        let mut problem = LpProblem::minimize(objective);
        problem.add_eq(
            {
                let mut row = vec![Rational::one(); n];
                row.push(Rational::zero());
                row
            },
            Rational::one(),
        );
        for state in 0..n {
            if self.order.is_negligible_state(state) {
                let mut row = vec![Rational::zero(); n + 1];
                row[state] = Rational::one();
                problem.add_eq(row, Rational::zero());
            } else {
                // floor - m_state <= 0
                let mut row = vec![Rational::zero(); n + 1];
                row[state] = -Rational::one();
                row[n] = Rational::one();
                problem.add_le(row, Rational::zero());
            }
        }
        for (payoff, ask) in self.payoffs.iter().zip(&self.asks) {
            let mut row = payoff.values().to_vec();
            row.push(Rational::zero());
            problem.add_le(row, ask.clone());
        }
        match engine.solve(&problem)? {
            LpSolution::Optimal { value, point } => {
                let floor = -value;
                if floor.is_positive() {
                    Ok(MeasureCertificate::StrictlyPositive {
                        measure: point[..n].to_vec(),
                        floor,
                    })
                } else {
                    Ok(MeasureCertificate::Empty)
                }
            }
            LpSolution::Infeasible => Err(MeasuresError::EmptyPolytope),
            LpSolution::Unbounded => unreachable!("floor is capped by the simplex"),
        }
    }

    /// Exhaustive vertex enumeration by active-set search, independent of
    /// the simplex path. Intended for small instances (up to eight states);
    /// used as a brute-force oracle in tests.
    pub fn vertices(&self) -> Vec<Vec<Rational>> {
        let n = self.dim();
        let mut eq_rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
        eq_rows.push((vec![Rational::one(); n], Rational::one()));
        for state in 0..n {
            if self.order.is_negligible_state(state) {
                let mut row = vec![Rational::zero(); n];
                row[state] = Rational::one();
                eq_rows.push((row, Rational::zero()));
            }
        }
        let mut ineq_rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
        for (payoff, ask) in self.payoffs.iter().zip(&self.asks) {
            ineq_rows.push((payoff.values().to_vec(), ask.clone()));
        }
        for state in 0..n {
            let mut row = vec![Rational::zero(); n];
            row[state] = -Rational::one();
            ineq_rows.push((row, Rational::zero()));
        }

        let free = n.saturating_sub(eq_rows.len());
        let mut result = std::collections::BTreeSet::new();
        let mut chosen = Vec::with_capacity(free);
        enumerate_active_sets(
            &eq_rows,
            &ineq_rows,
            free,
            0,
            &mut chosen,
            &mut |rows, rhs| {
                if let Some(point) = solve_square(rows, rhs) {
                    let feasible = ineq_rows.iter().all(|(row, bound)| {
                        let lhs: Rational = row.iter().zip(&point).map(|(a, m)| a * m).sum();
                        lhs <= *bound
                    });
                    if feasible {
                        result.insert(point);
                    }
                }
            },
        );
        result.into_iter().collect()
    }
}

fn enumerate_active_sets(
    eq_rows: &[(Vec<Rational>, Rational)],
    ineq_rows: &[(Vec<Rational>, Rational)],
    remaining: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    visit: &mut impl FnMut(Vec<Vec<Rational>>, Vec<Rational>),
) {
    if remaining == 0 {
        let mut rows: Vec<Vec<Rational>> = eq_rows.iter().map(|(r, _)| r.clone()).collect();
        let mut rhs: Vec<Rational> = eq_rows.iter().map(|(_, b)| b.clone()).collect();
        for &idx in chosen.iter() {
            rows.push(ineq_rows[idx].0.clone());
            rhs.push(ineq_rows[idx].1.clone());
        }
        visit(rows, rhs);
        return;
    }
    for idx in start..ineq_rows.len() {
        chosen.push(idx);
        enumerate_active_sets(eq_rows, ineq_rows, remaining - 1, idx + 1, chosen, visit);
        chosen.pop();
    }
}

/// Exact Gaussian elimination; `None` when the system is singular.
fn solve_square(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rhs.len();
    debug_assert!(rows.iter().all(|r| r.len() == n));
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = rows[col][col].clone();
        for j in col..n {
            rows[col][j] = &rows[col][j] / &p;
        }
        rhs[col] = &rhs[col] / &p;
        for r in 0..n {
            if r == col || rows[r][col].is_zero() {
                continue;
            }
            let f = rows[r][col].clone();
            for j in col..n {
                let delta = &f * &rows[col][j];
                rows[r][j] = &rows[r][j] - &delta;
            }
            let delta = &f * &rhs[col];
            rhs[r] = &rhs[r] - &delta;
        }
    }
    Some(rhs)
}

/// Bubble of a claim: the cash-additive price minus the limit of truncated
/// fundamental values. The truncation sequence is constant once the strike
/// reaches the claim's maximum, so the grid is extended by that point and
/// the result is exactly zero whenever attainment duality holds — genuine
/// pure bubbles need an unbounded claim and cannot exist at finite scale.
pub fn bubble(
    engine: &LpEngine,
    market: &Market,
    polytope: &PricingPolytope,
    claim: &Claim,
    strike_grid: &[Rational],
) -> Result<Rational, MeasuresError> {
    let cash_additive = market.cash_additive_part(engine, claim)?;
    let mut grid = strike_grid.to_vec();
    grid.push(claim.max_value().clone());
    grid.sort();
    grid.dedup();
    let mut best: Option<Rational> = None;
    for k in &grid {
        let value = polytope.attainment_value(engine, &claim.truncate_at(k))?;
        best = Some(match best {
            Some(b) if b >= value => b,
            _ => value,
        });
    }
    let limit = best.expect("grid contains the claim maximum");
    Ok(cash_additive - limit)
}

/// Mark-up of a claim over its fundamental value under the certificate
/// measure: `price(X) = (1 + α)·∫X dm`. The numéraire always has mark-up
/// zero; a positively priced claim integrating to zero has no mark-up
/// representation and is reported as a zero-fundamental-value error.
pub fn markup_decomposition(
    engine: &LpEngine,
    market: &Market,
    certificate: &MeasureCertificate,
    claim: &Claim,
) -> Result<Rational, MeasuresError> {
    let measure = certificate.measure().ok_or(MeasuresError::NoMeasure)?;
    let fundamental: Rational = claim
        .values()
        .iter()
        .zip(measure)
        .map(|(x, m)| x * m)
        .sum();
    if fundamental.is_zero() {
        // a pure-bubble configuration is reported, not priced
        if claim.values().iter().all(|v| v.is_zero()) {
            return Ok(Rational::zero());
        }
        return Err(MeasuresError::ZeroFundamentalValue);
    }
    let price = market.price(engine, claim)?.value;
    Ok(price / fundamental - Rational::one())
}

/// Restricted extension check over the call-overwriting family: probes are
/// the generator truncations at the user grid extended by every distinct
/// nonnegative payoff value, plus numéraire truncations; only strictly
/// positive probes matter. Verdicts come with per-claim witnesses.
pub fn restricted_extension_check(
    engine: &LpEngine,
    market: &Market,
    polytope: &PricingPolytope,
    strike_grid: &[Rational],
) -> Result<RestrictedExtensionReport, MeasuresError> {
    let n = market.space().size();
    let mut grid = strike_grid.to_vec();
    for asset in market.assets() {
        for value in asset.payoff().values() {
            if !value.is_negative() {
                grid.push(value.clone());
            }
        }
    }
    grid.sort();
    grid.dedup();

    let mut probes = market.call_overwrite_extension(&grid)?;
    for k in &grid {
        probes.push(Claim::one(n).truncate_at(k));
    }
    probes.push(Claim::one(n));
    probes.sort();
    probes.dedup();

    let mut witnesses = Vec::new();
    let mut extendable = true;
    let mut positive_probes = Vec::new();
    for probe in probes {
        if !market.order().strictly_positive(&probe)? {
            continue;
        }
        let truncated = probe.truncate_at(&Rational::one());
        let support = polytope.attainment_value(engine, &truncated)?;
        let positive = support.is_positive();
        extendable &= positive;
        positive_probes.push(truncated);
        witnesses.push(RestrictedClaimWitness {
            claim: probe,
            truncated_support: support,
            positive,
        });
    }

    // one measure positive on every probe at once: maximize the floor of
    // the probe integrals
    let single_measure = if positive_probes.is_empty() {
        true
    } else {
        let mut objective = vec![Rational::zero(); n];
        objective.push(-Rational::one());
        let mut problem = LpProblem::minimize(objective);
        let mut simplex_row = vec![Rational::one(); n];
        simplex_row.push(Rational::zero());
        problem.add_eq(simplex_row, Rational::one());
        for state in 0..n {
            if market.order().is_negligible_state(state) {
                let mut row = vec![Rational::zero(); n + 1];
                row[state] = Rational::one();
                problem.add_eq(row, Rational::zero());
            }
        }
        for asset in market.assets() {
            let mut row = asset.payoff().values().to_vec();
            row.push(Rational::zero());
            problem.add_le(row, asset.ask().clone());
        }
        for probe in &positive_probes {
            // floor - ∫probe dm <= 0
            let mut row: Vec<Rational> = probe.values().iter().map(|v| -v.clone()).collect();
            row.push(Rational::one());
            problem.add_le(row, Rational::zero());
        }
        match engine.solve(&problem)? {
            LpSolution::Optimal { value, .. } => (-value).is_positive(),
            LpSolution::Infeasible => return Err(MeasuresError::EmptyPolytope),
            LpSolution::Unbounded => unreachable!("floor is capped by the simplex"),
        }
    };

    Ok(RestrictedExtensionReport {
        extendable,
        single_measure,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::testkit::{g1, g2, g3, market_from, random_valid_market};
    use proptest::prelude::*;

    fn eng() -> LpEngine {
        LpEngine::exact()
    }

    fn polytope(market: &Market) -> PricingPolytope {
        PricingPolytope::build(&eng(), market).unwrap()
    }

    #[test]
    fn g1_polytope_is_a_single_point() {
        let market = g1();
        let p = polytope(&market);
        assert_eq!(p.vertices(), vec![vec![int(0), int(1)]]);
        assert_eq!(
            p.attainment_value(&eng(), &Claim::indicator(2, 0)).unwrap(),
            int(0)
        );
        assert_eq!(p.attainment_value(&eng(), &Claim::one(2)).unwrap(), int(1));
    }

    #[test]
    fn g2_polytope_is_a_segment() {
        let market = g2();
        let p = polytope(&market);
        assert_eq!(
            p.vertices(),
            vec![
                vec![int(0), int(1)],
                vec![ratio(3, 5), ratio(2, 5)],
            ]
        );
        let a = Claim::from_ints(&[2, 0]);
        assert_eq!(p.attainment_value(&eng(), &a).unwrap(), ratio(6, 5));
        assert_eq!(
            p.fundamental_value_bounds(&eng(), &a).unwrap(),
            (int(0), ratio(6, 5))
        );
        assert_eq!(
            p.fundamental_value_bounds(&eng(), &Claim::one(2)).unwrap(),
            (int(1), int(1))
        );
    }

    #[test]
    fn g3_polytope_kills_the_core_state() {
        let market = g3();
        let p = polytope(&market);
        assert_eq!(
            p.vertices(),
            vec![
                vec![int(0), int(1), int(0)],
                vec![ratio(1, 2), ratio(1, 2), int(0)],
            ]
        );
    }

    #[test]
    fn npb_profiles_match_hand_enumeration() {
        let p1 = polytope(&g1());
        let report = p1.npb_check(&eng()).unwrap();
        assert!(!report.holds);
        assert_eq!(report.profile.len(), 2);
        assert_eq!(report.profile[0].state, "u");
        assert_eq!(report.profile[0].max_mass, int(0));
        assert_eq!(report.profile[1].max_mass, int(1));

        let p2 = polytope(&g2());
        let report = p2.npb_check(&eng()).unwrap();
        assert!(report.holds);
        assert_eq!(report.profile[0].max_mass, ratio(3, 5));
        assert_eq!(report.profile[1].max_mass, int(1));

        let p3 = polytope(&g3());
        let report = p3.npb_check(&eng()).unwrap();
        assert!(report.holds);
        let states: Vec<&str> = report.profile.iter().map(|a| a.state.as_str()).collect();
        assert_eq!(states, vec!["a", "b"]);
        assert_eq!(report.profile[0].max_mass, ratio(1, 2));
        assert_eq!(report.profile[1].max_mass, int(1));
    }

    #[test]
    fn strictly_positive_certificates() {
        let p2 = polytope(&g2());
        let cert = p2.strictly_positive_measure(&eng()).unwrap();
        assert_eq!(
            cert,
            MeasureCertificate::StrictlyPositive {
                measure: vec![ratio(1, 2), ratio(1, 2)],
                floor: ratio(1, 2),
            }
        );

        let p1 = polytope(&g1());
        assert_eq!(p1.strictly_positive_measure(&eng()).unwrap(), MeasureCertificate::Empty);

        let p3 = polytope(&g3());
        let cert = p3.strictly_positive_measure(&eng()).unwrap();
        let MeasureCertificate::StrictlyPositive { measure, floor } = cert else {
            panic!("expected a strictly positive certificate");
        };
        assert_eq!(measure, vec![ratio(1, 2), ratio(1, 2), int(0)]);
        assert_eq!(floor, ratio(1, 2));
    }

    #[test]
    fn attainment_equals_cash_additive_part_on_fixtures() {
        for market in [g1(), g2(), g3()] {
            let p = polytope(&market);
            for asset in market.assets() {
                let duality = p.attainment_value(&eng(), asset.payoff()).unwrap();
                let direct = market.cash_additive_part(&eng(), asset.payoff()).unwrap();
                assert_eq!(duality, direct);
            }
        }
    }

    #[test]
    fn bubbles_vanish_at_finite_scale() {
        let market = g2();
        let p = polytope(&market);
        let a = Claim::from_ints(&[2, 0]);
        assert_eq!(bubble(&eng(), &market, &p, &a, &[int(1)]).unwrap(), int(0));
        assert_eq!(
            bubble(&eng(), &market, &p, &Claim::one(2), &[]).unwrap(),
            int(0)
        );
    }

    #[test]
    fn markup_examples() {
        let market = g2();
        let p = polytope(&market);
        let cert = p.strictly_positive_measure(&eng()).unwrap();
        assert_eq!(
            markup_decomposition(&eng(), &market, &cert, &Claim::one(2)).unwrap(),
            int(0)
        );
        assert_eq!(
            markup_decomposition(&eng(), &market, &cert, &Claim::from_ints(&[2, 0])).unwrap(),
            ratio(1, 5)
        );

        let g1 = g1();
        let p1 = polytope(&g1);
        let unique = p1.feasible_measure(&eng()).unwrap();
        assert_eq!(unique.measure(), Some(&[int(0), int(1)][..]));
        let err = markup_decomposition(&eng(), &g1, &unique, &Claim::indicator(2, 0)).unwrap_err();
        assert_eq!(err, MeasuresError::ZeroFundamentalValue);
    }

    #[test]
    fn restricted_extension_examples() {
        let market = g2();
        let p = polytope(&market);
        let report = restricted_extension_check(&eng(), &market, &p, &[int(1)]).unwrap();
        assert!(report.extendable);
        assert!(report.single_measure);
        assert!(!report.witnesses.is_empty());

        // G1 passes the restricted check although full no-pure-bubble fails:
        // the gap between extending to call overwrites and completing.
        let market = g1();
        let p = polytope(&market);
        let report = restricted_extension_check(&eng(), &market, &p, &[int(1)]).unwrap();
        assert!(report.extendable);
        assert!(report.single_measure);
        assert!(!p.npb_check(&eng()).unwrap().holds);

        let market = market_from(&["u", "d"], &[], &[]);
        let p = polytope(&market);
        let report = restricted_extension_check(&eng(), &market, &p, &[int(1)]).unwrap();
        assert!(report.extendable);
        assert!(report.single_measure);
    }

    #[test]
    fn inconsistent_market_detected() {
        // ask below the payoff floor: no probability can price it
        let market = market_from(&["u", "d"], &[], &[("A", vec![int(2), int(1)], ratio(1, 2))]);
        let err = PricingPolytope::build(&eng(), &market).unwrap_err();
        assert_eq!(err, MeasuresError::InconsistentMarket);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        /// Exact duality on random valid markets, plus the verdict collapse:
        /// no-pure-bubble holds exactly when a strictly positive measure
        /// exists.
        #[test]
        fn duality_and_verdict_collapse(
            n in 1usize..=5, k in 0usize..=3, seed in 0u64..=500,
        ) {
            let engine = eng();
            let market = random_valid_market(n, k, seed);
            let p = polytope(&market);
            for asset in market.assets() {
                let duality = p.attainment_value(&engine, asset.payoff()).unwrap();
                let direct = market.cash_additive_part(&engine, asset.payoff()).unwrap();
                prop_assert_eq!(duality, direct);
            }
            let npb = p.npb_check(&engine).unwrap();
            let cert = p.strictly_positive_measure(&engine).unwrap();
            prop_assert_eq!(npb.holds, cert.is_strictly_positive());
            if let MeasureCertificate::StrictlyPositive { measure, floor } = &cert {
                prop_assert!(floor.is_positive());
                for state in market.order().off_core() {
                    prop_assert!(&measure[state] >= floor);
                }
            }
        }

        /// Every vertex respects the order: dominated claims have dominated
        /// integrals; and all coordinates stay in the unit interval.
        #[test]
        fn vertices_are_monotone_probabilities(
            n in 1usize..=5, k in 0usize..=3, seed in 0u64..=500,
        ) {
            let market = random_valid_market(n, k, seed);
            let p = polytope(&market);
            let vertices = p.vertices();
            prop_assert!(!vertices.is_empty());
            let mut rng = crate::sampling::rng(seed ^ 0xfeed);
            for vertex in &vertices {
                let total: Rational = vertex.iter().sum();
                prop_assert_eq!(total, int(1));
                for coordinate in vertex {
                    prop_assert!(!coordinate.is_negative());
                    prop_assert!(*coordinate <= int(1));
                }
                for _ in 0..10 {
                    let f = crate::sampling::claim(&mut rng, n, -6, 6);
                    let g = crate::sampling::claim(&mut rng, n, -6, 6);
                    let floor = Claim::new(
                        (0..n).map(|i| f.get(i).min(g.get(i)).clone()).collect(),
                    );
                    prop_assert!(market.order().dominates(&f, &floor).unwrap());
                    let int_f: Rational = f.values().iter().zip(vertex).map(|(a, b)| a * b).sum();
                    let int_floor: Rational =
                        floor.values().iter().zip(vertex).map(|(a, b)| a * b).sum();
                    prop_assert!(int_f >= int_floor);
                }
            }
        }

        /// Repricing the generators at their cash-additive part leaves the
        /// polytope unchanged, vertex for vertex.
        #[test]
        fn repricing_at_cash_additive_part_fixes_polytope(
            n in 1usize..=5, k in 0usize..=3, seed in 0u64..=500,
        ) {
            let engine = eng();
            let market = random_valid_market(n, k, seed);
            let p = polytope(&market);
            let reduced_assets: Vec<crate::market::Asset> = market
                .assets()
                .iter()
                .map(|a| {
                    let pa = market.cash_additive_part(&engine, a.payoff()).unwrap();
                    crate::market::Asset::new(a.name(), a.payoff().clone(), pa)
                })
                .collect();
            let reduced = Market::new(market.order().clone(), reduced_assets).unwrap();
            let q = PricingPolytope::build(&engine, &reduced).unwrap();
            prop_assert_eq!(p.vertices(), q.vertices());
        }
    }
}
