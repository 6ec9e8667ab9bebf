//! The market triple: traded assets, the common order, and the ask-price
//! functional.
//!
//! Traded payoffs form the convex hull of the quoted assets, the numéraire
//! and the origin, closed under adding nonnegative cash. A claim is *traded*
//! when it equals `Σ wᵢ·payoffᵢ + s·1 + λ` pointwise with `wᵢ, s, λ ≥ 0` and
//! `Σ wᵢ + s ≤ 1`; the numéraire cannot be shorted and positions cannot be
//! scaled arbitrarily. The ask price of a traded claim is the cost of its
//! cheapest representation, `Σ wᵢ·askᵢ + s + λ`. This functional is
//! subadditive and positively homogeneous along rays that stay inside the
//! traded set, but monotonicity in the common order and absence of arbitrage
//! are *not* automatic: [`Market::validate`] checks them and reports
//! violations with witnesses.
//!
//! Superhedging and completion prices relax exact representation to conic
//! super-replication off the negligible core. Writing a candidate strategy
//! as `λ·X` with `X` traded and reparametrizing by `z = λ·w` is exact here:
//! the cheapest representation realizes `λ·price(X)`, the cash components
//! cancel inside `X − price(X)`, and `z = 0` recovers the `λ ↓ 0` limit. So
//! both quantities are single linear programs over conic weights.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lp::{LpEngine, LpProblem, LpSolution};
use crate::order::{Claim, CommonOrder, OrderError, SampleSpace};
use crate::rational::{ratio, Rational};
use crate::sampling;

/// A quoted asset: a payoff in numéraire units and its ask price.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Asset {
    name: String,
    payoff: Claim,
    ask: Rational,
}

impl Asset {
    pub fn new(name: impl Into<String>, payoff: Claim, ask: Rational) -> Self {
        Asset {
            name: name.into(),
            payoff,
            ask,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn payoff(&self) -> &Claim {
        &self.payoff
    }

    pub fn ask(&self) -> &Rational {
        &self.ask
    }
}

/// Generator assets over a common order. The numéraire (payoff 1, price 1)
/// and the origin are always traded; a market with zero assets degenerates
/// to cash positions only and every operation stays defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Market {
    order: CommonOrder,
    assets: Vec<Asset>,
}

/// Cheapest exact representation of a traded claim: asset weights, the
/// numéraire share inside the convex budget, and nonnegative extra cash.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriceQuote {
    pub value: Rational,
    pub weights: Vec<Rational>,
    pub numeraire_weight: Rational,
    pub cash: Rational,
}

/// Cheapest conic super-replication: `Σ zᵢ payoffᵢ + u ≥ g` off the core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperhedgeQuote {
    pub value: Rational,
    pub weights: Vec<Rational>,
    pub cash: Rational,
}

/// Cheapest super-replication net of borrowed cash: value is
/// `Σ zᵢ askᵢ + u − a` with `Σ zᵢ payoffᵢ + u ≥ f + a` off the core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionQuote {
    pub value: Rational,
    pub weights: Vec<Rational>,
    pub cash: Rational,
    pub shift: Rational,
}

#[derive(Debug, Clone)]
pub struct ArbitrageViolation {
    pub label: String,
    pub claim: Claim,
    pub price: Rational,
}

#[derive(Debug, Clone)]
pub struct MonotonicityViolation {
    pub label: String,
    pub higher: Claim,
    pub lower: Claim,
    pub higher_price: Rational,
    pub lower_price: Rational,
}

/// Outcome of [`Market::validate`]. The market is accepted as a price
/// system exactly when the numéraire reprices to one and no violation was
/// found.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub numeraire_price_ok: bool,
    pub numeraire_price: Option<Rational>,
    pub arbitrage_violations: Vec<ArbitrageViolation>,
    pub monotonicity_violations: Vec<MonotonicityViolation>,
    pub messages: Vec<String>,
}

impl ValidationReport {
    pub fn accepted(&self) -> bool {
        self.numeraire_price_ok
            && self.arbitrage_violations.is_empty()
            && self.monotonicity_violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MarketError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("asset {name:?}: {reason}")]
    BadAsset { name: String, reason: String },
    #[error("claim is not representable by the traded assets")]
    NotRepresentable,
    #[error("negative strike {0}")]
    NegativeStrike(Rational),
    #[error("inconsistent market: {0}")]
    InconsistentMarket(String),
    #[error(transparent)]
    Lp(#[from] crate::lp::LpError),
}

impl Market {
    pub fn new(order: CommonOrder, assets: Vec<Asset>) -> Result<Self, MarketError> {
        let n = order.space().size();
        let mut names = std::collections::BTreeSet::new();
        for asset in &assets {
            if asset.name.is_empty() {
                return Err(MarketError::BadAsset {
                    name: asset.name.clone(),
                    reason: "name must be non-empty".into(),
                });
            }
            if !names.insert(asset.name.clone()) {
                return Err(MarketError::BadAsset {
                    name: asset.name.clone(),
                    reason: "duplicate asset name".into(),
                });
            }
            if asset.payoff.len() != n {
                return Err(MarketError::BadAsset {
                    name: asset.name.clone(),
                    reason: format!(
                        "payoff has {} entries, the space has {n} states",
                        asset.payoff.len()
                    ),
                });
            }
        }
        Ok(Market { order, assets })
    }

    pub fn order(&self) -> &CommonOrder {
        &self.order
    }

    pub fn space(&self) -> &SampleSpace {
        self.order.space()
    }

    pub fn assets(&self) -> &[Asset] {
        &self.assets
    }

    pub fn num_assets(&self) -> usize {
        self.assets.len()
    }

    fn check_dim(&self, claim: &Claim) -> Result<(), MarketError> {
        if claim.len() != self.space().size() {
            return Err(MarketError::Order(OrderError::DimensionMismatch {
                expected: self.space().size(),
                found: claim.len(),
            }));
        }
        Ok(())
    }

    /// Equality system `Σ wᵢ payoffᵢ + s + λ (− t) = target` with the convex
    /// budget row; variable layout `[w.., s, λ]` plus a trailing free shift
    /// when `with_shift` is set.
    fn representation_problem(&self, target: &Claim, with_shift: bool) -> LpProblem {
        let k = self.assets.len();
        let n = self.space().size();
        let mut objective: Vec<Rational> = self.assets.iter().map(|a| a.ask.clone()).collect();
        objective.push(Rational::one()); // numéraire share s
        objective.push(Rational::one()); // extra cash λ
        if with_shift {
            objective.push(-Rational::one()); // borrowed shift t
        }
        let width = objective.len();
        let mut problem = LpProblem::minimize(objective);
        if with_shift {
            problem.mark_free(width - 1);
        }
        for state in 0..n {
            let mut row = Vec::with_capacity(width);
            for asset in &self.assets {
                row.push(asset.payoff.get(state).clone());
            }
            row.push(Rational::one());
            row.push(Rational::one());
            if with_shift {
                row.push(-Rational::one());
            }
            problem.add_eq(row, target.get(state).clone());
        }
        let mut budget = vec![Rational::one(); k + 1];
        budget.extend(std::iter::repeat(Rational::zero()).take(width - k - 1));
        problem.add_le(budget, Rational::one());
        problem
    }

    /// Convex-budget domination `Σ wᵢ payoffᵢ + s + λ ≥ target` off the
    /// core; same variable layout as the representation system.
    fn convex_domination_problem(&self, target: &Claim) -> LpProblem {
        let k = self.assets.len();
        let mut objective: Vec<Rational> = self.assets.iter().map(|a| a.ask.clone()).collect();
        objective.push(Rational::one());
        objective.push(Rational::one());
        let mut problem = LpProblem::minimize(objective);
        for state in self.order.off_core() {
            let mut row = Vec::with_capacity(k + 2);
            for asset in &self.assets {
                row.push(-asset.payoff.get(state).clone());
            }
            row.push(-Rational::one());
            row.push(-Rational::one());
            problem.add_le(row, -target.get(state).clone());
        }
        let mut budget = vec![Rational::one(); k + 1];
        budget.push(Rational::zero());
        problem.add_le(budget, Rational::one());
        problem
    }

    /// Conic rows `Σ zᵢ payoffᵢ + u (− a) ≥ target` off the core, encoded as
    /// `≤` rows; variable layout `[z.., u]` plus a trailing free shift.
    fn superreplication_problem(&self, target: &Claim, with_shift: bool) -> LpProblem {
        let mut objective: Vec<Rational> = self.assets.iter().map(|a| a.ask.clone()).collect();
        objective.push(Rational::one()); // cash u
        if with_shift {
            objective.push(-Rational::one()); // borrowed shift a
        }
        let width = objective.len();
        let mut problem = LpProblem::minimize(objective);
        if with_shift {
            problem.mark_free(width - 1);
        }
        for state in self.order.off_core() {
            let mut row = Vec::with_capacity(width);
            for asset in &self.assets {
                row.push(-asset.payoff.get(state).clone());
            }
            row.push(-Rational::one());
            if with_shift {
                row.push(Rational::one());
            }
            problem.add_le(row, -target.get(state).clone());
        }
        problem
    }

    /// Ask price of an exactly representable claim, with the cheapest
    /// representation as witness.
    pub fn price(&self, engine: &LpEngine, target: &Claim) -> Result<PriceQuote, MarketError> {
        self.check_dim(target)?;
        let problem = self.representation_problem(target, false);
        match engine.solve(&problem)? {
            LpSolution::Optimal { value, point } => {
                let k = self.assets.len();
                Ok(PriceQuote {
                    value,
                    weights: point[..k].to_vec(),
                    numeraire_weight: point[k].clone(),
                    cash: point[k + 1].clone(),
                })
            }
            LpSolution::Infeasible => Err(MarketError::NotRepresentable),
            LpSolution::Unbounded => Err(MarketError::InconsistentMarket(
                "representation cost is unbounded below".into(),
            )),
        }
    }

    /// The cash-additive part: cheapest `price(target + t) − t` over shifts
    /// `t` keeping `target + t` traded. Defined for every claim that is
    /// representable after some cash shift; always at most the ask price.
    pub fn cash_additive_part(
        &self,
        engine: &LpEngine,
        target: &Claim,
    ) -> Result<Rational, MarketError> {
        self.check_dim(target)?;
        let problem = self.representation_problem(target, true);
        match engine.solve(&problem)? {
            LpSolution::Optimal { value, .. } => Ok(value),
            LpSolution::Infeasible => Err(MarketError::NotRepresentable),
            LpSolution::Unbounded => Err(MarketError::InconsistentMarket(
                "cash-additive part is unbounded below".into(),
            )),
        }
    }

    /// Superhedging price: cheapest conic strategy dominating `g` outside
    /// the core. Always feasible (cash alone suffices on a finite space).
    pub fn superhedge(
        &self,
        engine: &LpEngine,
        target: &Claim,
    ) -> Result<SuperhedgeQuote, MarketError> {
        self.check_dim(target)?;
        let problem = self.superreplication_problem(target, false);
        match engine.solve(&problem)? {
            LpSolution::Optimal { value, point } => {
                let k = self.assets.len();
                Ok(SuperhedgeQuote {
                    value,
                    weights: point[..k].to_vec(),
                    cash: point[k].clone(),
                })
            }
            LpSolution::Infeasible => unreachable!("superhedging is always feasible"),
            LpSolution::Unbounded => Err(MarketError::InconsistentMarket(
                "superhedging cost is unbounded below".into(),
            )),
        }
    }

    /// Completion price: superhedging net of borrowed cash,
    /// `min Σ zᵢ askᵢ + u − a` over `Σ zᵢ payoffᵢ + u ≥ f + a` off the core.
    /// Cash additive by construction: shifting `f` by `t` shifts the value
    /// by exactly `t`.
    pub fn completion_price(
        &self,
        engine: &LpEngine,
        target: &Claim,
    ) -> Result<CompletionQuote, MarketError> {
        self.check_dim(target)?;
        let problem = self.superreplication_problem(target, true);
        match engine.solve(&problem)? {
            LpSolution::Optimal { value, point } => {
                let k = self.assets.len();
                Ok(CompletionQuote {
                    value,
                    weights: point[..k].to_vec(),
                    cash: point[k].clone(),
                    shift: point[k + 1].clone(),
                })
            }
            LpSolution::Infeasible => unreachable!("completion pricing is always feasible"),
            LpSolution::Unbounded => Err(MarketError::InconsistentMarket(
                "no pricing measure exists: completion price unbounded below".into(),
            )),
        }
    }

    /// Gauge of membership in the uniform closure of the cone of claims
    /// dominated by costless positions: the least `d` such that some conic
    /// strategy `z` achieves `f − Σ zᵢ(payoffᵢ − askᵢ) ≤ d` off the core.
    /// Membership holds exactly when the value is at most zero.
    pub fn cone_distance(&self, engine: &LpEngine, target: &Claim) -> Result<Rational, MarketError> {
        self.check_dim(target)?;
        let k = self.assets.len();
        let mut objective = vec![Rational::zero(); k];
        objective.push(Rational::one()); // epigraph variable d
        let mut problem = LpProblem::minimize(objective);
        problem.mark_free(k);
        for state in self.order.off_core() {
            let mut row = Vec::with_capacity(k + 1);
            for asset in &self.assets {
                row.push(asset.ask.clone() - asset.payoff.get(state).clone());
            }
            row.push(-Rational::one());
            problem.add_le(row, -target.get(state).clone());
        }
        match engine.solve(&problem)? {
            LpSolution::Optimal { value, .. } => Ok(value),
            LpSolution::Infeasible => unreachable!("epigraph program is always feasible"),
            LpSolution::Unbounded => Err(MarketError::InconsistentMarket(
                "cone gauge is unbounded below".into(),
            )),
        }
    }

    /// Call-overwriting extension: truncations `X ∧ k` of each generator at
    /// the grid strikes, plus the identity strike. Strikes must be
    /// nonnegative; exact duplicates are dropped.
    pub fn call_overwrite_extension(&self, strikes: &[Rational]) -> Result<Vec<Claim>, MarketError> {
        for k in strikes {
            if k.is_negative() {
                return Err(MarketError::NegativeStrike(k.clone()));
            }
        }
        let mut grid = strikes.to_vec();
        grid.sort();
        grid.dedup();
        let mut seen = std::collections::BTreeSet::new();
        let mut result = Vec::new();
        for asset in &self.assets {
            for k in &grid {
                let truncated = asset.payoff.truncate_at(k);
                if seen.insert(truncated.clone()) {
                    result.push(truncated);
                }
            }
            if seen.insert(asset.payoff.clone()) {
                result.push(asset.payoff.clone());
            }
        }
        Ok(result)
    }

    /// Checks the price-system axioms: the numéraire must reprice to one,
    /// strictly positive traded claims must have positive prices, and
    /// prices must respect the common order. The first check is exact and
    /// decisive; the other two run over the generators, deterministic
    /// generator/numéraire/origin pairs, and `sample_count` sampled traded
    /// claims. A market failing the numéraire check is rejected outright.
    pub fn validate(
        &self,
        engine: &LpEngine,
        sample_count: usize,
        seed: u64,
    ) -> Result<ValidationReport, MarketError> {
        let n = self.space().size();
        let mut report = ValidationReport::default();

        let one = Claim::one(n);
        let numeraire_price = self.price(engine, &one)?.value;
        report.numeraire_price_ok = numeraire_price.is_one();
        report.numeraire_price = Some(numeraire_price.clone());
        if !report.numeraire_price_ok {
            report.messages.push(format!(
                "numeraire reprices to {numeraire_price}, expected 1; market rejected"
            ));
            return Ok(report);
        }
        report.messages.push("numeraire price verified: 1".into());

        // candidate claims: generators, numéraire, origin, sampled portfolios
        let mut candidates: Vec<(String, Claim)> = Vec::new();
        for asset in &self.assets {
            candidates.push((asset.name.clone(), asset.payoff.clone()));
        }
        candidates.push(("1".into(), one.clone()));
        candidates.push(("0".into(), Claim::zero(n)));

        let mut rng = sampling::rng(seed);
        let k = self.assets.len();
        for index in 0..sample_count {
            // draw convex weights with Σw + s ≤ 1, plus extra cash
            let raw: Vec<Rational> = (0..k + 1)
                .map(|_| sampling::rational_in(&mut rng, 0, 4))
                .collect();
            let total: Rational = raw.iter().sum();
            let shrink = sampling::rational_in(&mut rng, 1, 4) / ratio(4, 1);
            let scale = if total > Rational::one() {
                shrink / total
            } else {
                shrink
            };
            let cash = sampling::rational_in(&mut rng, 0, 3);
            let mut claim = Claim::constant(n, (&raw[k] * &scale) + cash.clone());
            for (i, asset) in self.assets.iter().enumerate() {
                claim = &claim + &asset.payoff.scale(&(&raw[i] * &scale));
            }
            candidates.push((format!("sample#{index}"), claim.clone()));
            // a cash-reduced companion: traded and dominated by the sample
            if cash.is_positive() {
                let reduced = claim.shift(&(-&cash / ratio(2, 1)));
                candidates.push((format!("sample#{index}-cash"), reduced));
            }
        }

        let priced: Vec<(String, Claim, Rational)> = candidates
            .into_iter()
            .map(|(label, claim)| {
                let value = self.price(engine, &claim)?.value;
                Ok((label, claim, value))
            })
            .collect::<Result<_, MarketError>>()?;

        for (label, claim, value) in &priced {
            if self.order.strictly_positive(claim)? && !value.is_positive() {
                report.arbitrage_violations.push(ArbitrageViolation {
                    label: label.clone(),
                    claim: claim.clone(),
                    price: value.clone(),
                });
            }
        }
        for (label_x, x, px) in &priced {
            for (label_y, y, py) in &priced {
                if std::ptr::eq(x, y) {
                    continue;
                }
                if self.order.dominates(x, y)? && px < py {
                    report.monotonicity_violations.push(MonotonicityViolation {
                        label: format!("{label_x} ≥* {label_y}"),
                        higher: x.clone(),
                        lower: y.clone(),
                        higher_price: px.clone(),
                        lower_price: py.clone(),
                    });
                }
            }
        }

        // every generator (and the numéraire) must cost no more than its
        // cheapest traded dominator, otherwise that dominator witnesses a
        // monotonicity failure
        let mut dominated: Vec<(String, Claim, Rational)> = self
            .assets
            .iter()
            .map(|a| (a.name.clone(), a.payoff.clone(), a.ask.clone()))
            .collect();
        dominated.push(("1".into(), one.clone(), Rational::one()));
        for (label, claim, _) in &dominated {
            let exact = self.price(engine, claim)?.value;
            let problem = self.convex_domination_problem(claim);
            let LpSolution::Optimal { value, point } = engine.solve(&problem)? else {
                unreachable!("domination program is feasible and bounded");
            };
            if value < exact {
                let k = self.num_assets();
                let mut dominator = Claim::constant(
                    self.space().size(),
                    point[k].clone() + point[k + 1].clone(),
                );
                for (i, asset) in self.assets.iter().enumerate() {
                    dominator = &dominator + &asset.payoff.scale(&point[i]);
                }
                let dominator_price = self.price(engine, &dominator)?.value;
                report.monotonicity_violations.push(MonotonicityViolation {
                    label: format!("cheap dominator of {label}"),
                    higher: dominator,
                    lower: claim.clone(),
                    higher_price: dominator_price,
                    lower_price: exact,
                });
            }
        }
        report.messages.push(format!(
            "checked positivity and monotonicity over {} traded claims",
            priced.len()
        ));
        Ok(report)
    }
}
