//! Market power as a normalized subadditivity gap.
//!
//! For a pricing functional `ρ` and a finite family of claims that are
//! nonnegative off the core, the index compares buying the claims
//! separately with buying their sum: `(Σρ(fᵢ) − ρ(Σfᵢ)) / Σρ(fᵢ)`, with the
//! convention `0/0 = 0`. Linear functionals score zero (perfect
//! competition); the supremum over families can approach one (extreme
//! monopoly). The supremum has no finite certificate in general, so
//! [`power_lower_bound`] reports the best value found over structured
//! probes: indicator-block partitions of the off-core states (the natural
//! worst-case device), the generators' positive parts, and seeded random
//! families. It is a lower bound, never a claim of exactness.
//!
//! [`refinement_study`] replays the refinement mechanism at finite scale:
//! a spread oracle over `k` equally likely states scored on the finest
//! partition has index `β(k−1)/(1+kβ)`, which increases to one as the
//! partition refines. Markets whose collective order carries infinitely
//! many disjoint non-negligible events would push every completion to
//! index one; finitely many states can only approach that.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::lp::LpEngine;
use crate::market::{Market, MarketError};
use crate::measures::{MeasuresError, PricingPolytope};
use crate::order::{Claim, CommonOrder, OrderError, SampleSpace};
use crate::rational::{ratio, Rational};
use crate::sampling;

/// Evaluation rule of a [`PriceOracle`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleKind {
    /// `ρ(f) = ∫f dm`: cash additive, index zero.
    Linear { measure: Vec<Rational> },
    /// `ρ(f)` is the market's completion price (the support function of
    /// its pricing polytope): sublinear and cash additive.
    Completion { market: Market },
    /// `ρ(f) = ∫f dμ + β · max |f|` over off-core states: sublinear with a
    /// uniform spread; the workhorse of the refinement study.
    SupSpread {
        measure: Vec<Rational>,
        beta: Rational,
    },
}

/// A total pricing rule on claims, used to score market power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriceOracle {
    order: CommonOrder,
    kind: OracleKind,
}

/// Best probe outcome: the bound, the family achieving it, and the budget
/// of random families that was spent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerEstimate {
    pub lower_bound: Rational,
    pub witness: Vec<Claim>,
    pub probe_budget: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PowerError {
    #[error("probe family must be non-empty")]
    EmptyFamily,
    #[error("claim {index} is negative on non-negligible state {state:?}")]
    NegativeClaim { index: usize, state: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("measure has {found} entries, the space has {expected} states")]
    MeasureDimension { expected: usize, found: usize },
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Market(#[from] MarketError),
    #[error(transparent)]
    Measures(#[from] MeasuresError),
}

impl PriceOracle {
    pub fn linear(order: CommonOrder, measure: Vec<Rational>) -> Result<Self, PowerError> {
        if measure.len() != order.space().size() {
            return Err(PowerError::MeasureDimension {
                expected: order.space().size(),
                found: measure.len(),
            });
        }
        Ok(PriceOracle {
            order,
            kind: OracleKind::Linear { measure },
        })
    }

    pub fn completion(market: Market) -> Self {
        PriceOracle {
            order: market.order().clone(),
            kind: OracleKind::Completion { market },
        }
    }

    pub fn sup_spread(
        order: CommonOrder,
        measure: Vec<Rational>,
        beta: Rational,
    ) -> Result<Self, PowerError> {
        if measure.len() != order.space().size() {
            return Err(PowerError::MeasureDimension {
                expected: order.space().size(),
                found: measure.len(),
            });
        }
        if beta.is_negative() {
            return Err(PowerError::InvalidParameter(format!(
                "spread coefficient must be nonnegative, got {beta}"
            )));
        }
        Ok(PriceOracle {
            order,
            kind: OracleKind::SupSpread { measure, beta },
        })
    }

    pub fn order(&self) -> &CommonOrder {
        &self.order
    }

    pub fn kind(&self) -> &OracleKind {
        &self.kind
    }

    /// Positively homogeneous kinds keep the power index invariant under
    /// scaling of the family; all three kinds qualify.
    pub fn evaluate(&self, engine: &LpEngine, claim: &Claim) -> Result<Rational, PowerError> {
        match &self.kind {
            OracleKind::Linear { measure } => Ok(claim
                .values()
                .iter()
                .zip(measure)
                .map(|(x, m)| x * m)
                .sum()),
            OracleKind::Completion { market } => {
                Ok(market.completion_price(engine, claim)?.value)
            }
            OracleKind::SupSpread { measure, beta } => {
                let integral: Rational = claim
                    .values()
                    .iter()
                    .zip(measure)
                    .map(|(x, m)| x * m)
                    .sum();
                let spread = self
                    .order
                    .off_core()
                    .map(|i| claim.get(i).abs())
                    .max()
                    .unwrap_or_else(Rational::zero);
                Ok(integral + beta * spread)
            }
        }
    }
}

/// The power index of one family: `(Σρ(fᵢ) − ρ(Σfᵢ)) / Σρ(fᵢ)` with
/// `0/0 = 0`. Every claim must be nonnegative off the core.
pub fn power_at(
    oracle: &PriceOracle,
    engine: &LpEngine,
    family: &[Claim],
) -> Result<Rational, PowerError> {
    if family.is_empty() {
        return Err(PowerError::EmptyFamily);
    }
    let n = oracle.order.space().size();
    for (index, claim) in family.iter().enumerate() {
        if claim.len() != n {
            return Err(PowerError::Order(OrderError::DimensionMismatch {
                expected: n,
                found: claim.len(),
            }));
        }
        for state in oracle.order.off_core() {
            if claim.get(state).is_negative() {
                return Err(PowerError::NegativeClaim {
                    index,
                    state: oracle.order.space().label(state).to_string(),
                });
            }
        }
    }
    let mut sum_of_prices = Rational::zero();
    let mut total = Claim::zero(n);
    for claim in family {
        sum_of_prices += oracle.evaluate(engine, claim)?;
        total = &total + claim;
    }
    if sum_of_prices.is_zero() {
        return Ok(Rational::zero());
    }
    let bundled = oracle.evaluate(engine, &total)?;
    Ok((&sum_of_prices - bundled) / sum_of_prices)
}

fn partitions_of(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    fn recurse(
        items: &[usize],
        idx: usize,
        blocks: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if idx == items.len() {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(items[idx]);
            recurse(items, idx + 1, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![items[idx]]);
        recurse(items, idx + 1, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    recurse(items, 0, &mut Vec::new(), &mut out);
    out
}

fn blocks_to_family(n: usize, blocks: &[Vec<usize>]) -> Vec<Claim> {
    blocks
        .iter()
        .map(|block| {
            let mut values = vec![Rational::zero(); n];
            for &i in block {
                values[i] = Rational::one();
            }
            Claim::new(values)
        })
        .collect()
}

/// Off-core sizes up to this bound get exhaustive partition probes; larger
/// spaces fall back to the two extreme partitions plus random ones.
const EXHAUSTIVE_PARTITION_LIMIT: usize = 8;

/// Best power index found over structured probe families: all indicator
/// partitions of the off-core states (exhaustive on small spaces), the
/// generators' positive parts, and `probe_budget` seeded random families.
/// A lower bound for the supremum; exactness is not claimed. Ties keep the
/// earliest family in this fixed probe order.
pub fn power_lower_bound(
    oracle: &PriceOracle,
    engine: &LpEngine,
    market: &Market,
    probe_budget: usize,
    seed: u64,
) -> Result<PowerEstimate, PowerError> {
    if probe_budget == 0 {
        return Err(PowerError::InvalidParameter(
            "probe budget must be at least one".into(),
        ));
    }
    let n = oracle.order.space().size();
    let off_core: Vec<usize> = oracle.order.off_core().collect();

    let mut families: Vec<Vec<Claim>> = Vec::new();
    if off_core.len() <= EXHAUSTIVE_PARTITION_LIMIT {
        for blocks in partitions_of(&off_core) {
            families.push(blocks_to_family(n, &blocks));
        }
    } else {
        families.push(blocks_to_family(n, &[off_core.clone()]));
        let singletons: Vec<Vec<usize>> = off_core.iter().map(|&i| vec![i]).collect();
        families.push(blocks_to_family(n, &singletons));
    }
    if market.num_assets() >= 2 {
        families.push(
            market
                .assets()
                .iter()
                .map(|a| a.payoff().positive_part())
                .collect(),
        );
    }
    let mut rng = sampling::rng(seed);
    for _ in 0..probe_budget {
        let size = rng.gen_range(2..=4usize);
        let family: Vec<Claim> = (0..size)
            .map(|_| sampling::nonneg_claim(&mut rng, n, 6))
            .collect();
        families.push(family);
    }

    let mut best: Option<(Rational, Vec<Claim>)> = None;
    for family in families {
        let value = power_at(oracle, engine, &family)?;
        match &best {
            Some((current, _)) if *current >= value => {}
            _ => best = Some((value, family)),
        }
    }
    let (lower_bound, witness) = best.expect("at least one probe family exists");
    Ok(PowerEstimate {
        lower_bound,
        witness,
        probe_budget,
    })
}

/// Linear completion if one exists: prices every claim by its integral
/// under a strictly positive pricing measure, giving a cash-additive
/// completion with power index zero. `None` certifies that no completion
/// with index below one exists for this market.
pub fn linear_completion(
    engine: &LpEngine,
    market: &Market,
) -> Result<Option<PriceOracle>, PowerError> {
    let polytope = PricingPolytope::build(engine, market)?;
    match polytope.strictly_positive_measure(engine)? {
        crate::measures::MeasureCertificate::StrictlyPositive { measure, .. } => Ok(Some(
            PriceOracle::linear(market.order().clone(), measure)?,
        )),
        _ => Ok(None),
    }
}

/// Finite-scale refinement table: for each `k ≤ k_max`, a spread oracle
/// over `k` equally likely states scored on the partition into singleton
/// indicators. The value follows the closed form `β(k−1)/(1+kβ)`, strictly
/// increasing in `k` with limit one.
pub fn refinement_study(beta: &Rational, k_max: usize) -> Result<Vec<(usize, Rational)>, PowerError> {
    if !beta.is_positive() {
        return Err(PowerError::InvalidParameter(format!(
            "spread coefficient must be positive, got {beta}"
        )));
    }
    if k_max < 2 {
        return Err(PowerError::InvalidParameter(format!(
            "refinement study needs k_max >= 2, got {k_max}"
        )));
    }
    let engine = LpEngine::exact();
    let mut table = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let labels: Vec<String> = (1..=k).map(|i| format!("s{i}")).collect();
        let space = SampleSpace::new(labels).expect("labels are distinct");
        let order = CommonOrder::pointwise(space);
        let uniform = vec![ratio(1, k as i64); k];
        let oracle = PriceOracle::sup_spread(order, uniform, beta.clone())?;
        let family: Vec<Claim> = (0..k).map(|i| Claim::indicator(k, i)).collect();
        let value = power_at(&oracle, &engine, &family)?;
        table.push((k, value));
    }
    Ok(table)
}
