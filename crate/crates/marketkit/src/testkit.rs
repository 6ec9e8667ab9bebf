//! Fixtures shared across unit tests.
//!
//! `g1` is a two-state market whose single pricing measure kills one state:
//! it validates but admits no strictly positive pricing measure. `g2` is the
//! same space with slack in the asset constraint, so its measure polytope is
//! a segment. `g3` adds a genuinely negligible state.

use std::collections::BTreeSet;

use crate::market::{Asset, Market};
use crate::order::{Claim, CommonOrder, SampleSpace};
use crate::rational::{int, ratio, Rational};
use crate::sampling;

pub(crate) fn market_from(
    labels: &[&str],
    core: &[&str],
    assets: &[(&str, Vec<Rational>, Rational)],
) -> Market {
    let space = SampleSpace::from_labels(labels).unwrap();
    let sets: Vec<BTreeSet<String>> = core.iter().map(|s| BTreeSet::from([s.to_string()])).collect();
    let order = CommonOrder::from_negligible_sets(space, &sets).unwrap();
    let assets = assets
        .iter()
        .map(|(name, payoff, ask)| Asset::new(*name, Claim::new(payoff.clone()), ask.clone()))
        .collect();
    Market::new(order, assets).unwrap()
}

/// Two states, one asset `(2,1)` at ask 1: the unique pricing measure is
/// `(0,1)`, so no-pure-bubble fails while validation succeeds.
pub(crate) fn g1() -> Market {
    market_from(&["u", "d"], &[], &[("A", vec![int(2), int(1)], int(1))])
}

/// Two states, one asset `(2,0)` at ask 6/5: the pricing measures form the
/// segment `m_u ≤ 3/5`.
pub(crate) fn g2() -> Market {
    market_from(&["u", "d"], &[], &[("A", vec![int(2), int(0)], ratio(6, 5))])
}

/// Three states with `c` negligible and one asset `(1,0,5)` at ask 1/2.
pub(crate) fn g3() -> Market {
    market_from(
        &["a", "b", "c"],
        &["c"],
        &[("A", vec![int(1), int(0), int(5)], ratio(1, 2))],
    )
}

/// Valid-by-construction random market: every ask is at least the payoff's
/// uniform off-core integral.
pub(crate) fn random_valid_market(n_states: usize, k_assets: usize, seed: u64) -> Market {
    let (labels, negligible, assets) = sampling::random_market_parts(seed, n_states, k_assets);
    let space = SampleSpace::new(labels).unwrap();
    let core: BTreeSet<String> = space
        .states()
        .iter()
        .enumerate()
        .filter(|(i, _)| negligible[*i])
        .map(|(_, s)| s.clone())
        .collect();
    let order = CommonOrder::from_negligible_sets(space, &[core]).unwrap();
    let assets = assets
        .into_iter()
        .map(|(name, payoff, ask)| Asset::new(name, Claim::new(payoff), ask))
        .collect();
    Market::new(order, assets).unwrap()
}
