//! Seeded random market files for property testing and demos.

use std::collections::BTreeSet;

use crate::cli::format::{AssetSpec, MarketFile};
use crate::sampling;

/// Deterministic per seed: identical arguments produce byte-identical
/// files. Asks are exact integrals of the payoffs under one random
/// probability on the non-negligible states, so every generated file
/// passes validation and its pricing polytope is nonempty; the probability
/// may put zero mass on some states, which yields markets on both sides of
/// the no-pure-bubble verdict.
pub fn generate_market(seed: u64, n_states: usize, k_assets: usize) -> MarketFile {
    let (states, negligible, assets) = sampling::random_market_parts(seed, n_states, k_assets);
    let core: BTreeSet<String> = states
        .iter()
        .enumerate()
        .filter(|(i, _)| negligible[*i])
        .map(|(_, s)| s.clone())
        .collect();
    MarketFile {
        states,
        negligible_sets: if core.is_empty() { vec![] } else { vec![core] },
        assets: assets
            .into_iter()
            .map(|(name, payoff, ask)| AssetSpec { name, payoff, ask })
            .collect(),
        priors: Vec::new(),
        strikes: None,
    }
}
