//! Seeded draws of small exact numbers and claims, shared by the axiom
//! checker, market validation and probe search. Everything routes through
//! `ChaCha8Rng` so identical seeds give identical draws on every platform.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::order::Claim;
use crate::rational::{ratio, Rational};

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational in `[lo, hi]` with denominator at most four.
pub(crate) fn rational_in(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    let den = rng.gen_range(1..=4i64);
    let num = rng.gen_range(lo * den..=hi * den);
    ratio(num, den)
}

pub(crate) fn claim(rng: &mut ChaCha8Rng, len: usize, lo: i64, hi: i64) -> Claim {
    Claim::new((0..len).map(|_| rational_in(rng, lo, hi)).collect())
}

pub(crate) fn nonneg_claim(rng: &mut ChaCha8Rng, len: usize, hi: i64) -> Claim {
    claim(rng, len, 0, hi)
}

/// Raw parts of a seeded random market: state labels, the negligible mask,
/// and `(name, payoff, ask)` per asset.
///
/// Payoffs are small nonnegative rationals. Every ask is the payoff's exact
/// integral under one random probability carried by the non-negligible
/// states. That makes the cost of *every* representation of a traded claim
/// equal to the claim's integral, so the induced price functional is
/// monotone in the common order and the market always validates; the
/// pricing polytope contains the drawn measure and is never empty. The
/// measure may put zero mass on some non-negligible states, which is what
/// produces markets failing the no-pure-bubble condition alongside markets
/// satisfying it.
pub(crate) type MarketParts = (Vec<String>, Vec<bool>, Vec<(String, Vec<Rational>, Rational)>);

pub(crate) fn random_market_parts(seed: u64, n_states: usize, k_assets: usize) -> MarketParts {
    assert!(n_states >= 1, "a market needs at least one state");
    let mut rng = rng(seed);
    let labels: Vec<String> = (1..=n_states).map(|i| format!("s{i}")).collect();

    let core_size = rng.gen_range(0..n_states);
    let mut indices: Vec<usize> = (0..n_states).collect();
    for i in (1..indices.len()).rev() {
        let j = rng.gen_range(0..=i);
        indices.swap(i, j);
    }
    let mut negligible = vec![false; n_states];
    for &idx in indices.iter().take(core_size) {
        negligible[idx] = true;
    }
    let off_core: Vec<usize> = (0..n_states).filter(|&i| !negligible[i]).collect();

    // pricing weights over non-negligible states; zeros allowed
    let mut weights = vec![Rational::zero(); n_states];
    for &i in &off_core {
        if rng.gen_range(0..4u8) > 0 {
            weights[i] = Rational::from_integer(rng.gen_range(1..=8i64).into());
        }
    }
    if off_core.iter().all(|&i| weights[i].is_zero()) {
        weights[off_core[0]] = Rational::one();
    }
    let total: Rational = weights.iter().sum();
    let measure: Vec<Rational> = weights.into_iter().map(|w| w / &total).collect();
    let carried = off_core
        .iter()
        .copied()
        .find(|&i| measure[i].is_positive())
        .expect("some state carries mass");

    let mut assets = Vec::with_capacity(k_assets);
    for a in 1..=k_assets {
        let mut payoff = nonneg_claim(&mut rng, n_states, 8);
        let integral = |p: &Claim| -> Rational { off_core.iter().map(|&i| p.get(i) * &measure[i]).sum() };
        let mut ask = integral(&payoff);
        // a positively supported payoff must not price at zero; give it
        // mass on a carried state
        if ask.is_zero() && off_core.iter().any(|&i| payoff.get(i).is_positive()) {
            let mut values = payoff.values().to_vec();
            values[carried] += Rational::one();
            payoff = Claim::new(values);
            ask = integral(&payoff);
        }
        assets.push((format!("A{a}"), payoff.values().to_vec(), ask));
    }
    (labels, negligible, assets)
}
