//! The market file: a line-oriented text document with an explicit schema
//! version.
//!
//! ```text
//! marketfile v1
//! # comments and blank lines are ignored
//! states u d
//! negligible d          # repeatable; each line is one negligible set
//! asset A 2 0 ask 6/5
//! prior 1/2 1/2         # repeatable; optional prior family
//! strikes 1 3/2         # optional call-overwriting grid
//! ```
//!
//! Numbers are exact: integers, `p/q` fractions or finite decimals.
//! Exponent notation and non-finite values are rejected in every mode, so
//! a file parses to the same market regardless of the arithmetic backend.
//! Parsing canonicalizes (strikes sorted, sets deduplicated); serializing a
//! parsed file and parsing it back is the identity.

use std::collections::BTreeSet;

use num_traits::Signed;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::market::{Asset, Market, MarketError};
use crate::order::{Claim, CommonOrder, OrderError, PriorFamily, SampleSpace};
use crate::rational::{fraction_string, parse_exact, Rational};

pub const SCHEMA_HEADER: &str = "marketfile v1";

/// Parsed market file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarketFile {
    pub states: Vec<String>,
    pub negligible_sets: Vec<BTreeSet<String>>,
    pub assets: Vec<AssetSpec>,
    pub priors: Vec<Vec<Rational>>,
    pub strikes: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssetSpec {
    pub name: String,
    pub payoff: Vec<Rational>,
    pub ask: Rational,
}

/// Structured parse error with line context.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn fail(line: usize, message: impl Into<String>) -> FormatError {
    FormatError {
        line,
        message: message.into(),
    }
}

fn parse_number(token: &str, line: usize) -> Result<Rational, FormatError> {
    parse_exact(token).map_err(|e| fail(line, e.to_string()))
}

impl MarketFile {
    pub fn parse(text: &str) -> Result<MarketFile, FormatError> {
        let mut states: Option<Vec<String>> = None;
        let mut negligible_sets: Vec<BTreeSet<String>> = Vec::new();
        let mut assets: Vec<AssetSpec> = Vec::new();
        let mut priors: Vec<Vec<Rational>> = Vec::new();
        let mut strikes: Option<Vec<Rational>> = None;
        let mut header_seen = false;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let content = content.trim();
            if content.is_empty() {
                continue;
            }
            if !header_seen {
                if content != SCHEMA_HEADER {
                    return Err(fail(
                        line,
                        format!("expected header {SCHEMA_HEADER:?}, found {content:?}"),
                    ));
                }
                header_seen = true;
                continue;
            }
            let mut tokens = content.split_whitespace();
            let keyword = tokens.next().expect("non-empty line has a token");
            let rest: Vec<&str> = tokens.collect();
            match keyword {
                "states" => {
                    if states.is_some() {
                        return Err(fail(line, "duplicate states line"));
                    }
                    if rest.is_empty() {
                        return Err(fail(line, "states line needs at least one label"));
                    }
                    let mut seen = BTreeSet::new();
                    for label in &rest {
                        if !seen.insert(*label) {
                            return Err(fail(line, format!("duplicate state label {label:?}")));
                        }
                    }
                    states = Some(rest.iter().map(|s| s.to_string()).collect());
                }
                "negligible" => {
                    let known = states
                        .as_ref()
                        .ok_or_else(|| fail(line, "negligible before states"))?;
                    if rest.is_empty() {
                        return Err(fail(line, "negligible line needs at least one label"));
                    }
                    let mut set = BTreeSet::new();
                    for label in &rest {
                        if !known.iter().any(|s| s == label) {
                            return Err(fail(line, format!("unknown state label {label:?}")));
                        }
                        set.insert(label.to_string());
                    }
                    negligible_sets.push(set);
                }
                "asset" => {
                    let known = states
                        .as_ref()
                        .ok_or_else(|| fail(line, "asset before states"))?;
                    let n = known.len();
                    if rest.len() != n + 3 {
                        return Err(fail(
                            line,
                            format!(
                                "asset line needs a name, {n} payoff entries, 'ask' and a price"
                            ),
                        ));
                    }
                    let name = rest[0].to_string();
                    if assets.iter().any(|a| a.name == name) {
                        return Err(fail(line, format!("duplicate asset name {name:?}")));
                    }
                    let payoff = rest[1..=n]
                        .iter()
                        .map(|t| parse_number(t, line))
                        .collect::<Result<Vec<_>, _>>()?;
                    if rest[n + 1] != "ask" {
                        return Err(fail(
                            line,
                            format!("expected keyword 'ask', found {:?}", rest[n + 1]),
                        ));
                    }
                    let ask = parse_number(rest[n + 2], line)?;
                    assets.push(AssetSpec { name, payoff, ask });
                }
                "prior" => {
                    let known = states
                        .as_ref()
                        .ok_or_else(|| fail(line, "prior before states"))?;
                    if rest.len() != known.len() {
                        return Err(fail(
                            line,
                            format!("prior needs {} entries, found {}", known.len(), rest.len()),
                        ));
                    }
                    let prior = rest
                        .iter()
                        .map(|t| parse_number(t, line))
                        .collect::<Result<Vec<_>, _>>()?;
                    PriorFamily::new(vec![prior.clone()]).map_err(|e| fail(line, e.to_string()))?;
                    priors.push(prior);
                }
                "strikes" => {
                    if strikes.is_some() {
                        return Err(fail(line, "duplicate strikes line"));
                    }
                    states
                        .as_ref()
                        .ok_or_else(|| fail(line, "strikes before states"))?;
                    let mut grid = rest
                        .iter()
                        .map(|t| parse_number(t, line))
                        .collect::<Result<Vec<_>, _>>()?;
                    if let Some(bad) = grid.iter().find(|k| k.is_negative()) {
                        return Err(fail(line, format!("negative strike {}", fraction_string(bad))));
                    }
                    grid.sort();
                    grid.dedup();
                    strikes = Some(grid);
                }
                other => {
                    return Err(fail(line, format!("unknown keyword {other:?}")));
                }
            }
        }
        if !header_seen {
            return Err(fail(1, format!("missing header {SCHEMA_HEADER:?}")));
        }
        let states = states.ok_or_else(|| fail(1, "missing states line"))?;
        Ok(MarketFile {
            states,
            negligible_sets,
            assets,
            priors,
            strikes,
        })
    }

    /// Canonical text form; `parse` of the result reproduces the value.
    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        out.push_str(SCHEMA_HEADER);
        out.push('\n');
        out.push_str("states ");
        out.push_str(&self.states.join(" "));
        out.push('\n');
        for set in &self.negligible_sets {
            // labels in declaration order
            let labels: Vec<&str> = self
                .states
                .iter()
                .filter(|s| set.contains(*s))
                .map(|s| s.as_str())
                .collect();
            out.push_str("negligible ");
            out.push_str(&labels.join(" "));
            out.push('\n');
        }
        for asset in &self.assets {
            out.push_str("asset ");
            out.push_str(&asset.name);
            for v in &asset.payoff {
                out.push(' ');
                out.push_str(&fraction_string(v));
            }
            out.push_str(" ask ");
            out.push_str(&fraction_string(&asset.ask));
            out.push('\n');
        }
        for prior in &self.priors {
            out.push_str("prior");
            for v in prior {
                out.push(' ');
                out.push_str(&fraction_string(v));
            }
            out.push('\n');
        }
        if let Some(strikes) = &self.strikes {
            out.push_str("strikes");
            for k in strikes {
                out.push(' ');
                out.push_str(&fraction_string(k));
            }
            out.push('\n');
        }
        out
    }

    /// Hex digest of the canonical serialization.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.to_canonical_string().as_bytes());
        let bytes = hasher.finalize();
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Assembles the market. The order comes from the negligible sets, from
    /// the prior family, or from both when they agree; with neither, the
    /// order is pointwise.
    pub fn build_market(&self) -> Result<Market, BuildError> {
        let space = SampleSpace::new(self.states.clone())?;
        let from_sets = if self.negligible_sets.is_empty() {
            None
        } else {
            Some(CommonOrder::from_negligible_sets(
                space.clone(),
                &self.negligible_sets,
            )?)
        };
        let from_priors = if self.priors.is_empty() {
            None
        } else {
            let family = PriorFamily::new(self.priors.clone())?;
            Some(CommonOrder::from_priors(space.clone(), &family)?)
        };
        let order = match (from_sets, from_priors) {
            (Some(a), Some(b)) => {
                if a != b {
                    return Err(BuildError::OrderConflict {
                        from_sets: a.core_labels().join(" "),
                        from_priors: b.core_labels().join(" "),
                    });
                }
                a
            }
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => CommonOrder::pointwise(space),
        };
        let assets = self
            .assets
            .iter()
            .map(|spec| Asset::new(spec.name.clone(), Claim::new(spec.payoff.clone()), spec.ask.clone()))
            .collect();
        Ok(Market::new(order, assets)?)
    }

    pub fn strike_grid(&self) -> Vec<Rational> {
        self.strikes.clone().unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Market(#[from] MarketError),
    #[error("negligible sets give core [{from_sets}] but priors give [{from_priors}]")]
    OrderConflict {
        from_sets: String,
        from_priors: String,
    },
}
