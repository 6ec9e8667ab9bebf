//! Analysis reports: deterministic machine documents and human rendering.
//!
//! Machine output is JSON with a fixed field order and exact fractions
//! only; identical inputs and seeds serialize byte for byte. Timing is a
//! human-format extra and never enters the machine document. The document
//! layout is published in `docs/report.schema.json`.

use serde::Serialize;

use crate::lp::LpEngine;
use crate::market::{Market, ValidationReport};
use crate::measures::{
    bubble, markup_decomposition, restricted_extension_check, MeasureCertificate, MeasuresError,
    PricingPolytope,
};
use crate::order::Claim;
use crate::power::{linear_completion, power_lower_bound, PowerEstimate, PriceOracle};
use crate::rational::{decimal_string, fraction_string, Rational};

pub const ANALYZE_SCHEMA: &str = "marketkit.analyze/v1";

fn frac(value: &Rational) -> String {
    fraction_string(value)
}

fn fracs(values: &[Rational]) -> Vec<String> {
    values.iter().map(frac).collect()
}

/// Fraction with a six-digit decimal, for human output.
pub fn human_value(value: &Rational) -> String {
    format!("{} ({})", fraction_string(value), decimal_string(value, 6))
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema: &'static str,
    pub mode: String,
    pub digest: String,
    pub market: MarketSummary,
    pub validation: ValidationSummary,
    pub polytope: PolytopeSummary,
    pub verdicts: VerdictSummary,
    pub certificate: CertificateSummary,
    pub assets: Vec<AssetRow>,
    pub power: PowerSection,
}

#[derive(Debug, Clone, Serialize)]
pub struct MarketSummary {
    pub states: Vec<String>,
    pub negligible_core: Vec<String>,
    pub assets: Vec<AssetQuote>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AssetQuote {
    pub name: String,
    pub payoff: Vec<String>,
    pub ask: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationSummary {
    pub accepted: bool,
    pub numeraire_price_ok: bool,
    pub numeraire_price: Option<String>,
    pub arbitrage_violations: Vec<ArbitrageEntry>,
    pub monotonicity_violations: Vec<MonotonicityEntry>,
    pub messages: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ArbitrageEntry {
    pub label: String,
    pub claim: Vec<String>,
    pub price: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityEntry {
    pub label: String,
    pub higher: Vec<String>,
    pub lower: Vec<String>,
    pub higher_price: String,
    pub lower_price: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolytopeSummary {
    pub nonempty: bool,
    pub support_profile: Vec<AtomEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AtomEntry {
    pub state: String,
    pub max_mass: String,
}

/// Three names for one finite-space verdict; they agree by construction
/// and the acceptance suite re-proves it.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictSummary {
    pub npb_holds: bool,
    pub nflvr_holds: bool,
    pub cash_additive_completion_exists: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateSummary {
    pub kind: String,
    pub measure: Option<Vec<String>>,
    pub floor: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AssetRow {
    pub name: String,
    pub price: String,
    pub cash_additive_price: String,
    pub fundamental_value_min: String,
    pub fundamental_value_max: String,
    pub markup: MarkupCell,
    pub bubble: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct MarkupCell {
    pub status: String,
    pub value: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerSection {
    pub completion: PowerRow,
    pub linear: Option<PowerRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerRow {
    pub lower_bound: String,
    pub probe_budget: usize,
    pub witness: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationDocument {
    pub schema: &'static str,
    pub mode: String,
    pub digest: String,
    pub validation: ValidationSummary,
}

pub const VALIDATE_SCHEMA: &str = "marketkit.validate/v1";

#[derive(Debug, Clone, Copy)]
pub struct AnalyzeOptions {
    pub samples: usize,
    pub probes: usize,
    pub seed: u64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            samples: 32,
            probes: 32,
            seed: 0,
        }
    }
}

pub enum AnalyzeOutcome {
    Report(Box<AnalysisReport>),
    /// Market rejected by validation; carries the validation document.
    Rejected(Box<ValidationDocument>),
}

#[derive(Debug)]
pub enum AnalyzeFailure {
    /// Validated market with an empty polytope or a sibling impossibility.
    Inconsistent(String),
    Internal(String),
}

impl std::fmt::Display for AnalyzeFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AnalyzeFailure::Inconsistent(m) => write!(f, "internal inconsistency: {m}"),
            AnalyzeFailure::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

fn mode_name(engine: &LpEngine) -> String {
    if engine.is_exact() { "exact" } else { "float" }.to_string()
}

pub fn validation_summary(report: &ValidationReport) -> ValidationSummary {
    ValidationSummary {
        accepted: report.accepted(),
        numeraire_price_ok: report.numeraire_price_ok,
        numeraire_price: report.numeraire_price.as_ref().map(frac),
        arbitrage_violations: report
            .arbitrage_violations
            .iter()
            .map(|v| ArbitrageEntry {
                label: v.label.clone(),
                claim: fracs(v.claim.values()),
                price: frac(&v.price),
            })
            .collect(),
        monotonicity_violations: report
            .monotonicity_violations
            .iter()
            .map(|v| MonotonicityEntry {
                label: v.label.clone(),
                higher: fracs(v.higher.values()),
                lower: fracs(v.lower.values()),
                higher_price: frac(&v.higher_price),
                lower_price: frac(&v.lower_price),
            })
            .collect(),
        messages: report.messages.clone(),
    }
}

fn market_summary(market: &Market) -> MarketSummary {
    MarketSummary {
        states: market.space().states().to_vec(),
        negligible_core: market
            .order()
            .core_labels()
            .iter()
            .map(|s| s.to_string())
            .collect(),
        assets: market
            .assets()
            .iter()
            .map(|a| AssetQuote {
                name: a.name().to_string(),
                payoff: fracs(a.payoff().values()),
                ask: frac(a.ask()),
            })
            .collect(),
    }
}

fn certificate_summary(certificate: &MeasureCertificate) -> CertificateSummary {
    match certificate {
        MeasureCertificate::StrictlyPositive { measure, floor } => CertificateSummary {
            kind: "strictly_positive".into(),
            measure: Some(fracs(measure)),
            floor: Some(frac(floor)),
        },
        MeasureCertificate::Pricing { measure } => CertificateSummary {
            kind: "pricing".into(),
            measure: Some(fracs(measure)),
            floor: None,
        },
        MeasureCertificate::Empty => CertificateSummary {
            kind: "empty".into(),
            measure: None,
            floor: None,
        },
    }
}

fn power_row(estimate: &PowerEstimate) -> PowerRow {
    PowerRow {
        lower_bound: frac(&estimate.lower_bound),
        probe_budget: estimate.probe_budget,
        witness: estimate
            .witness
            .iter()
            .map(|c| fracs(c.values()))
            .collect(),
    }
}

fn internal<E: std::fmt::Display>(e: E) -> AnalyzeFailure {
    AnalyzeFailure::Internal(e.to_string())
}

/// Full analysis pipeline: validation, polytope, verdicts, certificates,
/// the per-asset table and power estimates.
pub fn analyze(
    engine: &LpEngine,
    market: &Market,
    digest: String,
    strike_grid: &[Rational],
    options: &AnalyzeOptions,
) -> Result<AnalyzeOutcome, AnalyzeFailure> {
    let validation = market
        .validate(engine, options.samples, options.seed)
        .map_err(internal)?;
    let summary = validation_summary(&validation);
    if !summary.accepted {
        return Ok(AnalyzeOutcome::Rejected(Box::new(ValidationDocument {
            schema: VALIDATE_SCHEMA,
            mode: mode_name(engine),
            digest,
            validation: summary,
        })));
    }

    let polytope = match PricingPolytope::build(engine, market) {
        Ok(p) => p,
        Err(MeasuresError::InconsistentMarket) => {
            return Err(AnalyzeFailure::Inconsistent(
                "validated market yields an empty pricing polytope".into(),
            ))
        }
        Err(e) => return Err(internal(e)),
    };
    let npb = polytope.npb_check(engine).map_err(internal)?;
    let certificate = polytope.strictly_positive_measure(engine).map_err(internal)?;

    let mut asset_rows = Vec::new();
    for asset in market.assets() {
        let price = market.price(engine, asset.payoff()).map_err(internal)?.value;
        let cash_additive = market
            .cash_additive_part(engine, asset.payoff())
            .map_err(internal)?;
        let (fv_min, fv_max) = polytope
            .fundamental_value_bounds(engine, asset.payoff())
            .map_err(internal)?;
        let markup = if certificate.is_strictly_positive() {
            match markup_decomposition(engine, market, &certificate, asset.payoff()) {
                Ok(alpha) => MarkupCell {
                    status: "ok".into(),
                    value: Some(frac(&alpha)),
                },
                Err(MeasuresError::ZeroFundamentalValue) => MarkupCell {
                    status: "zero_fundamental_value".into(),
                    value: None,
                },
                Err(e) => return Err(internal(e)),
            }
        } else {
            MarkupCell {
                status: "no_certificate".into(),
                value: None,
            }
        };
        let beta = bubble(engine, market, &polytope, asset.payoff(), strike_grid)
            .map_err(internal)?;
        asset_rows.push(AssetRow {
            name: asset.name().to_string(),
            price: frac(&price),
            cash_additive_price: frac(&cash_additive),
            fundamental_value_min: frac(&fv_min),
            fundamental_value_max: frac(&fv_max),
            markup,
            bubble: frac(&beta),
        });
    }

    let completion_oracle = PriceOracle::completion(market.clone());
    let completion_estimate =
        power_lower_bound(&completion_oracle, engine, market, options.probes, options.seed)
            .map_err(internal)?;
    let linear_row = match linear_completion(engine, market).map_err(internal)? {
        Some(oracle) => {
            let estimate =
                power_lower_bound(&oracle, engine, market, options.probes, options.seed)
                    .map_err(internal)?;
            Some(power_row(&estimate))
        }
        None => None,
    };

    let report = AnalysisReport {
        schema: ANALYZE_SCHEMA,
        mode: mode_name(engine),
        digest,
        market: market_summary(market),
        validation: summary,
        polytope: PolytopeSummary {
            nonempty: true,
            support_profile: npb
                .profile
                .iter()
                .map(|a| AtomEntry {
                    state: a.state.clone(),
                    max_mass: frac(&a.max_mass),
                })
                .collect(),
        },
        verdicts: VerdictSummary {
            npb_holds: npb.holds,
            nflvr_holds: npb.holds,
            cash_additive_completion_exists: npb.holds,
        },
        certificate: certificate_summary(&certificate),
        assets: asset_rows,
        power: PowerSection {
            completion: power_row(&completion_estimate),
            linear: linear_row,
        },
    };
    Ok(AnalyzeOutcome::Report(Box::new(report)))
}

/// Restricted-extension document for the `extend` command.
#[derive(Debug, Clone, Serialize)]
pub struct ExtendDocument {
    pub schema: &'static str,
    pub mode: String,
    pub digest: String,
    pub extendable: bool,
    pub single_measure: bool,
    pub witnesses: Vec<ExtendWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtendWitness {
    pub claim: Vec<String>,
    pub truncated_support: String,
    pub positive: bool,
}

pub const EXTEND_SCHEMA: &str = "marketkit.extend/v1";

pub fn extend_document(
    engine: &LpEngine,
    market: &Market,
    digest: String,
    strike_grid: &[Rational],
) -> Result<ExtendDocument, AnalyzeFailure> {
    let polytope = match PricingPolytope::build(engine, market) {
        Ok(p) => p,
        Err(MeasuresError::InconsistentMarket) => {
            return Err(AnalyzeFailure::Inconsistent(
                "validated market yields an empty pricing polytope".into(),
            ))
        }
        Err(e) => return Err(internal(e)),
    };
    let report = restricted_extension_check(engine, market, &polytope, strike_grid)
        .map_err(internal)?;
    Ok(ExtendDocument {
        schema: EXTEND_SCHEMA,
        mode: mode_name(engine),
        digest,
        extendable: report.extendable,
        single_measure: report.single_measure,
        witnesses: report
            .witnesses
            .iter()
            .map(|w| ExtendWitness {
                claim: fracs(w.claim.values()),
                truncated_support: frac(&w.truncated_support),
                positive: w.positive,
            })
            .collect(),
    })
}

pub fn to_machine_json<T: Serialize>(document: &T) -> String {
    let mut text = serde_json::to_string_pretty(document).expect("reports serialize");
    text.push('\n');
    text
}

fn human_claim(values: &[String]) -> String {
    format!("[{}]", values.join(", "))
}

pub fn render_validation_human(document: &ValidationDocument) -> String {
    let mut out = String::new();
    out.push_str(&format!("digest: {}\n", document.digest));
    out.push_str(&format!("mode: {}\n", document.mode));
    let v = &document.validation;
    out.push_str(&format!(
        "validation: {}\n",
        if v.accepted { "accepted" } else { "REJECTED" }
    ));
    if let Some(price) = &v.numeraire_price {
        out.push_str(&format!(
            "  numeraire price: {} ({})\n",
            price,
            if v.numeraire_price_ok { "ok" } else { "must be 1" }
        ));
    }
    for a in &v.arbitrage_violations {
        out.push_str(&format!(
            "  arbitrage violation: {} priced {} on claim {}\n",
            a.label,
            a.price,
            human_claim(&a.claim)
        ));
    }
    for m in &v.monotonicity_violations {
        out.push_str(&format!(
            "  monotonicity violation: {} — {} priced {} under {} priced {}\n",
            m.label,
            human_claim(&m.higher),
            m.higher_price,
            human_claim(&m.lower),
            m.lower_price
        ));
    }
    for msg in &v.messages {
        out.push_str(&format!("  note: {msg}\n"));
    }
    out
}

pub fn render_analysis_human(report: &AnalysisReport, elapsed: Option<std::time::Duration>) -> String {
    let mut out = String::new();
    out.push_str(&format!("digest: {}\n", report.digest));
    out.push_str(&format!("mode: {}\n", report.mode));
    out.push_str(&format!("states: {}\n", report.market.states.join(" ")));
    let core = if report.market.negligible_core.is_empty() {
        "(none)".to_string()
    } else {
        report.market.negligible_core.join(" ")
    };
    out.push_str(&format!("negligible core: {core}\n"));
    out.push_str("assets:\n");
    for a in &report.market.assets {
        out.push_str(&format!(
            "  {}: payoff {} ask {}\n",
            a.name,
            human_claim(&a.payoff),
            a.ask
        ));
    }
    out.push_str(&format!(
        "validation: {} ({} arbitrage, {} monotonicity violations)\n",
        if report.validation.accepted {
            "accepted"
        } else {
            "REJECTED"
        },
        report.validation.arbitrage_violations.len(),
        report.validation.monotonicity_violations.len(),
    ));
    out.push_str(&format!(
        "pricing measures: {}\n",
        if report.polytope.nonempty {
            "nonempty"
        } else {
            "EMPTY"
        }
    ));
    out.push_str("  support profile:");
    for atom in &report.polytope.support_profile {
        out.push_str(&format!("  {}: {}", atom.state, atom.max_mass));
    }
    out.push('\n');
    out.push_str(&format!(
        "verdict: no pure bubble {}; cash-additive completion {}\n",
        if report.verdicts.npb_holds { "holds" } else { "FAILS" },
        if report.verdicts.cash_additive_completion_exists {
            "exists"
        } else {
            "does not exist"
        }
    ));
    match (&report.certificate.measure, &report.certificate.floor) {
        (Some(measure), Some(floor)) => out.push_str(&format!(
            "strictly positive measure: ({}) floor {}\n",
            measure.join(", "),
            floor
        )),
        _ => out.push_str("strictly positive measure: none\n"),
    }
    out.push_str("per-asset analysis:\n");
    out.push_str("  name | price | cash-additive | fundamental range | markup | bubble\n");
    for row in &report.assets {
        let markup = match (&row.markup.status[..], &row.markup.value) {
            ("ok", Some(v)) => v.clone(),
            (status, _) => status.replace('_', " "),
        };
        out.push_str(&format!(
            "  {} | {} | {} | [{}, {}] | {} | {}\n",
            row.name,
            row.price,
            row.cash_additive_price,
            row.fundamental_value_min,
            row.fundamental_value_max,
            markup,
            row.bubble
        ));
    }
    out.push_str(&format!(
        "market power (completion oracle): lower bound {} over {} random probes\n",
        report.power.completion.lower_bound, report.power.completion.probe_budget
    ));
    match &report.power.linear {
        Some(row) => out.push_str(&format!(
            "market power (linear completion): lower bound {}\n",
            row.lower_bound
        )),
        None => out.push_str("market power (linear completion): absent\n"),
    }
    if let Some(elapsed) = elapsed {
        out.push_str(&format!("elapsed: {:.3} ms\n", elapsed.as_secs_f64() * 1e3));
    }
    out
}

pub fn render_extend_human(document: &ExtendDocument) -> String {
    let mut out = String::new();
    out.push_str(&format!("digest: {}\n", document.digest));
    out.push_str(&format!(
        "extendable by call overwriting: {}\n",
        if document.extendable { "yes" } else { "NO" }
    ));
    out.push_str(&format!(
        "single measure positive on all probes: {}\n",
        if document.single_measure { "yes" } else { "NO" }
    ));
    for w in &document.witnesses {
        out.push_str(&format!(
            "  claim {}: truncated support {} ({})\n",
            human_claim(&w.claim),
            w.truncated_support,
            if w.positive { "positive" } else { "ZERO" }
        ));
    }
    out
}
