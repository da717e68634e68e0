//! Scenario files: one TOML document describing the lottery, the friction
//! profiles to compare, and the knobs for the oracle, sweep, incentive, and
//! ledger subcommands. Everything is validated at load time against the
//! library's own constructors; unknown keys are rejected.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use ledgerlotto::econ::{FrictionModel, LotterySpec, PayoutFormat};
use ledgerlotto::incentives::{CdsContract, IsolatedAttackSurface, MixedEconomySurface};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    lottery: LotterySection,
    #[serde(default)]
    friction: Vec<FrictionSection>,
    oracle: Option<OracleSection>,
    sweep: Option<SweepSection>,
    incentive: Option<IncentiveSection>,
    ledger: Option<LedgerSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LotterySection {
    combinations: u64,
    crowd_tickets: u64,
    ticket_price: f64,
    format: FormatName,
    fixed_prize: Option<f64>,
}

#[derive(Debug, Deserialize, PartialEq, Clone, Copy)]
#[serde(rename_all = "snake_case")]
enum FormatName {
    Parimutuel,
    FixedOdds,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrictionSection {
    name: String,
    invalid_at_full_coverage: f64,
    logistics_cost: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OracleSection {
    trials: u64,
    seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    n_min: u64,
    n_max: u64,
    step: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IncentiveSection {
    block_rewards: f64,
    reversible_transactions: Vec<f64>,
    cds_payoffs: Vec<f64>,
    attack_cost: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LedgerSection {
    block_capacity: usize,
    gas_per_tx: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct OracleSettings {
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepSettings {
    pub n_min: u64,
    pub n_max: u64,
    pub step: u64,
}

#[derive(Debug, Clone)]
pub struct IncentiveSettings {
    pub surface: MixedEconomySurface,
    pub attack_cost: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct LedgerSettings {
    pub block_capacity: usize,
    pub gas_per_tx: f64,
}

/// A fully validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub spec: LotterySpec,
    /// Named friction profiles, in file order (the order fixes curve colors).
    pub frictions: Vec<(String, FrictionModel)>,
    pub oracle: Option<OracleSettings>,
    pub sweep: Option<SweepSettings>,
    pub incentive: Option<IncentiveSettings>,
    pub ledger: Option<LedgerSettings>,
}

fn config_err(path: &Path, message: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{}: {message}", path.display()))
}

pub fn load(path: &Path) -> Result<Scenario, CliError> {
    // A missing or unparseable scenario is a configuration error (exit 2),
    // not an I/O failure; exit 3 is reserved for output writing.
    let text = fs::read_to_string(path)
        .map_err(|e| config_err(path, format_args!("cannot read scenario: {e}")))?;
    let file: ScenarioFile =
        toml::from_str(&text).map_err(|e| config_err(path, format_args!("invalid scenario: {e}")))?;

    let payout_format = match (file.lottery.format, file.lottery.fixed_prize) {
        (FormatName::Parimutuel, None) => PayoutFormat::Parimutuel,
        (FormatName::Parimutuel, Some(_)) => {
            return Err(config_err(
                path,
                "fixed_prize is only valid with format = \"fixed_odds\"",
            ))
        }
        (FormatName::FixedOdds, Some(prize)) => PayoutFormat::FixedOdds { prize },
        (FormatName::FixedOdds, None) => {
            return Err(config_err(
                path,
                "format = \"fixed_odds\" requires a fixed_prize",
            ))
        }
    };
    let spec = LotterySpec::new(
        file.lottery.combinations,
        file.lottery.crowd_tickets,
        file.lottery.ticket_price,
        payout_format,
    )
    .map_err(|e| config_err(path, format_args!("lottery: {e}")))?;

    let mut frictions = Vec::with_capacity(file.friction.len());
    for section in &file.friction {
        if frictions.iter().any(|(name, _)| name == &section.name) {
            return Err(config_err(
                path,
                format_args!("duplicate friction profile `{}`", section.name),
            ));
        }
        let model = FrictionModel::new(section.invalid_at_full_coverage, section.logistics_cost)
            .map_err(|e| {
                config_err(path, format_args!("friction `{}`: {e}", section.name))
            })?;
        frictions.push((section.name.clone(), model));
    }

    let oracle = match file.oracle {
        None => None,
        Some(section) => {
            if section.trials == 0 {
                return Err(config_err(path, "oracle: trials must be at least 1"));
            }
            Some(OracleSettings {
                trials: section.trials,
                seed: section.seed,
            })
        }
    };

    let sweep = match file.sweep {
        None => None,
        Some(section) => {
            if section.step == 0 {
                return Err(config_err(path, "sweep: step must be at least 1"));
            }
            if section.n_min > section.n_max {
                return Err(config_err(path, "sweep: n_min must not exceed n_max"));
            }
            if section.n_max > spec.combinations {
                return Err(config_err(
                    path,
                    format_args!(
                        "sweep: n_max {} exceeds the {} combinations",
                        section.n_max, spec.combinations
                    ),
                ));
            }
            Some(SweepSettings {
                n_min: section.n_min,
                n_max: section.n_max,
                step: section.step,
            })
        }
    };

    let incentive = match file.incentive {
        None => None,
        Some(section) => {
            let isolated =
                IsolatedAttackSurface::new(section.block_rewards, section.reversible_transactions)
                    .map_err(|e| config_err(path, format_args!("incentive: {e}")))?;
            let stack = section
                .cds_payoffs
                .iter()
                .enumerate()
                .map(|(i, &payoff)| {
                    CdsContract::new(format!("cds-{}", i + 1), format!("holder-{}", i + 1), payoff)
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| config_err(path, format_args!("incentive: {e}")))?;
            if !(section.attack_cost.is_finite() && section.attack_cost >= 0.0) {
                return Err(config_err(
                    path,
                    "incentive: attack_cost must be non-negative and finite",
                ));
            }
            Some(IncentiveSettings {
                surface: MixedEconomySurface::new(isolated, stack),
                attack_cost: section.attack_cost,
            })
        }
    };

    let ledger = match file.ledger {
        None => None,
        Some(section) => {
            if section.block_capacity == 0 {
                return Err(config_err(path, "ledger: block_capacity must be at least 1"));
            }
            if !(section.gas_per_tx.is_finite() && section.gas_per_tx >= 0.0) {
                return Err(config_err(
                    path,
                    "ledger: gas_per_tx must be non-negative and finite",
                ));
            }
            Some(LedgerSettings {
                block_capacity: section.block_capacity,
                gas_per_tx: section.gas_per_tx,
            })
        }
    };

    Ok(Scenario {
        spec,
        frictions,
        oracle,
        sweep,
        incentive,
        ledger,
    })
}

impl Scenario {
    pub fn require_parimutuel(&self, what: &str) -> Result<(), CliError> {
        match self.spec.payout_format {
            PayoutFormat::Parimutuel => Ok(()),
            PayoutFormat::FixedOdds { .. } => Err(CliError::Config(format!(
                "{what} applies to the parimutuel format only"
            ))),
        }
    }

    pub fn require_frictions(&self) -> Result<&[(String, FrictionModel)], CliError> {
        if self.frictions.is_empty() {
            return Err(CliError::Config(
                "scenario needs at least one [[friction]] profile".into(),
            ));
        }
        Ok(&self.frictions)
    }

    pub fn require_oracle(&self) -> Result<OracleSettings, CliError> {
        self.oracle
            .ok_or_else(|| CliError::Config("scenario is missing the [oracle] section".into()))
    }

    pub fn require_sweep(&self) -> Result<SweepSettings, CliError> {
        self.sweep
            .ok_or_else(|| CliError::Config("scenario is missing the [sweep] section".into()))
    }

    pub fn require_incentive(&self) -> Result<&IncentiveSettings, CliError> {
        self.incentive
            .as_ref()
            .ok_or_else(|| CliError::Config("scenario is missing the [incentive] section".into()))
    }

    pub fn require_ledger(&self) -> Result<LedgerSettings, CliError> {
        self.ledger
            .ok_or_else(|| CliError::Config("scenario is missing the [ledger] section".into()))
    }
}
