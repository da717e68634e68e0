//! Upper bounds on the financial incentive to attack a ledger's consensus.
//!
//! On an isolated ledger the attacker's proceeds are capped by block rewards
//! plus the transactions she is positioned to reverse. Once smart-contract
//! execution becomes a necessary input to off-ledger financial structures,
//! credit-default-swap-style contracts paying out on contract failure add to
//! the incentive — and nothing caps how many such contracts can be written,
//! so the mixed-economy bound grows without inherent limit.
//!
//! Everything here is a sum of scalar money amounts: contracts carry their
//! payoff net of premium and funding cost, and the attack cost is a single
//! scalar. Correlations between proceeds are ignored, which keeps the
//! results additive upper bounds.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum IncentiveError {
    #[error("money amount must be non-negative and finite, got {0}")]
    InvalidAmount(f64),
    #[error("amplification is undefined when the isolated bound is zero")]
    UndefinedRatio,
}

fn check_amount(value: f64) -> Result<f64, IncentiveError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(IncentiveError::InvalidAmount(value))
    }
}

/// What an attacker can take from the ledger itself: block rewards plus the
/// cryptocurrency transactions she can reverse (double-spend exposure).
#[derive(Debug, Clone, PartialEq)]
pub struct IsolatedAttackSurface {
    pub block_rewards: f64,
    pub reversible_transactions: Vec<f64>,
}

impl IsolatedAttackSurface {
    pub fn new(
        block_rewards: f64,
        reversible_transactions: Vec<f64>,
    ) -> Result<Self, IncentiveError> {
        check_amount(block_rewards)?;
        for &tx in &reversible_transactions {
            check_amount(tx)?;
        }
        Ok(Self {
            block_rewards,
            reversible_transactions,
        })
    }
}

/// A contract that pays its holder when the smart contract fails to execute.
/// The payoff is net of premium and borrowing cost; contracts whose net
/// payoff would be negative create no attack incentive and are rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct CdsContract {
    pub id: String,
    pub holder: String,
    pub net_payoff_on_bad_state: f64,
}

impl CdsContract {
    pub fn new(
        id: impl Into<String>,
        holder: impl Into<String>,
        net_payoff_on_bad_state: f64,
    ) -> Result<Self, IncentiveError> {
        check_amount(net_payoff_on_bad_state)?;
        Ok(Self {
            id: id.into(),
            holder: holder.into(),
            net_payoff_on_bad_state,
        })
    }
}

/// The isolated surface plus a stack of CDS contracts written on a smart
/// contract whose execution the good state depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedEconomySurface {
    pub isolated: IsolatedAttackSurface,
    pub cds_stack: Vec<CdsContract>,
}

impl MixedEconomySurface {
    pub fn new(isolated: IsolatedAttackSurface, cds_stack: Vec<CdsContract>) -> Self {
        Self {
            isolated,
            cds_stack,
        }
    }
}

/// Verdict on whether an attack pays at a given cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackAppraisal {
    pub incentive_bound: f64,
    pub attack_cost: f64,
    /// `incentive_bound - attack_cost`, exactly.
    pub net_margin: f64,
    /// True iff the margin is strictly positive.
    pub profitable: bool,
}

/// Block rewards plus the sum of reversible transactions.
pub fn isolated_bound(surface: &IsolatedAttackSurface) -> f64 {
    surface
        .reversible_transactions
        .iter()
        .fold(surface.block_rewards, |acc, tx| acc + tx)
}

/// The isolated bound plus the sum of net CDS payoffs. Appending a contract
/// of payoff `P` raises this by exactly `P`.
pub fn mixed_bound(surface: &MixedEconomySurface) -> f64 {
    surface
        .cds_stack
        .iter()
        .fold(isolated_bound(&surface.isolated), |acc, cds| {
            acc + cds.net_payoff_on_bad_state
        })
}

/// Ratio of the mixed-economy bound to the isolated bound.
pub fn amplification(surface: &MixedEconomySurface) -> Result<f64, IncentiveError> {
    let isolated = isolated_bound(&surface.isolated);
    if isolated == 0.0 {
        return Err(IncentiveError::UndefinedRatio);
    }
    Ok(mixed_bound(surface) / isolated)
}

/// Compare the mixed-economy incentive bound against a scalar attack cost.
pub fn appraise(
    surface: &MixedEconomySurface,
    attack_cost: f64,
) -> Result<AttackAppraisal, IncentiveError> {
    check_amount(attack_cost)?;
    let incentive_bound = mixed_bound(surface);
    let net_margin = incentive_bound - attack_cost;
    Ok(AttackAppraisal {
        incentive_bound,
        attack_cost,
        net_margin,
        profitable: net_margin > 0.0,
    })
}
