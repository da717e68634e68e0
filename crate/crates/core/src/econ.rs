//! Closed-form economics of partial and full lottery coverage.
//!
//! The model: a lottery has `N` distinct number combinations and a crowd that
//! has already bought `m` tickets, each an independent uniform pick over the
//! combinations (duplicates allowed). A strategic player buys `n` *distinct*
//! combinations at price `p` per ticket. Buying and storing physical tickets
//! spoils some of them: a ticket is valid with probability
//! `v(n) = 1 - b_total * n / N`, where `b_total` is the spoilage proportion
//! at full coverage, and the whole exercise carries a fixed logistics cost
//! `I`. A ledger-hosted lottery has `b_total = 0` and `I = 0`.
//!
//! Under the parimutuel format the jackpot is the full ticket revenue
//! `p * (n + m)` and is split equally among holders of the winning
//! combination, so the player's expected winnings are
//!
//! ```text
//! E[W_n] = v(n) * (n / N) * p * (n + m) * E[1 / (1 + K)]
//! ```
//!
//! where `K ~ Binomial(m, 1/N)` counts crowd tickets on the winning
//! combination. The share factor has the closed form
//! `E[1/(1+K)] = (N / (m+1)) * (1 - (1 - 1/N)^(m+1))`, which
//! [`oracle::exact_expected_winnings`](crate::oracle::exact_expected_winnings)
//! re-derives by direct summation.
//!
//! Expected gain is `E[G_n] = E[W_n] - n * p - I`, and that identity is kept
//! exact (same floating-point expression) everywhere a gain is produced.

use thiserror::Error;

/// Errors from the economics operations.
#[derive(Debug, Error, PartialEq)]
pub enum EconError {
    #[error("a lottery needs at least one combination")]
    NoCombinations,
    #[error("ticket price must be strictly positive and finite, got {0}")]
    InvalidTicketPrice(f64),
    #[error("fixed-odds prize must be non-negative and finite, got {0}")]
    InvalidPrize(f64),
    #[error("invalid-ticket proportion must lie in [0, 1], got {0}")]
    InvalidSpoilage(f64),
    #[error("logistics cost must be non-negative and finite, got {0}")]
    InvalidLogisticsCost(f64),
    #[error("ticket count {n} exceeds the {combinations} possible combinations")]
    TicketCountOutOfRange { n: u64, combinations: u64 },
    #[error("picks {picks} exceeds pool size {pool}")]
    PicksExceedPool { pool: u64, picks: u64 },
    #[error("binomial coefficient does not fit in 64 bits")]
    Overflow,
    #[error("operation applies to the parimutuel format only")]
    NotParimutuel,
    #[error("operation applies to the fixed-odds format only")]
    NotFixedOdds,
    #[error("sweep range requires n_min <= n_max, got {n_min}..={n_max}")]
    InvalidRange { n_min: u64, n_max: u64 },
    #[error("sweep step must be at least 1")]
    ZeroStep,
}

/// How winning tickets are paid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PayoutFormat {
    /// The jackpot (total ticket revenue) is split equally among holders of
    /// the winning combination.
    Parimutuel,
    /// Every valid ticket on the winning combination pays the fixed prize,
    /// regardless of how many tickets win.
    FixedOdds { prize: f64 },
}

/// A lottery's combinatorial size, crowd, ticket price, and payout format.
#[derive(Debug, Clone, PartialEq)]
pub struct LotterySpec {
    /// Number of distinct combinations `N`.
    pub combinations: u64,
    /// Tickets `m` already purchased by the crowd, i.i.d. uniform picks.
    pub crowd_tickets: u64,
    /// Price `p` per ticket, strictly positive.
    pub ticket_price: f64,
    pub payout_format: PayoutFormat,
}

impl LotterySpec {
    pub fn new(
        combinations: u64,
        crowd_tickets: u64,
        ticket_price: f64,
        payout_format: PayoutFormat,
    ) -> Result<Self, EconError> {
        if combinations == 0 {
            return Err(EconError::NoCombinations);
        }
        if !(ticket_price.is_finite() && ticket_price > 0.0) {
            return Err(EconError::InvalidTicketPrice(ticket_price));
        }
        if let PayoutFormat::FixedOdds { prize } = payout_format {
            if !(prize.is_finite() && prize >= 0.0) {
                return Err(EconError::InvalidPrize(prize));
            }
        }
        Ok(Self {
            combinations,
            crowd_tickets,
            ticket_price,
            payout_format,
        })
    }

    /// Parimutuel lottery with `combinations` possibilities, `crowd_tickets`
    /// crowd purchases, and the given ticket price.
    pub fn parimutuel(
        combinations: u64,
        crowd_tickets: u64,
        ticket_price: f64,
    ) -> Result<Self, EconError> {
        Self::new(
            combinations,
            crowd_tickets,
            ticket_price,
            PayoutFormat::Parimutuel,
        )
    }

    /// Total ticket revenue `p * (n + m)` when the player buys `n` tickets.
    /// Spoiled tickets are still paid for, so they stay in the pot.
    pub fn jackpot(&self, player_tickets: u64) -> f64 {
        self.ticket_price * (player_tickets + self.crowd_tickets) as f64
    }
}

/// Ticket spoilage and fixed logistics cost of a purchasing exercise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrictionModel {
    /// Proportion `b_total` of tickets invalid when the player buys all `N`
    /// combinations. The valid rate at `n` tickets is `1 - b_total * n / N`.
    pub invalid_at_full_coverage: f64,
    /// Fixed cost `I` of implementing the purchase/transport/storage exercise.
    pub logistics_cost: f64,
}

impl FrictionModel {
    pub fn new(invalid_at_full_coverage: f64, logistics_cost: f64) -> Result<Self, EconError> {
        if !(0.0..=1.0).contains(&invalid_at_full_coverage) {
            return Err(EconError::InvalidSpoilage(invalid_at_full_coverage));
        }
        if !(logistics_cost.is_finite() && logistics_cost >= 0.0) {
            return Err(EconError::InvalidLogisticsCost(logistics_cost));
        }
        Ok(Self {
            invalid_at_full_coverage,
            logistics_cost,
        })
    }

    /// The ledger implementation: no spoilage, no logistics cost.
    pub fn frictionless() -> Self {
        Self {
            invalid_at_full_coverage: 0.0,
            logistics_cost: 0.0,
        }
    }
}

/// One sampled point of a gain sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainPoint {
    pub n: u64,
    pub valid_rate: f64,
    pub expected_winnings: f64,
    pub expected_gain: f64,
}

/// Expected winnings and gain per strategy size over a contiguous range.
#[derive(Debug, Clone, PartialEq)]
pub struct GainCurve {
    pub spec: LotterySpec,
    pub friction: FrictionModel,
    pub points: Vec<GainPoint>,
}

impl GainCurve {
    /// Number of strict sign crossings along the curve. A point with exactly
    /// zero gain separates regions without counting as a crossing itself.
    pub fn sign_changes(&self) -> usize {
        self.points
            .windows(2)
            .filter(|w| w[0].expected_gain * w[1].expected_gain < 0.0)
            .count()
    }
}

/// Binomial coefficient `C(pool, picks)` in exact integer arithmetic.
///
/// Fails with [`EconError::Overflow`] when the result (or an intermediate
/// product) does not fit, rather than silently wrapping.
pub fn combinations(pool: u64, picks: u64) -> Result<u64, EconError> {
    if picks > pool {
        return Err(EconError::PicksExceedPool { pool, picks });
    }
    let picks = picks.min(pool - picks);
    let mut acc: u128 = 1;
    for i in 1..=picks {
        acc = acc
            .checked_mul((pool - picks + i) as u128)
            .ok_or(EconError::Overflow)?;
        // Exact: the running value is C(pool - picks + i, i).
        acc /= i as u128;
    }
    u64::try_from(acc).map_err(|_| EconError::Overflow)
}

/// Fraction of the player's `n` tickets that survive purchase, transport,
/// and storage: `1 - b_total * n / N`.
pub fn valid_ticket_rate(
    n: u64,
    spec: &LotterySpec,
    friction: &FrictionModel,
) -> Result<f64, EconError> {
    check_ticket_count(n, spec)?;
    Ok(valid_rate_unchecked(n, spec, friction))
}

fn valid_rate_unchecked(n: u64, spec: &LotterySpec, friction: &FrictionModel) -> f64 {
    1.0 - friction.invalid_at_full_coverage * (n as f64 / spec.combinations as f64)
}

fn check_ticket_count(n: u64, spec: &LotterySpec) -> Result<(), EconError> {
    if n > spec.combinations {
        return Err(EconError::TicketCountOutOfRange {
            n,
            combinations: spec.combinations,
        });
    }
    Ok(())
}

/// Expected reciprocal share `E[1 / (1 + K)]` for `K ~ Binomial(m, 1/N)`:
/// the factor by which crowd winners dilute the player's jackpot share.
///
/// Uses the closed form `(N / (m+1)) * (1 - (1 - 1/N)^(m+1))`, evaluated
/// through `ln_1p`/`exp_m1` so it stays accurate for large `N`.
pub fn expected_reciprocal_winners(crowd_tickets: u64, combinations: u64) -> f64 {
    assert!(combinations >= 1, "a lottery needs at least one combination");
    if crowd_tickets == 0 {
        // No crowd: the player is the sole possible winner.
        return 1.0;
    }
    let n = combinations as f64;
    let draws = (crowd_tickets + 1) as f64;
    let log_miss = (-1.0 / n).ln_1p();
    // For N = 1 this evaluates to 1 / (m + 1) exactly: every crowd ticket
    // lands on the single combination.
    (n / draws) * -(draws * log_miss).exp_m1()
}

/// Probability that the player holds a valid ticket on the winning
/// combination: `v(n) * n / N`.
pub fn win_probability(
    n: u64,
    spec: &LotterySpec,
    friction: &FrictionModel,
) -> Result<f64, EconError> {
    check_ticket_count(n, spec)?;
    Ok(valid_rate_unchecked(n, spec, friction) * (n as f64 / spec.combinations as f64))
}

/// Expected parimutuel winnings from holding `n` distinct combinations.
pub fn expected_winnings(
    n: u64,
    spec: &LotterySpec,
    friction: &FrictionModel,
) -> Result<f64, EconError> {
    let share = require_parimutuel(spec)?;
    check_ticket_count(n, spec)?;
    Ok(winnings_with_share(n, spec, friction, share))
}

/// Expected parimutuel gain: winnings minus ticket spend minus logistics.
pub fn expected_gain(
    n: u64,
    spec: &LotterySpec,
    friction: &FrictionModel,
) -> Result<f64, EconError> {
    let winnings = expected_winnings(n, spec, friction)?;
    Ok(gain_from_winnings(winnings, n, spec, friction))
}

fn require_parimutuel(spec: &LotterySpec) -> Result<f64, EconError> {
    match spec.payout_format {
        PayoutFormat::Parimutuel => Ok(expected_reciprocal_winners(
            spec.crowd_tickets,
            spec.combinations,
        )),
        PayoutFormat::FixedOdds { .. } => Err(EconError::NotParimutuel),
    }
}

// All parimutuel winnings flow through this one expression so that values
// produced by expected_winnings, gain_curve, and break_even are bit-identical.
fn winnings_with_share(n: u64, spec: &LotterySpec, friction: &FrictionModel, share: f64) -> f64 {
    valid_rate_unchecked(n, spec, friction)
        * (n as f64 / spec.combinations as f64)
        * spec.jackpot(n)
        * share
}

// Likewise the single source of the gain identity G = W - n*p - I.
fn gain_from_winnings(winnings: f64, n: u64, spec: &LotterySpec, friction: &FrictionModel) -> f64 {
    winnings - n as f64 * spec.ticket_price - friction.logistics_cost
}

/// Sweep expected winnings and gain over `n = n_min, n_min+step, ..= n_max`.
pub fn gain_curve(
    spec: &LotterySpec,
    friction: &FrictionModel,
    n_min: u64,
    n_max: u64,
    step: u64,
) -> Result<GainCurve, EconError> {
    let share = require_parimutuel(spec)?;
    if step == 0 {
        return Err(EconError::ZeroStep);
    }
    if n_min > n_max {
        return Err(EconError::InvalidRange { n_min, n_max });
    }
    check_ticket_count(n_max, spec)?;
    let points = (n_min..=n_max)
        .step_by(step as usize)
        .map(|n| {
            let winnings = winnings_with_share(n, spec, friction, share);
            GainPoint {
                n,
                valid_rate: valid_rate_unchecked(n, spec, friction),
                expected_winnings: winnings,
                expected_gain: gain_from_winnings(winnings, n, spec, friction),
            }
        })
        .collect();
    Ok(GainCurve {
        spec: spec.clone(),
        friction: *friction,
        points,
    })
}

/// Smallest `n` in `[0, N]` with strictly positive expected gain, if any.
/// A gain of exactly zero does not qualify.
pub fn break_even(spec: &LotterySpec, friction: &FrictionModel) -> Result<Option<u64>, EconError> {
    let share = require_parimutuel(spec)?;
    for n in 0..=spec.combinations {
        let winnings = winnings_with_share(n, spec, friction, share);
        if gain_from_winnings(winnings, n, spec, friction) > 0.0 {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Expected gain under fixed odds: each valid ticket on the winning draw
/// pays the fixed prize, so `E[G_n] = v(n) * n * Q / N - n * p - I`.
/// Independent of the crowd size by construction.
pub fn fixed_odds_expected_gain(
    n: u64,
    spec: &LotterySpec,
    friction: &FrictionModel,
) -> Result<f64, EconError> {
    let prize = match spec.payout_format {
        PayoutFormat::FixedOdds { prize } => prize,
        PayoutFormat::Parimutuel => return Err(EconError::NotFixedOdds),
    };
    check_ticket_count(n, spec)?;
    let winnings = valid_rate_unchecked(n, spec, friction)
        * (n as f64 * prize / spec.combinations as f64);
    Ok(gain_from_winnings(winnings, n, spec, friction))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn baseline_spec() -> LotterySpec {
        LotterySpec::parimutuel(1000, 1000, 1.0).unwrap()
    }

    fn brick_friction() -> FrictionModel {
        FrictionModel::new(0.1, 150.0).unwrap()
    }

    #[test]
    fn combinations_matches_six_of_fortynine() {
        assert_eq!(combinations(49, 6).unwrap(), 13_983_816);
    }

    #[test]
    fn combinations_trivial_cases() {
        assert_eq!(combinations(17, 0).unwrap(), 1);
        assert_eq!(combinations(7, 1).unwrap(), 7);
        assert_eq!(combinations(7, 7).unwrap(), 1);
    }

    #[test]
    fn combinations_domain_and_overflow_errors() {
        assert_eq!(
            combinations(5, 6),
            Err(EconError::PicksExceedPool { pool: 5, picks: 6 })
        );
        // C(67, 33) is the largest central-ish coefficient that fits in u64.
        assert_eq!(combinations(67, 33).unwrap(), 14_226_520_737_620_288_370);
        assert_eq!(combinations(68, 34), Err(EconError::Overflow));
    }

    #[test]
    fn valid_rate_examples() {
        let spec = baseline_spec();
        let none = FrictionModel::frictionless();
        assert_eq!(valid_ticket_rate(437, &spec, &none).unwrap(), 1.0);
        let brick = brick_friction();
        assert!((valid_ticket_rate(1000, &spec, &brick).unwrap() - 0.9).abs() < 1e-15);
        assert!((valid_ticket_rate(500, &spec, &brick).unwrap() - 0.95).abs() < 1e-15);
        assert!(valid_ticket_rate(1001, &spec, &brick).is_err());
    }

    #[test]
    fn reciprocal_winners_small_cases_exact() {
        assert_eq!(expected_reciprocal_winners(0, 7), 1.0);
        assert_eq!(expected_reciprocal_winners(1, 1), 0.5);
        // K ~ Binomial(1, 1/2): E[1/(1+K)] = 1/2 * 1 + 1/2 * 1/2.
        assert!((expected_reciprocal_winners(1, 2) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn reciprocal_winners_baseline_value() {
        // Frozen from a 50-digit exact binomial summation.
        let expected = 0.632_040_230_423_383_5;
        let got = expected_reciprocal_winners(1000, 1000);
        assert!(
            (got - expected).abs() / expected < 1e-12,
            "got {got}, expected {expected}"
        );
    }

    #[test]
    fn win_probability_consortium_case() {
        let spec = LotterySpec::parimutuel(7_100_000, 0, 1.0).unwrap();
        let none = FrictionModel::frictionless();
        let p = win_probability(2_400_000, &spec, &none).unwrap();
        assert!((p - 0.338_028_169_014_084_5).abs() < 1e-12);
        assert!((1.0 - p - 0.661_971_830_985_915_5).abs() < 1e-12);
        assert_eq!(win_probability(0, &spec, &none).unwrap(), 0.0);
        assert_eq!(win_probability(7_100_000, &spec, &none).unwrap(), 1.0);
    }

    #[test]
    fn expected_winnings_baseline_endpoint() {
        // Frozen from 50-digit evaluation of the closed form.
        let spec = baseline_spec();
        let none = FrictionModel::frictionless();
        let w = expected_winnings(1000, &spec, &none).unwrap();
        assert!((w - 1264.080_460_846_767).abs() < 1e-9, "got {w}");
        assert_eq!(expected_winnings(0, &spec, &none).unwrap(), 0.0);
    }

    #[test]
    fn expected_winnings_hand_enumeration() {
        // N=2, m=1, n=1: win prob 1/2, jackpot 2, share factor 3/4.
        let spec = LotterySpec::parimutuel(2, 1, 1.0).unwrap();
        let none = FrictionModel::frictionless();
        let w = expected_winnings(1, &spec, &none).unwrap();
        assert!((w - 0.75).abs() < 1e-15);
    }

    #[test]
    fn expected_gain_around_break_even() {
        let spec = baseline_spec();
        let none = FrictionModel::frictionless();
        // Frozen from 50-digit evaluation.
        let g583 = expected_gain(583, &spec, &none).unwrap();
        let g582 = expected_gain(582, &spec, &none).unwrap();
        assert!((g583 - 0.302_976_215_206_008).abs() < 1e-9, "got {g583}");
        assert!((g582 - -0.065_390_883_660_617_3).abs() < 1e-9, "got {g582}");
    }

    #[test]
    fn expected_gain_logistics_only() {
        let spec = baseline_spec();
        let friction = FrictionModel::new(0.0, 150.0).unwrap();
        assert_eq!(expected_gain(0, &spec, &friction).unwrap(), -150.0);
    }

    #[test]
    fn expected_gain_bricks_endpoint() {
        let spec = baseline_spec();
        let g = expected_gain(1000, &spec, &brick_friction()).unwrap();
        // Frozen from 50-digit evaluation.
        assert!((g - -12.327_585_237_909_6).abs() < 1e-9, "got {g}");
    }

    #[test]
    fn wrong_format_guards() {
        let fixed = LotterySpec::new(1000, 1000, 1.0, PayoutFormat::FixedOdds { prize: 500.0 })
            .unwrap();
        assert_eq!(
            expected_winnings(10, &fixed, &FrictionModel::frictionless()),
            Err(EconError::NotParimutuel)
        );
        assert_eq!(
            break_even(&fixed, &FrictionModel::frictionless()),
            Err(EconError::NotParimutuel)
        );
        let spec = baseline_spec();
        assert_eq!(
            fixed_odds_expected_gain(10, &spec, &FrictionModel::frictionless()),
            Err(EconError::NotFixedOdds)
        );
    }

    #[test]
    fn break_even_paper_instances() {
        let spec = baseline_spec();
        assert_eq!(
            break_even(&spec, &FrictionModel::frictionless()).unwrap(),
            Some(583)
        );
        assert_eq!(break_even(&spec, &brick_friction()).unwrap(), None);
        // Gain is bounded above by the jackpot share, so an absurd logistics
        // cost rules out every strategy.
        let absurd = FrictionModel::new(0.0, 10.0 * 1000.0 * 1.0).unwrap();
        assert_eq!(break_even(&spec, &absurd).unwrap(), None);
    }

    #[test]
    fn gain_curve_shapes() {
        let spec = baseline_spec();
        let none = FrictionModel::frictionless();
        let curve = gain_curve(&spec, &none, 0, 1000, 1).unwrap();
        assert_eq!(curve.points.len(), 1001);
        assert_eq!(curve.sign_changes(), 1);
        let first_positive = curve
            .points
            .iter()
            .find(|p| p.expected_gain > 0.0)
            .unwrap();
        assert_eq!(first_positive.n, 583);

        let brick = gain_curve(&spec, &brick_friction(), 0, 1000, 1).unwrap();
        assert!(brick.points.iter().all(|p| p.expected_gain < 0.0));

        let single = gain_curve(&spec, &brick_friction(), 0, 0, 1).unwrap();
        assert_eq!(single.points.len(), 1);
        assert_eq!(single.points[0].expected_gain, -150.0);
    }

    #[test]
    fn gain_curve_range_errors() {
        let spec = baseline_spec();
        let none = FrictionModel::frictionless();
        assert_eq!(
            gain_curve(&spec, &none, 5, 4, 1),
            Err(EconError::InvalidRange { n_min: 5, n_max: 4 })
        );
        assert_eq!(gain_curve(&spec, &none, 0, 10, 0), Err(EconError::ZeroStep));
        assert!(gain_curve(&spec, &none, 0, 1001, 1).is_err());
    }

    #[test]
    fn fixed_odds_examples() {
        let friction = FrictionModel::frictionless();
        // Actuarially fair prize: zero gain at every n.
        let fair = LotterySpec::new(1000, 0, 1.0, PayoutFormat::FixedOdds { prize: 1000.0 })
            .unwrap();
        for n in [0, 1, 583, 1000] {
            assert_eq!(fixed_odds_expected_gain(n, &fair, &friction).unwrap(), 0.0);
        }
        let double = LotterySpec::new(1000, 0, 1.0, PayoutFormat::FixedOdds { prize: 2000.0 })
            .unwrap();
        assert!((fixed_odds_expected_gain(10, &double, &friction).unwrap() - 10.0).abs() < 1e-12);
        // Sub-fair prize: negative for every n >= 1, whatever the crowd.
        let sub = LotterySpec::new(1000, 12345, 1.0, PayoutFormat::FixedOdds { prize: 900.0 })
            .unwrap();
        for n in [1, 100, 1000] {
            assert!(fixed_odds_expected_gain(n, &sub, &friction).unwrap() < 0.0);
        }
    }

    #[test]
    fn spec_validation() {
        assert_eq!(
            LotterySpec::parimutuel(0, 10, 1.0),
            Err(EconError::NoCombinations)
        );
        assert_eq!(
            LotterySpec::parimutuel(10, 10, 0.0),
            Err(EconError::InvalidTicketPrice(0.0))
        );
        assert_eq!(
            LotterySpec::new(10, 0, 1.0, PayoutFormat::FixedOdds { prize: -1.0 }),
            Err(EconError::InvalidPrize(-1.0))
        );
        assert_eq!(
            FrictionModel::new(1.5, 0.0),
            Err(EconError::InvalidSpoilage(1.5))
        );
        assert_eq!(
            FrictionModel::new(0.1, -2.0),
            Err(EconError::InvalidLogisticsCost(-2.0))
        );
    }
}
