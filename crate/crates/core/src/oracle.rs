//! Independent checks of the closed-form economics: a seeded Monte Carlo
//! simulation of single lottery draws and an exact expectation computed by
//! enumerating the crowd-winner count. Neither path shares arithmetic with
//! [`crate::econ`]; agreement between the three routes is what the test
//! suite leans on.
//!
//! Determinism contract: [`estimate`] partitions trials into fixed-size
//! chunks, gives each chunk its own ChaCha8 stream derived from the config
//! seed and the chunk index, and reduces partial sums in chunk order. The
//! result is bit-identical for a given `(seed, trials)` no matter how many
//! worker threads Rayon uses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use thiserror::Error;

use crate::econ::{FrictionModel, LotterySpec, PayoutFormat};

/// Largest crowd the enumeration oracle will sum over before directing the
/// caller to the closed form.
pub const MAX_ENUMERATED_CROWD: u64 = 10_000;

/// Trials per ChaCha8 stream; fixed so the chunk layout (and therefore the
/// result) does not depend on the worker count.
const TRIALS_PER_STREAM: u64 = 16_384;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("ticket count {n} exceeds the {combinations} possible combinations")]
    TicketCountOutOfRange { n: u64, combinations: u64 },
    #[error("at least one trial is required")]
    NoTrials,
    #[error("the draw oracle models the parimutuel format only")]
    NotParimutuel,
    #[error(
        "crowd of {crowd} exceeds the enumeration limit of {MAX_ENUMERATED_CROWD}; \
         use the closed-form expectation instead"
    )]
    CrowdTooLarge { crowd: u64 },
}

/// A Monte Carlo run: which lottery, how many player tickets, how many
/// trials, and the random seed.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub spec: LotterySpec,
    pub friction: FrictionModel,
    pub n: u64,
    pub trials: u64,
    pub seed: u64,
}

impl OracleConfig {
    pub fn new(
        spec: LotterySpec,
        friction: FrictionModel,
        n: u64,
        trials: u64,
        seed: u64,
    ) -> Result<Self, OracleError> {
        if !matches!(spec.payout_format, PayoutFormat::Parimutuel) {
            return Err(OracleError::NotParimutuel);
        }
        if n > spec.combinations {
            return Err(OracleError::TicketCountOutOfRange {
                n,
                combinations: spec.combinations,
            });
        }
        if trials == 0 {
            return Err(OracleError::NoTrials);
        }
        Ok(Self {
            spec,
            friction,
            n,
            trials,
            seed,
        })
    }
}

/// First two moments of the sampled winnings, plus the observed win rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub mean_winnings: f64,
    /// Always `mean_winnings - n * p - I`, exactly.
    pub mean_gain: f64,
    pub std_error: f64,
    pub win_rate: f64,
    pub trials: u64,
    pub seed: u64,
}

// One draw's worth of sampling machinery, hoisted out of the trial loop.
struct DrawSampler {
    combinations: u64,
    n: u64,
    valid_rate: f64,
    jackpot: f64,
    crowd_hits: Option<Binomial>,
}

impl DrawSampler {
    fn new(n: u64, spec: &LotterySpec, friction: &FrictionModel) -> Self {
        assert!(
            n <= spec.combinations,
            "ticket count must not exceed the number of combinations"
        );
        let crowd_hits = if spec.crowd_tickets == 0 {
            None
        } else {
            // Crowd tickets are i.i.d. uniform picks, so the number landing
            // on the winning combination is Binomial(m, 1/N); sampling that
            // count directly is the same experiment without walking all m
            // tickets.
            Some(
                Binomial::new(spec.crowd_tickets, 1.0 / spec.combinations as f64)
                    .expect("valid binomial parameters"),
            )
        };
        Self {
            combinations: spec.combinations,
            n,
            valid_rate: 1.0
                - friction.invalid_at_full_coverage * (n as f64 / spec.combinations as f64),
            jackpot: spec.jackpot(n),
            crowd_hits,
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        // The player holds combinations 1..=n. The winning draw is uniform
        // and exchangeable over combinations, so holding the first n is as
        // good as holding any n distinct ones.
        let winning = rng.random_range(1..=self.combinations);
        if winning > self.n {
            return 0.0;
        }
        // Each ticket spoils independently with probability 1 - v(n), but
        // only the ticket on the winning combination can pay, so that is the
        // only validity draw that matters.
        if self.valid_rate < 1.0 && !rng.random_bool(self.valid_rate) {
            return 0.0;
        }
        let crowd_on_winner = match &self.crowd_hits {
            Some(dist) => dist.sample(rng),
            None => 0,
        };
        self.jackpot / (1 + crowd_on_winner) as f64
    }
}

/// Draw one lottery outcome and return the player's winnings for it.
///
/// Model: the player holds combinations `1..=n`; her ticket on the winning
/// combination is valid with probability `v(n)`; `m` crowd tickets land
/// i.i.d. uniformly; a uniform winning combination splits the jackpot
/// `p * (n + m)` equally among tickets that hit it.
pub fn simulate_draw<R: Rng + ?Sized>(
    rng: &mut R,
    n: u64,
    spec: &LotterySpec,
    friction: &FrictionModel,
) -> f64 {
    DrawSampler::new(n, spec, friction).draw(rng)
}

#[derive(Default, Clone, Copy)]
struct ChunkSums {
    sum: f64,
    sum_sq: f64,
    wins: u64,
}

/// Monte Carlo estimate of expected winnings and gain over `trials` draws.
///
/// Reproducible: the same config yields the same `OracleResult` bit for bit,
/// independent of the Rayon worker count (see the module docs).
pub fn estimate(config: &OracleConfig) -> OracleResult {
    let sampler = DrawSampler::new(config.n, &config.spec, &config.friction);
    let chunks = config.trials.div_ceil(TRIALS_PER_STREAM);
    let partials: Vec<ChunkSums> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(chunk);
            let lo = chunk * TRIALS_PER_STREAM;
            let hi = (lo + TRIALS_PER_STREAM).min(config.trials);
            let mut sums = ChunkSums::default();
            for _ in lo..hi {
                let winnings = sampler.draw(&mut rng);
                sums.sum += winnings;
                sums.sum_sq += winnings * winnings;
                if winnings > 0.0 {
                    sums.wins += 1;
                }
            }
            sums
        })
        .collect();

    // Reduce in chunk order; float addition is not associative, so the fixed
    // order is what makes the result thread-count independent.
    let mut total = ChunkSums::default();
    for part in &partials {
        total.sum += part.sum;
        total.sum_sq += part.sum_sq;
        total.wins += part.wins;
    }

    let t = config.trials as f64;
    let mean_winnings = total.sum / t;
    let variance = if config.trials > 1 {
        ((total.sum_sq - t * mean_winnings * mean_winnings) / (t - 1.0)).max(0.0)
    } else {
        0.0
    };
    OracleResult {
        mean_winnings,
        mean_gain: mean_winnings - config.n as f64 * config.spec.ticket_price
            - config.friction.logistics_cost,
        std_error: (variance / t).sqrt(),
        win_rate: total.wins as f64 / t,
        trials: config.trials,
        seed: config.seed,
    }
}

/// Exact expected winnings by enumerating the crowd-winner count `K`:
///
/// ```text
/// E[W_n] = v(n) * (n / N) * p * (n + m) * sum_{k=0}^{m} P(K = k) / (1 + k)
/// ```
///
/// with `P(K = k)` the Binomial(m, 1/N) mass, accumulated by the stable
/// term-ratio recurrence. Deliberately shares no code with the closed form
/// in [`crate::econ`].
pub fn exact_expected_winnings(
    n: u64,
    spec: &LotterySpec,
    friction: &FrictionModel,
) -> Result<f64, OracleError> {
    if !matches!(spec.payout_format, PayoutFormat::Parimutuel) {
        return Err(OracleError::NotParimutuel);
    }
    if n > spec.combinations {
        return Err(OracleError::TicketCountOutOfRange {
            n,
            combinations: spec.combinations,
        });
    }
    let m = spec.crowd_tickets;
    if m > MAX_ENUMERATED_CROWD {
        return Err(OracleError::CrowdTooLarge { crowd: m });
    }

    let big_n = spec.combinations as f64;
    let share = if spec.combinations == 1 {
        // Every crowd ticket lands on the single combination: K = m surely.
        1.0 / (m as f64 + 1.0)
    } else {
        let q = 1.0 / big_n;
        let ratio = q / (1.0 - q);
        let mut term = (1.0 - q).powi(m as i32); // P(K = 0)
        let mut acc = term;
        for k in 1..=m {
            term *= ratio * ((m - k + 1) as f64 / k as f64);
            acc += term / (k as f64 + 1.0);
        }
        acc
    };

    let valid_rate = 1.0 - friction.invalid_at_full_coverage * (n as f64 / big_n);
    Ok(valid_rate * (n as f64 / big_n) * spec.jackpot(n) * share)
}
