//! Economic simulation of full-coverage ("Trump Ticket") lottery strategies on
//! bricks-and-mortar versus distributed-ledger rails, plus the surrounding
//! risk machinery: Monte Carlo and enumeration oracles for the closed forms,
//! attack-incentive bounds for a mixed crypto/fiat economy, and a minimal
//! deterministic ledger hosting a smart-contract lottery and transaction
//! cascades.
//!
//! The crate is organised around four modules:
//!
//! - [`econ`] — closed-form expected winnings and gains for parimutuel and
//!   fixed-odds lotteries under a linear ticket-spoilage friction model.
//! - [`oracle`] — independent verification of the closed forms by exact
//!   binomial enumeration and by seeded, reproducible Monte Carlo simulation.
//! - [`incentives`] — upper bounds on the financial incentive to attack a
//!   ledger, isolated versus CDS-amplified.
//! - [`ledger`] — a single-sequencer simulated chain with a transaction pool,
//!   dependency-aware block formation, a smart-contract lottery, and
//!   dependent-transaction cascades.
//!
//! All operations are deterministic: random processes are driven by caller
//! supplied 64-bit seeds through the ChaCha8 generator, and parallel Monte
//! Carlo reductions are independent of the worker-thread count.

pub mod econ;
pub mod incentives;
pub mod ledger;
pub mod oracle;
