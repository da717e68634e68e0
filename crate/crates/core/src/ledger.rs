//! A minimal deterministic ledger: a single honest sequencer moving
//! transactions from a FIFO pool into capacity-bounded blocks, with a
//! smart-contract parimutuel lottery and dependency-aware transaction
//! cascades on top.
//!
//! There is no consensus protocol, no forks, and no cryptography here; the
//! point is the economics. Blocks admit a transaction once its dependencies
//! are on-chain or scheduled earlier in the block being formed, so a
//! dependent cascade completes in `ceil(len / capacity)` blocks no matter
//! how the dependency graph is shaped. Every source of randomness (crowd
//! ticket picks, the winning draw) is a caller-supplied 64-bit seed fed to
//! ChaCha8, which makes whole-ledger runs replayable.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::econ::{LotterySpec, PayoutFormat};

pub type TxId = String;

#[derive(Debug, Error, PartialEq)]
pub enum LedgerError {
    #[error("block capacity must be at least 1")]
    ZeroCapacity,
    #[error("gas fee must be non-negative and finite, got {0}")]
    InvalidGasFee(f64),
    #[error("transaction id `{0}` already exists on the ledger")]
    DuplicateTxId(String),
    #[error("transaction `{tx}` depends on unknown transaction `{dependency}`")]
    UnknownDependency { tx: String, dependency: String },
    #[error("dependency cycle involving transaction `{0}`")]
    DependencyCycle(String),
    #[error("contract `{0}` is already deployed")]
    DuplicateContract(String),
    #[error("unknown contract `{0}`")]
    UnknownContract(String),
    #[error("contract `{0}` is not open")]
    ContractNotOpen(String),
    #[error("the ledger lottery supports the parimutuel format only")]
    NotParimutuel,
    #[error("combination {combination} is outside 1..={combinations}")]
    CombinationOutOfRange { combination: u64, combinations: u64 },
    #[error("owner `{owner}` already holds combination {combination} on `{contract}`")]
    DuplicateTicket {
        contract: String,
        owner: String,
        combination: u64,
    },
    #[error(
        "owner `{owner}` can cover only {available} more combinations on `{contract}`, \
         requested {requested}"
    )]
    InsufficientCombinations {
        contract: String,
        owner: String,
        requested: u64,
        available: u64,
    },
    #[error("cannot draw `{0}` while ticket purchases for it are still pending")]
    PendingPurchases(String),
}

/// What a transaction does when executed.
#[derive(Debug, Clone, PartialEq)]
pub enum TxKind {
    /// Buy one combination on a lottery contract for the named owner.
    TicketPurchase {
        contract: String,
        owner: String,
        combination: u64,
    },
    /// Invoke a smart contract; carries no lottery-specific payload.
    ScTrigger { contract: String },
    /// Plain value transfer.
    Transfer { amount: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transaction {
    pub id: TxId,
    pub kind: TxKind,
    /// Flat execution microfee charged for inclusion.
    pub gas_fee: f64,
    pub depends_on: BTreeSet<TxId>,
}

impl Transaction {
    /// Transaction with no dependencies.
    pub fn new(id: impl Into<TxId>, kind: TxKind, gas_fee: f64) -> Self {
        Self {
            id: id.into(),
            kind,
            gas_fee,
            depends_on: BTreeSet::new(),
        }
    }

    pub fn with_dependencies<I, S>(mut self, deps: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<TxId>,
    {
        self.depends_on = deps.into_iter().map(Into::into).collect();
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub height: u64,
    pub transactions: Vec<Transaction>,
}

/// Lifecycle of a lottery contract.
#[derive(Debug, Clone, PartialEq)]
pub enum LotteryPhase {
    Open,
    Drawn {
        winning_combination: u64,
        /// `(owner, amount)` in winner order. The final entry absorbs the
        /// floating-point remainder of the equal split, so summing the
        /// amounts in this order returns the jackpot exactly.
        payouts: Vec<(String, f64)>,
    },
}

/// An on-ledger parimutuel lottery: a ticket book and a draw phase.
#[derive(Debug, Clone, PartialEq)]
pub struct SmartContractLottery {
    spec: LotterySpec,
    /// combination -> owners holding a ticket on it, in purchase order.
    tickets: BTreeMap<u64, Vec<String>>,
    tickets_sold: u64,
    phase: LotteryPhase,
}

impl SmartContractLottery {
    fn new(spec: LotterySpec) -> Self {
        Self {
            spec,
            tickets: BTreeMap::new(),
            tickets_sold: 0,
            phase: LotteryPhase::Open,
        }
    }

    pub fn spec(&self) -> &LotterySpec {
        &self.spec
    }

    pub fn phase(&self) -> &LotteryPhase {
        &self.phase
    }

    pub fn is_open(&self) -> bool {
        matches!(self.phase, LotteryPhase::Open)
    }

    /// Tickets recorded on-chain so far (pending purchases not included).
    pub fn tickets_sold(&self) -> u64 {
        self.tickets_sold
    }

    /// Total ticket revenue at stake: price times tickets sold.
    pub fn jackpot(&self) -> f64 {
        self.spec.ticket_price * self.tickets_sold as f64
    }

    pub fn holders_of(&self, combination: u64) -> &[String] {
        self.tickets
            .get(&combination)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn tickets_held_by(&self, owner: &str) -> u64 {
        self.tickets
            .values()
            .map(|owners| owners.iter().filter(|o| o.as_str() == owner).count() as u64)
            .sum()
    }

    pub fn winning_combination(&self) -> Option<u64> {
        match &self.phase {
            LotteryPhase::Open => None,
            LotteryPhase::Drawn {
                winning_combination,
                ..
            } => Some(*winning_combination),
        }
    }

    pub fn payouts(&self) -> Option<&[(String, f64)]> {
        match &self.phase {
            LotteryPhase::Open => None,
            LotteryPhase::Drawn { payouts, .. } => Some(payouts),
        }
    }

    /// Amount paid to `owner` by the draw, zero if it has not won (or the
    /// contract is still open).
    pub fn payout_to(&self, owner: &str) -> f64 {
        self.payouts()
            .into_iter()
            .flatten()
            .find(|(o, _)| o == owner)
            .map(|(_, amount)| *amount)
            .unwrap_or(0.0)
    }

    fn record_ticket(&mut self, owner: String, combination: u64) {
        debug_assert!(self.is_open(), "purchases execute only while open");
        self.tickets.entry(combination).or_default().push(owner);
        self.tickets_sold += 1;
    }
}

/// Split the jackpot equally among winners. The last winner's amount is
/// computed as jackpot minus the sum of the other shares, so the payouts sum
/// to the jackpot exactly when added in order.
fn split_jackpot(jackpot: f64, winners: &[String]) -> Vec<(String, f64)> {
    match winners {
        [] => Vec::new(),
        [sole] => vec![(sole.clone(), jackpot)],
        _ => {
            let share = jackpot / winners.len() as f64;
            let mut paid = 0.0;
            let mut payouts = Vec::with_capacity(winners.len());
            for owner in &winners[..winners.len() - 1] {
                payouts.push((owner.clone(), share));
                paid += share;
            }
            payouts.push((winners[winners.len() - 1].clone(), jackpot - paid));
            payouts
        }
    }
}

/// A self-contained batch of transactions whose dependency graph has been
/// checked acyclic. Stored in a stable topological order so it can be
/// submitted front to back.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeSpec {
    transactions: Vec<Transaction>,
}

impl CascadeSpec {
    /// Validate ids, internal dependencies, and acyclicity. Transactions are
    /// reordered topologically, keeping the input order among independent
    /// transactions.
    pub fn new(transactions: Vec<Transaction>) -> Result<Self, LedgerError> {
        let mut index: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, tx) in transactions.iter().enumerate() {
            if index.insert(tx.id.as_str(), i).is_some() {
                return Err(LedgerError::DuplicateTxId(tx.id.clone()));
            }
        }
        let mut indegree = vec![0usize; transactions.len()];
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); transactions.len()];
        for (i, tx) in transactions.iter().enumerate() {
            for dep in &tx.depends_on {
                if dep == &tx.id {
                    return Err(LedgerError::DependencyCycle(tx.id.clone()));
                }
                let &j = index
                    .get(dep.as_str())
                    .ok_or_else(|| LedgerError::UnknownDependency {
                        tx: tx.id.clone(),
                        dependency: dep.clone(),
                    })?;
                indegree[i] += 1;
                children[j].push(i);
            }
        }

        // Kahn's algorithm with a min-heap on the original position keeps the
        // order stable.
        let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = indegree
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 0)
            .map(|(i, _)| std::cmp::Reverse(i))
            .collect();
        let mut order = Vec::with_capacity(transactions.len());
        while let Some(std::cmp::Reverse(i)) = ready.pop() {
            order.push(i);
            for &child in &children[i] {
                indegree[child] -= 1;
                if indegree[child] == 0 {
                    ready.push(std::cmp::Reverse(child));
                }
            }
        }
        if order.len() < transactions.len() {
            let stuck = indegree.iter().position(|&d| d > 0).expect("cycle member");
            return Err(LedgerError::DependencyCycle(transactions[stuck].id.clone()));
        }

        let mut slots: Vec<Option<Transaction>> = transactions.into_iter().map(Some).collect();
        let transactions = order
            .into_iter()
            .map(|i| slots[i].take().expect("each index used once"))
            .collect();
        Ok(Self { transactions })
    }

    /// `count` transactions where each depends on the previous one.
    pub fn chain(count: usize, gas_per_tx: f64) -> CascadeSpec {
        let txs = (0..count)
            .map(|i| {
                let tx = Transaction::new(format!("tx{i}"), Self::demo_kind(), gas_per_tx);
                if i == 0 {
                    tx
                } else {
                    tx.with_dependencies([format!("tx{}", i - 1)])
                }
            })
            .collect();
        Self::new(txs).expect("chain topology is acyclic")
    }

    /// One trigger transaction and `count - 1` transactions depending on it.
    pub fn star(count: usize, gas_per_tx: f64) -> CascadeSpec {
        let txs = (0..count)
            .map(|i| {
                let tx = Transaction::new(format!("tx{i}"), Self::demo_kind(), gas_per_tx);
                if i == 0 {
                    tx
                } else {
                    tx.with_dependencies(["tx0".to_string()])
                }
            })
            .collect();
        Self::new(txs).expect("star topology is acyclic")
    }

    /// `count` transactions with no dependencies at all.
    pub fn independent(count: usize, gas_per_tx: f64) -> CascadeSpec {
        let txs = (0..count)
            .map(|i| Transaction::new(format!("tx{i}"), Self::demo_kind(), gas_per_tx))
            .collect();
        Self::new(txs).expect("independent topology is acyclic")
    }

    fn demo_kind() -> TxKind {
        TxKind::ScTrigger {
            contract: "cascade".to_string(),
        }
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }
}

/// Result of pushing a cascade through the ledger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeOutcome {
    pub blocks_to_complete: u64,
    pub total_gas: f64,
}

/// The simulated chain: blocks, a FIFO transaction pool, and the deployed
/// lottery contracts. A transaction lives in exactly one of the pool or the
/// chain.
#[derive(Debug, Clone, PartialEq)]
pub struct LedgerState {
    chain: Vec<Block>,
    pending: VecDeque<Transaction>,
    block_capacity: usize,
    contracts: BTreeMap<String, SmartContractLottery>,
    /// Ids ever submitted (pool or chain); duplicate submissions are refused.
    known_ids: BTreeSet<TxId>,
    onchain_ids: BTreeSet<TxId>,
    /// (contract, owner) -> combinations claimed, across pool and chain.
    claimed: BTreeMap<(String, String), BTreeSet<u64>>,
}

impl LedgerState {
    pub fn new(block_capacity: usize) -> Result<Self, LedgerError> {
        if block_capacity == 0 {
            return Err(LedgerError::ZeroCapacity);
        }
        Ok(Self {
            chain: Vec::new(),
            pending: VecDeque::new(),
            block_capacity,
            contracts: BTreeMap::new(),
            known_ids: BTreeSet::new(),
            onchain_ids: BTreeSet::new(),
            claimed: BTreeMap::new(),
        })
    }

    pub fn chain(&self) -> &[Block] {
        &self.chain
    }

    pub fn pending_count(&self) -> usize {
        self.pending.len()
    }

    pub fn block_capacity(&self) -> usize {
        self.block_capacity
    }

    pub fn contract(&self, contract_id: &str) -> Option<&SmartContractLottery> {
        self.contracts.get(contract_id)
    }

    /// Register an open parimutuel lottery under `contract_id`.
    pub fn deploy_lottery(
        &mut self,
        contract_id: impl Into<String>,
        spec: LotterySpec,
    ) -> Result<(), LedgerError> {
        let contract_id = contract_id.into();
        if !matches!(spec.payout_format, PayoutFormat::Parimutuel) {
            return Err(LedgerError::NotParimutuel);
        }
        if self.contracts.contains_key(&contract_id) {
            return Err(LedgerError::DuplicateContract(contract_id));
        }
        self.contracts
            .insert(contract_id, SmartContractLottery::new(spec));
        Ok(())
    }

    /// Append a transaction to the pool after validating it against the
    /// current state. On any error the state is unchanged.
    pub fn submit_transaction(&mut self, tx: Transaction) -> Result<(), LedgerError> {
        if !(tx.gas_fee.is_finite() && tx.gas_fee >= 0.0) {
            return Err(LedgerError::InvalidGasFee(tx.gas_fee));
        }
        if self.known_ids.contains(&tx.id) {
            return Err(LedgerError::DuplicateTxId(tx.id));
        }
        for dep in &tx.depends_on {
            if dep == &tx.id {
                return Err(LedgerError::DependencyCycle(tx.id));
            }
            if !self.known_ids.contains(dep) {
                return Err(LedgerError::UnknownDependency {
                    tx: tx.id,
                    dependency: dep.clone(),
                });
            }
        }
        if let TxKind::TicketPurchase {
            contract,
            owner,
            combination,
        } = &tx.kind
        {
            let lottery = self
                .contracts
                .get(contract)
                .ok_or_else(|| LedgerError::UnknownContract(contract.clone()))?;
            if !lottery.is_open() {
                return Err(LedgerError::ContractNotOpen(contract.clone()));
            }
            let combinations = lottery.spec.combinations;
            if *combination == 0 || *combination > combinations {
                return Err(LedgerError::CombinationOutOfRange {
                    combination: *combination,
                    combinations,
                });
            }
            let key = (contract.clone(), owner.clone());
            if self
                .claimed
                .get(&key)
                .is_some_and(|set| set.contains(combination))
            {
                return Err(LedgerError::DuplicateTicket {
                    contract: contract.clone(),
                    owner: owner.clone(),
                    combination: *combination,
                });
            }
            self.claimed.entry(key).or_default().insert(*combination);
        }
        self.known_ids.insert(tx.id.clone());
        self.pending.push_back(tx);
        Ok(())
    }

    /// Move up to `block_capacity` eligible transactions from the pool into
    /// a new block and execute them. A transaction is eligible when every
    /// dependency is on-chain or already scheduled earlier in this block;
    /// ineligible transactions keep their pool position. An empty block is
    /// allowed.
    pub fn form_block(&mut self) -> &Block {
        let mut scheduled: Vec<Transaction> = Vec::new();
        let mut scheduled_ids: BTreeSet<TxId> = BTreeSet::new();
        let mut rest: VecDeque<Transaction> = VecDeque::with_capacity(self.pending.len());
        while let Some(tx) = self.pending.pop_front() {
            let eligible = scheduled.len() < self.block_capacity
                && tx
                    .depends_on
                    .iter()
                    .all(|dep| self.onchain_ids.contains(dep) || scheduled_ids.contains(dep));
            if eligible {
                scheduled_ids.insert(tx.id.clone());
                scheduled.push(tx);
            } else {
                rest.push_back(tx);
            }
        }
        self.pending = rest;

        for tx in &scheduled {
            self.onchain_ids.insert(tx.id.clone());
            if let TxKind::TicketPurchase {
                contract,
                owner,
                combination,
            } = &tx.kind
            {
                self.contracts
                    .get_mut(contract)
                    .expect("purchase validated at submission")
                    .record_ticket(owner.clone(), *combination);
            }
        }

        self.chain.push(Block {
            height: self.chain.len() as u64,
            transactions: scheduled,
        });
        self.chain.last().expect("block just appended")
    }

    /// Form blocks until the pool drains; returns how many were formed.
    /// Unlike [`form_block`](Self::form_block) this never appends an empty
    /// block.
    pub fn form_blocks_until_empty(&mut self) -> u64 {
        let mut formed = 0;
        while !self.pending.is_empty() {
            self.form_block();
            formed += 1;
        }
        formed
    }

    /// Submit `n` ticket purchases for `owner`, covering the lowest-numbered
    /// combinations the owner does not already hold (pool included). Each
    /// transaction carries `gas_per_tx`, so the strategy's total friction
    /// cost is exactly `n * gas_per_tx` — there is no spoilage path.
    pub fn buy_trump_ticket(
        &mut self,
        contract_id: &str,
        owner: &str,
        n: u64,
        gas_per_tx: f64,
    ) -> Result<(), LedgerError> {
        if !(gas_per_tx.is_finite() && gas_per_tx >= 0.0) {
            return Err(LedgerError::InvalidGasFee(gas_per_tx));
        }
        let lottery = self
            .contracts
            .get(contract_id)
            .ok_or_else(|| LedgerError::UnknownContract(contract_id.to_string()))?;
        if !lottery.is_open() {
            return Err(LedgerError::ContractNotOpen(contract_id.to_string()));
        }
        let combinations = lottery.spec.combinations;
        let key = (contract_id.to_string(), owner.to_string());
        let held = self.claimed.get(&key);
        let available = combinations - held.map_or(0, |set| set.len() as u64);
        if n > available {
            return Err(LedgerError::InsufficientCombinations {
                contract: contract_id.to_string(),
                owner: owner.to_string(),
                requested: n,
                available,
            });
        }
        let picks: Vec<u64> = (1..=combinations)
            .filter(|c| held.is_none_or(|set| !set.contains(c)))
            .take(n as usize)
            .collect();
        for combination in picks {
            let id = format!("{contract_id}:{owner}:c{combination}");
            if self.known_ids.contains(&id) {
                return Err(LedgerError::DuplicateTxId(id));
            }
            self.submit_transaction(Transaction::new(
                id,
                TxKind::TicketPurchase {
                    contract: contract_id.to_string(),
                    owner: owner.to_string(),
                    combination,
                },
                gas_per_tx,
            ))?;
        }
        Ok(())
    }

    /// Submit `count` crowd purchases, one per synthetic owner `crowd-{j}`,
    /// each picking a combination uniformly at random (ChaCha8 on `seed`).
    /// Duplicate combinations across owners are allowed, exactly as in the
    /// analytic crowd model.
    pub fn submit_crowd_purchases(
        &mut self,
        contract_id: &str,
        count: u64,
        gas_per_tx: f64,
        seed: u64,
    ) -> Result<(), LedgerError> {
        let lottery = self
            .contracts
            .get(contract_id)
            .ok_or_else(|| LedgerError::UnknownContract(contract_id.to_string()))?;
        let combinations = lottery.spec.combinations;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for j in 0..count {
            let combination = rng.random_range(1..=combinations);
            let owner = format!("crowd-{j}");
            self.submit_transaction(Transaction::new(
                format!("{contract_id}:{owner}:c{combination}"),
                TxKind::TicketPurchase {
                    contract: contract_id.to_string(),
                    owner,
                    combination,
                },
                gas_per_tx,
            ))?;
        }
        Ok(())
    }

    /// Draw the winning combination (uniform, ChaCha8 on `seed`) and split
    /// the jackpot equally among its holders. Requires every submitted
    /// ticket purchase for the contract to be on-chain already.
    pub fn run_draw(
        &mut self,
        contract_id: &str,
        seed: u64,
    ) -> Result<&SmartContractLottery, LedgerError> {
        if !self.contracts.contains_key(contract_id) {
            return Err(LedgerError::UnknownContract(contract_id.to_string()));
        }
        let has_pending_purchase = self.pending.iter().any(|tx| {
            matches!(&tx.kind, TxKind::TicketPurchase { contract, .. } if contract == contract_id)
        });
        if has_pending_purchase {
            return Err(LedgerError::PendingPurchases(contract_id.to_string()));
        }
        let lottery = self
            .contracts
            .get_mut(contract_id)
            .expect("checked above");
        if !lottery.is_open() {
            return Err(LedgerError::ContractNotOpen(contract_id.to_string()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let winning_combination = rng.random_range(1..=lottery.spec.combinations);
        let payouts = split_jackpot(lottery.jackpot(), lottery.holders_of(winning_combination));
        lottery.phase = LotteryPhase::Drawn {
            winning_combination,
            payouts,
        };
        Ok(&self.contracts[contract_id])
    }

    /// Submit a whole cascade and form blocks until the pool drains.
    pub fn execute_cascade(&mut self, cascade: &CascadeSpec) -> Result<CascadeOutcome, LedgerError> {
        let mut total_gas = 0.0;
        for tx in cascade.transactions() {
            total_gas += tx.gas_fee;
            self.submit_transaction(tx.clone())?;
        }
        Ok(CascadeOutcome {
            blocks_to_complete: self.form_blocks_until_empty(),
            total_gas,
        })
    }

    /// Line-oriented chain dump: `height tx_count id id ...`, one block per
    /// line, suitable for golden-file comparisons.
    pub fn chain_dump(&self) -> String {
        let mut out = String::new();
        for block in &self.chain {
            out.push_str(&block.height.to_string());
            out.push(' ');
            out.push_str(&block.transactions.len().to_string());
            for tx in &block.transactions {
                out.push(' ');
                out.push_str(&tx.id);
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ledger(capacity: usize) -> LedgerState {
        LedgerState::new(capacity).unwrap()
    }

    fn transfer(id: &str, deps: &[&str]) -> Transaction {
        Transaction::new(id, TxKind::Transfer { amount: 1.0 }, 0.0)
            .with_dependencies(deps.iter().copied().map(String::from))
    }

    fn small_lottery(state: &mut LedgerState, combinations: u64) {
        state
            .deploy_lottery(
                "lotto",
                LotterySpec::parimutuel(combinations, 0, 1.0).unwrap(),
            )
            .unwrap();
    }

    #[test]
    fn submit_then_form_includes_in_block_zero() {
        let mut state = ledger(10);
        state.submit_transaction(transfer("a", &[])).unwrap();
        state.form_block();
        assert_eq!(state.chain().len(), 1);
        assert_eq!(state.chain()[0].height, 0);
        assert_eq!(state.chain()[0].transactions[0].id, "a");
        assert_eq!(state.pending_count(), 0);
    }

    #[test]
    fn duplicate_id_rejected_and_state_unchanged() {
        let mut state = ledger(10);
        state.submit_transaction(transfer("a", &[])).unwrap();
        let before = state.clone();
        assert_eq!(
            state.submit_transaction(transfer("a", &[])),
            Err(LedgerError::DuplicateTxId("a".into()))
        );
        assert_eq!(state, before);
    }

    #[test]
    fn unknown_dependency_rejected() {
        let mut state = ledger(10);
        assert_eq!(
            state.submit_transaction(transfer("b", &["ghost"])),
            Err(LedgerError::UnknownDependency {
                tx: "b".into(),
                dependency: "ghost".into()
            })
        );
        assert_eq!(state.pending_count(), 0);
    }

    #[test]
    fn self_dependency_rejected() {
        let mut state = ledger(10);
        assert_eq!(
            state.submit_transaction(transfer("a", &["a"])),
            Err(LedgerError::DependencyCycle("a".into()))
        );
    }

    #[test]
    fn empty_pool_forms_empty_block() {
        let mut state = ledger(4);
        state.form_block();
        assert_eq!(state.chain().len(), 1);
        assert!(state.chain()[0].transactions.is_empty());
    }

    #[test]
    fn independent_txs_fill_blocks_fifo() {
        let mut state = ledger(500);
        for i in 0..1000 {
            state
                .submit_transaction(transfer(&format!("t{i}"), &[]))
                .unwrap();
        }
        assert_eq!(state.form_blocks_until_empty(), 2);
        assert_eq!(state.chain()[0].transactions.len(), 500);
        assert_eq!(state.chain()[0].transactions[0].id, "t0");
        assert_eq!(state.chain()[1].transactions[0].id, "t500");
    }

    #[test]
    fn dependent_chain_fits_two_blocks() {
        let mut state = ledger(500);
        let cascade = CascadeSpec::chain(1000, 0.0);
        let outcome = state.execute_cascade(&cascade).unwrap();
        assert_eq!(outcome.blocks_to_complete, 2);
    }

    #[test]
    fn star_fits_one_block_at_capacity() {
        let mut state = ledger(1000);
        let outcome = state.execute_cascade(&CascadeSpec::star(1000, 0.0)).unwrap();
        assert_eq!(outcome.blocks_to_complete, 1);
    }

    #[test]
    fn capacity_one_takes_one_block_per_tx() {
        let mut state = ledger(1);
        let outcome = state.execute_cascade(&CascadeSpec::chain(7, 0.0)).unwrap();
        assert_eq!(outcome.blocks_to_complete, 7);
    }

    #[test]
    fn cascade_gas_sums_linearly() {
        let mut state = ledger(10);
        let outcome = state
            .execute_cascade(&CascadeSpec::independent(10, 0.01))
            .unwrap();
        assert!((outcome.total_gas - 0.1).abs() < 1e-12);
    }

    #[test]
    fn cascade_rejects_cycles_and_unknown_deps() {
        let cycle = CascadeSpec::new(vec![
            transfer("a", &["b"]),
            transfer("b", &["a"]),
        ]);
        assert!(matches!(cycle, Err(LedgerError::DependencyCycle(_))));
        let unknown = CascadeSpec::new(vec![transfer("a", &["nope"])]);
        assert!(matches!(unknown, Err(LedgerError::UnknownDependency { .. })));
    }

    #[test]
    fn cascade_reorders_arbitrary_dag_topologically() {
        // Listed backwards on purpose.
        let spec = CascadeSpec::new(vec![
            transfer("c", &["b"]),
            transfer("b", &["a"]),
            transfer("a", &[]),
        ])
        .unwrap();
        let ids: Vec<&str> = spec.transactions().iter().map(|t| t.id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        let mut state = ledger(10);
        assert_eq!(state.execute_cascade(&spec).unwrap().blocks_to_complete, 1);
    }

    #[test]
    fn trump_ticket_purchase_covers_lowest_combinations() {
        let mut state = ledger(100);
        small_lottery(&mut state, 50);
        state.buy_trump_ticket("lotto", "player", 10, 0.0).unwrap();
        state.form_blocks_until_empty();
        let lottery = state.contract("lotto").unwrap();
        assert_eq!(lottery.tickets_sold(), 10);
        assert_eq!(lottery.tickets_held_by("player"), 10);
        for c in 1..=10 {
            assert_eq!(lottery.holders_of(c), ["player".to_string()]);
        }
    }

    #[test]
    fn trump_ticket_zero_is_noop() {
        let mut state = ledger(100);
        small_lottery(&mut state, 50);
        let before = state.clone();
        state.buy_trump_ticket("lotto", "player", 0, 0.0).unwrap();
        assert_eq!(state, before);
    }

    #[test]
    fn trump_ticket_gas_is_linear_friction() {
        let mut state = ledger(100);
        small_lottery(&mut state, 50);
        state.buy_trump_ticket("lotto", "player", 10, 0.01).unwrap();
        state.form_blocks_until_empty();
        let gas: f64 = state.chain()[0]
            .transactions
            .iter()
            .map(|tx| tx.gas_fee)
            .sum();
        assert!((gas - 0.10).abs() < 1e-12);
    }

    #[test]
    fn trump_ticket_respects_remaining_coverage() {
        let mut state = ledger(100);
        small_lottery(&mut state, 50);
        state.buy_trump_ticket("lotto", "player", 45, 0.0).unwrap();
        assert_eq!(
            state.buy_trump_ticket("lotto", "player", 6, 0.0),
            Err(LedgerError::InsufficientCombinations {
                contract: "lotto".into(),
                owner: "player".into(),
                requested: 6,
                available: 5,
            })
        );
        // A second buy picks up where the first left off.
        state.buy_trump_ticket("lotto", "player", 5, 0.0).unwrap();
        state.form_blocks_until_empty();
        assert_eq!(state.contract("lotto").unwrap().tickets_held_by("player"), 50);
    }

    #[test]
    fn full_coverage_without_crowd_wins_whole_jackpot() {
        let mut state = ledger(100);
        small_lottery(&mut state, 20);
        state.buy_trump_ticket("lotto", "player", 20, 0.0).unwrap();
        state.form_blocks_until_empty();
        let lottery = state.run_draw("lotto", 99).unwrap();
        assert_eq!(lottery.payout_to("player"), 20.0);
        assert_eq!(lottery.payouts().unwrap().len(), 1);
    }

    #[test]
    fn draw_with_no_winner_pays_nobody() {
        let mut state = ledger(100);
        small_lottery(&mut state, 1000);
        state.buy_trump_ticket("lotto", "player", 1, 0.0).unwrap();
        state.form_blocks_until_empty();
        // Seed chosen so the draw misses combination 1.
        let lottery = state.run_draw("lotto", 0).unwrap();
        assert_ne!(lottery.winning_combination(), Some(1));
        assert!(lottery.payouts().unwrap().is_empty());
    }

    #[test]
    fn draw_is_seed_deterministic() {
        let winning = |seed: u64| {
            let mut state = ledger(100);
            small_lottery(&mut state, 1000);
            state.run_draw("lotto", seed).unwrap().winning_combination()
        };
        assert_eq!(winning(42), winning(42));
        assert_ne!(winning(42), winning(43));
    }

    #[test]
    fn draw_requires_purchases_on_chain() {
        let mut state = ledger(100);
        small_lottery(&mut state, 50);
        state.buy_trump_ticket("lotto", "player", 3, 0.0).unwrap();
        assert_eq!(
            state.run_draw("lotto", 1),
            Err(LedgerError::PendingPurchases("lotto".into()))
        );
        state.form_blocks_until_empty();
        assert!(state.run_draw("lotto", 1).is_ok());
        assert_eq!(
            state.run_draw("lotto", 1),
            Err(LedgerError::ContractNotOpen("lotto".into()))
        );
    }

    #[test]
    fn purchases_rejected_after_draw() {
        let mut state = ledger(100);
        small_lottery(&mut state, 50);
        state.run_draw("lotto", 1).unwrap();
        assert_eq!(
            state.buy_trump_ticket("lotto", "late", 1, 0.0),
            Err(LedgerError::ContractNotOpen("lotto".into()))
        );
    }

    #[test]
    fn payouts_conserve_jackpot_with_shared_win() {
        let mut state = ledger(100);
        // Three owners all on the single combination: forced three-way split.
        state
            .deploy_lottery("lotto", LotterySpec::parimutuel(1, 0, 1.0).unwrap())
            .unwrap();
        for owner in ["a", "b", "c"] {
            state.buy_trump_ticket("lotto", owner, 1, 0.0).unwrap();
        }
        state.form_blocks_until_empty();
        let lottery = state.run_draw("lotto", 5).unwrap();
        let payouts = lottery.payouts().unwrap();
        assert_eq!(payouts.len(), 3);
        let total: f64 = payouts.iter().map(|(_, amount)| amount).sum();
        assert_eq!(total, 3.0, "jackpot must be conserved exactly");
    }

    #[test]
    fn crowd_purchases_are_seeded_and_uniform_ish() {
        let mut state = ledger(1000);
        small_lottery(&mut state, 10);
        state
            .submit_crowd_purchases("lotto", 100, 0.0, 7)
            .unwrap();
        state.form_blocks_until_empty();
        let lottery = state.contract("lotto").unwrap();
        assert_eq!(lottery.tickets_sold(), 100);

        let mut replay = ledger(1000);
        small_lottery(&mut replay, 10);
        replay
            .submit_crowd_purchases("lotto", 100, 0.0, 7)
            .unwrap();
        replay.form_blocks_until_empty();
        assert_eq!(state, replay);
    }

    #[test]
    fn replaying_a_script_reproduces_identical_state() {
        let run = || {
            let mut state = ledger(8);
            small_lottery(&mut state, 30);
            state.buy_trump_ticket("lotto", "player", 12, 0.5).unwrap();
            state.submit_crowd_purchases("lotto", 9, 0.5, 123).unwrap();
            state.form_blocks_until_empty();
            state.run_draw("lotto", 456).unwrap();
            state.execute_cascade(&CascadeSpec::star(17, 0.25)).unwrap();
            state
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn chain_dump_is_line_per_block() {
        let mut state = ledger(2);
        state.submit_transaction(transfer("a", &[])).unwrap();
        state.submit_transaction(transfer("b", &["a"])).unwrap();
        state.submit_transaction(transfer("c", &[])).unwrap();
        state.form_blocks_until_empty();
        assert_eq!(state.chain_dump(), "0 2 a b\n1 1 c\n");
    }

    #[test]
    fn deploy_validation() {
        let mut state = ledger(10);
        small_lottery(&mut state, 10);
        assert_eq!(
            state.deploy_lottery("lotto", LotterySpec::parimutuel(5, 0, 1.0).unwrap()),
            Err(LedgerError::DuplicateContract("lotto".into()))
        );
        let fixed = LotterySpec::new(
            5,
            0,
            1.0,
            PayoutFormat::FixedOdds { prize: 10.0 },
        )
        .unwrap();
        assert_eq!(
            state.deploy_lottery("other", fixed),
            Err(LedgerError::NotParimutuel)
        );
        assert_eq!(LedgerState::new(0).unwrap_err(), LedgerError::ZeroCapacity);
    }

    #[test]
    fn ticket_purchase_validation() {
        let mut state = ledger(10);
        small_lottery(&mut state, 5);
        let buy = |c: u64| {
            Transaction::new(
                format!("buy{c}"),
                TxKind::TicketPurchase {
                    contract: "lotto".into(),
                    owner: "p".into(),
                    combination: c,
                },
                0.0,
            )
        };
        assert_eq!(
            state.submit_transaction(buy(0)),
            Err(LedgerError::CombinationOutOfRange {
                combination: 0,
                combinations: 5
            })
        );
        assert_eq!(
            state.submit_transaction(buy(6)),
            Err(LedgerError::CombinationOutOfRange {
                combination: 6,
                combinations: 5
            })
        );
        state.submit_transaction(buy(3)).unwrap();
        let mut dup = buy(3);
        dup.id = "buy3-again".into();
        assert_eq!(
            state.submit_transaction(dup),
            Err(LedgerError::DuplicateTicket {
                contract: "lotto".into(),
                owner: "p".into(),
                combination: 3
            })
        );
    }
}
