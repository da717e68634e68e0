//! The subcommand implementations. Money is printed with four fixed decimal
//! places (Rust's round-half-even float formatting), probabilities with six,
//! so repeated runs produce identical bytes.

use std::fs;
use std::path::{Path, PathBuf};

use ledgerlotto::econ;
use ledgerlotto::incentives::{self, IncentiveError};
use ledgerlotto::ledger::{CascadeSpec, LedgerState};
use ledgerlotto::oracle::{estimate, OracleConfig};

use crate::scenario;
use crate::svg::{self, CurveSeries};
use crate::{CliError, Topology};

/// Curve colors by friction-profile position: the frictionless ledger
/// profile is listed first in the shipped scenarios, so it draws in blue and
/// the bricks-and-mortar profile in red.
const CURVE_COLORS: [&str; 6] = ["blue", "red", "green", "orange", "purple", "brown"];

fn money(v: f64) -> String {
    format!("{v:.4}")
}

fn rate(v: f64) -> String {
    format!("{v:.6}")
}

fn io_err(context: &str, path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{context} {}: {e}", path.display()))
}

fn econ_err(e: econ::EconError) -> CliError {
    CliError::Config(e.to_string())
}

/// Metadata for one emitted curve.
pub struct CurveInfo {
    pub label: String,
    pub color: &'static str,
    pub break_even: Option<u64>,
}

/// Where the gain-curve artifacts were written.
pub struct FigureArtifact {
    pub csv_path: PathBuf,
    pub svg_path: PathBuf,
    pub curves: Vec<CurveInfo>,
}

pub fn cmd_gain_curve(scenario_path: &Path, out_dir: &Path) -> Result<FigureArtifact, CliError> {
    let scenario = scenario::load(scenario_path)?;
    scenario.require_parimutuel("gain-curve")?;
    let sweep = scenario.require_sweep()?;
    let frictions = scenario.require_frictions()?;

    // Compute everything first; nothing is written if any profile fails.
    let mut csv = String::from("n,friction_profile,valid_rate,expected_winnings,expected_gain\n");
    let mut series = Vec::new();
    let mut curves = Vec::new();
    for (index, (label, friction)) in frictions.iter().enumerate() {
        let color = CURVE_COLORS[index % CURVE_COLORS.len()];
        let curve = econ::gain_curve(&scenario.spec, friction, sweep.n_min, sweep.n_max, sweep.step)
            .map_err(econ_err)?;
        let break_even = econ::break_even(&scenario.spec, friction).map_err(econ_err)?;
        for point in &curve.points {
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                point.n,
                label,
                rate(point.valid_rate),
                money(point.expected_winnings),
                money(point.expected_gain)
            ));
        }
        series.push(CurveSeries {
            label: label.clone(),
            color,
            points: curve
                .points
                .iter()
                .map(|p| (p.n as f64, p.expected_gain))
                .collect(),
            crossing: break_even,
        });
        curves.push(CurveInfo {
            label: label.clone(),
            color,
            break_even,
        });
    }
    let chart = svg::gain_chart(
        "Expected gain by strategy size",
        "tickets purchased (n)",
        "expected gain",
        &series,
    );

    fs::create_dir_all(out_dir).map_err(|e| io_err("cannot create", out_dir, e))?;
    let csv_path = out_dir.join("gain_curve.csv");
    let svg_path = out_dir.join("gain_curve.svg");
    fs::write(&csv_path, csv).map_err(|e| io_err("cannot write", &csv_path, e))?;
    fs::write(&svg_path, chart).map_err(|e| io_err("cannot write", &svg_path, e))?;

    Ok(FigureArtifact {
        csv_path,
        svg_path,
        curves,
    })
}

pub fn cmd_break_even(scenario_path: &Path) -> Result<(), CliError> {
    let scenario = scenario::load(scenario_path)?;
    scenario.require_parimutuel("break-even")?;
    for (label, friction) in scenario.require_frictions()? {
        let result = econ::break_even(&scenario.spec, friction).map_err(econ_err)?;
        match result {
            Some(n) => println!("{label}: {n}"),
            None => println!("{label}: none"),
        }
    }
    Ok(())
}

pub fn cmd_oracle(scenario_path: &Path, n: u64, seed_override: Option<u64>) -> Result<(), CliError> {
    let scenario = scenario::load(scenario_path)?;
    scenario.require_parimutuel("oracle")?;
    let settings = scenario.require_oracle()?;
    let seed = seed_override.unwrap_or(settings.seed);
    let frictions = scenario.require_frictions()?;
    for (index, (label, friction)) in frictions.iter().enumerate() {
        let config = OracleConfig::new(
            scenario.spec.clone(),
            *friction,
            n,
            settings.trials,
            seed,
        )
        .map_err(|e| CliError::Config(e.to_string()))?;
        let result = estimate(&config);
        let analytic_winnings = econ::expected_winnings(n, &scenario.spec, friction).map_err(econ_err)?;
        let analytic_gain = econ::expected_gain(n, &scenario.spec, friction).map_err(econ_err)?;
        let z = if result.std_error == 0.0 {
            0.0
        } else {
            (result.mean_winnings - analytic_winnings) / result.std_error
        };
        if index > 0 {
            println!();
        }
        println!("profile: {label}");
        println!("n: {n}");
        println!("trials: {}", result.trials);
        println!("seed: {}", result.seed);
        println!("mean_winnings: {}", money(result.mean_winnings));
        println!("mean_gain: {}", money(result.mean_gain));
        println!("std_error: {}", money(result.std_error));
        println!("win_rate: {}", rate(result.win_rate));
        println!("analytic_winnings: {}", money(analytic_winnings));
        println!("analytic_gain: {}", money(analytic_gain));
        println!("z_score: {}", money(z));
    }
    Ok(())
}

pub fn cmd_incentive(scenario_path: &Path) -> Result<(), CliError> {
    let scenario = scenario::load(scenario_path)?;
    let settings = scenario.require_incentive()?;
    let isolated = incentives::isolated_bound(&settings.surface.isolated);
    let mixed = incentives::mixed_bound(&settings.surface);
    let appraisal = incentives::appraise(&settings.surface, settings.attack_cost)
        .map_err(|e| CliError::Config(e.to_string()))?;
    println!("isolated_bound: {}", money(isolated));
    println!("mixed_bound: {}", money(mixed));
    match incentives::amplification(&settings.surface) {
        Ok(ratio) => println!("amplification: {}", money(ratio)),
        Err(IncentiveError::UndefinedRatio) => println!("amplification: undefined"),
        Err(e) => return Err(CliError::Config(e.to_string())),
    }
    println!("attack_cost: {}", money(appraisal.attack_cost));
    println!("net_margin: {}", money(appraisal.net_margin));
    println!(
        "profitable: {}",
        if appraisal.profitable { "yes" } else { "no" }
    );
    Ok(())
}

pub fn cmd_cascade_demo(
    scenario_path: &Path,
    topology: Topology,
    count: u64,
) -> Result<(), CliError> {
    if count == 0 {
        return Err(CliError::Config("count must be at least 1".into()));
    }
    let scenario = scenario::load(scenario_path)?;
    let settings = scenario.require_ledger()?;
    let cascade = match topology {
        Topology::Chain => CascadeSpec::chain(count as usize, settings.gas_per_tx),
        Topology::Star => CascadeSpec::star(count as usize, settings.gas_per_tx),
        Topology::Independent => CascadeSpec::independent(count as usize, settings.gas_per_tx),
    };
    let mut state = LedgerState::new(settings.block_capacity)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let outcome = state
        .execute_cascade(&cascade)
        .map_err(|e| CliError::Config(e.to_string()))?;
    println!("topology: {}", topology.name());
    println!("transactions: {count}");
    println!("block_capacity: {}", settings.block_capacity);
    println!("blocks_to_complete: {}", outcome.blocks_to_complete);
    println!("total_gas: {}", money(outcome.total_gas));
    Ok(())
}

pub fn cmd_ledger_lottery(
    scenario_path: &Path,
    n: u64,
    seed_override: Option<u64>,
) -> Result<(), CliError> {
    let scenario = scenario::load(scenario_path)?;
    scenario.require_parimutuel("ledger-lottery")?;
    let settings = scenario.require_ledger()?;
    let seed = match seed_override.or(scenario.oracle.map(|o| o.seed)) {
        Some(seed) => seed,
        None => {
            return Err(CliError::Config(
                "no seed available: add an [oracle] section or pass --seed".into(),
            ))
        }
    };

    let mut state = LedgerState::new(settings.block_capacity)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let ledger_err = |e: ledgerlotto::ledger::LedgerError| CliError::Config(e.to_string());
    state
        .deploy_lottery("lotto", scenario.spec.clone())
        .map_err(ledger_err)?;
    state
        .buy_trump_ticket("lotto", "player", n, settings.gas_per_tx)
        .map_err(ledger_err)?;
    state
        .submit_crowd_purchases(
            "lotto",
            scenario.spec.crowd_tickets,
            settings.gas_per_tx,
            seed,
        )
        .map_err(ledger_err)?;
    let blocks = state.form_blocks_until_empty();
    // Crowd picks consume the base seed; the draw gets its own stream.
    let lottery = state.run_draw("lotto", seed.wrapping_add(1)).map_err(ledger_err)?;

    let payout = lottery.payout_to("player");
    let ticket_cost = n as f64 * scenario.spec.ticket_price;
    let gas_cost = n as f64 * settings.gas_per_tx;
    println!("contract: lotto");
    println!("seed: {seed}");
    println!("player_tickets: {n}");
    println!("crowd_tickets: {}", scenario.spec.crowd_tickets);
    println!("blocks: {blocks}");
    println!("jackpot: {}", money(lottery.jackpot()));
    println!(
        "winning_combination: {}",
        lottery.winning_combination().expect("contract drawn")
    );
    println!("winner_count: {}", lottery.payouts().map_or(0, <[_]>::len));
    println!("player_payout: {}", money(payout));
    println!("player_ticket_cost: {}", money(ticket_cost));
    println!("player_gas_cost: {}", money(gas_cost));
    println!("player_net: {}", money(payout - ticket_cost - gas_cost));
    println!("chain:");
    print!("{}", state.chain_dump());
    Ok(())
}
