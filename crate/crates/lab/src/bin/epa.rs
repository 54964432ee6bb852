use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use epa_core::{AuctionGame, ValuationProfile};
use epa_lab::acceptance::Suite;
use epa_lab::commands::{classify_summary, nash_summary, qre_summary, transfer_summary};
use epa_lab::config::{parse_rational, parse_variant, SweepConfig};
use epa_lab::figure::{figure_rows, write_csv};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "epa",
    version,
    about = "Extreme-price auction equilibria and empirical-equilibrium checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pure Nash equilibria, payoff set and Nash range of one game.
    Nash(GameArgs),
    /// Logistic quantal-response path and its limit.
    QrePath {
        #[command(flatten)]
        game: GameArgs,
        /// Largest lambda the path may be extended to.
        #[arg(long, default_value_t = 1e5)]
        max_lambda: f64,
    },
    /// Empirical-equilibrium classification of every bid in the Nash range.
    Classify {
        #[command(flatten)]
        game: GameArgs,
        /// Build a witness sequence for each allowed bid.
        #[arg(long)]
        witness: bool,
    },
    /// CSV rows `v_low,bid,marker` for every low value below `--vh`.
    Figure1 {
        #[arg(long)]
        vh: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transfer of an efficient equilibrium from the neighbouring profile.
    TransferCheck {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, default_value_t = 0)]
        t: u32,
        /// Pure bids `low high`; defaults to `c_low + t` and `c_low + t + 1`.
        #[arg(long, num_args = 2, value_names = ["LOW", "HIGH"])]
        bids: Option<Vec<usize>>,
    },
    /// Runs the acceptance suite and writes a JSON report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GameArgs {
    /// Values `v_low v_high`, both even.
    #[arg(long, num_args = 2, value_names = ["V_LOW", "V_HIGH"], required = true)]
    v: Vec<u32>,
    /// `wb` (winner-bid) or `lb` (loser-bid).
    #[arg(long, default_value = "wb")]
    variant: String,
    /// Bid cap; defaults to `v_high/2 + 2`.
    #[arg(long)]
    pbar: Option<u32>,
    /// Probability that a tie goes to the high agent.
    #[arg(long, default_value = "1/2")]
    gamma: String,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Write JSON to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl GameArgs {
    fn game(&self) -> Result<AuctionGame> {
        let (vl, vh) = (self.v[0], self.v[1]);
        let prof = match self.pbar {
            Some(p) => ValuationProfile::new(vl, vh, p),
            None => ValuationProfile::with_min_cap(vl, vh),
        }?;
        let variant = parse_variant(&self.variant)?;
        Ok(AuctionGame::with_gamma(
            prof,
            variant,
            parse_rational(&self.gamma)?,
        )?)
    }

    fn emit<T: Serialize + std::fmt::Display>(&self, value: &T) -> Result<()> {
        if let Some(path) = &self.out {
            write_json(path, value)?;
        }
        if self.json {
            println!("{}", serde_json::to_string_pretty(value)?);
        } else {
            println!("{value}");
        }
        Ok(())
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Flat TOML sweep configuration; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Path of the JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    v_high_max: Option<u32>,
    /// Criterion ids to run, e.g. `--criteria A1 A3`.
    #[arg(long, num_args = 1..)]
    criteria: Option<Vec<String>>,
    /// Print the JSON report instead of one line per criterion.
    #[arg(long)]
    json: bool,
}

impl VerifyArgs {
    fn config(&self) -> Result<SweepConfig> {
        let mut cfg = match &self.config {
            Some(path) => SweepConfig::load(path)?,
            None => SweepConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(g) = &self.gamma {
            cfg.gamma = g.clone();
        }
        if let Some(v) = self.v_high_max {
            cfg.v_high_max = v;
        }
        if let Some(c) = &self.criteria {
            cfg.criteria = c.clone();
        }
        if let Some(out) = &self.out {
            cfg.report = Some(out.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn verify(args: &VerifyArgs) -> Result<ExitCode> {
    let cfg = args.config()?;
    let report_path = cfg.report.clone();
    let report = Suite::new(cfg)?.run_all();
    if let Some(path) = &report_path {
        fs::write(path, report.to_json() + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if args.json {
        println!("{}", report.to_json());
    } else {
        for c in &report.criteria {
            println!("{c}");
            for d in &c.details {
                println!("    {d}");
            }
        }
    }
    Ok(match report.first_failure() {
        Some(c) => {
            eprintln!("verification failed: {} ({})", c.id, c.description);
            ExitCode::FAILURE
        }
        None => ExitCode::SUCCESS,
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Nash(g) => g.emit(&nash_summary(&g.game()?))?,
        Command::QrePath { game, max_lambda } => {
            game.emit(&qre_summary(&game.game()?, max_lambda)?)?
        }
        Command::Classify { game, witness } => {
            game.emit(&classify_summary(&game.game()?, witness)?)?
        }
        Command::TransferCheck { game, t, bids } => {
            let pure = bids.map(|b| (b[0], b[1]));
            game.emit(&transfer_summary(&game.game()?, t, pure)?)?
        }
        Command::Figure1 { vh, out } => {
            let rows = figure_rows(vh)?;
            if rows.is_empty() {
                eprintln!("warning: no even v_low in (2, {vh}); writing the header only");
            }
            match out {
                Some(path) => {
                    let file = fs::File::create(&path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    write_csv(&rows, file)?;
                }
                None => write_csv(&rows, io::stdout().lock())?,
            }
        }
        Command::Verify(args) => return verify(&args),
    }
    io::stdout().flush()?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
