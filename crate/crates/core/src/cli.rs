//! Command-line interface.
//!
//! Exit status is 0 on success, 1 when a verdict is negative (infeasible
//! instance, unstable sequence) and 2 on bad input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num::ToPrimitive;

use crate::bench::{gen_games_with_meta, grid_cells, run_bench, write_csv, BenchOptions, GenConfig};
use crate::error::{Error, Result};
use crate::game::{
    canonicalize, check_stability_beta, check_stability_limit, discounted_utility, Discount, HazingInstance,
    StabilityReport, ViolationDetail,
};
use crate::io::{read_games_file, read_sequence_file, steps_json, write_games, GameDoc, SequenceDoc};
use crate::reductions::{solve_ussp_brute, ussp_to_optrep, UsspInstance, USSP_TARGET_CAP};
use crate::solvers::{min_hazing_dp, solve, Algo, Epsilon};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "hazeopt", version, about = "Minimum-hazing restart equilibria for repeated symmetric games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a minimum-hazing stable sequence for every game in a file.
    Solve {
        #[arg(long)]
        algo: Algo,
        #[arg(long)]
        input: PathBuf,
        /// Approximation parameter in (0, 1], required by fptas.
        #[arg(long)]
        epsilon: Option<Epsilon>,
    },
    /// Check a sequence for stability.
    Check(CheckArgs),
    /// Print the threshold-monotonic form of a stable sequence.
    Canon {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        sequence: PathBuf,
    },
    /// Generate random games, one JSON document per line.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        mpd: i64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
        /// Discount factor written into each game.
        #[arg(long, default_value = "9/10")]
        beta: Discount,
    },
    /// Time the solvers on random games and append the results to a CSV file.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        mpd_list: Vec<i64>,
        #[arg(long, value_delimiter = ',', default_value = "dp,ilp,fptas")]
        algos: Vec<Algo>,
        #[arg(long, value_delimiter = ',')]
        epsilons: Vec<Epsilon>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Map an unbounded subset-sum instance to a hazing instance and solve both.
    ReduceUssp {
        #[arg(long, value_delimiter = ',', required = true)]
        items: Vec<u64>,
        #[arg(long)]
        target: u64,
    },
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    input: PathBuf,
    /// Check at this discount factor.
    #[arg(long, conflicts_with = "limit", required_unless_present = "limit")]
    beta: Option<Discount>,
    /// Check in the patient limit.
    #[arg(long)]
    limit: bool,
    #[arg(long)]
    sequence: PathBuf,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Solve { algo, input, epsilon } => cmd_solve(algo, &input, epsilon, out),
        Command::Check(args) => cmd_check(&args, out),
        Command::Canon { input, sequence } => cmd_canon(&input, &sequence, out),
        Command::Gen { n, mpd, seed, count, out: path, beta } => {
            let docs: Vec<GameDoc> = gen_games_with_meta(&GenConfig { n, mpd, seed, count }, &beta)?
                .into_iter()
                .map(|(game, meta)| GameDoc::Payoff { game, meta: Some(meta) })
                .collect();
            let mut file = std::io::BufWriter::new(std::fs::File::create(&path)?);
            write_games(&mut file, &docs)?;
            file.flush()?;
            writeln!(out, "wrote {count} games to {}", path.display())?;
            Ok(EXIT_OK)
        }
        Command::Bench { n_list, mpd_list, algos, epsilons, trials, seed, out: path } => {
            let cells = grid_cells(&n_list, &mpd_list, seed, trials)?;
            let records = run_bench(&cells, &algos, &epsilons, &BenchOptions::new(trials))?;
            write_csv(&path, &records)?;
            writeln!(out, "appended {} rows to {}", records.len(), path.display())?;
            Ok(EXIT_OK)
        }
        Command::ReduceUssp { items, target } => cmd_reduce(items, target, out),
    }
}

fn cmd_solve(algo: Algo, input: &Path, epsilon: Option<Epsilon>, out: &mut dyn Write) -> Result<i32> {
    if algo == Algo::Fptas && epsilon.is_none() {
        return Err(Error::InvalidEpsilon("fptas needs --epsilon".into()));
    }
    let docs = read_games_file(input)?;
    let mut code = EXIT_OK;
    for (i, doc) in docs.iter().enumerate() {
        if docs.len() > 1 {
            writeln!(out, "game {i}:")?;
        }
        let inst = doc.instance();
        let result = solve(&inst, algo, epsilon)?;
        match result.hazing() {
            Some(h) => {
                writeln!(out, "H={h}")?;
                writeln!(out, "counts={:?}", result.counts)?;
                writeln!(out, "witness={}", steps_json(&result.sequence))?;
            }
            None => {
                writeln!(out, "infeasible: every action has a nonnegative threshold")?;
                code = EXIT_NEGATIVE;
            }
        }
    }
    Ok(code)
}

fn first_instance(input: &Path) -> Result<(GameDoc, HazingInstance)> {
    let doc = read_games_file(input)?.swap_remove(0);
    let inst = doc.instance();
    Ok((doc, inst))
}

fn cmd_check(args: &CheckArgs, out: &mut dyn Write) -> Result<i32> {
    let (_, inst) = first_instance(&args.input)?;
    let seq = read_sequence_file(&args.sequence)?;
    let mut limit_len = None;
    let report = match (&args.beta, seq) {
        (None, SequenceDoc::Steps(steps)) => {
            limit_len = Some(steps.len());
            check_stability_limit(&inst, &steps)?
        }
        (None, SequenceDoc::Payoffs(_)) => {
            return Err(Error::Parse("--limit needs a sequence of action steps".into()));
        }
        (Some(beta), seq) => {
            let payoffs = match seq {
                SequenceDoc::Steps(steps) => inst.payoff_sequence(&steps)?,
                SequenceDoc::Payoffs(p) => p,
            };
            let u = discounted_utility(&payoffs, beta);
            writeln!(out, "utility={u} (~{:.6})", u.to_f64().unwrap_or(f64::NAN))?;
            check_stability_beta(&payoffs, beta)
        }
    };
    write_report(&report, limit_len, out)?;
    Ok(if report.stable { EXIT_OK } else { EXIT_NEGATIVE })
}

/// `steps` is the length of a limit-checked sequence, where a violation at
/// that index means the final threshold was missed.
fn write_report(report: &StabilityReport, steps: Option<usize>, out: &mut dyn Write) -> Result<()> {
    let Some(k) = report.first_violation else {
        writeln!(out, "stable")?;
        return Ok(());
    };
    match &report.detail {
        Some(ViolationDetail::Limit { accumulated, threshold }) => {
            let what = if Some(k) == steps { "the final threshold" } else { "its threshold" };
            writeln!(out, "unstable at step {k}: accumulated hazing {accumulated} does not exceed {what} {threshold}")?;
        }
        Some(ViolationDetail::Discounted { deviation, cooperation }) => {
            writeln!(
                out,
                "unstable at step {k}: deviating yields {:.6} against {:.6} from cooperating",
                deviation.to_f64().unwrap_or(f64::NAN),
                cooperation.to_f64().unwrap_or(f64::NAN)
            )?;
        }
        None => writeln!(out, "unstable at step {k}")?,
    }
    Ok(())
}

fn cmd_canon(input: &Path, sequence: &Path, out: &mut dyn Write) -> Result<i32> {
    let (_, inst) = first_instance(input)?;
    let SequenceDoc::Steps(steps) = read_sequence_file(sequence)? else {
        return Err(Error::Parse("canon needs a sequence of action steps".into()));
    };
    match canonicalize(&inst, &steps) {
        Ok(canon) => {
            writeln!(out, "{}", steps_json(&canon))?;
            writeln!(out, "H={}", inst.total_hazing(&canon)?)?;
            Ok(EXIT_OK)
        }
        Err(Error::NotStable(k)) => {
            writeln!(out, "unstable at step {k}")?;
            Ok(EXIT_NEGATIVE)
        }
        Err(e) => Err(e),
    }
}

fn cmd_reduce(items: Vec<u64>, target: u64, out: &mut dyn Write) -> Result<i32> {
    let u = UsspInstance::new(items, target)?;
    let inst = ussp_to_optrep(&u);
    writeln!(out, "{}", GameDoc::Hazing(inst.clone()).to_json())?;
    let h = min_hazing_dp(&inst).ok_or_else(|| Error::Invariant("reduced instance is feasible".into()))?;
    writeln!(out, "min_hazing={h}")?;
    writeln!(out, "reachable_by_hazing={}", h == target as i64)?;
    if target <= USSP_TARGET_CAP {
        writeln!(out, "reachable_by_enumeration={}", solve_ussp_brute(&u)?)?;
    }
    Ok(EXIT_OK)
}
