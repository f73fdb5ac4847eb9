//! The `tng` command line.
//!
//! Every subcommand reads a game file, checks it, and prints `key=value`
//! lines. Decision subcommands exit 0 for yes, 1 for no and 2 on errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::equilibria::best_response_dynamics;
use crate::model::{parse_game, validate, Date, Game};
use crate::ne_search::{self, check_ne_outcome_jobs, LinearConstraint, NeSearch, NeWitness};
use crate::oracle::{self, EnumerationBudget};
use crate::punish::lowval;
use crate::semantics::{outcome_of_blind, parse_trajectories, play_cost, render_trajectories, FiniteGame, Play};
use crate::social_opt::{constrained_sw, social_optimum};

#[derive(Parser, Debug)]
#[command(name = "tng", version, about = "Solve discrete-time timed network congestion games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Game description file
    pub file: PathBuf,
    /// Analysis horizon (defaults to MaxTime)
    #[arg(long)]
    pub horizon: Option<Date>,
    /// Worker threads for the per-player equilibrium checks
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check well-formedness and print the game bounds
    Validate(Common),
    /// Social optimum and a witness play
    So {
        #[command(flatten)]
        common: Common,
        /// Only consider plays with social welfare at most this value
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Exit 0 if some play has social welfare at most BOUND
    SwLe {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        bound: u64,
    },
    /// Exit 0 if an equilibrium outcome meets every constraint
    Ne {
        #[command(flatten)]
        common: Common,
        /// `c1,...,cn:<rel>:<bound>` with <rel> one of <=, >=, =, <, >
        #[arg(long = "constraint", allow_hyphen_values = true)]
        constraints: Vec<String>,
    },
    /// Least social welfare of an equilibrium outcome
    BestNe(Common),
    /// Greatest social welfare of an equilibrium outcome
    WorstNe(Common),
    /// Price of anarchy
    Poa(Common),
    /// Price of stability
    Pos(Common),
    /// Best-response dynamics over blind strategies
    Brd(Common),
    /// Punishment value of one player at the start
    Lowval {
        #[command(flatten)]
        common: Common,
        /// Player, counted from 1
        #[arg(long)]
        player: usize,
    },
    /// Costs of a trajectory profile played blindly
    Eval {
        #[command(flatten)]
        common: Common,
        /// Trajectory profile file
        trajectories: PathBuf,
    },
    /// Brute-force reference computations
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Social optimum by exhaustive enumeration
    So(Common),
    /// All blind-strategy equilibria
    BlindNe(Common),
    /// Punishment value by exhaustive max-min
    Lowval {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        player: usize,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// Runs the command line, writing results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut report = format!("command: {}\n", echo.join(" "));
    match execute(&cli.command, &mut report) {
        Ok(code) => {
            let _ = out.write_all(report.as_bytes());
            code
        }
        Err(Failure(msg)) => {
            let _ = out.write_all(report.as_bytes());
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn load(common: &Common) -> Result<Game, Failure> {
    let text = std::fs::read_to_string(&common.file).map_err(|e| Failure(format!("{}: {e}", common.file.display())))?;
    Ok(parse_game(&text)?)
}

/// Parses, validates and truncates the game, echoing the bounds.
fn prepare<'g>(game: &'g Game, common: &Common, report: &mut String) -> Result<FiniteGame<'g>, Failure> {
    let problems = validate(game);
    if !problems.is_empty() {
        let list: Vec<String> = problems.iter().map(ToString::to_string).collect();
        return Err(Failure(format!("invalid game: {}", list.join("; "))));
    }
    let fg = match common.horizon {
        Some(h) => FiniteGame::new(game, h)?,
        None => FiniteGame::with_default_horizon(game),
    };
    if common.jobs == 0 {
        return Err(Failure("--jobs must be at least 1".into()));
    }
    let b = fg.bounds();
    writeln!(report, "horizon={}", b.horizon).unwrap();
    writeln!(report, "max_int={} max_cost={} max_time={}", b.max_int, b.max_cost, b.max_time).unwrap();
    Ok(fg)
}

fn player_index(fg: &FiniteGame, player: usize) -> Result<usize, Failure> {
    if player == 0 || player > fg.n() {
        return Err(Failure(format!("--player must be between 1 and {}", fg.n())));
    }
    Ok(player - 1)
}

fn execute(command: &Command, report: &mut String) -> Result<i32, Failure> {
    match command {
        Command::Validate(common) => {
            let game = load(common)?;
            let problems = validate(&game);
            let fg = match common.horizon {
                Some(h) => FiniteGame::new(&game, h)?,
                None => FiniteGame::with_default_horizon(&game),
            };
            let b = fg.bounds();
            writeln!(report, "horizon={}", b.horizon).unwrap();
            writeln!(report, "max_int={} max_cost={} max_time={}", b.max_int, b.max_cost, b.max_time).unwrap();
            writeln!(
                report,
                "players={} vertices={} edges={}",
                game.player_count(),
                game.network().vertex_count(),
                game.network().edges().len()
            )
            .unwrap();
            writeln!(report, "valid={}", problems.is_empty()).unwrap();
            for p in &problems {
                writeln!(report, "violation: {p}").unwrap();
            }
            Ok(if problems.is_empty() { 0 } else { 1 })
        }
        Command::So { common, bound } => {
            let game = load(common)?;
            let fg = prepare(&game, common, report)?;
            let so = match bound {
                Some(b) if fg.game().symmetric_pair().is_some() => {
                    let s = crate::social_opt::social_optimum_symmetric(&fg, *b)?;
                    crate::social_opt::SocialOptimum { value: s.value, witness: s.witness, date_cap: s.date_cap }
                }
                Some(b) => crate::social_opt::social_optimum_asymmetric(&fg, *b),
                None => social_optimum(&fg),
            };
            writeln!(report, "date_cap={}", so.date_cap).unwrap();
            writeln!(report, "so={}", so.value).unwrap();
            if let Some(w) = &so.witness {
                write_play(report, &fg, w);
            }
            Ok(0)
        }
        Command::SwLe { common, bound } => {
            let game = load(common)?;
            let fg = prepare(&game, common, report)?;
            let yes = constrained_sw(&fg, *bound);
            writeln!(report, "sw_le={yes}").unwrap();
            Ok(if yes { 0 } else { 1 })
        }
        Command::Ne { common, constraints } => {
            let game = load(common)?;
            let fg = prepare(&game, common, report)?;
            let cs = constraints.iter().map(|c| c.parse::<LinearConstraint>()).collect::<Result<Vec<_>, _>>()?;
            for c in &cs {
                c.check(fg.n())?;
                writeln!(report, "constraint: {c}").unwrap();
            }
            writeln!(report, "horizon_limited={}", ne_search::horizon_limited(&fg)).unwrap();
            let mut search = NeSearch::new(&fg);
            match search.find(&cs)? {
                Some(w) => {
                    writeln!(report, "exists=true").unwrap();
                    write_witness(report, &fg, &w, common.jobs)?;
                    Ok(0)
                }
                None => {
                    writeln!(report, "exists=false").unwrap();
                    Ok(1)
                }
            }
        }
        Command::BestNe(common) | Command::WorstNe(common) => {
            let game = load(common)?;
            let fg = prepare(&game, common, report)?;
            writeln!(report, "horizon_limited={}", ne_search::horizon_limited(&fg)).unwrap();
            let w = if matches!(command, Command::BestNe(_)) { ne_search::best_ne_sw(&fg)? } else { ne_search::worst_ne_sw(&fg)? };
            writeln!(report, "value={}", w.sw).unwrap();
            write_witness(report, &fg, &w, common.jobs)?;
            Ok(0)
        }
        Command::Poa(common) | Command::Pos(common) => {
            let game = load(common)?;
            let fg = prepare(&game, common, report)?;
            writeln!(report, "horizon_limited={}", ne_search::horizon_limited(&fg)).unwrap();
            let so = social_optimum(&fg).value;
            let price = if matches!(command, Command::Poa(_)) { ne_search::poa(&fg)? } else { ne_search::pos(&fg)? };
            writeln!(report, "so={so}").unwrap();
            writeln!(report, "value={price}").unwrap();
            Ok(0)
        }
        Command::Brd(common) => {
            let game = load(common)?;
            let fg = prepare(&game, common, report)?;
            let d = best_response_dynamics(&fg)?;
            report.push_str(&render_trajectories(&game, &d.profile.trajs));
            for (i, c) in d.costs.iter().enumerate() {
                write!(report, "{}cost_{}={c}", if i > 0 { " " } else { "" }, i + 1).unwrap();
            }
            writeln!(report, " sw={}", d.sw()).unwrap();
            let trace: Vec<String> = d.potential_trace.iter().map(u64::to_string).collect();
            writeln!(report, "potential_trace={}", trace.join(",")).unwrap();
            let play = outcome_of_blind(&fg, &d.profile.trajs)?;
            let verdict = check_ne_outcome_jobs(&fg, &play, common.jobs)?;
            writeln!(report, "ne_check={}", if verdict.is_none() { "pass" } else { "fail" }).unwrap();
            Ok(0)
        }
        Command::Lowval { common, player } => {
            let game = load(common)?;
            let fg = prepare(&game, common, report)?;
            let i = player_index(&fg, *player)?;
            writeln!(report, "player={player}").unwrap();
            writeln!(report, "value={}", lowval(&fg, i, &fg.start())).unwrap();
            Ok(0)
        }
        Command::Eval { common, trajectories } => {
            let game = load(common)?;
            let fg = prepare(&game, common, report)?;
            let text = std::fs::read_to_string(trajectories).map_err(|e| Failure(format!("{}: {e}", trajectories.display())))?;
            let trajs = parse_trajectories(&game, &text)?;
            let play = outcome_of_blind(&fg, &trajs)?;
            let costs = play_cost(&fg, &play);
            for (i, c) in costs.costs.iter().enumerate() {
                write!(report, "cost_{}={c} ", i + 1).unwrap();
            }
            writeln!(report, "sw={}", costs.sw).unwrap();
            write_play(report, &fg, &play);
            Ok(0)
        }
        Command::Oracle(sub) => {
            let budget = EnumerationBudget::default();
            match sub {
                OracleCommand::So(common) => {
                    let game = load(common)?;
                    let fg = prepare(&game, common, report)?;
                    writeln!(report, "value={}", oracle::brute_so(&fg, budget)?).unwrap();
                }
                OracleCommand::BlindNe(common) => {
                    let game = load(common)?;
                    let fg = prepare(&game, common, report)?;
                    let found = oracle::brute_blind_ne(&fg, budget)?;
                    writeln!(report, "count={}", found.len()).unwrap();
                    for (k, (trajs, costs)) in found.iter().enumerate() {
                        let cs: Vec<String> = costs.costs.iter().map(ToString::to_string).collect();
                        writeln!(report, "profile {}: costs={} sw={}", k + 1, cs.join(","), costs.sw).unwrap();
                        report.push_str(&render_trajectories(&game, trajs));
                    }
                }
                OracleCommand::Lowval { common, player } => {
                    let game = load(common)?;
                    let fg = prepare(&game, common, report)?;
                    let i = player_index(&fg, *player)?;
                    writeln!(report, "player={player}").unwrap();
                    writeln!(report, "value={}", oracle::brute_lowval(&fg, i, &fg.start(), budget)?).unwrap();
                }
            }
            Ok(0)
        }
    }
}

fn write_witness(report: &mut String, fg: &FiniteGame, w: &NeWitness, jobs: usize) -> Result<(), Failure> {
    let cs: Vec<String> = w.costs.iter().map(u64::to_string).collect();
    writeln!(report, "costs={} sw={}", cs.join(","), w.sw).unwrap();
    let verdict = check_ne_outcome_jobs(fg, &w.play, jobs)?;
    writeln!(report, "ne_check={}", if verdict.is_none() { "pass" } else { "fail" }).unwrap();
    write_play(report, fg, &w.play);
    Ok(())
}

fn write_play(report: &mut String, fg: &FiniteGame, play: &Play) {
    writeln!(report, "play:").unwrap();
    for (k, t) in play.transitions().iter().enumerate() {
        let acts: Vec<String> = t.actions.iter().map(|&a| fg.show_action(a)).collect();
        let costs: Vec<String> = t.step_costs.iter().map(u64::to_string).collect();
        writeln!(report, "  {k}: {} [{}] -> {} cost {}", fg.show_config(&t.from), acts.join(" "), fg.show_config(&t.to), costs.join(","))
            .unwrap();
    }
}
