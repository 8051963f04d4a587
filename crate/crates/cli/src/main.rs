use std::io::{BufRead, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use cl1::classical::{is_stable, DEFAULT_MAX_ATOMS};
use cl1::engine::{export_strategy, GameSession, IllegalMovePolicy, Move, Outcome, OutcomeBasis, SessionOptions, Status};
use cl1::iso::{isomorphic, MatchMode};
use cl1::proof::{check_source, CheckOptions, CheckedProof};
use cl1::syntax::{elementarize, resolve, Interpretation, Player};
use cl1::{parse_formula, Formula};
use serde_json::json;

#[derive(Parser)]
#[command(name = "cl1", version, about = "Check CL1 proofs and play their conclusions")]
struct Cli {
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CheckArgs {
    #[arg(long, default_value_t = MatchMode::Iso)]
    mode: MatchMode,
    #[arg(long, default_value_t = DEFAULT_MAX_ATOMS)]
    max_atoms: usize,
}

impl CheckArgs {
    fn options(&self) -> CheckOptions {
        CheckOptions { mode: self.mode, max_atoms: self.max_atoms }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Verify a proof file.
    Check {
        file: PathBuf,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Play a proof's conclusion as the machine; moves are read from stdin.
    Play {
        file: PathBuf,
        #[command(flatten)]
        check: CheckArgs,
        /// Fixed truth values, e.g. "p=1,q=0".
        #[arg(long)]
        interp: Option<Interpretation>,
        /// Treat an illegal move as the environment resigning.
        #[arg(long)]
        forfeit_illegal: bool,
    },
    /// Export the strategy extracted from a proof.
    Strategy {
        file: PathBuf,
        #[command(flatten)]
        check: CheckArgs,
        #[arg(long, value_enum, default_value_t = Format::Data)]
        format: Format,
    },
    /// Formula utilities.
    #[command(subcommand)]
    Util(Util),
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Directory of UI assets served outside /api.
        #[arg(long)]
        static_dir: Option<PathBuf>,
        /// Seconds a session may sit idle before it is dropped.
        #[arg(long, default_value_t = 3600)]
        ttl_secs: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_ATOMS)]
        max_atoms: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    /// JSON nodes and edges.
    Data,
    /// Graphviz DOT.
    Graphtext,
}

#[derive(Subcommand)]
enum Util {
    /// Replace surface choices by T and F.
    Elementarize { formula: String },
    /// Is the elementarization classically valid?
    Stable {
        formula: String,
        #[arg(long, default_value_t = DEFAULT_MAX_ATOMS)]
        max_atoms: usize,
    },
    /// Are two formulas equal up to reordering commutative children?
    Iso {
        left: String,
        right: String,
        #[arg(long, default_value_t = MatchMode::Iso)]
        mode: MatchMode,
    },
}

/// Exit 1: the input was read but is wrong (invalid proof, bad formula).
/// The message has already been printed.
#[derive(Debug)]
struct ContentError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is::<ContentError>() => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

impl std::fmt::Display for ContentError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("content error")
    }
}

impl std::error::Error for ContentError {}

/// `Ok(false)` means the command ran but the answer is a failure.
fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Check { file, check } => {
            let proof = load(file, check)?;
            print_check(&proof, cli.json);
            Ok(proof.is_valid())
        }
        Command::Play { file, check, interp, forfeit_illegal } => {
            let proof = load(file, check)?;
            if !proof.is_valid() {
                print_check(&proof, cli.json);
                return Ok(false);
            }
            if let (Some(i), Some(c)) = (interp, proof.conclusion()) {
                if let Some(atom) = i.missing_atom(&c.formula) {
                    anyhow::bail!("--interp does not assign `{atom}`");
                }
            }
            let policy = if *forfeit_illegal { IllegalMovePolicy::Forfeit } else { IllegalMovePolicy::Reject };
            let session =
                GameSession::new(Arc::new(proof), interp.clone(), SessionOptions { illegal_move_policy: policy })?;
            let stdin = std::io::stdin();
            play(session, stdin.lock(), &mut std::io::stdout().lock(), cli.json)
        }
        Command::Strategy { file, check, format } => {
            let proof = load(file, check)?;
            let Some(graph) = export_strategy(&proof) else {
                print_check(&proof, cli.json);
                return Ok(false);
            };
            match format {
                Format::Data => println!("{}", serde_json::to_string_pretty(&graph)?),
                Format::Graphtext => print!("{}", graph.to_dot()),
            }
            Ok(true)
        }
        Command::Util(util) => run_util(util, cli.json),
        Command::Serve { port, host, static_dir, ttl_secs, max_atoms } => {
            let config = cl1_service::Config {
                ttl: Duration::from_secs(*ttl_secs),
                max_atoms: *max_atoms,
                static_dir: static_dir.clone(),
            };
            tracing_subscriber::fmt().with_env_filter(
                tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
            ).init();
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(cl1_service::serve(SocketAddr::new(*host, *port), config))?;
            Ok(true)
        }
    }
}

fn load(file: &FsPath, check: &CheckArgs) -> Result<CheckedProof> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    Ok(check_source(&text, &check.options()))
}

fn print_check(proof: &CheckedProof, as_json: bool) {
    if as_json {
        println!("{}", serde_json::to_string_pretty(&proof.report()).expect("report serializes"));
        return;
    }
    for d in proof.diagnostics() {
        println!("{d}");
    }
    let verdict = if proof.is_valid() { "valid" } else { "invalid" };
    println!("{} lines, {verdict} (mode={})", proof.lines().len(), proof.options().mode);
}

fn formula_arg(text: &str) -> Result<Formula> {
    parse_formula(text).map_err(|e| {
        eprintln!("error: `{text}`: {e}");
        ContentError.into()
    })
}

fn run_util(util: &Util, as_json: bool) -> Result<bool> {
    let (text, value) = match util {
        Util::Elementarize { formula } => {
            let e = elementarize(&formula_arg(formula)?);
            (e.to_string(), json!({ "elementarization": e.to_string() }))
        }
        Util::Stable { formula, max_atoms } => {
            let stable = is_stable(&formula_arg(formula)?, *max_atoms).map_err(|e| {
                eprintln!("error: {e}");
                anyhow::Error::from(ContentError)
            })?;
            let word = if stable { "stable" } else { "instable" };
            (word.to_string(), json!({ "stable": stable }))
        }
        Util::Iso { left, right, mode } => {
            let yes = isomorphic(&formula_arg(left)?, &formula_arg(right)?, *mode);
            let word = if yes { "isomorphic" } else { "not isomorphic" };
            (word.to_string(), json!({ "isomorphic": yes, "mode": mode }))
        }
    };
    if as_json {
        println!("{value}");
    } else {
        println!("{text}");
    }
    Ok(true)
}

fn describe(outcome: &Outcome, interp: Option<&Interpretation>) -> String {
    let who = |p: Player| match p {
        Player::Machine => "Machine",
        Player::Environment => "Environment",
    };
    match (outcome.basis, interp) {
        (OutcomeBasis::Forfeit, _) => "Environment forfeits; Machine wins".to_string(),
        (OutcomeBasis::Interpretation, Some(i)) => format!("{} wins under {i}", who(outcome.winner)),
        _ if outcome.machine_wins_everywhere => "Machine wins under every interpretation".to_string(),
        _ => match &outcome.counterexample {
            Some(c) => format!("Environment wins under {c}"),
            None => "Environment wins".to_string(),
        },
    }
}

fn show_position(session: &GameSession, out: &mut impl Write) -> std::io::Result<()> {
    let f = session.current_formula();
    writeln!(out, "position: {f}  (line {})", session.current_line())?;
    let choices: Vec<String> = session
        .legal_env_moves()
        .iter()
        .map(|m| {
            let picked = resolve(f, &m.path).ok().and_then(|n| n.child(m.component));
            match picked {
                Some(c) => format!("{m} = {c}"),
                None => m.to_string(),
            }
        })
        .collect();
    if !choices.is_empty() {
        writeln!(out, "your moves: {}", choices.join(", "))?;
    }
    Ok(())
}

/// Drive a session from `input` until it is quiescent, stopped or forfeited.
/// End of input counts as "stop".
fn play(mut session: GameSession, input: impl BufRead, out: &mut impl Write, as_json: bool) -> Result<bool> {
    let mut log = Vec::new();
    let emit = |out: &mut dyn Write, line: String, log: &mut Vec<String>| -> std::io::Result<()> {
        if !as_json {
            writeln!(out, "{line}")?;
        }
        log.push(line);
        Ok(())
    };
    for m in session.run() {
        emit(out, format!("machine: {m}"), &mut log)?;
    }
    let mut lines = input.lines();
    while session.status() == Status::AwaitingEnvironment {
        if !as_json {
            show_position(&session, out)?;
            out.flush()?;
        }
        let Some(line) = lines.next() else {
            session.stop();
            emit(out, "end of input: session stopped".into(), &mut log)?;
            break;
        };
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if text == "stop" {
            session.stop();
            emit(out, "session stopped".into(), &mut log)?;
            break;
        }
        let m: Move = match text.parse() {
            Ok(m) => m,
            Err(e) => {
                emit(out, format!("cannot read move `{text}`: {e}"), &mut log)?;
                continue;
            }
        };
        match session.apply_env_move(&m) {
            Ok(cl1::engine::TurnOutcome::Applied { replies }) => {
                emit(out, format!("environment: {m}"), &mut log)?;
                for r in replies {
                    emit(out, format!("machine: {r}"), &mut log)?;
                }
            }
            Ok(cl1::engine::TurnOutcome::Forfeited) => {
                emit(out, format!("illegal move {m}: environment forfeits"), &mut log)?;
            }
            Err(e) => emit(out, e.to_string(), &mut log)?,
        }
    }
    if session.status() == Status::Quiescent {
        emit(out, format!("machine quiescent at `{}`", session.current_formula()), &mut log)?;
    }
    let outcome = session.outcome()?;
    let verdict = describe(&outcome, session.interpretation());
    emit(out, format!("outcome: {verdict}"), &mut log)?;
    if as_json {
        let doc = json!({
            "run": session.run(),
            "final_formula": session.current_formula().to_string(),
            "line": session.current_line(),
            "status": session.status(),
            "outcome": outcome,
            "verdict": verdict,
            "transcript": log,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    }
    Ok(true)
}
