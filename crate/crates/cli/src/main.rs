use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gridpursuit::engine::Side;
use gridpursuit::lattice::{level_counts, min_large_component_bound};
use gridpursuit::registry::{cop_strategy, resimulate, robber_strategy};
use gridpursuit::solver::cop_number_runs;
use gridpursuit::trace::replay;
use gridpursuit::{
    render_ascii, run_match, solve_game, CopNumber, GameState, GraphSpec, InvariantReport,
    MatchConfig, MatchTrace, Outcome, SolveOptions, SolveResult,
};
use serde_json::{json, Value};

/// Exit codes.
const OK: u8 = 0;
const FAULT: u8 = 2;
const CONFIG: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gridpursuit",
    version,
    about = "Infinite-speed cops and robbers on grids, tori and hypercubes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one match and write its trace.
    Match(MatchArgs),
    /// Solve the game for a fixed number of cops.
    Solve(SolveArgs),
    /// Find the smallest winning number of cops.
    Copnum(CopnumArgs),
    /// Count box points at, below and above a level.
    Count(CountArgs),
    /// Lower bound on the largest robber component left by some cops.
    Bound(BoundArgs),
    /// Solved cop numbers for small graphs next to the known ranges.
    Table(TableArgs),
    /// Draw a position from a trace.
    Render(RenderArgs),
    /// Check a trace against the rules and re-run its strategies.
    Replay(ReplayArgs),
}

#[derive(Args)]
struct MatchArgs {
    /// Graph, e.g. grid:9x9, torus:18x18, cube:10, product:5w,5w,4.
    #[arg(long, required_unless_present = "replay")]
    graph: Option<String>,
    #[arg(long, required_unless_present = "replay")]
    cop: Option<String>,
    #[arg(long, required_unless_present = "replay")]
    robber: Option<String>,
    /// Number of cops.
    #[arg(long, required_unless_present = "replay")]
    k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to four times the vertex count.
    #[arg(long)]
    max_rounds: Option<usize>,
    /// Have strategies check their own invariants every turn.
    #[arg(long)]
    check_invariants: bool,
    /// Let strategies fall back to simpler rules outside their guarantees.
    #[arg(long)]
    best_effort: bool,
    #[arg(long, default_value = "trace.jsonl")]
    out: PathBuf,
    /// Re-run the match recorded in a trace instead of starting a new one.
    #[arg(long, conflicts_with_all = ["graph", "cop", "robber", "k"])]
    replay: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    graph: String,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Args)]
struct CopnumArgs {
    #[arg(long)]
    graph: String,
    /// Largest cop count to try; defaults to the vertex count.
    #[arg(long)]
    k_max: Option<usize>,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Args)]
struct SolverFlags {
    /// Refuse instances whose estimated state count exceeds this.
    #[arg(long)]
    cap: Option<u128>,
    /// Skip replaying the witness against the solved strategies.
    #[arg(long)]
    no_verify: bool,
}

impl SolverFlags {
    fn options(&self) -> SolveOptions {
        let mut o = SolveOptions::default();
        if let Some(cap) = self.cap {
            o.cap = cap;
        }
        o.verify = !self.no_verify;
        o
    }
}

#[derive(Args)]
struct CountArgs {
    /// Side lengths, e.g. 5,5,5.
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    #[arg(long, allow_negative_numbers = true)]
    level: i64,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    #[arg(long)]
    cops: usize,
}

#[derive(Args)]
struct TableArgs {
    /// Emit JSON lines instead of a text table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RenderArgs {
    trace: PathBuf,
    /// Show the position after the last event of this round instead of the
    /// final one.
    #[arg(long)]
    round: Option<usize>,
}

#[derive(Args)]
struct ReplayArgs {
    trace: PathBuf,
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

fn config(message: impl ToString) -> Failure {
    Failure {
        code: CONFIG,
        message: message.to_string(),
    }
}

type Run = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { CONFIG } else { OK });
        }
    };
    let result = match cli.command {
        Command::Match(a) => cmd_match(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Copnum(a) => cmd_copnum(a),
        Command::Count(a) => cmd_count(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Table(a) => cmd_table(a),
        Command::Render(a) => cmd_render(a),
        Command::Replay(a) => cmd_replay(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Writes a line to stdout; a closed pipe is not an error.
fn out(line: &str) {
    let _ = writeln!(io::stdout().lock(), "{line}");
}

fn print(v: &Value) {
    out(&serde_json::to_string_pretty(v).expect("json value"));
}

fn parse_graph(spec: &str) -> Result<GraphSpec, Failure> {
    spec.parse().map_err(config)
}

fn read_trace(path: &PathBuf) -> Result<MatchTrace, Failure> {
    let text = fs::read_to_string(path).map_err(|e| config(format!("{}: {e}", path.display())))?;
    MatchTrace::from_jsonl(&text).map_err(config)
}

/// Big counts as JSON numbers when they fit in a u64, else as decimal strings.
fn big(n: &impl ToString) -> Value {
    let s = n.to_string();
    match s.parse::<u64>() {
        Ok(v) => json!(v),
        Err(_) => json!(s),
    }
}

fn outcome_json(o: Option<&Outcome>) -> Value {
    match o {
        Some(Outcome::Capture { round }) => json!({"result": "capture", "round": round}),
        Some(Outcome::Timeout { rounds }) => json!({"result": "timeout", "rounds": rounds}),
        Some(Outcome::Fault { side, message }) => json!({
            "result": "fault",
            "side": match side { Side::Cops => "cops", Side::Robber => "robber" },
            "message": message,
        }),
        None => json!({"result": "unfinished"}),
    }
}

fn report_json(r: &InvariantReport) -> Value {
    json!(r.counters)
}

fn exit_for(o: Option<&Outcome>) -> u8 {
    match o {
        Some(Outcome::Fault { .. }) => FAULT,
        _ => OK,
    }
}

fn cmd_match(a: MatchArgs) -> Run {
    if let Some(path) = &a.replay {
        return replay_match(path);
    }
    let (Some(graph), Some(cop_name), Some(robber_name), Some(k)) = (a.graph, a.cop, a.robber, a.k)
    else {
        return Err(config("--graph, --cop, --robber and --k are required"));
    };
    let g = parse_graph(&graph)?;
    if k == 0 {
        return Err(config("--k must be at least 1"));
    }
    if a.max_rounds == Some(0) {
        return Err(config("--max-rounds must be positive"));
    }
    let mut cop = cop_strategy(&cop_name, &g, k, a.best_effort).map_err(config)?;
    let mut robber = robber_strategy(&robber_name, &g, k, a.best_effort).map_err(config)?;
    cop.set_checks(a.check_invariants);
    robber.set_checks(a.check_invariants);
    let mut cfg = MatchConfig::new(k, a.seed).best_effort(a.best_effort);
    if let Some(r) = a.max_rounds {
        cfg = cfg.max_rounds(r);
    }
    let trace = run_match(&g, cop.as_mut(), robber.as_mut(), &cfg).map_err(config)?;
    fs::write(&a.out, trace.to_jsonl()).map_err(|e| config(format!("{}: {e}", a.out.display())))?;
    let outcome = trace.outcome();
    let mut summary = json!({
        "graph": trace.header.graph,
        "cop": trace.header.cop_strategy,
        "robber": trace.header.robber_strategy,
        "k": k,
        "seed": a.seed,
        "max_rounds": trace.header.max_rounds,
        "outcome": outcome_json(outcome.as_ref()),
        "trace": a.out.display().to_string(),
    });
    if a.check_invariants {
        summary["invariants"] = json!({
            "cops": report_json(&cop.report()),
            "robber": report_json(&robber.report()),
        });
    }
    print(&summary);
    Ok(exit_for(outcome.as_ref()))
}

fn replay_match(path: &PathBuf) -> Run {
    let recorded = read_trace(path)?;
    let again = resimulate(&recorded).map_err(config)?;
    let last = replay(&again).map_err(config)?;
    let outcome = again.outcome();
    print(&json!({
        "graph": again.header.graph,
        "cop": again.header.cop_strategy,
        "robber": again.header.robber_strategy,
        "k": again.header.k,
        "seed": again.header.seed,
        "max_rounds": again.header.max_rounds,
        "outcome": outcome_json(outcome.as_ref()),
        "replayed": path.display().to_string(),
        "final": state_json(&last),
    }));
    Ok(exit_for(outcome.as_ref()))
}

fn solve_json(r: &SolveResult) -> Value {
    let mut v = serde_json::to_value(r).expect("solve result serializes");
    v["witness"] = match &r.witness {
        Some(w) => json!(w.iter().map(|x| x.0.clone()).collect::<Vec<_>>()),
        None => json!([]),
    };
    v
}

fn cmd_solve(a: SolveArgs) -> Run {
    let g = parse_graph(&a.graph)?;
    let r = solve_game(&g, a.k, &a.solver.options()).map_err(config)?;
    print(&solve_json(&r));
    Ok(OK)
}

fn cmd_copnum(a: CopnumArgs) -> Run {
    let g = parse_graph(&a.graph)?;
    let k_max = a.k_max.unwrap_or(g.vertex_count());
    if k_max == 0 {
        return Err(config("--k-max must be at least 1"));
    }
    let (number, runs) = cop_number_runs(&g, k_max, &a.solver.options()).map_err(config)?;
    print(&copnum_json(&g, k_max, &number, &runs));
    Ok(OK)
}

fn copnum_json(g: &GraphSpec, k_max: usize, number: &CopNumber, runs: &[SolveResult]) -> Value {
    let last = runs.last();
    json!({
        "graph": g.to_string(),
        "k_range": [1, k_max],
        "cop_number": match number {
            CopNumber::Exact(k) => json!(k),
            CopNumber::Unknown(_) => Value::Null,
        },
        "robber_wins_through": match number {
            CopNumber::Exact(k) => k - 1,
            CopNumber::Unknown(k) => *k,
        },
        "witness": last.map(|r| solve_json(r)["witness"].clone()).unwrap_or(json!([])),
        "capture_rounds": last.and_then(|r| r.capture_rounds),
        "states": runs.iter().map(|r| r.states).sum::<u64>(),
        "transitions": runs.iter().map(|r| r.transitions).sum::<u64>(),
        "millis": runs.iter().map(|r| r.millis).sum::<u128>(),
    })
}

fn check_dims(dims: &[usize]) -> Result<(), Failure> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(config("--dims needs positive side lengths"));
    }
    Ok(())
}

fn cmd_count(a: CountArgs) -> Run {
    check_dims(&a.dims)?;
    let c = level_counts(&a.dims, a.level);
    print(&json!({
        "dims": a.dims,
        "level": a.level,
        "c": big(&c.c),
        "s": big(&c.s),
        "l": big(&c.l),
    }));
    Ok(OK)
}

fn cmd_bound(a: BoundArgs) -> Run {
    check_dims(&a.dims)?;
    let b = min_large_component_bound(a.cops, &a.dims);
    print(&json!({
        "dims": a.dims,
        "cops": a.cops,
        "best_m": b.best_m,
        "large_component_lb": big(&b.bound),
    }));
    Ok(OK)
}

/// Known range for the square grid's cop number.
fn grid_range(n: usize) -> String {
    if n <= 2 {
        format!("n={n}")
    } else if n % 2 == 1 {
        format!("n-1={}", n - 1)
    } else {
        format!("{{{},{}}}", n - 1, n)
    }
}

fn cmd_table(a: TableArgs) -> Run {
    let mut rows: Vec<(String, GraphSpec, Option<String>)> = Vec::new();
    for n in 1..=4 {
        rows.push((
            format!("grid {n}x{n}"),
            GraphSpec::grid(&[n, n]).map_err(config)?,
            Some(grid_range(n)),
        ));
    }
    rows.push((
        "torus 3x3".into(),
        GraphSpec::torus(&[3, 3]).map_err(config)?,
        None,
    ));
    for d in 1..=3 {
        rows.push((
            format!("cube {d}"),
            GraphSpec::cube(d).map_err(config)?,
            None,
        ));
    }
    let opts = SolveOptions::default();
    for (label, g, known) in rows {
        let (number, runs) = cop_number_runs(&g, g.vertex_count(), &opts).map_err(config)?;
        let row = copnum_json(&g, g.vertex_count(), &number, &runs);
        if a.json {
            let mut row = row;
            row["label"] = json!(label);
            row["known"] = json!(known);
            out(&row.to_string());
            continue;
        }
        let solved = match number {
            CopNumber::Exact(k) => k.to_string(),
            CopNumber::Unknown(k) => format!(">{k}"),
        };
        let witness = runs
            .last()
            .and_then(|r| r.witness.as_ref())
            .map(|w| {
                w.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .unwrap_or_default();
        let mut cells = vec![label];
        if let Some(k) = known {
            cells.push(format!("known {k}"));
        }
        cells.push(format!("solved {solved}"));
        cells.push(format!("witness {witness} (verified)"));
        cells.push(format!("{} ms", row["millis"]));
        out(&cells.join(" | "));
    }
    Ok(OK)
}

fn state_json(s: &GameState) -> Value {
    json!({
        "round": s.round,
        "phase": s.phase.as_str(),
        "cops": s.cop_vertices().into_iter().map(|v| v.0).collect::<Vec<_>>(),
        "robber": s.robber_vertex().map(|v| v.0),
    })
}

fn cmd_render(a: RenderArgs) -> Run {
    let mut trace = read_trace(&a.trace)?;
    if let Some(round) = a.round {
        trace.events.retain(|e| e.round <= round);
    }
    let s = replay(&trace).map_err(config)?;
    out(&format!(
        "{} round {} {}",
        trace.header.graph,
        s.round,
        s.phase.as_str()
    ));
    out(&render_ascii(&s));
    Ok(OK)
}

fn cmd_replay(a: ReplayArgs) -> Run {
    let trace = read_trace(&a.trace)?;
    let last = replay(&trace).map_err(config)?;
    resimulate(&trace).map_err(config)?;
    let outcome = trace.outcome();
    print(&json!({
        "graph": trace.header.graph,
        "seed": trace.header.seed,
        "events": trace.events.len(),
        "outcome": outcome_json(outcome.as_ref()),
        "final": state_json(&last),
        "resimulated": true,
    }));
    Ok(OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faults_exit_with_two() {
        let fault = Outcome::Fault {
            side: Side::Robber,
            message: "stuck".into(),
        };
        assert_eq!(exit_for(Some(&fault)), FAULT);
        assert_eq!(exit_for(Some(&Outcome::Capture { round: 3 })), OK);
        assert_eq!(exit_for(Some(&Outcome::Timeout { rounds: 9 })), OK);
        assert_eq!(outcome_json(Some(&fault))["side"], "robber");
    }

    #[test]
    fn big_counts_fall_back_to_strings() {
        assert_eq!(big(&17u32), json!(17));
        assert_eq!(big(&u128::MAX), json!(u128::MAX.to_string()));
    }

    #[test]
    fn known_grid_ranges() {
        assert_eq!(grid_range(2), "n=2");
        assert_eq!(grid_range(3), "n-1=2");
        assert_eq!(grid_range(4), "{3,4}");
    }
}
