use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser)]
#[command(name = "klmteam", version, about = "Cumulative entailment over team-semantics logics")]
struct Cli {
    /// Print nothing on stdout; the exit code carries the answer.
    #[arg(long, global = true)]
    quiet: bool,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Model-check a formula on a team.
    Eval(EvalArgs),
    /// Decide φ |~ ψ over an explicit relational model.
    Entail(EntailArgs),
    /// Check smoothness (and optionally strong cumulativity) of a model.
    Verify(VerifyArgs),
    /// Check the System C rules on the relation induced by a model.
    Systemc(SystemcArgs),
    /// Decide φ |~ ψ over a model given by label and order circuits.
    SuccEntail(SuccEntailArgs),
    /// Time TPL or PDL model checking as teams grow.
    Bench(BenchArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Comma-separated domain, e.g. `p,q,r`.
    #[arg(long)]
    vars: String,
    /// Semicolon-separated bitstrings in domain order; empty for the empty team.
    #[arg(long, allow_hyphen_values = true)]
    team: String,
    #[arg(long, allow_hyphen_values = true)]
    formula: String,
    #[arg(long, value_enum, default_value_t = EvalEngine::Generic)]
    engine: EvalEngine,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalEngine {
    Generic,
    Flat,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum EntailEngine {
    Direct,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum LogicArg {
    Pdl,
    Tpl,
}

#[derive(Args)]
struct EntailArgs {
    /// Model file (JSON).
    model: PathBuf,
    #[arg(allow_hyphen_values = true)]
    phi: String,
    #[arg(allow_hyphen_values = true)]
    psi: String,
    #[arg(long, value_enum, default_value_t = EntailEngine::Direct)]
    engine: EntailEngine,
    #[arg(long, value_enum, default_value_t = LogicArg::Pdl)]
    logic: LogicArg,
    /// Check smoothness on {φ, ψ, φ & ψ} first and warn on failure.
    #[arg(long)]
    verify: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyMode {
    Universe,
    AllSubsets,
}

#[derive(Args)]
struct VerifyArgs {
    model: PathBuf,
    /// Defaults to `universe` when a universe file is given, else `all-subsets`.
    #[arg(long, value_enum)]
    mode: Option<VerifyMode>,
    /// One formula per line, `#` comments.
    #[arg(long)]
    universe: Option<PathBuf>,
    /// Also require asymmetry and a unique minimal state per universe formula.
    #[arg(long)]
    strong: bool,
}

#[derive(Args)]
struct SystemcArgs {
    model: PathBuf,
    universe: PathBuf,
    #[arg(long, value_enum, default_value_t = LogicArg::Pdl)]
    logic: LogicArg,
    /// Rounds of conjunction closure applied to the universe.
    #[arg(long, default_value_t = 2)]
    closure_depth: usize,
}

#[derive(Args)]
struct SuccEntailArgs {
    /// Label circuit netlist.
    #[arg(long)]
    label: PathBuf,
    /// Order circuit netlist.
    #[arg(long)]
    order: PathBuf,
    /// Comma-separated domain, or a count n for `x1,...,xn`.
    #[arg(long)]
    vars: String,
    #[arg(long)]
    state_bits: usize,
    #[arg(allow_hyphen_values = true)]
    phi: String,
    #[arg(allow_hyphen_values = true)]
    psi: String,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    logic: LogicArg,
    #[arg(long)]
    max_team_size: usize,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = commands::Output {
        quiet: cli.quiet,
        json: cli.json,
    };
    let result = match cli.command {
        Command::Eval(a) => commands::eval(&out, a),
        Command::Entail(a) => commands::entail(&out, a),
        Command::Verify(a) => commands::verify(&out, a),
        Command::Systemc(a) => commands::systemc(&out, a),
        Command::SuccEntail(a) => commands::succ_entail(&out, a),
        Command::Bench(a) => commands::bench(&out, a),
    };
    match result {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
