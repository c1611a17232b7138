use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use coalgame::logic::Recode;
use coalgame::{io, Analyzed, Coalgebra, Predicate, StateId};

/// Bisimulation games on labelled and probabilistic transition systems.
#[derive(Parser)]
#[command(name = "coalgame", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the blocks of the bisimilarity partition, one per line.
    Partition {
        file: PathBuf,
        /// Also print every refinement round R_0, R_1, ...
        #[arg(long)]
        rounds: bool,
    },
    /// Decide whether two states are bisimilar (exit 0) or not (exit 1).
    Check { file: PathBuf, x0: String, x1: String },
    /// Print a formula that x0 satisfies and x1 does not.
    Formula {
        file: PathBuf,
        x0: String,
        x1: String,
        /// Rewrite cones into `box-dia` (lts) or `thresholds` (pts).
        #[arg(long)]
        recode: Option<Recode>,
    },
    /// Print I and T for every ordered pair of distinct states.
    Strategy { file: PathBuf },
    /// Run the HTTP game server.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
    },
}

fn set(c: &Coalgebra, states: impl IntoIterator<Item = StateId>) -> String {
    let names: Vec<&str> = states.into_iter().map(|s| c.name(s)).collect();
    format!("{{{}}}", names.join(","))
}

fn pred(c: &Coalgebra, p: &Predicate) -> String {
    set(c, p.iter())
}

fn load(file: &PathBuf) -> coalgame::Result<Analyzed> {
    Ok(Analyzed::new(io::load(file)?))
}

fn run(cmd: Command) -> coalgame::Result<ExitCode> {
    match cmd {
        Command::Partition { file, rounds } => {
            let sys = load(&file)?;
            let c = &sys.coalgebra;
            if rounds {
                for (i, r) in sys.analysis.table.rounds().iter().enumerate() {
                    let blocks: Vec<String> = r.blocks().iter().map(|b| set(c, b.iter().copied())).collect();
                    println!("R{i}: {}", blocks.join(" "));
                }
            } else {
                for b in sys.analysis.partition.blocks() {
                    println!("{}", set(c, b.iter().copied()));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { file, x0, x1 } => {
            let sys = load(&file)?;
            let (a, b) = (sys.state(&x0)?, sys.state(&x1)?);
            let t = &sys.analysis.table;
            match (t.index(a, b), t.witness(a, b)) {
                (Some(i), Some(w)) => {
                    println!("not bisimilar, I={i}, T=({},{})", sys.coalgebra.name(w.state), pred(&sys.coalgebra, &w.block));
                    Ok(ExitCode::from(1))
                }
                _ => {
                    println!("bisimilar");
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::Formula { file, x0, x1, recode } => {
            let sys = load(&file)?;
            let f = sys.formula(sys.state(&x0)?, sys.state(&x1)?, recode)?;
            println!("{f}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Strategy { file } => {
            let sys = load(&file)?;
            let c = &sys.coalgebra;
            let t = &sys.analysis.table;
            for a in c.states() {
                for b in c.states().filter(|&b| b != a) {
                    let (x0, x1) = (c.name(a), c.name(b));
                    match (t.index(a, b), t.witness(a, b)) {
                        (Some(i), Some(w)) => println!("{x0} {x1} I={i} T=({},{})", c.name(w.state), pred(c, &w.block)),
                        _ => println!("{x0} {x1} I=inf"),
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Serve { port, host } => {
            let addr = SocketAddr::new(host, port);
            eprintln!("listening on http://{addr}");
            let rt = tokio::runtime::Runtime::new().map_err(|e| coalgame::Error::Io(e.to_string()))?;
            rt.block_on(coalgame_service::serve(addr)).map_err(|e| coalgame::Error::Io(e.to_string()))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
