use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qann::experiment::{run, EvolutionKind, Mode, RunConfig};
use qann::pipeline::StoppingRule;

#[derive(Parser)]
#[command(
    name = "qann",
    version,
    about = "Phase-estimation / amplitude-amplification model of a Widrow-Hoff autoassociator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Worked four-dimensional example: two inputs, exact and split evolution
    Example {
        /// Phase-register qubits
        #[arg(long, default_value_t = 6)]
        m: usize,
        #[command(flatten)]
        common: Common,
    },
    /// One random case with half of the eigenphases zero
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        m: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Same random case over several phase-register sizes
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6")]
        m_list: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Classical Widrow-Hoff learning curve on the example data
    Learn {
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[arg(long, default_value_t = 1000)]
        epochs: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EvolutionArg {
    Exact,
    Trotter,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "exact")]
    evolution: EvolutionArg,
    #[arg(long, default_value_t = 1)]
    trotter_steps: usize,
    #[arg(long, default_value_t = 30)]
    max_iter: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Measurements per qubit for the stopping rule
    #[arg(long, default_value_t = 10)]
    shots: u64,
    #[arg(long, default_value_t = 0.05)]
    stop_tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn config(mode: Mode, phase_qubits: usize, common: Common) -> RunConfig {
    RunConfig {
        mode,
        phase_qubits,
        max_iter: common.max_iter,
        stopping: StoppingRule {
            shots: common.shots,
            tolerance: common.stop_tol,
        },
        evolution: match common.evolution {
            EvolutionArg::Exact => EvolutionKind::Exact,
            EvolutionArg::Trotter => EvolutionKind::Trotter {
                steps: common.trotter_steps,
            },
        },
        out_dir: common.out,
        seed: common.seed,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.command {
        Command::Example { m, common } => config(Mode::Example, m, common),
        Command::Random { n, m, common } => config(Mode::Random { dim: n }, m, common),
        Command::Sweep { n, m_list, common } => config(
            Mode::Sweep {
                dim: n,
                phase_qubits: m_list,
            },
            6,
            common,
        ),
        Command::Learn {
            eta,
            epochs,
            common,
        } => config(Mode::Learn { eta, epochs }, 6, common),
    };
    match run(&cfg) {
        Ok(report) => {
            print!("{}", report.summary);
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
