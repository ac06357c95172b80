//! Same random case for m = 1..6 phase qubits, through the experiment runner.
//! Writes CSV traces to a temporary directory.
//!
//! cargo run --release --example register_sweep -- [N] [seed]

use qann::experiment::{run, Mode, RunConfig};

fn main() -> qann::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let mut config = RunConfig::new(Mode::Sweep {
        dim: args.first().copied().unwrap_or(128) as usize,
        phase_qubits: (1..=6).collect(),
    });
    config.seed = args.get(1).copied().unwrap_or(0);
    config.out_dir = std::env::temp_dir().join("qann-sweep");
    let report = run(&config)?;
    print!("{}", report.summary);
    println!("traces in {}", config.out_dir.display());
    Ok(())
}
