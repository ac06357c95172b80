//! One random case with half of the eigenphases zero; prints the trace.
//!
//! cargo run --release --example random_case -- [N] [m] [seed]

use qann::experiment::{generate_random_case, stream_rng, RandomCaseSpec, Stream};
use qann::pipeline::{run_iterations, RunOptions, StoppingRule};
use qann::register::RegisterLayout;

fn main() -> qann::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let dim = args.first().copied().unwrap_or(128);
    let m = args.get(1).copied().unwrap_or(6);
    let seed = args.get(2).copied().unwrap_or(0) as u64;

    let case = generate_random_case(RandomCaseSpec {
        dim,
        phase_qubits: m,
        seed,
    })?;
    let options = RunOptions {
        layout: RegisterLayout::for_data_dim(m, dim)?,
        max_iter: 30,
        stopping: StoppingRule::default(),
        coefficients: None,
    };
    let trace = run_iterations(
        &case.evolution,
        &case.input,
        &case.target,
        &options,
        &mut stream_rng(seed, Stream::Measurement),
    )?;
    println!(
        "N = {dim}, m = {m}, seed = {seed}, P_f = {:.4}",
        trace.success_probability
    );
    println!("{:>4} {:>9} {:>9}  stop", "iter", "p_zero", "fidelity");
    for r in &trace.records {
        println!(
            "{:>4} {:>9.5} {:>9.5}  {}",
            r.iteration,
            r.p_zero,
            r.fidelity,
            if r.stop { "*" } else { "" }
        );
    }
    println!("first peak at iteration {}", trace.first_peak_iteration());
    Ok(())
}
