//! How often the sampled Hadamard-basis stopping rule fires next to the true
//! fidelity peak, on an input built to peak exactly at iteration 3.
//!
//! cargo run --release --example stopping_rule -- [shots]

use qann::experiment::{stream_rng, ExactPhaseFixture, Stream};
use qann::pipeline::{run_iterations, RunOptions, StoppingRule};

fn main() -> qann::Result<()> {
    let shots: u64 = std::env::args()
        .nth(1)
        .map_or(10, |s| s.parse().expect("shots must be an integer"));
    let fx = ExactPhaseFixture::default();
    let options = RunOptions {
        layout: fx.layout,
        max_iter: 12,
        stopping: StoppingRule {
            shots,
            tolerance: 0.05,
        },
        coefficients: Some(fx.coefficients),
    };

    let reference = run_iterations(
        &fx.evolution,
        &fx.input,
        &fx.target,
        &options,
        &mut stream_rng(0, Stream::Measurement),
    )?;
    println!(
        "{:>4} {:>9} {:>9} {:>10}  exact Hadamard P(0) per qubit",
        "iter", "p_zero", "fidelity", "a_k"
    );
    for r in &reference.records {
        let (a, _) = r.coefficients.unwrap_or_default();
        let h: Vec<String> = r.hadamard_exact.iter().map(|p| format!("{p:.4}")).collect();
        println!(
            "{:>4} {:>9.5} {:>9.5} {:>10.6}  {}",
            r.iteration,
            r.p_zero,
            r.fidelity,
            a,
            h.join(" ")
        );
    }

    let peak = reference.first_peak_iteration();
    let mut histogram = vec![0usize; options.max_iter + 2];
    for stream in 0..1000 {
        let trace = run_iterations(
            &fx.evolution,
            &fx.input,
            &fx.target,
            &options,
            &mut stream_rng(stream, Stream::Measurement),
        )?;
        histogram[trace.stopping_iteration.unwrap_or(options.max_iter + 1)] += 1;
    }
    println!("\nfirst firing over 1000 streams ({shots} shots, peak at {peak}):");
    for (k, n) in histogram.iter().enumerate().filter(|(_, &n)| n > 0) {
        let label = if k > options.max_iter {
            "never".to_string()
        } else {
            k.to_string()
        };
        println!("  {label:>5}: {n}");
    }
    Ok(())
}
