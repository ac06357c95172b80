//! Four-dimensional worked example: limit projector, then amplification on
//! both test inputs with the exact and the split evolution.
//!
//! cargo run --release --example worked_example

use qann::evolution::{EvolutionOperator, TrotterPlan};
use qann::experiment::{stream_rng, worked_example_training, Stream, WORKED_EXAMPLE_INPUTS};
use qann::learning::{limit_weights, WeightMatrix};
use qann::linalg::{svd_small, ComplexVector};
use qann::pipeline::{run_iterations, RunOptions, StoppingRule};
use qann::register::RegisterLayout;

fn main() -> qann::Result<()> {
    let set = worked_example_training();
    let svd = svd_small(set.matrix())?;
    println!("singular values: {:?}", svd.singular_values);

    let projector = limit_weights(&set)?;
    println!("QQ† =");
    for i in 0..4 {
        let row: Vec<String> = projector
            .row(i)
            .iter()
            .map(|z| format!("{:+.3}", z.re))
            .collect();
        println!("  {}", row.join(" "));
    }

    let gram = WeightMatrix::from_training(&set)?;
    let layout = RegisterLayout::for_data_dim(6, 4)?;
    let exact = EvolutionOperator::exact(gram.matrix(), 1.0, 6)?;
    let split = EvolutionOperator::trotter(TrotterPlan::from_matrix(set.matrix(), 1.0, 1)?, 6)?;
    let options = RunOptions {
        layout,
        max_iter: 30,
        stopping: StoppingRule::default(),
        coefficients: None,
    };

    for raw in WORKED_EXAMPLE_INPUTS {
        let x = ComplexVector::from_real(&raw).normalized()?;
        let target = projector.mul_vec(&x);
        println!("\ninput {raw:?}, P_f = {:.4}", target.norm_sqr());
        for (label, op) in [("exact", &exact), ("split", &split)] {
            let trace = run_iterations(
                op,
                &x,
                &target,
                &options,
                &mut stream_rng(0, Stream::Measurement),
            )?;
            let k = trace.first_peak_iteration();
            println!(
                "  {label:>5}: fidelity {:.4} at iteration {k} (p_zero {:.2e}), stop rule fired at {:?}",
                trace.records[k].fidelity, trace.records[k].p_zero, trace.stopping_iteration
            );
        }
    }
    Ok(())
}
