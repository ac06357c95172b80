//! Symmetric splitting of e^{i2πW} into rank-one exponentials, and how the
//! error falls with the number of slices.
//!
//! cargo run --release --example split_evolution

use qann::evolution::{strang_split, TrotterPlan};
use qann::experiment::worked_example_training;
use qann::learning::WeightMatrix;
use qann::linalg::unitary_exponential;

fn main() -> qann::Result<()> {
    let set = worked_example_training();
    let gram = WeightMatrix::from_training(&set)?;
    let exact = unitary_exponential(gram.matrix(), 1.0)?;

    let plan = TrotterPlan::from_matrix(set.matrix(), 1.0, 1)?;
    println!("factors of one slice (column, time):");
    for f in plan.slice_factors() {
        println!("  x{} for t = {}", f.column + 1, f.time);
    }

    println!("\n{:>4} {:>12}", "r", "‖S − U‖₂");
    let mut previous = f64::INFINITY;
    for r in [1, 2, 4, 8, 16] {
        let err = strang_split(&TrotterPlan::from_matrix(set.matrix(), 1.0, r)?)?
            .sub(&exact)
            .spectral_norm();
        println!("{r:>4} {err:>12.3e}  ratio {:.2}", previous / err);
        previous = err;
    }
    Ok(())
}
