//! Widrow-Hoff iteration from W = 0: eigenvalues flatten to one and W
//! approaches the projector QQ†.
//!
//! cargo run --release --example learning_dynamics -- [eta]

use qann::experiment::worked_example_training;
use qann::learning::{eigenvalue_flattening, train, LearningConfig, WeightMatrix};

fn main() -> qann::Result<()> {
    let eta: f64 = std::env::args()
        .nth(1)
        .map_or(1.0, |s| s.parse().expect("eta must be a number"));
    let set = worked_example_training();
    let gram = WeightMatrix::from_training(&set)?;
    println!("eigenvalues of XX†: {:?}", gram.spectral().eigenvalues);
    println!("stability bound 2/λ_max = {:.4}", gram.stability_bound());

    let trace = train(&set, &LearningConfig { eta, epochs: 3000 })?;
    println!(
        "{:>6} {:>12} {:>10} {:>10} {:>10}",
        "epoch", "‖W−QQ†‖_F", "φ₀", "φ₁", "closed φ₀"
    );
    for r in trace
        .records
        .iter()
        .filter(|r| r.epoch % 100 == 0 || r.epoch < 5)
    {
        let closed = eigenvalue_flattening(&gram.spectral().eigenvalues, eta, r.epoch);
        println!(
            "{:>6} {:>12.3e} {:>10.6} {:>10.6} {:>10.6}",
            r.epoch, r.frobenius_error, r.eigenvalues[0], r.eigenvalues[1], closed[0]
        );
    }
    match trace.converged_at {
        Some(k) => println!("converged at epoch {k}"),
        None => println!("not converged after {} epochs", trace.records.len() - 1),
    }
    Ok(())
}
