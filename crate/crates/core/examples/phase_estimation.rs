//! Phase estimation on its own: an exactly representable eigenvalue lands on
//! one phase index, and a general input spreads over its eigenbranches.
//!
//! cargo run --release --example phase_estimation

use qann::evolution::EvolutionOperator;
use qann::experiment::{worked_example_training, WORKED_EXAMPLE_INPUTS};
use qann::learning::WeightMatrix;
use qann::linalg::{ComplexMatrix, ComplexVector};
use qann::pipeline::{apply_pea, build_input_preparation, phase_index};
use qann::register::{Register, RegisterLayout, StateVector};

fn main() -> qann::Result<()> {
    // λ = 0.25 on three qubits reads as 010.
    let layout = RegisterLayout::new(3, 1)?;
    let w = ComplexMatrix::from_real_rows(&[&[0.25, 0.0], &[0.0, 0.0]]);
    let evolution = EvolutionOperator::exact(&w, 1.0, 3)?;
    let mut state = StateVector::init_zero(layout);
    apply_pea(
        &mut state,
        &evolution,
        &build_input_preparation(&ComplexVector::basis(2, 0))?,
    )?;
    let probs = state.register_probabilities(Register::Phase);
    let best = (0..probs.len())
        .max_by(|&a, &b| probs[a].total_cmp(&probs[b]))
        .unwrap();
    println!(
        "λ = 0.25, m = 3: phase register reads {best:03b} with probability {:.6}",
        probs[best]
    );

    // Worked-example weights on six phase qubits.
    let gram = WeightMatrix::from_training(&worked_example_training())?;
    let layout = RegisterLayout::for_data_dim(6, 4)?;
    let evolution = EvolutionOperator::exact(gram.matrix(), 1.0, 6)?;
    let x = ComplexVector::from_real(&WORKED_EXAMPLE_INPUTS[0]).normalized()?;
    let mut state = StateVector::init_zero(layout);
    apply_pea(&mut state, &evolution, &build_input_preparation(&x)?)?;
    let probs = state.register_probabilities(Register::Phase);
    println!("\nworked example, m = 6:");
    for (j, &l) in gram.spectral().eigenvalues.iter().enumerate() {
        let alpha = gram.spectral().eigenvector(j).dot(&x).norm_sqr();
        println!(
            "  λ = {l:.4}  nearest index {:>2}  α² = {alpha:.4}",
            phase_index(l, layout)
        );
    }
    for (k, p) in probs.iter().enumerate().filter(|(_, &p)| p > 1e-3) {
        println!("  P(phase = {k:>2}) = {p:.4}");
    }
    Ok(())
}
