//! Splitting Clifford+T circuits into Clifford and non-Clifford unitaries
//! via ZX-diagram border detection, and exploiting the split for hybrid
//! stabilizer/dense simulation, projector-circuit synthesis, observable
//! absorption, and split-ansatz VQE.

pub mod border;
pub mod circuit;
pub mod densesim;
pub mod matrix;
pub mod oracle;
pub mod projector;
pub mod stabilizer;
pub mod vqe;
pub mod zx;

pub use circuit::{Circuit, Gate, PauliString, PauliSum, Phase};
