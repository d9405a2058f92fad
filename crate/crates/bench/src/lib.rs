//! Shared fixtures for the criterion benches.

use swdl_core::{Axis, Signal, SymplecticMatrix};

/// Chirp `e^{j(t + t²/2)}` observed on `[-5, 5]`.
pub fn lfm_fixture() -> Signal {
    Signal::lfm(1.0, 0.5).windowed(-5.0, 5.0)
}

/// `(A1, A2)` of the reference LFM experiment.
pub fn reference_matrices() -> (SymplecticMatrix, SymplecticMatrix) {
    (
        SymplecticMatrix::new(2.0, 2.0, -0.25, 0.25).expect("symplectic"),
        SymplecticMatrix::new(0.0, 0.5, -2.0, 1.0).expect("symplectic"),
    )
}

/// Square `[-5, 5]` lattice with `n` points per side.
pub fn square_axis(n: usize) -> Axis {
    Axis::linspace(-5.0, 5.0, n).expect("valid axis")
}
