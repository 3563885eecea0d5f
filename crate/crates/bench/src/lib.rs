//! Shared inputs for the criterion benches.

use spheregap_core::{DeformationParams, Direction};

/// Evaluation points spread over `(-1, 1)`.
pub fn sample_points(n: usize) -> Vec<f64> {
    (0..n).map(|i| -0.98 + 1.96 * (i as f64 + 0.5) / n as f64).collect()
}

/// A deformed triangle away from both axes.
pub fn off_axis(t: f64) -> DeformationParams {
    DeformationParams::new(Direction::new(0.6, 0.8).expect("unit direction"), t).expect("admissible t")
}
