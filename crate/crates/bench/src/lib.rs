//! Benchmark fixtures for the analysis pipeline.

use akhodge_core::{builtin, AKManifold};

/// The 4-dimensional built-in manifolds.
pub const FOUR_DIMENSIONAL: [&str; 2] = ["torus4", "kodaira_thurston"];

pub fn fixture(name: &str) -> AKManifold {
    builtin(name).expect("built-in manifold")
}
