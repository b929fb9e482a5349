//! Configurations shared by the solver benchmarks in `benches/`.

use taperbeam::{BeamConfig, BoundaryKind};

/// Perforated beam under exponential load on a stiff foundation.
pub fn perforated(bc: BoundaryKind) -> BeamConfig {
    BeamConfig::new(0.3, 4, 0.0, 0.0, 1.0, 10.0, 10.0, bc).expect("valid configuration")
}

/// Tapered perforated beam under uniform load.
pub fn tapered(bc: BoundaryKind) -> BeamConfig {
    BeamConfig::new(0.5, 2, 0.5, 0.5, 0.0, 5.0, 10.0, bc).expect("valid configuration")
}

/// Named cases covering both supports.
pub fn cases() -> Vec<(&'static str, BeamConfig)> {
    vec![
        ("perforated-ss", perforated(BoundaryKind::SS)),
        ("perforated-cs", perforated(BoundaryKind::CS)),
        ("tapered-ss", tapered(BoundaryKind::SS)),
        ("tapered-cs", tapered(BoundaryKind::CS)),
    ]
}
