//! Benchmark-only crate; see `benches/pipeline.rs`.
//!
//! Shared fixture builders live here so the bench targets stay small.

use opll_core::noise::{PhaseSeries, PowerLawNoiseSpec};
use opll_core::simengine::SimConfig;

/// White-FM phase series used by the spectral and Allan benchmarks.
pub fn noisy_series(n: usize) -> PhaseSeries {
    let spec = PowerLawNoiseSpec::single(-2, 1e3).expect("valid spec");
    opll_core::synthesize_power_law(&spec, n, 1e6, 42).expect("synthesis")
}

/// Short closed-loop run: default lock with a 1 MHz initial detuning.
pub fn short_run_config() -> SimConfig {
    let mut cfg = SimConfig {
        duration_s: 5e-4,
        record_fs_hz: 4e6,
        ..SimConfig::default()
    };
    cfg.laser.detuning0_hz = 1e6;
    cfg
}
