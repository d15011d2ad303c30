//! Baseband phase-domain simulator of a digital optical phase-locked loop
//! for external-cavity diode lasers, with the measurement pipeline used to
//! characterize it.
//!
//! The lock architecture: the beat note between a master and a slave laser
//! is divided by `P*N`, a reference by `R`, and a dual flip-flop
//! phase-frequency discriminator with a tri-state charge pump compares the
//! divided signals. The pump drives a PI filter and two amplification
//! stages, then splits into a fast path (phase-advance filter into the
//! diode injection current) and a slow path (integrator onto the cavity
//! piezo). Everything is simulated on phases alone, so GHz-range beat
//! frequencies run at tens of MS/s.
//!
//! Modules:
//! * [`noise`] - power-law and dBc/Hz phase-noise synthesis, divider noise
//!   floor;
//! * [`laser`] - slave laser: current-FM response with its 180 degree sign
//!   flip, resonant piezo, time stepping;
//! * [`pfd`] - dividers as phase-threshold edge generators plus the dual
//!   flip-flop charge-pump machine;
//! * [`loopfilter`] - the analog chain from pump to actuator drives;
//! * [`simengine`] - the closed loop and the two-slave experiment;
//! * [`analysis`] - Welch PSD, carrier-fraction phase variance,
//!   spectrum-analyzer corrections, modified Allan deviation, slope fits.

// Negated float comparisons like `!(x > 0.0)` are used throughout the
// validation paths because they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
mod iir;
pub mod laser;
pub mod loopfilter;
pub mod noise;
pub mod pfd;
pub mod presets;
pub mod simengine;

pub use analysis::{
    beat_spectrum, carrier_phase_variance, fit_loglog_slope, mod_allan, rms_phase_variance,
    sa_noise_corrections, welch_psd, AllanCurve, CarrierVariance, SlopeFit, Spectrum,
    SpectrumUnits,
};
pub use error::{Error, Result};
pub use laser::{LaserParams, LaserState};
pub use loopfilter::{FilterChainState, FilterOutputs, LoopConfig};
pub use noise::{
    pfd_noise_floor_dbc, stream_rng, synthesize_dbc, synthesize_power_law, DbcPoint, DbcSpec,
    PhaseSeries, PowerLawNoiseSpec, PowerLawTerm,
};
pub use pfd::{edges_from_phase, pfd_step, PfdConfig, PfdState, PhaseEdgeTracker};
pub use simengine::{
    apply_fringe_highpass, loop_bandwidth_estimate, run_simulation, two_slave_experiment,
    LockOutcome, SharedNoise, SimConfig, SimRecord,
};
