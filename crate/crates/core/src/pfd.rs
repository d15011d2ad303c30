//! Digital phase-frequency discrimination.
//!
//! Dividers are phase-counting devices, so they act directly on baseband
//! phase: a divide-by-M stage emits one edge each time the accumulated input
//! phase crosses a multiple of `2*pi*M`, with the crossing instant linearly
//! interpolated between samples. This keeps the simulation at loop-dynamics
//! sample rates instead of synthesizing microwave waveforms.
//!
//! The discriminator itself is the classic dual flip-flop machine with an
//! ideal tri-state charge pump: a reference edge sets UP, a divided-beat
//! edge sets DOWN, and both clear the instant both are set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::PhaseSeries;

pub const N_DIV_MIN: u32 = 24;
pub const N_DIV_MAX: u32 = 500_000;
pub const R_DIV_MIN: u32 = 1;
pub const R_DIV_MAX: u32 = 16_383;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PfdConfig {
    /// Fixed pre-divider ahead of the N counter, >= 1 (1 = bypassed).
    pub prescaler_p: u32,
    /// Beat divider modulus.
    pub n_div: u32,
    /// Reference divider modulus.
    pub r_div: u32,
    /// Charge-pump magnitude. Normalized units; absolute loop gain is set in
    /// the filter chain.
    pub i_cp_ma: f64,
}

impl Default for PfdConfig {
    fn default() -> Self {
        Self {
            prescaler_p: 1,
            n_div: 96,
            r_div: 3,
            i_cp_ma: 1.0,
        }
    }
}

impl PfdConfig {
    pub fn validate(&self) -> Result<()> {
        if self.prescaler_p < 1 {
            return Err(Error::Config("prescaler must be >= 1".into()));
        }
        if !(N_DIV_MIN..=N_DIV_MAX).contains(&self.n_div) {
            return Err(Error::Config(format!(
                "N divider {} outside [{N_DIV_MIN}, {N_DIV_MAX}]",
                self.n_div
            )));
        }
        if !(R_DIV_MIN..=R_DIV_MAX).contains(&self.r_div) {
            return Err(Error::Config(format!(
                "R divider {} outside [{R_DIV_MIN}, {R_DIV_MAX}]",
                self.r_div
            )));
        }
        if !(self.i_cp_ma > 0.0) || !self.i_cp_ma.is_finite() {
            return Err(Error::Config(format!(
                "charge-pump magnitude {} must be positive",
                self.i_cp_ma
            )));
        }
        Ok(())
    }

    /// Total division ahead of the discriminator's beat input.
    pub fn beat_modulus(&self) -> u64 {
        self.prescaler_p as u64 * self.n_div as u64
    }
}

/// Dual flip-flop state. `(up, down)` are never left simultaneously set
/// after a step completes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PfdState {
    pub up: bool,
    pub down: bool,
}

/// Advance the discriminator by one event and return the pump output in mA:
/// `i_cp * (up - down)` evaluated after the update and tri-state reset.
pub fn pfd_step(state: &mut PfdState, ref_edge: bool, div_edge: bool, i_cp_ma: f64) -> f64 {
    if ref_edge {
        state.up = true;
    }
    if div_edge {
        state.down = true;
    }
    if state.up && state.down {
        state.up = false;
        state.down = false;
    }
    i_cp_ma * (state.up as i8 as f64 - state.down as i8 as f64)
}

/// Streaming divider: feeds on phase samples, emits edge times whenever the
/// accumulated phase crosses `2*pi*modulus` thresholds (counted from the
/// first sample seen).
#[derive(Debug, Clone)]
pub struct PhaseEdgeTracker {
    step_rad: f64,
    base: f64,
    k_next: u64,
    last_t: f64,
    last_phase: f64,
    started: bool,
}

impl PhaseEdgeTracker {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus < 1 {
            return Err(Error::Config("divider modulus must be >= 1".into()));
        }
        Ok(Self {
            step_rad: 2.0 * std::f64::consts::PI * modulus as f64,
            base: 0.0,
            k_next: 1,
            last_t: 0.0,
            last_phase: 0.0,
            started: false,
        })
    }

    /// Total edges emitted so far.
    pub fn edge_count(&self) -> u64 {
        self.k_next - 1
    }

    /// Advance to the sample `(t, phase)`, appending any crossing times to
    /// `out`. Errors if the phase decreased.
    pub fn advance(&mut self, t: f64, phase: f64, out: &mut Vec<f64>) -> Result<()> {
        if !self.started {
            self.base = phase;
            self.last_t = t;
            self.last_phase = phase;
            self.started = true;
            return Ok(());
        }
        if phase < self.last_phase {
            return Err(Error::DecreasingPhase { index: 0 });
        }
        loop {
            let threshold = self.base + self.k_next as f64 * self.step_rad;
            if phase < threshold {
                break;
            }
            let dphi = phase - self.last_phase;
            let frac = if dphi > 0.0 {
                ((threshold - self.last_phase) / dphi).clamp(0.0, 1.0)
            } else {
                0.0
            };
            out.push(self.last_t + frac * (t - self.last_t));
            self.k_next += 1;
        }
        self.last_t = t;
        self.last_phase = phase;
        Ok(())
    }
}

/// Edge times of a divide-by-`modulus` stage fed with `series`. One edge per
/// `2*pi*modulus` of accumulated phase; times strictly increasing;
/// `count = floor(total_phase_span / (2*pi*modulus))`.
pub fn edges_from_phase(series: &PhaseSeries, modulus: u64) -> Result<Vec<f64>> {
    let mut tracker = PhaseEdgeTracker::new(modulus)?;
    let mut edges = Vec::new();
    for (i, &phi) in series.samples().iter().enumerate() {
        tracker
            .advance(series.time_at(i), phi, &mut edges)
            .map_err(|e| match e {
                Error::DecreasingPhase { .. } => Error::DecreasingPhase { index: i },
                other => other,
            })?;
    }
    Ok(edges)
}
