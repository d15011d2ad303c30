//! Slave-laser model: a phase integrator with free-running noise and two
//! actuators.
//!
//! Injection-current FM is the fast actuator. Its low-frequency (thermal)
//! and high-frequency (carrier-density) mechanisms oppose each other, so the
//! response `H(f) = k_thermal/(1 + i*f/f_thermal) - k_carrier` flips sign:
//! the phase passes -90 deg exactly once, at
//! `f_x = f_thermal * sqrt(k_thermal/k_carrier - 1)`.
//!
//! Piezo cavity-length tuning is the slow actuator, a resonant low-pass a
//! few kHz wide. Both actuators are realized in discrete time by bilinear
//! transform (see `iir`), unconditionally stable at any step size.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iir::{OnePoleLp, ResonantLowPass};
use crate::noise::PowerLawNoiseSpec;

/// Oversampling required of the FM crossover by the discretized stepper.
pub const MIN_CROSSOVER_OVERSAMPLING: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LaserParams {
    /// Free-running phase noise of the slave relative to an ideal oscillator.
    pub free_run_noise: PowerLawNoiseSpec,
    /// Thermal FM coefficient, Hz/mA, > 0.
    pub k_thermal_hz_per_ma: f64,
    /// Thermal cutoff frequency, Hz.
    pub f_thermal_hz: f64,
    /// Carrier-density FM coefficient, Hz/mA, > 0, opposite sign to thermal.
    pub k_carrier_hz_per_ma: f64,
    /// Piezo tuning coefficient, Hz/V.
    pub k_piezo_hz_per_v: f64,
    /// First mechanical resonance of the piezo, Hz.
    pub f_piezo_hz: f64,
    /// Quality factor of the piezo resonance, > 0.
    pub q_piezo: f64,
    /// Initial beat-frequency offset from target, Hz.
    pub detuning0_hz: f64,
    /// Mode-hop guard: runs abort once the current-induced detuning exceeds
    /// this magnitude. Stands in for the mode-hop-free tuning range.
    pub max_current_detuning_hz: f64,
}

impl Default for LaserParams {
    fn default() -> Self {
        // Gains are engineering choices; the source material gives none.
        // k_thermal/k_carrier = 5 with f_thermal = 1.5 MHz puts the FM sign
        // crossover at 3 MHz.
        Self {
            free_run_noise: PowerLawNoiseSpec::none(),
            k_thermal_hz_per_ma: 2.5e8,
            f_thermal_hz: 1.5e6,
            k_carrier_hz_per_ma: 5e7,
            k_piezo_hz_per_v: 1e7,
            f_piezo_hz: 3e3,
            q_piezo: 10.0,
            detuning0_hz: 0.0,
            max_current_detuning_hz: 5e8,
        }
    }
}

impl LaserParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.k_thermal_hz_per_ma,
            self.f_thermal_hz,
            self.k_carrier_hz_per_ma,
            self.k_piezo_hz_per_v,
            self.f_piezo_hz,
            self.q_piezo,
            self.detuning0_hz,
            self.max_current_detuning_hz,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("laser parameters must be finite".into()));
        }
        if !(self.k_thermal_hz_per_ma > 0.0) || !(self.k_carrier_hz_per_ma > 0.0) {
            return Err(Error::Config("FM coefficients must be positive".into()));
        }
        if self.k_thermal_hz_per_ma <= self.k_carrier_hz_per_ma {
            return Err(Error::Config(
                "k_thermal must exceed k_carrier for a finite FM sign crossover".into(),
            ));
        }
        if !(self.f_thermal_hz > 0.0) || !(self.f_piezo_hz > 0.0) || !(self.q_piezo > 0.0) {
            return Err(Error::Config(
                "thermal cutoff, piezo resonance and piezo Q must be positive".into(),
            ));
        }
        let fx = self.fm_crossover_hz();
        if self.f_thermal_hz >= fx {
            return Err(Error::Config(format!(
                "thermal cutoff {} Hz must lie below the FM crossover {} Hz \
                 (requires k_thermal > 2*k_carrier)",
                self.f_thermal_hz, fx
            )));
        }
        Ok(())
    }

    /// Frequency where the current-FM phase passes -90 deg (Re H = 0).
    pub fn fm_crossover_hz(&self) -> f64 {
        self.f_thermal_hz * (self.k_thermal_hz_per_ma / self.k_carrier_hz_per_ma - 1.0).sqrt()
    }

    /// Complex injection-current FM response, Hz/mA.
    pub fn current_fm_response(&self, f: f64) -> Complex64 {
        let thermal = Complex64::new(self.k_thermal_hz_per_ma, 0.0)
            / Complex64::new(1.0, f / self.f_thermal_hz);
        thermal - self.k_carrier_hz_per_ma
    }

    /// Complex piezo frequency response, Hz/V:
    /// `k_piezo * w0^2 / (s^2 + s*w0/q + w0^2)`.
    pub fn piezo_response(&self, f: f64) -> Complex64 {
        let s = Complex64::new(0.0, f / self.f_piezo_hz);
        Complex64::new(self.k_piezo_hz_per_v, 0.0) / (s * s + s / self.q_piezo + 1.0)
    }
}

/// Value-semantics laser state: optical phase relative to the master
/// (baseband) plus actuator filter memories. Stepping is sequential per
/// instance; distinct instances are independent.
#[derive(Debug, Clone, PartialEq)]
pub struct LaserState {
    phase: f64,
    thermal: OnePoleLp,
    piezo: ResonantLowPass,
    dt: f64,
}

impl LaserState {
    /// Build a stepper for fixed `params` and step size `dt`. The FM
    /// crossover must be oversampled at least 20x.
    pub fn new(params: &LaserParams, dt: f64) -> Result<Self> {
        params.validate()?;
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Config(format!("dt {dt} must be positive")));
        }
        let fx = params.fm_crossover_hz();
        if dt > 1.0 / (MIN_CROSSOVER_OVERSAMPLING * fx) {
            return Err(Error::Config(format!(
                "dt {dt} too coarse: must be <= 1/({MIN_CROSSOVER_OVERSAMPLING} * f_x) \
                 = {} to resolve the FM crossover",
                1.0 / (MIN_CROSSOVER_OVERSAMPLING * fx)
            )));
        }
        Ok(Self {
            phase: 0.0,
            thermal: OnePoleLp::new(params.f_thermal_hz, dt),
            piezo: ResonantLowPass::new(params.f_piezo_hz, params.q_piezo, dt),
            dt,
        })
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advance one step. `i_mod_ma` drives the current FM path, `v_piezo`
    /// the piezo path, `noise_hz` is this step's free-running frequency
    /// noise sample. Returns the current-induced frequency shift so the
    /// caller can enforce the mode-hop guard.
    pub fn step(
        &mut self,
        params: &LaserParams,
        i_mod_ma: f64,
        v_piezo: f64,
        noise_hz: f64,
    ) -> Result<f64> {
        if !i_mod_ma.is_finite() || !v_piezo.is_finite() || !noise_hz.is_finite() {
            return Err(Error::NonFinite(format!(
                "laser step inputs i_mod={i_mod_ma} v_piezo={v_piezo} noise={noise_hz}"
            )));
        }
        let thermal_out = self.thermal.step(i_mod_ma);
        let f_current =
            params.k_thermal_hz_per_ma * thermal_out - params.k_carrier_hz_per_ma * i_mod_ma;
        let f_piezo = params.k_piezo_hz_per_v * self.piezo.step(v_piezo);
        let f_inst = params.detuning0_hz + f_current + f_piezo + noise_hz;
        self.phase += 2.0 * std::f64::consts::PI * f_inst * self.dt;
        Ok(f_current)
    }
}
