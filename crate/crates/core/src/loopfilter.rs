//! The analog feedback chain between the charge pump and the two actuators.
//!
//! Signal path: PI filter (proportional resistor + integrating capacitor,
//! output bounded by the pump's 0-5 V compliance), gain-two preamp, -5 V
//! bias, gain-300 stage with op-amp rails, then a split into
//!   * fast path: phase-advance (lead) filter and adjustable gain, driving
//!     the current modulator;
//!   * slow path: integrator with hard limits and a latched overrun flag,
//!     driving the piezo.
//!
//! The quiescent unlocked chain (everything at zero) sits at the negative
//! main rail: 300 * (0 - 5) clamps hard low, which is what yanks the laser
//! toward lock on startup. In lock the bias places the balance point at
//! v_pi = 2.5 V, where the main-stage output is symmetric around zero.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iir::LeadFilter;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LoopConfig {
    /// PI proportional term: volts per unit pump current (R9 times the pump
    /// scale).
    pub r9_gain_v: f64,
    /// PI integration time constant (C1 against the pump scale), s.
    pub c1_tau_s: f64,
    /// Lower compliance rail of the PI node, V.
    pub rail_lo_v: f64,
    /// Upper compliance rail of the PI node, V.
    pub rail_hi_v: f64,
    /// Preamp gain (low-impedance buffer).
    pub pre_gain: f64,
    /// Bias added ahead of the main stage, V.
    pub bias_v: f64,
    /// Main amplification stage gain.
    pub main_gain: f64,
    /// Symmetric op-amp rail of the main stage, V.
    pub main_rail_v: f64,
    /// Lead-filter zero time constant, s (`tau1 > tau2`).
    pub lead_tau1_s: f64,
    /// Lead-filter pole time constant, s.
    pub lead_tau2_s: f64,
    /// Adjustable fast-path gain driving the current modulator
    /// (the modulator itself is taken as 1 mA/V).
    pub fast_gain: f64,
    /// Slow integrator time constant (R18*C8), s.
    pub slow_tau_s: f64,
    /// Symmetric hard limit of the slow integrator, V.
    pub slow_limit_v: f64,
}

impl Default for LoopConfig {
    fn default() -> Self {
        // Time constants place the fast crossover near 1 MHz with the
        // default laser and divider settings; the lead section peaks its
        // 54.9 deg advance at ~1.5 MHz to ride through the FM sign flip.
        Self {
            r9_gain_v: 0.5,
            c1_tau_s: 3.2e-6,
            rail_lo_v: 0.0,
            rail_hi_v: 5.0,
            pre_gain: 2.0,
            bias_v: -5.0,
            main_gain: 300.0,
            main_rail_v: 13.0,
            lead_tau1_s: 3.36e-7,
            lead_tau2_s: 3.36e-8,
            fast_gain: 5.2e-3,
            slow_tau_s: 0.1,
            slow_limit_v: 10.0,
        }
    }
}

impl LoopConfig {
    pub fn validate(&self) -> Result<()> {
        let vals = [
            self.r9_gain_v,
            self.c1_tau_s,
            self.rail_lo_v,
            self.rail_hi_v,
            self.pre_gain,
            self.bias_v,
            self.main_gain,
            self.main_rail_v,
            self.lead_tau1_s,
            self.lead_tau2_s,
            self.fast_gain,
            self.slow_tau_s,
            self.slow_limit_v,
        ];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config(
                "loop filter parameters must be finite".into(),
            ));
        }
        if !(self.lead_tau1_s > self.lead_tau2_s) || !(self.lead_tau2_s > 0.0) {
            return Err(Error::Config(format!(
                "lead filter must advance phase: need tau1 ({}) > tau2 ({}) > 0",
                self.lead_tau1_s, self.lead_tau2_s
            )));
        }
        if !(self.rail_lo_v < self.rail_hi_v) {
            return Err(Error::Config("PI rails must satisfy lo < hi".into()));
        }
        if !(self.main_rail_v > 0.0) || !(self.slow_limit_v > 0.0) {
            return Err(Error::Config(
                "main rail and slow limit are symmetric magnitudes, > 0".into(),
            ));
        }
        if !(self.c1_tau_s > 0.0) || !(self.slow_tau_s > 0.0) {
            return Err(Error::Config(
                "integrator time constants must be > 0".into(),
            ));
        }
        Ok(())
    }

    /// Lead-section response `(1 + i*2*pi*f*tau1) / (1 + i*2*pi*f*tau2)`.
    pub fn lead_response(&self, f: f64) -> Complex64 {
        let w = 2.0 * std::f64::consts::PI * f;
        Complex64::new(1.0, w * self.lead_tau1_s) / Complex64::new(1.0, w * self.lead_tau2_s)
    }

    /// Frequency of maximum lead phase advance, `1/(2*pi*sqrt(tau1*tau2))`.
    pub fn lead_peak_hz(&self) -> f64 {
        1.0 / (2.0 * std::f64::consts::PI * (self.lead_tau1_s * self.lead_tau2_s).sqrt())
    }
}

/// Outputs of one chain step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterOutputs {
    /// Fast-path drive, V (equals the modulator current in mA at the fixed
    /// 1 mA/V conversion).
    pub fast_v: f64,
    /// Slow-path (piezo) drive, V.
    pub slow_v: f64,
    /// Main-stage output before the split, V.
    pub v3_v: f64,
}

/// Chain state: PI capacitor, lead memory, slow integrator, overrun latch.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterChainState {
    pi_integral: f64,
    lead: LeadFilter,
    slow_integral: f64,
    overrun: bool,
    dt: f64,
}

impl FilterChainState {
    pub fn new(cfg: &LoopConfig, dt: f64) -> Result<Self> {
        cfg.validate()?;
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Config(format!("dt {dt} must be positive")));
        }
        Ok(Self {
            pi_integral: 0.0,
            lead: LeadFilter::new(cfg.lead_tau1_s, cfg.lead_tau2_s, dt),
            slow_integral: 0.0,
            overrun: false,
            dt,
        })
    }

    /// State with preset integrator voltages (warm starts and equilibrium
    /// checks).
    pub fn preset(cfg: &LoopConfig, dt: f64, pi_integral: f64, slow_integral: f64) -> Result<Self> {
        let mut s = Self::new(cfg, dt)?;
        s.pi_integral = pi_integral;
        s.slow_integral = slow_integral;
        Ok(s)
    }

    pub fn overrun(&self) -> bool {
        self.overrun
    }

    /// Clear the latched overrun indicator (operator intervention).
    pub fn reset_overrun(&mut self) {
        self.overrun = false;
    }

    pub fn pi_integral(&self) -> f64 {
        self.pi_integral
    }

    pub fn slow_integral(&self) -> f64 {
        self.slow_integral
    }

    /// Advance the chain one step. `i_pump_ma` is the charge-pump current
    /// averaged over the step.
    pub fn step(&mut self, cfg: &LoopConfig, i_pump_ma: f64) -> Result<FilterOutputs> {
        if !i_pump_ma.is_finite() {
            return Err(Error::NonFinite(format!("pump current {i_pump_ma}")));
        }
        // The PI storage node is bounded by the pump's compliance range, so
        // the integral clamps along with the output.
        self.pi_integral += i_pump_ma * self.dt / cfg.c1_tau_s;
        self.pi_integral = self.pi_integral.clamp(cfg.rail_lo_v, cfg.rail_hi_v);
        let v_pi =
            (i_pump_ma * cfg.r9_gain_v + self.pi_integral).clamp(cfg.rail_lo_v, cfg.rail_hi_v);
        let v2 = cfg.pre_gain * v_pi;
        let v3 = (cfg.main_gain * (v2 + cfg.bias_v)).clamp(-cfg.main_rail_v, cfg.main_rail_v);

        let fast_v = cfg.fast_gain * self.lead.step(v3);

        self.slow_integral += v3 * self.dt / cfg.slow_tau_s;
        if self.slow_integral.abs() >= cfg.slow_limit_v {
            self.slow_integral = self
                .slow_integral
                .clamp(-cfg.slow_limit_v, cfg.slow_limit_v);
            self.overrun = true;
        }

        Ok(FilterOutputs {
            fast_v,
            slow_v: self.slow_integral,
            v3_v: v3,
        })
    }
}
