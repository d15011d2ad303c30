//! Closed-loop simulation: master and reference phase processes, slave
//! laser, divider edge generation, discriminator, filter chain, actuators.
//!
//! The formulation is baseband throughout: only phases are simulated, never
//! carrier waveforms. The beat phase ramps at the beat frequency and the
//! dividers count it, so a multi-GHz lock runs at loop-dynamics sample
//! rates. Within each fixed step, divider edges are interpolated linearly
//! and the charge pump is integrated segment by segment between them; the
//! filter chain sees the step-averaged pump current.

use serde::{Deserialize, Serialize};

use crate::analysis::{beat_spectrum, carrier_phase_variance};
use crate::error::{Error, Result};
use crate::laser::{LaserParams, LaserState};
use crate::loopfilter::{FilterChainState, LoopConfig};
use crate::noise::{
    pfd_noise_floor_dbc, stream_rng, synthesize_shaped, DbcSpec, PhaseSeries, PowerLawNoiseSpec,
};
use crate::pfd::{pfd_step, PfdConfig, PfdState, PhaseEdgeTracker};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Relative tolerance on the lock condition `f_ref/R = f_beat/(P*N)`.
pub const LOCK_CONDITION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    /// Target beat frequency, Hz.
    pub f_beat_target_hz: f64,
    /// Reference frequency, Hz. `None` derives it from the lock condition
    /// `f_ref = f_beat * R / (P*N)`; an explicit value inconsistent with the
    /// dividers beyond 1 ppm is rejected.
    pub f_ref_hz: Option<f64>,
    /// Simulation sample rate, Hz.
    pub fs_hz: f64,
    pub duration_s: f64,
    /// Rate at which the output series are recorded (decimated by integer
    /// stride from `fs_hz`).
    pub record_fs_hz: f64,
    pub seed: u64,
    pub laser: LaserParams,
    pub pfd: PfdConfig,
    #[serde(rename = "loop")]
    pub loop_cfg: LoopConfig,
    /// Reference-oscillator phase noise (single-sideband, at the reference
    /// carrier). `None` = noiseless reference.
    pub ref_noise: Option<DbcSpec>,
    /// dB shift applied to every reference-noise point; the natural sweep
    /// axis for reference-quality studies.
    pub ref_noise_offset_db: f64,
    /// Master-laser phase noise (common mode in two-slave experiments).
    pub master_noise: PowerLawNoiseSpec,
    /// Photodetector/electronics noise entering the discriminator input.
    pub detector_floor: PowerLawNoiseSpec,
    /// Inject the divider noise floor (-219 dBc/Hz figure of merit) as an
    /// equivalent white phase noise at the discriminator input.
    pub pfd_floor_enabled: bool,
    /// Divided-domain phase-error band counted as "locked", rad.
    pub lock_threshold_rad: f64,
    /// Consecutive divided periods the error must stay in band.
    pub lock_window_periods: f64,
    /// Divided-domain error drift (from the initial error) beyond which,
    /// with the slow actuator pinned at its limit, the run is declared
    /// diverged.
    pub divergence_bound_rad: f64,
    /// Hard cap on `duration * fs` (memory budget).
    pub max_samples: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            f_beat_target_hz: 6.912e9,
            f_ref_hz: None,
            fs_hz: 64e6,
            duration_s: 5e-3,
            record_fs_hz: 8e6,
            seed: 1,
            laser: LaserParams::default(),
            pfd: PfdConfig::default(),
            loop_cfg: LoopConfig::default(),
            ref_noise: None,
            ref_noise_offset_db: 0.0,
            master_noise: PowerLawNoiseSpec::none(),
            detector_floor: PowerLawNoiseSpec::none(),
            pfd_floor_enabled: false,
            lock_threshold_rad: std::f64::consts::FRAC_PI_2,
            lock_window_periods: 1e4,
            divergence_bound_rad: 1e7,
            max_samples: 200_000_000,
        }
    }
}

impl SimConfig {
    /// Reference frequency actually used: explicit or derived.
    pub fn effective_f_ref_hz(&self) -> f64 {
        match self.f_ref_hz {
            Some(f) => f,
            None => self.f_beat_target_hz * self.pfd.r_div as f64 / self.pfd.beat_modulus() as f64,
        }
    }

    /// Divided comparison rate `f_beat / (P*N)`, Hz.
    pub fn f_pfd_hz(&self) -> f64 {
        self.f_beat_target_hz / self.pfd.beat_modulus() as f64
    }

    pub fn n_steps(&self) -> usize {
        (self.duration_s * self.fs_hz).round() as usize
    }

    pub fn record_stride(&self) -> usize {
        ((self.fs_hz / self.record_fs_hz).round() as usize).max(1)
    }

    /// White phase PSD injected at the discriminator input when the floor is
    /// enabled, rad^2/Hz.
    pub fn pfd_floor_psd(&self) -> Result<f64> {
        let l = pfd_noise_floor_dbc(self.pfd.beat_modulus(), self.f_beat_target_hz)?;
        Ok(2.0 * 10f64.powf(l / 10.0))
    }

    pub fn validate(&self) -> Result<()> {
        self.laser.validate()?;
        self.pfd.validate()?;
        self.loop_cfg.validate()?;
        if !(self.f_beat_target_hz > 0.0) || !self.f_beat_target_hz.is_finite() {
            return Err(Error::Config("beat target must be positive".into()));
        }
        if !(self.fs_hz > 0.0) || !(self.duration_s > 0.0) {
            return Err(Error::Config("fs and duration must be positive".into()));
        }
        let n = self.n_steps();
        if n < 2 {
            return Err(Error::Config("duration covers fewer than two steps".into()));
        }
        if n > self.max_samples {
            return Err(Error::Config(format!(
                "duration*fs = {n} samples exceeds the configured budget {}",
                self.max_samples
            )));
        }
        if !(self.record_fs_hz > 0.0) || self.record_fs_hz > self.fs_hz {
            return Err(Error::Config(format!(
                "record rate {} must be in (0, fs]",
                self.record_fs_hz
            )));
        }
        if !(self.lock_threshold_rad > 0.0) || !(self.lock_window_periods >= 1.0) {
            return Err(Error::Config(
                "lock detector parameters must be positive".into(),
            ));
        }
        // Lock condition: f_ref/R must equal f_beat/(P*N) within 1 ppm.
        if let Some(f_ref) = self.f_ref_hz {
            let implied_beat = f_ref / self.pfd.r_div as f64 * self.pfd.beat_modulus() as f64;
            let rel = (implied_beat - self.f_beat_target_hz).abs() / self.f_beat_target_hz;
            if rel > LOCK_CONDITION_TOLERANCE {
                return Err(Error::Config(format!(
                    "lock condition violated: f_ref/R * P*N = {implied_beat} Hz but the beat \
                     target is {} Hz (relative error {rel:.3e} > 1e-6); fix f_ref_hz or the \
                     dividers, or omit f_ref_hz to derive it",
                    self.f_beat_target_hz
                )));
            }
        }
        // The step size must resolve the loop dynamics.
        let bw = loop_bandwidth_estimate(self);
        if self.fs_hz < 20.0 * bw {
            return Err(Error::Config(format!(
                "fs = {} Hz undersamples the loop: bandwidth estimate {bw:.3e} Hz needs \
                 fs >= {:.3e} Hz",
                self.fs_hz,
                20.0 * bw
            )));
        }
        // Laser stepper enforces its own crossover oversampling.
        LaserState::new(&self.laser, 1.0 / self.fs_hz)?;
        Ok(())
    }
}

/// Magnitude of the open-loop transfer at `f`, small-signal, both paths.
fn open_loop_gain(cfg: &SimConfig, f: f64) -> f64 {
    use num_complex::Complex64;
    let w = TWO_PI * f;
    let pi = Complex64::new(cfg.loop_cfg.r9_gain_v, -1.0 / (w * cfg.loop_cfg.c1_tau_s));
    let stage = cfg.loop_cfg.pre_gain * cfg.loop_cfg.main_gain;
    let fast = cfg.loop_cfg.lead_response(f).norm()
        * cfg.loop_cfg.fast_gain
        * cfg.laser.current_fm_response(f).norm();
    let slow = cfg.laser.piezo_response(f).norm() / (w * cfg.loop_cfg.slow_tau_s);
    let pump_gain = cfg.pfd.i_cp_ma / TWO_PI;
    let integrator = 1.0 / f; // frequency shift (Hz) to beat phase (rad)
    let divide = 1.0 / cfg.pfd.beat_modulus() as f64;
    pump_gain * pi.norm() * stage * (fast + slow) * integrator * divide
}

/// Unity-gain crossover of the open loop (highest crossing on a log grid).
/// Saturates at fs/2 when the gain is still above unity at Nyquist.
pub fn loop_bandwidth_estimate(cfg: &SimConfig) -> f64 {
    let f_hi = cfg.fs_hz / 2.0;
    let mut bw = 0.0;
    let points = 600;
    let (lo, hi) = (1.0f64.ln(), f_hi.ln());
    let mut prev_above = open_loop_gain(cfg, 1.0) >= 1.0;
    for i in 1..=points {
        let f = (lo + (hi - lo) * i as f64 / points as f64).exp();
        let above = open_loop_gain(cfg, f) >= 1.0;
        if prev_above && !above {
            bw = f;
        }
        prev_above = above;
    }
    if prev_above {
        return f_hi;
    }
    bw
}

/// How a run ended.
#[derive(Debug, Clone, PartialEq)]
pub enum LockOutcome {
    Locked {
        t_lock: f64,
    },
    NotLocked,
    /// Error ran away with the slow actuator pinned, or the current-induced
    /// detuning exceeded the mode-hop guard. Series are truncated at `t`.
    Diverged {
        t: f64,
        reason: String,
    },
}

/// Recorded observables of one closed-loop run. All series share the
/// decimated record rate and length.
#[derive(Debug, Clone, PartialEq)]
pub struct SimRecord {
    /// Slave-master relative phase (the in-loop observable), rad. Ramps at
    /// the beat frequency.
    pub beat_phase: PhaseSeries,
    /// Fast-path drive, V.
    pub fast_drive: Vec<f64>,
    /// Slow-path (piezo) drive, V.
    pub slow_drive: Vec<f64>,
    /// Main-stage output ahead of the path split, V.
    pub main_stage: Vec<f64>,
    /// Start of the lock-band window that persisted to the end of the run
    /// (the time from which the divided phase error stayed bounded);
    /// `None` when the run did not end locked.
    pub lock_flag_time: Option<f64>,
    /// Onset times of slow-integrator saturation.
    pub overrun_events: Vec<f64>,
    pub outcome: LockOutcome,
    pub f_beat_target_hz: f64,
}

impl SimRecord {
    pub fn locked(&self) -> bool {
        matches!(self.outcome, LockOutcome::Locked { .. })
    }

    /// Beat phase minus the target ramp `2*pi*f_beat_target*t`, rad.
    pub fn phase_error_series(&self) -> PhaseSeries {
        let fs = self.beat_phase.sample_rate();
        let t0 = self.beat_phase.t0();
        let err: Vec<f64> = self
            .beat_phase
            .samples()
            .iter()
            .enumerate()
            .map(|(i, &phi)| phi - TWO_PI * self.f_beat_target_hz * (t0 + i as f64 / fs))
            .collect();
        PhaseSeries::new(err, fs, t0).expect("record series is non-empty")
    }

    /// Mean beat-frequency error over the trailing `fraction` of the run,
    /// from a linear fit to the phase error, Hz.
    pub fn mean_frequency_error_hz(&self, fraction: f64) -> f64 {
        let err = self.phase_error_series();
        let x = err.samples();
        let start = ((1.0 - fraction) * x.len() as f64) as usize;
        let tail = &x[start..];
        let n = tail.len() as f64;
        let fs = err.sample_rate();
        let mt = (n - 1.0) / 2.0;
        let my = tail.iter().sum::<f64>() / n;
        let mut sxx = 0.0;
        let mut sxy = 0.0;
        for (i, &y) in tail.iter().enumerate() {
            let dx = i as f64 - mt;
            sxx += dx * dx;
            sxy += dx * (y - my);
        }
        (sxy / sxx) * fs / TWO_PI
    }

    /// Carrier-fraction phase variance of the phase error, rad^2.
    pub fn carrier_variance(&self, seg_len: usize) -> Result<f64> {
        let err = self.phase_error_series();
        let spec = beat_spectrum(&err, seg_len, 0.5)?;
        Ok(carrier_phase_variance(&spec, 3.0 * spec.df())?.variance_rad2)
    }
}

/// Seed overrides that make noise realizations common between runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SharedNoise {
    /// Master-laser noise stream seed shared by both loops.
    pub master_seed: u64,
    /// Reference noise stream seed; `None` leaves each loop on its own
    /// reference realization.
    pub reference_seed: Option<u64>,
}

struct NoiseBundle {
    /// Master phase noise, rad, length n_steps+1.
    master: Option<Vec<f64>>,
    /// Slave free-running phase noise, rad.
    free_run: Option<Vec<f64>>,
    /// Reference phase noise, rad.
    reference: Option<Vec<f64>>,
    /// Discriminator-input injected noise (detector + divider floor), rad.
    injected: Option<Vec<f64>>,
}

fn synth_padded(
    psd: impl Fn(f64) -> f64,
    len: usize,
    fs: f64,
    seed: u64,
    tag: &str,
) -> Result<Vec<f64>> {
    let n_fft = len.next_power_of_two().max(2);
    let mut rng = stream_rng(seed, tag);
    let mut v = synthesize_shaped(psd, n_fft, fs, &mut rng)?;
    v.truncate(len);
    Ok(v)
}

fn build_noise(cfg: &SimConfig, shared: Option<&SharedNoise>) -> Result<NoiseBundle> {
    let len = cfg.n_steps() + 1;
    let fs = cfg.fs_hz;
    let master_seed = shared.map(|s| s.master_seed).unwrap_or(cfg.seed);

    let master = if cfg.master_noise.is_zero() {
        None
    } else {
        let spec = cfg.master_noise.clone();
        Some(synth_padded(
            move |f| spec.psd(f),
            len,
            fs,
            master_seed,
            "master",
        )?)
    };

    let free_run = if cfg.laser.free_run_noise.is_zero() {
        None
    } else {
        let spec = cfg.laser.free_run_noise.clone();
        Some(synth_padded(
            move |f| spec.psd(f),
            len,
            fs,
            cfg.seed,
            "free-run",
        )?)
    };

    let reference = match &cfg.ref_noise {
        None => None,
        Some(spec) => {
            let spec = spec.offset_db(cfg.ref_noise_offset_db);
            let seed = shared.and_then(|s| s.reference_seed).unwrap_or(cfg.seed);
            Some(synth_padded(
                move |f| 2.0 * 10f64.powf(spec.level_dbc(f).unwrap_or(-400.0) / 10.0),
                len,
                fs,
                seed,
                "reference",
            )?)
        }
    };

    let floor_psd = if cfg.pfd_floor_enabled {
        cfg.pfd_floor_psd()?
    } else {
        0.0
    };
    let injected = if floor_psd == 0.0 && cfg.detector_floor.is_zero() {
        None
    } else {
        let det = cfg.detector_floor.clone();
        Some(synth_padded(
            move |f| det.psd(f) + floor_psd,
            len,
            fs,
            cfg.seed,
            "injected",
        )?)
    };

    Ok(NoiseBundle {
        master,
        free_run,
        reference,
        injected,
    })
}

#[inline]
fn at(series: &Option<Vec<f64>>, i: usize) -> f64 {
    match series {
        Some(v) => v[i],
        None => 0.0,
    }
}

/// Run one closed-loop simulation. Deterministic for a fixed config.
/// Failure to lock and divergence are structured outcomes, not errors.
pub fn run_simulation(cfg: &SimConfig) -> Result<SimRecord> {
    run_with_shared(cfg, None)
}

fn run_with_shared(cfg: &SimConfig, shared: Option<&SharedNoise>) -> Result<SimRecord> {
    cfg.validate()?;
    let noise = build_noise(cfg, shared)?;

    let dt = 1.0 / cfg.fs_hz;
    let n_steps = cfg.n_steps();
    let stride = cfg.record_stride();
    let record_fs = cfg.fs_hz / stride as f64;
    let f_ref = cfg.effective_f_ref_hz();
    let beat_mod = cfg.pfd.beat_modulus();
    let divided_scale = 1.0 / beat_mod as f64;
    let ref_scale = 1.0 / cfg.pfd.r_div as f64;

    let mut laser = LaserState::new(&cfg.laser, dt)?;
    let mut chain = FilterChainState::new(&cfg.loop_cfg, dt)?;
    let mut pfd_state = PfdState::default();
    let mut div_tracker = PhaseEdgeTracker::new(beat_mod)?;
    let mut ref_tracker = PhaseEdgeTracker::new(cfg.pfd.r_div as u64)?;

    // Lock detector: the divided error must stay within the band around its
    // window anchor; the anchor restarts whenever the band is left. The run
    // counts as locked when the final window is at least
    // lock_window_periods divided periods long, i.e. the loop is in lock at
    // the end of the run and has been since window_start_t.
    let window_s = cfg.lock_window_periods / cfg.f_pfd_hz();
    let mut window_start_t = 0.0;

    let n_rec = n_steps / stride + 1;
    let mut beat_rec = Vec::with_capacity(n_rec);
    let mut fast_rec = Vec::with_capacity(n_rec);
    let mut slow_rec = Vec::with_capacity(n_rec);
    let mut v3_rec = Vec::with_capacity(n_rec);
    let mut overrun_events = Vec::new();
    let mut was_saturated = false;

    let mut fast_v = 0.0;
    let mut slow_v = 0.0;
    let mut v3_v = 0.0;
    let mut outcome: Option<LockOutcome> = None;

    let mut ref_edges: Vec<f64> = Vec::with_capacity(8);
    let mut div_edges: Vec<f64> = Vec::with_capacity(8);

    let div_phase_at = |m: usize, laser_phase: f64| -> f64 {
        TWO_PI * cfg.f_beat_target_hz * (m as f64 * dt) + laser_phase - at(&noise.master, m)
            + at(&noise.injected, m)
    };
    let ref_phase_at =
        |m: usize| -> f64 { TWO_PI * f_ref * (m as f64 * dt) + at(&noise.reference, m) };

    // Prime the trackers and the detector with the initial sample.
    let mut div_phase = div_phase_at(0, laser.phase());
    let mut ref_phase = ref_phase_at(0);
    div_tracker.advance(0.0, div_phase, &mut div_edges)?;
    ref_tracker.advance(0.0, ref_phase, &mut ref_edges)?;
    let err0 = div_phase * divided_scale - ref_phase * ref_scale;
    let mut window_anchor = err0;

    beat_rec.push(laser.phase() - at(&noise.master, 0));
    fast_rec.push(fast_v);
    slow_rec.push(slow_v);
    v3_rec.push(v3_v);

    for m in 0..n_steps {
        let t_new = (m + 1) as f64 * dt;

        // Actuators apply the previous step's outputs (one-step latency);
        // the modulator maps 1 mA per volt of fast drive.
        let noise_hz = match &noise.free_run {
            Some(v) => (v[m + 1] - v[m]) / (TWO_PI * dt),
            None => 0.0,
        };
        let f_current = laser.step(&cfg.laser, fast_v, slow_v, noise_hz)?;
        if f_current.abs() > cfg.laser.max_current_detuning_hz {
            outcome = Some(LockOutcome::Diverged {
                t: t_new,
                reason: format!(
                    "current-induced detuning {f_current:.3e} Hz exceeded the mode-hop \
                     guard {:.3e} Hz",
                    cfg.laser.max_current_detuning_hz
                ),
            });
        }

        div_phase = div_phase_at(m + 1, laser.phase());
        ref_phase = ref_phase_at(m + 1);
        ref_edges.clear();
        div_edges.clear();
        div_tracker.advance(t_new, div_phase, &mut div_edges)?;
        ref_tracker.advance(t_new, ref_phase, &mut ref_edges)?;

        // Walk the merged edge stream; the pump output holds between edges.
        let mut charge = 0.0;
        let mut t_prev = t_new - dt;
        let mut pump = cfg.pfd.i_cp_ma * (pfd_state.up as i8 as f64 - pfd_state.down as i8 as f64);
        let (mut i, mut j) = (0usize, 0usize);
        while i < ref_edges.len() || j < div_edges.len() {
            let take_ref =
                j >= div_edges.len() || (i < ref_edges.len() && ref_edges[i] <= div_edges[j]);
            let t_e = if take_ref {
                let t = ref_edges[i];
                i += 1;
                t
            } else {
                let t = div_edges[j];
                j += 1;
                t
            };
            charge += pump * (t_e - t_prev);
            pump = pfd_step(&mut pfd_state, take_ref, !take_ref, cfg.pfd.i_cp_ma);
            t_prev = t_e;
        }
        charge += pump * (t_new - t_prev);
        let avg_pump = charge / dt;

        let out = chain.step(&cfg.loop_cfg, avg_pump)?;
        fast_v = out.fast_v;
        slow_v = out.slow_v;
        v3_v = out.v3_v;

        let saturated = slow_v.abs() >= cfg.loop_cfg.slow_limit_v;
        if saturated && !was_saturated {
            overrun_events.push(t_new);
        }
        was_saturated = saturated;

        // Divided-domain error for lock detection.
        let err = div_phase * divided_scale - ref_phase * ref_scale;
        if (err - window_anchor).abs() > cfg.lock_threshold_rad {
            window_start_t = t_new;
            window_anchor = err;
        }
        if outcome.is_none() && (err - err0).abs() > cfg.divergence_bound_rad && saturated {
            outcome = Some(LockOutcome::Diverged {
                t: t_new,
                reason: format!(
                    "divided phase error drifted {:.3e} rad with the slow actuator \
                     pinned at {:.1} V",
                    (err - err0).abs(),
                    cfg.loop_cfg.slow_limit_v
                ),
            });
        }

        if (m + 1) % stride == 0 {
            beat_rec.push(
                TWO_PI * cfg.f_beat_target_hz * t_new + laser.phase() - at(&noise.master, m + 1),
            );
            fast_rec.push(fast_v);
            slow_rec.push(slow_v);
            v3_rec.push(v3_v);
        }

        if outcome.is_some() {
            break;
        }
    }

    let t_end = n_steps as f64 * dt;
    let outcome = match outcome {
        Some(o) => o,
        None if t_end - window_start_t >= window_s => LockOutcome::Locked {
            t_lock: window_start_t,
        },
        None => LockOutcome::NotLocked,
    };
    let lock_flag_time = match &outcome {
        LockOutcome::Locked { t_lock } => Some(*t_lock),
        _ => None,
    };

    Ok(SimRecord {
        beat_phase: PhaseSeries::new(beat_rec, record_fs, 0.0)?,
        fast_drive: fast_rec,
        slow_drive: slow_rec,
        main_stage: v3_rec,
        lock_flag_time,
        overrun_events,
        outcome,
        f_beat_target_hz: cfg.f_beat_target_hz,
    })
}

/// Two slaves locked to one master: run both loops on a common master
/// realization and return the differential phase `slave_a - slave_b`.
///
/// The master term cancels in the subtraction, so the result exposes the
/// in-loop noise of the two servos plus the programmed frequency offset.
/// Either loop failing to lock is an error naming the loop.
pub fn two_slave_experiment(
    cfg_a: &SimConfig,
    cfg_b: &SimConfig,
    shared: &SharedNoise,
) -> Result<PhaseSeries> {
    if cfg_a.fs_hz != cfg_b.fs_hz
        || cfg_a.n_steps() != cfg_b.n_steps()
        || cfg_a.record_stride() != cfg_b.record_stride()
    {
        return Err(Error::Config(
            "two-slave runs must share fs, duration and record rate".into(),
        ));
    }
    let rec_a = run_with_shared(cfg_a, Some(shared))?;
    if !rec_a.locked() {
        return Err(Error::NotLocked { which: "a".into() });
    }
    let rec_b = run_with_shared(cfg_b, Some(shared))?;
    if !rec_b.locked() {
        return Err(Error::NotLocked { which: "b".into() });
    }
    let diff: Vec<f64> = rec_a
        .beat_phase
        .samples()
        .iter()
        .zip(rec_b.beat_phase.samples())
        .map(|(a, b)| a - b)
        .collect();
    PhaseSeries::new(diff, rec_a.beat_phase.sample_rate(), 0.0)
}

/// Optional emulation of an interferometer fringe hold: first-order
/// high-pass applied to a differential phase record, cutting drifts below
/// `cutoff_hz`.
pub fn apply_fringe_highpass(series: &PhaseSeries, cutoff_hz: f64) -> Result<PhaseSeries> {
    if !(cutoff_hz > 0.0) || cutoff_hz >= series.sample_rate() / 2.0 {
        return Err(Error::Domain(format!(
            "cutoff {cutoff_hz} must be in (0, fs/2)"
        )));
    }
    let dt = 1.0 / series.sample_rate();
    let mut lp = crate::iir::OnePoleLp::new(cutoff_hz, dt);
    let out: Vec<f64> = series.samples().iter().map(|&x| x - lp.step(x)).collect();
    PhaseSeries::new(out, series.sample_rate(), series.t0())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_cfg() -> SimConfig {
        SimConfig {
            duration_s: 2e-3,
            record_fs_hz: 4e6,
            ..SimConfig::default()
        }
    }

    #[test]
    fn noiseless_loop_locks_at_fixed_point() {
        let cfg = quick_cfg();
        let rec = run_simulation(&cfg).unwrap();
        assert!(rec.locked(), "outcome: {:?}", rec.outcome);
        // The discriminator may settle any integer number of divided cycles
        // away from zero; the error relative to that fixed point vanishes.
        let cycle = TWO_PI * cfg.pfd.beat_modulus() as f64;
        let err = rec.phase_error_series();
        let tail = &err.samples()[err.len() * 3 / 4..];
        for &e in tail {
            let resid = e - (e / cycle).round() * cycle;
            assert!(
                resid.abs() < 1e-3,
                "phase error {resid} rad off the fixed point"
            );
        }
    }

    #[test]
    fn detuned_loop_pulls_in() {
        let mut cfg = quick_cfg();
        cfg.laser.detuning0_hz = 2e6;
        let rec = run_simulation(&cfg).unwrap();
        assert!(rec.locked(), "outcome: {:?}", rec.outcome);
        let ferr = rec.mean_frequency_error_hz(0.25);
        assert!(ferr.abs() < 1.0, "residual frequency error {ferr} Hz");
    }

    #[test]
    fn record_grids_are_consistent() {
        let rec = run_simulation(&quick_cfg()).unwrap();
        assert_eq!(rec.beat_phase.len(), rec.fast_drive.len());
        assert_eq!(rec.beat_phase.len(), rec.slow_drive.len());
        assert_eq!(rec.beat_phase.len(), rec.main_stage.len());
        if let Some(t) = rec.lock_flag_time {
            assert!(t <= 2e-3);
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let mut cfg = quick_cfg();
        cfg.master_noise = PowerLawNoiseSpec::single(-2, 1e3).unwrap();
        cfg.ref_noise = Some(DbcSpec::flat(-120.0).unwrap());
        let a = run_simulation(&cfg).unwrap();
        let b = run_simulation(&cfg).unwrap();
        assert_eq!(a.beat_phase.samples(), b.beat_phase.samples());
        assert_eq!(a.fast_drive, b.fast_drive);
        assert_eq!(a.outcome, b.outcome);
    }

    #[test]
    fn open_loop_runaway_is_not_locked_not_a_crash() {
        let mut cfg = quick_cfg();
        cfg.loop_cfg.fast_gain = 0.0;
        cfg.loop_cfg.slow_tau_s = 1e6; // slow path effectively off
        cfg.master_noise = PowerLawNoiseSpec::single(-2, 1e8).unwrap();
        let rec = run_simulation(&cfg).unwrap();
        assert!(!rec.locked());

        // Free-running random walk: phase-error increment variance grows
        // linearly with lag.
        let err = rec.phase_error_series();
        let x = err.samples();
        let inc_var = |lag: usize| -> f64 {
            let incs: Vec<f64> = (0..x.len() - lag).map(|i| x[i + lag] - x[i]).collect();
            let m = incs.iter().sum::<f64>() / incs.len() as f64;
            incs.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / incs.len() as f64
        };
        let v1 = inc_var(100);
        let v4 = inc_var(400);
        assert!(
            (v4 / v1 - 4.0).abs() < 1.2,
            "increment variance should grow ~linearly with lag: {v1} -> {v4}"
        );
    }

    #[test]
    fn undersampled_configurations_are_rejected() {
        // fs below the crossover-oversampling requirement of the laser.
        let mut cfg = quick_cfg();
        cfg.fs_hz = 40e6;
        assert!(cfg.validate().is_err());
        // Bandwidth pushed up so far that fs < 20x the estimate.
        let mut cfg = quick_cfg();
        cfg.loop_cfg.fast_gain *= 300.0;
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("undersamples"), "got: {err}");
    }

    #[test]
    fn inconsistent_reference_is_rejected_with_diagnosis() {
        let mut cfg = quick_cfg();
        cfg.f_ref_hz = Some(cfg.effective_f_ref_hz() * 1.01);
        let err = cfg.validate().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("lock condition"), "got: {msg}");
    }

    #[test]
    fn derived_reference_matches_dividers() {
        let cfg = SimConfig::default();
        // 6.912 GHz * 3 / 96 = 216 MHz.
        assert!((cfg.effective_f_ref_hz() - 216e6).abs() < 1e-3);
    }

    #[test]
    fn identical_two_slave_runs_cancel_exactly() {
        let cfg = quick_cfg();
        let shared = SharedNoise {
            master_seed: 99,
            reference_seed: Some(7),
        };
        let diff = two_slave_experiment(&cfg, &cfg, &shared).unwrap();
        assert!(diff.samples().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn bandwidth_estimate_is_near_design_point() {
        let bw = loop_bandwidth_estimate(&SimConfig::default());
        assert!(
            (2e5..5e6).contains(&bw),
            "bandwidth estimate {bw} out of the design decade"
        );
    }

    #[test]
    fn memory_budget_is_enforced() {
        let mut cfg = quick_cfg();
        cfg.max_samples = 1000;
        assert!(cfg.validate().is_err());
    }
}
