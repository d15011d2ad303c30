//! Stochastic phase-noise synthesis and discriminator noise-floor evaluation.
//!
//! Phase noise is specified either as a sum of power-law terms
//! `S_phi(f) = sum b_alpha * f^alpha` (one-sided, rad^2/Hz) or as a list of
//! single-sideband `L(f)` points in dBc/Hz. Both are turned into time series
//! by frequency-domain shaping of white Gaussian noise: independent complex
//! bins scaled by `sqrt(S_phi(f) * fs * n / 2)`, inverse transform, DC bin
//! set to zero.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Power-law exponents follow the usual phase-noise taxonomy:
/// 0 white PM, -1 flicker PM, -2 white FM, -3 flicker FM, -4 random-walk FM.
pub const MIN_EXPONENT: i32 = -4;
pub const MAX_EXPONENT: i32 = 0;

/// One power-law term `b * f^alpha` of a phase PSD.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerLawTerm {
    /// Exponent, integer in `[-4, 0]`.
    pub alpha: i32,
    /// Coefficient in rad^2 * Hz^(-alpha-1), non-negative.
    pub b: f64,
}

/// One-sided phase PSD as a sum of power-law terms.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "PowerLawNoiseSpecRaw")]
pub struct PowerLawNoiseSpec {
    terms: Vec<PowerLawTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PowerLawNoiseSpecRaw {
    #[serde(default)]
    terms: Vec<PowerLawTerm>,
}

impl TryFrom<PowerLawNoiseSpecRaw> for PowerLawNoiseSpec {
    type Error = Error;
    fn try_from(raw: PowerLawNoiseSpecRaw) -> Result<Self> {
        Self::new(raw.terms)
    }
}

impl PowerLawNoiseSpec {
    /// Empty (all-zero) spec: a valid noiseless source.
    pub fn none() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn new(terms: Vec<PowerLawTerm>) -> Result<Self> {
        let mut seen = [false; 5];
        for t in &terms {
            if t.alpha < MIN_EXPONENT || t.alpha > MAX_EXPONENT {
                return Err(Error::Config(format!(
                    "power-law exponent {} outside [{MIN_EXPONENT}, {MAX_EXPONENT}]",
                    t.alpha
                )));
            }
            if !t.b.is_finite() || t.b < 0.0 {
                return Err(Error::Config(format!(
                    "power-law coefficient {} must be finite and non-negative",
                    t.b
                )));
            }
            let idx = (-t.alpha) as usize;
            if seen[idx] {
                return Err(Error::Config(format!("duplicate exponent {}", t.alpha)));
            }
            seen[idx] = true;
        }
        Ok(Self { terms })
    }

    /// Single-term convenience constructor.
    pub fn single(alpha: i32, b: f64) -> Result<Self> {
        Self::new(vec![PowerLawTerm { alpha, b }])
    }

    pub fn terms(&self) -> &[PowerLawTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.b == 0.0)
    }

    /// Evaluate `S_phi(f)` in rad^2/Hz at `f > 0`.
    pub fn psd(&self, f: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.b * f.powi(t.alpha))
            .sum::<f64>()
    }

    /// Scale all coefficients by a linear factor (used for noise sweeps).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| PowerLawTerm {
                    alpha: t.alpha,
                    b: t.b * factor,
                })
                .collect(),
        }
    }
}

/// One `L(f)` sample of a single-sideband phase-noise characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DbcPoint {
    /// Offset frequency from the carrier, Hz, strictly positive.
    pub f_hz: f64,
    /// Single-sideband noise level, dBc/Hz.
    pub l_dbc: f64,
}

/// Single-sideband phase noise of an oscillator, dBc/Hz vs. offset frequency.
///
/// Converted to a one-sided phase PSD via the small-angle identity
/// `S_phi(f) = 2 * 10^(L(f)/10)`, valid because every modeled source sits far
/// below 0 dBc/Hz. Levels are interpolated linearly in (log f, dB) and held
/// flat beyond the first/last point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DbcSpecRaw")]
pub struct DbcSpec {
    points: Vec<DbcPoint>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DbcSpecRaw {
    points: Vec<DbcPoint>,
}

impl TryFrom<DbcSpecRaw> for DbcSpec {
    type Error = Error;
    fn try_from(raw: DbcSpecRaw) -> Result<Self> {
        Self::new(raw.points)
    }
}

impl DbcSpec {
    pub fn new(points: Vec<DbcPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Config("dBc spec needs at least one point".into()));
        }
        for w in points.windows(2) {
            if w[1].f_hz <= w[0].f_hz {
                return Err(Error::Config(format!(
                    "dBc offsets must be strictly increasing ({} then {})",
                    w[0].f_hz, w[1].f_hz
                )));
            }
        }
        for p in &points {
            if !(p.f_hz > 0.0) || !p.f_hz.is_finite() {
                return Err(Error::Config(format!("dBc offset {} must be > 0", p.f_hz)));
            }
            if !p.l_dbc.is_finite() {
                return Err(Error::Config("dBc level must be finite".into()));
            }
            let s = 2.0 * 10f64.powf(p.l_dbc / 10.0);
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::Config(format!(
                    "dBc level {} does not convert to a positive finite PSD",
                    p.l_dbc
                )));
            }
        }
        Ok(Self { points })
    }

    /// Flat `L(f)` at all offsets.
    pub fn flat(l_dbc: f64) -> Result<Self> {
        Self::new(vec![DbcPoint { f_hz: 1.0, l_dbc }])
    }

    pub fn points(&self) -> &[DbcPoint] {
        &self.points
    }

    /// `L(f)` in dBc/Hz with log-frequency interpolation, flat extrapolation.
    pub fn level_dbc(&self, f: f64) -> Result<f64> {
        if !(f > 0.0) {
            return Err(Error::Domain(format!("offset frequency {f} must be > 0")));
        }
        let pts = &self.points;
        if f <= pts[0].f_hz {
            return Ok(pts[0].l_dbc);
        }
        if f >= pts[pts.len() - 1].f_hz {
            return Ok(pts[pts.len() - 1].l_dbc);
        }
        for w in pts.windows(2) {
            if f >= w[0].f_hz && f <= w[1].f_hz {
                let x = (f / w[0].f_hz).ln() / (w[1].f_hz / w[0].f_hz).ln();
                return Ok(w[0].l_dbc + x * (w[1].l_dbc - w[0].l_dbc));
            }
        }
        unreachable!("sorted points cover the interval");
    }

    /// One-sided phase PSD `S_phi(f) = 2 * 10^(L(f)/10)` in rad^2/Hz.
    pub fn phase_psd(&self, f: f64) -> Result<f64> {
        Ok(2.0 * 10f64.powf(self.level_dbc(f)? / 10.0))
    }

    /// Shift every level by `db` (positive = noisier), for sweeps.
    pub fn offset_db(&self, db: f64) -> Self {
        Self {
            points: self
                .points
                .iter()
                .map(|p| DbcPoint {
                    f_hz: p.f_hz,
                    l_dbc: p.l_dbc + db,
                })
                .collect(),
        }
    }
}

/// Uniformly sampled instantaneous phase in radians.
///
/// The container never wraps: whatever produced the samples is responsible
/// for keeping them unwrapped, and consumers may rely on sample-to-sample
/// differences being physical.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSeries {
    samples: Vec<f64>,
    sample_rate: f64,
    t0: f64,
}

impl PhaseSeries {
    pub fn new(samples: Vec<f64>, sample_rate: f64, t0: f64) -> Result<Self> {
        if !(sample_rate > 0.0) || !sample_rate.is_finite() {
            return Err(Error::Config(format!(
                "sample rate {sample_rate} must be positive and finite"
            )));
        }
        if samples.is_empty() {
            return Err(Error::Config(
                "phase series needs at least one sample".into(),
            ));
        }
        Ok(Self {
            samples,
            sample_rate,
            t0,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor guarantees at least one sample
    }

    /// Time of sample `i`.
    pub fn time_at(&self, i: usize) -> f64 {
        self.t0 + i as f64 / self.sample_rate
    }
}

/// Deterministic RNG for a named noise stream. Distinct tags give
/// independent streams from one base seed.
pub fn stream_rng(seed: u64, tag: &str) -> ChaCha8Rng {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(tag.as_bytes());
    let digest = h.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(key)
}

/// Synthesize a real series with one-sided PSD `psd(f)` by frequency-domain
/// shaping. `psd` is evaluated on the FFT bin grid `k * fs / n`,
/// `1 <= k <= n/2`; the DC bin is zero.
pub fn synthesize_shaped(
    psd: impl Fn(f64) -> f64,
    n: usize,
    fs: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::Config(format!("series length {n} must be >= 2")));
    }
    if !(fs > 0.0) || !fs.is_finite() {
        return Err(Error::Config(format!("sample rate {fs} must be positive")));
    }
    let nf = n as f64;
    let df = fs / nf;
    let mut bins = vec![Complex64::new(0.0, 0.0); n];
    let half = n / 2;
    for k in 1..=half {
        let s = psd(k as f64 * df);
        if !s.is_finite() || s < 0.0 {
            return Err(Error::Domain(format!(
                "PSD must be finite and non-negative at bin {k} (got {s})"
            )));
        }
        let amp = (s * fs * nf / 2.0).sqrt();
        if 2 * k == n {
            // Nyquist bin of an even-length transform must stay real.
            let g: f64 = rng.sample(StandardNormal);
            bins[k] = Complex64::new(amp * g, 0.0);
        } else {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let g = Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2;
            bins[k] = amp * g;
            bins[n - k] = bins[k].conj();
        }
    }
    let mut planner = FftPlanner::new();
    let ifft = planner.plan_fft_inverse(n);
    ifft.process(&mut bins);
    let scale = 1.0 / nf;
    Ok(bins.iter().map(|c| c.re * scale).collect())
}

/// Synthesize a phase series from a power-law spec. Deterministic for a
/// given `(spec, n, fs, seed)`.
pub fn synthesize_power_law(
    spec: &PowerLawNoiseSpec,
    n: usize,
    fs: f64,
    seed: u64,
) -> Result<PhaseSeries> {
    if n < 2 {
        return Err(Error::Config(format!("series length {n} must be >= 2")));
    }
    if spec.is_zero() {
        return PhaseSeries::new(vec![0.0; n], fs, 0.0);
    }
    let mut rng = stream_rng(seed, "power-law");
    let samples = synthesize_shaped(|f| spec.psd(f), n, fs, &mut rng)?;
    PhaseSeries::new(samples, fs, 0.0)
}

/// Synthesize a phase series from a dBc/Hz characteristic.
pub fn synthesize_dbc(spec: &DbcSpec, n: usize, fs: f64, seed: u64) -> Result<PhaseSeries> {
    // Bin frequencies are strictly positive, so level_dbc cannot fail.
    let mut rng = stream_rng(seed, "dbc");
    let samples = synthesize_shaped(
        |f| 2.0 * 10f64.powf(spec.level_dbc(f).unwrap_or(f64::NEG_INFINITY) / 10.0),
        n,
        fs,
        &mut rng,
    )?;
    PhaseSeries::new(samples, fs, 0.0)
}

/// In-loop phase-noise floor of the integer-N discriminator, referenced to
/// the beat carrier, in dBc/Hz:
///
/// `floor = -219 + 10*log10(N * f_beat / Hz)`
///
/// The -219 dBc/Hz figure of merit only closes dimensionally under this
/// reading (equivalently `FOM + 20*log10(N) + 10*log10(f_pfd)`).
pub fn pfd_noise_floor_dbc(n_div: u64, f_beat: f64) -> Result<f64> {
    if n_div < 1 {
        return Err(Error::Domain("divider modulus must be >= 1".into()));
    }
    if !(f_beat > 0.0) || !f_beat.is_finite() {
        return Err(Error::Domain(format!(
            "beat frequency {f_beat} must be > 0"
        )));
    }
    Ok(PFD_FIGURE_OF_MERIT_DBC + 10.0 * (n_div as f64 * f_beat).log10())
}

/// Figure of merit of the discriminator chip, dBc/Hz.
pub const PFD_FIGURE_OF_MERIT_DBC: f64 = -219.0;

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_variance(x: &[f64]) -> f64 {
        let mean = x.iter().sum::<f64>() / x.len() as f64;
        x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / x.len() as f64
    }

    #[test]
    fn zero_spec_is_identically_zero() {
        let s = synthesize_power_law(&PowerLawNoiseSpec::none(), 1024, 1e6, 7).unwrap();
        assert!(s.samples().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn white_phase_noise_variance_matches_parseval() {
        // S_phi = b0 over [0, fs/2] integrates to b0*fs/2 = 0.5 rad^2.
        let spec = PowerLawNoiseSpec::single(0, 1e-6).unwrap();
        let n = 1 << 20;
        let fs = 1e6;
        let mut acc = 0.0;
        let seeds = 20;
        for seed in 0..seeds {
            let s = synthesize_power_law(&spec, n, fs, seed).unwrap();
            acc += sample_variance(s.samples());
        }
        let mean_var = acc / seeds as f64;
        assert!(
            (mean_var - 0.5).abs() / 0.5 < 0.05,
            "mean variance {mean_var}, expected 0.5 within 5%"
        );
    }

    #[test]
    fn white_fm_increment_variance_grows_linearly() {
        // White frequency noise: Var[phi(t+tau) - phi(t)] = 2*pi^2*b*tau.
        let b = 1e4;
        let spec = PowerLawNoiseSpec::single(-2, b).unwrap();
        let n = 1 << 20;
        let fs = 1e6;
        let mut ratios = Vec::new();
        for lag_pow in [4usize, 6, 8, 10] {
            let lag = 1usize << lag_pow;
            let tau = lag as f64 / fs;
            let mut acc = 0.0;
            let seeds = 8;
            for seed in 0..seeds {
                let s = synthesize_power_law(&spec, n, fs, 100 + seed).unwrap();
                let x = s.samples();
                let incs: Vec<f64> = (0..n - lag).map(|i| x[i + lag] - x[i]).collect();
                acc += sample_variance(&incs);
            }
            let measured = acc / 8.0;
            let expected = 2.0 * std::f64::consts::PI.powi(2) * b * tau;
            ratios.push(measured / expected);
        }
        for (i, r) in ratios.iter().enumerate() {
            assert!(
                (r - 1.0).abs() < 0.15,
                "lag index {i}: increment variance ratio {r} not within 15% of random-walk law"
            );
        }
    }

    #[test]
    fn seed_determinism_is_bit_exact() {
        let spec = PowerLawNoiseSpec::new(vec![
            PowerLawTerm { alpha: 0, b: 1e-8 },
            PowerLawTerm { alpha: -2, b: 1e2 },
        ])
        .unwrap();
        let a = synthesize_power_law(&spec, 4096, 5e5, 42).unwrap();
        let b = synthesize_power_law(&spec, 4096, 5e5, 42).unwrap();
        assert_eq!(a.samples(), b.samples());
        let c = synthesize_power_law(&spec, 4096, 5e5, 43).unwrap();
        assert_ne!(a.samples(), c.samples());
    }

    #[test]
    fn per_realization_parseval_is_exact() {
        // The synthesized series' periodogram integral equals its mean square
        // (plain Parseval; independent of the ensemble PSD).
        use rustfft::FftPlanner;
        let spec = PowerLawNoiseSpec::new(vec![
            PowerLawTerm { alpha: -1, b: 1e-3 },
            PowerLawTerm { alpha: -3, b: 1e1 },
        ])
        .unwrap();
        let n = 4096usize;
        let fs = 1e5;
        let s = synthesize_power_law(&spec, n, fs, 9).unwrap();
        let mut buf: Vec<Complex64> = s
            .samples()
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let df = fs / n as f64;
        let integral: f64 = buf
            .iter()
            .map(|c| c.norm_sqr() / (fs * n as f64))
            .sum::<f64>()
            * df;
        let mean_sq = s.samples().iter().map(|v| v * v).sum::<f64>() / n as f64;
        assert!(
            (integral - mean_sq).abs() <= 1e-9 * mean_sq.max(1e-30),
            "periodogram integral {integral} vs mean square {mean_sq}"
        );
    }

    #[test]
    fn dbc_synthesis_matches_flat_level() {
        // Flat L = -60 dBc/Hz -> S_phi = 2e-6 rad^2/Hz -> variance
        // S*fs/2 over the synthesized band.
        let spec = DbcSpec::flat(-60.0).unwrap();
        let n = 1 << 18;
        let fs = 1e6;
        let mut acc = 0.0;
        let seeds = 6;
        for seed in 0..seeds {
            let s = synthesize_dbc(&spec, n, fs, 50 + seed).unwrap();
            acc += sample_variance(s.samples());
        }
        let measured = acc / seeds as f64;
        let expected = 2e-6 * fs / 2.0;
        assert!(
            (measured - expected).abs() / expected < 0.05,
            "variance {measured} vs {expected}"
        );
        let a = synthesize_dbc(&spec, 1024, fs, 1).unwrap();
        let b = synthesize_dbc(&spec, 1024, fs, 1).unwrap();
        assert_eq!(a.samples(), b.samples());
    }

    #[test]
    fn dbc_conversion_reference_points() {
        let spec = DbcSpec::flat(-115.0).unwrap();
        let s = spec.phase_psd(1e4).unwrap();
        assert!((s - 6.324555e-12).abs() / 6.324555e-12 < 1e-5, "got {s}");

        let unit = DbcSpec::flat(0.0).unwrap();
        assert_eq!(unit.phase_psd(1.0).unwrap(), 2.0);

        let noisier = DbcSpec::flat(-90.0).unwrap();
        let s90 = noisier.phase_psd(1e4).unwrap();
        assert!((s90 - 2e-9).abs() / 2e-9 < 1e-12);
        assert!(s90 > s);
    }

    #[test]
    fn dbc_interpolates_in_log_frequency_and_extrapolates_flat() {
        let spec = DbcSpec::new(vec![
            DbcPoint {
                f_hz: 1e2,
                l_dbc: -80.0,
            },
            DbcPoint {
                f_hz: 1e4,
                l_dbc: -120.0,
            },
        ])
        .unwrap();
        // Geometric midpoint of the offsets -> arithmetic midpoint in dB.
        assert!((spec.level_dbc(1e3).unwrap() + 100.0).abs() < 1e-9);
        assert_eq!(spec.level_dbc(1.0).unwrap(), -80.0);
        assert_eq!(spec.level_dbc(1e9).unwrap(), -120.0);
        assert!(spec.level_dbc(0.0).is_err());
    }

    #[test]
    fn dbc_requires_increasing_offsets() {
        let r = DbcSpec::new(vec![
            DbcPoint {
                f_hz: 10.0,
                l_dbc: -90.0,
            },
            DbcPoint {
                f_hz: 10.0,
                l_dbc: -95.0,
            },
        ]);
        assert!(r.is_err());
        assert!(DbcSpec::new(vec![]).is_err());
    }

    #[test]
    fn noise_floor_reference_values() {
        assert!((pfd_noise_floor_dbc(1, 1.0).unwrap() + 219.0).abs() < 1e-12);
        let f = pfd_noise_floor_dbc(96, 6.9e9).unwrap();
        assert!((f + 100.79).abs() < 0.02, "got {f}");
        // Fourfold N at fixed beat: +10*log10(4) = 6.02 dB.
        let lo = pfd_noise_floor_dbc(96, 6.9e9).unwrap();
        let hi = pfd_noise_floor_dbc(384, 6.9e9).unwrap();
        assert!((hi - lo - 10.0 * 4f64.log10()).abs() < 1e-9);
    }

    #[test]
    fn noise_floor_scales_exactly_with_log_n() {
        for n in [2u64, 10, 96, 384, 4096] {
            let d =
                pfd_noise_floor_dbc(n, 123.0e6).unwrap() - pfd_noise_floor_dbc(1, 123.0e6).unwrap();
            assert!((d - 10.0 * (n as f64).log10()).abs() < 1e-9);
        }
    }

    mod fuzz {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // S_phi = 2*10^(L/10) is strictly monotone in L at fixed f.
            #[test]
            fn dbc_psd_is_monotone_in_level(
                l_lo in -180.0f64..-20.0,
                delta in 0.1f64..60.0,
                f in 1e-3f64..1e9,
            ) {
                let a = DbcSpec::flat(l_lo).unwrap();
                let b = DbcSpec::flat(l_lo + delta).unwrap();
                prop_assert!(b.phase_psd(f).unwrap() > a.phase_psd(f).unwrap());
            }

            // Parseval holds realization by realization: the periodogram of
            // any synthesized series integrates to its mean square.
            #[test]
            fn synthesis_parseval_per_realization(
                b0 in 1e-12f64..1e-3,
                b2 in 0f64..1e3,
                seed in 0u64..1000,
            ) {
                use rustfft::FftPlanner;
                let spec = PowerLawNoiseSpec::new(vec![
                    PowerLawTerm { alpha: 0, b: b0 },
                    PowerLawTerm { alpha: -2, b: b2 },
                ])
                .unwrap();
                let n = 1024usize;
                let fs = 1e5;
                let s = synthesize_power_law(&spec, n, fs, seed).unwrap();
                let mut buf: Vec<Complex64> =
                    s.samples().iter().map(|&v| Complex64::new(v, 0.0)).collect();
                FftPlanner::new().plan_fft_forward(n).process(&mut buf);
                let integral: f64 = buf.iter().map(|c| c.norm_sqr()).sum::<f64>() / (n * n) as f64;
                let mean_sq = s.samples().iter().map(|v| v * v).sum::<f64>() / n as f64;
                prop_assert!((integral - mean_sq).abs() <= 1e-9 * mean_sq.max(1e-30));
            }
        }
    }

    #[test]
    fn spec_validation_rejects_bad_terms() {
        assert!(PowerLawNoiseSpec::single(1, 1.0).is_err());
        assert!(PowerLawNoiseSpec::single(-5, 1.0).is_err());
        assert!(PowerLawNoiseSpec::single(0, -1.0).is_err());
        assert!(PowerLawNoiseSpec::single(0, f64::NAN).is_err());
        assert!(PowerLawNoiseSpec::new(vec![
            PowerLawTerm { alpha: 0, b: 1.0 },
            PowerLawTerm { alpha: 0, b: 2.0 },
        ])
        .is_err());
        assert!(PowerLawNoiseSpec::new(vec![]).is_ok());
    }
}
