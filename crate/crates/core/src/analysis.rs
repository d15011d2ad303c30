//! Measurement pipeline: spectral estimation, carrier-fraction phase
//! variance, spectrum-analyzer corrections, modified Allan deviation, and
//! log-log slope classification.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::PhaseSeries;

/// What the PSD values of a [`Spectrum`] mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumUnits {
    /// Phase PSD, rad^2/Hz (one-sided).
    RadSqPerHz,
    /// Signal power density relative to full scale, 1/Hz (two-sided,
    /// carrier-centered).
    PowerPerHz,
}

/// One-sided or carrier-centered PSD over a uniform frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub freqs: Vec<f64>,
    pub psd: Vec<f64>,
    /// Equivalent noise bandwidth of the estimator, Hz.
    pub rbw_equivalent_hz: f64,
    pub units: SpectrumUnits,
}

impl Spectrum {
    pub fn df(&self) -> f64 {
        if self.freqs.len() < 2 {
            return 0.0;
        }
        self.freqs[1] - self.freqs[0]
    }

    /// `integral of psd d(nu)` over the whole computed span.
    pub fn integrated_power(&self) -> f64 {
        self.psd.iter().sum::<f64>() * self.df()
    }
}

/// Modified Allan deviation curve.
#[derive(Debug, Clone, PartialEq)]
pub struct AllanCurve {
    /// Averaging times, s, ascending (snapped to multiples of the sample
    /// period).
    pub taus: Vec<f64>,
    /// Modified Allan deviation at each tau.
    pub mdev: Vec<f64>,
    /// Number of squared terms averaged at each tau.
    pub n_samples_per_tau: Vec<usize>,
}

fn hann(len: usize) -> Vec<f64> {
    (0..len)
        .map(|i| 0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / len as f64).cos()))
        .collect()
}

fn segment_starts(len: usize, seg_len: usize, overlap: f64) -> Vec<usize> {
    let hop = ((seg_len as f64) * (1.0 - overlap)).max(1.0) as usize;
    (0..=len - seg_len).step_by(hop.max(1)).collect()
}

fn validate_welch(len: usize, seg_len: usize, overlap: f64) -> Result<()> {
    if seg_len < 8 {
        return Err(Error::Domain(format!("segment length {seg_len} too short")));
    }
    if seg_len > len {
        return Err(Error::Domain(format!(
            "segment length {seg_len} exceeds series length {len}"
        )));
    }
    if !(0.0..1.0).contains(&overlap) {
        return Err(Error::Domain(format!("overlap {overlap} outside [0, 1)")));
    }
    Ok(())
}

/// Welch estimate of the one-sided PSD of a real series (Hann window,
/// window-power normalized). Parseval-consistent within a few percent for
/// stationary input.
pub fn welch_psd(series: &PhaseSeries, seg_len: usize, overlap: f64) -> Result<Spectrum> {
    validate_welch(series.len(), seg_len, overlap)?;
    let fs = series.sample_rate();
    let x = series.samples();
    let w = hann(seg_len);
    let w_pow: f64 = w.iter().map(|v| v * v).sum();
    let w_sum: f64 = w.iter().sum();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(seg_len);
    let starts = segment_starts(x.len(), seg_len, overlap);
    let half = seg_len / 2;
    let mut acc = vec![0.0f64; half + 1];
    let mut buf = vec![Complex64::new(0.0, 0.0); seg_len];
    for &s in &starts {
        for i in 0..seg_len {
            buf[i] = Complex64::new(x[s + i] * w[i], 0.0);
        }
        fft.process(&mut buf);
        for (k, slot) in acc.iter_mut().enumerate() {
            *slot += buf[k].norm_sqr();
        }
    }
    let norm = 1.0 / (starts.len() as f64 * fs * w_pow);
    let psd: Vec<f64> = acc
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let one_sided = if k == 0 || 2 * k == seg_len { 1.0 } else { 2.0 };
            one_sided * p * norm
        })
        .collect();
    let freqs = (0..=half).map(|k| k as f64 * fs / seg_len as f64).collect();
    Ok(Spectrum {
        freqs,
        psd,
        rbw_equivalent_hz: fs * w_pow / (w_sum * w_sum),
        units: SpectrumUnits::RadSqPerHz,
    })
}

/// Carrier-centered power spectrum of the unit-amplitude signal
/// `exp(i*phi(t))` built from a phase series: the simulator's stand-in for
/// the electronic beat spectrum `P(nu)`. Two-sided, frequencies ascending
/// around zero offset.
pub fn beat_spectrum(series: &PhaseSeries, seg_len: usize, overlap: f64) -> Result<Spectrum> {
    validate_welch(series.len(), seg_len, overlap)?;
    let fs = series.sample_rate();
    let phi = series.samples();
    let w = hann(seg_len);
    let w_pow: f64 = w.iter().map(|v| v * v).sum();
    let w_sum: f64 = w.iter().sum();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(seg_len);
    let starts = segment_starts(phi.len(), seg_len, overlap);
    let mut acc = vec![0.0f64; seg_len];
    let mut buf = vec![Complex64::new(0.0, 0.0); seg_len];
    for &s in &starts {
        for i in 0..seg_len {
            buf[i] = Complex64::from_polar(w[i], phi[s + i]);
        }
        fft.process(&mut buf);
        for (k, slot) in acc.iter_mut().enumerate() {
            *slot += buf[k].norm_sqr();
        }
    }
    let norm = 1.0 / (starts.len() as f64 * fs * w_pow);
    // fftshift: negative offsets first.
    let half = seg_len / 2;
    let mut freqs = Vec::with_capacity(seg_len);
    let mut psd = Vec::with_capacity(seg_len);
    for k in 0..seg_len {
        let idx = (k + half) % seg_len;
        let f = (k as f64 - half as f64) * fs / seg_len as f64;
        freqs.push(f);
        psd.push(acc[idx] * norm);
    }
    Ok(Spectrum {
        freqs,
        psd,
        rbw_equivalent_hz: fs * w_pow / (w_sum * w_sum),
        units: SpectrumUnits::PowerPerHz,
    })
}

/// Result of the carrier-fraction phase-variance measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarrierVariance {
    /// `-ln(P_carrier / integral P(nu) d(nu))`, rad^2.
    pub variance_rad2: f64,
    pub carrier_fraction: f64,
    /// False when the carrier fraction fell below 1%: the small-noise
    /// premise of the carrier-fraction relation is then violated and the
    /// number is indicative only.
    pub reliable: bool,
}

/// Mean-square phase error from the power fraction of the carrier:
/// `exp(-<dphi^2>) = P_carrier / integral P(nu) d(nu)`.
///
/// Carrier power is the spectrum summed over `carrier_bin_width_hz` around
/// the maximum bin (the carrier is assumed unresolved); the denominator is
/// the full computed span, carrier included.
pub fn carrier_phase_variance(
    spectrum: &Spectrum,
    carrier_bin_width_hz: f64,
) -> Result<CarrierVariance> {
    if spectrum.psd.len() < 3 {
        return Err(Error::Domain("spectrum too short for a carrier fit".into()));
    }
    let df = spectrum.df();
    if !(df > 0.0) {
        return Err(Error::Domain(
            "spectrum frequency grid is degenerate".into(),
        ));
    }
    let total = spectrum.integrated_power();
    if !(total > 0.0) {
        return Err(Error::Domain("spectrum carries no power".into()));
    }
    let peak = spectrum
        .psd
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty spectrum");
    let n_bins = ((carrier_bin_width_hz / df).round() as usize).max(1);
    let half = n_bins / 2;
    let lo = peak.saturating_sub(half);
    let hi = (peak + half).min(spectrum.psd.len() - 1);
    let carrier: f64 = spectrum.psd[lo..=hi].iter().sum::<f64>() * df;
    let fraction = carrier / total;
    Ok(CarrierVariance {
        variance_rad2: -fraction.ln(),
        carrier_fraction: fraction,
        reliable: fraction >= 0.01,
    })
}

/// Normalize a swept-analyzer noise reading to a 1 Hz bandwidth:
/// `reading + 2.51 dB` (log-scale envelope detection) `- 0.52 dB` (RBW
/// filter shape) `- 10*log10(rbw/Hz)`.
///
/// Applies only to log-envelope-detected analyzer exports; simulator-native
/// PSDs are already densities and must not be corrected again.
pub fn sa_noise_corrections(reading_db: f64, rbw_hz: f64) -> Result<f64> {
    if !(rbw_hz > 0.0) || !rbw_hz.is_finite() {
        return Err(Error::Domain(format!("RBW {rbw_hz} must be > 0")));
    }
    Ok(reading_db + 2.51 - 0.52 - 10.0 * rbw_hz.log10())
}

/// Modified Allan deviation of a phase series at the requested averaging
/// times. `nu0` is the nominal carrier frequency that converts phase to
/// time error `x = phi / (2*pi*nu0)`.
///
/// Requested taus are snapped to multiples of the sample period (minimum
/// two samples); the snapped values are what the returned curve carries.
pub fn mod_allan(series: &PhaseSeries, nu0: f64, taus: &[f64]) -> Result<AllanCurve> {
    if !(nu0 > 0.0) || !nu0.is_finite() {
        return Err(Error::Domain(format!(
            "carrier frequency {nu0} must be > 0"
        )));
    }
    let fs = series.sample_rate();
    let tau0 = 1.0 / fs;
    let m = series.len();
    let two_pi_nu0 = 2.0 * std::f64::consts::PI * nu0;

    // Prefix sums of the time-error sequence make the inner window sums O(1).
    let mut prefix = Vec::with_capacity(m + 1);
    prefix.push(0.0f64);
    let mut acc = 0.0;
    for &phi in series.samples() {
        acc += phi / two_pi_nu0;
        prefix.push(acc);
    }

    let mut out_taus = Vec::with_capacity(taus.len());
    let mut out_mdev = Vec::with_capacity(taus.len());
    let mut out_counts = Vec::with_capacity(taus.len());
    for &tau in taus {
        if !(tau > 0.0) {
            return Err(Error::Domain(format!("tau {tau} must be > 0")));
        }
        let n = ((tau * fs).round() as usize).max(2);
        if m < 3 * n + 1 {
            return Err(Error::Domain(format!(
                "series of {m} samples is too short for tau {tau} (needs {})",
                3 * n + 1
            )));
        }
        let terms = m - 3 * n + 1;
        let mut sum_sq = 0.0;
        for j in 0..terms {
            let inner = (prefix[j + 3 * n] - prefix[j + 2 * n])
                - 2.0 * (prefix[j + 2 * n] - prefix[j + n])
                + (prefix[j + n] - prefix[j]);
            sum_sq += inner * inner;
        }
        let nf = n as f64;
        let var = sum_sq / (2.0 * nf.powi(4) * tau0 * tau0 * terms as f64);
        out_taus.push(nf * tau0);
        out_mdev.push(var.sqrt());
        out_counts.push(terms);
    }
    Ok(AllanCurve {
        taus: out_taus,
        mdev: out_mdev,
        n_samples_per_tau: out_counts,
    })
}

/// Least-squares slope in log-log coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    /// 2-sigma half width of the slope estimate.
    pub half_width: f64,
    pub n_points: usize,
}

/// Fit `y ~ x^slope` over `x` in `[range.0, range.1]`. Needs at least five
/// strictly positive points in range.
pub fn fit_loglog_slope(xs: &[f64], ys: &[f64], range: (f64, f64)) -> Result<SlopeFit> {
    if xs.len() != ys.len() {
        return Err(Error::Domain("x/y length mismatch".into()));
    }
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    for (&x, &y) in xs.iter().zip(ys.iter()) {
        if x >= range.0 && x <= range.1 {
            if !(y > 0.0) || !(x > 0.0) {
                return Err(Error::Domain(format!(
                    "non-positive value (x={x}, y={y}) in fit range"
                )));
            }
            lx.push(x.ln());
            ly.push(y.ln());
        }
    }
    let n = lx.len();
    if n < 5 {
        return Err(Error::Domain(format!(
            "need at least 5 points in range, found {n}"
        )));
    }
    let nf = n as f64;
    let mx = lx.iter().sum::<f64>() / nf;
    let my = ly.iter().sum::<f64>() / nf;
    let sxx: f64 = lx.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = lx
        .iter()
        .zip(ly.iter())
        .map(|(x, y)| (x - mx) * (y - my))
        .sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = lx
        .iter()
        .zip(ly.iter())
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let se = if n > 2 {
        (ss_res / ((nf - 2.0) * sxx)).sqrt()
    } else {
        0.0
    };
    Ok(SlopeFit {
        slope,
        half_width: 2.0 * se,
        n_points: n,
    })
}

/// Residual phase variance after decimating to `sample_rate_out` (mean
/// within bins) and removing the best-fit linear trend: the "phase variation
/// at a given sampling rate" figure.
pub fn rms_phase_variance(series: &PhaseSeries, sample_rate_out: f64) -> Result<f64> {
    let fs = series.sample_rate();
    if !(sample_rate_out > 0.0) || sample_rate_out > fs {
        return Err(Error::Domain(format!(
            "output rate {sample_rate_out} must be in (0, fs = {fs}]"
        )));
    }
    let bin = (fs / sample_rate_out).round().max(1.0) as usize;
    let x = series.samples();
    let n_bins = x.len() / bin;
    if n_bins < 2 {
        return Err(Error::Domain("too few samples after decimation".into()));
    }
    let dec: Vec<f64> = (0..n_bins)
        .map(|k| x[k * bin..(k + 1) * bin].iter().sum::<f64>() / bin as f64)
        .collect();
    // Remove the linear trend (the locked ramp) and take the variance of
    // what is left.
    let nf = n_bins as f64;
    let mt = (nf - 1.0) / 2.0;
    let my = dec.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (i, &y) in dec.iter().enumerate() {
        let dx = i as f64 - mt;
        sxx += dx * dx;
        sxy += dx * (y - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let var = dec
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let r = y - my - slope * (i as f64 - mt);
            r * r
        })
        .sum::<f64>()
        / nf;
    Ok(var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{synthesize_power_law, PowerLawNoiseSpec};

    fn tone(amp: f64, f: f64, fs: f64, n: usize) -> PhaseSeries {
        let samples = (0..n)
            .map(|i| amp * (2.0 * std::f64::consts::PI * f * i as f64 / fs).sin())
            .collect();
        PhaseSeries::new(samples, fs, 0.0).unwrap()
    }

    #[test]
    fn welch_tone_power_matches_parseval() {
        let amp = 0.7;
        let s = tone(amp, 12_500.0, 1e6, 1 << 16);
        let spec = welch_psd(&s, 4096, 0.5).unwrap();
        let total = spec.integrated_power();
        let expected = amp * amp / 2.0;
        assert!(
            (total - expected).abs() / expected < 0.02,
            "integrated {total} vs {expected}"
        );
        // Peak lands on the tone bin.
        let peak = spec
            .psd
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!((spec.freqs[peak] - 12_500.0).abs() <= spec.df());
    }

    #[test]
    fn welch_white_noise_density_is_flat_and_correct() {
        let b0 = 4e-7;
        let fs = 1e6;
        let spec_in = PowerLawNoiseSpec::single(0, b0).unwrap();
        let mut mean_density = 0.0;
        let seeds = 6;
        for seed in 0..seeds {
            let s = synthesize_power_law(&spec_in, 1 << 17, fs, 400 + seed).unwrap();
            let spec = welch_psd(&s, 2048, 0.5).unwrap();
            // Skip DC and Nyquist bins.
            let body = &spec.psd[1..spec.psd.len() - 1];
            mean_density += body.iter().sum::<f64>() / body.len() as f64;
        }
        mean_density /= seeds as f64;
        assert!(
            (mean_density - b0).abs() / b0 < 0.05,
            "density {mean_density} vs {b0}"
        );
    }

    #[test]
    fn welch_is_additive_for_tone_plus_noise() {
        let fs = 1e6;
        let n = 1 << 16;
        let t = tone(0.5, 31_250.0, fs, n);
        let w =
            synthesize_power_law(&PowerLawNoiseSpec::single(0, 1e-7).unwrap(), n, fs, 3).unwrap();
        let sum: Vec<f64> = t
            .samples()
            .iter()
            .zip(w.samples())
            .map(|(a, b)| a + b)
            .collect();
        let both = PhaseSeries::new(sum, fs, 0.0).unwrap();
        let p_t = welch_psd(&t, 4096, 0.5).unwrap().integrated_power();
        let p_w = welch_psd(&w, 4096, 0.5).unwrap().integrated_power();
        let p_sum = welch_psd(&both, 4096, 0.5).unwrap().integrated_power();
        assert!(
            (p_sum - (p_t + p_w)).abs() / (p_t + p_w) < 0.05,
            "total {p_sum} vs {}",
            p_t + p_w
        );
    }

    #[test]
    fn welch_rejects_degenerate_requests() {
        let s = tone(1.0, 100.0, 1e4, 1000);
        assert!(welch_psd(&s, 2000, 0.5).is_err());
        assert!(welch_psd(&s, 4, 0.5).is_err());
        assert!(welch_psd(&s, 256, 1.0).is_err());
        assert!(welch_psd(&s, 256, -0.1).is_err());
    }

    #[test]
    fn carrier_variance_of_clean_tone_is_negligible() {
        let n = 1 << 14;
        let phi = vec![0.25f64; n]; // constant phase: all power in the carrier
        let s = PhaseSeries::new(phi, 1e6, 0.0).unwrap();
        let spec = beat_spectrum(&s, 1024, 0.5).unwrap();
        let cv = carrier_phase_variance(&spec, 3.0 * spec.df()).unwrap();
        assert!(
            cv.variance_rad2.abs() < 1e-6,
            "variance {}",
            cv.variance_rad2
        );
        assert!(cv.reliable);
    }

    #[test]
    fn carrier_variance_inverts_known_fraction() {
        // Hand-built spectrum with carrier fraction exp(-0.08).
        let n = 401usize;
        let df = 10.0;
        let frac = (-0.08f64).exp();
        let mut psd = vec![(1.0 - frac) / (n as f64 - 1.0) / df; n];
        psd[200] = frac / df;
        let spec = Spectrum {
            freqs: (0..n).map(|i| (i as f64 - 200.0) * df).collect(),
            psd,
            rbw_equivalent_hz: df,
            units: SpectrumUnits::PowerPerHz,
        };
        let cv = carrier_phase_variance(&spec, df).unwrap();
        assert!((cv.carrier_fraction - frac).abs() < 1e-9);
        assert!((cv.variance_rad2 - 0.08).abs() < 1e-6);
    }

    #[test]
    fn carrier_variance_recovers_gaussian_phase_noise() {
        use rand::{Rng, SeedableRng};
        use rand_distr::StandardNormal;
        let target = 0.19f64;
        let sigma = target.sqrt();
        let n = 1 << 16;
        let mut est = 0.0;
        let seeds = 10;
        for seed in 0..seeds {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(810 + seed);
            let phi: Vec<f64> = (0..n)
                .map(|_| sigma * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let s = PhaseSeries::new(phi, 1e6, 0.0).unwrap();
            let spec = beat_spectrum(&s, 1024, 0.5).unwrap();
            est += carrier_phase_variance(&spec, 3.0 * spec.df())
                .unwrap()
                .variance_rad2;
        }
        est /= seeds as f64;
        assert!(
            (est - target).abs() / target < 0.2,
            "estimated {est} vs {target}"
        );
    }

    #[test]
    fn carrier_variance_is_amplitude_invariant() {
        // Scaling the whole spectrum cancels in the fraction.
        let base = Spectrum {
            freqs: (0..101).map(|i| i as f64 - 50.0).collect(),
            psd: (0..101)
                .map(|i| if i == 50 { 10.0 } else { 0.01 })
                .collect(),
            rbw_equivalent_hz: 1.0,
            units: SpectrumUnits::PowerPerHz,
        };
        let scaled = Spectrum {
            psd: base.psd.iter().map(|p| p * 123.4).collect(),
            ..base.clone()
        };
        let a = carrier_phase_variance(&base, 1.0).unwrap();
        let b = carrier_phase_variance(&scaled, 1.0).unwrap();
        assert!((a.variance_rad2 - b.variance_rad2).abs() < 1e-12);
    }

    #[test]
    fn weak_carrier_is_flagged_unreliable() {
        let spec = Spectrum {
            freqs: (0..1001).map(|i| i as f64).collect(),
            psd: vec![1.0; 1001],
            rbw_equivalent_hz: 1.0,
            units: SpectrumUnits::PowerPerHz,
        };
        let cv = carrier_phase_variance(&spec, 1.0).unwrap();
        assert!(!cv.reliable);
    }

    #[test]
    fn analyzer_corrections_reference_arithmetic() {
        let c = sa_noise_corrections(-60.0, 3000.0).unwrap();
        assert!((c - (-92.78)).abs() < 0.005, "corrected {c}");
        let unit = sa_noise_corrections(0.0, 1.0).unwrap();
        assert!((unit - 1.99).abs() < 1e-9);
        assert!(sa_noise_corrections(0.0, 0.0).is_err());
    }

    #[test]
    fn analyzer_corrections_are_rbw_consistent() {
        // Same true density read at two RBWs corrects to the same value.
        let density = -100.0;
        let read_3k = density + 10.0 * 3000f64.log10();
        let read_300 = density + 10.0 * 300f64.log10();
        let a = sa_noise_corrections(read_3k, 3000.0).unwrap();
        let b = sa_noise_corrections(read_300, 300.0).unwrap();
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn mod_allan_of_linear_ramp_vanishes() {
        let fs = 1e4;
        let n = 30_000;
        let f_off = 100.0;
        let phi: Vec<f64> = (0..n)
            .map(|i| 2.0 * std::f64::consts::PI * f_off * i as f64 / fs)
            .collect();
        let s = PhaseSeries::new(phi, fs, 0.0).unwrap();
        let curve = mod_allan(&s, 4e9, &[2e-4, 1e-3, 1e-2, 0.1]).unwrap();
        for (tau, md) in curve.taus.iter().zip(curve.mdev.iter()) {
            // Exact cancellation up to float round-off on the prefix sums.
            assert!(*md < 1e-12, "tau {tau}: mdev {md}");
        }
    }

    #[test]
    fn mod_allan_snaps_and_validates_taus() {
        let s = PhaseSeries::new(vec![0.0; 100], 1e3, 0.0).unwrap();
        let curve = mod_allan(&s, 1e9, &[3.4e-3]).unwrap();
        assert!((curve.taus[0] - 3e-3).abs() < 1e-12);
        assert!(mod_allan(&s, 1e9, &[1.0]).is_err());
        assert!(mod_allan(&s, 1e9, &[-1.0]).is_err());
        assert!(mod_allan(&s, 0.0, &[1e-2]).is_err());
    }

    #[test]
    fn carrier_variance_holds_down_to_small_noise() {
        use rand::{Rng, SeedableRng};
        use rand_distr::StandardNormal;
        let target = 0.01f64;
        let n = 1 << 16;
        let mut est = 0.0;
        let seeds = 10;
        for seed in 0..seeds {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(300 + seed);
            let phi: Vec<f64> = (0..n)
                .map(|_| target.sqrt() * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let s = PhaseSeries::new(phi, 1e6, 0.0).unwrap();
            let spec = beat_spectrum(&s, 1024, 0.5).unwrap();
            est += carrier_phase_variance(&spec, 3.0 * spec.df())
                .unwrap()
                .variance_rad2;
        }
        est /= seeds as f64;
        assert!((est - target).abs() / target < 0.2, "estimated {est}");
    }

    #[test]
    fn mod_allan_flicker_slopes() {
        // Flicker PM (alpha = -1) -> slope -1; flicker FM (alpha = -3) ->
        // slope 0, each within +-0.15.
        let fs = 1e6;
        let n = 1 << 16;
        let taus: Vec<f64> = (2..=10).map(|k| (1u64 << k) as f64 / fs).collect();
        for &(alpha, b, expect) in &[(-1i32, 1e-4, -1.0f64), (-3, 1e4, 0.0)] {
            let spec = PowerLawNoiseSpec::single(alpha, b).unwrap();
            let seeds = 6u64;
            let mut mdev = vec![0.0f64; taus.len()];
            let mut curve_taus = Vec::new();
            for seed in 0..seeds {
                let s = synthesize_power_law(&spec, n, fs, 7100 + seed).unwrap();
                let curve = mod_allan(&s, 4e9, &taus).unwrap();
                for (acc, md) in mdev.iter_mut().zip(curve.mdev.iter()) {
                    *acc += md / seeds as f64;
                }
                curve_taus = curve.taus;
            }
            let fit = fit_loglog_slope(&curve_taus, &mdev, (8.0 / fs, 1024.0 / fs)).unwrap();
            assert!(
                (fit.slope - expect).abs() < 0.15,
                "alpha={alpha}: slope {:.3} expected {expect}",
                fit.slope
            );
        }
    }

    #[test]
    fn loglog_fit_recovers_exact_power_law() {
        let xs: Vec<f64> = (1..50).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(-1.5)).collect();
        let fit = fit_loglog_slope(&xs, &ys, (1.0, 50.0)).unwrap();
        assert!((fit.slope + 1.5).abs() < 1e-12);
        assert!(fit.half_width < 1e-10);
    }

    #[test]
    fn loglog_fit_isolates_piecewise_segments() {
        let xs: Vec<f64> = (1..=400).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| {
                if x <= 100.0 {
                    x.powf(2.0)
                } else {
                    1e4 * (x / 100.0).powf(-0.5)
                }
            })
            .collect();
        let lo = fit_loglog_slope(&xs, &ys, (2.0, 90.0)).unwrap();
        assert!((lo.slope - 2.0).abs() < 0.1, "low segment {}", lo.slope);
        let hi = fit_loglog_slope(&xs, &ys, (120.0, 400.0)).unwrap();
        assert!((hi.slope + 0.5).abs() < 0.1, "high segment {}", hi.slope);
    }

    #[test]
    fn loglog_fit_rejects_bad_ranges() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let ys = [1.0, 2.0, 3.0, 0.0, 5.0, 6.0];
        assert!(fit_loglog_slope(&xs, &ys, (1.0, 6.0)).is_err()); // zero y
        assert!(fit_loglog_slope(&xs[..4], &ys[..4], (1.0, 4.0)).is_err()); // too few
    }

    #[test]
    fn rms_phase_variance_trivial_cases() {
        let s = PhaseSeries::new(vec![1.234; 10_000], 1e6, 0.0).unwrap();
        assert!(rms_phase_variance(&s, 1e4).unwrap() < 1e-24);
        let ramp: Vec<f64> = (0..10_000).map(|i| 0.01 * i as f64).collect();
        let r = PhaseSeries::new(ramp, 1e6, 0.0).unwrap();
        assert!(rms_phase_variance(&r, 1e4).unwrap() < 1e-18);
        assert!(rms_phase_variance(&r, 1e7).is_err());
    }
}
