//! `opll analyze`: PSD, carrier-fraction variance, modified Allan deviation
//! and residual phase variance of CSV inputs.

use std::path::PathBuf;

use opll_core::analysis::{
    beat_spectrum, carrier_phase_variance, mod_allan, rms_phase_variance, welch_psd, Spectrum,
};
use opll_core::noise::PhaseSeries;

use crate::csvio;
use crate::manifest::Manifest;

pub struct Request {
    pub input: PathBuf,
    pub mode: String,
    pub out: PathBuf,
    pub input_kind: String,
    pub rbw_hz: Option<f64>,
    pub seg_len: usize,
    pub overlap: f64,
    pub nu0_hz: f64,
    pub rate_hz: f64,
}

enum Input {
    Series(PhaseSeries),
    Spectrum(Spectrum),
}

fn load_input(req: &Request) -> Result<Input, String> {
    match req.input_kind.as_str() {
        "series" => Ok(Input::Series(csvio::read_phase_series(&req.input)?)),
        "spectrum" => Ok(Input::Spectrum(csvio::read_spectrum(&req.input)?)),
        "spectrum-db" => {
            let rbw = req
                .rbw_hz
                .ok_or_else(|| "spectrum-db input needs --rbw-hz".to_string())?;
            Ok(Input::Spectrum(csvio::read_spectrum_db(&req.input, rbw)?))
        }
        other => Err(format!("unknown input kind `{other}`")),
    }
}

pub fn run(req: &Request) -> Result<i32, String> {
    std::fs::create_dir_all(&req.out).map_err(|e| format!("cannot create out dir: {e}"))?;
    let mut man = Manifest::new("analyze");
    man.add_field("mode", &req.mode);
    man.add_field("input", req.input.display());

    let summary = match req.mode.as_str() {
        "psd" => {
            let series = match load_input(req)? {
                Input::Series(s) => s,
                Input::Spectrum(_) => return Err("psd mode needs a series input".into()),
            };
            let spec = welch_psd(&series, req.seg_len, req.overlap).map_err(|e| e.to_string())?;
            let path = req.out.join("psd.csv");
            let pairs: Vec<(f64, f64)> = spec
                .freqs
                .iter()
                .zip(spec.psd.iter())
                .map(|(&f, &p)| (f, p))
                .collect();
            csvio::write_pairs(&path, ("freq_hz", "psd"), &pairs)?;
            man.add_output(&path);
            let peak = spec
                .psd
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| spec.freqs[i])
                .unwrap_or(0.0);
            format!(
                "peak_hz={peak} total_power={} rbw_hz={}",
                spec.integrated_power(),
                spec.rbw_equivalent_hz
            )
        }
        "eq1" => {
            let spec = match load_input(req)? {
                Input::Series(s) => {
                    beat_spectrum(&s, req.seg_len, req.overlap).map_err(|e| e.to_string())?
                }
                Input::Spectrum(sp) => sp,
            };
            let cv = carrier_phase_variance(&spec, 3.0 * spec.df()).map_err(|e| e.to_string())?;
            let path = req.out.join("eq1.csv");
            csvio::write_keyvals(
                &path,
                &[
                    ("phase_var_rad2", cv.variance_rad2.to_string()),
                    ("carrier_fraction", cv.carrier_fraction.to_string()),
                    ("reliable", cv.reliable.to_string()),
                ],
            )?;
            man.add_output(&path);
            format!(
                "phase_var_rad2={} carrier_fraction={} reliable={}",
                cv.variance_rad2, cv.carrier_fraction, cv.reliable
            )
        }
        "mvar" => {
            let series = match load_input(req)? {
                Input::Series(s) => s,
                Input::Spectrum(_) => return Err("mvar mode needs a series input".into()),
            };
            let fs = series.sample_rate();
            let mut taus = Vec::new();
            let mut n = 2usize;
            while 3 * n < series.len() {
                taus.push(n as f64 / fs);
                n *= 2;
            }
            if taus.is_empty() {
                return Err("series too short for any averaging time".into());
            }
            let curve = mod_allan(&series, req.nu0_hz, &taus).map_err(|e| e.to_string())?;
            let path = req.out.join("mvar.csv");
            let pairs: Vec<(f64, f64)> = curve
                .taus
                .iter()
                .zip(curve.mdev.iter())
                .map(|(&t, &m)| (t, m))
                .collect();
            csvio::write_pairs(&path, ("tau_s", "mdev"), &pairs)?;
            man.add_output(&path);
            format!(
                "points={} tau_min_s={} tau_max_s={} nu0_hz={}",
                curve.taus.len(),
                curve.taus[0],
                curve.taus[curve.taus.len() - 1],
                req.nu0_hz
            )
        }
        "rms" => {
            let series = match load_input(req)? {
                Input::Series(s) => s,
                Input::Spectrum(_) => return Err("rms mode needs a series input".into()),
            };
            let rate = req.rate_hz.min(series.sample_rate());
            let var = rms_phase_variance(&series, rate).map_err(|e| e.to_string())?;
            let path = req.out.join("rms.csv");
            csvio::write_keyvals(
                &path,
                &[
                    ("phase_var_rad2", var.to_string()),
                    ("sample_rate_hz", rate.to_string()),
                ],
            )?;
            man.add_output(&path);
            format!("phase_var_rad2={var} sample_rate_hz={rate}")
        }
        other => return Err(format!("unknown mode `{other}` (psd|eq1|mvar|rms)")),
    };

    man.write(&req.out)?;
    println!("{summary}");
    Ok(0)
}
