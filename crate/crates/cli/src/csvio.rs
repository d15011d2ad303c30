//! CSV reading and writing. Writers format floats with Rust's shortest
//! round-trip representation, so identical data gives identical bytes.

use std::io::Write;
use std::path::Path;

use opll_core::analysis::{Spectrum, SpectrumUnits};
use opll_core::noise::PhaseSeries;

pub fn write_series(
    path: &Path,
    header: (&str, &str),
    t0: f64,
    fs: f64,
    values: &[f64],
) -> Result<(), String> {
    let mut out = String::with_capacity(values.len() * 24);
    out.push_str(&format!("{},{}\n", header.0, header.1));
    for (i, v) in values.iter().enumerate() {
        out.push_str(&format!("{},{}\n", t0 + i as f64 / fs, v));
    }
    std::fs::write(path, out).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

pub fn write_pairs(path: &Path, header: (&str, &str), pairs: &[(f64, f64)]) -> Result<(), String> {
    let mut out = String::with_capacity(pairs.len() * 24);
    out.push_str(&format!("{},{}\n", header.0, header.1));
    for (a, b) in pairs {
        out.push_str(&format!("{a},{b}\n"));
    }
    std::fs::write(path, out).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

pub fn write_keyvals(path: &Path, rows: &[(&str, String)]) -> Result<(), String> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| format!("cannot create {}: {e}", path.display()))?;
    writeln!(f, "key,value").map_err(|e| e.to_string())?;
    for (k, v) in rows {
        writeln!(f, "{k},{v}").map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn read_two_columns(path: &Path, want: (&str, &str)) -> Result<Vec<(f64, f64)>, String> {
    let mut rdr =
        csv::Reader::from_path(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let headers = rdr
        .headers()
        .map_err(|e| format!("bad CSV header: {e}"))?
        .clone();
    if headers.len() < 2 || &headers[0] != want.0 || &headers[1] != want.1 {
        return Err(format!(
            "schema mismatch in {}: expected columns `{},{}`, found `{}`",
            path.display(),
            want.0,
            want.1,
            headers.iter().collect::<Vec<_>>().join(",")
        ));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| format!("row {}: {e}", i + 2))?;
        let a: f64 = rec[0]
            .parse()
            .map_err(|e| format!("row {}: bad value `{}`: {e}", i + 2, &rec[0]))?;
        let b: f64 = rec[1]
            .parse()
            .map_err(|e| format!("row {}: bad value `{}`: {e}", i + 2, &rec[1]))?;
        rows.push((a, b));
    }
    if rows.len() < 2 {
        return Err(format!("{} holds fewer than two rows", path.display()));
    }
    Ok(rows)
}

/// Read a `time_s,phase_rad` series; the rate comes from the time column.
pub fn read_phase_series(path: &Path) -> Result<PhaseSeries, String> {
    let rows = read_two_columns(path, ("time_s", "phase_rad"))?;
    let dt = rows[1].0 - rows[0].0;
    if !(dt > 0.0) {
        return Err("time column must be strictly increasing".into());
    }
    let samples: Vec<f64> = rows.iter().map(|r| r.1).collect();
    PhaseSeries::new(samples, 1.0 / dt, rows[0].0).map_err(|e| e.to_string())
}

/// Read a `freq_hz,psd` spectrum (linear power density).
pub fn read_spectrum(path: &Path) -> Result<Spectrum, String> {
    let rows = read_two_columns(path, ("freq_hz", "psd"))?;
    build_spectrum(rows)
}

/// Read a `freq_hz,reading_db` analyzer export and normalize each reading
/// to a 1 Hz density via the log-detector corrections.
pub fn read_spectrum_db(path: &Path, rbw_hz: f64) -> Result<Spectrum, String> {
    let rows = read_two_columns(path, ("freq_hz", "reading_db"))?;
    let corrected: Result<Vec<(f64, f64)>, String> = rows
        .into_iter()
        .map(|(f, db)| {
            let c = opll_core::sa_noise_corrections(db, rbw_hz).map_err(|e| e.to_string())?;
            Ok((f, 10f64.powf(c / 10.0)))
        })
        .collect();
    build_spectrum(corrected?)
}

fn build_spectrum(rows: Vec<(f64, f64)>) -> Result<Spectrum, String> {
    let df = rows[1].0 - rows[0].0;
    if !(df > 0.0) {
        return Err("frequency column must be strictly increasing".into());
    }
    Ok(Spectrum {
        freqs: rows.iter().map(|r| r.0).collect(),
        psd: rows.iter().map(|r| r.1).collect(),
        rbw_equivalent_hz: df,
        units: SpectrumUnits::PowerPerHz,
    })
}
