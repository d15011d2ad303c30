//! `opll simulate`: one closed-loop run, outputs as CSV plus manifest.

use std::path::Path;

use opll_core::simengine::{run_simulation, LockOutcome};

use crate::config;
use crate::csvio;
use crate::manifest::Manifest;

pub fn run(config_path: &Path, out_dir: &Path, seed_override: Option<u64>) -> Result<i32, String> {
    let loaded = config::load(config_path, seed_override)?;
    std::fs::create_dir_all(out_dir).map_err(|e| format!("cannot create out dir: {e}"))?;

    let rec = run_simulation(&loaded.sim).map_err(|e| e.to_string())?;

    let mut man = Manifest::new("simulate");
    man.set_config_text(&loaded.text);
    man.set_seed(loaded.sim.seed);

    let fs = rec.beat_phase.sample_rate();
    let beat_path = out_dir.join("beat_phase.csv");
    csvio::write_series(
        &beat_path,
        ("time_s", "phase_rad"),
        rec.beat_phase.t0(),
        fs,
        rec.beat_phase.samples(),
    )?;
    man.add_output(&beat_path);
    let fast_path = out_dir.join("fast_drive.csv");
    csvio::write_series(&fast_path, ("time_s", "volt"), 0.0, fs, &rec.fast_drive)?;
    man.add_output(&fast_path);
    let slow_path = out_dir.join("slow_drive.csv");
    csvio::write_series(&slow_path, ("time_s", "volt"), 0.0, fs, &rec.slow_drive)?;
    man.add_output(&slow_path);

    man.add_field("locked", rec.locked());
    match &rec.outcome {
        LockOutcome::Locked { t_lock } => {
            man.add_field("lock_flag_time_s", t_lock);
        }
        LockOutcome::NotLocked => {
            man.add_field("outcome", "not-locked");
        }
        LockOutcome::Diverged { t, reason } => {
            man.add_field("outcome", format!("diverged at {t} s: {reason}"));
        }
    }
    if !rec.overrun_events.is_empty() {
        man.add_field(
            "overrun_events_s",
            rec.overrun_events
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(";"),
        );
    }
    man.write(out_dir)?;

    println!(
        "locked={} outputs={}",
        rec.locked(),
        out_dir.join("manifest.txt").display()
    );
    Ok(if rec.locked() { 0 } else { 2 })
}
