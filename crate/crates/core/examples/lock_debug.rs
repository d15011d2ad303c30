//! Prints the acquisition trajectory of the default loop for tuning work.

use opll_core::simengine::{loop_bandwidth_estimate, run_simulation, SimConfig};

fn main() {
    let mut cfg = SimConfig::default();
    cfg.duration_s = 2e-3;
    cfg.record_fs_hz = cfg.fs_hz;
    if let Some(d) = std::env::args().nth(1) {
        cfg.laser.detuning0_hz = d.parse().expect("detuning in Hz");
    }
    println!(
        "# bandwidth estimate: {:.3e} Hz",
        loop_bandwidth_estimate(&cfg)
    );
    let rec = run_simulation(&cfg).expect("run failed");
    println!("# outcome: {:?}", rec.outcome);
    let err = rec.phase_error_series();
    let n = err.len();
    let stride = (n / 60).max(1);
    println!("# t_us err_rad fast_v slow_v v3_v");
    for i in (0..n).step_by(stride) {
        println!(
            "{:10.2} {:14.6} {:10.6} {:10.6} {:10.4}",
            err.time_at(i) * 1e6,
            err.samples()[i],
            rec.fast_drive[i],
            rec.slow_drive[i],
            rec.main_stage[i]
        );
    }
}
