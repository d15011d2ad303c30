//! `opll selftest`: fast built-in checks that the numerics behave on this
//! machine. A reduced version of the full acceptance suite.

use opll_core::noise::{pfd_noise_floor_dbc, stream_rng};
use opll_core::pfd::{pfd_step, PfdState};
use opll_core::simengine::{run_simulation, SimConfig};
use opll_core::LoopConfig;

pub fn run() -> Result<i32, String> {
    let mut ok = true;

    // Discriminator floor identity and N scaling.
    let f0 = pfd_noise_floor_dbc(1, 1.0).map_err(|e| e.to_string())?;
    check(&mut ok, "noise-floor identity", (f0 + 219.0).abs() < 1e-12);
    let d = pfd_noise_floor_dbc(384, 6.912e9).map_err(|e| e.to_string())?
        - pfd_noise_floor_dbc(96, 6.912e9).map_err(|e| e.to_string())?;
    check(
        &mut ok,
        "noise-floor N scaling",
        (d - 10.0 * 4f64.log10()).abs() < 1e-9,
    );

    // Lead compensator peak advance for tau1/tau2 = 10.
    let lc = LoopConfig {
        lead_tau1_s: 1e-5,
        lead_tau2_s: 1e-6,
        ..LoopConfig::default()
    };
    let peak = lc.lead_response(lc.lead_peak_hz()).arg().to_degrees();
    check(
        &mut ok,
        "lead peak advance",
        (peak - (9.0f64 / 11.0).asin().to_degrees()).abs() < 0.1,
    );

    // Discriminator sign on a handful of random offsets.
    use rand::Rng;
    let mut rng = stream_rng(1, "selftest");
    let mut sign_ok = true;
    for _ in 0..10 {
        let f_ref = rng.gen_range(0.5e6..2e6);
        let sign: f64 = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let f_div = f_ref * (1.0 + sign * 0.01);
        let t_end = 200.0 / f_ref;
        let mut state = PfdState::default();
        let (mut kr, mut kd) = (1u64, 1u64);
        let (mut charge, mut t_prev, mut out) = (0.0, 0.0, 0.0);
        loop {
            let tr = kr as f64 / f_ref;
            let td = kd as f64 / f_div;
            let (t, is_ref) = if tr <= td { (tr, true) } else { (td, false) };
            if t > t_end {
                break;
            }
            charge += out * (t - t_prev);
            out = pfd_step(&mut state, is_ref, !is_ref, 1.0);
            t_prev = t;
            if is_ref {
                kr += 1
            } else {
                kd += 1
            }
        }
        charge += out * (t_end - t_prev);
        sign_ok &= (charge / t_end).signum() == (f_ref - f_div).signum();
    }
    check(&mut ok, "discriminator sign", sign_ok);

    // A short noiseless run must lock.
    let mut cfg = SimConfig {
        duration_s: 1.5e-3,
        record_fs_hz: 4e6,
        ..SimConfig::default()
    };
    cfg.laser.detuning0_hz = 1e6;
    let rec = run_simulation(&cfg).map_err(|e| e.to_string())?;
    check(&mut ok, "noiseless lock", rec.locked());

    if ok {
        println!("selftest: all checks passed");
        Ok(0)
    } else {
        Err("selftest failed".into())
    }
}

fn check(ok: &mut bool, name: &str, pass: bool) {
    println!("selftest {name}: {}", if pass { "PASS" } else { "FAIL" });
    *ok &= pass;
}
