//! Canned configurations for the three divider/reference scenarios used in
//! the noise-ordering studies, plus their reference-oscillator noise models.
//!
//! The reference characteristics are generic models of the three classes of
//! lab source involved: a low-noise 18 MHz function generator, a noisier
//! 72 MHz function generator, and a 216 MHz VCO phase-locked to the quiet
//! generator through a narrowband loop. Levels are representative, not
//! calibrated to specific serial numbers; what the scenarios are for is the
//! ordering of the locked phase variance, driven by the multiplication
//! factor `N/R` and the reference quality.

use crate::noise::{DbcPoint, DbcSpec, PowerLawNoiseSpec};
use crate::simengine::SimConfig;

/// Low-noise 18 MHz function generator.
pub fn ref_gen_18mhz_low_noise() -> DbcSpec {
    DbcSpec::new(vec![
        DbcPoint {
            f_hz: 1e3,
            l_dbc: -113.0,
        },
        DbcPoint {
            f_hz: 1e4,
            l_dbc: -116.0,
        },
        DbcPoint {
            f_hz: 1e5,
            l_dbc: -126.0,
        },
        DbcPoint {
            f_hz: 1e6,
            l_dbc: -140.0,
        },
        DbcPoint {
            f_hz: 1e7,
            l_dbc: -150.0,
        },
    ])
    .expect("static spec is valid")
}

/// Noisier 72 MHz function generator.
pub fn ref_gen_72mhz_noisy() -> DbcSpec {
    DbcSpec::new(vec![
        DbcPoint {
            f_hz: 1e3,
            l_dbc: -90.0,
        },
        DbcPoint {
            f_hz: 1e4,
            l_dbc: -93.0,
        },
        DbcPoint {
            f_hz: 1e5,
            l_dbc: -106.0,
        },
        DbcPoint {
            f_hz: 1e6,
            l_dbc: -125.0,
        },
        DbcPoint {
            f_hz: 1e7,
            l_dbc: -140.0,
        },
    ])
    .expect("static spec is valid")
}

/// 216 MHz VCO locked to the quiet generator through a ~1 kHz loop: follows
/// the multiplied generator inside that band, free-running VCO outside.
pub fn ref_vco_216mhz_locked() -> DbcSpec {
    DbcSpec::new(vec![
        DbcPoint {
            f_hz: 1e3,
            l_dbc: -92.0,
        },
        DbcPoint {
            f_hz: 1e4,
            l_dbc: -102.0,
        },
        DbcPoint {
            f_hz: 1e5,
            l_dbc: -122.0,
        },
        DbcPoint {
            f_hz: 1e6,
            l_dbc: -142.0,
        },
        DbcPoint {
            f_hz: 1e7,
            l_dbc: -150.0,
        },
    ])
    .expect("static spec is valid")
}

/// Slave-laser free-running noise used by the scenario configs: white
/// frequency noise giving a Lorentzian line in the 100 kHz class.
pub fn ecdl_free_run_noise() -> PowerLawNoiseSpec {
    PowerLawNoiseSpec::single(-2, 2e4).expect("static spec is valid")
}

fn scenario_base() -> SimConfig {
    let mut cfg = SimConfig::default();
    cfg.laser.free_run_noise = ecdl_free_run_noise();
    cfg.pfd_floor_enabled = true;
    cfg.duration_s = 20e-3;
    cfg.record_fs_hz = 8e6;
    cfg
}

/// N=384, R=1 on the low-noise 18 MHz generator: large multiplication.
pub fn scenario_n384_r1() -> SimConfig {
    let mut cfg = scenario_base();
    cfg.pfd.n_div = 384;
    cfg.pfd.r_div = 1;
    cfg.ref_noise = Some(ref_gen_18mhz_low_noise());
    cfg
}

/// N=96, R=1 on the noisy 72 MHz generator: reference noise dominates.
pub fn scenario_n96_r1() -> SimConfig {
    let mut cfg = scenario_base();
    cfg.pfd.n_div = 96;
    cfg.pfd.r_div = 1;
    cfg.ref_noise = Some(ref_gen_72mhz_noisy());
    cfg
}

/// N=96, R=3 on the 216 MHz locked VCO: smallest multiplication, best lock.
pub fn scenario_n96_r3() -> SimConfig {
    let mut cfg = scenario_base();
    cfg.pfd.n_div = 96;
    cfg.pfd.r_div = 3;
    cfg.ref_noise = Some(ref_vco_216mhz_locked());
    cfg
}
