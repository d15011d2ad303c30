//! `opll` - batch simulator and analysis tool for the digital optical
//! phase lock.
//!
//! Exit codes: 0 on success (simulate: locked), 2 when a simulation did not
//! lock, 1 on configuration or usage errors.

// Negated float comparisons reject NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod analyze;
mod config;
mod csvio;
mod manifest;
mod selftest;
mod simulate;
mod sweep;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "opll",
    version,
    about = "Digital OPLL simulator and analysis tool"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a closed-loop simulation and write the recorded series as CSV.
    Simulate {
        /// TOML configuration file.
        #[arg(long)]
        config: std::path::PathBuf,
        /// Output directory (created if missing).
        #[arg(long)]
        out: std::path::PathBuf,
        /// Replace the config's seed.
        #[arg(long)]
        seed_override: Option<u64>,
    },
    /// Analyze a CSV time series or spectrum.
    Analyze {
        /// Input CSV (`time_s,phase_rad` series or `freq_hz,psd` spectrum).
        #[arg(long)]
        input: std::path::PathBuf,
        /// psd | eq1 | mvar | rms
        #[arg(long)]
        mode: String,
        #[arg(long)]
        out: std::path::PathBuf,
        /// series | spectrum | spectrum-db (analyzer export in dB needing
        /// the log-detector corrections; requires --rbw-hz)
        #[arg(long, default_value = "series")]
        input_kind: String,
        /// Resolution bandwidth of a spectrum-db input, Hz.
        #[arg(long)]
        rbw_hz: Option<f64>,
        /// Welch segment length (psd/eq1 on series input).
        #[arg(long, default_value_t = 4096)]
        seg_len: usize,
        /// Welch segment overlap fraction.
        #[arg(long, default_value_t = 0.5)]
        overlap: f64,
        /// Carrier frequency for mvar's phase-to-time conversion, Hz.
        #[arg(long, default_value_t = 6.912e9)]
        nu0_hz: f64,
        /// Output sampling rate for rms decimation, Hz.
        #[arg(long, default_value_t = 5e6)]
        rate_hz: f64,
    },
    /// Run one simulation per value of a numeric config field and aggregate.
    Sweep {
        #[arg(long)]
        config: std::path::PathBuf,
        /// Dotted path of a numeric config field (e.g. `pfd.n_div`,
        /// `ref_noise_offset_db`, `loop.fast_gain`).
        #[arg(long)]
        axis: String,
        /// Comma-separated values; empty for a no-op sweep.
        #[arg(long, default_value = "")]
        values: String,
        #[arg(long)]
        out: std::path::PathBuf,
        #[arg(long)]
        seed_override: Option<u64>,
    },
    /// Quick built-in checks of the core numerics.
    Selftest,
}

fn main() {
    // Sweep parallelism is capped by OPLL_THREADS when set.
    if let Ok(v) = std::env::var("OPLL_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Simulate {
            config,
            out,
            seed_override,
        } => simulate::run(&config, &out, seed_override),
        Command::Analyze {
            input,
            mode,
            out,
            input_kind,
            rbw_hz,
            seg_len,
            overlap,
            nu0_hz,
            rate_hz,
        } => analyze::run(&analyze::Request {
            input,
            mode,
            out,
            input_kind,
            rbw_hz,
            seg_len,
            overlap,
            nu0_hz,
            rate_hz,
        }),
        Command::Sweep {
            config,
            axis,
            values,
            out,
            seed_override,
        } => sweep::run(&config, &axis, &values, &out, seed_override),
        Command::Selftest => selftest::run(),
    };
    std::process::exit(match code {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    });
}
