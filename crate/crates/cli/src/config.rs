//! Configuration loading. The file format is TOML with units spelled out in
//! the key names (`f_beat_target_hz`, `duration_s`, ...); any omitted field
//! takes its default.

use std::path::Path;

use opll_core::simengine::SimConfig;

pub struct LoadedConfig {
    pub sim: SimConfig,
    /// Raw file bytes, hashed into the manifest.
    pub text: String,
}

pub fn load(path: &Path, seed_override: Option<u64>) -> Result<LoadedConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut sim = parse(&text)?;
    if let Some(seed) = seed_override {
        sim.seed = seed;
    }
    sim.validate().map_err(|e| e.to_string())?;
    Ok(LoadedConfig { sim, text })
}

pub fn parse(text: &str) -> Result<SimConfig, String> {
    toml::from_str::<SimConfig>(text).map_err(|e| format!("config parse error: {e}"))
}
