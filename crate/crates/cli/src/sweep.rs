//! `opll sweep`: one simulation per value of a numeric config field,
//! aggregated into a summary CSV. Sub-runs execute in parallel; the
//! aggregate is sorted by axis value, so the output is order-independent.

use std::path::Path;

use rayon::prelude::*;

use opll_core::simengine::run_simulation;

use crate::config;
use crate::manifest::Manifest;

pub fn run(
    config_path: &Path,
    axis: &str,
    values_csv: &str,
    out_dir: &Path,
    seed_override: Option<u64>,
) -> Result<i32, String> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| format!("cannot read config {}: {e}", config_path.display()))?;
    // The base config must itself be loadable.
    let base = config::parse(&text)?;
    let _ = &base;

    let values = parse_values(values_csv)?;
    std::fs::create_dir_all(out_dir).map_err(|e| format!("cannot create out dir: {e}"))?;

    let mut man = Manifest::new("sweep");
    man.set_config_text(&text);
    man.add_field("axis", axis);

    let mut results: Vec<(f64, f64, bool)> = values
        .par_iter()
        .map(|&v| -> Result<(f64, f64, bool), String> {
            let mut cfg = apply_axis(&text, axis, v)?;
            if let Some(seed) = seed_override {
                cfg.seed = seed;
            }
            cfg.validate().map_err(|e| format!("{axis}={v}: {e}"))?;
            let rec = run_simulation(&cfg).map_err(|e| format!("{axis}={v}: {e}"))?;
            let var = rec
                .carrier_variance(4096)
                .map_err(|e| format!("{axis}={v}: {e}"))?;
            Ok((v, var, rec.locked()))
        })
        .collect::<Result<Vec<_>, String>>()?;
    results.sort_by(|a, b| a.0.total_cmp(&b.0));

    let path = out_dir.join("sweep.csv");
    let mut body = String::from("value,phase_var,locked\n");
    for (v, var, locked) in &results {
        body.push_str(&format!("{v},{var},{locked}\n"));
    }
    std::fs::write(&path, body).map_err(|e| format!("cannot write sweep.csv: {e}"))?;
    man.add_output(&path);
    man.add_field("runs", results.len());
    man.write(out_dir)?;

    for (v, var, locked) in &results {
        println!("{axis}={v} phase_var={var} locked={locked}");
    }
    Ok(0)
}

fn parse_values(values_csv: &str) -> Result<Vec<f64>, String> {
    if values_csv.trim().is_empty() {
        return Ok(Vec::new());
    }
    values_csv
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad axis value `{s}`: {e}"))
        })
        .collect()
}

/// Set the dotted `axis` path in the config text to `value` and
/// re-deserialize. Unknown paths fail deserialization.
fn apply_axis(text: &str, axis: &str, value: f64) -> Result<opll_core::SimConfig, String> {
    let mut root: toml::Value =
        toml::from_str(text).map_err(|e| format!("config parse error: {e}"))?;
    let mut node = &mut root;
    let parts: Vec<&str> = axis.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(format!("malformed axis path `{axis}`"));
    }
    for part in &parts[..parts.len() - 1] {
        let table = node
            .as_table_mut()
            .ok_or_else(|| format!("axis path `{axis}`: `{part}` is not a table"))?;
        node = table
            .entry(part.to_string())
            .or_insert(toml::Value::Table(Default::default()));
    }
    let leaf = parts[parts.len() - 1].to_string();
    let table = node
        .as_table_mut()
        .ok_or_else(|| format!("axis path `{axis}` does not end in a table"))?;
    // Integer-valued fields (divider moduli, seeds) need an integer node.
    let tv = if value.fract() == 0.0 && value.abs() < 9e15 {
        toml::Value::Integer(value as i64)
    } else {
        toml::Value::Float(value)
    };
    table.insert(leaf, tv);
    root.try_into::<opll_core::SimConfig>()
        .map_err(|e| format!("axis `{axis}`: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_application_reaches_nested_fields() {
        let cfg = apply_axis("", "pfd.n_div", 384.0).unwrap();
        assert_eq!(cfg.pfd.n_div, 384);
        let cfg = apply_axis("", "ref_noise_offset_db", 12.5).unwrap();
        assert_eq!(cfg.ref_noise_offset_db, 12.5);
        let cfg = apply_axis("", "loop.fast_gain", 1e-3).unwrap();
        assert_eq!(cfg.loop_cfg.fast_gain, 1e-3);
    }

    #[test]
    fn unknown_axis_is_rejected() {
        assert!(apply_axis("", "pfd.m_div", 1.0).is_err());
        assert!(apply_axis("", "nonsense_field", 1.0).is_err());
        assert!(apply_axis("", "pfd..n_div", 1.0).is_err());
    }

    #[test]
    fn value_lists_parse() {
        assert_eq!(parse_values("").unwrap().len(), 0);
        assert_eq!(
            parse_values("96, 192,384").unwrap(),
            vec![96.0, 192.0, 384.0]
        );
        assert!(parse_values("96,abc").is_err());
    }
}
