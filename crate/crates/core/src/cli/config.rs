//! Flat `key=value` configuration with `HLZ_*` environment overrides.

use std::path::{Path, PathBuf};

use crate::engine::Config;
use crate::error::{Error, Result};

pub const KEYS: [&str; 11] = [
    "epsilon",
    "mu_coeff",
    "mu_omega1",
    "mu_omega2",
    "rs_terms",
    "tol",
    "height_budget",
    "sieve_budget",
    "checkpoint_path",
    "threads",
    "asymptotic_tail",
];

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

pub fn set(cfg: &mut Config, key: &str, value: &str) -> Result<()> {
    match key {
        "epsilon" => cfg.epsilon = parse(key, value)?,
        "mu_coeff" => cfg.mu.coeff = parse(key, value)?,
        "mu_omega1" => cfg.mu.omega1 = parse(key, value)?,
        "mu_omega2" => cfg.mu.omega2 = parse(key, value)?,
        "rs_terms" => cfg.rs_terms = parse(key, value)?,
        "tol" => cfg.tol = parse(key, value)?,
        "height_budget" => cfg.height_budget = parse(key, value)?,
        "sieve_budget" => cfg.sieve_budget = parse(key, value)?,
        "checkpoint_path" => {
            let v = value.trim();
            cfg.checkpoint_path = if v.is_empty() {
                None
            } else {
                Some(PathBuf::from(v))
            };
        }
        "threads" => cfg.threads = parse(key, value)?,
        "asymptotic_tail" => cfg.asymptotic_tail = parse(key, value)?,
        _ => return Err(Error::Config(format!("unknown key {key:?}"))),
    }
    Ok(())
}

/// Applies `key=value` lines; blank lines and lines starting with `#`
/// are skipped.
pub fn apply_text(cfg: &mut Config, text: &str) -> Result<()> {
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key=value", n + 1)))?;
        set(cfg, k.trim(), v)?;
    }
    Ok(())
}

/// Applies `HLZ_<KEY>` variables, e.g. `HLZ_TOL=1e-10`.
pub fn apply_env(cfg: &mut Config, vars: impl IntoIterator<Item = (String, String)>) -> Result<()> {
    for (name, value) in vars {
        let Some(rest) = name.strip_prefix("HLZ_") else {
            continue;
        };
        let key = rest.to_ascii_lowercase();
        if KEYS.contains(&key.as_str()) {
            set(cfg, &key, &value)?;
        }
    }
    Ok(())
}

/// Defaults, then the file, then the environment.
pub fn load(
    file: Option<&Path>,
    vars: impl IntoIterator<Item = (String, String)>,
) -> Result<Config> {
    let mut cfg = Config::default();
    if let Some(path) = file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        apply_text(&mut cfg, &text)?;
    }
    apply_env(&mut cfg, vars)?;
    Ok(cfg)
}

/// The effective configuration in the file format, so that it reloads to
/// the same values.
pub fn render(cfg: &Config) -> String {
    let path = cfg
        .checkpoint_path
        .as_ref()
        .map(|p| p.display().to_string())
        .unwrap_or_default();
    let mut out = String::from("# effective config\n");
    let lines: [(&str, String); 11] = [
        ("epsilon", cfg.epsilon.to_string()),
        ("mu_coeff", cfg.mu.coeff.to_string()),
        ("mu_omega1", cfg.mu.omega1.to_string()),
        ("mu_omega2", cfg.mu.omega2.to_string()),
        ("rs_terms", cfg.rs_terms.to_string()),
        ("tol", cfg.tol.to_string()),
        ("height_budget", cfg.height_budget.to_string()),
        ("sieve_budget", cfg.sieve_budget.to_string()),
        ("checkpoint_path", path),
        ("threads", cfg.threads.to_string()),
        ("asymptotic_tail", cfg.asymptotic_tail.to_string()),
    ];
    for (k, v) in lines {
        out.push_str(k);
        out.push('=');
        out.push_str(&v);
        out.push('\n');
    }
    out
}
