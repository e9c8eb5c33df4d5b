//! `key = value` config files and the flag > file > default merge.

use std::collections::BTreeMap;
use std::path::Path;

use m2dq_core::{Error, Result, SuiteConfig};

/// Parsed `key = value` pairs. Blank lines and `#` comments are skipped;
/// values may be quoted.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

const KNOWN_KEYS: &[&str] = &[
    "seed", "L", "nx", "ntheta", "tol", "r_max", "N", "t", "dt", "a", "c1", "c2", "c3",
];

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(Error::InvalidArgument(format!(
                    "config line {}: unknown key {key:?}",
                    lineno + 1
                )));
            }
            let value = value.trim().trim_matches('"').to_string();
            entries.insert(key.to_string(), value);
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.entries
            .get(key)
            .map(|v| {
                v.parse().map_err(|_| {
                    Error::InvalidArgument(format!("config key {key}: cannot parse {v:?}"))
                })
            })
            .transpose()
    }
}

/// Seeds accept decimal or `0x` hex.
pub fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

/// Seed from `M2DQ_SEED`, if set.
pub fn env_seed() -> Result<Option<u64>> {
    match std::env::var("M2DQ_SEED") {
        Ok(v) => parse_seed(&v).map(Some).map_err(Error::InvalidArgument),
        Err(_) => Ok(None),
    }
}

/// Optional overrides for [`SuiteConfig`], one per flag.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteOverrides {
    pub seed: Option<u64>,
    pub x_extent: Option<f64>,
    pub nx: Option<usize>,
    pub ntheta: Option<usize>,
    pub series_tol: Option<f64>,
    pub r_max: Option<usize>,
    pub modes: Option<usize>,
    pub t: Option<f64>,
    pub dt: Option<f64>,
}

/// Flags win over the file, the file over `M2DQ_SEED`, and that over defaults.
pub fn resolve_suite_config(
    flags: &SuiteOverrides,
    file: &ConfigFile,
    env_seed: Option<u64>,
) -> Result<SuiteConfig> {
    let d = SuiteConfig::default();
    let file_seed = match file.get::<String>("seed")? {
        Some(s) => Some(parse_seed(&s).map_err(Error::InvalidArgument)?),
        None => None,
    };
    Ok(SuiteConfig {
        seed: flags.seed.or(file_seed).or(env_seed).unwrap_or(d.seed),
        x_extent: flags.x_extent.or(file.get("L")?).unwrap_or(d.x_extent),
        nx: flags.nx.or(file.get("nx")?).unwrap_or(d.nx),
        ntheta: flags.ntheta.or(file.get("ntheta")?).unwrap_or(d.ntheta),
        series_tol: flags
            .series_tol
            .or(file.get("tol")?)
            .unwrap_or(d.series_tol),
        r_max: flags.r_max.or(file.get("r_max")?).unwrap_or(d.r_max),
        modes: flags.modes.or(file.get("N")?).unwrap_or(d.modes),
        t: flags.t.or(file.get("t")?).unwrap_or(d.t),
        dt: flags.dt.or(file.get("dt")?).unwrap_or(d.dt),
    })
}
