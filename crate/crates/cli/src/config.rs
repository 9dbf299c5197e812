use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::ValueEnum;
use powergraph::arith::{DEFAULT_CLASS_CAP, MAX_ORDER};
use powergraph::OracleMode;

pub const CLASS_CAP_ENV: &str = "POWERGRAPH_CLASS_CAP";
const MIN_CLASS_CAP: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Maxflow,
    Exhaustive,
    Both,
    None,
}

impl From<Oracle> for OracleMode {
    fn from(o: Oracle) -> Self {
        match o {
            Oracle::Maxflow => OracleMode::Maxflow,
            Oracle::Exhaustive => OracleMode::Exhaustive,
            Oracle::Both => OracleMode::Both,
            Oracle::None => OracleMode::None,
        }
    }
}

/// Parses a group order, rejecting anything outside `[2, 2^63 - 1]`.
pub fn parse_order(s: &str) -> Result<u64, String> {
    let n: u64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a non-negative integer below 2^64"))?;
    if n < 2 {
        return Err(format!("n must be at least 2, got {n}"));
    }
    if n > MAX_ORDER {
        return Err(format!("n must be at most 2^63 - 1, got {n}"));
    }
    Ok(n)
}

/// Picks the class cap: the flag wins over the environment, which wins
/// over the default.
pub fn resolve_class_cap(flag: Option<usize>, env: Option<&str>) -> Result<usize, String> {
    let cap = match (flag, env) {
        (Some(cap), _) => cap,
        (None, Some(raw)) => raw
            .trim()
            .parse()
            .map_err(|_| format!("{CLASS_CAP_ENV}=`{raw}` is not an integer"))?,
        (None, None) => DEFAULT_CLASS_CAP,
    };
    if cap < MIN_CLASS_CAP {
        return Err(format!(
            "class cap must be at least {MIN_CLASS_CAP}, got {cap}"
        ));
    }
    Ok(cap)
}

pub fn class_cap_from_env(flag: Option<usize>) -> Result<usize, String> {
    let env = std::env::var(CLASS_CAP_ENV).ok();
    resolve_class_cap(flag, env.as_deref())
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub range: RangeInclusive<u64>,
    pub oracle: Oracle,
    pub class_cap: usize,
    pub workers: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), String> {
        let (lo, hi) = (*self.range.start(), *self.range.end());
        if lo < 2 {
            return Err(format!("range must start at 2 or above, got {lo}"));
        }
        if lo > hi {
            return Err(format!("empty range {lo}..={hi}"));
        }
        if hi > MAX_ORDER {
            return Err(format!("range end must be at most 2^63 - 1, got {hi}"));
        }
        if self.workers == 0 {
            return Err("workers must be at least 1".into());
        }
        if self.class_cap < MIN_CLASS_CAP {
            return Err(format!("class cap must be at least {MIN_CLASS_CAP}"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_bounds() {
        assert_eq!(parse_order("2"), Ok(2));
        assert_eq!(parse_order("9223372036854775807"), Ok(MAX_ORDER));
        assert!(parse_order("9223372036854775808").is_err());
        assert!(parse_order("1").is_err());
        assert!(parse_order("0").is_err());
        assert!(parse_order("-5").is_err());
        assert!(parse_order("twelve").is_err());
    }

    #[test]
    fn class_cap_precedence() {
        assert_eq!(resolve_class_cap(None, None), Ok(DEFAULT_CLASS_CAP));
        assert_eq!(resolve_class_cap(None, Some("64")), Ok(64));
        assert_eq!(resolve_class_cap(Some(32), Some("64")), Ok(32));
        assert!(resolve_class_cap(None, Some("lots")).is_err());
        assert!(resolve_class_cap(Some(3), None).is_err());
    }

    #[test]
    fn sweep_config_invariants() {
        let base = SweepConfig {
            range: 2..=10,
            oracle: Oracle::Both,
            class_cap: 4096,
            workers: 1,
            output: None,
            format: Format::Csv,
        };
        assert!(base.validate().is_ok());
        assert!(SweepConfig {
            range: 1..=10,
            ..base.clone()
        }
        .validate()
        .is_err());
        let (lo, hi) = (10, 2);
        assert!(SweepConfig {
            range: lo..=hi,
            ..base.clone()
        }
        .validate()
        .is_err());
        assert!(SweepConfig {
            workers: 0,
            ..base.clone()
        }
        .validate()
        .is_err());
        assert!(SweepConfig {
            class_cap: 3,
            ..base
        }
        .validate()
        .is_err());
    }
}
