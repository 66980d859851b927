//! Run configuration: a flat TOML file, overridden by command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use crystalline::build::{BuildConfig, DEFAULT_MAX_LEN};
use crystalline::io::AtomFormat;
use crystalline::meyer::{Method, DEFAULT_SEED, DEFAULT_TOL};
use crystalline::rational::{self, Rational};
use serde::{Deserialize, Serialize};

/// Either `[1, 2]` or a range string such as `"1..2"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LevelSpec {
    List(Vec<u32>),
    Text(String),
}

impl LevelSpec {
    pub fn resolve(&self) -> Result<Vec<u32>> {
        match self {
            LevelSpec::List(v) => Ok(v.clone()),
            LevelSpec::Text(s) => parse_levels(s),
        }
    }
}

/// Accepts `"1..2"` and `"1..=2"` (both inclusive), `"1,2"`, `"3"`,
/// and `""` or `"none"` for no levels.
pub fn parse_levels(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    if s.is_empty() || s.eq_ignore_ascii_case("none") {
        return Ok(Vec::new());
    }
    if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a
            .trim()
            .parse()
            .with_context(|| format!("bad level range {s:?}"))?;
        let b: u32 = b
            .trim()
            .trim_start_matches('=')
            .parse()
            .with_context(|| format!("bad level range {s:?}"))?;
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .with_context(|| format!("bad level {t:?}"))
        })
        .collect()
}

/// Everything a run depends on. Rationals are `"p/q"` strings.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<LevelSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_len: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<AtomFormat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verbose: Option<bool>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Fields set in `other` win.
    pub fn overlay(self, other: RunConfig) -> RunConfig {
        RunConfig {
            m: other.m.or(self.m),
            alpha: other.alpha.or(self.alpha),
            base: other.base.or(self.base),
            levels: other.levels.or(self.levels),
            q: other.q.or(self.q),
            tol: other.tol.or(self.tol),
            seed: other.seed.or(self.seed),
            method: other.method.or(self.method),
            max_len: other.max_len.or(self.max_len),
            out: other.out.or(self.out),
            format: other.format.or(self.format),
            verbose: other.verbose.or(self.verbose),
        }
    }

    pub fn alpha(&self) -> Result<Rational> {
        match &self.alpha {
            Some(s) => Ok(rational::parse(s)?),
            None => Ok(rational::ratio(1, 8)),
        }
    }

    pub fn m(&self) -> u64 {
        self.m.unwrap_or(32)
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn method(&self) -> Method {
        self.method.unwrap_or_default()
    }

    pub fn out(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn format(&self) -> AtomFormat {
        self.format.unwrap_or(AtomFormat::Csv)
    }

    pub fn verbose(&self) -> bool {
        self.verbose.unwrap_or(false)
    }

    pub fn build_config(&self) -> Result<BuildConfig> {
        let d = BuildConfig::default();
        let cfg = BuildConfig {
            base: self.base.unwrap_or(d.base),
            alpha: self.alpha()?,
            levels: match &self.levels {
                Some(l) => l.resolve()?,
                None => d.levels,
            },
            q: self.q.unwrap_or(d.q),
            tol: self.tol(),
            seed: self.seed(),
            method: self.method(),
            max_len: self.max_len.unwrap_or(DEFAULT_MAX_LEN),
        };
        if let Err(e) = cfg.validate() {
            bail!(e);
        }
        Ok(cfg)
    }

    /// The fully resolved build settings, for writing next to the outputs.
    pub fn resolved_build(&self) -> Result<RunConfig> {
        let b = self.build_config()?;
        Ok(RunConfig {
            m: None,
            alpha: Some(rational::format(&b.alpha)),
            base: Some(b.base),
            levels: Some(LevelSpec::List(b.levels)),
            q: Some(b.q),
            tol: Some(b.tol),
            seed: Some(b.seed),
            method: Some(b.method),
            max_len: Some(b.max_len),
            out: None,
            format: None,
            verbose: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_strings() {
        assert_eq!(parse_levels("1..2").unwrap(), vec![1, 2]);
        assert_eq!(parse_levels("1..=3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_levels("2, 4").unwrap(), vec![2, 4]);
        assert!(parse_levels("none").unwrap().is_empty());
        assert!(parse_levels("").unwrap().is_empty());
        assert!(parse_levels("a..b").is_err());
    }

    #[test]
    fn toml_round_trip() {
        let text = r#"
            alpha = "1/8"
            base = 32
            levels = "1..2"
            q = 8
            seed = 7
            method = "nullspace"
            format = "json"
        "#;
        let rc: RunConfig = toml::from_str(text).unwrap();
        let b = rc.build_config().unwrap();
        assert_eq!(b.levels, vec![1, 2]);
        assert_eq!(b.seed, 7);
        assert_eq!(b.method, Method::Nullspace);
        let back: RunConfig = toml::from_str(&toml::to_string(&rc).unwrap()).unwrap();
        assert_eq!(back, rc);
    }

    #[test]
    fn flags_override_file() {
        let file = RunConfig {
            q: Some(8),
            seed: Some(1),
            ..Default::default()
        };
        let flags = RunConfig {
            seed: Some(2),
            ..Default::default()
        };
        let rc = file.overlay(flags);
        assert_eq!((rc.q, rc.seed), (Some(8), Some(2)));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<RunConfig>("colour = 1").is_err());
        assert!(toml::from_str::<RunConfig>("alpha = 0.125").is_err());
    }
}
