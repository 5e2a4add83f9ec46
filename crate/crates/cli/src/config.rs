//! Run configuration: defaults, a flat TOML file with one optional section per suite, then flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use num_complex::Complex64;
use recip_core::analysis::test_function;
use recip_core::engine::policy::{DEFAULT_S, DEFAULT_TOLERANCE};
use recip_core::engine::{SpectralPoint, TruncationPolicy};
use recip_core::Error;
use serde::Deserialize;

/// Suites in dependency order: primitives first, composites last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum)]
pub enum Suite {
    All,
    KlooLemmas,
    Weil,
    Crt,
    Hecke,
    DivisorHecke,
    Gamma,
    Mellin,
    Lfe,
    Dgfe,
    PhiAdmissible,
    DirichletLemma,
    Sieve,
    NgS,
    Reciprocity,
}

impl Suite {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::from_str(name, false).ok()
    }

    pub fn every() -> Vec<Suite> {
        Suite::value_variants().iter().copied().filter(|&s| s != Suite::All).collect()
    }

    /// Suites whose checks run over the configured (p, q) pairs and spectral points.
    pub fn uses_pairs(self) -> bool {
        matches!(self, Suite::Sieve | Suite::NgS | Suite::Reciprocity)
    }
}

/// A configuration problem, naming the field at fault.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    fn new(field: &str, message: impl Into<String>) -> Self {
        Self { field: field.to_string(), message: message.into() }
    }

    fn engine(field: &str, e: Error) -> Self {
        Self::new(field, format!("{}: {e}", e.kind()))
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// "a+bi", "a-bi", "bi" or "a".
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot read '{text}' as a complex number a+bi");
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // the split is the last sign that does not belong to an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// Either a number or an "a+bi" string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawPoint {
    Real(f64),
    Text(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

/// Settings as written in a file section or on the command line; unset fields inherit.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSettings {
    p: Option<u64>,
    q: Option<u64>,
    pairs: Option<Vec<[u64; 2]>>,
    s: Option<OneOrMany<RawPoint>>,
    function: Option<String>,
    cmax: Option<u64>,
    mn_cap: Option<usize>,
    dual_mn_cap: Option<usize>,
    rel_tol: Option<f64>,
    sabotage: Option<bool>,
}

impl RawSettings {
    #[allow(clippy::too_many_arguments)]
    pub fn from_flags(
        p: Option<u64>,
        q: Option<u64>,
        s: Vec<String>,
        function: Option<String>,
        cmax: Option<u64>,
        mn_cap: Option<usize>,
        dual_mn_cap: Option<usize>,
        rel_tol: Option<f64>,
        sabotage: bool,
    ) -> Self {
        Self {
            p,
            q,
            pairs: None,
            s: if s.is_empty() { None } else { Some(OneOrMany::Many(s.into_iter().map(RawPoint::Text).collect())) },
            function,
            cmax,
            mn_cap,
            dual_mn_cap,
            rel_tol,
            sabotage: sabotage.then_some(true),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub pairs: Vec<(u64, u64)>,
    pub points: Vec<Complex64>,
    pub function: String,
    pub policy: TruncationPolicy,
    /// c_max as given explicitly; primitive sweeps otherwise use their own ranges.
    pub cmax: Option<u64>,
    /// `None` keeps each check's own tolerance; composite identities then use the global default.
    pub rel_tol: Option<f64>,
    pub sabotage: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            pairs: vec![(2, 3)],
            points: vec![Complex64::new(DEFAULT_S, 0.0)],
            function: "gauss13".into(),
            policy: TruncationPolicy::default(),
            cmax: None,
            rel_tol: None,
            sabotage: false,
        }
    }
}

impl Settings {
    pub fn composite_tolerance(&self) -> f64 {
        self.rel_tol.unwrap_or(DEFAULT_TOLERANCE)
    }

    fn apply(&mut self, raw: &RawSettings) -> Result<(), ConfigError> {
        if let Some(pairs) = &raw.pairs {
            self.pairs = pairs.iter().map(|&[p, q]| (p, q)).collect();
        }
        match (raw.p, raw.q) {
            (Some(p), Some(q)) => self.pairs = vec![(p, q)],
            (Some(_), None) => return Err(ConfigError::new("q", "`p` was given without `q`")),
            (None, Some(_)) => return Err(ConfigError::new("p", "`q` was given without `p`")),
            (None, None) => {}
        }
        if let Some(s) = &raw.s {
            self.points = s
                .clone()
                .into_vec()
                .into_iter()
                .map(|v| match v {
                    RawPoint::Real(x) => Ok(Complex64::new(x, 0.0)),
                    RawPoint::Text(t) => parse_complex(&t),
                })
                .collect::<Result<_, _>>()
                .map_err(|m| ConfigError::new("s", m))?;
        }
        if let Some(f) = &raw.function {
            self.function = f.clone();
        }
        if let Some(c) = raw.cmax {
            self.policy.c_max = c;
            self.cmax = Some(c);
        }
        if let Some(c) = raw.mn_cap {
            self.policy.mn_cap = c;
        }
        if let Some(c) = raw.dual_mn_cap {
            self.policy.dual_mn_cap = c;
        }
        if let Some(t) = raw.rel_tol {
            self.rel_tol = Some(t);
        }
        if let Some(b) = raw.sabotage {
            self.sabotage = b;
        }
        Ok(())
    }

    fn validate(&self, suite: Suite) -> Result<(), ConfigError> {
        test_function(&self.function).map_err(|e| ConfigError::engine("function", e))?;
        if self.policy.c_max == 0 {
            return Err(ConfigError::new("cmax", "must be positive"));
        }
        if self.policy.mn_cap == 0 || self.policy.dual_mn_cap == 0 {
            return Err(ConfigError::new("mn_cap", "must be positive"));
        }
        if let Some(t) = self.rel_tol {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(ConfigError::new("rel_tol", "must be a nonnegative number"));
            }
        }
        if !suite.uses_pairs() {
            return Ok(());
        }
        if self.pairs.is_empty() {
            return Err(ConfigError::new("pairs", "no (p, q) pairs given"));
        }
        for &(p, q) in &self.pairs {
            recip_core::engine::sums::check_pair(p, q).map_err(|e| ConfigError::engine(if p == q || !recip_core::arith::is_prime(q) { "q" } else { "p" }, e))?;
        }
        if self.points.is_empty() {
            return Err(ConfigError::new("s", "no spectral points given"));
        }
        for &s in &self.points {
            SpectralPoint::new(s).map_err(|e| ConfigError::engine("s", e))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub suites: Vec<Suite>,
    base: Settings,
    sections: BTreeMap<Suite, Settings>,
    pub json: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn settings(&self, suite: Suite) -> &Settings {
        self.sections.get(&suite).unwrap_or(&self.base)
    }
}

/// Keys a config file may carry outside any section.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTop {
    suites: Option<Vec<String>>,
    json: Option<PathBuf>,
    threads: Option<usize>,
}

const TOP_KEYS: [&str; 3] = ["suites", "json", "threads"];

struct RawFile {
    top: RawTop,
    base: RawSettings,
    sections: Vec<(Suite, RawSettings)>,
}

fn read_file(path: &Path) -> Result<RawFile, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::new("config", format!("{}: {e}", path.display())))?;
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::new("config", e.message().to_string()))?;
    let (mut top, mut base, mut sections) = (toml::Table::new(), toml::Table::new(), Vec::new());
    for (key, value) in table {
        if TOP_KEYS.contains(&key.as_str()) {
            top.insert(key, value);
        } else if let toml::Value::Table(t) = value {
            let suite = Suite::parse(&key).ok_or_else(|| ConfigError::new(&key, "section does not name a suite"))?;
            let raw: RawSettings = toml::Value::Table(t).try_into().map_err(|e: toml::de::Error| ConfigError::new(&key, e.message().to_string()))?;
            sections.push((suite, raw));
        } else {
            base.insert(key, value);
        }
    }
    let top: RawTop = toml::Value::Table(top).try_into().map_err(|e: toml::de::Error| ConfigError::new("config", e.message().to_string()))?;
    let base: RawSettings = toml::Value::Table(base).try_into().map_err(|e: toml::de::Error| ConfigError::new("config", e.message().to_string()))?;
    Ok(RawFile { top, base, sections })
}

/// Merges defaults, the optional file and the command-line settings, then validates every scheduled suite.
pub fn parse_config(suite: Option<Suite>, file: Option<&Path>, flags: &RawSettings, json: Option<PathBuf>) -> Result<RunConfig, ConfigError> {
    let raw = match file {
        Some(path) => Some(read_file(path)?),
        None => None,
    };
    let mut requested: Vec<Suite> = match (suite, raw.as_ref().and_then(|r| r.top.suites.clone())) {
        (Some(s), _) => vec![s],
        (None, Some(names)) => names
            .iter()
            .map(|n| Suite::parse(n).ok_or_else(|| ConfigError::new("suites", format!("unknown suite '{n}'"))))
            .collect::<Result<_, _>>()?,
        (None, None) => return Err(ConfigError::new("suites", "no suite given on the command line or in the config file")),
    };
    if requested.contains(&Suite::All) {
        requested = Suite::every();
    }
    requested.sort();
    requested.dedup();

    let mut base = Settings::default();
    if let Some(r) = &raw {
        base.apply(&r.base)?;
    }
    let mut sections = BTreeMap::new();
    if let Some(r) = &raw {
        for (suite, section) in &r.sections {
            let mut s = base.clone();
            s.apply(section)?;
            s.apply(flags)?;
            sections.insert(*suite, s);
        }
    }
    base.apply(flags)?;
    let config = RunConfig {
        suites: requested,
        base,
        sections,
        json: json.or_else(|| raw.as_ref().and_then(|r| r.top.json.clone())),
        threads: raw.as_ref().and_then(|r| r.top.threads),
    };
    for &s in &config.suites {
        config.settings(s).validate(s)?;
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use recip_core::engine::policy::{DEFAULT_C_MAX, DEFAULT_DUAL_MN_CAP, DEFAULT_MN_CAP};

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1.5").unwrap(), Complex64::new(1.5, 0.0));
        assert_eq!(parse_complex("1.4+0.3i").unwrap(), Complex64::new(1.4, 0.3));
        assert_eq!(parse_complex("1.4-0.3i").unwrap(), Complex64::new(1.4, -0.3));
        assert_eq!(parse_complex("2e-1+1e-2i").unwrap(), Complex64::new(0.2, 0.01));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("3i").unwrap(), Complex64::new(0.0, 3.0));
        assert!(parse_complex("1.4+x").is_err());
    }

    #[test]
    fn minimal_flags_fill_defaults() {
        let flags = RawSettings::from_flags(Some(2), Some(3), vec![], None, None, None, None, None, false);
        let c = parse_config(Some(Suite::Reciprocity), None, &flags, None).unwrap();
        let s = c.settings(Suite::Reciprocity);
        assert_eq!(s.pairs, vec![(2, 3)]);
        assert_eq!(s.points, vec![Complex64::new(1.5, 0.0)]);
        assert_eq!(s.function, "gauss13");
        assert_eq!(s.policy.c_max, DEFAULT_C_MAX);
        assert_eq!(s.policy.mn_cap, DEFAULT_MN_CAP);
        assert_eq!(s.policy.dual_mn_cap, DEFAULT_DUAL_MN_CAP);
    }

    #[test]
    fn equal_primes_are_rejected() {
        let flags = RawSettings::from_flags(Some(2), Some(2), vec![], None, None, None, None, None, false);
        let e = parse_config(Some(Suite::Reciprocity), None, &flags, None).unwrap_err();
        assert_eq!(e.field, "q");
        assert!(e.message.starts_with("EqualPrimes"), "{e}");
    }

    #[test]
    fn half_plane_is_enforced_for_composite_suites_only() {
        let flags = RawSettings::from_flags(None, None, vec!["1.2".into()], None, None, None, None, None, false);
        assert_eq!(parse_config(Some(Suite::Sieve), None, &flags, None).unwrap_err().field, "s");
        assert!(parse_config(Some(Suite::Hecke), None, &flags, None).is_ok());
    }

    #[test]
    fn file_with_sections() {
        let dir = std::env::temp_dir().join(format!("recip-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(
            &path,
            "suites = [\"kloo-lemmas\", \"hecke\", \"reciprocity\"]\ncmax = 300\n\n[reciprocity]\npairs = [[3, 2], [5, 7]]\ns = [1.5, \"1.4+0.3i\"]\n",
        )
        .unwrap();
        let c = parse_config(None, Some(&path), &RawSettings::default(), None).unwrap();
        assert_eq!(c.suites, vec![Suite::KlooLemmas, Suite::Hecke, Suite::Reciprocity]);
        let r = c.settings(Suite::Reciprocity);
        assert_eq!(r.pairs, vec![(3, 2), (5, 7)]);
        assert_eq!(r.points[1], Complex64::new(1.4, 0.3));
        assert_eq!(r.policy.c_max, 300);
        assert_eq!(c.settings(Suite::Hecke).pairs, vec![(2, 3)]);

        std::fs::write(&path, "suites = [\"hecke\"]\ncmaxx = 3\n").unwrap();
        let e = parse_config(None, Some(&path), &RawSettings::default(), None).unwrap_err();
        assert!(e.message.contains("cmaxx"), "{e}");
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
