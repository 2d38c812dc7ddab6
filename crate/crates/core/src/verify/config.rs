use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Chart, MetricChart};
use crate::spin2_fields::{GeneratorFamily, MAX_DEGREE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Geometry,
    Flat,
    ScalarChain,
    Rank2Chain,
    NonminimalChain,
    Uniqueness,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::Geometry,
        Check::Flat,
        Check::ScalarChain,
        Check::Rank2Chain,
        Check::NonminimalChain,
        Check::Uniqueness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Geometry => "geometry",
            Check::Flat => "flat",
            Check::ScalarChain => "scalar_chain",
            Check::Rank2Chain => "rank2_chain",
            Check::NonminimalChain => "nonminimal_chain",
            Check::Uniqueness => "uniqueness",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| invalid("checks", format!("unknown check '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    #[serde(default = "default_family")]
    pub family: GeneratorFamily,
    #[serde(default = "default_degree")]
    pub degree: u32,
    /// Number of independently seeded generators.
    #[serde(default = "default_count")]
    pub count: usize,
}

fn default_family() -> GeneratorFamily {
    GeneratorFamily::Polynomial
}
fn default_degree() -> u32 {
    MAX_DEGREE
}
fn default_count() -> usize {
    1
}
fn default_couplings() -> Vec<f64> {
    vec![0.0, 0.25, 0.5, 1.0]
}
fn default_tolerance() -> f64 {
    1e-9
}
fn default_points() -> usize {
    20
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        GeneratorSpec {
            family: default_family(),
            degree: default_degree(),
            count: default_count(),
        }
    }
}

/// One verification scenario. See the README for the JSON schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub metric: MetricSpec,
    /// Sampling box per coordinate; defaults to the chart's own region.
    #[serde(default)]
    pub region: Option<[[f64; 2]; 4]>,
    #[serde(default = "default_points")]
    pub n_points: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub generator: GeneratorSpec,
    #[serde(default = "default_couplings")]
    pub couplings: Vec<f64>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    pub checks: Vec<Check>,
}

pub(crate) fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name: field.into(),
        reason: reason.into(),
    }
}

impl ScenarioConfig {
    pub fn new(metric: &str, checks: Vec<Check>) -> Self {
        ScenarioConfig {
            metric: MetricSpec {
                name: metric.into(),
                params: BTreeMap::new(),
            },
            region: None,
            n_points: default_points(),
            seed: 0,
            generator: GeneratorSpec::default(),
            couplings: default_couplings(),
            tolerance: default_tolerance(),
            checks,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid("config", e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| invalid("config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn chart(&self) -> Result<MetricChart> {
        MetricChart::from_name(&self.metric.name, &self.metric.params)
    }

    /// Checks every field and returns the chart and the sampling region.
    pub fn validate(&self) -> Result<(MetricChart, [[f64; 2]; 4])> {
        let chart = self.chart()?;
        if self.n_points == 0 {
            return Err(invalid("n_points", "must be at least 1"));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(invalid("tolerance", "must be a positive finite number"));
        }
        if self.generator.degree > MAX_DEGREE {
            return Err(invalid("generator.degree", format!("must be at most {MAX_DEGREE}")));
        }
        if self.generator.count == 0 {
            return Err(invalid("generator.count", "must be at least 1"));
        }
        if self.couplings.is_empty() {
            return Err(invalid("couplings", "needs at least one value"));
        }
        if let Some(a) = self.couplings.iter().find(|a| !a.is_finite()) {
            return Err(invalid("couplings", format!("{a} is not finite")));
        }
        if self.checks.is_empty() {
            return Err(invalid("checks", "needs at least one check"));
        }
        for (i, c) in self.checks.iter().enumerate() {
            if self.checks[..i].contains(c) {
                return Err(invalid("checks", format!("'{c}' listed twice")));
            }
        }
        if self.checks.contains(&Check::Flat) && !chart.is_flat() {
            return Err(invalid("checks", "'flat' needs the minkowski metric"));
        }
        if self.checks.contains(&Check::Uniqueness) && !chart.is_ricci_flat() {
            return Err(invalid(
                "checks",
                "'uniqueness' needs a Ricci-flat metric (minkowski or schwarzschild)",
            ));
        }
        let region = self.region.unwrap_or_else(|| chart.default_region());
        validate_region(&chart, &region)?;
        Ok((chart, region))
    }
}

/// Every face of the box must lie inside the chart's valid region. The
/// catalog's guards are per-coordinate bounds, so probing each face at the
/// box centre is enough.
fn validate_region(chart: &MetricChart, region: &[[f64; 2]; 4]) -> Result<()> {
    let centre: [f64; 4] = std::array::from_fn(|m| 0.5 * (region[m][0] + region[m][1]));
    for (m, [lo, hi]) in region.iter().enumerate() {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(invalid(
                "region",
                format!("coordinate {m}: [{lo}, {hi}] is not an interval"),
            ));
        }
        for x in [*lo, *hi] {
            let mut p = centre;
            p[m] = x;
            chart
                .check_point(&p)
                .map_err(|e| invalid("region", format!("coordinate {m} reaches outside the chart: {e}")))?;
        }
    }
    Ok(())
}

/// Command-line overrides applied on top of a config file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigOverrides {
    pub metric: Option<String>,
    pub params: Vec<(String, f64)>,
    pub n_points: Option<usize>,
    pub seed: Option<u64>,
    pub couplings: Option<Vec<f64>>,
    pub tolerance: Option<f64>,
    pub checks: Option<Vec<Check>>,
}

impl ConfigOverrides {
    pub fn apply(&self, config: &mut ScenarioConfig) {
        if let Some(m) = &self.metric {
            if *m != config.metric.name {
                config.metric.params.clear();
            }
            config.metric.name = m.clone();
        }
        for (k, v) in &self.params {
            config.metric.params.insert(k.clone(), *v);
        }
        if let Some(n) = self.n_points {
            config.n_points = n;
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        if let Some(c) = &self.couplings {
            config.couplings = c.clone();
        }
        if let Some(t) = self.tolerance {
            config.tolerance = t;
        }
        if let Some(c) = &self.checks {
            config.checks = c.clone();
        }
    }
}

/// Parses `key=value` with a numeric value.
pub fn parse_param(s: &str) -> Result<(String, f64)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| invalid("param", format!("expected key=value, got '{s}'")))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| invalid("param", format!("'{v}' is not a number")))?;
    Ok((k.trim().to_string(), v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_in() {
        let c = ScenarioConfig::from_json(r#"{"metric": {"name": "frw"}, "checks": ["scalar_chain"]}"#).unwrap();
        assert_eq!(c.n_points, 20);
        assert_eq!(c.couplings, vec![0.0, 0.25, 0.5, 1.0]);
        assert_eq!(c.tolerance, 1e-9);
        assert_eq!(c.generator, GeneratorSpec::default());
        let (_, region) = c.validate().unwrap();
        assert_eq!(region, c.chart().unwrap().default_region());
    }

    #[test]
    fn unknown_fields_and_checks_are_rejected() {
        assert!(ScenarioConfig::from_json(r#"{"metric": {"name": "frw"}, "checks": [], "extra": 1}"#).is_err());
        assert!(ScenarioConfig::from_json(r#"{"metric": {"name": "frw"}, "checks": ["bogus"]}"#).is_err());
        assert!("bogus".parse::<Check>().is_err());
        assert_eq!("rank2_chain".parse::<Check>().unwrap(), Check::Rank2Chain);
    }

    #[test]
    fn validation_names_the_field() {
        let mut c = ScenarioConfig::new("schwarzschild", vec![Check::Geometry]);
        c.n_points = 0;
        assert!(matches!(c.validate(), Err(Error::InvalidParameter { name, .. }) if name == "n_points"));
        let mut c = ScenarioConfig::new("schwarzschild", vec![Check::Geometry]);
        c.region = Some([[0.0, 1.0], [2.2, 5.0], [1.0, 2.0], [0.0, 1.0]]);
        assert!(matches!(c.validate(), Err(Error::InvalidParameter { name, .. }) if name == "region"));
        let c = ScenarioConfig::new("frw", vec![Check::Uniqueness]);
        assert!(matches!(c.validate(), Err(Error::InvalidParameter { name, .. }) if name == "checks"));
        let c = ScenarioConfig::new("de_sitter", vec![Check::Flat]);
        assert!(c.validate().is_err());
        let c = ScenarioConfig::new("anti_de_sitter", vec![Check::Flat]);
        assert!(matches!(c.validate(), Err(Error::UnknownMetric(_))));
    }

    #[test]
    fn overrides_apply() {
        let mut c = ScenarioConfig::new("frw", vec![Check::Geometry]);
        ConfigOverrides {
            metric: Some("schwarzschild".into()),
            params: vec![parse_param("M=2").unwrap()],
            n_points: Some(3),
            seed: Some(9),
            couplings: Some(vec![0.5]),
            tolerance: Some(1e-8),
            checks: Some(vec![Check::Uniqueness]),
        }
        .apply(&mut c);
        assert_eq!(c.metric.name, "schwarzschild");
        assert_eq!(c.metric.params["M"], 2.0);
        assert_eq!((c.n_points, c.seed, c.tolerance), (3, 9, 1e-8));
        assert!(c.validate().is_ok());
        assert!(parse_param("M").is_err());
        assert!(parse_param("M=x").is_err());
    }
}
