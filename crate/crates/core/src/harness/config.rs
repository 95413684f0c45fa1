//! Flat key-value experiment configuration.
//!
//! The format is section-free text, one `key = value` per line, `#` starts a
//! comment. Recognized keys:
//!
//! ```text
//! kind              consistency | weak-vs-strong        (default consistency)
//! family            cosine | extended-cosine:LAMBDA,MU | uniform-scale
//! theta_star        nonnegative real
//! prior             truncated-uniform:A,B | exponential:RATE |
//!                   pareto-tail:ALPHA,SCALE | log-poly-tail:BETA,SCALE |
//!                   phi-power:BETA | phi-exp:BETA
//! n_schedule        comma-separated, strictly increasing sample sizes
//! replicates        positive integer
//! epsilon           positive real (parameter-ball radius)
//! master_seed       64-bit unsigned integer
//! theta_max         positive real (posterior domain cap)
//! abs_tol, rel_tol, max_panels, oscillation_guard      quadrature settings
//! output_path       where the CSV artifact goes
//! ```

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::inference::{PhiKind, PriorSpec};
use crate::model::{FamilySpec, Theta};
use crate::quad::QuadratureConfig;

/// Which runner a config drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Consistency,
    WeakVsStrong,
}

/// Fully resolved configuration of a Monte Carlo experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub family: FamilySpec,
    pub theta_star: Theta,
    pub prior: PriorSpec,
    pub n_schedule: Vec<usize>,
    pub replicates: usize,
    pub epsilon: f64,
    pub master_seed: u64,
    pub theta_max: f64,
    pub quadrature: QuadratureConfig,
    pub output_path: Option<String>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        self.quadrature.validate()?;
        if self.n_schedule.is_empty() {
            return Err(Error::Config("n_schedule must be nonempty".into()));
        }
        if self.n_schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("n_schedule must be strictly increasing".into()));
        }
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be >= 1".into()));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::Config("epsilon must be positive".into()));
        }
        if self.theta_max.is_nan() || self.theta_max <= 0.0 {
            return Err(Error::Config("theta_max must be positive".into()));
        }
        Ok(())
    }
}

pub fn parse_family(s: &str) -> Result<FamilySpec> {
    let (name, args) = split_spec(s);
    match name {
        "cosine" => Ok(FamilySpec::Cosine),
        "uniform-scale" => Ok(FamilySpec::UniformScale),
        "extended-cosine" => {
            let v = parse_f64_list(args.ok_or_else(|| {
                Error::Config("extended-cosine needs lambda,mu (e.g. extended-cosine:1.5,0.4)".into())
            })?)?;
            if v.len() != 2 {
                return Err(Error::Config("extended-cosine takes exactly lambda,mu".into()));
            }
            FamilySpec::extended_cosine(v[0], v[1]).map_err(|e| Error::Config(e.to_string()))
        }
        other => Err(Error::Config(format!("unknown family '{other}'"))),
    }
}

pub fn parse_prior(s: &str) -> Result<PriorSpec> {
    let (name, args) = split_spec(s);
    let args = |n: usize| -> Result<Vec<f64>> {
        let v = parse_f64_list(
            args.ok_or_else(|| Error::Config(format!("prior '{name}' needs parameters")))?,
        )?;
        if v.len() != n {
            return Err(Error::Config(format!(
                "prior '{name}' takes {n} parameter(s), got {}",
                v.len()
            )));
        }
        Ok(v)
    };
    match name {
        "truncated-uniform" => {
            let v = args(2)?;
            Ok(PriorSpec::TruncatedUniform { a: v[0], b: v[1] })
        }
        "exponential" => {
            let v = args(1)?;
            Ok(PriorSpec::Exponential { rate: v[0] })
        }
        "pareto-tail" => {
            let v = args(2)?;
            Ok(PriorSpec::ParetoTail {
                alpha: v[0],
                scale: v[1],
            })
        }
        "log-poly-tail" => {
            let v = args(2)?;
            Ok(PriorSpec::LogPolyTail {
                beta: v[0],
                scale: v[1],
            })
        }
        "phi-power" => {
            let v = args(1)?;
            Ok(PriorSpec::PhiTail {
                phi: PhiKind::Power { beta: v[0] },
            })
        }
        "phi-exp" => {
            let v = args(1)?;
            Ok(PriorSpec::PhiTail {
                phi: PhiKind::ExpLinear { beta: v[0] },
            })
        }
        other => Err(Error::Config(format!("unknown prior '{other}'"))),
    }
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("expected a real number, got '{p}'")))
        })
        .collect()
}

pub fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("expected a count, got '{p}'")))
        })
        .collect()
}

fn split_spec(s: &str) -> (&str, Option<&str>) {
    match s.trim().split_once(':') {
        Some((name, args)) => (name.trim(), Some(args.trim())),
        None => (s.trim(), None),
    }
}

/// Parse the flat key-value format into a configuration.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut map: BTreeMap<String, String> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected 'key = value'", lineno + 1))
        })?;
        let key = key.trim().to_string();
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(Error::Config(format!("duplicate key '{key}'")));
        }
    }

    let get = |k: &str| -> Option<&String> { map.get(k) };
    let require = |k: &str| -> Result<&String> {
        get(k).ok_or_else(|| Error::Config(format!("missing required key '{k}'")))
    };
    let f64_of = |k: &str, v: &str| -> Result<f64> {
        v.parse::<f64>()
            .map_err(|_| Error::Config(format!("key '{k}': expected a real, got '{v}'")))
    };

    let kind = match get("kind").map(|s| s.as_str()) {
        None | Some("consistency") => ExperimentKind::Consistency,
        Some("weak-vs-strong") => ExperimentKind::WeakVsStrong,
        Some(other) => return Err(Error::Config(format!("unknown kind '{other}'"))),
    };

    let known_keys = [
        "kind",
        "family",
        "theta_star",
        "prior",
        "n_schedule",
        "replicates",
        "epsilon",
        "master_seed",
        "theta_max",
        "abs_tol",
        "rel_tol",
        "max_panels",
        "oscillation_guard",
        "output_path",
    ];
    for key in map.keys() {
        if !known_keys.contains(&key.as_str()) {
            return Err(Error::Config(format!("unknown key '{key}'")));
        }
    }

    let mut quadrature = QuadratureConfig::default();
    if let Some(v) = get("abs_tol") {
        quadrature.abs_tol = f64_of("abs_tol", v)?;
    }
    if let Some(v) = get("rel_tol") {
        quadrature.rel_tol = f64_of("rel_tol", v)?;
    }
    if let Some(v) = get("max_panels") {
        quadrature.max_panels = v
            .parse()
            .map_err(|_| Error::Config(format!("max_panels: expected a count, got '{v}'")))?;
    }
    if let Some(v) = get("oscillation_guard") {
        quadrature.oscillation_guard = v
            .parse()
            .map_err(|_| Error::Config(format!("oscillation_guard: expected a count, got '{v}'")))?;
    }

    let cfg = ExperimentConfig {
        kind,
        family: parse_family(require("family")?)?,
        theta_star: Theta::new(f64_of("theta_star", require("theta_star")?)?)
            .map_err(|e| Error::Config(e.to_string()))?,
        prior: parse_prior(require("prior")?)?,
        n_schedule: parse_usize_list(require("n_schedule")?)?,
        replicates: require("replicates")?
            .parse()
            .map_err(|_| Error::Config("replicates: expected a count".into()))?,
        epsilon: f64_of("epsilon", require("epsilon")?)?,
        master_seed: require("master_seed")?
            .parse()
            .map_err(|_| Error::Config("master_seed: expected a 64-bit unsigned integer".into()))?,
        theta_max: f64_of("theta_max", require("theta_max")?)?,
        quadrature,
        output_path: get("output_path").cloned(),
    };
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# consistency sweep at theta_star = 1
family = cosine
theta_star = 1.0
prior = exponential:1.0
n_schedule = 10,100,1000
replicates = 20
epsilon = 0.25
master_seed = 42
theta_max = 60
";

    #[test]
    fn parses_a_full_config() {
        let cfg = parse_config(SAMPLE).unwrap();
        assert_eq!(cfg.kind, ExperimentKind::Consistency);
        assert_eq!(cfg.n_schedule, vec![10, 100, 1000]);
        assert_eq!(cfg.master_seed, 42);
        assert!(matches!(cfg.prior, PriorSpec::Exponential { .. }));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(parse_config("family = cosine").is_err()); // missing keys
        assert!(parse_config(&SAMPLE.replace("10,100,1000", "100,10")).is_err());
        assert!(parse_config(&format!("{SAMPLE}\nbogus_key = 1")).is_err());
        assert!(parse_config(&SAMPLE.replace("exponential:1.0", "cauchy:1")).is_err());
        assert!(parse_config(&format!("{SAMPLE}family = cosine\n")).is_err()); // duplicate
    }

    #[test]
    fn prior_and_family_specs_parse() {
        assert!(matches!(
            parse_prior("pareto-tail:0.5,1").unwrap(),
            PriorSpec::ParetoTail { .. }
        ));
        assert!(matches!(
            parse_prior("phi-power:1").unwrap(),
            PriorSpec::PhiTail { .. }
        ));
        assert!(matches!(
            parse_family("extended-cosine:1.5,0.4").unwrap(),
            FamilySpec::ExtendedCosine { .. }
        ));
        assert!(parse_family("weibull").is_err());
    }
}
