use std::path::{Path, PathBuf};

use pseudoboson::models::ModelSpec;
use pseudoboson::scalar::{real, Real, PI};
use pseudoboson::Tolerances;
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("unknown check `{0}` (known: {known})", known = CHECK_NAMES.join(", "))]
    UnknownCheck(String),
    #[error("unknown model kind `{0}` (known: {known})", known = MODEL_KINDS.join(", "))]
    UnknownModel(String),
    #[error("{0}")]
    Invalid(String),
}

pub const CHECK_NAMES: &[&str] = &[
    "commutator",
    "duality",
    "ladder",
    "biorthogonality",
    "quadrature",
    "eigenvalues",
    "quasi_basis",
    "theta",
    "riesz_diagnostic",
    "pathology",
    "nlpb",
];

pub const MODEL_KINDS: &[&str] = &["extended", "swanson", "landau", "standard_ho", "pathology", "nlpb"];

/// A real number written either as a literal or as a multiple of π,
/// e.g. `0.5`, `"pi/6"`, `"-pi/5"`, `"3pi/16"`.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Num(f64),
    Text(String),
}

impl Param {
    pub fn value(&self) -> Result<Real, ConfigError> {
        match self {
            Self::Num(v) => Ok(real(*v)),
            Self::Text(s) => parse_real(s),
        }
    }
}

pub fn parse_real(text: &str) -> Result<Real, ConfigError> {
    let bad = || ConfigError::Param(format!("cannot parse `{text}` as a number or multiple of pi"));
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('π', "pi");
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(&s)),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d.parse::<f64>().map_err(|_| bad())?)),
        None => (body, None),
    };
    let mut v = if let Some(coef) = num.strip_suffix("pi") {
        let coef = coef.strip_suffix('*').unwrap_or(coef);
        if coef.is_empty() {
            PI
        } else {
            PI * real(coef.parse::<f64>().map_err(|_| bad())?)
        }
    } else {
        real(num.parse::<f64>().map_err(|_| bad())?)
    };
    if let Some(d) = den {
        if d == 0.0 {
            return Err(bad());
        }
        v /= real(d);
    }
    Ok(if neg { -v } else { v })
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            Self::One(v) => vec![v.clone()],
            Self::Many(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Identity,
    Random,
}

/// One `[[models]]` table; scalar parameters may be given as grids.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelEntry {
    Extended { beta: OneOrMany<Param> },
    Swanson { theta: OneOrMany<Param> },
    Landau { k: OneOrMany<[Param; 2]> },
    StandardHo,
    Pathology {
        #[serde(default = "default_pathology_n")]
        n: usize,
    },
    Nlpb {
        epsilon: Vec<f64>,
        #[serde(default = "default_metric")]
        metric: Metric,
        #[serde(default)]
        metric_seed: u64,
    },
}

fn default_pathology_n() -> usize {
    8
}

fn default_metric() -> Metric {
    Metric::Identity
}

impl ModelEntry {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Extended { .. } => "extended",
            Self::Swanson { .. } => "swanson",
            Self::Landau { .. } => "landau",
            Self::StandardHo => "standard_ho",
            Self::Pathology { .. } => "pathology",
            Self::Nlpb { .. } => "nlpb",
        }
    }
}

/// A fully resolved suite member.
#[derive(Clone, Debug, PartialEq)]
pub enum Structure {
    Pb(ModelSpec),
    Pathology { n: usize },
    Nlpb { epsilon: Vec<f64>, metric: Metric, metric_seed: u64 },
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Pb(s) => s.kind(),
            Self::Pathology { .. } => "pathology",
            Self::Nlpb { .. } => "nlpb",
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Pb(s) => s.label(),
            Self::Pathology { n } => format!("pathology(n={n})"),
            Self::Nlpb { epsilon, metric, metric_seed } => match metric {
                Metric::Identity => format!("nlpb(levels={},metric=identity)", epsilon.len()),
                Metric::Random => format!("nlpb(levels={},metric=random,seed={metric_seed})", epsilon.len()),
            },
        }
    }

    /// Checks that make sense for this structure.
    pub fn applicable(&self, check: &str) -> bool {
        match self {
            Self::Pb(_) => !matches!(check, "pathology" | "nlpb"),
            Self::Pathology { .. } => check == "pathology",
            Self::Nlpb { .. } => check == "nlpb",
        }
    }
}

/// Truncation orders and sample sizes; `_2d` fields apply to the Landau family.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    pub samples: usize,
    pub ladder: usize,
    pub ladder_2d: usize,
    pub gram: usize,
    pub gram_2d: usize,
    pub quadrature: usize,
    pub quadrature_2d: usize,
    pub quadrature_order: usize,
    pub quadrature_order_2d: usize,
    pub eigen: usize,
    pub eigen_2d: usize,
    pub theta: usize,
    pub theta_2d: usize,
    pub quasi_basis: usize,
    pub quasi_basis_2d: usize,
    pub riesz: Vec<usize>,
    pub riesz_2d: Vec<usize>,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            samples: 20,
            ladder: 25,
            ladder_2d: 10,
            gram: 20,
            gram_2d: 10,
            quadrature: 15,
            quadrature_2d: 6,
            quadrature_order: 200,
            quadrature_order_2d: 48,
            eigen: 25,
            eigen_2d: 10,
            theta: 20,
            theta_2d: 10,
            quasi_basis: 40,
            quasi_basis_2d: 40,
            riesz: vec![5, 10, 15, 20],
            riesz_2d: vec![2, 4, 6],
        }
    }
}

impl Caps {
    /// Clamp every truncation order to `nmax`.
    pub fn clamp(&mut self, nmax: usize) {
        for v in [
            &mut self.ladder,
            &mut self.ladder_2d,
            &mut self.gram,
            &mut self.gram_2d,
            &mut self.quadrature,
            &mut self.quadrature_2d,
            &mut self.eigen,
            &mut self.eigen_2d,
            &mut self.theta,
            &mut self.theta_2d,
            &mut self.quasi_basis,
            &mut self.quasi_basis_2d,
        ] {
            *v = (*v).min(nmax);
        }
        for list in [&mut self.riesz, &mut self.riesz_2d] {
            let truncated = list.iter().any(|&n| n >= nmax);
            list.retain(|&n| n < nmax);
            if truncated {
                list.push(nmax);
            }
        }
    }
}

/// Per-family overrides of the default tolerances.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub exact: Option<f64>,
    pub action: Option<f64>,
    pub ladder: Option<f64>,
    pub eigen: Option<f64>,
    pub gram: Option<f64>,
    pub quadrature: Option<f64>,
    pub quasi_basis: Option<f64>,
    pub ordering: Option<f64>,
    pub theta: Option<f64>,
    pub positivity: Option<f64>,
    pub nlpb: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, base: Tolerances) -> Tolerances {
        Tolerances {
            exact: self.exact.unwrap_or(base.exact),
            action: self.action.unwrap_or(base.action),
            ladder: self.ladder.unwrap_or(base.ladder),
            eigen: self.eigen.unwrap_or(base.eigen),
            gram: self.gram.unwrap_or(base.gram),
            quadrature: self.quadrature.unwrap_or(base.quadrature),
            quasi_basis: self.quasi_basis.unwrap_or(base.quasi_basis),
            ordering: self.ordering.unwrap_or(base.ordering),
            theta: self.theta.unwrap_or(base.theta),
            positivity: self.positivity.unwrap_or(base.positivity),
            nlpb: self.nlpb.unwrap_or(base.nlpb),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    /// One JSON record per line.
    #[default]
    Jsonl,
    /// A single pretty-printed JSON array.
    Json,
}

/// The declarative suite description read from TOML.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    pub out: PathBuf,
    /// `None` runs every check.
    pub checks: Option<Vec<String>>,
    pub tolerance_scale: f64,
    pub tolerances: ToleranceOverrides,
    pub caps: Caps,
    pub format: ReportFormat,
    pub csv: bool,
    /// Worker threads; `None` uses the available parallelism, at most 8.
    pub threads: Option<usize>,
    pub models: Vec<ModelEntry>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let p = |s: &str| Param::Text(s.into());
        let n = Param::Num;
        let levels = 8;
        Self {
            seed: 0,
            out: PathBuf::from("pbcheck-out"),
            checks: None,
            tolerance_scale: 1.0,
            tolerances: ToleranceOverrides::default(),
            caps: Caps::default(),
            format: ReportFormat::Jsonl,
            csv: true,
            threads: None,
            models: vec![
                ModelEntry::Extended { beta: OneOrMany::Many(vec![n(0.5), n(1.0), n(2.0)]) },
                ModelEntry::Swanson { theta: OneOrMany::Many(vec![p("pi/8"), p("pi/6"), p("-pi/5")]) },
                ModelEntry::Landau {
                    k: OneOrMany::Many(vec![[n(0.0), n(0.0)], [n(0.1), n(-0.2)], [n(0.4), n(0.4)]]),
                },
                ModelEntry::StandardHo,
                ModelEntry::Pathology { n: default_pathology_n() },
                ModelEntry::Nlpb {
                    epsilon: (0..levels).map(|k| k as f64).collect(),
                    metric: Metric::Identity,
                    metric_seed: 0,
                },
                ModelEntry::Nlpb {
                    epsilon: vec![0.0, 1.0, 2.5, 4.1, 7.0, 9.5, 13.0, 18.0],
                    metric: Metric::Random,
                    metric_seed: 1,
                },
            ],
        }
    }
}

impl SuiteConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::from_toml(&text)
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances.apply(Tolerances::default()).scaled(self.tolerance_scale)
    }

    /// Requested checks in canonical order.
    pub fn check_list(&self) -> Result<Vec<&'static str>, ConfigError> {
        match &self.checks {
            None => Ok(CHECK_NAMES.to_vec()),
            Some(names) => {
                for n in names {
                    if !CHECK_NAMES.contains(&n.as_str()) {
                        return Err(ConfigError::UnknownCheck(n.clone()));
                    }
                }
                Ok(CHECK_NAMES.iter().copied().filter(|c| names.iter().any(|n| n == c)).collect())
            }
        }
    }

    /// Keep only the listed model kinds.
    pub fn restrict_models(&mut self, kinds: &[String]) -> Result<(), ConfigError> {
        for k in kinds {
            if !MODEL_KINDS.contains(&k.as_str()) {
                return Err(ConfigError::UnknownModel(k.clone()));
            }
        }
        self.models.retain(|m| kinds.iter().any(|k| k == m.kind()));
        Ok(())
    }

    /// Expand grids and validate every parameter.
    pub fn structures(&self) -> Result<Vec<Structure>, ConfigError> {
        let mut out = Vec::new();
        let invalid = |e: pseudoboson::Error| ConfigError::Invalid(e.to_string());
        for entry in &self.models {
            match entry {
                ModelEntry::Extended { beta } => {
                    for b in beta.to_vec() {
                        out.push(Structure::Pb(ModelSpec::Extended { beta: b.value()? }));
                    }
                }
                ModelEntry::Swanson { theta } => {
                    for t in theta.to_vec() {
                        out.push(Structure::Pb(ModelSpec::Swanson { theta: t.value()? }));
                    }
                }
                ModelEntry::Landau { k } => {
                    for [k1, k2] in k.to_vec() {
                        out.push(Structure::Pb(ModelSpec::Landau { k1: k1.value()?, k2: k2.value()? }));
                    }
                }
                ModelEntry::StandardHo => out.push(Structure::Pb(ModelSpec::StandardHo)),
                ModelEntry::Pathology { n } => {
                    if *n < 3 {
                        return Err(ConfigError::Invalid(format!("pathology n = {n} must be at least 3")));
                    }
                    out.push(Structure::Pathology { n: *n });
                }
                ModelEntry::Nlpb { epsilon, metric, metric_seed } => {
                    let s = Structure::Nlpb { epsilon: epsilon.clone(), metric: metric.clone(), metric_seed: *metric_seed };
                    crate::suite::build_nlpb(&s).map_err(invalid)?;
                    out.push(s);
                }
            }
        }
        for s in &out {
            if let Structure::Pb(spec) = s {
                spec.validate().map_err(invalid)?;
            }
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.check_list()?;
        if !(self.tolerance_scale > 0.0 && self.tolerance_scale.is_finite()) {
            return Err(ConfigError::Invalid(format!(
                "tolerance_scale = {} must be positive and finite",
                self.tolerance_scale
            )));
        }
        if self.caps.samples == 0 {
            return Err(ConfigError::Invalid("caps.samples must be at least 1".into()));
        }
        if self.caps.quadrature_order == 0 || self.caps.quadrature_order_2d == 0 {
            return Err(ConfigError::Invalid("quadrature orders must be at least 1".into()));
        }
        if self.threads == Some(0) {
            return Err(ConfigError::Invalid("threads must be at least 1".into()));
        }
        self.structures()?;
        Ok(())
    }
}
