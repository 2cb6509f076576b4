use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::models::{ModelRecord, ModelSpec};

/// What a residual row is indexed by.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Index {
    /// A single statement with no index.
    Whole,
    /// Quantum number of a one-dimensional family.
    N(usize),
    /// `(n, l)` of a two-dimensional family.
    Nl(usize, usize),
    /// Ladder mode (coordinate) of a multi-mode model.
    Mode(usize),
    /// Position in the random sample list.
    Sample(usize),
    /// Truncation order.
    Truncation(usize),
}

impl Index {
    pub fn of<const D: usize>(n: [usize; D]) -> Self {
        match D {
            1 => Self::N(n[0]),
            2 => Self::Nl(n[0], n[1]),
            _ => unreachable!("only one- and two-dimensional families exist"),
        }
    }

    /// Compact text form for tables: `n=3`, `nl=2,5`, `sample=7`, …
    pub fn label(&self) -> String {
        match self {
            Self::Whole => "-".into(),
            Self::N(n) => format!("n={n}"),
            Self::Nl(n, l) => format!("nl={n},{l}"),
            Self::Mode(d) => format!("mode={d}"),
            Self::Sample(s) => format!("sample={s}"),
            Self::Truncation(n) => format!("N={n}"),
        }
    }
}

/// One gating residual.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub family: String,
    pub index: Index,
    pub residual: f64,
    pub tolerance: f64,
}

impl ResidualRow {
    pub fn passes(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// A reported but non-gating value, e.g. one point of a convergence curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub family: String,
    pub index: Index,
    pub value: f64,
}

/// Outcome of one check on one model.
///
/// Each row carries its own tolerance because a single statement may mix
/// exact-algebra and analytic residuals; `pass` holds iff every row is within
/// its tolerance, and `tolerance` is the check's nominal value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub model: Option<ModelRecord>,
    pub diagnostic: bool,
    pub tolerance: f64,
    pub max_residual: f64,
    pub pass: bool,
    pub rows: Vec<ResidualRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

impl CheckReport {
    pub fn new(check: &str, model: Option<&ModelSpec>, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            model: model.map(ModelRecord::from),
            diagnostic: false,
            tolerance,
            max_residual: 0.0,
            pass: false,
            rows: Vec::new(),
            trace: Vec::new(),
            notes: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn diagnostic(mut self) -> Self {
        self.diagnostic = true;
        self
    }

    pub fn push(&mut self, family: impl Into<String>, index: Index, residual: f64, tolerance: f64) {
        // NaN never passes; JSON has no infinities.
        let residual = if residual.is_finite() { residual } else { f64::MAX };
        self.rows.push(ResidualRow { family: family.into(), index, residual, tolerance });
    }

    pub fn trace(&mut self, family: impl Into<String>, index: Index, value: f64) {
        self.trace.push(TraceRow { family: family.into(), index, value });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.insert(key.into(), value.to_string());
    }

    /// Record a failure that prevented part of the check from running.
    pub fn fail(&mut self, family: impl Into<String>, err: impl std::fmt::Display) {
        let family = family.into();
        self.notes.push(format!("{family}: {err}"));
        self.push(family, Index::Whole, f64::MAX, self.tolerance);
    }

    pub fn finish(mut self) -> Self {
        if self.rows.is_empty() && self.trace.is_empty() {
            self.note("no residuals were produced");
            self.push("empty", Index::Whole, f64::MAX, self.tolerance);
        }
        self.max_residual = self.rows.iter().map(|r| r.residual).fold(0.0, f64::max);
        self.pass = self.diagnostic || self.rows.iter().all(ResidualRow::passes);
        self
    }

    /// Largest residual of one family, or `None` if absent.
    pub fn family_max(&self, family: &str) -> Option<f64> {
        self.rows.iter().filter(|r| r.family == family).map(|r| r.residual).reduce(f64::max)
    }

    /// Rows whose family starts with `prefix`.
    pub fn rows_with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a ResidualRow> + 'a {
        self.rows.iter().filter(move |r| r.family.starts_with(prefix))
    }

    pub fn model_label(&self) -> String {
        match &self.model {
            Some(m) => {
                let inner: Vec<String> = m.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!("{}({})", m.kind, inner.join(","))
            }
            None => "-".into(),
        }
    }
}

/// Default tolerances; every value can be scaled from the suite config.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Normal-form and other coefficient-exact statements.
    pub exact: f64,
    /// Operator identities evaluated on sample functions.
    pub action: f64,
    pub ladder: f64,
    pub eigen: f64,
    pub gram: f64,
    pub quadrature: f64,
    pub quasi_basis: f64,
    pub ordering: f64,
    pub theta: f64,
    /// Relative imaginary part of `⟨f, Θf⟩`.
    pub positivity: f64,
    pub nlpb: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            exact: 1e-12,
            action: 1e-10,
            ladder: 1e-9,
            eigen: 1e-9,
            gram: 1e-8,
            quadrature: 1e-8,
            quasi_basis: 1e-6,
            ordering: 1e-8,
            theta: 1e-9,
            positivity: 1e-10,
            nlpb: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            exact: self.exact * s,
            action: self.action * s,
            ladder: self.ladder * s,
            eigen: self.eigen * s,
            gram: self.gram * s,
            quadrature: self.quadrature * s,
            quasi_basis: self.quasi_basis * s,
            ordering: self.ordering * s,
            theta: self.theta * s,
            positivity: self.positivity * s,
            nlpb: self.nlpb * s,
        }
    }
}
