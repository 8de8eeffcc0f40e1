//! Structured run reports and the exact-versus-estimate comparison.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use crate::budget::Budgets;
use crate::closed_form::{closed_form_t1, closed_form_t2, ClosedFormEstimate, ClosedFormT2};
use crate::cluster::{estimate_count, Estimate};
use crate::counting::count_independent_sets;
use crate::error::Result;
use crate::hypergraph::{GirthSearch, Hypergraph};
use crate::numeric::{fmt_rational, fmt_sig, LogNumber, Rational};

/// A result value. Exact values render exactly; log-domain values render as
/// natural logs with 12 significant digits.
#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Exact(Rational),
    Integer(BigUint),
    Log(f64),
    Float(f64),
    Text(String),
}

impl Field {
    pub fn render(&self) -> String {
        match self {
            Field::Exact(q) => fmt_rational(q),
            Field::Integer(n) => n.to_string(),
            Field::Log(x) | Field::Float(x) => fmt_sig(*x, 12),
            Field::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Field::Float(x) | Field::Log(x) if x.is_finite() => {
                serde_json::from_str(&fmt_sig(*x, 12)).unwrap_or_else(|_| Value::String(fmt_sig(*x, 12)))
            }
            other => Value::String(other.render()),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub command: String,
    pub digest: Option<String>,
    pub params: Vec<(String, String)>,
    pub results: Vec<(String, Field)>,
    /// Wall-clock seconds, kept apart from the reproducible fields.
    pub timings: Vec<(String, f64)>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            ..Default::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn field(&mut self, key: impl Into<String>, value: Field) -> &mut Self {
        self.results.push((key.into(), value));
        self
    }

    pub fn timing(&mut self, key: &str, seconds: f64) -> &mut Self {
        self.timings.push((key.to_string(), seconds));
        self
    }

    /// `key=value` lines; timings last, prefixed `time.`.
    pub fn to_text(&self) -> String {
        let mut out = self.exact_text();
        for (k, t) in &self.timings {
            let _ = writeln!(out, "time.{k}={t:.6}");
        }
        out
    }

    /// The reproducible part of [`RunReport::to_text`].
    pub fn exact_text(&self) -> String {
        let mut out = format!("command={}\n", self.command);
        if let Some(d) = &self.digest {
            let _ = writeln!(out, "digest={d}");
        }
        for (k, v) in &self.params {
            let _ = writeln!(out, "param.{k}={v}");
        }
        for (k, v) in &self.results {
            let _ = writeln!(out, "{k}={}", v.render());
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let params: Map<String, Value> = self.params.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let results: Map<String, Value> = self.results.iter().map(|(k, v)| (k.clone(), v.to_json())).collect();
        let timings: Map<String, Value> = self.timings.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        json!({
            "command": self.command,
            "digest": self.digest,
            "params": params,
            "results": results,
            "timings": timings,
        })
    }
}

/// Exact count against the truncated estimate and the closed forms.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub exact: BigUint,
    pub estimate: Estimate,
    /// Signed `estimate / exact − 1`; the closed-form errors below likewise.
    pub estimate_error: f64,
    /// Present for linear regular inputs.
    pub closed_t1: Option<(ClosedFormEstimate, f64)>,
    /// Present for linear regular inputs of girth at least five.
    pub closed_t2: Option<(ClosedFormT2, f64, f64)>,
}

fn relative_error(ln_estimate: f64, exact: LogNumber) -> f64 {
    LogNumber::from_ln(ln_estimate).relative_error(exact)
}

pub fn compare(g: &Hypergraph, t: usize, budgets: &Budgets) -> Result<Comparison> {
    let estimate = estimate_count(g, t, budgets)?;
    let exact = count_independent_sets(&g.to_edge_system());
    let exact_log = LogNumber::from_biguint(&exact);
    let estimate_error = estimate.value.relative_error(exact_log);
    let r = g.regular_degree().unwrap_or(0);
    let n = g.class_size(0);
    let (mut closed_t1, mut closed_t2) = (None, None);
    if g.is_linear() && r > 0 {
        let c1 = closed_form_t1(g.k(), n, r)?;
        let e1 = relative_error(c1.log_value, exact_log);
        closed_t1 = Some((c1, e1));
        if g.girth_at_most(4, budgets.girth_nodes)? == GirthSearch::Absent {
            let c2 = closed_form_t2(g.k(), n, r)?;
            let ep = relative_error(c2.printed.log_value, exact_log);
            let ec = relative_error(c2.corrected.log_value, exact_log);
            closed_t2 = Some((c2, ep, ec));
        }
    }
    Ok(Comparison {
        exact,
        estimate,
        estimate_error,
        closed_t1,
        closed_t2,
    })
}

impl Comparison {
    /// Appends the comparison fields to a report.
    pub fn fill(&self, report: &mut RunReport) {
        report.field("exact", Field::Integer(self.exact.clone()));
        report.field("exact_ln", Field::Log(LogNumber::from_biguint(&self.exact).ln()));
        for (z, e) in self.estimate.exponents.iter().enumerate() {
            report.field(format!("estimate.exponent.{z}"), Field::Exact(e.clone()));
        }
        report.field("estimate_ln", Field::Log(self.estimate.value.ln()));
        report.field("estimate_rel_error", Field::Float(self.estimate_error));
        if let Some((c, err)) = &self.closed_t1 {
            report.field("closed_t1.exponent", Field::Exact(c.exponent.clone()));
            report.field("closed_t1_ln", Field::Log(c.log_value));
            report.field("closed_t1_rel_error", Field::Float(*err));
        }
        if let Some((c, ep, ec)) = &self.closed_t2 {
            report.field("closed_t2.printed.exponent", Field::Exact(c.printed.exponent.clone()));
            report.field("closed_t2.corrected.exponent", Field::Exact(c.corrected.exponent.clone()));
            report.field("closed_t2.delta", Field::Exact(c.delta.clone()));
            report.field("closed_t2.printed_rel_error", Field::Float(*ep));
            report.field("closed_t2.corrected_rel_error", Field::Float(*ec));
        }
    }
}
