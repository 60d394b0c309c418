use serde::Serialize;

use crate::config::RunConfig;

pub const SCHEMA: &str = "emq-verify-report";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "==")]
    Equals,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::Equals => "==",
        }
    }

    fn holds(self, value: f64, bound: f64) -> bool {
        match self {
            Relation::AtMost => value <= bound,
            Relation::AtLeast => value >= bound,
            Relation::Equals => value == bound,
        }
    }
}

/// One measured quantity with its acceptance bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    /// Human-readable name of the identity or property being tested.
    pub anchor: String,
    pub value: f64,
    pub relation: Relation,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(id: &str, anchor: &str, value: f64, relation: Relation, bound: f64) -> Self {
        Self {
            id: id.to_string(),
            anchor: anchor.to_string(),
            value,
            relation,
            bound,
            // NaN fails every relation
            passed: relation.holds(value, bound),
        }
    }

    pub fn at_most(id: &str, anchor: &str, value: f64, bound: f64) -> Self {
        Self::new(id, anchor, value, Relation::AtMost, bound)
    }

    pub fn at_least(id: &str, anchor: &str, value: f64, bound: f64) -> Self {
        Self::new(id, anchor, value, Relation::AtLeast, bound)
    }

    pub fn exact(id: &str, anchor: &str, value: f64, expected: f64) -> Self {
        Self::new(id, anchor, value, Relation::Equals, expected)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(name: &str, checks: Vec<Check>) -> Self {
        Self {
            name: name.to_string(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub failed: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub schema_version: u32,
    pub config: RunConfig,
    pub suites: Vec<SuiteReport>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: RunConfig, suites: Vec<SuiteReport>) -> Self {
        let total = suites.iter().map(|s| s.checks.len()).sum();
        let failed = suites
            .iter()
            .flat_map(|s| &s.checks)
            .filter(|c| !c.passed)
            .count();
        Self {
            schema: SCHEMA,
            schema_version: SCHEMA_VERSION,
            config,
            suites,
            summary: Summary {
                total,
                failed,
                passed: failed == 0,
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.passed
    }

    pub fn failures(&self) -> impl Iterator<Item = (&str, &Check)> {
        self.suites
            .iter()
            .flat_map(|s| s.checks.iter().map(move |c| (s.name.as_str(), c)))
            .filter(|(_, c)| !c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// Aligned-column summary, one line per check.
    pub fn to_text(&self) -> String {
        let header = ["suite", "check", "value", "rel", "bound", "status", "anchor"];
        let mut rows: Vec<[String; 7]> = Vec::new();
        for suite in &self.suites {
            for c in &suite.checks {
                rows.push([
                    suite.name.clone(),
                    c.id.clone(),
                    format!("{:.3e}", c.value),
                    c.relation.symbol().to_string(),
                    format!("{:.3e}", c.bound),
                    if c.passed { "PASS" } else { "FAIL" }.to_string(),
                    c.anchor.clone(),
                ]);
            }
        }
        let mut widths = header.map(str::len);
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: &[String]| {
            let mut out = String::new();
            for (i, cell) in cells.iter().enumerate() {
                if i + 1 == cells.len() {
                    out.push_str(cell);
                } else {
                    out.push_str(&format!("{cell:<width$}  ", width = widths[i]));
                }
            }
            out.trim_end().to_string()
        };
        let mut text = String::new();
        text.push_str(&line(&header.map(String::from)));
        text.push('\n');
        for row in &rows {
            text.push_str(&line(row));
            text.push('\n');
        }
        text.push_str(&format!(
            "\n{} checks, {} failed: {}\n",
            self.summary.total,
            self.summary.failed,
            if self.summary.passed { "PASS" } else { "FAIL" }
        ));
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        assert!(Check::at_most("a", "x", 1e-13, 1e-12).passed);
        assert!(!Check::at_most("a", "x", f64::NAN, 1e-12).passed);
        assert!(Check::exact("a", "x", 2.0, 2.0).passed);
        assert!(!Check::at_least("a", "x", 0.5, 1.0).passed);
    }

    #[test]
    fn summary_counts_failures() {
        let suite = SuiteReport::new(
            "demo",
            vec![Check::exact("one", "x", 0.0, 0.0), Check::at_most("two", "y", 1.0, 0.5)],
        );
        let report = Report::new(RunConfig::default(), vec![suite]);
        assert!(!report.passed());
        assert_eq!(report.summary.failed, 1);
        assert_eq!(report.failures().next().unwrap().1.id, "two");
        let text = report.to_text();
        assert!(text.contains("FAIL"));
        assert!(report.to_json().contains("\"schema_version\": 1"));
    }
}
