//! Job reports: the per-level table plus named checks, rendered as a text
//! table, CSV or JSON. Every big integer is a decimal string.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize, Serializer};

use crate::invariants::{Flag, LevelReport};
use crate::Int;

/// Big integers travel as decimal strings.
pub fn ser_int<S: Serializer>(v: &Int, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub const NOT_COMPUTED: &str = "not computed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A formula path declined because a hypothesis failed.
    Refused,
    /// A formula value forced past a failed hypothesis.
    Unsafe,
    /// A known misprint, reported next to the computed value.
    Erratum,
    Info,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Refused => "REFUSED",
            Status::Unsafe => "UNSAFE",
            Status::Erratum => "ERRATUM",
            Status::Info => "INFO",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub status: Status,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: impl ToString, actual: impl ToString, status: Status) -> Self {
        Check {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            status,
        }
    }

    /// Pass iff the rendered values agree.
    pub fn compare(name: impl Into<String>, expected: impl ToString, actual: impl ToString) -> Self {
        let (e, a) = (expected.to_string(), actual.to_string());
        let status = if e == a { Status::Pass } else { Status::Fail };
        Check {
            name: name.into(),
            expected: e,
            actual: a,
            status,
        }
    }

    pub fn truth(name: impl Into<String>, expected: impl ToString, holds: bool, actual: impl ToString) -> Self {
        Check::new(name, expected, actual, if holds { Status::Pass } else { Status::Fail })
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] {}: expected {}, got {}",
            self.status.as_str(),
            self.name,
            self.expected,
            self.actual
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRow {
    pub m: u64,
    #[serde(rename = "R")]
    pub r: String,
    #[serde(rename = "N")]
    pub n: String,
    #[serde(rename = "NP")]
    pub np: String,
    #[serde(rename = "NPhi")]
    pub nphi: String,
    pub flags: Vec<String>,
}

impl From<&LevelReport> for LevelRow {
    fn from(r: &LevelReport) -> Self {
        let show = |v: &Option<Int>| v.as_ref().map_or_else(|| NOT_COMPUTED.to_string(), Int::to_string);
        LevelRow {
            m: r.m,
            r: r.reid_order.to_string(),
            n: r.nielsen.to_string(),
            np: show(&r.np),
            nphi: show(&r.nphi),
            flags: r.flags.iter().map(|f| Flag::as_str(f).to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub space: String,
    pub inputs: BTreeMap<String, String>,
    pub levels: Vec<LevelRow>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(space: impl Into<String>) -> Self {
        Report {
            space: space.into(),
            inputs: BTreeMap::new(),
            levels: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn level(&self, m: u64) -> Option<&LevelRow> {
        self.levels.iter().find(|r| r.m == m)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn has_unsafe(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Unsafe)
            || self.levels.iter().any(|r| r.flags.iter().any(|f| f == "unsafe"))
    }

    pub fn has_failure(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// `m,R,N,NP,NPhi,flags` with flags joined by `;`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["m", "R", "N", "NP", "NPhi", "flags"])
            .expect("in-memory write");
        for r in &self.levels {
            w.write_record([
                r.m.to_string(),
                r.r.clone(),
                r.n.clone(),
                r.np.clone(),
                r.nphi.clone(),
                r.flags.join(";"),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        if self.has_unsafe() {
            out.push_str("*** UNSAFE: some values below were computed with failed hypotheses ***\n");
        }
        let inputs: Vec<String> = self.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "{} {}", self.space, inputs.join(" "));
        if !self.levels.is_empty() {
            let header = ["m", "R", "N", "NP", "NPhi", "flags"].map(String::from);
            let rows: Vec<[String; 6]> = self
                .levels
                .iter()
                .map(|r| {
                    [
                        r.m.to_string(),
                        r.r.clone(),
                        r.n.clone(),
                        r.np.clone(),
                        r.nphi.clone(),
                        r.flags.join(","),
                    ]
                })
                .collect();
            let mut width = header.clone().map(|h| h.len());
            for row in &rows {
                for (w, cell) in width.iter_mut().zip(row) {
                    *w = (*w).max(cell.len());
                }
            }
            for row in std::iter::once(&header).chain(&rows) {
                let cells: Vec<String> = row
                    .iter()
                    .zip(width)
                    .enumerate()
                    .map(|(i, (c, w))| if i == 5 { c.clone() } else { format!("{c:>w$}") })
                    .collect();
                let _ = writeln!(out, "{}", cells.join("  ").trim_end());
            }
        }
        for c in &self.checks {
            let _ = writeln!(out, "{}", c.line());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("circle").input("a", 6).input("b", 2).input("n", 6);
        r.levels.push(LevelRow {
            m: 6,
            r: "46592".into(),
            n: "46592".into(),
            np: "46368".into(),
            nphi: "46604".into(),
            flags: vec!["injective_boosts".into()],
        });
        r.checks.push(Check::compare("NP_mobius[6]", "46368", "refused"));
        r
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let r = sample();
        let s = r.to_json();
        let back = Report::from_json(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), s);
        assert!(s.contains(r#""NPhi": "46604""#));
    }

    #[test]
    fn csv_and_table() {
        let r = sample();
        assert_eq!(
            r.to_csv(),
            "m,R,N,NP,NPhi,flags\n6,46592,46592,46368,46604,injective_boosts\n"
        );
        let t = r.to_table();
        assert!(t.contains("46604"));
        assert!(t.contains("[FAIL] NP_mobius[6]"));
        assert!(!t.contains("UNSAFE"));
    }
}
