use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::error::{Error, Result};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Fas,
    Charform,
    Kernel,
    Witt,
    Bk,
    Topforms,
    Algebra,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Fas, Suite::Charform, Suite::Kernel, Suite::Witt, Suite::Bk, Suite::Topforms, Suite::Algebra];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fas => "fas",
            Suite::Charform => "charform",
            Suite::Kernel => "kernel",
            Suite::Witt => "witt",
            Suite::Bk => "bk",
            Suite::Topforms => "topforms",
            Suite::Algebra => "algebra",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown suite `{s}`")))
    }
}

/// Parameters of a suite run. Levels are `n` for forms and `r` for Witt vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteParams {
    pub p: u32,
    pub dim: usize,
    /// Form degree; `None` samples every degree `1..=dim`.
    pub degree: Option<usize>,
    pub min_level: u32,
    pub max_level: u32,
    /// Witt length; `None` samples lengths 1 and 2.
    pub witt_length: Option<usize>,
    /// Random trials after the exhaustive sweep (per check for `algebra`).
    pub trials: usize,
    pub max_pole: i64,
    pub sweep_pole: i64,
}

impl SuiteParams {
    pub fn new(suite: Suite, p: u32) -> SuiteParams {
        let (dim, min_level, max_level) = match suite {
            Suite::Topforms => (2, 1, 6),
            Suite::Witt => (2, 1, 5),
            Suite::Bk => (2, 1, 6),
            _ => (1, 1, 6),
        };
        SuiteParams {
            p,
            dim,
            degree: None,
            min_level,
            max_level,
            witt_length: None,
            trials: 100,
            max_pole: 6,
            sweep_pole: 3,
        }
    }

    /// The supported ranges: `p ∈ {2,3,5}`, `d <= 2`, levels `<= 6`, Witt length
    /// `<= 3`, poles `<= 6`.
    pub fn validate(&self, suite: Suite) -> Result<()> {
        let bad = |m: String| Err(Error::Input(m));
        if ![2, 3, 5].contains(&self.p) {
            return bad(format!("p = {} is outside {{2, 3, 5}}", self.p));
        }
        if self.dim == 0 || self.dim > 2 {
            return bad(format!("dimension {} is outside 1..=2", self.dim));
        }
        if let Some(j) = self.degree {
            if j == 0 || j > self.dim {
                return bad(format!("degree {j} is outside 1..={}", self.dim));
            }
        }
        if self.min_level > self.max_level || self.max_level > 6 {
            return bad(format!("levels {}..={} are outside 0..=6", self.min_level, self.max_level));
        }
        if let Some(n) = self.witt_length {
            if n == 0 || n > 3 {
                return bad(format!("Witt length {n} is outside 1..=3"));
            }
        }
        if !(1..=6).contains(&self.max_pole) || !(1..=self.max_pole).contains(&self.sweep_pole) {
            return bad(format!("pole bounds {} / {} are outside 1..=6", self.max_pole, self.sweep_pole));
        }
        if suite == Suite::Witt && self.p == 5 {
            return bad("the witt suite runs for p ∈ {2, 3}".into());
        }
        if suite == Suite::Bk && self.dim != 2 {
            return bad("the bk suite needs dim = 2".into());
        }
        if suite == Suite::Topforms && self.degree.is_some_and(|j| j != self.dim) {
            return bad("topforms uses degree = dim".into());
        }
        Ok(())
    }
}

/// One failed property inside a trial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mismatch {
    pub check: String,
    pub level: Option<u32>,
    pub expected: String,
    pub found: String,
}

/// The inputs of a trial, self-contained: every object is a codec document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseRecord {
    pub kind: String,
    pub objects: Vec<Json>,
    pub ints: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Counterexample {
    pub trial: usize,
    pub case: CaseRecord,
    pub mismatches: Vec<Mismatch>,
}

/// Result of a suite run. Contains no timing so equal runs serialize identically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: Suite,
    pub params: SuiteParams,
    pub seed: u64,
    pub attempted: usize,
    pub passed: usize,
    pub counters: BTreeMap<String, u64>,
    pub failures: Vec<Counterexample>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.passed == self.attempted
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json_str(s: &str) -> Result<SuiteReport> {
        let r: SuiteReport = serde_json::from_str(s).map_err(|e| Error::Input(e.to_string()))?;
        if r.schema != REPORT_SCHEMA {
            return Err(Error::Input(format!("report schema {} is not supported", r.schema)));
        }
        Ok(r)
    }

    /// `suite: passed/attempted` plus the first failure, for terminals.
    pub fn summary(&self) -> String {
        let mut s = format!("{}: {}/{} passed", self.suite, self.passed, self.attempted);
        if let Some(f) = self.failures.first() {
            if let Some(m) = f.mismatches.first() {
                s.push_str(&format!(
                    "; first failure at trial {} ({} at level {:?}: expected {}, found {})",
                    f.trial, m.check, m.level, m.expected, m.found
                ));
            }
        }
        s
    }
}
