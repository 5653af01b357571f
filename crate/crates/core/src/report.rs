//! Verification reports and their JSON form.
//!
//! Floating-point fields are written with 17 significant digits so that a report
//! parses back to the identical `f64`. Non-finite values become the strings
//! `"nan"`, `"inf"` and `"-inf"`.

use serde::de::{self, Deserializer};
use serde::ser::{Error as _, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

pub const REPORT_VERSION: &str = "1";

/// Where the claimed value of a check comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    /// A closed form or statement from the underlying mathematics.
    Paper,
    /// Obtained by an independent computation.
    Derived,
    /// Holds by construction or elementary algebra.
    Trivial,
}

/// How `computed` must relate to `claimed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    #[default]
    Eq,
    /// `computed <= claimed`, up to the tolerance.
    Le,
    /// `computed >= claimed`, up to the tolerance.
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ToleranceKind {
    /// Relative to `|claimed|`, falling back to absolute when `claimed = 0`.
    #[default]
    Relative,
    Absolute,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ConfigEcho {
    pub d: usize,
    #[serde(serialize_with = "sig17", deserialize_with = "de_f64")]
    pub s: f64,
    pub profile: String,
    pub seed: u64,
    pub order: usize,
    pub kmax: usize,
    pub resolution: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub anchor: String,
    pub provenance: Provenance,
    #[serde(serialize_with = "sig17", deserialize_with = "de_f64")]
    pub claimed: f64,
    #[serde(serialize_with = "sig17", deserialize_with = "de_f64")]
    pub computed: f64,
    #[serde(serialize_with = "sig17", deserialize_with = "de_f64")]
    pub abs_error: f64,
    #[serde(serialize_with = "sig17", deserialize_with = "de_f64")]
    pub rel_error: f64,
    #[serde(serialize_with = "sig17", deserialize_with = "de_f64")]
    pub tolerance: f64,
    pub tolerance_kind: ToleranceKind,
    pub relation: Relation,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub config: ConfigEcho,
}

impl VerificationReport {
    /// An equality check at relative tolerance `tolerance`.
    pub fn new(
        check_id: impl Into<String>,
        anchor: impl Into<String>,
        provenance: Provenance,
        claimed: f64,
        computed: f64,
        tolerance: f64,
    ) -> Self {
        let mut r = VerificationReport {
            check_id: check_id.into(),
            anchor: anchor.into(),
            provenance,
            claimed,
            computed,
            abs_error: 0.0,
            rel_error: 0.0,
            tolerance,
            tolerance_kind: ToleranceKind::Relative,
            relation: Relation::Eq,
            pass: false,
            runtime_ms: None,
            note: None,
            config: ConfigEcho::default(),
        };
        r.evaluate();
        r
    }

    /// A check whose computation itself failed.
    pub fn failed(
        check_id: impl Into<String>,
        anchor: impl Into<String>,
        provenance: Provenance,
        claimed: f64,
        error: &crate::Error,
    ) -> Self {
        VerificationReport::new(check_id, anchor, provenance, claimed, f64::NAN, 0.0)
            .with_note(error.to_string())
    }

    pub fn absolute(mut self) -> Self {
        self.tolerance_kind = ToleranceKind::Absolute;
        self.evaluate();
        self
    }

    pub fn relation(mut self, relation: Relation) -> Self {
        self.relation = relation;
        self.evaluate();
        self
    }

    pub fn with_config(mut self, config: &ConfigEcho) -> Self {
        self.config = config.clone();
        self
    }

    pub fn with_runtime(mut self, ms: u64) -> Self {
        self.runtime_ms = Some(ms);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    fn evaluate(&mut self) {
        let (c, x) = (self.claimed, self.computed);
        self.abs_error = (x - c).abs();
        self.rel_error = if c != 0.0 {
            self.abs_error / c.abs()
        } else if self.abs_error == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        let miss = match self.relation {
            Relation::Eq => self.abs_error,
            Relation::Le => (x - c).max(0.0),
            Relation::Ge => (c - x).max(0.0),
        };
        let budget = match self.tolerance_kind {
            ToleranceKind::Relative if c != 0.0 => self.tolerance * c.abs(),
            _ => self.tolerance,
        };
        self.pass = x.is_finite() && miss <= budget;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSet {
    pub version: String,
    pub config: ConfigEcho,
    pub reports: Vec<VerificationReport>,
}

impl ReportSet {
    pub fn new(config: ConfigEcho, reports: Vec<VerificationReport>) -> Self {
        ReportSet { version: REPORT_VERSION.to_string(), config, reports }
    }

    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialisation is infallible")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Drop runtimes so that output is reproducible byte for byte.
    pub fn strip_runtimes(&mut self) {
        for r in &mut self.reports {
            r.runtime_ms = None;
        }
    }
}

fn sig17<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        let raw = RawValue::from_string(format!("{x:.16e}")).map_err(S::Error::custom)?;
        raw.serialize(s)
    } else if x.is_nan() {
        s.serialize_str("nan")
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

fn de_f64<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Num {
        F(f64),
        S(String),
    }
    match Num::deserialize(d)? {
        Num::F(x) => Ok(x),
        Num::S(s) => match s.as_str() {
            "nan" => Ok(f64::NAN),
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            other => Err(de::Error::custom(format!("not a number: {other}"))),
        },
    }
}
