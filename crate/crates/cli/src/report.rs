//! Command reports, inline certificates and their text/JSON serialization.

use std::fmt::Write as _;

use clalg::closure::{ClosureWitness, Status};
use clalg::module::MembershipCertificate;
use clalg::poly::{Poly, PolyRing};
use clalg::vector;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ReportStatus {
    Exact,
    Bounded,
    Unknown,
}

impl From<Status> for ReportStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Exact => ReportStatus::Exact,
            Status::BoundedCertified { .. } => ReportStatus::Bounded,
            Status::Unknown => ReportStatus::Unknown,
        }
    }
}

impl ReportStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ReportStatus::Exact => "EXACT",
            ReportStatus::Bounded => "BOUNDED",
            ReportStatus::Unknown => "UNKNOWN",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Detail {
    pub key: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub index: usize,
    pub command: String,
    pub verdict: String,
    pub status: ReportStatus,
    pub details: Vec<Detail>,
    pub certificates: Vec<Value>,
    /// Whether every certificate re-verified in this run, both from the
    /// objects and from the serialized form; `None` without certificates.
    pub certificates_verified: Option<bool>,
    pub spairs: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// A resource budget ran out during this command.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub resource_abort: bool,
}

/// Accumulates one report's contents.
#[derive(Debug)]
pub struct ReportBuilder {
    pub verdict: String,
    pub status: ReportStatus,
    pub details: Vec<Detail>,
    certificates: Vec<Value>,
    verified: bool,
    pub resource_abort: bool,
}

impl ReportBuilder {
    pub fn new(verdict: impl Into<String>, status: impl Into<ReportStatus>) -> Self {
        ReportBuilder {
            verdict: verdict.into(),
            status: status.into(),
            details: Vec::new(),
            certificates: Vec::new(),
            verified: true,
            resource_abort: false,
        }
    }

    pub fn detail(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.details.push(Detail {
            key: key.into(),
            value: value.to_string(),
        });
        self
    }

    pub fn membership(&mut self, label: &str, c: &MembershipCertificate) {
        let v = membership_json(label, c);
        self.verified &= c.verify() && verify_membership_json(&c.ring, &v);
        self.certificates.push(v);
    }

    pub fn witness(&mut self, label: &str, poly: &PolyRing, w: &ClosureWitness) {
        let v = witness_json(label, poly, w);
        self.verified &= w.verify() && verify_witness_json(poly, &v);
        self.certificates.push(v);
    }

    /// A certificate checked by other means, such as a counterexample re-run.
    pub fn checked(&mut self, v: Value, ok: bool) {
        self.verified &= ok;
        self.certificates.push(v);
    }

    pub fn finish(self, index: usize, command: String, spairs: u64) -> Report {
        let certificates_verified = (!self.certificates.is_empty()).then_some(self.verified);
        Report {
            index,
            command,
            verdict: self.verdict,
            status: self.status,
            details: self.details,
            certificates: self.certificates,
            certificates_verified,
            spairs,
            timing_ms: None,
            error: None,
            resource_abort: self.resource_abort,
        }
    }
}

fn fmt_vec(poly: &PolyRing, v: &[Poly]) -> Value {
    Value::Array(v.iter().map(|p| Value::String(poly.format(p))).collect())
}

pub fn membership_json(label: &str, c: &MembershipCertificate) -> Value {
    let poly = &c.ring;
    json!({
        "kind": "membership",
        "label": label,
        "element": fmt_vec(poly, &c.element),
        "generators": c.generators.iter().map(|g| fmt_vec(poly, g)).collect::<Vec<_>>(),
        "n_stated": c.n_stated,
        "coefficients": fmt_vec(poly, &c.coefficients),
    })
}

pub fn witness_json(label: &str, poly: &PolyRing, w: &ClosureWitness) -> Value {
    json!({
        "kind": "closure_witness",
        "label": label,
        "element": fmt_vec(poly, &w.element),
        "multiplier": w.multiplier.as_ref().map(|m| poly.format(m)),
        "levels": w.levels,
        "identities": w.identities.iter().map(|c| membership_json("identity", c)).collect::<Vec<_>>(),
    })
}

fn parse_vec(poly: &PolyRing, v: &Value) -> Option<Vec<Poly>> {
    v.as_array()?
        .iter()
        .map(|x| poly.parse(x.as_str()?).ok())
        .collect()
}

/// Re-checks `element = Σ coefficients[i] * generators[i]` from the
/// serialized strings alone.
pub fn verify_membership_json(poly: &PolyRing, v: &Value) -> bool {
    let check = || -> Option<bool> {
        let element = parse_vec(poly, &v["element"])?;
        let coeffs = parse_vec(poly, &v["coefficients"])?;
        let gens: Vec<Vec<Poly>> = v["generators"]
            .as_array()?
            .iter()
            .map(|g| parse_vec(poly, g))
            .collect::<Option<_>>()?;
        if gens.len() != coeffs.len() || gens.iter().any(|g| g.len() != element.len()) {
            return Some(false);
        }
        Some(vector::combine(poly, element.len(), &coeffs, &gens) == element)
    };
    check().unwrap_or(false)
}

pub fn verify_witness_json(poly: &PolyRing, v: &Value) -> bool {
    v["identities"]
        .as_array()
        .is_some_and(|ids| ids.iter().all(|c| verify_membership_json(poly, c)))
}

/// The process exit code for a run: 3 if any command hit a resource
/// limit, else 2 if any status is UNKNOWN, else 0.
pub fn exit_code(reports: &[Report]) -> i32 {
    if reports.iter().any(|r| r.resource_abort) {
        3
    } else if reports.iter().any(|r| r.status == ReportStatus::Unknown) {
        2
    } else {
        0
    }
}

#[derive(Serialize)]
struct Document<'a> {
    schema_version: u32,
    exit_code: i32,
    reports: &'a [Report],
}

pub fn to_json(reports: &[Report]) -> String {
    let doc = Document {
        schema_version: SCHEMA_VERSION,
        exit_code: exit_code(reports),
        reports,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
    s.push('\n');
    s
}

pub fn to_text(reports: &[Report]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(out, "[{}] {}", r.index, r.command);
        let _ = writeln!(out, "  verdict: {}", r.verdict);
        let _ = writeln!(out, "  status: {}", r.status.as_str());
        for d in &r.details {
            let _ = writeln!(out, "  {}: {}", d.key, d.value);
        }
        if let Some(ok) = r.certificates_verified {
            let _ = writeln!(
                out,
                "  certificates: {} (verified: {ok})",
                r.certificates.len()
            );
        }
        let _ = writeln!(out, "  spairs: {}", r.spairs);
        if let Some(t) = r.timing_ms {
            let _ = writeln!(out, "  timing_ms: {t}");
        }
        if let Some(e) = &r.error {
            let _ = writeln!(out, "  error: {e}");
        }
    }
    let _ = writeln!(out, "exit: {}", exit_code(reports));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use clalg::fixtures;
    use clalg::module::Submodule;

    #[test]
    fn membership_round_trips_through_json() {
        let r = fixtures::plane();
        let p = |s: &str| r.parse(s).unwrap();
        let n = Submodule::ideal(&r, vec![p("x"), p("y")]).unwrap();
        let c = n.membership(&[p("x^2+3*x*y")]).unwrap().unwrap();
        let mut b = ReportBuilder::new("IN", Status::Exact);
        b.membership("member", &c);
        let rep = b.finish(1, "check member N [x^2+3*x*y];".into(), 0);
        assert_eq!(rep.certificates_verified, Some(true));
        let mut bad = rep.certificates[0].clone();
        bad["coefficients"][0] = Value::String("0".into());
        assert!(!verify_membership_json(r.poly(), &bad));
    }

    #[test]
    fn unknown_has_no_certificate() {
        let rep = ReportBuilder::new("UNKNOWN", Status::Unknown).finish(1, "check x;".into(), 0);
        assert_eq!(rep.certificates_verified, None);
        let j: Value = serde_json::from_str(&to_json(std::slice::from_ref(&rep))).unwrap();
        assert_eq!(j["reports"][0]["status"], "UNKNOWN");
        assert_eq!(j["schema_version"], SCHEMA_VERSION);
        assert_eq!(j["exit_code"], 2);
        assert!(j["reports"][0]["certificates"]
            .as_array()
            .unwrap()
            .is_empty());
        assert_eq!(to_json(std::slice::from_ref(&rep)), to_json(&[rep]));
    }
}
