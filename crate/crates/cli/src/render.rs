//! Text and JSON renderings of the report types.
//!
//! JSON key order is the struct field order, which keeps serialized
//! certificates byte-stable across runs; the certificate shape is documented
//! in `schemas/certificate.schema.json` and the power report shape in
//! `schemas/gwreport.schema.json`.

use std::fmt::Write;

use quadtwist_core::certify::{MinimalityVerdict, TheoremCertificate};
use quadtwist_core::exactmath::rat_slash_string;
use quadtwist_core::localpowers::LocalPowerReport;

pub fn certificate_json(certificate: &TheoremCertificate) -> String {
    serde_json::to_string_pretty(certificate).expect("certificate serializes")
}

pub fn certificate_text(certificate: &TheoremCertificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p = {}, n = {}", certificate.p, certificate.n);
    let _ = writeln!(
        out,
        "norm form: a = {}, b = {} (a^2 + 3 b^2 = {})",
        certificate.a,
        certificate.b,
        3 * certificate.p
    );
    match certificate.condition_i.witness {
        Some(w) => {
            let _ = writeln!(
                out,
                "condition (i): {} (witness {w})",
                if certificate.condition_i.pass {
                    "pass"
                } else {
                    "fail"
                }
            );
        }
        None => {
            let _ = writeln!(
                out,
                "condition (i): {}",
                if certificate.condition_i.pass {
                    "pass"
                } else {
                    "fail"
                }
            );
        }
    }
    let _ = writeln!(out, "condition (ii'):");
    for check in &certificate.condition_ii {
        let gens: Vec<String> = check
            .subgroup_generators
            .iter()
            .map(|g| g.to_string())
            .collect();
        let _ = writeln!(
            out,
            "  subgroup <{}> of order {}: {} (norm {})",
            gens.join(", "),
            check.order,
            if check.verdict {
                "trivial"
            } else {
                "nontrivial"
            },
            check.norm
        );
    }
    let _ = writeln!(out, "condition (iii):");
    let mut unverified = 0;
    for entry in &certificate.condition_iii {
        if entry.status == "unverified" {
            unverified += 1;
        }
        let _ = writeln!(out, "  place {}: {}", entry.place, entry.status);
    }
    let _ = writeln!(out, "  unverified places: {unverified}");
    let _ = writeln!(
        out,
        "conj sign: {}",
        if certificate.conj_sign >= 0 {
            "+1"
        } else {
            "-1"
        }
    );
    let _ = write!(out, "verdict: {}", certificate.verdict);
    out
}

pub fn scan_json(certificates: &[TheoremCertificate]) -> String {
    serde_json::to_string_pretty(certificates).expect("certificates serialize")
}

pub fn scan_text(certificates: &[TheoremCertificate]) -> String {
    let mut out = String::new();
    for certificate in certificates {
        let _ = writeln!(
            out,
            "p = {}: {} (unverified places: {})",
            certificate.p,
            certificate.verdict,
            certificate.unverified_places()
        );
    }
    let _ = write!(out, "{} certificates verified", certificates.len());
    out
}

#[derive(serde::Serialize)]
struct MinimalityJson {
    n: u64,
    classification: &'static str,
    checks: Vec<CheckJson>,
}

#[derive(serde::Serialize)]
struct CheckJson {
    label: String,
    value: String,
}

pub fn minimality_json(verdicts: &[MinimalityVerdict]) -> String {
    let rows: Vec<MinimalityJson> = verdicts
        .iter()
        .map(|v| MinimalityJson {
            n: v.n,
            classification: v.classification.label(),
            checks: v
                .checks
                .iter()
                .map(|c| CheckJson {
                    label: c.label.clone(),
                    value: c.value.clone(),
                })
                .collect(),
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("verdicts serialize")
}

pub fn minimality_text(verdicts: &[MinimalityVerdict]) -> String {
    let mut out = String::new();
    for (i, v) in verdicts.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = write!(out, "{}: {}", v.n, v.classification.label());
        if verdicts.len() == 1 {
            for check in &v.checks {
                let _ = write!(out, "\n  {} = {}", check.label, check.value);
            }
        }
    }
    out
}

#[derive(serde::Serialize)]
struct GwJson {
    alpha: String,
    m: u64,
    field: String,
    places: Vec<GwPlaceJson>,
    global: GwGlobalJson,
    violation: bool,
}

#[derive(serde::Serialize)]
struct GwPlaceJson {
    place: String,
    result: bool,
}

#[derive(serde::Serialize)]
struct GwGlobalJson {
    plus: bool,
    minus: bool,
}

pub fn gw_json(report: &LocalPowerReport) -> String {
    let row = GwJson {
        alpha: rat_slash_string(&report.alpha),
        m: report.m,
        field: report.field.to_string(),
        places: report
            .places
            .iter()
            .map(|p| GwPlaceJson {
                place: p.place.clone(),
                result: p.is_mth_power,
            })
            .collect(),
        global: GwGlobalJson {
            plus: report.global_plus,
            minus: report.global_minus,
        },
        violation: report.violation,
    };
    serde_json::to_string_pretty(&row).expect("report serializes")
}

pub fn gw_text(report: &LocalPowerReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "alpha = {}, m = {}, field = {}",
        rat_slash_string(&report.alpha),
        report.m,
        report.field
    );
    for place in &report.places {
        let _ = writeln!(out, "  {}: {}", place.place, place.is_mth_power);
    }
    let _ = writeln!(
        out,
        "global: +alpha {}, -alpha {}",
        report.global_plus, report.global_minus
    );
    let _ = write!(out, "violation: {}", report.violation);
    out
}
