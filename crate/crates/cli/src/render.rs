use std::fmt::Write as _;

use clap::ValueEnum;
use num_complex::Complex64;
use serde::Serialize;
use univalent::harness::{CaseReport, SearchReport, SuiteReport};
use univalent::membership::{ClassCheck, MembershipReport};
use univalent::operators::OperatorSpec;
use univalent::{Error, NormalizedSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Csv,
    Pretty,
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, Error> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::Domain(format!("serialization failed: {e}")))
}

#[derive(Serialize)]
pub struct SeriesJson<'a> {
    operator: &'a OperatorSpec,
    coefficients: Vec<Complex64>,
}

impl<'a> SeriesJson<'a> {
    pub fn new(operator: &'a OperatorSpec, f: &NormalizedSeries) -> Self {
        Self {
            operator,
            coefficients: f.coeffs().to_vec(),
        }
    }
}

/// Six significant digits.
pub fn sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-5..=6).contains(&exponent) {
        let decimals = (5 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

fn point(p: univalent::membership::Point) -> String {
    format!(
        "{} {} {}i",
        sig(p.re),
        if p.im < 0.0 { '-' } else { '+' },
        sig(p.im.abs())
    )
}

fn report_lines(out: &mut String, label: &str, r: &MembershipReport) {
    let _ = writeln!(out, "{label}");
    let _ = writeln!(out, "  verdict     {}", r.verdict);
    let _ = writeln!(out, "  margin      {}", sig(r.margin));
    let _ = writeln!(out, "  truncation  {}", sig(r.truncation_bound));
    let _ = writeln!(out, "  argext      {}", point(r.argext));
    if r.skipped > 0 {
        let _ = writeln!(out, "  skipped     {}", r.skipped);
    }
}

pub fn check_pretty(c: &ClassCheck) -> String {
    let mut out = format!("{}: {}\n", c.class, c.verdict);
    report_lines(&mut out, "subject", &c.subject);
    if let Some(w) = &c.witness {
        report_lines(&mut out, "witness", w);
    }
    out
}

pub fn check_csv(c: &ClassCheck) -> String {
    let mut out = String::from("role,verdict,margin,truncation_bound,argext_re,argext_im\n");
    let rows =
        std::iter::once(("subject", &c.subject)).chain(c.witness.as_ref().map(|w| ("witness", w)));
    for (role, r) in rows {
        let _ = writeln!(
            out,
            "{role},{},{},{},{},{}",
            r.verdict, r.margin, r.truncation_bound, r.argext.re, r.argext.im
        );
    }
    out
}

fn margin_of(r: &Option<MembershipReport>) -> f64 {
    r.as_ref().map_or(f64::NAN, |m| m.margin)
}

fn case_row(out: &mut String, theorem: impl std::fmt::Display, case: &CaseReport) {
    let _ = writeln!(
        out,
        "{theorem},{},{},{},{}",
        case.subject,
        case.status,
        margin_of(&case.premise),
        margin_of(&case.conclusion)
    );
}

const CASE_HEADER: &str = "theorem,subject,status,premise_margin,conclusion_margin\n";

pub fn suite_csv(reports: &[SuiteReport]) -> String {
    let mut out = String::from(CASE_HEADER);
    for r in reports {
        for case in &r.cases {
            case_row(&mut out, r.theorem, case);
        }
    }
    out
}

fn case_pretty(out: &mut String, case: &CaseReport) {
    let _ = writeln!(
        out,
        "  {:<13} {:<44} premise {:>11}  conclusion {:>11}",
        case.status.to_string(),
        case.subject,
        sig(margin_of(&case.premise)),
        sig(margin_of(&case.conclusion))
    );
}

pub fn suite_pretty(reports: &[SuiteReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let s = r.summary;
        let _ = writeln!(
            out,
            "{}: {} ({} cases, {} confirmed, {} violated, {} inconclusive)",
            r.theorem, r.status, s.cases, s.confirmed, s.violated, s.inconclusive
        );
        for case in &r.cases {
            case_pretty(&mut out, case);
        }
    }
    out
}

pub fn search_csv(reports: &[SearchReport]) -> String {
    let mut out = String::from(CASE_HEADER);
    for r in reports {
        for case in &r.violations {
            case_row(&mut out, r.theorem, case);
        }
    }
    out
}

pub fn search_pretty(reports: &[SearchReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let s = r.summary;
        let _ = writeln!(
            out,
            "{}: {} trials, {} confirmed, {} violated, {} inconclusive, {} exploratory",
            r.theorem, r.trials, s.confirmed, s.violated, s.inconclusive, s.exploratory
        );
        for case in &r.violations {
            case_pretty(&mut out, case);
        }
    }
    out
}
