//! Text, JSON and CSV rendering of finished results. Nothing here computes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use powergraph::inequalities::{Check, CheckReport};
use powergraph::report::{csv_row, ReportJson, CSV_HEADER};
use powergraph::{Factorization, MinCutReport, VerificationRecord};
use serde::Serialize;

pub fn factorization(f: &Factorization) -> String {
    let parts: Vec<String> = f
        .primes()
        .iter()
        .zip(f.exponents())
        .map(|(p, &e)| {
            if e == 1 {
                p.to_string()
            } else {
                format!("{p}^{e}")
            }
        })
        .collect();
    format!("{} = {}", f.n(), parts.join(" · "))
}

fn verification_lines(out: &mut String, record: &VerificationRecord) {
    let oracle = match record.oracle_kappa {
        Some(k) => k.to_string(),
        None => "-".into(),
    };
    let _ = writeln!(
        out,
        "oracle     {} (kappa {oracle})",
        record.oracle_used.as_str()
    );
    let _ = writeln!(out, "match      {}", record.matched);
    let _ = writeln!(out, "separates  {}", record.disconnection_ok);
}

pub fn analyze_table(
    f: &Factorization,
    report: &MinCutReport,
    record: Option<&VerificationRecord>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n          {}", factorization(f));
    let _ = writeln!(out, "regime     {}", report.regime);
    let Some(kappa) = report.kappa else {
        out.push_str("complete graph, no cut-set\n");
        if let Some(rec) = record {
            verification_lines(&mut out, rec);
        }
        return out;
    };
    let achieving: Vec<String> = report
        .achieving
        .iter()
        .map(|c| c.params().to_string())
        .collect();
    let _ = writeln!(out, "kappa      {kappa}");
    let _ = writeln!(out, "achieving  {}", achieving.join(", "));
    if let Some(rec) = record {
        verification_lines(&mut out, rec);
    }

    let rows: Vec<(String, String, String)> = report
        .family
        .iter()
        .map(|c| {
            (
                c.size().to_string(),
                c.params().to_string(),
                c.members().len().to_string(),
            )
        })
        .collect();
    let w_size = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(4);
    let w_name = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max(9);
    let _ = writeln!(
        out,
        "\n{:>w_size$}  {:<w_name$}  classes",
        "size", "candidate"
    );
    for (size, name, classes) in rows {
        let _ = writeln!(out, "{size:>w_size$}  {name:<w_name$}  {classes}");
    }
    out
}

pub fn analyze_json(
    report: &MinCutReport,
    record: Option<&VerificationRecord>,
    timing: bool,
) -> String {
    let mut s = serde_json::to_string_pretty(&ReportJson::new(report, record, timing))
        .expect("report serializes");
    s.push('\n');
    s
}

pub fn csv<'a, I>(rows: I) -> Result<String, csv::Error>
where
    I: IntoIterator<Item = (&'a MinCutReport, Option<&'a VerificationRecord>)>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for (report, record) in rows {
        w.write_record(csv_row(report, record))?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// One compact JSON object per line.
pub fn json_lines<'a, I>(rows: I, timing: bool) -> String
where
    I: IntoIterator<Item = (&'a MinCutReport, &'a VerificationRecord)>,
{
    let mut out = String::new();
    for (report, record) in rows {
        out.push_str(
            &serde_json::to_string(&ReportJson::new(report, Some(record), timing))
                .expect("report serializes"),
        );
        out.push('\n');
    }
    out
}

pub fn sweep_table<'a, I>(rows: I) -> String
where
    I: IntoIterator<Item = (&'a MinCutReport, &'a VerificationRecord)>,
{
    let mut out = format!(
        "{:>8}  {:>2}  {:<11}  {:>8}  {:<10}  {:>8}  {}\n",
        "n", "r", "regime", "kappa", "oracle", "oracle_k", "status"
    );
    let dash = |k: Option<u128>| k.map_or_else(|| "-".to_string(), |k| k.to_string());
    for (report, rec) in rows {
        let _ = writeln!(
            out,
            "{:>8}  {:>2}  {:<11}  {:>8}  {:<10}  {:>8}  {}",
            report.n,
            report.r,
            report.regime.as_str(),
            dash(report.kappa),
            rec.oracle_used.as_str(),
            dash(rec.oracle_kappa),
            if rec.is_ok() { "ok" } else { "MISMATCH" }
        );
    }
    out
}

#[derive(Serialize)]
struct CheckCount {
    check: Check,
    evaluated: u64,
    violations: usize,
}

#[derive(Serialize)]
struct EqualityPattern {
    indices: Vec<usize>,
    primes: Vec<u64>,
    /// How many `n` in the sweep hit this case.
    count: u64,
    first_n: u64,
}

#[derive(Serialize)]
pub struct SelftestSummary<'a> {
    from: u64,
    to: u64,
    checks: Vec<CheckCount>,
    equality_cases: Vec<EqualityPattern>,
    violations: &'a [powergraph::inequalities::Violation],
}

impl<'a> SelftestSummary<'a> {
    pub fn new(from: u64, to: u64, rep: &'a CheckReport) -> Self {
        let checks = Check::ALL
            .iter()
            .map(|&check| CheckCount {
                check,
                evaluated: rep.evaluated[check as usize],
                violations: rep.violations.iter().filter(|v| v.check == check).count(),
            })
            .collect();
        let mut patterns: BTreeMap<(Vec<usize>, Vec<u64>), (u64, u64)> = BTreeMap::new();
        for case in &rep.equality_cases {
            let slot = patterns
                .entry((case.indices.clone(), case.primes.clone()))
                .or_insert((0, case.n));
            slot.0 += 1;
            slot.1 = slot.1.min(case.n);
        }
        let equality_cases = patterns
            .into_iter()
            .map(|((indices, primes), (count, first_n))| EqualityPattern {
                indices,
                primes,
                count,
                first_n,
            })
            .collect();
        SelftestSummary {
            from,
            to,
            checks,
            equality_cases,
            violations: &rep.violations,
        }
    }

    pub fn table(&self) -> String {
        let mut out = format!("inequality checks over n = {}..={}\n\n", self.from, self.to);
        for c in &self.checks {
            let status = if c.violations == 0 { "ok" } else { "VIOLATED" };
            let _ = writeln!(
                out,
                "{:<20} {:>9} evaluated  {status}",
                c.check.name(),
                c.evaluated
            );
        }
        out.push_str("\nequality cases of (t+1)·φ(P) ≥ P\n");
        for e in &self.equality_cases {
            let _ = writeln!(
                out,
                "  I = {:?}, primes {:?}: {} values of n (first {})",
                e.indices, e.primes, e.count, e.first_n
            );
        }
        if !self.violations.is_empty() {
            out.push_str("\nviolations\n");
            for v in self.violations {
                let _ = writeln!(out, "  {} at n = {}: {}", v.check, v.n, v.detail);
            }
        }
        out
    }

    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}
