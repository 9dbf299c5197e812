//! Stable JSON and CSV shapes for reports.

use serde::Serialize;

use crate::arith::Count;
use crate::candidates::CutCandidate;
use crate::theorem::{MinCutReport, OracleUsed, Regime, VerificationRecord};

pub const CSV_HEADER: [&str; 7] = [
    "n",
    "r",
    "regime",
    "kappa",
    "achieving_kind",
    "achieving_params",
    "match",
];

#[derive(Debug, Clone, Serialize)]
pub struct ReportJson<'a> {
    pub n: u64,
    pub r: usize,
    pub regime: Regime,
    pub kappa: Option<Count>,
    pub achieving: &'a [CutCandidate],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationJson {
    pub oracle_kappa: Option<Count>,
    pub oracle_used: OracleUsed,
    #[serde(rename = "match")]
    pub matched: bool,
    pub disconnection_ok: bool,
    pub elapsed_ms: u64,
}

impl VerificationJson {
    /// `timing = false` writes `elapsed_ms: 0` so output is reproducible.
    pub fn new(record: &VerificationRecord, timing: bool) -> Self {
        VerificationJson {
            oracle_kappa: record.oracle_kappa,
            oracle_used: record.oracle_used,
            matched: record.matched,
            disconnection_ok: record.disconnection_ok,
            elapsed_ms: if timing {
                record.elapsed.as_millis() as u64
            } else {
                0
            },
        }
    }
}

impl<'a> ReportJson<'a> {
    pub fn new(
        report: &'a MinCutReport,
        record: Option<&VerificationRecord>,
        timing: bool,
    ) -> Self {
        ReportJson {
            n: report.n,
            r: report.r,
            regime: report.regime,
            kappa: report.kappa,
            achieving: &report.achieving,
            verification: record.map(|rec| VerificationJson::new(rec, timing)),
        }
    }
}

/// One CSV row in [`CSV_HEADER`] order. Several achieving candidates are
/// joined with `|`; `match` is empty when nothing was verified.
pub fn csv_row(report: &MinCutReport, record: Option<&VerificationRecord>) -> [String; 7] {
    let kinds: Vec<String> = report
        .achieving
        .iter()
        .map(|c| c.kind().to_string())
        .collect();
    let params: Vec<String> = report
        .achieving
        .iter()
        .map(|c| c.params().compact())
        .collect();
    [
        report.n.to_string(),
        report.r.to_string(),
        report.regime.to_string(),
        report.kappa.map(|k| k.to_string()).unwrap_or_default(),
        kinds.join("|"),
        params.join("|"),
        record.map(|r| r.matched.to_string()).unwrap_or_default(),
    ]
}
