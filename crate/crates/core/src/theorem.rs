//! The minimum cut value of `P(C_n)` from the candidate families, and its
//! verification against the graph oracles.
//!
//! For `r = 2` and `r = 3` the minimum cut-sets are known explicitly; for
//! `r ≥ 4` every minimum cut-set is `Z_r^1`, some `Z_a^{n_a}` with
//! `n_a ≥ 2`, or some `X_{a,b}^{s,t}`. Each family member is a cut-set, so
//! the connectivity is the smallest family size and no graph search is
//! needed. The oracles only confirm it.

use std::fmt;
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorize, Count, DivisorLattice, Factorization};
use crate::candidates::{x_candidate, z_candidate, CutCandidate};
use crate::error::{Error, Result};
use crate::graph::{
    check_separation, exhaustive_min_cut, weighted_vertex_connectivity, ConnectivityResult,
    DivisorGraph,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    #[serde(rename = "prime_power")]
    PrimePower,
    #[serde(rename = "r2_p1_odd")]
    R2P1Odd,
    #[serde(rename = "r2_p1_even")]
    R2P1Even,
    #[serde(rename = "r3_p1_odd")]
    R3P1Odd,
    #[serde(rename = "r3_p1_even")]
    R3P1Even,
    #[serde(rename = "r_ge_4")]
    RGe4,
}

impl Regime {
    pub fn classify(f: &Factorization) -> Regime {
        let even = f.primes()[0] == 2;
        match (f.r(), even) {
            (1, _) => Regime::PrimePower,
            (2, false) => Regime::R2P1Odd,
            (2, true) => Regime::R2P1Even,
            (3, false) => Regime::R3P1Odd,
            (3, true) => Regime::R3P1Even,
            _ => Regime::RGe4,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::PrimePower => "prime_power",
            Regime::R2P1Odd => "r2_p1_odd",
            Regime::R2P1Even => "r2_p1_even",
            Regime::R3P1Odd => "r3_p1_odd",
            Regime::R3P1Even => "r3_p1_even",
            Regime::RGe4 => "r_ge_4",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// All `X_{a,b}^{s,t}` over ordered pairs `a ≠ b`.
fn all_x(lat: &DivisorLattice, out: &mut Vec<CutCandidate>) -> Result<()> {
    let f = lat.factorization();
    for a in 1..=f.r() {
        for b in (1..=f.r()).filter(|&b| b != a) {
            for s in 1..=f.exponent(a)? {
                for t in 1..=f.exponent(b)? {
                    out.push(x_candidate(lat, a, b, s, t)?);
                }
            }
        }
    }
    Ok(())
}

/// The candidates among which every minimum cut-set lies, by regime.
pub fn candidate_family(lat: &DivisorLattice) -> Result<Vec<CutCandidate>> {
    let f = lat.factorization();
    let r = f.r();
    let mut out = Vec::new();
    match Regime::classify(f) {
        Regime::PrimePower => {}
        Regime::R2P1Odd => out.push(z_candidate(lat, 2, 1)?),
        Regime::R2P1Even => {
            for s in 1..=f.exponent(2)? {
                out.push(z_candidate(lat, 2, s)?);
            }
        }
        Regime::R3P1Odd => out.push(z_candidate(lat, 3, 1)?),
        Regime::R3P1Even => out.push(z_candidate(lat, 3, f.exponent(3)?)?),
        Regime::RGe4 => {
            out.push(z_candidate(lat, r, 1)?);
            for a in 1..=r {
                let na = f.exponent(a)?;
                if na >= 2 {
                    out.push(z_candidate(lat, a, na)?);
                }
            }
            all_x(lat, &mut out)?;
        }
    }
    Ok(out)
}

/// Every `Z_a^s` (for `r ≥ 2`) and every `X_{a,b}^{s,t}` (for `r ≥ 3`),
/// regardless of regime.
pub fn all_candidates(lat: &DivisorLattice) -> Result<Vec<CutCandidate>> {
    let f = lat.factorization();
    let mut out = Vec::new();
    if f.r() < 2 {
        return Ok(out);
    }
    for a in 1..=f.r() {
        for s in 1..=f.exponent(a)? {
            out.push(z_candidate(lat, a, s)?);
        }
    }
    if f.r() >= 3 {
        all_x(lat, &mut out)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCutReport {
    pub n: u64,
    pub r: usize,
    pub regime: Regime,
    /// `None` for prime powers, whose power graph is complete.
    pub kappa: Option<Count>,
    /// Family members of size `kappa`, sorted by kind then parameters.
    pub achieving: Vec<CutCandidate>,
    pub family_size: usize,
    /// The whole family, sorted by size, then kind and parameters.
    pub family: Vec<CutCandidate>,
}

pub fn minimum_cutset(lat: &DivisorLattice) -> Result<MinCutReport> {
    let f = lat.factorization();
    let mut family = candidate_family(lat)?;
    family.sort_by_key(|c| (c.size(), c.kind(), c.params()));
    let kappa = family.first().map(CutCandidate::size);
    let mut achieving: Vec<CutCandidate> = family
        .iter()
        .filter(|c| Some(c.size()) == kappa)
        .cloned()
        .collect();
    achieving.sort_by_key(|c| (c.kind(), c.params()));
    Ok(MinCutReport {
        n: f.n(),
        r: f.r(),
        regime: Regime::classify(f),
        kappa,
        achieving,
        family_size: family.len(),
        family,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMode {
    Maxflow,
    Exhaustive,
    Both,
    None,
}

impl OracleMode {
    fn wants_maxflow(self) -> bool {
        matches!(self, OracleMode::Maxflow | OracleMode::Both)
    }

    fn wants_exhaustive(self) -> bool {
        matches!(self, OracleMode::Exhaustive | OracleMode::Both)
    }
}

/// Which oracles actually ran.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleUsed {
    Maxflow,
    Exhaustive,
    Both,
    None,
}

impl OracleUsed {
    pub fn as_str(&self) -> &'static str {
        match self {
            OracleUsed::Maxflow => "maxflow",
            OracleUsed::Exhaustive => "exhaustive",
            OracleUsed::Both => "both",
            OracleUsed::None => "none",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationRecord {
    pub n: u64,
    pub formula_kappa: Option<Count>,
    pub oracle_kappa: Option<Count>,
    pub oracle_used: OracleUsed,
    /// Formula and every oracle that ran agree. Vacuously true when no
    /// oracle ran.
    pub matched: bool,
    /// Every achieving candidate separates the graph as constructed.
    pub disconnection_ok: bool,
    /// Whether each oracle's recovered cut is, as a class set, a member of
    /// the candidate family. `None` when no oracle produced a cut.
    pub cut_in_family: Option<bool>,
    pub elapsed: Duration,
}

impl VerificationRecord {
    pub fn is_ok(&self) -> bool {
        self.matched && self.disconnection_ok && self.cut_in_family != Some(false)
    }
}

/// A report together with its verification.
#[derive(Debug, Clone)]
pub struct Verified {
    pub report: MinCutReport,
    pub record: VerificationRecord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub mode: OracleMode,
    /// Largest class count the exhaustive oracle is run on.
    pub exhaustive_limit: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: OracleMode::Both,
            exhaustive_limit: crate::graph::DEFAULT_EXHAUSTIVE_LIMIT,
        }
    }
}

impl VerifyOptions {
    pub fn new(mode: OracleMode) -> Self {
        VerifyOptions {
            mode,
            ..Default::default()
        }
    }
}

pub fn verify(lat: &DivisorLattice, opts: VerifyOptions) -> Result<Verified> {
    let started = Instant::now();
    let report = minimum_cutset(lat)?;
    let graph = DivisorGraph::new(lat.clone());

    let disconnection_ok = report
        .achieving
        .iter()
        .all(|c| check_separation(&graph, c).is_ok());

    let maxflow = if opts.mode.wants_maxflow() {
        Some(weighted_vertex_connectivity(&graph)?)
    } else {
        None
    };
    let exhaustive = if opts.mode.wants_exhaustive() {
        match exhaustive_min_cut(&graph, opts.exhaustive_limit) {
            Ok(res) => Some(res),
            Err(Error::ExhaustiveLimit { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let ran: Vec<&ConnectivityResult> = maxflow.iter().chain(exhaustive.iter()).collect();

    let oracle_used = match (maxflow.is_some(), exhaustive.is_some()) {
        (true, true) => OracleUsed::Both,
        (true, false) => OracleUsed::Maxflow,
        (false, true) => OracleUsed::Exhaustive,
        (false, false) => OracleUsed::None,
    };
    let oracle_kappa = ran.first().and_then(|res| res.kappa);
    let matched = ran.iter().all(|res| res.kappa == report.kappa);
    let cuts: Vec<&ConnectivityResult> =
        ran.into_iter().filter(|res| res.kappa.is_some()).collect();
    let cut_in_family = (!cuts.is_empty()).then(|| {
        cuts.iter().all(|res| {
            report
                .family
                .iter()
                .any(|c| c.members() == res.cut.as_slice())
        })
    });

    let record = VerificationRecord {
        n: lat.n(),
        formula_kappa: report.kappa,
        oracle_kappa,
        oracle_used,
        matched,
        disconnection_ok,
        cut_in_family,
        elapsed: started.elapsed(),
    };
    Ok(Verified { report, record })
}

/// Result of a range sweep. Entries are in ascending `n`. When the sweep
/// stops at a failure, that entry is the last one kept.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub entries: Vec<Verified>,
    pub aborted: bool,
}

impl SweepOutcome {
    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|v| !v.record.is_ok()).count()
    }
}

const SWEEP_CHUNK: u64 = 256;

/// Verifies every `n` in `range` on a pool of `workers` threads. With
/// `stop_at_failure` the sweep ends at the first failing record.
pub fn verify_range(
    range: RangeInclusive<u64>,
    opts: VerifyOptions,
    class_cap: usize,
    workers: usize,
    stop_at_failure: bool,
) -> Result<SweepOutcome> {
    let (lo, hi) = (*range.start(), *range.end());
    if lo < 2 {
        return Err(Error::OrderTooSmall);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("worker pool: {e}")))?;

    let mut entries = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = start.saturating_add(SWEEP_CHUNK - 1).min(hi);
        let chunk: Vec<Result<Verified>> = pool.install(|| {
            (start..=end)
                .into_par_iter()
                .map(|n| verify(&DivisorLattice::new(factorize(n)?, class_cap)?, opts))
                .collect()
        });
        for item in chunk {
            let v = item?;
            let failed = !v.record.is_ok();
            entries.push(v);
            if failed && stop_at_failure {
                return Ok(SweepOutcome {
                    entries,
                    aborted: true,
                });
            }
        }
        if end == hi {
            break;
        }
        start = end + 1;
    }
    Ok(SweepOutcome {
        entries,
        aborted: false,
    })
}
