//! Totient inequalities the cut-set characterization rests on, as
//! predicates that can be evaluated for any `n`.

use std::fmt;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::arith::{factorize, Count, DivisorLattice, Factorization};
use crate::candidates::{enumerate, q_size, z_candidate};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `φ(n/p_i) ≥ φ(n/p_k)` for `i ≤ k`.
    TotientMonotone,
    /// `(t+1)·φ(P_I) ≥ P_I` with its two equality cases.
    ProductBound,
    /// `P_I − φ(P_I)` as an alternating sum, `|I| ≤ 4`.
    InclusionExclusion,
    /// `φ(n/p_j) > n/(p_j p_r) − φ(n/(p_j p_r))` for `j < r`.
    TwoAtMost,
    /// `φ(n/p_a) + |T| > |Q_r^1|` for `r ≥ 3`, `a ≠ b`, `p_b > 2`.
    ToUse,
    /// `|Q_a^1| > |Q_b^1|` and `|Z_a^1| > |Z_b^1|` for `a < b`, `r ≥ 3`.
    QMonotone,
    /// Direction of `s ↦ |Z_a^s|` follows the sign of `P/p_a − 2φ(P/p_a)`.
    ZMonotone,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::TotientMonotone,
        Check::ProductBound,
        Check::InclusionExclusion,
        Check::TwoAtMost,
        Check::ToUse,
        Check::QMonotone,
        Check::ZMonotone,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Check::TotientMonotone => "totient_monotone",
            Check::ProductBound => "product_bound",
            Check::InclusionExclusion => "inclusion_exclusion",
            Check::TwoAtMost => "two_at_most",
            Check::ToUse => "to_use",
            Check::QMonotone => "q_monotone",
            Check::ZMonotone => "z_monotone",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: Check,
    pub n: u64,
    pub detail: String,
}

/// An index set `I` (1-based) at which `(t+1)φ(P_I) = P_I`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EqualityCase {
    pub n: u64,
    pub indices: Vec<usize>,
    pub primes: Vec<u64>,
}

/// Tallies for one `n`, or accumulated over a sweep.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CheckReport {
    /// Instances evaluated per check, indexed like [`Check::ALL`].
    pub evaluated: [u64; 7],
    pub violations: Vec<Violation>,
    pub equality_cases: Vec<EqualityCase>,
}

impl CheckReport {
    fn tally(&mut self, check: Check, n: u64, holds: bool, detail: impl FnOnce() -> String) {
        self.evaluated[check as usize] += 1;
        if !holds {
            self.violations.push(Violation {
                check,
                n,
                detail: detail(),
            });
        }
    }

    fn merge(&mut self, other: CheckReport) {
        for (a, b) in self.evaluated.iter_mut().zip(other.evaluated) {
            *a += b;
        }
        self.violations.extend(other.violations);
        self.equality_cases.extend(other.equality_cases);
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `φ(n / ∏_{i∈drop} p_i)` for 0-based indices.
fn phi_deflated(f: &Factorization, drop: &[usize]) -> Result<Count> {
    let mut e = f.exponents().to_vec();
    for &i in drop {
        e[i] -= 1;
    }
    f.phi_of(&e)
}

fn subsets(r: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << r)).map(move |mask| (0..r).filter(|&i| mask >> i & 1 == 1).collect())
}

fn totient_monotone(f: &Factorization, out: &mut CheckReport) -> Result<()> {
    for i in 0..f.r() {
        for k in i..f.r() {
            let (lhs, rhs) = (phi_deflated(f, &[i])?, phi_deflated(f, &[k])?);
            out.tally(Check::TotientMonotone, f.n(), lhs >= rhs, || {
                format!("φ(n/p_{}) = {lhs} < φ(n/p_{}) = {rhs}", i + 1, k + 1)
            });
        }
    }
    Ok(())
}

fn product_bound(f: &Factorization, out: &mut CheckReport) -> Result<()> {
    let p = f.primes();
    for set in subsets(f.r()) {
        let t = set.len() as Count;
        let (prod, phi) = f.squarefree_part(set.iter().copied())?;
        let lhs = (t + 1) * phi;
        let expect_equal = (set == [0] && p[0] == 2) || (set == [0, 1] && p[0] == 2 && p[1] == 3);
        let label: Vec<usize> = set.iter().map(|i| i + 1).collect();
        out.tally(
            Check::ProductBound,
            f.n(),
            lhs >= prod && (lhs == prod) == expect_equal,
            || format!("I = {label:?}: (t+1)φ = {lhs}, product = {prod}, equality expected: {expect_equal}"),
        );
        if lhs == prod {
            out.equality_cases.push(EqualityCase {
                n: f.n(),
                indices: label,
                primes: set.iter().map(|&i| p[i]).collect(),
            });
        }
    }
    Ok(())
}

fn inclusion_exclusion(f: &Factorization, out: &mut CheckReport) -> Result<()> {
    for set in subsets(f.r()).filter(|s| s.len() <= 4) {
        let (eta, phi) = f.squarefree_part(set.iter().copied())?;
        let mut alternating: i128 = 0;
        for sub in subsets(set.len()) {
            let denom: Count = sub.iter().map(|&j| f.primes()[set[j]] as Count).product();
            let term = (eta / denom) as i128;
            alternating += if sub.len() % 2 == 1 { term } else { -term };
        }
        let lhs = (eta - phi) as i128;
        out.tally(Check::InclusionExclusion, f.n(), lhs == alternating, || {
            format!("I = {set:?}: η − φ(η) = {lhs}, alternating sum = {alternating}")
        });
    }
    Ok(())
}

fn two_at_most(f: &Factorization, out: &mut CheckReport) -> Result<()> {
    let r = f.r();
    if r < 2 {
        return Ok(());
    }
    let n = f.n() as Count;
    for j in 0..r - 1 {
        let lhs = phi_deflated(f, &[j])?;
        let m = n / (f.primes()[j] as Count * f.primes()[r - 1] as Count);
        let rhs = m - phi_deflated(f, &[j, r - 1])?;
        out.tally(Check::TwoAtMost, f.n(), lhs > rhs, || {
            format!("j = {}: φ(n/p_j) = {lhs} <= {rhs}", j + 1)
        });
    }
    Ok(())
}

fn to_use(lat: &DivisorLattice, out: &mut CheckReport) -> Result<()> {
    let f = lat.factorization();
    let r = f.r();
    if r < 3 {
        return Ok(());
    }
    let q_last = q_size(f, r, 1)?;
    for a in 1..=r {
        for b in (1..=r).filter(|&b| b != a && f.primes()[b - 1] > 2) {
            let rest: Vec<usize> = (1..=r).filter(|&j| j != a && j != b).collect();
            let t = enumerate::union_subgroup_size(lat, &rest, b)?;
            let lhs = phi_deflated(f, &[a - 1])? + t;
            out.tally(Check::ToUse, f.n(), lhs > q_last, || {
                format!("a = {a}, b = {b}: φ(n/p_a) + |T| = {lhs} <= |Q_r^1| = {q_last}")
            });
        }
    }
    Ok(())
}

fn q_monotone(lat: &DivisorLattice, out: &mut CheckReport) -> Result<()> {
    let f = lat.factorization();
    let r = f.r();
    if r < 3 {
        return Ok(());
    }
    for a in 1..=r {
        for b in a + 1..=r {
            let (qa, qb) = (q_size(f, a, 1)?, q_size(f, b, 1)?);
            let (za, zb) = (
                z_candidate(lat, a, 1)?.size(),
                z_candidate(lat, b, 1)?.size(),
            );
            out.tally(Check::QMonotone, f.n(), qa > qb && za > zb, || {
                format!("a = {a}, b = {b}: |Q| {qa} vs {qb}, |Z| {za} vs {zb}")
            });
        }
    }
    Ok(())
}

fn z_monotone(lat: &DivisorLattice, out: &mut CheckReport) -> Result<()> {
    let f = lat.factorization();
    let r = f.r();
    if r < 2 {
        return Ok(());
    }
    for a in 1..=r {
        let na = f.exponent(a)?;
        // r = 2 is only constrained when p_1 = 2, where |Z_2^s| is constant
        let flat_case = r == 2 && f.primes()[0] == 2 && a == 2;
        if na < 2 || (r == 2 && !flat_case) {
            continue;
        }
        let (rest, phi_rest) = f.squarefree_part((0..r).filter(|&i| i != a - 1))?;
        let sizes = (1..=na)
            .map(|s| z_candidate(lat, a, s).map(|z| z.size()))
            .collect::<Result<Vec<_>>>()?;
        let holds = match (2 * phi_rest).cmp(&rest) {
            std::cmp::Ordering::Greater => sizes.windows(2).all(|w| w[0] < w[1]),
            std::cmp::Ordering::Less => sizes.windows(2).all(|w| w[0] > w[1]),
            std::cmp::Ordering::Equal => flat_case && sizes.windows(2).all(|w| w[0] == w[1]),
        };
        out.tally(Check::ZMonotone, f.n(), holds, || {
            format!(
                "a = {a}: 2φ = {}, P/p_a = {rest}, sizes {sizes:?}",
                2 * phi_rest
            )
        });
    }
    Ok(())
}

/// Evaluates every check at one `n`.
pub fn check_all(lat: &DivisorLattice) -> Result<CheckReport> {
    let f = lat.factorization();
    let mut out = CheckReport::default();
    totient_monotone(f, &mut out)?;
    product_bound(f, &mut out)?;
    inclusion_exclusion(f, &mut out)?;
    two_at_most(f, &mut out)?;
    to_use(lat, &mut out)?;
    q_monotone(lat, &mut out)?;
    z_monotone(lat, &mut out)?;
    Ok(out)
}

/// Evaluates every check over a range of `n`.
pub fn check_range(range: RangeInclusive<u64>, class_cap: usize) -> Result<CheckReport> {
    let mut total = CheckReport::default();
    for n in range.filter(|&n| n >= 2) {
        total.merge(check_all(&DivisorLattice::new(factorize(n)?, class_cap)?)?);
    }
    Ok(total)
}
