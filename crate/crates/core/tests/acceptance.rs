//! End-to-end acceptance checks. Prints one `[PASS]` or `[FAIL]` line per
//! criterion and exits nonzero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use powergraph::arith::{double_totient_sum, factorize, partial_totient_sum, Count};
use powergraph::candidates::{
    boundary_layers, enumerate, q_ab_size, q_size, union_subgroup_size, x_candidate, z_candidate,
    CandidateParams,
};
use powergraph::graph::{
    check_separation, exhaustive_min_cut, induced_components, weighted_vertex_connectivity,
    DEFAULT_EXHAUSTIVE_LIMIT,
};
use powergraph::inequalities::{check_range, Check};
use powergraph::theorem::{
    all_candidates, minimum_cutset, verify, verify_range, OracleMode, VerifyOptions,
};
use powergraph::{DivisorGraph, DivisorLattice, Regime};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

const CAP: usize = 4096;

fn lattice(n: u64) -> DivisorLattice {
    DivisorLattice::new(factorize(n).unwrap(), CAP).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Totients by sieve, for the direct sums.
fn phi_table(limit: usize) -> Vec<Count> {
    let mut phi: Vec<Count> = (0..=limit as Count).collect();
    for p in 2..=limit {
        if phi[p] == p as Count {
            for m in (p..=limit).step_by(p) {
                phi[m] -= phi[m] / p as Count;
            }
        }
    }
    phi
}

fn exhaustive_equivalence() -> Outcome {
    let mut checked = 0;
    for n in 2..=500u64 {
        let lat = lattice(n);
        if lat.factorization().r() < 2 || lat.len() > DEFAULT_EXHAUSTIVE_LIMIT {
            continue;
        }
        let formula = minimum_cutset(&lat).map_err(|e| e.to_string())?.kappa;
        let oracle = exhaustive_min_cut(&DivisorGraph::new(lat), DEFAULT_EXHAUSTIVE_LIMIT)
            .map_err(|e| e.to_string())?
            .kappa;
        ensure(formula == oracle, || {
            format!("n = {n}: formula {formula:?}, exhaustive {oracle:?}")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} instances"))
}

fn maxflow_equivalence() -> Outcome {
    let sweep = verify_range(
        2..=20000,
        VerifyOptions::new(OracleMode::Maxflow),
        CAP,
        4,
        false,
    )
    .map_err(|e| e.to_string())?;
    let mut checked = 0;
    for v in sweep.entries.iter().filter(|v| v.report.r >= 2) {
        ensure(
            v.record.matched && v.record.oracle_kappa == v.report.kappa,
            || {
                format!(
                    "n = {}: formula {:?}, max-flow {:?}",
                    v.report.n, v.report.kappa, v.record.oracle_kappa
                )
            },
        )?;
        checked += 1;
    }
    Ok(format!("{checked} instances"))
}

fn theorem_form() -> Outcome {
    let mut checked = 0;
    for n in 2..=20000u64 {
        let f = factorize(n).unwrap();
        if f.r() < 4 {
            continue;
        }
        let lat = lattice(n);
        let report = minimum_cutset(&lat).map_err(|e| e.to_string())?;
        let graph = DivisorGraph::new(lat);
        let oracle = weighted_vertex_connectivity(&graph).map_err(|e| e.to_string())?;
        let family_min = report.family.iter().map(|c| c.size()).min();
        ensure(oracle.kappa == family_min, || {
            format!(
                "n = {n}: oracle {:?}, family minimum {family_min:?}",
                oracle.kappa
            )
        })?;
        ensure(
            report
                .family
                .iter()
                .any(|c| c.members() == oracle.cut.as_slice()),
            || {
                format!(
                    "n = {n}: oracle cut {:?} is not a family member",
                    graph.divisors(&oracle.cut)
                )
            },
        )?;
        ensure(
            induced_components(&graph, &oracle.cut)
                .map_err(|e| e.to_string())?
                .len()
                >= 2,
            || format!("n = {n}: oracle cut does not disconnect"),
        )?;
        let disconnecting = report
            .achieving
            .iter()
            .filter(|c| Some(c.size()) == oracle.kappa)
            .filter(|c| {
                check_separation(&graph, c).is_ok()
                    && induced_components(&graph, c.members()).is_ok_and(|comps| comps.len() >= 2)
            })
            .count();
        ensure(disconnecting > 0, || {
            format!("n = {n}: no family member of weight κ disconnects")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} instances with r >= 4"))
}

fn spot_values() -> Outcome {
    let cases: [(u64, Count, Option<CandidateParams>); 5] = [
        (6, 3, None),
        (12, 6, None),
        (30, 12, None),
        (210, 70, Some(CandidateParams::Z { a: 4, s: 1 })),
        (
            2310,
            630,
            Some(CandidateParams::X {
                a: 4,
                b: 5,
                s: 1,
                t: 1,
            }),
        ),
    ];
    for (n, kappa, via) in cases {
        let v =
            verify(&lattice(n), VerifyOptions::new(OracleMode::Both)).map_err(|e| e.to_string())?;
        ensure(v.report.kappa == Some(kappa), || {
            format!("κ({n}) = {:?}, want {kappa}", v.report.kappa)
        })?;
        ensure(
            v.record.is_ok() && v.record.oracle_kappa == Some(kappa),
            || format!("n = {n}: oracles disagree: {:?}", v.record),
        )?;
        if n <= 500 {
            ensure(v.record.oracle_used == powergraph::OracleUsed::Both, || {
                format!("n = {n}: exhaustive oracle did not run")
            })?;
        }
        if let Some(p) = via {
            ensure(v.report.achieving.iter().any(|c| c.params() == p), || {
                format!("n = {n}: {p} does not achieve κ")
            })?;
        }
    }
    let z51 = z_candidate(&lattice(2310), 5, 1)
        .map_err(|e| e.to_string())?
        .size();
    ensure(z51 == 642, || {
        format!("|Z_5^1| for n = 2310 is {z51}, want 642")
    })?;
    Ok("6, 12, 30, 210, 2310".into())
}

/// Every closed form against a direct sum over divisors of `n`, using the
/// sieve totient rather than the library's.
fn formula_agreement() -> Outcome {
    let phi = phi_table(5000);
    let mut compared = 0u64;
    let mut agree = |what: &str, n: u64, closed: Count, direct: Count| -> Result<(), String> {
        compared += 1;
        ensure(closed == direct, || {
            format!("{what} at n = {n}: closed {closed}, direct {direct}")
        })
    };
    for n in 2..=5000u64 {
        let lat = lattice(n);
        let f = lat.factorization().clone();
        let r = f.r();
        let divisors: Vec<u64> = lat.classes().iter().map(|c| c.value()).collect();
        let sum_over = |keep: &dyn Fn(u64) -> bool| -> Count {
            divisors
                .iter()
                .filter(|&&d| keep(d))
                .map(|&d| phi[d as usize])
                .sum()
        };
        let err = |e: powergraph::Error| e.to_string();
        agree(
            "Σφ(d)",
            n,
            lat.total_weight(&(0..lat.len()).collect::<Vec<_>>())
                .map_err(err)?,
            n as Count,
        )?;

        for a in 1..=r {
            let pa = f.prime(a).unwrap();
            let na = f.exponent(a).unwrap();
            for s in 0..=na {
                for k in 0..=s {
                    let direct = (k..=s).map(|l| phi[(n / pa.pow(l)) as usize]).sum();
                    agree(
                        "partial totient sum",
                        n,
                        partial_totient_sum(&f, a, k, s).map_err(err)?,
                        direct,
                    )?;
                }
            }
            for b in (1..=r).filter(|&b| b != a) {
                let pb = f.prime(b).unwrap();
                let nb = f.exponent(b).unwrap();
                for s in 0..=na {
                    for t in 0..=nb {
                        let direct = (s..=na)
                            .flat_map(|k| (t..=nb).map(move |l| (k, l)))
                            .map(|(k, l)| phi[(n / (pa.pow(k) * pb.pow(l))) as usize])
                            .sum();
                        agree(
                            "double totient sum",
                            n,
                            double_totient_sum(&f, a, b, s, t).map_err(err)?,
                            direct,
                        )?;
                    }
                }
            }
        }
        if r < 2 {
            continue;
        }

        let primes = f.primes().to_vec();
        // d lies in S_m exactly when d | m
        let below_some = |among: &[usize], m_of: &dyn Fn(usize) -> u64| {
            sum_over(&|d| among.iter().any(|&i| m_of(i).is_multiple_of(d)))
        };
        for a in 1..=r {
            let pa = primes[a - 1];
            let na = f.exponent(a).unwrap();
            let others: Vec<usize> = (1..=r).filter(|&i| i != a).collect();
            for s in 1..=na {
                let m_of = |i: usize| n / (primes[i - 1] * pa.pow(s));
                let direct = below_some(&others, &m_of);
                agree("|Q_a^s|", n, q_size(&f, a, s).map_err(err)?, direct)?;
                agree(
                    "|Q_a^s| enumerated",
                    n,
                    enumerate::q_size(&lat, a, s).map_err(err)?,
                    direct,
                )?;

                // Z_a^s: top layers n/p_a^l for l < s, plus Q_a^s
                let top: Vec<u64> = (0..s).map(|l| n / pa.pow(l)).collect();
                let z_direct: BTreeSet<u64> = divisors
                    .iter()
                    .copied()
                    .filter(|&d| top.contains(&d) || others.iter().any(|&i| m_of(i) % d == 0))
                    .collect();
                let z = z_candidate(&lat, a, s).map_err(err)?;
                ensure(
                    z.divisors().iter().copied().collect::<BTreeSet<_>>() == z_direct,
                    || format!("Z_{a}^{s} classes at n = {n}"),
                )?;
                agree(
                    "|Z_a^s|",
                    n,
                    z.size(),
                    z_direct.iter().map(|&d| phi[d as usize]).sum(),
                )?;

                if r >= 3 {
                    for b in (1..=r).filter(|&b| b != a) {
                        let rest: Vec<usize> = (1..=r).filter(|&i| i != a && i != b).collect();
                        let direct = below_some(&rest, &m_of);
                        agree("|Q_ab^s|", n, q_ab_size(&f, a, b, s).map_err(err)?, direct)?;
                        agree(
                            "|Q_ab^s| enumerated",
                            n,
                            enumerate::q_ab_size(&lat, a, b, s).map_err(err)?,
                            direct,
                        )?;
                    }
                }
            }

            // unions over every nonempty I₁ ⊆ [r] \ {a}
            for mask in 1u32..(1 << others.len()) {
                let within: Vec<usize> = others
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| mask >> j & 1 == 1)
                    .map(|(_, &i)| i)
                    .collect();
                let direct = below_some(&within, &|i| n / (primes[i - 1] * pa));
                agree(
                    "subgroup union",
                    n,
                    union_subgroup_size(&f, &within, a).map_err(err)?,
                    direct,
                )?;
                agree(
                    "subgroup union enumerated",
                    n,
                    enumerate::union_subgroup_size(&lat, &within, a).map_err(err)?,
                    direct,
                )?;
            }

            for b in (1..=r).filter(|&b| b != a) {
                let pb = primes[b - 1];
                let nb = f.exponent(b).unwrap();
                for s in 1..=na {
                    for t in 1..=nb {
                        let layers = boundary_layers(&lat, a, b, s, t).map_err(err)?;
                        let counted = enumerate::boundary_layers(&lat, a, b, s, t).map_err(err)?;
                        agree("|L|", n, layers.l_size, counted.l_size)?;
                        agree("|M|", n, layers.m_size, counted.m_size)?;
                        agree("|N|", n, layers.n_size, counted.n_size)?;
                        if r < 3 {
                            continue;
                        }
                        let m = n / (pa.pow(s) * pb.pow(t));
                        let x_direct: BTreeSet<u64> = divisors
                            .iter()
                            .copied()
                            .filter(|&d| d != m && (d % m == 0 || m % d == 0))
                            .collect();
                        let x = x_candidate(&lat, a, b, s, t).map_err(err)?;
                        ensure(
                            x.divisors().iter().copied().collect::<BTreeSet<_>>() == x_direct,
                            || format!("X_{{{a},{b}}}^{{{s},{t}}} classes at n = {n}"),
                        )?;
                        agree(
                            "|X|",
                            n,
                            x.size(),
                            x_direct.iter().map(|&d| phi[d as usize]).sum(),
                        )?;
                    }
                }
            }
        }
    }
    Ok(format!("{compared} comparisons over n in [2, 5000]"))
}

fn inequality_suite() -> Outcome {
    let rep = check_range(2..=5000, CAP).map_err(|e| e.to_string())?;
    if let Some(v) = rep.violations.first() {
        return Err(format!(
            "{} violations, first {} at n = {}: {}",
            rep.violations.len(),
            v.check,
            v.n,
            v.detail
        ));
    }
    for check in Check::ALL {
        ensure(rep.evaluated[check as usize] > 0, || {
            format!("{check} never evaluated")
        })?;
    }
    let patterns: BTreeSet<(Vec<usize>, Vec<u64>)> = rep
        .equality_cases
        .iter()
        .map(|c| (c.indices.clone(), c.primes.clone()))
        .collect();
    let expected = BTreeSet::from([(vec![1], vec![2]), (vec![1, 2], vec![2, 3])]);
    ensure(patterns == expected, || {
        format!("equality cases {patterns:?}")
    })?;
    Ok(format!("{} evaluations", rep.evaluated.iter().sum::<u64>()))
}

fn regime_counts() -> Outcome {
    let mut checked = 0;
    for n in 2..=20000u64 {
        let f = factorize(n).unwrap();
        let regime = Regime::classify(&f);
        let expected = match regime {
            Regime::R2P1Even => f.exponent(2).unwrap() as usize,
            Regime::R2P1Odd | Regime::R3P1Odd | Regime::R3P1Even => 1,
            _ => continue,
        };
        let lat = lattice(n);
        let report = minimum_cutset(&lat).map_err(|e| e.to_string())?;
        let all = all_candidates(&lat).map_err(|e| e.to_string())?;
        let min = all.iter().map(|c| c.size()).min();
        ensure(min == report.kappa, || {
            format!(
                "n = {n}: comparison minimum {min:?} below κ {:?}",
                report.kappa
            )
        })?;
        let tied: BTreeSet<&[usize]> = all
            .iter()
            .filter(|c| Some(c.size()) == min)
            .map(|c| c.members())
            .collect();
        ensure(tied.len() == expected, || {
            format!(
                "n = {n} ({regime}): {} distinct candidates achieve κ, want {expected}",
                tied.len()
            )
        })?;
        checked += 1;
    }
    Ok(format!("{checked} instances with r in {{2, 3}}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        (1, "exhaustive oracle equivalence", exhaustive_equivalence),
        (2, "max-flow oracle equivalence", maxflow_equivalence),
        (3, "theorem form for r >= 4", theorem_form),
        (4, "spot values", spot_values),
        (5, "closed forms match enumeration", formula_agreement),
        (6, "inequality suite", inequality_suite),
        (7, "regime counts", regime_counts),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] criterion {id}: {name} ({detail}, {secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {id}: {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
