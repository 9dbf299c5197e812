//! The power graph compressed to its divisor classes.
//!
//! Node `d` stands for the clique `E_d` and weighs `φ(d)`; two classes are
//! adjacent exactly when one divisor divides the other. A minimum cut-set of
//! `P(C_n)` never splits a class, so minimum cuts here are minimum cuts of
//! the full power graph.

mod flow;

use std::collections::VecDeque;

use serde::Serialize;

use crate::arith::{Count, DivisorLattice};
use crate::candidates::{CandidateParams, CutCandidate};
use crate::error::{Error, Result};
use flow::FlowNetwork;

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Debug, Clone)]
pub struct DivisorGraph {
    lattice: DivisorLattice,
    adjacent: Vec<bool>,
    neighbors: Vec<Vec<usize>>,
}

impl DivisorGraph {
    pub fn new(lattice: DivisorLattice) -> Self {
        let len = lattice.len();
        let mut adjacent = vec![false; len * len];
        let mut neighbors = vec![Vec::new(); len];
        for i in 0..len {
            for j in (i + 1)..len {
                let (ci, cj) = (lattice.class(i), lattice.class(j));
                if ci.divides(cj) || cj.divides(ci) {
                    adjacent[i * len + j] = true;
                    adjacent[j * len + i] = true;
                    neighbors[i].push(j);
                    neighbors[j].push(i);
                }
            }
        }
        DivisorGraph {
            lattice,
            adjacent,
            neighbors,
        }
    }

    pub fn lattice(&self) -> &DivisorLattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn weight(&self, i: usize) -> Count {
        self.lattice.class(i).weight()
    }

    pub fn value(&self, i: usize) -> u64 {
        self.lattice.class(i).value()
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacent[i * self.len() + j]
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn is_complete(&self) -> bool {
        self.neighbors.iter().all(|nb| nb.len() + 1 == self.len())
    }

    /// Divisors of a set of node indices, ascending.
    pub fn divisors(&self, nodes: &[usize]) -> Vec<u64> {
        let mut out: Vec<u64> = nodes.iter().map(|&i| self.value(i)).collect();
        out.sort_unstable();
        out
    }

    pub fn total_weight(&self, nodes: &[usize]) -> Result<Count> {
        self.lattice.total_weight(nodes)
    }
}

/// Builds the compressed power graph of `C_n` from its divisor lattice.
pub fn build_divisor_graph(lattice: &DivisorLattice) -> DivisorGraph {
    DivisorGraph::new(lattice.clone())
}

fn removal_mask(g: &DivisorGraph, removed: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; g.len()];
    for &i in removed {
        if i >= g.len() {
            return Err(Error::param(format!("node {i} out of range")));
        }
        mask[i] = true;
    }
    Ok(mask)
}

/// Connected components of the graph left after deleting `removed`. Each
/// component is ascending; components are ordered by their smallest node.
pub fn induced_components(g: &DivisorGraph, removed: &[usize]) -> Result<Vec<Vec<usize>>> {
    let gone = removal_mask(g, removed)?;
    if gone.iter().all(|&x| x) {
        return Err(Error::EmptyResidual);
    }
    let mut seen = gone;
    let mut components = Vec::new();
    for start in 0..g.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    Ok(components)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConnectivityStatus {
    Ok,
    CompleteGraph,
}

/// Minimum weight of a disconnecting class set, with one such set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityResult {
    pub status: ConnectivityStatus,
    pub kappa: Option<Count>,
    /// Node indices of the recovered minimum cut, ascending.
    pub cut: Vec<usize>,
}

impl ConnectivityResult {
    fn complete() -> Self {
        ConnectivityResult {
            status: ConnectivityStatus::CompleteGraph,
            kappa: None,
            cut: Vec::new(),
        }
    }
}

fn to_capacity(w: Count) -> Result<u64> {
    u64::try_from(w).map_err(|_| Error::Overflow)
}

/// Weighted vertex connectivity by max-flow on the node-split network,
/// minimized over every non-adjacent pair.
///
/// Node `i` becomes `in(i) → out(i)` with capacity `φ(d_i)`; each adjacency
/// becomes a pair of arcs `out → in` whose capacity exceeds the total weight.
/// The first pair in scan order attaining the minimum supplies the cut.
pub fn weighted_vertex_connectivity(g: &DivisorGraph) -> Result<ConnectivityResult> {
    let len = g.len();
    let total = g.total_weight(&(0..len).collect::<Vec<_>>())?;
    let unbounded = to_capacity(total)?.checked_add(1).ok_or(Error::Overflow)?;
    let mut net = FlowNetwork::new(2 * len);
    for i in 0..len {
        net.add_arc(2 * i, 2 * i + 1, to_capacity(g.weight(i))?);
    }
    for i in 0..len {
        for &j in g.neighbors(i) {
            net.add_arc(2 * i + 1, 2 * j, unbounded);
        }
    }
    net.seal();

    let mut best: Option<(u64, Vec<usize>)> = None;
    for u in 0..len {
        for v in (u + 1)..len {
            if g.is_adjacent(u, v) {
                continue;
            }
            let limit = best.as_ref().map_or(unbounded, |(b, _)| *b);
            net.reset();
            let flow = net.max_flow(2 * u + 1, 2 * v, limit);
            if flow >= limit {
                continue;
            }
            let side = net.reachable(2 * u + 1);
            let cut: Vec<usize> = (0..len)
                .filter(|&i| side[2 * i] && !side[2 * i + 1])
                .collect();
            if cut.contains(&u) || cut.contains(&v) {
                return Err(Error::Internal(format!(
                    "min cut for n={} contains a terminal",
                    g.lattice().n()
                )));
            }
            if g.total_weight(&cut)? != flow as Count {
                return Err(Error::Internal(format!(
                    "min cut weight differs from flow value {flow} for n={}",
                    g.lattice().n()
                )));
            }
            best = Some((flow, cut));
        }
    }
    Ok(match best {
        None => ConnectivityResult::complete(),
        Some((kappa, cut)) => ConnectivityResult {
            status: ConnectivityStatus::Ok,
            kappa: Some(kappa as Count),
            cut,
        },
    })
}

/// Minimum cut by trying every subset of classes as the removed set.
pub fn exhaustive_min_cut(g: &DivisorGraph, class_limit: usize) -> Result<ConnectivityResult> {
    let len = g.len();
    if len > class_limit || len >= 64 {
        return Err(Error::ExhaustiveLimit {
            classes: len,
            limit: class_limit,
        });
    }
    let adj: Vec<u64> = (0..len)
        .map(|i| g.neighbors(i).iter().fold(0u64, |m, &j| m | 1 << j))
        .collect();
    let weights: Vec<Count> = (0..len).map(|i| g.weight(i)).collect();
    let full: u64 = (1u64 << len) - 1;

    let connected = |alive: u64| -> bool {
        let mut reach = alive & alive.wrapping_neg();
        let mut frontier = reach;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[v];
            }
            frontier = next & alive & !reach;
            reach |= frontier;
        }
        reach == alive
    };

    let mut best: Option<(Count, u64)> = None;
    for removed in 0..=full {
        let alive = full & !removed;
        if alive.count_ones() < 2 {
            continue;
        }
        let mut weight: Count = 0;
        let mut m = removed;
        while m != 0 {
            weight += weights[m.trailing_zeros() as usize];
            m &= m - 1;
        }
        if best.is_some_and(|(b, _)| weight >= b) {
            continue;
        }
        if !connected(alive) {
            best = Some((weight, removed));
        }
    }
    Ok(match best {
        None => ConnectivityResult::complete(),
        Some((kappa, mask)) => ConnectivityResult {
            status: ConnectivityStatus::Ok,
            kappa: Some(kappa),
            cut: (0..len).filter(|&i| mask >> i & 1 == 1).collect(),
        },
    })
}

/// A separation `A ∪ B` of the graph left after removing a cut-set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationWitness {
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
}

/// Removes the candidate and checks the separation its construction
/// predicts: the chain `{n/p_a^k : s ≤ k ≤ n_a}` for `Z_a^s`, the single
/// class `n/(p_a^s p_b^t)` for `X_{a,b}^{s,t}`.
pub fn check_separation(g: &DivisorGraph, candidate: &CutCandidate) -> Result<SeparationWitness> {
    let lat = g.lattice();
    if candidate.n() != lat.n() {
        return Err(Error::param(format!(
            "candidate built for n={} checked against n={}",
            candidate.n(),
            lat.n()
        )));
    }
    let f = lat.factorization();
    let full = f.exponents();
    let side_a: Vec<usize> = match candidate.params() {
        CandidateParams::Z { a, s } => {
            let ai = a - 1;
            (0..g.len())
                .filter(|&i| {
                    let e = lat.class(i).exponents();
                    e[ai] + s <= full[ai] && (0..f.r()).all(|k| k == ai || e[k] == full[k])
                })
                .collect()
        }
        CandidateParams::X { a, b, s, t } => {
            let mut e = full.to_vec();
            e[a - 1] -= s;
            e[b - 1] -= t;
            lat.index_of(&e).into_iter().collect()
        }
    };
    let components = induced_components(g, candidate.members())?;
    let fail = |why: &str| {
        Error::Internal(format!(
            "{} does not separate P(C_{}): {why}",
            candidate.params(),
            lat.n()
        ))
    };
    if components.len() < 2 {
        return Err(fail("residual graph is connected"));
    }
    if side_a.is_empty() || side_a.iter().any(|&i| candidate.contains(i)) {
        return Err(fail("predicted side meets the cut"));
    }
    let side_b: Vec<usize> = (0..g.len())
        .filter(|&i| !candidate.contains(i) && side_a.binary_search(&i).is_err())
        .collect();
    if side_b.is_empty() {
        return Err(fail("other side is empty"));
    }
    if side_a
        .iter()
        .any(|&i| side_b.iter().any(|&j| g.is_adjacent(i, j)))
    {
        return Err(fail("an edge crosses the predicted separation"));
    }
    Ok(SeparationWitness { side_a, side_b })
}
