//! The two candidate families of cut-sets and the auxiliary set sizes.
//!
//! `Z_a^s` removes the top `s` layers `E_n, E_{n/p_a}, …, E_{n/p_a^{s-1}}`
//! together with `Q_a^s`, the union of the subgroups `S_{n/(p_i p_a^s)}` for
//! `i ≠ a`. `X_{a,b}^{s,t}` is the full neighbourhood of the class
//! `E_{n/(p_a^s p_b^t)}`: the classes `H` above it and the nongenerators `K`
//! of the subgroup below it.
//!
//! Every size here has a closed form and a class enumeration. Candidate
//! construction computes both and fails with [`Error::Internal`] if they
//! differ. Prime indices are 1-based throughout.

use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::arith::{add, exact_div, mul, pow, sub, Count, DivisorLattice, Factorization};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CandidateKind {
    Z,
    X,
}

impl fmt::Display for CandidateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CandidateKind::Z => f.write_str("Z"),
            CandidateKind::X => f.write_str("X"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(untagged)]
pub enum CandidateParams {
    Z { a: usize, s: u32 },
    X { a: usize, b: usize, s: u32, t: u32 },
}

impl CandidateParams {
    pub fn kind(&self) -> CandidateKind {
        match self {
            CandidateParams::Z { .. } => CandidateKind::Z,
            CandidateParams::X { .. } => CandidateKind::X,
        }
    }

    /// `a=4 s=1` / `a=3 b=4 s=1 t=1`, as used in CSV output.
    pub fn compact(&self) -> String {
        match *self {
            CandidateParams::Z { a, s } => format!("a={a} s={s}"),
            CandidateParams::X { a, b, s, t } => format!("a={a} b={b} s={s} t={t}"),
        }
    }
}

impl fmt::Display for CandidateParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CandidateParams::Z { a, s } => write!(f, "Z_{a}^{s}"),
            CandidateParams::X { a, b, s, t } => write!(f, "X_{{{a},{b}}}^{{{s},{t}}}"),
        }
    }
}

/// A candidate cut-set as a set of divisor classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutCandidate {
    n: u64,
    params: CandidateParams,
    members: Vec<usize>,
    divisors: Vec<u64>,
    size: Count,
}

impl CutCandidate {
    fn from_members(
        lat: &DivisorLattice,
        params: CandidateParams,
        members: Vec<usize>,
        closed_form: Count,
    ) -> Result<Self> {
        let enumerated = lat.total_weight(&members)?;
        if enumerated != closed_form {
            return Err(Error::Internal(format!(
                "{params} for n={}: closed form {closed_form} != enumerated {enumerated}",
                lat.n()
            )));
        }
        let mut divisors: Vec<u64> = members.iter().map(|&i| lat.class(i).value()).collect();
        divisors.sort_unstable();
        Ok(CutCandidate {
            n: lat.n(),
            params,
            members,
            divisors,
            size: closed_form,
        })
    }

    /// Order of the group the candidate was built for.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn kind(&self) -> CandidateKind {
        self.params.kind()
    }

    pub fn params(&self) -> CandidateParams {
        self.params
    }

    /// Lattice indices of the member classes, ascending.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Member divisors, ascending.
    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    /// Number of group elements in the cut-set.
    pub fn size(&self) -> Count {
        self.size
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.binary_search(&index).is_ok()
    }
}

impl Serialize for CutCandidate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CutCandidate", 4)?;
        st.serialize_field("kind", &self.kind())?;
        st.serialize_field("params", &self.params)?;
        st.serialize_field("size", &self.size)?;
        st.serialize_field("classes", &self.divisors)?;
        st.end()
    }
}

/// Sizes of the boundary sets `L`, `M`, `N` of `K_{a,b}^{s,t}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundaryLayers {
    pub l_size: Count,
    pub m_size: Count,
    pub n_size: Count,
}

fn need_r(f: &Factorization, min: usize) -> Result<()> {
    if f.r() >= min {
        return Ok(());
    }
    if min == 2 {
        Err(Error::NoSecondPrime)
    } else {
        Err(Error::param(format!("need r >= {min}, got r = {}", f.r())))
    }
}

fn layer(f: &Factorization, a: usize, s: u32) -> Result<(usize, u32)> {
    let ai = f.index(a)?;
    let na = f.exponents()[ai];
    if s == 0 || s > na {
        return Err(Error::param(format!(
            "need 1 <= s <= n_{a} = {na}, got {s}"
        )));
    }
    Ok((ai, na))
}

fn pair(f: &Factorization, a: usize, b: usize) -> Result<(usize, usize)> {
    let (ai, bi) = (f.index(a)?, f.index(b)?);
    if ai == bi {
        return Err(Error::param("need a != b"));
    }
    Ok((ai, bi))
}

/// `|Q_a^s|`, the union of `S_{n/(p_i p_a^s)}` over `i ≠ a`.
pub fn q_size(f: &Factorization, a: usize, s: u32) -> Result<Count> {
    need_r(f, 2)?;
    let (ai, _) = layer(f, a, s)?;
    let pa = f.primes()[ai] as Count;
    let (rest, phi_rest) = f.squarefree_part((0..f.r()).filter(|&i| i != ai))?;
    let bracket = sub(rest, phi_rest)?;
    exact_div(mul(f.n_over_radical(), bracket)?, pow(pa, s - 1)?)
}

/// `|Q_{a,b}^s|`, the union of `S_{n/(p_i p_a^s)}` over `i ∉ {a, b}`.
pub fn q_ab_size(f: &Factorization, a: usize, b: usize, s: u32) -> Result<Count> {
    need_r(f, 3)?;
    let (ai, bi) = pair(f, a, b)?;
    layer(f, a, s)?;
    let pa = f.primes()[ai] as Count;
    let pb = f.primes()[bi] as Count;
    let (rest, phi_rest) = f.squarefree_part((0..f.r()).filter(|&i| i != ai && i != bi))?;
    let bracket = sub(rest, phi_rest)?;
    exact_div(mul(mul(f.n_over_radical(), pb)?, bracket)?, pow(pa, s - 1)?)
}

fn check_union_args(f: &Factorization, within: &[usize], a: usize) -> Result<(Vec<usize>, usize)> {
    let ai = f.index(a)?;
    if within.is_empty() {
        return Err(Error::param("index set must be nonempty"));
    }
    let mut idx = within
        .iter()
        .map(|&i| f.index(i))
        .collect::<Result<Vec<_>>>()?;
    idx.sort_unstable();
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::param("index set has duplicates"));
    }
    if idx.contains(&ai) {
        return Err(Error::param(format!(
            "index {a} must not be in the index set"
        )));
    }
    Ok((idx, ai))
}

/// `|∪_{i∈I₁} S_{n/(p_i p_a)}|` for nonempty `I₁` not containing `a`.
pub fn union_subgroup_size(f: &Factorization, within: &[usize], a: usize) -> Result<Count> {
    let (idx, ai) = check_union_args(f, within, a)?;
    let (prod, phi) = f.squarefree_part(idx.iter().copied())?;
    let (others, _) =
        f.squarefree_part((0..f.r()).filter(|i| *i != ai && idx.binary_search(i).is_err()))?;
    mul(mul(f.n_over_radical(), others)?, sub(prod, phi)?)
}

fn z_size(f: &Factorization, ai: usize, s: u32) -> Result<Count> {
    let pa = f.primes()[ai] as Count;
    let (rest, phi_rest) = f.squarefree_part((0..f.r()).filter(|&i| i != ai))?;
    let scale = pow(pa, s - 1)?;
    // rest + φ(rest)(p_a^{s-1} - 2), nonnegative for r >= 2
    let inner = sub(add(rest, mul(phi_rest, scale)?)?, mul(2, phi_rest)?)?;
    add(
        f.phi_n()?,
        exact_div(mul(f.n_over_radical(), inner)?, scale)?,
    )
}

/// Builds `Z_a^s`.
pub fn z_candidate(lat: &DivisorLattice, a: usize, s: u32) -> Result<CutCandidate> {
    let f = lat.factorization();
    if f.r() < 2 {
        return Err(Error::CompleteGraph);
    }
    let (ai, na) = layer(f, a, s)?;
    let full = f.exponents();
    let members = lat
        .classes()
        .iter()
        .enumerate()
        .filter(|(_, c)| {
            let e = c.exponents();
            let others_full = (0..f.r()).filter(|&i| i != ai).all(|i| e[i] == full[i]);
            // E_{n/p_a^l} for 0 <= l <= s-1
            let top_layer = others_full && e[ai] > na - s;
            // Q_a^s
            let in_q = e[ai] <= na - s && !others_full;
            top_layer || in_q
        })
        .map(|(i, _)| i)
        .collect();
    CutCandidate::from_members(lat, CandidateParams::Z { a, s }, members, z_size(f, ai, s)?)
}

/// `Σ_{k≥s, l≥t} φ(n/(p_a^k p_b^l))`, zero when the range is empty.
fn tail_sum(f: &Factorization, a: usize, b: usize, s: u32, t: u32) -> Result<Count> {
    if s > f.exponent(a)? || t > f.exponent(b)? {
        return Ok(0);
    }
    crate::arith::double_totient_sum(f, a, b, s, t)
}

fn x_size(f: &Factorization, a: usize, b: usize, s: u32, t: u32, m_exps: &[u32]) -> Result<Count> {
    // Σ over the rectangle 0 <= i <= s, 0 <= j <= t by inclusion-exclusion of tails.
    let rect = sub(
        add(tail_sum(f, a, b, 0, 0)?, tail_sum(f, a, b, s + 1, t + 1)?)?,
        add(tail_sum(f, a, b, s + 1, 0)?, tail_sum(f, a, b, 0, t + 1)?)?,
    )?;
    let m = f.value_of(m_exps)? as Count;
    let phi_m = f.phi_of(m_exps)?;
    let h = sub(rect, phi_m)?;
    add(h, sub(m, phi_m)?)
}

/// Exponent vector of `n / (p_a^s p_b^t)` for 0-based indices.
fn apex(f: &Factorization, ai: usize, bi: usize, s: u32, t: u32) -> Vec<u32> {
    let mut e = f.exponents().to_vec();
    e[ai] -= s;
    e[bi] -= t;
    e
}

fn x_args(f: &Factorization, a: usize, b: usize, s: u32, t: u32) -> Result<(usize, usize)> {
    need_r(f, 3)?;
    pair_layers(f, a, b, s, t)
}

fn pair_layers(f: &Factorization, a: usize, b: usize, s: u32, t: u32) -> Result<(usize, usize)> {
    need_r(f, 2)?;
    let (ai, bi) = pair(f, a, b)?;
    layer(f, a, s)?;
    layer(f, b, t)?;
    Ok((ai, bi))
}

/// Builds `X_{a,b}^{s,t} = H ∪ K`.
pub fn x_candidate(
    lat: &DivisorLattice,
    a: usize,
    b: usize,
    s: u32,
    t: u32,
) -> Result<CutCandidate> {
    let f = lat.factorization();
    let (ai, bi) = x_args(f, a, b, s, t)?;
    let m_exps = apex(f, ai, bi, s, t);
    let mut members = Vec::new();
    for (i, c) in lat.classes().iter().enumerate() {
        let e = c.exponents();
        if e == m_exps.as_slice() {
            continue;
        }
        let above = e.iter().zip(&m_exps).all(|(x, y)| x >= y);
        let below = e.iter().zip(&m_exps).all(|(x, y)| x <= y);
        if above && below {
            return Err(Error::Internal(format!(
                "H and K overlap at class {} for n={}",
                c.value(),
                lat.n()
            )));
        }
        if above || below {
            members.push(i);
        }
    }
    let size = x_size(f, a, b, s, t, &m_exps)?;
    CutCandidate::from_members(lat, CandidateParams::X { a, b, s, t }, members, size)
}

/// Closed-form `|L|`, `|M|`, `|N|` for `K_{a,b}^{s,t}`, audited against
/// [`enumerate::boundary_layers`].
pub fn boundary_layers(
    lat: &DivisorLattice,
    a: usize,
    b: usize,
    s: u32,
    t: u32,
) -> Result<BoundaryLayers> {
    let f = lat.factorization();
    let (ai, bi) = pair_layers(f, a, b, s, t)?;
    let (na, nb) = (f.exponents()[ai], f.exponents()[bi]);
    let (pa, pb) = (f.primes()[ai] as Count, f.primes()[bi] as Count);

    let with = |ea: u32, eb: u32| {
        let mut e = f.exponents().to_vec();
        e[ai] = ea;
        e[bi] = eb;
        e
    };
    let phi_core = f.phi_of(&with(0, 0))?;
    let corner = mul(pow(pa, na - s)?, pow(pb, nb - t)?)?;
    let phi_corner = mul(
        crate::arith::phi_prime_power(pa as u64, na - s)?,
        crate::arith::phi_prime_power(pb as u64, nb - t)?,
    )?;
    let l_size = mul(phi_core, sub(corner, phi_corner)?)?;
    let m_size = if s < na {
        mul(f.phi_of(&with(0, nb - t))?, pow(pa, na - s - 1)?)?
    } else {
        0
    };
    let n_size = if t < nb {
        mul(f.phi_of(&with(na - s, 0))?, pow(pb, nb - t - 1)?)?
    } else {
        0
    };
    let layers = BoundaryLayers {
        l_size,
        m_size,
        n_size,
    };
    let counted = enumerate::boundary_layers(lat, a, b, s, t)?;
    if counted != layers {
        return Err(Error::Internal(format!(
            "boundary layers for n={} (a={a}, b={b}, s={s}, t={t}): closed form {layers:?} != enumerated {counted:?}",
            lat.n()
        )));
    }
    Ok(layers)
}

/// Direct class enumerations of the auxiliary sets, sharing no code with the
/// closed forms.
pub mod enumerate {
    use super::*;

    fn sum_where(lat: &DivisorLattice, keep: impl Fn(&[u32]) -> bool) -> Result<Count> {
        lat.classes()
            .iter()
            .filter(|c| keep(c.exponents()))
            .try_fold(0, |acc, c| add(acc, c.weight()))
    }

    /// Members of `S_{n/(p_i p_a^s)}` for some `i` in `among`: the class has
    /// `e_a <= n_a - s` and some `e_i < n_i`.
    fn union_below(lat: &DivisorLattice, among: &[usize], ai: usize, s: u32) -> Result<Count> {
        let full = lat.factorization().exponents().to_vec();
        sum_where(lat, |e| {
            e[ai] + s <= full[ai] && among.iter().any(|&i| e[i] < full[i])
        })
    }

    pub fn q_size(lat: &DivisorLattice, a: usize, s: u32) -> Result<Count> {
        let f = lat.factorization();
        need_r(f, 2)?;
        let (ai, _) = layer(f, a, s)?;
        let among: Vec<usize> = (0..f.r()).filter(|&i| i != ai).collect();
        union_below(lat, &among, ai, s)
    }

    pub fn q_ab_size(lat: &DivisorLattice, a: usize, b: usize, s: u32) -> Result<Count> {
        let f = lat.factorization();
        need_r(f, 3)?;
        let (ai, bi) = pair(f, a, b)?;
        layer(f, a, s)?;
        let among: Vec<usize> = (0..f.r()).filter(|&i| i != ai && i != bi).collect();
        union_below(lat, &among, ai, s)
    }

    pub fn union_subgroup_size(lat: &DivisorLattice, within: &[usize], a: usize) -> Result<Count> {
        let (idx, ai) = check_union_args(lat.factorization(), within, a)?;
        union_below(lat, &idx, ai, 1)
    }

    /// `L`, `M`, `N` straight from their definitions: the nongenerators of
    /// `S_m`, `m = n/(p_a^s p_b^t)`, lying in none of the subgroups `S_{m/p_i}`
    /// for `i` in `J \ {a,b}`, `J \ {a}` and `J \ {b}` respectively, where `J`
    /// collects the primes still dividing `m`.
    pub fn boundary_layers(
        lat: &DivisorLattice,
        a: usize,
        b: usize,
        s: u32,
        t: u32,
    ) -> Result<BoundaryLayers> {
        let f = lat.factorization();
        let (ai, bi) = pair_layers(f, a, b, s, t)?;
        let m = apex(f, ai, bi, s, t);
        let j: Vec<usize> = (0..f.r()).filter(|&i| m[i] >= 1).collect();
        let in_k = |e: &[u32]| e != m.as_slice() && e.iter().zip(&m).all(|(x, y)| x <= y);
        // e avoids S_{m/p_i} exactly when e_i = m_i
        let avoids = |e: &[u32], skip: &[usize]| {
            j.iter()
                .filter(|i| !skip.contains(i))
                .all(|&i| e[i] == m[i])
        };
        Ok(BoundaryLayers {
            l_size: sum_where(lat, |e| in_k(e) && avoids(e, &[ai, bi]))?,
            m_size: sum_where(lat, |e| in_k(e) && avoids(e, &[ai]))?,
            n_size: sum_where(lat, |e| in_k(e) && avoids(e, &[bi]))?,
        })
    }
}
