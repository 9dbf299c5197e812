//! Exact integer number theory over the divisor lattice of `n`.
//!
//! Every count is a [`Count`] (`u128`) produced by checked arithmetic; an
//! overflow surfaces as [`Error::Overflow`] and never wraps.

use serde::Serialize;

use crate::error::{Error, Result};

/// Exact element count. Sizes are bounded by `n < 2^63`, intermediate
/// products of the closed forms are not.
pub type Count = u128;

pub const DEFAULT_CLASS_CAP: usize = 4096;

/// Largest accepted group order.
pub const MAX_ORDER: u64 = i64::MAX as u64;

pub(crate) fn mul(a: Count, b: Count) -> Result<Count> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

pub(crate) fn add(a: Count, b: Count) -> Result<Count> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub(crate) fn sub(a: Count, b: Count) -> Result<Count> {
    a.checked_sub(b)
        .ok_or_else(|| Error::Internal(format!("negative intermediate {a} - {b}")))
}

pub(crate) fn pow(base: Count, exp: u32) -> Result<Count> {
    base.checked_pow(exp).ok_or(Error::Overflow)
}

/// Division that must leave no remainder. The closed forms are integer
/// valued, so a remainder means the formula was misapplied.
pub(crate) fn exact_div(a: Count, b: Count) -> Result<Count> {
    if b == 0 || !a.is_multiple_of(b) {
        return Err(Error::Internal(format!("{a} is not divisible by {b}")));
    }
    Ok(a / b)
}

/// `φ(p^k)` for prime `p`.
pub(crate) fn phi_prime_power(p: u64, k: u32) -> Result<Count> {
    if k == 0 {
        return Ok(1);
    }
    mul(pow(p as Count, k - 1)?, p as Count - 1)
}

/// Deterministic primality by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = 7u64;
    let mut wheel = WHEEL.iter().cycle();
    while d <= n / d {
        if n.is_multiple_of(d) {
            return false;
        }
        d += wheel.next().unwrap();
    }
    true
}

// Gaps between successive residues coprime to 30, starting from 7.
const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];

/// `n = p_1^{n_1} ⋯ p_r^{n_r}` with `p_1 < ⋯ < p_r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Factorization {
    n: u64,
    primes: Vec<u64>,
    exponents: Vec<u32>,
}

/// Trial division with a 2·3·5 wheel.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n < 2 {
        return Err(Error::OrderTooSmall);
    }
    let mut primes = Vec::new();
    let mut exponents = Vec::new();
    let mut rest = n;
    let mut strip = |p: u64, rest: &mut u64| {
        let mut e = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            primes.push(p);
            exponents.push(e);
        }
    };
    for p in [2u64, 3, 5] {
        strip(p, &mut rest);
    }
    let mut d = 7u64;
    let mut wheel = WHEEL.iter().cycle();
    while d <= rest / d {
        strip(d, &mut rest);
        d += wheel.next().unwrap();
    }
    if rest > 1 {
        strip(rest, &mut rest);
    }
    Ok(Factorization {
        n,
        primes,
        exponents,
    })
}

impl Factorization {
    /// Builds a factorization from explicit parts, validating every invariant.
    pub fn from_parts(primes: Vec<u64>, exponents: Vec<u32>) -> Result<Self> {
        if primes.is_empty() || primes.len() != exponents.len() {
            return Err(Error::param("need r >= 1 primes with one exponent each"));
        }
        if primes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("primes must be strictly increasing"));
        }
        if let Some(p) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::param(format!("{p} is not prime")));
        }
        if exponents.contains(&0) {
            return Err(Error::param("exponents must be positive"));
        }
        let mut n: Count = 1;
        for (&p, &e) in primes.iter().zip(&exponents) {
            n = mul(n, pow(p as Count, e)?)?;
        }
        if n > MAX_ORDER as Count {
            return Err(Error::Overflow);
        }
        Ok(Factorization {
            n: n as u64,
            primes,
            exponents,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of distinct prime divisors.
    pub fn r(&self) -> usize {
        self.primes.len()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn is_prime_power(&self) -> bool {
        self.r() == 1
    }

    /// Converts a 1-based prime index into a 0-based one.
    pub(crate) fn index(&self, a: usize) -> Result<usize> {
        if a == 0 || a > self.r() {
            return Err(Error::param(format!(
                "prime index {a} out of range 1..={}",
                self.r()
            )));
        }
        Ok(a - 1)
    }

    /// `p_a` for a 1-based index.
    pub fn prime(&self, a: usize) -> Result<u64> {
        Ok(self.primes[self.index(a)?])
    }

    /// `n_a` for a 1-based index.
    pub fn exponent(&self, a: usize) -> Result<u32> {
        Ok(self.exponents[self.index(a)?])
    }

    /// `∏ (n_i + 1)`, the number of divisors.
    pub fn class_count(&self) -> Count {
        self.exponents
            .iter()
            .map(|&e| e as Count + 1)
            .try_fold(1, mul)
            .unwrap_or(Count::MAX)
    }

    /// `p_1 p_2 ⋯ p_r`.
    pub fn radical(&self) -> Count {
        self.primes.iter().map(|&p| p as Count).product()
    }

    /// `n / (p_1 ⋯ p_r)`.
    pub(crate) fn n_over_radical(&self) -> Count {
        self.n as Count / self.radical()
    }

    /// `(∏_{i∈I} p_i, φ(∏_{i∈I} p_i))` over 0-based indices.
    pub(crate) fn squarefree_part(
        &self,
        indices: impl IntoIterator<Item = usize>,
    ) -> Result<(Count, Count)> {
        let mut prod: Count = 1;
        let mut phi: Count = 1;
        for i in indices {
            let p = self.primes[i] as Count;
            prod = mul(prod, p)?;
            phi = mul(phi, p - 1)?;
        }
        Ok((prod, phi))
    }

    /// `∏ p_i^{e_i}`.
    pub fn value_of(&self, exponents: &[u32]) -> Result<u64> {
        self.check_exponents(exponents)?;
        let mut v: Count = 1;
        for (&p, &e) in self.primes.iter().zip(exponents) {
            v = mul(v, pow(p as Count, e)?)?;
        }
        Ok(v as u64)
    }

    /// `φ(∏ p_i^{e_i})`.
    pub fn phi_of(&self, exponents: &[u32]) -> Result<Count> {
        self.check_exponents(exponents)?;
        self.primes
            .iter()
            .zip(exponents)
            .map(|(&p, &e)| phi_prime_power(p, e))
            .try_fold(1, |acc, x| mul(acc, x?))
    }

    /// `φ(n)`.
    pub fn phi_n(&self) -> Result<Count> {
        self.phi_of(&self.exponents)
    }

    fn check_exponents(&self, exponents: &[u32]) -> Result<()> {
        if exponents.len() != self.r() || exponents.iter().zip(&self.exponents).any(|(e, m)| e > m)
        {
            return Err(Error::param(format!(
                "exponent vector {exponents:?} is not a divisor of {}",
                self.n
            )));
        }
        Ok(())
    }
}

/// A divisor `d | n`, standing for the clique `E_d` of elements of order `d`.
/// Its down-set in the lattice is the subgroup `S_d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    exponents: Vec<u32>,
    value: u64,
    weight: Count,
}

impl DivisorClass {
    pub fn new(f: &Factorization, exponents: Vec<u32>) -> Result<Self> {
        let value = f.value_of(&exponents)?;
        let weight = f.phi_of(&exponents)?;
        Ok(DivisorClass {
            exponents,
            value,
            weight,
        })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// The divisor `d`.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// `φ(d) = |E_d|`.
    pub fn weight(&self) -> Count {
        self.weight
    }

    pub fn is_identity(&self) -> bool {
        self.value == 1
    }

    /// Divisibility, read off the exponent vectors.
    pub fn divides(&self, other: &DivisorClass) -> bool {
        self.exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| a <= b)
    }
}

/// `φ(d)` recomputed from the class's exponents.
pub fn totient(f: &Factorization, class: &DivisorClass) -> Result<Count> {
    f.phi_of(class.exponents())
}

/// All divisors of `n`, in lexicographic order of exponent vectors.
pub fn divisor_classes(f: &Factorization, cap: usize) -> Result<Vec<DivisorClass>> {
    let count = f.class_count();
    if count > cap as Count {
        return Err(Error::LatticeTooLarge {
            classes: count,
            cap,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut e = vec![0u32; f.r()];
    loop {
        out.push(DivisorClass::new(f, e.clone())?);
        // Odometer increment, last coordinate fastest.
        let mut i = f.r();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if e[i] < f.exponents()[i] {
                e[i] += 1;
                break;
            }
            e[i] = 0;
        }
    }
}

/// The factorization together with its enumerated divisor classes and an
/// exponent-vector index.
#[derive(Debug, Clone)]
pub struct DivisorLattice {
    factorization: Factorization,
    classes: Vec<DivisorClass>,
    strides: Vec<usize>,
}

impl DivisorLattice {
    pub fn new(factorization: Factorization, cap: usize) -> Result<Self> {
        let classes = divisor_classes(&factorization, cap)?;
        let r = factorization.r();
        let mut strides = vec![1usize; r];
        for i in (0..r.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (factorization.exponents()[i + 1] as usize + 1);
        }
        Ok(DivisorLattice {
            factorization,
            classes,
            strides,
        })
    }

    /// Factorizes `n` and enumerates its lattice under the default cap.
    pub fn of(n: u64) -> Result<Self> {
        Self::new(factorize(n)?, DEFAULT_CLASS_CAP)
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    pub fn n(&self) -> u64 {
        self.factorization.n()
    }

    pub fn classes(&self) -> &[DivisorClass] {
        &self.classes
    }

    pub fn class(&self, index: usize) -> &DivisorClass {
        &self.classes[index]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn index_of(&self, exponents: &[u32]) -> Option<usize> {
        if exponents.len() != self.factorization.r()
            || exponents
                .iter()
                .zip(self.factorization.exponents())
                .any(|(e, m)| e > m)
        {
            return None;
        }
        Some(
            exponents
                .iter()
                .zip(&self.strides)
                .map(|(&e, &s)| e as usize * s)
                .sum(),
        )
    }

    pub fn index_of_value(&self, d: u64) -> Option<usize> {
        if d == 0 || !self.n().is_multiple_of(d) {
            return None;
        }
        let mut rest = d;
        let exps: Vec<u32> = self
            .factorization
            .primes()
            .iter()
            .map(|&p| {
                let mut e = 0;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    e += 1;
                }
                e
            })
            .collect();
        self.index_of(&exps)
    }

    /// Index of the class of `n` itself.
    pub fn top(&self) -> usize {
        self.classes.len() - 1
    }

    /// Index of the identity class `d = 1`.
    pub fn bottom(&self) -> usize {
        0
    }

    pub fn total_weight(&self, members: &[usize]) -> Result<Count> {
        members
            .iter()
            .try_fold(0, |acc, &i| add(acc, self.classes[i].weight()))
    }
}

/// `Σ_{l=k}^{s} φ(n / p_a^l)` by the closed form, with `a` 1-based and
/// `0 ≤ k ≤ s ≤ n_a`.
pub fn partial_totient_sum(f: &Factorization, a: usize, k: u32, s: u32) -> Result<Count> {
    let ai = f.index(a)?;
    let na = f.exponents()[ai];
    if k > s || s > na {
        return Err(Error::param(format!(
            "need 0 <= k <= s <= n_a, got k={k}, s={s}, n_a={na}"
        )));
    }
    let pa = f.primes()[ai] as Count;
    let (_, phi_rest) = f.squarefree_part((0..f.r()).filter(|&i| i != ai))?;
    // (n / rad) · φ(rad / p_a)
    let base = mul(f.n_over_radical(), phi_rest)?;
    if s == na {
        // base · p_a^{1-k}
        exact_div(mul(base, pa)?, pow(pa, k)?)
    } else {
        // base · p_a^{1-k} · (1 - p_a^{-(s-k+1)})
        let span = sub(pow(pa, s - k + 1)?, 1)?;
        exact_div(mul(base, span)?, pow(pa, s)?)
    }
}

/// `Σ_{k=s}^{n_a} Σ_{l=t}^{n_b} φ(n / (p_a^k p_b^l))` by the closed form, with
/// `a ≠ b` 1-based.
pub fn double_totient_sum(f: &Factorization, a: usize, b: usize, s: u32, t: u32) -> Result<Count> {
    let ai = f.index(a)?;
    let bi = f.index(b)?;
    if ai == bi {
        return Err(Error::param("double totient sum needs a != b"));
    }
    let (na, nb) = (f.exponents()[ai], f.exponents()[bi]);
    if s > na || t > nb {
        return Err(Error::param(format!(
            "need s <= n_a and t <= n_b, got s={s}, t={t}, n_a={na}, n_b={nb}"
        )));
    }
    let mut e = f.exponents().to_vec();
    e[ai] = 0;
    e[bi] = 0;
    let phi_rest = f.phi_of(&e)?;
    let pa = pow(f.primes()[ai] as Count, na - s)?;
    let pb = pow(f.primes()[bi] as Count, nb - t)?;
    mul(mul(phi_rest, pa)?, pb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    fn brute_phi(d: u64) -> Count {
        (1..=d).filter(|&x| gcd(x, d) == 1).count() as Count
    }

    #[test]
    fn factorize_examples() {
        let f = factorize(12).unwrap();
        assert_eq!(f.primes(), &[2, 3]);
        assert_eq!(f.exponents(), &[2, 1]);
        let f = factorize(210).unwrap();
        assert_eq!(f.primes(), &[2, 3, 5, 7]);
        assert_eq!(f.exponents(), &[1, 1, 1, 1]);
        let f = factorize(9).unwrap();
        assert_eq!(f.primes(), &[3]);
        assert_eq!(f.exponents(), &[2]);
    }

    #[test]
    fn factorize_rejects_small_orders() {
        assert_eq!(factorize(1), Err(Error::OrderTooSmall));
        assert_eq!(factorize(0), Err(Error::OrderTooSmall));
    }

    #[test]
    fn factorize_large_prime_and_semiprime() {
        let f = factorize(1_000_000_007).unwrap();
        assert_eq!(f.primes(), &[1_000_000_007]);
        let f = factorize(MAX_ORDER).unwrap();
        // 2^63 - 1 = 7^2 · 73 · 127 · 337 · 92737 · 649657
        assert_eq!(f.primes(), &[7, 73, 127, 337, 92737, 649657]);
        assert_eq!(f.exponents(), &[2, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn from_parts_validates() {
        assert!(Factorization::from_parts(vec![2, 3], vec![2, 1]).is_ok());
        assert!(Factorization::from_parts(vec![3, 2], vec![1, 1]).is_err());
        assert!(Factorization::from_parts(vec![2, 4], vec![1, 1]).is_err());
        assert!(Factorization::from_parts(vec![2, 3], vec![1, 0]).is_err());
        assert!(Factorization::from_parts(vec![2], vec![64]).is_err());
        assert!(Factorization::from_parts(vec![], vec![]).is_err());
    }

    #[test]
    fn totient_examples() {
        let f = factorize(210).unwrap();
        let one = DivisorClass::new(&f, vec![0, 0, 0, 0]).unwrap();
        assert_eq!(totient(&f, &one).unwrap(), 1);
        let top = DivisorClass::new(&f, vec![1, 1, 1, 1]).unwrap();
        // φ(2)φ(3)φ(5)φ(7) = 1·2·4·6
        assert_eq!(totient(&f, &top).unwrap(), 48);
        let f = factorize(12).unwrap();
        let c = DivisorClass::new(&f, vec![2, 1]).unwrap();
        assert_eq!(totient(&f, &c).unwrap(), 4);
    }

    #[test]
    fn divisor_classes_examples() {
        let f = factorize(12).unwrap();
        let classes = divisor_classes(&f, DEFAULT_CLASS_CAP).unwrap();
        let values: Vec<u64> = classes.iter().map(|c| c.value()).collect();
        // lexicographic on (e_2, e_3)
        assert_eq!(values, vec![1, 3, 2, 6, 4, 12]);
        assert_eq!(classes.iter().map(|c| c.weight()).sum::<Count>(), 12);
        let f = factorize(210).unwrap();
        assert_eq!(divisor_classes(&f, DEFAULT_CLASS_CAP).unwrap().len(), 16);
    }

    #[test]
    fn divisor_classes_cap() {
        let f = factorize(720720).unwrap(); // 240 divisors
        assert!(matches!(
            divisor_classes(&f, 100),
            Err(Error::LatticeTooLarge {
                classes: 240,
                cap: 100
            })
        ));
    }

    #[test]
    fn weights_match_brute_totient() {
        for n in 2..400u64 {
            let lat = DivisorLattice::of(n).unwrap();
            let mut sum = 0;
            for c in lat.classes() {
                assert_eq!(c.weight(), brute_phi(c.value()), "d = {}", c.value());
                sum += c.weight();
            }
            assert_eq!(sum, n as Count);
        }
    }

    #[test]
    fn lattice_index_roundtrip() {
        let lat = DivisorLattice::of(360).unwrap();
        for (i, c) in lat.classes().iter().enumerate() {
            assert_eq!(lat.index_of(c.exponents()), Some(i));
            assert_eq!(lat.index_of_value(c.value()), Some(i));
        }
        assert_eq!(lat.class(lat.top()).value(), 360);
        assert_eq!(lat.class(lat.bottom()).value(), 1);
        assert_eq!(lat.index_of_value(7), None);
    }

    #[test]
    fn partial_totient_sum_examples() {
        let f = factorize(12).unwrap();
        assert_eq!(partial_totient_sum(&f, 1, 1, 2).unwrap(), 4);
        assert_eq!(partial_totient_sum(&f, 1, 1, 1).unwrap(), 2);
        assert_eq!(partial_totient_sum(&f, 1, 0, 0).unwrap(), 4);
        assert!(partial_totient_sum(&f, 3, 0, 0).is_err());
        assert!(partial_totient_sum(&f, 1, 2, 1).is_err());
        assert!(partial_totient_sum(&f, 1, 0, 3).is_err());
    }

    #[test]
    fn double_totient_sum_examples() {
        let f = factorize(12).unwrap();
        assert_eq!(double_totient_sum(&f, 1, 2, 1, 1).unwrap(), 2);
        assert_eq!(double_totient_sum(&f, 1, 2, 0, 0).unwrap(), 12);
        assert!(double_totient_sum(&f, 1, 1, 0, 0).is_err());
        let f = factorize(210).unwrap();
        assert_eq!(double_totient_sum(&f, 3, 4, 1, 1).unwrap(), 2);
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(pow(u64::MAX as Count, 3), Err(Error::Overflow));
        assert_eq!(mul(Count::MAX, 2), Err(Error::Overflow));
        assert!(matches!(exact_div(7, 2), Err(Error::Internal(_))));
    }
}
