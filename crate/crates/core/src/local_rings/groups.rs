//! Orders of GL3/SL3/PGL3/PSL3 over finite local rings, brute-force
//! verification sweeps, cube-root counts, the Frobenius exponent of the
//! reduction kernel, and the commuting-pair subgroup bound.

use std::collections::HashSet;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use super::mat3::{pcanon, pdet, pidentity, pmul, PackedMat};
use super::{LocalRing, RingTables};
use crate::error::{Error, Result};
use crate::rng::Substream;

/// Full 9-entry matrix enumeration is feasible up to this ring size (6^9 = 10M).
const BRUTE_FORCE_SIZE_CAP: u64 = 6;
/// Exhaustive commuting sweeps per the group-order cap.
pub const EXHAUSTIVE_PGL_CAP: u64 = 6000;
/// Kernel enumerations stay below this.
const KERNEL_CAP: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GroupKind {
    Gl3,
    Sl3,
    Pgl3,
    Psl3,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::Gl3 => "GL3",
            GroupKind::Sl3 => "SL3",
            GroupKind::Pgl3 => "PGL3",
            GroupKind::Psl3 => "PSL3",
        }
    }
}

/// Smallest j >= 0 with Q^j >= s.
pub fn ceil_log(q: u64, s: u64) -> u32 {
    let mut j = 0u32;
    let mut pow = 1u64;
    while pow < s {
        pow = pow.saturating_mul(q);
        j += 1;
    }
    j
}

/// |GL3| = Q^{9s-6}(Q^3-1)(Q^2-1)(Q-1); |SL3| = |PGL3| = Q^{8s-5}(Q^3-1)(Q^2-1);
/// |PSL3| = |SL3| / mu with mu the number of cube roots of unity in the units.
pub fn group_order(kind: GroupKind, q: u64, s: usize) -> Result<BigUint> {
    crate::gf::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if s < 1 {
        return Err(Error::BadLength);
    }
    let qb = BigUint::from(q);
    let se = s as u32;
    let c3 = qb.pow(3) - 1u32;
    let c2 = qb.pow(2) - 1u32;
    let c1 = &qb - 1u32;
    match kind {
        GroupKind::Gl3 => Ok(qb.pow(9 * se - 6) * c3 * c2 * c1),
        GroupKind::Sl3 | GroupKind::Pgl3 => Ok(qb.pow(8 * se - 5) * c3 * c2),
        GroupKind::Psl3 => {
            let sl = qb.pow(8 * se - 5) * c3 * c2;
            let mu = BigUint::from(count_cube_roots(q, s)?);
            debug_assert!((&sl % &mu) == BigUint::from(0u32));
            Ok(sl / mu)
        }
    }
}

/// mu = |{a in units : a^3 = 1}| by enumeration of the canonical ring.
pub fn count_cube_roots(q: u64, s: usize) -> Result<u64> {
    let ring = LocalRing::canonical(q, s)?;
    let one = ring.one();
    Ok(ring
        .units()
        .filter(|a| ring.mul(&ring.mul(a, a), a) == one)
        .count() as u64)
}

/// Counts invertible and determinant-one 3x3 matrices by scanning all
/// size^9 candidates.
pub fn brute_force_counts(ring: &LocalRing) -> Result<(u64, u64)> {
    if ring.size() > BRUTE_FORCE_SIZE_CAP {
        return Err(Error::BudgetExceeded(ring.size(), BRUTE_FORCE_SIZE_CAP));
    }
    let t = ring.tables().expect("small rings always carry tables");
    let n = ring.size() as u16;
    let total = (ring.size() as u128).pow(9);
    let counts = (0..ring.size() as usize)
        .into_par_iter()
        .map(|first| {
            let mut m: PackedMat = [0; 9];
            m[0] = first as u16;
            let mut gl = 0u64;
            let mut sl = 0u64;
            let inner = (total / ring.size() as u128) as u64;
            for idx in 0..inner {
                let mut rest = idx;
                for slot in m.iter_mut().skip(1) {
                    *slot = (rest % n as u64) as u16;
                    rest /= n as u64;
                }
                let d = pdet(t, &m);
                if t.unit[d as usize] {
                    gl += 1;
                    if d == t.one {
                        sl += 1;
                    }
                }
            }
            (gl, sl)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(counts)
}

/// Canonical forms of every element of PGL3 over the ring.
fn enumerate_pgl3(ring: &LocalRing) -> Result<Vec<PackedMat>> {
    if ring.size() > BRUTE_FORCE_SIZE_CAP {
        return Err(Error::BudgetExceeded(ring.size(), BRUTE_FORCE_SIZE_CAP));
    }
    let t = ring.tables().expect("small rings always carry tables");
    let n = ring.size();
    let total = (n as u128).pow(9) as u64;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut m: PackedMat = [0; 9];
    for idx in 0..total {
        let mut rest = idx;
        for slot in m.iter_mut() {
            *slot = (rest % n) as u16;
            rest /= n;
        }
        if !t.unit[pdet(t, &m) as usize] {
            continue;
        }
        let c = pcanon(t, &m);
        if seen.insert(c) {
            out.push(c);
        }
    }
    Ok(out)
}

/// |PGL3| over the canonical (Q, s) ring, by enumeration.
pub fn enumerate_pgl3_size(q: u64, s: usize) -> Result<u64> {
    let ring = LocalRing::canonical(q, s)?;
    Ok(enumerate_pgl3(&ring)?.len() as u64)
}

#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusReport {
    pub q: u64,
    pub s: usize,
    /// Q^(ceil log_Q s)
    pub exponent: u64,
    pub kernel_size: u64,
    pub verified: bool,
}

/// Every matrix congruent to the identity modulo the maximal ideal, raised to
/// Q^(ceil log_Q s), is the identity in PGL3. Verified by exhausting the
/// reduction kernel.
pub fn frobenius_unipotent_order(q: u64, s: usize) -> Result<FrobeniusReport> {
    let ring = LocalRing::canonical(q, s)?;
    let exponent = q.pow(ceil_log(q, s as u64));
    let t = ring.tables().ok_or(Error::RingCap(ring.size(), 256))?;
    // the maximal ideal as a set of element indices
    let y = ring.from_poly(&crate::poly::Poly::y(ring.base()));
    let mut ideal: Vec<u16> = ring
        .enumerate()
        .map(|a| ring.index_of(&ring.mul(&y, &a)) as u16)
        .collect();
    ideal.sort_unstable();
    ideal.dedup();
    let k = ideal.len() as u64;
    let kernel_size = k.checked_pow(9).ok_or(Error::BudgetExceeded(u64::MAX, KERNEL_CAP))?;
    if kernel_size > KERNEL_CAP {
        return Err(Error::BudgetExceeded(kernel_size, KERNEL_CAP));
    }
    let id = pidentity(t);
    let failed = (0..kernel_size)
        .into_par_iter()
        .find_any(|&idx| {
            let mut m = id;
            let mut rest = idx;
            for slot in m.iter_mut() {
                *slot = t.add(*slot, ideal[(rest % k) as usize]);
                rest /= k;
            }
            let mut acc = pidentity(t);
            for _ in 0..exponent {
                acc = pmul(t, &acc, &m);
            }
            pcanon(t, &acc) != pcanon(t, &id)
        });
    if let Some(idx) = failed {
        return Err(Error::FrobeniusCounterexample(idx));
    }
    Ok(FrobeniusReport { q, s, exponent, kernel_size, verified: true })
}

#[derive(Clone, Debug, Serialize)]
pub enum CommutingMode {
    Exhaustive,
    Sampled { budget: u64, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutingReport {
    pub q: u64,
    pub s: usize,
    /// 3 Q^{2 ceil log_Q s} (Q^3 - 1)
    pub bound: u64,
    pub max_order: u64,
    pub commuting_pairs_tested: u64,
    pub raw_pairs: u64,
    pub mode: String,
}

/// Order bound for the subgroup generated by two projectively commuting
/// elements of PGL3 over the length-s ring with residue order Q.
pub fn commuting_bound(q: u64, s: usize) -> u64 {
    3 * q.pow(2 * ceil_log(q, s as u64)) * (q.pow(3) - 1)
}

/// Closure of {a, b} under multiplication in PGL3 (canonical forms); stops
/// with an error as soon as the order exceeds `cap`.
fn subgroup_closure(
    t: &RingTables,
    a: &PackedMat,
    b: &PackedMat,
    cap: u64,
) -> std::result::Result<Vec<PackedMat>, u64> {
    let mut seen: HashSet<PackedMat> = HashSet::new();
    let mut queue: Vec<PackedMat> = Vec::new();
    for g in [pcanon(t, a), pcanon(t, b)] {
        if seen.insert(g) {
            queue.push(g);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for g in [a, b] {
            let y = pcanon(t, &pmul(t, &x, g));
            if seen.insert(y) {
                if seen.len() as u64 > cap {
                    return Err(seen.len() as u64);
                }
                queue.push(y);
            }
        }
    }
    Ok(queue)
}

fn projectively_commute(t: &RingTables, a: &PackedMat, b: &PackedMat) -> bool {
    pcanon(t, &pmul(t, a, b)) == pcanon(t, &pmul(t, b, a))
}

/// Checks that every projectively commuting pair generates a subgroup of
/// order at most the bound. Exhaustive mode scans all pairs of PGL3 (allowed
/// up to group order 6000); sampled mode draws `budget` uniform pairs and
/// closure-tests the commuting ones.
pub fn commuting_pair_bound_check(q: u64, s: usize, mode: CommutingMode) -> Result<CommutingReport> {
    let ring = LocalRing::canonical(q, s)?;
    let t = ring.tables().ok_or(Error::RingCap(ring.size(), 256))?;
    let bound = commuting_bound(q, s);
    match mode {
        CommutingMode::Exhaustive => {
            let elements = enumerate_pgl3(&ring)?;
            let order = elements.len() as u64;
            if order > EXHAUSTIVE_PGL_CAP {
                return Err(Error::BudgetExceeded(order, EXHAUSTIVE_PGL_CAP));
            }
            let per_row: Vec<Result<(u64, u64)>> = (0..elements.len())
                .into_par_iter()
                .map(|i| {
                    let mut max_order = 0u64;
                    let mut tested = 0u64;
                    for j in i..elements.len() {
                        let (a, b) = (&elements[i], &elements[j]);
                        if !projectively_commute(t, a, b) {
                            continue;
                        }
                        tested += 1;
                        match subgroup_closure(t, a, b, bound) {
                            Ok(sub) => max_order = max_order.max(sub.len() as u64),
                            Err(found) => return Err(Error::BoundViolation { found, bound }),
                        }
                    }
                    Ok((max_order, tested))
                })
                .collect();
            let mut max_order = 0u64;
            let mut tested = 0u64;
            for r in per_row {
                let (m, c) = r?;
                max_order = max_order.max(m);
                tested += c;
            }
            Ok(CommutingReport {
                q,
                s,
                bound,
                max_order,
                commuting_pairs_tested: tested,
                raw_pairs: order * (order + 1) / 2,
                mode: "exhaustive".into(),
            })
        }
        CommutingMode::Sampled { budget, seed } => {
            let per_chunk: Vec<Result<(u64, u64)>> = (0..budget)
                .into_par_iter()
                .map(|trial| {
                    let mut rng = Substream::for_trial(seed, trial);
                    let a = random_pgl3(t, ring.size(), &mut rng);
                    let b = random_pgl3(t, ring.size(), &mut rng);
                    if !projectively_commute(t, &a, &b) {
                        return Ok((0, 0));
                    }
                    match subgroup_closure(t, &a, &b, bound) {
                        Ok(sub) => Ok((sub.len() as u64, 1)),
                        Err(found) => Err(Error::BoundViolation { found, bound }),
                    }
                })
                .collect();
            let mut max_order = 0u64;
            let mut tested = 0u64;
            for r in per_chunk {
                let (m, c) = r?;
                max_order = max_order.max(m);
                tested += c;
            }
            Ok(CommutingReport {
                q,
                s,
                bound,
                max_order,
                commuting_pairs_tested: tested,
                raw_pairs: budget,
                mode: "sampled".into(),
            })
        }
    }
}

/// Uniform element of PGL3 by rejection from the full matrix ring.
fn random_pgl3(t: &RingTables, size: u64, rng: &mut Substream) -> PackedMat {
    loop {
        let m: PackedMat = std::array::from_fn(|_| rng.gen_range(size) as u16);
        if t.unit[pdet(t, &m) as usize] {
            return pcanon(t, &m);
        }
    }
}
