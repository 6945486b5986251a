//! Ground truth: exhaustive enumeration of growth histories, BFS distances
//! on the explicit graph, and exact one-step conditional expectations.
//!
//! Enumeration is checked against the closed forms in `theory`; the BFS
//! sums are checked against the O(m) decompositions in `indices`.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::caterpillar::{AdjacencyGraph, Caterpillar};
use crate::error::{Error, Result};
use crate::indices::{self, IndexKind};
use crate::theory;

/// Maximum number of histories or compositions an enumeration may visit.
pub const ENUMERATION_GUARD: u64 = 10_000_000;

/// Raw histories are walked only up to this many steps; beyond it the
/// multinomially weighted compositions are used.
const HISTORY_STEP_LIMIT: u64 = 12;

/// Exact moments of an integer-valued index over all `m^n` equally likely
/// growth histories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMoments {
    pub mean: BigRational,
    pub second_moment: BigRational,
    pub variance: BigRational,
    /// Number of distinct index values.
    pub support_size: usize,
    /// `m^n`.
    pub history_count: BigUint,
}

/// How [`enumerate_exact`] walks the state space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMode {
    /// Every attachment sequence, each with weight 1.
    Histories,
    /// Every leaf-count composition, weighted by its multinomial coefficient.
    Compositions,
}

fn exact_value(c: &Caterpillar, kind: IndexKind) -> Result<u128> {
    match kind {
        IndexKind::Zagreb => Ok(indices::zagreb(c)),
        IndexKind::Randic(1.0) => Ok(indices::randic_unit(c)),
        IndexKind::Wiener => Ok(indices::wiener(c)),
        IndexKind::HyperWiener => Ok(indices::hyper_wiener(c)),
        other => Err(Error::InvalidArgument(format!(
            "exact enumeration needs an integer-valued index, got '{other}'"
        ))),
    }
}

fn history_count(m: usize, n: u64) -> BigUint {
    BigUint::from(m).pow(n as u32)
}

fn composition_count(m: usize, n: u64) -> BigUint {
    // C(n + m - 1, m - 1)
    let k = (m - 1) as u64;
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n + k - i) / BigUint::from(i + 1))
}

fn guard(required: &BigUint) -> Result<()> {
    if *required > BigUint::from(ENUMERATION_GUARD) {
        return Err(Error::ResourceGuard {
            required: required.to_string(),
            bound: ENUMERATION_GUARD,
        });
    }
    Ok(())
}

/// Picks the cheaper admissible mode, or fails with the guard bound.
pub fn choose_mode(m: usize, n: u64) -> Result<EnumerationMode> {
    if m < 2 {
        return Err(Error::SpineTooShort { m });
    }
    let histories = history_count(m, n);
    if n <= HISTORY_STEP_LIMIT && histories <= BigUint::from(ENUMERATION_GUARD) {
        return Ok(EnumerationMode::Histories);
    }
    guard(&composition_count(m, n))?;
    Ok(EnumerationMode::Compositions)
}

/// Exact mean, second moment and variance of `kind` at time `n`.
pub fn enumerate_exact(m: usize, n: u64, kind: IndexKind) -> Result<ExactMoments> {
    let mode = choose_mode(m, n)?;
    enumerate_with(m, n, kind, mode)
}

pub fn enumerate_with(m: usize, n: u64, kind: IndexKind, mode: EnumerationMode) -> Result<ExactMoments> {
    if m < 2 {
        return Err(Error::SpineTooShort { m });
    }
    exact_value(&Caterpillar::new_spine(m)?, kind)?;
    match mode {
        EnumerationMode::Histories => by_histories(m, n, kind),
        EnumerationMode::Compositions => by_compositions(m, n, kind),
    }
}

struct Accumulator {
    sum: BigInt,
    sum_sq: BigInt,
    support: BTreeSet<u128>,
}

impl Accumulator {
    fn new() -> Self {
        Self {
            sum: BigInt::zero(),
            sum_sq: BigInt::zero(),
            support: BTreeSet::new(),
        }
    }

    fn add(&mut self, value: u128, weight: &BigInt) {
        let v = BigInt::from(value);
        self.sum += weight * &v;
        self.sum_sq += weight * &v * &v;
        self.support.insert(value);
    }

    fn finish(self, total: BigUint) -> ExactMoments {
        let denom = BigInt::from(total.clone());
        let mean = BigRational::new(self.sum, denom.clone());
        let second_moment = BigRational::new(self.sum_sq, denom);
        let variance = &second_moment - &mean * &mean;
        ExactMoments {
            mean,
            second_moment,
            variance,
            support_size: self.support.len(),
            history_count: total,
        }
    }
}

fn by_histories(m: usize, n: u64, kind: IndexKind) -> Result<ExactMoments> {
    let total = history_count(m, n);
    guard(&total)?;
    let one = BigInt::one();
    let mut acc = Accumulator::new();
    // odometer over attachment sequences in {0..m}^n
    let mut sequence = vec![0usize; n as usize];
    loop {
        let mut counts = vec![0u64; m];
        for &i in &sequence {
            counts[i] += 1;
        }
        let c = Caterpillar::from_counts(counts)?;
        acc.add(exact_value(&c, kind)?, &one);

        let mut pos = 0;
        loop {
            if pos == sequence.len() {
                return Ok(acc.finish(total));
            }
            sequence[pos] += 1;
            if sequence[pos] < m {
                break;
            }
            sequence[pos] = 0;
            pos += 1;
        }
    }
}

/// Visits every composition of `n` into `m` non-negative parts.
pub fn for_each_composition(m: usize, n: u64, mut visit: impl FnMut(&[u64])) {
    fn recurse(parts: &mut Vec<u64>, m: usize, remaining: u64, visit: &mut dyn FnMut(&[u64])) {
        if parts.len() == m - 1 {
            parts.push(remaining);
            visit(parts);
            parts.pop();
            return;
        }
        for x in 0..=remaining {
            parts.push(x);
            recurse(parts, m, remaining - x, visit);
            parts.pop();
        }
    }
    let mut parts = Vec::with_capacity(m);
    recurse(&mut parts, m, n, &mut visit);
}

fn factorials(upto: u64) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for k in 1..=upto {
        let next = &out[(k - 1) as usize] * BigInt::from(k);
        out.push(next);
    }
    out
}

fn by_compositions(m: usize, n: u64, kind: IndexKind) -> Result<ExactMoments> {
    guard(&composition_count(m, n))?;
    let fact = factorials(n);
    let mut acc = Accumulator::new();
    let mut failure = None;
    for_each_composition(m, n, |parts| {
        let weight = parts
            .iter()
            .fold(fact[n as usize].clone(), |w, &x| w / &fact[x as usize]);
        match Caterpillar::from_counts(parts.to_vec()).and_then(|c| exact_value(&c, kind)) {
            Ok(value) => acc.add(value, &weight),
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(acc.finish(history_count(m, n)))
}

/// All-pairs shortest path lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    size: usize,
    distances: Vec<u32>,
}

impl DistanceMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.distances[u * self.size + v]
    }

    pub fn max(&self) -> u32 {
        self.distances.iter().copied().max().unwrap_or(0)
    }

    /// Each unordered pair `u < v` once.
    pub fn pairs(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.size).flat_map(move |u| (u + 1..self.size).map(move |v| self.get(u, v)))
    }
}

/// BFS from every node.
pub fn bfs_distances(g: &AdjacencyGraph) -> Result<DistanceMatrix> {
    let size = g.node_count();
    let mut distances = vec![u32::MAX; size * size];
    let mut queue = VecDeque::new();
    for source in 0..size {
        let row = &mut distances[source * size..(source + 1) * size];
        row[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbours(u) {
                if row[v] == u32::MAX {
                    row[v] = row[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if let Some(node) = row.iter().position(|&d| d == u32::MAX) {
            return Err(Error::Disconnected { node });
        }
    }
    Ok(DistanceMatrix { size, distances })
}

/// Sum of distances over unordered pairs.
pub fn wiener_bfs(g: &AdjacencyGraph) -> Result<u128> {
    Ok(bfs_distances(g)?.pairs().map(u128::from).sum())
}

/// Sum of `d + d²` over unordered pairs.
pub fn hyper_wiener_bfs(g: &AdjacencyGraph) -> Result<u128> {
    Ok(bfs_distances(g)?
        .pairs()
        .map(|d| {
            let d = u128::from(d);
            d + d * d
        })
        .sum())
}

/// Second Zagreb index summed over explicit edges.
pub fn randic_unit_edges(g: &AdjacencyGraph) -> u128 {
    g.edges()
        .map(|(u, v)| (g.degree(u) * g.degree(v)) as u128)
        .sum()
}

/// The `m` equally likely next states.
pub fn one_step_successors(c: &Caterpillar) -> Vec<Caterpillar> {
    (0..c.m()).map(|i| c.with_leaf_at(i)).collect()
}

/// Exact conditional mean of an integer-valued index one step ahead.
pub fn conditional_mean(c: &Caterpillar, kind: IndexKind) -> Result<BigRational> {
    let successors = one_step_successors(c);
    let mut sum = BigInt::zero();
    for s in &successors {
        sum += BigInt::from(exact_value(s, kind)?);
    }
    Ok(BigRational::new(sum, BigInt::from(successors.len())))
}

/// `E[M_n | F_{n-1}] - M_{n-1}` for `M_n = Z_n - n(n + 6m - 5)/m`, taking
/// `c` as the state at time `n - 1`. Zero for a martingale.
pub fn martingale_residual(c: &Caterpillar) -> Result<BigRational> {
    let m = c.m() as u64;
    let now = c.n();
    let compensator_now = theory::zagreb_compensator(m, now)?.value;
    let compensator_next = theory::zagreb_compensator(m, now + 1)?.value;
    let current = BigRational::from_integer(BigInt::from(indices::zagreb(c))) + compensator_now;
    let next = conditional_mean(c, IndexKind::Zagreb)? + compensator_next;
    Ok(next - current)
}
