//! Per-instance topological indices computed straight from leaf counts.
//!
//! Integer-valued indices (Zagreb, Randić with α = 1, Wiener, hyper-Wiener)
//! are exact in `u128`. Distance indices use the spine-spine / leaf-leaf /
//! spine-leaf decomposition with prefix sums, so they cost O(m) rather than
//! the O((n+m)^2) of BFS.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::caterpillar::Caterpillar;
use crate::error::{Error, Result};

/// Which index to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum IndexKind {
    DegreeGini,
    Hoover,
    Zagreb,
    /// General Randić index with exponent α.
    Randic(f64),
    Wiener,
    HyperWiener,
}

impl IndexKind {
    /// True when the index is an integer computed without rounding.
    pub fn is_exact(&self) -> bool {
        match self {
            IndexKind::Zagreb | IndexKind::Wiener | IndexKind::HyperWiener => true,
            IndexKind::Randic(alpha) => *alpha == 1.0,
            IndexKind::DegreeGini | IndexKind::Hoover => false,
        }
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexKind::DegreeGini => f.write_str("gini_degree"),
            IndexKind::Hoover => f.write_str("hoover"),
            IndexKind::Zagreb => f.write_str("zagreb"),
            IndexKind::Randic(alpha) if *alpha == 1.0 => f.write_str("randic"),
            IndexKind::Randic(alpha) => write!(f, "randic:{alpha}"),
            IndexKind::Wiener => f.write_str("wiener"),
            IndexKind::HyperWiener => f.write_str("hyper_wiener"),
        }
    }
}

impl FromStr for IndexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(alpha) = s.strip_prefix("randic:") {
            let alpha: f64 = alpha
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad randic exponent in '{s}'")))?;
            if !alpha.is_finite() {
                return Err(Error::InvalidArgument(format!("randic exponent must be finite: '{s}'")));
            }
            return Ok(IndexKind::Randic(alpha));
        }
        match s {
            "gini_degree" | "gini" => Ok(IndexKind::DegreeGini),
            "hoover" => Ok(IndexKind::Hoover),
            "zagreb" => Ok(IndexKind::Zagreb),
            "randic" => Ok(IndexKind::Randic(1.0)),
            "wiener" => Ok(IndexKind::Wiener),
            "hyper_wiener" => Ok(IndexKind::HyperWiener),
            other => Err(Error::InvalidArgument(format!("unknown index '{other}'"))),
        }
    }
}

impl From<IndexKind> for String {
    fn from(kind: IndexKind) -> Self {
        kind.to_string()
    }
}

impl TryFrom<String> for IndexKind {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// An evaluated index. `exact` is set for integer-valued kinds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexValue {
    pub kind: IndexKind,
    pub value: f64,
    pub exact: Option<u128>,
}

/// Evaluates `kind` on `c`.
pub fn evaluate(c: &Caterpillar, kind: IndexKind) -> IndexValue {
    let exact = match kind {
        IndexKind::Zagreb => Some(zagreb(c)),
        IndexKind::Randic(1.0) => Some(randic_unit(c)),
        IndexKind::Wiener => Some(wiener(c)),
        IndexKind::HyperWiener => Some(hyper_wiener(c)),
        _ => None,
    };
    let value = match (kind, exact) {
        (_, Some(v)) => v as f64,
        (IndexKind::DegreeGini, _) => degree_gini(c),
        (IndexKind::Hoover, _) => hoover(c),
        (IndexKind::Randic(alpha), _) => randic(c, alpha),
        _ => unreachable!("integer kinds handled above"),
    };
    IndexValue { kind, value, exact }
}

/// Gini functional `Σ_i Σ_j |w_i - w_j| / (2 n Σ w)`.
///
/// Uses the sorted identity `Σ_i Σ_j |w_i - w_j| = 2 Σ_k (2k - n - 1) w_(k)`.
pub fn gini_functional(weights: &[f64]) -> Result<f64> {
    if weights.len() < 2 {
        return Err(Error::TooFewWeights { len: weights.len() });
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidWeight);
    }
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return Err(Error::ZeroTotalWealth);
    }
    let mut sorted = weights.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(k, w)| (2.0 * (k + 1) as f64 - n - 1.0) * w)
        .sum();
    Ok(2.0 * weighted / (2.0 * n * total))
}

/// Gini functional over the full degree sequence (spine and leaves).
///
/// Degrees are integers, so the double sum is accumulated exactly over
/// blocks of equal degree and only the final ratio is rounded.
pub fn degree_gini(c: &Caterpillar) -> f64 {
    let mut blocks: Vec<(u64, u64)> = c.spine_degrees().map(|d| (d, 1)).collect();
    blocks.push((1, c.n()));
    blocks.sort_unstable();

    let total_nodes = c.node_count() as i128;
    let degree_sum = 2 * (total_nodes - 1);
    // Σ_k (2k - N - 1) w_(k), ranks k starting at 1
    let mut rank_before = 0i128;
    let mut weighted = 0i128;
    for (degree, count) in blocks {
        let count = count as i128;
        let rank_sum = count * rank_before + count * (count + 1) / 2;
        weighted += (2 * rank_sum - count * (total_nodes + 1)) * degree as i128;
        rank_before += count;
    }
    // 2·weighted / (2·N·Σw)
    weighted as f64 / (total_nodes as f64 * degree_sum as f64)
}

/// Degree-based Hoover index with the class normalisation of uniform
/// caterpillars: `E|V| = n + m` and `E[deg U] = 2 - 2/(n + m)` are
/// deterministic, so
/// `H = Σ_v |deg v - avg| / (2 (n+m) avg)`, `avg = 2(N - 1)/N`.
///
/// Multiplying through by `N` gives the integer form
/// `Σ_v |N deg v - 2(N-1)| / (4 N (N-1))`.
pub fn hoover(c: &Caterpillar) -> f64 {
    let total_nodes = c.node_count() as i128;
    let scaled_avg = 2 * (total_nodes - 1);
    let spine: i128 = c
        .spine_degrees()
        .map(|d| (total_nodes * d as i128 - scaled_avg).abs())
        .sum();
    let leaves = c.n() as i128 * (total_nodes - scaled_avg).abs();
    (spine + leaves) as f64 / (4 * total_nodes * (total_nodes - 1)) as f64
}

/// First Zagreb index: sum of squared degrees over all nodes.
pub fn zagreb(c: &Caterpillar) -> u128 {
    let spine: u128 = c.spine_degrees().map(|d| (d as u128).pow(2)).sum();
    spine + c.n() as u128
}

/// Randić index with exponent `alpha`: spine edges contribute
/// `(D_{i-1} D_i)^α` and every leaf of spine node `i` contributes `D_i^α`.
pub fn randic(c: &Caterpillar, alpha: f64) -> f64 {
    if alpha == 1.0 {
        return randic_unit(c) as f64;
    }
    let degrees: Vec<f64> = c.spine_degrees().map(|d| d as f64).collect();
    let spine: f64 = degrees
        .windows(2)
        .map(|w| (w[0] * w[1]).powf(alpha))
        .sum();
    let leaves: f64 = c
        .leaf_counts()
        .iter()
        .zip(&degrees)
        .map(|(&x, &d)| x as f64 * d.powf(alpha))
        .sum();
    spine + leaves
}

/// Randić index with α = 1 (second Zagreb index), exact.
pub fn randic_unit(c: &Caterpillar) -> u128 {
    let degrees: Vec<u128> = c.spine_degrees().map(u128::from).collect();
    let spine: u128 = degrees.windows(2).map(|w| w[0] * w[1]).sum();
    let leaves: u128 = c
        .leaf_counts()
        .iter()
        .zip(&degrees)
        .map(|(&x, &d)| x as u128 * d)
        .sum();
    spine + leaves
}

/// `Σ_{k=1}^{upto} k`
fn sum_to(upto: i128) -> i128 {
    upto * (upto + 1) / 2
}

/// `Σ_{k=1}^{upto} k²`
fn sum_sq_to(upto: i128) -> i128 {
    upto * (upto + 1) * (2 * upto + 1) / 6
}

/// Wiener index over unordered node pairs, exact, O(m).
pub fn wiener(c: &Caterpillar) -> u128 {
    let m = c.m() as i128;
    let spine_spine = m * (m * m - 1) / 6;

    let mut leaf_leaf = 0i128;
    let mut spine_leaf = 0i128;
    // prefix sums over spine nodes before j: Σ X_i and Σ i X_i
    let mut count_before = 0i128;
    let mut moment_before = 0i128;
    for (j, &x) in c.leaf_counts().iter().enumerate() {
        let (j, x) = (j as i128, x as i128);
        // leaves on different spine nodes i < j are j - i + 2 apart
        leaf_leaf += x * ((j + 2) * count_before - moment_before);
        // leaves on the same spine node are 2 apart
        leaf_leaf += x * (x - 1);
        // leaf on j to every spine node: Σ_i (|i - j| + 1)
        spine_leaf += x * (sum_to(j) + sum_to(m - 1 - j) + m);
        count_before += x;
        moment_before += j * x;
    }
    (spine_spine + leaf_leaf + spine_leaf) as u128
}

/// Hyper-Wiener index `Σ (d + d²)` over unordered node pairs, exact, O(m).
pub fn hyper_wiener(c: &Caterpillar) -> u128 {
    let m = c.m() as i128;
    // spine gap k occurs m - k times
    let spine_spine: i128 = (1..m).map(|k| (m - k) * (k + k * k)).sum();

    let mut leaf_leaf = 0i128;
    let mut spine_leaf = 0i128;
    // prefix sums before j of X_i, i X_i, i² X_i
    let mut s0 = 0i128;
    let mut s1 = 0i128;
    let mut s2 = 0i128;
    for (j, &x) in c.leaf_counts().iter().enumerate() {
        let (j, x) = (j as i128, x as i128);
        // distance d = (j - i) + 2, weight d + d² = (j-i)² + 5(j-i) + 6
        leaf_leaf += x * ((j * j + 5 * j + 6) * s0 - (2 * j + 5) * s1 + s2);
        // X(X-1)/2 same-node pairs at distance 2, weight 6
        leaf_leaf += 3 * x * (x - 1);
        // distance |i - j| + 1, weight |i-j|² + 3|i-j| + 2
        let left = j;
        let right = m - 1 - j;
        spine_leaf += x
            * (sum_sq_to(left) + sum_sq_to(right) + 3 * (sum_to(left) + sum_to(right)) + 2 * m);
        s0 += x;
        s1 += j * x;
        s2 += j * j * x;
    }
    (spine_spine + leaf_leaf + spine_leaf) as u128
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat(counts: &[u64]) -> Caterpillar {
        Caterpillar::from_counts(counts.to_vec()).unwrap()
    }

    fn brute_gini(w: &[f64]) -> f64 {
        let n = w.len() as f64;
        let total: f64 = w.iter().sum();
        let mut acc = 0.0;
        for a in w {
            for b in w {
                acc += (a - b).abs();
            }
        }
        acc / (2.0 * n * total)
    }

    #[test]
    fn gini_functional_examples() {
        assert_eq!(gini_functional(&[5.0, 5.0, 5.0, 5.0]).unwrap(), 0.0);
        assert!((gini_functional(&[0.0, 1.0]).unwrap() - 0.5).abs() < 1e-15);
        assert!((gini_functional(&[1.0, 2.0, 3.0]).unwrap() - 8.0 / 36.0).abs() < 1e-15);
        let w = [3.0, 0.5, 7.25, 1.0, 1.0, 9.0];
        assert!((gini_functional(&w).unwrap() - brute_gini(&w)).abs() < 1e-14);
    }

    #[test]
    fn gini_functional_errors() {
        assert_eq!(gini_functional(&[0.0, 0.0]), Err(Error::ZeroTotalWealth));
        assert_eq!(gini_functional(&[1.0]), Err(Error::TooFewWeights { len: 1 }));
        assert_eq!(gini_functional(&[1.0, -1.0]), Err(Error::InvalidWeight));
    }

    #[test]
    fn degree_gini_examples() {
        assert_eq!(degree_gini(&cat(&[0, 0])), 0.0);
        assert!((degree_gini(&cat(&[1, 0])) - 1.0 / 6.0).abs() < 1e-15);
        let c = cat(&[3, 0, 5, 1, 2]);
        let degrees: Vec<f64> = c.degree_sequence().iter().map(|&d| d as f64).collect();
        assert!((degree_gini(&c) - brute_gini(&degrees)).abs() < 1e-14);
    }

    #[test]
    fn hoover_examples() {
        assert_eq!(hoover(&cat(&[0, 0])), 0.0);
        assert!((hoover(&cat(&[1, 0])) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn zagreb_examples() {
        assert_eq!(zagreb(&cat(&[0, 0, 0])), 6);
        assert_eq!(zagreb(&cat(&[2, 0])), 12);
        assert_eq!(zagreb(&cat(&[1, 1])), 10);
    }

    #[test]
    fn randic_examples() {
        assert_eq!(randic_unit(&cat(&[0, 1, 0])), 9);
        assert_eq!(randic_unit(&cat(&[1, 0, 0])), 8);
        assert_eq!(randic(&cat(&[1, 0, 0]), 1.0), 8.0);
        let r = randic(&cat(&[0, 0, 0]), -0.5);
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn wiener_examples() {
        assert_eq!(wiener(&cat(&[0, 0, 0])), 4);
        assert_eq!(wiener(&cat(&[1, 0])), 4);
    }

    #[test]
    fn hyper_wiener_examples() {
        assert_eq!(hyper_wiener(&cat(&[0, 0, 0])), 10);
        assert_eq!(hyper_wiener(&cat(&[0, 1, 0])), 24);
        assert_eq!(hyper_wiener(&cat(&[1, 0])), 10);
    }

    #[test]
    fn index_kind_parsing() {
        assert_eq!("zagreb".parse::<IndexKind>().unwrap(), IndexKind::Zagreb);
        assert_eq!("randic".parse::<IndexKind>().unwrap(), IndexKind::Randic(1.0));
        assert_eq!(
            "randic:-0.5".parse::<IndexKind>().unwrap(),
            IndexKind::Randic(-0.5)
        );
        assert_eq!(IndexKind::Randic(-0.5).to_string(), "randic:-0.5");
        assert!("randic:x".parse::<IndexKind>().is_err());
        assert!("balaban".parse::<IndexKind>().is_err());
    }

    #[test]
    fn evaluate_sets_exact_for_integer_kinds() {
        let c = cat(&[2, 1, 0]);
        assert_eq!(evaluate(&c, IndexKind::Wiener).exact, Some(wiener(&c)));
        assert_eq!(evaluate(&c, IndexKind::Randic(1.0)).exact, Some(randic_unit(&c)));
        assert_eq!(evaluate(&c, IndexKind::Randic(2.0)).exact, None);
        assert_eq!(evaluate(&c, IndexKind::Hoover).exact, None);
    }
}
