//! Caterpillar states and the uniform leaf-attachment growth process.
//!
//! A caterpillar is stored as its spine length `m` and the number of leaves
//! hanging off each spine node. Every index in this crate is a function of
//! those counts alone, so the explicit graph is only built on demand
//! ([`Caterpillar::to_adjacency`]) for the BFS oracles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Seed plus substream id for one replicate.
///
/// The generator is ChaCha8 (`rand_chacha`): the 64-bit seed is expanded with
/// `SeedableRng::seed_from_u64` and `stream` selects ChaCha's native 64-bit
/// stream id. Identical `(seed, stream)` pairs give identical draws on every
/// platform; distinct streams are independent keystreams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Same seed, different substream.
    pub fn with_stream(self, stream: u64) -> Self {
        Self { stream, ..self }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// A caterpillar `C_n`: spine of `m >= 2` nodes with `leaf_counts[i]` leaves
/// attached to spine node `i` (0-indexed).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Caterpillar {
    leaf_counts: Vec<u64>,
}

impl Caterpillar {
    /// The bare spine at time 0.
    pub fn new_spine(m: usize) -> Result<Self> {
        check_spine(m)?;
        Ok(Self {
            leaf_counts: vec![0; m],
        })
    }

    pub fn from_counts(leaf_counts: Vec<u64>) -> Result<Self> {
        check_spine(leaf_counts.len())?;
        Ok(Self { leaf_counts })
    }

    /// Spine size.
    pub fn m(&self) -> usize {
        self.leaf_counts.len()
    }

    /// Number of leaves (the time index of the growth process).
    pub fn n(&self) -> u64 {
        self.leaf_counts.iter().sum()
    }

    pub fn leaf_counts(&self) -> &[u64] {
        &self.leaf_counts
    }

    pub fn node_count(&self) -> u64 {
        self.n() + self.m() as u64
    }

    pub fn edge_count(&self) -> u64 {
        self.node_count() - 1
    }

    /// Degree of spine node `i`: leaves plus one neighbour at either end of
    /// the spine, plus two in the interior.
    pub fn spine_degree(&self, i: usize) -> u64 {
        let m = self.m();
        let spine_neighbours = if i == 0 || i == m - 1 { 1 } else { 2 };
        self.leaf_counts[i] + spine_neighbours
    }

    pub fn spine_degrees(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.m()).map(move |i| self.spine_degree(i))
    }

    /// Spine degrees in order followed by `n` ones for the leaves.
    pub fn degree_sequence(&self) -> Vec<u64> {
        let mut degrees: Vec<u64> = self.spine_degrees().collect();
        degrees.resize(degrees.len() + self.n() as usize, 1);
        degrees
    }

    /// The state after attaching one more leaf to spine node `i`.
    pub fn with_leaf_at(&self, i: usize) -> Self {
        let mut next = self.clone();
        next.leaf_counts[i] += 1;
        next
    }

    /// One growth step: a spine node is chosen uniformly and receives a leaf.
    pub fn grow_step<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        self.with_leaf_at(rng.random_range(0..self.m()))
    }

    /// Explicit graph: spine nodes `0..m` in path order, then the leaves of
    /// spine node 0, then those of spine node 1, and so on.
    pub fn to_adjacency(&self) -> AdjacencyGraph {
        let m = self.m();
        let node_count = self.node_count() as usize;
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); node_count];
        let mut labels: Vec<NodeLabel> = (0..m).map(NodeLabel::Spine).collect();
        for i in 1..m {
            adjacency[i - 1].push(i);
            adjacency[i].push(i - 1);
        }
        let mut next = m;
        for (parent, &count) in self.leaf_counts.iter().enumerate() {
            for _ in 0..count {
                adjacency[parent].push(next);
                adjacency[next].push(parent);
                labels.push(NodeLabel::Leaf { parent });
                next += 1;
            }
        }
        AdjacencyGraph { adjacency, labels }
    }
}

fn check_spine(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::SpineTooShort { m });
    }
    Ok(())
}

/// Runs `n` sequential growth steps from the bare spine.
pub fn simulate(m: usize, n: u64, seed: RngSeed) -> Result<Caterpillar> {
    check_spine(m)?;
    let mut rng = seed.rng();
    Ok(Caterpillar {
        leaf_counts: grow_counts(vec![0; m], n, &mut rng),
    })
}

/// Adds `steps` uniformly placed leaves to `counts` in place.
pub(crate) fn grow_counts<R: Rng + ?Sized>(mut counts: Vec<u64>, steps: u64, rng: &mut R) -> Vec<u64> {
    let m = counts.len();
    for _ in 0..steps {
        counts[rng.random_range(0..m)] += 1;
    }
    counts
}

/// Draws the leaf counts of `C_n` directly from Multinomial(n; 1/m, ..., 1/m)
/// by conditional binomials: `X_1 ~ Bin(n, 1/m)`,
/// `X_2 | X_1 ~ Bin(n - X_1, 1/(m-1))`, and so on, with the last spine node
/// taking the remainder.
///
/// Same law as [`simulate`], different sample path for a given seed.
pub fn sample_direct(m: usize, n: u64, seed: RngSeed) -> Result<Caterpillar> {
    check_spine(m)?;
    let mut rng = seed.rng();
    let mut counts = vec![0u64; m];
    let mut remaining = n;
    for (i, slot) in counts.iter_mut().enumerate().take(m - 1) {
        if remaining == 0 {
            break;
        }
        let p = 1.0 / (m - i) as f64;
        let draw = Binomial::new(remaining, p)
            .expect("p in (0, 1]")
            .sample(&mut rng);
        *slot = draw;
        remaining -= draw;
    }
    counts[m - 1] += remaining;
    Ok(Caterpillar {
        leaf_counts: counts,
    })
}

/// Role of a node in an [`AdjacencyGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeLabel {
    Spine(usize),
    Leaf { parent: usize },
}

/// Explicit undirected graph with adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyGraph {
    adjacency: Vec<Vec<usize>>,
    labels: Vec<NodeLabel>,
}

impl AdjacencyGraph {
    /// Builds a graph from neighbour lists; the lists must be symmetric.
    pub fn from_adjacency(adjacency: Vec<Vec<usize>>) -> Result<Self> {
        let node_count = adjacency.len();
        for (u, neighbours) in adjacency.iter().enumerate() {
            for &v in neighbours {
                if v >= node_count || !adjacency[v].contains(&u) {
                    return Err(Error::InvalidArgument(format!(
                        "adjacency is not symmetric at edge ({u}, {v})"
                    )));
                }
            }
        }
        let labels = (0..node_count).map(NodeLabel::Spine).collect();
        Ok(Self { adjacency, labels })
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn label(&self, v: usize) -> NodeLabel {
        self.labels[v]
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{HashMap, VecDeque};

    #[test]
    fn new_spine_is_empty() {
        let c = Caterpillar::new_spine(2).unwrap();
        assert_eq!(c.leaf_counts(), &[0, 0]);
        let c = Caterpillar::new_spine(5).unwrap();
        assert_eq!(c.leaf_counts(), &[0; 5]);
        assert_eq!(c.n(), 0);
    }

    #[test]
    fn short_spine_rejected() {
        assert_eq!(
            Caterpillar::new_spine(1),
            Err(Error::SpineTooShort { m: 1 })
        );
        assert!(simulate(0, 3, RngSeed::new(1, 0)).is_err());
        assert!(sample_direct(1, 3, RngSeed::new(1, 0)).is_err());
    }

    #[test]
    fn grow_step_adds_exactly_one_leaf() {
        let c = Caterpillar::from_counts(vec![4, 0, 1]).unwrap();
        let mut rng = RngSeed::new(3, 0).rng();
        for _ in 0..50 {
            let next = c.grow_step(&mut rng);
            assert_eq!(next.n(), 6);
            let diffs: Vec<u64> = next
                .leaf_counts()
                .iter()
                .zip(c.leaf_counts())
                .map(|(a, b)| a - b)
                .collect();
            assert_eq!(diffs.iter().sum::<u64>(), 1);
        }
    }

    #[test]
    fn two_steps_law_on_two_node_spine() {
        // 4 equally likely histories: [2,0] 1/4, [1,1] 1/2, [0,2] 1/4
        let draws = 40_000u64;
        let mut rng = RngSeed::new(11, 0).rng();
        let mut tally: HashMap<Vec<u64>, u64> = HashMap::new();
        let start = Caterpillar::new_spine(2).unwrap();
        for _ in 0..draws {
            let c = start.grow_step(&mut rng).grow_step(&mut rng);
            *tally.entry(c.leaf_counts().to_vec()).or_default() += 1;
        }
        let freq = |k: [u64; 2]| tally[&k.to_vec()] as f64 / draws as f64;
        assert!((freq([2, 0]) - 0.25).abs() < 0.01);
        assert!((freq([1, 1]) - 0.5).abs() < 0.01);
        assert!((freq([0, 2]) - 0.25).abs() < 0.01);
    }

    #[test]
    fn simulate_is_deterministic() {
        let c = simulate(3, 0, RngSeed::new(99, 4)).unwrap();
        assert_eq!(c.leaf_counts(), &[0, 0, 0]);
        let a = simulate(2, 1000, RngSeed::new(5, 0)).unwrap();
        let b = simulate(2, 1000, RngSeed::new(5, 0)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n(), 1000);
        let other = simulate(2, 1000, RngSeed::new(5, 1)).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn direct_sampler_edge_cases() {
        assert_eq!(
            sample_direct(4, 0, RngSeed::new(1, 0)).unwrap().leaf_counts(),
            &[0, 0, 0, 0]
        );
        let n = 1_000_000u64;
        let c = sample_direct(3, n, RngSeed::new(2024, 0)).unwrap();
        assert_eq!(c.n(), n);
        let mean = n as f64 / 3.0;
        let sd = (n as f64 * 2.0 / 9.0).sqrt();
        for &x in c.leaf_counts() {
            assert!((x as f64 - mean).abs() < 5.0 * sd, "{x}");
        }
    }

    #[test]
    fn degree_sequence_examples() {
        let c = Caterpillar::from_counts(vec![1, 0, 2]).unwrap();
        assert_eq!(c.degree_sequence(), vec![2, 2, 3, 1, 1, 1]);
        let c = Caterpillar::new_spine(2).unwrap();
        assert_eq!(c.degree_sequence(), vec![1, 1]);
        let c = Caterpillar::from_counts(vec![3, 4]).unwrap();
        assert_eq!(c.spine_degree(0), 4);
        assert_eq!(c.spine_degree(1), 5);
    }

    fn bfs_reach(g: &AdjacencyGraph) -> usize {
        let mut seen = vec![false; g.node_count()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbours(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count
    }

    #[test]
    fn adjacency_examples() {
        let g = Caterpillar::from_counts(vec![1, 0]).unwrap().to_adjacency();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbours(2), &[0]);
        assert_eq!(g.label(2), NodeLabel::Leaf { parent: 0 });

        let g = Caterpillar::new_spine(3).unwrap().to_adjacency();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);

        let c = Caterpillar::from_counts(vec![2, 0, 3, 1]).unwrap();
        let g = c.to_adjacency();
        assert_eq!(bfs_reach(&g), 10);
        assert_eq!(g.edge_count() as u64, c.edge_count());
    }

    #[test]
    fn rejects_asymmetric_adjacency() {
        assert!(AdjacencyGraph::from_adjacency(vec![vec![1], vec![]]).is_err());
    }
}
