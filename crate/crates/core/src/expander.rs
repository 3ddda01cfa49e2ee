//! Random left-regular bipartite multigraphs and exhaustive expansion
//! verification.

use crate::error::Error;
use crate::rng::{self, Stream};
use crate::set::{binomial, for_each_combination, ElementSet};
use crate::stats::wilson_interval;
use crate::{Result, ENUMERATION_BUDGET};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// A left-regular bipartite graph `U → V` stored as one sorted neighbor list
/// per left vertex. Every list holds exactly `d` distinct right vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteNeighborhoods {
    k: usize,
    n: usize,
    d: usize,
    neighbors: Vec<Vec<usize>>,
}

impl BipartiteNeighborhoods {
    /// Wraps explicit neighbor lists, validating regularity and ranges.
    pub fn from_neighbor_lists(n: usize, mut lists: Vec<Vec<usize>>) -> Result<Self> {
        if lists.is_empty() {
            return Err(Error::InvalidParameter {
                name: "lists",
                reason: "need at least one left vertex".into(),
            });
        }
        let d = lists[0].len();
        for list in &mut lists {
            list.sort_unstable();
            if list.len() != d {
                return Err(Error::LengthMismatch {
                    expected: d,
                    got: list.len(),
                });
            }
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Malformed {
                    what: "neighbor list",
                    reason: "duplicate endpoint".into(),
                });
            }
            if let Some(&v) = list.last() {
                if v >= n {
                    return Err(Error::ElementOutOfRange {
                        element: v,
                        universe: n,
                    });
                }
            }
        }
        Ok(BipartiteNeighborhoods {
            k: lists.len(),
            n,
            d,
            neighbors: lists,
        })
    }

    pub fn left_size(&self) -> usize {
        self.k
    }

    pub fn right_size(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.neighbors[u]
    }

    /// `Γ({u})` as an [`ElementSet`] over the right side.
    pub fn neighborhood(&self, u: usize) -> ElementSet {
        ElementSet::from_indices(self.n, &self.neighbors[u]).expect("validated on construction")
    }
}

/// Parameters for [`verify_expansion`]: every left set `J` with
/// `|J| ≤ l` must satisfy `|Γ(J)| ≥ (1 − epsilon)·d·|J|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionParams {
    pub d: usize,
    pub l: usize,
    pub epsilon: f64,
}

impl ExpansionParams {
    pub fn new(d: usize, l: usize, epsilon: f64) -> Result<Self> {
        if epsilon <= 0.0 || !epsilon.is_finite() {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: "must be positive and finite".into(),
            });
        }
        if l == 0 {
            return Err(Error::InvalidParameter {
                name: "l",
                reason: "must be at least 1".into(),
            });
        }
        Ok(ExpansionParams { d, l, epsilon })
    }
}

/// Outcome of [`verify_expansion`]: the verdict plus the left set minimizing
/// `|Γ(J)| / (d·|J|)`.
#[derive(Debug, Clone)]
pub struct ExpansionReport {
    pub passes: bool,
    pub worst_set: Vec<usize>,
    pub worst_neighborhood: usize,
    pub worst_ratio: f64,
}

/// Samples a left-regular multigraph: each left vertex draws `d` endpoints
/// i.i.d. uniformly from `[n]`, re-drawing any duplicate endpoint until the
/// list is distinct. Deterministic given the seed; each left vertex draws
/// from its own substream.
pub fn sample_expander(k: usize, n: usize, d: usize, seed: u64) -> Result<BipartiteNeighborhoods> {
    if d > n {
        return Err(Error::DegreeTooLarge { d, n });
    }
    if k == 0 || d == 0 {
        return Err(Error::InvalidParameter {
            name: "k,d",
            reason: "need k >= 1 and d >= 1".into(),
        });
    }
    let mut neighbors = Vec::with_capacity(k);
    for u in 0..k {
        let mut rng = rng::stream(seed, Stream::ExpanderVertex, u as u64);
        let mut seen = ElementSet::empty(n);
        let mut list = Vec::with_capacity(d);
        for _ in 0..d {
            loop {
                let v = rng.gen_range(0..n);
                if !seen.contains(v) {
                    seen.insert(v);
                    list.push(v);
                    break;
                }
            }
        }
        list.sort_unstable();
        neighbors.push(list);
    }
    Ok(BipartiteNeighborhoods { k, n, d, neighbors })
}

/// Samples the block-structured variant: the right side splits into `d`
/// blocks of size `n/d` and every left vertex picks one uniform neighbor per
/// block, except that the last vertex takes `fixed_last` verbatim when it is
/// given.
pub fn sample_partitioned_expander(
    k: usize,
    n: usize,
    d: usize,
    seed: u64,
    fixed_last: Option<&ElementSet>,
) -> Result<BipartiteNeighborhoods> {
    if d == 0 || k == 0 {
        return Err(Error::InvalidParameter {
            name: "k,d",
            reason: "need k >= 1 and d >= 1".into(),
        });
    }
    if !n.is_multiple_of(d) {
        return Err(Error::NotDivisible { n, d });
    }
    if let Some(fixed) = fixed_last {
        if fixed.len() != d {
            return Err(Error::FixedLastSize {
                expected: d,
                got: fixed.len(),
            });
        }
        if fixed.ground_size() != n {
            return Err(Error::ElementOutOfRange {
                element: fixed.ground_size(),
                universe: n,
            });
        }
    }
    let block = n / d;
    let mut neighbors = Vec::with_capacity(k);
    for u in 0..k {
        if u == k - 1 {
            if let Some(fixed) = fixed_last {
                neighbors.push(fixed.to_indices());
                continue;
            }
        }
        let mut rng = rng::stream(seed, Stream::ExpanderVertex, u as u64);
        let list: Vec<usize> = (0..d)
            .map(|i| i * block + rng.gen_range(0..block))
            .collect();
        neighbors.push(list);
    }
    Ok(BipartiteNeighborhoods { k, n, d, neighbors })
}

/// Exhaustively checks `|Γ(J)| ≥ (1 − epsilon)·d·|J|` over every `J` with
/// `1 ≤ |J| ≤ l`, returning the worst set. Refuses when the subset count
/// exceeds the enumeration budget.
pub fn verify_expansion(
    graph: &BipartiteNeighborhoods,
    params: &ExpansionParams,
) -> Result<ExpansionReport> {
    if params.d != graph.degree() {
        return Err(Error::DegreeMismatch {
            graph_d: graph.degree(),
            d: params.d,
        });
    }
    let k = graph.left_size();
    let l = params.l.min(k);
    let required: u128 = (1..=l).map(|j| binomial(k, j)).sum();
    if required > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            required,
            budget: ENUMERATION_BUDGET,
        });
    }
    let hoods: Vec<ElementSet> = (0..k).map(|u| graph.neighborhood(u)).collect();
    let d = graph.degree();
    let mut worst_ratio = f64::INFINITY;
    let mut worst_set = Vec::new();
    let mut worst_neighborhood = 0;
    let mut passes = true;
    for j in 1..=l {
        for_each_combination(k, j, |idx| {
            let mut union = hoods[idx[0]].clone();
            for &u in &idx[1..] {
                union.union_with(&hoods[u]);
            }
            let gamma = union.len();
            let ratio = gamma as f64 / (d * j) as f64;
            if ratio < worst_ratio {
                worst_ratio = ratio;
                worst_set = idx.to_vec();
                worst_neighborhood = gamma;
            }
            if (gamma as f64) < (1.0 - params.epsilon) * (d * j) as f64 {
                passes = false;
            }
            true
        });
    }
    Ok(ExpansionReport {
        passes,
        worst_set,
        worst_neighborhood,
        worst_ratio,
    })
}

/// Which sampler a success-rate sweep drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    Plain,
    Partitioned,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub kind: GeneratorKind,
    pub k: usize,
    pub n: usize,
    pub d: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuccessRate {
    pub trials: usize,
    pub successes: usize,
    pub frequency: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    /// Per-seed verdicts in trial order, for raw CSV output.
    pub verdicts: Vec<bool>,
}

/// Samples `trials` graphs from consecutive seeds `seed, seed+1, ..` and
/// reports the fraction passing [`verify_expansion`], with a Wilson 95%
/// interval.
pub fn success_rate(
    gen: &GeneratorParams,
    params: &ExpansionParams,
    trials: usize,
    seed: u64,
) -> Result<SuccessRate> {
    if trials == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            reason: "must be at least 1".into(),
        });
    }
    let mut verdicts = Vec::with_capacity(trials);
    for t in 0..trials {
        let s = seed.wrapping_add(t as u64);
        let graph = match gen.kind {
            GeneratorKind::Plain => sample_expander(gen.k, gen.n, gen.d, s)?,
            GeneratorKind::Partitioned => {
                sample_partitioned_expander(gen.k, gen.n, gen.d, s, None)?
            }
        };
        verdicts.push(verify_expansion(&graph, params)?.passes);
    }
    let successes = verdicts.iter().filter(|&&v| v).count();
    let (lo, hi) = wilson_interval(successes, trials);
    Ok(SuccessRate {
        trials,
        successes,
        frequency: successes as f64 / trials as f64,
        wilson_low: lo,
        wilson_high: hi,
        verdicts,
    })
}

/// Serialized graph: `{"k", "n", "d", "neighbors"}` with sorted lists.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GraphFile {
    pub k: usize,
    pub n: usize,
    pub d: usize,
    pub neighbors: Vec<Vec<usize>>,
}

impl GraphFile {
    pub fn from_graph(g: &BipartiteNeighborhoods) -> Self {
        GraphFile {
            k: g.k,
            n: g.n,
            d: g.d,
            neighbors: g.neighbors.clone(),
        }
    }

    pub fn to_graph(&self) -> Result<BipartiteNeighborhoods> {
        let g = BipartiteNeighborhoods::from_neighbor_lists(self.n, self.neighbors.clone())?;
        if g.degree() != self.d || g.left_size() != self.k {
            return Err(Error::Malformed {
                what: "graph file",
                reason: "declared k or d disagrees with neighbor lists".into(),
            });
        }
        Ok(g)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
