//! Hardness-instance demonstrations: brute-force optima of constrained
//! submodular minimization problems against the values the planted
//! construction dictates.

use crate::dist::sample_fixed_size;
use crate::error::Error;
use crate::expander::{sample_partitioned_expander, verify_expansion, ExpansionParams};
use crate::matroid::{build_family_mb, ConstraintFamily, FamilyMb, MatroidSpec};
use crate::rng::{self, Stream};
use crate::set::{binomial, for_each_combination, ElementSet};
use crate::Result;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Enumeration ceiling for exhaustive brute-force minimization.
pub const BRUTE_BUDGET: u128 = 1 << 24;

/// A brute-force minimum with its argmin and provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BruteMinimum {
    pub value: usize,
    pub argmin: Vec<usize>,
    /// False when the search space exceeded the budget and was sampled.
    pub exhaustive: bool,
    pub candidates_checked: u64,
}

/// Outcome of a minimization demo: the brute-force optimum next to the value
/// the construction predicts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinDemo {
    pub brute: BruteMinimum,
    pub predicted: usize,
    pub matches: bool,
}

/// Minimizes `rank(S)` over `|S| ≥ d`. Since the rank is monotone the
/// minimum is attained at `|S| = d` exactly, so the search enumerates
/// `C(n, d)` sets (or samples when that exceeds the budget, flagged). The
/// predicted value is `b` when any set is marked, `d` otherwise.
pub fn constrained_min_demo(fam: &FamilyMb, seed: u64) -> Result<MinDemo> {
    let n = fam.ground_size();
    let d = fam.cap();
    let spec = fam.spec();
    let mut best = usize::MAX;
    let mut argmin = ElementSet::empty(n);
    let mut checked = 0u64;
    let exhaustive = binomial(n, d) <= BRUTE_BUDGET;
    if exhaustive {
        for_each_combination(n, d, |idx| {
            let s = ElementSet::from_indices(n, idx).expect("indices in range");
            let r = spec.rank(&s);
            checked += 1;
            if r < best {
                best = r;
                argmin = s;
            }
            true
        });
    } else {
        // Sampled fallback: random size-d sets plus the planted sets, which
        // are the designed minimizers.
        let mut rng = rng::stream(seed, Stream::Trial, 0);
        for _ in 0..200_000 {
            let s = sample_fixed_size(n, d, &mut rng);
            let r = spec.rank(&s);
            checked += 1;
            if r < best {
                best = r;
                argmin = s;
            }
        }
        for set in fam.planted_sets() {
            let r = spec.rank(set);
            checked += 1;
            if r < best {
                best = r;
                argmin = set.clone();
            }
        }
    }
    let predicted = if fam.marked().is_empty() {
        d
    } else {
        (fam.low_rank() as usize).min(d)
    };
    Ok(MinDemo {
        matches: best == predicted,
        brute: BruteMinimum {
            value: best,
            argmin: argmin.to_indices(),
            exhaustive,
            candidates_checked: checked,
        },
        predicted,
    })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StCutParams {
    /// Number of planted cuts (left vertices).
    pub k: usize,
    /// Number of disjoint source-sink paths; also the cut size.
    pub d: usize,
    /// Total number of edges; each path has `n / d` of them.
    pub n: usize,
    /// Low rank of marked cuts.
    pub b: i64,
    pub tau: usize,
    pub seed: u64,
}

/// A source-sink cut instance: `d` disjoint paths of `n/d` edges, planted
/// minimal cuts from the block-structured sampler, and the brute-force
/// minimum of the rank over all minimal cuts (transversals of the paths).
#[derive(Debug, Clone)]
pub struct StCutDemo {
    /// Edge indices of each path, in order from source to sink.
    pub paths: Vec<Vec<usize>>,
    pub family: FamilyMb,
    pub expansion_verified: bool,
    pub demo: MinDemo,
}

pub fn st_cut_instance(params: &StCutParams, marked: &[usize]) -> Result<StCutDemo> {
    let StCutParams {
        k,
        d,
        n,
        b,
        tau,
        seed,
    } = *params;
    if !n.is_multiple_of(d) {
        return Err(Error::NotDivisible { n, d });
    }
    let stride = n / d;
    let paths: Vec<Vec<usize>> = (0..d)
        .map(|i| (i * stride..(i + 1) * stride).collect())
        .collect();
    // One neighbor per block means every planted set picks exactly one edge
    // per path: a minimal source-sink cut.
    let graph = sample_partitioned_expander(k, n, d, seed, None)?;
    let eps = b as f64 / (4.0 * d as f64);
    let l = tau.max(2 * tau - 2).min(k);
    let expansion_verified = verify_expansion(&graph, &ExpansionParams::new(d, l, eps)?)?.passes;
    let family = build_family_mb(graph, b, d, tau, marked)?;

    let transversals = (stride as u128).checked_pow(d as u32);
    let exhaustive = transversals.is_some_and(|t| t <= BRUTE_BUDGET);
    let spec = family.spec();
    let mut best = usize::MAX;
    let mut argmin = ElementSet::empty(n);
    let mut checked = 0u64;
    if exhaustive {
        // Mixed-radix counter over one edge choice per path.
        let mut choice = vec![0usize; d];
        loop {
            let mut cut = ElementSet::empty(n);
            for (path, &pos) in paths.iter().zip(&choice) {
                cut.insert(path[pos]);
            }
            let r = spec.rank(&cut);
            checked += 1;
            if r < best {
                best = r;
                argmin = cut;
            }
            let mut i = 0;
            loop {
                if i == d {
                    break;
                }
                choice[i] += 1;
                if choice[i] < stride {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    } else {
        let mut rng = rng::stream(seed, Stream::Trial, 1);
        for _ in 0..200_000 {
            let mut cut = ElementSet::empty(n);
            for path in &paths {
                cut.insert(path[rng.gen_range(0..stride)]);
            }
            let r = spec.rank(&cut);
            checked += 1;
            if r < best {
                best = r;
                argmin = cut;
            }
        }
        for set in family.planted_sets() {
            let r = spec.rank(set);
            checked += 1;
            if r < best {
                best = r;
                argmin = set.clone();
            }
        }
    }
    let predicted = if family.marked().is_empty() {
        d
    } else {
        (b as usize).min(d)
    };
    Ok(StCutDemo {
        paths,
        expansion_verified,
        demo: MinDemo {
            matches: best == predicted,
            brute: BruteMinimum {
                value: best,
                argmin: argmin.to_indices(),
                exhaustive,
                candidates_checked: checked,
            },
            predicted,
        },
        family,
    })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct VertexCoverParams {
    /// Number of graph vertices; must be even. The graph is a perfect
    /// matching on `n/2` edges, so minimal vertex covers are transversals.
    pub n: usize,
    pub epsilon: f64,
    /// Number of planted covers, all carrying the capacity constraint.
    pub k: usize,
    pub seed: u64,
}

/// A submodular vertex-cover instance over a perfect matching.
#[derive(Debug, Clone)]
pub struct VertexCoverDemo {
    /// Matching edges as vertex pairs.
    pub edges: Vec<(usize, usize)>,
    /// The planted minimal covers.
    pub covers: Vec<ElementSet>,
    pub spec: MatroidSpec,
    pub cap_b: i64,
    pub cap_d: i64,
    /// `d / b`, which approaches 4/3 from above as epsilon shrinks.
    pub ratio: f64,
    pub demo: MinDemo,
}

const COVER_RETRIES: usize = 200;

pub fn vertex_cover_instance(params: &VertexCoverParams) -> Result<VertexCoverDemo> {
    let VertexCoverParams {
        n,
        epsilon,
        k,
        seed,
    } = *params;
    if !n.is_multiple_of(2) || n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "need a positive even vertex count".into(),
        });
    }
    if !(0.0..1.0).contains(&epsilon) || epsilon == 0.0 {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: "need epsilon in (0,1)".into(),
        });
    }
    let edges: Vec<(usize, usize)> = (0..n / 2).map(|i| (2 * i, 2 * i + 1)).collect();
    let overlap_cap = ((1.0 + epsilon) * n as f64 / 4.0).floor() as usize;

    // Sample k independent minimal covers until all pairwise overlaps stay
    // within the concentration bound.
    let mut covers = Vec::new();
    let mut accepted = false;
    for attempt in 0..COVER_RETRIES {
        let mut rng = rng::stream(seed, Stream::Instance, attempt as u64);
        let candidate: Vec<ElementSet> = (0..k)
            .map(|_| {
                let mut c = ElementSet::empty(n);
                for &(a, b) in &edges {
                    c.insert(if rng.gen::<bool>() { a } else { b });
                }
                c
            })
            .collect();
        let ok = (0..k).all(|i| {
            (i + 1..k).all(|j| candidate[i].intersection_len(&candidate[j]) <= overlap_cap)
        });
        if ok {
            covers = candidate;
            accepted = true;
            break;
        }
    }
    if !accepted {
        return Err(Error::RetriesExhausted {
            what: "minimal vertex covers with bounded overlaps",
            retries: COVER_RETRIES,
        });
    }

    let cap_b = ((3.0 + epsilon) * n as f64 / 8.0).ceil() as i64;
    let cap_d = (n / 2) as i64;
    let family = ConstraintFamily::new(n, covers.clone(), vec![cap_b; k])?;
    let spec = MatroidSpec::pairwise(family, cap_d)?;

    let transversals = 1u128.checked_shl((n / 2) as u32);
    let exhaustive = transversals.is_some_and(|t| t <= BRUTE_BUDGET);
    let mut best = usize::MAX;
    let mut argmin = ElementSet::empty(n);
    let mut checked = 0u64;
    if exhaustive {
        for mask in 0..1u64 << (n / 2) {
            let mut cover = ElementSet::empty(n);
            for (i, &(a, b)) in edges.iter().enumerate() {
                cover.insert(if mask >> i & 1 == 1 { b } else { a });
            }
            let r = spec.rank(&cover);
            checked += 1;
            if r < best {
                best = r;
                argmin = cover;
            }
        }
    } else {
        let mut rng = rng::stream(seed, Stream::Trial, 0);
        for _ in 0..200_000 {
            let mut cover = ElementSet::empty(n);
            for &(a, b) in &edges {
                cover.insert(if rng.gen::<bool>() { b } else { a });
            }
            let r = spec.rank(&cover);
            checked += 1;
            if r < best {
                best = r;
                argmin = cover;
            }
        }
        for c in &covers {
            let r = spec.rank(c);
            checked += 1;
            if r < best {
                best = r;
                argmin = c.clone();
            }
        }
    }
    let predicted = if k == 0 {
        cap_d as usize
    } else {
        cap_b.min(cap_d) as usize
    };
    Ok(VertexCoverDemo {
        edges,
        covers,
        spec,
        cap_b,
        cap_d,
        ratio: cap_d as f64 / cap_b as f64,
        demo: MinDemo {
            matches: best == predicted,
            brute: BruteMinimum {
                value: best,
                argmin: argmin.to_indices(),
                exhaustive,
                candidates_checked: checked,
            },
            predicted,
        },
    })
}
