//! Named standard instances: Lipschitz submodular functions for the
//! concentration and characterization suites, small matroids for demand and
//! bound checks, and randomized constraint-matroid instances for the axiom
//! suites.

use crate::expander::{sample_expander, verify_expansion, ExpansionParams};
use crate::func::SetFunction;
use crate::matroid::{build_family_mb, ConstraintFamily, FamilyMb, MatroidSpec};
use crate::rng::{self, Stream};
use crate::set::ElementSet;
use rand::Rng;
use std::sync::Arc;

/// A corpus member; `profile` carries the cardinality profile when the
/// function has one, enabling exact binomial oracles.
#[derive(Debug, Clone)]
pub struct CorpusFunction {
    pub name: String,
    pub f: SetFunction,
    pub profile: Option<Vec<f64>>,
}

fn profile_fn(name: &str, h: Vec<f64>) -> CorpusFunction {
    CorpusFunction {
        name: name.to_string(),
        f: SetFunction::cardinality_profile(h.clone()).expect("valid profile"),
        profile: Some(h),
    }
}

/// Searches seeds for a sampled graph whose expansion suffices for the
/// planted-rank dichotomy at `eps = b / (4 d)`, then builds the family.
#[allow(clippy::too_many_arguments)]
pub fn verified_family_mb(
    k: usize,
    n: usize,
    d: usize,
    b: i64,
    tau: usize,
    marked: &[usize],
    seed_start: u64,
    seed_tries: u64,
) -> Option<(u64, FamilyMb)> {
    let eps = b as f64 / (4.0 * d as f64);
    let l = tau.max(2 * tau - 2).min(k);
    let params = ExpansionParams::new(d, l, eps).ok()?;
    for seed in seed_start..seed_start + seed_tries {
        let Ok(graph) = sample_expander(k, n, d, seed) else {
            continue;
        };
        let Ok(report) = verify_expansion(&graph, &params) else {
            continue;
        };
        if !report.passes {
            continue;
        }
        if let Ok(fam) = build_family_mb(graph, b, d, tau, marked) {
            return Some((seed, fam));
        }
    }
    None
}

/// At least ten nonnegative, monotone, 1-Lipschitz submodular functions:
/// cardinality profiles (which admit exact binomial oracles) and matroid
/// ranks, including one expander-backed planted family.
pub fn lipschitz_corpus() -> Vec<CorpusFunction> {
    let mut out = Vec::new();
    let n = 400usize;
    out.push(profile_fn(
        "free-rank-400",
        (0..=n).map(|j| j as f64).collect(),
    ));
    out.push(profile_fn(
        "capped-12-400",
        (0..=n).map(|j| j.min(12) as f64).collect(),
    ));
    out.push(profile_fn(
        "capped-40-400",
        (0..=n).map(|j| j.min(40) as f64).collect(),
    ));
    out.push(profile_fn(
        "sqrt-400",
        (0..=n).map(|j| (j as f64).sqrt()).collect(),
    ));
    out.push(profile_fn(
        "half-slope-400",
        (0..=n).map(|j| j as f64 / 2.0).collect(),
    ));
    out.push(profile_fn(
        "log2-400",
        (0..=n).map(|j| (1.0 + j as f64).log2()).collect(),
    ));

    // Partition matroid ranks.
    let blocks: Vec<ElementSet> = (0..6)
        .map(|i| ElementSet::from_indices(60, &(10 * i..10 * (i + 1)).collect::<Vec<_>>()).unwrap())
        .collect();
    let fam = ConstraintFamily::new(60, blocks, vec![3; 6]).unwrap();
    out.push(CorpusFunction {
        name: "partition-rank-60".into(),
        f: SetFunction::matroid_rank(Arc::new(MatroidSpec::partition(fam).unwrap())),
        profile: None,
    });

    let blocks: Vec<ElementSet> = (0..4)
        .map(|i| ElementSet::from_indices(64, &(16 * i..16 * (i + 1)).collect::<Vec<_>>()).unwrap())
        .collect();
    let fam = ConstraintFamily::new(64, blocks, vec![1, 2, 5, 9]).unwrap();
    out.push(CorpusFunction {
        name: "partition-rank-64-ragged".into(),
        f: SetFunction::matroid_rank(Arc::new(MatroidSpec::partition(fam).unwrap())),
        profile: None,
    });

    // The coupled uncrossed example.
    let fam = ConstraintFamily::new(
        12,
        vec![
            ElementSet::from_indices(12, &[0, 1, 2, 3, 4]).unwrap(),
            ElementSet::from_indices(12, &[4, 5, 6, 7, 8]).unwrap(),
        ],
        vec![3, 3],
    )
    .unwrap();
    out.push(CorpusFunction {
        name: "uncrossed-rank-12".into(),
        f: SetFunction::matroid_rank(Arc::new(MatroidSpec::uncrossed(fam).unwrap())),
        profile: None,
    });

    // Truncated disjoint blocks: rank(S) = min(Σ min(|S ∩ A_i|, 4), 8).
    let blocks: Vec<ElementSet> = (0..3)
        .map(|i| ElementSet::from_indices(60, &(20 * i..20 * (i + 1)).collect::<Vec<_>>()).unwrap())
        .collect();
    let fam = ConstraintFamily::new(60, blocks, vec![4; 3]).unwrap();
    out.push(CorpusFunction {
        name: "truncated-rank-60".into(),
        f: SetFunction::matroid_rank(Arc::new(MatroidSpec::truncated(fam, 8, 2).unwrap())),
        profile: None,
    });

    // An expander-backed planted family with verified expansion.
    let (_, fam) = verified_family_mb(16, 256, 8, 6, 2, &[0, 3, 5, 11], 1000, 400)
        .expect("a verified planted family exists in the seed range");
    out.push(CorpusFunction {
        name: "planted-rank-256".into(),
        f: SetFunction::matroid_rank(Arc::new(fam.spec().clone())),
        profile: None,
    });

    out
}

/// Small matroid rank functions (ground size ≤ 8) for demand-correspondence
/// and linear-bound checks.
pub fn small_matroid_corpus() -> Vec<(String, Arc<MatroidSpec>)> {
    let mut out: Vec<(String, Arc<MatroidSpec>)> = Vec::new();
    let free = ConstraintFamily::new(6, vec![], vec![]).unwrap();
    out.push((
        "free-6".into(),
        Arc::new(MatroidSpec::uncrossed(free.clone()).unwrap()),
    ));
    out.push((
        "uniform-6-3".into(),
        Arc::new(MatroidSpec::truncated(free, 3, 1).unwrap()),
    ));
    let parts = ConstraintFamily::new(
        6,
        vec![
            ElementSet::from_indices(6, &[0, 1, 2]).unwrap(),
            ElementSet::from_indices(6, &[3, 4, 5]).unwrap(),
        ],
        vec![1, 2],
    )
    .unwrap();
    out.push((
        "partition-6".into(),
        Arc::new(MatroidSpec::partition(parts).unwrap()),
    ));
    let coupled = ConstraintFamily::new(
        5,
        vec![
            ElementSet::from_indices(5, &[0, 1, 2]).unwrap(),
            ElementSet::from_indices(5, &[2, 3, 4]).unwrap(),
        ],
        vec![2, 2],
    )
    .unwrap();
    out.push((
        "uncrossed-5".into(),
        Arc::new(MatroidSpec::uncrossed(coupled).unwrap()),
    ));
    let paving = ConstraintFamily::new(
        7,
        vec![
            ElementSet::from_indices(7, &[0, 1, 2]).unwrap(),
            ElementSet::from_indices(7, &[0, 3, 4]).unwrap(),
            ElementSet::from_indices(7, &[1, 3, 5]).unwrap(),
            ElementSet::from_indices(7, &[2, 4, 5]).unwrap(),
        ],
        vec![2; 4],
    )
    .unwrap();
    out.push((
        "paving-7".into(),
        Arc::new(MatroidSpec::truncated(paving, 3, 2).unwrap()),
    ));
    let pairwise = ConstraintFamily::new(
        8,
        vec![
            ElementSet::from_indices(8, &[0, 1, 2, 3]).unwrap(),
            ElementSet::from_indices(8, &[2, 3, 4, 5]).unwrap(),
        ],
        vec![3, 3],
    )
    .unwrap();
    out.push((
        "pairwise-8".into(),
        Arc::new(MatroidSpec::pairwise(pairwise, 4).unwrap()),
    ));
    if let Some((_, fam)) = verified_family_mb(3, 8, 2, 1, 2, &[1], 0, 500) {
        out.push(("planted-8".into(), Arc::new(fam.spec().clone())));
    }
    out
}

/// Randomized accepted instances across all construction kinds, ground size
/// at most `max_n ≤ 10`, deterministic in the seed. Rejection-samples until
/// each construction's validator accepts.
pub fn random_specs(count: usize, max_n: usize, seed: u64) -> Vec<(String, MatroidSpec)> {
    assert!(max_n >= 5);
    let mut out = Vec::with_capacity(count);
    let mut index = 0u64;
    while out.len() < count {
        let i = out.len();
        let mut rng = rng::stream(seed, Stream::Instance, index);
        index += 1;
        let n = 5 + (rng.gen_range(0..=(max_n - 5)));
        let spec = match i % 5 {
            0 => random_partition(n, &mut rng),
            1 => random_uncrossed(n, &mut rng),
            2 => random_truncated(n, &mut rng),
            3 => random_pairwise(n, &mut rng),
            _ => random_family_mb(n, &mut rng),
        };
        if let Some((kind, spec)) = spec {
            out.push((format!("{kind}-{i}"), spec));
        }
    }
    out
}

fn random_sets(n: usize, k: usize, max_size: usize, rng: &mut impl Rng) -> Vec<ElementSet> {
    (0..k)
        .map(|_| {
            let size = rng.gen_range(1..=max_size);
            crate::dist::sample_fixed_size(n, size, rng)
        })
        .collect()
}

fn random_partition(n: usize, rng: &mut impl Rng) -> Option<(&'static str, MatroidSpec)> {
    let parts = rng.gen_range(2..=4usize);
    let mut assignment: Vec<usize> = (0..n).map(|_| rng.gen_range(0..parts)).collect();
    assignment[0] = 0; // keep part 0 nonempty
    let sets: Vec<ElementSet> = (0..parts)
        .map(|p| {
            let members: Vec<usize> = (0..n).filter(|&i| assignment[i] == p).collect();
            ElementSet::from_indices(n, &members).unwrap()
        })
        .filter(|s| !s.is_empty())
        .collect();
    let caps: Vec<i64> = sets
        .iter()
        .map(|s| rng.gen_range(1..=(s.len() as i64 - 1).max(1)))
        .collect();
    let fam = ConstraintFamily::new(n, sets, caps).ok()?;
    MatroidSpec::partition(fam).ok().map(|s| ("partition", s))
}

fn random_uncrossed(n: usize, rng: &mut impl Rng) -> Option<(&'static str, MatroidSpec)> {
    let k = rng.gen_range(1..=3usize);
    let sets = random_sets(n, k, (2 * n / 3).max(2), rng);
    let caps: Vec<i64> = sets
        .iter()
        .map(|s| rng.gen_range(1..=(s.len() as i64 - 1).max(1)))
        .collect();
    let fam = ConstraintFamily::new(n, sets, caps).ok()?;
    MatroidSpec::uncrossed(fam).ok().map(|s| ("uncrossed", s))
}

fn random_truncated(n: usize, rng: &mut impl Rng) -> Option<(&'static str, MatroidSpec)> {
    let k = rng.gen_range(2..=4usize);
    let sets = random_sets(n, k, (2 * n / 3).max(2), rng);
    let caps: Vec<i64> = sets
        .iter()
        .map(|s| rng.gen_range(1..=(s.len() as i64 - 1).max(1)))
        .collect();
    let fam = ConstraintFamily::new(n, sets, caps).ok()?;
    let tau = rng.gen_range(2..=3usize);
    let d = rng.gen_range(2..=(n as i64) / 2 + 2);
    MatroidSpec::truncated(fam, d, tau)
        .ok()
        .map(|s| ("truncated", s))
}

fn random_pairwise(n: usize, rng: &mut impl Rng) -> Option<(&'static str, MatroidSpec)> {
    let k = rng.gen_range(2..=4usize);
    let sets = random_sets(n, k, (2 * n / 3).max(2), rng);
    let caps: Vec<i64> = sets
        .iter()
        .map(|s| rng.gen_range(1..=(s.len() as i64 - 1).max(1)))
        .collect();
    let mut bound = i64::MAX;
    for i in 0..k {
        for j in i + 1..k {
            bound = bound.min(caps[i] + caps[j] - sets[i].intersection_len(&sets[j]) as i64);
        }
    }
    let d = bound.min(n as i64).max(0);
    if d == 0 {
        return None;
    }
    let fam = ConstraintFamily::new(n, sets, caps).ok()?;
    MatroidSpec::pairwise(fam, d).ok().map(|s| ("pairwise", s))
}

fn random_family_mb(n: usize, rng: &mut impl Rng) -> Option<(&'static str, MatroidSpec)> {
    let d = rng.gen_range(2..=3usize.min(n / 2));
    let k = rng.gen_range(2..=4usize);
    let b = rng.gen_range(1..d) as i64;
    let graph = sample_expander(k, n, d, rng.gen()).ok()?;
    let mut marked: Vec<usize> = (0..k).filter(|_| rng.gen::<bool>()).collect();
    if marked.is_empty() {
        marked.push(rng.gen_range(0..k));
    }
    // Largeness validation inside; expansion is irrelevant for the axioms.
    build_family_mb(graph, b, d, 2, &marked)
        .ok()
        .map(|f| ("family-mb", f.spec().clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::props::{check_properties_with_limit, CheckMode};

    #[test]
    fn corpus_members_are_lipschitz_monotone_submodular_sampled() {
        for member in lipschitz_corpus() {
            let r = check_properties_with_limit(
                &member.f,
                CheckMode::Sampled {
                    trials: 150,
                    seed: 5,
                },
                1 << 20,
            )
            .unwrap();
            assert!(
                r.normalized && r.nonnegative && r.monotone && r.submodular(),
                "{} failed: {:?}",
                member.name,
                r.witnesses.first()
            );
            assert!(
                r.lipschitz_constant <= 1.0 + 1e-12,
                "{}: observed constant {}",
                member.name,
                r.lipschitz_constant
            );
        }
    }

    #[test]
    fn corpus_has_enough_members_and_profiles() {
        let corpus = lipschitz_corpus();
        assert!(corpus.len() >= 10);
        assert!(corpus.iter().filter(|m| m.profile.is_some()).count() >= 4);
    }

    #[test]
    fn small_corpus_ground_sizes_fit_demand_enumeration() {
        let corpus = small_matroid_corpus();
        assert!(corpus.len() >= 6);
        for (name, spec) in corpus {
            assert!(spec.ground_size() <= 8, "{name}");
        }
    }

    #[test]
    fn random_specs_are_deterministic_and_mixed() {
        let a = random_specs(25, 10, 7);
        let b = random_specs(25, 10, 7);
        assert_eq!(a.len(), 25);
        for ((na, sa), (nb, sb)) in a.iter().zip(&b) {
            assert_eq!(na, nb);
            assert_eq!(sa.constraints(), sb.constraints());
        }
        let kinds: std::collections::BTreeSet<&str> = a
            .iter()
            .map(|(name, _)| name.rsplit_once('-').map(|(k, _)| k).unwrap_or(name))
            .collect();
        assert!(kinds.len() >= 4, "kinds seen: {kinds:?}");
    }
}
