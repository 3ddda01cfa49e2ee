//! Randomized spot checks of the gross-substitutes property.
//!
//! For prices `p ≤ q`, a valuation has gross substitutes when every demanded
//! set at `p` keeps its unraised items demandable at `q`: for each
//! `A ∈ D(p)` some `A' ∈ D(q)` contains `{i ∈ A : p_i = q_i}`. Demand sets
//! are found by full enumeration, so the check is exact per sampled pair.

use crate::error::Error;
use crate::func::SetFunction;
use crate::rng::{self, Stream};
use crate::set::ElementSet;
use crate::Result;
use rand::Rng;

const GS_GROUND_LIMIT: usize = 12;

/// A price pair and demanded set violating the substitutes condition.
#[derive(Debug, Clone)]
pub struct GsWitness {
    pub prices_low: Vec<f64>,
    pub prices_high: Vec<f64>,
    pub demanded: ElementSet,
}

#[derive(Debug, Clone)]
pub struct GsCheckResult {
    pub passed: bool,
    pub trials_run: usize,
    pub witness: Option<GsWitness>,
}

/// All maximizers of `f(S) - p(S)` over the full subset lattice.
fn demand_sets(f: &SetFunction, prices: &[f64]) -> Vec<ElementSet> {
    let n = f.ground_size();
    let mut best = f64::NEG_INFINITY;
    let mut out: Vec<ElementSet> = Vec::new();
    for mask in 0..1u64 << n {
        let s = ElementSet::from_mask(n, mask);
        let surplus = f.eval(&s) - s.iter().map(|i| prices[i]).sum::<f64>();
        if surplus > best {
            best = surplus;
            out.clear();
            out.push(s);
        } else if surplus == best {
            out.push(s);
        }
    }
    out
}

/// Samples `trials` price pairs `p ≤ q` (q raises a random coordinate
/// subset) and checks the substitutes condition on each; stops at the first
/// violation.
pub fn gross_substitutes_spot_check(
    f: &SetFunction,
    trials: usize,
    seed: u64,
) -> Result<GsCheckResult> {
    let n = f.ground_size();
    if n > GS_GROUND_LIMIT {
        return Err(Error::ExhaustiveLimit {
            n,
            limit: GS_GROUND_LIMIT,
        });
    }
    // A price scale around the per-item share of the full value keeps both
    // demanded and undemanded regimes in play.
    let base = (f.eval(&ElementSet::full(n)) / n.max(1) as f64).max(1e-3);

    for trial in 0..trials {
        let mut rng = rng::stream(seed, Stream::PriceDraw, trial as u64);
        let scale = base * rng.gen_range(0.5..2.0) * 1.2;
        let p: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..scale)).collect();
        let mut q = p.clone();
        for qi in q.iter_mut() {
            if rng.gen::<bool>() {
                *qi += rng.gen_range(0.0..scale);
            }
        }
        let d_low = demand_sets(f, &p);
        let d_high = demand_sets(f, &q);
        for a in &d_low {
            let mut kept = ElementSet::empty(n);
            for i in a.iter() {
                if p[i] == q[i] {
                    kept.insert(i);
                }
            }
            if !d_high.iter().any(|a2| kept.is_subset_of(a2)) {
                return Ok(GsCheckResult {
                    passed: false,
                    trials_run: trial + 1,
                    witness: Some(GsWitness {
                        prices_low: p,
                        prices_high: q,
                        demanded: a.clone(),
                    }),
                });
            }
        }
    }
    Ok(GsCheckResult {
        passed: true,
        trials_run: trials,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{ConstraintFamily, MatroidSpec};
    use std::sync::Arc;

    #[test]
    fn additive_valuations_pass() {
        // f(S) = Σ v_i via a weighted coverage of singleton subsets.
        let n = 5;
        let subsets: Vec<ElementSet> = (0..n)
            .map(|i| ElementSet::from_indices(n, &[i]).unwrap())
            .collect();
        let weights = vec![0.3, 1.0, 1.7, 0.2, 0.9];
        let f = SetFunction::coverage(n, subsets, Some(weights)).unwrap();
        let r = gross_substitutes_spot_check(&f, 400, 7).unwrap();
        assert!(r.passed, "witness: {:?}", r.witness);
    }

    #[test]
    fn free_matroid_rank_passes() {
        let n = 8;
        let f = SetFunction::cardinality_profile((0..=n).map(|j| j as f64).collect()).unwrap();
        let r = gross_substitutes_spot_check(&f, 400, 11).unwrap();
        assert!(r.passed, "witness: {:?}", r.witness);
    }

    #[test]
    fn partition_rank_passes() {
        let fam = ConstraintFamily::new(
            6,
            vec![
                ElementSet::from_indices(6, &[0, 1, 2]).unwrap(),
                ElementSet::from_indices(6, &[3, 4, 5]).unwrap(),
            ],
            vec![1, 2],
        )
        .unwrap();
        let spec = Arc::new(MatroidSpec::partition(fam).unwrap());
        let f = SetFunction::matroid_rank(spec);
        let r = gross_substitutes_spot_check(&f, 400, 13).unwrap();
        assert!(r.passed, "witness: {:?}", r.witness);
    }

    #[test]
    fn complements_valuation_fails_fast() {
        // f(∅) = f({1}) = f({2}) = 0, f({1,2}) = 1: raising one price can
        // kill demand for the other item.
        let f = SetFunction::tabulated(2, vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        let r = gross_substitutes_spot_check(&f, 1000, 3).unwrap();
        assert!(!r.passed);
        assert!(r.trials_run <= 1000);
        let w = r.witness.unwrap();
        assert_eq!(w.demanded.len(), 2);
    }

    #[test]
    fn hand_built_complements_counterexample() {
        // p = (0.4, 0.4) demands {1,2}; q = (0.4, 2.0) demands ∅, dropping
        // the unraised item 0.
        let f = SetFunction::tabulated(2, vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        let d_low = demand_sets(&f, &[0.4, 0.4]);
        assert_eq!(d_low, vec![ElementSet::full(2)]);
        let d_high = demand_sets(&f, &[0.4, 2.0]);
        assert_eq!(d_high, vec![ElementSet::empty(2)]);
    }

    #[test]
    fn oversized_ground_set_refused() {
        let f = SetFunction::cardinality_profile(vec![0.0; 14]).unwrap();
        assert!(matches!(
            gross_substitutes_spot_check(&f, 10, 0),
            Err(Error::ExhaustiveLimit { .. })
        ));
    }
}
