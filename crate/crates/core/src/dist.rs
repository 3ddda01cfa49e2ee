//! Distributions over subsets of the ground set.

use crate::error::Error;
use crate::rng::{self, Stream};
use crate::set::ElementSet;
use crate::Result;
use rand::Rng;

/// A product distribution: element `i` is included independently with
/// probability `p_i`.
#[derive(Debug, Clone)]
pub struct ProductDistribution {
    probs: Vec<f64>,
    all_half: bool,
}

impl ProductDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        for (i, &p) in probs.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter {
                    name: "probs",
                    reason: format!("p[{i}] = {p} outside [0,1]"),
                });
            }
        }
        let all_half = probs.iter().all(|&p| p == 0.5);
        Ok(ProductDistribution { probs, all_half })
    }

    /// The uniform-`p` product distribution on `2^[n]`.
    pub fn uniform(n: usize, p: f64) -> Result<Self> {
        Self::new(vec![p; n])
    }

    pub fn ground_size(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn sample(&self, rng: &mut impl Rng) -> ElementSet {
        let n = self.probs.len();
        if self.all_half {
            // p = 1/2 everywhere: each bit is a fair coin, so draw whole
            // blocks at once.
            let blocks = (0..n.div_ceil(64)).map(|_| rng.gen::<u64>()).collect();
            return ElementSet::from_raw_blocks(n, blocks);
        }
        let mut s = ElementSet::empty(n);
        for (i, &p) in self.probs.iter().enumerate() {
            if rng.gen_bool(p) {
                s.insert(i);
            }
        }
        s
    }
}

/// One product draw from a bare seed. Trial loops should instead hold a
/// substream and call [`ProductDistribution::sample`] repeatedly.
pub fn sample_product(dist: &ProductDistribution, seed: u64) -> ElementSet {
    dist.sample(&mut rng::stream(seed, Stream::FamilyDraw, 0))
}

/// The uniform distribution on an explicit, non-empty family of sets.
#[derive(Debug, Clone)]
pub struct UniformFamilyDistribution {
    support: Vec<ElementSet>,
}

impl UniformFamilyDistribution {
    pub fn new(support: Vec<ElementSet>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidParameter {
                name: "support",
                reason: "support must be non-empty".into(),
            });
        }
        let n = support[0].ground_size();
        if support.iter().any(|s| s.ground_size() != n) {
            return Err(Error::InvalidParameter {
                name: "support",
                reason: "mixed ground sizes".into(),
            });
        }
        Ok(UniformFamilyDistribution { support })
    }

    pub fn support(&self) -> &[ElementSet] {
        &self.support
    }

    /// Index of the drawn support element.
    pub fn sample_index(&self, rng: &mut impl Rng) -> usize {
        rng.gen_range(0..self.support.len())
    }

    pub fn sample(&self, rng: &mut impl Rng) -> &ElementSet {
        &self.support[self.sample_index(rng)]
    }
}

/// Either sampling regime the evaluators accept.
#[derive(Debug, Clone)]
pub enum SubsetDistribution {
    Product(ProductDistribution),
    Family(UniformFamilyDistribution),
}

impl SubsetDistribution {
    pub fn sample(&self, rng: &mut impl Rng) -> ElementSet {
        match self {
            SubsetDistribution::Product(d) => d.sample(rng),
            SubsetDistribution::Family(d) => d.sample(rng).clone(),
        }
    }

    pub fn ground_size(&self) -> usize {
        match self {
            SubsetDistribution::Product(d) => d.ground_size(),
            SubsetDistribution::Family(d) => d.support()[0].ground_size(),
        }
    }
}

/// A uniformly random subset of `{0,..,n-1}` with exactly `size` members,
/// by a partial Fisher-Yates shuffle.
pub fn sample_fixed_size(n: usize, size: usize, rng: &mut impl Rng) -> ElementSet {
    assert!(size <= n);
    let mut pool: Vec<usize> = (0..n).collect();
    let mut s = ElementSet::empty(n);
    for i in 0..size {
        let j = rng.gen_range(i..n);
        pool.swap(i, j);
        s.insert(pool[i]);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::stats::binomial_cdf;

    #[test]
    fn degenerate_products() {
        let zero = ProductDistribution::uniform(6, 0.0).unwrap();
        let one = ProductDistribution::uniform(6, 1.0).unwrap();
        let mut rng = stream(1, Stream::Trial, 0);
        for _ in 0..10 {
            assert!(zero.sample(&mut rng).is_empty());
            assert_eq!(one.sample(&mut rng).len(), 6);
        }
    }

    #[test]
    fn half_product_matches_binomial_tail() {
        // |S| for p = 1/2, n = 1000 stays within [400, 600] essentially
        // always; the exact binomial two-sided tail outside is ~2.5e-10.
        let outside = binomial_cdf(1000, 0.5, 399) + (1.0 - binomial_cdf(1000, 0.5, 600));
        assert!(outside < 1e-3, "exact tail {outside}");
        let dist = ProductDistribution::uniform(1000, 0.5).unwrap();
        let mut rng = stream(3, Stream::Trial, 0);
        let mut hits = 0;
        for _ in 0..2000 {
            let len = dist.sample(&mut rng).len();
            if (400..=600).contains(&len) {
                hits += 1;
            }
        }
        assert_eq!(hits, 2000);
    }

    #[test]
    fn half_product_is_unbiased_per_coordinate() {
        let dist = ProductDistribution::uniform(130, 0.5).unwrap();
        let mut rng = stream(9, Stream::Trial, 0);
        let trials = 4000;
        let mut counts = vec![0usize; 130];
        for _ in 0..trials {
            for i in dist.sample(&mut rng).iter() {
                counts[i] += 1;
            }
        }
        for (i, &c) in counts.iter().enumerate() {
            let p = c as f64 / trials as f64;
            assert!((p - 0.5).abs() < 0.05, "coordinate {i} biased: {p}");
        }
    }

    #[test]
    fn fixed_size_sampling_is_uniformish() {
        let mut rng = stream(4, Stream::Trial, 0);
        let mut counts = vec![0usize; 6];
        for _ in 0..6000 {
            let s = sample_fixed_size(6, 2, &mut rng);
            assert_eq!(s.len(), 2);
            for i in s.iter() {
                counts[i] += 1;
            }
        }
        for &c in &counts {
            let p = c as f64 / 6000.0;
            assert!((p - 1.0 / 3.0).abs() < 0.04);
        }
    }

    #[test]
    fn family_distribution_draws_support_members() {
        let support = vec![
            ElementSet::from_indices(4, &[0]).unwrap(),
            ElementSet::from_indices(4, &[1, 2]).unwrap(),
        ];
        let dist = UniformFamilyDistribution::new(support.clone()).unwrap();
        let mut rng = stream(5, Stream::Trial, 0);
        for _ in 0..20 {
            assert!(support.contains(dist.sample(&mut rng)));
        }
    }
}
