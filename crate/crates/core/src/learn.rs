//! Learners that sandwich a nonnegative monotone submodular target from
//! labeled samples, plus the hypothesis representations they emit.

use crate::error::Error;
use crate::func::SetFunction;
use crate::lp::{self, LabeledPoint};
use crate::rng::{self, Stream};
use crate::set::ElementSet;
use crate::{Result, EXHAUSTIVE_LIMIT};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;

/// A training pair `(S, f*(S))`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub set: ElementSet,
    pub value: f64,
}

impl LabeledSample {
    pub fn new(set: ElementSet, value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::NonFiniteValue { index: 0 });
        }
        Ok(LabeledSample { set, value })
    }
}

/// Learner output, evaluatable in `O(n)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Hypothesis {
    /// The constant function `c`.
    Constant { n: usize, c: f64 },
    /// `low` on subsets of `u`, `high` elsewhere.
    NullSubcube { u: ElementSet, low: f64, high: f64 },
    /// `sqrt(Σ_{j∈S} w_j / (alpha² · (n+1) · z))` with `w ≥ 0`, `z > 0`,
    /// and `w_j = 0` on `zero_coords`.
    SqrtLinear {
        w: Vec<f64>,
        z: f64,
        zero_coords: ElementSet,
        alpha: f64,
    },
}

impl Hypothesis {
    pub fn ground_size(&self) -> usize {
        match self {
            Hypothesis::Constant { n, .. } => *n,
            Hypothesis::NullSubcube { u, .. } => u.ground_size(),
            Hypothesis::SqrtLinear { w, .. } => w.len(),
        }
    }

    pub fn eval(&self, s: &ElementSet) -> f64 {
        match self {
            Hypothesis::Constant { c, .. } => *c,
            Hypothesis::NullSubcube { u, low, high } => {
                if s.is_subset_of(u) {
                    *low
                } else {
                    *high
                }
            }
            Hypothesis::SqrtLinear { w, z, alpha, .. } => {
                let n = w.len();
                assert_eq!(s.ground_size(), n);
                let linear: f64 = s.iter().map(|j| w[j]).sum();
                (linear / (alpha * alpha * (n as f64 + 1.0) * z)).sqrt()
            }
        }
    }
}

/// Evaluates a hypothesis on a set.
pub fn eval_hypothesis(h: &Hypothesis, s: &ElementSet) -> f64 {
    h.eval(s)
}

/// PMAC evaluation parameters: target factor `alpha`, accuracy `epsilon`,
/// confidence `delta`, and the training-set size `ell`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PmacParams {
    pub epsilon: f64,
    pub delta: f64,
    pub alpha: f64,
    pub ell: usize,
}

impl PmacParams {
    pub fn new(epsilon: f64, delta: f64, alpha: f64, ell: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("{epsilon} outside (0,1)"),
            });
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter {
                name: "delta",
                reason: format!("{delta} outside (0,1)"),
            });
        }
        if alpha < 1.0 {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: "factor must be >= 1".into(),
            });
        }
        if ell == 0 {
            return Err(Error::InvalidParameter {
                name: "ell",
                reason: "need at least one sample".into(),
            });
        }
        Ok(PmacParams {
            epsilon,
            delta,
            alpha,
            ell,
        })
    }
}

/// Training-set size for the separator learner:
/// `ceil((48 n / eps) · ln(9 n / (delta · eps)))`.
pub fn separator_sample_size(n: usize, epsilon: f64, delta: f64) -> usize {
    let n = n as f64;
    ((48.0 * n / epsilon) * (9.0 * n / (delta * epsilon)).ln()).ceil() as usize
}

/// Sample size at which every consistent hypothesis of VC dimension `dim`
/// has error below `epsilon` with confidence `1 - delta`:
/// `ceil((4 dim ln(1/eps) + 2 ln(2/delta)) / eps)`.
pub fn vc_consistent_sample_size(dim: usize, epsilon: f64, delta: f64) -> usize {
    ((4.0 * dim as f64 * (1.0 / epsilon).ln() + 2.0 * (2.0 / delta).ln()) / epsilon).ceil() as usize
}

fn validate_samples(samples: &[LabeledSample]) -> Result<usize> {
    let first = samples.first().ok_or(Error::EmptySamples)?;
    let n = first.set.ground_size();
    for (i, s) in samples.iter().enumerate() {
        if s.set.ground_size() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: s.set.ground_size(),
            });
        }
        if !s.value.is_finite() || s.value < 0.0 {
            return Err(Error::NonFiniteValue { index: i });
        }
    }
    Ok(n)
}

/// Coefficient of the empirical-mean threshold separating the two cases of
/// the product-distribution learner. Natural logarithm throughout.
pub const PRODUCT_CASE_COEFF: f64 = 450.0;

/// Learner for product distributions. With the empirical mean
/// `mu = Σ f*(S_i) / ell`:
///
/// - `mu ≥ 450·ln(1/epsilon)`: the constant hypothesis `mu / 4`;
/// - otherwise: the indicator of the null subcube spanned by the zero-valued
///   samples (`0` inside, `1` outside).
///
/// The boundary case takes the constant branch. The target is assumed
/// nonnegative, monotone, 1-Lipschitz, submodular with nonzero values `≥ 1`;
/// none of that is checkable from samples alone.
pub fn learn_product(samples: &[LabeledSample], epsilon: f64) -> Result<Hypothesis> {
    learn_product_eta(samples, epsilon, 1.0)
}

/// As [`learn_product`] for targets whose minimum nonzero value is `eta`:
/// the outside-the-subcube value becomes `eta`.
pub fn learn_product_eta(samples: &[LabeledSample], epsilon: f64, eta: f64) -> Result<Hypothesis> {
    let n = validate_samples(samples)?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: format!("{epsilon} outside (0,1)"),
        });
    }
    if eta <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            reason: "minimum nonzero value must be positive".into(),
        });
    }
    let mu = samples.iter().map(|s| s.value).sum::<f64>() / samples.len() as f64;
    if mu >= PRODUCT_CASE_COEFF * (1.0 / epsilon).ln() {
        return Ok(Hypothesis::Constant { n, c: mu / 4.0 });
    }
    let mut u = ElementSet::empty(n);
    for s in samples.iter().filter(|s| s.value == 0.0) {
        u.union_with(&s.set);
    }
    Ok(Hypothesis::NullSubcube {
        u,
        low: 0.0,
        high: eta,
    })
}

/// The large-expectation branch: when `E f*(S) ≥ 500·ln(1/epsilon)` is known
/// a priori, the constant hypothesis `mu / 4` achieves factor 8 from a
/// sample count independent of `n` and `epsilon`.
pub fn learn_product_known_large(samples: &[LabeledSample]) -> Result<Hypothesis> {
    let n = validate_samples(samples)?;
    let mu = samples.iter().map(|s| s.value).sum::<f64>() / samples.len() as f64;
    if mu <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "samples",
            reason: "all-zero samples contradict the known-large contract".into(),
        });
    }
    Ok(Hypothesis::Constant { n, c: mu / 4.0 })
}

/// Default relative margin for the separator feasibility program.
pub const DEFAULT_MARGIN: f64 = 1e-6;

/// Finds `u = (w, -z)` with `w ≥ 0`, `z > 0`, `w_j = 0` on `zero_coords`,
/// and `label · (u · x) ≥ margin · ‖x‖` for every labeled point
/// `x ∈ R^(n+1)`. Any feasible point is acceptable; infeasibility is
/// reported, never silently absorbed.
pub fn solve_linear_feasibility(
    points: &[(Vec<f64>, i8)],
    zero_coords: &ElementSet,
    margin: f64,
) -> Result<(Vec<f64>, f64)> {
    let first = points.first().ok_or(Error::EmptySamples)?;
    let dim = first.0.len();
    let n = dim - 1;
    assert_eq!(zero_coords.ground_size(), n);
    // The z coordinate enters the nonnegative solver with its sign folded
    // into the points.
    let lp_points: Vec<LabeledPoint> = points
        .iter()
        .map(|(x, label)| {
            assert_eq!(x.len(), dim);
            let mut flipped = x.clone();
            flipped[n] = -flipped[n];
            LabeledPoint {
                x: flipped,
                label: *label,
            }
        })
        .collect();
    let mut zero = vec![false; dim];
    for j in zero_coords.iter() {
        zero[j] = true;
    }
    let sep = lp::separate_with_margin(&lp_points, dim, &zero, margin)?;
    let mut w = sep.v[..n].to_vec();
    let mut z = sep.v[n];
    if z <= 0.0 {
        // Only reachable when no point is negatively labeled; lift z while
        // keeping at least half the margin on the positive points.
        if points.iter().any(|(_, label)| *label < 0) {
            return Err(Error::SolverStalled { iterations: 0 });
        }
        let mut limit = f64::INFINITY;
        for (x, _) in points {
            let c = x[n];
            if c <= 0.0 {
                continue;
            }
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let dot: f64 = x[..n].iter().zip(&w).map(|(a, b)| a * b).sum();
            limit = limit.min((dot - 0.5 * margin * norm) / c);
        }
        z = if limit.is_finite() {
            (0.5 * limit).max(1e-12)
        } else {
            1.0
        };
    }
    for (j, wj) in w.iter_mut().enumerate() {
        if zero[j] {
            *wj = 0.0;
        }
    }
    Ok((w, z))
}

/// The separator learner for arbitrary distributions.
///
/// Zero-valued samples pin the null subcube `U_0` (forcing `w_j = 0` there);
/// each nonzero sample `(A, f*(A))` becomes, on a fair coin,
/// `(χ(A), f*²(A))` labeled `+1` or `(χ(A), (n+1)·f*²(A))` labeled `-1`.
/// A consistent separator `(w, -z)` yields the hypothesis
/// `S ↦ sqrt(w·χ(S) / ((n+1)·z))`.
pub fn learn_general(samples: &[LabeledSample], seed: u64) -> Result<Hypothesis> {
    learn_general_robust(samples, 1.0, seed)
}

/// The robust variant for targets within a known factor `alpha` of a
/// submodular function: the negative points scale by `alpha²` and the output
/// divides it back out, giving factor `alpha·sqrt(n+1)` overall.
pub fn learn_general_robust(
    samples: &[LabeledSample],
    alpha: f64,
    seed: u64,
) -> Result<Hypothesis> {
    let n = validate_samples(samples)?;
    if alpha < 1.0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: "robustness factor must be >= 1".into(),
        });
    }
    let mut zero_union = ElementSet::empty(n);
    for s in samples.iter().filter(|s| s.value == 0.0) {
        zero_union.union_with(&s.set);
    }
    let nonzero: Vec<&LabeledSample> = samples.iter().filter(|s| s.value != 0.0).collect();
    if nonzero.is_empty() {
        return Ok(Hypothesis::NullSubcube {
            u: zero_union,
            low: 0.0,
            high: 1.0,
        });
    }

    // One fair coin per nonzero sample, in input order.
    let mut coin = rng::stream(seed, Stream::CoinFlip, 0);
    let mut points = Vec::with_capacity(nonzero.len());
    for s in &nonzero {
        let heads = coin.gen::<bool>();
        let sq = s.value * s.value;
        let mut x = vec![0.0; n + 1];
        for j in s.set.iter() {
            x[j] = 1.0;
        }
        if heads {
            x[n] = sq;
            points.push((x, 1i8));
        } else {
            x[n] = alpha * alpha * (n as f64 + 1.0) * sq;
            points.push((x, -1i8));
        }
    }
    let (w, z) = solve_linear_feasibility(&points, &zero_union, DEFAULT_MARGIN)?;
    Ok(Hypothesis::SqrtLinear {
        w,
        z,
        zero_coords: zero_union,
        alpha,
    })
}

/// PAC learner for 0/1-valued monotone submodular targets, which are
/// constants or monotone disjunctions. Standard elimination: zero-labeled
/// samples knock their members out of the disjunction support.
pub fn learn_boolean(samples: &[LabeledSample]) -> Result<Hypothesis> {
    let n = validate_samples(samples)?;
    for (i, s) in samples.iter().enumerate() {
        if s.value != 0.0 && s.value != 1.0 {
            return Err(Error::NonBooleanValue {
                index: i,
                value: s.value,
            });
        }
    }
    if samples.iter().all(|s| s.value == 1.0) {
        return Ok(Hypothesis::Constant { n, c: 1.0 });
    }
    if samples.iter().all(|s| s.value == 0.0) {
        // Constant zero, represented as the full null subcube.
        return Ok(Hypothesis::NullSubcube {
            u: ElementSet::full(n),
            low: 0.0,
            high: 1.0,
        });
    }
    let mut u = ElementSet::empty(n);
    for s in samples.iter().filter(|s| s.value == 0.0) {
        u.union_with(&s.set);
    }
    Ok(Hypothesis::NullSubcube {
        u,
        low: 0.0,
        high: 1.0,
    })
}

/// Searches for `w ≥ 0` with `w·χ(S) ≤ f(S)² ≤ n·w·χ(S)` on every nonempty
/// `S`, by exhaustive constraint generation over the subset lattice. Such a
/// witness exists for every normalized monotone submodular `f`; the returned
/// `w` certifies the `sqrt(n)`-approximation by `sqrt(w·χ(S))`.
pub fn verify_sqrt_linear_bound(f: &SetFunction) -> Result<Vec<f64>> {
    let n = f.ground_size();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::ExhaustiveLimit {
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    if f.eval(&ElementSet::empty(n)) != 0.0 {
        return Err(Error::InvalidParameter {
            name: "f",
            reason: "bound requires a normalized function".into(),
        });
    }
    let mut rows = Vec::with_capacity(2 * ((1usize << n) - 1));
    for mask in 1..1u64 << n {
        let s = ElementSet::from_mask(n, mask);
        let sq = f.eval(&s).powi(2);
        let chi: Vec<f64> = (0..n)
            .map(|j| if s.contains(j) { 1.0 } else { 0.0 })
            .collect();
        rows.push(lp::Row {
            coeffs: chi.clone(),
            cmp: lp::Cmp::Le,
            rhs: sq,
        });
        let scaled: Vec<f64> = chi.iter().map(|c| c * n as f64).collect();
        rows.push(lp::Row {
            coeffs: scaled,
            cmp: lp::Cmp::Ge,
            rhs: sq,
        });
    }
    let lp = lp::LinearProgram {
        objective: vec![0.0; n],
        rows,
    };
    match lp::solve(&lp)? {
        lp::LpOutcome::Optimal { x, .. } => Ok(x),
        lp::LpOutcome::Infeasible => Err(Error::Infeasible { margin: 0.0 }),
        lp::LpOutcome::Unbounded => Err(Error::Unbounded),
    }
}

/// CSV form of a sample list: header `set,value`, the set as a fixed-width
/// hex bit mask (element 0 at the least significant bit).
pub fn write_samples_csv<W: Write>(writer: W, samples: &[LabeledSample]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["set", "value"])?;
    for s in samples {
        csv.write_record([s.set.to_hex(), format!("{}", s.value)])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn read_samples_csv<R: Read>(reader: R, n: usize) -> Result<Vec<LabeledSample>> {
    let mut csv = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for record in csv.records() {
        let record = record?;
        let set = ElementSet::from_hex(n, record.get(0).unwrap_or_default())?;
        let value: f64 =
            record
                .get(1)
                .unwrap_or_default()
                .parse()
                .map_err(|_| Error::Malformed {
                    what: "sample csv",
                    reason: format!(
                        "bad value at line {:?}",
                        record.position().map(|p| p.line())
                    ),
                })?;
        out.push(LabeledSample::new(set, value)?);
    }
    Ok(out)
}

pub fn write_samples_file(path: &Path, samples: &[LabeledSample]) -> Result<()> {
    write_samples_csv(std::fs::File::create(path)?, samples)
}

pub fn read_samples_file(path: &Path, n: usize) -> Result<Vec<LabeledSample>> {
    read_samples_csv(std::fs::File::open(path)?, n)
}

/// JSON form of a hypothesis, tagged by kind.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HypothesisFile {
    Constant {
        n: usize,
        c: f64,
    },
    NullSubcube {
        n: usize,
        u: Vec<usize>,
        low: f64,
        high: f64,
    },
    SqrtLinear {
        n: usize,
        w: Vec<f64>,
        z: f64,
        zero_coords: Vec<usize>,
        alpha: f64,
    },
}

impl HypothesisFile {
    pub fn from_hypothesis(h: &Hypothesis) -> Self {
        match h {
            Hypothesis::Constant { n, c } => HypothesisFile::Constant { n: *n, c: *c },
            Hypothesis::NullSubcube { u, low, high } => HypothesisFile::NullSubcube {
                n: u.ground_size(),
                u: u.to_indices(),
                low: *low,
                high: *high,
            },
            Hypothesis::SqrtLinear {
                w,
                z,
                zero_coords,
                alpha,
            } => HypothesisFile::SqrtLinear {
                n: w.len(),
                w: w.clone(),
                z: *z,
                zero_coords: zero_coords.to_indices(),
                alpha: *alpha,
            },
        }
    }

    pub fn to_hypothesis(&self) -> Result<Hypothesis> {
        Ok(match self {
            HypothesisFile::Constant { n, c } => Hypothesis::Constant { n: *n, c: *c },
            HypothesisFile::NullSubcube { n, u, low, high } => Hypothesis::NullSubcube {
                u: ElementSet::from_indices(*n, u)?,
                low: *low,
                high: *high,
            },
            HypothesisFile::SqrtLinear {
                n,
                w,
                z,
                zero_coords,
                alpha,
            } => {
                if w.len() != *n {
                    return Err(Error::LengthMismatch {
                        expected: *n,
                        got: w.len(),
                    });
                }
                Hypothesis::SqrtLinear {
                    w: w.clone(),
                    z: *z,
                    zero_coords: ElementSet::from_indices(*n, zero_coords)?,
                    alpha: *alpha,
                }
            }
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
