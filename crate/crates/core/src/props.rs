//! Brute-force property checkers for set functions.
//!
//! These are the oracles the rest of the crate is tested against, so they
//! stay as close to the defining inequalities as possible. Submodularity is
//! decided twice, through two equivalent definitions, and exhaustive runs
//! must see both verdicts agree:
//!
//! - marginals: `f(T + x) - f(T) <= f(S + x) - f(S)` for all `S ⊆ T` and
//!   `x ∉ T`;
//! - pairs: `f(A) + f(B) >= f(A ∪ B) + f(A ∩ B)` for all `A, B`.

use crate::error::Error;
use crate::func::SetFunction;
use crate::rng::{self, Stream};
use crate::set::ElementSet;
use crate::{Result, EXHAUSTIVE_LIMIT};
use rand::Rng;

/// How a property check traverses the subset lattice.
#[derive(Debug, Clone, Copy)]
pub enum CheckMode {
    /// Visit every quantified tuple. Requires `n` at most the configured
    /// exhaustive limit.
    Exhaustive,
    /// Spot-check `trials` random tuples drawn from the given seed.
    Sampled { trials: usize, seed: u64 },
}

/// Which property a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Normalized,
    NonNegative,
    Monotone,
    SubmodularMarginals,
    SubmodularPairs,
}

/// A concrete violating tuple, evaluated values included.
#[derive(Debug, Clone)]
pub struct Violation {
    pub property: Property,
    pub s: ElementSet,
    pub t: Option<ElementSet>,
    pub x: Option<usize>,
    pub lhs: f64,
    pub rhs: f64,
}

const WITNESS_CAP: usize = 10;

/// Verdicts from [`check_properties`]. A property reported `false` carries at
/// least one witness in `witnesses`; a property reported `true` by an
/// exhaustive run was checked over the entire quantified domain.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub normalized: bool,
    pub nonnegative: bool,
    pub monotone: bool,
    pub submodular_marginals: bool,
    pub submodular_pairs: bool,
    /// Largest `|f(S + x) - f(S)|` over the checked pairs.
    pub lipschitz_constant: f64,
    pub witnesses: Vec<Violation>,
}

impl PropertyReport {
    /// Combined submodularity verdict; both routes must hold.
    pub fn submodular(&self) -> bool {
        self.submodular_marginals && self.submodular_pairs
    }

    fn witnesses_for(&self, p: Property) -> usize {
        self.witnesses.iter().filter(|w| w.property == p).count()
    }

    fn record(&mut self, v: Violation) {
        let flag = match v.property {
            Property::Normalized => &mut self.normalized,
            Property::NonNegative => &mut self.nonnegative,
            Property::Monotone => &mut self.monotone,
            Property::SubmodularMarginals => &mut self.submodular_marginals,
            Property::SubmodularPairs => &mut self.submodular_pairs,
        };
        *flag = false;
        let have = self
            .witnesses
            .iter()
            .filter(|w| w.property == v.property)
            .count();
        if have < WITNESS_CAP {
            self.witnesses.push(v);
        }
    }

    fn clean() -> Self {
        PropertyReport {
            normalized: true,
            nonnegative: true,
            monotone: true,
            submodular_marginals: true,
            submodular_pairs: true,
            lipschitz_constant: 0.0,
            witnesses: Vec::new(),
        }
    }
}

/// Checks normalization, non-negativity, monotonicity, submodularity (both
/// definitions), and the Lipschitz constant of `f`, using the default
/// exhaustive limit.
pub fn check_properties(f: &SetFunction, mode: CheckMode) -> Result<PropertyReport> {
    check_properties_with_limit(f, mode, EXHAUSTIVE_LIMIT)
}

/// As [`check_properties`] with an explicit exhaustive-size cap.
pub fn check_properties_with_limit(
    f: &SetFunction,
    mode: CheckMode,
    limit: usize,
) -> Result<PropertyReport> {
    match mode {
        CheckMode::Exhaustive => {
            let n = f.ground_size();
            if n > limit {
                return Err(Error::ExhaustiveLimit { n, limit });
            }
            Ok(check_exhaustive(f))
        }
        CheckMode::Sampled { trials, seed } => Ok(check_sampled(f, trials, seed)),
    }
}

fn tabulate(f: &SetFunction) -> Vec<f64> {
    let n = f.ground_size();
    (0u64..1 << n)
        .map(|mask| f.eval(&ElementSet::from_mask(n, mask)))
        .collect()
}

fn check_exhaustive(f: &SetFunction) -> PropertyReport {
    let n = f.ground_size();
    let v = tabulate(f);
    let mut report = PropertyReport::clean();
    let set = |mask: u64| ElementSet::from_mask(n, mask);

    if v[0] != 0.0 {
        report.record(Violation {
            property: Property::Normalized,
            s: set(0),
            t: None,
            x: None,
            lhs: v[0],
            rhs: 0.0,
        });
    }
    for (mask, &val) in v.iter().enumerate() {
        if val < 0.0 {
            report.record(Violation {
                property: Property::NonNegative,
                s: set(mask as u64),
                t: None,
                x: None,
                lhs: val,
                rhs: 0.0,
            });
        }
    }

    // Monotonicity and the Lipschitz constant from single-element steps;
    // monotonicity over all S ⊆ T follows by chaining.
    for mask in 0..1u64 << n {
        for x in 0..n {
            if mask >> x & 1 == 1 {
                continue;
            }
            let up = mask | 1 << x;
            let step = v[up as usize] - v[mask as usize];
            report.lipschitz_constant = report.lipschitz_constant.max(step.abs());
            if step < 0.0 {
                report.record(Violation {
                    property: Property::Monotone,
                    s: set(mask),
                    t: Some(set(up)),
                    x: Some(x),
                    lhs: v[mask as usize],
                    rhs: v[up as usize],
                });
            }
        }
    }

    // Marginal route: every S ⊆ T, every x outside T.
    'marginals: for t in 0..1u64 << n {
        for x in 0..n {
            if t >> x & 1 == 1 {
                continue;
            }
            let tx = (t | 1 << x) as usize;
            let t_step = v[tx] - v[t as usize];
            // iterate S over submasks of T
            let mut s = t;
            loop {
                let sx = (s | 1 << x) as usize;
                let s_step = v[sx] - v[s as usize];
                if t_step > s_step + 0.0 {
                    report.record(Violation {
                        property: Property::SubmodularMarginals,
                        s: set(s),
                        t: Some(set(t)),
                        x: Some(x),
                        lhs: t_step,
                        rhs: s_step,
                    });
                    if report.witnesses_for(Property::SubmodularMarginals) >= WITNESS_CAP {
                        break 'marginals;
                    }
                }
                if s == 0 {
                    break;
                }
                s = (s - 1) & t;
            }
        }
    }

    // Pair route: every unordered pair {A, B}.
    'pairs: for a in 0..1u64 << n {
        for b in a + 1..1u64 << n {
            let lhs = v[a as usize] + v[b as usize];
            let rhs = v[(a | b) as usize] + v[(a & b) as usize];
            if lhs < rhs {
                report.record(Violation {
                    property: Property::SubmodularPairs,
                    s: set(a),
                    t: Some(set(b)),
                    x: None,
                    lhs,
                    rhs,
                });
                if report.witnesses_for(Property::SubmodularPairs) >= WITNESS_CAP {
                    break 'pairs;
                }
            }
        }
    }

    report
}

fn check_sampled(f: &SetFunction, trials: usize, seed: u64) -> PropertyReport {
    let n = f.ground_size();
    let mut report = PropertyReport::clean();
    let empty = ElementSet::empty(n);
    let f_empty = f.eval(&empty);
    if f_empty != 0.0 {
        report.record(Violation {
            property: Property::Normalized,
            s: empty.clone(),
            t: None,
            x: None,
            lhs: f_empty,
            rhs: 0.0,
        });
    }

    for trial in 0..trials {
        let mut rng = rng::stream(seed, Stream::Trial, trial as u64);

        // S ⊆ T by a per-element three-way choice: in both, in T only, out.
        let mut s = ElementSet::empty(n);
        let mut t = ElementSet::empty(n);
        for i in 0..n {
            match rng.gen_range(0u8..3) {
                0 => {
                    s.insert(i);
                    t.insert(i);
                }
                1 => t.insert(i),
                _ => {}
            }
        }
        let fs = f.eval(&s);
        let ft = f.eval(&t);
        for (set_ref, val) in [(&s, fs), (&t, ft)] {
            if val < 0.0 {
                report.record(Violation {
                    property: Property::NonNegative,
                    s: set_ref.clone(),
                    t: None,
                    x: None,
                    lhs: val,
                    rhs: 0.0,
                });
            }
        }
        if fs > ft {
            report.record(Violation {
                property: Property::Monotone,
                s: s.clone(),
                t: Some(t.clone()),
                x: None,
                lhs: fs,
                rhs: ft,
            });
        }

        let outside: Vec<usize> = (0..n).filter(|&i| !t.contains(i)).collect();
        if !outside.is_empty() {
            let x = outside[rng.gen_range(0..outside.len())];
            let t_step = f.eval(&t.with(x)) - ft;
            let s_step = f.eval(&s.with(x)) - fs;
            report.lipschitz_constant = report
                .lipschitz_constant
                .max(t_step.abs())
                .max(s_step.abs());
            if t_step > s_step {
                report.record(Violation {
                    property: Property::SubmodularMarginals,
                    s,
                    t: Some(t),
                    x: Some(x),
                    lhs: t_step,
                    rhs: s_step,
                });
            }
        }

        // An unconstrained pair for the other route.
        let mut a = ElementSet::empty(n);
        let mut b = ElementSet::empty(n);
        for i in 0..n {
            if rng.gen::<bool>() {
                a.insert(i);
            }
            if rng.gen::<bool>() {
                b.insert(i);
            }
        }
        let lhs = f.eval(&a) + f.eval(&b);
        let rhs = f.eval(&a.union(&b)) + f.eval(&a.intersection(&b));
        if lhs < rhs {
            report.record(Violation {
                property: Property::SubmodularPairs,
                s: a,
                t: Some(b),
                x: None,
                lhs,
                rhs,
            });
        }
    }
    report
}

/// Outcome of [`check_minimizer_lattice`].
#[derive(Debug, Clone)]
pub struct LatticeReport {
    pub closed: bool,
    pub minimum: f64,
    pub minimizer_count: usize,
    /// A pair of minimizers whose union or intersection is not a minimizer.
    pub counterexample: Option<(ElementSet, ElementSet)>,
}

/// Checks that the global minimizers of a submodular `f` are closed under
/// pairwise union and intersection. Refuses non-submodular inputs, for
/// which no closure guarantee exists.
pub fn check_minimizer_lattice(f: &SetFunction) -> Result<LatticeReport> {
    let n = f.ground_size();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::ExhaustiveLimit {
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let report = check_exhaustive(f);
    if !report.submodular() {
        return Err(Error::NotSubmodular);
    }
    let v = tabulate(f);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    let minimizers: Vec<u64> = (0..1u64 << n).filter(|&m| v[m as usize] == min).collect();
    for (ai, &a) in minimizers.iter().enumerate() {
        for &b in &minimizers[ai + 1..] {
            if v[(a | b) as usize] != min || v[(a & b) as usize] != min {
                return Ok(LatticeReport {
                    closed: false,
                    minimum: min,
                    minimizer_count: minimizers.len(),
                    counterexample: Some((
                        ElementSet::from_mask(n, a),
                        ElementSet::from_mask(n, b),
                    )),
                });
            }
        }
    }
    Ok(LatticeReport {
        closed: true,
        minimum: min,
        minimizer_count: minimizers.len(),
        counterexample: None,
    })
}
