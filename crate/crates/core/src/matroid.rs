//! Declarative matroid constructions over constraint families.
//!
//! A [`ConstraintFamily`] holds sets `A_1, .., A_k` with capacities
//! `b_1, .., b_k` and the error-corrected bound
//!
//! ```text
//! g(J) = Σ_{j∈J} b_j − (Σ_{j∈J} |A_j| − |A(J)|),     A(J) = ∪_{j∈J} A_j.
//! ```
//!
//! Families of sets `I` with `|I ∩ A(J)| ≤ g(J)` (for all `J`, or for all
//! small `J` together with a cardinality cap) form matroids; the
//! constructors here validate the preconditions and refuse with a concrete
//! violating sub-collection otherwise. Everything is exact integer
//! arithmetic; no floats enter an independence test.

use crate::error::Error;
use crate::expander::BipartiteNeighborhoods;
use crate::set::{binomial, for_each_combination, ElementSet};
use crate::{Result, ENUMERATION_BUDGET, EXHAUSTIVE_LIMIT};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Sets `A_1, .., A_k ⊆ [n]` with nonnegative integer capacities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintFamily {
    n: usize,
    sets: Vec<ElementSet>,
    caps: Vec<i64>,
}

impl ConstraintFamily {
    pub fn new(n: usize, sets: Vec<ElementSet>, caps: Vec<i64>) -> Result<Self> {
        if sets.len() != caps.len() {
            return Err(Error::LengthMismatch {
                expected: sets.len(),
                got: caps.len(),
            });
        }
        for s in &sets {
            if s.ground_size() != n {
                return Err(Error::ElementOutOfRange {
                    element: s.ground_size(),
                    universe: n,
                });
            }
        }
        for (i, &b) in caps.iter().enumerate() {
            if b < 0 {
                return Err(Error::InvalidParameter {
                    name: "caps",
                    reason: format!("capacity {b} at index {i} is negative"),
                });
            }
        }
        Ok(ConstraintFamily { n, sets, caps })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.sets.len()
    }

    pub fn set(&self, i: usize) -> &ElementSet {
        &self.sets[i]
    }

    pub fn cap(&self, i: usize) -> i64 {
        self.caps[i]
    }

    pub fn sets(&self) -> &[ElementSet] {
        &self.sets
    }

    pub fn caps(&self) -> &[i64] {
        &self.caps
    }

    /// `A(J) = ∪_{j∈J} A_j`.
    pub fn union_of(&self, indices: &[usize]) -> ElementSet {
        let mut u = ElementSet::empty(self.n);
        for &j in indices {
            u.union_with(&self.sets[j]);
        }
        u
    }

    /// The sub-family restricted to `indices`, preserving order.
    pub fn restrict(&self, indices: &[usize]) -> ConstraintFamily {
        ConstraintFamily {
            n: self.n,
            sets: indices.iter().map(|&i| self.sets[i].clone()).collect(),
            caps: indices.iter().map(|&i| self.caps[i]).collect(),
        }
    }
}

/// `g(J)` of the family, exact.
pub fn g_value(family: &ConstraintFamily, indices: &[usize]) -> i64 {
    let union = family.union_of(indices);
    g_from_union(family, indices, &union)
}

fn g_from_union(family: &ConstraintFamily, indices: &[usize], union: &ElementSet) -> i64 {
    let caps: i64 = indices.iter().map(|&j| family.cap(j)).sum();
    let sizes: i64 = indices.iter().map(|&j| family.set(j).len() as i64).sum();
    caps - (sizes - union.len() as i64)
}

/// Enumerates all `J ⊆ [k]` with `|J| ≤ max_size` level by level, memoizing
/// unions along the subset lattice (each `A(J)` is its parent's union plus
/// one more set). `visit` returns `false` to stop early.
fn for_each_union(
    family: &ConstraintFamily,
    max_size: usize,
    mut visit: impl FnMut(&[usize], &ElementSet) -> bool,
) -> bool {
    let empty = ElementSet::empty(family.ground_size());
    if !visit(&[], &empty) {
        return false;
    }
    let mut prev: HashMap<Vec<usize>, ElementSet> = HashMap::new();
    prev.insert(Vec::new(), empty);
    for level in 1..=max_size.min(family.k()) {
        let mut cur: HashMap<Vec<usize>, ElementSet> = HashMap::new();
        let complete = for_each_combination(family.k(), level, |idx| {
            let mut union = prev[&idx[..level - 1]].clone();
            union.union_with(family.set(idx[level - 1]));
            let go = visit(idx, &union);
            cur.insert(idx.to_vec(), union);
            go
        });
        if !complete {
            return false;
        }
        prev = cur;
    }
    true
}

fn enumeration_cost(k: usize, max_size: usize) -> u128 {
    (0..=max_size.min(k)).map(|j| binomial(k, j)).sum()
}

/// Checks the largeness condition that licenses truncating the constraint
/// family at `|J| < tau`: `g(J) ≥ 0` for `|J| < tau` and `g(J) ≥ d` for
/// `tau ≤ |J| ≤ 2·tau − 2`. Uses the default enumeration budget.
pub fn is_dtau_large(family: &ConstraintFamily, d: i64, tau: usize) -> Result<()> {
    is_dtau_large_with_budget(family, d, tau, ENUMERATION_BUDGET)
}

/// As [`is_dtau_large`] with an explicit budget on enumerated subsets.
pub fn is_dtau_large_with_budget(
    family: &ConstraintFamily,
    d: i64,
    tau: usize,
    budget: u128,
) -> Result<()> {
    if tau == 0 {
        return Err(Error::InvalidParameter {
            name: "tau",
            reason: "tau must be at least 1".into(),
        });
    }
    if d < 0 {
        return Err(Error::InvalidParameter {
            name: "d",
            reason: "d must be nonnegative".into(),
        });
    }
    let top = if tau >= 2 { 2 * tau - 2 } else { 0 };
    let required = enumeration_cost(family.k(), top);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let mut failure: Option<Error> = None;
    for_each_union(family, top, |idx, union| {
        let g = g_from_union(family, idx, union);
        let required = if idx.len() < tau { 0 } else { d };
        if g < required {
            failure = Some(Error::NotLarge {
                indices: idx.to_vec(),
                value: g,
                required,
            });
            false
        } else {
            true
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// One evaluated constraint `|I ∩ set| ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub set: ElementSet,
    pub rhs: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatroidKind {
    FullUncrossed,
    Truncated,
    Partition,
    Pairwise,
    FamilyMb,
    TabulatedIndependence,
}

/// A validated matroid given by an explicit constraint list (plus an
/// optional cardinality cap), or by a tabulated independence oracle.
///
/// Constructors verify the preconditions under which the construction is
/// known to produce a matroid; a spec that was handed out therefore
/// satisfies the axioms, which [`check_matroid_axioms`] re-verifies
/// exhaustively in tests.
#[derive(Debug, Clone)]
pub struct MatroidSpec {
    n: usize,
    kind: MatroidKind,
    cap: Option<i64>,
    constraints: Vec<Constraint>,
    /// constraint indices touching each element; drives incremental greedy
    by_element: Vec<Vec<u32>>,
    family: Option<ConstraintFamily>,
    d: Option<i64>,
    tau: Option<usize>,
    tabulated: Option<Vec<bool>>,
}

impl MatroidSpec {
    fn from_parts(
        n: usize,
        kind: MatroidKind,
        cap: Option<i64>,
        raw: Vec<Constraint>,
        family: Option<ConstraintFamily>,
        d: Option<i64>,
        tau: Option<usize>,
    ) -> Self {
        // Dedupe by set keeping the tightest bound, and drop constraints
        // that can never bind.
        let mut tightest: HashMap<ElementSet, i64> = HashMap::new();
        for c in raw {
            tightest
                .entry(c.set)
                .and_modify(|r| *r = (*r).min(c.rhs))
                .or_insert(c.rhs);
        }
        let mut constraints: Vec<Constraint> = tightest
            .into_iter()
            .filter(|(set, rhs)| (*rhs as i128) < set.len() as i128)
            .map(|(set, rhs)| Constraint { set, rhs })
            .collect();
        constraints.sort_by(|a, b| a.set.cmp(&b.set));
        let mut by_element = vec![Vec::new(); n];
        for (ci, c) in constraints.iter().enumerate() {
            for e in c.set.iter() {
                by_element[e].push(ci as u32);
            }
        }
        MatroidSpec {
            n,
            kind,
            cap,
            constraints,
            by_element,
            family,
            d,
            tau,
            tabulated: None,
        }
    }

    /// The fully uncrossed family: `|I ∩ A(J)| ≤ g(J)` for every `J ⊆ [k]`.
    /// Refuses families where some `g(J) < 0`, which would make the
    /// independence family empty.
    pub fn uncrossed(family: ConstraintFamily) -> Result<Self> {
        let k = family.k();
        let required = enumeration_cost(k, k);
        if required > ENUMERATION_BUDGET {
            return Err(Error::BudgetExceeded {
                required,
                budget: ENUMERATION_BUDGET,
            });
        }
        let mut raw = Vec::new();
        let mut failure: Option<Error> = None;
        for_each_union(&family, k, |idx, union| {
            let g = g_from_union(&family, idx, union);
            if g < 0 {
                failure = Some(Error::EmptyFamily {
                    indices: idx.to_vec(),
                    value: g,
                });
                return false;
            }
            if !idx.is_empty() {
                raw.push(Constraint {
                    set: union.clone(),
                    rhs: g,
                });
            }
            true
        });
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(Self::from_parts(
            family.ground_size(),
            MatroidKind::FullUncrossed,
            None,
            raw,
            Some(family),
            None,
            None,
        ))
    }

    /// The truncated family: `|I| ≤ d` and `|I ∩ A(J)| ≤ g(J)` for `|J| <
    /// tau`. Requires `g` to be `(d, tau)`-large.
    pub fn truncated(family: ConstraintFamily, d: i64, tau: usize) -> Result<Self> {
        Self::truncated_inner(family, d, tau, MatroidKind::Truncated)
    }

    fn truncated_inner(
        family: ConstraintFamily,
        d: i64,
        tau: usize,
        kind: MatroidKind,
    ) -> Result<Self> {
        is_dtau_large(&family, d, tau)?;
        let mut raw = Vec::new();
        for_each_union(&family, tau.saturating_sub(1), |idx, union| {
            if !idx.is_empty() {
                raw.push(Constraint {
                    set: union.clone(),
                    rhs: g_from_union(&family, idx, union),
                });
            }
            true
        });
        Ok(Self::from_parts(
            family.ground_size(),
            kind,
            Some(d),
            raw,
            Some(family),
            Some(d),
            Some(tau),
        ))
    }

    /// The pairwise special case: `|I| ≤ d` and `|I ∩ A_j| ≤ b_j`, valid
    /// whenever `d ≤ b_i + b_j − |A_i ∩ A_j|` for every pair `i ≠ j`.
    pub fn pairwise(family: ConstraintFamily, d: i64) -> Result<Self> {
        for i in 0..family.k() {
            for j in i + 1..family.k() {
                let bound = family.cap(i) + family.cap(j)
                    - family.set(i).intersection_len(family.set(j)) as i64;
                if d > bound {
                    return Err(Error::PairwiseBound { i, j, bound, d });
                }
            }
        }
        let raw = (0..family.k())
            .map(|i| Constraint {
                set: family.set(i).clone(),
                rhs: family.cap(i),
            })
            .collect();
        Ok(Self::from_parts(
            family.ground_size(),
            MatroidKind::Pairwise,
            Some(d),
            raw,
            Some(family),
            Some(d),
            None,
        ))
    }

    /// The generalized partition matroid `|I ∩ A_j| ≤ b_j` over pairwise
    /// disjoint parts.
    pub fn partition(family: ConstraintFamily) -> Result<Self> {
        for i in 0..family.k() {
            for j in i + 1..family.k() {
                if family.set(i).intersection_len(family.set(j)) > 0 {
                    return Err(Error::InvalidParameter {
                        name: "family",
                        reason: format!("parts {i} and {j} intersect"),
                    });
                }
            }
        }
        let raw = (0..family.k())
            .map(|i| Constraint {
                set: family.set(i).clone(),
                rhs: family.cap(i),
            })
            .collect();
        Ok(Self::from_parts(
            family.ground_size(),
            MatroidKind::Partition,
            None,
            raw,
            Some(family),
            None,
            None,
        ))
    }

    /// A raw tabulated independence oracle over all `2^n` subsets. No axioms
    /// are verified; this kind exists to feed the checkers.
    pub fn tabulated_independence(n: usize, independent: Vec<bool>) -> Result<Self> {
        if n > 24 {
            return Err(Error::ExhaustiveLimit { n, limit: 24 });
        }
        if independent.len() != 1 << n {
            return Err(Error::LengthMismatch {
                expected: 1 << n,
                got: independent.len(),
            });
        }
        let mut spec = Self::from_parts(
            n,
            MatroidKind::TabulatedIndependence,
            None,
            Vec::new(),
            None,
            None,
            None,
        );
        spec.tabulated = Some(independent);
        Ok(spec)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> MatroidKind {
        self.kind
    }

    pub fn cardinality_cap(&self) -> Option<i64> {
        self.cap
    }

    pub fn family(&self) -> Option<&ConstraintFamily> {
        self.family.as_ref()
    }

    pub fn tau(&self) -> Option<usize> {
        self.tau
    }

    /// The evaluated constraint list (deduped, never-binding ones pruned).
    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Exact independence test.
    pub fn is_independent(&self, i_set: &ElementSet) -> bool {
        assert_eq!(i_set.ground_size(), self.n);
        if let Some(table) = &self.tabulated {
            return table[i_set.mask() as usize];
        }
        if let Some(cap) = self.cap {
            if i_set.len() as i64 > cap {
                return false;
            }
        }
        self.constraints
            .iter()
            .all(|c| i_set.intersection_len(&c.set) as i64 <= c.rhs)
    }

    /// Matroid rank by the greedy scan: elements of `S` in ascending index,
    /// added whenever independence is preserved. Correct on matroids by the
    /// exchange axiom.
    pub fn rank(&self, s: &ElementSet) -> usize {
        assert_eq!(s.ground_size(), self.n);
        if self.tabulated.is_some() {
            return greedy_rank_with_order(
                |i_set| self.is_independent(i_set),
                self.n,
                &s.to_indices(),
            );
        }
        let mut counts = vec![0i64; self.constraints.len()];
        let mut size: i64 = 0;
        for e in s.iter() {
            if let Some(cap) = self.cap {
                if size + 1 > cap {
                    break;
                }
            }
            let ok = self.by_element[e]
                .iter()
                .all(|&ci| counts[ci as usize] < self.constraints[ci as usize].rhs);
            if ok {
                size += 1;
                for &ci in &self.by_element[e] {
                    counts[ci as usize] += 1;
                }
            }
        }
        size as usize
    }
}

/// Greedy rank of an arbitrary independence oracle, scanning `order`.
/// On non-matroid oracles the result depends on the order; that is the point
/// of exposing it.
pub fn greedy_rank_with_order(
    oracle: impl Fn(&ElementSet) -> bool,
    n: usize,
    order: &[usize],
) -> usize {
    let mut current = ElementSet::empty(n);
    for &e in order {
        let candidate = current.with(e);
        if oracle(&candidate) {
            current = candidate;
        }
    }
    current.len()
}

/// Brute-force rank: the largest independent subset of `S`, by enumerating
/// all `2^|S|` subsets. The oracle of record for [`MatroidSpec::rank`].
pub fn brute_rank(spec: &MatroidSpec, s: &ElementSet) -> Result<usize> {
    brute_rank_oracle(|i_set| spec.is_independent(i_set), s)
}

/// As [`brute_rank`] for an arbitrary oracle.
pub fn brute_rank_oracle(oracle: impl Fn(&ElementSet) -> bool, s: &ElementSet) -> Result<usize> {
    let members = s.to_indices();
    let m = members.len();
    if m > EXHAUSTIVE_LIMIT {
        return Err(Error::ExhaustiveLimit {
            n: m,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let n = s.ground_size();
    let mut best = 0;
    for mask in 0u64..1 << m {
        let picked = mask.count_ones() as usize;
        if picked <= best {
            continue;
        }
        let mut subset = ElementSet::empty(n);
        for (bit, &e) in members.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                subset.insert(e);
            }
        }
        if oracle(&subset) {
            best = picked;
        }
    }
    Ok(best)
}

/// How an independence family violates the matroid axioms.
#[derive(Debug, Clone)]
pub enum AxiomViolation {
    /// The empty set is not independent, so the family is empty.
    Empty,
    /// `subset ⊆ superset`, the superset independent but the subset not.
    Downward {
        superset: ElementSet,
        subset: ElementSet,
    },
    /// `|smaller| < |larger|`, both independent, but no element of
    /// `larger \ smaller` extends `smaller`.
    Exchange {
        larger: ElementSet,
        smaller: ElementSet,
    },
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub holds: bool,
    pub violation: Option<AxiomViolation>,
    pub independent_count: usize,
}

/// Exhaustively verifies non-emptiness, downward closure, and the exchange
/// axiom of an independence oracle over `2^[n]`. The first violation in
/// ascending mask order is reported.
pub fn check_matroid_axioms(oracle: impl Fn(&ElementSet) -> bool, n: usize) -> Result<AxiomReport> {
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::ExhaustiveLimit {
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let size = 1usize << n;
    let mut indep = vec![false; size];
    for mask in 0..size as u64 {
        indep[mask as usize] = oracle(&ElementSet::from_mask(n, mask));
    }
    let fail = |violation| {
        Ok(AxiomReport {
            holds: false,
            violation: Some(violation),
            independent_count: 0,
        })
    };
    if !indep[0] {
        return fail(AxiomViolation::Empty);
    }
    // Downward closure via single-element deletions.
    for mask in 0..size as u64 {
        if !indep[mask as usize] {
            continue;
        }
        let mut rest = mask;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest &= rest - 1;
            if !indep[(mask & !bit) as usize] {
                return fail(AxiomViolation::Downward {
                    superset: ElementSet::from_mask(n, mask),
                    subset: ElementSet::from_mask(n, mask & !bit),
                });
            }
        }
    }
    let members: Vec<u64> = (0..size as u64).filter(|&m| indep[m as usize]).collect();
    // Exchange: every independent pair with |J| < |I| must extend J from I.
    for &larger in &members {
        let li = larger.count_ones();
        for &smaller in &members {
            if smaller.count_ones() >= li {
                continue;
            }
            let mut candidates = larger & !smaller;
            let mut extended = false;
            while candidates != 0 {
                let bit = candidates & candidates.wrapping_neg();
                candidates &= candidates - 1;
                if indep[(smaller | bit) as usize] {
                    extended = true;
                    break;
                }
            }
            if !extended {
                return fail(AxiomViolation::Exchange {
                    larger: ElementSet::from_mask(n, larger),
                    smaller: ElementSet::from_mask(n, smaller),
                });
            }
        }
    }
    Ok(AxiomReport {
        holds: true,
        violation: None,
        independent_count: members.len(),
    })
}

#[derive(Debug, Clone)]
pub struct UncrossingReport {
    pub holds: bool,
    /// `(I, C_1, C_2)`: an independent set with two tight, intersecting
    /// constraints whose union is not tight.
    pub witness: Option<(ElementSet, ElementSet, ElementSet)>,
}

/// Checks the uncrossing property of an explicit constraint collection: for
/// every `I` independent under the collection and every pair of tight
/// constraints, either their union is a tight constraint of the collection
/// or they are disjoint.
pub fn check_uncrossing_collection(
    constraints: &[(ElementSet, i64)],
    n: usize,
) -> Result<UncrossingReport> {
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::ExhaustiveLimit {
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    // Tightest bound per distinct set.
    let mut tightest: HashMap<ElementSet, i64> = HashMap::new();
    for (set, rhs) in constraints {
        tightest
            .entry(set.clone())
            .and_modify(|r| *r = (*r).min(*rhs))
            .or_insert(*rhs);
    }
    let mut collection: Vec<(ElementSet, i64)> = tightest.clone().into_iter().collect();
    collection.sort_by(|a, b| a.0.cmp(&b.0));

    for mask in 0..1u64 << n {
        let i_set = ElementSet::from_mask(n, mask);
        let counts: Vec<i64> = collection
            .iter()
            .map(|(set, _)| i_set.intersection_len(set) as i64)
            .collect();
        if counts
            .iter()
            .zip(&collection)
            .any(|(&cnt, (_, rhs))| cnt > *rhs)
        {
            continue; // not independent
        }
        let tight: Vec<usize> = (0..collection.len())
            .filter(|&ci| counts[ci] == collection[ci].1)
            .collect();
        for (pos, &c1) in tight.iter().enumerate() {
            for &c2 in &tight[pos + 1..] {
                let (s1, s2) = (&collection[c1].0, &collection[c2].0);
                if s1.intersection_len(s2) == 0 {
                    continue;
                }
                let union = s1.union(s2);
                let union_tight = tightest
                    .get(&union)
                    .is_some_and(|&rhs| i_set.intersection_len(&union) as i64 == rhs);
                if !union_tight {
                    return Ok(UncrossingReport {
                        holds: false,
                        witness: Some((i_set, s1.clone(), s2.clone())),
                    });
                }
            }
        }
    }
    Ok(UncrossingReport {
        holds: true,
        witness: None,
    })
}

/// The canonical constraint collection a spec's construction promises to
/// uncross: every `A(J)` with its (possibly truncated) bound, plus the
/// explicit cardinality cap where the kind has one.
pub fn uncrossing_collection(spec: &MatroidSpec) -> Result<Vec<(ElementSet, i64)>> {
    let family = spec.family.as_ref().ok_or(Error::InvalidParameter {
        name: "spec",
        reason: "tabulated specs carry no constraint collection".into(),
    })?;
    let k = family.k();
    let required = enumeration_cost(k, k);
    if required > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            required,
            budget: ENUMERATION_BUDGET,
        });
    }
    let truncate_at = match spec.kind {
        MatroidKind::FullUncrossed | MatroidKind::Partition => None,
        // Pairwise is the tau = 2 truncation.
        MatroidKind::Pairwise => Some(2usize),
        MatroidKind::Truncated | MatroidKind::FamilyMb => spec.tau,
        MatroidKind::TabulatedIndependence => unreachable!(),
    };
    let mut out = Vec::new();
    for_each_union(family, k, |idx, union| {
        if idx.is_empty() {
            return true;
        }
        let g = g_from_union(family, idx, union);
        let rhs = match truncate_at {
            Some(tau) if idx.len() >= tau => spec.d.expect("truncated kinds carry d"),
            _ => g,
        };
        out.push((union.clone(), rhs));
        true
    });
    if let Some(d) = spec.cap {
        out.push((ElementSet::full(spec.n), d));
    }
    Ok(out)
}

/// Uncrossing check of a spec's canonical collection.
pub fn check_uncrossing(spec: &MatroidSpec) -> Result<UncrossingReport> {
    let collection = uncrossing_collection(spec)?;
    check_uncrossing_collection(&collection, spec.ground_size())
}

/// The planted-rank family: a truncated spec whose constraints are indexed
/// by a marked subset `B` of the left vertices of an expander, so that each
/// neighborhood `A_i` has rank `b` when `i ∈ B` and rank `d = |A_i|`
/// otherwise (given sufficient expansion).
#[derive(Debug, Clone)]
pub struct FamilyMb {
    spec: MatroidSpec,
    sets: Vec<ElementSet>,
    marked: Vec<usize>,
    b: i64,
    d: usize,
    tau: usize,
    graph: BipartiteNeighborhoods,
}

/// Builds the planted-rank matroid over the neighborhoods of `graph`.
///
/// `marked` lists the indices in `B`; constraints range over `J ⊆ B` with
/// `|J| < tau`, capped at `|I| ≤ d`. Fails if the graph degree is not `d`,
/// an index is out of range, or the marked sub-family is not
/// `(d, tau)`-large (expansion too weak for the chosen `b` and `tau`).
pub fn build_family_mb(
    graph: BipartiteNeighborhoods,
    b: i64,
    d: usize,
    tau: usize,
    marked: &[usize],
) -> Result<FamilyMb> {
    if graph.degree() != d {
        return Err(Error::DegreeMismatch {
            graph_d: graph.degree(),
            d,
        });
    }
    let k = graph.left_size();
    let mut marked = marked.to_vec();
    marked.sort_unstable();
    marked.dedup();
    if let Some(&bad) = marked.iter().find(|&&i| i >= k) {
        return Err(Error::ElementOutOfRange {
            element: bad,
            universe: k,
        });
    }
    let sets: Vec<ElementSet> = (0..k).map(|i| graph.neighborhood(i)).collect();
    let sub = ConstraintFamily::new(
        graph.right_size(),
        marked.iter().map(|&i| sets[i].clone()).collect(),
        vec![b; marked.len()],
    )?;
    let spec = MatroidSpec::truncated_inner(sub, d as i64, tau, MatroidKind::FamilyMb)?;
    Ok(FamilyMb {
        spec,
        sets,
        marked,
        b,
        d,
        tau,
        graph,
    })
}

impl FamilyMb {
    pub fn spec(&self) -> &MatroidSpec {
        &self.spec
    }

    pub fn planted_sets(&self) -> &[ElementSet] {
        &self.sets
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    pub fn is_marked(&self, i: usize) -> bool {
        self.marked.binary_search(&i).is_ok()
    }

    pub fn low_rank(&self) -> i64 {
        self.b
    }

    pub fn cap(&self) -> usize {
        self.d
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn graph(&self) -> &BipartiteNeighborhoods {
        &self.graph
    }

    pub fn left_size(&self) -> usize {
        self.sets.len()
    }

    pub fn ground_size(&self) -> usize {
        self.spec.ground_size()
    }

    /// Rank of the planted set `A_i`.
    pub fn planted_rank(&self, i: usize) -> usize {
        self.spec.rank(&self.sets[i])
    }
}

/// Desk-scale defaults mirroring the asymptotic parameter block
/// `d = n^(1/3)`, `b = 8·log k`, `tau = d / (4·log k)`,
/// `L = d / (2·log k)`, `eps = 2·log k / d`, with the log base exposed
/// (base 2 by default).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamBlock {
    pub d: usize,
    pub b: i64,
    pub tau: usize,
    pub l: usize,
    pub eps: f64,
}

pub fn planted_defaults(n: usize, k: usize, log_base: f64) -> ParamBlock {
    let log_k = (k.max(2) as f64).ln() / log_base.ln();
    let d = (n as f64).powf(1.0 / 3.0).round().max(1.0) as usize;
    let b = (8.0 * log_k).ceil() as i64;
    let tau = ((d as f64) / (4.0 * log_k)).round().max(2.0) as usize;
    let l = ((d as f64) / (2.0 * log_k)).round().max(1.0) as usize;
    let eps = 2.0 * log_k / d as f64;
    ParamBlock { d, b, tau, l, eps }
}

/// Serialized matroid instance. `b` holds the common capacity when all caps
/// agree; `caps` carries them per set otherwise. Absent fields stay absent
/// on re-serialization, so parse/serialize round-trips are stable.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatroidFile {
    pub n: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<usize>,
    #[serde(rename = "A")]
    pub sets: Vec<Vec<usize>>,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    pub marked: Option<Vec<usize>>,
    pub kind: MatroidKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caps: Option<Vec<i64>>,
}

impl MatroidFile {
    pub fn from_spec(spec: &MatroidSpec) -> Result<Self> {
        if spec.kind == MatroidKind::FamilyMb {
            return Err(Error::InvalidParameter {
                name: "spec",
                reason: "serialize planted families via from_family_mb".into(),
            });
        }
        let family = spec.family.as_ref().ok_or(Error::InvalidParameter {
            name: "spec",
            reason: "tabulated specs have no instance-file form".into(),
        })?;
        let caps = family.caps();
        let uniform = caps.windows(2).all(|w| w[0] == w[1]);
        Ok(MatroidFile {
            n: spec.ground_size(),
            k: family.k(),
            d: spec.d,
            b: if uniform { caps.first().copied() } else { None },
            tau: spec.tau,
            sets: family.sets().iter().map(|s| s.to_indices()).collect(),
            marked: None,
            kind: spec.kind,
            caps: if uniform { None } else { Some(caps.to_vec()) },
        })
    }

    pub fn from_family_mb(fam: &FamilyMb) -> Self {
        MatroidFile {
            n: fam.ground_size(),
            k: fam.left_size(),
            d: Some(fam.cap() as i64),
            b: Some(fam.low_rank()),
            tau: Some(fam.tau()),
            sets: fam.planted_sets().iter().map(|s| s.to_indices()).collect(),
            marked: Some(fam.marked().to_vec()),
            kind: MatroidKind::FamilyMb,
            caps: None,
        }
    }

    fn family(&self) -> Result<ConstraintFamily> {
        let sets = self
            .sets
            .iter()
            .map(|s| ElementSet::from_indices(self.n, s))
            .collect::<Result<Vec<_>>>()?;
        let caps = match (&self.caps, self.b) {
            (Some(caps), _) => caps.clone(),
            (None, Some(b)) => vec![b; self.sets.len()],
            (None, None) => {
                return Err(Error::Malformed {
                    what: "matroid file",
                    reason: "neither b nor caps given".into(),
                })
            }
        };
        ConstraintFamily::new(self.n, sets, caps)
    }

    /// Rebuilds and re-validates the instance.
    pub fn to_spec(&self) -> Result<MatroidSpec> {
        let missing = |name: &'static str| Error::Malformed {
            what: "matroid file",
            reason: format!("kind {:?} requires field {name}", self.kind),
        };
        match self.kind {
            MatroidKind::FullUncrossed => MatroidSpec::uncrossed(self.family()?),
            MatroidKind::Partition => MatroidSpec::partition(self.family()?),
            MatroidKind::Pairwise => {
                MatroidSpec::pairwise(self.family()?, self.d.ok_or_else(|| missing("d"))?)
            }
            MatroidKind::Truncated => MatroidSpec::truncated(
                self.family()?,
                self.d.ok_or_else(|| missing("d"))?,
                self.tau.ok_or_else(|| missing("tau"))?,
            ),
            MatroidKind::FamilyMb => Ok(self.to_family_mb()?.spec.clone()),
            MatroidKind::TabulatedIndependence => Err(Error::Malformed {
                what: "matroid file",
                reason: "tabulated independence is not file-backed".into(),
            }),
        }
    }

    pub fn to_family_mb(&self) -> Result<FamilyMb> {
        let missing = |name: &'static str| Error::Malformed {
            what: "matroid file",
            reason: format!("family-mb requires field {name}"),
        };
        let d = self.d.ok_or_else(|| missing("d"))? as usize;
        let graph = BipartiteNeighborhoods::from_neighbor_lists(self.n, self.sets.clone())?;
        build_family_mb(
            graph,
            self.b.ok_or_else(|| missing("b"))?,
            d,
            self.tau.ok_or_else(|| missing("tau"))?,
            self.marked.as_deref().unwrap_or(&[]),
        )
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expander::sample_expander;
    use crate::expander::{verify_expansion, ExpansionParams};
    use crate::set::all_subsets;
    use proptest::prelude::*;

    fn idx(n: usize, xs: &[usize]) -> ElementSet {
        ElementSet::from_indices(n, xs).unwrap()
    }

    /// The running example: A_1 = {1,2,3}, A_2 = {3,4,5} (1-based), b = (2,2).
    fn coupled_family() -> ConstraintFamily {
        ConstraintFamily::new(5, vec![idx(5, &[0, 1, 2]), idx(5, &[2, 3, 4])], vec![2, 2]).unwrap()
    }

    #[test]
    fn g_matches_pair_formula_on_example() {
        let fam = coupled_family();
        assert_eq!(g_value(&fam, &[0, 1]), 3); // 4 - (6 - 5)
        assert_eq!(g_value(&fam, &[]), 0);
        assert_eq!(g_value(&fam, &[0]), 2);
    }

    #[test]
    fn g_is_additive_on_disjoint_families() {
        let fam = ConstraintFamily::new(
            9,
            vec![idx(9, &[0, 1, 2]), idx(9, &[3, 4, 5]), idx(9, &[6, 7, 8])],
            vec![5, 5, 5],
        )
        .unwrap();
        assert_eq!(g_value(&fam, &[0]), 5);
        assert_eq!(g_value(&fam, &[0, 2]), 10);
        assert_eq!(g_value(&fam, &[0, 1, 2]), 15);
    }

    #[test]
    fn largeness_examples() {
        // Disjoint |A_i| = 3, b_i = 2: g(J) = 2|J|, (4,2)-large.
        let disjoint =
            ConstraintFamily::new(6, vec![idx(6, &[0, 1, 2]), idx(6, &[3, 4, 5])], vec![2, 2])
                .unwrap();
        assert!(is_dtau_large(&disjoint, 4, 2).is_ok());

        // tau = 1 leaves only g(∅) ≥ 0.
        assert!(is_dtau_large(&disjoint, 1_000_000, 1).is_ok());

        // A_1 = A_2 with caps 1: g({1,2}) = 2 - 3 = -1 < 3.
        let overlapping =
            ConstraintFamily::new(3, vec![idx(3, &[0, 1, 2]), idx(3, &[0, 1, 2])], vec![1, 1])
                .unwrap();
        match is_dtau_large(&overlapping, 3, 2) {
            Err(Error::NotLarge {
                indices,
                value,
                required,
            }) => {
                assert_eq!(indices, vec![0, 1]);
                assert_eq!(value, -1);
                assert_eq!(required, 3);
            }
            other => panic!("expected NotLarge, got {other:?}"),
        }
    }

    #[test]
    fn uncrossed_running_example() {
        let spec = MatroidSpec::uncrossed(coupled_family()).unwrap();
        // 1-based {1,2,4} is independent, {1,2,4,5} is not.
        assert!(spec.is_independent(&idx(5, &[0, 1, 3])));
        assert!(!spec.is_independent(&idx(5, &[0, 1, 3, 4])));
        assert!(spec.is_independent(&ElementSet::empty(5)));
        let report = check_matroid_axioms(|s| spec.is_independent(s), 5).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn uncrossed_on_disjoint_parts_is_partition_matroid() {
        let fam = ConstraintFamily::new(
            7,
            vec![idx(7, &[0, 1, 2]), idx(7, &[3, 4]), idx(7, &[5, 6])],
            vec![2, 1, 2],
        )
        .unwrap();
        let uncrossed = MatroidSpec::uncrossed(fam.clone()).unwrap();
        let partition = MatroidSpec::partition(fam).unwrap();
        for s in all_subsets(7) {
            assert_eq!(uncrossed.is_independent(&s), partition.is_independent(&s));
        }
    }

    #[test]
    fn uncrossed_with_no_constraints_is_free() {
        let fam = ConstraintFamily::new(4, vec![], vec![]).unwrap();
        let spec = MatroidSpec::uncrossed(fam).unwrap();
        for s in all_subsets(4) {
            assert!(spec.is_independent(&s));
            assert_eq!(spec.rank(&s), s.len());
        }
    }

    #[test]
    fn uncrossed_refuses_empty_family() {
        // A_1 = A_2 = {0,1,2}, caps 1: g({1,2}) = 2 - 3 = -1.
        let fam =
            ConstraintFamily::new(3, vec![idx(3, &[0, 1, 2]), idx(3, &[0, 1, 2])], vec![1, 1])
                .unwrap();
        match MatroidSpec::uncrossed(fam) {
            Err(Error::EmptyFamily { indices, value }) => {
                assert_eq!(indices, vec![0, 1]);
                assert_eq!(value, -1);
            }
            other => panic!("expected EmptyFamily, got {other:?}"),
        }
    }

    #[test]
    fn truncated_disjoint_example_is_a_matroid() {
        let fam =
            ConstraintFamily::new(6, vec![idx(6, &[0, 1, 2]), idx(6, &[3, 4, 5])], vec![2, 2])
                .unwrap();
        let spec = MatroidSpec::truncated(fam, 4, 2).unwrap();
        let report = check_matroid_axioms(|s| spec.is_independent(s), 6).unwrap();
        assert!(report.holds, "violation: {:?}", report.violation);
        assert_eq!(spec.rank(&ElementSet::full(6)), 4);
    }

    #[test]
    fn truncated_with_large_tau_is_uncrossed_plus_cap() {
        let fam = coupled_family();
        let spec = MatroidSpec::truncated(fam.clone(), 3, 5).unwrap();
        let uncrossed = MatroidSpec::uncrossed(fam).unwrap();
        for s in all_subsets(5) {
            let expected = uncrossed.is_independent(&s) && s.len() <= 3;
            assert_eq!(spec.is_independent(&s), expected);
        }
    }

    #[test]
    fn truncated_refusal_carries_witness() {
        let fam =
            ConstraintFamily::new(3, vec![idx(3, &[0, 1, 2]), idx(3, &[0, 1, 2])], vec![1, 1])
                .unwrap();
        assert!(matches!(
            MatroidSpec::truncated(fam, 3, 2),
            Err(Error::NotLarge { .. })
        ));
    }

    #[test]
    fn paving_parameters_give_paving_matroid() {
        // m = 3: blocks of size 3 with pairwise intersections ≤ 1,
        // caps m-1 = 2, cap d = m = 3.
        let m = 3i64;
        let fam = ConstraintFamily::new(
            7,
            vec![
                idx(7, &[0, 1, 2]),
                idx(7, &[0, 3, 4]),
                idx(7, &[1, 3, 5]),
                idx(7, &[2, 4, 5]),
            ],
            vec![m - 1; 4],
        )
        .unwrap();
        let spec = MatroidSpec::truncated(fam, m, 2).unwrap();
        assert!(
            check_matroid_axioms(|s| spec.is_independent(s), 7)
                .unwrap()
                .holds
        );
        // Circuits (minimal dependent sets) have size m or m + 1.
        let mut circuits = 0;
        for s in all_subsets(7) {
            if spec.is_independent(&s) {
                continue;
            }
            let is_circuit = s.iter().all(|e| spec.is_independent(&s.without(e)));
            if is_circuit {
                circuits += 1;
                assert!(
                    s.len() as i64 == m || s.len() as i64 == m + 1,
                    "circuit {s:?} has size {}",
                    s.len()
                );
            }
        }
        assert!(circuits > 0);
    }

    #[test]
    fn pairwise_accepts_vacuous_single_set() {
        let fam = ConstraintFamily::new(3, vec![idx(3, &[0, 1])], vec![1]).unwrap();
        let spec = MatroidSpec::pairwise(fam, 2).unwrap();
        assert!(
            check_matroid_axioms(|s| spec.is_independent(s), 3)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn pairwise_refuses_with_witness_pair() {
        let fam =
            ConstraintFamily::new(3, vec![idx(3, &[0, 1]), idx(3, &[1, 2])], vec![1, 1]).unwrap();
        match MatroidSpec::pairwise(fam, 2) {
            Err(Error::PairwiseBound { i, j, bound, d }) => {
                assert_eq!((i, j, bound, d), (0, 1, 1, 2));
            }
            other => panic!("expected PairwiseBound, got {other:?}"),
        }
    }

    #[test]
    fn rank_of_partition_matroid_matches_closed_form_and_brute() {
        let fam = ConstraintFamily::new(
            9,
            vec![idx(9, &[0, 1, 2]), idx(9, &[3, 4, 5]), idx(9, &[6, 7, 8])],
            vec![1, 2, 3],
        )
        .unwrap();
        let spec = MatroidSpec::partition(fam.clone()).unwrap();
        for s in all_subsets(9) {
            let closed_form: usize = (0..3)
                .map(|i| s.intersection_len(fam.set(i)).min(fam.cap(i) as usize))
                .sum();
            assert_eq!(spec.rank(&s), closed_form);
            assert_eq!(spec.rank(&s), brute_rank(&spec, &s).unwrap());
        }
    }

    #[test]
    fn rank_of_empty_set_is_zero() {
        let spec = MatroidSpec::uncrossed(coupled_family()).unwrap();
        assert_eq!(spec.rank(&ElementSet::empty(5)), 0);
    }

    #[test]
    fn non_matroid_family_fails_axioms_with_the_known_witness() {
        // |I| ≤ 4, |I ∩ A_i| ≤ 2 without the union constraint is not a
        // matroid: {2,3,4} and {1,2,4,5} (1-based) are maximal with
        // different sizes.
        let fam = coupled_family();
        let oracle = |s: &ElementSet| {
            s.len() <= 4
                && s.intersection_len(fam.set(0)) <= 2
                && s.intersection_len(fam.set(1)) <= 2
        };
        let report = check_matroid_axioms(oracle, 5).unwrap();
        assert!(!report.holds);
        match report.violation {
            Some(AxiomViolation::Exchange { larger, smaller }) => {
                // the reported pair must itself violate exchange
                assert!(oracle(&larger) && oracle(&smaller));
                assert!(smaller.len() < larger.len());
                for e in larger.difference(&smaller).iter() {
                    assert!(!oracle(&smaller.with(e)));
                }
            }
            other => panic!("expected exchange violation, got {other:?}"),
        }
        // The known witness pair violates exchange too.
        let smaller = idx(5, &[1, 2, 3]);
        let larger = idx(5, &[0, 1, 3, 4]);
        assert!(oracle(&smaller) && oracle(&larger));
        for e in larger.difference(&smaller).iter() {
            assert!(!oracle(&smaller.with(e)));
        }
    }

    #[test]
    fn brute_rank_sees_past_greedy_on_non_matroids() {
        let fam = coupled_family();
        let oracle = |s: &ElementSet| {
            s.len() <= 4
                && s.intersection_len(fam.set(0)) <= 2
                && s.intersection_len(fam.set(1)) <= 2
        };
        let full = ElementSet::full(5);
        assert_eq!(brute_rank_oracle(oracle, &full).unwrap(), 4);
        // A greedy scan starting inside A_1 ∩-heavy territory stalls at 3.
        assert_eq!(greedy_rank_with_order(oracle, 5, &[1, 2, 3, 0, 4]), 3);
        assert_eq!(greedy_rank_with_order(oracle, 5, &[0, 1, 2, 3, 4]), 4);
    }

    #[test]
    fn uncrossing_holds_on_running_example_and_partition() {
        let spec = MatroidSpec::uncrossed(coupled_family()).unwrap();
        assert!(check_uncrossing(&spec).unwrap().holds);

        let fam =
            ConstraintFamily::new(6, vec![idx(6, &[0, 1, 2]), idx(6, &[3, 4, 5])], vec![1, 2])
                .unwrap();
        let part = MatroidSpec::partition(fam).unwrap();
        assert!(check_uncrossing(&part).unwrap().holds);
    }

    #[test]
    fn corrupted_union_bound_is_detected() {
        // Raise g({1,2}) by one on the coupled family; {0,2,4} then has both
        // A_1 and A_2 tight, intersecting, with the union no longer tight.
        let fam = coupled_family();
        let collection = vec![
            (fam.set(0).clone(), 2),
            (fam.set(1).clone(), 2),
            (fam.set(0).union(fam.set(1)), 4),
        ];
        let report = check_uncrossing_collection(&collection, 5).unwrap();
        assert!(!report.holds);
        let (i_set, c1, c2) = report.witness.unwrap();
        // the witness really is two tight intersecting constraints with a
        // non-tight union
        assert!(c1.intersection_len(&c2) > 0);
        assert_eq!(i_set.intersection_len(&c1), 2);
        assert_eq!(i_set.intersection_len(&c2), 2);
        assert_ne!(i_set.intersection_len(&c1.union(&c2)), 4);
        // {0,2,4} is one such witness
        let manual = idx(5, &[0, 2, 4]);
        assert_eq!(manual.intersection_len(fam.set(0)), 2);
        assert_eq!(manual.intersection_len(fam.set(1)), 2);
        assert_eq!(manual.len(), 3);

        // The uncorrupted collection uncrosses.
        let honest = vec![
            (fam.set(0).clone(), 2),
            (fam.set(1).clone(), 2),
            (fam.set(0).union(fam.set(1)), 3),
        ];
        assert!(check_uncrossing_collection(&honest, 5).unwrap().holds);
    }

    fn small_verified_family_mb(marked: &[usize]) -> FamilyMb {
        // Find a seed whose sampled graph expands enough for b = 2, d = 3,
        // tau = 2 over n = 12, k = 4; the dichotomy is then guaranteed.
        for seed in 0..200 {
            let graph = sample_expander(4, 12, 3, seed).unwrap();
            let eps = 2.0 / (4.0 * 3.0); // b / (4 d)
            let params = ExpansionParams::new(3, 2, eps).unwrap();
            if !verify_expansion(&graph, &params).unwrap().passes {
                continue;
            }
            if let Ok(fam) = build_family_mb(graph, 2, 3, 2, marked) {
                return fam;
            }
        }
        panic!("no verified instance in 200 seeds");
    }

    #[test]
    fn family_mb_without_marks_is_cap_only() {
        let graph = sample_expander(5, 20, 4, 11).unwrap();
        let fam = build_family_mb(graph, 3, 4, 2, &[]).unwrap();
        for i in 0..5 {
            assert_eq!(fam.planted_rank(i), 4);
        }
        assert!(fam.spec().constraints().is_empty());
        assert_eq!(fam.spec().cardinality_cap(), Some(4));
    }

    #[test]
    fn family_mb_rank_dichotomy_small() {
        let fam = small_verified_family_mb(&[1, 3]);
        for i in 0..4 {
            let expected = if fam.is_marked(i) { 2 } else { 3 };
            assert_eq!(fam.planted_rank(i), expected, "set {i}");
        }
        // Marked planted sets are themselves dependent (rank b < d).
        assert!(!fam.spec().is_independent(&fam.planted_sets()[1]));
        assert!(fam.spec().is_independent(&fam.planted_sets()[0]));
        // And the whole thing is a matroid.
        assert!(
            check_matroid_axioms(|s| fam.spec().is_independent(s), 12)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn family_mb_rank_floor_at_b() {
        // Every set with at least b elements keeps rank ≥ b: exhaustively at
        // n = 12 with b = 2.
        let fam = small_verified_family_mb(&[0, 2]);
        for s in all_subsets(12) {
            if s.len() >= 2 {
                assert!(fam.spec().rank(&s) >= 2, "rank floor broken at {s:?}");
            }
        }
    }

    #[test]
    fn family_mb_degree_mismatch_refused() {
        let graph = sample_expander(4, 12, 3, 0).unwrap();
        assert!(matches!(
            build_family_mb(graph, 2, 4, 2, &[]),
            Err(Error::DegreeMismatch { graph_d: 3, d: 4 })
        ));
    }

    #[test]
    fn matroid_file_round_trips() {
        let fam =
            ConstraintFamily::new(6, vec![idx(6, &[0, 1, 2]), idx(6, &[3, 4, 5])], vec![2, 2])
                .unwrap();
        let spec = MatroidSpec::truncated(fam, 4, 2).unwrap();
        let file = MatroidFile::from_spec(&spec).unwrap();
        let json = file.to_json().unwrap();
        let parsed = MatroidFile::from_json(&json).unwrap();
        assert_eq!(parsed, file);
        let rebuilt = parsed.to_spec().unwrap();
        assert_eq!(rebuilt.constraints(), spec.constraints());
        assert_eq!(rebuilt.cardinality_cap(), spec.cardinality_cap());
        assert_eq!(rebuilt.kind(), spec.kind());
    }

    #[test]
    fn family_mb_file_round_trips() {
        let fam = small_verified_family_mb(&[0, 2]);
        let file = MatroidFile::from_family_mb(&fam);
        let parsed = MatroidFile::from_json(&file.to_json().unwrap()).unwrap();
        assert_eq!(parsed, file);
        let rebuilt = parsed.to_family_mb().unwrap();
        assert_eq!(rebuilt.marked(), fam.marked());
        assert_eq!(rebuilt.planted_sets(), fam.planted_sets());
        for s in [idx(12, &[0, 3, 7]), idx(12, &[1, 2, 3, 4, 5])] {
            assert_eq!(rebuilt.spec().rank(&s), fam.spec().rank(&s));
        }
    }

    #[test]
    fn unequal_caps_round_trip_via_caps_field() {
        let fam =
            ConstraintFamily::new(6, vec![idx(6, &[0, 1, 2]), idx(6, &[3, 4, 5])], vec![1, 2])
                .unwrap();
        let spec = MatroidSpec::partition(fam).unwrap();
        let file = MatroidFile::from_spec(&spec).unwrap();
        assert!(file.b.is_none());
        assert_eq!(file.caps, Some(vec![1, 2]));
        let rebuilt = MatroidFile::from_json(&file.to_json().unwrap())
            .unwrap()
            .to_spec()
            .unwrap();
        assert_eq!(rebuilt.constraints(), spec.constraints());
    }

    #[test]
    fn planted_defaults_use_base_two() {
        let p = planted_defaults(4096, 256, 2.0);
        assert_eq!(p.d, 16);
        assert_eq!(p.b, 64); // 8 log2 256
        assert_eq!(p.l, 1);
        assert!((p.eps - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn g_pair_formula(
            xs in prop::collection::vec(0usize..10, 1..6),
            ys in prop::collection::vec(0usize..10, 1..6),
            bi in 0i64..6,
            bj in 0i64..6,
        ) {
            let a = idx(10, &xs);
            let b = idx(10, &ys);
            let fam = ConstraintFamily::new(10, vec![a.clone(), b.clone()], vec![bi, bj]).unwrap();
            let expected = bi + bj - a.intersection_len(&b) as i64;
            prop_assert_eq!(g_value(&fam, &[0, 1]), expected);
        }

        #[test]
        fn greedy_equals_brute_on_random_truncated_specs(seed in 0u64..40) {
            use rand::Rng;
            let mut rng = crate::rng::stream(seed, crate::rng::Stream::Instance, 0);
            let n = 8usize;
            let k = rng.gen_range(1..4usize);
            let sets: Vec<ElementSet> = (0..k)
                .map(|_| {
                    let size = rng.gen_range(1..=4usize);
                    crate::dist::sample_fixed_size(n, size, &mut rng)
                })
                .collect();
            let caps: Vec<i64> = sets.iter().map(|s| rng.gen_range(1..=s.len() as i64)).collect();
            let fam = ConstraintFamily::new(n, sets, caps).unwrap();
            let d = rng.gen_range(1..=4i64);
            for tau in 2..=3usize {
                if let Ok(spec) = MatroidSpec::truncated(fam.clone(), d, tau) {
                    for s in all_subsets(n) {
                        prop_assert_eq!(spec.rank(&s), brute_rank(&spec, &s).unwrap());
                    }
                }
            }
        }
    }
}
