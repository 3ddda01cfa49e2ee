//! Evaluatable set functions over a ground set `{0, .., n-1}`.

use crate::error::Error;
use crate::matroid::MatroidSpec;
use crate::set::ElementSet;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// The kind tag of a [`SetFunction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionKind {
    Coverage,
    Cut,
    CardinalityProfile,
    Tabulated,
    MatroidRank,
}

/// A set function `f : 2^[n] -> R`, evaluatable on any [`ElementSet`] over
/// its ground size.
///
/// Evaluation is pure: the same set always yields the same bits. Integer
/// valued kinds additionally expose an exact integer path via
/// [`SetFunction::eval_int`], which the matroid machinery relies on.
#[derive(Debug, Clone)]
pub struct SetFunction {
    n: usize,
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Coverage {
        universe: usize,
        subsets: Vec<ElementSet>,
        weights: Option<Vec<f64>>,
    },
    Cut {
        edges: Vec<(usize, usize)>,
    },
    CardinalityProfile {
        values: Vec<f64>,
    },
    Tabulated {
        values: Arc<Vec<f64>>,
    },
    MatroidRank {
        spec: Arc<MatroidSpec>,
    },
}

impl SetFunction {
    /// Coverage function `f(I) = w(∪_{i∈I} S_i)` for subsets of a universe
    /// `[m]`. Unit weights when `weights` is omitted.
    pub fn coverage(
        universe: usize,
        subsets: Vec<ElementSet>,
        weights: Option<Vec<f64>>,
    ) -> Result<Self> {
        for s in &subsets {
            if s.ground_size() != universe {
                return Err(Error::ElementOutOfRange {
                    element: s.ground_size(),
                    universe,
                });
            }
        }
        if let Some(w) = &weights {
            if w.len() != universe {
                return Err(Error::LengthMismatch {
                    expected: universe,
                    got: w.len(),
                });
            }
            for (i, &wi) in w.iter().enumerate() {
                if !wi.is_finite() {
                    return Err(Error::NonFiniteValue { index: i });
                }
                if wi < 0.0 {
                    return Err(Error::NegativeWeight { index: i });
                }
            }
        }
        Ok(SetFunction {
            n: subsets.len(),
            kind: Kind::Coverage {
                universe,
                subsets,
                weights,
            },
        })
    }

    /// Cut function `f(U) = |δ(U)|` of a graph on `[n]`.
    pub fn cut(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(a, b) in &edges {
            if a == b {
                return Err(Error::SelfLoop { v: a });
            }
            for v in [a, b] {
                if v >= n {
                    return Err(Error::ElementOutOfRange {
                        element: v,
                        universe: n,
                    });
                }
            }
        }
        Ok(SetFunction {
            n,
            kind: Kind::Cut { edges },
        })
    }

    /// `f(S) = h[|S|]` for a profile `h` of length `n + 1`.
    pub fn cardinality_profile(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::LengthMismatch {
                expected: 1,
                got: 0,
            });
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue { index: i });
            }
        }
        Ok(SetFunction {
            n: values.len() - 1,
            kind: Kind::CardinalityProfile { values },
        })
    }

    /// A tabulated function over `2^n` values in binary-counter order
    /// (element 0 is the least significant bit of the index).
    pub fn tabulated(n: usize, values: Vec<f64>) -> Result<Self> {
        if n > 24 {
            return Err(Error::ExhaustiveLimit { n, limit: 24 });
        }
        if values.len() != 1 << n {
            return Err(Error::LengthMismatch {
                expected: 1 << n,
                got: values.len(),
            });
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue { index: i });
            }
        }
        Ok(SetFunction {
            n,
            kind: Kind::Tabulated {
                values: Arc::new(values),
            },
        })
    }

    /// The rank function of a matroid specification.
    pub fn matroid_rank(spec: Arc<MatroidSpec>) -> Self {
        SetFunction {
            n: spec.ground_size(),
            kind: Kind::MatroidRank { spec },
        }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> FunctionKind {
        match self.kind {
            Kind::Coverage { .. } => FunctionKind::Coverage,
            Kind::Cut { .. } => FunctionKind::Cut,
            Kind::CardinalityProfile { .. } => FunctionKind::CardinalityProfile,
            Kind::Tabulated { .. } => FunctionKind::Tabulated,
            Kind::MatroidRank { .. } => FunctionKind::MatroidRank,
        }
    }

    /// The matroid behind a rank function, when there is one.
    pub fn matroid_spec(&self) -> Option<&MatroidSpec> {
        match &self.kind {
            Kind::MatroidRank { spec } => Some(spec),
            _ => None,
        }
    }

    pub fn eval(&self, s: &ElementSet) -> f64 {
        assert_eq!(s.ground_size(), self.n, "set over wrong ground size");
        match &self.kind {
            Kind::Coverage {
                universe,
                subsets,
                weights,
            } => {
                let mut covered = ElementSet::empty(*universe);
                for i in s.iter() {
                    covered.union_with(&subsets[i]);
                }
                match weights {
                    None => covered.len() as f64,
                    Some(w) => covered.iter().map(|u| w[u]).sum(),
                }
            }
            Kind::Cut { edges } => edges
                .iter()
                .filter(|&&(a, b)| s.contains(a) != s.contains(b))
                .count() as f64,
            Kind::CardinalityProfile { values } => values[s.len()],
            Kind::Tabulated { values } => values[s.mask() as usize],
            Kind::MatroidRank { spec } => spec.rank(s) as f64,
        }
    }

    /// Exact integer value for integer-valued kinds; `None` for kinds that
    /// may take fractional values (weighted coverage, profiles, tabulated).
    pub fn eval_int(&self, s: &ElementSet) -> Option<i64> {
        match &self.kind {
            Kind::Coverage { weights: None, .. } | Kind::Cut { .. } => Some(self.eval(s) as i64),
            Kind::MatroidRank { spec } => Some(spec.rank(s) as i64),
            _ => None,
        }
    }
}

/// Serialized form of a tabulated function: `2^n` values in binary-counter
/// order, element 0 at the least significant bit of the index.
#[derive(Debug, Serialize, Deserialize)]
pub struct TabulatedFile {
    pub n: usize,
    pub values: Vec<f64>,
}

impl TabulatedFile {
    pub fn from_function(f: &SetFunction) -> Self {
        let n = f.ground_size();
        assert!(n < 64);
        let values = (0u64..1 << n)
            .map(|mask| f.eval(&ElementSet::from_mask(n, mask)))
            .collect();
        TabulatedFile { n, values }
    }

    pub fn to_function(&self) -> Result<SetFunction> {
        SetFunction::tabulated(self.n, self.values.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
