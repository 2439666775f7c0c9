//! Exact vertex coordinates for maximal tubings, the truncation halfspace
//! system, and the weight schemes driving both.
//!
//! Every maximal tubing U determines one vertex: a tube of U determines the
//! value of its unique node not covered by smaller tubes of U through
//! `sum over the tube = w(size)`, and the single node outside every tube is
//! fixed by the ambient equality `sum over all nodes = w(n)`. With integer
//! weights the triangular solve stays in integers; no floating point or
//! rationals appear here.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::graph::{Graph, NodeSet};
use crate::tubing::{enumerate_maximal_tubings, enumerate_tubes, Tube, Tubing, TubingError};

/// Truncation depth per tube size: `weights[k-1] = w(k)` for `1 <= k <= n`.
///
/// `w` must be non-negative and strictly increasing for sizes >= 2. The
/// built-in schemes:
///
/// * `power3`: w(1) = 0 and w(k) = 3^(k-2), which realizes the
///   graph associahedron of every graph;
/// * `loday`: w(k) = k(k+1)/2 = C(k+1, 2) uniformly (so w(1) = 1), which
///   reproduces the classical Loday coordinates on paths and complete
///   graphs but cuts too deep on general graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightScheme {
    name: String,
    weights: Vec<BigInt>,
}

#[derive(Debug, Error)]
pub enum WeightError {
    #[error("weight schemes require n >= 2 (got n = {0})")]
    TooFewSizes(usize),
    #[error("w({k}) = {value} is negative")]
    Negative { k: usize, value: BigInt },
    #[error("weights must be strictly increasing for sizes >= 2: w({k}) = {value} vs w({prev_k}) = {prev}")]
    NotIncreasing {
        k: usize,
        value: BigInt,
        prev_k: usize,
        prev: BigInt,
    },
    #[error("invalid weight list: {0}")]
    Parse(String),
}

impl WeightScheme {
    /// w(1) = 0, w(k) = 3^(k-2) for k >= 2.
    pub fn power3(n: usize) -> Result<Self, WeightError> {
        if n < 2 {
            return Err(WeightError::TooFewSizes(n));
        }
        let mut weights = vec![BigInt::zero()];
        for k in 2..=n {
            weights.push(BigInt::from(3).pow((k - 2) as u32));
        }
        Ok(WeightScheme {
            name: "power3".to_string(),
            weights,
        })
    }

    /// w(k) = k(k+1)/2 for every k, including w(1) = 1.
    pub fn loday(n: usize) -> Result<Self, WeightError> {
        if n < 2 {
            return Err(WeightError::TooFewSizes(n));
        }
        let weights = (1..=n)
            .map(|k| BigInt::from((k * (k + 1) / 2) as u64))
            .collect();
        Ok(WeightScheme {
            name: "loday".to_string(),
            weights,
        })
    }

    /// Validates and wraps an arbitrary weight list `w(1)..w(n)`.
    pub fn custom(name: impl Into<String>, weights: Vec<BigInt>) -> Result<Self, WeightError> {
        let n = weights.len();
        if n < 2 {
            return Err(WeightError::TooFewSizes(n));
        }
        for (i, w) in weights.iter().enumerate() {
            if w.is_negative() {
                return Err(WeightError::Negative {
                    k: i + 1,
                    value: w.clone(),
                });
            }
        }
        for k in 3..=n {
            if weights[k - 1] <= weights[k - 2] {
                return Err(WeightError::NotIncreasing {
                    k,
                    value: weights[k - 1].clone(),
                    prev_k: k - 1,
                    prev: weights[k - 2].clone(),
                });
            }
        }
        Ok(WeightScheme {
            name: name.into(),
            weights,
        })
    }

    /// Parses a custom scheme file: a JSON array of decimal-string
    /// integers `w(1)..w(n)`.
    pub fn from_json(name: impl Into<String>, text: &str) -> Result<Self, WeightError> {
        let raw: Vec<String> =
            serde_json::from_str(text).map_err(|e| WeightError::Parse(e.to_string()))?;
        let mut weights = Vec::with_capacity(raw.len());
        for (i, s) in raw.iter().enumerate() {
            let value: BigInt = s.parse().map_err(|_| {
                WeightError::Parse(format!("entry {i} is not a decimal integer: {s:?}"))
            })?;
            weights.push(value);
        }
        WeightScheme::custom(name, weights)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Largest tube size the scheme covers (the n it was built for).
    pub fn max_size(&self) -> usize {
        self.weights.len()
    }

    /// w(k) for `1 <= k <= max_size`.
    pub fn weight(&self, k: usize) -> &BigInt {
        &self.weights[k - 1]
    }

    /// The ambient total w(n).
    pub fn total(&self) -> &BigInt {
        self.weights.last().expect("schemes have n >= 2 weights")
    }
}

/// One row of the weight-condition report: whether `w(k) > 2 w(k-1)`.
#[derive(Clone, Debug)]
pub struct WeightCheck {
    pub k: usize,
    pub weight: BigInt,
    pub bound: BigInt,
    pub ok: bool,
}

/// Per-size results of the sufficient non-deep-cut condition
/// `w(k) > 2 w(k-1)` for `3 <= k <= n`.
///
/// A failing size only voids the sufficient condition; the geometric
/// verifier is the ground truth for whether a scheme actually works.
#[derive(Clone, Debug)]
pub struct WeightConditionReport {
    pub checks: Vec<WeightCheck>,
    pub pass: bool,
}

impl WeightConditionReport {
    pub fn first_failure(&self) -> Option<&WeightCheck> {
        self.checks.iter().find(|c| !c.ok)
    }
}

pub fn check_weight_condition(scheme: &WeightScheme) -> WeightConditionReport {
    let n = scheme.max_size();
    let mut checks = Vec::new();
    for k in 3..=n {
        let weight = scheme.weight(k).clone();
        let bound = scheme.weight(k - 1) * 2;
        let ok = weight > bound;
        checks.push(WeightCheck {
            k,
            weight,
            bound,
            ok,
        });
    }
    let pass = checks.iter().all(|c| c.ok);
    WeightConditionReport { checks, pass }
}

/// An exact coordinate vector in Z^n.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    coords: Vec<BigInt>,
}

impl Point {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Point { coords }
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Coordinates as decimal strings, the exact serialization format.
    pub fn decimal_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A maximal tubing together with its realized vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizedVertex {
    pub tubing: Tubing,
    pub point: Point,
}

/// One truncation inequality `sum of x_v over the support >= rhs`, tagged
/// with the tube it truncates. The support always equals the tube's nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub support: NodeSet,
    pub rhs: BigInt,
    pub tube: Tube,
}

/// The inequality description: the ambient equality `sum x_i = total` plus
/// one halfspace per tube, in canonical tube order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    pub n: usize,
    pub total: BigInt,
    pub halfspaces: Vec<HalfSpace>,
}

#[derive(Debug, Error)]
pub enum RealizeError {
    #[error("weight scheme covers sizes up to {scheme_n} but the graph has {graph_n} nodes")]
    SchemeSize { scheme_n: usize, graph_n: usize },
    #[error("realization requires a graph with at least two nodes")]
    TooSmall,
    #[error("tube {tube:?} has {count} undetermined nodes (expected exactly 1); the tubing is not a valid maximal tubing")]
    NonTriangular { tube: Tube, count: usize },
    #[error("{count} nodes lie outside every tube (expected exactly 1); the tubing is not a valid maximal tubing")]
    FreeNodes { count: usize },
}

impl From<TubingError> for RealizeError {
    fn from(_: TubingError) -> Self {
        RealizeError::TooSmall
    }
}

/// The smallest tube of `u` containing node `v`, or the virtual root (the
/// full node set) when no tube contains it. Well defined because tubes of
/// one tubing containing a common node form a chain.
#[derive(Debug, PartialEq, Eq)]
pub enum ContainingTube<'a> {
    Tube(&'a Tube),
    VirtualRoot,
}

pub fn smallest_containing_tube<'a>(u: &'a Tubing, v: usize) -> ContainingTube<'a> {
    // Tubes are sorted by size, so the first hit is the smallest.
    for t in u.tubes() {
        if t.nodes().contains(v) {
            return ContainingTube::Tube(t);
        }
    }
    ContainingTube::VirtualRoot
}

fn check_scheme_size(g: &Graph, scheme: &WeightScheme) -> Result<(), RealizeError> {
    if scheme.max_size() != g.node_count() {
        return Err(RealizeError::SchemeSize {
            scheme_n: scheme.max_size(),
            graph_n: g.node_count(),
        });
    }
    Ok(())
}

/// Solves the triangular system attached to a maximal tubing and returns
/// the exact vertex.
///
/// Tubes are processed in increasing size; each must have exactly one node
/// not already determined by its subtubes, and exactly one node must remain
/// outside every tube. Valid maximal tubings always satisfy both, so an
/// error indicates the input tubing is invalid.
pub fn compute_coordinates(
    g: &Graph,
    u: &Tubing,
    scheme: &WeightScheme,
) -> Result<Point, RealizeError> {
    check_scheme_size(g, scheme)?;
    let n = g.node_count();
    if n < 2 {
        return Err(RealizeError::TooSmall);
    }
    let mut coords = vec![BigInt::zero(); n];
    let mut determined = NodeSet::EMPTY;
    for tube in u.tubes() {
        let undetermined = tube.nodes().difference(determined);
        if undetermined.len() != 1 {
            return Err(RealizeError::NonTriangular {
                tube: *tube,
                count: undetermined.len(),
            });
        }
        let free = undetermined.min_element().expect("len is 1");
        let mut sum = BigInt::zero();
        for v in tube.nodes().intersection(determined).iter() {
            sum += &coords[v];
        }
        coords[free] = scheme.weight(tube.len()) - sum;
        determined.insert(free);
    }
    let outside = g.all_nodes().difference(determined);
    if outside.len() != 1 {
        return Err(RealizeError::FreeNodes {
            count: outside.len(),
        });
    }
    let free = outside.min_element().expect("len is 1");
    let mut sum = BigInt::zero();
    for v in determined.iter() {
        sum += &coords[v];
    }
    coords[free] = scheme.total() - sum;
    Ok(Point::new(coords))
}

/// Realizes every maximal tubing of `g` under `scheme`, in canonical
/// tubing order.
///
/// Under `power3` the map from tubings to points is injective; a duplicate
/// point under that scheme is a library bug and panics.
pub fn realize(g: &Graph, scheme: &WeightScheme) -> Result<Vec<RealizedVertex>, RealizeError> {
    check_scheme_size(g, scheme)?;
    let maximal = enumerate_maximal_tubings(g)?;
    let mut vertices = Vec::with_capacity(maximal.len());
    for tubing in maximal {
        let point = compute_coordinates(g, &tubing, scheme)?;
        vertices.push(RealizedVertex { tubing, point });
    }
    if scheme.name() == "power3" {
        let mut seen = std::collections::BTreeSet::new();
        for v in &vertices {
            assert!(
                seen.insert(v.point.clone()),
                "power3 realization produced a duplicate vertex {:?}",
                v.point
            );
        }
    }
    Ok(vertices)
}

/// Builds the halfspace description: the equality `sum x_i = w(n)` plus
/// `sum over tube >= w(size)` for every tube (so `x_i >= w(1)` for each
/// singleton).
pub fn build_hrep(g: &Graph, scheme: &WeightScheme) -> Result<HRep, RealizeError> {
    check_scheme_size(g, scheme)?;
    let n = g.node_count();
    if n < 2 {
        return Err(RealizeError::TooSmall);
    }
    let halfspaces = enumerate_tubes(g)
        .into_iter()
        .map(|tube| HalfSpace {
            support: tube.nodes(),
            rhs: scheme.weight(tube.len()).clone(),
            tube,
        })
        .collect();
    Ok(HRep {
        n,
        total: scheme.total().clone(),
        halfspaces,
    })
}

/// True iff `one` is the weight value 1; convenience for tests.
#[doc(hidden)]
pub fn bigint_is_one(one: &BigInt) -> bool {
    one.is_one()
}
