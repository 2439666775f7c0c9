//! Exact-rational certification that the realized vertex set and the
//! truncation halfspace system describe the same simple polytope, with the
//! face structure the tubings promise.
//!
//! All comparisons are exact: rationals for the affine solves, big integers
//! with fraction-free elimination for ranks. There are no epsilons anywhere
//! in this module.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{Graph, NodeSet};
use crate::realize::{
    build_hrep, realize, HRep, Point, RealizeError, RealizedVertex, WeightScheme,
};
use crate::tubing::{enumerate_tubings, f_vector, Tube};

pub type Rat = BigRational;

/// Exact rational view of an integer point.
pub fn point_rationals(p: &Point) -> Vec<Rat> {
    p.coords()
        .iter()
        .map(|c| Rat::from_integer(c.clone()))
        .collect()
}

/// Outcome of solving a system of affine equations in n variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineSolution {
    Unique(Vec<Rat>),
    Underdetermined,
    Inconsistent,
}

/// Exact Gauss-Jordan elimination over the rationals for 0/1-support
/// equations `sum of x_v over the support = rhs`.
pub fn solve_affine(equations: &[(NodeSet, BigInt)], n: usize) -> AffineSolution {
    let mut rows: Vec<Vec<Rat>> = equations
        .iter()
        .map(|(support, rhs)| {
            let mut row = vec![Rat::zero(); n + 1];
            for v in support.iter() {
                row[v] = Rat::one();
            }
            row[n] = Rat::from_integer(rhs.clone());
            row
        })
        .collect();

    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut next_row = 0;
    for col in 0..n {
        let Some(r) = (next_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next_row, r);
        let pivot_row = rows[next_row].clone();
        let pivot = &pivot_row[col];
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next_row || row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / pivot;
            for (cell, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                let delta = &factor * p;
                *cell = &*cell - delta;
            }
        }
        pivots.push((next_row, col));
        next_row += 1;
        if next_row == rows.len() {
            break;
        }
    }
    for row in rows.iter().skip(next_row) {
        if !row[n].is_zero() {
            return AffineSolution::Inconsistent;
        }
    }
    if pivots.len() < n {
        return AffineSolution::Underdetermined;
    }
    let mut x = vec![Rat::zero(); n];
    for &(r, c) in &pivots {
        x[c] = &rows[r][n] / &rows[r][c];
    }
    AffineSolution::Unique(x)
}

/// The constraint a point violates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolatedConstraint {
    Equality,
    Tube(Tube),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("point violates constraint {constraint:?}")]
pub struct InfeasiblePoint {
    pub constraint: ViolatedConstraint,
}

/// The tubes whose halfspaces hold with equality at `p`. Errors if `p`
/// violates the ambient equality or any halfspace; a violation at a
/// realized vertex signals a realization bug, not a property of `p`.
pub fn tight_set(h: &HRep, p: &[Rat]) -> Result<Vec<Tube>, InfeasiblePoint> {
    assert_eq!(
        p.len(),
        h.n,
        "point dimension must match the halfspace system"
    );
    let total: Rat = p.iter().sum();
    if total != Rat::from_integer(h.total.clone()) {
        return Err(InfeasiblePoint {
            constraint: ViolatedConstraint::Equality,
        });
    }
    let mut tight = Vec::new();
    for hs in &h.halfspaces {
        let sum: Rat = hs.support.iter().map(|v| p[v].clone()).sum();
        let rhs = Rat::from_integer(hs.rhs.clone());
        if sum < rhs {
            return Err(InfeasiblePoint {
                constraint: ViolatedConstraint::Tube(hs.tube),
            });
        }
        if sum == rhs {
            tight.push(hs.tube);
        }
    }
    Ok(tight)
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination,
/// bounding intermediate entry growth.
fn bigint_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let Some(cols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(r) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, r);
        let (pivot_row, rest) = rows.split_at_mut(rank + 1);
        let pivot_row = &pivot_row[rank];
        let pivot = pivot_row[col].clone();
        for row in rest {
            let lead = row[col].clone();
            for c in col..cols {
                row[c] = (&pivot * &row[c] - &lead * &pivot_row[c]) / &prev;
            }
        }
        prev = pivot;
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Affine rank of a set of integer points: the number of affinely
/// independent points, i.e. rank of the homogenized matrix `[p | 1]`.
fn affine_rank(points: &[&Point]) -> usize {
    let rows: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| {
            let mut row: Vec<BigInt> = p.coords().to_vec();
            row.push(BigInt::one());
            row
        })
        .collect();
    bigint_rank(rows)
}

/// Result of one verification check.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub passed: bool,
    pub witness: Option<Value>,
}

impl CheckOutcome {
    fn pass() -> Self {
        CheckOutcome {
            passed: true,
            witness: None,
        }
    }

    fn fail(witness: Value) -> Self {
        CheckOutcome {
            passed: false,
            witness: Some(witness),
        }
    }

    fn record(&mut self, witness: impl FnOnce() -> Value) {
        if self.passed {
            *self = CheckOutcome::fail(witness());
        }
    }
}

/// Per-vertex checks against the halfspace system.
#[derive(Clone, Debug)]
pub struct VertexChecks {
    /// Every point satisfies the equality and every halfspace.
    pub feasibility: CheckOutcome,
    /// The tight set at each point is exactly its tubing.
    pub tight_sets: CheckOutcome,
    /// Exactly n-1 tight halfspaces whose supports, with the all-ones
    /// equality row, have full rank n.
    pub simplicity: CheckOutcome,
}

impl VertexChecks {
    pub fn all_passed(&self) -> bool {
        self.feasibility.passed && self.tight_sets.passed && self.simplicity.passed
    }
}

fn vertex_witness(v: &RealizedVertex, extra: Value) -> Value {
    let mut w = json!({
        "tubing": v.tubing,
        "point": v.point.decimal_strings(),
    });
    if let (Value::Object(map), Value::Object(extra)) = (&mut w, extra) {
        map.extend(extra);
    }
    w
}

pub fn verify_vertices_against_hrep(vertices: &[RealizedVertex], h: &HRep) -> VertexChecks {
    let n = h.n;
    let mut checks = VertexChecks {
        feasibility: CheckOutcome::pass(),
        tight_sets: CheckOutcome::pass(),
        simplicity: CheckOutcome::pass(),
    };
    for v in vertices {
        let rats = point_rationals(&v.point);
        let tight = match tight_set(h, &rats) {
            Ok(t) => t,
            Err(err) => {
                checks.feasibility.record(|| {
                    vertex_witness(v, json!({ "violated": format!("{:?}", err.constraint) }))
                });
                continue;
            }
        };
        if tight != v.tubing.tubes() {
            checks.tight_sets.record(|| {
                vertex_witness(
                    v,
                    json!({ "tight": tight.iter().map(|t| t.indices()).collect::<Vec<_>>() }),
                )
            });
        }
        if tight.len() != n - 1 {
            checks.simplicity.record(|| {
                vertex_witness(v, json!({ "tight_count": tight.len(), "expected": n - 1 }))
            });
        } else {
            let mut rows: Vec<Vec<BigInt>> = tight
                .iter()
                .map(|t| {
                    (0..n)
                        .map(|i| BigInt::from(u8::from(t.nodes().contains(i))))
                        .collect()
                })
                .collect();
            rows.push(vec![BigInt::one(); n]);
            let rank = bigint_rank(rows);
            if rank != n {
                checks
                    .simplicity
                    .record(|| vertex_witness(v, json!({ "tight_rank": rank, "expected": n })));
            }
        }
    }
    checks
}

/// Certifies that every halfspace is facet-defining: its tight vertex set
/// is nonempty with affine rank n-1, a (n-2)-dimensional face.
pub fn verify_facets(vertices: &[RealizedVertex], h: &HRep) -> CheckOutcome {
    let mut outcome = CheckOutcome::pass();
    for hs in &h.halfspaces {
        let tight: Vec<&Point> = vertices
            .iter()
            .filter(|v| {
                let sum: BigInt = hs.support.iter().map(|i| v.point.coords()[i].clone()).sum();
                sum == hs.rhs
            })
            .map(|v| &v.point)
            .collect();
        let rank = affine_rank(&tight);
        if tight.is_empty() || rank != h.n - 1 {
            outcome.record(|| {
                json!({
                    "tube": hs.tube.indices(),
                    "tight_vertices": tight.len(),
                    "affine_rank": rank,
                    "expected_rank": h.n - 1,
                })
            });
        }
    }
    outcome
}

#[derive(Debug, Error)]
#[error("{candidates} candidate basic systems exceed the oracle cap of {cap}")]
pub struct CapExceeded {
    pub candidates: BigInt,
    pub cap: u64,
}

/// Independent brute-force vertex enumeration of the halfspace system.
///
/// Every (n-1)-subset of halfspaces is turned into equalities, solved
/// together with the ambient equality, and kept when the solution is
/// unique and satisfies every halfspace. The result is the exact vertex
/// set of the H-polytope, deduplicated as reduced rational tuples.
///
/// Candidate systems are solved across the current rayon pool; the merge
/// is a set union, so the result does not depend on scheduling.
pub fn enumerate_hrep_vertices_bruteforce(
    h: &HRep,
    cap: u64,
) -> Result<BTreeSet<Vec<Rat>>, CapExceeded> {
    use rayon::prelude::*;

    let m = h.halfspaces.len();
    let k = h.n - 1;
    let candidates = binomial(BigInt::from(m), BigInt::from(k));
    if candidates > BigInt::from(cap) {
        return Err(CapExceeded { candidates, cap });
    }
    let rhs_rats: Vec<Rat> = h
        .halfspaces
        .iter()
        .map(|hs| Rat::from_integer(hs.rhs.clone()))
        .collect();
    let full = NodeSet::full(h.n);
    let solve_combo = |combo: &[usize]| -> Option<Vec<Rat>> {
        let mut equations: Vec<(NodeSet, BigInt)> = Vec::with_capacity(k + 1);
        equations.push((full, h.total.clone()));
        for &i in combo {
            equations.push((h.halfspaces[i].support, h.halfspaces[i].rhs.clone()));
        }
        let AffineSolution::Unique(x) = solve_affine(&equations, h.n) else {
            return None;
        };
        let feasible = h.halfspaces.iter().zip(&rhs_rats).all(|(hs, rhs)| {
            let sum: Rat = hs.support.iter().map(|v| x[v].clone()).sum();
            sum >= *rhs
        });
        feasible.then_some(x)
    };
    let vertices = (0..m)
        .combinations(k)
        .par_bridge()
        .fold(BTreeSet::new, |mut acc: BTreeSet<Vec<Rat>>, combo| {
            if let Some(x) = solve_combo(&combo) {
                acc.insert(x);
            }
            acc
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    Ok(vertices)
}

/// Checks that combinatorial and geometric faces agree: for every tubing T
/// with at most `kmax` tubes, the vertices whose tubings contain T are
/// exactly the vertices tight on all of T's halfspaces, and there is at
/// least one such vertex.
pub fn verify_face_lattice(
    g: &Graph,
    vertices: &[RealizedVertex],
    h: &HRep,
    kmax: usize,
) -> CheckOutcome {
    let m = h.halfspaces.len();
    let words = m.div_ceil(64);
    let tube_index = |tube: &Tube| -> usize {
        h.halfspaces
            .binary_search_by(|hs| hs.tube.cmp(tube))
            .expect("every tube has a halfspace")
    };

    // Per-vertex bit rows over tube indices: tubes in the tubing, and tubes
    // whose halfspace is tight at the vertex.
    let mut member_masks = Vec::with_capacity(vertices.len());
    let mut tight_masks = Vec::with_capacity(vertices.len());
    for v in vertices {
        let mut member = vec![0u64; words];
        for t in v.tubing.tubes() {
            let i = tube_index(t);
            member[i / 64] |= 1 << (i % 64);
        }
        member_masks.push(member);
        let mut tight = vec![0u64; words];
        for (i, hs) in h.halfspaces.iter().enumerate() {
            let sum: BigInt = hs
                .support
                .iter()
                .map(|v2| v.point.coords()[v2].clone())
                .sum();
            if sum == hs.rhs {
                tight[i / 64] |= 1 << (i % 64);
            }
        }
        tight_masks.push(tight);
    }

    let covers = |mask: &[u64], sub: &[u64]| mask.iter().zip(sub).all(|(m, s)| m & s == *s);

    let mut outcome = CheckOutcome::pass();
    let tubings = enumerate_tubings(g, None).expect("tubing enumeration cannot fail here");
    for t in &tubings {
        if t.len() > kmax {
            continue;
        }
        let mut sub = vec![0u64; words];
        for tube in t.tubes() {
            let i = tube_index(tube);
            sub[i / 64] |= 1 << (i % 64);
        }
        let mut combinatorial = Vec::new();
        let mut geometric = Vec::new();
        for i in 0..vertices.len() {
            if covers(&member_masks[i], &sub) {
                combinatorial.push(i);
            }
            if covers(&tight_masks[i], &sub) {
                geometric.push(i);
            }
        }
        if combinatorial.is_empty() || combinatorial != geometric {
            outcome.record(|| {
                json!({
                    "tubing": t,
                    "vertices_by_tubing": combinatorial.len(),
                    "vertices_by_tightness": geometric.len(),
                })
            });
        }
    }
    outcome
}

/// Euler relation on the face counts `f = [#1-tubings, .., #(n-1)-tubings]`:
/// with f_j the number of j-dimensional faces, the alternating sum over
/// proper faces must equal `1 - (-1)^(n-1)`.
pub fn euler_check(f: &[u64]) -> bool {
    let n = f.len() + 1;
    if n < 2 {
        return false;
    }
    let mut sum: i128 = 0;
    for j in 0..=n - 2 {
        let count = f[n - 2 - j] as i128;
        if j % 2 == 0 {
            sum += count;
        } else {
            sum -= count;
        }
    }
    let rhs: i128 = if (n - 1).is_multiple_of(2) { 0 } else { 2 };
    sum == rhs
}

/// Caps for the exponential parts of verification.
#[derive(Clone, Copy, Debug)]
pub struct VerifyCaps {
    /// Maximum number of candidate basic systems the brute-force oracle may
    /// solve; beyond it the oracle check is reported as skipped.
    pub oracle_cap: u64,
}

impl Default for VerifyCaps {
    fn default() -> Self {
        VerifyCaps {
            oracle_cap: 10_000_000,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: CheckStatus,
    pub witness: Option<Value>,
}

impl CheckResult {
    fn from_outcome(name: &'static str, outcome: CheckOutcome) -> Self {
        CheckResult {
            name,
            status: if outcome.passed {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            witness: outcome.witness,
        }
    }
}

/// Aggregated verification results for one graph and scheme.
///
/// The verdict is pass iff every executed check passed; skipped checks are
/// reported as skipped, never as passed.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub graph: Value,
    pub scheme: String,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    /// True when some check was skipped (cap exceeded).
    pub fn incomplete(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Skipped)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.status == CheckStatus::Fail)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut entry = json!({
                    "name": c.name,
                    "status": c.status.as_str(),
                });
                if let Some(w) = &c.witness {
                    entry["witness"] = w.clone();
                }
                entry
            })
            .collect();
        json!({
            "graph": self.graph,
            "scheme": self.scheme,
            "checks": checks,
            "verdict": if self.passed() { "pass" } else { "fail" },
        })
    }
}

/// Runs the full certification pipeline for one graph and scheme:
/// realization, halfspace feasibility and tight-set correspondence,
/// simplicity, facet ranks, the brute-force vertex oracle (when under the
/// cap), the face-lattice correspondence, and the Euler relation.
pub fn full_report(
    g: &Graph,
    scheme: &WeightScheme,
    caps: &VerifyCaps,
) -> Result<VerificationReport, RealizeError> {
    let n = g.node_count();
    if n < 2 {
        return Err(RealizeError::TooSmall);
    }
    let vertices = realize(g, scheme)?;
    let h = build_hrep(g, scheme)?;

    let vertex_checks = verify_vertices_against_hrep(&vertices, &h);
    let facet = verify_facets(&vertices, &h);

    let oracle = match enumerate_hrep_vertices_bruteforce(&h, caps.oracle_cap) {
        Ok(hull_vertices) => {
            let realized: BTreeSet<Vec<Rat>> =
                vertices.iter().map(|v| point_rationals(&v.point)).collect();
            if realized == hull_vertices {
                CheckResult::from_outcome("oracle_vertices", CheckOutcome::pass())
            } else {
                let fmt_point =
                    |p: &Vec<Rat>| -> Vec<String> { p.iter().map(|c| c.to_string()).collect() };
                let missing: Vec<_> = hull_vertices
                    .difference(&realized)
                    .take(1)
                    .map(fmt_point)
                    .collect();
                let extra: Vec<_> = realized
                    .difference(&hull_vertices)
                    .take(1)
                    .map(fmt_point)
                    .collect();
                CheckResult::from_outcome(
                    "oracle_vertices",
                    CheckOutcome::fail(json!({
                        "realized": realized.len(),
                        "hull": hull_vertices.len(),
                        "hull_vertex_not_realized": missing,
                        "realized_point_not_vertex": extra,
                    })),
                )
            }
        }
        Err(cap) => CheckResult {
            name: "oracle_vertices",
            status: CheckStatus::Skipped,
            witness: Some(json!({
                "candidates": cap.candidates.to_string(),
                "cap": cap.cap,
            })),
        },
    };

    let lattice = verify_face_lattice(g, &vertices, &h, n - 1);
    let fv = f_vector(g);
    let euler = if euler_check(&fv) {
        CheckOutcome::pass()
    } else {
        CheckOutcome::fail(json!({ "f_vector": fv }))
    };

    let checks = vec![
        CheckResult::from_outcome("feasibility", vertex_checks.feasibility),
        CheckResult::from_outcome("tight_sets", vertex_checks.tight_sets),
        CheckResult::from_outcome("simplicity", vertex_checks.simplicity),
        CheckResult::from_outcome("facet_rank", facet),
        oracle,
        CheckResult::from_outcome("face_lattice", lattice),
        CheckResult::from_outcome("euler", euler),
    ];

    Ok(VerificationReport {
        graph: g.to_json_value(),
        scheme: scheme.name().to_string(),
        checks,
    })
}
