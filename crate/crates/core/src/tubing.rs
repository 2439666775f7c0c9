//! Tubes and tubings of a graph: enumeration, the pairwise compatibility
//! relation, maximal tubings, flip moves, and face counts.
//!
//! A tube is a nonempty proper node subset whose induced subgraph is
//! connected. Two distinct tubes are classified as nested, intersecting,
//! adjacent, or far; a tubing is a set of pairwise nested-or-far tubes.
//! Adjacency here means "disjoint with connected union", where the full
//! node set counts as a connected-union obstruction even though it is not
//! itself a tube. The weaker reading (union must itself be a proper tube)
//! would let a singleton coexist with its connected complement, and the
//! coordinate system of such a "tubing" is overdetermined: on the 2-node
//! edge graph it forces 0 + 0 = 1. For a disconnected graph a tubing may
//! not contain every component tube at once, which bounds all tubings by
//! n-1 tubes.

use std::cmp::Ordering;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{Graph, NodeSet};

/// A nonempty proper node subset inducing a connected subgraph.
///
/// Ordered canonically by (size, then members as an ascending list); all
/// enumeration output is sorted in this order.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Tube {
    nodes: NodeSet,
}

impl Tube {
    /// Wraps a node set without validating tube-ness; use
    /// [`is_tube`] / [`Tube::new`] when the input is untrusted.
    pub(crate) fn from_set(nodes: NodeSet) -> Self {
        Tube { nodes }
    }

    /// Validates `s` against `g` and wraps it.
    pub fn new(g: &Graph, s: NodeSet) -> Result<Self, TubingError> {
        if is_tube(g, s) {
            Ok(Tube { nodes: s })
        } else {
            Err(TubingError::NotATube(s))
        }
    }

    pub fn nodes(&self) -> NodeSet {
        self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.nodes.indices()
    }
}

impl Ord for Tube {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.nodes.cmp_lex(other.nodes))
    }
}

impl PartialOrd for Tube {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Tube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.nodes)
    }
}

impl Serialize for Tube {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for v in self.nodes.iter() {
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}

/// How two distinct tubes sit relative to each other. Exactly one variant
/// applies to any unordered pair.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PairClass {
    /// One tube contains the other.
    Nested,
    /// They overlap with no containment.
    Intersecting,
    /// Disjoint, and their union induces a connected subgraph.
    Adjacent,
    /// Disjoint with disconnected union.
    Far,
}

/// A set of pairwise compatible tubes, stored sorted in canonical tube
/// order. Serializes as an array of arrays of node indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tubing {
    tubes: Vec<Tube>,
}

impl Tubing {
    /// Sorts (and dedups) the given tubes into canonical order. Does not
    /// check compatibility; see [`is_valid_tubing`].
    pub fn new(mut tubes: Vec<Tube>) -> Self {
        tubes.sort_unstable();
        tubes.dedup();
        Tubing { tubes }
    }

    pub fn empty() -> Self {
        Tubing { tubes: Vec::new() }
    }

    pub fn tubes(&self) -> &[Tube] {
        &self.tubes
    }

    pub fn len(&self) -> usize {
        self.tubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tubes.is_empty()
    }

    pub fn contains(&self, tube: &Tube) -> bool {
        self.tubes.binary_search(tube).is_ok()
    }

    /// Number of tubes the two tubings share.
    pub fn shared_count(&self, other: &Tubing) -> usize {
        let mut i = 0;
        let mut j = 0;
        let mut shared = 0;
        while i < self.tubes.len() && j < other.tubes.len() {
            match self.tubes[i].cmp(&other.tubes[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    shared += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        shared
    }
}

impl fmt::Debug for Tubing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.tubes.iter()).finish()
    }
}

impl Serialize for Tubing {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.tubes.len()))?;
        for t in &self.tubes {
            seq.serialize_element(t)?;
        }
        seq.end()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum TubingError {
    #[error("the two tubes must be distinct")]
    EqualTubes,
    #[error("{0:?} is not a tube of this graph")]
    NotATube(NodeSet),
    #[error("tubing size k = {k} out of range for n = {n} (valid: 0..={max})")]
    SizeOutOfRange { k: usize, n: usize, max: usize },
    #[error("operation requires a graph with at least two nodes")]
    TooSmall,
    #[error("tubing is not a maximal tubing of this graph")]
    NotMaximal,
}

/// True iff `s` is nonempty, proper (|s| < n), and induces a connected
/// subgraph.
pub fn is_tube(g: &Graph, s: NodeSet) -> bool {
    !s.is_empty() && s.len() < g.node_count() && g.is_connected_subset(s)
}

/// All tubes of `g`, sorted canonically by (size, member list).
///
/// Scans all subset masks, so this is exponential in n; callers cap n.
pub fn enumerate_tubes(g: &Graph) -> Vec<Tube> {
    let n = g.node_count();
    let mut tubes = Vec::new();
    if n >= 2 {
        let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        for mask in 1..full {
            let s = NodeSet::from_indices((0..n).filter(|&v| mask >> v & 1 == 1));
            if g.is_connected_subset(s) {
                tubes.push(Tube::from_set(s));
            }
        }
    }
    tubes.sort_unstable();
    tubes
}

/// Classifies a pair of distinct tubes. Errors when `a == b`.
pub fn classify_pair(g: &Graph, a: &Tube, b: &Tube) -> Result<PairClass, TubingError> {
    if a.nodes == b.nodes {
        return Err(TubingError::EqualTubes);
    }
    Ok(classify_pair_distinct(g, a.nodes, b.nodes))
}

fn classify_pair_distinct(g: &Graph, a: NodeSet, b: NodeSet) -> PairClass {
    if a.is_subset_of(b) || b.is_subset_of(a) {
        PairClass::Nested
    } else if !a.is_disjoint(b) {
        PairClass::Intersecting
    } else if g.is_connected_subset(a.union(b)) {
        PairClass::Adjacent
    } else {
        PairClass::Far
    }
}

/// True iff the pair is nested or far.
pub fn are_compatible(g: &Graph, a: &Tube, b: &Tube) -> Result<bool, TubingError> {
    Ok(matches!(
        classify_pair(g, a, b)?,
        PairClass::Nested | PairClass::Far
    ))
}

/// Checks that the given tubes (as a set; duplicates collapse) form a valid
/// tubing: pairwise compatible, and, when the graph is disconnected with k
/// components, not containing all k component tubes. Errors if any element
/// is not a tube.
pub fn is_valid_tubing(g: &Graph, tubes: &[Tube]) -> Result<bool, TubingError> {
    for t in tubes {
        if !is_tube(g, t.nodes) {
            return Err(TubingError::NotATube(t.nodes));
        }
    }
    let mut sorted: Vec<Tube> = tubes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            let class = classify_pair_distinct(g, sorted[i].nodes, sorted[j].nodes);
            if !matches!(class, PairClass::Nested | PairClass::Far) {
                return Ok(false);
            }
        }
    }
    let components = g.components();
    if components.len() >= 2 {
        let all_present = components
            .iter()
            .all(|&c| sorted.iter().any(|t| t.nodes == c));
        if all_present {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Precomputed tube list plus pairwise compatibility bit rows, shared by
/// the enumeration routines.
struct TubeSystem {
    tubes: Vec<Tube>,
    words: usize,
    compat: Vec<Vec<u64>>,
    /// Indices of the component tubes, present only when the graph has two
    /// or more components.
    component_tubes: Vec<usize>,
}

impl TubeSystem {
    fn build(g: &Graph) -> Self {
        let tubes = enumerate_tubes(g);
        let m = tubes.len();
        let words = m.div_ceil(64);
        let mut compat = vec![vec![0u64; words]; m];
        for i in 0..m {
            for j in i + 1..m {
                let class = classify_pair_distinct(g, tubes[i].nodes, tubes[j].nodes);
                if matches!(class, PairClass::Nested | PairClass::Far) {
                    compat[i][j / 64] |= 1u64 << (j % 64);
                    compat[j][i / 64] |= 1u64 << (i % 64);
                }
            }
        }
        let components = g.components();
        let component_tubes = if components.len() >= 2 {
            components
                .iter()
                .map(|&c| {
                    tubes
                        .iter()
                        .position(|t| t.nodes == c)
                        .expect("each component of a disconnected graph is a tube")
                })
                .collect()
        } else {
            Vec::new()
        };
        TubeSystem {
            tubes,
            words,
            compat,
            component_tubes,
        }
    }

    fn is_component_tube(&self, idx: usize) -> bool {
        self.component_tubes.contains(&idx)
    }

    fn tubing_from_indices(&self, chosen: &[usize]) -> Tubing {
        // Indices ascend in canonical tube order, so no re-sort is needed.
        Tubing {
            tubes: chosen.iter().map(|&i| self.tubes[i]).collect(),
        }
    }
}

/// Backtracking walk over all valid tubings, visiting chosen tube-index
/// prefixes in lexicographic DFS order. With `target = Some(k)` only
/// tubings of exactly k tubes are visited.
fn for_each_tubing<F: FnMut(&[usize])>(sys: &TubeSystem, target: Option<usize>, visit: &mut F) {
    let mut search = TubingSearch {
        sys,
        target,
        comp_total: sys.component_tubes.len(),
        chosen: Vec::new(),
        allowed_stack: vec![root_allowed_row(sys)],
        visit,
    };
    search.descend(0, 0);
}

/// All-ones candidate row with bits beyond the tube count masked off.
fn root_allowed_row(sys: &TubeSystem) -> Vec<u64> {
    let mut row = vec![u64::MAX; sys.words];
    let last_bits = sys.tubes.len() % 64;
    if sys.words > 0 && last_bits != 0 {
        row[sys.words - 1] = (1u64 << last_bits) - 1;
    }
    row
}

struct TubingSearch<'a, F> {
    sys: &'a TubeSystem,
    target: Option<usize>,
    comp_total: usize,
    chosen: Vec<usize>,
    allowed_stack: Vec<Vec<u64>>,
    visit: &'a mut F,
}

impl<F: FnMut(&[usize])> TubingSearch<'_, F> {
    fn remaining_from(&self, from: usize) -> usize {
        let allowed = self.allowed_stack.last().expect("stack is never empty");
        let start_word = from / 64;
        let mut count = 0usize;
        for (w, &bits) in allowed.iter().enumerate().skip(start_word) {
            let mut bits = bits;
            if w == start_word {
                bits &= !0u64 << (from % 64);
            }
            count += bits.count_ones() as usize;
        }
        count
    }

    fn descend(&mut self, from: usize, comp_chosen: usize) {
        match self.target {
            Some(k) if self.chosen.len() == k => {
                (self.visit)(&self.chosen);
                return;
            }
            Some(k) => {
                let needed = k - self.chosen.len();
                if self.remaining_from(from) < needed {
                    return;
                }
            }
            None => (self.visit)(&self.chosen),
        }
        for idx in from..self.sys.tubes.len() {
            let allowed = self.allowed_stack.last().expect("stack is never empty");
            if allowed[idx / 64] >> (idx % 64) & 1 == 0 {
                continue;
            }
            let is_comp = self.comp_total >= 2 && self.sys.is_component_tube(idx);
            if is_comp && comp_chosen + 1 == self.comp_total {
                // Adding the last missing component tube is forbidden, and
                // no extension can repair it.
                continue;
            }
            let next_allowed: Vec<u64> = allowed
                .iter()
                .zip(&self.sys.compat[idx])
                .map(|(a, c)| a & c)
                .collect();
            self.allowed_stack.push(next_allowed);
            self.chosen.push(idx);
            self.descend(idx + 1, comp_chosen + usize::from(is_comp));
            self.chosen.pop();
            self.allowed_stack.pop();
        }
    }
}

/// All valid tubings of `g`, restricted to exactly `k` tubes when `k` is
/// given. Output order is deterministic: lexicographic in the canonical
/// tube order, with each tubing preceding its extensions when `k` is None.
pub fn enumerate_tubings(g: &Graph, k: Option<usize>) -> Result<Vec<Tubing>, TubingError> {
    let n = g.node_count();
    let max = n.saturating_sub(1);
    if let Some(k) = k {
        if k > max {
            return Err(TubingError::SizeOutOfRange { k, n, max });
        }
    }
    let sys = TubeSystem::build(g);
    let mut out = Vec::new();
    for_each_tubing(&sys, k, &mut |chosen| {
        out.push(sys.tubing_from_indices(chosen));
    });
    Ok(out)
}

/// The maximal tubings M_G: all (n-1)-tubings, in enumeration order. Each
/// returned tubing is additionally verified to admit no compatible
/// extension. Errors when n < 2.
pub fn enumerate_maximal_tubings(g: &Graph) -> Result<Vec<Tubing>, TubingError> {
    let n = g.node_count();
    if n < 2 {
        return Err(TubingError::TooSmall);
    }
    let sys = TubeSystem::build(g);
    let mut out = Vec::new();
    for_each_tubing(&sys, Some(n - 1), &mut |chosen| {
        let mut extendable = root_allowed_row(&sys);
        for &idx in chosen {
            for (w, c) in extendable.iter_mut().zip(&sys.compat[idx]) {
                *w &= c;
            }
        }
        for &idx in chosen {
            extendable[idx / 64] &= !(1u64 << (idx % 64));
        }
        // A candidate extension compatible with every chosen tube may still
        // be blocked by the disconnected-graph restriction.
        let comp_total = sys.component_tubes.len();
        if comp_total >= 2 {
            let comp_chosen = chosen.iter().filter(|&&i| sys.is_component_tube(i)).count();
            if comp_chosen + 1 == comp_total {
                for &ci in &sys.component_tubes {
                    if !chosen.contains(&ci) {
                        extendable[ci / 64] &= !(1u64 << (ci % 64));
                    }
                }
            }
        }
        assert!(
            extendable.iter().all(|&w| w == 0),
            "an (n-1)-tubing admitted a compatible extension; tubing bound violated"
        );
        out.push(sys.tubing_from_indices(chosen));
    });
    Ok(out)
}

/// All maximal tubings sharing exactly n-2 tubes with `u`: the flip
/// neighbors, i.e. the vertices adjacent to `u` across an edge of the
/// polytope. The polytope is simple, so there are exactly n-1 of them.
pub fn flip_neighbors(g: &Graph, u: &Tubing) -> Result<Vec<Tubing>, TubingError> {
    let n = g.node_count();
    if n < 2 {
        return Err(TubingError::TooSmall);
    }
    if u.len() != n - 1 || !is_valid_tubing(g, u.tubes())? {
        return Err(TubingError::NotMaximal);
    }
    let all = enumerate_maximal_tubings(g)?;
    if !all.contains(u) {
        return Err(TubingError::NotMaximal);
    }
    Ok(all
        .into_iter()
        .filter(|other| other.shared_count(u) == n - 2)
        .collect())
}

/// Face counts by tubing size: `[#1-tubings, .., #(n-1)-tubings]`, i.e.
/// facet count first, vertex count last. Empty for n = 1.
pub fn f_vector(g: &Graph) -> Vec<u64> {
    let n = g.node_count();
    if n < 2 {
        return Vec::new();
    }
    let sys = TubeSystem::build(g);
    let mut counts = vec![0u64; n];
    for_each_tubing(&sys, None, &mut |chosen| {
        counts[chosen.len()] += 1;
    });
    counts.drain(..1);
    counts
}
