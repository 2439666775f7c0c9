//! Labeled simple graphs with bitmask node sets, plus the family generators
//! and connectivity queries everything else is built on.
//!
//! Node identity is positional: node `i` is the `i`-th node of the input
//! order, and every output refers to nodes by index. Coordinates of the
//! realized polytope depend on this order, so parsing never reorders nodes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap imposed by the 64-bit subset masks.
pub const MAX_NODES: usize = 64;

/// A subset of `[0, n)` stored as a bit mask.
///
/// All set operations are O(1) word operations. The derived `Ord` is the
/// numeric mask order, which is arbitrary; tube enumeration uses its own
/// canonical order (see [`crate::tubing::Tube`]).
#[derive(Copy, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeSet(u64);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn singleton(v: usize) -> Self {
        debug_assert!(v < MAX_NODES);
        NodeSet(1u64 << v)
    }

    /// The full set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_NODES);
        if n == MAX_NODES {
            NodeSet(u64::MAX)
        } else {
            NodeSet((1u64 << n) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut s = NodeSet::EMPTY;
        for v in indices {
            s.insert(v);
        }
        s
    }

    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < MAX_NODES);
        self.0 |= 1u64 << v;
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_NODES && self.0 >> v & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & other.0)
    }

    /// Elements of `self` not in `other`.
    pub fn difference(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: NodeSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn min_element(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Ascending iterator over the member indices.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(v)
            }
        })
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Compares two same-size sets as ascending index lists.
    ///
    /// The list with the smaller element at the first position where the
    /// lists differ comes first; equivalently, the set owning the lowest
    /// bit of the symmetric difference is the smaller one.
    pub fn cmp_lex(self, other: NodeSet) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        let diff = self.0 ^ other.0;
        let low = diff & diff.wrapping_neg();
        if self.0 & low != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        NodeSet::from_indices(iter)
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid graph JSON: {0}")]
    Json(String),
    #[error("node count must be between 1 and {MAX_NODES} (got {0})")]
    NodeCount(usize),
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("edge endpoint {endpoint} out of range for n = {n}")]
    EndpointOutOfRange { endpoint: usize, n: usize },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("names list has {got} entries but n = {n}")]
    NamesLength { got: usize, n: usize },
    #[error("unsupported family: {kind} with n = {n}")]
    UnsupportedFamily { kind: Family, n: usize },
    #[error("unknown family kind '{0}' (expected path|cycle|complete|star|empty)")]
    UnknownFamily(String),
}

/// The graph families used throughout as worked examples.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Path,
    Cycle,
    Complete,
    Star,
    Empty,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Complete => "complete",
            Family::Star => "star",
            Family::Empty => "empty",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, GraphError> {
        match s {
            "path" => Ok(Family::Path),
            "cycle" => Ok(Family::Cycle),
            "complete" => Ok(Family::Complete),
            "star" => Ok(Family::Star),
            "empty" => Ok(Family::Empty),
            other => Err(GraphError::UnknownFamily(other.to_string())),
        }
    }
}

/// A labeled simple graph. Immutable after construction; all queries are
/// pure, so a `Graph` may be shared freely across threads.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    names: Option<Vec<String>>,
    adj: Vec<NodeSet>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    n: u64,
    edges: Vec<(u64, u64)>,
    #[serde(default)]
    names: Option<Vec<String>>,
}

#[derive(Serialize)]
struct GraphJson<'a> {
    n: usize,
    edges: &'a [(usize, usize)],
    #[serde(skip_serializing_if = "Option::is_none")]
    names: Option<&'a [String]>,
}

impl Graph {
    /// Builds a validated graph. Edges may arrive in any order and either
    /// endpoint order; they are normalized to `(min, max)` and sorted.
    /// Duplicate edges are rejected rather than collapsed so that a graph
    /// file and the graph it denotes stay in bijection.
    pub fn new(
        n: usize,
        edges: &[(usize, usize)],
        names: Option<Vec<String>>,
    ) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_NODES {
            return Err(GraphError::NodeCount(n));
        }
        if let Some(ref names) = names {
            if names.len() != n {
                return Err(GraphError::NamesLength {
                    got: names.len(),
                    n,
                });
            }
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n {
                return Err(GraphError::EndpointOutOfRange { endpoint: a, n });
            }
            if b >= n {
                return Err(GraphError::EndpointOutOfRange { endpoint: b, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        for w in normalized.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let mut adj = vec![NodeSet::EMPTY; n];
        for &(a, b) in &normalized {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        Ok(Graph {
            n,
            edges: normalized,
            names,
            adj,
        })
    }

    /// Parses the graph JSON format: an object with required `n` and
    /// `edges`, optional `names`. No other fields are accepted.
    pub fn parse_json(text: &str) -> Result<Self, GraphError> {
        let raw: RawGraph =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        let n = usize::try_from(raw.n).map_err(|_| GraphError::NodeCount(usize::MAX))?;
        if n == 0 || n > MAX_NODES {
            return Err(GraphError::NodeCount(n));
        }
        let mut edges = Vec::with_capacity(raw.edges.len());
        for &(a, b) in &raw.edges {
            let a = usize::try_from(a).unwrap_or(usize::MAX);
            let b = usize::try_from(b).unwrap_or(usize::MAX);
            edges.push((a, b));
        }
        Graph::new(n, &edges, raw.names)
    }

    /// Canonical single-line JSON: `{"n":..,"edges":[[a,b],..]}` with edges
    /// sorted, plus `names` when present. Parsing this output and
    /// re-serializing reproduces it byte for byte.
    pub fn to_canonical_json(&self) -> String {
        let doc = GraphJson {
            n: self.n,
            edges: &self.edges,
            names: self.names.as_deref(),
        };
        serde_json::to_string(&doc).expect("graph serialization cannot fail")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::from_str(&self.to_canonical_json()).expect("canonical JSON is valid")
    }

    pub fn family(kind: Family, n: usize) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_NODES {
            return Err(GraphError::UnsupportedFamily { kind, n });
        }
        let edges: Vec<(usize, usize)> = match kind {
            Family::Path => (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
            Family::Cycle => {
                if n < 3 {
                    return Err(GraphError::UnsupportedFamily { kind, n });
                }
                let mut e: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
                e.push((n - 1, 0));
                e
            }
            Family::Complete => {
                let mut e = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        e.push((i, j));
                    }
                }
                e
            }
            Family::Star => (1..n).map(|i| (0, i)).collect(),
            Family::Empty => Vec::new(),
        };
        Graph::new(n, &edges, None)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Neighbor set of `v`.
    pub fn neighbors(&self, v: usize) -> NodeSet {
        self.adj[v]
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::full(self.n)
    }

    /// True iff `s` is nonempty and the subgraph induced on `s` is
    /// connected. The empty set is not connected by convention.
    pub fn is_connected_subset(&self, s: NodeSet) -> bool {
        debug_assert!(s.is_subset_of(self.all_nodes()));
        let Some(start) = s.min_element() else {
            return false;
        };
        let mut reach = NodeSet::singleton(start);
        let mut frontier = reach;
        while !frontier.is_empty() {
            let mut next = NodeSet::EMPTY;
            for v in frontier.iter() {
                next = next.union(self.adj[v].intersection(s));
            }
            frontier = next.difference(reach);
            reach = reach.union(next);
        }
        reach == s
    }

    /// Maximal connected node sets, sorted by least element. They partition
    /// `[0, n)`.
    pub fn components(&self) -> Vec<NodeSet> {
        let mut remaining = self.all_nodes();
        let mut out = Vec::new();
        while let Some(start) = remaining.min_element() {
            let mut reach = NodeSet::singleton(start);
            let mut frontier = reach;
            while !frontier.is_empty() {
                let mut next = NodeSet::EMPTY;
                for v in frontier.iter() {
                    next = next.union(self.adj[v]);
                }
                frontier = next.difference(reach);
                reach = reach.union(next);
            }
            out.push(reach);
            remaining = remaining.difference(reach);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Relabels node `i` as `perm[i]`. `perm` must be a permutation of
    /// `0..n`; used by the equivariance checks.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| (perm[a], perm[b]))
            .collect();
        let names = self.names.as_ref().map(|names| {
            let mut out = vec![String::new(); self.n];
            for (i, name) in names.iter().enumerate() {
                out[perm[i]] = name.clone();
            }
            out
        });
        Graph::new(self.n, &edges, names).expect("permuting a valid graph stays valid")
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

/// The `C(n,2)` unordered node pairs in lexicographic order; bit `i` of a
/// graph mask refers to `edge_pairs(n)[i]`.
pub fn edge_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    pairs
}

/// All `2^C(n,2)` labeled graphs on `n` nodes, in increasing edge-mask
/// order. Intended for exhaustive sweeps at desk scale (n <= 6 or so).
pub fn enumerate_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = edge_pairs(n);
    assert!(
        pairs.len() < 63,
        "graph enumeration is limited to n <= 11 (edge mask must fit in u64)"
    );
    let count: u64 = 1u64 << pairs.len();
    (0..count).map(move |mask| {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        Graph::new(n, &edges, None).expect("enumerated graphs are valid")
    })
}
