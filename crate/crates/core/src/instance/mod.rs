//! Problem instances: a weighted undirected graph (usually a tree), a set of
//! unit-window service requests, and a fixed travel speed.

mod format;
mod generate;

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratio::Ratio;

pub use format::{parse_instance, serialize_instance};
pub use generate::{generate_feasible_opt1_instance, generate_random_instance};

pub type NodeId = usize;

/// Position of a request in the instance's canonical (id-sorted) order.
pub type ReqIdx = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    Tree,
    General,
}

impl MetricKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::Tree => "tree",
            MetricKind::General => "general",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: Ratio,
}

/// Half-open time interval `[start, end)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Window {
    pub start: Ratio,
    pub end: Ratio,
}

impl Window {
    pub fn new(start: Ratio, end: Ratio) -> Self {
        Window { start, end }
    }

    pub fn contains(&self, t: &Ratio) -> bool {
        &self.start <= t && t < &self.end
    }

    pub fn is_subset_of(&self, other: &Window) -> bool {
        other.start <= self.start && self.end <= other.end
    }

    pub fn length(&self) -> Ratio {
        &self.end - &self.start
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {})",
            crate::ratio::format_ratio(&self.start),
            crate::ratio::format_ratio(&self.end)
        )
    }
}

/// A service request. Its window is always `[release, release + 1)`; the
/// deadline is derived, never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Request {
    pub id: String,
    pub node: NodeId,
    pub release: Ratio,
    pub profit: Ratio,
}

impl Request {
    pub fn deadline(&self) -> Ratio {
        &self.release + Ratio::one()
    }

    pub fn window(&self) -> Window {
        Window::new(self.release.clone(), self.deadline())
    }
}

/// All-pairs travel times, already divided by the instance speed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceOracle {
    table: Vec<Vec<Ratio>>,
}

impl DistanceOracle {
    fn build(adjacency: &[Vec<(NodeId, Ratio)>]) -> Self {
        let table = (0..adjacency.len())
            .map(|source| dijkstra(adjacency, source))
            .collect();
        DistanceOracle { table }
    }

    pub fn get(&self, u: NodeId, v: NodeId) -> &Ratio {
        &self.table[u][v]
    }

    pub fn node_count(&self) -> usize {
        self.table.len()
    }
}

fn dijkstra(adjacency: &[Vec<(NodeId, Ratio)>], source: NodeId) -> Vec<Ratio> {
    let mut dist: Vec<Option<Ratio>> = vec![None; adjacency.len()];
    let mut done = vec![false; adjacency.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(Ratio::zero());
    heap.push(Reverse((Ratio::zero(), source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for (v, w) in &adjacency[u] {
            let candidate = &d + w;
            if dist[*v].as_ref().is_none_or(|old| candidate < *old) {
                dist[*v] = Some(candidate.clone());
                heap.push(Reverse((candidate, *v)));
            }
        }
    }
    // Callers only build oracles for connected graphs.
    dist.into_iter()
        .map(|d| d.expect("graph is connected"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    name: String,
    metric: MetricKind,
    node_count: usize,
    speed: Ratio,
    edges: Vec<Edge>,
    requests: Vec<Request>,
    adjacency: Vec<Vec<(NodeId, Ratio)>>,
    oracle: DistanceOracle,
}

impl Instance {
    /// Validates and canonicalizes an instance: edges are stored with `u < v`
    /// sorted by endpoints, requests are sorted by id.
    pub fn new(
        name: impl Into<String>,
        metric: MetricKind,
        node_count: usize,
        mut edges: Vec<Edge>,
        mut requests: Vec<Request>,
        speed: Ratio,
    ) -> Result<Self> {
        let name = name.into();
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(Error::Validation(format!(
                "instance name {name:?} must be a single non-empty token"
            )));
        }
        if node_count == 0 {
            return Err(Error::Validation("node count must be positive".into()));
        }
        if !speed.is_positive() {
            return Err(Error::Validation("speed must be positive".into()));
        }
        if metric == MetricKind::Tree && edges.len() != node_count - 1 {
            return Err(Error::Validation(format!(
                "not a tree: {} edges for {} nodes",
                edges.len(),
                node_count
            )));
        }
        for edge in &mut edges {
            if edge.u >= node_count || edge.v >= node_count {
                return Err(Error::Validation(format!(
                    "edge {}-{} references a node outside 0..{}",
                    edge.u, edge.v, node_count
                )));
            }
            if edge.u == edge.v {
                return Err(Error::Validation(format!("self-loop at node {}", edge.u)));
            }
            if !edge.weight.is_positive() {
                return Err(Error::Validation(format!(
                    "edge {}-{} has nonpositive weight",
                    edge.u, edge.v
                )));
            }
            if edge.u > edge.v {
                std::mem::swap(&mut edge.u, &mut edge.v);
            }
        }
        edges.sort_by(|a, b| (a.u, a.v, &a.weight).cmp(&(b.u, b.v, &b.weight)));

        let mut adjacency = vec![Vec::new(); node_count];
        for edge in &edges {
            let travel = &edge.weight / &speed;
            adjacency[edge.u].push((edge.v, travel.clone()));
            adjacency[edge.v].push((edge.u, travel));
        }
        if !is_connected(&adjacency) {
            let message = match metric {
                MetricKind::Tree => "not a tree: graph is disconnected",
                MetricKind::General => "graph is disconnected",
            };
            return Err(Error::Validation(message.into()));
        }

        let mut seen = BTreeSet::new();
        for request in &requests {
            if request.id.is_empty() || request.id.chars().any(char::is_whitespace) {
                return Err(Error::Validation(format!(
                    "request id {:?} must be a single non-empty token",
                    request.id
                )));
            }
            if !seen.insert(request.id.as_str()) {
                return Err(Error::Validation(format!(
                    "duplicate request id {}",
                    request.id
                )));
            }
            if request.node >= node_count {
                return Err(Error::Validation(format!(
                    "request {} is located at unknown node {}",
                    request.id, request.node
                )));
            }
            if request.release.is_negative() {
                return Err(Error::Validation(format!(
                    "request {} has a negative release time",
                    request.id
                )));
            }
            if !request.profit.is_positive() {
                return Err(Error::Validation(format!(
                    "request {} has nonpositive profit",
                    request.id
                )));
            }
        }
        requests.sort_by(|a, b| a.id.cmp(&b.id));

        let oracle = DistanceOracle::build(&adjacency);
        Ok(Instance {
            name,
            metric,
            node_count,
            speed,
            edges,
            requests,
            adjacency,
            oracle,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    pub fn is_tree(&self) -> bool {
        self.metric == MetricKind::Tree
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn speed(&self) -> &Ratio {
        &self.speed
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn requests(&self) -> &[Request] {
        &self.requests
    }

    pub fn request(&self, idx: ReqIdx) -> &Request {
        &self.requests[idx]
    }

    pub fn request_index(&self, id: &str) -> Option<ReqIdx> {
        self.requests
            .binary_search_by(|r| r.id.as_str().cmp(id))
            .ok()
    }

    pub fn all_requests(&self) -> BTreeSet<ReqIdx> {
        (0..self.requests.len()).collect()
    }

    pub fn total_profit(&self) -> Ratio {
        self.requests.iter().map(|r| r.profit.clone()).sum()
    }

    /// Neighbours with speed-normalized edge travel times.
    pub fn neighbors(&self, u: NodeId) -> &[(NodeId, Ratio)] {
        &self.adjacency[u]
    }

    pub fn distances(&self) -> &DistanceOracle {
        &self.oracle
    }

    /// Exact shortest-path travel time between two nodes.
    pub fn distance(&self, u: NodeId, v: NodeId) -> Result<Ratio> {
        for node in [u, v] {
            if node >= self.node_count {
                return Err(Error::UnknownNode(node));
            }
        }
        Ok(self.oracle.get(u, v).clone())
    }

    /// Unchecked lookup for solver inner loops.
    pub(crate) fn travel(&self, u: NodeId, v: NodeId) -> &Ratio {
        self.oracle.get(u, v)
    }
}

fn is_connected(adjacency: &[Vec<(NodeId, Ratio)>]) -> bool {
    let mut seen = vec![false; adjacency.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for (v, _) in &adjacency[u] {
            if !seen[*v] {
                seen[*v] = true;
                stack.push(*v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{frac, int};

    fn edge(u: NodeId, v: NodeId, w: Ratio) -> Edge {
        Edge { u, v, weight: w }
    }

    fn request(id: &str, node: NodeId, release: Ratio) -> Request {
        Request {
            id: id.into(),
            node,
            release,
            profit: int(1),
        }
    }

    fn path3(speed: Ratio) -> Instance {
        Instance::new(
            "path",
            MetricKind::Tree,
            3,
            vec![edge(1, 0, int(2)), edge(1, 2, int(3))],
            vec![],
            speed,
        )
        .unwrap()
    }

    #[test]
    fn path_distances_sum_edge_weights() {
        let inst = path3(int(1));
        assert_eq!(inst.distance(0, 2).unwrap(), int(5));
        assert_eq!(inst.distance(2, 0).unwrap(), int(5));
        assert_eq!(inst.distance(1, 1).unwrap(), int(0));
        assert_eq!(inst.edges()[0], edge(0, 1, int(2)));
    }

    #[test]
    fn speed_scales_travel_time() {
        let inst = path3(int(2));
        assert_eq!(inst.distance(0, 1).unwrap(), int(1));
        assert_eq!(inst.distance(0, 2).unwrap(), frac(5, 2));
    }

    #[test]
    fn unknown_node_is_an_error() {
        let inst = path3(int(1));
        assert_eq!(inst.distance(0, 3), Err(Error::UnknownNode(3)));
    }

    #[test]
    fn general_metric_takes_shortest_paths() {
        let inst = Instance::new(
            "tri",
            MetricKind::General,
            3,
            vec![edge(0, 1, int(1)), edge(1, 2, int(1)), edge(0, 2, int(5))],
            vec![],
            int(1),
        )
        .unwrap();
        assert_eq!(inst.distance(0, 2).unwrap(), int(2));
    }

    #[test]
    fn rejects_invalid_graphs() {
        let cycle = Instance::new(
            "c",
            MetricKind::Tree,
            3,
            vec![edge(0, 1, int(1)), edge(0, 1, int(1))],
            vec![],
            int(1),
        );
        assert!(matches!(cycle, Err(Error::Validation(m)) if m.contains("not a tree")));
        let disconnected = Instance::new(
            "d",
            MetricKind::General,
            3,
            vec![edge(0, 1, int(1))],
            vec![],
            int(1),
        );
        assert!(matches!(disconnected, Err(Error::Validation(m)) if m.contains("disconnected")));
        let zero = Instance::new(
            "z",
            MetricKind::Tree,
            2,
            vec![edge(0, 1, int(0))],
            vec![],
            int(1),
        );
        assert!(matches!(zero, Err(Error::Validation(m)) if m.contains("nonpositive")));
    }

    #[test]
    fn rejects_invalid_requests() {
        let dup = Instance::new(
            "r",
            MetricKind::Tree,
            1,
            vec![],
            vec![request("a", 0, int(1)), request("a", 0, int(2))],
            int(1),
        );
        assert!(matches!(dup, Err(Error::Validation(m)) if m.contains("duplicate")));
        let bad_node = Instance::new(
            "r",
            MetricKind::Tree,
            1,
            vec![],
            vec![request("a", 4, int(1))],
            int(1),
        );
        assert!(bad_node.is_err());
    }

    #[test]
    fn requests_are_sorted_by_id() {
        let inst = Instance::new(
            "r",
            MetricKind::Tree,
            1,
            vec![],
            vec![request("b", 0, int(1)), request("a", 0, int(2))],
            int(1),
        )
        .unwrap();
        assert_eq!(inst.request(0).id, "a");
        assert_eq!(inst.request_index("b"), Some(1));
        assert_eq!(inst.request_index("zz"), None);
        assert_eq!(inst.request(1).window(), Window::new(int(1), int(2)));
    }
}
