//! Device topology: coupling graph, hop-count distance matrix and the
//! bundled device registry.

use std::fmt;

use thiserror::Error;

use crate::formats::coupling::parse_coupling;

/// Index of a hardware qubit site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhysicalQubit(pub usize);

impl PhysicalQubit {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for PhysicalQubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DeviceError {
    #[error("device must have at least one qubit")]
    NoQubits,
    #[error("edge ({a}, {b}) out of range for a {num_qubits}-qubit device")]
    EdgeOutOfRange { a: usize, b: usize, num_qubits: usize },
    #[error("self-loop on qubit {0}")]
    SelfLoop(usize),
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit device")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("coupling graph is disconnected: qubit {unreachable} cannot be reached from qubit 0")]
    Disconnected { unreachable: usize },
    #[error("unknown device '{0}' (try ibm-q20-tokyo, ring4, grid3x3, line<N>)")]
    UnknownDevice(String),
}

/// Undirected coupling graph. Edges are stored normalized (`a < b`),
/// deduplicated and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingGraph {
    num_qubits: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    is_edge: Vec<bool>,
}

impl CouplingGraph {
    pub fn new(num_qubits: usize, edge_list: &[(usize, usize)]) -> Result<Self, DeviceError> {
        if num_qubits == 0 {
            return Err(DeviceError::NoQubits);
        }
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(a, b) in edge_list {
            if a >= num_qubits || b >= num_qubits {
                return Err(DeviceError::EdgeOutOfRange { a, b, num_qubits });
            }
            if a == b {
                return Err(DeviceError::SelfLoop(a));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        edges.dedup();

        let mut adjacency = vec![Vec::new(); num_qubits];
        let mut is_edge = vec![false; num_qubits * num_qubits];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
            is_edge[a * num_qubits + b] = true;
            is_edge[b * num_qubits + a] = true;
        }
        for list in adjacency.iter_mut() {
            list.sort_unstable();
        }
        Ok(CouplingGraph {
            num_qubits,
            edges,
            adjacency,
            is_edge,
        })
    }

    /// A path `0 - 1 - ... - (n-1)`.
    pub fn line(num_qubits: usize) -> Result<Self, DeviceError> {
        let edges: Vec<_> = (1..num_qubits).map(|i| (i - 1, i)).collect();
        Self::new(num_qubits, &edges)
    }

    /// A cycle `0 - 1 - ... - (n-1) - 0`.
    pub fn ring(num_qubits: usize) -> Result<Self, DeviceError> {
        let mut edges: Vec<_> = (1..num_qubits).map(|i| (i - 1, i)).collect();
        if num_qubits > 2 {
            edges.push((num_qubits - 1, 0));
        }
        Self::new(num_qubits, &edges)
    }

    /// Nearest-neighbor grid, row-major numbering.
    pub fn grid(rows: usize, cols: usize) -> Result<Self, DeviceError> {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let q = r * cols + c;
                if c + 1 < cols {
                    edges.push((q, q + 1));
                }
                if r + 1 < rows {
                    edges.push((q, q + cols));
                }
            }
        }
        Self::new(rows * cols, &edges)
    }

    pub fn complete(num_qubits: usize) -> Result<Self, DeviceError> {
        let mut edges = Vec::new();
        for a in 0..num_qubits {
            for b in a + 1..num_qubits {
                edges.push((a, b));
            }
        }
        Self::new(num_qubits, &edges)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbors of `q` in ascending order.
    pub fn neighbors(&self, q: PhysicalQubit) -> Result<&[usize], DeviceError> {
        self.adjacency
            .get(q.index())
            .map(Vec::as_slice)
            .ok_or(DeviceError::QubitOutOfRange {
                qubit: q.index(),
                num_qubits: self.num_qubits,
            })
    }

    /// Unchecked neighbor lookup for hot loops.
    #[inline]
    pub(crate) fn adjacent_to(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    #[inline]
    pub fn is_edge(&self, a: PhysicalQubit, b: PhysicalQubit) -> bool {
        self.is_edge[a.index() * self.num_qubits + b.index()]
    }

    pub fn degree(&self, q: PhysicalQubit) -> usize {
        self.adjacency[q.index()].len()
    }

    /// Breadth-first shortest path from `from` to `to`, both endpoints
    /// included. Ties resolve toward lower-numbered neighbors.
    pub fn shortest_path(&self, from: PhysicalQubit, to: PhysicalQubit) -> Option<Vec<PhysicalQubit>> {
        let n = self.num_qubits;
        let mut parent = vec![usize::MAX; n];
        parent[from.index()] = from.index();
        let mut queue = std::collections::VecDeque::from([from.index()]);
        while let Some(u) = queue.pop_front() {
            if u == to.index() {
                break;
            }
            for &v in &self.adjacency[u] {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[to.index()] == usize::MAX {
            return None;
        }
        let mut path = vec![PhysicalQubit(to.index())];
        let mut cur = to.index();
        while cur != from.index() {
            cur = parent[cur];
            path.push(PhysicalQubit(cur));
        }
        path.reverse();
        Some(path)
    }
}

/// Sentinel for unreachable pairs in a distance matrix of a disconnected graph.
pub const UNREACHABLE: u32 = u32::MAX;

/// All-pairs hop counts: `D[i][j]` is the number of SWAPs needed to move a
/// qubit from site `i` to site `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    size: usize,
    data: Vec<u32>,
}

impl DistanceMatrix {
    /// Floyd-Warshall over unit edge weights. Unreachable pairs hold
    /// [`UNREACHABLE`].
    pub fn floyd_warshall(graph: &CouplingGraph) -> Self {
        let n = graph.num_qubits();
        let mut data = vec![UNREACHABLE; n * n];
        for i in 0..n {
            data[i * n + i] = 0;
        }
        for &(a, b) in graph.edges() {
            data[a * n + b] = 1;
            data[b * n + a] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                let ik = data[i * n + k];
                if ik == UNREACHABLE {
                    continue;
                }
                for j in 0..n {
                    let kj = data[k * n + j];
                    if kj == UNREACHABLE {
                        continue;
                    }
                    let through = ik + kj;
                    if through < data[i * n + j] {
                        data[i * n + j] = through;
                    }
                }
            }
        }
        DistanceMatrix { size: n, data }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, a: PhysicalQubit, b: PhysicalQubit) -> u32 {
        self.data[a.index() * self.size + b.index()]
    }

    #[inline]
    pub(crate) fn raw(&self, a: usize, b: usize) -> u32 {
        self.data[a * self.size + b]
    }

    pub fn is_connected(&self) -> bool {
        !self.data.contains(&UNREACHABLE)
    }

    /// Largest finite entry.
    pub fn diameter(&self) -> u32 {
        self.data
            .iter()
            .copied()
            .filter(|&d| d != UNREACHABLE)
            .max()
            .unwrap_or(0)
    }

    pub fn row(&self, a: PhysicalQubit) -> &[u32] {
        &self.data[a.index() * self.size..(a.index() + 1) * self.size]
    }
}

/// A connected coupling graph with its precomputed distance matrix.
#[derive(Clone, Debug)]
pub struct Device {
    graph: CouplingGraph,
    distances: DistanceMatrix,
}

impl Device {
    pub fn new(graph: CouplingGraph) -> Result<Self, DeviceError> {
        let distances = DistanceMatrix::floyd_warshall(&graph);
        if let Some(pos) = distances.row(PhysicalQubit(0)).iter().position(|&d| d == UNREACHABLE) {
            return Err(DeviceError::Disconnected { unreachable: pos });
        }
        Ok(Device { graph, distances })
    }

    pub fn builtin(name: &str) -> Result<Self, DeviceError> {
        Device::new(builtin_device(name)?)
    }

    #[inline]
    pub fn graph(&self) -> &CouplingGraph {
        &self.graph
    }

    #[inline]
    pub fn distances(&self) -> &DistanceMatrix {
        &self.distances
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.graph.num_qubits()
    }

    pub fn diameter(&self) -> u32 {
        self.distances.diameter()
    }
}

const TOKYO: &str = include_str!("../data/ibm-q20-tokyo.txt");

/// Names accepted by [`builtin_device`]; `line<N>` stands for any `N >= 1`.
pub const BUILTIN_DEVICES: &[&str] = &["ibm-q20-tokyo", "ring4", "grid3x3", "line<N>"];

pub fn builtin_device(name: &str) -> Result<CouplingGraph, DeviceError> {
    match name {
        "ibm-q20-tokyo" => {
            Ok(parse_coupling(TOKYO).expect("bundled Tokyo coupling data is well-formed"))
        }
        // 0-1, 1-3, 3-2, 2-0: the 4-cycle with {0,3} and {1,2} uncoupled.
        "ring4" => CouplingGraph::new(4, &[(0, 1), (1, 3), (3, 2), (2, 0)]),
        "grid3x3" => CouplingGraph::grid(3, 3),
        _ => match name.strip_prefix("line").and_then(|n| n.parse::<usize>().ok()) {
            Some(n) if n >= 1 => CouplingGraph::line(n),
            _ => Err(DeviceError::UnknownDevice(name.to_string())),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bfs_distances(graph: &CouplingGraph) -> Vec<Vec<u32>> {
        let n = graph.num_qubits();
        (0..n)
            .map(|s| {
                let mut dist = vec![UNREACHABLE; n];
                dist[s] = 0;
                let mut queue = std::collections::VecDeque::from([s]);
                while let Some(u) = queue.pop_front() {
                    for &v in graph.neighbors(PhysicalQubit(u)).unwrap() {
                        if dist[v] == UNREACHABLE {
                            dist[v] = dist[u] + 1;
                            queue.push_back(v);
                        }
                    }
                }
                dist
            })
            .collect()
    }

    #[test]
    fn ring4_geometry() {
        let g = builtin_device("ring4").unwrap();
        assert!(!g.is_edge(PhysicalQubit(0), PhysicalQubit(3)));
        assert!(!g.is_edge(PhysicalQubit(1), PhysicalQubit(2)));
        let d = DistanceMatrix::floyd_warshall(&g);
        assert_eq!(d.get(PhysicalQubit(0), PhysicalQubit(3)), 2);
        for &(a, b) in g.edges() {
            assert_eq!(d.get(PhysicalQubit(a), PhysicalQubit(b)), 1);
        }
        assert_eq!(g.neighbors(PhysicalQubit(0)).unwrap(), &[1, 2]);
    }

    #[test]
    fn line_and_trivial() {
        let g = builtin_device("line5").unwrap();
        assert_eq!(g.edges().len(), 4);
        let d = DistanceMatrix::floyd_warshall(&g);
        assert_eq!(d.get(PhysicalQubit(0), PhysicalQubit(4)), 4);
        assert_eq!(d.diameter(), 4);

        let one = CouplingGraph::new(1, &[]).unwrap();
        let dev = Device::new(one).unwrap();
        assert_eq!(dev.diameter(), 0);
        assert!(dev.graph().neighbors(PhysicalQubit(0)).unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(
            CouplingGraph::new(4, &[(0, 5)]),
            Err(DeviceError::EdgeOutOfRange { a: 0, b: 5, num_qubits: 4 })
        );
        assert_eq!(CouplingGraph::new(4, &[(2, 2)]), Err(DeviceError::SelfLoop(2)));
        assert!(CouplingGraph::new(0, &[]).is_err());
        let g = CouplingGraph::new(3, &[(0, 1)]).unwrap();
        assert!(g.neighbors(PhysicalQubit(7)).is_err());
        assert!(g.neighbors(PhysicalQubit(2)).unwrap().is_empty());
        assert_eq!(
            Device::new(g).unwrap_err(),
            DeviceError::Disconnected { unreachable: 2 }
        );
    }

    #[test]
    fn duplicates_collapse() {
        let g = CouplingGraph::new(3, &[(0, 1), (1, 0), (0, 1), (2, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn grid3x3() {
        let g = builtin_device("grid3x3").unwrap();
        assert_eq!(g.num_qubits(), 9);
        assert_eq!(g.edges().len(), 12);
        assert_eq!(g.neighbors(PhysicalQubit(4)).unwrap(), &[1, 3, 5, 7]);
    }

    #[test]
    fn tokyo_facts() {
        let g = builtin_device("ibm-q20-tokyo").unwrap();
        assert_eq!(g.num_qubits(), 20);
        let n0 = g.neighbors(PhysicalQubit(0)).unwrap();
        assert!(n0.contains(&1) && n0.contains(&5));
        assert!(!n0.contains(&6));
        let dev = Device::new(g.clone()).unwrap();
        assert!(dev.distances().is_connected());
        for &(a, b) in g.edges() {
            assert!(g.is_edge(PhysicalQubit(b), PhysicalQubit(a)));
        }
    }

    #[test]
    fn unknown_names() {
        assert!(matches!(builtin_device("line0"), Err(DeviceError::UnknownDevice(_))));
        assert!(matches!(builtin_device("tokyo"), Err(DeviceError::UnknownDevice(_))));
        assert_eq!(builtin_device("line1").unwrap().num_qubits(), 1);
    }

    #[test]
    fn shortest_path_endpoints() {
        let g = builtin_device("line5").unwrap();
        let p = g.shortest_path(PhysicalQubit(4), PhysicalQubit(1)).unwrap();
        assert_eq!(p, vec![PhysicalQubit(4), PhysicalQubit(3), PhysicalQubit(2), PhysicalQubit(1)]);
    }

    /// Random connected graph: a random spanning tree plus extra edges.
    fn arb_connected_graph(max_n: usize) -> impl Strategy<Value = CouplingGraph> {
        (1..=max_n).prop_flat_map(|n| {
            let parents = proptest::collection::vec(any::<proptest::sample::Index>(), n - 1);
            let extra = proptest::collection::vec((0..n, 0..n), 0..2 * n);
            (parents, extra).prop_map(move |(parents, extra)| {
                let mut edges: Vec<(usize, usize)> = parents
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (i + 1, p.index(i + 1)))
                    .collect();
                edges.extend(extra.into_iter().filter(|(a, b)| a != b));
                CouplingGraph::new(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn floyd_warshall_matches_bfs(g in arb_connected_graph(50)) {
            let d = DistanceMatrix::floyd_warshall(&g);
            let bfs = bfs_distances(&g);
            for (i, row) in bfs.iter().enumerate() {
                prop_assert_eq!(d.row(PhysicalQubit(i)), row.as_slice());
            }
        }

        #[test]
        fn distance_invariants(g in arb_connected_graph(50)) {
            let d = DistanceMatrix::floyd_warshall(&g);
            prop_assert!(d.is_connected());
            let n = g.num_qubits();
            for i in 0..n {
                prop_assert_eq!(d.raw(i, i), 0);
                for j in 0..n {
                    prop_assert_eq!(d.raw(i, j), d.raw(j, i));
                    prop_assert_eq!(d.raw(i, j) == 1, g.is_edge(PhysicalQubit(i), PhysicalQubit(j)));
                    for k in 0..n {
                        prop_assert!(d.raw(i, k) <= d.raw(i, j) + d.raw(j, k));
                    }
                }
            }
        }
    }
}
