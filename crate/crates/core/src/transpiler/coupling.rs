use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Line,
    Ring,
    HeavyHexLike,
    AllToAll,
    Custom,
}

#[derive(Serialize, Deserialize)]
struct RawMap {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    topology: Option<Topology>,
}

/// Undirected, connected qubit connectivity graph.
///
/// JSON form: `{"n": 27, "edges": [[0,1],[1,2],…]}` with an optional
/// `"topology"` tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMap", into = "RawMap")]
pub struct CouplingMap {
    num_qubits: usize,
    edges: BTreeSet<(usize, usize)>,
    topology: Topology,
    adjacency: Vec<Vec<usize>>,
}

impl TryFrom<RawMap> for CouplingMap {
    type Error = Error;

    fn try_from(raw: RawMap) -> Result<Self> {
        CouplingMap::from_edges(
            raw.n,
            raw.edges.iter().map(|e| (e[0], e[1])),
            raw.topology.unwrap_or(Topology::Custom),
        )
    }
}

impl From<CouplingMap> for RawMap {
    fn from(m: CouplingMap) -> Self {
        RawMap {
            n: m.num_qubits,
            edges: m.edges.iter().map(|&(a, b)| [a, b]).collect(),
            topology: Some(m.topology),
        }
    }
}

impl CouplingMap {
    pub fn from_edges(
        num_qubits: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        topology: Topology,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= num_qubits || b >= num_qubits {
                return Err(Error::InvalidCouplingMap(format!(
                    "edge ({a},{b}) references a qubit outside 0..{num_qubits}"
                )));
            }
            if a == b {
                return Err(Error::InvalidCouplingMap(format!("self-loop on qubit {a}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let mut adjacency = vec![Vec::new(); num_qubits];
        for &(a, b) in &set {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let map = CouplingMap {
            num_qubits,
            edges: set,
            topology,
            adjacency,
        };
        if num_qubits == 0 {
            return Err(Error::InvalidCouplingMap("map has no qubits".into()));
        }
        if map.bfs_parents(0).iter().any(Option::is_none) {
            return Err(Error::InvalidCouplingMap("graph is not connected".into()));
        }
        Ok(map)
    }

    pub fn line(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i)), Topology::Line).expect("line is connected")
    }

    pub fn ring(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n > 2 {
            edges.push((n - 1, 0));
        }
        Self::from_edges(n, edges, Topology::Ring).expect("ring is connected")
    }

    pub fn all_to_all(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        Self::from_edges(n, edges, Topology::AllToAll).expect("complete graph is connected")
    }

    /// Sparse degree-≤3 graph: a line with a chord from every qubit
    /// `i ≡ 0 (mod 6)` to `i + 11`, closing 12-qubit rings in the manner of
    /// heavy-hex lattices.
    pub fn heavy_hex_like(n: usize) -> Self {
        let line = (1..n).map(|i| (i - 1, i));
        let chords = (0..n).step_by(6).filter(|&i| i + 11 < n).map(|i| (i, i + 11));
        Self::from_edges(n, line.chain(chords), Topology::HeavyHexLike).expect("heavy-hex-like map is connected")
    }

    /// 27-qubit heavy-hex device layout.
    pub fn heavy_hex_27() -> Self {
        const EDGES: [(usize, usize); 28] = [
            (0, 1),
            (1, 2),
            (1, 4),
            (2, 3),
            (3, 5),
            (4, 7),
            (5, 8),
            (6, 7),
            (7, 10),
            (8, 9),
            (8, 11),
            (10, 12),
            (11, 14),
            (12, 13),
            (12, 15),
            (13, 14),
            (14, 16),
            (15, 18),
            (16, 19),
            (17, 18),
            (18, 21),
            (19, 20),
            (19, 22),
            (21, 23),
            (22, 25),
            (23, 24),
            (24, 25),
            (25, 26),
        ];
        Self::from_edges(27, EDGES, Topology::HeavyHexLike).expect("valid device map")
    }

    /// 16-qubit heavy-hex device layout.
    pub fn heavy_hex_16() -> Self {
        const EDGES: [(usize, usize); 16] = [
            (0, 1),
            (1, 2),
            (1, 4),
            (2, 3),
            (3, 5),
            (4, 7),
            (5, 8),
            (6, 7),
            (7, 10),
            (8, 9),
            (8, 11),
            (10, 12),
            (11, 14),
            (12, 13),
            (12, 15),
            (13, 14),
        ];
        Self::from_edges(16, EDGES, Topology::HeavyHexLike).expect("valid device map")
    }

    /// 7-qubit H-shaped device layout.
    pub fn heavy_hex_7() -> Self {
        const EDGES: [(usize, usize); 6] = [(0, 1), (1, 2), (1, 3), (3, 5), (4, 5), (5, 6)];
        Self::from_edges(7, EDGES, Topology::HeavyHexLike).expect("valid device map")
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    fn bfs_parents(&self, from: usize) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.num_qubits];
        parent[from] = Some(from);
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if parent[v].is_none() {
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        parent
    }

    /// Shortest path `from → to` inclusive of both ends. Neighbors are visited
    /// in ascending order, so the path is deterministic.
    pub fn shortest_path(&self, from: usize, to: usize) -> Vec<usize> {
        let parent = self.bfs_parents(from);
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = parent[cur].expect("connected map");
            path.push(cur);
        }
        path.reverse();
        path
    }

    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.shortest_path(a, b).len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors() {
        assert_eq!(CouplingMap::line(5).edges().count(), 4);
        assert_eq!(CouplingMap::ring(5).edges().count(), 5);
        assert_eq!(CouplingMap::all_to_all(5).edges().count(), 10);
        assert_eq!(CouplingMap::line(1).edges().count(), 0);
        for n in [2, 7, 12, 13, 27, 40] {
            let m = CouplingMap::heavy_hex_like(n);
            assert!(m.max_degree() <= 3, "n={n}");
        }
        for m in [
            CouplingMap::heavy_hex_27(),
            CouplingMap::heavy_hex_16(),
            CouplingMap::heavy_hex_7(),
        ] {
            assert!(m.max_degree() <= 3);
        }
    }

    #[test]
    fn rejects_bad_maps() {
        assert!(CouplingMap::from_edges(3, [(0, 3)], Topology::Custom).is_err());
        assert!(CouplingMap::from_edges(3, [(1, 1)], Topology::Custom).is_err());
        assert!(CouplingMap::from_edges(4, [(0, 1), (2, 3)], Topology::Custom).is_err());
        assert!(CouplingMap::from_edges(0, [], Topology::Custom).is_err());
    }

    #[test]
    fn paths_and_distances() {
        let m = CouplingMap::line(5);
        assert_eq!(m.shortest_path(0, 3), vec![0, 1, 2, 3]);
        assert_eq!(m.distance(4, 1), 3);
        let r = CouplingMap::ring(6);
        assert_eq!(r.distance(0, 5), 1);
        assert_eq!(r.distance(0, 3), 3);
    }

    #[test]
    fn json_form() {
        let m: CouplingMap = serde_json::from_str(r#"{"n": 3, "edges": [[0,1],[2,1]]}"#).unwrap();
        assert_eq!(m.topology(), Topology::Custom);
        assert!(m.is_adjacent(1, 2));
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"n":3,"edges":[[0,1],[1,2]],"topology":"custom"}"#);
        let back: CouplingMap = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<CouplingMap>(r#"{"n": 3, "edges": [[0,1]]}"#).is_err());
    }
}
