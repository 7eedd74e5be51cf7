//! Static undirected multigraph in compressed sparse row form.
//!
//! Each row holds the distinct non-loop neighbours of a vertex in ascending
//! order with their edge multiplicities. Self-loops are counted separately and
//! contribute 2 to the degree.

use crate::error::{Error, Result};
use std::collections::VecDeque;
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    multiplicity: Vec<u32>,
    loops: Vec<u32>,
    degrees: Vec<u64>,
}

impl MultiGraph {
    pub fn empty(n: usize) -> Self {
        MultiGraph {
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
            multiplicity: Vec::new(),
            loops: vec![0; n],
            degrees: vec![0; n],
        }
    }

    /// Builds a graph from an edge list. `(u, u)` is a self-loop; repeated
    /// pairs become parallel edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        assert!(n <= u32::MAX as usize, "vertex ids are stored as u32");
        let mut loops = vec![0u32; n];
        let mut half = vec![0usize; n + 1];
        let mut pairs = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                loops[u] += 1;
            } else {
                half[u + 1] += 1;
                half[v + 1] += 1;
                pairs.push((u as u32, v as u32));
            }
        }
        for i in 0..n {
            half[i + 1] += half[i];
        }
        let mut fill = half.clone();
        let mut raw = vec![0u32; half[n]];
        for &(u, v) in &pairs {
            raw[fill[u as usize]] = v;
            fill[u as usize] += 1;
            raw[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }

        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::with_capacity(raw.len());
        let mut multiplicity = Vec::with_capacity(raw.len());
        let mut degrees = Vec::with_capacity(n);
        offsets.push(0);
        for i in 0..n {
            let row = &mut raw[half[i]..half[i + 1]];
            row.sort_unstable();
            for &v in row.iter() {
                if neighbors.len() > offsets[i] && *neighbors.last().unwrap() == v {
                    *multiplicity.last_mut().unwrap() += 1;
                } else {
                    neighbors.push(v);
                    multiplicity.push(1);
                }
            }
            offsets.push(neighbors.len());
            degrees.push(row.len() as u64 + 2 * loops[i] as u64);
        }
        Ok(MultiGraph {
            offsets,
            neighbors,
            multiplicity,
            loops,
            degrees,
        })
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, i: usize) -> u64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn loops(&self, i: usize) -> u32 {
        self.loops[i]
    }

    pub fn total_loops(&self) -> u64 {
        self.loops.iter().map(|&l| l as u64).sum()
    }

    pub fn is_loopless(&self) -> bool {
        self.loops.iter().all(|&l| l == 0)
    }

    pub fn is_simple(&self) -> bool {
        self.is_loopless() && self.multiplicity.iter().all(|&m| m == 1)
    }

    /// Distinct non-loop neighbours of `i` with multiplicities.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, u32)> + '_ {
        let range = self.offsets[i]..self.offsets[i + 1];
        self.neighbors[range.clone()]
            .iter()
            .zip(&self.multiplicity[range])
            .map(|(&v, &m)| (v as usize, m))
    }

    /// Number of edges between `i` and `j`; for `i == j` the number of loops.
    pub fn multiplicity(&self, i: usize, j: usize) -> u32 {
        if i == j {
            return self.loops[i];
        }
        let range = self.offsets[i]..self.offsets[i + 1];
        match self.neighbors[range.clone()].binary_search(&(j as u32)) {
            Ok(pos) => self.multiplicity[range.start + pos],
            Err(_) => 0,
        }
    }

    pub fn edge_count(&self) -> u64 {
        let non_loop: u64 = self.multiplicity.iter().map(|&m| m as u64).sum();
        non_loop / 2 + self.total_loops()
    }

    /// Every edge once as `(u, v)` with `u <= v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            let loops = std::iter::repeat_n((u, u), self.loops[u] as usize);
            let upper = self
                .neighbors(u)
                .filter(move |&(v, _)| v > u)
                .flat_map(move |(v, m)| std::iter::repeat_n((u, v), m as usize));
            loops.chain(upper)
        })
    }

    /// Component label of each vertex, labels assigned in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        let mut next = 0;
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for (v, _) in self.neighbors(u) {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// True when every connected component has a single vertex degree.
    pub fn all_components_regular(&self) -> bool {
        let label = self.components();
        let count = label.iter().copied().max().map_or(0, |m| m + 1);
        let mut seen: Vec<Option<u64>> = vec![None; count];
        for (i, &c) in label.iter().enumerate() {
            match seen[c] {
                None => seen[c] = Some(self.degrees[i]),
                Some(d) if d != self.degrees[i] => return false,
                Some(_) => {}
            }
        }
        true
    }

    /// Edge-list text: a `# n=<n>` header, then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(16 * self.edge_count() as usize + 16);
        writeln!(out, "# n={}", self.n()).unwrap();
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(value) = rest.trim().strip_prefix("n=") {
                    let parsed = value.trim().parse::<usize>().map_err(|e| Error::Parse {
                        line: line_no,
                        reason: format!("bad vertex count: {e}"),
                    })?;
                    n = Some(parsed);
                }
                continue;
            }
            let mut parts = line.split_whitespace();
            let mut field = |name: &str| -> Result<usize> {
                parts
                    .next()
                    .ok_or_else(|| Error::Parse {
                        line: line_no,
                        reason: format!("missing {name}"),
                    })?
                    .parse::<usize>()
                    .map_err(|e| Error::Parse {
                        line: line_no,
                        reason: format!("bad {name}: {e}"),
                    })
            };
            let u = field("source")?;
            let v = field("target")?;
            if parts.next().is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    reason: "expected exactly two vertex ids".into(),
                });
            }
            edges.push((u, v));
        }
        let n = n.ok_or(Error::Parse {
            line: 1,
            reason: "missing '# n=<n>' header".into(),
        })?;
        MultiGraph::from_edges(n, edges)
    }
}

/// Small deterministic graphs used throughout the tests and examples.
pub mod build {
    use super::MultiGraph;

    pub fn path(n: usize) -> MultiGraph {
        MultiGraph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> MultiGraph {
        assert!(n >= 3);
        MultiGraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    /// Star with one centre (vertex 0) and `leaves` leaves.
    pub fn star(leaves: usize) -> MultiGraph {
        MultiGraph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    pub fn complete(n: usize) -> MultiGraph {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        MultiGraph::from_edges(n, edges).unwrap()
    }

    /// Disjoint union, relabelling the second graph after the first.
    pub fn union(a: &MultiGraph, b: &MultiGraph) -> MultiGraph {
        let shift = a.n();
        let edges = a
            .edges()
            .chain(b.edges().map(|(u, v)| (u + shift, v + shift)))
            .collect::<Vec<_>>();
        MultiGraph::from_edges(a.n() + b.n(), edges).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_count_loops_twice() {
        let g = MultiGraph::from_edges(3, [(0, 0), (0, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.degrees(), &[4, 3, 1]);
        assert_eq!(g.multiplicity(0, 1), 2);
        assert_eq!(g.multiplicity(1, 0), 2);
        assert_eq!(g.multiplicity(0, 0), 1);
        assert_eq!(g.multiplicity(0, 2), 0);
        assert_eq!(g.edge_count(), 4);
        assert!(!g.is_loopless());
        assert_eq!(g.degrees().iter().sum::<u64>() % 2, 0);
    }

    #[test]
    fn out_of_range_vertex_is_rejected() {
        let err = MultiGraph::from_edges(2, [(0, 2)]).unwrap_err();
        assert_eq!(err, Error::VertexOutOfRange { vertex: 2, n: 2 });
    }

    #[test]
    fn edge_list_round_trip_keeps_loops_and_multi_edges() {
        let g = MultiGraph::from_edges(4, [(2, 2), (0, 3), (3, 0), (1, 2)]).unwrap();
        let text = g.to_edge_list();
        assert!(text.starts_with("# n=4\n"));
        assert!(text.contains("2 2\n"));
        let back = MultiGraph::parse_edge_list(&text).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = MultiGraph::parse_edge_list("# n=3\n0 1\n1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(MultiGraph::parse_edge_list("0 1\n").is_err());
        assert!(MultiGraph::parse_edge_list("# n=2\n0 5\n").is_err());
    }

    #[test]
    fn components_and_regularity() {
        let g = build::union(&build::cycle(4), &build::complete(3));
        let labels = g.components();
        assert_eq!(labels, vec![0, 0, 0, 0, 1, 1, 1]);
        assert!(g.all_components_regular());
        assert!(!build::path(3).all_components_regular());
        assert!(MultiGraph::empty(5).all_components_regular());
    }
}
