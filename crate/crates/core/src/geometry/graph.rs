//! Undirected multigraph with integer edge multiplicities. Vertex links of
//! thickened complexes genuinely need parallel edges, so multiplicity is kept
//! everywhere and feeds the weighted degrees of the normalized Laplacian.

use std::collections::VecDeque;

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<(usize, u32)>>,
}

/// Equality is by edge multiset, independent of insertion order.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.simple_edges() == other.simple_edges()
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, adj: vec![Vec::new(); n] }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Adds `mult` parallel edges between u and v (no loops).
    pub fn add_edge(&mut self, u: usize, v: usize, mult: u32) {
        assert!(u != v, "loops are not supported");
        assert!(u < self.n && v < self.n);
        if mult == 0 {
            return;
        }
        for (w, m) in &mut self.adj[u] {
            if *w == v {
                *m += mult;
                let back = self.adj[v].iter_mut().find(|(w, _)| *w == u).unwrap();
                back.1 += mult;
                return;
            }
        }
        self.adj[u].push((v, mult));
        self.adj[v].push((u, mult));
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v, 1);
        }
        g
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, u32)] {
        &self.adj[v]
    }

    /// Weighted degree (sum of multiplicities).
    pub fn degree(&self, v: usize) -> u64 {
        self.adj[v].iter().map(|&(_, m)| m as u64).sum()
    }

    /// Number of edges counted with multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.adj.iter().flatten().map(|&(_, m)| m as u64).sum::<u64>() / 2
    }

    /// Distinct vertex pairs joined by at least one edge.
    pub fn simple_edges(&self) -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for &(v, m) in &self.adj[u] {
                if u < v {
                    out.push((u, v, m));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        self.adj[u].iter().find(|&&(w, _)| w == v).map_or(0, |&(_, m)| m)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }

    pub fn has_isolated_vertex(&self) -> Option<usize> {
        (0..self.n).find(|&v| self.adj[v].is_empty())
    }

    /// Length of a shortest cycle, ignoring multiplicities (None for forests).
    pub fn girth(&self) -> Option<usize> {
        let mut best = usize::MAX;
        for s in 0..self.n {
            let mut dist = vec![usize::MAX; self.n];
            let mut parent = vec![usize::MAX; self.n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &(v, _) in &self.adj[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else if parent[u] != v {
                        best = best.min(dist[u] + dist[v] + 1);
                    }
                }
            }
        }
        (best != usize::MAX).then_some(best)
    }

    /// Complete bipartite K_{a,b}; handy in tests.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Graph::new(a + b);
        for u in 0..a {
            for v in 0..b {
                g.add_edge(u, a + v, 1);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            g.add_edge(u, (u + 1) % n, 1);
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicities_accumulate() {
        let mut g = Graph::new(3);
        g.add_edge(0, 1, 1);
        g.add_edge(1, 0, 2);
        assert_eq!(g.multiplicity(0, 1), 3);
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn connectivity_and_girth() {
        let c4 = Graph::cycle(4);
        assert!(c4.is_connected());
        assert_eq!(c4.girth(), Some(4));
        let mut two = Graph::new(4);
        two.add_edge(0, 1, 1);
        two.add_edge(2, 3, 1);
        assert!(!two.is_connected());
        assert_eq!(two.girth(), None);
    }
}
