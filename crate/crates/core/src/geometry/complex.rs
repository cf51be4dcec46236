//! Finite 2-complexes: triangulated tori, thickenings with prescribed edge
//! orders, suspensions of bipartite links, vertex links, and the face metric.
//!
//! Two faces are adjacent when they share at least one vertex; "ball of
//! radius r" and face distances always refer to that metric. Chambers are
//! faces here and flags (edges) in the link-graph view.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::geometry::graph::Graph;
use crate::geometry::plane::IncidenceGraph;

#[derive(Clone, Debug)]
pub struct Complex2 {
    vertices: usize,
    /// sorted vertex pairs, deduplicated, ascending
    edges: Vec<[usize; 2]>,
    /// vertex triples; parallel faces (same triple) are distinct cells
    faces: Vec<[usize; 3]>,
    face_edges: Vec<[usize; 3]>,
    edge_faces: Vec<Vec<usize>>,
    vertex_faces: Vec<Vec<usize>>,
    /// vertex-sharing face adjacency, precomputed
    face_adj: Vec<Vec<usize>>,
}

impl Complex2 {
    /// Assemble a complex from its face list; edges are derived.
    pub fn from_faces(vertices: usize, faces: Vec<[usize; 3]>) -> Result<Self> {
        for f in &faces {
            for &v in f {
                if v >= vertices {
                    return Err(Error::UnknownVertex(v));
                }
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::Parse(format!("degenerate face {f:?}")));
            }
        }
        let mut edge_set = std::collections::BTreeSet::new();
        for f in &faces {
            edge_set.insert(sorted_pair(f[0], f[1]));
            edge_set.insert(sorted_pair(f[1], f[2]));
            edge_set.insert(sorted_pair(f[0], f[2]));
        }
        let edges: Vec<[usize; 2]> = edge_set.into_iter().collect();
        let edge_id = |pair: [usize; 2]| edges.binary_search(&pair).unwrap();
        let mut face_edges = Vec::with_capacity(faces.len());
        let mut edge_faces = vec![Vec::new(); edges.len()];
        let mut vertex_faces = vec![Vec::new(); vertices];
        for (fi, f) in faces.iter().enumerate() {
            let fe = [
                edge_id(sorted_pair(f[0], f[1])),
                edge_id(sorted_pair(f[1], f[2])),
                edge_id(sorted_pair(f[0], f[2])),
            ];
            face_edges.push(fe);
            for e in fe {
                edge_faces[e].push(fi);
            }
            for &v in f {
                vertex_faces[v].push(fi);
            }
        }
        let mut face_adj = vec![Vec::new(); faces.len()];
        for fs in &vertex_faces {
            for &a in fs {
                for &b in fs {
                    if a != b {
                        face_adj[a].push(b);
                    }
                }
            }
        }
        for nbrs in &mut face_adj {
            nbrs.sort_unstable();
            nbrs.dedup();
        }
        Ok(Complex2 { vertices, edges, faces, face_edges, edge_faces, vertex_faces, face_adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn edge_faces(&self, e: usize) -> &[usize] {
        &self.edge_faces[e]
    }

    pub fn vertex_faces(&self, v: usize) -> &[usize] {
        &self.vertex_faces[v]
    }

    pub fn face_neighbors(&self, f: usize) -> &[usize] {
        &self.face_adj[f]
    }

    /// Edge order q_e: number of faces on the edge, minus 1.
    pub fn q_e(&self, e: usize) -> usize {
        self.edge_faces[e].len() - 1
    }

    /// min_e q_e
    pub fn q_star_min(&self) -> usize {
        (0..self.edges.len()).map(|e| self.q_e(e)).min().unwrap_or(0)
    }

    /// max_e q_e
    pub fn q_star_max(&self) -> usize {
        (0..self.edges.len()).map(|e| self.q_e(e)).max().unwrap_or(0)
    }

    pub fn every_edge_in_a_face(&self) -> bool {
        self.edge_faces.iter().all(|fs| !fs.is_empty())
    }

    /// Graph distance in the vertex-sharing face-adjacency graph.
    pub fn face_distance(&self, f1: usize, f2: usize) -> Result<usize> {
        if f1 >= self.faces.len() {
            return Err(Error::UnknownFace(f1));
        }
        if f2 >= self.faces.len() {
            return Err(Error::UnknownFace(f2));
        }
        if f1 == f2 {
            return Ok(0);
        }
        let mut dist = vec![usize::MAX; self.faces.len()];
        dist[f1] = 0;
        let mut queue = VecDeque::from([f1]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.face_adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    if w == f2 {
                        return Ok(dist[w]);
                    }
                    queue.push_back(w);
                }
            }
        }
        Err(Error::Disconnected(2))
    }

    /// Faces within distance <= radius of f (including f), by truncated BFS.
    pub fn faces_within(&self, f: usize, radius: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.faces.len()];
        dist[f] = 0;
        let mut out = vec![f];
        let mut queue = VecDeque::from([f]);
        while let Some(u) = queue.pop_front() {
            if dist[u] == radius {
                continue;
            }
            for &w in &self.face_adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out
    }

    pub fn is_face_connected(&self) -> bool {
        if self.faces.is_empty() {
            return true;
        }
        self.faces_within(0, usize::MAX).len() == self.faces.len()
    }

    /// Link of a vertex after deleting `removed` faces: one link node per
    /// incident edge, one link edge per surviving incident face.
    pub fn vertex_link(&self, v: usize, removed: &[bool]) -> Result<(Graph, Vec<usize>)> {
        if v >= self.vertices {
            return Err(Error::UnknownVertex(v));
        }
        let mut node_ids: Vec<usize> = Vec::new();
        let mut node_of_edge = std::collections::HashMap::new();
        for &fi in &self.vertex_faces[v] {
            for e in self.face_edges[fi] {
                let [a, b] = self.edges[e];
                if a == v || b == v {
                    node_of_edge.entry(e).or_insert_with(|| {
                        node_ids.push(e);
                        node_ids.len() - 1
                    });
                }
            }
        }
        let mut g = Graph::new(node_ids.len());
        for &fi in &self.vertex_faces[v] {
            if removed.get(fi).copied().unwrap_or(false) {
                continue;
            }
            let at_v: Vec<usize> = self.face_edges[fi]
                .iter()
                .filter(|&&e| {
                    let [a, b] = self.edges[e];
                    a == v || b == v
                })
                .map(|&e| node_of_edge[&e])
                .collect();
            debug_assert_eq!(at_v.len(), 2);
            g.add_edge(at_v[0], at_v[1], 1);
        }
        Ok((g, node_ids))
    }
}

fn sorted_pair(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

/// Standard triangulation of the n x n flat torus: n^2 vertices, 3n^2 edges,
/// 2n^2 faces, every edge in exactly two faces (q_e = 1). Face order: for each
/// (i, j) the lower triangle then the upper one.
pub fn build_torus(n: usize) -> Result<Complex2> {
    if n < 3 {
        return Err(Error::TorusTooSmall(n));
    }
    let v = |i: usize, j: usize| (i % n) * n + (j % n);
    let mut faces = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            faces.push([v(i, j), v(i + 1, j), v(i, j + 1)]);
            faces.push([v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)]);
        }
    }
    Complex2::from_faces(n * n, faces)
}

/// Replace every face by t+1 parallel cells on the same boundary; vertex and
/// edge sets are preserved and q_e becomes (t+1)(q_e+1) - 1.
pub fn thicken(base: &Complex2, t: usize) -> Result<Complex2> {
    if t < 1 {
        return Err(Error::BadThickness);
    }
    let mut faces = Vec::with_capacity(base.face_count() * (t + 1));
    for f in base.faces() {
        for _ in 0..=t {
            faces.push(*f);
        }
    }
    Complex2::from_faces(base.vertex_count(), faces)
}

/// Double cone over a bipartite incidence graph: two apex vertices whose
/// links are (copies of) the graph itself, one face pair per flag. Face
/// 2*id sits under apex 0 and face 2*id + 1 under apex 1, where id is the
/// flag's position in the graph's edge list.
pub fn suspension(graph: &IncidenceGraph) -> Complex2 {
    let base = 2;
    let left = graph.left_count();
    let mut faces = Vec::with_capacity(2 * graph.edge_count());
    for &(p, l) in graph.edges() {
        let u = base + p as usize;
        let w = base + left + l as usize;
        faces.push([0, u, w]);
        faces.push([1, u, w]);
    }
    Complex2::from_faces(base + graph.vertex_count(), faces)
        .expect("suspension of a valid graph is a valid complex")
}

/// Complex spec strings used by the CLI and serialization: `torus:n` or
/// `thick:n,t`.
pub fn parse_complex_spec(spec: &str) -> Result<Complex2> {
    const MAX_SIDE: usize = 64;
    const MAX_THICKNESS: usize = 8;
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("complex spec '{spec}' must look like torus:n or thick:n,t")))?;
    match kind {
        "torus" => {
            let n: usize = rest.parse().map_err(|_| Error::Parse(format!("bad side length '{rest}'")))?;
            if n > MAX_SIDE {
                return Err(Error::Parse(format!("side length {n} exceeds cap {MAX_SIDE}")));
            }
            build_torus(n)
        }
        "thick" => {
            let (ns, ts) = rest
                .split_once(',')
                .ok_or_else(|| Error::Parse("thick spec needs n,t".into()))?;
            let n: usize = ns.parse().map_err(|_| Error::Parse(format!("bad side length '{ns}'")))?;
            let t: usize = ts.parse().map_err(|_| Error::Parse(format!("bad multiplicity '{ts}'")))?;
            if n > MAX_SIDE {
                return Err(Error::Parse(format!("side length {n} exceeds cap {MAX_SIDE}")));
            }
            if t > MAX_THICKNESS {
                return Err(Error::Parse(format!("multiplicity {t} exceeds cap {MAX_THICKNESS}")));
            }
            thicken(&build_torus(n)?, t)
        }
        other => Err(Error::Parse(format!("unknown complex kind '{other}'"))),
    }
}
