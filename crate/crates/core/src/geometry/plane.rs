//! The Desarguesian projective plane PG(2,q) and its bipartite incidence
//! graph (spherical building of type A2 and order q).

use crate::error::{Error, Result};
use crate::geometry::graph::Graph;
use crate::gf::{GfElem, GfParams};

pub const PLANE_ORDER_CAP: u64 = 16;

/// Points and lines as normalized homogeneous triples: the first nonzero
/// coordinate is 1, enumeration order is [1,a,b], then [0,1,a], then [0,0,1]
/// with a, b running through the field enumeration.
#[derive(Clone, Debug)]
pub struct ProjectivePlane {
    q: u64,
    field: GfParams,
    points: Vec<[GfElem; 3]>,
    lines: Vec<[GfElem; 3]>,
    /// row-major point x line bit matrix
    incidence: Vec<bool>,
}

pub fn build_projective_plane(q: u64) -> Result<ProjectivePlane> {
    if q > PLANE_ORDER_CAP {
        return Err(Error::OrderCap(q));
    }
    let field = GfParams::for_order(q)?;
    let elems = field.enumerate();
    let one = field.one();
    let zero = field.zero();
    let mut points = Vec::with_capacity((q * q + q + 1) as usize);
    for a in &elems {
        for b in &elems {
            points.push([one.clone(), a.clone(), b.clone()]);
        }
    }
    for a in &elems {
        points.push([zero.clone(), one.clone(), a.clone()]);
    }
    points.push([zero.clone(), zero.clone(), one.clone()]);
    let lines = points.clone();
    let n = points.len();
    let mut incidence = vec![false; n * n];
    for (i, p) in points.iter().enumerate() {
        for (j, l) in lines.iter().enumerate() {
            let mut dot = field.zero();
            for t in 0..3 {
                dot = field.add(&dot, &field.mul(&p[t], &l[t]));
            }
            incidence[i * n + j] = dot.is_zero();
        }
    }
    Ok(ProjectivePlane { q, field, points, lines, incidence })
}

impl ProjectivePlane {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn field(&self) -> &GfParams {
        &self.field
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    pub fn points(&self) -> &[[GfElem; 3]] {
        &self.points
    }

    pub fn lines(&self) -> &[[GfElem; 3]] {
        &self.lines
    }

    pub fn is_incident(&self, point: usize, line: usize) -> bool {
        self.incidence[point * self.lines.len() + line]
    }

    /// All flags (incident point-line pairs) in (point, line) order.
    pub fn flags(&self) -> Vec<(u32, u32)> {
        let n = self.lines.len();
        let mut out = Vec::new();
        for i in 0..self.points.len() {
            for j in 0..n {
                if self.incidence[i * n + j] {
                    out.push((i as u32, j as u32));
                }
            }
        }
        out
    }

    /// Plane axiom: two distinct points lie on exactly one common line.
    pub fn verify_axioms(&self) -> bool {
        let n = self.lines.len();
        if self.points.len() != n || n as u64 != self.q * self.q + self.q + 1 {
            return false;
        }
        for i in 0..self.points.len() {
            let deg = (0..n).filter(|&j| self.incidence[i * n + j]).count();
            if deg as u64 != self.q + 1 {
                return false;
            }
        }
        for j in 0..n {
            let deg = (0..self.points.len()).filter(|&i| self.incidence[i * n + j]).count();
            if deg as u64 != self.q + 1 {
                return false;
            }
        }
        for i in 0..self.points.len() {
            for i2 in i + 1..self.points.len() {
                let common = (0..n)
                    .filter(|&j| self.incidence[i * n + j] && self.incidence[i2 * n + j])
                    .count();
                if common != 1 {
                    return false;
                }
            }
        }
        true
    }
}

/// Bipartite point-line incidence graph; vertices are points then lines, each
/// in plane order. Edges are the flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceGraph {
    left: usize,
    right: usize,
    /// (point, line) pairs, sorted, unique
    edges: Vec<(u32, u32)>,
    degrees: Vec<u32>,
}

pub fn incidence_graph(plane: &ProjectivePlane) -> IncidenceGraph {
    IncidenceGraph::from_flags(plane.point_count(), plane.line_count(), plane.flags())
}

impl IncidenceGraph {
    pub fn from_flags(left: usize, right: usize, mut edges: Vec<(u32, u32)>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let mut degrees = vec![0u32; left + right];
        for &(p, l) in &edges {
            degrees[p as usize] += 1;
            degrees[left + l as usize] += 1;
        }
        IncidenceGraph { left, right, edges, degrees }
    }

    pub fn left_count(&self) -> usize {
        self.left
    }

    pub fn right_count(&self) -> usize {
        self.right
    }

    pub fn vertex_count(&self) -> usize {
        self.left + self.right
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Flags as (point, line) pairs in sorted order; the position in this
    /// list is the edge id used by removal sweeps and CSV output.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn edge_id(&self, edge: (u32, u32)) -> Option<usize> {
        self.edges.binary_search(&edge).ok()
    }

    /// New graph with the listed flags deleted; the original is untouched.
    pub fn remove_edges(&self, removals: &[(u32, u32)]) -> crate::error::Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut out = self.clone();
        for &(p, l) in removals {
            if !seen.insert((p, l)) {
                return Err(Error::DuplicateEdge(p, l));
            }
            match out.edges.binary_search(&(p, l)) {
                Ok(pos) => {
                    out.edges.remove(pos);
                    out.degrees[p as usize] -= 1;
                    out.degrees[self.left + l as usize] -= 1;
                }
                Err(_) => return Err(Error::UnknownEdge(p, l)),
            }
        }
        Ok(out)
    }

    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new(self.left + self.right);
        for &(p, l) in &self.edges {
            g.add_edge(p as usize, self.left + l as usize, 1);
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        self.to_graph().is_connected()
    }
}
