//! Plain-text interchange format for graphs and complexes, for cross-checking
//! with external tools.
//!
//! ```text
//! perfora-adj 1 graph <n_vertices> <n_records>
//! u v mult          (one line per vertex pair)
//! ```
//!
//! ```text
//! perfora-adj 1 complex <n_vertices> <n_faces>
//! a b c             (one line per face, vertex indices)
//! ```

use crate::error::{Error, Result};
use crate::geometry::complex::Complex2;
use crate::geometry::graph::Graph;

pub const FORMAT_MAGIC: &str = "perfora-adj";
pub const FORMAT_VERSION: u32 = 1;
const MAX_VERTICES: usize = 1 << 20;
const MAX_RECORDS: usize = 1 << 22;

#[derive(Clone, Debug)]
pub enum AdjacencyDoc {
    Graph(Graph),
    Complex(Complex2),
}

pub fn graph_to_text(g: &Graph) -> String {
    let recs = g.simple_edges();
    let mut out = format!("{FORMAT_MAGIC} {FORMAT_VERSION} graph {} {}\n", g.vertex_count(), recs.len());
    for (u, v, m) in recs {
        out.push_str(&format!("{u} {v} {m}\n"));
    }
    out
}

pub fn complex_to_text(c: &Complex2) -> String {
    let mut out = format!(
        "{FORMAT_MAGIC} {FORMAT_VERSION} complex {} {}\n",
        c.vertex_count(),
        c.face_count()
    );
    for f in c.faces() {
        out.push_str(&format!("{} {} {}\n", f[0], f[1], f[2]));
    }
    out
}

pub fn parse_adjacency_text(src: &str) -> Result<AdjacencyDoc> {
    let mut lines = src.lines().filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty document".into()))?;
    let mut h = header.split_whitespace();
    match (h.next(), h.next()) {
        (Some(FORMAT_MAGIC), Some(v)) if v.parse::<u32>() == Ok(FORMAT_VERSION) => {}
        _ => return Err(Error::Parse(format!("bad header '{header}'"))),
    }
    let kind = h.next().ok_or_else(|| Error::Parse("missing kind in header".into()))?;
    let n: usize = h
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse("bad vertex count".into()))?;
    let records: usize = h
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse("bad record count".into()))?;
    if h.next().is_some() {
        return Err(Error::Parse("trailing tokens in header".into()));
    }
    if n > MAX_VERTICES || records > MAX_RECORDS {
        return Err(Error::Parse("document exceeds size caps".into()));
    }
    match kind {
        "graph" => {
            let mut g = Graph::new(n);
            for _ in 0..records {
                let line = lines.next().ok_or_else(|| Error::Parse("truncated edge list".into()))?;
                let mut it = line.split_whitespace();
                let u: usize = next_num(&mut it, "u")?;
                let v: usize = next_num(&mut it, "v")?;
                let m: u32 = next_num(&mut it, "mult")?;
                if it.next().is_some() {
                    return Err(Error::Parse(format!("trailing tokens in '{line}'")));
                }
                if u >= n || v >= n {
                    return Err(Error::UnknownVertex(u.max(v)));
                }
                if u == v {
                    return Err(Error::Parse(format!("loop at vertex {u}")));
                }
                if m == 0 {
                    return Err(Error::Parse(format!("zero multiplicity in '{line}'")));
                }
                g.add_edge(u, v, m);
            }
            if lines.next().is_some() {
                return Err(Error::Parse("extra lines after edge list".into()));
            }
            Ok(AdjacencyDoc::Graph(g))
        }
        "complex" => {
            let mut faces = Vec::with_capacity(records);
            for _ in 0..records {
                let line = lines.next().ok_or_else(|| Error::Parse("truncated face list".into()))?;
                let mut it = line.split_whitespace();
                let a: usize = next_num(&mut it, "a")?;
                let b: usize = next_num(&mut it, "b")?;
                let c: usize = next_num(&mut it, "c")?;
                if it.next().is_some() {
                    return Err(Error::Parse(format!("trailing tokens in '{line}'")));
                }
                faces.push([a, b, c]);
            }
            if lines.next().is_some() {
                return Err(Error::Parse("extra lines after face list".into()));
            }
            Ok(AdjacencyDoc::Complex(Complex2::from_faces(n, faces)?))
        }
        other => Err(Error::Parse(format!("unknown document kind '{other}'"))),
    }
}

fn next_num<T: std::str::FromStr>(it: &mut std::str::SplitWhitespace<'_>, what: &str) -> Result<T> {
    it.next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("missing or bad field '{what}'")))
}
