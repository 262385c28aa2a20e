//! Intrinsic triangle meshes: combinatorics plus one length per edge.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A triangulated surface described by its faces and edge lengths.
#[derive(Debug, Clone)]
pub struct TriMesh {
    pub n_vertices: usize,
    pub faces: Vec<[usize; 3]>,
    /// Undirected edges with `a < b`.
    pub edges: Vec<[usize; 2]>,
    pub lengths: Vec<f64>,
    edge_index: HashMap<(usize, usize), usize>,
}

impl TriMesh {
    /// Build the edge list from `faces` and measure every edge with `length`.
    pub fn new(n_vertices: usize, faces: Vec<[usize; 3]>, mut length: impl FnMut(usize, usize) -> f64) -> Self {
        let mut edges = Vec::new();
        let mut lengths = Vec::new();
        let mut edge_index = HashMap::new();
        for f in &faces {
            for k in 0..3 {
                let (a, b) = (f[k].min(f[(k + 1) % 3]), f[k].max(f[(k + 1) % 3]));
                edge_index.entry((a, b)).or_insert_with(|| {
                    edges.push([a, b]);
                    lengths.push(length(a, b));
                    edges.len() - 1
                });
            }
        }
        Self { n_vertices, faces, edges, lengths, edge_index }
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn edge_length(&self, a: usize, b: usize) -> f64 {
        self.lengths[self.edge_id(a, b).expect("edge exists")]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Neighbours of every vertex with the connecting edge id.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        adj
    }

    /// Faces incident to each vertex.
    pub fn vertex_faces(&self) -> Vec<Vec<usize>> {
        let mut vf = vec![Vec::new(); self.n_vertices];
        for (i, f) in self.faces.iter().enumerate() {
            for &v in f {
                vf[v].push(i);
            }
        }
        vf
    }

    /// The three edge lengths of face `f`, opposite to its three corners.
    pub fn face_lengths(&self, f: usize) -> [f64; 3] {
        let [a, b, c] = self.faces[f];
        [self.edge_length(b, c), self.edge_length(c, a), self.edge_length(a, b)]
    }

    /// Check that the mesh is a closed, consistently oriented surface whose
    /// vertex links are single cycles.
    pub fn check_closed_surface(&self) -> Result<()> {
        let mut directed: HashMap<(usize, usize), u32> = HashMap::new();
        for f in &self.faces {
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::TopologyMismatch(format!("face {f:?} repeats a vertex")));
            }
            for k in 0..3 {
                *directed.entry((f[k], f[(k + 1) % 3])).or_default() += 1;
            }
        }
        for (&(a, b), &c) in &directed {
            if c != 1 || directed.get(&(b, a)) != Some(&1) {
                return Err(Error::TopologyMismatch(format!("edge ({a},{b}) is not shared by exactly two oppositely oriented faces")));
            }
        }
        // In the link of v every face contributes the directed edge
        // (next, prev); a closed surface needs these to form one cycle.
        for (v, faces) in self.vertex_faces().iter().enumerate() {
            if faces.is_empty() {
                return Err(Error::TopologyMismatch(format!("vertex {v} is isolated")));
            }
            let mut succ: HashMap<usize, usize> = HashMap::new();
            for &fi in faces {
                let f = self.faces[fi];
                let k = f.iter().position(|&x| x == v).unwrap();
                succ.insert(f[(k + 1) % 3], f[(k + 2) % 3]);
            }
            let start = *succ.keys().next().unwrap();
            let mut cur = start;
            let mut steps = 0;
            loop {
                cur = match succ.get(&cur) {
                    Some(&n) => n,
                    None => return Err(Error::TopologyMismatch(format!("open link at vertex {v}"))),
                };
                steps += 1;
                if cur == start || steps > faces.len() {
                    break;
                }
            }
            if steps != faces.len() {
                return Err(Error::TopologyMismatch(format!("vertex {v} has a disconnected link")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn octahedron() -> TriMesh {
        let faces = vec![[0, 2, 4], [2, 1, 4], [1, 3, 4], [3, 0, 4], [2, 0, 5], [1, 2, 5], [3, 1, 5], [0, 3, 5]];
        TriMesh::new(6, faces, |_, _| 1.0)
    }

    #[test]
    fn octahedron_is_a_sphere() {
        let m = octahedron();
        assert_eq!(m.euler_characteristic(), 2);
        m.check_closed_surface().unwrap();
    }

    #[test]
    fn two_spheres_glued_at_a_vertex_are_rejected() {
        let mut faces = octahedron().faces;
        // second octahedron sharing vertex 0
        let map = [0, 6, 7, 8, 9, 10];
        for f in octahedron().faces {
            faces.push([map[f[0]], map[f[1]], map[f[2]]]);
        }
        let m = TriMesh::new(11, faces, |_, _| 1.0);
        assert!(m.check_closed_surface().is_err());
    }

    #[test]
    fn flipped_face_is_rejected() {
        let mut m = octahedron().faces;
        m[0] = [0, 4, 2];
        assert!(TriMesh::new(6, m, |_, _| 1.0).check_closed_surface().is_err());
    }
}
