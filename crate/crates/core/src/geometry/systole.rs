//! Homology systole: the shortest edge loop that is nontrivial in
//! `H₁(Σ; Z₂)`.
//!
//! A tree–cotree decomposition gives `2g` leftover edges. Each one closes a
//! loop in the dual graph, and the edges crossed by that dual loop carry one
//! bit of a `Z₂` cocycle. The signature of a primal loop is the XOR of its
//! edge signatures; it vanishes exactly on `Z₂`-null-homologous loops.
//!
//! The search runs one pruned Dijkstra per vertex `v`. For a shortest
//! nontrivial loop `C` through `v`, the loops `T(a) + ab + T(b)` built from the
//! shortest-path tree `T` over edges `ab` of `C` sum to `C`, so one of them is
//! nontrivial, and each has length at most `|C|` with both endpoints within
//! `|C|/2` of `v`. Taking `v` to be the smallest vertex index on `C`, the
//! search from `v` may also ignore every vertex below `v`.

use std::collections::VecDeque;

use crate::surface::TriMesh;
use crate::zeroset::CurveMesh;

use super::graph::WeightedGraph;

/// `Z₂` cocycle values of one edge, one bit per homology generator.
pub type Signature = [u64; 4];

/// Largest number of generators a [`Signature`] holds.
pub const MAX_GENERATORS: usize = 256;

fn xor(a: &Signature, b: &Signature) -> Signature {
    [a[0] ^ b[0], a[1] ^ b[1], a[2] ^ b[2], a[3] ^ b[3]]
}

fn is_zero(a: &Signature) -> bool {
    a.iter().all(|&w| w == 0)
}

/// The shortest nontrivial loop found.
#[derive(Debug, Clone, PartialEq)]
pub struct SystoleLoop {
    pub length: f64,
    /// Closed vertex sequence (first vertex not repeated).
    pub vertices: Vec<usize>,
}

/// Per-edge cocycle signatures and the number of generators `2g`.
///
/// Panics if `2g` exceeds [`MAX_GENERATORS`].
pub fn cocycle_signatures(tri: &TriMesh) -> (Vec<Signature>, usize) {
    let ne = tri.edges.len();
    let nv = tri.n_vertices;
    let nf = tri.faces.len();
    // primal BFS tree
    let adj = tri.adjacency();
    let mut in_tree = vec![false; ne];
    let mut seen = vec![false; nv];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &(w, e) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                in_tree[e] = true;
                queue.push_back(w);
            }
        }
    }
    // faces on each edge
    let mut edge_faces = vec![Vec::with_capacity(2); ne];
    for (f, face) in tri.faces.iter().enumerate() {
        for k in 0..3 {
            let e = tri.edge_id(face[k], face[(k + 1) % 3]).expect("face edge");
            edge_faces[e].push(f);
        }
    }
    let mut face_adj = vec![Vec::with_capacity(3); nf];
    for e in 0..ne {
        if !in_tree[e] && edge_faces[e].len() == 2 {
            let (f, g) = (edge_faces[e][0], edge_faces[e][1]);
            face_adj[f].push((g, e));
            face_adj[g].push((f, e));
        }
    }
    // dual BFS tree over edges not in the primal tree
    let mut in_cotree = vec![false; ne];
    let mut parent = vec![(usize::MAX, usize::MAX); nf];
    let mut depth = vec![0usize; nf];
    let mut fseen = vec![false; nf];
    if nf > 0 {
        fseen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(f) = queue.pop_front() {
            for &(g, e) in &face_adj[f] {
                if !fseen[g] {
                    fseen[g] = true;
                    in_cotree[e] = true;
                    parent[g] = (f, e);
                    depth[g] = depth[f] + 1;
                    queue.push_back(g);
                }
            }
        }
    }
    let leftover: Vec<usize> = (0..ne).filter(|&e| !in_tree[e] && !in_cotree[e]).collect();
    assert!(leftover.len() <= MAX_GENERATORS, "too many homology generators: {}", leftover.len());
    let mut sig = vec![[0u64; 4]; ne];
    for (bit, &e) in leftover.iter().enumerate() {
        let mask = |s: &mut Signature| s[bit / 64] ^= 1u64 << (bit % 64);
        mask(&mut sig[e]);
        let (mut f, mut g) = (edge_faces[e][0], edge_faces[e][1]);
        while f != g {
            if depth[f] < depth[g] {
                std::mem::swap(&mut f, &mut g);
            }
            let (pf, pe) = parent[f];
            mask(&mut sig[pe]);
            f = pf;
        }
    }
    (sig, leftover.len())
}

/// Shortest `Z₂`-nontrivial edge loop, `None` on a sphere.
pub fn homology_systole(tri: &TriMesh) -> Option<SystoleLoop> {
    let (sig, generators) = cocycle_signatures(tri);
    if generators == 0 {
        return None;
    }
    let mut graph = WeightedGraph::new(tri.n_vertices);
    for (&[a, b], &l) in tri.edges.iter().zip(&tri.lengths) {
        graph.add_edge(a, b, l);
    }
    let adj = tri.adjacency();
    let mut best = f64::INFINITY;
    let mut best_vertices = Vec::new();
    let mut dist = vec![f64::INFINITY; tri.n_vertices];
    let mut acc = vec![[0u64; 4]; tri.n_vertices];
    let mut par = vec![usize::MAX; tri.n_vertices];
    let mut stamp = vec![usize::MAX; tri.n_vertices];
    let mut settled = Vec::new();
    for v in 0..tri.n_vertices {
        for &u in &settled {
            dist[u] = f64::INFINITY;
        }
        settled.clear();
        graph.dijkstra_visit(v, 0.5 * best, v, &mut dist, |u, p| {
            match p {
                Some(p) => {
                    let e = tri.edge_id(p, u).expect("tree edge");
                    acc[u] = xor(&acc[p], &sig[e]);
                    par[u] = p;
                }
                None => {
                    acc[u] = [0; 4];
                    par[u] = usize::MAX;
                }
            }
            stamp[u] = v;
            settled.push(u);
        });
        let mut found = None;
        for &a in &settled {
            for &(b, e) in &adj[a] {
                if b < a || stamp[b] != v || par[a] == b || par[b] == a {
                    continue;
                }
                let len = dist[a] + tri.lengths[e] + dist[b];
                if len < best && !is_zero(&xor(&xor(&acc[a], &acc[b]), &sig[e])) {
                    best = len;
                    found = Some((a, b));
                }
            }
        }
        if let Some((a, b)) = found {
            let walk = |mut x: usize| {
                let mut out = vec![x];
                while par[x] != usize::MAX {
                    x = par[x];
                    out.push(x);
                }
                out
            };
            best_vertices = walk(a);
            best_vertices.reverse();
            let back = walk(b);
            best_vertices.extend(&back[..back.len() - 1]);
        }
    }
    best.is_finite().then_some(SystoleLoop { length: best, vertices: best_vertices })
}

/// Homology systole of the mesh in computational units, `∞` for genus 0.
pub fn systole(mesh: &CurveMesh) -> f64 {
    homology_systole(&mesh.surface).map_or(f64::INFINITY, |l| l.length)
}
