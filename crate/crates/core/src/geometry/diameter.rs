//! Intrinsic diameter from graph distances.
//!
//! Paths along mesh edges overestimate geodesic distance by a direction
//! dependent factor (up to `2/√3` on a regular triangulation). Adding
//! shortcut edges to every vertex within three rings, weighted by the
//! ambient Fubini–Study distance, brings the available directions within
//! about ten degrees of any geodesic. The eccentricity search is the
//! BoundingDiameters scheme: bound every eccentricity from the searches done
//! so far and stop once the bounds meet.

use serde::{Deserialize, Serialize};

use crate::zeroset::CurveMesh;

use super::graph::WeightedGraph;

/// Maximum number of single-source searches.
pub const MAX_SOURCES: usize = 64;

/// Rings of shortcut edges added around each vertex.
pub const SHORTCUT_RINGS: usize = 3;

/// Bracket on the graph diameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiameterEstimate {
    /// Largest eccentricity found (a true graph distance).
    pub lower: f64,
    /// Upper bound on every eccentricity.
    pub upper: f64,
    /// Whether the bracket closed.
    pub exact: bool,
    pub sources: usize,
}

/// Mesh edges plus shortcuts to all vertices at combinatorial distance at
/// most `rings`, weighted by ambient distance between the vertex points.
pub fn shortcut_graph(mesh: &CurveMesh, rings: usize) -> WeightedGraph {
    let tri = &mesh.surface;
    let adj = tri.adjacency();
    let n = tri.n_vertices;
    let mut g = WeightedGraph::new(n);
    let mut mark = vec![usize::MAX; n];
    for v in 0..n {
        mark[v] = v;
        let mut frontier = vec![v];
        for _ in 0..rings {
            let mut next = Vec::new();
            for &u in &frontier {
                for &(w, _) in &adj[u] {
                    if mark[w] != v {
                        mark[w] = v;
                        next.push(w);
                    }
                }
            }
            for &w in &next {
                if w > v {
                    let len = if tri.edge_id(v, w).is_some() {
                        tri.edge_length(v, w)
                    } else {
                        mesh.vertices[v].point.distance(&mesh.vertices[w].point)
                    };
                    g.add_edge(v, w, len);
                }
            }
            frontier = next;
        }
    }
    g
}

/// Graph diameter by BoundingDiameters, capped at `max_sources` searches.
pub fn graph_diameter(g: &WeightedGraph, max_sources: usize) -> DiameterEstimate {
    let n = g.len();
    if n <= 1 {
        return DiameterEstimate { lower: 0.0, upper: 0.0, exact: true, sources: 0 };
    }
    let tol = 1e-12;
    let mut ecc_lo = vec![0.0f64; n];
    let mut ecc_hi = vec![f64::INFINITY; n];
    let mut candidate = vec![true; n];
    let mut lower = 0.0f64;
    let mut upper = f64::INFINITY;
    let mut sources = 0;
    let mut pick_high = true;
    while sources < max_sources {
        let live = (0..n).filter(|&v| candidate[v]);
        let v = if pick_high {
            live.max_by(|&a, &b| ecc_hi[a].total_cmp(&ecc_hi[b]).then(b.cmp(&a)))
        } else {
            live.min_by(|&a, &b| ecc_lo[a].total_cmp(&ecc_lo[b]).then(a.cmp(&b)))
        };
        let Some(v) = v else { break };
        pick_high = !pick_high;
        let dist = g.dijkstra(v, f64::INFINITY);
        sources += 1;
        let ecc = dist.iter().copied().fold(0.0, f64::max);
        candidate[v] = false;
        lower = lower.max(ecc);
        for w in 0..n {
            ecc_lo[w] = ecc_lo[w].max(dist[w].max(ecc - dist[w]));
            ecc_hi[w] = ecc_hi[w].min(ecc + dist[w]);
        }
        upper = (0..n).map(|w| ecc_hi[w]).fold(0.0, f64::max).min(upper).min(2.0 * ecc);
        if upper - lower <= tol * upper {
            break;
        }
        for w in 0..n {
            if candidate[w] && ecc_hi[w] <= lower + tol * lower && ecc_lo[w] >= 0.5 * upper - tol * upper {
                candidate[w] = false;
            }
        }
        if !candidate.iter().any(|&c| c) {
            upper = lower;
            break;
        }
    }
    DiameterEstimate { lower, upper, exact: upper - lower <= tol * upper, sources }
}

/// Diameter bracket of the zero curve in computational units.
pub fn diameter_estimate(mesh: &CurveMesh) -> DiameterEstimate {
    graph_diameter(&shortcut_graph(mesh, SHORTCUT_RINGS), MAX_SOURCES)
}

/// The lower end of [`diameter_estimate`], which is a realized distance.
pub fn diameter(mesh: &CurveMesh) -> f64 {
    diameter_estimate(mesh).lower
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_graph_diameter_is_exact() {
        let n = 9;
        let mut g = WeightedGraph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n, 1.0);
        }
        let est = graph_diameter(&g, MAX_SOURCES);
        assert!(est.exact);
        assert_eq!(est.lower, 4.0);
    }

    #[test]
    fn path_graph_diameter() {
        let mut g = WeightedGraph::new(5);
        for i in 0..4 {
            g.add_edge(i, i + 1, 0.5 + i as f64);
        }
        let est = graph_diameter(&g, MAX_SOURCES);
        assert!(est.exact);
        assert!((est.lower - 8.0).abs() < 1e-12);
    }
}
