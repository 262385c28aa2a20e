//! Weighted undirected graphs and Dijkstra searches on mesh edge sets.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Adjacency lists `(neighbour, weight)`.
#[derive(Debug, Clone, Default)]
pub struct WeightedGraph {
    pub adj: Vec<Vec<(usize, f64)>>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n] }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn add_edge(&mut self, a: usize, b: usize, w: f64) {
        self.adj[a].push((b, w));
        self.adj[b].push((a, w));
    }

    /// Distances from `source`, exploring only vertices within `radius`
    /// (unreached vertices stay at infinity).
    pub fn dijkstra(&self, source: usize, radius: f64) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.len()];
        self.dijkstra_visit(source, radius, 0, &mut dist, |_, _| {});
        dist
    }

    /// Dijkstra on the vertices with index at least `floor`, reporting each
    /// settled vertex with its tree parent. `dist` must be infinite on every
    /// vertex the search can reach.
    pub fn dijkstra_visit(&self, source: usize, radius: f64, floor: usize, dist: &mut [f64], mut settle: impl FnMut(usize, Option<usize>)) {
        let mut parent = vec![usize::MAX; self.len()];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(Entry(0.0, source));
        while let Some(Entry(d, v)) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            settle(v, (parent[v] != usize::MAX).then_some(parent[v]));
            for &(w, len) in &self.adj[v] {
                let nd = d + len;
                if w >= floor && nd < dist[w] && nd <= radius {
                    dist[w] = nd;
                    parent[w] = v;
                    heap.push(Entry(nd, w));
                }
            }
        }
    }
}

/// Min-heap entry ordered by distance.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
