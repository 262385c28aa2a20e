//! Zero curves of sections of `O(d)` on `CP^2` as branched covers of `CP^1`.
//!
//! A generic point `c ∉ Z(s)` defines the pencil of lines through `c`; the
//! projection from `c` restricts to a degree-`d` branched cover
//! `Z(s) → CP^1` with `d(d−1)` simple branch values. Triangulating the base
//! with the branch values as vertices and lifting every vertex to its `d`
//! preimages yields a triangulation of the curve.

pub mod adjacency;
pub mod branch;
pub mod mesh;
pub mod pencil;
pub mod sphere;
pub(crate) mod track;






pub use adjacency::{sheet_adjacency, sheet_adjacency_bound, SheetAdjacency};
pub use branch::{detect_branch_points, detect_branch_points_with, BranchData, BranchOptions, BranchPoint};
pub use mesh::{build_mesh, CurveMesh, MeshVertex, DEFAULT_RESOLUTION};
pub use pencil::{choose_pencil, choose_pencil_with, fiber_roots, Pencil};
