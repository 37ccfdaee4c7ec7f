//! k-Farey graphs.
//!
//! `F_k` joins two reduced fractions when their determinant pairing is
//! exactly `k`; `F_≤k` joins them when it is between 1 and `k`. This crate
//! builds finite windows of both, checks their component and structural
//! properties, works with the dual tree of the Farey tessellation, and
//! searches for large cliques in `F_≤k`.

pub mod bounds;
pub mod cert;
pub mod clique;
pub mod color;
pub mod dsu;
pub mod dual;
pub mod error;
pub mod graph;
pub mod mobius;
pub mod neighbors;
pub mod projline;
pub mod structure;
pub mod suites;
pub mod vertex;

pub use bounds::{bounds_table, lower_bound_from_construction, BoundsRow, Certificate};
pub use cert::{parse_certificate, write_certificate};
pub use clique::{max_clique, verify_clique, CliqueOptions, CliqueResult};
pub use color::{color_by_lines, greedy_color, ColoringResult, GreedyOrder};
pub use dual::{
    construct_r, construct_s, construct_t, continuant_numerator, det_via_lr, incident_vertices,
    lr_sequence, root_triangle, triangle_neighbors, DualSubgraph, IncidenceResult, LRSequence,
    TriangleNode,
};
pub use error::{Error, Result};
pub use graph::{build, count_components, ComponentReport, LevelGraph, Mode, WindowKind, WindowSpec};
pub use mobius::Mobius;
pub use neighbors::{find_seed_neighbor, neighbors_exact, predecessors};
pub use projline::{enumerate_lines, min_line_count_above, next_prime, phi, LineSpace, ProjLine};
pub use vertex::{canonicalize, det_pair, level, FareyVertex, Level};
