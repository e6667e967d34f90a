//! Graphical multi-hypermatrix games (GMhGs) with sparse uniform
//! discretization of the mixed-strategy space.
//!
//! The core result this crate implements: for every exact Nash equilibrium
//! of a GMhG, its closest point on a per-player simplex grid of size
//! `s_i = ceil(2 |A_i| max_{j affected by i} sum_C R_{j,C}(|C|-1) / eps)`
//! is an epsilon-Nash equilibrium. On top of that sit the game-induced
//! constraint network over the grid and three solvers (brute-force joint
//! search, generalized arc consistency, and two-pass dynamic programming
//! on tree-structured games), plus desk-scale oracles that certify
//! equilibria independently.
//!
//! See the `examples/` directory for one runnable walkthrough per
//! capability; the `gmhg` binary exposes the same operations on files.

pub mod csp;
pub mod discretization;
pub mod error;
pub mod game;
pub mod generate;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod report;
pub mod strategy;
pub mod treesolve;

#[cfg(test)]
pub(crate) mod testgames;

pub use csp::{arc_consistency, brute_force_solve, nashprop_solve, GameCsp, SearchMode};
pub use discretization::{
    enumerate_lattice, lattice_count, round_to_grid, round_to_lattice, DiscretizationPlan,
    LatticeStrategy,
};
pub use error::{Error, Result};
pub use game::{
    make_normal_form, make_polymatrix, ActionSet, GameStats, Gmhg, Hyperedge, PayoffRanges,
    PlayerId, Violation,
};
pub use graph::{primal_graph_stats, PrimalGraph, PrimalGraphStats};
pub use oracle::{
    analytic_2x2, default_starts, finegrid_multi_start, finegrid_refine, support_enum_bimatrix,
    OracleMethod, OracleResult,
};
pub use strategy::{
    conditional_payoff, expected_payoff, is_epsilon_ne, product_difference_expansion, regret,
    DeltaVector, EquilibriumCheck, JointMixedStrategy, MixedStrategy,
};
pub use treesolve::{tree_solve, TreeMode, TreeSolution};
