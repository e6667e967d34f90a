//! Machine-readable CLI reports. JSON goes to stdout, the human summary to
//! stderr; every report carries a `format` version field.

use serde::Serialize;

use crate::csp::{GameCsp, PropagationTrace};
use crate::discretization::{DiscretizationPlan, LatticeStrategy};
use crate::game::{GameStats, Gmhg, PlayerId};
use crate::graph::PrimalGraphStats;
use crate::io::{lattice_entries, ProbEntry};
use crate::oracle::OracleResult;
use crate::strategy::is_epsilon_ne;

#[derive(Debug, Serialize)]
pub struct GameDigest {
    pub players: usize,
    pub max_actions: usize,
    pub max_neighborhood: usize,
    pub representation_size: usize,
}

impl GameDigest {
    pub fn of(stats: &GameStats) -> Self {
        GameDigest {
            players: stats.players,
            max_actions: stats.max_actions,
            max_neighborhood: stats.max_neighborhood,
            representation_size: stats.entries,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PlanReport {
    pub eps: f64,
    pub eps_effective: f64,
    /// `null` when no player constrains epsilon (interaction-free game).
    pub eps_max: Option<f64>,
    pub clamped: bool,
    pub interaction_free: bool,
    pub s: Vec<u64>,
    pub tau: Vec<f64>,
}

impl PlanReport {
    pub fn of(plan: &DiscretizationPlan) -> Self {
        PlanReport {
            eps: plan.eps(),
            eps_effective: plan.eps_effective(),
            eps_max: plan.eps_max(),
            clamped: plan.clamped(),
            interaction_free: plan.eps_max().is_none(),
            s: plan.sizes().to_vec(),
            tau: (0..plan.sizes().len())
                .map(|i| plan.step(PlayerId(i)))
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SolutionReport {
    pub mixed: Vec<Vec<ProbEntry>>,
    pub regrets: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct TraceReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub propagation_rounds: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deleted_values: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain_sizes_after: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_sizes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution_count_compact: Option<u128>,
}

#[derive(Debug, Serialize)]
pub struct SolveReport {
    pub format: String,
    pub game: GameDigest,
    pub plan: PlanReport,
    pub method: String,
    pub mode: String,
    pub found: bool,
    pub solution_count: usize,
    pub solutions: Vec<SolutionReport>,
    pub trace: TraceReport,
    pub wall_ms: f64,
}

/// Assembles the solve report; every solution is re-verified against the
/// epsilon-equilibrium predicate before it is listed.
pub fn solve_report(
    game: &Gmhg,
    csp: &GameCsp,
    method: &str,
    mode: &str,
    assignments: &[Vec<usize>],
    trace: TraceReport,
    wall_ms: f64,
) -> SolveReport {
    let solutions: Vec<SolutionReport> = assignments
        .iter()
        .map(|a| {
            let lattice: Vec<LatticeStrategy> = csp.lattice_profile(a);
            let profile = csp.grid_profile(a);
            let check = is_epsilon_ne(game, &profile, csp.eps());
            assert!(
                check.is_equilibrium,
                "solver returned a profile that fails re-verification"
            );
            SolutionReport {
                mixed: lattice_entries(&lattice),
                regrets: check.regrets,
            }
        })
        .collect();
    SolveReport {
        format: "solve-report-v1".to_string(),
        game: GameDigest::of(&game.representation_size()),
        plan: PlanReport::of(csp.plan()),
        method: method.to_string(),
        mode: mode.to_string(),
        found: !solutions.is_empty(),
        solution_count: solutions.len(),
        solutions,
        trace,
        wall_ms,
    }
}

impl TraceReport {
    pub fn empty() -> Self {
        TraceReport {
            propagation_rounds: None,
            deleted_values: None,
            domain_sizes_after: None,
            table_sizes: None,
            solution_count_compact: None,
        }
    }

    pub fn from_propagation(trace: &PropagationTrace, sizes_after: Vec<usize>) -> Self {
        TraceReport {
            propagation_rounds: Some(trace.converged_round),
            deleted_values: Some(trace.deletions.len()),
            domain_sizes_after: Some(sizes_after),
            table_sizes: None,
            solution_count_compact: None,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct InfoReport {
    pub format: String,
    pub game: GameDigest,
    pub stats: GameStats,
    pub primal: PrimalGraphStats,
    pub plan_theorem: PlanReport,
    /// Present when the game is a graphical game with [0,1] payoffs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plan_corollary: Option<PlanReport>,
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub format: String,
    pub eps: f64,
    pub regrets: Vec<f64>,
    pub max_regret: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub format: String,
    pub method: crate::oracle::OracleMethod,
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mixed: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified_regret: Option<f64>,
    pub degenerate: bool,
}

impl OracleReport {
    pub fn found(r: &OracleResult) -> Self {
        OracleReport {
            format: "oracle-report-v1".to_string(),
            method: r.method,
            found: true,
            mixed: Some(
                r.profile
                    .players()
                    .iter()
                    .map(|s| s.probs().to_vec())
                    .collect(),
            ),
            certified_regret: Some(r.certified_regret),
            degenerate: r.degenerate,
        }
    }

    pub fn not_found(method: crate::oracle::OracleMethod) -> Self {
        OracleReport {
            format: "oracle-report-v1".to_string(),
            method,
            found: false,
            mixed: None,
            certified_regret: None,
            degenerate: false,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TrialRow {
    pub trial: u64,
    pub seed: u64,
    pub oracle_eta: f64,
    pub eps_effective: f64,
    pub clamped: bool,
    pub rounded_regret: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct ExperimentReport {
    pub format: String,
    pub kind: String,
    pub eps: f64,
    pub trials: u64,
    pub rows: Vec<TrialRow>,
    pub passes: u64,
    pub failures: u64,
}

#[derive(Debug, Serialize)]
pub struct ValidateReport {
    pub format: String,
    pub valid: bool,
    pub violations: Vec<String>,
}
