//! Thin command-line front end over the library: file I/O, generators,
//! solver dispatch, and JSON reporting. Reports go to stdout, human
//! summaries to stderr. Exit codes: 0 ok, 1 domain failure, 2 usage or
//! parse error, 3 budget refusal.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use gmhg::csp::{brute_force_solve, nashprop_solve, GameCsp, SearchMode};
use gmhg::discretization::{round_to_lattice, DiscretizationPlan};
use gmhg::error::{Error, Result};
use gmhg::generate::{generate, GameKind};
use gmhg::graph::primal_graph_stats;
use gmhg::io;
use gmhg::oracle::{
    analytic_2x2, default_starts, finegrid_multi_start, support_enum_bimatrix, OracleMethod,
};
use gmhg::report::{
    solve_report, CheckReport, ExperimentReport, GameDigest, InfoReport, OracleReport, PlanReport,
    TraceReport, TrialRow, ValidateReport,
};
use gmhg::strategy::{is_epsilon_ne, JointMixedStrategy};
use gmhg::treesolve::{tree_solve, TreeMode};

#[derive(Parser)]
#[command(name = "gmhg", version, about = "graphical multi-hypermatrix games on sparse strategy grids")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a gmhg-v1 file for structural violations.
    Validate { game: PathBuf },
    /// Representation sizes, primal-graph stats and grid sizes at an eps.
    Info {
        game: PathBuf,
        #[arg(long)]
        eps: f64,
    },
    /// Verify a strategy file against a game at an eps.
    Check {
        game: PathBuf,
        strategy: PathBuf,
        #[arg(long)]
        eps: f64,
    },
    /// Round a strategy onto the grid sized for an eps.
    Round {
        game: PathBuf,
        strategy: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search the grid for epsilon-equilibria.
    Solve {
        game: PathBuf,
        #[arg(long)]
        eps: f64,
        /// brute | tree | nashprop-brute
        #[arg(long, default_value = "brute")]
        method: String,
        /// Collect every grid solution instead of stopping at the first.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u128,
        /// Cap on solutions listed in the report (the count is exact).
        #[arg(long, default_value_t = 64)]
        max_list: usize,
    },
    /// Equilibrium oracles: analytic2x2 | finegrid | support-enum.
    Oracle {
        game: PathBuf,
        #[arg(long)]
        method: String,
        /// Uniformity parameter for support-enum.
        #[arg(long)]
        r: Option<u64>,
        /// Target eps for support-enum.
        #[arg(long)]
        eps: Option<f64>,
        /// Scale halvings for finegrid.
        #[arg(long, default_value_t = 45)]
        levels: u32,
        /// Seed for finegrid's random starts.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u128,
    },
    /// Write a generated game: mp | coord | rps | random-nf |
    /// random-tree-poly | random-gg.
    Gen {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Neighborhood cap for random-gg.
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// End-to-end rounding experiment: oracle equilibrium -> plan ->
    /// round -> regret check, per seeded trial.
    ExperimentTheorem1 {
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        eps: f64,
        /// 2x2 | tree-poly
        #[arg(long, default_value = "2x2")]
        kind: String,
        #[arg(long)]
        seed: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn emit<T: serde::Serialize>(report: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(report)?);
    Ok(())
}

fn require_nonnegative(eps: f64) -> Result<()> {
    if eps < 0.0 || !eps.is_finite() {
        return Err(Error::Usage(format!("eps must be a nonnegative number, got {eps}")));
    }
    Ok(())
}

fn run(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Validate { game } => {
            let text = std::fs::read_to_string(&game)?;
            let (_, violations) = io::game_and_violations_from_json(&text)?;
            let report = ValidateReport {
                format: "validate-report-v1".to_string(),
                valid: violations.is_empty(),
                violations: violations.iter().map(|v| v.to_string()).collect(),
            };
            emit(&report)?;
            if report.valid {
                eprintln!("valid gmhg-v1 file");
                Ok(0)
            } else {
                for v in &report.violations {
                    eprintln!("violation: {v}");
                }
                Ok(1)
            }
        }

        Cmd::Info { game, eps } => {
            require_nonnegative(eps)?;
            if eps == 0.0 {
                return Err(Error::Usage("grid sizing needs eps > 0".into()));
            }
            let g = io::read_game(&game)?;
            g.require_valid()?;
            let stats = g.representation_size();
            let ranges = g.payoff_ranges();
            let plan = DiscretizationPlan::for_gmhg(&g, &ranges, eps);
            let corollary = DiscretizationPlan::for_graphical_game(&g, eps).ok();
            let report = InfoReport {
                format: "info-v1".to_string(),
                game: GameDigest::of(&stats),
                stats,
                primal: primal_graph_stats(&g),
                plan_theorem: PlanReport::of(&plan),
                plan_corollary: corollary.as_ref().map(PlanReport::of),
            };
            emit(&report)?;
            eprintln!(
                "n={} entries={} s={:?}{}",
                stats.players,
                stats.entries,
                plan.sizes(),
                if plan.clamped() { " (eps clamped)" } else { "" }
            );
            Ok(0)
        }

        Cmd::Check { game, strategy, eps } => {
            require_nonnegative(eps)?;
            let g = io::read_game(&game)?;
            g.require_valid()?;
            let p = io::read_strategy(&strategy)?;
            p.check_for(&g)?;
            let check = is_epsilon_ne(&g, &p, eps);
            let report = CheckReport {
                format: "check-report-v1".to_string(),
                eps,
                max_regret: check.max_regret(),
                regrets: check.regrets.clone(),
                pass: check.is_equilibrium,
            };
            emit(&report)?;
            eprintln!(
                "{}: max regret {:.6e} vs eps {eps}",
                if report.pass { "pass" } else { "fail" },
                report.max_regret
            );
            Ok(if report.pass { 0 } else { 1 })
        }

        Cmd::Round { game, strategy, eps, output } => {
            require_nonnegative(eps)?;
            if eps == 0.0 {
                return Err(Error::Usage("grid sizing needs eps > 0".into()));
            }
            let g = io::read_game(&game)?;
            g.require_valid()?;
            let p = io::read_strategy(&strategy)?;
            p.check_for(&g)?;
            let ranges = g.payoff_ranges();
            let plan = DiscretizationPlan::for_gmhg(&g, &ranges, eps);
            let lattice = round_to_lattice(&p, &plan);
            let rounded = JointMixedStrategy::new(lattice.iter().map(|l| l.to_mixed()).collect());
            let dist = p.linf_distance(&rounded);
            let json = io::lattice_strategy_to_json(&lattice, Some(dist));
            match output {
                Some(path) => std::fs::write(path, &json)?,
                None => print!("{json}"),
            }
            eprintln!("rounded onto s={:?}, linf distance {dist:.6e}", plan.sizes());
            Ok(0)
        }

        Cmd::Solve { game, eps, method, all, budget, max_list } => {
            require_nonnegative(eps)?;
            if eps == 0.0 {
                return Err(Error::Usage("grid sizing needs eps > 0".into()));
            }
            let g = io::read_game(&game)?;
            g.require_valid()?;
            let ranges = g.payoff_ranges();
            let plan = DiscretizationPlan::for_gmhg(&g, &ranges, eps);
            let csp = GameCsp::induce(&g, plan, eps, budget)?;
            let started = Instant::now();
            let mode_str = if all { "all" } else { "first" };
            let (assignments, trace) = match method.as_str() {
                "brute" => {
                    let mode = if all { SearchMode::All } else { SearchMode::First };
                    let sols = brute_force_solve(&csp, mode, budget)?;
                    (sols, TraceReport::empty())
                }
                "tree" => {
                    let mode = if all { TreeMode::AllCompact } else { TreeMode::First };
                    let sol = tree_solve(&csp, mode, budget)?;
                    let mut trace = TraceReport::empty();
                    trace.table_sizes = Some(sol.table_sizes());
                    trace.solution_count_compact = sol.count();
                    let sols = if all {
                        sol.enumerate_all(budget.min(1 << 20) as usize)?
                    } else {
                        sol.first().into_iter().collect()
                    };
                    (sols, trace)
                }
                "nashprop-brute" => {
                    let mode = if all { SearchMode::All } else { SearchMode::First };
                    let (sols, ptrace, filtered) = nashprop_solve(&csp, mode, budget)?;
                    let trace =
                        TraceReport::from_propagation(&ptrace, filtered.domain_sizes());
                    // translate filtered indices back through lattice counts
                    let translated: Vec<Vec<usize>> = sols
                        .iter()
                        .map(|a| {
                            a.iter()
                                .enumerate()
                                .map(|(j, &v)| {
                                    let counts = filtered.domains()[j][v].counts();
                                    csp.domains()[j]
                                        .iter()
                                        .position(|l| l.counts() == counts)
                                        .expect("filtered value came from the full domain")
                                })
                                .collect()
                        })
                        .collect();
                    (translated, trace)
                }
                other => {
                    return Err(Error::Usage(format!(
                        "unknown method {other:?}; expected brute|tree|nashprop-brute"
                    )))
                }
            };
            let wall_ms = started.elapsed().as_secs_f64() * 1e3;
            let listed: Vec<Vec<usize>> =
                assignments.iter().take(max_list).cloned().collect();
            let mut report = solve_report(&g, &csp, &method, mode_str, &listed, trace, wall_ms);
            report.solution_count = assignments.len();
            report.found = !assignments.is_empty();
            emit(&report)?;
            eprintln!(
                "{} solutions via {method} in {wall_ms:.1} ms (domains {:?})",
                assignments.len(),
                csp.domain_sizes()
            );
            if !all && assignments.is_empty() {
                return Ok(1);
            }
            Ok(0)
        }

        Cmd::Oracle { game, method, r, eps, levels, seed, budget } => {
            let g = io::read_game(&game)?;
            g.require_valid()?;
            match method.as_str() {
                "analytic2x2" => {
                    let res = analytic_2x2(&g)?;
                    emit(&OracleReport::found(&res))?;
                    eprintln!(
                        "analytic 2x2: certified regret {:.3e}{}",
                        res.certified_regret,
                        if res.degenerate { " (degenerate)" } else { "" }
                    );
                    Ok(0)
                }
                "finegrid" => {
                    let starts = default_starts(&g, seed, 8);
                    let res = finegrid_multi_start(&g, &starts, levels, budget, None)?;
                    emit(&OracleReport::found(&res))?;
                    eprintln!("finegrid: certified regret {:.3e}", res.certified_regret);
                    Ok(0)
                }
                "support-enum" => {
                    let r = r.ok_or_else(|| Error::Usage("--r is required for support-enum".into()))?;
                    let eps = eps.ok_or_else(|| Error::Usage("--eps is required for support-enum".into()))?;
                    require_nonnegative(eps)?;
                    match support_enum_bimatrix(&g, r, eps, budget)? {
                        Some(res) => {
                            emit(&OracleReport::found(&res))?;
                            eprintln!("support-enum: found at r={r}, regret {:.3e}", res.certified_regret);
                            Ok(0)
                        }
                        None => {
                            emit(&OracleReport::not_found(OracleMethod::SupportEnum))?;
                            eprintln!("support-enum: no r-uniform pair within eps={eps} at r={r}");
                            Ok(1)
                        }
                    }
                }
                other => Err(Error::Usage(format!(
                    "unknown method {other:?}; expected analytic2x2|finegrid|support-enum"
                ))),
            }
        }

        Cmd::Gen { kind, n, m, k, seed, output } => {
            let kind: GameKind = kind.parse()?;
            let g = generate(kind, n, m, k, seed)?;
            let json = io::game_to_json(&g);
            match output {
                Some(path) => std::fs::write(path, &json)?,
                None => print!("{json}"),
            }
            eprintln!(
                "generated {:?}: n={} entries={}",
                kind,
                g.num_players(),
                g.representation_size().entries
            );
            Ok(0)
        }

        Cmd::ExperimentTheorem1 { trials, eps, kind, seed } => {
            require_nonnegative(eps)?;
            if eps == 0.0 {
                return Err(Error::Usage("the experiment needs eps > 0".into()));
            }
            let mut rows = Vec::new();
            for t in 0..trials {
                let trial_seed = seed.wrapping_add(t);
                let (g, oracle) = match kind.as_str() {
                    "2x2" => {
                        let g = gmhg::generate::random_normal_form(2, 2, trial_seed)?;
                        let o = analytic_2x2(&g)?;
                        (g, o)
                    }
                    "tree-poly" => {
                        let g = gmhg::generate::random_tree_polymatrix(4, 2, trial_seed)?;
                        let starts = default_starts(&g, trial_seed, 8);
                        let o = finegrid_multi_start(
                            &g,
                            &starts,
                            48,
                            10_000_000,
                            Some(eps / 20.0),
                        )?;
                        (g, o)
                    }
                    other => {
                        return Err(Error::Usage(format!(
                            "unknown kind {other:?}; expected 2x2|tree-poly"
                        )))
                    }
                };
                let ranges = g.payoff_ranges();
                let plan = DiscretizationPlan::for_gmhg(&g, &ranges, eps);
                let rounded = gmhg::discretization::round_to_grid(&oracle.profile, &plan);
                let check = is_epsilon_ne(&g, &rounded, eps);
                let eta = oracle.certified_regret;
                let bound = eps + eta + 1e-9;
                let regret_after = check.max_regret();
                rows.push(TrialRow {
                    trial: t,
                    seed: trial_seed,
                    oracle_eta: eta,
                    eps_effective: plan.eps_effective(),
                    clamped: plan.clamped(),
                    rounded_regret: regret_after,
                    bound,
                    pass: regret_after <= bound,
                });
            }
            let passes = rows.iter().filter(|r| r.pass).count() as u64;
            let failures = trials - passes;
            let report = ExperimentReport {
                format: "experiment-theorem1-v1".to_string(),
                kind,
                eps,
                trials,
                rows,
                passes,
                failures,
            };
            emit(&report)?;
            eprintln!("theorem-1 experiment: {passes}/{trials} passed");
            Ok(if failures == 0 { 0 } else { 1 })
        }
    }
}
