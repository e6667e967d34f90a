//! Game-induced constraint network over the discretized strategy space.
//!
//! One variable per player whose domain is the player's simplex lattice;
//! one constraint per player, holding iff the player's regret under the
//! local assignment is at most epsilon. Constraints are evaluated lazily;
//! materializing a table is opt-in and budget-guarded.

use std::collections::BTreeSet;

use crate::discretization::{enumerate_lattice, DiscretizationPlan, LatticeStrategy};
use crate::error::{Error, Result};
use crate::game::{Gmhg, PlayerId};
use crate::strategy::{regret_with, REGRET_TOL};

/// Search scope for the brute-force solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    First,
    All,
}

/// The induced CSP. Domains are per-player lists of lattice strategies;
/// indices into those lists are the assignment currency everywhere.
#[derive(Debug, Clone)]
pub struct GameCsp<'g> {
    game: &'g Gmhg,
    plan: DiscretizationPlan,
    eps: f64,
    domains: Vec<Vec<LatticeStrategy>>,
    /// realized probabilities, parallel to `domains`
    probs: Vec<Vec<Vec<f64>>>,
}

impl<'g> GameCsp<'g> {
    /// Builds domains by full lattice enumeration, refusing if any
    /// player's lattice exceeds `budget` values.
    pub fn induce(
        game: &'g Gmhg,
        plan: DiscretizationPlan,
        eps: f64,
        budget: u128,
    ) -> Result<Self> {
        game.require_valid()?;
        let n = game.num_players();
        let mut domains = Vec::with_capacity(n);
        for i in 0..n {
            let m = game.num_actions(PlayerId(i));
            let dom: Vec<LatticeStrategy> =
                enumerate_lattice(&plan, PlayerId(i), m, budget)?.collect();
            domains.push(dom);
        }
        let probs = domains
            .iter()
            .map(|d| d.iter().map(|l| l.probs()).collect())
            .collect();
        Ok(GameCsp {
            game,
            plan,
            eps,
            domains,
            probs,
        })
    }

    pub fn game(&self) -> &Gmhg {
        self.game
    }

    pub fn plan(&self) -> &DiscretizationPlan {
        &self.plan
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn domains(&self) -> &[Vec<LatticeStrategy>] {
        &self.domains
    }

    pub fn domain_sizes(&self) -> Vec<usize> {
        self.domains.iter().map(|d| d.len()).collect()
    }

    /// Product of domain sizes.
    pub fn joint_size(&self) -> u128 {
        self.domains
            .iter()
            .fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128))
    }

    /// True once some domain has been filtered empty: no grid profile can
    /// satisfy all constraints, so no grid epsilon-equilibrium exists for
    /// this plan.
    pub fn certifies_empty(&self) -> bool {
        self.domains.iter().any(|d| d.is_empty())
    }

    /// Constraint scope: N(owner), sorted.
    pub fn scope(&self, owner: PlayerId) -> &[usize] {
        self.game.neighborhood(owner)
    }

    /// The owner's regret given domain indices chosen for (at least) the
    /// constraint scope. Strategies outside N(owner) are never read.
    pub fn local_regret(&self, owner: PlayerId, value_at: &dyn Fn(usize) -> usize) -> f64 {
        let lookup = |j: usize| self.probs[j][value_at(j)].as_slice();
        regret_with(self.game, owner, &lookup)
    }

    /// Best-response indicator: 1 iff the owner's regret under the local
    /// assignment is at most eps (plus tolerance).
    pub fn constraint_holds(&self, owner: PlayerId, value_at: &dyn Fn(usize) -> usize) -> bool {
        self.local_regret(owner, value_at) <= self.eps + REGRET_TOL
    }

    /// Size of the owner's constraint table if materialized: the product
    /// of domain sizes over the scope.
    pub fn table_size(&self, owner: PlayerId) -> u128 {
        self.scope(owner)
            .iter()
            .fold(1u128, |acc, &j| acc.saturating_mul(self.domains[j].len() as u128))
    }

    /// Materializes the owner's constraint as a flat 0/1 table over scope
    /// assignments in odometer order. Opt-in and budget-guarded: table
    /// sizes grow as (domain)^(scope arity).
    pub fn materialize_constraint(&self, owner: PlayerId, budget: u128) -> Result<Vec<bool>> {
        let size = self.table_size(owner);
        if size > budget {
            return Err(Error::BudgetExceeded {
                what: "constraint table",
                player: owner.0,
                required: size,
                budget,
            });
        }
        let scope = self.scope(owner).to_vec();
        let sizes: Vec<usize> = scope.iter().map(|&j| self.domains[j].len()).collect();
        let mut idx = vec![0usize; scope.len()];
        let mut table = Vec::with_capacity(size as usize);
        loop {
            let value_at = |j: usize| {
                let pos = scope.binary_search(&j).expect("j in scope");
                idx[pos]
            };
            table.push(self.constraint_holds(owner, &value_at));
            if !crate::game::advance_odometer(&mut idx, &sizes) {
                break;
            }
        }
        Ok(table)
    }

    /// Re-checks a full assignment against every constraint.
    pub fn satisfies_all(&self, assignment: &[usize]) -> bool {
        (0..self.game.num_players())
            .all(|i| self.constraint_holds(PlayerId(i), &|j: usize| assignment[j]))
    }

    /// Lattice strategies selected by a full assignment.
    pub fn lattice_profile(&self, assignment: &[usize]) -> Vec<LatticeStrategy> {
        assignment
            .iter()
            .enumerate()
            .map(|(i, &v)| self.domains[i][v].clone())
            .collect()
    }

    /// Joint mixed strategy realized by a full assignment.
    pub fn grid_profile(&self, assignment: &[usize]) -> crate::strategy::JointMixedStrategy {
        crate::strategy::JointMixedStrategy::new(
            assignment
                .iter()
                .enumerate()
                .map(|(i, &v)| self.domains[i][v].to_mixed())
                .collect(),
        )
    }

    /// Canonical form of an assignment for set comparisons that survive
    /// domain filtering: the per-player integer count vectors.
    pub fn counts_profile(&self, assignment: &[usize]) -> Vec<Vec<u64>> {
        assignment
            .iter()
            .enumerate()
            .map(|(i, &v)| self.domains[i][v].counts().to_vec())
            .collect()
    }

    fn with_domains(&self, domains: Vec<Vec<LatticeStrategy>>) -> GameCsp<'g> {
        let probs = domains
            .iter()
            .map(|d| d.iter().map(|l| l.probs()).collect())
            .collect();
        GameCsp {
            game: self.game,
            plan: self.plan.clone(),
            eps: self.eps,
            domains,
            probs,
        }
    }
}

/// Enumerates the full joint domain, keeping assignments that satisfy all
/// constraints. `All` refuses up front if the joint space exceeds the
/// budget; `First` stops at the first solution but refuses if the budget
/// runs out before either finding one or exhausting the space.
pub fn brute_force_solve(
    csp: &GameCsp,
    mode: SearchMode,
    budget: u128,
) -> Result<Vec<Vec<usize>>> {
    let joint = csp.joint_size();
    if mode == SearchMode::All && joint > budget {
        return Err(Error::GlobalBudgetExceeded {
            what: "brute-force grid search",
            required: joint,
            budget,
        });
    }
    if csp.certifies_empty() {
        return Ok(Vec::new());
    }
    let n = csp.domains().len();
    let sizes: Vec<usize> = csp.domain_sizes();
    let mut assignment = vec![0usize; n];
    let mut out = Vec::new();
    let mut examined: u128 = 0;
    loop {
        examined += 1;
        if examined > budget {
            return Err(Error::GlobalBudgetExceeded {
                what: "brute-force grid search",
                required: joint,
                budget,
            });
        }
        if csp.satisfies_all(&assignment) {
            out.push(assignment.clone());
            if mode == SearchMode::First {
                return Ok(out);
            }
        }
        if !crate::game::advance_odometer(&mut assignment, &sizes) {
            break;
        }
    }
    Ok(out)
}

/// Per-round instrumentation of the propagation phase.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PropagationTrace {
    /// Domain sizes per player at the end of each round.
    pub round_sizes: Vec<Vec<usize>>,
    /// Deleted values as (round, player, counts vector).
    pub deletions: Vec<(usize, usize, Vec<u64>)>,
    /// Round index at which no deletion happened.
    pub converged_round: usize,
}

/// Generalized arc consistency: repeatedly deletes any domain value that
/// participates in no satisfying assignment of some constraint whose scope
/// contains it. Deletions within a round are computed against the
/// round-start domains and merged at the round boundary, so traces are
/// reproducible; the fixpoint is the same either way. Sound: a value
/// occurring in any grid epsilon-equilibrium is never deleted.
pub fn arc_consistency<'g>(csp: &GameCsp<'g>) -> (GameCsp<'g>, PropagationTrace) {
    let n = csp.game().num_players();
    let mut domains: Vec<Vec<LatticeStrategy>> = csp.domains().to_vec();
    // membership in terms of original domain indices
    let mut alive: Vec<Vec<usize>> = csp
        .domains()
        .iter()
        .map(|d| (0..d.len()).collect())
        .collect();
    let mut trace = PropagationTrace {
        round_sizes: Vec::new(),
        deletions: Vec::new(),
        converged_round: 0,
    };
    let mut round = 0usize;
    loop {
        round += 1;
        let mut doomed: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for owner in 0..n {
            let scope: Vec<usize> = csp.scope(PlayerId(owner)).to_vec();
            for &j in &scope {
                for &v in &alive[j] {
                    if !has_support(csp, PlayerId(owner), &scope, &alive, j, v) {
                        doomed[j].insert(v);
                    }
                }
            }
        }
        let mut any = false;
        for j in 0..n {
            if doomed[j].is_empty() {
                continue;
            }
            any = true;
            for &v in &doomed[j] {
                trace
                    .deletions
                    .push((round, j, csp.domains()[j][v].counts().to_vec()));
            }
            alive[j].retain(|v| !doomed[j].contains(v));
        }
        trace
            .round_sizes
            .push(alive.iter().map(|a| a.len()).collect());
        if !any {
            trace.converged_round = round;
            break;
        }
    }
    for j in 0..n {
        domains[j] = alive[j]
            .iter()
            .map(|&v| csp.domains()[j][v].clone())
            .collect();
    }
    (csp.with_domains(domains), trace)
}

/// Does value `v` of variable `j` extend to a satisfying assignment of
/// `owner`'s constraint, drawing the other scope variables from their
/// alive sets?
fn has_support(
    csp: &GameCsp,
    owner: PlayerId,
    scope: &[usize],
    alive: &[Vec<usize>],
    j: usize,
    v: usize,
) -> bool {
    let others: Vec<usize> = scope.iter().copied().filter(|&x| x != j).collect();
    let sizes: Vec<usize> = others.iter().map(|&x| alive[x].len()).collect();
    if sizes.iter().any(|&s| s == 0) {
        return false;
    }
    let mut pick = vec![0usize; others.len()];
    loop {
        let value_at = |q: usize| {
            if q == j {
                v
            } else {
                let pos = others.iter().position(|&x| x == q).expect("q in scope");
                alive[others[pos]][pick[pos]]
            }
        };
        if csp.constraint_holds(owner, &value_at) {
            return true;
        }
        if !crate::game::advance_odometer(&mut pick, &sizes) {
            return false;
        }
    }
}

/// Propagation followed by depth-first backtracking search over the
/// filtered domains, checking each constraint as soon as its scope is
/// fully assigned. Returns the filtered CSP's trace alongside the result.
pub fn nashprop_solve<'g>(
    csp: &GameCsp<'g>,
    mode: SearchMode,
    budget: u128,
) -> Result<(Vec<Vec<usize>>, PropagationTrace, GameCsp<'g>)> {
    let (filtered, trace) = arc_consistency(csp);
    if filtered.certifies_empty() {
        return Ok((Vec::new(), trace, filtered));
    }
    let n = filtered.game().num_players();
    // constraints become checkable once the max scope member is assigned
    let mut checkable_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let scope = filtered.scope(PlayerId(i));
        let last = scope.iter().copied().max().unwrap_or(i);
        checkable_at[last].push(i);
    }
    let sizes = filtered.domain_sizes();
    let mut assignment = vec![0usize; n];
    let mut out = Vec::new();
    let mut work: u128 = 0;
    fn descend(
        filtered: &GameCsp,
        checkable_at: &[Vec<usize>],
        sizes: &[usize],
        assignment: &mut Vec<usize>,
        depth: usize,
        mode: SearchMode,
        budget: u128,
        work: &mut u128,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<bool> {
        if depth == sizes.len() {
            out.push(assignment.clone());
            return Ok(mode == SearchMode::First);
        }
        for v in 0..sizes[depth] {
            assignment[depth] = v;
            *work += 1;
            if *work > budget {
                return Err(Error::GlobalBudgetExceeded {
                    what: "nashprop backtracking search",
                    required: *work,
                    budget,
                });
            }
            let ok = checkable_at[depth].iter().all(|&owner| {
                filtered.constraint_holds(PlayerId(owner), &|j: usize| assignment[j])
            });
            if ok && descend(
                filtered,
                checkable_at,
                sizes,
                assignment,
                depth + 1,
                mode,
                budget,
                work,
                out,
            )? {
                return Ok(true);
            }
        }
        Ok(false)
    }
    descend(
        &filtered,
        &checkable_at,
        &sizes,
        &mut assignment,
        0,
        mode,
        budget,
        &mut work,
        &mut out,
    )?;
    Ok((out, trace, filtered))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{ActionSet, Gmhg, Hyperedge};
    use crate::strategy::is_epsilon_ne;
    use crate::testgames::{asymmetric_pennies, matching_pennies};
    use std::collections::BTreeSet as Set;

    fn mp_csp(s: u64, eps: f64, game: &Gmhg) -> GameCsp<'_> {
        let plan = DiscretizationPlan::with_sizes(vec![s, s], eps);
        GameCsp::induce(game, plan, eps, 1 << 30).unwrap()
    }

    #[test]
    fn induced_domains() {
        let g = matching_pennies();
        let csp = mp_csp(4, 0.1, &g);
        assert_eq!(csp.domain_sizes(), vec![5, 5]);
        assert_eq!(csp.joint_size(), 25);
    }

    #[test]
    fn constraint_values_on_matching_pennies() {
        let g = matching_pennies();
        let csp = mp_csp(4, 0.1, &g);
        // opponent uniform (2,2) is domain index 2: both players indifferent
        for own in 0..5 {
            let value_at = |j: usize| if j == 0 { own } else { 2 };
            assert!(csp.constraint_holds(PlayerId(0), &value_at));
        }
        // mismatcher pinned at pure heads against pure heads: regret 1
        let value_at = |_: usize| 0usize;
        assert!(!csp.constraint_holds(PlayerId(1), &value_at));
        assert!((csp.local_regret(PlayerId(1), &value_at) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constraint_locality() {
        // 3 players, but player 0 only interacts with 1
        let g = crate::generate::random_tree_polymatrix(3, 2, 99).unwrap();
        let plan = DiscretizationPlan::with_sizes(vec![3, 3, 3], 0.2);
        let csp = GameCsp::induce(&g, plan, 0.2, 1 << 20).unwrap();
        let scope: Set<usize> = csp.scope(PlayerId(0)).iter().copied().collect();
        let outside: Vec<usize> = (0..3).filter(|j| !scope.contains(j)).collect();
        if outside.is_empty() {
            return; // this seed yielded a star around 0
        }
        for a in 0..4usize {
            let base = vec![a % 4, (a + 1) % 4, 0];
            let mut flipped = base.clone();
            for &j in &outside {
                flipped[j] = 3;
            }
            let r0 = csp.local_regret(PlayerId(0), &|j: usize| base[j]);
            let r1 = csp.local_regret(PlayerId(0), &|j: usize| flipped[j]);
            assert_eq!(r0, r1);
        }
    }

    #[test]
    fn brute_force_finds_uniform_on_fine_grid() {
        let g = matching_pennies();
        let csp = mp_csp(40, 0.1, &g);
        let sols = brute_force_solve(&csp, SearchMode::All, 1 << 30).unwrap();
        assert!(!sols.is_empty());
        let uniform = csp
            .domains()[0]
            .iter()
            .position(|l| l.counts() == [20, 20])
            .unwrap();
        assert!(sols.contains(&vec![uniform, uniform]));
        // soundness: every returned profile is an eps-NE
        for a in &sols {
            let p = csp.grid_profile(a);
            assert!(is_epsilon_ne(&g, &p, 0.1).is_equilibrium);
        }
    }

    #[test]
    fn asymmetric_pennies_has_no_exact_grid_ne_on_coarse_grid() {
        let g = asymmetric_pennies();
        let csp = mp_csp(2, 0.0, &g);
        // independent check: all 9 grid profiles have positive regret
        let mut positive = 0;
        for a in 0..3usize {
            for b in 0..3usize {
                let p = csp.grid_profile(&[a, b]);
                let check = is_epsilon_ne(&g, &p, 0.0);
                if !check.is_equilibrium {
                    positive += 1;
                }
            }
        }
        assert_eq!(positive, 9);
        let sols = brute_force_solve(&csp, SearchMode::All, 1 << 20).unwrap();
        assert!(sols.is_empty());
    }

    #[test]
    fn budget_refusals() {
        let g = matching_pennies();
        let csp = mp_csp(40, 0.1, &g);
        assert!(matches!(
            brute_force_solve(&csp, SearchMode::All, 100),
            Err(Error::GlobalBudgetExceeded { .. })
        ));
        // first-mode with a tiny budget that runs out before any solution
        let ap = asymmetric_pennies();
        let csp0 = mp_csp(2, 0.0, &ap);
        assert!(matches!(
            brute_force_solve(&csp0, SearchMode::First, 3),
            Err(Error::GlobalBudgetExceeded { .. })
        ));
    }

    #[test]
    fn arc_consistency_fixpoint_and_soundness() {
        let g = asymmetric_pennies();
        let csp = mp_csp(2, 0.05, &g);
        let before: Set<Vec<Vec<u64>>> = brute_force_solve(&csp, SearchMode::All, 1 << 20)
            .unwrap()
            .iter()
            .map(|a| csp.counts_profile(a))
            .collect();
        let (filtered, trace) = arc_consistency(&csp);
        for w in trace.round_sizes.windows(2) {
            for j in 0..w[0].len() {
                assert!(w[1][j] <= w[0][j], "domain sizes non-increasing");
            }
        }
        let after: Set<Vec<Vec<u64>>> = brute_force_solve(&filtered, SearchMode::All, 1 << 20)
            .unwrap()
            .iter()
            .map(|a| filtered.counts_profile(a))
            .collect();
        assert_eq!(before, after);
        if filtered.certifies_empty() {
            assert!(before.is_empty());
        }
        // rerunning on the output deletes nothing
        let (_, trace2) = arc_consistency(&filtered);
        assert!(trace2.deletions.is_empty());
        assert_eq!(trace2.converged_round, 1);
    }

    #[test]
    fn single_player_domains() {
        // no hyperedges: constant payoff, nothing deleted
        let free = Gmhg::new(vec![ActionSet::of_size(2)], vec![]).unwrap();
        let plan = DiscretizationPlan::with_sizes(vec![4], 0.0);
        let csp = GameCsp::induce(&free, plan, 0.0, 1 << 20).unwrap();
        let (filtered, trace) = arc_consistency(&csp);
        assert!(trace.deletions.is_empty());
        assert_eq!(filtered.domain_sizes(), vec![5]);

        // payoffs {2, 5} at eps 0: only the argmax point mass survives
        let solo = Gmhg::new(
            vec![ActionSet::of_size(2)],
            vec![Hyperedge {
                owner: PlayerId(0),
                clique: vec![PlayerId(0)],
                payoffs: vec![2.0, 5.0],
            }],
        )
        .unwrap();
        let plan = DiscretizationPlan::with_sizes(vec![4], 0.0);
        let csp = GameCsp::induce(&solo, plan, 0.0, 1 << 20).unwrap();
        let (filtered, _) = arc_consistency(&csp);
        assert_eq!(filtered.domain_sizes(), vec![1]);
        assert_eq!(filtered.domains()[0][0].counts(), &[0, 4]);
    }

    #[test]
    fn nashprop_agrees_with_brute_force() {
        let g = matching_pennies();
        let csp = mp_csp(6, 0.15, &g);
        let brute: Set<Vec<Vec<u64>>> = brute_force_solve(&csp, SearchMode::All, 1 << 20)
            .unwrap()
            .iter()
            .map(|a| csp.counts_profile(a))
            .collect();
        let (sols, _, filtered) = nashprop_solve(&csp, SearchMode::All, 1 << 20).unwrap();
        let nash: Set<Vec<Vec<u64>>> = sols.iter().map(|a| filtered.counts_profile(a)).collect();
        assert_eq!(brute, nash);
    }

    #[test]
    fn materialized_table_matches_lazy() {
        let g = matching_pennies();
        let csp = mp_csp(3, 0.2, &g);
        let table = csp.materialize_constraint(PlayerId(0), 1 << 20).unwrap();
        assert_eq!(table.len() as u128, csp.table_size(PlayerId(0)));
        let sizes = [4usize, 4];
        let mut idx = [0usize, 0];
        let mut flat = 0;
        loop {
            let value_at = |j: usize| idx[j];
            assert_eq!(table[flat], csp.constraint_holds(PlayerId(0), &value_at));
            flat += 1;
            if !crate::game::advance_odometer(&mut idx, &sizes) {
                break;
            }
        }
        assert!(matches!(
            csp.materialize_constraint(PlayerId(0), 3),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
