//! Two-pass dynamic programming over tree-structured games.
//!
//! Requires the primal graph to be a forest; each hyperedge is then a pair
//! or a singleton and every constraint scope is a closed tree
//! neighborhood. The upstream pass computes, for each tree edge
//! child -> parent, the boolean table of (child value, parent value) pairs
//! extendible to a satisfying assignment of the child's subtree; the
//! downstream pass extracts one solution from stored witnesses, or the
//! tables are kept as a compact representation of every grid
//! epsilon-equilibrium.

use crate::csp::GameCsp;
use crate::error::{Error, Result};
use crate::game::PlayerId;
use crate::graph::PrimalGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeMode {
    First,
    AllCompact,
}

/// Result of the upstream pass plus enough structure to walk back down.
pub struct TreeSolution<'a, 'g> {
    csp: &'a GameCsp<'g>,
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    roots: Vec<usize>,
    /// allowed[v][dv][dw]; roots have a single virtual parent value.
    allowed: Vec<Vec<Vec<bool>>>,
    /// first satisfying children combo per (dv, dw), parallel to `allowed`
    witness: Vec<Vec<Vec<Option<Vec<usize>>>>>,
    /// subtree solution counts, present in AllCompact mode only
    counts: Option<Vec<Vec<Vec<u128>>>>,
    mode: TreeMode,
}

const NO_PARENT: usize = usize::MAX;

/// Solves a tree-structured CSP. Refuses with a named cycle when the
/// primal graph is not a forest, and with a budget error when the table
/// work exceeds `budget` constraint evaluations.
pub fn tree_solve<'a, 'g>(
    csp: &'a GameCsp<'g>,
    mode: TreeMode,
    budget: u128,
) -> Result<TreeSolution<'a, 'g>> {
    let graph = PrimalGraph::of(csp.game());
    if let Some(cycle) = graph.find_cycle() {
        return Err(Error::NonTreePrimal(cycle));
    }
    let n = csp.game().num_players();
    let mut parent = vec![NO_PARENT; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut roots = Vec::new();
    let mut post_order = Vec::new();
    for comp in graph.components() {
        let root = comp[0];
        roots.push(root);
        // iterative DFS recording exit order
        let mut stack = vec![(root, NO_PARENT, false)];
        while let Some((v, from, expanded)) = stack.pop() {
            if expanded {
                post_order.push(v);
                continue;
            }
            parent[v] = from;
            stack.push((v, from, true));
            for &w in graph.neighbors(v) {
                if w != from {
                    children[v].push(w);
                    stack.push((w, v, false));
                }
            }
        }
    }

    let dom_sizes = csp.domain_sizes();
    let mut allowed: Vec<Vec<Vec<bool>>> = vec![Vec::new(); n];
    let mut witness: Vec<Vec<Vec<Option<Vec<usize>>>>> = vec![Vec::new(); n];
    let mut counts: Vec<Vec<Vec<u128>>> = vec![Vec::new(); n];
    let mut work: u128 = 0;

    for &v in &post_order {
        let parent_vals = if parent[v] == NO_PARENT {
            1
        } else {
            dom_sizes[parent[v]]
        };
        let mut table = vec![vec![false; parent_vals]; dom_sizes[v]];
        let mut wit = vec![vec![None; parent_vals]; dom_sizes[v]];
        let mut cnt = vec![vec![0u128; parent_vals]; dom_sizes[v]];
        for dv in 0..dom_sizes[v] {
            // child values already supported under this dv
            let feas: Vec<Vec<usize>> = children[v]
                .iter()
                .map(|&u| {
                    (0..dom_sizes[u])
                        .filter(|&du| allowed[u][du][dv])
                        .collect()
                })
                .collect();
            if feas.iter().any(|f| f.is_empty()) {
                continue;
            }
            let combo_sizes: Vec<usize> = feas.iter().map(|f| f.len()).collect();
            for dw in 0..parent_vals {
                let mut pick = vec![0usize; children[v].len()];
                loop {
                    work += 1;
                    if work > budget {
                        return Err(Error::GlobalBudgetExceeded {
                            what: "tree table propagation",
                            required: work,
                            budget,
                        });
                    }
                    let combo: Vec<usize> =
                        pick.iter().zip(&feas).map(|(&p, f)| f[p]).collect();
                    let value_at = |j: usize| {
                        if j == v {
                            dv
                        } else if j == parent[v] {
                            dw
                        } else {
                            let pos = children[v]
                                .iter()
                                .position(|&u| u == j)
                                .expect("scope member is parent or child");
                            combo[pos]
                        }
                    };
                    if csp.constraint_holds(PlayerId(v), &value_at) {
                        let sub: u128 = children[v]
                            .iter()
                            .zip(&combo)
                            .map(|(&u, &du)| counts[u][du][dv])
                            .product();
                        if !table[dv][dw] {
                            table[dv][dw] = true;
                            wit[dv][dw] = Some(combo.clone());
                        }
                        cnt[dv][dw] = cnt[dv][dw].saturating_add(sub);
                        if mode == TreeMode::First {
                            break;
                        }
                    }
                    if !crate::game::advance_odometer(&mut pick, &combo_sizes) {
                        break;
                    }
                }
            }
        }
        allowed[v] = table;
        witness[v] = wit;
        counts[v] = cnt;
    }

    Ok(TreeSolution {
        csp,
        parent,
        children,
        roots,
        allowed,
        witness,
        counts: if mode == TreeMode::AllCompact {
            Some(counts)
        } else {
            None
        },
        mode,
    })
}

impl TreeSolution<'_, '_> {
    /// Per-edge table sizes (child domain x parent domain), roots included
    /// with their virtual single-value parent.
    pub fn table_sizes(&self) -> Vec<usize> {
        self.allowed
            .iter()
            .map(|t| t.iter().map(|row| row.len()).sum())
            .collect()
    }

    /// Whether any full solution exists.
    pub fn solvable(&self) -> bool {
        self.roots
            .iter()
            .all(|&r| self.allowed[r].iter().any(|row| row[0]))
    }

    /// Extracts one solution by walking the stored witnesses downstream.
    pub fn first(&self) -> Option<Vec<usize>> {
        if !self.solvable() {
            return None;
        }
        let n = self.parent.len();
        let mut assignment = vec![usize::MAX; n];
        for &r in &self.roots {
            let dr = (0..self.allowed[r].len()).find(|&d| self.allowed[r][d][0])?;
            self.fill_down(r, dr, 0, &mut assignment);
        }
        Some(assignment)
    }

    fn fill_down(&self, v: usize, dv: usize, dw: usize, assignment: &mut Vec<usize>) {
        assignment[v] = dv;
        let combo = self.witness[v][dv][dw]
            .as_ref()
            .expect("witness exists for allowed cells");
        for (&u, &du) in self.children[v].iter().zip(combo) {
            self.fill_down(u, du, dv, assignment);
        }
    }

    /// Total number of grid solutions represented by the tables.
    /// Available in AllCompact mode.
    pub fn count(&self) -> Option<u128> {
        let counts = self.counts.as_ref()?;
        let mut total: u128 = 1;
        for &r in &self.roots {
            let comp: u128 = (0..self.allowed[r].len())
                .map(|d| counts[r][d][0])
                .sum();
            total = total.saturating_mul(comp);
        }
        Some(total)
    }

    /// Expands the tables into the explicit solution set. Errors if more
    /// than `limit` solutions would be produced, or when the pass ran in
    /// First mode.
    pub fn enumerate_all(&self, limit: usize) -> Result<Vec<Vec<usize>>> {
        if self.mode != TreeMode::AllCompact {
            return Err(Error::Usage(
                "solution enumeration requires all-compact mode".into(),
            ));
        }
        let n = self.parent.len();
        let mut full: Vec<Vec<usize>> = vec![vec![usize::MAX; n]];
        for &r in &self.roots {
            let mut comp_assigns: Vec<Vec<(usize, usize)>> = Vec::new();
            for dr in 0..self.allowed[r].len() {
                if self.allowed[r][dr][0] {
                    comp_assigns.extend(self.subtree_assignments(r, dr, 0, limit)?);
                }
            }
            let mut next = Vec::new();
            for base in &full {
                for comp in &comp_assigns {
                    let mut a = base.clone();
                    for &(p, val) in comp {
                        a[p] = val;
                    }
                    next.push(a);
                    if next.len() > limit {
                        return Err(Error::GlobalBudgetExceeded {
                            what: "tree solution enumeration",
                            required: next.len() as u128,
                            budget: limit as u128,
                        });
                    }
                }
            }
            full = next;
        }
        Ok(full)
    }

    fn subtree_assignments(
        &self,
        v: usize,
        dv: usize,
        dw: usize,
        limit: usize,
    ) -> Result<Vec<Vec<(usize, usize)>>> {
        let feas: Vec<Vec<usize>> = self.children[v]
            .iter()
            .map(|&u| {
                (0..self.allowed[u].len())
                    .filter(|&du| self.allowed[u][du][dv])
                    .collect()
            })
            .collect();
        let mut out: Vec<Vec<(usize, usize)>> = Vec::new();
        if feas.iter().any(|f| f.is_empty()) {
            return Ok(out);
        }
        let combo_sizes: Vec<usize> = feas.iter().map(|f| f.len()).collect();
        let mut pick = vec![0usize; self.children[v].len()];
        loop {
            let combo: Vec<usize> = pick.iter().zip(&feas).map(|(&p, f)| f[p]).collect();
            let value_at = |j: usize| {
                if j == v {
                    dv
                } else if j == self.parent[v] {
                    dw
                } else {
                    let pos = self.children[v]
                        .iter()
                        .position(|&u| u == j)
                        .expect("scope member is parent or child");
                    combo[pos]
                }
            };
            if self.csp.constraint_holds(PlayerId(v), &value_at) {
                // cartesian product of the children's subtree expansions
                let mut partials: Vec<Vec<(usize, usize)>> = vec![vec![(v, dv)]];
                for (&u, &du) in self.children[v].iter().zip(&combo) {
                    let subs = self.subtree_assignments(u, du, dv, limit)?;
                    let mut next = Vec::new();
                    for p in &partials {
                        for s in &subs {
                            let mut merged = p.clone();
                            merged.extend_from_slice(s);
                            next.push(merged);
                        }
                    }
                    partials = next;
                }
                out.extend(partials);
                if out.len() > limit {
                    return Err(Error::GlobalBudgetExceeded {
                        what: "tree solution enumeration",
                        required: out.len() as u128,
                        budget: limit as u128,
                    });
                }
            }
            if !crate::game::advance_odometer(&mut pick, &combo_sizes) {
                break;
            }
        }
        Ok(out)
    }
}
