//! Primal graph of the game-induced constraint network and a greedy
//! min-fill treewidth upper bound.
//!
//! The primal graph puts an edge between two players whenever they appear
//! together in some hyperedge clique. For graphical games (one hyperedge
//! per player covering its whole neighborhood) this is exactly the union
//! of neighborhood cliques.

use std::collections::BTreeSet;

use crate::game::{Gmhg, PlayerId};

#[derive(Debug, Clone)]
pub struct PrimalGraph {
    adj: Vec<BTreeSet<usize>>,
}

impl PrimalGraph {
    pub fn of(game: &Gmhg) -> Self {
        let n = game.num_players();
        let mut adj = vec![BTreeSet::new(); n];
        for e in game.hyperedges() {
            for a in &e.clique {
                for b in &e.clique {
                    if a.0 != b.0 {
                        adj[a.0].insert(b.0);
                    }
                }
            }
        }
        PrimalGraph { adj }
    }

    pub fn num_nodes(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|s| s.len()).max().unwrap_or(0)
    }

    /// Some cycle as a vertex list, or `None` if the graph is a forest.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        let n = self.adj.len();
        // 0 = unvisited, 1 = on the current DFS path, 2 = done
        let mut color = vec![0u8; n];
        let mut parent = vec![usize::MAX; n];
        for start in 0..n {
            if color[start] != 0 {
                continue;
            }
            color[start] = 1;
            let mut path = vec![start];
            let mut cursors = vec![self.adj[start].iter()];
            while let Some(&v) = path.last() {
                if let Some(&w) = cursors.last_mut().unwrap().next() {
                    if w == parent[v] {
                        continue;
                    }
                    match color[w] {
                        0 => {
                            color[w] = 1;
                            parent[w] = v;
                            path.push(w);
                            cursors.push(self.adj[w].iter());
                        }
                        1 => {
                            // back edge to a path vertex closes a cycle
                            let pos = path.iter().position(|&x| x == w).unwrap();
                            return Some(path[pos..].to_vec());
                        }
                        _ => {}
                    }
                } else {
                    color[v] = 2;
                    path.pop();
                    cursors.pop();
                }
            }
        }
        None
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Treewidth upper bound from a greedy min-fill elimination order
    /// (ties to the lowest vertex id). Exact on trees and cliques; an
    /// upper bound in general.
    pub fn min_fill_width(&self) -> usize {
        let n = self.adj.len();
        let mut adj: Vec<BTreeSet<usize>> = self.adj.clone();
        let mut alive: BTreeSet<usize> = (0..n).collect();
        let mut width = 0usize;
        while !alive.is_empty() {
            let mut best = usize::MAX;
            let mut best_fill = usize::MAX;
            for &v in &alive {
                let nbrs: Vec<usize> = adj[v].iter().copied().collect();
                let mut fill = 0usize;
                for (ai, &a) in nbrs.iter().enumerate() {
                    for &b in &nbrs[ai + 1..] {
                        if !adj[a].contains(&b) {
                            fill += 1;
                        }
                    }
                }
                if fill < best_fill {
                    best_fill = fill;
                    best = v;
                }
            }
            let v = best;
            let nbrs: Vec<usize> = adj[v].iter().copied().collect();
            width = width.max(nbrs.len());
            for (ai, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[ai + 1..] {
                    adj[a].insert(b);
                    adj[b].insert(a);
                }
            }
            for &a in &nbrs {
                adj[a].remove(&v);
            }
            adj[v].clear();
            alive.remove(&v);
        }
        width
    }
}

/// Node/edge counts, degree, and the min-fill width upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct PrimalGraphStats {
    pub nodes: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub width_bound: usize,
}

pub fn primal_graph_stats(game: &Gmhg) -> PrimalGraphStats {
    let g = PrimalGraph::of(game);
    PrimalGraphStats {
        nodes: g.num_nodes(),
        edges: g.num_edges(),
        max_degree: g.max_degree(),
        width_bound: g.min_fill_width(),
    }
}

/// Convenience: the primal neighbors of `i`, sorted.
pub fn primal_neighbors(game: &Gmhg, i: PlayerId) -> Vec<usize> {
    PrimalGraph::of(game).neighbors(i.0).iter().copied().collect()
}
