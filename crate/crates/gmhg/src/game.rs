//! Graphical multi-hypermatrix games (GMhGs).
//!
//! Each player owns a set of cliques (hyperedges), each carrying a dense
//! payoff hypermatrix over the joint actions of the clique's members. A
//! player's payoff is the sum of its owned hypermatrices. Graphical games
//! (one clique per player), polymatrix games (all cliques are pairs) and
//! normal-form games (one clique = the full player set) are special cases.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Index of a player; dense in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlayerId(pub usize);

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Ordered action labels of one player. The label order is the canonical
/// index order used when flattening payoff hypermatrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSet {
    labels: Vec<String>,
}

impl ActionSet {
    pub fn new(labels: Vec<String>) -> Self {
        ActionSet { labels }
    }

    /// `m` anonymous actions labeled `a0..a{m-1}`.
    pub fn of_size(m: usize) -> Self {
        ActionSet {
            labels: (0..m).map(|i| format!("a{i}")).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// One player-owned clique with its dense payoff hypermatrix.
///
/// `payoffs` is flattened row-major over the clique in listed order: the
/// action of the last listed member varies fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperedge {
    pub owner: PlayerId,
    pub clique: Vec<PlayerId>,
    pub payoffs: Vec<f64>,
}

impl Hyperedge {
    /// Flat index of a joint action of the clique members (listed order).
    pub fn flat_index(&self, joint: &[usize], action_counts: &[usize]) -> usize {
        debug_assert_eq!(joint.len(), self.clique.len());
        let mut idx = 0usize;
        for (pos, member) in self.clique.iter().enumerate() {
            idx = idx * action_counts[member.0] + joint[pos];
        }
        idx
    }
}

/// A structural defect found by [`Gmhg::validate`]. Violations are data,
/// not failures: a well-formed-enough game can still be inspected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyActionSet { player: usize },
    DuplicateActionLabel { player: usize, label: String },
    OwnerNotInClique { edge: usize },
    DuplicateCliqueMember { edge: usize, member: usize },
    PayoffCardinality { edge: usize, expected: usize, actual: usize },
    NonFinitePayoff { edge: usize, index: usize },
    DuplicatePlayerId { id: usize },
    PlayerIdNotDense { id: usize, n: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyActionSet { player } => {
                write!(f, "player {player} has an empty action set")
            }
            Violation::DuplicateActionLabel { player, label } => {
                write!(f, "player {player} repeats action label {label:?}")
            }
            Violation::OwnerNotInClique { edge } => {
                write!(f, "hyperedge {edge}: owner is not a member of its clique")
            }
            Violation::DuplicateCliqueMember { edge, member } => {
                write!(f, "hyperedge {edge}: player {member} listed twice in clique")
            }
            Violation::PayoffCardinality {
                edge,
                expected,
                actual,
            } => write!(
                f,
                "hyperedge {edge}: {actual} payoff entries, expected {expected}"
            ),
            Violation::NonFinitePayoff { edge, index } => {
                write!(f, "hyperedge {edge}: payoff entry {index} is not finite")
            }
            Violation::DuplicatePlayerId { id } => write!(f, "duplicate player id {id}"),
            Violation::PlayerIdNotDense { id, n } => {
                write!(f, "player id {id} is outside the dense range [0, {n})")
            }
        }
    }
}

/// Per-hyperedge payoff extrema; `range = max - min` is the quantity the
/// discretization sizing consumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeRange {
    pub owner: PlayerId,
    pub clique_len: usize,
    pub max: f64,
    pub min: f64,
}

impl EdgeRange {
    pub fn range(&self) -> f64 {
        self.max - self.min
    }
}

/// Min/max/range for every hyperedge, indexed parallel to
/// [`Gmhg::hyperedges`].
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffRanges {
    pub per_edge: Vec<EdgeRange>,
}

impl PayoffRanges {
    /// Interaction mass of player `i`: sum over i's hyperedges of
    /// `range * (|C| - 1)`. Zero means nothing i's payoff depends on can
    /// move it, so i imposes no constraint on grid sizing.
    pub fn interaction_mass(&self, game: &Gmhg, i: PlayerId) -> f64 {
        game.owned_edges(i)
            .iter()
            .map(|&e| {
                let r = &self.per_edge[e];
                r.range() * (r.clique_len.saturating_sub(1)) as f64
            })
            .sum()
    }
}

/// Summary numbers of a game: entry count and the structural maxima
/// (n players, m actions, k neighborhood, l cliques per player, c clique size).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct GameStats {
    pub players: usize,
    pub entries: usize,
    pub max_actions: usize,
    pub max_neighborhood: usize,
    pub max_cliques_per_player: usize,
    pub max_clique_size: usize,
}

/// Refusal from [`Gmhg::global_payoff_bounds`]: the joint-action space of
/// some player's neighborhood exceeds the enumeration budget.
#[derive(Debug, Clone, Copy)]
pub struct BoundsRefusal {
    pub player: PlayerId,
    pub required: u128,
}

/// A graphical multi-hypermatrix game.
#[derive(Debug, Clone)]
pub struct Gmhg {
    players: Vec<ActionSet>,
    hyperedges: Vec<Hyperedge>,
    action_counts: Vec<usize>,
    /// C_i: indices into `hyperedges` owned by player i.
    owned: Vec<Vec<usize>>,
    /// N(i): union of i's owned cliques plus i itself, sorted.
    neighborhood: Vec<Vec<usize>>,
    /// Neigh_i: players j != i whose payoff depends on i (i in N(j)), sorted.
    affected: Vec<Vec<usize>>,
}

impl Gmhg {
    /// Builds a game and its derived sets. Rejects only references that
    /// make the structure unindexable (players out of range); everything
    /// else is left for [`Gmhg::validate`] to report.
    pub fn new(players: Vec<ActionSet>, hyperedges: Vec<Hyperedge>) -> Result<Self> {
        let n = players.len();
        for e in &hyperedges {
            if e.owner.0 >= n {
                return Err(Error::PlayerOutOfRange { player: e.owner.0, n });
            }
            for m in &e.clique {
                if m.0 >= n {
                    return Err(Error::PlayerOutOfRange { player: m.0, n });
                }
            }
        }
        let action_counts: Vec<usize> = players.iter().map(|a| a.len()).collect();
        let mut owned = vec![Vec::new(); n];
        let mut nbh: Vec<BTreeSet<usize>> = (0..n).map(|i| BTreeSet::from([i])).collect();
        for (idx, e) in hyperedges.iter().enumerate() {
            owned[e.owner.0].push(idx);
            for m in &e.clique {
                nbh[e.owner.0].insert(m.0);
            }
        }
        let neighborhood: Vec<Vec<usize>> = nbh.iter().map(|s| s.iter().copied().collect()).collect();
        let mut affected: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for j in 0..n {
            for &i in &neighborhood[j] {
                if i != j {
                    affected[i].insert(j);
                }
            }
        }
        Ok(Gmhg {
            players,
            hyperedges,
            action_counts,
            owned,
            neighborhood,
            affected: affected.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn actions(&self, i: PlayerId) -> &ActionSet {
        &self.players[i.0]
    }

    pub fn num_actions(&self, i: PlayerId) -> usize {
        self.action_counts[i.0]
    }

    pub fn action_counts(&self) -> &[usize] {
        &self.action_counts
    }

    pub fn hyperedges(&self) -> &[Hyperedge] {
        &self.hyperedges
    }

    /// C_i as indices into [`Gmhg::hyperedges`].
    pub fn owned_edges(&self, i: PlayerId) -> &[usize] {
        &self.owned[i.0]
    }

    /// N(i): players whose actions enter i's payoff, i included, sorted.
    pub fn neighborhood(&self, i: PlayerId) -> &[usize] {
        &self.neighborhood[i.0]
    }

    /// Neigh_i: players affected by i (i excluded), sorted.
    pub fn affected_by(&self, i: PlayerId) -> &[usize] {
        &self.affected[i.0]
    }

    /// Checks every structural invariant; empty iff the game is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (p, a) in self.players.iter().enumerate() {
            if a.is_empty() {
                out.push(Violation::EmptyActionSet { player: p });
            }
            let mut seen = BTreeSet::new();
            for l in a.labels() {
                if !seen.insert(l.as_str()) {
                    out.push(Violation::DuplicateActionLabel {
                        player: p,
                        label: l.clone(),
                    });
                }
            }
        }
        for (idx, e) in self.hyperedges.iter().enumerate() {
            if !e.clique.contains(&e.owner) {
                out.push(Violation::OwnerNotInClique { edge: idx });
            }
            let mut seen = BTreeSet::new();
            for m in &e.clique {
                if !seen.insert(m.0) {
                    out.push(Violation::DuplicateCliqueMember {
                        edge: idx,
                        member: m.0,
                    });
                }
            }
            let expected: usize = e.clique.iter().map(|m| self.action_counts[m.0]).product();
            if e.payoffs.len() != expected {
                out.push(Violation::PayoffCardinality {
                    edge: idx,
                    expected,
                    actual: e.payoffs.len(),
                });
            }
            for (pi, v) in e.payoffs.iter().enumerate() {
                if !v.is_finite() {
                    out.push(Violation::NonFinitePayoff { edge: idx, index: pi });
                }
            }
        }
        out
    }

    /// Errors with a message unless [`Gmhg::validate`] comes back clean.
    pub fn require_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidGame(
                v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; "),
            ))
        }
    }

    /// Exact min/max per hyperedge by full scan.
    pub fn payoff_ranges(&self) -> PayoffRanges {
        let per_edge = self
            .hyperedges
            .iter()
            .map(|e| {
                let mut max = f64::NEG_INFINITY;
                let mut min = f64::INFINITY;
                for &v in &e.payoffs {
                    if v > max {
                        max = v;
                    }
                    if v < min {
                        min = v;
                    }
                }
                if e.payoffs.is_empty() {
                    // an empty hypermatrix contributes the constant 0
                    max = 0.0;
                    min = 0.0;
                }
                EdgeRange {
                    owner: e.owner,
                    clique_len: e.clique.len(),
                    max,
                    min,
                }
            })
            .collect();
        PayoffRanges { per_edge }
    }

    /// Entry count `sum_i sum_{C in C_i} prod_{j in C} |A_j|` plus the
    /// structural maxima.
    pub fn representation_size(&self) -> GameStats {
        let entries = self.hyperedges.iter().map(|e| e.payoffs.len()).sum();
        GameStats {
            players: self.num_players(),
            entries,
            max_actions: self.action_counts.iter().copied().max().unwrap_or(0),
            max_neighborhood: self.neighborhood.iter().map(|s| s.len()).max().unwrap_or(0),
            max_cliques_per_player: self.owned.iter().map(|s| s.len()).max().unwrap_or(0),
            max_clique_size: self
                .hyperedges
                .iter()
                .map(|e| e.clique.len())
                .max()
                .unwrap_or(0),
        }
    }

    /// Payoff of player `i` under pure joint action `x` (full-length,
    /// indexed by player id): the sum of i's hypermatrix entries.
    pub fn pure_payoff(&self, i: PlayerId, x: &[usize]) -> f64 {
        let mut total = 0.0;
        for &e in self.owned_edges(i) {
            let edge = &self.hyperedges[e];
            let joint: Vec<usize> = edge.clique.iter().map(|m| x[m.0]).collect();
            total += edge.payoffs[edge.flat_index(&joint, &self.action_counts)];
        }
        total
    }

    /// Exhaustive per-player global payoff extrema `(u_i, l_i)` over the
    /// joint actions of each player's neighborhood. Exact but worst-case
    /// exponential in `|N(i)|`, hence the mandatory budget: refuses before
    /// doing any work if some player needs more than `budget` enumerations.
    pub fn global_payoff_bounds(
        &self,
        budget: u128,
    ) -> std::result::Result<Vec<(f64, f64)>, BoundsRefusal> {
        let n = self.num_players();
        for i in 0..n {
            let mut required: u128 = 1;
            for &j in &self.neighborhood[i] {
                required = required.saturating_mul(self.action_counts[j] as u128);
            }
            if required > budget {
                return Err(BoundsRefusal {
                    player: PlayerId(i),
                    required,
                });
            }
        }
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let scope = &self.neighborhood[i];
            let sizes: Vec<usize> = scope.iter().map(|&j| self.action_counts[j]).collect();
            let mut joint = vec![0usize; scope.len()];
            let mut full = vec![0usize; n];
            let mut max = f64::NEG_INFINITY;
            let mut min = f64::INFINITY;
            loop {
                for (pos, &j) in scope.iter().enumerate() {
                    full[j] = joint[pos];
                }
                let v = self.pure_payoff(PlayerId(i), &full);
                if v > max {
                    max = v;
                }
                if v < min {
                    min = v;
                }
                if !advance_odometer(&mut joint, &sizes) {
                    break;
                }
            }
            if scope.is_empty() {
                max = 0.0;
                min = 0.0;
            }
            out.push((max, min));
        }
        Ok(out)
    }

    /// Symmetrizes the hyperedge sets: for every clique appearing anywhere
    /// and every member lacking it, adds a zero-valued hypermatrix. Every
    /// player's expected payoff is unchanged for every joint mixed strategy.
    pub fn to_hypergraphical(&self) -> Gmhg {
        let mut union: BTreeSet<Vec<usize>> = BTreeSet::new();
        for e in &self.hyperedges {
            let mut c: Vec<usize> = e.clique.iter().map(|m| m.0).collect();
            c.sort_unstable();
            union.insert(c);
        }
        let mut edges = self.hyperedges.clone();
        for clique in &union {
            for &i in clique {
                let has = self.owned[i].iter().any(|&e| {
                    let mut c: Vec<usize> = self.hyperedges[e].clique.iter().map(|m| m.0).collect();
                    c.sort_unstable();
                    &c == clique
                });
                if !has {
                    let members: Vec<PlayerId> = clique.iter().map(|&j| PlayerId(j)).collect();
                    let entries: usize = clique.iter().map(|&j| self.action_counts[j]).product();
                    edges.push(Hyperedge {
                        owner: PlayerId(i),
                        clique: members,
                        payoffs: vec![0.0; entries],
                    });
                }
            }
        }
        Gmhg::new(self.players.clone(), edges).expect("players unchanged")
    }
}

/// Advances `joint` through the mixed-radix space given by `sizes`;
/// returns false once the odometer wraps around.
pub(crate) fn advance_odometer(joint: &mut [usize], sizes: &[usize]) -> bool {
    for pos in (0..joint.len()).rev() {
        joint[pos] += 1;
        if joint[pos] < sizes[pos] {
            return true;
        }
        joint[pos] = 0;
    }
    false
}

/// Normal-form game as a GMhG: every player owns one clique over the full
/// player set. `tensors[i]` is player i's payoff over all joint actions,
/// row-major in player id order.
pub fn make_normal_form(actions: Vec<ActionSet>, tensors: Vec<Vec<f64>>) -> Result<Gmhg> {
    let n = actions.len();
    if tensors.len() != n {
        return Err(Error::InvalidGame(format!(
            "{} payoff tensors for {} players",
            tensors.len(),
            n
        )));
    }
    let expected: usize = actions.iter().map(|a| a.len()).product();
    let mut edges = Vec::with_capacity(n);
    for (i, t) in tensors.into_iter().enumerate() {
        if t.len() != expected {
            return Err(Error::TensorCardinality {
                player: i,
                expected,
                actual: t.len(),
            });
        }
        edges.push(Hyperedge {
            owner: PlayerId(i),
            clique: (0..n).map(PlayerId).collect(),
            payoffs: t,
        });
    }
    Gmhg::new(actions, edges)
}

/// Polymatrix game over an interaction graph: each undirected edge {i, j}
/// contributes a hyperedge owned by i (payoffs row-major over (a_i, a_j))
/// and one owned by j (row-major over (a_j, a_i)). Matrices are keyed by
/// ordered pair, `(i, j)` meaning i's payoff against j.
pub fn make_polymatrix(
    actions: Vec<ActionSet>,
    graph_edges: &[(usize, usize)],
    matrices: &BTreeMap<(usize, usize), Vec<f64>>,
) -> Result<Gmhg> {
    let mut edges = Vec::new();
    for &(i, j) in graph_edges {
        for (a, b) in [(i, j), (j, i)] {
            let m = matrices
                .get(&(a, b))
                .ok_or(Error::MissingPairMatrix(a, b))?;
            edges.push(Hyperedge {
                owner: PlayerId(a),
                clique: vec![PlayerId(a), PlayerId(b)],
                payoffs: m.clone(),
            });
        }
    }
    Gmhg::new(actions, edges)
}
