//! Seeded game generators. All randomness comes from one ChaCha8 stream
//! per call (seeded from the given u64), drawn in a fixed order, so a
//! (kind, flags, seed) triple regenerates the identical game on any
//! platform.

use std::collections::BTreeMap;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{make_normal_form, make_polymatrix, ActionSet, Gmhg, Hyperedge, PlayerId};

/// Canonical matching pennies with payoffs in [0,1]: player 0 wants to
/// match, player 1 wants to mismatch.
pub fn matching_pennies() -> Gmhg {
    make_normal_form(
        vec![ActionSet::of_size(2), ActionSet::of_size(2)],
        vec![vec![1.0, 0.0, 0.0, 1.0], vec![0.0, 1.0, 1.0, 0.0]],
    )
    .expect("fixed cardinality")
}

/// Pure coordination on `m` actions: both players get 1 on the diagonal.
pub fn coordination(m: usize) -> Gmhg {
    let mut tensor = vec![0.0; m * m];
    for a in 0..m {
        tensor[a * m + a] = 1.0;
    }
    make_normal_form(
        vec![ActionSet::of_size(m), ActionSet::of_size(m)],
        vec![tensor.clone(), tensor],
    )
    .expect("fixed cardinality")
}

/// Symmetric zero-sum rock-paper-scissors, rescaled to [0,1]
/// (win 1, tie 0.5, loss 0). The uniform profile is the unique equilibrium.
pub fn rock_paper_scissors() -> Gmhg {
    let outcome = |a: usize, b: usize| -> f64 {
        if a == b {
            0.5
        } else if (a + 3 - b) % 3 == 1 {
            1.0
        } else {
            0.0
        }
    };
    let mut row = vec![0.0; 9];
    let mut col = vec![0.0; 9];
    for a in 0..3 {
        for b in 0..3 {
            row[a * 3 + b] = outcome(a, b);
            col[a * 3 + b] = outcome(b, a);
        }
    }
    make_normal_form(
        vec![ActionSet::of_size(3), ActionSet::of_size(3)],
        vec![row, col],
    )
    .expect("fixed cardinality")
}

/// Random normal-form game: `n` players, `m` actions, payoffs uniform in
/// [0,1]. Refuses when the joint space would exceed a million entries.
pub fn random_normal_form(n: usize, m: usize, seed: u64) -> Result<Gmhg> {
    let joint = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if joint > 1_000_000 {
        return Err(Error::GlobalBudgetExceeded {
            what: "normal-form tensor generation",
            required: joint,
            budget: 1_000_000,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tensors: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..joint as usize).map(|_| rng.random::<f64>()).collect())
        .collect();
    make_normal_form(vec![ActionSet::of_size(m); n], tensors)
}

/// Random polymatrix game on a uniformly attached random tree: node v
/// attaches to a parent drawn from [0, v). Every directed pair of an edge
/// gets its own payoff matrix with entries uniform in [0,1].
pub fn random_tree_polymatrix(n: usize, m: usize, seed: u64) -> Result<Gmhg> {
    if n < 1 {
        return Err(Error::Usage("need at least one player".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        let parent = rng.random_range(0..v);
        edges.push((parent, v));
    }
    let mut mats = BTreeMap::new();
    for &(i, j) in &edges {
        for pair in [(i, j), (j, i)] {
            mats.insert(
                pair,
                (0..m * m).map(|_| rng.random::<f64>()).collect::<Vec<f64>>(),
            );
        }
    }
    make_polymatrix(vec![ActionSet::of_size(m); n], &edges, &mats)
}

/// Random graphical game: a random graph with every neighborhood capped at
/// `k` players (the player itself included), one hyperedge per player over
/// its whole neighborhood, payoffs uniform in [0,1].
pub fn random_graphical_game(n: usize, m: usize, k: usize, seed: u64) -> Result<Gmhg> {
    if k < 1 {
        return Err(Error::Usage("neighborhood cap k must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_deg = k - 1;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    if n > 1 && max_deg > 0 {
        let attempts = 3 * n * max_deg;
        for _ in 0..attempts {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u == v || adj[u].contains(&v) {
                continue;
            }
            if adj[u].len() < max_deg && adj[v].len() < max_deg {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        let mut clique: Vec<usize> = adj[i].iter().copied().collect();
        clique.push(i);
        clique.sort_unstable();
        let entries = m.checked_pow(clique.len() as u32).ok_or(
            Error::GlobalBudgetExceeded {
                what: "graphical-game hypermatrix generation",
                required: u128::MAX,
                budget: 1_000_000,
            },
        )?;
        if entries > 1_000_000 {
            return Err(Error::GlobalBudgetExceeded {
                what: "graphical-game hypermatrix generation",
                required: entries as u128,
                budget: 1_000_000,
            });
        }
        edges.push(Hyperedge {
            owner: PlayerId(i),
            clique: clique.into_iter().map(PlayerId).collect(),
            payoffs: (0..entries).map(|_| rng.random::<f64>()).collect(),
        });
    }
    Gmhg::new(vec![ActionSet::of_size(m); n], edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameKind {
    MatchingPennies,
    Coordination,
    RockPaperScissors,
    RandomNormalForm,
    RandomTreePolymatrix,
    RandomGraphicalGame,
}

impl GameKind {
    pub fn is_random(self) -> bool {
        matches!(
            self,
            GameKind::RandomNormalForm
                | GameKind::RandomTreePolymatrix
                | GameKind::RandomGraphicalGame
        )
    }
}

impl FromStr for GameKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mp" => Ok(GameKind::MatchingPennies),
            "coord" => Ok(GameKind::Coordination),
            "rps" => Ok(GameKind::RockPaperScissors),
            "random-nf" => Ok(GameKind::RandomNormalForm),
            "random-tree-poly" => Ok(GameKind::RandomTreePolymatrix),
            "random-gg" => Ok(GameKind::RandomGraphicalGame),
            other => Err(Error::Usage(format!(
                "unknown kind {other:?}; expected mp|coord|rps|random-nf|random-tree-poly|random-gg"
            ))),
        }
    }
}

/// Dispatcher used by the CLI. Random kinds require a seed.
pub fn generate(
    kind: GameKind,
    n: usize,
    m: usize,
    k: usize,
    seed: Option<u64>,
) -> Result<Gmhg> {
    if kind.is_random() && seed.is_none() {
        return Err(Error::Usage("--seed is mandatory for random kinds".into()));
    }
    match kind {
        GameKind::MatchingPennies => Ok(matching_pennies()),
        GameKind::Coordination => Ok(coordination(m)),
        GameKind::RockPaperScissors => Ok(rock_paper_scissors()),
        GameKind::RandomNormalForm => random_normal_form(n, m, seed.unwrap()),
        GameKind::RandomTreePolymatrix => random_tree_polymatrix(n, m, seed.unwrap()),
        GameKind::RandomGraphicalGame => random_graphical_game(n, m, k, seed.unwrap()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::{is_epsilon_ne, JointMixedStrategy};

    #[test]
    fn canonical_games_are_valid() {
        for g in [matching_pennies(), coordination(2), rock_paper_scissors()] {
            assert!(g.validate().is_empty());
            let r = g.payoff_ranges();
            for e in &r.per_edge {
                assert!(e.min >= 0.0 && e.max <= 1.0);
            }
        }
    }

    #[test]
    fn rps_uniform_is_equilibrium() {
        let g = rock_paper_scissors();
        let u = JointMixedStrategy::uniform(&g);
        let check = is_epsilon_ne(&g, &u, 0.0);
        assert!(check.is_equilibrium);
    }

    #[test]
    fn generators_are_deterministic() {
        for kind in [
            GameKind::RandomNormalForm,
            GameKind::RandomTreePolymatrix,
            GameKind::RandomGraphicalGame,
        ] {
            let a = generate(kind, 5, 2, 3, Some(7)).unwrap();
            let b = generate(kind, 5, 2, 3, Some(7)).unwrap();
            assert_eq!(a.hyperedges(), b.hyperedges());
            let c = generate(kind, 5, 2, 3, Some(8)).unwrap();
            assert_ne!(a.hyperedges(), c.hyperedges());
        }
    }

    #[test]
    fn tree_polymatrix_is_connected_tree() {
        for seed in 0..20u64 {
            let g = random_tree_polymatrix(6, 2, seed).unwrap();
            let pg = crate::graph::PrimalGraph::of(&g);
            assert!(pg.find_cycle().is_none());
            assert_eq!(pg.components().len(), 1);
            assert_eq!(pg.num_edges(), 5);
        }
    }

    #[test]
    fn graphical_game_respects_degree_cap() {
        for seed in 0..10u64 {
            let g = random_graphical_game(8, 2, 3, seed).unwrap();
            for i in 0..8 {
                assert!(g.neighborhood(PlayerId(i)).len() <= 3);
            }
            assert_eq!(g.owned_edges(PlayerId(0)).len(), 1);
        }
    }

    #[test]
    fn seed_required_for_random() {
        assert!(matches!(
            generate(GameKind::RandomNormalForm, 2, 2, 3, None),
            Err(Error::Usage(_))
        ));
    }
}
