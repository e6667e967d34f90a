//! Shared fixtures for unit tests.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::game::{ActionSet, Gmhg, Hyperedge, PlayerId};

pub use crate::generate::matching_pennies;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_simplex(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..m).map(|_| rng.random::<f64>() + 1e-9).collect();
    let sum: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= sum);
    v
}

/// Matching pennies with unequal stakes; its unique equilibrium is
/// ((1/3, 2/3), (1/3, 2/3)), so no profile on a half-step grid is exact.
pub fn asymmetric_pennies() -> Gmhg {
    crate::game::make_normal_form(
        vec![ActionSet::of_size(2), ActionSet::of_size(2)],
        vec![
            vec![1.0, 0.0, 0.0, 0.5],
            vec![0.0, 1.0, 0.5, 0.0],
        ],
    )
    .expect("fixed cardinality")
}

/// Three players with deliberately lopsided hyperedge ownership: a pair
/// owned by one side only, a 3-clique owned by its middle member, and a
/// singleton.
pub fn asymmetric_gmhg() -> Gmhg {
    let mut rng = seeded_rng(2024);
    let actions = vec![ActionSet::of_size(2), ActionSet::of_size(3), ActionSet::of_size(2)];
    let edges = vec![
        Hyperedge {
            owner: PlayerId(0),
            clique: vec![PlayerId(0), PlayerId(1)],
            payoffs: (0..6).map(|_| rng.random::<f64>()).collect(),
        },
        Hyperedge {
            owner: PlayerId(1),
            clique: vec![PlayerId(1), PlayerId(2), PlayerId(0)],
            payoffs: (0..12).map(|_| rng.random::<f64>()).collect(),
        },
        Hyperedge {
            owner: PlayerId(2),
            clique: vec![PlayerId(2)],
            payoffs: (0..2).map(|_| rng.random::<f64>()).collect(),
        },
    ];
    Gmhg::new(actions, edges).expect("well-formed fixture")
}

/// Star graphical game: the center owns one hyperedge over everyone, each
/// leaf owns one over {leaf, center}; every hypermatrix is pinned to the
/// exact range [0, 1].
pub fn star_graphical_game(leaves: usize, seed: u64) -> Gmhg {
    let n = leaves + 1;
    let mut rng = seeded_rng(seed);
    let mut pinned = |count: usize| -> Vec<f64> {
        let mut v: Vec<f64> = (0..count).map(|_| rng.random::<f64>()).collect();
        v[0] = 0.0;
        v[1] = 1.0;
        v
    };
    let mut edges = Vec::new();
    let center_clique: Vec<PlayerId> = (0..n).map(PlayerId).collect();
    edges.push(Hyperedge {
        owner: PlayerId(0),
        clique: center_clique,
        payoffs: pinned(1 << n),
    });
    for leaf in 1..n {
        edges.push(Hyperedge {
            owner: PlayerId(leaf),
            clique: vec![PlayerId(0), PlayerId(leaf)],
            payoffs: pinned(4),
        });
    }
    Gmhg::new(vec![ActionSet::of_size(2); n], edges).expect("well-formed fixture")
}
