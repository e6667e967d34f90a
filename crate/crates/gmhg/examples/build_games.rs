//! Constructing games: normal form, polymatrix over a graph, and a raw
//! multi-hypermatrix game with lopsided hyperedge ownership. Prints
//! validation results, representation sizes, payoff ranges, and the
//! zero-padding conversion to a symmetric hyperedge structure.

use std::collections::BTreeMap;

use gmhg::game::{make_normal_form, make_polymatrix, ActionSet, Gmhg, Hyperedge, PlayerId};
use gmhg::strategy::{expected_payoff, JointMixedStrategy};

fn main() {
    // matching pennies as a 2-player normal-form game
    let mp = make_normal_form(
        vec![ActionSet::new(vec!["H".into(), "T".into()]); 2],
        vec![vec![1.0, 0.0, 0.0, 1.0], vec![0.0, 1.0, 1.0, 0.0]],
    )
    .unwrap();
    println!("matching pennies: violations = {:?}", mp.validate());
    let stats = mp.representation_size();
    println!(
        "  entries={} n={} m={} k={}",
        stats.entries, stats.players, stats.max_actions, stats.max_neighborhood
    );
    for (idx, e) in mp.payoff_ranges().per_edge.iter().enumerate() {
        println!("  hyperedge {idx}: min={} max={} range={}", e.min, e.max, e.range());
    }
    let bounds = mp.global_payoff_bounds(1_000_000).unwrap();
    println!("  global payoff bounds per player: {bounds:?}");

    // polymatrix game on the path 0 - 1 - 2
    let path_edges = [(0, 1), (1, 2)];
    let mut mats = BTreeMap::new();
    for &(i, j) in &path_edges {
        mats.insert((i, j), vec![0.2, 0.9, 0.4, 0.1]);
        mats.insert((j, i), vec![0.7, 0.3, 0.0, 1.0]);
    }
    let path = make_polymatrix(vec![ActionSet::of_size(2); 3], &path_edges, &mats).unwrap();
    println!(
        "\npath polymatrix: {} hyperedges, middle player owns {}",
        path.hyperedges().len(),
        path.owned_edges(PlayerId(1)).len()
    );

    // a GMhG where ownership is asymmetric: only player 0 owns the pair
    let lopsided = Gmhg::new(
        vec![ActionSet::of_size(2); 2],
        vec![Hyperedge {
            owner: PlayerId(0),
            clique: vec![PlayerId(0), PlayerId(1)],
            payoffs: vec![1.0, 0.0, 0.0, 1.0],
        }],
    )
    .unwrap();
    let symmetric = lopsided.to_hypergraphical();
    println!(
        "\nasymmetric game has {} hyperedges; symmetrized version has {}",
        lopsided.hyperedges().len(),
        symmetric.hyperedges().len()
    );
    let p = JointMixedStrategy::uniform(&lopsided);
    for i in 0..2 {
        let before = expected_payoff(&lopsided, &p, PlayerId(i));
        let after = expected_payoff(&symmetric, &p, PlayerId(i));
        println!("  player {i}: payoff before={before:.6} after={after:.6}");
    }
}
