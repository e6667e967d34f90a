//! Mixed strategies, expected payoffs, regret and the product-difference
//! subset expansion.
//!
//! Expected payoffs are summed hyperedge by hyperedge, so the cost is the
//! game's representation size, never the full joint-action space.

use crate::error::{Error, Result};
use crate::game::{advance_odometer, Gmhg, PlayerId};

/// Probabilities must sum to 1 within this tolerance.
pub const PROB_SUM_TOL: f64 = 1e-9;
/// Slack added to every regret-vs-epsilon comparison so boundary profiles
/// do not flap under floating-point evaluation order.
pub const REGRET_TOL: f64 = 1e-9;

/// Hyperedges larger than this are accumulated with compensated summation.
const COMPENSATED_THRESHOLD: usize = 1 << 16;

/// One player's probability distribution over its actions.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy {
    probs: Vec<f64>,
}

impl MixedStrategy {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::BadStrategy {
                player: usize::MAX,
                reason: "empty probability vector".into(),
            });
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::BadStrategy {
                player: usize::MAX,
                reason: format!("entry {p} is negative or not finite"),
            });
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::BadStrategy {
                player: usize::MAX,
                reason: format!("probabilities sum to {sum}, expected 1"),
            });
        }
        Ok(MixedStrategy { probs })
    }

    pub fn uniform(m: usize) -> Self {
        MixedStrategy {
            probs: vec![1.0 / m as f64; m],
        }
    }

    /// Point mass on action `a`.
    pub fn pure(m: usize, a: usize) -> Self {
        let mut probs = vec![0.0; m];
        probs[a] = 1.0;
        MixedStrategy { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// One mixed strategy per player, inducing the product distribution over
/// joint actions.
#[derive(Debug, Clone, PartialEq)]
pub struct JointMixedStrategy {
    per_player: Vec<MixedStrategy>,
}

impl JointMixedStrategy {
    pub fn new(per_player: Vec<MixedStrategy>) -> Self {
        JointMixedStrategy { per_player }
    }

    pub fn uniform(game: &Gmhg) -> Self {
        JointMixedStrategy {
            per_player: (0..game.num_players())
                .map(|i| MixedStrategy::uniform(game.num_actions(PlayerId(i))))
                .collect(),
        }
    }

    /// Point mass on joint action `x`.
    pub fn pure(game: &Gmhg, x: &[usize]) -> Self {
        JointMixedStrategy {
            per_player: x
                .iter()
                .enumerate()
                .map(|(i, &a)| MixedStrategy::pure(game.num_actions(PlayerId(i)), a))
                .collect(),
        }
    }

    pub fn player(&self, i: PlayerId) -> &MixedStrategy {
        &self.per_player[i.0]
    }

    pub fn players(&self) -> &[MixedStrategy] {
        &self.per_player
    }

    pub fn num_players(&self) -> usize {
        self.per_player.len()
    }

    /// Largest per-coordinate probability difference across all players.
    pub fn linf_distance(&self, other: &JointMixedStrategy) -> f64 {
        let mut d: f64 = 0.0;
        for (a, b) in self.per_player.iter().zip(&other.per_player) {
            for (x, y) in a.probs().iter().zip(b.probs()) {
                d = d.max((x - y).abs());
            }
        }
        d
    }

    /// Checks compatibility with a game's action counts.
    pub fn check_for(&self, game: &Gmhg) -> Result<()> {
        if self.per_player.len() != game.num_players() {
            return Err(Error::BadStrategy {
                player: usize::MAX,
                reason: format!(
                    "{} strategies for {} players",
                    self.per_player.len(),
                    game.num_players()
                ),
            });
        }
        for (i, s) in self.per_player.iter().enumerate() {
            if s.len() != game.num_actions(PlayerId(i)) {
                return Err(Error::BadStrategy {
                    player: i,
                    reason: format!(
                        "{} probabilities for {} actions",
                        s.len(),
                        game.num_actions(PlayerId(i))
                    ),
                });
            }
        }
        Ok(())
    }
}

/// Per-player, per-action signed differences between two joint strategies.
#[derive(Debug, Clone)]
pub struct DeltaVector {
    per_player: Vec<Vec<f64>>,
}

impl DeltaVector {
    pub fn between(p: &JointMixedStrategy, q: &JointMixedStrategy) -> Self {
        DeltaVector {
            per_player: p
                .players()
                .iter()
                .zip(q.players())
                .map(|(a, b)| a.probs().iter().zip(b.probs()).map(|(x, y)| x - y).collect())
                .collect(),
        }
    }

    pub fn get(&self, i: PlayerId, action: usize) -> f64 {
        self.per_player[i.0][action]
    }
}

/// Sums one hyperedge's expectation given per-player probability slices.
fn edge_expectation<'a>(
    game: &Gmhg,
    edge_idx: usize,
    probs_of: &impl Fn(usize) -> &'a [f64],
) -> f64 {
    let edge = &game.hyperedges()[edge_idx];
    let sizes: Vec<usize> = edge
        .clique
        .iter()
        .map(|m| game.num_actions(*m))
        .collect();
    let slices: Vec<&[f64]> = edge.clique.iter().map(|m| probs_of(m.0)).collect();
    let mut joint = vec![0usize; edge.clique.len()];
    let compensated = edge.payoffs.len() > COMPENSATED_THRESHOLD;
    let mut sum = 0.0;
    let mut carry = 0.0;
    let mut flat = 0usize;
    loop {
        let mut w = 1.0;
        for (pos, s) in slices.iter().enumerate() {
            w *= s[joint[pos]];
        }
        let term = w * edge.payoffs[flat];
        if compensated {
            let y = term - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        } else {
            sum += term;
        }
        flat += 1;
        if !advance_odometer(&mut joint, &sizes) {
            break;
        }
    }
    sum
}

/// Expected payoff of player `i`, with probabilities supplied per player id.
/// Only players inside i's owned cliques are ever looked up, which is what
/// makes best-response constraints local to N(i).
pub(crate) fn expected_payoff_with<'a>(
    game: &Gmhg,
    i: PlayerId,
    probs_of: &impl Fn(usize) -> &'a [f64],
) -> f64 {
    game.owned_edges(i)
        .iter()
        .map(|&e| edge_expectation(game, e, probs_of))
        .sum()
}

/// Best payoff any single action of `i` achieves against the others, minus
/// the current expected payoff; clamped to zero after tolerance. Ties in
/// the best response go to the lowest action index.
pub(crate) fn regret_with<'a>(
    game: &Gmhg,
    i: PlayerId,
    probs_of: &impl Fn(usize) -> &'a [f64],
) -> f64 {
    let m = game.num_actions(i);
    let current = expected_payoff_with(game, i, probs_of);
    let mut best = f64::NEG_INFINITY;
    for a in 0..m {
        let mut point = vec![0.0; m];
        point[a] = 1.0;
        let lookup = |j: usize| if j == i.0 { point.as_slice() } else { probs_of(j) };
        let v = expected_payoff_with(game, i, &lookup);
        if v > best {
            best = v;
        }
    }
    let raw = best - current;
    debug_assert!(raw >= -REGRET_TOL, "regret {raw} below -tolerance");
    raw.max(0.0)
}

/// Expected payoff `M_i(p)` of player `i`, summed hyperedge by hyperedge.
pub fn expected_payoff(game: &Gmhg, p: &JointMixedStrategy, i: PlayerId) -> f64 {
    let lookup = |j: usize| p.player(PlayerId(j)).probs();
    expected_payoff_with(game, i, &lookup)
}

/// Expected payoff of `i` with its own strategy replaced by the point mass
/// on `action`.
pub fn conditional_payoff(game: &Gmhg, p: &JointMixedStrategy, i: PlayerId, action: usize) -> f64 {
    let point = MixedStrategy::pure(game.num_actions(i), action);
    let lookup = |j: usize| {
        if j == i.0 {
            point.probs()
        } else {
            p.player(PlayerId(j)).probs()
        }
    };
    expected_payoff_with(game, i, &lookup)
}

/// `max_a conditional_payoff(..., a) - expected_payoff(...)`, clamped to
/// be nonnegative.
pub fn regret(game: &Gmhg, p: &JointMixedStrategy, i: PlayerId) -> f64 {
    let lookup = |j: usize| p.player(PlayerId(j)).probs();
    regret_with(game, i, &lookup)
}

/// Outcome of an epsilon-equilibrium check.
#[derive(Debug, Clone)]
pub struct EquilibriumCheck {
    pub is_equilibrium: bool,
    pub regrets: Vec<f64>,
}

impl EquilibriumCheck {
    pub fn max_regret(&self) -> f64 {
        self.regrets.iter().copied().fold(0.0, f64::max)
    }
}

/// True iff every player's regret is at most `eps` (plus tolerance).
pub fn is_epsilon_ne(game: &Gmhg, p: &JointMixedStrategy, eps: f64) -> EquilibriumCheck {
    let regrets: Vec<f64> = (0..game.num_players())
        .map(|i| regret(game, p, PlayerId(i)))
        .collect();
    let max = regrets.iter().copied().fold(0.0, f64::max);
    EquilibriumCheck {
        is_equilibrium: max <= eps + REGRET_TOL,
        regrets,
    }
}

/// Largest subset size accepted by [`product_difference_expansion`].
pub const MAX_SUBSET: usize = 20;

/// Right-hand side of the product-difference identity: for a player subset
/// B and joint action x_B,
///
/// ```text
/// p(x_B) - q(x_B) = sum over nonempty S of B of
///                   prod_{k in S} (p_k - q_k)(x_k) * prod_{j in B-S} q_j(x_j)
/// ```
///
/// Exposed so tests can compare it against the direct difference of
/// marginal products.
pub fn product_difference_expansion(
    p: &JointMixedStrategy,
    q: &JointMixedStrategy,
    members: &[PlayerId],
    joint: &[usize],
) -> Result<f64> {
    if members.len() > MAX_SUBSET {
        return Err(Error::SubsetTooLarge(members.len(), MAX_SUBSET));
    }
    debug_assert_eq!(members.len(), joint.len());
    let delta = DeltaVector::between(p, q);
    let b = members.len();
    let mut total = 0.0;
    for mask in 1u32..(1u32 << b) {
        let mut term = 1.0;
        for (pos, &k) in members.iter().enumerate() {
            if mask & (1 << pos) != 0 {
                term *= delta.get(k, joint[pos]);
            } else {
                term *= q.player(k).probs()[joint[pos]];
            }
        }
        total += term;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{make_polymatrix, ActionSet, Gmhg, Hyperedge};
    use crate::testgames::{matching_pennies, seeded_rng, random_simplex};
    use rand::Rng;
    use std::collections::BTreeMap;

    fn uniform2() -> JointMixedStrategy {
        JointMixedStrategy::new(vec![MixedStrategy::uniform(2), MixedStrategy::uniform(2)])
    }

    #[test]
    fn matching_pennies_uniform_payoffs() {
        let g = matching_pennies();
        let p = uniform2();
        for i in 0..2 {
            assert!((expected_payoff(&g, &p, PlayerId(i)) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_profile_payoff_is_table_entry() {
        let g = matching_pennies();
        let p = JointMixedStrategy::pure(&g, &[0, 0]);
        assert_eq!(expected_payoff(&g, &p, PlayerId(0)), 1.0);
        assert_eq!(expected_payoff(&g, &p, PlayerId(1)), 0.0);
    }

    #[test]
    fn conditional_payoffs() {
        let g = matching_pennies();
        let p = uniform2();
        for a in 0..2 {
            assert!((conditional_payoff(&g, &p, PlayerId(0), a) - 0.5).abs() < 1e-12);
        }
        // opponent pure heads, matcher plays heads
        let pure = JointMixedStrategy::pure(&g, &[1, 0]);
        assert_eq!(conditional_payoff(&g, &pure, PlayerId(0), 0), 1.0);

        // singleton-clique game: conditional payoff is the table entry
        let solo = Gmhg::new(
            vec![ActionSet::of_size(2)],
            vec![Hyperedge {
                owner: PlayerId(0),
                clique: vec![PlayerId(0)],
                payoffs: vec![2.0, 5.0],
            }],
        )
        .unwrap();
        let s = JointMixedStrategy::new(vec![MixedStrategy::uniform(2)]);
        assert_eq!(conditional_payoff(&solo, &s, PlayerId(0), 1), 5.0);
    }

    #[test]
    fn regrets_on_matching_pennies() {
        let g = matching_pennies();
        assert!(regret(&g, &uniform2(), PlayerId(0)) < 1e-12);
        assert!(regret(&g, &uniform2(), PlayerId(1)) < 1e-12);

        let hh = JointMixedStrategy::pure(&g, &[0, 0]);
        assert!((regret(&g, &hh, PlayerId(1)) - 1.0).abs() < 1e-12);
        assert!(regret(&g, &hh, PlayerId(0)) < 1e-12);
    }

    #[test]
    fn coordination_pure_ne_has_zero_regret() {
        let g = crate::generate::coordination(2);
        let hh = JointMixedStrategy::pure(&g, &[0, 0]);
        let check = is_epsilon_ne(&g, &hh, 0.0);
        assert!(check.is_equilibrium);
        assert!(check.max_regret() < 1e-12);
    }

    #[test]
    fn epsilon_boundary() {
        let g = matching_pennies();
        let p = JointMixedStrategy::new(vec![
            MixedStrategy::new(vec![0.6, 0.4]).unwrap(),
            MixedStrategy::uniform(2),
        ]);
        let check = is_epsilon_ne(&g, &p, 0.05);
        assert!(!check.is_equilibrium);
        assert!((check.regrets[1] - 0.1).abs() < 1e-12);
        assert!(is_epsilon_ne(&g, &p, 0.1).is_equilibrium);
    }

    #[test]
    fn epsilon_monotone() {
        let g = matching_pennies();
        let mut rng = seeded_rng(11);
        for _ in 0..50 {
            let p = JointMixedStrategy::new(vec![
                MixedStrategy::new(random_simplex(&mut rng, 2)).unwrap(),
                MixedStrategy::new(random_simplex(&mut rng, 2)).unwrap(),
            ]);
            let eps: f64 = rng.random_range(0.0..0.5);
            let eps2 = eps + rng.random_range(0.0..0.5);
            if is_epsilon_ne(&g, &p, eps).is_equilibrium {
                assert!(is_epsilon_ne(&g, &p, eps2).is_equilibrium);
            }
        }
    }

    #[test]
    fn path_middle_player_payoff_splits() {
        let actions = vec![ActionSet::of_size(2); 3];
        let mut rng = seeded_rng(7);
        let mut mats = BTreeMap::new();
        for pair in [(0, 1), (1, 0), (1, 2), (2, 1)] {
            mats.insert(pair, (0..4).map(|_| rng.random::<f64>()).collect::<Vec<_>>());
        }
        let g = make_polymatrix(actions, &[(0, 1), (1, 2)], &mats).unwrap();
        let p = JointMixedStrategy::new(vec![
            MixedStrategy::new(random_simplex(&mut rng, 2)).unwrap(),
            MixedStrategy::new(random_simplex(&mut rng, 2)).unwrap(),
            MixedStrategy::new(random_simplex(&mut rng, 2)).unwrap(),
        ]);
        // independent evaluation of each pairwise expectation
        let pairwise = |mat: &[f64], a: &[f64], b: &[f64]| -> f64 {
            let mut s = 0.0;
            for x in 0..2 {
                for y in 0..2 {
                    s += a[x] * b[y] * mat[x * 2 + y];
                }
            }
            s
        };
        let want = pairwise(&mats[&(1, 0)], p.player(PlayerId(1)).probs(), p.player(PlayerId(0)).probs())
            + pairwise(&mats[&(1, 2)], p.player(PlayerId(1)).probs(), p.player(PlayerId(2)).probs());
        let got = expected_payoff(&g, &p, PlayerId(1));
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn locality_matches_full_joint_sum() {
        // brute-force cross-check against sum over the whole joint space
        let mut rng = seeded_rng(23);
        for n in 2..=4usize {
            let g = crate::generate::random_tree_polymatrix(n, 2, rng.random()).unwrap();
            let p = JointMixedStrategy::new(
                (0..n)
                    .map(|_| MixedStrategy::new(random_simplex(&mut rng, 2)).unwrap())
                    .collect(),
            );
            for i in 0..n {
                let local = expected_payoff(&g, &p, PlayerId(i));
                let mut full = 0.0;
                let sizes = vec![2usize; n];
                let mut x = vec![0usize; n];
                loop {
                    let mut w = 1.0;
                    for (j, &a) in x.iter().enumerate() {
                        w *= p.player(PlayerId(j)).probs()[a];
                    }
                    full += w * g.pure_payoff(PlayerId(i), &x);
                    if !crate::game::advance_odometer(&mut x, &sizes) {
                        break;
                    }
                }
                assert!((local - full).abs() < 1e-10, "player {i}: {local} vs {full}");
            }
        }
    }

    #[test]
    fn best_response_point_mass_has_zero_regret() {
        let mut rng = seeded_rng(31);
        for _ in 0..20 {
            let g = crate::generate::random_normal_form(2, 3, rng.random()).unwrap();
            let mut p = JointMixedStrategy::new(vec![
                MixedStrategy::new(random_simplex(&mut rng, 3)).unwrap(),
                MixedStrategy::new(random_simplex(&mut rng, 3)).unwrap(),
            ]);
            // replace player 0 by a point mass on its best response
            let best = (0..3)
                .map(|a| conditional_payoff(&g, &p, PlayerId(0), a))
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(b.0.cmp(&a.0)))
                .unwrap()
                .0;
            p = JointMixedStrategy::new(vec![
                MixedStrategy::pure(3, best),
                p.player(PlayerId(1)).clone(),
            ]);
            assert!(regret(&g, &p, PlayerId(0)) < 1e-12);
        }
    }

    #[test]
    fn affine_transform_scales_regret() {
        let mut rng = seeded_rng(43);
        for _ in 0..20 {
            let g = crate::generate::random_normal_form(3, 2, rng.random()).unwrap();
            let p = JointMixedStrategy::new(
                (0..3)
                    .map(|_| MixedStrategy::new(random_simplex(&mut rng, 2)).unwrap())
                    .collect(),
            );
            let i = PlayerId(rng.random_range(0..3));
            let a = rng.random_range(0.5..3.0);
            let b = rng.random_range(-1.0..1.0);
            let mut edges = g.hyperedges().to_vec();
            for e in edges.iter_mut() {
                if e.owner == i {
                    for v in e.payoffs.iter_mut() {
                        *v = a * *v + b;
                    }
                }
            }
            let scaled = Gmhg::new(
                (0..3).map(|j| g.actions(PlayerId(j)).clone()).collect(),
                edges,
            )
            .unwrap();
            let r0 = regret(&g, &p, i);
            let r1 = regret(&scaled, &p, i);
            assert!((r1 - a * r0).abs() <= 1e-9 * (1.0 + r1.abs()));
        }
    }

    #[test]
    fn product_difference_identity() {
        let mut rng = seeded_rng(59);
        // p == q: every expansion is zero
        let q = JointMixedStrategy::new(vec![
            MixedStrategy::uniform(3),
            MixedStrategy::uniform(2),
            MixedStrategy::uniform(4),
        ]);
        let ids = [PlayerId(0), PlayerId(1), PlayerId(2)];
        assert_eq!(
            product_difference_expansion(&q, &q, &ids, &[1, 0, 2]).unwrap(),
            0.0
        );

        // |B| = 1: exactly the per-player delta
        let p = JointMixedStrategy::new(vec![
            MixedStrategy::new(vec![0.7, 0.2, 0.1]).unwrap(),
            MixedStrategy::uniform(2),
            MixedStrategy::uniform(4),
        ]);
        let d = product_difference_expansion(&p, &q, &[PlayerId(0)], &[0]).unwrap();
        assert!((d - (0.7 - 1.0 / 3.0)).abs() < 1e-15);

        // random |B| = 3 against the direct product difference
        for _ in 0..200 {
            let sizes = [3usize, 2, 4];
            let p = JointMixedStrategy::new(
                sizes
                    .iter()
                    .map(|&m| MixedStrategy::new(random_simplex(&mut rng, m)).unwrap())
                    .collect(),
            );
            let q = JointMixedStrategy::new(
                sizes
                    .iter()
                    .map(|&m| MixedStrategy::new(random_simplex(&mut rng, m)).unwrap())
                    .collect(),
            );
            let joint: Vec<usize> = sizes.iter().map(|&m| rng.random_range(0..m)).collect();
            let lhs: f64 = joint
                .iter()
                .enumerate()
                .map(|(i, &a)| p.player(PlayerId(i)).probs()[a])
                .product::<f64>()
                - joint
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| q.player(PlayerId(i)).probs()[a])
                    .product::<f64>();
            let rhs = product_difference_expansion(&p, &q, &ids, &joint).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12);
        }

        let too_big: Vec<PlayerId> = (0..21).map(PlayerId).collect();
        assert!(matches!(
            product_difference_expansion(&p, &q, &too_big, &vec![0; 21]),
            Err(Error::SubsetTooLarge(21, 20))
        ));
    }

    #[test]
    fn delta_sums_to_zero() {
        let mut rng = seeded_rng(61);
        for _ in 0..20 {
            let p = MixedStrategy::new(random_simplex(&mut rng, 5)).unwrap();
            let q = MixedStrategy::new(random_simplex(&mut rng, 5)).unwrap();
            let d = DeltaVector::between(
                &JointMixedStrategy::new(vec![p]),
                &JointMixedStrategy::new(vec![q]),
            );
            let s: f64 = (0..5).map(|a| d.get(PlayerId(0), a)).sum();
            assert!(s.abs() < 1e-9);
        }
    }
}
