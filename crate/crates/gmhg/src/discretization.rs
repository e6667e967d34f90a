//! Per-player uniform discretization of the mixed-strategy simplex.
//!
//! Grid sizing follows the sparse-representation bound: player i's grid
//! count depends on its own action count and on the largest interaction
//! mass among the players whose payoffs i can move. Grid membership is
//! tracked with exact integer counts (a lattice strategy is a composition
//! of s_i into |A_i| parts), so on-grid tests never suffer float drift.

use crate::error::{Error, Result};
use crate::game::{Gmhg, PayoffRanges, PlayerId};
use crate::strategy::{JointMixedStrategy, MixedStrategy};

/// Relative slack when deciding whether a sizing ratio is already integral,
/// so that e.g. 4/0.1 sizes to 40 and not 41.
const CEIL_TOL: f64 = 1e-9;

/// Per-player grid sizes plus the epsilon bookkeeping that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizationPlan {
    sizes: Vec<u64>,
    eps: f64,
    eps_effective: f64,
    eps_max: Option<f64>,
    clamped: bool,
}

impl DiscretizationPlan {
    /// Grid sizes from the sparse Nash-representation bound:
    /// `s_i = ceil(2 |A_i| max_{j affected by i} D_j / eps)` where
    /// `D_j = sum_{C in C_j} R_{j,C} (|C| - 1)`, floored at 1.
    ///
    /// The bound is valid for `eps <= eps_max = 2 min_i D_i / (c_i - 1)`
    /// (c_i = player i's largest clique size; players with D_i = 0 impose
    /// no bound). Requests above eps_max are sized at eps_max and the
    /// clamp is recorded; a finer grid only strengthens the guarantee.
    pub fn for_gmhg(game: &Gmhg, ranges: &PayoffRanges, eps: f64) -> Self {
        let n = game.num_players();
        let mass: Vec<f64> = (0..n)
            .map(|i| ranges.interaction_mass(game, PlayerId(i)))
            .collect();
        let mut eps_max: Option<f64> = None;
        for i in 0..n {
            if mass[i] > 0.0 {
                let c_max = game
                    .owned_edges(PlayerId(i))
                    .iter()
                    .map(|&e| game.hyperedges()[e].clique.len())
                    .max()
                    .unwrap_or(1);
                let bound = 2.0 * mass[i] / (c_max - 1) as f64;
                eps_max = Some(eps_max.map_or(bound, |b: f64| b.min(bound)));
            }
        }
        let (eps_effective, clamped) = match eps_max {
            Some(m) if eps > m => (m, true),
            _ => (eps, false),
        };
        let sizes = (0..n)
            .map(|i| {
                let w = game
                    .affected_by(PlayerId(i))
                    .iter()
                    .map(|&j| mass[j])
                    .fold(0.0, f64::max);
                size_from_ratio(2.0 * game.num_actions(PlayerId(i)) as f64 * w / eps_effective)
            })
            .collect();
        DiscretizationPlan {
            sizes,
            eps,
            eps_effective,
            eps_max,
            clamped,
        }
    }

    /// Graphical-game corollary sizing, assuming payoffs normalized to
    /// [0,1]: `s_i = ceil(2 |A_i| max_{j affected by i} |Neigh_j| / eps)`.
    /// Refuses games where some player owns more or fewer than one
    /// hyperedge, or where payoffs leave [0,1] by more than 1e-9.
    pub fn for_graphical_game(game: &Gmhg, eps: f64) -> Result<Self> {
        let n = game.num_players();
        for i in 0..n {
            let count = game.owned_edges(PlayerId(i)).len();
            if count != 1 {
                return Err(Error::NotGraphical { player: i, count });
            }
        }
        for (idx, e) in game.hyperedges().iter().enumerate() {
            for &v in &e.payoffs {
                if !(-1e-9..=1.0 + 1e-9).contains(&v) {
                    return Err(Error::NotNormalized { edge: idx, value: v });
                }
            }
        }
        // with the unit-range convention the theorem bound reduces to 2
        let any_interaction = (0..n).any(|i| game.neighborhood(PlayerId(i)).len() >= 2);
        let eps_max = if any_interaction { Some(2.0) } else { None };
        let (eps_effective, clamped) = match eps_max {
            Some(m) if eps > m => (m, true),
            _ => (eps, false),
        };
        let sizes = (0..n)
            .map(|i| {
                let w = game
                    .affected_by(PlayerId(i))
                    .iter()
                    .map(|&j| (game.neighborhood(PlayerId(j)).len() - 1) as f64)
                    .fold(0.0, f64::max);
                size_from_ratio(2.0 * game.num_actions(PlayerId(i)) as f64 * w / eps_effective)
            })
            .collect();
        Ok(DiscretizationPlan {
            sizes,
            eps,
            eps_effective,
            eps_max,
            clamped,
        })
    }

    /// Plan with explicitly chosen sizes; used when the caller wants a
    /// particular grid rather than the theorem's.
    pub fn with_sizes(sizes: Vec<u64>, eps: f64) -> Self {
        assert!(sizes.iter().all(|&s| s >= 1), "grid sizes must be >= 1");
        DiscretizationPlan {
            sizes,
            eps,
            eps_effective: eps,
            eps_max: None,
            clamped: false,
        }
    }

    pub fn size(&self, i: PlayerId) -> u64 {
        self.sizes[i.0]
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    /// Grid step `tau_i = 1/s_i`.
    pub fn step(&self, i: PlayerId) -> f64 {
        1.0 / self.sizes[i.0] as f64
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn eps_effective(&self) -> f64 {
        self.eps_effective
    }

    /// Validity bound of the sizing theorem; `None` means no player
    /// constrains epsilon (zero interaction mass everywhere).
    pub fn eps_max(&self) -> Option<f64> {
        self.eps_max
    }

    pub fn clamped(&self) -> bool {
        self.clamped
    }
}

fn size_from_ratio(ratio: f64) -> u64 {
    let r = ratio.round();
    let v = if (ratio - r).abs() <= CEIL_TOL * r.abs().max(1.0) {
        r
    } else {
        ratio.ceil()
    };
    (v as u64).max(1)
}

/// A grid mixed strategy: integer counts summing to the denominator s_i,
/// realized probability `count / s_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeStrategy {
    counts: Vec<u64>,
    denom: u64,
}

impl LatticeStrategy {
    pub fn new(counts: Vec<u64>, denom: u64) -> Self {
        debug_assert_eq!(counts.iter().sum::<u64>(), denom);
        LatticeStrategy { counts, denom }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn probs(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&z| z as f64 / self.denom as f64)
            .collect()
    }

    pub fn to_mixed(&self) -> MixedStrategy {
        MixedStrategy::new(self.probs()).expect("lattice strategies are normalized")
    }
}

/// Number of lattice strategies for grid size `s` over `m` actions:
/// the stars-and-bars count C(s + m - 1, m - 1). `None` on overflow.
pub fn lattice_count(s: u64, m: usize) -> Option<u128> {
    if m == 0 {
        return Some(0);
    }
    binomial(s as u128 + m as u128 - 1, m as u128 - 1)
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)?;
        acc /= i + 1;
    }
    Some(acc)
}

/// Iterator over every composition of `s` into `m` nonnegative parts, in
/// the order that starts at (s, 0, ..., 0) and ends at (0, ..., 0, s).
#[derive(Debug)]
pub struct LatticeIter {
    next: Option<Vec<u64>>,
    denom: u64,
}

impl Iterator for LatticeIter {
    type Item = LatticeStrategy;

    fn next(&mut self) -> Option<LatticeStrategy> {
        let current = self.next.take()?;
        let m = current.len();
        let mut succ = current.clone();
        if m > 1 && succ[m - 1] != self.denom {
            let t = (0..m - 1).rev().find(|&t| succ[t] > 0).expect("not final");
            let tail = succ[m - 1];
            succ[t] -= 1;
            succ[t + 1..].iter_mut().for_each(|v| *v = 0);
            succ[t + 1] = tail + 1;
            self.next = Some(succ);
        }
        Some(LatticeStrategy::new(current, self.denom))
    }
}

/// All compositions of `s` into `m` parts, from (s, 0, ..., 0) down to
/// (0, ..., 0, s).
pub fn compositions(s: u64, m: usize) -> LatticeIter {
    let mut first = vec![0u64; m];
    if m > 0 {
        first[0] = s;
    }
    LatticeIter {
        next: if m > 0 { Some(first) } else { None },
        denom: s,
    }
}

/// Enumerates player `i`'s full lattice under `plan`. Refuses up front if
/// the stars-and-bars count exceeds `budget`.
pub fn enumerate_lattice(plan: &DiscretizationPlan, i: PlayerId, m: usize, budget: u128) -> Result<LatticeIter> {
    let s = plan.size(i);
    let count = lattice_count(s, m).unwrap_or(u128::MAX);
    if count > budget {
        return Err(Error::BudgetExceeded {
            what: "lattice enumeration",
            player: i.0,
            required: count,
            budget,
        });
    }
    Ok(compositions(s, m))
}

/// Rounds one probability vector onto the `s`-grid: floor every coordinate,
/// then hand the leftover steps to the largest fractional remainders (ties
/// to the lowest action index). Per-coordinate error is at most `1/s` and
/// the counts sum to `s` exactly.
pub fn round_probs_to_counts(probs: &[f64], s: u64) -> Vec<u64> {
    let m = probs.len();
    let sf = s as f64;
    let mut counts = Vec::with_capacity(m);
    let mut fracs = Vec::with_capacity(m);
    for &p in probs {
        let scaled = (p * sf).max(0.0);
        let floor = scaled.floor().min(sf);
        counts.push(floor as u64);
        fracs.push(scaled - floor);
    }
    let assigned: u64 = counts.iter().sum();
    debug_assert!(assigned <= s, "floors exceed grid size");
    let leftover = (s - assigned) as usize;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| fracs[b].partial_cmp(&fracs[a]).unwrap().then(a.cmp(&b)));
    for &idx in order.iter().take(leftover) {
        counts[idx] += 1;
    }
    counts
}

/// Rounds a joint mixed strategy onto the plan's grid, keeping exact
/// integer counts.
pub fn round_to_lattice(p: &JointMixedStrategy, plan: &DiscretizationPlan) -> Vec<LatticeStrategy> {
    p.players()
        .iter()
        .enumerate()
        .map(|(i, ms)| {
            let s = plan.size(PlayerId(i));
            LatticeStrategy::new(round_probs_to_counts(ms.probs(), s), s)
        })
        .collect()
}

/// Rounds a joint mixed strategy onto the plan's grid, returning realized
/// probabilities.
pub fn round_to_grid(p: &JointMixedStrategy, plan: &DiscretizationPlan) -> JointMixedStrategy {
    JointMixedStrategy::new(
        round_to_lattice(p, plan)
            .iter()
            .map(|l| l.to_mixed())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{ActionSet, Gmhg, Hyperedge};
    use crate::testgames::{matching_pennies, random_simplex, seeded_rng};
    use rand::Rng;
    use std::collections::HashSet;

    #[test]
    fn matching_pennies_plan_sizes() {
        let g = matching_pennies();
        let plan = DiscretizationPlan::for_gmhg(&g, &g.payoff_ranges(), 0.1);
        assert_eq!(plan.sizes(), &[40, 40]);
        assert_eq!(plan.eps_max(), Some(2.0));
        assert!(!plan.clamped());
        assert_eq!(plan.step(PlayerId(0)), 1.0 / 40.0);
    }

    #[test]
    fn star_plan_sizes() {
        // center 0 owns three 2-cliques with range 1; leaves own one each
        let n = 4;
        let mut edges = Vec::new();
        for leaf in 1..n {
            edges.push(Hyperedge {
                owner: PlayerId(0),
                clique: vec![PlayerId(0), PlayerId(leaf)],
                payoffs: vec![0.0, 1.0, 1.0, 0.0],
            });
            edges.push(Hyperedge {
                owner: PlayerId(leaf),
                clique: vec![PlayerId(leaf), PlayerId(0)],
                payoffs: vec![0.0, 1.0, 1.0, 0.0],
            });
        }
        let g = Gmhg::new(vec![ActionSet::of_size(2); n], edges).unwrap();
        let plan = DiscretizationPlan::for_gmhg(&g, &g.payoff_ranges(), 0.5);
        // leaves: the center's interaction mass is 3
        for leaf in 1..n {
            assert_eq!(plan.size(PlayerId(leaf)), 24);
        }
        // center: each leaf's interaction mass is 1
        assert_eq!(plan.size(PlayerId(0)), 8);

        // variant where only the center owns hyperedges
        let center_only: Vec<Hyperedge> = (1..n)
            .map(|leaf| Hyperedge {
                owner: PlayerId(0),
                clique: vec![PlayerId(0), PlayerId(leaf)],
                payoffs: vec![0.0, 1.0, 1.0, 0.0],
            })
            .collect();
        let g2 = Gmhg::new(vec![ActionSet::of_size(2); n], center_only).unwrap();
        let plan2 = DiscretizationPlan::for_gmhg(&g2, &g2.payoff_ranges(), 0.5);
        for leaf in 1..n {
            assert_eq!(plan2.size(PlayerId(leaf)), 24);
        }
        // nobody is affected by the center
        assert_eq!(plan2.size(PlayerId(0)), 1);
    }

    #[test]
    fn singleton_cliques_mean_no_interaction() {
        let g = Gmhg::new(
            vec![ActionSet::of_size(2), ActionSet::of_size(3)],
            vec![
                Hyperedge {
                    owner: PlayerId(0),
                    clique: vec![PlayerId(0)],
                    payoffs: vec![0.0, 1.0],
                },
                Hyperedge {
                    owner: PlayerId(1),
                    clique: vec![PlayerId(1)],
                    payoffs: vec![0.5, 0.25, 1.0],
                },
            ],
        )
        .unwrap();
        let plan = DiscretizationPlan::for_gmhg(&g, &g.payoff_ranges(), 0.1);
        assert_eq!(plan.sizes(), &[1, 1]);
        assert_eq!(plan.eps_max(), None);
        assert!(!plan.clamped());
    }

    #[test]
    fn clamp_above_eps_max() {
        let g = matching_pennies();
        let plan = DiscretizationPlan::for_gmhg(&g, &g.payoff_ranges(), 3.0);
        assert!(plan.clamped());
        assert_eq!(plan.eps_effective(), 2.0);
        assert_eq!(plan.eps(), 3.0);
        // sized at eps_max, not at the request
        assert_eq!(plan.sizes(), &[2, 2]);
    }

    #[test]
    fn corollary_sizes() {
        let g = matching_pennies();
        let plan = DiscretizationPlan::for_graphical_game(&g, 0.1).unwrap();
        assert_eq!(plan.sizes(), &[40, 40]);

        // star graphical game: center's neighborhood has 3 neighbors
        let star = crate::testgames::star_graphical_game(3, 101);
        let plan = DiscretizationPlan::for_graphical_game(&star, 0.25).unwrap();
        for leaf in 1..4 {
            assert_eq!(plan.size(PlayerId(leaf)), 48);
        }
        assert_eq!(plan.size(PlayerId(0)), 16);

        // refusal on un-normalized payoffs
        let bad = Gmhg::new(
            vec![ActionSet::of_size(2), ActionSet::of_size(2)],
            vec![
                Hyperedge {
                    owner: PlayerId(0),
                    clique: vec![PlayerId(0), PlayerId(1)],
                    payoffs: vec![0.0, 2.0, 1.0, 0.0],
                },
                Hyperedge {
                    owner: PlayerId(1),
                    clique: vec![PlayerId(0), PlayerId(1)],
                    payoffs: vec![0.0, 1.0, 1.0, 0.0],
                },
            ],
        )
        .unwrap();
        assert!(matches!(
            DiscretizationPlan::for_graphical_game(&bad, 0.1),
            Err(Error::NotNormalized { .. })
        ));

        // refusal when a player owns two hyperedges
        let mp = matching_pennies();
        let mut edges = mp.hyperedges().to_vec();
        edges.push(edges[0].clone());
        let poly = Gmhg::new(vec![ActionSet::of_size(2); 2], edges).unwrap();
        assert!(matches!(
            DiscretizationPlan::for_graphical_game(&poly, 0.1),
            Err(Error::NotGraphical { .. })
        ));
    }

    #[test]
    fn corollary_agrees_with_theorem_on_unit_ranges() {
        let mut rng = seeded_rng(5);
        for trial in 0..10 {
            let g = crate::testgames::star_graphical_game(2 + trial % 3, rng.random());
            let eps = rng.random_range(0.05..0.6);
            let a = DiscretizationPlan::for_graphical_game(&g, eps).unwrap();
            let b = DiscretizationPlan::for_gmhg(&g, &g.payoff_ranges(), eps);
            assert_eq!(a.sizes(), b.sizes(), "eps={eps}");
        }
    }

    #[test]
    fn plan_monotone_in_eps() {
        let mut rng = seeded_rng(17);
        for _ in 0..20 {
            let g = crate::generate::random_tree_polymatrix(4, 2, rng.random()).unwrap();
            let ranges = g.payoff_ranges();
            let e1: f64 = rng.random_range(0.01..1.0);
            let e2 = e1 + rng.random_range(0.0..1.0);
            let p1 = DiscretizationPlan::for_gmhg(&g, &ranges, e1);
            let p2 = DiscretizationPlan::for_gmhg(&g, &ranges, e2);
            for i in 0..4 {
                assert!(p2.size(PlayerId(i)) <= p1.size(PlayerId(i)));
            }
        }
    }

    #[test]
    fn lattice_counts_and_order() {
        let plan = DiscretizationPlan::with_sizes(vec![4], 0.1);
        let all: Vec<_> = enumerate_lattice(&plan, PlayerId(0), 3, 1 << 20)
            .unwrap()
            .collect();
        assert_eq!(all.len(), 15);
        assert_eq!(all[0].counts(), &[4, 0, 0]);
        assert_eq!(all.last().unwrap().counts(), &[0, 0, 4]);

        let plan = DiscretizationPlan::with_sizes(vec![1], 0.1);
        let two: Vec<_> = enumerate_lattice(&plan, PlayerId(0), 2, 10)
            .unwrap()
            .collect();
        assert_eq!(two.len(), 2);
        assert_eq!(two[0].counts(), &[1, 0]);
        assert_eq!(two[1].counts(), &[0, 1]);

        let plan = DiscretizationPlan::with_sizes(vec![40], 0.1);
        let fortyone: Vec<_> = enumerate_lattice(&plan, PlayerId(0), 2, 100)
            .unwrap()
            .collect();
        assert_eq!(fortyone.len(), 41);
        assert_eq!(fortyone[0].counts(), &[40, 0]);
        assert_eq!(fortyone[40].counts(), &[0, 40]);

        // budget refusal carries the count
        let plan = DiscretizationPlan::with_sizes(vec![100], 0.1);
        match enumerate_lattice(&plan, PlayerId(0), 6, 10) {
            Err(Error::BudgetExceeded { required, .. }) => {
                assert_eq!(required, lattice_count(100, 6).unwrap());
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn lattice_enumeration_exhaustive() {
        for s in 0..=12u64 {
            for m in 1..=5usize {
                let iter = LatticeIter {
                    next: Some({
                        let mut f = vec![0u64; m];
                        f[0] = s;
                        f
                    }),
                    denom: s,
                };
                let all: Vec<_> = iter.collect();
                let expect = lattice_count(s, m).unwrap() as usize;
                assert_eq!(all.len(), expect, "s={s} m={m}");
                let set: HashSet<Vec<u64>> = all.iter().map(|l| l.counts().to_vec()).collect();
                assert_eq!(set.len(), expect, "duplicates at s={s} m={m}");
                for l in &all {
                    assert_eq!(l.counts().iter().sum::<u64>(), s);
                }
            }
        }
    }

    #[test]
    fn rounding_examples() {
        let plan = DiscretizationPlan::with_sizes(vec![10], 0.1);
        let p = JointMixedStrategy::new(vec![MixedStrategy::new(vec![0.37, 0.63]).unwrap()]);
        let q = round_to_lattice(&p, &plan);
        assert_eq!(q[0].counts(), &[4, 6]);
        let realized = round_to_grid(&p, &plan);
        let d = p.linf_distance(&realized);
        assert!((d - 0.03).abs() < 1e-12);

        // already on the grid: fixed point
        let p = JointMixedStrategy::new(vec![MixedStrategy::new(vec![0.4, 0.6]).unwrap()]);
        assert_eq!(round_to_grid(&p, &plan), p);

        // thirds on a 3-grid stay put exactly
        let plan = DiscretizationPlan::with_sizes(vec![3], 0.1);
        let third = 1.0 / 3.0;
        let p = JointMixedStrategy::new(vec![
            MixedStrategy::new(vec![third, third, third]).unwrap()
        ]);
        let q = round_to_grid(&p, &plan);
        assert_eq!(q.player(PlayerId(0)).probs(), &[third, third, third]);
    }

    #[test]
    fn rounding_error_bound_randomized() {
        let mut rng = seeded_rng(71);
        for _ in 0..2000 {
            let m = rng.random_range(2..=6usize);
            let s = rng.random_range(1..=100u64);
            let probs = random_simplex(&mut rng, m);
            let counts = round_probs_to_counts(&probs, s);
            assert_eq!(counts.iter().sum::<u64>(), s);
            let tau = 1.0 / s as f64;
            for (a, &c) in counts.iter().enumerate() {
                assert!(
                    (probs[a] - c as f64 / s as f64).abs() <= tau + 1e-12,
                    "m={m} s={s} coord {a}"
                );
            }
        }
    }
}
