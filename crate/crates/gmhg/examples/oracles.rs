//! Equilibrium oracles: the closed-form 2x2 solver, shrinking-grid
//! max-regret refinement, and the r-uniform sparse-support search with its
//! found/not-found tradeoff.

use gmhg::game::PlayerId;
use gmhg::generate;
use gmhg::oracle::{
    analytic_2x2, default_starts, finegrid_multi_start, finegrid_refine, support_enum_bimatrix,
};
use gmhg::strategy::JointMixedStrategy;

fn main() {
    // closed-form: matching pennies mixes 50/50
    let mp = generate::matching_pennies();
    let r = analytic_2x2(&mp).unwrap();
    println!(
        "matching pennies: profile {:?}, certified regret {:.2e}",
        r.profile.players().iter().map(|s| s.probs().to_vec()).collect::<Vec<_>>(),
        r.certified_regret
    );

    // coordination has pure equilibria; the scan returns one
    let coord = generate::coordination(2);
    let r = analytic_2x2(&coord).unwrap();
    println!(
        "coordination: pure profile {:?}, regret {:.2e}",
        r.profile.player(PlayerId(0)).probs(),
        r.certified_regret
    );

    // refinement keeps the rock-paper-scissors equilibrium where it is
    let rps = generate::rock_paper_scissors();
    let r = finegrid_refine(&rps, &JointMixedStrategy::uniform(&rps), 30, 1 << 30).unwrap();
    println!("rock-paper-scissors from uniform: certified regret {:.2e}", r.certified_regret);

    // multi-start refinement on a 3-player game
    let g3 = generate::random_normal_form(3, 2, 77).unwrap();
    let starts = default_starts(&g3, 77, 8);
    let r = finegrid_multi_start(&g3, &starts, 45, 1 << 30, Some(1e-10)).unwrap();
    println!("random 3-player game: certified regret {:.2e}", r.certified_regret);

    // sparse-support comparator: the r-uniform grid either contains an
    // eps-equilibrium or it does not
    for (r_param, eps) in [(2u64, 0.1), (1, 0.4)] {
        match support_enum_bimatrix(&mp, r_param, eps, 1 << 20).unwrap() {
            Some(res) => println!(
                "r={r_param} eps={eps}: found {:?} (regret {:.2e})",
                res.profile.player(PlayerId(0)).probs(),
                res.certified_regret
            ),
            None => println!("r={r_param} eps={eps}: no r-uniform pair qualifies"),
        }
    }
}
