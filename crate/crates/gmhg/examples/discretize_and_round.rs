//! Grid sizing and rounding: per-player grid counts from the
//! representation bound, simplex-lattice enumeration, and rounding an
//! exact equilibrium onto the grid while keeping its regret below eps.

use gmhg::discretization::{enumerate_lattice, round_to_grid, DiscretizationPlan};
use gmhg::game::PlayerId;
use gmhg::generate;
use gmhg::oracle::analytic_2x2;
use gmhg::strategy::is_epsilon_ne;

fn main() {
    let game = generate::matching_pennies();
    let ranges = game.payoff_ranges();

    for eps in [0.5, 0.25, 0.1, 0.05] {
        let plan = DiscretizationPlan::for_gmhg(&game, &ranges, eps);
        println!(
            "eps={eps}: s={:?} tau={:.4} eps_max={:?}",
            plan.sizes(),
            plan.step(PlayerId(0)),
            plan.eps_max()
        );
    }

    // the corollary sizing for graphical games with [0,1] payoffs agrees
    let corollary = DiscretizationPlan::for_graphical_game(&game, 0.1).unwrap();
    println!("corollary sizing at eps=0.1: s={:?}", corollary.sizes());

    // the lattice for s=4 over 3 actions: all compositions of 4 into 3 parts
    let plan = DiscretizationPlan::with_sizes(vec![4], 0.1);
    let lattice: Vec<_> = enumerate_lattice(&plan, PlayerId(0), 3, 1 << 20)
        .unwrap()
        .collect();
    println!("\nlattice s=4 m=3 has {} strategies:", lattice.len());
    for l in &lattice {
        print!(" {:?}", l.counts());
    }
    println!();

    // round an exact equilibrium and verify the guarantee
    let eps = 0.1;
    let oracle = analytic_2x2(&game).unwrap();
    let plan = DiscretizationPlan::for_gmhg(&game, &ranges, eps);
    let rounded = round_to_grid(&oracle.profile, &plan);
    let dist = oracle.profile.linf_distance(&rounded);
    let check = is_epsilon_ne(&game, &rounded, eps);
    println!(
        "\nexact equilibrium rounded onto s={:?}: linf distance {dist:.4}, \
         max regret {:.4e}, eps-equilibrium: {}",
        plan.sizes(),
        check.max_regret(),
        check.is_equilibrium
    );
}
