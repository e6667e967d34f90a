//! Micro-benchmark: brute-force grid search cost on a 2-player 2-action
//! game follows the (s+1)^2 profile count. Prints measured times next to
//! the predicted count ratios for s in {10, 20, 40, 80}.
//!
//! Run with `cargo run --release --example bench_grid_scaling`.

use std::time::Instant;

use gmhg::csp::{brute_force_solve, GameCsp, SearchMode};
use gmhg::discretization::DiscretizationPlan;
use gmhg::generate;

fn main() {
    let game = generate::matching_pennies();
    let eps = 0.2;
    let sizes = [10u64, 20, 40, 80];
    let mut rows = Vec::new();
    for &s in &sizes {
        let plan = DiscretizationPlan::with_sizes(vec![s, s], eps);
        let csp = GameCsp::induce(&game, plan, eps, 1 << 30).unwrap();
        let profiles = (s + 1) * (s + 1);
        // repeat enough times that each measurement dwarfs timer noise
        let once = Instant::now();
        let solutions = brute_force_solve(&csp, SearchMode::All, 1 << 40).unwrap().len();
        let single = once.elapsed().as_secs_f64().max(1e-7);
        let reps = ((0.1 / single).ceil() as usize).clamp(1, 100_000);
        let mut best = f64::INFINITY;
        for _ in 0..3 {
            let t = Instant::now();
            for _ in 0..reps {
                let _ = brute_force_solve(&csp, SearchMode::All, 1 << 40).unwrap();
            }
            best = best.min(t.elapsed().as_secs_f64() / reps as f64);
        }
        rows.push((s, profiles, best, solutions));
    }
    println!("{:>4} {:>10} {:>12} {:>10}", "s", "profiles", "time/solve", "solutions");
    for &(s, profiles, time, solutions) in &rows {
        println!("{s:>4} {profiles:>10} {:>10.3}us {solutions:>10}", time * 1e6);
    }
    println!("\nstep-to-step ratios (observed time vs predicted count):");
    for w in rows.windows(2) {
        let predicted = w[1].1 as f64 / w[0].1 as f64;
        let observed = w[1].2 / w[0].2;
        println!(
            "  s {:>2} -> {:>2}: time x{observed:.2}, count x{predicted:.2}",
            w[0].0, w[1].0
        );
    }
}
