use netmix::cfl::{solve_csp, CflOutcome, CflParams};
use netmix::fixtures;
use netmix::mixing::build_clauses;

fn main() {
    let inst = fixtures::fig2();
    let csp = build_clauses(&inst, 2, false);
    let mut ok = 0;
    let mut rounds_hist = Vec::new();
    for seed in 0..100 {
        let params = CflParams { seed, max_rounds: 20000, trace: false, ..CflParams::default() };
        let (outcome, _) = solve_csp(&inst, &csp, &params);
        match outcome {
            CflOutcome::Satisfied { rounds, .. } => { ok += 1; rounds_hist.push(rounds); }
            CflOutcome::BudgetExhausted { best_unsatisfied, .. } => {
                println!("seed {seed}: exhausted, best unsat {best_unsatisfied}");
            }
        }
    }
    rounds_hist.sort();
    println!("solved {ok}/100");
    if !rounds_hist.is_empty() {
        println!("rounds: min {} median {} p90 {} max {}",
            rounds_hist[0], rounds_hist[rounds_hist.len()/2],
            rounds_hist[rounds_hist.len()*9/10], rounds_hist[rounds_hist.len()-1]);
    }
}
