//! Communication-Free Learning: a decentralized probabilistic solver for the
//! mixing CSP, simulated in-process with synchronous rounds.
//!
//! Every variable owns a Bernoulli parameter and an independent seeded RNG
//! stream. Each round all variables sample, all clauses are evaluated on the
//! snapshot, and every variable whose clause set is fully satisfied collapses
//! its distribution onto the sampled value while dissatisfied variables decay
//! the mass of the failing value. Sampling order never depends on evaluation
//! parallelism, so a seed fixes the whole trajectory.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exec;
use crate::mixing::CspProblem;
use crate::netmodel::NetworkInstance;

#[derive(Debug, Clone)]
pub struct CflParams {
    /// Multiplicative decay applied to a failing value's mass, in (0,1).
    pub learn_rate: f64,
    pub max_rounds: usize,
    pub seed: u64,
    pub parallel: bool,
    /// Record (round, unsatisfied clause count) per round.
    pub trace: bool,
}

impl Default for CflParams {
    fn default() -> Self {
        CflParams {
            learn_rate: 0.1,
            max_rounds: 0, // 0 = derived from clause count
            seed: 0,
            parallel: true,
            trace: false,
        }
    }
}

impl CflParams {
    /// Round budget: explicit when set, otherwise 100x the clause count with
    /// a floor of 2000 (small CSPs still need a few hundred rounds to settle).
    pub fn rounds_for(&self, csp: &CspProblem) -> usize {
        if self.max_rounds > 0 {
            self.max_rounds
        } else {
            (100 * csp.clauses.len()).max(2000)
        }
    }
}

#[derive(Debug, Clone)]
pub struct CflState {
    /// Probability of selecting 1, per variable.
    pub probs: Vec<f64>,
    pub assignment: Vec<bool>,
    pub round: usize,
    rngs: Vec<ChaCha8Rng>,
}

impl CflState {
    /// Uniform parameters with an initial assignment drawn from each
    /// variable's stream.
    pub fn new(var_count: usize, seed: u64) -> Self {
        let mut rngs: Vec<ChaCha8Rng> = (0..var_count)
            .map(|v| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(v as u64);
                rng
            })
            .collect();
        let assignment = rngs.iter_mut().map(|r| r.gen::<f64>() < 0.5).collect();
        CflState {
            probs: vec![0.5; var_count],
            assignment,
            round: 0,
            rngs,
        }
    }
}

/// One synchronous round: sample, evaluate, update. Returns the number of
/// unsatisfied clauses under the round's assignment.
pub fn cfl_iterate(
    state: &mut CflState,
    inst: &NetworkInstance,
    csp: &CspProblem,
    learn_rate: f64,
    parallel: bool,
) -> usize {
    for v in 0..state.probs.len() {
        state.assignment[v] = state.rngs[v].gen::<f64>() < state.probs[v];
    }
    let masks = csp.masks_from(inst, &state.assignment);
    let truth = exec::map_slice(&csp.clauses, parallel, |c| csp.eval_clause(inst, &masks, c));
    for v in 0..state.probs.len() {
        let happy = csp.partition[v].iter().all(|&c| truth[c]);
        if happy {
            state.probs[v] = if state.assignment[v] { 1.0 } else { 0.0 };
        } else if state.assignment[v] {
            state.probs[v] *= 1.0 - learn_rate;
        } else {
            state.probs[v] += learn_rate * (1.0 - state.probs[v]);
        }
    }
    state.round += 1;
    truth.iter().filter(|&&s| !s).count()
}

#[derive(Debug, Clone)]
pub enum CflOutcome {
    /// Assignment re-verified against the full clause set before returning.
    Satisfied { assignment: Vec<bool>, rounds: usize },
    BudgetExhausted { rounds: usize, best_unsatisfied: usize },
}

impl CflOutcome {
    pub fn assignment(&self) -> Option<&[bool]> {
        match self {
            CflOutcome::Satisfied { assignment, .. } => Some(assignment),
            CflOutcome::BudgetExhausted { .. } => None,
        }
    }
}

/// Runs CFL until a round satisfies every clause or the budget expires.
/// Returns the per-round trace when requested.
pub fn solve_csp(
    inst: &NetworkInstance,
    csp: &CspProblem,
    params: &CflParams,
) -> (CflOutcome, Option<Vec<(usize, usize)>>) {
    let budget = params.rounds_for(csp);
    let mut state = CflState::new(csp.var_count(), params.seed);
    let mut trace = params.trace.then(Vec::new);
    let initial_unsat = csp
        .eval_all(inst, &state.assignment)
        .iter()
        .filter(|&&s| !s)
        .count();
    if let Some(t) = trace.as_mut() {
        t.push((0, initial_unsat));
    }
    if initial_unsat == 0 {
        return (
            CflOutcome::Satisfied { assignment: state.assignment, rounds: 0 },
            trace,
        );
    }
    let mut best = initial_unsat;
    for round in 1..=budget {
        let unsat = cfl_iterate(&mut state, inst, csp, params.learn_rate, params.parallel);
        if let Some(t) = trace.as_mut() {
            t.push((round, unsat));
        }
        best = best.min(unsat);
        if unsat == 0 {
            debug_assert!(csp.satisfied(inst, &state.assignment));
            if csp.satisfied(inst, &state.assignment) {
                return (
                    CflOutcome::Satisfied { assignment: state.assignment, rounds: round },
                    trace,
                );
            }
        }
    }
    (
        CflOutcome::BudgetExhausted { rounds: budget, best_unsatisfied: best },
        trace,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mixing::{build_clauses, check_feasible_mixing};

    #[test]
    fn satisfied_state_is_a_fixed_point() {
        let inst = fixtures::fig2();
        let csp = build_clauses(&inst, 2, false);
        let design = fixtures::example1_design(&inst);
        let mut state = CflState::new(csp.var_count(), 3);
        state.assignment = csp.encode(&design);
        state.probs = state
            .assignment
            .iter()
            .map(|&a| if a { 1.0 } else { 0.0 })
            .collect();
        let before = state.assignment.clone();
        let unsat = cfl_iterate(&mut state, &inst, &csp, 0.1, false);
        assert_eq!(unsat, 0);
        assert_eq!(state.assignment, before);
        assert!(state.probs.iter().all(|&q| q == 0.0 || q == 1.0));
    }

    #[test]
    fn empty_clause_set_succeeds_immediately() {
        // A single source edge leaves no free variables and no clauses.
        let one = crate::netmodel::NetworkInstance::new(
            vec![1, 2],
            vec![crate::netmodel::Edge {
                tail: 1,
                head: 2,
                capacity: 1.0,
                cost: crate::netmodel::CostFn::Linear { a: 1.0 },
            }],
            vec![crate::netmodel::Flow { source: 1, rate: 1.0 }],
            vec![crate::netmodel::Terminal { node: 2, demands: vec![1] }],
        );
        let csp = build_clauses(&one, 1, false);
        assert_eq!(csp.clauses.len(), 0);
        let (outcome, _) = solve_csp(&one, &csp, &CflParams::default());
        assert!(matches!(outcome, CflOutcome::Satisfied { rounds: 0, .. }));
    }

    #[test]
    fn fig2_two_slots_solved_and_decodable() {
        let inst = fixtures::fig2();
        let csp = build_clauses(&inst, 2, false);
        let params = CflParams { seed: 11, ..CflParams::default() };
        let (outcome, _) = solve_csp(&inst, &csp, &params);
        let assignment = outcome.assignment().expect("satisfiable at two slots");
        let design = csp.decode(&inst, assignment).unwrap();
        assert!(check_feasible_mixing(&inst, &design).is_ok());
    }

    #[test]
    fn fig2_one_slot_exhausts_budget() {
        let inst = fixtures::fig2();
        let csp = build_clauses(&inst, 1, false);
        let params = CflParams { seed: 5, max_rounds: 2000, ..CflParams::default() };
        let (outcome, _) = solve_csp(&inst, &csp, &params);
        assert!(matches!(outcome, CflOutcome::BudgetExhausted { .. }));
    }

    #[test]
    fn seed_determinism_and_parallel_equivalence() {
        let inst = fixtures::fig2();
        let csp = build_clauses(&inst, 2, false);
        let run = |parallel: bool| {
            let params = CflParams { seed: 42, parallel, trace: true, ..CflParams::default() };
            solve_csp(&inst, &csp, &params)
        };
        let (a, ta) = run(false);
        let (b, tb) = run(true);
        assert_eq!(ta, tb);
        assert_eq!(a.assignment(), b.assignment());
    }

    #[test]
    fn absorption_keeps_settled_variables() {
        let inst = fixtures::fig2();
        let csp = build_clauses(&inst, 2, false);
        let mut state = CflState::new(csp.var_count(), 9);
        let mut settled: Vec<Option<bool>> = vec![None; csp.var_count()];
        for _ in 0..400 {
            cfl_iterate(&mut state, &inst, &csp, 0.1, false);
            let truth = csp.eval_all(&inst, &state.assignment);
            for v in 0..csp.var_count() {
                let happy = csp.partition[v].iter().all(|&c| truth[c]);
                match (happy, settled[v]) {
                    (true, None) => settled[v] = Some(state.assignment[v]),
                    (true, Some(prev)) => assert_eq!(prev, state.assignment[v]),
                    (false, _) => settled[v] = None,
                }
            }
        }
    }
}
