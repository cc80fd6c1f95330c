//! Shared helpers for the integration suites.
#![allow(dead_code)] // each test target uses a subset

use emachine::entropy::ProbDist;
use emachine::transducer::{EpsilonTransducer, Transition};
use emachine::Prob;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Generates a random machine that passes the unifilarity and
/// output-determinism scans and has an irreducible state chain.
///
/// Construction: each state is assigned a fixed output emitted whenever the
/// state is entered (output determinism); each kernel row picks at most one
/// successor per output label (unifilarity) with random small-denominator
/// rational probabilities. Reducible draws are rejected and retried.
pub fn random_compliant_machine(seed: u64) -> EpsilonTransducer {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for _ in 0..500 {
        let n_states = rng.gen_range(2..=6usize);
        let n_inputs = rng.gen_range(1..=3usize);
        let n_outputs = rng.gen_range(2..=3.min(n_states));
        let states: Vec<String> = (0..n_states).map(|i| format!("q{i}")).collect();
        let inputs: Vec<String> = (0..n_inputs).map(|i| format!("i{i}")).collect();
        let outputs: Vec<String> = (0..n_outputs).map(|i| format!("o{i}")).collect();
        // Output emitted on entry, fixed per state.
        let out_of: Vec<usize> = (0..n_states).map(|s| s % n_outputs).collect();
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n_outputs];
        for (s, &o) in out_of.iter().enumerate() {
            groups[o].push(s);
        }

        let mut transitions = Vec::new();
        for s in 0..n_states {
            for input in &inputs {
                // At most one successor per output group.
                let mut chosen: Vec<usize> = Vec::new();
                for group in groups.iter().filter(|g| !g.is_empty()) {
                    if rng.gen_bool(0.7) {
                        chosen.push(group[rng.gen_range(0..group.len())]);
                    }
                }
                if chosen.is_empty() {
                    let group = &groups[rng.gen_range(0..n_outputs)];
                    chosen.push(group[rng.gen_range(0..group.len())]);
                }
                let weights: Vec<i64> = (0..chosen.len()).map(|_| rng.gen_range(1..=8)).collect();
                let total: i64 = weights.iter().sum();
                for (to, w) in chosen.iter().zip(weights) {
                    transitions.push(Transition {
                        from: states[s].clone(),
                        input: input.clone(),
                        output: outputs[out_of[*to]].clone(),
                        to: states[*to].clone(),
                        p: Prob::ratio(w, total),
                    });
                }
            }
        }
        let machine = EpsilonTransducer::new(
            states,
            inputs,
            outputs,
            transitions,
            None,
        )
        .expect("generated kernel rows are distributions");
        assert!(machine.is_unifilar());
        assert!(machine.is_output_deterministic());
        if machine.stationary_distribution().is_ok() {
            return machine;
        }
    }
    panic!("no irreducible machine found for seed {seed}");
}

/// Exact uniform prior over a machine's states.
pub fn uniform_prior(m: &EpsilonTransducer) -> ProbDist {
    ProbDist::uniform(m.states()).expect("states are non-empty and unique")
}
