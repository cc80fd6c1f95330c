//! ε-transducers: labelled stochastic machines whose states are causal
//! states of an input-output process.
//!
//! A machine is a set of states, an input alphabet, an output alphabet and a
//! kernel `(state, input) → distribution over (output, next state)`, plus an
//! input policy (uniform by default). Analysis lives in [`analysis`]
//! (stationary distribution, statistical complexity, erased information and
//! the unifilar entropy-difference identity), sampling in [`simulate`], and
//! empirical causal-state recovery in [`reconstruct`].

mod analysis;
mod io;
mod reconstruct;
mod simulate;

pub use analysis::IdentityReport;
pub use io::{load_machine, machine_from_json, machine_to_json, save_machine};
pub use reconstruct::{reconstruct_causal_states, HistoryTable};
pub use simulate::{
    estimate_erased_information, max_word_frequency_gap, word_frequencies, Trajectory,
};

use std::collections::{BTreeMap, HashSet};

use crate::entropy::ProbDist;
use crate::error::{Error, Result};
use crate::exact::Prob;

/// Axis names used by every joint table built from a machine.
pub const AXIS_STATE_PREV: &str = "s_prev";
pub const AXIS_INPUT: &str = "x";
pub const AXIS_OUTPUT: &str = "y";
pub const AXIS_STATE_NEXT: &str = "s_next";

/// One kernel entry: from `(state, input)`, emit `output` and move to `to`
/// with probability `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Transition {
    pub from: String,
    pub input: String,
    pub output: String,
    pub to: String,
    pub p: Prob,
}

/// A labelled stochastic input-output machine.
///
/// Immutable after construction; every kernel row is a valid distribution
/// over `(output, next state)` pairs and every `(state, input)` pair has a
/// row. Zero-probability transitions are dropped at construction.
#[derive(Clone, Debug)]
pub struct EpsilonTransducer {
    states: Vec<String>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    /// kernel[s][x] = positive-probability rows (output, next state, p).
    kernel: Vec<Vec<Vec<(usize, usize, Prob)>>>,
    input_policy: Vec<Prob>,
}

impl EpsilonTransducer {
    pub fn new(
        states: Vec<String>,
        inputs: Vec<String>,
        outputs: Vec<String>,
        transitions: Vec<Transition>,
        input_policy: Option<ProbDist>,
    ) -> Result<Self> {
        for (name, list) in [("state", &states), ("input", &inputs), ("output", &outputs)] {
            if list.is_empty() {
                return Err(Error::MachineDefinition(format!("no {name} labels")));
            }
            let mut seen = HashSet::new();
            for l in list {
                if !seen.insert(l) {
                    return Err(Error::DuplicateLabel(l.clone()));
                }
            }
        }
        let state_idx = index_map(&states);
        let input_idx = index_map(&inputs);
        let output_idx = index_map(&outputs);

        let mut kernel: Vec<Vec<Vec<(usize, usize, Prob)>>> =
            vec![vec![Vec::new(); inputs.len()]; states.len()];
        let mut seen_rows: HashSet<(usize, usize, usize, usize)> = HashSet::new();
        for t in transitions {
            let s = *state_idx.get(&t.from).ok_or_else(|| Error::UnknownLabel {
                kind: "state",
                label: t.from.clone(),
            })?;
            let x = *input_idx.get(&t.input).ok_or_else(|| Error::UnknownLabel {
                kind: "input",
                label: t.input.clone(),
            })?;
            let y = *output_idx
                .get(&t.output)
                .ok_or_else(|| Error::UnknownLabel {
                    kind: "output",
                    label: t.output.clone(),
                })?;
            let to = *state_idx.get(&t.to).ok_or_else(|| Error::UnknownLabel {
                kind: "state",
                label: t.to.clone(),
            })?;
            if t.p.is_negative() {
                return Err(Error::MachineDefinition(format!(
                    "negative probability {} on transition {} --{}/{}--> {}",
                    t.p.format(),
                    t.from,
                    t.input,
                    t.output,
                    t.to
                )));
            }
            if !seen_rows.insert((s, x, y, to)) {
                return Err(Error::MachineDefinition(format!(
                    "duplicate transition {} --{}/{}--> {}",
                    t.from, t.input, t.output, t.to
                )));
            }
            if !t.p.is_zero() {
                kernel[s][x].push((y, to, t.p));
            }
        }
        // Every (state, input) row must be a distribution.
        for (s, rows_by_input) in kernel.iter().enumerate() {
            for (x, rows) in rows_by_input.iter().enumerate() {
                let dist: Vec<(String, Prob)> = rows
                    .iter()
                    .map(|(y, to, p)| (format!("{}|{}", outputs[*y], states[*to]), p.clone()))
                    .collect();
                if dist.is_empty() {
                    return Err(Error::MachineDefinition(format!(
                        "kernel row missing for state {} on input {}",
                        states[s], inputs[x]
                    )));
                }
                ProbDist::new(dist).map_err(|e| {
                    Error::MachineDefinition(format!(
                        "kernel row for state {} on input {} is not a distribution: {e}",
                        states[s], inputs[x]
                    ))
                })?;
            }
        }

        let policy = match input_policy {
            Some(dist) => {
                let mut probs = vec![Prob::zero(); inputs.len()];
                let mut covered = 0usize;
                for (label, p) in dist.iter() {
                    match input_idx.get(label) {
                        Some(&i) => {
                            probs[i] = p.clone();
                            covered += 1;
                        }
                        None => {
                            return Err(Error::UnknownLabel {
                                kind: "input",
                                label: label.to_string(),
                            })
                        }
                    }
                }
                if covered != dist.len() {
                    return Err(Error::MachineDefinition(
                        "input policy labels collide".into(),
                    ));
                }
                probs
            }
            None => vec![Prob::ratio(1, inputs.len() as i64); inputs.len()],
        };

        Ok(EpsilonTransducer {
            states,
            inputs,
            outputs,
            kernel,
            input_policy: policy,
        })
    }

    /// Same machine driven by a different input policy.
    pub fn with_input_policy(&self, policy: ProbDist) -> Result<Self> {
        EpsilonTransducer::new(
            self.states.clone(),
            self.inputs.clone(),
            self.outputs.clone(),
            self.transitions(),
            Some(policy),
        )
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn input_policy(&self) -> Result<ProbDist> {
        ProbDist::new(
            self.inputs
                .iter()
                .cloned()
                .zip(self.input_policy.iter().cloned())
                .collect(),
        )
    }

    pub(crate) fn policy_probs(&self) -> &[Prob] {
        &self.input_policy
    }

    pub(crate) fn state_index(&self, label: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == label)
            .ok_or_else(|| Error::UnknownLabel {
                kind: "state",
                label: label.to_string(),
            })
    }

    pub(crate) fn rows(&self, s: usize, x: usize) -> &[(usize, usize, Prob)] {
        &self.kernel[s][x]
    }

    /// The full transition list, in state-major then input-major order.
    pub fn transitions(&self) -> Vec<Transition> {
        let mut out = Vec::new();
        for (s, by_input) in self.kernel.iter().enumerate() {
            for (x, rows) in by_input.iter().enumerate() {
                for (y, to, p) in rows {
                    out.push(Transition {
                        from: self.states[s].clone(),
                        input: self.inputs[x].clone(),
                        output: self.outputs[*y].clone(),
                        to: self.states[*to].clone(),
                        p: p.clone(),
                    });
                }
            }
        }
        out
    }

    /// Kernel row as labelled `(output, next state, probability)` triples.
    pub fn kernel_row(&self, state: &str, input: &str) -> Result<Vec<(String, String, Prob)>> {
        let s = self.state_index(state)?;
        let x = self
            .inputs
            .iter()
            .position(|i| i == input)
            .ok_or_else(|| Error::UnknownLabel {
                kind: "input",
                label: input.to_string(),
            })?;
        Ok(self.kernel[s][x]
            .iter()
            .map(|(y, to, p)| {
                (
                    self.outputs[*y].clone(),
                    self.states[*to].clone(),
                    p.clone(),
                )
            })
            .collect())
    }

    /// Unifilarity scan: for every `(state, input, output)` at most one next
    /// state carries positive probability.
    pub fn is_unifilar(&self) -> bool {
        for by_input in &self.kernel {
            for rows in by_input {
                let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
                for (y, to, _) in rows {
                    if let Some(prev) = seen.insert(*y, *to) {
                        if prev != *to {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Output-determinism scan: every state is entered with a single output
    /// symbol, i.e. H(Y_t | S_t) = 0.
    pub fn is_output_deterministic(&self) -> bool {
        let mut entered_with: Vec<Option<usize>> = vec![None; self.states.len()];
        for by_input in &self.kernel {
            for rows in by_input {
                for (y, to, _) in rows {
                    match entered_with[*to] {
                        None => entered_with[*to] = Some(*y),
                        Some(prev) if prev != *y => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    /// Whether every kernel and policy probability is an exact rational.
    pub fn is_exact(&self) -> bool {
        self.input_policy.iter().all(Prob::is_exact)
            && self
                .kernel
                .iter()
                .flatten()
                .flatten()
                .all(|(_, _, p)| p.is_exact())
    }
}

fn index_map(labels: &[String]) -> BTreeMap<String, usize> {
    labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_machine() -> EpsilonTransducer {
        // One state, one input, deterministic output.
        EpsilonTransducer::new(
            vec!["s".into()],
            vec!["a".into()],
            vec!["0".into()],
            vec![Transition {
                from: "s".into(),
                input: "a".into(),
                output: "0".into(),
                to: "s".into(),
                p: Prob::one(),
            }],
            None,
        )
        .unwrap()
    }

    #[test]
    fn single_state_machine_scans() {
        let m = tiny_machine();
        assert!(m.is_unifilar());
        assert!(m.is_output_deterministic());
        assert!(m.is_exact());
    }

    #[test]
    fn missing_kernel_row_is_rejected() {
        let err = EpsilonTransducer::new(
            vec!["s".into(), "t".into()],
            vec!["a".into()],
            vec!["0".into()],
            vec![Transition {
                from: "s".into(),
                input: "a".into(),
                output: "0".into(),
                to: "t".into(),
                p: Prob::one(),
            }],
            None,
        )
        .unwrap_err();
        assert!(err.to_string().contains("kernel row missing"));
    }

    #[test]
    fn row_probabilities_must_sum_to_one() {
        let err = EpsilonTransducer::new(
            vec!["s".into()],
            vec!["a".into()],
            vec!["0".into(), "1".into()],
            vec![
                Transition {
                    from: "s".into(),
                    input: "a".into(),
                    output: "0".into(),
                    to: "s".into(),
                    p: Prob::ratio(1, 2),
                },
                Transition {
                    from: "s".into(),
                    input: "a".into(),
                    output: "1".into(),
                    to: "s".into(),
                    p: Prob::ratio(1, 4),
                },
            ],
            None,
        )
        .unwrap_err();
        assert!(err.to_string().contains("not a distribution"));
    }

    #[test]
    fn non_unifilar_machine_is_detected() {
        let m = EpsilonTransducer::new(
            vec!["s".into(), "t".into()],
            vec!["a".into()],
            vec!["0".into()],
            vec![
                Transition {
                    from: "s".into(),
                    input: "a".into(),
                    output: "0".into(),
                    to: "s".into(),
                    p: Prob::ratio(1, 2),
                },
                Transition {
                    from: "s".into(),
                    input: "a".into(),
                    output: "0".into(),
                    to: "t".into(),
                    p: Prob::ratio(1, 2),
                },
                Transition {
                    from: "t".into(),
                    input: "a".into(),
                    output: "0".into(),
                    to: "s".into(),
                    p: Prob::one(),
                },
            ],
            None,
        )
        .unwrap();
        assert!(!m.is_unifilar());
    }

    #[test]
    fn default_policy_is_uniform() {
        let m = tiny_machine();
        let policy = m.input_policy().unwrap();
        assert_eq!(policy.prob("a").unwrap(), &Prob::one());
    }
}
