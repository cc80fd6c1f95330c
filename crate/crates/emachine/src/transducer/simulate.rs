//! Seeded trajectory sampling and empirical estimates.
//!
//! A [`Trajectory`] is self-contained: it carries its own label tables and
//! the seed that produced it, so replaying the seed reproduces the identical
//! step list bit for bit.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::entropy::{conditional_entropy, JointTable};
use crate::error::{Error, Result};
use crate::exact::Prob;

use super::{
    EpsilonTransducer, AXIS_INPUT, AXIS_OUTPUT, AXIS_STATE_NEXT, AXIS_STATE_PREV,
};

/// One realization of the input-output process: per step the input symbol,
/// the output symbol and the causal state entered.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub seed: u64,
    pub input_labels: Vec<String>,
    pub output_labels: Vec<String>,
    pub state_labels: Vec<String>,
    /// (input index, output index, state index) per step.
    pub steps: Vec<(u32, u32, u32)>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn input_label(&self, step: usize) -> &str {
        &self.input_labels[self.steps[step].0 as usize]
    }

    pub fn output_label(&self, step: usize) -> &str {
        &self.output_labels[self.steps[step].1 as usize]
    }

    pub fn state_label(&self, step: usize) -> &str {
        &self.state_labels[self.steps[step].2 as usize]
    }

    /// Fraction of steps whose state differs from the previous one.
    pub fn state_change_fraction(&self) -> f64 {
        if self.steps.len() < 2 {
            return 0.0;
        }
        let changes = self
            .steps
            .windows(2)
            .filter(|w| w[0].2 != w[1].2)
            .count();
        changes as f64 / (self.steps.len() - 1) as f64
    }

    /// Empirical occupancy of each state label.
    pub fn state_occupancy(&self) -> BTreeMap<String, f64> {
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for &(_, _, s) in &self.steps {
            *counts
                .entry(self.state_labels[s as usize].clone())
                .or_insert(0) += 1;
        }
        let n = self.steps.len() as f64;
        counts
            .into_iter()
            .map(|(k, v)| (k, v as f64 / n))
            .collect()
    }
}

impl EpsilonTransducer {
    /// Samples `n_steps` transitions starting from state `s0`: per step
    /// `x ~ input policy`, then `(y, s') ~ kernel(s, x)`. Deterministic under
    /// a fixed seed.
    pub fn simulate(&self, s0: &str, n_steps: usize, seed: u64) -> Result<Trajectory> {
        if n_steps < 1 {
            return Err(Error::MachineDefinition("n_steps must be at least 1".into()));
        }
        let start = self.state_index(s0)?;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        self.run_from(start, n_steps, seed, &mut rng)
    }

    /// Like [`simulate`](Self::simulate), but the start state is drawn from
    /// the stationary distribution (using the same seeded stream).
    pub fn simulate_stationary(&self, n_steps: usize, seed: u64) -> Result<Trajectory> {
        if n_steps < 1 {
            return Err(Error::MachineDefinition("n_steps must be at least 1".into()));
        }
        let pi = self.stationary_distribution()?;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let weights: Vec<f64> = self
            .states()
            .iter()
            .map(|s| pi.prob_f64(s))
            .collect();
        let start = sample_index(&weights, &mut rng);
        self.run_from(start, n_steps, seed, &mut rng)
    }

    fn run_from(
        &self,
        start: usize,
        n_steps: usize,
        seed: u64,
        rng: &mut ChaCha12Rng,
    ) -> Result<Trajectory> {
        let policy: Vec<f64> = self.policy_probs().iter().map(Prob::to_f64).collect();
        // Flattened f64 kernel rows for the hot loop.
        let n_inputs = self.inputs().len();
        let rows: Vec<Vec<(u32, u32, f64)>> = (0..self.states().len())
            .flat_map(|s| {
                (0..n_inputs).map(move |x| {
                    self.rows(s, x)
                        .iter()
                        .map(|(y, to, p)| (*y as u32, *to as u32, p.to_f64()))
                        .collect()
                })
            })
            .collect();
        let mut steps = Vec::with_capacity(n_steps);
        let mut state = start;
        for _ in 0..n_steps {
            let x = sample_index(&policy, rng);
            let row = &rows[state * n_inputs + x];
            let mut u: f64 = rng.gen();
            let mut chosen = row.len() - 1;
            for (i, (_, _, p)) in row.iter().enumerate() {
                if u < *p {
                    chosen = i;
                    break;
                }
                u -= p;
            }
            let (y, to, _) = row[chosen];
            steps.push((x as u32, y, to));
            state = to as usize;
        }
        Ok(Trajectory {
            seed,
            input_labels: self.inputs().to_vec(),
            output_labels: self.outputs().to_vec(),
            state_labels: self.states().to_vec(),
            steps,
        })
    }
}

fn sample_index(weights: &[f64], rng: &mut ChaCha12Rng) -> usize {
    let mut u: f64 = rng.gen();
    for (i, w) in weights.iter().enumerate() {
        if u < *w {
            return i;
        }
        u -= w;
    }
    weights.len() - 1
}

/// Empirical erased information: builds the empirical joint over
/// (S_prev, X, Y, S_next) from consecutive trajectory steps and returns its
/// conditional entropy. Converges to the analytic value as the trajectory
/// grows.
pub fn estimate_erased_information(t: &Trajectory, m: &EpsilonTransducer) -> Result<f64> {
    if t.len() < 2 {
        return Err(Error::TrajectoryTooShort(t.len(), 2));
    }
    // The trajectory must speak the machine's language.
    for label in &t.input_labels {
        if !m.inputs().contains(label) {
            return Err(Error::UnknownLabel {
                kind: "input",
                label: label.clone(),
            });
        }
    }
    for label in &t.output_labels {
        if !m.outputs().contains(label) {
            return Err(Error::UnknownLabel {
                kind: "output",
                label: label.clone(),
            });
        }
    }
    for label in &t.state_labels {
        if !m.states().contains(label) {
            return Err(Error::UnknownLabel {
                kind: "state",
                label: label.clone(),
            });
        }
    }
    let mut counts: BTreeMap<(u32, u32, u32, u32), u64> = BTreeMap::new();
    for w in t.steps.windows(2) {
        let (_, _, s_prev) = w[0];
        let (x, y, s_next) = w[1];
        *counts.entry((s_prev, x, y, s_next)).or_insert(0) += 1;
    }
    let total = (t.len() - 1) as f64;
    let cells: Vec<(Vec<u32>, Prob)> = counts
        .into_iter()
        .map(|((s, x, y, to), c)| {
            (vec![s, x, y, to], Prob::approx(c as f64 / total))
        })
        .collect();
    let joint = JointTable::new(
        vec![
            AXIS_STATE_PREV.into(),
            AXIS_INPUT.into(),
            AXIS_OUTPUT.into(),
            AXIS_STATE_NEXT.into(),
        ],
        vec![
            t.state_labels.clone(),
            t.input_labels.clone(),
            t.output_labels.clone(),
            t.state_labels.clone(),
        ],
        cells,
    )?;
    conditional_entropy(
        &joint,
        AXIS_STATE_PREV,
        &[AXIS_INPUT, AXIS_OUTPUT, AXIS_STATE_NEXT],
    )
}

/// Sliding-window frequencies of every (input, output) word up to
/// `max_len`, keyed by the labelled word. Frequencies are per window
/// position, so each word length normalizes to one.
pub fn word_frequencies(
    t: &Trajectory,
    max_len: usize,
) -> BTreeMap<Vec<(String, String)>, f64> {
    let mut out = BTreeMap::new();
    for len in 1..=max_len {
        if t.len() < len {
            continue;
        }
        let windows = t.len() - len + 1;
        let mut counts: BTreeMap<Vec<(u32, u32)>, u64> = BTreeMap::new();
        for w in t.steps.windows(len) {
            let word: Vec<(u32, u32)> = w.iter().map(|&(x, y, _)| (x, y)).collect();
            *counts.entry(word).or_insert(0) += 1;
        }
        for (word, c) in counts {
            let labelled: Vec<(String, String)> = word
                .iter()
                .map(|&(x, y)| {
                    (
                        t.input_labels[x as usize].clone(),
                        t.output_labels[y as usize].clone(),
                    )
                })
                .collect();
            out.insert(labelled, c as f64 / windows as f64);
        }
    }
    out
}

/// Largest absolute frequency difference over the union of words observed
/// in either trajectory, for word lengths up to `max_len`.
pub fn max_word_frequency_gap(a: &Trajectory, b: &Trajectory, max_len: usize) -> f64 {
    let fa = word_frequencies(a, max_len);
    let fb = word_frequencies(b, max_len);
    let mut gap: f64 = 0.0;
    for (word, f) in &fa {
        gap = gap.max((f - fb.get(word).copied().unwrap_or(0.0)).abs());
    }
    for (word, f) in &fb {
        if !fa.contains_key(word) {
            gap = gap.max(*f);
        }
    }
    gap
}
