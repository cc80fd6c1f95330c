//! Empirical causal-state reconstruction.
//!
//! Finite-horizon approximation of causal equivalence: two input-output
//! pasts are merged when their empirical one-step future distributions are
//! within a total-variation tolerance. Pasts are length-`L` words of
//! `(input, output)` pairs; the quotient of the merge (transitively closed)
//! becomes the state set of the reconstructed machine.

use std::collections::BTreeMap;

use crate::entropy::ProbDist;
use crate::error::{Error, Result};
use crate::exact::Prob;

use super::{EpsilonTransducer, Trajectory, Transition};

type Word = Vec<(u32, u32)>;

/// Empirical table of past words (length ≤ `max_len`) and the counts of
/// their one-step `(input, output)` continuations.
#[derive(Clone, Debug)]
pub struct HistoryTable {
    max_len: usize,
    input_labels: Vec<String>,
    output_labels: Vec<String>,
    counts: BTreeMap<Word, BTreeMap<(u32, u32), u64>>,
}

impl HistoryTable {
    /// Harvests every window of length 1..=`max_len` together with the
    /// symbol that followed it.
    pub fn from_trajectory(t: &Trajectory, max_len: usize) -> Result<Self> {
        if max_len < 1 {
            return Err(Error::MachineDefinition(
                "history length must be at least 1".into(),
            ));
        }
        if t.len() < max_len + 1 {
            return Err(Error::TrajectoryTooShort(t.len(), max_len + 1));
        }
        let symbols: Vec<(u32, u32)> = t.steps.iter().map(|&(x, y, _)| (x, y)).collect();
        let mut counts: BTreeMap<Word, BTreeMap<(u32, u32), u64>> = BTreeMap::new();
        for len in 1..=max_len {
            for end in len..symbols.len() {
                let word: Word = symbols[end - len..end].to_vec();
                let continuation = symbols[end];
                *counts
                    .entry(word)
                    .or_default()
                    .entry(continuation)
                    .or_insert(0) += 1;
            }
        }
        Ok(HistoryTable {
            max_len,
            input_labels: t.input_labels.clone(),
            output_labels: t.output_labels.clone(),
            counts,
        })
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn word_count(&self) -> usize {
        self.counts.len()
    }

    /// Empirical distribution over continuations of a past word.
    pub fn continuation_dist(&self, word: &[(u32, u32)]) -> Option<ProbDist> {
        let counts = self.counts.get(word)?;
        let total: u64 = counts.values().sum();
        let entries: Vec<(String, f64)> = counts
            .iter()
            .map(|(&(x, y), &c)| {
                (
                    format!(
                        "{}|{}",
                        self.input_labels[x as usize], self.output_labels[y as usize]
                    ),
                    c as f64 / total as f64,
                )
            })
            .collect();
        ProbDist::from_f64(entries).ok()
    }

    fn full_length_words(&self) -> Vec<&Word> {
        self.counts
            .keys()
            .filter(|w| w.len() == self.max_len)
            .collect()
    }
}

/// Merges past words whose one-step future distributions differ by less
/// than `tol` in total variation (transitively closed) and returns the
/// quotient machine. The reconstructed kernel and input policy are
/// empirical, so their probabilities are floats.
///
/// Errors when the table is empty, when a merged class maps one observed
/// symbol to two different classes (non-deterministic quotient), or when
/// some (class, input) pair was never observed.
pub fn reconstruct_causal_states(h: &HistoryTable, tol: f64) -> Result<EpsilonTransducer> {
    if tol <= 0.0 {
        return Err(Error::MachineDefinition("tolerance must be positive".into()));
    }
    let words = h.full_length_words();
    if words.is_empty() {
        return Err(Error::EmptyHistory);
    }
    // Dense continuation distributions over (input, output) combinations.
    let nx = h.input_labels.len();
    let ny = h.output_labels.len();
    let dists: Vec<Vec<f64>> = words
        .iter()
        .map(|w| {
            let counts = &h.counts[*w];
            let total: u64 = counts.values().sum();
            let mut d = vec![0.0; nx * ny];
            for (&(x, y), &c) in counts {
                d[x as usize * ny + y as usize] = c as f64 / total as f64;
            }
            d
        })
        .collect();

    // Union-find over all pairs within tolerance; iterating pairs in
    // lexicographic word order keeps representatives deterministic, and the
    // union of every close pair is already the transitive closure.
    let mut parent: Vec<usize> = (0..words.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..words.len() {
        for j in (i + 1)..words.len() {
            let tv = 0.5
                * dists[i]
                    .iter()
                    .zip(&dists[j])
                    .map(|(a, b)| (a - b).abs())
                    .sum::<f64>();
            if tv < tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    // Smaller index wins so class labels follow lex order.
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut class_of: Vec<usize> = Vec::with_capacity(words.len());
    let mut class_reps: Vec<usize> = Vec::new();
    for i in 0..words.len() {
        let root = find(&mut parent, i);
        let class = match class_reps.iter().position(|&r| r == root) {
            Some(c) => c,
            None => {
                class_reps.push(root);
                class_reps.len() - 1
            }
        };
        class_of.push(class);
    }
    let n_classes = class_reps.len();
    let word_index: BTreeMap<&Word, usize> = words
        .iter()
        .enumerate()
        .map(|(i, w)| (*w, i))
        .collect();

    // Class labels name the lexicographically smallest member word.
    let state_labels: Vec<String> = class_reps
        .iter()
        .map(|&rep| {
            words[rep]
                .iter()
                .map(|&(x, y)| {
                    format!(
                        "({},{})",
                        h.input_labels[x as usize], h.output_labels[y as usize]
                    )
                })
                .collect::<Vec<_>>()
                .join("")
        })
        .collect();

    // Aggregate continuation counts per class and type the quotient
    // transitions: from class c on symbol (x, y), the successor word's class
    // must be unique across members.
    let mut next_class: BTreeMap<(usize, u32, u32), usize> = BTreeMap::new();
    let mut class_counts: Vec<BTreeMap<(u32, u32), u64>> = vec![BTreeMap::new(); n_classes];
    for (i, word) in words.iter().enumerate() {
        let class = class_of[i];
        for (&(x, y), &c) in &h.counts[*word] {
            *class_counts[class].entry((x, y)).or_insert(0) += c;
            let mut successor: Word = word[1..].to_vec();
            successor.push((x, y));
            // The trajectory tail can produce one successor word that was
            // never harvested; skip it rather than fail the merge.
            let Some(&succ_idx) = word_index.get(&successor) else {
                continue;
            };
            let succ_class = class_of[succ_idx];
            if let Some(&prev) = next_class.get(&(class, x, y)) {
                if prev != succ_class {
                    return Err(Error::NondeterministicQuotient(format!(
                        "class {} maps symbol ({},{}) to classes {} and {}",
                        state_labels[class],
                        h.input_labels[x as usize],
                        h.output_labels[y as usize],
                        state_labels[prev],
                        state_labels[succ_class]
                    )));
                }
            } else {
                next_class.insert((class, x, y), succ_class);
            }
        }
    }

    // Empirical input policy over the whole table.
    let mut input_totals = vec![0u64; nx];
    let mut grand_total = 0u64;
    for counts in class_counts.iter() {
        for (&(x, _), &c) in counts {
            input_totals[x as usize] += c;
            grand_total += c;
        }
    }
    let policy = ProbDist::from_f64(
        h.input_labels
            .iter()
            .enumerate()
            .map(|(x, l)| (l.clone(), input_totals[x] as f64 / grand_total as f64))
            .collect(),
    )?;

    // Kernel rows: P(y, c' | c, x) from aggregated counts.
    let mut transitions = Vec::new();
    for (class, counts) in class_counts.iter().enumerate() {
        let mut per_input = vec![0u64; nx];
        for (&(x, _), &c) in counts {
            per_input[x as usize] += c;
        }
        for (x, &count) in per_input.iter().enumerate() {
            if count == 0 {
                return Err(Error::InsufficientData(format!(
                    "state {} was never observed under input {}",
                    state_labels[class], h.input_labels[x]
                )));
            }
        }
        for (&(x, y), &c) in counts {
            let Some(&to) = next_class.get(&(class, x, y)) else {
                return Err(Error::InsufficientData(format!(
                    "no successor observed for state {} on ({},{})",
                    state_labels[class], h.input_labels[x as usize], h.output_labels[y as usize]
                )));
            };
            transitions.push(Transition {
                from: state_labels[class].clone(),
                input: h.input_labels[x as usize].clone(),
                output: h.output_labels[y as usize].clone(),
                to: state_labels[to].clone(),
                p: Prob::approx(c as f64 / per_input[x as usize] as f64),
            });
        }
    }

    EpsilonTransducer::new(
        state_labels,
        h.input_labels.clone(),
        h.output_labels.clone(),
        transitions,
        Some(policy),
    )
}
