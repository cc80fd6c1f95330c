//! File formats.
//!
//! Machine definitions are JSON:
//!
//! ```json
//! {
//!   "states": ["s0", "s1"],
//!   "inputs": ["a"],
//!   "outputs": ["0", "1"],
//!   "kernel": [
//!     {"from": "s0", "input": "a", "output": "1", "to": "s1", "p": "1/2"}
//!   ],
//!   "input_policy": {"a": "1"}
//! }
//! ```
//!
//! Probabilities are `"num/den"` strings (exact) or plain numbers
//! (approximate). Trajectories are CSV with columns `t,x,y,s`; the seed is
//! kept in a leading `# seed=...` comment so a file round-trips.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::entropy::ProbDist;
use crate::error::{Error, Result};
use crate::exact::Prob;

use super::{EpsilonTransducer, Trajectory, Transition};

#[derive(Debug, Serialize, Deserialize)]
struct MachineFile {
    states: Vec<String>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    kernel: Vec<TransitionRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    input_policy: Option<BTreeMap<String, ProbValue>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TransitionRecord {
    from: String,
    input: String,
    output: String,
    to: String,
    p: ProbValue,
}

/// Wire form of a probability: `"1/2"` stays exact, `0.5` is a float.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ProbValue {
    Fraction(String),
    Number(f64),
}

impl ProbValue {
    fn to_prob(&self) -> Result<Prob> {
        match self {
            ProbValue::Fraction(s) => Prob::parse(s),
            ProbValue::Number(v) => Ok(Prob::approx(*v)),
        }
    }

    fn from_prob(p: &Prob) -> Self {
        match p {
            Prob::Exact(_) => ProbValue::Fraction(p.format()),
            Prob::Approx(v) => ProbValue::Number(*v),
        }
    }
}

/// Serializes a machine to the JSON definition format.
pub fn machine_to_json(m: &EpsilonTransducer) -> Result<String> {
    let policy = m.input_policy()?;
    let file = MachineFile {
        states: m.states().to_vec(),
        inputs: m.inputs().to_vec(),
        outputs: m.outputs().to_vec(),
        kernel: m
            .transitions()
            .iter()
            .map(|t| TransitionRecord {
                from: t.from.clone(),
                input: t.input.clone(),
                output: t.output.clone(),
                to: t.to.clone(),
                p: ProbValue::from_prob(&t.p),
            })
            .collect(),
        input_policy: Some(
            policy
                .iter()
                .map(|(l, p)| (l.to_string(), ProbValue::from_prob(p)))
                .collect(),
        ),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

/// Parses a machine from its JSON definition.
pub fn machine_from_json(text: &str) -> Result<EpsilonTransducer> {
    let file: MachineFile =
        serde_json::from_str(text).map_err(|e| Error::MachineFormat(e.to_string()))?;
    let transitions: Vec<Transition> = file
        .kernel
        .iter()
        .map(|r| {
            Ok(Transition {
                from: r.from.clone(),
                input: r.input.clone(),
                output: r.output.clone(),
                to: r.to.clone(),
                p: r.p.to_prob()?,
            })
        })
        .collect::<Result<_>>()?;
    let policy = match file.input_policy {
        Some(map) => {
            let entries: Vec<(String, Prob)> = map
                .into_iter()
                .map(|(l, v)| Ok((l, v.to_prob()?)))
                .collect::<Result<_>>()?;
            Some(ProbDist::new(entries)?)
        }
        None => None,
    };
    EpsilonTransducer::new(file.states, file.inputs, file.outputs, transitions, policy)
}

pub fn save_machine(m: &EpsilonTransducer, path: &Path) -> Result<()> {
    std::fs::write(path, machine_to_json(m)?)?;
    Ok(())
}

pub fn load_machine(path: &Path) -> Result<EpsilonTransducer> {
    let text = std::fs::read_to_string(path)?;
    machine_from_json(&text)
}

impl Trajectory {
    /// Writes `t,x,y,s` rows, preceded by a `# seed=` comment.
    pub fn write_csv(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "# seed={}", self.seed)?;
        writeln!(w, "t,x,y,s")?;
        for (t, &(x, y, s)) in self.steps.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{}",
                t,
                self.input_labels[x as usize],
                self.output_labels[y as usize],
                self.state_labels[s as usize]
            )?;
        }
        Ok(())
    }

    /// Parses the CSV form. Labels are interned in order of first
    /// appearance; a malformed row reports its line number.
    pub fn read_csv(r: &mut impl BufRead) -> Result<Trajectory> {
        let mut seed = 0u64;
        let mut input_labels: Vec<String> = Vec::new();
        let mut output_labels: Vec<String> = Vec::new();
        let mut state_labels: Vec<String> = Vec::new();
        let mut steps = Vec::new();
        let mut header_seen = false;
        for (line_no, line) in r.lines().enumerate() {
            let line = line?;
            let line_no = line_no + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                if let Some(value) = comment.trim().strip_prefix("seed=") {
                    seed = value.trim().parse().map_err(|_| Error::Parse {
                        line: line_no,
                        message: format!("bad seed value {value:?}"),
                    })?;
                }
                continue;
            }
            if !header_seen {
                if trimmed != "t,x,y,s" {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected header t,x,y,s, found {trimmed:?}"),
                    });
                }
                header_seen = true;
                continue;
            }
            let fields: Vec<&str> = trimmed.split(',').collect();
            if fields.len() != 4 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 4 fields, found {}", fields.len()),
                });
            }
            let expected_t = steps.len();
            let t: usize = fields[0].parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("bad step index {:?}", fields[0]),
            })?;
            if t != expected_t {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("step index {t} out of order, expected {expected_t}"),
                });
            }
            let x = intern(&mut input_labels, fields[1]);
            let y = intern(&mut output_labels, fields[2]);
            let s = intern(&mut state_labels, fields[3]);
            steps.push((x, y, s));
        }
        if steps.is_empty() {
            return Err(Error::Parse {
                line: 0,
                message: "no data rows".into(),
            });
        }
        Ok(Trajectory {
            seed,
            input_labels,
            output_labels,
            state_labels,
            steps,
        })
    }
}

fn intern(labels: &mut Vec<String>, label: &str) -> u32 {
    match labels.iter().position(|l| l == label) {
        Some(i) => i as u32,
        None => {
            labels.push(label.to_string());
            (labels.len() - 1) as u32
        }
    }
}
