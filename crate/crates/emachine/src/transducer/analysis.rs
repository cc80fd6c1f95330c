//! Analysis of a machine: stationary distribution, statistical complexity,
//! the single-transition joint, erased information, and the unifilar
//! entropy-difference identity.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::entropy::{
    conditional_entropy, conditional_entropy_exact, JointTable, ProbDist,
};
use crate::error::{Error, Result};
use crate::exact::Prob;

use super::{
    EpsilonTransducer, AXIS_INPUT, AXIS_OUTPUT, AXIS_STATE_NEXT, AXIS_STATE_PREV,
};

const POWER_TOLERANCE: f64 = 1e-12;
const POWER_MAX_ITERATIONS: usize = 1_000_000;

/// Result of the unifilar identity check: the entropy difference between the
/// post- and pre-transition triples versus minus the erased information.
#[derive(Clone, Copy, Debug)]
pub struct IdentityReport {
    /// H(X, Y, S_next) − H(X, Y, S_prev).
    pub lhs_bits: f64,
    /// −H(S_prev | X, Y, S_next).
    pub rhs_bits: f64,
    pub residual: f64,
}

impl EpsilonTransducer {
    /// State chain marginalized over the input policy and outputs:
    /// `M[s][s'] = Σ_x π(x) Σ_y kernel(s, x)(y, s')`.
    fn state_chain(&self) -> Vec<Vec<Prob>> {
        let n = self.states().len();
        let mut m = vec![vec![Prob::zero(); n]; n];
        for (s, row) in m.iter_mut().enumerate() {
            for (x, px) in self.policy_probs().iter().enumerate() {
                if px.is_zero() {
                    continue;
                }
                for (_, to, p) in self.rows(s, x) {
                    row[*to] = row[*to].add(&px.mul(p));
                }
            }
        }
        m
    }

    /// Stationary distribution π with πM = π, solved exactly for rational
    /// kernels and by damped power iteration (residual ≤ 1e-12) otherwise.
    ///
    /// The chain must be irreducible; otherwise the error names the states
    /// that are not mutually reachable with the first state.
    pub fn stationary_distribution(&self) -> Result<ProbDist> {
        let chain = self.state_chain();
        self.check_irreducible(&chain)?;
        let probs = if self.is_exact() {
            solve_stationary_exact(&chain)?
        } else {
            solve_stationary_power(&chain)?
        };
        ProbDist::new(
            self.states()
                .iter()
                .cloned()
                .zip(probs)
                .collect(),
        )
    }

    fn check_irreducible(&self, chain: &[Vec<Prob>]) -> Result<()> {
        let n = chain.len();
        let forward = reachable(chain, 0, false);
        let backward = reachable(chain, 0, true);
        let out: Vec<String> = (0..n)
            .filter(|&s| !(forward[s] && backward[s]))
            .map(|s| self.states()[s].clone())
            .collect();
        if out.is_empty() {
            Ok(())
        } else {
            Err(Error::ReducibleChain {
                reference: self.states()[0].clone(),
                unreachable: out,
            })
        }
    }

    /// Shannon entropy of the stationary distribution, in bits.
    pub fn statistical_complexity(&self) -> Result<f64> {
        Ok(self.stationary_distribution()?.entropy_bits())
    }

    /// Exact statistical complexity, when the stationary distribution is
    /// rational with dyadic probabilities.
    pub fn statistical_complexity_exact(&self) -> Result<Option<BigRational>> {
        Ok(self.stationary_distribution()?.entropy_exact())
    }

    /// Joint distribution of one transition under `prior` over the origin
    /// state: P(s, x, y, s') = prior(s) · π(x) · kernel(s, x)(y, s').
    pub fn build_joint(&self, prior: &ProbDist) -> Result<JointTable> {
        let n = self.states().len();
        let mut prior_by_idx = vec![Prob::zero(); n];
        for (label, p) in prior.iter() {
            let s = self.state_index(label)?;
            prior_by_idx[s] = p.clone();
        }
        let mut cells = Vec::new();
        for (s, prior_s) in prior_by_idx.iter().enumerate() {
            if prior_s.is_zero() {
                continue;
            }
            for (x, px) in self.policy_probs().iter().enumerate() {
                if px.is_zero() {
                    continue;
                }
                let base = prior_s.mul(px);
                for (y, to, p) in self.rows(s, x) {
                    cells.push((
                        vec![s as u32, x as u32, *y as u32, *to as u32],
                        base.mul(p),
                    ));
                }
            }
        }
        JointTable::new(
            vec![
                AXIS_STATE_PREV.into(),
                AXIS_INPUT.into(),
                AXIS_OUTPUT.into(),
                AXIS_STATE_NEXT.into(),
            ],
            vec![
                self.states().to_vec(),
                self.inputs().to_vec(),
                self.outputs().to_vec(),
                self.states().to_vec(),
            ],
            cells,
        )
    }

    /// Erased information H(S_prev | X, Y, S_next) in bits under `prior`.
    ///
    /// The prior is an explicit argument: driven channels can be audited
    /// both under their own stationary distribution and under a uniform
    /// prior over the conditioning state, and the two generally disagree.
    pub fn erased_information(&self, prior: &ProbDist) -> Result<f64> {
        let joint = self.build_joint(prior)?;
        conditional_entropy(
            &joint,
            AXIS_STATE_PREV,
            &[AXIS_INPUT, AXIS_OUTPUT, AXIS_STATE_NEXT],
        )
    }

    /// Exact-rational erased information, when available.
    pub fn erased_information_exact(&self, prior: &ProbDist) -> Result<Option<BigRational>> {
        let joint = self.build_joint(prior)?;
        conditional_entropy_exact(
            &joint,
            AXIS_STATE_PREV,
            &[AXIS_INPUT, AXIS_OUTPUT, AXIS_STATE_NEXT],
        )
    }

    /// Checks the unifilar identity
    /// `H(X, Y, S_next) − H(X, Y, S_prev) = −H(S_prev | X, Y, S_next)`
    /// on the single-transition joint built from `prior`.
    ///
    /// Three preconditions are scanned and reported by name when violated:
    /// unifilarity, output determinism (H(Y_t|S_t) = 0), and a
    /// time-independent input policy (structural here, since a machine
    /// carries a single policy). Under output determinism and a stationary
    /// prior the right-hand triple also represents the previous time step's
    /// `(X_t, Y_{t-1}, S_{t-1})` written with the transition's own output
    /// axis, which is what makes the left side an entropy difference between
    /// consecutive time steps.
    pub fn verify_unifilar_identity(&self, prior: &ProbDist) -> Result<IdentityReport> {
        if !self.is_unifilar() {
            return Err(Error::AssumptionViolated(
                "unifilarity: some (state, input, output) admits several next states".into(),
            ));
        }
        if !self.is_output_deterministic() {
            return Err(Error::AssumptionViolated(
                "output determinism: some state is entered with more than one output symbol"
                    .into(),
            ));
        }
        let joint = self.build_joint(prior)?;
        let h_next = joint
            .marginalize(&[AXIS_INPUT, AXIS_OUTPUT, AXIS_STATE_NEXT])?
            .entropy_bits();
        let h_prev = joint
            .marginalize(&[AXIS_STATE_PREV, AXIS_INPUT, AXIS_OUTPUT])?
            .entropy_bits();
        let lhs = h_next - h_prev;
        let rhs = -conditional_entropy(
            &joint,
            AXIS_STATE_PREV,
            &[AXIS_INPUT, AXIS_OUTPUT, AXIS_STATE_NEXT],
        )?;
        Ok(IdentityReport {
            lhs_bits: lhs,
            rhs_bits: rhs,
            residual: (lhs - rhs).abs(),
        })
    }

    /// Searches for a state relabelling under which the two kernels agree
    /// within `atol` on every transition probability. Input and output
    /// labels must match as sets. Returns the state mapping when found.
    pub fn is_isomorphic_to(&self, other: &EpsilonTransducer, atol: f64) -> Option<Vec<usize>> {
        if self.states().len() != other.states().len() {
            return None;
        }
        let input_map = label_map(self.inputs(), other.inputs())?;
        let output_map = label_map(self.outputs(), other.outputs())?;
        let n = self.states().len();
        let matches = |perm: &[usize]| -> bool {
            for s in 0..n {
                for (x, &ox) in input_map.iter().enumerate() {
                    let mine = self.rows(s, x);
                    let theirs = other.rows(perm[s], ox);
                    if mine.len() != theirs.len() {
                        return false;
                    }
                    for (y, to, p) in mine {
                        let oy = output_map[*y];
                        let want = perm[*to];
                        let found = theirs
                            .iter()
                            .find(|(ty, tto, _)| *ty == oy && *tto == want);
                        match found {
                            Some((_, _, q)) if (p.to_f64() - q.to_f64()).abs() <= atol => {}
                            _ => return false,
                        }
                    }
                }
            }
            true
        };
        let mut perm: Vec<usize> = (0..n).collect();
        permutations(&mut perm, 0, &mut |p| matches(p))
    }
}

fn label_map(from: &[String], to: &[String]) -> Option<Vec<usize>> {
    if from.len() != to.len() {
        return None;
    }
    from.iter()
        .map(|l| to.iter().position(|m| m == l))
        .collect()
}

/// Visits permutations in lexicographic-ish order; returns the first one
/// accepted by `check`.
fn permutations(
    perm: &mut Vec<usize>,
    k: usize,
    check: &mut impl FnMut(&[usize]) -> bool,
) -> Option<Vec<usize>> {
    if k == perm.len() {
        return check(perm).then(|| perm.clone());
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        if let Some(found) = permutations(perm, k + 1, check) {
            return Some(found);
        }
        perm.swap(k, i);
    }
    None
}

fn reachable(chain: &[Vec<Prob>], start: usize, reverse: bool) -> Vec<bool> {
    let n = chain.len();
    let mut seen = vec![false; n];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(s) = stack.pop() {
        for t in 0..n {
            let p = if reverse { &chain[t][s] } else { &chain[s][t] };
            if !p.is_zero() && !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    seen
}

/// Exact stationary solve: Gaussian elimination over the rationals on
/// (Mᵀ − I)π = 0 with the last equation replaced by Σπ = 1.
#[allow(clippy::needless_range_loop)] // row/column index style for the elimination
fn solve_stationary_exact(chain: &[Vec<Prob>]) -> Result<Vec<Prob>> {
    let n = chain.len();
    let zero = BigRational::zero();
    let one = BigRational::one();
    let mut a = vec![vec![zero.clone(); n + 1]; n];
    for row in 0..n.saturating_sub(1) {
        for col in 0..n {
            let mut v = chain[col][row]
                .as_exact()
                .cloned()
                .unwrap_or_else(BigRational::zero);
            if col == row {
                v -= &one;
            }
            a[row][col] = v;
        }
    }
    for col in 0..n {
        a[n - 1][col] = one.clone();
    }
    a[n - 1][n] = one.clone();

    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::MachineDefinition("singular stationary system".into()))?;
        a.swap(col, pivot);
        let inv = a[col][col].clone();
        for c in col..=n {
            a[col][c] = &a[col][c] / &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..=n {
                    let delta = &factor * &a[col][c];
                    a[r][c] = &a[r][c] - delta;
                }
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    for row in a.iter().take(n) {
        let v = row[n].clone();
        if v.is_negative() {
            return Err(Error::MachineDefinition(
                "stationary solve produced a negative probability".into(),
            ));
        }
        out.push(Prob::Exact(v));
    }
    Ok(out)
}

/// Damped power iteration π ← ½π + ½πM. The half-step mixing has the same
/// fixed point and converges even for periodic chains.
fn solve_stationary_power(chain: &[Vec<Prob>]) -> Result<Vec<Prob>> {
    let n = chain.len();
    let m: Vec<Vec<f64>> = chain
        .iter()
        .map(|row| row.iter().map(Prob::to_f64).collect())
        .collect();
    let mut pi = vec![1.0 / n as f64; n];
    let mut best = f64::INFINITY;
    for _ in 0..POWER_MAX_ITERATIONS {
        let mut next = vec![0.0; n];
        for s in 0..n {
            for t in 0..n {
                next[t] += pi[s] * m[s][t];
            }
        }
        let residual = pi
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        best = best.min(residual);
        for t in 0..n {
            pi[t] = 0.5 * pi[t] + 0.5 * next[t];
        }
        let total: f64 = pi.iter().sum();
        for v in pi.iter_mut() {
            *v /= total;
        }
        if residual <= POWER_TOLERANCE {
            return Ok(pi.into_iter().map(Prob::approx).collect());
        }
    }
    Err(Error::NoConvergence {
        tolerance: POWER_TOLERANCE,
        achieved: best,
        max_iterations: POWER_MAX_ITERATIONS,
    })
}
