//! Qubit-side machinery: a 2×2 density-matrix tracker, projective
//! measurements in the Pauli z and x bases, the von Neumann entropy audit,
//! and builders for the two concrete machines used throughout the crate.
//!
//! The four-state machine describes repeated projective measurements of a
//! single qubit in a basis chosen uniformly at random between σz and σx. The
//! causal state after a measurement is the post-measurement quantum state:
//! s0 ↔ (z, +1), s1 ↔ (z, −1), s+ ↔ (x, +1), s− ↔ (x, −1).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::entropy::ProbDist;
use crate::error::{Error, Result};
use crate::exact::Prob;
use crate::transducer::{EpsilonTransducer, Trajectory, Transition};

const HERMITIAN_TOLERANCE: f64 = 1e-12;
const EIGENVALUE_CLAMP: f64 = 1e-12;

/// Measurement basis, σz or σx.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Z,
    X,
}

impl Basis {
    pub fn symbol(&self) -> &'static str {
        match self {
            Basis::Z => "z",
            Basis::X => "x",
        }
    }

    /// The two rank-1 projectors of the basis, outcome +1 first. They are
    /// orthogonal and complete (they sum to the identity).
    pub fn projectors(&self) -> [[[Complex64; 2]; 2]; 2] {
        let half = Complex64::new(0.5, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        match self {
            Basis::Z => [
                [[one, zero], [zero, zero]],
                [[zero, zero], [zero, one]],
            ],
            Basis::X => [
                [[half, half], [half, half]],
                [[half, -half], [-half, half]],
            ],
        }
    }

    pub fn other(&self) -> Basis {
        match self {
            Basis::Z => Basis::X,
            Basis::X => Basis::Z,
        }
    }
}

/// Measurement outcome, ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn symbol(&self) -> &'static str {
        match self {
            Outcome::Plus => "+1",
            Outcome::Minus => "-1",
        }
    }

    pub fn sign(&self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }
}

/// Causal-state label for a (basis, outcome) pair.
pub fn causal_state_label(basis: Basis, outcome: Outcome) -> &'static str {
    match (basis, outcome) {
        (Basis::Z, Outcome::Plus) => "s0",
        (Basis::Z, Outcome::Minus) => "s1",
        (Basis::X, Outcome::Plus) => "s+",
        (Basis::X, Outcome::Minus) => "s-",
    }
}

/// A 2×2 density matrix: Hermitian, unit trace, positive semidefinite
/// (all within 1e-12).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix2 {
    m: [[Complex64; 2]; 2],
}

impl DensityMatrix2 {
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let rho = DensityMatrix2 { m };
        rho.validate()?;
        Ok(rho)
    }

    fn validate(&self) -> Result<()> {
        let m = &self.m;
        if (m[0][0].im).abs() > HERMITIAN_TOLERANCE || (m[1][1].im).abs() > HERMITIAN_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(
                "diagonal entries must be real".into(),
            ));
        }
        if (m[0][1] - m[1][0].conj()).norm() > HERMITIAN_TOLERANCE {
            return Err(Error::InvalidDensityMatrix("matrix is not Hermitian".into()));
        }
        let trace = m[0][0].re + m[1][1].re;
        if (trace - 1.0).abs() > HERMITIAN_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace is {trace}, expected 1"
            )));
        }
        let (lo, _) = self.eigenvalues_unclamped();
        if lo < -EIGENVALUE_CLAMP {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {lo}"
            )));
        }
        Ok(())
    }

    /// Pure state α|0⟩ + β|1⟩ as a projector; the amplitudes are normalized.
    pub fn from_pure(alpha: Complex64, beta: Complex64) -> Self {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        let a = alpha / norm;
        let b = beta / norm;
        DensityMatrix2 {
            m: [
                [a * a.conj(), a * b.conj()],
                [b * a.conj(), b * b.conj()],
            ],
        }
    }

    pub fn ket0() -> Self {
        Self::from_pure(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn ket1() -> Self {
        Self::from_pure(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn ket_plus() -> Self {
        Self::from_pure(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn ket_minus() -> Self {
        Self::from_pure(Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0))
    }

    /// The maximally mixed state I/2, a fixed point of both measurement
    /// channels.
    pub fn maximally_mixed() -> Self {
        let half = Complex64::new(0.5, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        DensityMatrix2 {
            m: [[half, zero], [zero, half]],
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[i][j]
    }

    fn eigenvalues_unclamped(&self) -> (f64, f64) {
        // Hermitian 2×2: λ = (tr ± √(tr² − 4 det)) / 2, both real.
        let tr = self.m[0][0].re + self.m[1][1].re;
        let det = (self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]).re;
        let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
        ((tr - disc) / 2.0, (tr + disc) / 2.0)
    }

    /// Eigenvalues clamped into [0, 1].
    pub fn eigenvalues(&self) -> (f64, f64) {
        let (lo, hi) = self.eigenvalues_unclamped();
        (lo.clamp(0.0, 1.0), hi.clamp(0.0, 1.0))
    }

    pub fn distance(&self, other: &DensityMatrix2) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        d
    }
}

fn mat_mul(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for (k, bk) in b.iter().enumerate() {
                out[i][j] += a[i][k] * bk[j];
            }
        }
    }
    out
}

fn sandwich(p: &[[Complex64; 2]; 2], rho: &DensityMatrix2) -> [[Complex64; 2]; 2] {
    mat_mul(&mat_mul(p, &rho.m), p)
}

fn trace(m: &[[Complex64; 2]; 2]) -> f64 {
    (m[0][0] + m[1][1]).re
}

/// Non-selective measurement Σᵢ Pᵢ ρ Pᵢ. Trace and Hermiticity are
/// preserved.
pub fn measure_nonselective(rho: &DensityMatrix2, basis: Basis) -> DensityMatrix2 {
    let projectors = basis.projectors();
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for p in &projectors {
        let term = sandwich(p, rho);
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] += term[i][j];
            }
        }
    }
    DensityMatrix2 { m }
}

/// Selective measurement: samples outcome i with probability tr(Pᵢ ρ) and
/// returns the normalized post-measurement state Pᵢ ρ Pᵢ / tr(Pᵢ ρ). The
/// post-state is pure whenever the input is pure.
pub fn measure_selective(
    rho: &DensityMatrix2,
    basis: Basis,
    rng: &mut ChaCha12Rng,
) -> (Outcome, DensityMatrix2) {
    let projectors = basis.projectors();
    let p_plus = trace(&sandwich(&projectors[0], rho)).clamp(0.0, 1.0);
    let u: f64 = rng.gen();
    let (outcome, projector, weight) = if u < p_plus {
        (Outcome::Plus, &projectors[0], p_plus)
    } else {
        (Outcome::Minus, &projectors[1], 1.0 - p_plus)
    };
    let mut m = sandwich(projector, rho);
    for row in m.iter_mut() {
        for v in row.iter_mut() {
            *v /= weight;
        }
    }
    (outcome, DensityMatrix2 { m })
}

/// Von Neumann entropy −Σ λ log₂ λ in bits. Eigenvalues are clamped into
/// [0, 1], and values within 1e-12 of an endpoint snap to it, so
/// diagonalization noise never leaks into the audit.
pub fn von_neumann_entropy(rho: &DensityMatrix2) -> f64 {
    let (lo, hi) = rho.eigenvalues();
    let mut h = 0.0;
    for l in [lo, hi] {
        if l > EIGENVALUE_CLAMP && l < 1.0 - EIGENVALUE_CLAMP {
            h -= l * l.log2();
        }
    }
    h.max(0.0)
}

/// The Landauer bound on dissipated heat for an entropy change of
/// `delta_s_bits` bits: at least −ΔS, reported both as a multiple of
/// kT·ln2 and in energy units given k and T.
#[derive(Clone, Copy, Debug)]
pub struct LandauerBound {
    /// −ΔS: the bound as a multiple of kT·ln2.
    pub kt_ln2_units: f64,
    /// The same bound in energy units, −ΔS · k · T · ln 2.
    pub energy: f64,
}

pub fn landauer_lower_bound(delta_s_bits: f64, k: f64, temperature: f64) -> Result<LandauerBound> {
    if temperature <= 0.0 {
        return Err(Error::InvalidTemperature(temperature));
    }
    let units = -delta_s_bits + 0.0; // +0.0 folds −0 into +0
    Ok(LandauerBound {
        kt_ln2_units: units,
        energy: units * k * temperature * std::f64::consts::LN_2,
    })
}

/// The four-state machine of repeated random-basis Pauli measurements.
///
/// Same-basis input: self-loop emitting the state's own outcome with
/// probability one. Crossed-basis input: each of the two target states with
/// probability 1/2. Uniform input policy. Unifilar and output-deterministic.
pub fn build_qubit_machine() -> EpsilonTransducer {
    let states = ["s0", "s1", "s+", "s-"];
    let state_of = |b: Basis, o: Outcome| causal_state_label(b, o).to_string();
    let mut transitions = Vec::new();
    for (state_basis, state_outcome) in [
        (Basis::Z, Outcome::Plus),
        (Basis::Z, Outcome::Minus),
        (Basis::X, Outcome::Plus),
        (Basis::X, Outcome::Minus),
    ] {
        let from = state_of(state_basis, state_outcome);
        // Measuring in the state's own basis repeats the recorded outcome.
        transitions.push(Transition {
            from: from.clone(),
            input: state_basis.symbol().into(),
            output: state_outcome.symbol().into(),
            to: from.clone(),
            p: Prob::one(),
        });
        // Crossed basis: both outcomes equally likely.
        let crossed = state_basis.other();
        for outcome in [Outcome::Plus, Outcome::Minus] {
            transitions.push(Transition {
                from: from.clone(),
                input: crossed.symbol().into(),
                output: outcome.symbol().into(),
                to: state_of(crossed, outcome),
                p: Prob::ratio(1, 2),
            });
        }
    }
    EpsilonTransducer::new(
        states.iter().map(|s| s.to_string()).collect(),
        vec!["z".into(), "x".into()],
        vec!["+1".into(), "-1".into()],
        transitions,
        None,
    )
    .expect("qubit machine definition is valid")
}

/// The feedback NOR channel: two states labelled by the previous output;
/// on input x the channel emits y = NOR(x, y_prev) deterministically and
/// moves to state y. Uniform input policy.
pub fn build_nor_machine() -> EpsilonTransducer {
    let mut transitions = Vec::new();
    for y_prev in 0..2u8 {
        for x in 0..2u8 {
            let y = u8::from(x == 0 && y_prev == 0);
            transitions.push(Transition {
                from: y_prev.to_string(),
                input: x.to_string(),
                output: y.to_string(),
                to: y.to_string(),
                p: Prob::one(),
            });
        }
    }
    EpsilonTransducer::new(
        vec!["0".into(), "1".into()],
        vec!["0".into(), "1".into()],
        vec!["0".into(), "1".into()],
        transitions,
        None,
    )
    .expect("NOR machine definition is valid")
}

/// Per-step record of the selective quantum run: entropy before and after
/// the measurement.
#[derive(Clone, Debug)]
pub struct QuantumAudit {
    /// S(ρ) after each measurement minus S(ρ) before it, in bits.
    pub per_step_delta_s: Vec<f64>,
    pub max_abs_delta_s: f64,
    /// Largest entry-wise distance of Σᵢ Pᵢ(I/2)Pᵢ from I/2 over both bases.
    pub mixed_fixed_point_error: f64,
}

/// Runs the repeated-measurement protocol with a selective tracker: per
/// step a basis is chosen uniformly at random, the qubit is measured, and
/// the post-measurement pure state becomes the causal state.
pub fn run_quantum_protocol(n_steps: usize, seed: u64) -> Result<(Trajectory, QuantumAudit)> {
    if n_steps < 1 {
        return Err(Error::MachineDefinition("n_steps must be at least 1".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut rho = DensityMatrix2::ket0();
    let mut steps = Vec::with_capacity(n_steps);
    let mut per_step = Vec::with_capacity(n_steps);
    let mut max_abs: f64 = 0.0;
    for _ in 0..n_steps {
        let basis = if rng.gen_bool(0.5) { Basis::Z } else { Basis::X };
        let before = von_neumann_entropy(&rho);
        let (outcome, next) = measure_selective(&rho, basis, &mut rng);
        let after = von_neumann_entropy(&next);
        let delta = after - before;
        per_step.push(delta);
        max_abs = max_abs.max(delta.abs());
        rho = next;
        let x = match basis {
            Basis::Z => 0u32,
            Basis::X => 1u32,
        };
        let y = match outcome {
            Outcome::Plus => 0u32,
            Outcome::Minus => 1u32,
        };
        let s = match causal_state_label(basis, outcome) {
            "s0" => 0u32,
            "s1" => 1,
            "s+" => 2,
            _ => 3,
        };
        steps.push((x, y, s));
    }
    let mixed = DensityMatrix2::maximally_mixed();
    let fixed_point_error = [Basis::Z, Basis::X]
        .iter()
        .map(|b| measure_nonselective(&mixed, *b).distance(&mixed))
        .fold(0.0, f64::max);
    let trajectory = Trajectory {
        seed,
        input_labels: vec!["z".into(), "x".into()],
        output_labels: vec!["+1".into(), "-1".into()],
        state_labels: vec!["s0".into(), "s1".into(), "s+".into(), "s-".into()],
        steps,
    };
    Ok((
        trajectory,
        QuantumAudit {
            per_step_delta_s: per_step,
            max_abs_delta_s: max_abs,
            mixed_fixed_point_error: fixed_point_error,
        },
    ))
}

/// Stationary prior of the qubit machine (uniform over the four states).
pub fn qubit_stationary_prior() -> ProbDist {
    ProbDist::uniform(&["s0", "s1", "s+", "s-"]).expect("uniform prior is valid")
}
