//! Agent models and Landauer heat accounting.
//!
//! The system being watched exchanges no heat: randomizing a bit by
//! removing and re-inserting a partition ([`rand_operation`]) is logically
//! irreversible but thermodynamically free. The cost of the experiment sits
//! entirely with the observer, who must reset memory cells to blank between
//! cycles — each reset of a cell whose ensemble carries H bits logs H·kT·ln2
//! of heat in the [`HeatLedger`].
//!
//! Two observers are modelled. The memoryless agent re-reads basis and
//! outcome every cycle and pays exactly 2 bits per cycle. The
//! memory-assisted agent archives the previous (basis, outcome) pair and
//! skips the position measurement whenever the basis repeats, paying
//! 1 + 1/2 = 3/2 bits per cycle on average.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::entropy::ProbDist;
use crate::error::{Error, Result};
use crate::exact::Prob;
use crate::quantum::{
    causal_state_label, measure_selective, Basis, DensityMatrix2, Outcome,
};
use crate::spekkens::{SpekkensBox, SpekkensProcess};
use crate::transducer::{EpsilonTransducer, Trajectory};

/// One erasure event: when, which operation, and its cost in bits and heat.
#[derive(Clone, Debug)]
pub struct LedgerEvent {
    pub t: u64,
    pub op: String,
    pub bits: f64,
    /// bits × k × T × ln 2, at the ledger's configured k and T.
    pub heat: f64,
}

/// Append-only log of erasure costs. Only [`landauer_erase`] appends, so
/// every event is attributable to an agent-side memory reset.
#[derive(Clone, Debug)]
pub struct HeatLedger {
    k: f64,
    temperature: f64,
    events: Vec<LedgerEvent>,
}

impl HeatLedger {
    /// Defaults k = 1 and T = 1/ln2, so one bit costs one heat unit.
    pub fn new() -> Self {
        HeatLedger {
            k: 1.0,
            temperature: 1.0 / std::f64::consts::LN_2,
            events: Vec::new(),
        }
    }

    pub fn with_constants(k: f64, temperature: f64) -> Result<Self> {
        if temperature <= 0.0 {
            return Err(Error::InvalidTemperature(temperature));
        }
        Ok(HeatLedger {
            k,
            temperature,
            events: Vec::new(),
        })
    }

    fn record(&mut self, t: u64, op: &str, bits: f64) {
        let heat = bits * self.k * self.temperature * std::f64::consts::LN_2;
        self.events.push(LedgerEvent {
            t,
            op: op.to_string(),
            bits,
            heat,
        });
    }

    pub fn events(&self) -> &[LedgerEvent] {
        &self.events
    }

    pub fn total_bits(&self) -> f64 {
        self.events.iter().map(|e| e.bits).sum()
    }

    /// CSV export with columns `t,op,bits,heat`.
    pub fn write_csv(&self, w: &mut impl std::io::Write) -> Result<()> {
        writeln!(w, "t,op,bits,heat")?;
        for e in &self.events {
            writeln!(w, "{},{},{},{}", e.t, e.op, e.bits, e.heat)?;
        }
        Ok(())
    }
}

impl Default for HeatLedger {
    fn default() -> Self {
        Self::new()
    }
}

/// Ledger totals in bits, kT·ln2 units and energy units.
#[derive(Clone, Copy, Debug)]
pub struct LedgerTotals {
    pub bits: f64,
    pub kt_ln2_units: f64,
    pub joules: f64,
}

/// Sums the ledger: total bits, and the corresponding heat at the given k
/// and T (joules when k is the Boltzmann constant and T is in kelvin).
pub fn ledger_total(ledger: &HeatLedger, k: f64, temperature: f64) -> Result<LedgerTotals> {
    if temperature <= 0.0 {
        return Err(Error::InvalidTemperature(temperature));
    }
    let bits = ledger.total_bits();
    Ok(LedgerTotals {
        bits,
        kt_ln2_units: bits,
        joules: bits * k * temperature * std::f64::consts::LN_2,
    })
}

/// A one-symbol memory cell. Copying requires a blank target; resetting a
/// non-blank cell costs the Shannon entropy of the cell's ensemble.
#[derive(Clone, Debug, Default)]
pub struct MemoryCell {
    content: Option<String>,
    ensemble_bits: f64,
}

impl MemoryCell {
    pub fn blank() -> Self {
        MemoryCell {
            content: None,
            ensemble_bits: 0.0,
        }
    }

    /// Correlates the cell with a value. `ensemble_bits` is the entropy of
    /// the value's distribution across protocol runs — the reset cost that
    /// this copy commits the owner to.
    pub fn copy_into(&mut self, value: &str, ensemble_bits: f64) -> Result<()> {
        if self.content.is_some() {
            return Err(Error::CellNotBlank);
        }
        if ensemble_bits.is_nan() || ensemble_bits < 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "ensemble entropy must be non-negative, got {ensemble_bits}"
            )));
        }
        self.content = Some(value.to_string());
        self.ensemble_bits = ensemble_bits;
        Ok(())
    }

    pub fn content(&self) -> Option<&str> {
        self.content.as_deref()
    }

    pub fn is_blank(&self) -> bool {
        self.content.is_none()
    }
}

/// Landauer erasure: maps the cell back to blank. A non-blank cell logs its
/// ensemble entropy as the erasure cost (−ΔS in bits); erasing an
/// already-blank cell costs nothing and logs nothing.
pub fn landauer_erase(cell: &mut MemoryCell, ledger: &mut HeatLedger, t: u64, op: &str) -> f64 {
    if cell.content.take().is_none() {
        return 0.0;
    }
    let bits = cell.ensemble_bits;
    cell.ensemble_bits = 0.0;
    ledger.record(t, op, bits);
    bits
}

/// The RAND operation on a box-realized bit: remove the partition, wait
/// long enough for the particle to forget its half, re-insert. Logically
/// irreversible, yet no ledger is touched — there is no heat cost.
pub fn rand_operation(bit: &mut SpekkensBox, rng: &mut ChaCha12Rng) -> Result<()> {
    let partition = bit.partition();
    if matches!(partition, crate::spekkens::Partition::None) {
        return Err(Error::PartitionMissing);
    }
    bit.remove_partition();
    // Free flight across the whole box.
    let cell = crate::spekkens::Cell::ALL[rng.gen_range(0..4)];
    *bit = SpekkensBox::new(cell, partition);
    Ok(())
}

/// Observer model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AgentMode {
    Memoryless,
    MemoryAssisted,
}

/// Anything the agent can watch: per cycle the process advances one step
/// under a random basis and yields the ground-truth outcome.
pub trait MeasurementProcess {
    fn advance(&mut self) -> (Basis, Outcome);
}

impl MeasurementProcess for SpekkensProcess {
    fn advance(&mut self) -> (Basis, Outcome) {
        let truth = self.step();
        (truth.orientation.basis(), truth.side.outcome())
    }
}

/// Selective quantum tracker as a measurement process.
#[derive(Clone, Debug)]
pub struct QuantumProcess {
    rho: DensityMatrix2,
    rng: ChaCha12Rng,
}

impl QuantumProcess {
    pub fn new(seed: u64) -> Self {
        QuantumProcess {
            rho: DensityMatrix2::ket0(),
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }
}

impl MeasurementProcess for QuantumProcess {
    fn advance(&mut self) -> (Basis, Outcome) {
        let basis = if self.rng.gen_bool(0.5) { Basis::Z } else { Basis::X };
        let (outcome, next) = measure_selective(&self.rho, basis, &mut self.rng);
        self.rho = next;
        (basis, outcome)
    }
}

/// Per-cycle cost accounting. Cycle 1 is warm-up (a memory-assisted agent
/// has nothing archived yet and always measures); averages exclude it.
#[derive(Clone, Copy, Debug)]
pub struct CycleReport {
    /// Cycles counted in the averages (all cycles after warm-up).
    pub cycles: u64,
    pub total_bits: f64,
    pub basis_bits: f64,
    pub outcome_bits: f64,
    /// Position measurements skipped because the basis repeated.
    pub skipped_measurements: u64,
    /// Cost of the excluded warm-up cycle.
    pub warmup_bits: f64,
}

impl CycleReport {
    pub fn average_bits(&self) -> f64 {
        self.total_bits / self.cycles as f64
    }

    pub fn basis_average(&self) -> f64 {
        self.basis_bits / self.cycles as f64
    }

    pub fn outcome_average(&self) -> f64 {
        self.outcome_bits / self.cycles as f64
    }
}

/// Runs the observer against a measurement process for `n_cycles` cycles.
///
/// Per cycle: (a) the current basis is copied into the blank basis cell;
/// (b) the outcome is either read from the archive (memory-assisted, basis
/// unchanged — the position measurement is skipped) or copied from a fresh
/// observation; (c) working cells are swapped with the archive (a free,
/// logically reversible relabelling) and the stale copies are reset, each
/// reset of a non-blank cell logging one bit.
///
/// Both working cells hold uniformly distributed symbols under the
/// protocol's stationary statistics, so every reset costs exactly one bit.
pub fn run_agent_protocol(
    process: &mut dyn MeasurementProcess,
    mode: AgentMode,
    n_cycles: u64,
    k: f64,
    temperature: f64,
) -> Result<(Trajectory, HeatLedger, CycleReport)> {
    if n_cycles < 2 {
        return Err(Error::MachineDefinition(
            "need at least 2 cycles (cycle 1 is warm-up)".into(),
        ));
    }
    let mut ledger = HeatLedger::with_constants(k, temperature)?;
    let mut basis_cell = MemoryCell::blank();
    let mut outcome_cell = MemoryCell::blank();
    let mut archive_basis = MemoryCell::blank();
    let mut archive_outcome = MemoryCell::blank();
    let mut steps = Vec::with_capacity(n_cycles as usize);
    let mut report = CycleReport {
        cycles: 0,
        total_bits: 0.0,
        basis_bits: 0.0,
        outcome_bits: 0.0,
        skipped_measurements: 0,
        warmup_bits: 0.0,
    };

    for t in 1..=n_cycles {
        let (basis, outcome) = process.advance();
        basis_cell.copy_into(basis.symbol(), 1.0)?;

        let skip = mode == AgentMode::MemoryAssisted
            && t > 1
            && archive_basis.content() == Some(basis.symbol());
        if skip {
            // Consecutive same-basis measurements repeat, so the archived
            // outcome is already this cycle's outcome.
            match archive_outcome.content() {
                Some(recorded) if recorded == outcome.symbol() => {}
                Some(recorded) => {
                    return Err(Error::ArchiveInconsistency(format!(
                        "archived outcome {recorded} but the process produced {}",
                        outcome.symbol()
                    )));
                }
                None => {
                    return Err(Error::ArchiveInconsistency(
                        "blank archive after warm-up".into(),
                    ));
                }
            }
            report.skipped_measurements += 1;
        } else {
            outcome_cell.copy_into(outcome.symbol(), 1.0)?;
        }

        let mut cycle_basis_bits = 0.0;
        let mut cycle_outcome_bits = 0.0;
        match mode {
            AgentMode::Memoryless => {
                cycle_basis_bits += landauer_erase(&mut basis_cell, &mut ledger, t, "reset_basis");
                cycle_outcome_bits +=
                    landauer_erase(&mut outcome_cell, &mut ledger, t, "reset_outcome");
            }
            AgentMode::MemoryAssisted => {
                // Archive update by content swap costs nothing; the stale
                // copy is then reset.
                std::mem::swap(&mut basis_cell, &mut archive_basis);
                cycle_basis_bits += landauer_erase(&mut basis_cell, &mut ledger, t, "reset_basis");
                if !skip {
                    std::mem::swap(&mut outcome_cell, &mut archive_outcome);
                    cycle_outcome_bits +=
                        landauer_erase(&mut outcome_cell, &mut ledger, t, "reset_outcome");
                }
            }
        }

        let cycle_bits = cycle_basis_bits + cycle_outcome_bits;
        if t == 1 {
            report.warmup_bits = cycle_bits;
        } else {
            report.cycles += 1;
            report.total_bits += cycle_bits;
            report.basis_bits += cycle_basis_bits;
            report.outcome_bits += cycle_outcome_bits;
        }

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

    let trajectory = Trajectory {
        seed: 0,
        input_labels: vec!["z".into(), "x".into()],
        output_labels: vec!["+1".into(), "-1".into()],
        state_labels: vec!["s0".into(), "s1".into(), "s+".into(), "s-".into()],
        steps,
    };
    Ok((trajectory, ledger, report))
}

/// Comparison of an agent run against the machine-level erased information.
#[derive(Clone, Copy, Debug)]
pub struct ReconcileReport {
    /// H(S_prev | X, Y, S_next) of the machine under the given prior.
    pub expected_bits: f64,
    /// Average bits erased per cycle by the agent.
    pub observed_bits: f64,
    pub residual: f64,
}

/// Compares a memory-assisted cycle report against the erased information
/// of the machine describing the watched process. Degenerate protocols
/// (e.g. a pinned basis sequence) produce a large residual, not an error:
/// the report documents the mismatch.
pub fn reconcile(
    machine: &EpsilonTransducer,
    report: &CycleReport,
    prior: &ProbDist,
) -> Result<ReconcileReport> {
    let expected = machine.erased_information(prior)?;
    let observed = report.average_bits();
    Ok(ReconcileReport {
        expected_bits: expected,
        observed_bits: observed,
        residual: (expected - observed).abs(),
    })
}

/// A scripted logical operation for checking the information form of the
/// Landauer bound: initial and final logical ensembles with their
/// sub-ensemble entropies, plus the heat pushed to the environment.
///
/// All entropies are in bits (multiples of k·ln2).
#[derive(Clone, Debug)]
pub struct ErasureScenario {
    pub label: String,
    /// (probability, sub-ensemble entropy in bits) before the operation.
    pub before: Vec<(f64, f64)>,
    /// (probability, sub-ensemble entropy in bits) after the operation.
    pub after: Vec<(f64, f64)>,
    /// Entropy increase of the environment in bits (heat / kT·ln2).
    pub env_entropy_bits: f64,
}

/// The bound ΔS_NI ≥ −k·ΔH·ln2, evaluated in bits:
/// ΔS_NI = ΔS_env + Σ_after P·S − Σ_before P·S and ΔH is the change in the
/// Shannon entropy of the logical state.
#[derive(Clone, Copy, Debug)]
pub struct InfoBoundReport {
    pub delta_s_ni_bits: f64,
    pub neg_delta_h_bits: f64,
    pub slack_bits: f64,
    pub holds: bool,
}

pub fn information_bound_check(scenario: &ErasureScenario) -> Result<InfoBoundReport> {
    let shannon = |ensemble: &[(f64, f64)]| -> Result<f64> {
        let d = ProbDist::new(
            ensemble
                .iter()
                .enumerate()
                .map(|(i, (p, _))| (format!("state{i}"), Prob::approx(*p)))
                .collect(),
        )?;
        Ok(d.entropy_bits())
    };
    let h_before = shannon(&scenario.before)?;
    let h_after = shannon(&scenario.after)?;
    let delta_h = h_after - h_before;
    let weighted =
        |ensemble: &[(f64, f64)]| -> f64 { ensemble.iter().map(|(p, s)| p * s).sum() };
    let delta_s_ni =
        scenario.env_entropy_bits + weighted(&scenario.after) - weighted(&scenario.before);
    let rhs = -delta_h;
    Ok(InfoBoundReport {
        delta_s_ni_bits: delta_s_ni,
        neg_delta_h_bits: rhs,
        slack_bits: delta_s_ni - rhs,
        holds: delta_s_ni >= rhs - 1e-12,
    })
}
