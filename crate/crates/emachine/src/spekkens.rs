//! A classical particle in a two-dimensional box as a toy qubit.
//!
//! The box has four cells (1 = top-left, 2 = bottom-left, 3 = top-right,
//! 4 = bottom-right) and one removable partition, vertical or horizontal. A
//! vertical partition plays the role of a z-basis measurement (left ↔ +1,
//! right ↔ −1), a horizontal one of an x-basis measurement (top ↔ +1,
//! bottom ↔ −1). The particle always occupies one definite cell; an observer
//! at best knows the two-cell half selected by the last observation.
//!
//! Free evolution between observations uniformizes the cell within its
//! current half, which is exactly what makes a crossed-basis outcome a fair
//! coin. The partition swap itself is instantaneous and cell-preserving.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::quantum::{causal_state_label, Basis, Outcome};
use crate::transducer::Trajectory;

/// One of the four ontic cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cell {
    C1,
    C2,
    C3,
    C4,
}

impl Cell {
    pub fn number(&self) -> u8 {
        match self {
            Cell::C1 => 1,
            Cell::C2 => 2,
            Cell::C3 => 3,
            Cell::C4 => 4,
        }
    }

    pub const ALL: [Cell; 4] = [Cell::C1, Cell::C2, Cell::C3, Cell::C4];
}

/// Orientation of the inserted partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Vertical,
    Horizontal,
}

impl Orientation {
    pub fn basis(&self) -> Basis {
        match self {
            Orientation::Vertical => Basis::Z,
            Orientation::Horizontal => Basis::X,
        }
    }

    pub fn other(&self) -> Orientation {
        match self {
            Orientation::Vertical => Orientation::Horizontal,
            Orientation::Horizontal => Orientation::Vertical,
        }
    }
}

/// Partition configuration of the box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Partition {
    None,
    Vertical,
    Horizontal,
}

impl Partition {
    fn orientation(&self) -> Option<Orientation> {
        match self {
            Partition::None => None,
            Partition::Vertical => Some(Orientation::Vertical),
            Partition::Horizontal => Some(Orientation::Horizontal),
        }
    }
}

/// Which half the particle is observed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Top,
    Bottom,
}

impl Side {
    pub fn outcome(&self) -> Outcome {
        match self {
            Side::Left | Side::Top => Outcome::Plus,
            Side::Right | Side::Bottom => Outcome::Minus,
        }
    }
}

fn half_of(cell: Cell, orientation: Orientation) -> [Cell; 2] {
    match orientation {
        Orientation::Vertical => match cell {
            Cell::C1 | Cell::C2 => [Cell::C1, Cell::C2],
            Cell::C3 | Cell::C4 => [Cell::C3, Cell::C4],
        },
        Orientation::Horizontal => match cell {
            Cell::C1 | Cell::C3 => [Cell::C1, Cell::C3],
            Cell::C2 | Cell::C4 => [Cell::C2, Cell::C4],
        },
    }
}

/// The box: one definite ontic cell plus the partition configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpekkensBox {
    cell: Cell,
    partition: Partition,
}

impl SpekkensBox {
    pub fn new(cell: Cell, partition: Partition) -> Self {
        SpekkensBox { cell, partition }
    }

    pub fn cell(&self) -> Cell {
        self.cell
    }

    pub fn partition(&self) -> Partition {
        self.partition
    }

    /// Instantaneous partition swap; the ontic cell is unchanged.
    pub fn set_partition(&mut self, orientation: Orientation) {
        self.partition = match orientation {
            Orientation::Vertical => Partition::Vertical,
            Orientation::Horizontal => Partition::Horizontal,
        };
    }

    pub fn remove_partition(&mut self) {
        self.partition = Partition::None;
    }

    /// Free evolution: the cell is re-sampled uniformly over the two-cell
    /// region delimited by the current partition, never crossing it.
    pub fn evolve(&mut self, rng: &mut ChaCha12Rng) -> Result<()> {
        let orientation = self.partition.orientation().ok_or(Error::PartitionMissing)?;
        let region = half_of(self.cell, orientation);
        self.cell = region[rng.gen_range(0..2)];
        Ok(())
    }

    /// Reads off which half contains the particle. The box is unchanged.
    pub fn observe(&self) -> Result<Side> {
        let orientation = self.partition.orientation().ok_or(Error::PartitionMissing)?;
        Ok(match orientation {
            Orientation::Vertical => match self.cell {
                Cell::C1 | Cell::C2 => Side::Left,
                Cell::C3 | Cell::C4 => Side::Right,
            },
            Orientation::Horizontal => match self.cell {
                Cell::C1 | Cell::C3 => Side::Top,
                Cell::C2 | Cell::C4 => Side::Bottom,
            },
        })
    }
}

/// A two- or four-cell knowledge state. Maximal knowledge is a half, never
/// a single cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpistemicState {
    support: Vec<Cell>,
}

impl EpistemicState {
    /// The half selected by observing `side` with the matching partition.
    pub fn from_observation(side: Side) -> Self {
        let support = match side {
            Side::Left => vec![Cell::C1, Cell::C2],
            Side::Right => vec![Cell::C3, Cell::C4],
            Side::Top => vec![Cell::C1, Cell::C3],
            Side::Bottom => vec![Cell::C2, Cell::C4],
        };
        EpistemicState { support }
    }

    /// Total ignorance.
    pub fn full() -> Self {
        EpistemicState {
            support: Cell::ALL.to_vec(),
        }
    }

    pub fn support(&self) -> &[Cell] {
        &self.support
    }
}

/// Result of reasoning backwards from a preparation and a later observation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Retrodiction {
    Cell(Cell),
    Underdetermined,
}

/// Intersects the prepared and observed epistemic states. A one-cell
/// intersection pins down the pre-measurement ontic state; identical
/// supports leave it underdetermined; disjoint supports are impossible for
/// the given preparation and produce an error.
pub fn retrodict(prepared: &EpistemicState, observed: &EpistemicState) -> Result<Retrodiction> {
    let common: Vec<Cell> = prepared
        .support()
        .iter()
        .copied()
        .filter(|c| observed.support().contains(c))
        .collect();
    match common.len() {
        0 => Err(Error::ImpossibleOutcome(format!(
            "prepared {:?} vs observed {:?}",
            prepared.support(),
            observed.support()
        ))),
        1 => Ok(Retrodiction::Cell(common[0])),
        _ => Ok(Retrodiction::Underdetermined),
    }
}

/// Ground truth of one protocol step, for soundness checks.
#[derive(Clone, Copy, Debug)]
pub struct StepTruth {
    pub pre_cell: Cell,
    pub post_cell: Cell,
    pub orientation: Orientation,
    pub side: Side,
}

/// The repeated-measurement protocol on the box. Per step: the partition
/// orientation is re-drawn with probability `reorient_prob` (the input
/// symbol), the particle evolves within the new configuration, and the
/// occupied half is read off (the output symbol).
#[derive(Clone, Debug)]
pub struct SpekkensProcess {
    box_: SpekkensBox,
    reorient_prob: f64,
    rng: ChaCha12Rng,
}

impl SpekkensProcess {
    /// Starts from the stationary preparation: uniform orientation, uniform
    /// cell.
    pub fn new(seed: u64) -> Self {
        Self::with_reorient_prob(seed, 0.5)
    }

    pub fn with_reorient_prob(seed: u64, reorient_prob: f64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let orientation = if rng.gen_bool(0.5) {
            Orientation::Vertical
        } else {
            Orientation::Horizontal
        };
        let cell = Cell::ALL[rng.gen_range(0..4)];
        let mut box_ = SpekkensBox::new(cell, Partition::None);
        box_.set_partition(orientation);
        SpekkensProcess {
            box_,
            reorient_prob,
            rng,
        }
    }

    pub fn current_box(&self) -> SpekkensBox {
        self.box_
    }

    /// One protocol step, returning full ground truth.
    pub fn step(&mut self) -> StepTruth {
        let pre_cell = self.box_.cell();
        let orientation = self
            .box_
            .partition()
            .orientation()
            .expect("protocol keeps a partition in place");
        let orientation = if self.rng.gen_bool(self.reorient_prob) {
            orientation.other()
        } else {
            orientation
        };
        self.box_.set_partition(orientation);
        self.box_
            .evolve(&mut self.rng)
            .expect("partition was just set");
        let side = self.box_.observe().expect("partition is in place");
        StepTruth {
            pre_cell,
            post_cell: self.box_.cell(),
            orientation,
            side,
        }
    }
}

/// Runs `n_steps` of the protocol. With `record` set, the trajectory holds
/// every step (x = orientation, y = side, s = the matching causal state);
/// otherwise the step list is left empty. No heat is exchanged at any point:
/// nothing here touches a ledger.
pub fn run_protocol(n_steps: usize, seed: u64, record: bool) -> Result<(Trajectory, SpekkensBox)> {
    if n_steps < 1 {
        return Err(Error::MachineDefinition("n_steps must be at least 1".into()));
    }
    let mut process = SpekkensProcess::new(seed);
    let mut steps = Vec::with_capacity(if record { n_steps } else { 0 });
    for _ in 0..n_steps {
        let truth = process.step();
        if record {
            let basis = truth.orientation.basis();
            let outcome = truth.side.outcome();
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
    }
    Ok((
        Trajectory {
            seed,
            input_labels: vec!["z".into(), "x".into()],
            output_labels: vec!["+1".into(), "-1".into()],
            state_labels: vec!["s0".into(), "s1".into(), "s+".into(), "s-".into()],
            steps,
        },
        process.current_box(),
    ))
}
