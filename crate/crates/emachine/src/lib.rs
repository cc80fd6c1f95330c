//! # emachine
//!
//! Stochastic input-output processes as ε-transducers, with the information
//! and heat bookkeeping needed to audit repeated-measurement experiments:
//!
//! - exact and floating-point Shannon machinery ([`entropy`]),
//! - ε-transducer analysis, simulation and causal-state reconstruction
//!   ([`transducer`]),
//! - the four-state machine of repeated Pauli measurements on a qubit, a
//!   feedback NOR channel, and a small density-matrix tracker ([`quantum`]),
//! - a particle-in-a-box realization of the Spekkens toy qubit
//!   ([`spekkens`]),
//! - memoryless and memory-assisted observer models with a Landauer heat
//!   ledger ([`thermo`]).
//!
//! The analytic pipelines keep rational arithmetic alive end to end, so
//! statements like "the erased information is exactly 3/2 bits" are checked
//! as exact rational equalities, not float comparisons. Simulations are
//! seeded and reproduce bit-for-bit.
//!
//! ```
//! use emachine::quantum::build_qubit_machine;
//!
//! let machine = build_qubit_machine();
//! let stationary = machine.stationary_distribution().unwrap();
//! let erased = machine.erased_information(&stationary).unwrap();
//! assert_eq!(erased, 1.5); // exactly 3/2 bits
//! ```

pub mod entropy;
pub mod error;
pub mod exact;
pub mod quantum;
pub mod spekkens;
pub mod thermo;
pub mod transducer;

pub use error::{Error, Result};
pub use exact::Prob;
pub use rand_chacha::ChaCha12Rng;

/// The crate's reproducible RNG. Every stochastic operation takes one of
/// these explicitly; there is no hidden global generator.
pub fn seeded_rng(seed: u64) -> ChaCha12Rng {
    use rand::SeedableRng;
    ChaCha12Rng::seed_from_u64(seed)
}

// The book chapters double as doc-tests so their code stays in sync with the
// library. `cargo test --doc` compiles and runs every fenced Rust block.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/entropy.md")]
    mod entropy {}
    #[doc = include_str!("../../../book/src/transducers.md")]
    mod transducers {}
    #[doc = include_str!("../../../book/src/erased-information.md")]
    mod erased_information {}
    #[doc = include_str!("../../../book/src/spekkens.md")]
    mod spekkens {}
    #[doc = include_str!("../../../book/src/thermodynamics.md")]
    mod thermodynamics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
