//! Cross-module invariants on randomly generated machines, plus the
//! statistics-equivalence check between the density-matrix simulator and
//! the four-state machine.

mod common;

use emachine::quantum::{build_qubit_machine, run_quantum_protocol};
use emachine::transducer::{machine_from_json, machine_to_json, max_word_frequency_gap};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// The entropy-difference identity is an algebraic consequence of
    /// unifilarity, so it holds on every compliant machine.
    #[test]
    fn identity_residual_is_numerical_noise(seed in 0u64..10_000) {
        let machine = common::random_compliant_machine(seed);
        let stationary = machine.stationary_distribution().unwrap();
        let report = machine.verify_unifilar_identity(&stationary).unwrap();
        prop_assert!(report.residual <= 1e-10, "residual {}", report.residual);
    }

    /// Erased information is a conditional entropy, hence non-negative,
    /// under both the stationary and the uniform prior.
    #[test]
    fn erased_information_is_non_negative(seed in 0u64..10_000) {
        let machine = common::random_compliant_machine(seed);
        let stationary = machine.stationary_distribution().unwrap();
        prop_assert!(machine.erased_information(&stationary).unwrap() >= 0.0);
        let uniform = common::uniform_prior(&machine);
        prop_assert!(machine.erased_information(&uniform).unwrap() >= 0.0);
    }

    /// Exact and floating entropies agree whenever the exact path applies.
    #[test]
    fn exact_and_float_erased_information_agree(seed in 0u64..10_000) {
        let machine = common::random_compliant_machine(seed);
        let stationary = machine.stationary_distribution().unwrap();
        let float = machine.erased_information(&stationary).unwrap();
        if let Some(exact) = machine.erased_information_exact(&stationary).unwrap() {
            use num_traits::ToPrimitive;
            let exact = exact.to_f64().unwrap();
            prop_assert!((float - exact).abs() <= 1e-10, "{float} vs {exact}");
        }
    }

    /// The JSON definition format round-trips machines losslessly,
    /// exact probabilities included.
    #[test]
    fn machine_json_round_trip(seed in 0u64..10_000) {
        let machine = common::random_compliant_machine(seed);
        let json = machine_to_json(&machine).unwrap();
        let back = machine_from_json(&json).unwrap();
        prop_assert_eq!(machine.states(), back.states());
        prop_assert_eq!(machine.transitions(), back.transitions());
        prop_assert_eq!(
            machine.input_policy().unwrap(),
            back.input_policy().unwrap()
        );
    }
}

/// The (x, y) stream of the selective density-matrix simulator is
/// distributionally indistinguishable from the machine's: all word
/// frequencies up to length 3 agree within ±0.005 at 10⁶ steps.
#[test]
fn quantum_simulator_matches_the_machine_statistics() {
    let (quantum_trajectory, audit) = run_quantum_protocol(1_000_000, 41).unwrap();
    assert!(audit.max_abs_delta_s <= 1e-12);
    let machine = build_qubit_machine();
    let machine_trajectory = machine.simulate_stationary(1_000_000, 42).unwrap();
    let gap = max_word_frequency_gap(&quantum_trajectory, &machine_trajectory, 3);
    assert!(gap <= 0.005, "max word-frequency gap {gap}");
}
