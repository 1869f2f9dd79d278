//! Machine checks of the approximation analysis: dual witnesses and bound
//! verdicts against exact optima.

mod checks;
mod witness;

pub use checks::{
    check_instance, check_matching_instance, fuzz_matching_instance, fuzz_unit_instance, matching_sides, run_suite,
    CheckOutcome, RatioRecord, Suite, Verdict, FUZZ_POTENTIAL_CAP,
};
pub use witness::{witness_y, WitnessY};
