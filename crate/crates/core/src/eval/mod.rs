//! Operational semantics and observational testing.

pub mod machine;
pub mod observe;
pub mod traces;

pub use machine::{converges, eval, Configuration, EvalError, Outcome};
pub use observe::{
    battery, library, observational_test, observe_equal, observers, sample_values, shipped_battery,
    BatteryBounds, ContextTemplate, ObsError, Verdict,
};
