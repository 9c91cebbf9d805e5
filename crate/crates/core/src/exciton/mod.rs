//! Charge-transfer excitons: pair operators, y-exciton modes and coherent states.

pub mod injection;
pub mod modes;
pub mod ops;

pub use modes::{ModeSpec, PolarizationPhases, ZetaRule};
pub use ops::ExcitonIndex;
