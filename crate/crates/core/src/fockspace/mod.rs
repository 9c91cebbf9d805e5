//! Exact fermionic Fock space of a chain with two modes per site.

pub mod basis;
pub mod dense;
pub mod op;
pub mod sector;
pub mod state;

pub use basis::{mode_index, FockBasisState, Ladder, QutritLabel, SiteGlyph, SiteOccupation, Species, MAX_SITES};
pub use op::{all_basis_states, Chain, LinearOp};
pub use sector::sector_decompose;
pub use state::{ChainState, StateFixture, PRUNE};
