pub mod error;
pub mod fockspace;
pub mod qutrit;
pub mod exciton;
pub mod thermo;
pub mod moment;
pub mod spin_ladder;
pub mod cli;
