//! From a Cartesian oscillator model to an action-angle Hamiltonian expanded
//! around reference actions.

mod action;
mod model;

pub use action::{
    counterterm_placeholders, prepare, substitute_frequency_series, to_action_angle, translate_and_expand,
    ActionAngleHamiltonian, PreparedHamiltonian,
};
pub use model::{parse_scalar, required_expansion_order, CartesianTerm, OscillatorModel};
