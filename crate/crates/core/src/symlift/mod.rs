mod action;
mod fixed;
mod lift;
pub mod snf;
mod strata;

pub use action::TorusAction;
pub use fixed::{fixed_set, fixed_set_of, Component, FixedSet};
pub use lift::{group_action_table, induced_action, push_action, stabilizer, ActionTable, StabilizerGroup};
pub use strata::{strata_census, Stratum};
