mod chartable;
mod cocycle;
mod decompose;
mod group;
mod projective;

pub use chartable::{character_table, snap_eisenstein, CharacterTable, ConjugacyClass};
pub use cocycle::{extension_rep, matches_groupoid_cocycle, scalar_cocycle, trivialization_search, ExtensionRep, DEFAULT_MAX_ORDER, ScalarCocycle, Trivialization};
pub use decompose::{decompose, isotypic_projectors, superselect, Block, Superselection};
pub use group::{FiniteGroup, GroupSignature};
pub use projective::{group_closure, matrix_group_closure, projective_rep, projective_rep_for, FiniteMatrixGroup, DEFAULT_CAP, ProjectiveRep};
