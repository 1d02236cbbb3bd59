//! Weil monoids: semidirect products cN x S, labeling / associative / Lie
//! symbols, the graded ideal n_D and cocycle witnesses.

pub mod group;
pub mod ideal;
mod monoid;
mod witness;

pub use group::FiniteGroup;
pub use ideal::{graded_component_basis, ideal_generators, GradedIdealComponent, NcPoly, Word};
pub use monoid::{star, symbol_tables, GaloisBacking, Gamma, Labeling, MonoidElement, SymbolTables, WeilMonoid};
pub use witness::{hochschild_witness, least_words, lie_witness, witness_is_sound, Witness};
