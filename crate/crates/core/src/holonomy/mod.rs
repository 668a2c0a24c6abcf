//! Germs of diffeomorphisms of `(C, 0)`, the groups they generate, and
//! pseudo-orbits.

mod class;
mod germ;
mod group;
mod orbit;

pub use class::{classify_germ, is_periodic, GermClass};
pub use germ::{commutator, germ_compose, FormalGerm, Jet, Multiplier, MultiplierRecord, NUMERIC_TOL};
pub use group::{analyze_group, classify_group, GroupAnalysis, GroupClass, Letter, Witness, WitnessKind, Word};
pub use orbit::{
    closed_orbit_criterion, simulate_pseudo_orbit, ClosedOrbitRefinement, NumericGenerator, OrbitEvidence,
    OrbitOutcome, OrbitParams,
};
