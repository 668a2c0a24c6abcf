//! Separatrices, logarithmic models and the L-stability verdict.

mod darboux;
mod logarithmic;
mod verdict;

pub use darboux::{find_darboux_polynomials, separatrices_from_tree, Separatrix, SeparatrixSet};
pub use logarithmic::{
    first_integral_search, logarithmic_defect, recognize_logarithmic, FirstIntegral, LogarithmicModel,
    LogarithmicOutcome,
};
pub use verdict::{
    decide_l_stability, divisor_holonomy, ComponentHolonomy, HolonomyEvidence, LStabilityWitness, LogarithmicStatus,
    StabilityVerdict, Verdict, SIEGEL_CAVEAT,
};
