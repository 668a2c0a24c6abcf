//! Exact arithmetic over `Q(i, sqrt d)`, polynomials and one-forms.

pub mod field;
pub mod form;
pub mod gcd;
pub mod linalg;
pub mod poly;
pub mod ratio;
pub mod upoly;

pub use field::{kelem_arith, parse_rational, Field, KElement, KOp};
pub use form::{OneFormGerm, Saturation};
pub use gcd::poly_gcd;
pub use poly::{Monomial, SparsePoly};
pub use ratio::{ratio_classify, ratio_from_matrix, AlgebraicRatio, Domain, RatioClass, RootSelector};
pub use upoly::{univariate_roots_in_k, RootReport, UniPoly};
