//! Local classification of singular points.

pub(crate) mod branch;
pub mod linearize;

use crate::error::{Error, Result};
use crate::exactalg::{ratio_classify, ratio_from_matrix, AlgebraicRatio, Domain, Field, KElement, OneFormGerm, RatioClass, SparsePoly, UniPoly};
use crate::holonomy::Multiplier;
use crate::reduction::ReductionTree;

use branch::{invariant_graph, restrict_to_graph, series_div, series_mul, swap_xy};
pub use linearize::{formal_first_integral, formal_linearize, linearization_defect, FormalFirstIntegral, Linearization};

/// Jacobian of the dual vector field at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearPart {
    pub m: [[KElement; 2]; 2],
    pub trace: KElement,
    pub det: KElement,
}

impl LinearPart {
    pub fn of(w: &OneFormGerm) -> Self {
        let (p, q) = w.vector_field();
        let m = [[p.coeff(1, 0), p.coeff(0, 1)], [q.coeff(1, 0), q.coeff(0, 1)]];
        let trace = &m[0][0] + &m[1][1];
        let det = &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
        LinearPart { m, trace, det }
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().flatten().all(KElement::is_zero)
    }

    /// A nonzero vector in the kernel of `J - mu I`, which must be singular.
    pub fn eigenvector(&self, mu: &KElement) -> (KElement, KElement) {
        let r0 = (&self.m[0][0] - mu, self.m[0][1].clone());
        let r1 = (self.m[1][0].clone(), &self.m[1][1] - mu);
        if !(r0.0.is_zero() && r0.1.is_zero()) {
            (-&r0.1, r0.0)
        } else if !(r1.0.is_zero() && r1.1.is_zero()) {
            (-&r1.1, r1.0)
        } else {
            (KElement::one(), KElement::zero())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FormalLinearizability {
    /// No obstruction through the certified order (analytic in the Poincare
    /// domain and for resonant saddles).
    Yes { certified_order: u32 },
    No { obstruction_order: u32 },
    /// Formally linearizable, analytic convergence not decided (Siegel
    /// irrational ratio).
    Undetermined { certified_order: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ReducibleReason {
    PositiveRationalRatio,
    JordanBlock,
    NilpotentLinearPart,
    ZeroLinearPart,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SingularityClass {
    Regular,
    NonDegenerate {
        ratio: AlgebraicRatio,
        domain: Domain,
        resonance: RatioClass,
        formal_linearizable: FormalLinearizability,
    },
    /// `y^(p+1) dx - [x(1 + lambda y^p) + ...] dy`; `lambda` is `None` when
    /// the jet does not determine it.
    SaddleNode { p: u32, lambda: Option<KElement> },
    Reducible(ReducibleReason),
    Dicritical,
}

impl SingularityClass {
    pub fn is_reduced(&self) -> bool {
        matches!(self, SingularityClass::NonDegenerate { .. } | SingularityClass::SaddleNode { .. })
    }

    pub fn label(&self) -> String {
        match self {
            SingularityClass::Regular => "regular".into(),
            SingularityClass::NonDegenerate { ratio, .. } => format!("non-degenerate {ratio}"),
            SingularityClass::SaddleNode { p, .. } => format!("saddle-node p={p}"),
            SingularityClass::Reducible(_) => "reducible".into(),
            SingularityClass::Dicritical => "dicritical".into(),
        }
    }
}

/// `x A_n + y B_n` for the lowest homogeneous part of degree `n`.
pub fn radial_defect(w: &OneFormGerm) -> SparsePoly {
    let n = w.order();
    &(&SparsePoly::x() * &w.a().homogeneous_part(n)) + &(&SparsePoly::y() * &w.b().homogeneous_part(n))
}

pub fn classify_singularity(w: &OneFormGerm, field: &Field, jet_order: u32) -> Result<SingularityClass> {
    if !w.is_singular_at_origin() {
        return Ok(SingularityClass::Regular);
    }
    if radial_defect(w).is_zero() {
        return Ok(SingularityClass::Dicritical);
    }
    let lin = LinearPart::of(w);
    if lin.is_zero() {
        return Ok(SingularityClass::Reducible(ReducibleReason::ZeroLinearPart));
    }
    if lin.det.is_zero() {
        if lin.trace.is_zero() {
            return Ok(SingularityClass::Reducible(ReducibleReason::NilpotentLinearPart));
        }
        let (p, lambda) = saddle_node_invariants(w, &lin, jet_order)?;
        return Ok(SingularityClass::SaddleNode { p, lambda });
    }
    let ratio = ratio_from_matrix(&lin.trace, &lin.det, field)?;
    let resonance = ratio_classify(&ratio);
    if resonance == RatioClass::PositiveRational {
        let four_det = &KElement::from_int(4) * &lin.det;
        let reason = if &lin.trace * &lin.trace == four_det {
            ReducibleReason::JordanBlock
        } else {
            ReducibleReason::PositiveRationalRatio
        };
        return Ok(SingularityClass::Reducible(reason));
    }
    let formal_linearizable = match resonance {
        RatioClass::NegativeRational => match formal_linearize(w, jet_order)? {
            Linearization::Linearizable { certified_order, .. } => FormalLinearizability::Yes { certified_order },
            Linearization::Obstructed { order } => FormalLinearizability::No {
                obstruction_order: order,
            },
        },
        RatioClass::RealIrrational(Domain::Siegel) => FormalLinearizability::Undetermined {
            certified_order: jet_order,
        },
        _ => FormalLinearizability::Yes {
            certified_order: jet_order,
        },
    };
    Ok(SingularityClass::NonDegenerate {
        domain: resonance.domain(),
        ratio,
        resonance,
        formal_linearizable,
    })
}

/// Moves the saddle-node to coordinates `(s, w)` where the linear part is
/// `diag(tau, 0)`; returns the transformed form.
pub(crate) fn saddle_node_frame(w: &OneFormGerm, lin: &LinearPart) -> OneFormGerm {
    let vs = lin.eigenvector(&lin.trace);
    let vw = lin.eigenvector(&KElement::zero());
    let m = [[vs.0, vw.0], [vs.1, vw.1]];
    w.linear_change(&m)
}

/// `p` and the formal invariant `lambda` of a saddle-node.
///
/// The formal center manifold `s = phi(w)` is computed through `jet_order`;
/// the restriction of the field to it has order `p + 1`, and `lambda` is the
/// Camacho-Sad index of that manifold, a residue that needs the jet through
/// order `2p + 1`.
fn saddle_node_invariants(w: &OneFormGerm, lin: &LinearPart, jet_order: u32) -> Result<(u32, Option<KElement>)> {
    let frame = saddle_node_frame(w, lin);
    let (p, q) = frame.vector_field();
    // Graph over the weak axis: exchange the variables.
    let a = swap_xy(&q);
    let b = swap_xy(&p);
    let n = jet_order;
    let phi = invariant_graph(&a, &b, n).expect("strong eigenvalue is nonzero");
    let beta = restrict_to_graph(&a, &phi, n);
    let Some(ord) = beta.coeffs().iter().position(|c| !c.is_zero()) else {
        return Err(Error::JetOrderInsufficient {
            jet_order: jet_order as usize,
            what: "restriction to the center manifold vanishes through the jet".into(),
        });
    };
    let pp = ord as u32 - 1;
    if 2 * pp + 1 > n {
        return Ok((pp, None));
    }
    let alpha = restrict_to_graph(&b.dy(), &phi, n).sub(&series_mul(&phi.derivative(), &restrict_to_graph(&a.dy(), &phi, n), n as usize));
    let beta_unit = UniPoly::new(beta.coeffs()[ord..].to_vec());
    let quotient = series_div(&alpha, &beta_unit, pp as usize);
    Ok((pp, Some(quotient.coeff(pp as usize))))
}

/// Linear holonomy `exp(2 pi i idx)` of a separatrix with Camacho-Sad index
/// `idx`.
pub fn holonomy_multiplier(index: &AlgebraicRatio) -> Multiplier {
    Multiplier::Exp2PiI(index.clone())
}

/// True iff the reduction contains no saddle-node.
pub fn is_generalized_curve(tree: &ReductionTree) -> bool {
    tree.points
        .iter()
        .all(|p| !matches!(p.class, SingularityClass::SaddleNode { .. }))
}
