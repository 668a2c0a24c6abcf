//! Decision ladder for the L-stability dichotomy.

use crate::classify::{FormalLinearizability, SingularityClass};
use crate::error::{Error, Result};
use crate::exactalg::{AlgebraicRatio, Domain, KElement, RatioClass, SparsePoly};
use crate::holonomy::{
    analyze_group, closed_orbit_criterion, ClosedOrbitRefinement, FormalGerm, GroupAnalysis, GroupClass, Multiplier,
    OrbitEvidence, Witness,
};
use crate::reduction::{camacho_sad_index, ReductionTree};

use super::darboux::SeparatrixSet;
use super::logarithmic::{first_integral_search, recognize_logarithmic, FirstIntegral, LogarithmicModel, LogarithmicOutcome};

/// Linear holonomy of one divisor component.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentHolonomy {
    pub component: usize,
    /// Points contributing a generator, in generator order.
    pub points: Vec<usize>,
    pub indices: Vec<AlgebraicRatio>,
    /// Saddle-nodes on the component, which carry no Camacho-Sad generator.
    pub skipped: Vec<usize>,
    pub analysis: GroupAnalysis,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct HolonomyEvidence {
    pub components: Vec<ComponentHolonomy>,
    pub orbit: OrbitEvidence,
}

/// Generators `exp(2 pi i CS(p, E))` for each component `E`, one per
/// non-degenerate point on it.
pub fn divisor_holonomy(tree: &ReductionTree, jet_order: u32, word_budget: usize) -> Result<Vec<ComponentHolonomy>> {
    let mut out = Vec::new();
    for comp in &tree.components {
        let mut points = Vec::new();
        let mut indices = Vec::new();
        let mut skipped = Vec::new();
        let mut gens = Vec::new();
        for &pid in &comp.points {
            let pt = tree.point(pid).ok_or(Error::NotIncident)?;
            if matches!(pt.class, SingularityClass::SaddleNode { .. }) {
                skipped.push(pid);
                continue;
            }
            let idx = camacho_sad_index(tree, pid, comp.id)?;
            let m = match idx.value() {
                Some(v) => Multiplier::exp_2pi_i(v, &tree.field),
                None => Multiplier::Exp2PiI(idx.clone()),
            };
            gens.push(FormalGerm::linear(m, jet_order.max(1) as usize)?);
            points.push(pid);
            indices.push(idx);
        }
        out.push(ComponentHolonomy {
            component: comp.id,
            points,
            indices,
            skipped,
            analysis: analyze_group(&gens, jet_order.max(1) as usize, word_budget),
        });
    }
    Ok(out)
}

/// A checkable reason why the foliation is not L-stable.
#[derive(Debug, Clone, PartialEq)]
pub enum LStabilityWitness {
    SaddleNode { point: usize, p: u32, lambda: Option<KElement> },
    /// Non-real eigenvalue ratio: the holonomy of a separatrix is hyperbolic.
    HyperbolicRatio { point: usize, ratio: AlgebraicRatio },
    ResonantObstruction { point: usize, ratio: AlgebraicRatio, obstruction_order: u32 },
    HolonomyElement { component: usize, witness: Witness },
    /// Closed orbit asserted for a circle-type holonomy while the residues
    /// are irrational.
    ClosedOrbitContradiction { component: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    FirstIntegralCandidate {
        /// `None` when the integral exists but was not constructed.
        integral: Option<SparsePoly>,
        certification_order: u32,
        notes: Vec<String>,
    },
    RealLogarithmic {
        model: LogarithmicModel,
        caveats: Vec<String>,
    },
    NotLStable {
        witness: LStabilityWitness,
    },
    Indeterminate {
        reasons: Vec<String>,
    },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::FirstIntegralCandidate { .. } => "FirstIntegralCandidate",
            Verdict::RealLogarithmic { .. } => "RealLogarithmic",
            Verdict::NotLStable { .. } => "NotLStable",
            Verdict::Indeterminate { .. } => "Indeterminate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LogarithmicStatus {
    Model(LogarithmicModel),
    NoKernel,
    AmbiguousKernel { dim: usize },
    NoSeparatrices,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityVerdict {
    pub verdict: Verdict,
    pub logarithmic: LogarithmicStatus,
    pub first_integral: Option<FirstIntegral>,
    pub holonomy: Vec<ComponentHolonomy>,
    pub orbit: OrbitEvidence,
    pub refinements: Vec<ClosedOrbitRefinement>,
}

pub const SIEGEL_CAVEAT: &str = "conditional on analytic linearizability at Siegel irrational points";

fn logarithmic_status(tree: &ReductionTree, seps: &SeparatrixSet) -> Result<LogarithmicStatus> {
    if seps.curves.is_empty() {
        return Ok(LogarithmicStatus::NoSeparatrices);
    }
    let fs: Vec<SparsePoly> = seps.curves.iter().map(|c| c.f.clone()).collect();
    match recognize_logarithmic(&tree.root, &fs) {
        Ok(LogarithmicOutcome::Model(m)) => Ok(LogarithmicStatus::Model(m)),
        Ok(LogarithmicOutcome::NoKernel) => Ok(LogarithmicStatus::NoKernel),
        Err(Error::AmbiguousKernel { dim }) => Ok(LogarithmicStatus::AmbiguousKernel { dim }),
        Err(e) => Err(e),
    }
}

/// The first obstruction found among the reduced points.
fn point_obstruction(tree: &ReductionTree) -> Option<LStabilityWitness> {
    let saddle_node = tree.points.iter().find_map(|pt| match &pt.class {
        SingularityClass::SaddleNode { p, lambda } => Some(LStabilityWitness::SaddleNode {
            point: pt.id,
            p: *p,
            lambda: lambda.clone(),
        }),
        _ => None,
    });
    let hyperbolic = || {
        tree.points.iter().find_map(|pt| match &pt.class {
            SingularityClass::NonDegenerate {
                ratio,
                resonance: RatioClass::NonReal,
                ..
            } => Some(LStabilityWitness::HyperbolicRatio {
                point: pt.id,
                ratio: ratio.clone(),
            }),
            _ => None,
        })
    };
    let resonant = || {
        tree.points.iter().find_map(|pt| match &pt.class {
            SingularityClass::NonDegenerate {
                ratio,
                formal_linearizable: FormalLinearizability::No { obstruction_order },
                ..
            } => Some(LStabilityWitness::ResonantObstruction {
                point: pt.id,
                ratio: ratio.clone(),
                obstruction_order: *obstruction_order,
            }),
            _ => None,
        })
    };
    saddle_node.or_else(hyperbolic).or_else(resonant)
}

/// Runs the decision ladder on a resolved germ with its separatrices.
pub fn decide_l_stability(
    tree: &ReductionTree,
    seps: &SeparatrixSet,
    evidence: &HolonomyEvidence,
    jet_order: u32,
) -> Result<StabilityVerdict> {
    let logarithmic = logarithmic_status(tree, seps)?;
    let mut out = StabilityVerdict {
        verdict: Verdict::Indeterminate { reasons: vec![] },
        logarithmic,
        first_integral: None,
        holonomy: evidence.components.clone(),
        orbit: evidence.orbit,
        refinements: vec![],
    };
    if let Some(witness) = point_obstruction(tree) {
        out.verdict = Verdict::NotLStable { witness };
        return Ok(out);
    }
    if let Some(h) = evidence
        .components
        .iter()
        .find(|h| matches!(h.analysis.class, GroupClass::NotLStable { .. }))
    {
        let GroupClass::NotLStable { witness } = &h.analysis.class else {
            unreachable!()
        };
        out.verdict = Verdict::NotLStable {
            witness: LStabilityWitness::HolonomyElement {
                component: h.component,
                witness: witness.clone(),
            },
        };
        return Ok(out);
    }

    let nondegenerate: Vec<_> = tree
        .points
        .iter()
        .filter_map(|pt| match &pt.class {
            SingularityClass::NonDegenerate {
                resonance,
                formal_linearizable,
                ..
            } => Some((pt.id, *resonance, formal_linearizable.clone())),
            _ => None,
        })
        .collect();
    let certification_order = nondegenerate
        .iter()
        .filter_map(|(_, _, l)| match l {
            FormalLinearizability::Yes { certified_order } | FormalLinearizability::Undetermined { certified_order } => {
                Some(*certified_order)
            }
            FormalLinearizability::No { .. } => None,
        })
        .min()
        .unwrap_or(jet_order);
    let model = match &out.logarithmic {
        LogarithmicStatus::Model(m) => Some(m.clone()),
        _ => None,
    };
    let all_rational = nondegenerate
        .iter()
        .all(|(_, r, l)| *r == RatioClass::NegativeRational && matches!(l, FormalLinearizability::Yes { .. }));
    let irrational: Vec<(usize, RatioClass)> = nondegenerate
        .iter()
        .filter(|(_, r, _)| matches!(r, RatioClass::RealIrrational(_)))
        .map(|(id, r, _)| (*id, *r))
        .collect();
    let mut reasons = Vec::new();

    out.verdict = if !nondegenerate.is_empty() && all_rational {
        let mut notes = vec![format!("linearizability certified through order {certification_order}")];
        let integral = match &model {
            Some(m) => {
                let fi = first_integral_search(&tree.root, m);
                let f = match &fi {
                    FirstIntegral::Found { f, .. } => Some(f.clone()),
                    FirstIntegral::NotApplicable { note } => {
                        notes.push(note.clone());
                        None
                    }
                };
                out.first_integral = Some(fi);
                f
            }
            None => {
                notes.push("first integral exists, not constructed".into());
                None
            }
        };
        Verdict::FirstIntegralCandidate {
            integral,
            certification_order,
            notes,
        }
    } else if !irrational.is_empty() {
        match &model {
            Some(m) if m.real => Verdict::RealLogarithmic {
                model: m.clone(),
                caveats: irrational
                    .iter()
                    .filter(|(_, r)| *r == RatioClass::RealIrrational(Domain::Siegel))
                    .map(|(id, _)| format!("P{id}: {SIEGEL_CAVEAT}"))
                    .collect(),
            },
            Some(_) => {
                reasons.push("logarithmic residues are not all real".into());
                Verdict::Indeterminate { reasons: vec![] }
            }
            None => Verdict::Indeterminate { reasons: vec![] },
        }
    } else {
        Verdict::Indeterminate { reasons: vec![] }
    };

    if let Verdict::Indeterminate { reasons: r } = &mut out.verdict {
        if nondegenerate.is_empty() {
            reasons.push("no non-degenerate reduced point".into());
        }
        for (id, _, l) in &nondegenerate {
            if let FormalLinearizability::Undetermined { .. } = l {
                if model.is_none() {
                    reasons.push(format!("P{id}: linearizability undetermined"));
                }
            }
        }
        match &out.logarithmic {
            LogarithmicStatus::NoKernel => reasons.push("no logarithmic model on the found separatrices".into()),
            LogarithmicStatus::AmbiguousKernel { dim } => {
                reasons.push(format!("logarithmic kernel has dimension {dim}"))
            }
            LogarithmicStatus::NoSeparatrices => reasons.push("no algebraic separatrix found".into()),
            LogarithmicStatus::Model(_) => {}
        }
        if !seps.complete {
            reasons.push(format!(
                "separatrix search incomplete at degree bound {}",
                seps.degree_bound
            ));
        }
        reasons.extend(seps.notes.iter().cloned());
        *r = reasons;
    }

    if evidence.orbit != OrbitEvidence::None {
        refine_with_orbit(&mut out, certification_order);
    }
    Ok(out)
}

/// A closed or non-recurrent leaf forces rational residues under
/// L-stability.
fn refine_with_orbit(out: &mut StabilityVerdict, certification_order: u32) {
    out.refinements = out
        .holonomy
        .iter()
        .map(|h| closed_orbit_criterion(&h.analysis.class, out.orbit))
        .collect();
    let contradiction = out
        .holonomy
        .iter()
        .zip(&out.refinements)
        .find(|(_, r)| r.contradiction)
        .map(|(h, _)| h.component);
    match &out.verdict {
        Verdict::RealLogarithmic { model, .. } if !model.rational => {
            if let Some(component) = contradiction {
                out.verdict = Verdict::NotLStable {
                    witness: LStabilityWitness::ClosedOrbitContradiction { component },
                };
            }
        }
        Verdict::Indeterminate { reasons } => {
            let mut notes = vec!["first integral exists, not constructed".to_string()];
            notes.push(format!("orbit evidence {:?} forces rational residues", out.orbit));
            notes.extend(reasons.iter().cloned());
            out.verdict = Verdict::FirstIntegralCandidate {
                integral: None,
                certification_order,
                notes,
            };
        }
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Field, OneFormGerm};
    use crate::reduction::{reduce_singularities, ReductionOptions};
    use crate::stability::separatrices_from_tree;

    fn run(w: &OneFormGerm, field: &Field, orbit: OrbitEvidence, force: bool) -> StabilityVerdict {
        let opts = ReductionOptions {
            force_initial_blowup: force,
            ..ReductionOptions::default()
        };
        let tree = reduce_singularities(w, field, &opts).unwrap();
        let seps = separatrices_from_tree(&tree, 6);
        let components = divisor_holonomy(&tree, 20, 200).unwrap();
        decide_l_stability(&tree, &seps, &HolonomyEvidence { components, orbit }, 20).unwrap()
    }

    /// `x dy - lambda y dx`.
    fn linear(lambda: KElement) -> OneFormGerm {
        OneFormGerm::new(SparsePoly::monomial(0, 1, -lambda), SparsePoly::x()).unwrap()
    }

    #[test]
    fn hyperbolic_ratio() {
        let v = run(&linear(KElement::i()), &Field::gaussian(), OrbitEvidence::None, false);
        assert!(matches!(
            v.verdict,
            Verdict::NotLStable {
                witness: LStabilityWitness::HyperbolicRatio { point: 0, .. }
            }
        ));
    }

    #[test]
    fn resonant_saddle_has_monomial_integral() {
        let v = run(&linear(KElement::from_frac(-2, 3)), &Field::gaussian(), OrbitEvidence::None, false);
        let Verdict::FirstIntegralCandidate {
            integral: Some(f),
            certification_order,
            ..
        } = &v.verdict
        else {
            panic!("{:?}", v.verdict)
        };
        assert_eq!(*f, SparsePoly::from_ints(&[(2, 3, 1)]));
        assert_eq!(*certification_order, 20);
    }

    #[test]
    fn siegel_irrational_is_real_logarithmic() {
        let f2 = Field::new(2).unwrap();
        let v = run(&linear(-f2.sqrt_d()), &f2, OrbitEvidence::None, false);
        let Verdict::RealLogarithmic { model, caveats } = &v.verdict else {
            panic!("{:?}", v.verdict)
        };
        assert_eq!(model.residues, vec![KElement::one(), f2.sqrt_d().inv()]);
        assert_eq!(caveats.len(), 1);
        assert!(caveats[0].contains(SIEGEL_CAVEAT));
    }

    #[test]
    fn saddle_node_is_fatal() {
        let w = OneFormGerm::new(SparsePoly::from_ints(&[(0, 2, 1)]), SparsePoly::from_ints(&[(1, 0, -1)])).unwrap();
        let v = run(&w, &Field::gaussian(), OrbitEvidence::None, false);
        assert!(matches!(
            v.verdict,
            Verdict::NotLStable {
                witness: LStabilityWitness::SaddleNode { p: 1, .. }
            }
        ));
    }

    #[test]
    fn cusp_first_integral() {
        let w = OneFormGerm::new(SparsePoly::from_ints(&[(2, 0, -3)]), SparsePoly::from_ints(&[(0, 1, 2)])).unwrap();
        let v = run(&w, &Field::gaussian(), OrbitEvidence::None, false);
        let Verdict::FirstIntegralCandidate { integral: Some(f), .. } = &v.verdict else {
            panic!("{:?}", v.verdict)
        };
        assert_eq!(*f, SparsePoly::from_ints(&[(0, 2, 1), (3, 0, -1)]));
        assert!(OneFormGerm::differential(f).wedge(&w).is_zero());
        assert_eq!(v.holonomy.len(), 3);
        assert!(v
            .holonomy
            .iter()
            .all(|h| matches!(h.analysis.class, GroupClass::FiniteCyclic { .. })));
    }

    #[test]
    fn closed_orbit_contradicts_irrational_residues() {
        let f2 = Field::new(2).unwrap();
        let w = linear(-f2.sqrt_d());
        let plain = run(&w, &f2, OrbitEvidence::None, true);
        assert_eq!(plain.verdict.label(), "RealLogarithmic");
        assert_eq!(plain.holonomy[0].analysis.class, GroupClass::CircleType);
        let v = run(&w, &f2, OrbitEvidence::ClosedOffOrigin, true);
        assert!(matches!(
            v.verdict,
            Verdict::NotLStable {
                witness: LStabilityWitness::ClosedOrbitContradiction { component: 1 }
            }
        ));
        assert!(v.refinements[0].contradiction);
    }

    #[test]
    fn orbit_evidence_keeps_first_integral() {
        let w = linear(KElement::from_frac(-2, 3));
        let v = run(&w, &Field::gaussian(), OrbitEvidence::NonRecurrent, true);
        assert!(matches!(v.verdict, Verdict::FirstIntegralCandidate { integral: Some(_), .. }));
    }
}
