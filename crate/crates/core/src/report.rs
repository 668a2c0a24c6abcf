//! Serializable analysis reports and their JSON, DOT and text renderings.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::classify::{FormalLinearizability, SingularityClass};
use crate::exactalg::{AlgebraicRatio, Domain, KElement, OneFormGerm, RatioClass, RootSelector, SparsePoly};
use crate::holonomy::{ClosedOrbitRefinement, GroupAnalysis, OrbitEvidence, Witness};
use crate::reduction::{camacho_sad_index, render_dot, Chart, DivisorComponent, Incidence, ReductionTree};
use crate::request::{AnalysisOptions, GermKind, OutputFormat};
use crate::stability::{
    FirstIntegral, LStabilityWitness, LogarithmicStatus, SeparatrixSet, StabilityVerdict, Verdict,
};

pub type Coeff = [String; 4];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub ex: u32,
    pub ey: u32,
    pub c: Coeff,
}

pub fn poly_terms(p: &SparsePoly) -> Vec<Term> {
    p.graded_terms()
        .into_iter()
        .map(|((ex, ey), c)| Term { ex, ey, c: c.to_strings() })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormDto {
    #[serde(rename = "A")]
    pub a: Vec<Term>,
    #[serde(rename = "B")]
    pub b: Vec<Term>,
    pub text: String,
}

impl FormDto {
    fn new(w: &OneFormGerm) -> Self {
        FormDto {
            a: poly_terms(w.a()),
            b: poly_terms(w.b()),
            text: w.to_string(),
        }
    }
}

/// A root of `a r^2 + b r + c`; `root` is set when it lies in the field,
/// `branch` selects the sign of the principal square root otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioDto {
    pub a: Coeff,
    pub b: Coeff,
    pub c: Coeff,
    pub root: Option<Coeff>,
    pub branch: Option<bool>,
    pub text: String,
}

impl RatioDto {
    pub fn new(r: &AlgebraicRatio) -> Self {
        let (root, branch) = match (&r.selector, r.value()) {
            (_, Some(v)) => (Some(v.to_strings()), None),
            (RootSelector::Branch(s), None) => (None, Some(*s)),
            _ => (None, None),
        };
        RatioDto {
            a: r.a.to_strings(),
            b: r.b.to_strings(),
            c: r.c.to_strings(),
            root,
            branch,
            text: r.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartStepDto {
    pub chart: Chart,
    pub shift: Coeff,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LinearizabilityDto {
    Yes { certified_order: u32 },
    No { obstruction_order: u32 },
    Undetermined { certified_order: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassDto {
    Regular,
    NonDegenerate {
        ratio: RatioDto,
        domain: Domain,
        resonance: RatioClass,
        linearizability: LinearizabilityDto,
    },
    SaddleNode {
        p: u32,
        lambda: Option<Coeff>,
    },
    Reducible {
        reason: crate::classify::ReducibleReason,
    },
    Dicritical,
}

impl ClassDto {
    fn new(c: &SingularityClass) -> Self {
        match c {
            SingularityClass::Regular => ClassDto::Regular,
            SingularityClass::NonDegenerate {
                ratio,
                domain,
                resonance,
                formal_linearizable,
            } => ClassDto::NonDegenerate {
                ratio: RatioDto::new(ratio),
                domain: *domain,
                resonance: *resonance,
                linearizability: match formal_linearizable {
                    FormalLinearizability::Yes { certified_order } => LinearizabilityDto::Yes {
                        certified_order: *certified_order,
                    },
                    FormalLinearizability::No { obstruction_order } => LinearizabilityDto::No {
                        obstruction_order: *obstruction_order,
                    },
                    FormalLinearizability::Undetermined { certified_order } => LinearizabilityDto::Undetermined {
                        certified_order: *certified_order,
                    },
                },
            },
            SingularityClass::SaddleNode { p, lambda } => ClassDto::SaddleNode {
                p: *p,
                lambda: lambda.as_ref().map(KElement::to_strings),
            },
            SingularityClass::Reducible(reason) => ClassDto::Reducible { reason: *reason },
            SingularityClass::Dicritical => ClassDto::Dicritical,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexDto {
    pub component: usize,
    pub index: RatioDto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDto {
    pub id: usize,
    pub path: Vec<ChartStepDto>,
    pub germ: FormDto,
    pub class: ClassDto,
    pub label: String,
    pub incident: Vec<Incidence>,
    pub camacho_sad: Vec<IndexDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupDto {
    pub step: usize,
    pub center: Vec<ChartStepDto>,
    pub order: u32,
    pub component: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDto {
    pub f: Vec<Term>,
    pub cofactor: Vec<Term>,
    pub points: Vec<usize>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatricesDto {
    pub curves: Vec<CurveDto>,
    pub complete: bool,
    pub degree_bound: u32,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LogarithmicDto {
    Model { residues: Vec<Coeff>, real: bool, rational: bool, text: Vec<String> },
    NoKernel,
    AmbiguousKernel { dim: usize },
    NoSeparatrices,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FirstIntegralDto {
    Found { f: Vec<Term>, exponents: Vec<u32>, text: String },
    NotApplicable { note: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolonomyDto {
    pub component: usize,
    pub points: Vec<usize>,
    pub indices: Vec<RatioDto>,
    pub skipped: Vec<usize>,
    pub analysis: GroupAnalysis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessDto {
    SaddleNode { point: usize, p: u32, lambda: Option<Coeff> },
    HyperbolicRatio { point: usize, ratio: RatioDto },
    ResonantObstruction { point: usize, ratio: RatioDto, obstruction_order: u32 },
    HolonomyElement { component: usize, witness: Witness },
    ClosedOrbitContradiction { component: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum VerdictDto {
    FirstIntegralCandidate {
        integral: Option<Vec<Term>>,
        integral_text: Option<String>,
        certification_order: u32,
        notes: Vec<String>,
    },
    RealLogarithmic {
        residues: Vec<Coeff>,
        branches: Vec<Vec<Term>>,
        caveats: Vec<String>,
    },
    NotLStable {
        witness: WitnessDto,
    },
    Indeterminate {
        reasons: Vec<String>,
    },
}

impl VerdictDto {
    pub fn label(&self) -> &'static str {
        match self {
            VerdictDto::FirstIntegralCandidate { .. } => "FirstIntegralCandidate",
            VerdictDto::RealLogarithmic { .. } => "RealLogarithmic",
            VerdictDto::NotLStable { .. } => "NotLStable",
            VerdictDto::Indeterminate { .. } => "Indeterminate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub kind: GermKind,
    #[serde(rename = "A")]
    pub a: Vec<Term>,
    #[serde(rename = "B")]
    pub b: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationDto {
    /// `gcd(A, B)` divided out of the input.
    pub removed: Vec<Term>,
    pub form: FormDto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub field: u64,
    pub input: InputEcho,
    pub options: AnalysisOptions,
    pub saturation: SaturationDto,
    pub blowup_count: usize,
    pub blowups: Vec<BlowupDto>,
    pub divisor: Vec<DivisorComponent>,
    pub intersection_matrix: Vec<Vec<i64>>,
    pub points: Vec<PointDto>,
    pub generalized_curve: bool,
    pub separatrices: SeparatricesDto,
    pub logarithmic: LogarithmicDto,
    pub first_integral: Option<FirstIntegralDto>,
    pub holonomy: Vec<HolonomyDto>,
    pub orbit_evidence: OrbitEvidence,
    pub refinements: Vec<ClosedOrbitRefinement>,
    pub verdict: VerdictDto,
}

fn chart_path(path: &[crate::reduction::ChartStep]) -> Vec<ChartStepDto> {
    path.iter()
        .map(|s| ChartStepDto {
            chart: s.chart,
            shift: s.shift.to_strings(),
        })
        .collect()
}

fn points(tree: &ReductionTree) -> Vec<PointDto> {
    tree.points
        .iter()
        .map(|p| PointDto {
            id: p.id,
            path: chart_path(&p.path),
            germ: FormDto::new(&p.germ),
            class: ClassDto::new(&p.class),
            label: p.class.label(),
            incident: p.incident.clone(),
            camacho_sad: p
                .incident
                .iter()
                .filter_map(|i| {
                    camacho_sad_index(tree, p.id, i.component).ok().map(|r| IndexDto {
                        component: i.component,
                        index: RatioDto::new(&r),
                    })
                })
                .collect(),
        })
        .collect()
}

fn witness(w: &LStabilityWitness) -> WitnessDto {
    match w {
        LStabilityWitness::SaddleNode { point, p, lambda } => WitnessDto::SaddleNode {
            point: *point,
            p: *p,
            lambda: lambda.as_ref().map(KElement::to_strings),
        },
        LStabilityWitness::HyperbolicRatio { point, ratio } => WitnessDto::HyperbolicRatio {
            point: *point,
            ratio: RatioDto::new(ratio),
        },
        LStabilityWitness::ResonantObstruction {
            point,
            ratio,
            obstruction_order,
        } => WitnessDto::ResonantObstruction {
            point: *point,
            ratio: RatioDto::new(ratio),
            obstruction_order: *obstruction_order,
        },
        LStabilityWitness::HolonomyElement { component, witness } => WitnessDto::HolonomyElement {
            component: *component,
            witness: witness.clone(),
        },
        LStabilityWitness::ClosedOrbitContradiction { component } => {
            WitnessDto::ClosedOrbitContradiction { component: *component }
        }
    }
}

fn verdict(v: &Verdict) -> VerdictDto {
    match v {
        Verdict::FirstIntegralCandidate {
            integral,
            certification_order,
            notes,
        } => VerdictDto::FirstIntegralCandidate {
            integral: integral.as_ref().map(poly_terms),
            integral_text: integral.as_ref().map(SparsePoly::to_string),
            certification_order: *certification_order,
            notes: notes.clone(),
        },
        Verdict::RealLogarithmic { model, caveats } => VerdictDto::RealLogarithmic {
            residues: model.residues.iter().map(KElement::to_strings).collect(),
            branches: model.branches.iter().map(poly_terms).collect(),
            caveats: caveats.clone(),
        },
        Verdict::NotLStable { witness: w } => VerdictDto::NotLStable { witness: witness(w) },
        Verdict::Indeterminate { reasons } => VerdictDto::Indeterminate {
            reasons: reasons.clone(),
        },
    }
}

/// The exact data a completed analysis produced.
pub struct ReportInput<'a> {
    pub kind: GermKind,
    pub input_a: &'a SparsePoly,
    pub input_b: &'a SparsePoly,
    pub removed: &'a SparsePoly,
    pub options: AnalysisOptions,
    pub tree: &'a ReductionTree,
    pub separatrices: &'a SeparatrixSet,
    pub stability: &'a StabilityVerdict,
}

impl Report {
    pub fn build(r: &ReportInput<'_>) -> Report {
        let tree = r.tree;
        let s = r.stability;
        Report {
            field: tree.field.d(),
            input: InputEcho {
                kind: r.kind,
                a: poly_terms(r.input_a),
                b: poly_terms(r.input_b),
            },
            options: r.options,
            saturation: SaturationDto {
                removed: poly_terms(r.removed),
                form: FormDto::new(&tree.root),
            },
            blowup_count: tree.blowups.len(),
            blowups: tree
                .blowups
                .iter()
                .map(|b| BlowupDto {
                    step: b.step,
                    center: chart_path(&b.center_path),
                    order: b.order,
                    component: b.component,
                })
                .collect(),
            divisor: tree.components.clone(),
            intersection_matrix: tree.intersection_matrix(),
            points: points(tree),
            generalized_curve: crate::classify::is_generalized_curve(tree),
            separatrices: SeparatricesDto {
                curves: r
                    .separatrices
                    .curves
                    .iter()
                    .map(|c| CurveDto {
                        f: poly_terms(&c.f),
                        cofactor: poly_terms(&c.cofactor),
                        points: c.points.clone(),
                        text: c.f.to_string(),
                    })
                    .collect(),
                complete: r.separatrices.complete,
                degree_bound: r.separatrices.degree_bound,
                notes: r.separatrices.notes.clone(),
            },
            logarithmic: match &s.logarithmic {
                LogarithmicStatus::Model(m) => LogarithmicDto::Model {
                    residues: m.residues.iter().map(KElement::to_strings).collect(),
                    real: m.real,
                    rational: m.rational,
                    text: m.residues.iter().map(KElement::to_string).collect(),
                },
                LogarithmicStatus::NoKernel => LogarithmicDto::NoKernel,
                LogarithmicStatus::AmbiguousKernel { dim } => LogarithmicDto::AmbiguousKernel { dim: *dim },
                LogarithmicStatus::NoSeparatrices => LogarithmicDto::NoSeparatrices,
            },
            first_integral: s.first_integral.as_ref().map(|fi| match fi {
                FirstIntegral::Found { f, exponents } => FirstIntegralDto::Found {
                    f: poly_terms(f),
                    exponents: exponents.clone(),
                    text: f.to_string(),
                },
                FirstIntegral::NotApplicable { note } => FirstIntegralDto::NotApplicable { note: note.clone() },
            }),
            holonomy: s
                .holonomy
                .iter()
                .map(|h| HolonomyDto {
                    component: h.component,
                    points: h.points.clone(),
                    indices: h.indices.iter().map(RatioDto::new).collect(),
                    skipped: h.skipped.clone(),
                    analysis: h.analysis.clone(),
                })
                .collect(),
            orbit_evidence: s.orbit,
            refinements: s.refinements.clone(),
            verdict: verdict(&s.verdict),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Report> {
        serde_json::from_str(s)
    }

    /// Divisor dual graph.
    pub fn to_dot(&self) -> String {
        let comps: Vec<(usize, i64)> = self.divisor.iter().map(|c| (c.id, c.self_intersection)).collect();
        let pts: Vec<(usize, String, Vec<usize>)> = self
            .points
            .iter()
            .map(|p| (p.id, p.label.clone(), p.incident.iter().map(|i| i.component).collect()))
            .collect();
        render_dot(&comps, &pts)
    }

    /// The summary line, e.g. `VERDICT: RealLogarithmic (conditional)`.
    pub fn verdict_line(&self) -> String {
        let detail = match &self.verdict {
            VerdictDto::FirstIntegralCandidate { integral_text, .. } => match integral_text {
                Some(f) => format!("F = {f}"),
                None => "exists, not constructed".into(),
            },
            VerdictDto::RealLogarithmic { .. } => "conditional".into(),
            VerdictDto::NotLStable { witness } => match witness {
                WitnessDto::SaddleNode { point, p, .. } => format!("saddle-node at P{point}, p={p}"),
                WitnessDto::HyperbolicRatio { point, ratio } => format!("hyperbolic ratio {} at P{point}", ratio.text),
                WitnessDto::ResonantObstruction {
                    point,
                    obstruction_order,
                    ..
                } => format!("resonant obstruction at P{point}, order {obstruction_order}"),
                WitnessDto::HolonomyElement { component, witness } => {
                    format!("holonomy element {} on D{component}", witness.word_text)
                }
                WitnessDto::ClosedOrbitContradiction { component } => {
                    format!("closed orbit with circle-type holonomy on D{component}")
                }
            },
            VerdictDto::Indeterminate { .. } => "undecided".into(),
        };
        format!("VERDICT: {} ({detail})", self.verdict.label())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "field: d = {}", self.field);
        let _ = writeln!(s, "germ: {}", self.saturation.form.text);
        let _ = writeln!(s, "blow-ups: {}", self.blowup_count);
        for c in &self.divisor {
            let _ = writeln!(s, "  D{} self-intersection {} corners {:?}", c.id, c.self_intersection, c.corners);
        }
        for p in &self.points {
            let idx: Vec<String> = p
                .camacho_sad
                .iter()
                .map(|i| format!("CS(D{}) = {}", i.component, i.index.text))
                .collect();
            if idx.is_empty() {
                let _ = writeln!(s, "  P{}: {}", p.id, p.label);
            } else {
                let _ = writeln!(s, "  P{}: {}; {}", p.id, p.label, idx.join(", "));
            }
        }
        let curves: Vec<&str> = self.separatrices.curves.iter().map(|c| c.text.as_str()).collect();
        let _ = writeln!(
            s,
            "separatrices ({}, degree <= {}): {}",
            if self.separatrices.complete { "complete" } else { "incomplete" },
            self.separatrices.degree_bound,
            curves.join(", ")
        );
        match &self.logarithmic {
            LogarithmicDto::Model { real, rational, text, .. } => {
                let _ = writeln!(s, "residues: ({}) real={real} rational={rational}", text.join(", "));
            }
            other => {
                let _ = writeln!(s, "residues: {other:?}");
            }
        }
        for h in &self.holonomy {
            let _ = writeln!(s, "holonomy D{}: {}", h.component, h.analysis.class.label());
        }
        let _ = writeln!(s, "{}", self.verdict_line());
        let extra = match &self.verdict {
            VerdictDto::FirstIntegralCandidate { notes, .. } => notes.clone(),
            VerdictDto::RealLogarithmic { caveats, .. } => caveats.clone(),
            VerdictDto::Indeterminate { reasons } => reasons.clone(),
            VerdictDto::NotLStable { .. } => vec![],
        };
        for e in extra {
            let _ = writeln!(s, "  - {e}");
        }
        s
    }

    pub fn emit(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Dot => self.to_dot(),
            OutputFormat::Text => self.to_text(),
        }
    }
}
