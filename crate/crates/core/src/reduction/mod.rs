//! Resolution of singularities by quadratic blow-ups.

mod dot;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::classify::{classify_singularity, radial_defect, LinearPart, SingularityClass};
use crate::error::{Error, Result};
use crate::exactalg::linalg::determinant;
use crate::exactalg::{univariate_roots_in_k, AlgebraicRatio, Field, KElement, OneFormGerm, SparsePoly};

pub use dot::to_dot;
pub(crate) use dot::render_dot;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chart {
    /// `(x, y) = (u, uv)`, exceptional line `{u = 0}`.
    U,
    /// `(x, y) = (uv, v)`, exceptional line `{v = 0}`.
    V,
}

/// One step of a chart path: a chart followed by the translation `v -> v + shift`
/// placing the point at the origin (always zero in the V-chart).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChartStep {
    pub chart: Chart,
    pub shift: KElement,
}

impl ChartStep {
    /// The previous level's coordinates as polynomials in the new ones.
    pub fn map(&self) -> (SparsePoly, SparsePoly) {
        let (x, y) = (SparsePoly::x(), SparsePoly::y());
        match self.chart {
            Chart::U => {
                let shifted = &y + &SparsePoly::constant(self.shift.clone());
                (x.clone(), &x * &shifted)
            }
            Chart::V => (&x * &y, y),
        }
    }
}

/// Composite map from the coordinates at the end of `path` to the root.
pub fn path_map(path: &[ChartStep]) -> (SparsePoly, SparsePoly) {
    let mut fx = SparsePoly::x();
    let mut fy = SparsePoly::y();
    for step in path {
        let (sx, sy) = step.map();
        fx = fx.substitute(&sx, &sy);
        fy = fy.substitute(&sx, &sy);
    }
    (fx, fy)
}

/// Which coordinate axis a divisor component is in local coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    /// The component is `{x = 0}`.
    XZero,
    /// The component is `{y = 0}`.
    YZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Incidence {
    pub component: usize,
    pub axis: Axis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlowupChart {
    pub chart: Chart,
    pub form: OneFormGerm,
    /// The power of the exceptional coordinate divided out.
    pub divided: u32,
}

/// The two charts of the blow-up of `w` at the origin, and whether it is
/// dicritical.
pub fn blowup_once(w: &OneFormGerm) -> Result<(BlowupChart, BlowupChart, bool)> {
    if !w.is_singular_at_origin() {
        return Err(Error::NotSingular);
    }
    let nu = w.order();
    let dicritical = radial_defect(w).is_zero();
    let m = if dicritical { nu + 1 } else { nu };
    let (x, y) = (SparsePoly::x(), SparsePoly::y());

    let xy = &x * &y;
    let a_u = w.a().substitute(&x, &xy);
    let b_u = w.b().substitute(&x, &xy);
    let ua = (&a_u + &(&y * &b_u)).div_monomial(m, 0).expect("exceptional factor");
    let ub = (&x * &b_u).div_monomial(m, 0).expect("exceptional factor");

    let a_v = w.a().substitute(&xy, &y);
    let b_v = w.b().substitute(&xy, &y);
    let va = (&y * &a_v).div_monomial(0, m).expect("exceptional factor");
    let vb = (&(&x * &a_v) + &b_v).div_monomial(0, m).expect("exceptional factor");

    Ok((
        BlowupChart {
            chart: Chart::U,
            form: OneFormGerm::from_parts_unchecked(ua, ub),
            divided: m,
        },
        BlowupChart {
            chart: Chart::V,
            form: OneFormGerm::from_parts_unchecked(va, vb),
            divided: m,
        },
        dicritical,
    ))
}

/// A singular point of the blown-up foliation on the exceptional line.
#[derive(Debug, Clone, PartialEq)]
pub struct DivisorPoint {
    pub chart: Chart,
    /// `v`-coordinate in the U-chart; zero for the V-chart origin.
    pub coordinate: KElement,
    pub multiplicity: usize,
}

/// Singular points on the exceptional line of a non-dicritical blow-up: the
/// roots of `A(0, v)` in the U-chart, then the V-chart origin if singular.
pub fn singular_points_on_divisor(u: &BlowupChart, v: &BlowupChart, field: &Field) -> Result<Vec<DivisorPoint>> {
    let restriction = u.form.a().at_x_zero();
    let report = univariate_roots_in_k(&restriction, field);
    if report.unrepresented_degree() > 0 {
        return Err(Error::NonRepresentablePoint {
            factor: report.unrepresented.display_in("v"),
        });
    }
    let mut out: Vec<DivisorPoint> = report
        .roots
        .into_iter()
        .map(|(c, mult)| DivisorPoint {
            chart: Chart::U,
            coordinate: c,
            multiplicity: mult,
        })
        .collect();
    if v.form.is_singular_at_origin() {
        let mult = v.form.a().at_y_zero().coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
        out.push(DivisorPoint {
            chart: Chart::V,
            coordinate: KElement::zero(),
            multiplicity: mult,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlowupRecord {
    /// 1-based index of the blow-up.
    pub step: usize,
    pub center_path: Vec<ChartStep>,
    pub center_germ: OneFormGerm,
    pub center_incidence: Vec<Incidence>,
    /// Vanishing order of the germ at the center.
    pub order: u32,
    pub charts: [BlowupChart; 2],
    /// Id of the component created by this blow-up.
    pub component: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorComponent {
    /// 1-based; equal to the birth step.
    pub id: usize,
    pub self_intersection: i64,
    pub birth_step: usize,
    /// Reduced points on this component.
    pub points: Vec<usize>,
    /// Reduced points that are corners of this component.
    pub corners: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedPoint {
    pub id: usize,
    pub germ: OneFormGerm,
    pub path: Vec<ChartStep>,
    pub class: SingularityClass,
    pub incident: Vec<Incidence>,
}

impl ReducedPoint {
    pub fn is_corner(&self) -> bool {
        self.incident.len() == 2
    }

    pub fn axis_of(&self, component: usize) -> Option<Axis> {
        self.incident.iter().find(|i| i.component == component).map(|i| i.axis)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionOptions {
    pub max_blowups: usize,
    pub jet_order: u32,
    /// Blow up the origin once even when it is already reduced.
    pub force_initial_blowup: bool,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        ReductionOptions {
            max_blowups: 64,
            jet_order: 20,
            force_initial_blowup: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionTree {
    pub field: Field,
    pub root: OneFormGerm,
    pub blowups: Vec<BlowupRecord>,
    pub components: Vec<DivisorComponent>,
    pub points: Vec<ReducedPoint>,
}

struct Pending {
    germ: OneFormGerm,
    path: Vec<ChartStep>,
    incident: Vec<Incidence>,
}

/// Blows up every non-reduced point, breadth first, until all singular
/// points on the divisor are non-degenerate or saddle-nodes.
pub fn reduce_singularities(w: &OneFormGerm, field: &Field, opts: &ReductionOptions) -> Result<ReductionTree> {
    let mut tree = ReductionTree {
        field: *field,
        root: w.clone(),
        blowups: Vec::new(),
        components: Vec::new(),
        points: Vec::new(),
    };
    let mut queue = VecDeque::from([Pending {
        germ: w.clone(),
        path: Vec::new(),
        incident: Vec::new(),
    }]);
    while let Some(item) = queue.pop_front() {
        let class = classify_singularity(&item.germ, field, opts.jet_order)?;
        let is_root = item.path.is_empty();
        match class {
            SingularityClass::Regular if is_root => return Err(Error::NotSingular),
            SingularityClass::Regular => continue,
            SingularityClass::Dicritical => {
                return Err(Error::Dicritical {
                    step: tree.blowups.len() + 1,
                })
            }
            c if c.is_reduced() && !(is_root && opts.force_initial_blowup) => {
                log::debug!("reduced point at depth {}: {}", item.path.len(), c.label());
                tree.points.push(ReducedPoint {
                    id: tree.points.len(),
                    germ: item.germ,
                    path: item.path,
                    class: c,
                    incident: item.incident,
                });
            }
            _ => blow_up(&mut tree, item, field, opts, &mut queue)?,
        }
    }
    for comp in &mut tree.components {
        for p in &tree.points {
            if p.axis_of(comp.id).is_some() {
                comp.points.push(p.id);
                if p.is_corner() {
                    comp.corners.push(p.id);
                }
            }
        }
    }
    Ok(tree)
}

fn blow_up(
    tree: &mut ReductionTree,
    item: Pending,
    field: &Field,
    opts: &ReductionOptions,
    queue: &mut VecDeque<Pending>,
) -> Result<()> {
    if tree.blowups.len() >= opts.max_blowups {
        return Err(Error::MaxBlowupsExceeded {
            limit: opts.max_blowups,
        });
    }
    let step = tree.blowups.len() + 1;
    let (u, v, dicritical) = blowup_once(&item.germ)?;
    if dicritical {
        return Err(Error::Dicritical { step });
    }
    let points = singular_points_on_divisor(&u, &v, field)?;
    log::debug!("blow-up {step}: {} singular points on the new component", points.len());
    let comp = step;
    for inc in &item.incident {
        tree.components[inc.component - 1].self_intersection -= 1;
    }
    tree.components.push(DivisorComponent {
        id: comp,
        self_intersection: -1,
        birth_step: step,
        points: Vec::new(),
        corners: Vec::new(),
    });
    for pt in points {
        let (germ, axis, old_axis) = match pt.chart {
            Chart::U => (
                u.form.translate(&KElement::zero(), &pt.coordinate),
                Axis::XZero,
                pt.coordinate.is_zero().then_some(Axis::YZero),
            ),
            Chart::V => (v.form.clone(), Axis::YZero, Some(Axis::XZero)),
        };
        let mut incident = Vec::new();
        if let Some(old_axis) = old_axis {
            incident.extend(item.incident.iter().filter(|i| i.axis == old_axis).copied());
        }
        incident.push(Incidence { component: comp, axis });
        let mut path = item.path.clone();
        path.push(ChartStep {
            chart: pt.chart,
            shift: pt.coordinate.clone(),
        });
        queue.push_back(Pending { germ, path, incident });
    }
    tree.blowups.push(BlowupRecord {
        step,
        center_path: item.path,
        order: item.germ.order(),
        center_germ: item.germ,
        center_incidence: item.incident,
        charts: [u, v],
        component: comp,
    });
    Ok(())
}

impl ReductionTree {
    pub fn component(&self, id: usize) -> Option<&DivisorComponent> {
        self.components.get(id.wrapping_sub(1))
    }

    pub fn point(&self, id: usize) -> Option<&ReducedPoint> {
        self.points.get(id)
    }

    /// Pairs of components meeting at a corner, with the corner point id.
    pub fn corner_pairs(&self) -> Vec<(usize, usize, usize)> {
        self.points
            .iter()
            .filter(|p| p.is_corner())
            .map(|p| {
                let (a, b) = (p.incident[0].component, p.incident[1].component);
                (a.min(b), a.max(b), p.id)
            })
            .collect()
    }

    /// Intersection matrix of the divisor components, ordered by id.
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.components.len();
        let mut m = vec![vec![0i64; n]; n];
        for c in &self.components {
            m[c.id - 1][c.id - 1] = c.self_intersection;
        }
        for (a, b, _) in self.corner_pairs() {
            m[a - 1][b - 1] += 1;
            m[b - 1][a - 1] += 1;
        }
        m
    }

    /// Leading principal minors of the intersection matrix alternate in sign,
    /// starting negative.
    pub fn is_negative_definite(&self) -> bool {
        let m = self.intersection_matrix();
        (1..=m.len()).all(|k| {
            let sub: Vec<Vec<KElement>> = m[..k]
                .iter()
                .map(|row| row[..k].iter().map(|&v| KElement::from_int(v)).collect())
                .collect();
            let det = determinant(&sub);
            let want = if k % 2 == 1 { std::cmp::Ordering::Less } else { std::cmp::Ordering::Greater };
            det.real_sign() == Some(want)
        })
    }

    /// The dual graph (components joined at corners) is a tree.
    pub fn dual_graph_is_tree(&self) -> bool {
        let n = self.components.len();
        if n == 0 {
            return true;
        }
        let pairs = self.corner_pairs();
        if pairs.len() != n - 1 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, i: usize) -> usize {
            if p[i] != i {
                let r = find(p, p[i]);
                p[i] = r;
            }
            p[i]
        }
        for (a, b, _) in pairs {
            let (ra, rb) = (find(&mut parent, a - 1), find(&mut parent, b - 1));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }
}

/// Camacho-Sad index of a reduced point relative to an incident component:
/// the transverse eigenvalue over the eigenvalue along the component.
pub fn camacho_sad_index(tree: &ReductionTree, point: usize, component: usize) -> Result<AlgebraicRatio> {
    let p = tree.point(point).ok_or(Error::NotIncident)?;
    let axis = p.axis_of(component).ok_or(Error::NotIncident)?;
    let ratio = match &p.class {
        SingularityClass::NonDegenerate { ratio, .. } => ratio,
        SingularityClass::SaddleNode { .. } => return Err(Error::SaddleNodeIndexUnsupported),
        _ => return Err(Error::NotIncident),
    };
    let idx = axis_index(&p.germ, axis);
    Ok(ratio
        .oriented(idx.clone())
        .unwrap_or_else(|| AlgebraicRatio::from_value(idx, &tree.field)))
}

/// Index of the invariant coordinate axis at a point with triangular linear
/// part.
pub(crate) fn axis_index(germ: &OneFormGerm, axis: Axis) -> KElement {
    let lin = LinearPart::of(germ);
    let (ax, by) = (&lin.m[0][0], &lin.m[1][1]);
    match axis {
        Axis::XZero => ax / by,
        Axis::YZero => by / ax,
    }
}

#[cfg(test)]
mod tests;
