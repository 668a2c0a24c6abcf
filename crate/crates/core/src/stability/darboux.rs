//! Invariant algebraic curves through the origin, found from the formal
//! separatrix branches of a resolution.

use crate::classify::branch::{invariant_graph, swap_xy};
use crate::classify::LinearPart;
use crate::error::Result;
use crate::exactalg::linalg::kernel;
use crate::exactalg::{Field, KElement, Monomial, OneFormGerm, SparsePoly, UniPoly};
use crate::reduction::{path_map, reduce_singularities, Axis, ReducedPoint, ReductionOptions, ReductionTree};

/// An invariant curve `f = 0` with `X(f) = cofactor * f`.
#[derive(Debug, Clone, PartialEq)]
pub struct Separatrix {
    pub f: SparsePoly,
    pub cofactor: SparsePoly,
    /// Reduced points whose branch produced this curve.
    pub points: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparatrixSet {
    pub curves: Vec<Separatrix>,
    /// Every separatrix branch was matched by a curve of degree within the bound.
    pub complete: bool,
    pub degree_bound: u32,
    pub notes: Vec<String>,
}

/// A formal curve `t -> (x(t), y(t))` in root coordinates.
#[derive(Debug, Clone)]
struct Branch {
    x: UniPoly,
    y: UniPoly,
    point: usize,
}

/// `p(x(t), y(t))` through order `n`.
fn compose_series(p: &SparsePoly, x: &UniPoly, y: &UniPoly, n: u32) -> UniPoly {
    let xs = SparsePoly::from_uni_x(x);
    let ys = SparsePoly::from_uni_x(y);
    p.substitute_truncated(&xs, &ys, Some(n)).at_y_zero()
}

fn graph_over_x(p: &SparsePoly, q: &SparsePoly, n: u32) -> Option<(UniPoly, UniPoly)> {
    let phi = invariant_graph(p, q, n)?;
    Some((UniPoly::from_ints(&[0, 1]), phi))
}

fn graph_over_y(p: &SparsePoly, q: &SparsePoly, n: u32) -> Option<(UniPoly, UniPoly)> {
    let phi = invariant_graph(&swap_xy(q), &swap_xy(p), n)?;
    Some((phi, UniPoly::from_ints(&[0, 1])))
}

/// Local branches at a reduced point: the one transverse to the divisor, or
/// both eigen-directions at an unblown origin.
fn local_branches(pt: &ReducedPoint, field: &Field, n: u32) -> std::result::Result<Vec<(UniPoly, UniPoly)>, String> {
    let (p, q) = pt.germ.vector_field();
    match pt.incident.as_slice() {
        [inc] => {
            let b = match inc.axis {
                Axis::XZero => graph_over_x(&p, &q, n),
                Axis::YZero => graph_over_y(&p, &q, n),
            };
            b.map(|b| vec![b]).ok_or_else(|| format!("P{}: transverse branch is resonant", pt.id))
        }
        [] => {
            let lin = LinearPart::of(&pt.germ);
            let disc = &(&lin.trace * &lin.trace) - &(&KElement::from_int(4) * &lin.det);
            let s = disc
                .sqrt_in(field)
                .ok_or_else(|| format!("P{}: eigenvalues are not in the field", pt.id))?;
            let half = KElement::from_frac(1, 2);
            let mu1 = &(&lin.trace + &s) * &half;
            let mu2 = &(&lin.trace - &s) * &half;
            let v1 = lin.eigenvector(&mu1);
            let v2 = lin.eigenvector(&mu2);
            let m = [[v1.0.clone(), v2.0.clone()], [v1.1.clone(), v2.1.clone()]];
            let wd = pt.germ.linear_change(&m);
            let (pd, qd) = wd.vector_field();
            let mut out = Vec::new();
            for b in [graph_over_x(&pd, &qd, n), graph_over_y(&pd, &qd, n)] {
                let (u, v) = b.ok_or_else(|| format!("P{}: eigen-branch is resonant", pt.id))?;
                let x = u.scale(&m[0][0]).add(&v.scale(&m[0][1]));
                let y = u.scale(&m[1][0]).add(&v.scale(&m[1][1]));
                out.push((x, y));
            }
            Ok(out)
        }
        _ => Ok(Vec::new()),
    }
}

fn monomials_up_to(n: u32) -> Vec<Monomial> {
    (1..=n).flat_map(|d| (0..=d).map(move |i| (d - i, i))).collect()
}

/// Polynomials of degree `n` with `f(0) = 0` vanishing on the branch to
/// order above `n^2`.
fn vanishing_polynomials(b: &Branch, n: u32) -> Vec<SparsePoly> {
    let k = n * n + 1;
    let monos = monomials_up_to(n);
    let xs = SparsePoly::from_uni_x(&b.x);
    let ys = SparsePoly::from_uni_x(&b.y);
    let mut xp = vec![UniPoly::one()];
    let mut yp = vec![UniPoly::one()];
    for i in 1..=n as usize {
        xp.push(SparsePoly::from_uni_x(&xp[i - 1]).mul_truncated(&xs, k).at_y_zero());
        yp.push(SparsePoly::from_uni_x(&yp[i - 1]).mul_truncated(&ys, k).at_y_zero());
    }
    let cols: Vec<UniPoly> = monos
        .iter()
        .map(|&(a, c)| {
            SparsePoly::from_uni_x(&xp[a as usize])
                .mul_truncated(&SparsePoly::from_uni_x(&yp[c as usize]), k)
                .at_y_zero()
        })
        .collect();
    let rows: Vec<Vec<KElement>> = (1..=k as usize)
        .map(|t| cols.iter().map(|c| c.coeff(t)).collect())
        .collect();
    kernel(&rows, monos.len())
        .into_iter()
        .map(|v| SparsePoly::from_terms(monos.iter().copied().zip(v)).normalized())
        .filter(|f| f.degree() == Some(n))
        .collect()
}

/// Deterministic ordering: degree, number of terms, then graded terms with
/// higher powers of `x` first.
pub(crate) fn branch_order(f: &SparsePoly) -> (u32, usize, Vec<(Monomial, [String; 4])>) {
    (
        f.degree().unwrap_or(0),
        f.num_terms(),
        f.graded_terms().into_iter().map(|((a, b), c)| ((b, a), c.to_strings())).collect(),
    )
}

/// Searches separatrices of degree at most `degree_bound` using the branches
/// of an existing resolution.
pub fn separatrices_from_tree(tree: &ReductionTree, degree_bound: u32) -> SeparatrixSet {
    let w = &tree.root;
    let k = degree_bound * degree_bound + 1;
    let mut notes = Vec::new();
    let mut branches = Vec::new();
    for pt in &tree.points {
        match local_branches(pt, &tree.field, k) {
            Ok(bs) => {
                let (fx, fy) = path_map(&pt.path);
                for (x, y) in bs {
                    branches.push(Branch {
                        x: compose_series(&fx, &x, &y, k),
                        y: compose_series(&fy, &x, &y, k),
                        point: pt.id,
                    });
                }
            }
            Err(e) => notes.push(e),
        }
    }
    let mut complete = notes.is_empty();
    let mut curves: Vec<Separatrix> = Vec::new();
    for b in &branches {
        if let Some(c) = curves.iter_mut().find(|c| compose_series(&c.f, &b.x, &b.y, k).is_zero()) {
            if !c.points.contains(&b.point) {
                c.points.push(b.point);
            }
            continue;
        }
        let found = (1..=degree_bound).find_map(|n| {
            vanishing_polynomials(b, n).into_iter().find_map(|f| {
                let cofactor = w.apply_vector_field(&f).div_exact(&f)?;
                Some(Separatrix {
                    f,
                    cofactor,
                    points: vec![b.point],
                })
            })
        });
        match found {
            Some(s) => curves.push(s),
            None => {
                complete = false;
                notes.push(format!(
                    "P{}: no invariant curve of degree <= {degree_bound} on its branch",
                    b.point
                ));
            }
        }
    }
    curves.sort_by_key(|c| branch_order(&c.f));
    SeparatrixSet {
        curves,
        complete,
        degree_bound,
        notes,
    }
}

/// Resolves `w` and searches its separatrices of degree at most `degree_bound`.
pub fn find_darboux_polynomials(w: &OneFormGerm, field: &Field, degree_bound: u32) -> Result<SeparatrixSet> {
    let tree = reduce_singularities(w, field, &ReductionOptions::default())?;
    Ok(separatrices_from_tree(&tree, degree_bound))
}
