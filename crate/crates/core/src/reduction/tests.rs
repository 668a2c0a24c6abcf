use super::*;
use crate::exactalg::SparsePoly;

fn form(a: &[(u32, u32, i64)], b: &[(u32, u32, i64)]) -> OneFormGerm {
    OneFormGerm::new(SparsePoly::from_ints(a), SparsePoly::from_ints(b)).unwrap()
}

fn p(t: &[(u32, u32, i64)]) -> SparsePoly {
    SparsePoly::from_ints(t)
}

fn k(n: i64, d: i64) -> KElement {
    KElement::from_frac(n, d)
}

/// `x dy - lambda y dx`.
fn linear(lambda: KElement) -> OneFormGerm {
    OneFormGerm::new(SparsePoly::monomial(0, 1, -lambda), SparsePoly::x()).unwrap()
}

fn reduce(w: &OneFormGerm) -> Result<ReductionTree> {
    reduce_singularities(w, &Field::gaussian(), &ReductionOptions::default())
}

fn forced(w: &OneFormGerm) -> ReductionTree {
    let opts = ReductionOptions {
        force_initial_blowup: true,
        ..Default::default()
    };
    reduce_singularities(w, &Field::gaussian(), &opts).unwrap()
}

#[test]
fn blowup_of_linear_saddle() {
    let lambda = k(-2, 3);
    let (u, _, dic) = blowup_once(&linear(lambda.clone())).unwrap();
    assert!(!dic);
    assert_eq!(u.divided, 1);
    assert_eq!(u.form.a(), &SparsePoly::monomial(0, 1, &KElement::one() - &lambda));
    assert_eq!(u.form.b(), &SparsePoly::x());
}

#[test]
fn blowup_of_radial_is_dicritical() {
    let (u, _, dic) = blowup_once(&form(&[(0, 1, -1)], &[(1, 0, 1)])).unwrap();
    assert!(dic);
    assert_eq!(u.divided, 2);
    assert_eq!(u.form.a(), &SparsePoly::zero());
    assert_eq!(u.form.b(), &SparsePoly::one());
}

#[test]
fn cusp_chart_chain() {
    // d(y^2 - x^3) = -3x^2 dx + 2y dy
    let w = form(&[(2, 0, -3)], &[(0, 1, 2)]);
    let (u, v, dic) = blowup_once(&w).unwrap();
    assert!(!dic);
    assert_eq!(u.form.a(), &p(&[(0, 2, 2), (1, 0, -3)]));
    assert_eq!(u.form.b(), &p(&[(1, 1, 2)]));
    let pts = singular_points_on_divisor(&u, &v, &Field::gaussian()).unwrap();
    assert_eq!(
        pts,
        vec![DivisorPoint {
            chart: Chart::U,
            coordinate: KElement::zero(),
            multiplicity: 2
        }]
    );

    let tree = reduce(&w).unwrap();
    assert_eq!(tree.blowups.len(), 3);
    let si: Vec<i64> = tree.components.iter().map(|c| c.self_intersection).collect();
    assert_eq!(si, vec![-3, -2, -1]);
    // Third blow-up charts as computed by hand.
    let third = &tree.blowups[2];
    assert_eq!(third.order, 2);
    assert_eq!(third.charts[0].form.a(), &p(&[(0, 2, 6), (0, 1, -6)]));
    assert_eq!(third.charts[0].form.b(), &p(&[(1, 1, 4), (1, 0, -3)]));
    assert_eq!(third.charts[1].form.a(), &p(&[(0, 1, 2), (1, 1, -3)]));
    assert_eq!(third.charts[1].form.b(), &p(&[(1, 0, 6), (2, 0, -6)]));
    assert_eq!(tree.points.len(), 3);
    assert!(tree.points.iter().all(|pt| matches!(
        &pt.class,
        SingularityClass::NonDegenerate { ratio, .. } if ratio.is_negative_rational()
    )));
    assert!(tree.dual_graph_is_tree());
    assert!(tree.is_negative_definite());

    // Camacho-Sad sums equal self-intersections.
    for c in &tree.components {
        let mut sum = KElement::zero();
        for &pid in &c.points {
            sum += &camacho_sad_index(&tree, pid, c.id).unwrap().value().unwrap();
        }
        assert_eq!(sum, KElement::from_int(c.self_intersection), "component {}", c.id);
    }
    let e3: Vec<KElement> = tree.components[2]
        .points
        .iter()
        .map(|&pid| camacho_sad_index(&tree, pid, 3).unwrap().value().unwrap())
        .collect();
    assert_eq!(e3, vec![k(-1, 2), k(-1, 6), k(-1, 3)]);
}

#[test]
fn linear_saddle_with_forced_blowup() {
    let lambda = k(-2, 3);
    let tree = forced(&linear(lambda.clone()));
    assert_eq!(tree.blowups.len(), 1);
    assert_eq!(tree.points.len(), 2);
    assert_eq!(tree.components[0].self_intersection, -1);
    let idx: Vec<KElement> = (0..2)
        .map(|i| camacho_sad_index(&tree, i, 1).unwrap().value().unwrap())
        .collect();
    assert_eq!(idx, vec![k(-3, 5), k(-2, 5)]);
    assert_eq!(&idx[0] + &idx[1], KElement::from_int(-1));
}

#[test]
fn symmetric_saddle_indices() {
    let tree = forced(&linear(KElement::from_int(-1)));
    let idx: Vec<KElement> = (0..2)
        .map(|i| camacho_sad_index(&tree, i, 1).unwrap().value().unwrap())
        .collect();
    assert_eq!(idx, vec![k(-1, 2), k(-1, 2)]);
}

#[test]
fn reduced_germs_need_no_blowup() {
    let tree = reduce(&linear(k(-2, 3))).unwrap();
    assert!(tree.blowups.is_empty());
    assert_eq!(tree.points.len(), 1);
    let tree = reduce(&form(&[(0, 1, 2)], &[(1, 0, 1)])).unwrap();
    assert!(tree.blowups.is_empty());
}

#[test]
fn radial_and_positive_rational_are_dicritical() {
    assert_eq!(reduce(&form(&[(0, 1, -1)], &[(1, 0, 1)])), Err(Error::Dicritical { step: 1 }));
    assert_eq!(reduce(&linear(KElement::from_int(2))), Err(Error::Dicritical { step: 2 }));
}

#[test]
fn regular_point_is_rejected() {
    assert_eq!(reduce(&form(&[(0, 0, 1)], &[])), Err(Error::NotSingular));
}

#[test]
fn non_representable_point() {
    // d(x (y^2 - 2x^2)): tangent directions x = 0 and v^2 = 2.
    let w = form(&[(0, 2, 1), (2, 0, -6)], &[(1, 1, 2)]);
    assert_eq!(
        reduce(&w),
        Err(Error::NonRepresentablePoint {
            factor: "v^2 - 2".into()
        })
    );
    let f2 = Field::new(2).unwrap();
    let tree = reduce_singularities(&w, &f2, &ReductionOptions::default()).unwrap();
    assert_eq!(tree.blowups.len(), 1);
    assert_eq!(tree.points.len(), 3);
    for pt in &tree.points {
        assert_eq!(camacho_sad_index(&tree, pt.id, 1).unwrap().value(), Some(k(-1, 3)));
    }
}

#[test]
fn homogeneous_three_separatrices() {
    // (3xy + 2y^2) dx + (x^2 + 2xy) dy
    let w = form(&[(1, 1, 3), (0, 2, 2)], &[(2, 0, 1), (1, 1, 2)]);
    let tree = reduce(&w).unwrap();
    assert_eq!(tree.blowups.len(), 1);
    assert_eq!(tree.points.len(), 3);
    let sum = (0..3).fold(KElement::zero(), |s, i| &s + &camacho_sad_index(&tree, i, 1).unwrap().value().unwrap());
    assert_eq!(sum, KElement::from_int(-1));
}

/// `q(1/v, uv) * v^n` for the transition from the V-chart to the U-chart.
fn transition(q: &SparsePoly, n: u32) -> SparsePoly {
    SparsePoly::from_terms(q.terms().map(|(&(ea, eb), c)| ((eb, eb + n - ea), c.clone())))
}

#[test]
fn blow_down_identity_and_transition() {
    let w = form(&[(2, 0, -3), (1, 2, 1)], &[(0, 1, 2), (3, 0, 1)]);
    let tree = reduce(&w).unwrap();
    assert!(!tree.blowups.is_empty());
    let (x, y) = (SparsePoly::x(), SparsePoly::y());
    for rec in &tree.blowups {
        let [u, v] = &rec.charts;
        let pu = rec.center_germ.pullback(&x, &(&x * &y));
        assert_eq!(pu, u.form.mul_poly(&x.pow(u.divided)));
        let pv = rec.center_germ.pullback(&(&x * &y), &y);
        assert_eq!(pv, v.form.mul_poly(&y.pow(v.divided)));
        // (u', v') = (1/v, uv): du' = -dv / v^2, dv' = v du + u dv.
        let n = v.form.a().degree_x().max(v.form.b().degree_x()) + 2;
        let ta = transition(v.form.a(), n);
        let tb = transition(v.form.b(), n);
        let moved = OneFormGerm::from_parts_unchecked(
            &y * &tb,
            &(&x * &tb) - &ta.div_monomial(0, 2).unwrap(),
        );
        assert!(moved.wedge(&u.form).is_zero());
    }
}

#[test]
fn dot_export_labels() {
    let w = form(&[(2, 0, -3)], &[(0, 1, 2)]);
    let tree = reduce(&w).unwrap();
    let dot = to_dot(&tree);
    for label in ["D1 (-3)", "D2 (-2)", "D3 (-1)"] {
        assert!(dot.contains(label), "{dot}");
    }
    assert_eq!(dot, to_dot(&tree));
}
