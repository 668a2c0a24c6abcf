use foliate_core::exactalg::{ratio_classify, ratio_from_matrix, Field, KElement, OneFormGerm, SparsePoly};
use foliate_core::holonomy::{germ_compose, FormalGerm};
use foliate_core::reduction::{camacho_sad_index, reduce_singularities, ReductionOptions};
use foliate_core::{parse_request, run_pipeline, Report};
use proptest::prelude::*;

const FIELDS: [u64; 5] = [1, 2, 3, 5, 7];

fn field(d: u64) -> Field {
    if d == 1 {
        Field::gaussian()
    } else {
        Field::new(d).unwrap()
    }
}

fn frac() -> impl Strategy<Value = (i64, i64)> {
    (-20i64..=20, 1i64..=12)
}

fn element(f: &Field, parts: [(i64, i64); 4]) -> KElement {
    let [a, b, c, e] = parts.map(|(n, m)| KElement::from_frac(n, m));
    let s = f.sqrt_d();
    let i = KElement::i();
    let re = &a + &(&b * &s);
    let im = &c + &(&e * &s);
    &re + &(&i * &im)
}

fn elements(n: usize) -> impl Strategy<Value = (u64, Vec<[(i64, i64); 4]>)> {
    (
        prop::sample::select(FIELDS.to_vec()),
        prop::collection::vec([frac(), frac(), frac(), frac()], n),
    )
}

fn small_elements(n: usize) -> impl Strategy<Value = (u64, Vec<[(i64, i64); 4]>)> {
    let small = || (-3i64..=3, 1i64..=3);
    (
        prop::sample::select(FIELDS.to_vec()),
        prop::collection::vec([small(), small(), small(), small()], n),
    )
}

fn linear(lambda: &KElement) -> OneFormGerm {
    OneFormGerm::new(SparsePoly::monomial(0, 1, -lambda), SparsePoly::x()).unwrap()
}

proptest! {
    #[test]
    fn field_axioms((d, xs) in elements(3)) {
        let f = field(d);
        let [a, b, c] = [0, 1, 2].map(|k| element(&f, xs[k]));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv()).is_one());
            prop_assert_eq!(&(&b / &a) * &a, b.clone());
        }
        let z = a.to_complex() * b.to_complex();
        prop_assert!(((&a * &b).to_complex() - z).norm() <= 1e-9 * (1.0 + z.norm()));
    }

    #[test]
    fn ratio_orientation(t in -30i64..=30, det in -30i64..=30, d in prop::sample::select(FIELDS.to_vec())) {
        prop_assume!(det != 0);
        let f = field(d);
        let r = ratio_from_matrix(&KElement::from_frac(t, 4), &KElement::from_frac(det, 16), &f).unwrap();
        let rr = r.reciprocal();
        prop_assert_eq!(ratio_classify(&r), ratio_classify(&rr));
        let (z, w) = (r.approx(), rr.approx());
        prop_assert!((w - z).norm().min((w * z - 1.0).norm()) < 1e-9);
        prop_assert_eq!(rr.reciprocal().approx(), z);
        if let Some(v) = r.value() {
            let o = r.oriented(v.clone()).unwrap();
            prop_assert_eq!(o.reciprocal().value(), Some(v.inv()));
            prop_assert_eq!(ratio_classify(&o), ratio_classify(&r));
        }
    }

    #[test]
    fn camacho_sad_sum_on_first_component(num in 1i64..=50, den in 1i64..=50) {
        let lambda = KElement::from_frac(-num, den);
        let opts = ReductionOptions { force_initial_blowup: true, ..ReductionOptions::default() };
        let tree = reduce_singularities(&linear(&lambda), &Field::gaussian(), &opts).unwrap();
        for c in &tree.components {
            let mut sum = KElement::zero();
            for &p in &c.points {
                sum = &sum + &camacho_sad_index(&tree, p, c.id).unwrap().value().unwrap();
            }
            prop_assert_eq!(sum, KElement::from_int(c.self_intersection));
        }
    }

    #[test]
    fn report_round_trip(num in 1i64..=9, den in 1i64..=9, sign in prop::bool::ANY) {
        let n = if sign { num } else { -num };
        let src = format!(
            r#"{{"one_form":{{"A":[{{"ex":0,"ey":1,"c":["{}/{}","0","0","0"]}}],"B":[{{"ex":1,"ey":0,"c":["1","0","0","0"]}}]}}}}"#,
            -n, den
        );
        let req = parse_request(src.as_bytes()).unwrap();
        if let Ok(report) = run_pipeline(&req) {
            let json = report.to_json();
            prop_assert_eq!(Report::from_json(&json).unwrap(), report);
        }
    }

    #[test]
    fn parse_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        let _ = parse_request(&bytes);
    }

    #[test]
    fn parse_never_panics_on_near_json(
        key in prop::sample::select(vec!["one_form", "vector_field", "field", "options", "A", "P"]),
        ex in any::<i64>(),
        c in "[-0-9/]{0,8}",
    ) {
        let src = format!(r#"{{"{key}":{{"A":[{{"ex":{ex},"ey":0,"c":["{c}","0","0","0"]}}],"B":[]}}}}"#);
        let _ = parse_request(src.as_bytes());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn germ_composition((d, xs) in small_elements(15)) {
        let f = field(d);
        let n = 5;
        let germ = |k: usize| {
            let mut coeffs: Vec<KElement> = xs[k * n..(k + 1) * n].iter().map(|p| element(&f, *p)).collect();
            if coeffs[0].is_zero() {
                coeffs[0] = KElement::one();
            }
            FormalGerm::from_exact(&coeffs).unwrap()
        };
        let (g, h, k) = (germ(0), germ(1), germ(2));
        let gh_k = germ_compose(&germ_compose(&g, &h).unwrap(), &k).unwrap();
        let g_hk = germ_compose(&g, &germ_compose(&h, &k).unwrap()).unwrap();
        prop_assert_eq!(gh_k, g_hk);
        prop_assert!(germ_compose(&g, &g.invert()).unwrap().is_identity());
        prop_assert!(germ_compose(&g.invert(), &g).unwrap().is_identity());
    }
}
