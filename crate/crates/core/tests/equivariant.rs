use g2tw_core::equivariant::*;
use g2tw_core::linalg::SparseVec;
use g2tw_core::octonion::Octonions;
use g2tw_core::rep::{w, IrrepSum};
use g2tw_core::{gq, Gq};

fn sum(terms: &[((i64, i64), i64)]) -> IrrepSum {
    IrrepSum::from_terms(terms.iter().map(|((m, n), k)| (w(*m, *n), *k)))
}

#[test]
fn generators_represent_the_bracket() {
    let frame = G2Frame::standard();
    let ps: Vec<(usize, usize)> = (0..20).map(|i| (i % 14, (5 * i + 3) % 14)).collect();
    for spec in [SpaceSpec::Seven, SpaceSpec::Torsion(Model::U), SpaceSpec::Torsion(Model::CU)] {
        assert!(rep_on(spec).is_homomorphism_on(frame, &ps), "{spec}");
    }
}

#[test]
fn torsion_space_decomposition_over_u() {
    let dec = isotypic_decompose(&rep_on(SpaceSpec::Torsion(Model::U)), G2Frame::standard()).unwrap();
    let dims: Vec<(i64, usize)> =
        dec.report.components.iter().map(|c| (c.casimir_ratio, c.eigenspace_dim)).collect();
    let mut eig: Vec<usize> = dims.iter().map(|d| d.1).collect();
    eig.sort();
    assert_eq!(eig, vec![1, 14, 14, 54, 64]);
    assert_eq!(dec.report.as_sum(), sum(&[((0, 0), 1), ((1, 0), 2), ((0, 1), 1), ((2, 0), 2), ((1, 1), 1)]));
    assert_eq!(dec.report.as_sum(), SpaceSpec::Torsion(Model::U).expected());
}

#[test]
fn projectors_are_idempotent_and_commute_with_the_action() {
    let rep = rep_on(SpaceSpec::Torsion(Model::U));
    let dec = isotypic_decompose(&rep, G2Frame::standard()).unwrap();
    for (x, p) in &dec.projectors {
        assert_eq!(p.mul(p), *p, "{x:?}");
        for g in rep.generators.iter().take(4) {
            assert!(p.commutator(g).is_zero(), "{x:?}");
        }
    }
}

#[test]
fn torsion_space_decomposition_over_cu() {
    let dec = isotypic_decompose(&rep_on(SpaceSpec::Torsion(Model::CU)), G2Frame::standard()).unwrap();
    assert_eq!(dec.report.dim, 224);
    assert_eq!(dec.report.as_sum(), sum(&[((0, 0), 2), ((1, 0), 5), ((0, 1), 3), ((2, 0), 3), ((1, 1), 1)]));
}

#[test]
fn admissible_module_dimensions() {
    let m7 = admissible_torsion_module(7, &Gq::from(1)).unwrap();
    assert_eq!(m7.dim, 8);
    assert_eq!(m7.report.as_sum(), sum(&[((0, 0), 1), ((1, 0), 1)]));
    assert!(m7.matches_expected);
    let m8 = admissible_torsion_module(8, &Gq::from(1)).unwrap();
    assert_eq!(m8.dim, 16);
    assert_eq!(m8.report.as_sum(), sum(&[((0, 0), 2), ((1, 0), 2)]));
    assert!(m8.matches_expected);
}

#[test]
fn admissible_module_is_independent_of_scale() {
    for s in [gq(2, 0), gq(-3, 0), Gq::from_ratio(1, 5), gq(0, 1), gq(7, -2)] {
        let m = admissible_torsion_module(8, &s).unwrap();
        assert_eq!(m.dim, 16, "scale {s}");
        assert!(m.matches_expected);
    }
}

#[test]
fn admissible_module_is_independent_of_flag() {
    let frame = G2Frame::standard();
    for seed in [1u64, 2, 3] {
        for model in [Model::U, Model::CU] {
            let flag = Flag::random(frame, model, seed, &Gq::from(1)).unwrap();
            let m = admissible_torsion_module_with(&flag).unwrap();
            assert!(m.matches_expected, "seed {seed} {model:?}: {}", m.report.as_sum());
        }
    }
}

#[test]
fn curvature_is_forced_to_vanish() {
    for d in [7, 8] {
        let r = curvature_check(d, &Gq::from(1)).unwrap();
        assert_eq!(r.kernel_dim, 0);
        assert!(r.forces_zero);
    }
    let frame = G2Frame::standard();
    let flag = Flag::random(frame, Model::CU, 11, &gq(3, 0)).unwrap();
    assert!(curvature_check_with(&flag).unwrap().forces_zero);
}

#[test]
fn invariant_subspace_is_invariant() {
    let rep = rep_on(SpaceSpec::Seven);
    let c = vec![SparseVec { entries: vec![(0, Gq::from(1))] }];
    let sub = max_invariant_subspace(&rep, &c);
    assert_eq!(sub.dim(), 0);
    assert!(sub.is_invariant(&rep));
}

#[test]
fn cross_product_is_admissible() {
    let t = cross_product_tensor(&Octonions::standard());
    let r = torsion_check(&t, 7, 1e-9).unwrap();
    assert_eq!(r.verdict, Verdict::Admissible);
    let live: Vec<_> = r.components.iter().filter(|c| c.zero == Some(false)).map(|c| c.irrep).collect();
    assert_eq!(live, vec![w(0, 0)]);
}

#[test]
fn generic_component_is_not_admissible() {
    let model = Model::U;
    let (_, dec) = torsion_setup(model);
    let (_, p) = dec.projectors.iter().find(|(x, _)| *x == w(1, 1)).unwrap();
    let n = model.dim();
    let ambient = n * (n - 1) / 2 * n;
    // Push one basis vector through the projector and back to standard coordinates.
    let mut v = vec![Gq::from(0); ambient];
    let image = (0..ambient)
        .map(|i| {
            v.iter_mut().for_each(|x| *x = Gq::from(0));
            v[i] = Gq::from(1);
            p.apply(&v)
        })
        .find(|u| u.iter().any(|x| *x != Gq::from(0)))
        .unwrap();
    let t = weight_form_to_tensor(model, &image);
    let r = torsion_check(&t, 7, 1e-9).unwrap();
    assert_eq!(r.verdict, Verdict::NotAdmissible);
    let live: Vec<_> = r.components.iter().filter(|c| c.zero == Some(false)).map(|c| c.irrep).collect();
    assert_eq!(live, vec![w(1, 1)]);
}

#[test]
fn float_path_agrees_with_exact_path() {
    let t = cross_product_tensor(&Octonions::standard());
    let mut js = t.to_json();
    for e in js["entries"].as_array_mut().unwrap() {
        let re: f64 = e[3].as_str().unwrap().parse().unwrap();
        e[3] = serde_json::json!(re * 0.5);
        e[4] = serde_json::json!(0.0);
    }
    let f = Tensor3::from_json(&js.to_string()).unwrap();
    let r = torsion_check(&f, 7, 1e-9).unwrap();
    assert!(!r.exact);
    assert_eq!(r.verdict, Verdict::Admissible);
    assert!(r.distance.unwrap() < 1e-12);

    js["entries"].as_array_mut().unwrap().push(serde_json::json!([0, 1, 0, 0.25, 0.0]));
    let g = Tensor3::from_json(&js.to_string()).unwrap();
    assert_eq!(torsion_check(&g, 7, 1e-9).unwrap().verdict, Verdict::NotAdmissible);
}

#[test]
fn tensor_json_round_trip_and_shape_errors() {
    let t = cross_product_tensor(&Octonions::standard());
    assert_eq!(Tensor3::from_json(&t.to_json().to_string()).unwrap(), t);
    for bad in [
        r#"{"dim":6,"entries":[]}"#,
        r#"{"dim":7,"entries":[[1,0,2,"1","0"]]}"#,
        r#"{"dim":7,"entries":[[0,7,2,"1","0"]]}"#,
        r#"{"dim":7,"entries":[[0,1,2,"1"]]}"#,
    ] {
        assert!(matches!(Tensor3::from_json(bad), Err(EquivariantError::ShapeMismatch(_))), "{bad}");
    }
    assert!(torsion_check(&t, 8, 1e-9).is_err());
}
