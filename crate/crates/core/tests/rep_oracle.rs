//! Cross-checks of the Klimyk tensor product against brute-force character
//! multiplication followed by highest-weight stripping.

use g2tw_core::rep::{
    character, character_product, dominant_box, lambda2, strip_decompose, sym2, tensor_decompose, tensor_with_sum,
    w, weight_system, weyl_dim, IrrepSum,
};
use proptest::prelude::*;

#[test]
fn klimyk_matches_stripping_up_to_ten_thousand() {
    let tops: Vec<_> = dominant_box(8).into_iter().filter(|x| weyl_dim(*x).unwrap() <= 10_000).collect();
    let mut checked = 0;
    for &a in &tops {
        for &b in &tops {
            let (da, db) = (weyl_dim(a).unwrap(), weyl_dim(b).unwrap());
            if da * db > 10_000 {
                continue;
            }
            let klimyk = tensor_decompose(a, b).unwrap();
            let oracle = strip_decompose(&character_product(&weight_system(a).unwrap(), &weight_system(b).unwrap()))
                .unwrap();
            assert_eq!(klimyk, oracle, "{a} ⊗ {b}");
            assert_eq!(klimyk.dim() as u64, da * db);
            assert_eq!(klimyk.mult(a + b), 1);
            checked += 1;
        }
    }
    assert!(checked > 50, "only {checked} pairs");
}

#[test]
fn wedge_square_of_seven_tensor_seven() {
    let l2 = lambda2(w(1, 0)).unwrap();
    let total = tensor_with_sum(w(1, 0), &l2).unwrap();
    let expected = IrrepSum::from_terms([(w(0, 0), 1), (w(1, 0), 2), (w(0, 1), 1), (w(2, 0), 2), (w(1, 1), 1)]);
    assert_eq!(total, expected);
    assert_eq!(total.dim(), 147);
    assert_eq!(total.to_string(), "U{0,0} + 2U{1,0} + U{0,1} + 2U{2,0} + U{1,1}");
}

#[test]
fn trivial_plus_seven_wedge_square_tensor() {
    // Λ²(C ⊕ U) = U ⊕ Λ²U, then tensor with C ⊕ U.
    let w2 = IrrepSum::single(w(1, 0)).plus(&lambda2(w(1, 0)).unwrap());
    let total = w2.plus(&tensor_with_sum(w(1, 0), &w2).unwrap());
    let expected = IrrepSum::from_terms([(w(0, 0), 2), (w(1, 0), 5), (w(0, 1), 3), (w(2, 0), 3), (w(1, 1), 1)]);
    assert_eq!(total, expected);
    assert_eq!(total.dim(), 224);
}

#[test]
fn squares_partition_the_tensor_square() {
    for top in dominant_box(2) {
        let d = weyl_dim(top).unwrap() as i64;
        let (a, s) = (lambda2(top).unwrap(), sym2(top).unwrap());
        assert_eq!(a.dim(), d * (d - 1) / 2);
        assert_eq!(s.dim(), d * (d + 1) / 2);
        assert_eq!(a.plus(&s), tensor_decompose(top, top).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn tensor_is_symmetric_and_characters_multiply(m1 in 0i64..3, n1 in 0i64..2, m2 in 0i64..3, n2 in 0i64..2) {
        let (a, b) = (w(m1, n1), w(m2, n2));
        let ab = tensor_decompose(a, b).unwrap();
        prop_assert_eq!(&ab, &tensor_decompose(b, a).unwrap());
        let lhs = character(&ab).unwrap();
        let rhs = character_product(&weight_system(a).unwrap(), &weight_system(b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn stripping_round_trips(m in 0i64..4, n in 0i64..3, k in 1i64..3) {
        let x = IrrepSum::from_terms([(w(m, n), k), (w(0, 0), 1)]);
        prop_assert_eq!(strip_decompose(&character(&x).unwrap()).unwrap(), x);
    }
}
