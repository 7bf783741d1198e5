use isomon::character::{
    braid_act, fricke_eval, invariant_fingerprint, jordan_equivalent, multiaffine_check,
    multiaffine_control, theta_coefficients, RepTuple,
};
use isomon::fuchsian::classify_lambda;
use isomon::linalg::c;
use isomon::monodromy::local_trace;
use isomon::scalar::ratio;
use isomon::transform::{
    bl_word, elm_bookkeeping, weyl_generator, weyl_word, BlGenerator, TransformKind,
};
use isomon::{Matrix2, C64};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = BigRational> {
    (-24i64..24, 1i64..13).prop_map(|(p, q)| ratio(p, q))
}

fn rationals(n: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(rational(), n)
}

fn complex() -> impl Strategy<Value = C64> {
    (-1.5f64..1.5, -1.5f64..1.5).prop_map(|(x, y)| c(x, y))
}

/// SL₂ from three entries; `a` is kept away from zero.
fn sl2() -> impl Strategy<Value = Matrix2> {
    (complex(), complex(), complex(), any::<bool>()).prop_map(|(a, b, cc, flip)| {
        let a = if a.norm() < 0.3 {
            a + c(if flip { 1.0 } else { -1.0 }, 0.0)
        } else {
            a
        };
        Matrix2::new(a, b, cc, (C64::new(1.0, 0.0) + b * cc) / a)
    })
}

fn tuple(len: usize) -> impl Strategy<Value = RepTuple> {
    prop::collection::vec(sl2(), len).prop_map(RepTuple::unchecked)
}

fn compose(word: &[BlGenerator], n: usize) -> isomon::transform::AffineMapOnLambda {
    bl_word(word, n).unwrap()
}

proptest! {
    #[test]
    fn coxeter_relations(l in rationals(4)) {
        for k in 0..5 {
            prop_assert_eq!(weyl_word(&[k, k]).unwrap().apply(&l), l.clone());
        }
        for k in 1..5 {
            prop_assert_eq!(weyl_word(&[0, k, 0, k, 0, k]).unwrap().apply(&l), l.clone());
            for j in 1..5 {
                if j != k {
                    prop_assert_eq!(weyl_word(&[j, k, j, k]).unwrap().apply(&l), l.clone());
                }
            }
        }
    }

    #[test]
    fn bl_relations(l in rationals(5), n in 4usize..6) {
        use BlGenerator::*;
        let l = &l[..n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let square = compose(&[TMinusPair(i, j), R(i), TMinusPair(i, j), R(i)], n);
                prop_assert_eq!(square.apply(l), TPlus(i).map(n).unwrap().apply(l), "i={} j={}", i, j);
                let pair = compose(&[TMinusPair(i, j), R(i), R(j)], n);
                prop_assert_eq!(pair.apply(l), TPlusPair(i, j).map(n).unwrap().apply(l), "i={} j={}", i, j);
            }
        }
    }

    #[test]
    fn generators_preserve_walls(l in rationals(4)) {
        let generic = classify_lambda(&l, &[0; 4], 0.0).is_generic();
        for k in 0..5 {
            let image = weyl_generator(k).unwrap().apply(&l);
            prop_assert_eq!(classify_lambda(&image, &[0; 4], 0.0).is_generic(), generic, "s{}", k);
        }
        let gens = [
            BlGenerator::TPlus(1),
            BlGenerator::TPlusPair(0, 2),
            BlGenerator::TMinusPair(1, 3),
            BlGenerator::TMinusPair(3, 0),
            BlGenerator::R(2),
            BlGenerator::R(3),
        ];
        for g in gens {
            let image = g.map(4).unwrap().apply(&l);
            prop_assert_eq!(classify_lambda(&image, &[0; 4], 0.0).is_generic(), generic, "{}", g);
        }
    }

    #[test]
    fn s0_fixes_the_unit_sum_hyperplane(l in rationals(3)) {
        let last = ratio(1, 1) - l.iter().sum::<BigRational>();
        let mut l = l;
        l.push(last);
        prop_assert_eq!(weyl_generator(0).unwrap().apply(&l), l);
    }

    #[test]
    fn elementary_tables(l in rationals(4), mu in prop::collection::vec(-3i64..4, 4), i in 0usize..4, deg in -3i64..4) {
        let mu_q: Vec<BigRational> = mu.iter().map(|&m| ratio(m, 1)).collect();
        let minus = elm_bookkeeping(&TransformKind::ElmMinus(i), &l, &mu_q, deg);
        let back = elm_bookkeeping(&TransformKind::ElmPlus(i), &minus.lambda, &minus.mu, minus.deg_l);
        prop_assert_eq!(&back.lambda, &l);
        prop_assert_eq!(&back.mu, &mu_q);
        prop_assert_eq!(back.deg_l, deg);

        let to_f = |q: &BigRational| c(q.to_f64().unwrap(), 0.0);
        for kind in [TransformKind::ElmMinus(i), TransformKind::ElmPlus(i)] {
            let d = elm_bookkeeping(&kind, &l, &mu_q, deg);
            for (a, b) in l.iter().zip(&d.lambda) {
                prop_assert!((local_trace(to_f(a)) - local_trace(to_f(b))).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn fricke_identity_on_triples(t in tuple(3)) {
        let f = invariant_fingerprint(&t);
        let x = f.fricke_x().unwrap();
        let a: [C64; 4] = f.a.clone().try_into().unwrap();
        let scale = 1.0 + x.iter().chain(&a).map(|z| z.norm()).fold(0.0, f64::max).powi(4);
        prop_assert!(fricke_eval(&x, &a).norm() < 1e-10 * scale);
        let th = theta_coefficients(&a);
        prop_assert!((th[0] - (a[0] * a[3] + a[1] * a[2])).norm() < 1e-12 * scale);
    }

    #[test]
    fn fingerprints_are_conjugation_invariant(t in tuple(3), g in sl2()) {
        let tg = t.conjugated(&g).unwrap();
        let scale = invariant_fingerprint(&t).scale() * (1.0 + g.max_abs()).powi(4);
        prop_assert!(invariant_fingerprint(&t).max_abs_diff(&invariant_fingerprint(&tg)) < 1e-11 * scale);
        prop_assert!(jordan_equivalent(&t, &tg, 1e-9 * scale));
    }

    #[test]
    fn braid_moves_keep_the_product(t in tuple(4), k in 0usize..3, inverse in any::<bool>()) {
        let b = braid_act(&t, k, inverse).unwrap();
        let d = (b.product() - t.product()).max_abs();
        prop_assert!(d < 1e-10 * (1.0 + t.matrices().iter().map(|m| m.max_abs()).product::<f64>()));
        let undo = braid_act(&b, k, !inverse).unwrap();
        for (u, m) in undo.matrices().iter().zip(t.matrices()) {
            prop_assert!((*u - *m).max_abs() < 1e-9 * (1.0 + m.max_abs()).powi(4));
        }
    }

    #[test]
    fn trace_is_affine_in_each_entry(t in tuple(4), i in 0usize..4) {
        let scale: f64 = t.matrices().iter().map(|m| 1.0 + m.max_abs() + 0.5).product();
        prop_assert!(multiaffine_check(&t, i, 0.5) < 1e-12 * scale);
        prop_assert!(multiaffine_control(&t, i, 0.5) > 0.0);
    }
}
