use num_traits::Zero;
use proptest::prelude::*;

use qcenter::classifier::Mf;
use qcenter::oracle::{oracle_center_count_numeric, PointKind};
use qcenter::rational::rat;
use qcenter::system::AffineMap;
use qcenter::{
    center_at_origin, classify_mf, count_centers, derived_comitants, oracle_center_count,
};
use qcenter::{BinaryForm, QuadSystem, Rational};

fn small() -> impl Strategy<Value = Rational> {
    prop_oneof![
        2 => Just(Rational::zero()),
        5 => (-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d)),
    ]
}

fn nonzero() -> impl Strategy<Value = Rational> {
    (1i64..=4, 1i64..=3, any::<bool>()).prop_map(|(n, d, neg)| rat(if neg { -n } else { n }, d))
}

fn system() -> impl Strategy<Value = QuadSystem> {
    proptest::array::uniform12(small()).prop_map(QuadSystem::from_coeffs)
}

fn affine() -> impl Strategy<Value = AffineMap> {
    (
        proptest::array::uniform4(small()),
        proptest::array::uniform2(small()),
    )
        .prop_map(|(m, b)| AffineMap {
            m: [[m[0].clone(), m[1].clone()], [m[2].clone(), m[3].clone()]],
            b,
        })
        .prop_filter("invertible", AffineMap::is_invertible)
}

fn quadratic(l: &[Rational; 2], a: &[Rational; 2]) -> [Rational; 3] {
    [&l[0] * &a[0], &l[0] * &a[1] + &l[1] * &a[0], &l[1] * &a[1]]
}

/// Systems whose quadratic parts share a linear factor, so that `mu = 0`.
fn mu_zero_system() -> impl Strategy<Value = QuadSystem> {
    (
        proptest::array::uniform6(small()),
        proptest::array::uniform2(nonzero()),
        proptest::array::uniform2(small()),
        proptest::array::uniform2(small()),
    )
        .prop_map(|(low, l, a, b)| {
            let (p2, q2) = (quadratic(&l, &a), quadratic(&l, &b));
            let p = [
                low[0].clone(),
                low[1].clone(),
                low[2].clone(),
                p2[0].clone(),
                p2[1].clone(),
                p2[2].clone(),
            ];
            let q = [
                low[3].clone(),
                low[4].clone(),
                low[5].clone(),
                q2[0].clone(),
                q2[1].clone(),
                q2[2].clone(),
            ];
            QuadSystem::new(p, q)
        })
}

/// `ẋ = H_y`, `ẏ = -H_x` for a cubic `H` without constant term.
fn hamiltonian_system() -> impl Strategy<Value = QuadSystem> {
    proptest::array::uniform9(small()).prop_map(|h| {
        // H = h0 x + h1 y + h2 x^2 + h3 xy + h4 y^2 + h5 x^3 + h6 x^2 y + h7 x y^2 + h8 y^3
        let two = rat(2, 1);
        let three = rat(3, 1);
        let p = [
            h[1].clone(),
            h[3].clone(),
            &two * &h[4],
            h[6].clone(),
            &two * &h[7],
            &three * &h[8],
        ];
        let q = [
            -h[0].clone(),
            -(&two * &h[2]),
            -h[3].clone(),
            -(&three * &h[5]),
            -(&two * &h[6]),
            -h[7].clone(),
        ];
        QuadSystem::new(p, q)
    })
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn exactly_one_row_matches(s in system()) {
        prop_assert!(classify_mf(&s).is_ok());
    }

    #[test]
    fn verdict_is_affine_invariant(s in system(), map in affine()) {
        let a = count_centers(&s).unwrap();
        let b = count_centers(&s.transform(&map)).unwrap();
        prop_assert_eq!(a.set_index, b.set_index);
        prop_assert_eq!(a.center_count, b.center_count);
    }

    #[test]
    fn centers_need_c1_and_c3_to_vanish(s in hamiltonian_system()) {
        let r = count_centers(&s).unwrap();
        if matches!(r.center_count, Some(n) if n > 0) {
            let t = qcenter::InvariantTable::compute(&s);
            prop_assert!(t.c(1).is_zero() && t.c(3).is_zero());
        }
    }

    #[test]
    fn t_comitants_ignore_shifts(s in system(), h in small(), k in small()) {
        let a = derived_comitants(&s);
        let b = derived_comitants(&s.translate(&h, &k));
        prop_assert_eq!(&a.p, &b.p);
        prop_assert_eq!(&a.r, &b.r);
        prop_assert_eq!(&a.s, &b.s);
        prop_assert_eq!(&a.t, &b.t);
        prop_assert_eq!(&a.mu, &b.mu);
        prop_assert_eq!(&a.d, &b.d);
        prop_assert_eq!(&a.s_tilde, &b.s_tilde);
        prop_assert_eq!(&a.n_tilde, &b.n_tilde);
    }

    #[test]
    fn r_is_twelve_h_squared_when_mu_vanishes(s in mu_zero_system()) {
        let c = derived_comitants(&s);
        prop_assert!(c.mu.is_zero());
        prop_assert_eq!(&c.r, &(&c.h * &c.h).scale_int(12));
    }

    #[test]
    fn u_ignores_shifts_when_mu_and_h_vanish(s in mu_zero_system(), h in small(), k in small()) {
        let c = derived_comitants(&s);
        prop_assume!(c.h.is_zero());
        prop_assert_eq!(&c.u, &derived_comitants(&s.translate(&h, &k)).u);
    }

    #[test]
    fn origin_center_test_ignores_linear_maps(s in system(), m in affine()) {
        let s = QuadSystem::new(
            [Rational::zero(), s.p[1].clone(), s.p[2].clone(), s.p[3].clone(), s.p[4].clone(), s.p[5].clone()],
            [Rational::zero(), s.q[1].clone(), s.q[2].clone(), s.q[3].clone(), s.q[4].clone(), s.q[5].clone()],
        );
        let linear = AffineMap { m: m.m, b: [Rational::zero(), Rational::zero()] };
        prop_assert_eq!(center_at_origin(&s).unwrap(), center_at_origin(&s.transform(&linear)).unwrap());
    }
}

proptest! {
    #![proptest_config(config(60))]

    #[test]
    fn hamiltonian_centers_are_the_elliptic_points(s in hamiltonian_system()) {
        let Ok(o) = oracle_center_count(&s) else { return Ok(()) };
        let r = count_centers(&s).unwrap();
        prop_assume!(r.center_count.is_some());
        let elliptic = o
            .points
            .iter()
            .filter(|p| p.kind != PointKind::Complex && p.multiplicity == 1)
            .filter(|p| p.delta.as_ref().is_some_and(|d| d.re > 0.0))
            .count() as u8;
        prop_assert_eq!(o.center_count, Some(elliptic));
        prop_assert_eq!(r.center_count, Some(elliptic));
    }

    #[test]
    fn oracle_multiplicity_matches_the_partition(s in system()) {
        let m = classify_mf(&s).unwrap();
        if let (Mf::Finite(n), Ok(o)) = (m.m_f, oracle_center_count(&s)) {
            prop_assert_eq!(o.total_multiplicity(), n as usize);
        }
    }

    #[test]
    fn classifier_agrees_with_oracle(s in system()) {
        let r = count_centers(&s).unwrap();
        prop_assume!(r.center_count.is_some());
        if let Ok(o) = oracle_center_count(&s) {
            prop_assert_eq!(r.center_count, o.center_count, "{}", s);
        }
    }

    #[test]
    fn numeric_oracle_never_contradicts_exact(s in system()) {
        if let (Ok(e), Ok(n)) = (oracle_center_count(&s), oracle_center_count_numeric(&s)) {
            if n.center_count.is_some() {
                prop_assert_eq!(e.center_count, n.center_count);
            }
        }
    }
}

#[test]
fn transvectant_is_bilinear() {
    let f = BinaryForm::from_ints(&[1, -2, 3]);
    let g = BinaryForm::from_ints(&[0, 4, 1]);
    let h = BinaryForm::from_ints(&[2, 1, -1]);
    let tv = |a: &BinaryForm, b: &BinaryForm| qcenter::transvectant(a, b, 1).unwrap();
    assert_eq!(tv(&(&f + &g), &h), &tv(&f, &h) + &tv(&g, &h));
}
