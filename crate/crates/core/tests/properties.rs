use proptest::prelude::*;
use rigidlab_core::builders::{bar_joint, cofactor, hyperconnectivity, polynomial_matrix, skew_jacobian, skew_points, BasisChoice};
use rigidlab_core::geometry::{general_position, monomial_vectors, moment_curve, Position};
use rigidlab_core::linalg::int;
use rigidlab_core::matroid::{circuits_up_to, LinearMatroid};
use rigidlab_core::verify::{check_scaling_invariance, Status};
use rigidlab_core::{Graph, Params, PointConfig, Rational};

fn points(d: usize, n: usize) -> impl Strategy<Value = PointConfig> {
    proptest::collection::vec(proptest::collection::vec(-20i64..=20, d), n)
        .prop_map(move |rows| PointConfig::new(d, rows.into_iter().map(|r| r.into_iter().map(int).collect()).collect()).unwrap())
}

fn distinct_params(n: usize) -> impl Strategy<Value = Params> {
    proptest::collection::btree_set(-50i64..=50, n)
        .prop_map(|s| Params::new(s.into_iter().map(int).collect()).unwrap())
}

fn factors(k: usize, n: usize) -> impl Strategy<Value = (Vec<Vec<Rational>>, Vec<Vec<Rational>>)> {
    let side = || proptest::collection::vec(proptest::collection::vec((-30i64..=30).prop_map(int), n), k);
    (side(), side())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn planar_cofactor_is_bar_joint(p in points(2, 5)) {
        prop_assume!(p.has_distinct_points());
        let g = Graph::complete(5);
        let (c, r) = (cofactor(&g, &p, 2).unwrap(), bar_joint(&g, &p).unwrap());
        prop_assert_eq!(c.matrix(), r.matrix());
    }

    #[test]
    fn monomial_polynomial_matrix_is_hyperconnectivity(t in distinct_params(5), d in 1usize..=4) {
        let g = Graph::complete(5);
        let poly = polynomial_matrix(&g, &t, d, &[BasisChoice::Monomial]).unwrap();
        let h = hyperconnectivity(&g, &monomial_vectors(d, &t).unwrap()).unwrap();
        prop_assert_eq!(poly.matrix(), h.matrix());
    }

    #[test]
    fn skew_jacobian_is_hyperconnectivity((a, b) in factors(2, 5)) {
        let j = skew_jacobian(&a, &b).unwrap();
        let h = hyperconnectivity(&Graph::complete(5), &skew_points(&a, &b).unwrap()).unwrap();
        prop_assert_eq!(j.matrix(), h.matrix());
    }

    #[test]
    fn rank_is_submodular(p in points(2, 5), a in 0u64..1024, b in 0u64..1024) {
        let m = LinearMatroid::from(hyperconnectivity(&Graph::complete(5), &p).unwrap());
        let (ra, rb) = (m.rank_of_mask(a), m.rank_of_mask(b));
        prop_assert!(m.rank_of_mask(a | b) + m.rank_of_mask(a & b) <= ra + rb);
        prop_assert!(m.rank_of_mask(a & b) <= ra.min(rb));
        prop_assert!(ra <= a.count_ones() as usize);
    }

    #[test]
    fn circuits_have_corank_one(p in points(2, 5)) {
        let m = LinearMatroid::from(bar_joint(&Graph::complete(5), &p).unwrap());
        for c in circuits_up_to(&m, 6).unwrap() {
            prop_assert_eq!(m.rank_of(&c).unwrap(), c.len() - 1);
            prop_assert!(m.is_circuit(&c).unwrap());
        }
    }

    #[test]
    fn moment_curve_is_in_general_position(t in distinct_params(7), d in 1usize..=5) {
        prop_assert!(general_position(&moment_curve(d, &t).unwrap(), Position::Affine));
    }

    #[test]
    fn scaling_preserves_hyperconnectivity(p in points(2, 4), s in proptest::collection::vec(1i64..=9, 4), neg in any::<bool>()) {
        let alphas: Vec<Rational> = s.into_iter().map(|x| int(if neg { -x } else { x })).collect();
        let l = rigidlab_core::Matrix::from_rows(vec![vec![int(2), int(1)], vec![int(1), int(1)]]).unwrap();
        let r = check_scaling_invariance(&p, &alphas, &l, None).unwrap();
        prop_assert_eq!(r.status, Status::Pass);
    }
}
