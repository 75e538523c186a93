use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;

use hardcore::bounds::{
    bound_report, clique_bound_check, lambert_w, moon_moser_check, occupancy_lower_bound, tree_alpha, tree_lambda,
};
use hardcore::indpoly::{brute_force_counts, evaluate_exact, evaluate_f64, integral_identity_residual, ratio_of, Fugacity, IndPoly, PolyJson};
use hardcore::random_graphs::{gnp, random_regular, random_triangle_free};
use hardcore::sampler::HardCoreChain;
use hardcore::{from_graph6, independence_polynomial, to_graph6, Graph};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n, 0.0..1.0f64, any::<u64>()).prop_map(|(n, p, seed)| gnp(n, p, seed))
}

fn triangle_free(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0..1.0f64, any::<u64>()).prop_map(|(n, p, seed)| random_triangle_free(n, p, seed))
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn graph6_round_trip(g in graph(80)) {
        let code = to_graph6(&g);
        prop_assert!(code.bytes().all(|b| (63..=126).contains(&b)));
        prop_assert_eq!(from_graph6(&code).unwrap(), g);
    }

    #[test]
    fn handshake(g in graph(40)) {
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
        prop_assert_eq!(g.edges().count(), g.edge_count());
    }

    #[test]
    fn triangle_free_is_k3_free(g in graph(16)) {
        prop_assert_eq!(g.is_triangle_free(), g.is_kr_free(3));
        prop_assert_eq!(g.stats().triangle_free, g.girth().is_none_or(|k| k >= 4));
    }

    #[test]
    fn polynomial_matches_enumeration(g in graph(16)) {
        let p = independence_polynomial(&g).unwrap();
        prop_assert_eq!(&p, &brute_force_counts(&g).unwrap());
        let n = g.n();
        if n >= 1 {
            prop_assert_eq!(p.coeffs()[1].clone(), BigUint::from(n));
            prop_assert_eq!(p.alpha(), g.independence_number());
        }
        if p.alpha() >= 2 {
            prop_assert_eq!(p.coeffs()[2].clone(), BigUint::from(n * (n - 1) / 2 - g.edge_count()));
        }
    }

    #[test]
    fn polynomial_is_multiplicative(a in graph(12), b in graph(12)) {
        let pa = independence_polynomial(&a).unwrap();
        let pb = independence_polynomial(&b).unwrap();
        prop_assert_eq!(independence_polynomial(&a.disjoint_union(&b)).unwrap(), pa.multiply(&pb));
    }

    #[test]
    fn json_round_trip(g in graph(20)) {
        let p = independence_polynomial(&g).unwrap();
        let text = serde_json::to_string(&p.to_json()).unwrap();
        let back: PolyJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(IndPoly::try_from(back).unwrap(), p);
    }

    #[test]
    fn exact_and_float_evaluation_agree(g in graph(20), num in 1u64..50, den in 1u64..50) {
        prop_assume!(g.n() > 0);
        let p = independence_polynomial(&g).unwrap();
        let lam = q(num as i64, den as i64);
        let e = evaluate_exact(&p, &lam);
        let f = evaluate_f64(&p, num as f64 / den as f64);
        let occ = hardcore::indpoly::rational_to_f64(&e.occupancy);
        prop_assert!((occ - f.occupancy).abs() <= 1e-12 * occ.max(1.0));
        prop_assert!(f.occupancy > 0.0 && f.occupancy < 1.0);
        prop_assert!(f.variance >= 0.0);
    }

    #[test]
    fn ratio_decreases_in_lambda(g in graph(14)) {
        prop_assume!(g.n() > 0);
        let p = independence_polynomial(&g).unwrap();
        let rs: Vec<BigRational> = [q(1, 4), q(1, 2), q(1, 1), q(2, 1)].iter().map(|l| ratio_of(&p, l).unwrap()).collect();
        prop_assert!(rs.windows(2).all(|w| w[0] > w[1]));
        prop_assert!(rs.iter().all(|r| *r > q(1, 1)));
    }

    #[test]
    fn coefficient_inequalities_hold(g in graph(16)) {
        prop_assume!(g.n() > 0);
        let p = independence_polynomial(&g).unwrap();
        prop_assert!(clique_bound_check(&p).unwrap().ok);
        prop_assert!(moon_moser_check(&p));
    }

    #[test]
    fn triangle_free_bounds_hold(g in triangle_free(16), num in 1u64..20, den in 1u64..20) {
        let p = independence_polynomial(&g).unwrap();
        let lam = Fugacity::ratio(num, den);
        let r = bound_report(&to_graph6(&g), &g, &g.stats(), &p, &lam).unwrap();
        prop_assert!(r.violations.is_empty(), "{:?}", r.violations);
        prop_assert!(r.occupancy + 1e-12 >= occupancy_lower_bound(g.max_degree(), lam.to_f64()));
    }

    #[test]
    fn variance_integral_identity(g in graph(12)) {
        prop_assume!(g.n() > 0);
        let p = independence_polynomial(&g).unwrap();
        prop_assert!(integral_identity_residual(&p, 1e7, 64).abs() < 1e-5);
    }

    #[test]
    fn lambert_inverts(z in 0.0..1e12f64) {
        let w = lambert_w(z).unwrap();
        prop_assert!((w * w.exp() - z).abs() <= 1e-12 * z.max(1.0));
    }

    #[test]
    fn tree_round_trip(d in 2u32..200, a in 0.001..0.499f64) {
        let lam = tree_lambda(d, a).unwrap();
        prop_assume!(lam.is_finite() && lam > 0.0);
        prop_assert!((tree_alpha(d, lam).unwrap().alpha - a).abs() < 1e-9);
    }

    #[test]
    fn regular_generation(n in 2usize..60, d in 0usize..6, seed in any::<u64>()) {
        prop_assume!(d < n && n * d % 2 == 0);
        let s = random_regular(n, d, seed).unwrap();
        prop_assert!(s.graph.degrees().iter().all(|&k| k == d));
        prop_assert_eq!(s.graph.edge_count(), n * d / 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn chain_stays_independent(g in graph(20), lam in 0.05..20.0f64, seed in any::<u64>()) {
        prop_assume!(g.n() > 0);
        let mut chain = HardCoreChain::new(&g, lam, seed, 0).unwrap();
        for _ in 0..2000 {
            chain.step();
            let set = chain.occupied_set();
            for (i, &u) in set.iter().enumerate() {
                for &v in &set[i + 1..] {
                    prop_assert!(!g.has_edge(u, v));
                }
            }
        }
    }

    #[test]
    fn chain_is_deterministic(g in graph(20), seed in any::<u64>()) {
        prop_assume!(g.n() > 0);
        let mut a = HardCoreChain::new(&g, 1.0, seed, 3).unwrap();
        let mut b = HardCoreChain::new(&g, 1.0, seed, 3).unwrap();
        a.run(5000);
        b.run(5000);
        prop_assert_eq!(a.occupied_set(), b.occupied_set());
    }
}
