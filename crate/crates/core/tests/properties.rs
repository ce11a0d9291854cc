use chaosdet_core::malliavin::ChaosPair;
use chaosdet_core::multi_index::{factorial, multiplicity};
use chaosdet_core::verify::oracle_edet;
use chaosdet_core::{BiSymTensor, ChaosExpansion, GaussianSample, Guard, SymTensor};
use proptest::prelude::*;

fn unit(seed: u64, d: usize, k: usize) -> SymTensor<f64> {
    SymTensor::random_unit(seed, d, k).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 { 0.0 } else { (a - b).abs() / s }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inner_is_positive_definite(seed: u64, d in 1usize..=4, k in 0usize..=4) {
        let f = SymTensor::random(seed, d, k, Default::default()).unwrap();
        let n = f.norm_sq();
        prop_assert!(n >= 0.0);
        prop_assert_eq!(n == 0.0, f.is_zero());
    }

    #[test]
    fn multiplicity_counts_orderings(occ in proptest::collection::vec(0u32..=4, 1..=4)) {
        let k: u32 = occ.iter().sum();
        let denom: u64 = occ.iter().map(|&a| factorial(a as usize)).product();
        prop_assert_eq!(multiplicity(&occ) * denom, factorial(k as usize));
    }

    #[test]
    fn canonical_round_trip(seed: u64, d in 1usize..=3, k in 0usize..=4) {
        let f = unit(seed, d, k);
        let entries: Vec<_> = f.iter().map(|(occ, c)| (occ, *c)).collect();
        prop_assert_eq!(SymTensor::from_entries(d, k, entries).unwrap(), f.clone());
        let b = BiSymTensor::from_sym(&f, k).unwrap();
        prop_assert_eq!(b.into_sym().unwrap(), f);
    }

    #[test]
    fn contraction_duality(seed: u64, d in 1usize..=3, n in 1usize..=4, m in 1usize..=4) {
        let (f1, f3) = (unit(seed, d, n), unit(seed ^ 1, d, n));
        let (f2, f4) = (unit(seed ^ 2, d, m), unit(seed ^ 3, d, m));
        for r in 0..=(n - 1).min(m - 1) {
            let lhs = f1.contract(&f3, n - r).unwrap().inner(&f2.contract(&f4, m - r).unwrap()).unwrap();
            let rhs = f1.contract(&f2, r).unwrap().inner(&f3.contract(&f4, r).unwrap()).unwrap();
            prop_assert!(rel(lhs, rhs) <= 1e-10 || (lhs - rhs).abs() <= 1e-14);
        }
    }

    #[test]
    fn slices_reconstruct(seed: u64, d in 1usize..=3, n in 1usize..=4) {
        let f = unit(seed, d, n);
        let mut acc = SymTensor::zeros(d, n).unwrap();
        for i in 0..d {
            let e = SymTensor::basis_power(d, i, 1).unwrap();
            acc = acc.add(&e.sym_product(&f.slice(i).unwrap()).unwrap()).unwrap();
        }
        prop_assert!(acc.max_abs_diff(&f.scale(n as f64)).unwrap() <= 1e-13);
    }

    #[test]
    fn symmetrize_never_increases_norm(seed: u64, d in 1usize..=3, n in 1usize..=3, m in 1usize..=3, r in 0usize..=3) {
        let r = r.min(n.min(m));
        let t = unit(seed, d, n).contract(&unit(seed ^ 5, d, m), r).unwrap();
        prop_assert!(t.symmetrize().norm_sq() <= t.norm_sq() * (1.0 + 1e-12));
    }

    #[test]
    fn isometry(seed: u64, d in 1usize..=4, n in 1usize..=4) {
        let f = unit(seed, d, n);
        let g = unit(seed ^ 9, d, n);
        let lhs = ChaosExpansion::integral(f.clone()).mean_of_product(&ChaosExpansion::integral(g.clone())).unwrap();
        let rhs = factorial(n) as f64 * f.inner(&g).unwrap();
        prop_assert!(rel(lhs, rhs) <= 1e-10 || (lhs - rhs).abs() <= 1e-14);
    }

    #[test]
    fn distinct_chaoses_are_orthogonal(seed: u64, d in 1usize..=3, n in 1usize..=3, m in 1usize..=3) {
        prop_assume!(n != m);
        let x = ChaosExpansion::integral(unit(seed, d, n));
        let y = ChaosExpansion::integral(unit(seed ^ 4, d, m));
        prop_assert_eq!(x.mean_of_product(&y).unwrap(), 0.0);
    }

    #[test]
    fn product_is_pointwise(seed: u64, d in 1usize..=3, n in 1usize..=3, m in 1usize..=3) {
        let x = ChaosExpansion::integral(unit(seed, d, n));
        let y = ChaosExpansion::integral(unit(seed ^ 6, d, m));
        let xy = x.product(&y).unwrap();
        let s = GaussianSample::sample(seed, d);
        let (a, b) = (xy.eval(&s).unwrap(), x.eval(&s).unwrap() * y.eval(&s).unwrap());
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
    }

    #[test]
    fn determinant_terms_are_nonnegative(seed: u64, d in 1usize..=3, n in 1usize..=4, m in 1usize..=4) {
        let p = ChaosPair::new(unit(seed, d, n), unit(seed ^ 7, d, m)).unwrap();
        for t in p.t_terms() {
            prop_assert!(t >= -1e-12);
        }
        prop_assert!(p.contraction_norm_sum() >= -1e-12);
        prop_assert!(p.det_c() >= -1e-12);
        let s = GaussianSample::sample(seed ^ 8, d);
        prop_assert!(p.det_lambda_at(&s).unwrap().sum_of_squares >= 0.0);
    }

    #[test]
    fn expectation_routes_agree(seed: u64, d in 1usize..=3, n in 1usize..=3, m in 1usize..=3) {
        let p = ChaosPair::new(unit(seed, d, n), unit(seed ^ 10, d, m)).unwrap();
        let oracle = oracle_edet(&p, Guard::DEFAULT).unwrap();
        let closed = p.edet_closed();
        prop_assert!(rel(closed, oracle) <= 1e-8 || (closed - oracle).abs() <= 1e-12);
        prop_assert!(rel(closed, p.edet_regrouped()) <= 1e-12 || (closed - p.edet_regrouped()).abs() <= 1e-14);
    }

    #[test]
    fn proportional_pairs_are_degenerate(seed: u64, d in 1usize..=3, n in 1usize..=4, c in -5.0f64..5.0) {
        let f = unit(seed, d, n);
        let p = ChaosPair::new(f.clone(), f.scale(c)).unwrap();
        prop_assert!(p.edet_closed().abs() <= 1e-12);
        let cov = p.covariance().matrix;
        prop_assert!(p.det_c().abs() <= 1e-12 * cov[0][0] * cov[1][1]);
    }
}
