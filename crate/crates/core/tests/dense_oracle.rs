mod common;

use chaosdet_core::{ChaosPair, SymTensor};
use common::dense::Dense;

const TOL: f64 = 1e-12;

fn grid() -> impl Iterator<Item = (usize, usize, usize, u64)> {
    (1..=3).flat_map(|d| (1..=3).flat_map(move |n| (1..=3).flat_map(move |m| (0..3).map(move |s| (d, n, m, s)))))
}

fn pair(d: usize, n: usize, m: usize, seed: u64) -> (SymTensor<f64>, SymTensor<f64>) {
    let f = SymTensor::random_unit(seed, d, n).unwrap();
    let g = SymTensor::random_unit(seed + 1000, d, m).unwrap();
    (f, g)
}

#[test]
fn inner_product_matches_tuple_sum() {
    for (d, n, _, s) in grid() {
        let (f, _) = pair(d, n, n, s);
        let h = SymTensor::random_unit(s + 7, d, n).unwrap();
        let dense = Dense::from_sym(&f).inner(&Dense::from_sym(&h));
        assert!((f.inner(&h).unwrap() - dense).abs() < TOL);
    }
}

#[test]
fn contraction_matches_tuple_sum() {
    for (d, n, m, s) in grid() {
        let (f, g) = pair(d, n, m, s);
        for r in 0..=n.min(m) {
            let fast = Dense::from_bisym(&f.contract(&g, r).unwrap());
            let slow = Dense::from_sym(&f).contract(&Dense::from_sym(&g), r);
            assert!(fast.max_abs_diff(&slow) < TOL, "d={d} n={n} m={m} r={r}");
        }
    }
}

#[test]
fn contraction_inner_uses_tuple_weights() {
    for (d, n, m, s) in grid() {
        let (f, g) = pair(d, n, m, s);
        let (f2, g2) = pair(d, n, m, s + 50);
        for r in 0..=n.min(m) {
            let a = f.contract(&g, r).unwrap();
            let b = f2.contract(&g2, r).unwrap();
            let dense = Dense::from_bisym(&a).inner(&Dense::from_bisym(&b));
            assert!((a.inner(&b).unwrap() - dense).abs() < TOL);
        }
    }
}

#[test]
fn symmetrization_matches_permutation_average() {
    for (d, n, m, s) in grid() {
        if n + m > 5 {
            continue;
        }
        let (f, g) = pair(d, n, m, s);
        for r in 0..=n.min(m) {
            let c = f.contract(&g, r).unwrap();
            let fast = Dense::from_sym(&c.symmetrize());
            let slow = Dense::from_bisym(&c).symmetrize();
            assert!(fast.max_abs_diff(&slow) < TOL, "d={d} n={n} m={m} r={r}");
        }
    }
}

#[test]
fn slices_match_tuple_slices() {
    for (d, n, _, s) in grid() {
        let (f, _) = pair(d, n, n, s);
        let dense = Dense::from_sym(&f);
        for i in 0..d {
            assert!(Dense::from_sym(&f.slice(i).unwrap()).max_abs_diff(&dense.slice(i)) < TOL);
        }
    }
}

#[test]
fn same_chaos_covariance_uses_tuple_inner() {
    for (d, n, _, s) in grid() {
        let (f, g) = pair(d, n, n, s);
        let p = ChaosPair::new(f.clone(), g.clone()).unwrap();
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        let (df, dg) = (Dense::from_sym(&f), Dense::from_sym(&g));
        let det = fact * fact * (df.inner(&df) * dg.inner(&dg) - df.inner(&dg).powi(2));
        assert!((p.det_c() - det).abs() < 1e-10);
    }
}
