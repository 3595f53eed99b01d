//! Holomorphy, pole structure and normalization of the convex zeta function.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use orthospec::body::ConvexBody;
use orthospec::orthospectrum::length_spectrum;
use orthospec::zeta::{convex_zeta_direct, epstein_zeta, ConvexZeta, ZetaOptions};
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn body_pair() -> impl Strategy<Value = (ConvexBody, ConvexBody)> {
    let one = |d: usize| {
        (
            prop::collection::vec(-3.0..3.0f64, d),
            prop::collection::vec(0.05..0.4f64, d),
        )
            .prop_map(|(c, a)| ConvexBody::ellipsoid_axes(&c, &a).unwrap())
    };
    prop_oneof![(one(2), one(2)), (one(3), one(3))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn continuation_satisfies_cauchy_riemann((k1, k2) in body_pair()) {
        let d = k1.dim() as f64;
        let z = ConvexZeta::new(&k1, &k2, ZetaOptions::default()).unwrap();
        let f = |s: Complex64| z.continued(s).unwrap().value;
        let h = 1e-4;
        for re in [d - 0.4, d - 0.15, d + 0.3, d + 1.0, d + 1.9] {
            for im in [-2.5, -0.7, 0.4, 1.8] {
                let s = c(re, im);
                let dx = (f(s + h) - f(s - h)) / (2.0 * h);
                let dy = (f(s + c(0.0, h)) - f(s - c(0.0, h))) / c(0.0, 2.0 * h);
                let r = (dx - dy).norm() / dx.norm().max(1.0);
                prop_assert!(r < 1e-5, "s = {s}: residual {r:.2e}");
            }
        }
    }

    #[test]
    fn pole_at_d_is_simple((k1, k2) in body_pair()) {
        let d = k1.dim() as f64;
        let z = ConvexZeta::new(&k1, &k2, ZetaOptions::default()).unwrap();
        let res = z.residues().unwrap().pop().unwrap().residue;
        for theta in [0.3, 1.9, 2.8, -1.2] {
            let mut prev = f64::INFINITY;
            for eps in [1e-1, 1e-2, 1e-3] {
                let w = Complex64::from_polar(eps, theta);
                if (d + w).re <= d - 1.0 {
                    continue;
                }
                let v = z.continued(d + w).unwrap().value;
                let first = (w * v).norm();
                let second = (w * w * v).norm();
                prop_assert!((0.5 * res.norm()..2.0 * res.norm()).contains(&first));
                prop_assert!(second < 0.2 * prev, "eps = {eps}: {second} vs {prev}");
                prev = second;
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn point_bodies_give_scaled_epstein(
        q in prop::array::uniform3(0.2..0.8f64),
        three in any::<bool>(),
        sre in 0.0..2.5f64,
        sim in -3.0..3.0f64,
    ) {
        let d = if three { 3 } else { 2 };
        let p1 = vec![0.0; d];
        let p2: Vec<f64> = q[..d].iter().map(|x| 2.0 * PI * x).collect();
        let (a, b) = (ConvexBody::point(&p1).unwrap(), ConvexBody::point(&p2).unwrap());
        // lengths 2 pi |xi + q| all exceed T0 = 1, so nothing is dropped
        let s = c(d as f64 - 0.7 + sre, sim);
        let want = (-s * (2.0 * PI).ln()).exp() * epstein_zeta(&q[..d], s).unwrap().value;
        let z = ConvexZeta::new(&a, &b, ZetaOptions::default()).unwrap();
        let got = z.continued(s).unwrap();
        let tol = got.tail_bound + 1e-10 * want.norm();
        prop_assert!((got.value - want).norm() <= tol, "s = {s}: {} vs {want}, tol {tol:.1e}", got.value);
        if s.re > d as f64 + 0.5 {
            let direct = convex_zeta_direct(&a, &b, s, 400.0).unwrap();
            let tol = direct.tail_bound + 1e-10 * want.norm();
            prop_assert!((direct.value - want).norm() <= tol);
        }
    }
}

#[test]
fn residue_matches_fitted_counting_growth() {
    let cases = [
        (
            ConvexBody::ellipsoid_axes(&[0.0, 0.0], &[0.4, 0.25]).unwrap(),
            ConvexBody::ball(&[1.0, 2.0], 0.3).unwrap(),
            300.0,
        ),
        (
            ConvexBody::ball(&[0.0, 0.0, 0.0], 0.2).unwrap(),
            ConvexBody::ellipsoid_axes(&[0.5, 1.0, -2.0], &[0.3, 0.1, 0.2]).unwrap(),
            60.0,
        ),
    ];
    for (k1, k2, t_max) in cases {
        let d = k1.dim();
        let spec = length_spectrum(&k1, &k2, t_max, None).unwrap();
        let t0 = spec.t0();
        let ts: Vec<f64> = (1..=200)
            .map(|j| t0 + (t_max - t0) * j as f64 / 200.0)
            .collect();
        let ns: Vec<f64> = ts
            .iter()
            .map(|&t| spec.counting_function(t.min(t_max)).unwrap() as f64)
            .collect();
        // least squares fit of N(T) by a degree-d polynomial in T / t_max
        let a = DMatrix::from_fn(ts.len(), d + 1, |i, j| (ts[i] / t_max).powi(j as i32));
        let coef = a
            .svd(true, true)
            .solve(&DVector::from_vec(ns), 1e-14)
            .unwrap();
        let leading = coef[d] / t_max.powi(d as i32) * (2.0 * PI).powi(d as i32);
        let z = ConvexZeta::new(&k1, &k2, ZetaOptions::default()).unwrap();
        let res = z.residues().unwrap().pop().unwrap().residue;
        let predicted = d as f64 / (2.0 * PI).powi(d as i32) * leading;
        let rel = (res.re - predicted).abs() / res.re;
        assert!(
            rel < 0.01,
            "d = {d}: residue {} vs fitted {predicted} ({rel:.2e})",
            res.re
        );
    }
}
