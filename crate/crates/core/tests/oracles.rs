//! The reference implementations agree with tabulated values.

mod common;

use common::*;
use num_complex::Complex64;
use std::f64::consts::PI;

#[test]
fn bessel_j0_table() {
    for (x, want) in [
        (0.0, 1.0),
        (1.0, 0.765_197_686_557_966_6),
        (2.404_825_557_695_773, 0.0),
        (10.0, -0.245_935_764_451_348_3),
        (100.0, 0.019_985_850_304_223_12),
    ] {
        assert!(
            (bessel_j0(x) - want).abs() < 1e-13,
            "J0({x}) = {}",
            bessel_j0(x)
        );
    }
}

#[test]
fn zeta_and_beta_table() {
    let c = |x: f64| Complex64::new(x, 0.0);
    assert!((riemann_zeta(c(2.0)) - PI * PI / 6.0).norm() < 1e-13);
    assert!((riemann_zeta(c(0.5)).re + 1.460_354_508_809_586_8).abs() < 1e-12);
    assert!((dirichlet_beta(c(1.0)).re - PI / 4.0).abs() < 1e-13);
    assert!((dirichlet_beta(c(2.0)).re - 0.915_965_594_177_219_0).abs() < 1e-13);
    // first nontrivial zero
    let z = riemann_zeta(Complex64::new(0.5, 14.134_725_141_734_693));
    assert!(z.norm() < 1e-10, "{z}");
}

#[test]
fn ellipse_references() {
    assert!((ellipse_perimeter(1.0, 1.0) - 2.0 * PI).abs() < 1e-13);
    // complete elliptic integral value for a = 1, b = 0.5
    assert!((ellipse_perimeter(1.0, 0.5) - 4.844_224_110_273_838).abs() < 1e-12);
    assert!((ellipse_distance([3.0, 0.0], 1.0, 0.5) - 2.0).abs() < 1e-12);
    assert!((ellipse_distance([0.0, -2.0], 1.0, 0.5) - 1.5).abs() < 1e-12);
    assert_eq!(ellipse_distance([0.1, 0.1], 1.0, 0.5), 0.0);
}

#[test]
fn lattice_ball_counts() {
    // r_2(1) + r_2(2) = 8, r_3 up to |xi|^2 = 3 gives 6 + 12 + 8
    assert_eq!(lattice_ball(2, 2f64.sqrt()).len(), 8);
    assert_eq!(lattice_ball(3, 3f64.sqrt()).len(), 26);
}

#[test]
fn contour_of_simple_pole() {
    let r = contour_residue(
        |s| 3.0 / (s - 2.0) + s * s,
        Complex64::new(2.0, 0.0),
        0.5,
        64,
    );
    assert!((r - 3.0).norm() < 1e-14);
}
