#![allow(clippy::excessive_precision)]

//! Reference values computed once with mpmath `jtheta(1, πu, e^{πiτ})` at
//! 30 digits and frozen here.

use rwkit::theta::Theta;
use rwkit::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(a: Complex64, b: Complex64, tol: f64) {
    assert!((a - b).norm() <= tol * b.norm().max(1.0), "{a} vs {b}");
}

#[test]
fn square_torus_values() {
    let th = Theta::with_tau(c(0.0, 1.0)).unwrap();
    close(th.theta1(c(0.25, 0.0)).unwrap(), c(0.643589764038585884090326842449, 0.0), 1e-14);
    close(th.d1_at_zero(), c(2.84869460398778731607998505712, 0.0), 1e-14);
    close(
        th.theta1(c(0.3, 0.2)).unwrap(),
        c(0.886425498366195584237908578858, 0.364581202443209481004460760752),
        1e-14,
    );
    close(
        th.theta1_deriv(c(0.3, 0.2), 3).unwrap(),
        c(-24.576478388334829312551489987, 13.9191762489337117347868067485),
        1e-13,
    );
}

#[test]
fn skewed_torus_values() {
    let th = Theta::with_tau(c(0.3, 0.8)).unwrap();
    close(
        th.theta1(c(0.25, 0.0)).unwrap(),
        c(0.736206499284641052364883350644, 0.171905810013747752621790962359),
        1e-14,
    );
    close(th.d1_at_zero(), c(3.29386811566152030749832963865, 0.72624943510765608733805546591), 1e-14);
    close(
        th.theta1(c(0.3, 0.2)).unwrap(),
        c(0.897934111886534154501687920609, 0.63408553670470937048823344923),
        1e-14,
    );
    close(
        th.theta1_deriv(c(0.3, 0.2), 3).unwrap(),
        c(-12.179723480570630073542742051, -0.995572127121386661014805023939),
        1e-13,
    );
}

#[test]
fn lattice_translate_of_reference_point() {
    // sign (−1)^{l+k} with l = 2, k = −1
    let tau = c(0.3, 0.8);
    let th = Theta::with_tau(tau).unwrap();
    let u = c(0.3, 0.2);
    let base = c(0.897934111886534154501687920609, 0.63408553670470937048823344923);
    let k = -1.0;
    let factor = -(-Complex64::i() * std::f64::consts::PI * (tau * k * k + u * (2.0 * k))).exp();
    close(th.theta1(u + 2.0 - tau).unwrap(), factor * base, 1e-13);
}
