mod common;

use common::{c, rel, RICCATI};
use proptest::prelude::*;
use radial_dirac::special::{self, BesselOrder, ScaledValue, Sign};
use radial_dirac::Complex64;

fn ord(k: i32) -> BesselOrder {
    BesselOrder::new(k).unwrap()
}

fn j(k: i32, z: Complex64) -> ScaledValue {
    special::riccati_j(ord(k), z)
}

fn eta(k: i32, z: Complex64) -> ScaledValue {
    special::riccati_eta(ord(k), z).unwrap()
}

#[test]
fn matches_high_precision_table() {
    for &(nu, z, zj, zeta) in RICCATI {
        let z = c(z);
        let got = j(nu, z).value();
        assert!(rel(got, c(zj)) < 1e-12, "zj_{nu}({z}) = {got}, want {:?}", zj);
        let got = eta(nu, z).value();
        assert!(rel(got, c(zeta)) < 1e-12, "zeta_{nu}({z}) = {got}, want {:?}", zeta);
    }
}

#[test]
fn hankel_combinations_match_table() {
    for &(nu, z, zj, zeta) in RICCATI {
        let z = c(z);
        let hp = special::riccati_h(ord(nu), z, Sign::Plus).unwrap().value();
        let hm = special::riccati_h(ord(nu), z, Sign::Minus).unwrap().value();
        let i = Complex64::i();
        assert!(rel(hp, c(zeta) + i * c(zj)) < 1e-12, "h+ order {nu} at {z}");
        assert!(rel(hm, c(zeta) - i * c(zj)) < 1e-12, "h- order {nu} at {z}");
    }
}

#[test]
fn closed_forms_of_low_orders() {
    let half_pi = Complex64::new(std::f64::consts::FRAC_PI_2, 0.0);
    assert!((j(0, half_pi).value() - 1.0).norm() < 1e-15);
    assert_eq!(j(-1, Complex64::new(0.0, 0.0)).value(), Complex64::new(1.0, 0.0));
    assert!(eta(0, half_pi).value().norm() < 1e-12);
    let one = Complex64::new(1.0, 0.0);
    assert!((eta(-1, one).value() + 1f64.sin()).norm() < 1e-15);
    let h = special::riccati_h(ord(0), one, Sign::Plus).unwrap().value();
    assert!((h - Complex64::new(0.0, 1.0).exp()).norm() < 1e-15);
    let two = Complex64::new(2.0, 0.0);
    let h = special::riccati_h(ord(-1), two, Sign::Plus).unwrap().value();
    assert!((h - Complex64::i() * Complex64::new(0.0, 2.0).exp()).norm() < 1e-15);
}

#[test]
fn small_argument_laws() {
    let z = Complex64::new(1e-4, 0.0);
    assert!(rel(j(1, z).value(), Complex64::new(1e-8 / 3.0, 0.0)) < 1e-6);
    let z = Complex64::new(1e-3, 0.0);
    assert!(rel(eta(1, z).value(), Complex64::new(1e3, 0.0)) < 1e-6);
    let z = Complex64::new(1e-6, 0.0);
    for k in 0..6 {
        let lead_j = j(k, z).value() / z.powi(k + 1);
        assert!(rel(lead_j, Complex64::new(1.0 / special::double_factorial_odd(k + 1), 0.0)) < 1e-8);
        let lead_eta = eta(k, z).value() * z.powi(k);
        assert!(rel(lead_eta, Complex64::new(special::double_factorial_odd(k), 0.0)) < 1e-8);
    }
}

#[test]
fn large_argument_asymptotics() {
    for k in 0..4 {
        let x = 50.0 * ((k + 1) * (k + 1)) as f64;
        let z = Complex64::new(x, 0.0);
        let h = special::riccati_h(ord(k), z, Sign::Plus).unwrap().value();
        let lead = Complex64::new(0.0, x - std::f64::consts::FRAC_PI_2 * k as f64).exp();
        assert!(rel(h, lead) < 0.01, "order {k}");
    }
}

#[test]
fn series_and_closed_forms_agree_at_the_switch() {
    for k in -1..8 {
        let r = special::switch_radius(k);
        for t in 0..12 {
            let z = Complex64::from_polar(r, 0.5 * t as f64);
            let a = special::riccati_j_series(ord(k), z).value();
            let b = special::riccati_j_closed(ord(k), z).unwrap().value();
            assert!(rel(a, b) < 1e-10, "zj order {k} at {z}");
            let a = special::riccati_eta_series(ord(k), z).unwrap().value();
            let b = special::riccati_eta_closed(ord(k), z).unwrap().value();
            assert!(rel(a, b) < 1e-10, "zeta order {k} at {z}");
        }
    }
}

#[test]
fn zero_argument_and_bad_orders() {
    let zero = Complex64::new(0.0, 0.0);
    assert!(special::riccati_eta(ord(1), zero).is_err());
    assert!(special::riccati_h(ord(0), zero, Sign::Minus).is_err());
    assert!(BesselOrder::new(-2).is_err());
}

#[test]
fn scaled_values_survive_large_imaginary_parts() {
    let z = Complex64::new(3.0, 800.0);
    let v = j(2, z);
    assert!(v.value().norm().is_infinite() || v.value().norm() > 1e300);
    assert!((v.ln_abs() - (800.0 - 2f64.ln())).abs() < 1e-2);
    let m = v.mantissa().norm();
    assert!((0.5..=2.0).contains(&m));
}

fn arg_strategy() -> impl Strategy<Value = Complex64> {
    (0.01f64..100.0, -std::f64::consts::PI..std::f64::consts::PI)
        .prop_map(|(r, t)| Complex64::from_polar(r, t))
        .prop_filter("|Im z| <= 50", |z| z.im.abs() <= 50.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hankel_difference_is_twice_i_j(z in arg_strategy(), k in -1i32..6) {
        let hp = special::riccati_h(ord(k), z, Sign::Plus).unwrap();
        let hm = special::riccati_h(ord(k), z, Sign::Minus).unwrap();
        let jj = j(k, z).scale(Complex64::new(0.0, 2.0));
        let d = hp - hm;
        let s = d.log_scale().max(jj.log_scale());
        let scale = hp.ln_abs().max(hm.ln_abs());
        let err = (d.mantissa_at(s) - jj.mantissa_at(s)).norm() * (s - scale).exp();
        prop_assert!(err < 1e-10, "order {} at {}: {:e}", k, z, err);
    }

    #[test]
    fn cross_determinant_is_minus_one(z in arg_strategy(), k in 0i32..6) {
        // zj_k zη_{k-1} − zj_{k-1} zη_k = −1
        let a = j(k, z) * eta(k - 1, z);
        let b = j(k - 1, z) * eta(k, z);
        let w = (a - b).value();
        let size = a.value().norm().max(b.value().norm()).max(1.0);
        prop_assert!((w + 1.0).norm() < 1e-10 * size, "order {} at {}: {}", k, z, w);
    }

    #[test]
    fn upward_recurrence(z in arg_strategy(), k in 0i32..6) {
        let lhs = j(k + 1, z).value();
        let rhs = (2 * k + 1) as f64 / z * j(k, z).value() - j(k - 1, z).value();
        let size = j(k, z).value().norm() * (2 * k + 1) as f64 / z.norm() + j(k - 1, z).value().norm();
        prop_assert!((lhs - rhs).norm() < 1e-10 * size.max(lhs.norm()));
    }
}
