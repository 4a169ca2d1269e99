mod common;

use common::{c, massless_well, rel, tent, well_jost, REGULAR, WELLS};
use proptest::prelude::*;
use radial_dirac::free;
use radial_dirac::jost::{self, JostOptions};
use radial_dirac::special::Sign;
use radial_dirac::{Complex64, Error, PotentialSpec, SpectralParam};

fn z(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn unit_step() -> PotentialSpec {
    PotentialSpec::square_well(1, 0.0, 1.0, 1.0).unwrap()
}

fn test_potentials() -> Vec<PotentialSpec> {
    vec![
        unit_step(),
        massless_well(),
        tent(),
        PotentialSpec::square_well(1, 1.0, -5.0, 3.0).unwrap(),
        PotentialSpec::tent(2, 0.5, 3.0, 1.5).unwrap(),
    ]
}

#[test]
fn square_wells_match_high_precision_values() {
    for &(kappa, m, depth, width, l, want) in WELLS {
        let pot = PotentialSpec::square_well(kappa, m, depth, width).unwrap();
        let sp = jost::param_upper(c(l), m).unwrap();
        let v = jost::jost_value(&pot, &sp, &JostOptions::default()).unwrap();
        assert!(rel(v.g, c(want)) < 1e-8, "{kappa} {m} {depth} {width} {:?}: {} vs {:?}", l, v.g, want);
        assert!(rel(well_jost(kappa, m, depth, width, &sp), c(want)) < 1e-10);
    }
}

#[test]
fn regular_solution_matches_high_precision_values() {
    let pot = unit_step();
    for &(l, x, p1, p2) in REGULAR {
        let sp = SpectralParam::bulk(c(l), 0.0).unwrap();
        let p = jost::regular_solution(&pot, &sp, x).unwrap().descaled();
        assert!((p[0] - c(p1)).norm() < 1e-8 && (p[1] - c(p2)).norm() < 1e-8, "{:?} at {x}: {:?}", l, p);
    }
}

#[test]
fn free_potential_reproduces_free_objects() {
    let pot = PotentialSpec::free(1, 1.0).unwrap();
    let sp = SpectralParam::bulk(z(2.0, 0.0), 1.0).unwrap();
    let s = jost::jost_function(&pot, &sp).unwrap();
    assert!((s.g_plus - z(0.0, -3f64.sqrt())).norm() < 1e-14);
    let pot = PotentialSpec::new("zero", 2, 0.5, vec![radial_dirac::Piece::new(0.0, 1.0, vec![0.0])]).unwrap();
    for (l, x) in [(z(1.5, 0.3), 0.4), (z(-3.0, -0.7), 0.9), (z(0.2, 2.0), 0.1)] {
        let sp = SpectralParam::bulk(l, 0.5).unwrap();
        let f = jost::jost_solution(&pot, &sp, x).unwrap().descaled();
        let psi = free::free_jost(&sp, 2, x, Sign::Plus).unwrap().descaled();
        for i in 0..2 {
            assert!((f[i] - psi[i]).norm() < 1e-9 * psi[i].norm().max(1.0));
        }
        let p = jost::regular_solution(&pot, &sp, 1.0).unwrap().descaled();
        let phi = free::free_phi(&sp, 2, 1.0).unwrap().descaled();
        for i in 0..2 {
            assert!((p[i] - phi[i]).norm() < 1e-8 * phi[i].norm());
        }
        let th = jost::theta_tilde(&pot, &sp, x).unwrap().descaled();
        let th0 = free::free_theta(&sp, 2, x).unwrap().descaled();
        for i in 0..2 {
            assert!((th[i] - th0[i]).norm() < 1e-9 * th0[i].norm().max(1.0));
        }
    }
}

#[test]
fn high_energy_limit() {
    let pot = unit_step();
    let sp = SpectralParam::bulk(z(150.0, 0.0), 0.0).unwrap();
    let g = jost::jost_value(&pot, &sp, &JostOptions::default()).unwrap().g;
    let lead = -Complex64::i() * z(0.0, 1.0).exp();
    assert!((g - lead).norm() < 150f64.ln() / 150.0, "{g}");
}

#[test]
fn routes_agree_off_the_axis() {
    let pot = unit_step();
    let sp = SpectralParam::bulk(z(3.0, -2.0), 0.0).unwrap();
    let v = jost::jost_value(&pot, &sp, &JostOptions::default()).unwrap();
    assert!(rel(v.g_integral, v.g) < 1e-7);
    let want = well_jost(1, 0.0, 1.0, 1.0, &sp);
    assert!(rel(v.g, want) < 1e-8);
}

#[test]
fn ceiling_is_enforced() {
    let pot = unit_step();
    let sp = SpectralParam::bulk(z(0.0, -30.0), 0.0).unwrap();
    assert!(matches!(jost::jost_value(&pot, &sp, &JostOptions::default()), Err(Error::ValidityCeiling { .. })));
    let raised = JostOptions::default().with_ceiling(80.0);
    assert!(jost::jost_value(&pot, &sp, &raised).is_ok());
    let sp = SpectralParam::bulk(z(1.0, 0.0), 0.0).unwrap();
    assert!(matches!(jost::jost_solution(&pot, &sp, 0.0), Err(Error::OutOfRange { .. })));
    // beyond the support the Jost solution is the free one
    let f = jost::jost_solution(&pot, &sp, 1.5).unwrap();
    assert_eq!(f, free::free_jost(&sp, 1, 1.5, Sign::Plus).unwrap());
}

#[test]
fn wronskian_is_constant_in_x() {
    for pot in test_potentials() {
        let g = pot.gamma();
        for l in [z(2.5, 0.0), z(-1.5, 0.7), z(4.0, -1.5)] {
            let sp = SpectralParam::bulk(l, pot.mass()).unwrap();
            let ws: Vec<Complex64> = (0..8)
                .map(|j| {
                    let x = g * (0.125 + 0.125 * j as f64);
                    let f = jost::jost_solution(&pot, &sp, x).unwrap();
                    let p = jost::regular_solution(&pot, &sp, x).unwrap();
                    f.det(&p).value()
                })
                .collect();
            for w in &ws {
                assert!(rel(*w, ws[0]) < 1e-8, "{} at {l}", pot.name());
            }
        }
    }
}

#[test]
fn jost_wronskian_and_unitarity_on_the_continuous_spectrum() {
    for pot in test_potentials() {
        let m = pot.mass();
        for l in [-20.0, -3.3, -(m + 0.2), m + 0.2, 1.7 + m, 12.0] {
            let sp = SpectralParam::bulk(z(l, 0.0), m).unwrap();
            let kappa = pot.kappa();
            let x = 0.5 * pot.gamma();
            let f = jost::jost_solution(&pot, &sp, x).unwrap();
            let fm = radial_dirac::free::Solution2::new(x, [f.value[0].conj(), f.value[1].conj()], f.scale);
            let want = 2.0 * sp.k0() * sp.k().powi(2 * kappa);
            assert!(rel(f.det(&fm).value(), want) < 1e-7, "{} at {l}", pot.name());
            let s = jost::scattering_matrix(&pot, l).unwrap();
            assert!((s.norm() - 1.0).abs() < 1e-8);
            let j = jost::jost_function(&pot, &sp).unwrap();
            assert!(((j.g_minus.norm() - j.g_plus.norm()) / j.g_plus.norm()).abs() < 1e-10);
        }
    }
}

#[test]
fn star_value() {
    let pot = tent();
    for l in [z(1.0, 2.0), z(-4.0, -0.5)] {
        let sp = SpectralParam::bulk(l, 0.0).unwrap();
        let s = jost::jost_function(&pot, &sp).unwrap();
        let other = jost::jost_value(&pot, &sp.star(), &JostOptions::default()).unwrap().g;
        assert!(rel(s.g_minus, other.conj()) < 1e-10);
    }
}

#[test]
fn derivative_against_the_analytic_well() {
    for &(kappa, m, depth, width, l, _) in WELLS.iter().filter(|w| w.4 .1 != 0.0) {
        let pot = PotentialSpec::square_well(kappa, m, depth, width).unwrap();
        let sp = SpectralParam::bulk(c(l), m).unwrap();
        let d = jost::jost_derivative(&pot, &sp, &JostOptions::default()).unwrap();
        let h = 1e-4;
        let at = |dz: Complex64| well_jost(kappa, m, depth, width, &SpectralParam::bulk(c(l) + dz, m).unwrap());
        let want = (8.0 * (at(z(h, 0.0)) - at(z(-h, 0.0))) - (at(z(2.0 * h, 0.0)) - at(z(-2.0 * h, 0.0)))) / (12.0 * h);
        assert!(rel(d, want) < 1e-6, "{:?}: {d} vs {want}", l);
    }
}

#[test]
fn large_lambda_jost_solution() {
    let pot = unit_step();
    let l = 80.0;
    let sp = SpectralParam::bulk(z(l, 0.0), 0.0).unwrap();
    for x in [0.25, 0.5, 0.75] {
        let f = jost::jost_solution(&pot, &sp, x).unwrap().descaled();
        let psi = free::free_jost(&sp, 1, x, Sign::Plus).unwrap().descaled();
        let phase = z(0.0, 1.0 - x).exp();
        for i in 0..2 {
            let r = f[i] / (phase * psi[i]);
            assert!((r - 1.0).norm() < 2.0 / (l * x), "x = {x}: {r}");
        }
    }
}

#[test]
fn phase_tends_to_the_potential_integral() {
    let pot = unit_step();
    let mut worst: f64 = 0.0;
    for j in 0..10 {
        let l = 50.0 * 1.29f64.powi(j);
        let l = l.min(500.0);
        let sp = SpectralParam::bulk(z(l, 0.0), 0.0).unwrap();
        let g = jost::jost_value(&pot, &sp, &JostOptions::fast()).unwrap().g;
        let phase = (g / (-Complex64::i() * z(0.0, 1.0).exp())).arg() + 1.0;
        worst = worst.max((phase - 1.0).abs() * l / l.ln());
    }
    // observed supremum of the constant
    assert!(worst < 1.0, "{worst}");
}

#[test]
fn frak_f_on_the_real_line() {
    for pot in test_potentials() {
        let m = pot.mass();
        for j in 0..40 {
            let l = m + 0.05 + (50.0 - m - 0.05) * j as f64 / 39.0;
            for l in [l, -l] {
                let raw = jost::frak_f_raw(&pot, l, &JostOptions::fast()).unwrap();
                assert!(raw.im.abs() <= 1e-8 * raw.norm(), "{} at {l}", pot.name());
                // 𝔉 = (λ − m)|g⁺|² on the continuous spectrum
                let g = jost::jost_value(&pot, &SpectralParam::bulk(z(l, 0.0), m).unwrap(), &JostOptions::fast()).unwrap().g;
                assert!(rel(raw, z((l - m) * g.norm_sqr(), 0.0)) < 1e-12);
                assert!(raw.re * (l - m).signum() > 0.0);
            }
        }
    }
}

#[test]
fn frak_f_free_and_symmetric() {
    let pot = PotentialSpec::free(1, 1.0).unwrap();
    assert!((jost::frak_f(&pot, z(3.0, 0.0)).unwrap() - 4.0).norm() < 1e-13);
    let pot = PotentialSpec::tent(1, 1.0, 2.0, 1.0).unwrap();
    for l in [z(0.3, 0.4), z(-2.0, 1.0), z(5.0, -0.5)] {
        let a = jost::frak_f(&pot, l).unwrap();
        let b = jost::frak_f(&pot, l.conj()).unwrap();
        assert!(rel(b, a.conj()) < 1e-10);
        let via = jost::frak_f_via_limits(&pot, l, &JostOptions::default()).unwrap();
        assert!(rel(via, a) < 1e-5, "{l}: {via} vs {a}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn jost_decomposes_over_the_tilde_solutions(re in -8.0f64..8.0, im in -3.0f64..3.0, t in 0.05f64..0.95, which in 0usize..5) {
        let pot = &test_potentials()[which];
        let m = pot.mass();
        let l = z(re, im);
        prop_assume!((l - l.re.clamp(-m, m)).norm() > 0.05);
        let sp = SpectralParam::bulk(l, m).unwrap();
        let x = t * pot.gamma();
        let f = jost::jost_solution(pot, &sp, x).unwrap().descaled();
        let th = jost::theta_tilde(pot, &sp, x).unwrap().descaled();
        let ph = jost::phi_tilde(pot, &sp, x).unwrap().descaled();
        let k2 = sp.k().powi(2 * pot.kappa());
        for i in 0..2 {
            let want = sp.k0() * th[i] + k2 * ph[i];
            let size = (sp.k0() * th[i]).norm().max((k2 * ph[i]).norm());
            prop_assert!((f[i] - want).norm() < 1e-7 * size);
        }
    }

    #[test]
    fn routes_agree_across_the_validity_region(re in -25.0f64..25.0, im in -8.0f64..8.0, which in 0usize..5) {
        let pot = &test_potentials()[which];
        let m = pot.mass();
        let l = z(re, im);
        prop_assume!((l - l.re.clamp(-m, m)).norm() > 0.05);
        let sp = SpectralParam::bulk(l, m).unwrap();
        prop_assume!(jost::validity_measure(pot, &sp) <= 40.0);
        let v = jost::jost_value(pot, &sp, &JostOptions::default().with_ceiling(40.0)).unwrap();
        prop_assert!(v.route_residual <= 1e-7);
    }
}
