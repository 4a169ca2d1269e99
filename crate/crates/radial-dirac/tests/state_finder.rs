mod common;

use common::{gap_grid_eigenvalues, grid_zeros, massless_well};
use radial_dirac::jost::{self, JostOptions};
use radial_dirac::states::{self, CountingOptions, Endpoint, FinderOptions, GapOptions, Region, StateKind};
use radial_dirac::{Complex64, Error, PotentialSpec};

fn z(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn free_operator_has_no_states() {
    let pot = PotentialSpec::free(1, 0.0).unwrap();
    let rep = states::find_states(&pot, &Region::new(-10.0, 10.0, -5.0, 0.0).unwrap(), &FinderOptions::default()).unwrap();
    assert!(rep.states.is_empty());
    assert_eq!(rep.total_winding, 0);
    let pot = PotentialSpec::free(2, 1.0).unwrap();
    assert!(states::gap_states(&pot, &GapOptions::default()).unwrap().states.is_empty());
    assert!(states::virtual_states(&pot).unwrap().is_empty());
}

#[test]
fn massless_well_matches_the_brute_force_oracle() {
    let oracle = grid_zeros(1, 0.0, 4.0, 1.0, [-30.0, 30.0, -8.0, 0.0], 2000, 400);
    let rep = states::find_states(&massless_well(), &Region::new(-30.0, 30.0, -8.0, 0.0).unwrap(), &FinderOptions::default()).unwrap();
    let found: Vec<Complex64> = rep.states.iter().map(|s| s.location).collect();
    assert_eq!(found.len(), oracle.len(), "found {found:?}\noracle {oracle:?}");
    for o in &oracle {
        let hits = found.iter().filter(|f| (*f - o).norm() < 1e-6).count();
        assert_eq!(hits, 1, "oracle zero {o}");
    }
    for s in &rep.states {
        assert_eq!(s.kind, StateKind::Resonance);
        assert_eq!(s.multiplicity, 1);
    }
    let total: u32 = rep.states.iter().map(|s| s.multiplicity).sum();
    assert_eq!(rep.total_winding, total as i64);
}

#[test]
fn cells_conserve_winding() {
    let rep = states::find_states(&massless_well(), &Region::new(-6.0, 6.0, -3.0, 0.0).unwrap(), &FinderOptions::default()).unwrap();
    assert_eq!(rep.states.len(), 3);
    let top = rep.cells.iter().find(|c| c.rectangle == rep.region).expect("root cell");
    assert_eq!(top.winding, rep.total_winding);
    for s in &rep.states {
        let w = states::root_winding(&massless_well(), s.location, 1e-3, &JostOptions::fast()).unwrap();
        assert_eq!(w, s.multiplicity as i64);
    }
}

#[test]
fn conjugate_partners_are_reported() {
    let rep = states::find_states(&massless_well(), &Region::new(-30.0, 30.0, -8.0, 0.0).unwrap(), &FinderOptions::default()).unwrap();
    let lonely = states::unpaired_states(&rep.states, 1e-6);
    // reported, not asserted: the half-line problem need not be symmetric
    println!("{} of {} resonances lack a partner at -conj(lambda)", lonely.len(), rep.states.len());
    assert!(lonely.iter().all(|s| rep.states.contains(s)));
}

#[test]
fn regions_meeting_the_cut_are_refused() {
    let pot = PotentialSpec::square_well(1, 1.0, -5.0, 3.0).unwrap();
    let e = states::find_states(&pot, &Region::new(-3.0, 3.0, -1.0, 0.0).unwrap(), &FinderOptions::default()).unwrap_err();
    assert!(matches!(e, Error::Usage(_)), "{e}");
    assert!(Region::new(1.0, 0.0, 0.0, 1.0).is_err());
}

#[test]
fn gap_eigenvalues_match_the_grid_oracle() {
    for (depth, width, expected) in [(-5.0, 3.0, 2), (-6.0, 1.0, 1)] {
        let pot = PotentialSpec::square_well(1, 1.0, depth, width).unwrap();
        let rep = states::gap_states(&pot, &GapOptions::default()).unwrap();
        assert!(rep.unclassified.is_empty());
        let eig = rep.eigenvalues();
        let oracle = gap_grid_eigenvalues(1, 1.0, depth, width, 10_000);
        assert_eq!(eig.len(), expected, "{eig:?}");
        assert_eq!(eig.len(), oracle.len(), "{eig:?} vs {oracle:?}");
        for (a, b) in eig.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
        for &s in &rep.eigenvalue_slopes {
            assert!(s < 0.0);
        }
        for &r in &rep.mirror_ratios {
            assert!(r >= 1e3, "{r}");
        }
        for &n in &rep.anti_bound_between {
            assert_eq!(n % 2, 1);
        }
    }
}

#[test]
fn frak_f_changes_sign_at_eigenvalues() {
    let pot = PotentialSpec::square_well(1, 1.0, -5.0, 3.0).unwrap();
    let rep = states::gap_states(&pot, &GapOptions::default()).unwrap();
    for l in rep.eigenvalues() {
        let a = jost::frak_f(&pot, z(l - 1e-4, 0.0)).unwrap().re;
        let b = jost::frak_f(&pot, z(l + 1e-4, 0.0)).unwrap().re;
        assert!(a > 0.0 && b < 0.0, "{l}: {a} {b}");
    }
}

#[test]
fn virtual_indicator_vanishes_at_the_critical_depth() {
    // an eigenvalue leaves the continuum at +m between depths 2.25 and 2.5
    let c = |d: f64| states::virtual_indicator(&PotentialSpec::square_well(1, 1.0, d, 1.0).unwrap(), Endpoint::Plus).unwrap();
    let (mut a, mut b) = (-2.25, -2.5);
    assert!(c(a) > 0.0 && c(b) < 0.0);
    for _ in 0..50 {
        let mid = 0.5 * (a + b);
        if c(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let critical = 0.5 * (a + b);
    assert!(c(critical).abs() < 1e-8);
    assert!(c(critical + 0.25).abs() > 1e-2 && c(critical - 0.25).abs() > 1e-2);
    let eig = |d: f64| states::gap_states(&PotentialSpec::square_well(1, 1.0, d, 1.0).unwrap(), &GapOptions::default()).unwrap().eigenvalues();
    assert!(eig(critical + 0.05).is_empty());
    let deeper = eig(critical - 0.05);
    assert_eq!(deeper.len(), 1);
    assert!(1.0 - deeper[0] < 0.05, "{deeper:?}");
}

#[test]
fn counting_function_of_the_massless_well() {
    let opts = CountingOptions { sectors: true, jost: JostOptions::fast().with_ceiling(600.0), ..CountingOptions::default() };
    let rows = states::counting_function(&massless_well(), &[20.0, 50.0], &opts).unwrap();
    assert!(rows[0].count < rows[1].count);
    let last = rows[1];
    assert!((0.8..=1.2).contains(&last.ratio), "{last:?}");
    let f = last.sector_fraction.unwrap();
    assert!((0.0..0.5).contains(&f));
    // the disk count equals the number of zeros found in a strip that holds them
    let rep = states::find_states(&massless_well(), &Region::new(-20.0, 20.0, -8.0, 0.0).unwrap(), &FinderOptions::default()).unwrap();
    let inside = rep.states.iter().filter(|s| s.location.norm() < 20.0).count();
    assert_eq!(rows[0].winding, inside as i64);
}

#[test]
fn counting_function_with_mass() {
    let pot = PotentialSpec::square_well(1, 1.0, 4.0, 1.0).unwrap();
    let opts = CountingOptions { jost: JostOptions::fast().with_ceiling(600.0), ..CountingOptions::default() };
    let rows = states::counting_function(&pot, &[40.0], &opts).unwrap();
    assert_eq!(rows[0].count, rows[0].winding as f64 / 2.0);
    assert!((0.8..=1.2).contains(&rows[0].ratio), "{:?}", rows[0]);
    assert!(states::counting_function(&pot, &[1.0], &opts).is_err());
    assert!(matches!(states::counting_function(&pot, &[40.0], &CountingOptions::default()), Err(Error::ValidityCeiling { .. })));
}
