//! Shared oracles for the integration tests.
//!
//! The tables were computed once with mpmath at 40 digits (Riccati functions
//! from their ₀F₁ series; square wells from free solutions with the shifted
//! spectral parameter) and are frozen here.
#![allow(dead_code)]

use radial_dirac::free;
use radial_dirac::special::Sign;
use radial_dirac::{Complex64, PotentialSpec, SpectralParam};

pub type C = (f64, f64);

pub fn c(p: C) -> Complex64 {
    Complex64::new(p.0, p.1)
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// `(order, z, zj_order(z), zη_order(z))`.
pub const RICCATI: &[(i32, C, C, C)] = &[
    (-1, (0.3, 0.0), (0.955336489125606, 0.0), (-0.2955202066613396, 0.0)),
    (-1, (2.5, 0.7), (-1.0055706352936233, -0.4539912145222221), (-0.7511836860127815, 0.6077344895867011)),
    (-1, (-4.0, 1.5), (-1.5376375386619723, -1.6114440048236636), (-1.780309466802453, 1.3917899328586751)),
    (-1, (12.0, -3.0), (8.49563643031773, -5.375320381963727), (5.402034774516559, 8.453623415581824)),
    (-1, (0.0, 0.05), (1.001250260438369, 0.0), (0.0, -0.050020835937655016)),
    (-1, (30.0, 2.0), (0.5803241401104714, 3.583452779123189), (3.717168318816527, -0.5594484764502771)),
    (-1, (0.9, -0.2), (0.6340836635943333, 0.1577119086672663), (-0.799045739292824, 0.12515246615131184)),
    (0, (0.3, 0.0), (0.2955202066613396, 0.0), (0.955336489125606, 0.0)),
    (0, (2.5, 0.7), (0.7511836860127815, -0.6077344895867011), (-1.0055706352936233, -0.4539912145222221)),
    (0, (-4.0, 1.5), (1.780309466802453, -1.3917899328586751), (-1.5376375386619723, -1.6114440048236636)),
    (0, (12.0, -3.0), (-5.402034774516559, -8.453623415581824), (8.49563643031773, -5.375320381963727)),
    (0, (0.0, 0.05), (0.0, 0.050020835937655016), (1.001250260438369, 0.0)),
    (0, (30.0, 2.0), (-3.717168318816527, 0.5594484764502771), (0.5803241401104714, 3.583452779123189)),
    (0, (0.9, -0.2), (0.799045739292824, -0.12515246615131184), (0.6340836635943333, 0.1577119086672663)),
    (1, (0.3, 0.0), (0.029730866412192563, 0.0), (3.4799751704133595, 0.0)),
    (1, (2.5, 0.7), (1.2210817736202202, 0.1505542999560945), (0.33104712245200796, -0.6716927375985733)),
    (1, (-4.0, 1.5), (1.0330390309086668, 1.7701670476308429), (1.9848784611812142, -0.9122155587607237)),
    (1, (12.0, -3.0), (-8.753568110366444, 4.606368843986396), (-4.630311909747252, -8.70863606455314)),
    (1, (0.0, 0.05), (-0.0008335416852687183, 0.0), (0.0, -19.974984372829727)),
    (1, (30.0, 2.0), (-0.7024437779551564, -3.5566631873852006), (-3.689981781469668, 0.6770844665979261)),
    (1, (0.9, -0.2), (0.24141240533955366, -0.1022155224056379), (1.4333197575298202, 0.19103276975387207)),
    (2, (0.3, 0.0), (0.0017884574605860654, 0.0), (33.84441521500799, 0.0)),
    (2, (2.5, 0.7), (0.6544954433728936, 0.39480949330602544), (1.1646653933697444, -0.39658660285737973)),
    (2, (-4.0, 1.5), (-2.0230884616827383, -0.026877475944564137), (0.007582111341543403, 1.7218348886490455)),
    (2, (12.0, -3.0), (3.0714088165487836, 9.022559137086478), (-9.072848875872781, 3.053858254436679)),
    (2, (0.0, 0.05), (0.0, -8.33482153191529e-06), (-1199.500312630222, 0.0)),
    (2, (30.0, 2.0), (3.6236285852542753, -0.9088788129513137), (-0.9431956595050318, -3.491552897837092)),
    (2, (0.9, -0.2), (0.0399457993662085, -0.02912337772102949), (3.7839677287329505, 1.4608531888072593)),
    (3, (0.3, 0.0), (7.675793090852455e-05, 0.0), (560.5936117463865, 0.0)),
    (3, (2.5, 0.7), (0.19776485378812675, 0.2417876309816192), (1.622998026972469, -0.6686131099550398)),
    (3, (-4.0, 1.5), (1.1729986767116365, -0.9093060623425239), (-1.2855842453983664, -0.9778427211320153)),
    (3, (12.0, -3.0), (9.07347753478886, -0.7669918474280928), (0.7729340903425653, 9.016732549050584)),
    (3, (0.0, 0.05), (5.953207718931881e-08, 0.0), (0.0, 119970.00624739502)),
    (3, (30.0, 2.0), (1.2936556138607187, 3.3657692628329445), (3.4948547041420954, -1.2460014777489368)),
    (3, (0.9, -0.2), (0.004328153329820122, -0.00497200745133174), (16.880799760694906, 11.994622616558619)),
    (5, (0.3, 0.0), (6.988747670187084e-08, 0.0), (390839.6021542739, 0.0)),
    (5, (2.5, 0.7), (0.0016832368400973166, 0.02349319228373217), (4.579017635503463, -10.137615042783088)),
    (5, (-4.0, 1.5), (-0.029074321244761513, -0.34270008771302846), (-1.0972234226520623, -1.0813635304801523)),
    (5, (12.0, -3.0), (-6.204101057196259, -4.6643691063483885), (4.703982859115755, -6.145558031839774)),
    (5, (0.0, 0.05), (-1.5032710405433236e-12, 0.0), (0.0, -3023580037.4968753)),
    (5, (30.0, 2.0), (-2.2373430861156582, -2.8016421141818886), (-2.9137506478176665, 2.1516557460859804)),
    (5, (0.9, -0.2), (1.5445945276625704e-05, -5.5233191980818346e-05), (707.0389829580722, 1301.317815960493)),
];

/// `(κ, m, depth, width, λ, g⁺(λ))` for `v = depth` on `[0, width]`; gap
/// points are on the upper rim.
pub const WELLS: &[(i32, f64, f64, f64, C, C)] = &[
    (1, 0.0, 1.0, 1.0, (3.0, -2.0), (4.5117244576825275, 0.4691853797907167)),
    (1, 0.0, 1.0, 1.0, (150.0, 0.0), (0.847087057209621, -0.5439591937302886)),
    (1, 0.0, 4.0, 1.0, (1.0, 2.0), (0.2771429894658119, 0.6515433545535281)),
    (1, 0.0, 4.0, 1.0, (-7.5, -1.0), (-0.39840219933645393, 0.37947294950723875)),
    (1, 1.0, 1.0, 1.0, (2.5, 0.0), (1.5171776428417685, -2.4140433322860657)),
    (1, 1.0, 1.0, 1.0, (-3.0, 0.5), (0.4378336883861014, -0.34584016540724016)),
    (2, 1.0, -3.0, 1.5, (0.4, 0.0), (0.01741738439692178, 4.1520707972876144e-32)),
    (2, 1.0, -3.0, 1.5, (4.0, -1.5), (-2.202717953720581, -2.053419041864708)),
    (3, 0.5, 2.0, 0.8, (1.0, 3.0), (0.4284022877546752, -0.9594426991247013)),
    (1, 1.0, -6.0, 1.0, (0.2, 0.0), (0.0960096709738887, 7.228029124661399e-33)),
    (2, 0.0, -2.0, 2.0, (5.0, 0.25), (0.3618301124792011, 0.3632185685163936)),
];

/// `(λ, x, φ₁, φ₂)` for `v = 1` on `[0, 1]`, `m = 0`, `κ = 1`.
pub const REGULAR: &[(C, f64, C, C)] = &[
    ((2.0, 0.0), 0.5, (0.08126851531803328, 0.0), (0.479425538604203, 0.0)),
    ((1.0, 0.0), 1.0, (0.0, 0.0), (1.0, 0.0)),
    ((3.0, -2.0), 0.25, (0.04371245511726001, -0.03954647736851868), (0.24947920972435064, 0.02082713313222604)),
];

/// `(κ, m, height, width, λ, Ω(λ))` for a square well.
pub const OMEGA: &[(i32, f64, f64, f64, f64, f64)] = &[
    (1, 0.0, 1.0, 1.0, 5.0, 0.963218569418471),
    (1, 0.0, 1.0, 1.0, -5.0, 0.963218569418471),
    (2, 1.0, 2.0, 0.7, -3.5, 0.6253917706246067),
    (1, 0.0, 4.0, 1.0, 60.0, 3.9998967672058483),
];

/// `g⁺` of a square well without the ODE engine: inside the well the
/// solution is the free regular solution at `λ − depth`, outside it is the
/// free Jost solution, and `g⁺` is their determinant at the edge.
pub fn well_jost(kappa: i32, mass: f64, depth: f64, width: f64, sp: &SpectralParam) -> Complex64 {
    let psi = free::free_jost(sp, kappa, width, Sign::Plus).unwrap();
    let phi = free::phi_entire(sp.lambda() - depth, mass, kappa, width);
    psi.det(&phi).value()
}

pub fn massless_well() -> PotentialSpec {
    PotentialSpec::square_well(1, 0.0, 4.0, 1.0).unwrap()
}

pub fn tent() -> PotentialSpec {
    PotentialSpec::tent(1, 0.0, 2.0, 1.0).unwrap()
}

/// Zeros of the analytic square-well `g⁺` in `[re_lo, re_hi] × [im_lo, im_hi]`
/// by brute force: local minima of `|g⁺|` on an `nx × ny` grid, each polished
/// by Newton steps with a difference quotient, duplicates merged.
pub fn grid_zeros(kappa: i32, mass: f64, depth: f64, width: f64, region: [f64; 4], nx: usize, ny: usize) -> Vec<Complex64> {
    use rayon::prelude::*;
    let [re_lo, re_hi, im_lo, im_hi] = region;
    let g = |l: Complex64| SpectralParam::bulk(l, mass).map(|sp| well_jost(kappa, mass, depth, width, &sp)).ok();
    let at = |i: usize, j: usize| Complex64::new(re_lo + (re_hi - re_lo) * i as f64 / (nx - 1) as f64, im_lo + (im_hi - im_lo) * j as f64 / (ny - 1) as f64);
    let grid: Vec<Vec<f64>> =
        (0..nx).into_par_iter().map(|i| (0..ny).map(|j| g(at(i, j)).map_or(f64::INFINITY, |v| v.norm())).collect()).collect();
    let mut seeds = Vec::new();
    for i in 1..nx - 1 {
        for j in 1..ny - 1 {
            let v = grid[i][j];
            let lowest = (0..3).all(|a| (0..3).all(|b| (a == 1 && b == 1) || grid[i + a - 1][j + b - 1] > v));
            if lowest {
                seeds.push(at(i, j));
            }
        }
    }
    // the edges are lines of the grid too: a zero just outside can leave a
    // minimum on the boundary row
    for i in 1..nx - 1 {
        for j in [0, ny - 1] {
            let v = grid[i][j];
            if grid[i - 1][j] > v && grid[i + 1][j] > v {
                seeds.push(at(i, j));
            }
        }
    }
    let h = 1e-6;
    let polished: Vec<Complex64> = seeds
        .par_iter()
        .filter_map(|&z0| {
            let mut z = z0;
            for _ in 0..50 {
                let f = g(z)?;
                let d = (g(z + h)? - g(z - h)?) / (2.0 * h);
                let step = f / d;
                z -= step;
                if step.norm() < 1e-14 * (1.0 + z.norm()) {
                    break;
                }
            }
            let f = g(z)?;
            let d = (g(z + h)? - g(z - h)?) / (2.0 * h);
            ((f / d).norm() < 1e-10 && (z - z0).norm() < 0.1).then_some(z)
        })
        .collect();
    let mut out: Vec<Complex64> = Vec::new();
    for z in polished {
        let inside = z.re >= re_lo && z.re <= re_hi && z.im >= im_lo && z.im <= im_hi;
        if inside && !out.iter().any(|w| (w - z).norm() < 1e-8) {
            out.push(z);
        }
    }
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    out
}

/// Eigenvalues of a massive square well: sign changes of the (real) upper-rim
/// `g⁺` on `n` gap points, refined by bisection.
pub fn gap_grid_eigenvalues(kappa: i32, mass: f64, depth: f64, width: f64, n: usize) -> Vec<f64> {
    let g = |x: f64| {
        let sp = SpectralParam::new(Complex64::new(x, 0.0), mass, radial_dirac::Rim::Upper).unwrap();
        well_jost(kappa, mass, depth, width, &sp).re
    };
    let xs: Vec<f64> = (0..n).map(|j| -mass + 2.0 * mass * (j as f64 + 0.5) / n as f64).collect();
    let mut out = Vec::new();
    for w in xs.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        let fa0 = g(a);
        if fa0.signum() == g(b).signum() {
            continue;
        }
        let mut fa = fa0;
        while b - a > 1e-15 {
            let c = 0.5 * (a + b);
            let fc = g(c);
            if fc.signum() == fa.signum() {
                a = c;
                fa = fc;
            } else {
                b = c;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}
