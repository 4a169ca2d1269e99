//! Dormand–Prince 8(5,3) integrator for small complex systems.
//!
//! Steps never cross a breakpoint: the interval is cut at every break and
//! every requested output point, and the right-hand side is told which
//! segment it is being evaluated for, so piecewise coefficients are taken
//! from the correct side even at the segment ends.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerances and limits for [`integrate`].
#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    /// Relative tolerance per component.
    pub rtol: f64,
    /// Components below `floor · max_j |y_j|` are measured against that floor.
    pub floor: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-11, floor: 1e-3, max_steps: 200_000 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evals: usize,
}

/// Integrates `y' = f(x, mid, y)` from `x0` through each point of `stops`.
///
/// `stops` must be monotone in the direction of integration. `breaks` are
/// extra cut points (potential breakpoints); `mid` passed to `f` is the
/// midpoint of the current segment. Returns the state at every stop.
pub fn integrate<const N: usize, F>(
    mut f: F,
    x0: f64,
    y0: [Complex64; N],
    stops: &[f64],
    breaks: &[f64],
    opts: &OdeOptions,
) -> Result<(Vec<[Complex64; N]>, OdeStats)>
where
    F: FnMut(f64, f64, &[Complex64; N]) -> [Complex64; N],
{
    let mut stats = OdeStats::default();
    let mut out = Vec::with_capacity(stops.len());
    let Some(&last) = stops.last() else {
        return Ok((out, stats));
    };
    let dir = if last >= x0 { 1.0 } else { -1.0 };
    let mut x = x0;
    let mut y = y0;
    let mut h = 0.0f64;
    for &stop in stops {
        if (stop - x) * dir < 0.0 {
            return Err(Error::Integrator { x: stop, reason: "output points not monotone" });
        }
        let mut cuts: Vec<f64> =
            breaks.iter().copied().filter(|&b| (b - x) * dir > 0.0 && (stop - b) * dir > 0.0).collect();
        cuts.sort_by(|a, b| (dir * a).total_cmp(&(dir * b)));
        cuts.push(stop);
        for b in cuts {
            if b == x {
                continue;
            }
            let mid = 0.5 * (x + b);
            let mut rhs = |xx: f64, yy: &[Complex64; N]| f(xx, mid, yy);
            if h == 0.0 {
                h = initial_step(&mut rhs, x, &y, dir, (b - x).abs(), opts, &mut stats);
            }
            y = segment(&mut rhs, x, y, b, &mut h, opts, &mut stats)?;
            x = b;
        }
        out.push(y);
    }
    Ok((out, stats))
}

fn sk<const N: usize>(y: &[Complex64; N], y1: &[Complex64; N], opts: &OdeOptions) -> [f64; N] {
    let ymax = y.iter().chain(y1.iter()).map(|c| c.norm()).fold(0.0, f64::max);
    let mut s = [0.0; N];
    for i in 0..N {
        let v = y[i].norm().max(y1[i].norm()).max(opts.floor * ymax);
        s[i] = opts.rtol * if v > 0.0 { v } else { 1.0 };
    }
    s
}

fn initial_step<const N: usize, G>(
    f: &mut G,
    x: f64,
    y: &[Complex64; N],
    dir: f64,
    hmax: f64,
    opts: &OdeOptions,
    stats: &mut OdeStats,
) -> f64
where
    G: FnMut(f64, &[Complex64; N]) -> [Complex64; N],
{
    let f0 = f(x, y);
    stats.evals += 1;
    let s = sk(y, y, opts);
    let dnf: f64 = (0..N).map(|i| (f0[i].norm() / s[i]).powi(2)).sum();
    let dny: f64 = (0..N).map(|i| (y[i].norm() / s[i]).powi(2)).sum();
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 { 1e-6 } else { 0.01 * (dny / dnf).sqrt() };
    h = h.min(hmax);
    let mut y1 = *y;
    for i in 0..N {
        y1[i] += f0[i] * (dir * h);
    }
    let f1 = f(x + dir * h, &y1);
    stats.evals += 1;
    let der2 = (0..N).map(|i| ((f1[i] - f0[i]).norm() / s[i]).powi(2)).sum::<f64>().sqrt() / h;
    let der12 = der2.max(dnf.sqrt());
    let h1 = if der12 <= 1e-15 { (h * 1e-3).max(1e-6) } else { (0.01 / der12).powf(1.0 / 8.0) };
    (100.0 * h).min(h1).min(hmax)
}

fn segment<const N: usize, G>(
    f: &mut G,
    mut x: f64,
    mut y: [Complex64; N],
    b: f64,
    h: &mut f64,
    opts: &OdeOptions,
    stats: &mut OdeStats,
) -> Result<[Complex64; N]>
where
    G: FnMut(f64, &[Complex64; N]) -> [Complex64; N],
{
    let dir = if b >= x { 1.0 } else { -1.0 };
    let zero = [Complex64::new(0.0, 0.0); N];
    let mut k = [zero; 12];
    k[0] = f(x, &y);
    stats.evals += 1;
    let mut reject_streak = false;
    loop {
        let remaining = (b - x).abs();
        if remaining <= 1e-14 * b.abs().max(1e-300) {
            return Ok(y);
        }
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::Integrator { x, reason: "step budget exhausted" });
        }
        let mut hh = h.abs().min(remaining);
        // avoid leaving a sliver at the end of the segment
        if remaining - hh < 1e-3 * hh {
            hh = remaining;
        }
        if hh < 1e-14 * x.abs().max(remaining) {
            return Err(Error::Integrator { x, reason: "step size underflow" });
        }
        let hs = dir * hh;
        let last = hh == remaining;
        for s in 1..12 {
            let mut ys = y;
            for (j, a) in A[s][..s].iter().enumerate() {
                if *a != 0.0 {
                    let ah = a * hs;
                    for i in 0..N {
                        ys[i] += k[j][i] * ah;
                    }
                }
            }
            let xs = if last && s == 11 { b } else { x + C[s] * hs };
            k[s] = f(xs, &ys);
        }
        stats.evals += 11;
        let mut bk = zero;
        let mut e5 = zero;
        for s in 0..12 {
            for i in 0..N {
                if B[s] != 0.0 {
                    bk[i] += k[s][i] * B[s];
                }
                if ER[s] != 0.0 {
                    e5[i] += k[s][i] * ER[s];
                }
            }
        }
        let mut y1 = y;
        for i in 0..N {
            y1[i] += bk[i] * hs;
        }
        let scale = sk(&y, &y1, opts);
        let mut err3 = 0.0;
        let mut err5 = 0.0;
        for i in 0..N {
            let e3 = bk[i] - k[0][i] * BHH[0] - k[8][i] * BHH[1] - k[11][i] * BHH[2];
            err3 += (e3.norm() / scale[i]).powi(2);
            err5 += (e5[i].norm() / scale[i]).powi(2);
        }
        let mut deno = err5 + 0.01 * err3;
        if deno <= 0.0 {
            deno = 1.0;
        }
        let err = hh * err5 * (1.0 / (N as f64 * deno)).sqrt();
        if !err.is_finite() {
            stats.rejected += 1;
            *h = 0.25 * hh;
            reject_streak = true;
            continue;
        }
        let fac = (0.9 * err.powf(-1.0 / 8.0)).clamp(1.0 / 3.0, 6.0);
        if err <= 1.0 {
            stats.accepted += 1;
            x = if last { b } else { x + hs };
            y = y1;
            if !y.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::Integrator { x, reason: "solution overflow" });
            }
            k[0] = f(x, &y);
            stats.evals += 1;
            let grow = if reject_streak { fac.min(1.0) } else { fac };
            // keep the long-run step when the last one was clipped by the segment end
            if !last {
                *h = hh * grow;
            } else {
                *h = h.abs().max(hh * grow);
            }
            reject_streak = false;
        } else {
            stats.rejected += 1;
            *h = hh * fac.min(1.0);
            reject_streak = true;
        }
    }
}

const C: [f64; 12] = [
    0.0,
    5.260_015_195_876_773E-2,
    7.890_022_793_815_16E-2,
    1.183_503_419_072_274E-1,
    2.816_496_580_927_726E-1,
    3.333_333_333_333_333E-1,
    0.25,
    3.076_923_076_923_077E-1,
    6.512_820_512_820_513E-1,
    0.6,
    8.571_428_571_428_571E-1,
    1.0,
];

const B: [f64; 12] = [
    5.429_373_411_656_876_5E-2,
    0.0,
    0.0,
    0.0,
    0.0,
    4.450_312_892_752_409,
    1.891_517_899_314_500_3,
    -5.801_203_960_010_585,
    3.111_643_669_578_199E-1,
    -1.521_609_496_625_161E-1,
    2.013_654_008_040_303_4E-1,
    4.471_061_572_777_259E-2,
];

const ER: [f64; 12] = [
    1.312_004_499_419_488E-2,
    0.0,
    0.0,
    0.0,
    0.0,
    -1.225_156_446_376_204_4,
    -4.957_589_496_572_502E-1,
    1.664_377_182_454_986_4,
    -3.503_288_487_499_736_6E-1,
    3.341_791_187_130_175E-1,
    8.192_320_648_511_571E-2,
    -2.235_530_786_388_629_4E-2,
];

const BHH: [f64; 3] = [2.440_944_881_889_764E-1, 7.338_466_882_816_118E-1, 2.205_882_352_941_176_6E-2];

#[rustfmt::skip]
const A: [[f64; 12]; 12] = [
    [0.0; 12],
    [5.260_015_195_876_773E-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.972_505_698_453_79E-2, 5.917_517_095_361_37E-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [2.958_758_547_680_685E-2, 0.0, 8.876_275_643_042_054E-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [2.413_651_341_592_667E-1, 0.0, -8.845_494_793_282_861E-1, 9.248_340_032_617_92E-1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.703_703_703_703_703_5E-2, 0.0, 0.0, 1.708_286_087_294_738_6E-1, 1.254_676_875_668_224_2E-1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.7109375E-2, 0.0, 0.0, 1.702_522_110_195_440_5E-1, 6.021_653_898_045_596E-2, -1.7578125E-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.709_200_011_850_479E-2, 0.0, 0.0, 1.703_839_257_122_399_8E-1, 1.072_620_304_463_732_8E-1, -1.531_943_774_862_440_2E-2, 8.273_789_163_814_023E-3, 0.0, 0.0, 0.0, 0.0, 0.0],
    [6.241_109_587_160_757E-1, 0.0, 0.0, -3.360_892_629_446_941_4, -8.682_193_468_417_26E-1, 2.759_209_969_944_671E1, 2.015_406_755_047_789_4E1, -4.348_988_418_106_996E1, 0.0, 0.0, 0.0, 0.0],
    [4.776_625_364_382_643_4E-1, 0.0, 0.0, -2.488_114_619_971_667_7, -5.902_908_268_368_43E-1, 2.123_005_144_818_119_3E1, 1.527_923_363_288_242_3E1, -3.328_821_096_898_486E1, -2.033_120_170_850_862_7E-2, 0.0, 0.0, 0.0],
    [-9.371_424_300_859_873E-1, 0.0, 0.0, 5.186_372_428_844_064, 1.091_437_348_996_729_5, -8.149_787_010_746_927, -1.852_006_565_999_696E1, 2.273_948_709_935_050_5E1, 2.493_605_552_679_652_3, -3.046_764_471_898_219_6, 0.0, 0.0],
    [2.273_310_147_516_538, 0.0, 0.0, -1.053_449_546_673_725E1, -2.000_872_058_224_862_5, -1.795_893_186_311_88E1, 2.794_888_452_941_996E1, -2.858_998_277_135_023_5, -8.872_856_933_530_63, 1.236_056_717_579_430_3E1, 6.433_927_460_157_636E-1, 0.0],
];
