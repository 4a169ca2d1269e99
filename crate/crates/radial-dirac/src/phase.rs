//! Continuous argument of a complex function along a path.
//!
//! Consecutive samples are refined by bisection until every principal
//! argument step is below `π/2` and is confirmed by the midpoint, so the
//! accumulated change is exact as long as the function has no zero on the
//! path and the initial sampling resolves its fastest rotation.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct PhaseOptions {
    /// Largest accepted argument step between neighbouring samples.
    pub max_step: f64,
    /// Smallest parameter spacing before giving up.
    pub min_spacing: f64,
}

impl Default for PhaseOptions {
    fn default() -> Self {
        PhaseOptions { max_step: FRAC_PI_2 * 0.99, min_spacing: 1e-10 }
    }
}

/// Argument change and number of samples taken.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseTrack {
    pub change: f64,
    pub samples: usize,
}

// arg(b/a) without forming b/a, which overflows for huge values
fn principal_step(a: Complex64, b: Complex64) -> f64 {
    let d = b.arg() - a.arg();
    if d > PI {
        d - TAU
    } else if d <= -PI {
        d + TAU
    } else {
        d
    }
}

fn refine<F: FnMut(f64) -> Result<Complex64>>(
    f: &mut F,
    t0: f64,
    v0: Complex64,
    t1: f64,
    v1: Complex64,
    opts: &PhaseOptions,
    samples: &mut usize,
) -> Result<f64> {
    if (t1 - t0).abs() < opts.min_spacing {
        return Err(Error::PhaseContinuation { a: t0.into(), b: t1.into() });
    }
    let tm = 0.5 * (t0 + t1);
    let vm = f(tm)?;
    *samples += 1;
    if vm == Complex64::new(0.0, 0.0) || !vm.is_finite() {
        return Err(Error::PhaseContinuation { a: t0.into(), b: t1.into() });
    }
    // the midpoint must confirm the step, otherwise a full turn could hide
    // between two samples
    let step = principal_step(v0, v1);
    let s1 = principal_step(v0, vm);
    let s2 = principal_step(vm, v1);
    if step.abs() < opts.max_step && s1.abs() < opts.max_step && s2.abs() < opts.max_step && (s1 + s2 - step).abs() < 1e-6 {
        return Ok(s1 + s2);
    }
    Ok(refine(f, t0, v0, tm, vm, opts, samples)? + refine(f, tm, vm, t1, v1, opts, samples)?)
}

/// Unwrapped argument of `f` at each point of the monotone grid `ts`,
/// relative to `arg f(ts[0])` which is returned as the principal value.
pub fn unwrap_on_grid<F: FnMut(f64) -> Result<Complex64>>(
    mut f: F,
    ts: &[f64],
    opts: &PhaseOptions,
) -> Result<(Vec<f64>, Vec<Complex64>, usize)> {
    let mut out = Vec::with_capacity(ts.len());
    let mut vals = Vec::with_capacity(ts.len());
    let mut samples = 0;
    let mut prev: Option<(f64, Complex64, f64)> = None;
    for &t in ts {
        let v = f(t)?;
        samples += 1;
        if v == Complex64::new(0.0, 0.0) || !v.is_finite() {
            return Err(Error::PhaseContinuation { a: t.into(), b: t.into() });
        }
        let phase = match prev {
            None => v.arg(),
            Some((tp, vp, ph)) => ph + refine(&mut f, tp, vp, t, v, opts, &mut samples)?,
        };
        out.push(phase);
        vals.push(v);
        prev = Some((t, v, phase));
    }
    Ok((out, vals, samples))
}

/// Total argument change of `f` over `t ∈ [t0, t1]` starting from `n` equal
/// subintervals.
pub fn track<F: FnMut(f64) -> Result<Complex64>>(
    f: F,
    t0: f64,
    t1: f64,
    n: usize,
    opts: &PhaseOptions,
) -> Result<PhaseTrack> {
    let n = n.max(1);
    let ts: Vec<f64> = (0..=n).map(|j| t0 + (t1 - t0) * j as f64 / n as f64).collect();
    let (ph, _, samples) = unwrap_on_grid(f, &ts, opts)?;
    Ok(PhaseTrack { change: ph[n] - ph[0], samples })
}

/// Winding number of `f` around the closed path `t ∈ [0, 1)`.
pub fn winding<F: FnMut(f64) -> Result<Complex64>>(f: F, n: usize, opts: &PhaseOptions) -> Result<(i64, usize)> {
    let t = track(f, 0.0, 1.0, n, opts)?;
    let w = t.change / std::f64::consts::TAU;
    Ok((w.round() as i64, t.samples))
}
