//! Solutions of the perturbed system, the Jost function `g⁺` and `𝔉`.
//!
//! The Jost solution `f⁺` equals `ψ⁺` on `[γ, ∞)`, so it is obtained by
//! integrating `u = e^{-ikx} f⁺` backward from `γ` with exact data. The
//! regular solution is integrated forward from `x₀ = 10⁻⁶γ`. Both carry a log
//! scale so that `det(f⁺, φ)` never overflows.
//!
//! Backward integration amplifies the companion solution by up to
//! `e^{2|Im k|γ}`, which is what the validity ceiling bounds.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::free::{self, phi_entire, richardson_x2, theta_entire, Solution2};
use crate::ode::{self, OdeOptions};
use crate::phase::{self, PhaseOptions};
use crate::plane::{Rim, SpectralParam};
use crate::potential::PotentialSpec;
use crate::special::{double_factorial_odd, Sign};

/// Absolute upper bound for the ceiling; `e^{600}` still fits a double.
pub const HARD_CEILING: f64 = 600.0;

#[derive(Clone, Copy, Debug)]
pub struct JostOptions {
    pub ode: OdeOptions,
    /// Largest accepted `2|Im k|γ`.
    pub validity_ceiling: f64,
    /// Relative disagreement between the two routes treated as failure.
    pub route_tolerance: f64,
    /// Relative disagreement between the `x₀` and `x₀/2` starts treated as failure.
    pub init_tolerance: f64,
    /// Run the integral route, the second Wronskian point and the start check.
    pub cross_checks: bool,
}

impl Default for JostOptions {
    fn default() -> Self {
        JostOptions {
            ode: OdeOptions::default(),
            validity_ceiling: 40.0,
            route_tolerance: 1e-6,
            init_tolerance: 1e-8,
            cross_checks: true,
        }
    }
}

impl JostOptions {
    /// Wronskian at `γ/2` only.
    pub fn fast() -> Self {
        JostOptions { cross_checks: false, ..Default::default() }
    }

    pub fn with_ceiling(self, validity_ceiling: f64) -> Self {
        JostOptions { validity_ceiling, ..self }
    }
}

/// `2|Im k|γ`.
pub fn validity_measure(pot: &PotentialSpec, sp: &SpectralParam) -> f64 {
    2.0 * sp.k().im.abs() * pot.gamma()
}

fn check_ceiling(pot: &PotentialSpec, sp: &SpectralParam, opts: &JostOptions) -> Result<()> {
    let value = validity_measure(pot, sp);
    let ceiling = opts.validity_ceiling.min(HARD_CEILING);
    if value > ceiling {
        return Err(Error::ValidityCeiling { value, ceiling });
    }
    Ok(())
}

/// Coefficient matrix of the system at `x`, using the piece containing `mid`.
#[inline]
fn system(pot: &PotentialSpec, lambda: Complex64, x: f64, mid: f64) -> [[Complex64; 2]; 2] {
    let v = pot.eval_in_piece(mid, x);
    let m = pot.mass();
    let kx = Complex64::new(pot.kappa() as f64 / x, 0.0);
    [[-kx, m - v + lambda], [m + v - lambda, kx]]
}

#[inline]
fn apply(a: &[[Complex64; 2]; 2], y0: Complex64, y1: Complex64) -> [Complex64; 2] {
    [a[0][0] * y0 + a[0][1] * y1, a[1][0] * y0 + a[1][1] * y1]
}

/// `f⁺` at the descending points `xs` (all in `(0, γ)`), optionally with
/// `∫_{x_last}^γ v φ₀ᵀ f⁺` accumulated alongside.
fn backward_jost(
    pot: &PotentialSpec,
    sp: &SpectralParam,
    xs: &[f64],
    with_integral: bool,
    opts: &OdeOptions,
) -> Result<(Vec<Solution2>, Complex64)> {
    let gamma = pot.gamma();
    let kappa = pot.kappa();
    let k = sp.k();
    let ik = Complex64::i() * k;
    let lambda = sp.lambda();
    let m = pot.mass();
    let psi = free::free_jost(sp, kappa, gamma, Sign::Plus)?;
    let e = (psi.scale - ik * gamma).exp();
    let y0 = [psi.value[0] * e, psi.value[1] * e, Complex64::new(0.0, 0.0)];
    // in ℂ₋ the integrand reaches e^{2|Im k|γ}; keep the accumulator O(1)
    let damp = (k.im.abs() - k.im) * gamma;
    let rhs = |x: f64, mid: f64, y: &[Complex64; 3]| -> [Complex64; 3] {
        let a = system(pot, lambda, x, mid);
        let d = apply(&a, y[0], y[1]);
        let mut di = Complex64::new(0.0, 0.0);
        if with_integral {
            let v = pot.eval_in_piece(mid, x);
            if v != 0.0 {
                let p = phi_entire(lambda, m, kappa, x);
                let s = (p.scale + ik * x - damp).exp();
                di = -v * s * (p.value[0] * y[0] + p.value[1] * y[1]);
            }
        }
        [d[0] - ik * y[0], d[1] - ik * y[1], di]
    };
    let (ys, _) = ode::integrate(rhs, gamma, y0, xs, &pot.breakpoints(), opts)?;
    let sols = xs
        .iter()
        .zip(&ys)
        .map(|(&x, y)| {
            let ph = Complex64::from_polar(1.0, k.re * x);
            Solution2::new(x, [y[0] * ph, y[1] * ph], -k.im * x)
        })
        .collect();
    let integral = ys.last().map_or(Complex64::new(0.0, 0.0), |y| y[2] * damp.exp());
    Ok((sols, integral))
}

/// Regular solution at the ascending points `xs`, started at `x0` from the
/// free `φ` at `λ − v(0)`. That matches `x₀^κ/(2κ−1)!! (0, 1)ᵀ` at leading
/// order and also carries the `(kx₀)²` corrections, which otherwise limit
/// the start accuracy for large `|λ|`.
fn forward_regular(pot: &PotentialSpec, sp: &SpectralParam, x0: f64, xs: &[f64], opts: &OdeOptions) -> Result<Vec<Solution2>> {
    let a = sp.k().im.abs();
    let lambda = sp.lambda();
    let start = phi_entire(lambda - pot.eval(0.0), pot.mass(), pot.kappa(), x0).descaled();
    let damp = (-a * x0).exp();
    let y0 = [start[0] * damp, start[1] * damp];
    let rhs = |x: f64, mid: f64, y: &[Complex64; 2]| -> [Complex64; 2] {
        let m = system(pot, lambda, x, mid);
        let d = apply(&m, y[0], y[1]);
        [d[0] - a * y[0], d[1] - a * y[1]]
    };
    let (ys, _) = ode::integrate(rhs, x0, y0, xs, &pot.breakpoints(), opts)?;
    Ok(xs.iter().zip(&ys).map(|(&x, y)| Solution2::new(x, *y, a * x)).collect())
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::OutOfRange { x, range: "(0, inf)" });
    }
    Ok(())
}

/// Jost solution `f⁺(x, λ)`; equals `ψ⁺` for `x ≥ γ`.
pub fn jost_solution(pot: &PotentialSpec, sp: &SpectralParam, x: f64) -> Result<Solution2> {
    jost_solution_with(pot, sp, x, &JostOptions::default())
}

pub fn jost_solution_with(pot: &PotentialSpec, sp: &SpectralParam, x: f64, opts: &JostOptions) -> Result<Solution2> {
    check_x(x)?;
    if x >= pot.gamma() {
        return free::free_jost(sp, pot.kappa(), x, Sign::Plus);
    }
    check_ceiling(pot, sp, opts)?;
    let (s, _) = backward_jost(pot, sp, &[x], false, &opts.ode)?;
    Ok(s[0])
}

fn regular_start(pot: &PotentialSpec, x: f64) -> f64 {
    let g = pot.gamma();
    if g > 0.0 {
        (1e-6 * g).min(0.5 * x)
    } else {
        1e-6 * x
    }
}

/// Regular solution `φ ~ x^κ/(2κ−1)!! (0, 1)ᵀ` at the origin.
pub fn regular_solution(pot: &PotentialSpec, sp: &SpectralParam, x: f64) -> Result<Solution2> {
    regular_solution_with(pot, sp, x, &JostOptions::default())
}

pub fn regular_solution_with(pot: &PotentialSpec, sp: &SpectralParam, x: f64, opts: &JostOptions) -> Result<Solution2> {
    check_x(x)?;
    if pot.pieces().is_empty() {
        return free::free_phi(sp, pot.kappa(), x);
    }
    let x0 = regular_start(pot, x);
    let s = forward_regular(pot, sp, x0, &[x], &opts.ode)?[0];
    if opts.cross_checks {
        let t = forward_regular(pot, sp, 0.5 * x0, &[x], &opts.ode)?[0];
        let rel = solution_gap(&s, &t);
        if rel > opts.init_tolerance {
            return Err(Error::InitAccuracy(rel));
        }
    }
    Ok(s)
}

/// Relative distance of two solutions sampled at the same point.
fn solution_gap(a: &Solution2, b: &Solution2) -> f64 {
    let s = a.scale.max(b.scale);
    let ea = (a.scale - s).exp();
    let eb = (b.scale - s).exp();
    let d = (a.value[0] * ea - b.value[0] * eb).norm().max((a.value[1] * ea - b.value[1] * eb).norm());
    let n = (a.value[0] * ea).norm().max((a.value[1] * ea).norm());
    d / n
}

/// Which formula produced a Jost value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Wronskian,
    Integral,
}

/// `g⁺(λ)` with the diagnostics of its cross-checks (zero when skipped).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JostValue {
    pub g: Complex64,
    /// `g` from the integral route.
    pub g_integral: Complex64,
    /// Change of the Wronskian between `γ/2` and `γ/4`, relative to
    /// `max(|g|, |f⁺||φ|)`.
    pub wronskian_spread: f64,
    /// Gap between the two routes, on the same scale.
    pub route_residual: f64,
    /// Relative gap between the `x₀` and `x₀/2` starts.
    pub init_residual: f64,
}

/// The Jost function with both routes, derivative and the star value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JostSample {
    pub lambda: Complex64,
    pub g_plus: Complex64,
    pub g_minus: Complex64,
    pub dg_dlambda: Complex64,
    pub route: Route,
    /// Largest relative cross-check residual.
    pub residual: f64,
}

/// `g⁺(λ) = det(f⁺, φ)` at `γ/2`; with cross checks also at `γ/4`, through
/// `k₀ + ∫ v φ₀ᵀ f⁺`, and against a start at `x₀/2`.
pub fn jost_value(pot: &PotentialSpec, sp: &SpectralParam, opts: &JostOptions) -> Result<JostValue> {
    let k0 = sp.k0();
    if pot.pieces().is_empty() {
        return Ok(JostValue { g: k0, g_integral: k0, wronskian_spread: 0.0, route_residual: 0.0, init_residual: 0.0 });
    }
    check_ceiling(pot, sp, opts)?;
    let gamma = pot.gamma();
    let x0 = 1e-6 * gamma;
    if !opts.cross_checks {
        let (f, _) = backward_jost(pot, sp, &[0.5 * gamma], false, &opts.ode)?;
        let p = forward_regular(pot, sp, x0, &[0.5 * gamma], &opts.ode)?;
        let g = f[0].det(&p[0]).value();
        return Ok(JostValue { g, g_integral: g, wronskian_spread: 0.0, route_residual: 0.0, init_residual: 0.0 });
    }
    let (f, integral) = backward_jost(pot, sp, &[0.5 * gamma, 0.25 * gamma, x0], true, &opts.ode)?;
    let p = forward_regular(pot, sp, x0, &[0.25 * gamma, 0.5 * gamma], &opts.ode)?;
    let p_half = forward_regular(pot, sp, 0.5 * x0, &[0.5 * gamma], &opts.ode)?;
    let g = f[0].det(&p[1]).value();
    let g4 = f[1].det(&p[0]).value();
    let gi = k0 + integral;
    // near a zero of g the residuals are measured against the size of the
    // terms that cancel in the determinant
    let scale = g.norm().max((f[0].ln_norm() + p[1].ln_norm()).exp());
    let out = JostValue {
        g,
        g_integral: gi,
        wronskian_spread: (g - g4).norm() / scale,
        route_residual: (g - gi).norm() / scale,
        init_residual: solution_gap(&p[1], &p_half[0]),
    };
    if out.init_residual > opts.init_tolerance {
        return Err(Error::InitAccuracy(out.init_residual));
    }
    let worst = out.wronskian_spread.max(out.route_residual);
    if worst > opts.route_tolerance {
        return Err(Error::RouteMismatch(worst));
    }
    Ok(out)
}

/// `g⁺(λ)` by the Wronskian at `γ/2` only.
pub fn jost_fast(pot: &PotentialSpec, sp: &SpectralParam, opts: &JostOptions) -> Result<Complex64> {
    let o = JostOptions { cross_checks: false, ..*opts };
    Ok(jost_value(pot, sp, &o)?.g)
}

/// Cauchy radius used by [`jost_derivative`].
pub fn cauchy_radius(sp: &SpectralParam) -> f64 {
    (0.25 * sp.dist_to_cut()).min(0.1)
}

/// `dg⁺/dλ`: 16-node Cauchy integral off the gap, Richardson central
/// differences along a rim.
pub fn jost_derivative(pot: &PotentialSpec, sp: &SpectralParam, opts: &JostOptions) -> Result<Complex64> {
    if pot.pieces().is_empty() {
        // k₀' = k₀ · k₀'/k₀
        return Ok(sp.k0() * sp.k0_log_derivative());
    }
    let o = JostOptions { cross_checks: false, validity_ceiling: opts.validity_ceiling * 1.05 + 1.0, ..*opts };
    if sp.rim() != Rim::Bulk {
        let h = (0.25 * sp.dist_to_branch_points()).min(0.1);
        let at = |d: f64| -> Result<Complex64> {
            let q = SpectralParam::new(sp.lambda() + d, sp.mass(), sp.rim())?;
            jost_fast(pot, &q, &o)
        };
        let d1 = (at(h)? - at(-h)?) / (2.0 * h);
        let d2 = (at(0.5 * h)? - at(-0.5 * h)?) / h;
        return Ok((4.0 * d2 - d1) / 3.0);
    }
    let rho = cauchy_radius(sp);
    cauchy_derivative(|z| jost_fast(pot, &SpectralParam::bulk(z, sp.mass())?, &o), sp.lambda(), rho, 16)
}

/// `f'(z) ≈ (1/(nρ)) Σ f(z + ρω_j) ω_j⁻¹` on `n` equispaced nodes.
pub fn cauchy_derivative<F: FnMut(Complex64) -> Result<Complex64>>(mut f: F, z: Complex64, rho: f64, n: usize) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let w = Complex64::from_polar(1.0, TAU * j as f64 / n as f64);
        acc += f(z + rho * w)? / w;
    }
    Ok(acc / (n as f64 * rho))
}

/// Full sample: checked `g⁺`, `g⁻(λ) = conj(g⁺(λ̄))` and `dg⁺/dλ`.
pub fn jost_function(pot: &PotentialSpec, sp: &SpectralParam) -> Result<JostSample> {
    jost_function_with(pot, sp, &JostOptions::default())
}

pub fn jost_function_with(pot: &PotentialSpec, sp: &SpectralParam, opts: &JostOptions) -> Result<JostSample> {
    let v = jost_value(pot, sp, opts)?;
    let star = sp.star();
    let g_minus = if star == *sp { v.g.conj() } else { jost_value(pot, &star, opts)?.g.conj() };
    let dg = jost_derivative(pot, sp, opts)?;
    Ok(JostSample {
        lambda: sp.lambda(),
        g_plus: v.g,
        g_minus,
        dg_dlambda: dg,
        route: Route::Wronskian,
        residual: v.wronskian_spread.max(v.route_residual).max(v.init_residual),
    })
}

/// Parameter for a real or complex λ, taking the upper rim on the gap.
pub fn param_upper(lambda: Complex64, mass: f64) -> Result<SpectralParam> {
    if lambda.im == 0.0 && lambda.re.abs() < mass {
        SpectralParam::new(lambda, mass, Rim::Upper)
    } else {
        SpectralParam::bulk(lambda, mass)
    }
}

/// `𝔉(λ) = (λ−m) g⁺(λ) g⁻(λ)`, entire in λ.
pub fn frak_f(pot: &PotentialSpec, lambda: Complex64) -> Result<Complex64> {
    frak_f_with(pot, lambda, &JostOptions::fast())
}

pub fn frak_f_with(pot: &PotentialSpec, lambda: Complex64, opts: &JostOptions) -> Result<Complex64> {
    let m = pot.mass();
    let sp = param_upper(lambda, m)?;
    let g = jost_value(pot, &sp, opts)?.g;
    let star = sp.star();
    let gs = if star == sp { g } else { jost_value(pot, &star, opts)?.g };
    let f = (lambda - m) * g * gs.conj();
    if lambda.im == 0.0 {
        // real by symmetry; drop the rounding residue
        return Ok(Complex64::new(f.re, 0.0));
    }
    Ok(f)
}

/// `𝔉` at a real point without discarding the imaginary rounding residue.
pub fn frak_f_raw(pot: &PotentialSpec, lambda: f64, opts: &JostOptions) -> Result<Complex64> {
    let m = pot.mass();
    let z = Complex64::new(lambda, 0.0);
    let sp = param_upper(z, m)?;
    let g = jost_value(pot, &sp, opts)?.g;
    let star = sp.star();
    let gs = if star == sp { g } else { jost_value(pot, &star, opts)?.g };
    Ok((z - m) * g * gs.conj())
}

/// `ϑ̃, φ̃` at the descending points `xs < γ`, both integrated backward from
/// the free values at `γ`. Entire in λ, so any complex λ is accepted.
fn backward_tilde(pot: &PotentialSpec, lambda: Complex64, xs: &[f64], opts: &OdeOptions) -> Result<Vec<(Solution2, Solution2)>> {
    let gamma = pot.gamma();
    let m = pot.mass();
    let kappa = pot.kappa();
    let th = theta_entire(lambda, m, kappa, gamma).descaled();
    let ph = phi_entire(lambda, m, kappa, gamma).descaled();
    let rhs = |x: f64, mid: f64, y: &[Complex64; 4]| -> [Complex64; 4] {
        let a = system(pot, lambda, x, mid);
        let t = apply(&a, y[0], y[1]);
        let p = apply(&a, y[2], y[3]);
        [t[0], t[1], p[0], p[1]]
    };
    let (ys, _) = ode::integrate(rhs, gamma, [th[0], th[1], ph[0], ph[1]], xs, &pot.breakpoints(), opts)?;
    Ok(xs
        .iter()
        .zip(&ys)
        .map(|(&x, y)| (Solution2::new(x, [y[0], y[1]], 0.0), Solution2::new(x, [y[2], y[3]], 0.0)))
        .collect())
}

fn tilde_at(pot: &PotentialSpec, sp: &SpectralParam, x: f64, opts: &JostOptions) -> Result<(Solution2, Solution2)> {
    check_x(x)?;
    let (l, m, kappa) = (sp.lambda(), pot.mass(), pot.kappa());
    if x >= pot.gamma() {
        return Ok((theta_entire(l, m, kappa, x), phi_entire(l, m, kappa, x)));
    }
    check_ceiling(pot, sp, opts)?;
    Ok(backward_tilde(pot, l, &[x], &opts.ode)?[0])
}

/// `ϑ̃`: the solution equal to the free `ϑ` on `[γ, ∞)`.
pub fn theta_tilde(pot: &PotentialSpec, sp: &SpectralParam, x: f64) -> Result<Solution2> {
    Ok(tilde_at(pot, sp, x, &JostOptions::default())?.0)
}

/// `φ̃`: the solution equal to the free `φ` on `[γ, ∞)`.
pub fn phi_tilde(pot: &PotentialSpec, sp: &SpectralParam, x: f64) -> Result<Solution2> {
    Ok(tilde_at(pot, sp, x, &JostOptions::default())?.1)
}

/// `(lim x^κ ϑ̃₁/(2κ−1)!!, lim x^κ φ̃₁/(2κ−1)!!)` as `x → 0`, extrapolated
/// from `x = 10⁻⁵γ` and `10⁻⁶γ`. Any λ is allowed, `±m` included.
pub fn tilde_limits(pot: &PotentialSpec, lambda: Complex64, opts: &JostOptions) -> Result<(Complex64, Complex64)> {
    let kappa = pot.kappa();
    if pot.pieces().is_empty() {
        return Ok((Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
    }
    let k = ((lambda - pot.mass()) * (lambda + pot.mass())).sqrt();
    let value = 2.0 * k.im.abs() * pot.gamma();
    if value > opts.validity_ceiling.min(HARD_CEILING) {
        return Err(Error::ValidityCeiling { value, ceiling: opts.validity_ceiling });
    }
    let g = pot.gamma();
    let (xb, xs) = (1e-5 * g, 1e-6 * g);
    let r = backward_tilde(pot, lambda, &[xb, xs], &opts.ode)?;
    let df = double_factorial_odd(kappa);
    let lim = |i: usize| {
        let big = r[0].0.value[0] * xb.powi(kappa) / df;
        let small = r[1].0.value[0] * xs.powi(kappa) / df;
        let pb = r[0].1.value[0] * xb.powi(kappa) / df;
        let psm = r[1].1.value[0] * xs.powi(kappa) / df;
        if i == 0 {
            (big, small)
        } else {
            (pb, psm)
        }
    };
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for (i, o) in out.iter_mut().enumerate() {
        let (big, small) = lim(i);
        *o = richardson_x2(big, small, 10.0);
        let scale = 1.0 + o.norm() + big.norm();
        if (big - small).norm() > 1e-4 * scale {
            return Err(Error::Extrapolation((big - small).norm() / scale));
        }
    }
    Ok((out[0], out[1]))
}

/// `𝔉 = (λ+m) c_ϑ² + (λ−m)(λ²−m²)^{2κ} c_φ²` from [`tilde_limits`].
pub fn frak_f_via_limits(pot: &PotentialSpec, lambda: Complex64, opts: &JostOptions) -> Result<Complex64> {
    let m = pot.mass();
    let (ct, cp) = tilde_limits(pot, lambda, opts)?;
    let q = (lambda - m) * (lambda + m);
    Ok((lambda + m) * ct * ct + (lambda - m) * q.powi(2 * pot.kappa()) * cp * cp)
}

/// `d𝔉/dλ` by a Cauchy integral of [`frak_f_via_limits`] (entire, so the
/// circle may cross the gap).
pub fn frak_f_derivative(pot: &PotentialSpec, lambda: Complex64, opts: &JostOptions) -> Result<Complex64> {
    let o = JostOptions { validity_ceiling: opts.validity_ceiling * 1.05 + 1.0, ..*opts };
    cauchy_derivative(|z| frak_f_via_limits(pot, z, &o), lambda, 0.05, 16)
}

/// `S(λ) = −conj(g⁺)/g⁺` on the continuous spectrum.
pub fn scattering_matrix(pot: &PotentialSpec, lambda: f64) -> Result<Complex64> {
    let sp = SpectralParam::bulk(Complex64::new(lambda, 0.0), pot.mass())?;
    let g = jost_value(pot, &sp, &JostOptions::fast())?.g;
    Ok(-g.conj() / g)
}

/// `φ_sc'(λ) = Im(g⁺'/g⁺)` on the continuous spectrum.
pub fn phase_derivative(pot: &PotentialSpec, lambda: f64) -> Result<f64> {
    let sp = SpectralParam::bulk(Complex64::new(lambda, 0.0), pot.mass())?;
    let opts = JostOptions::fast();
    let g = jost_value(pot, &sp, &opts)?.g;
    Ok((jost_derivative(pot, &sp, &opts)? / g).im)
}

/// `φ_sc = arg g⁺ + π/2` on a monotone grid of one half-line of the
/// continuous spectrum. The branch is carried continuously from an anchor
/// far out on the same half-line, where it is fixed next to `Ω`.
pub fn scattering_phase(pot: &PotentialSpec, lambdas: &[f64]) -> Result<Vec<f64>> {
    if lambdas.is_empty() {
        return Ok(Vec::new());
    }
    let m = pot.mass();
    let side = lambdas[0].signum();
    if lambdas.iter().any(|&l| l.signum() != side || l.abs() <= m) {
        return Err(Error::OutOfRange { x: lambdas[0], range: "one half-line of |lambda| > m" });
    }
    let far = lambdas.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
    let anchor = side * (2.0 * far).max(50.0 + m);
    let opts = JostOptions::fast();
    let g_at = |l: f64| -> Result<Complex64> { jost_fast(pot, &SpectralParam::bulk(Complex64::new(l, 0.0), m)?, &opts) };
    // walk from the anchor inwards through the grid, coarse steps of ~0.5
    let mut path = vec![anchor];
    let mut order: Vec<usize> = (0..lambdas.len()).collect();
    order.sort_by(|&a, &b| lambdas[b].abs().total_cmp(&lambdas[a].abs()));
    let mut marks = Vec::with_capacity(order.len());
    for &i in &order {
        let last = *path.last().expect("nonempty");
        let n = ((last - lambdas[i]).abs() / 0.5).ceil() as usize;
        for j in 1..n {
            path.push(last + (lambdas[i] - last) * j as f64 / n as f64);
        }
        path.push(lambdas[i]);
        marks.push((i, path.len() - 1));
    }
    let (ph, _, _) = phase::unwrap_on_grid(g_at, &path, &PhaseOptions::default())?;
    let target = crate::free::omega(pot, anchor)?;
    let a0 = ph[0] + FRAC_PI_2;
    let shift = TAU * ((target - a0) / TAU).round();
    let mut out = vec![0.0; lambdas.len()];
    for (i, p) in marks {
        out[i] = ph[p] + FRAC_PI_2 + shift;
    }
    Ok(out)
}
