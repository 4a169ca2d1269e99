//! Massless trace formulas built from the resonances.
//!
//! With `m = 0` the Jost function is entire of exponential type and has
//! the factorisation
//!
//! ```text
//! g⁺(λ) = λ^σ c e^{iγλ} lim_{r→∞} Π_{|λₙ|≤r} (1 − λ/λₙ)
//! ```
//!
//! whose logarithmic derivative gives the scattering phase derivative and
//! the resolvent trace as sums over resonances. Everything here compares
//! those sums with the direct evaluations.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::jost::{self, JostOptions};
use crate::plane::SpectralParam;
use crate::potential::PotentialSpec;
use crate::states::{self, FinderOptions, Region, State, StateKind};

/// Zeros of a massless `g⁺` with the data of its factorisation.
#[derive(Clone, Debug)]
pub struct ResonanceSet {
    /// Nonzero zeros sorted by modulus.
    pub states: Vec<State>,
    pub gamma: f64,
    /// Order of the zero at `λ = 0` (0 or 1).
    pub sigma: u32,
    /// `g⁺(0)` when `σ = 0`, `g⁺'(0)` when `σ = 1`.
    pub c_kappa: Complex64,
    /// All zeros with `|λ| ≤ radius` are in `states`.
    pub radius: f64,
}

/// Radius of the circle used for the values at `λ = 0`.
const ORIGIN_RADIUS: f64 = 0.05;

/// `(g(0), g'(0))` from the mean over a small circle (`g` is entire when
/// `m = 0`, but `λ = 0` itself is excluded from direct evaluation).
pub fn origin_coefficients(pot: &PotentialSpec, opts: &JostOptions) -> Result<(Complex64, Complex64)> {
    if pot.mass() != 0.0 {
        return Err(Error::Usage("origin coefficients need m = 0".into()));
    }
    let n = 32;
    let vals: Vec<(Complex64, Complex64)> = (0..n)
        .into_par_iter()
        .map(|j| {
            let z = Complex64::from_polar(ORIGIN_RADIUS, TAU * (j as f64 + 0.5) / n as f64);
            Ok((z, jost::jost_fast(pot, &SpectralParam::bulk(z, 0.0)?, opts)?))
        })
        .collect::<Result<_>>()?;
    let c0 = vals.iter().map(|(_, g)| g).sum::<Complex64>() / n as f64;
    let c1 = vals.iter().map(|(z, g)| g / z).sum::<Complex64>() / n as f64;
    Ok((c0, c1))
}

impl ResonanceSet {
    /// Builds the set from zeros already located, all those in `|λ| ≤ radius`.
    pub fn from_states(pot: &PotentialSpec, found: &[State], radius: f64) -> Result<Self> {
        let opts = JostOptions::fast();
        let (c0, c1) = origin_coefficients(pot, &opts)?;
        let sigma = if c0.norm() <= 1e-8 * c1.norm().max(1.0) { 1 } else { 0 };
        let mut states: Vec<State> =
            found.iter().filter(|s| s.location.norm() > 1e-6 && s.location.norm() <= radius).copied().collect();
        states.sort_by(|a, b| a.location.norm().total_cmp(&b.location.norm()).then(a.location.re.total_cmp(&b.location.re)));
        Ok(ResonanceSet { states, gamma: pot.gamma(), sigma, c_kappa: if sigma == 1 { c1 } else { c0 }, radius })
    }

    /// Locates every zero in `|λ| ≤ radius`.
    ///
    /// Searches the strip `[−R, R] × [−h, 0]`, deepening `h` until the zeros
    /// found inside the disk account for the full winding on `|λ| = R`.
    pub fn find(pot: &PotentialSpec, radius: f64, opts: &FinderOptions) -> Result<Self> {
        if pot.mass() != 0.0 {
            return Err(Error::Usage("resonance sets are for m = 0".into()));
        }
        if pot.pieces().is_empty() || pot.is_free() {
            return Ok(ResonanceSet { states: vec![], gamma: 0.0, sigma: 0, c_kappa: Complex64::new(0.0, -1.0), radius });
        }
        let gamma = pot.gamma();
        let co = states::CountingOptions { jost: opts.jost, ..Default::default() };
        let total = states::counting_function(pot, &[radius], &co)?[0].winding;
        let mut depth = (8.0 / gamma).min(radius);
        loop {
            let region = Region::new(-radius, radius, -depth, 0.0)?;
            let report = states::find_states(pot, &region, opts)?;
            let inside: i64 =
                report.states.iter().filter(|s| s.location.norm() <= radius).map(|s| s.multiplicity as i64).sum();
            if inside == total {
                return Self::from_states(pot, &report.states, radius);
            }
            if depth >= radius {
                return Err(Error::WindingMismatch { parent: total, children: inside });
            }
            depth = (2.0 * depth).min(radius);
        }
    }

    /// Zeros with `|λₙ| ≤ r`, each repeated by multiplicity.
    pub fn zeros_within(&self, r: f64) -> impl Iterator<Item = Complex64> + '_ {
        self.states
            .iter()
            .filter(move |s| s.location.norm() <= r)
            .flat_map(|s| std::iter::repeat_n(s.location, s.multiplicity as usize))
    }

    /// Partial sums of `Σ |Im λₙ| / |λₙ|²` in order of modulus.
    pub fn summability(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.zeros_within(f64::INFINITY)
            .map(|z| {
                acc += z.im.abs() / z.norm_sqr();
                acc
            })
            .collect()
    }

    fn check_truncation(&self, r: f64) -> Result<()> {
        if r > self.radius * (1.0 + 1e-12) {
            return Err(Error::Usage(format!("truncation radius {r} exceeds the searched radius {}", self.radius)));
        }
        Ok(())
    }
}

/// `λ^σ c e^{iγλ} Π_{|λₙ|≤r} (1 − λ/λₙ)`.
pub fn hadamard_eval(rs: &ResonanceSet, lambda: Complex64, r: f64) -> Result<Complex64> {
    rs.check_truncation(r)?;
    if lambda.norm() > r / 4.0 {
        return Err(Error::Usage(format!("|λ| = {} too close to the truncation radius {r}", lambda.norm())));
    }
    let mut p = rs.c_kappa * (Complex64::i() * rs.gamma * lambda).exp();
    if rs.sigma == 1 {
        p *= lambda;
    }
    for z in rs.zeros_within(r) {
        p *= 1.0 - lambda / z;
    }
    Ok(p)
}

/// `g'/g = iγ + σ/λ + Σ_{|λₙ|≤r} 1/(λ − λₙ)`.
pub fn log_derivative_sum(rs: &ResonanceSet, lambda: Complex64, r: f64) -> Result<Complex64> {
    rs.check_truncation(r)?;
    let mut s = Complex64::i() * rs.gamma;
    if rs.sigma == 1 {
        s += 1.0 / lambda;
    }
    for z in rs.zeros_within(r) {
        s += 1.0 / (lambda - z);
    }
    Ok(s)
}

/// `γ + Σ_{|λₙ|≤r} Im λₙ / |λ − λₙ|²`, multiplied by `sign`.
pub fn phase_derivative_sum(rs: &ResonanceSet, lambda: f64, r: f64, sign: f64) -> Result<f64> {
    rs.check_truncation(r)?;
    let l = Complex64::new(lambda, 0.0);
    let s: f64 = rs.zeros_within(r).map(|z| z.im / (l - z).norm_sqr()).sum();
    Ok(sign * (rs.gamma + s))
}

/// `−iγ − σ/λ − Σ_{|λₙ|≤r} 1/(λ − λₙ)`.
pub fn resolvent_trace_sum(rs: &ResonanceSet, lambda: Complex64, r: f64) -> Result<Complex64> {
    if lambda.im == 0.0 {
        return Err(Error::Usage("the resolvent trace needs Im λ ≠ 0".into()));
    }
    Ok(-log_derivative_sum(rs, lambda, r)?)
}

/// Sign that matches the resonance sum to the direct phase derivative,
/// decided by majority over `probes`.
pub fn resolve_phase_sign(pot: &PotentialSpec, rs: &ResonanceSet, probes: &[f64], r: f64) -> Result<f64> {
    let mut votes = 0i32;
    for &l in probes {
        let direct = jost::phase_derivative(pot, l)?;
        let s = phase_derivative_sum(rs, l, r, 1.0)?;
        votes += if (direct - s).abs() <= (direct + s).abs() { 1 } else { -1 };
    }
    Ok(if votes >= 0 { 1.0 } else { -1.0 })
}

/// Direct phase derivative, stepping off `λ = 0` when `m = 0`.
fn direct_phase_derivative(pot: &PotentialSpec, l: f64) -> Result<f64> {
    if pot.pieces().is_empty() || pot.is_free() {
        return Ok(0.0);
    }
    if pot.mass() == 0.0 && l.abs() < 1e-6 {
        return Ok(0.5 * (jost::phase_derivative(pot, 1e-6)? + jost::phase_derivative(pot, -1e-6)?));
    }
    jost::phase_derivative(pot, l)
}

/// The two evaluations of `−(1/π) ∫ f φ'_sc dλ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KreinReport {
    pub direct: f64,
    pub resonance_sum: f64,
    pub difference: f64,
    pub relative: f64,
}

/// Compares the right side of the trace formula computed with the direct
/// phase derivative and with the resonance sum, by Simpson's rule on an
/// equispaced grid `(λⱼ, f(λⱼ))` with an even number of intervals.
pub fn krein_trace_check(pot: &PotentialSpec, rs: &ResonanceSet, grid: &[(f64, f64)], r: f64, sign: f64) -> Result<KreinReport> {
    let n = grid.len();
    if n < 3 || (n - 1) % 2 != 0 {
        return Err(Error::Usage("test-function grid needs an odd number (≥ 3) of points".into()));
    }
    let h = (grid[n - 1].0 - grid[0].0) / (n - 1) as f64;
    if !(h > 0.0) || grid.windows(2).any(|w| ((w[1].0 - w[0].0) - h).abs() > 1e-9 * h.abs().max(1.0)) {
        return Err(Error::Usage("test-function grid must be increasing and equispaced".into()));
    }
    let fmax = grid.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    if grid[0].1.abs() > 1e-8 * fmax || grid[n - 1].1.abs() > 1e-8 * fmax {
        return Err(Error::Usage("test function has not decayed at the ends of the grid".into()));
    }
    let direct: Vec<f64> = grid.par_iter().map(|&(l, _)| direct_phase_derivative(pot, l)).collect::<Result<_>>()?;
    let sum: Vec<f64> = grid.iter().map(|&(l, _)| phase_derivative_sum(rs, l, r, sign)).collect::<Result<_>>()?;
    let simpson = |d: &[f64]| -> f64 {
        let mut acc = 0.0;
        for (j, (&(_, f), &p)) in grid.iter().zip(d).enumerate() {
            let w = if j == 0 || j == n - 1 { 1.0 } else if j % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f * p;
        }
        -acc * h / (3.0 * PI)
    };
    let a = simpson(&direct);
    let b = simpson(&sum);
    let difference = a - b;
    Ok(KreinReport { direct: a, resonance_sum: b, difference, relative: difference.abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE) })
}

/// Least-squares slope of `ln |g⁺(−it)|` over `t ∈ [t_lo, t_hi]`, which
/// tends to the exponential type `2γ`.
pub fn exponential_type(pot: &PotentialSpec, t_lo: f64, t_hi: f64, n: usize, opts: &JostOptions) -> Result<f64> {
    let n = n.max(2);
    let pts: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|j| {
            let t = t_lo + (t_hi - t_lo) * j as f64 / (n - 1) as f64;
            let g = jost::jost_fast(pot, &SpectralParam::bulk(Complex64::new(0.0, -t), pot.mass())?, opts)?;
            Ok((t, g.norm().ln()))
        })
        .collect::<Result<_>>()?;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Direct `g⁺` next to its truncated product, for one `r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HadamardRow {
    pub lambda: Complex64,
    pub r: f64,
    pub direct: Complex64,
    pub product: Complex64,
    pub relative: f64,
}

pub fn hadamard_rows(pot: &PotentialSpec, rs: &ResonanceSet, lambdas: &[Complex64], radii: &[f64]) -> Result<Vec<HadamardRow>> {
    let opts = JostOptions::fast();
    let direct: Vec<Complex64> = lambdas
        .par_iter()
        .map(|&l| jost::jost_fast(pot, &SpectralParam::bulk(l, pot.mass())?, &opts))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for &r in radii {
        for (&l, &d) in lambdas.iter().zip(&direct) {
            let p = hadamard_eval(rs, l, r)?;
            rows.push(HadamardRow { lambda: l, r, direct: d, product: p, relative: (p - d).norm() / d.norm() });
        }
    }
    Ok(rows)
}

/// Keeps only resonances (drops any zero in the closed upper half-plane).
pub fn resonances_only(states: &[State]) -> Vec<State> {
    states.iter().filter(|s| s.kind == StateKind::Resonance).copied().collect()
}
