//! Modified Fredholm determinant `D(λ) = det[(I + V R₀) e^{-V R₀}]` and the
//! identities tying it to the Jost function.
//!
//! The kernel `v(x) R₀(x, y)` jumps across the diagonal, so the Nyström
//! rule is the composite midpoint rule on each potential piece, with the
//! diagonal blocks set to the mean of the one-sided limits. That mean is
//! right for every cycle of `tr Kⁿ` except the 2-cycle inside one diagonal
//! cell, where both factors jump together: there the cell average is
//! `v² tr(AB)` rather than `v² tr((A+B)/2)²`, with `A − B` the unit jump
//! `[[0,1],[-1,0]]`. The difference is `v²/2` per cell and is put back as the
//! factor `exp(−¼ Σ wᵢ² vᵢ²)`, leaving an `O(h²)` error for the Richardson
//! estimate.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::free::{self, kernel_from_parts, Solution2};
use crate::jost::{self, JostOptions};
use crate::plane::{Rim, SpectralParam};
use crate::potential::PotentialSpec;
use crate::quad::{self, QuadOptions};
use crate::special::Sign;

/// Discretisation of `K = V R₀(λ)` on `[0, γ]`.
#[derive(Clone, Debug)]
pub struct NystromOperator {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `2N × 2N`, block `(i, j)` is `v(x_i) R₀(x_i, x_j) w_j`.
    pub matrix: DMatrix<Complex64>,
    pub lambda: Complex64,
    /// `−¼ Σ wᵢ² v(xᵢ)²`, added to `ln D`.
    pub diagonal_correction: f64,
}

/// Midpoint nodes, distributed over the pieces in proportion to length.
fn midpoint_nodes(pot: &PotentialSpec, n: usize) -> (Vec<f64>, Vec<f64>) {
    let gamma = pot.gamma();
    let pieces = pot.pieces();
    let mut counts: Vec<usize> =
        pieces.iter().map(|p| (((p.hi - p.lo) / gamma * n as f64).round() as usize).max(1)).collect();
    // fix rounding so the total is exactly n
    while counts.iter().sum::<usize>() > n {
        let i = (0..counts.len()).filter(|&i| counts[i] > 1).max_by_key(|&i| counts[i]).expect("n >= pieces");
        counts[i] -= 1;
    }
    while counts.iter().sum::<usize>() < n {
        let i = (0..counts.len()).max_by(|&a, &b| {
            let la = (pieces[a].hi - pieces[a].lo) / counts[a] as f64;
            let lb = (pieces[b].hi - pieces[b].lo) / counts[b] as f64;
            la.total_cmp(&lb)
        });
        counts[i.expect("nonempty")] += 1;
    }
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (p, &c) in pieces.iter().zip(&counts) {
        let h = (p.hi - p.lo) / c as f64;
        for j in 0..c {
            nodes.push(p.lo + (j as f64 + 0.5) * h);
            weights.push(h);
        }
    }
    (nodes, weights)
}

impl NystromOperator {
    pub fn new(pot: &PotentialSpec, sp: &SpectralParam, n: usize) -> Result<Self> {
        if n < 16 || n < pot.pieces().len() {
            return Err(Error::Usage(format!("det2 needs at least 16 nodes and one per piece, got {n}")));
        }
        let (nodes, weights) = midpoint_nodes(pot, n);
        let kappa = pot.kappa();
        let psi: Vec<Solution2> =
            nodes.iter().map(|&x| free::free_jost(sp, kappa, x, Sign::Plus)).collect::<Result<_>>()?;
        let phi: Vec<Solution2> = nodes.iter().map(|&x| free::free_phi(sp, kappa, x)).collect::<Result<_>>()?;
        let vs: Vec<f64> = nodes.iter().map(|&x| pot.eval(x)).collect();
        let k0 = sp.k0();
        let rows: Vec<Vec<Complex64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut r = vec![Complex64::new(0.0, 0.0); 4 * n];
                for j in 0..n {
                    let b = kernel_from_parts(&psi[i], &phi[i], &psi[j], &phi[j], k0);
                    let s = vs[i] * weights[j];
                    r[2 * j] = b[0][0] * s;
                    r[2 * j + 1] = b[0][1] * s;
                    r[2 * n + 2 * j] = b[1][0] * s;
                    r[2 * n + 2 * j + 1] = b[1][1] * s;
                }
                r
            })
            .collect();
        let matrix = DMatrix::from_fn(2 * n, 2 * n, |a, b| {
            let (i, comp) = (a / 2, a % 2);
            rows[i][comp * 2 * n + b]
        });
        let diagonal_correction = -0.25 * vs.iter().zip(&weights).map(|(v, w)| (v * w).powi(2)).sum::<f64>();
        Ok(NystromOperator { nodes, weights, matrix, lambda: sp.lambda(), diagonal_correction })
    }

    /// `det(I + K) e^{-tr K}`, accumulated in logarithms.
    pub fn det2(&self) -> Complex64 {
        let n = self.matrix.nrows();
        let trace: Complex64 = (0..n).map(|i| self.matrix[(i, i)]).sum();
        let a = DMatrix::<Complex64>::identity(n, n) + &self.matrix;
        let lu = a.lu();
        let packed = lu.lu_internal();
        let mut log = Complex64::new(0.0, 0.0);
        for i in 0..n {
            log += packed[(i, i)].ln();
        }
        let sign: Complex64 = lu.p().determinant();
        sign * (log - trace + self.diagonal_correction).exp()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// `D(λ)` from the Richardson pair `(N/2, N)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Det2 {
    /// Extrapolated value `(4D_N − D_{N/2})/3`.
    pub value: Complex64,
    /// `D_N` itself.
    pub raw: Complex64,
    /// `|D_N − D_{N/2}|/3`.
    pub error: f64,
    pub nodes: usize,
}

fn check_point(sp: &SpectralParam) -> Result<()> {
    if sp.rim() != Rim::Bulk {
        return Err(Error::Usage("det2 is defined off the gap".into()));
    }
    Ok(())
}

/// Modified Fredholm determinant with `N` nodes.
pub fn det2(pot: &PotentialSpec, sp: &SpectralParam, n: usize) -> Result<Det2> {
    check_point(sp)?;
    if pot.pieces().is_empty() || pot.is_free() {
        return Ok(Det2 { value: Complex64::new(1.0, 0.0), raw: Complex64::new(1.0, 0.0), error: 0.0, nodes: n });
    }
    let fine = NystromOperator::new(pot, sp, n)?.det2();
    let coarse = NystromOperator::new(pot, sp, n / 2)?.det2();
    Ok(Det2 { value: (4.0 * fine - coarse) / 3.0, raw: fine, error: (fine - coarse).norm() / 3.0, nodes: n })
}

/// `D'(λ)/D(λ)` by a 16-node Cauchy integral of `ln`-free values.
pub fn det2_log_derivative(pot: &PotentialSpec, sp: &SpectralParam, n: usize) -> Result<Complex64> {
    check_point(sp)?;
    let rho = jost::cauchy_radius(sp);
    let d0 = det2(pot, sp, n)?.value;
    let d = jost::cauchy_derivative(|z| Ok(det2(pot, &SpectralParam::bulk(z, sp.mass())?, n)?.value), sp.lambda(), rho, 16)?;
    Ok(d / d0)
}

/// `Ω` tabulated on fixed 15-point panels of `[-T, T]`, reusable for many
/// Cauchy integrals `(1/π) ∫ (Ω(t) − Ω₀)/(t − z) dt` with `Im z ≳ 0.5`.
#[derive(Clone, Debug)]
pub struct OmegaTable {
    pub t_max: f64,
    omega0: f64,
    nodes: Vec<f64>,
    kronrod: Vec<f64>,
    gauss: Vec<f64>,
    values: Vec<f64>,
    /// Fitted `C` in `|Ω − Ω₀| ≤ C ln t / t` at the cut-off.
    pub decay_constant: f64,
}

impl OmegaTable {
    pub fn new(pot: &PotentialSpec, t_max: f64) -> Result<Self> {
        let m = pot.mass();
        let o0 = pot.integral();
        let step = 1.0 / pot.gamma().max(1.0);
        let mut right = vec![m];
        while right.last().expect("nonempty") + step < t_max {
            let t = right.last().expect("nonempty") + step;
            right.push(t);
        }
        right.push(t_max);
        let mut breaks: Vec<f64> = right.iter().rev().map(|t| -t).collect();
        if m > 0.0 {
            breaks.push(m);
        }
        breaks.extend(right.iter().skip(1));
        let mut nodes = Vec::new();
        let mut kronrod = Vec::new();
        let mut gauss = Vec::new();
        for w in breaks.windows(2) {
            if w[0] < w[1] {
                let (x, wk, wg) = quad::gk15_rule(w[0], w[1]);
                nodes.extend(x);
                kronrod.extend(wk);
                gauss.extend(wg);
            }
        }
        let values: Vec<f64> = nodes
            .par_iter()
            .map(|&t| if t.abs() <= m { Ok(0.0) } else { free::omega(pot, t) })
            .collect::<Result<_>>()?;
        let far = (free::omega(pot, t_max)? - o0).abs().max((free::omega(pot, -t_max)? - o0).abs());
        Ok(OmegaTable { t_max, omega0: o0, nodes, kronrod, gauss, values, decay_constant: far * t_max / t_max.ln() })
    }

    /// Cauchy integral with its Kronrod–Gauss error and the tail bound
    /// `(2C/π)(ln T + 1)/T`.
    pub fn cauchy(&self, z: Complex64) -> QuadResultPair {
        let mut k = Complex64::new(0.0, 0.0);
        let mut g = Complex64::new(0.0, 0.0);
        for i in 0..self.nodes.len() {
            let f = (self.values[i] - self.omega0) / (self.nodes[i] - z);
            k += f * self.kronrod[i];
            g += f * self.gauss[i];
        }
        let tail = 2.0 * self.decay_constant / PI * (self.t_max.ln() + 1.0) / self.t_max;
        QuadResultPair { value: k / PI, error: (k - g).norm() / PI, tail }
    }
}

/// `(1/π) ∫_{-T}^{T} (Ω(t) − Ω₀)/(t − z) dt` with `Ω = 0` on the gap.
pub fn omega_cauchy_integral(pot: &PotentialSpec, z: Complex64, t_max: f64) -> Result<QuadResultPair> {
    Ok(OmegaTable::new(pot, t_max)?.cauchy(z))
}

/// A quadrature value with its error and the neglected-tail bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResultPair {
    pub value: Complex64,
    pub error: f64,
    pub tail: f64,
}

/// Both sides of `g⁺(z) = k₀ D(z) exp(iΩ₀ + (1/π)∫ (Ω(t)−Ω₀)/(t−z) dt)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelationReport {
    pub lambda: Complex64,
    pub jost: Complex64,
    pub determinant: Det2,
    pub rhs: Complex64,
    /// `|g⁺ − rhs| / |g⁺|`.
    pub mismatch: f64,
    /// Relative effect of the truncated `|t| > T` part, `≈ |rhs|·tail`.
    pub tail_bound: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct RelationOptions {
    pub nodes: usize,
    pub t_max: f64,
}

impl Default for RelationOptions {
    fn default() -> Self {
        RelationOptions { nodes: 512, t_max: 400.0 }
    }
}

pub fn determinant_jost_relation_check(pot: &PotentialSpec, sp: &SpectralParam, opts: &RelationOptions) -> Result<RelationReport> {
    let table = if pot.pieces().is_empty() { None } else { Some(OmegaTable::new(pot, opts.t_max)?) };
    determinant_jost_relation_check_with(pot, sp, opts.nodes, table.as_ref())
}

/// As [`determinant_jost_relation_check`] with a prepared [`OmegaTable`].
pub fn determinant_jost_relation_check_with(
    pot: &PotentialSpec,
    sp: &SpectralParam,
    nodes: usize,
    table: Option<&OmegaTable>,
) -> Result<RelationReport> {
    if sp.lambda().im <= 0.0 {
        return Err(Error::Usage("the relation check needs Im lambda > 0".into()));
    }
    let g = jost::jost_value(pot, sp, &JostOptions::default())?.g;
    let d = det2(pot, sp, nodes)?;
    let c = match table {
        Some(t) => t.cauchy(sp.lambda()),
        None => QuadResultPair { value: Complex64::new(0.0, 0.0), error: 0.0, tail: 0.0 },
    };
    let rhs = sp.k0() * d.value * (Complex64::new(0.0, pot.integral()) + c.value).exp();
    Ok(RelationReport {
        lambda: sp.lambda(),
        jost: g,
        determinant: d,
        rhs,
        mismatch: (g - rhs).norm() / g.norm(),
        tail_bound: c.tail,
    })
}

/// `φ_sc(λ) = Ω(λ) + arg D(λ+i0)` compared modulo `2π`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseIdentityReport {
    pub lambda: f64,
    /// Principal `arg g⁺ + π/2`.
    pub phase: f64,
    pub omega: f64,
    pub arg_d: f64,
    /// Distance of `phase − Ω − arg D` from `2πℤ`.
    pub mismatch: f64,
    /// Change of `arg D` when `λ + i0` is replaced by `λ + iε`, `ε = 10⁻⁴`.
    pub eps_sensitivity: f64,
}

pub fn phase_identity_check(pot: &PotentialSpec, lambda: f64, nodes: usize) -> Result<PhaseIdentityReport> {
    let m = pot.mass();
    let sp = SpectralParam::bulk(Complex64::new(lambda, 0.0), m)?;
    let g = jost::jost_value(pot, &sp, &JostOptions::default())?.g;
    // k is analytic across the continuous spectrum, so the real point is the
    // limit from ℂ₊
    let d = det2(pot, &sp, nodes)?.value;
    let de = det2(pot, &SpectralParam::bulk(Complex64::new(lambda, 1e-4), m)?, nodes)?.value;
    let om = free::omega(pot, lambda)?;
    let phase = g.arg() + FRAC_PI_2;
    let diff = phase - om - d.arg();
    let mismatch = (diff - TAU * (diff / TAU).round()).abs();
    Ok(PhaseIdentityReport { lambda, phase, omega: om, arg_d: d.arg(), mismatch, eps_sensitivity: (de / d).arg().abs() })
}

/// `Tr(R − R₀) = k₀'/k₀ − g⁺'/g⁺`.
pub fn resolvent_trace_difference(pot: &PotentialSpec, sp: &SpectralParam) -> Result<Complex64> {
    if sp.lambda().im == 0.0 {
        return Err(Error::Usage("the resolvent trace needs Im lambda != 0".into()));
    }
    let opts = JostOptions::fast();
    let g = jost::jost_value(pot, sp, &opts)?.g;
    if g.norm() < 1e-10 * sp.k0().norm() {
        return Err(Error::Pole(sp.lambda()));
    }
    let dg = jost::jost_derivative(pot, sp, &opts)?;
    Ok(sp.k0_log_derivative() - dg / g)
}

/// `∫ v(x) tr R₀(x, x; λ) dx`.
pub fn diagonal_trace(pot: &PotentialSpec, sp: &SpectralParam) -> Result<Complex64> {
    let kappa = pot.kappa();
    let k0 = sp.k0();
    let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-12, ..Default::default() };
    let mut breaks = pot.breakpoints();
    if breaks.first() == Some(&0.0) {
        breaks[0] = 0.0;
    }
    let r = quad::integrate_breaks(
        |x| {
            if x <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let v = pot.eval(x);
            if v == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let (Ok(p), Ok(f)) = (free::free_jost(sp, kappa, x, Sign::Plus), free::free_phi(sp, kappa, x)) else {
                return Complex64::new(f64::NAN, 0.0);
            };
            let e = (p.scale + f.scale).exp();
            v * e * (p.value[0] * f.value[0] + p.value[1] * f.value[1]) / k0
        },
        &breaks,
        &opts,
    )?;
    Ok(r.value)
}

/// `Tr(V R₀²(λ)) = d/dλ ∫ v tr R₀(x, x; λ) dx`, since `∂_λ R₀ = R₀²`.
pub fn trace_v_r0_squared(pot: &PotentialSpec, sp: &SpectralParam) -> Result<Complex64> {
    if pot.pieces().is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let rho = jost::cauchy_radius(sp);
    jost::cauchy_derivative(|z| diagonal_trace(pot, &SpectralParam::bulk(z, sp.mass())?), sp.lambda(), rho, 16)
}

/// `Tr(R − R₀) = −D'/D − Tr(V R₀²)`, the determinant route.
pub fn resolvent_trace_via_determinant(pot: &PotentialSpec, sp: &SpectralParam, nodes: usize) -> Result<Complex64> {
    if sp.lambda().im == 0.0 {
        return Err(Error::Usage("the resolvent trace needs Im lambda != 0".into()));
    }
    if pot.pieces().is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(-det2_log_derivative(pot, sp, nodes)? - trace_v_r0_squared(pot, sp)?)
}
