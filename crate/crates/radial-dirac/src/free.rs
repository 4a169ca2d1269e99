//! Closed-form objects of the free system `v ≡ 0`.
//!
//! With `z = kx` the fundamental solutions are
//!
//! ```text
//! φ   = k^{-κ} ( (λ+m)/k · zj_κ(z),  zj_{κ-1}(z) )
//! ϑ   = k^{κ}  ( zη_κ(z),  k/(λ+m) · zη_{κ-1}(z) )
//! ψ^± = ∓i k^κ ( (λ+m)/k · zh^±_κ(z),  zh^±_{κ-1}(z) )
//! ```
//!
//! `φ` and `ϑ` are entire in λ; for small `|kx|` they are evaluated from
//! series in `k²x²`, so nothing breaks at `λ = ±m`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::plane::SpectralParam;
use crate::potential::PotentialSpec;
use crate::quad::{self, QuadOptions};
use crate::special::{self, reduced_series, BesselOrder, ScaledValue, Sign};

/// A solution vector `value · e^{scale}` at the point `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Solution2 {
    pub x: f64,
    pub value: [Complex64; 2],
    pub scale: f64,
}

impl Solution2 {
    pub fn new(x: f64, value: [Complex64; 2], scale: f64) -> Self {
        Solution2 { x, value, scale }
    }

    fn from_scaled(x: f64, a: ScaledValue, b: ScaledValue) -> Self {
        let s = if a.is_zero() {
            b.log_scale()
        } else if b.is_zero() {
            a.log_scale()
        } else {
            a.log_scale().max(b.log_scale())
        };
        Solution2 { x, value: [a.mantissa_at(s), b.mantissa_at(s)], scale: s }
    }

    /// Plain components (may overflow for very large scales).
    pub fn descaled(&self) -> [Complex64; 2] {
        let e = self.scale.exp();
        [self.value[0] * e, self.value[1] * e]
    }

    /// `det(self, other) = self₁ other₂ − self₂ other₁`.
    pub fn det(&self, other: &Solution2) -> ScaledValue {
        let d = self.value[0] * other.value[1] - self.value[1] * other.value[0];
        ScaledValue::new(d, self.scale + other.scale)
    }

    /// Largest component modulus including the scale, as a logarithm.
    pub fn ln_norm(&self) -> f64 {
        self.value[0].norm().max(self.value[1].norm()).ln() + self.scale
    }
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::OutOfRange { x, range: "(0, inf)" });
    }
    Ok(())
}

fn ord(k: i32) -> BesselOrder {
    BesselOrder::new(k).expect("order >= -1")
}

/// `φ(x, λ)` for any complex λ (entire in λ).
pub fn phi_entire(lambda: Complex64, mass: f64, kappa: i32, x: f64) -> Solution2 {
    let k2 = (lambda - mass) * (lambda + mass);
    let w = k2 * (x * x);
    let r = special::switch_radius(kappa);
    if w.norm() < r * r {
        let xk = x.powi(kappa);
        return Solution2::new(x, [(lambda + mass) * (xk * x) * reduced_series(kappa, w), xk * reduced_series(kappa - 1, w)], 0.0);
    }
    let k = k2.sqrt();
    let z = k * x;
    let a = special::riccati_j(ord(kappa), z).scale((lambda + mass) * k.powi(-kappa - 1));
    let b = special::riccati_j(ord(kappa - 1), z).scale(k.powi(-kappa));
    Solution2::from_scaled(x, a, b)
}

/// `ϑ(x, λ)` for any complex λ (entire in λ).
pub fn theta_entire(lambda: Complex64, mass: f64, kappa: i32, x: f64) -> Solution2 {
    let k2 = (lambda - mass) * (lambda + mass);
    let w = k2 * (x * x);
    let r = special::switch_radius(kappa);
    if w.norm() < r * r {
        let s = if kappa % 2 == 0 { 1.0 } else { -1.0 };
        let xk = x.powi(-kappa);
        return Solution2::new(
            x,
            [s * xk * reduced_series(-kappa - 1, w), -s * (lambda - mass) * (xk * x) * reduced_series(-kappa, w)],
            0.0,
        );
    }
    let k = k2.sqrt();
    let z = k * x;
    let a = special::riccati_eta(ord(kappa), z).expect("z != 0").scale(k.powi(kappa));
    let b = special::riccati_eta(ord(kappa - 1), z).expect("z != 0").scale(k.powi(kappa + 1) / (lambda + mass));
    Solution2::from_scaled(x, a, b)
}

/// Regular solution `φ ~ x^κ/(2κ−1)!! (0, 1)ᵀ` at the origin.
pub fn free_phi(sp: &SpectralParam, kappa: i32, x: f64) -> Result<Solution2> {
    check_x(x)?;
    Ok(phi_entire(sp.lambda(), sp.mass(), kappa, x))
}

/// Singular solution `ϑ ~ (2κ−1)!!/x^κ (1, 0)ᵀ`, with `det(ϑ, φ) = 1`.
pub fn free_theta(sp: &SpectralParam, kappa: i32, x: f64) -> Result<Solution2> {
    check_x(x)?;
    Ok(theta_entire(sp.lambda(), sp.mass(), kappa, x))
}

/// Jost solutions `ψ^±`, `ψ^± ~ (∓ik)^κ e^{±ikx} (±k₀, 1)ᵀ` at infinity.
pub fn free_jost(sp: &SpectralParam, kappa: i32, x: f64, sign: Sign) -> Result<Solution2> {
    check_x(x)?;
    let k = sp.k();
    let z = k * x;
    let pre = Complex64::new(0.0, -sign.as_f64()) * k.powi(kappa);
    let a = special::riccati_h(ord(kappa), z, sign)?.scale(pre * (sp.lambda() + sp.mass()) / k);
    let b = special::riccati_h(ord(kappa - 1), z, sign)?.scale(pre);
    Ok(Solution2::from_scaled(x, a, b))
}

/// A 2×2 block of the free resolvent kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResolventKernelValue {
    pub x: f64,
    pub y: f64,
    pub block: [[Complex64; 2]; 2],
}

fn outer(a: &Solution2, b: &Solution2, c: Complex64) -> [[Complex64; 2]; 2] {
    let e = c * (a.scale + b.scale).exp();
    [
        [a.value[0] * b.value[0] * e, a.value[0] * b.value[1] * e],
        [a.value[1] * b.value[0] * e, a.value[1] * b.value[1] * e],
    ]
}

/// Kernel of the outgoing free resolvent from precomputed `ψ⁺`, `φ` at the
/// two points (`x`-side first). The diagonal `x = y` gets the mean of the
/// one-sided limits.
pub fn kernel_from_parts(
    psi_x: &Solution2,
    phi_x: &Solution2,
    psi_y: &Solution2,
    phi_y: &Solution2,
    k0: Complex64,
) -> [[Complex64; 2]; 2] {
    let inv = 1.0 / k0;
    if psi_x.x > psi_y.x {
        outer(psi_x, phi_y, inv)
    } else if psi_x.x < psi_y.x {
        outer(phi_x, psi_y, inv)
    } else {
        let a = outer(psi_x, phi_y, inv);
        let b = outer(phi_x, psi_y, inv);
        [[0.5 * (a[0][0] + b[0][0]), 0.5 * (a[0][1] + b[0][1])], [0.5 * (a[1][0] + b[1][0]), 0.5 * (a[1][1] + b[1][1])]]
    }
}

/// `R₀(x, y, λ)`: `ψ⁺(x) φ(y)ᵀ / k₀` for `y < x`, `φ(x) ψ⁺(y)ᵀ / k₀` for `x < y`.
pub fn free_resolvent_kernel(sp: &SpectralParam, kappa: i32, x: f64, y: f64) -> Result<ResolventKernelValue> {
    check_x(x)?;
    check_x(y)?;
    let px = free_jost(sp, kappa, x, Sign::Plus)?;
    let fx = free_phi(sp, kappa, x)?;
    let py = free_jost(sp, kappa, y, Sign::Plus)?;
    let fy = free_phi(sp, kappa, y)?;
    Ok(ResolventKernelValue { x, y, block: kernel_from_parts(&px, &fx, &py, &fy, sp.k0()) })
}

/// `lim_{x→0} x^κ ψ₁⁺(x)/(2κ−1)!!`, Richardson-extrapolated from
/// `x ∈ {10⁻⁵, 10⁻⁶}`; equals `k₀`.
pub fn free_jost_limit(sp: &SpectralParam, kappa: i32) -> Result<Complex64> {
    let df = special::double_factorial_odd(kappa);
    let at = |x: f64| -> Result<Complex64> {
        let p = free_jost(sp, kappa, x, Sign::Plus)?;
        Ok(p.descaled()[0] * x.powi(kappa) / df)
    };
    Ok(richardson_x2(at(1e-5)?, at(1e-6)?, 10.0))
}

/// Removes an `O(x²)` term from values at `x` and `x/ratio`.
pub(crate) fn richardson_x2(big: Complex64, small: Complex64, ratio: f64) -> Complex64 {
    let r2 = ratio * ratio;
    (r2 * small - big) / (r2 - 1.0)
}

/// `ρ'(s) = k^{2κ+1} / (π (s+m))` on `|s| > m`.
pub fn spectral_density(mass: f64, kappa: i32, s: f64) -> Result<f64> {
    if s.abs() <= mass {
        return Err(Error::OutOfRange { x: s, range: "|s| > m" });
    }
    let k = s.signum() * ((s - mass) * (s + mass)).sqrt();
    Ok(k.powi(2 * kappa + 1) / (std::f64::consts::PI * (s + mass)))
}

fn omega_integrand(lambda: f64, mass: f64, kappa: i32, k: f64, y: f64) -> f64 {
    let z = Complex64::new(k * y, 0.0);
    let a = special::riccati_j(ord(kappa), z).value().re;
    let b = special::riccati_j(ord(kappa - 1), z).value().re;
    k / (lambda - mass) * a * a + k / (lambda + mass) * b * b
}

/// `Ω(λ)` with its quadrature error estimate; zero in the gap.
pub fn omega_with_error(pot: &PotentialSpec, lambda: f64, opts: &QuadOptions) -> Result<(f64, f64)> {
    let m = pot.mass();
    if (lambda.abs() - m).abs() < crate::plane::BRANCH_EXCLUSION {
        return Err(Error::BranchPoint { lambda: Complex64::new(lambda, 0.0), point: lambda.signum() * m, radius: crate::plane::BRANCH_EXCLUSION });
    }
    if lambda.abs() < m || pot.pieces().is_empty() {
        return Ok((0.0, 0.0));
    }
    let k = lambda.signum() * ((lambda - m) * (lambda + m)).sqrt();
    let kappa = pot.kappa();
    quad::integrate_real(|y| pot.eval(y) * omega_integrand(lambda, m, kappa, k, y), &breaks_for(pot, k), opts)
}

/// Breakpoints refined so each panel holds about one oscillation.
fn breaks_for(pot: &PotentialSpec, k: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for p in pot.pieces() {
        let n = (((p.hi - p.lo) * k.abs() / std::f64::consts::PI).ceil() as usize).max(1);
        for j in 0..n {
            out.push(p.lo + (p.hi - p.lo) * j as f64 / n as f64);
        }
    }
    out.push(pot.gamma());
    out
}

/// `Ω(λ) = ∫ v(y) ( k/(λ−m) [zj_κ(ky)]² + k/(λ+m) [zj_{κ−1}(ky)]² ) dy`.
pub fn omega(pot: &PotentialSpec, lambda: f64) -> Result<f64> {
    let opts = QuadOptions { abs_tol: 1e-11, rel_tol: 1e-12, ..Default::default() };
    omega_with_error(pot, lambda, &opts).map(|r| r.0)
}

/// Both sides of `Tr(V R₀²(λ)) = (1/π) ∫_σ Ω(s)/(s−λ)² ds`, truncated at `|s| ≤ s_max`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceCrosscheck {
    /// `∫ ρ'(s) (∫ v φᵀφ dx) / (s−λ)² ds`.
    pub spectral_side: Complex64,
    /// `(1/π) ∫ Ω(s)/(s−λ)² ds`.
    pub omega_side: Complex64,
    /// Size of the neglected `|s| > s_max` part, `≈ (Ω₀/π)(1/(S−λ) + 1/(S+λ))`.
    pub tail: Complex64,
}

impl TraceCrosscheck {
    pub fn difference(&self) -> f64 {
        (self.spectral_side - self.omega_side).norm()
    }
}

fn phi_square_integral(pot: &PotentialSpec, s: f64) -> Result<f64> {
    let m = pot.mass();
    let kappa = pot.kappa();
    let k = s.signum() * ((s - m) * (s + m)).sqrt();
    let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-12, ..Default::default() };
    let lam = Complex64::new(s, 0.0);
    let (v, _) = quad::integrate_real(
        |x| {
            let p = phi_entire(lam, m, kappa, x).descaled();
            pot.eval(x) * (p[0].re * p[0].re + p[1].re * p[1].re)
        },
        &breaks_for(pot, k),
        &opts,
    )?;
    Ok(v)
}

fn spectrum_breaks(mass: f64, s_max: f64) -> [Vec<f64>; 2] {
    // graded panels: fine near the thresholds and near |s| ~ |λ|
    let mut right = vec![];
    let lo = mass;
    let mut a = 0.0;
    let mut step = 0.25;
    while lo + a < s_max {
        right.push(lo + a);
        a += step;
        step = (step * 1.25).min(10.0);
    }
    right.push(s_max);
    let left: Vec<f64> = right.iter().rev().map(|s| -s).collect();
    [left, right]
}

/// Evaluates both sides of the trace identity for `Im λ ≠ 0`.
pub fn omega_trace_crosscheck(pot: &PotentialSpec, lambda: Complex64, s_max: f64) -> Result<TraceCrosscheck> {
    if lambda.im == 0.0 {
        return Err(Error::Usage("omega_trace_crosscheck needs Im lambda != 0".into()));
    }
    let m = pot.mass();
    let kappa = pot.kappa();
    let zero = Complex64::new(0.0, 0.0);
    if pot.pieces().is_empty() {
        return Ok(TraceCrosscheck { spectral_side: zero, omega_side: zero, tail: zero });
    }
    let opts = QuadOptions { abs_tol: 1e-10, rel_tol: 1e-9, ..Default::default() };
    let mut spectral = zero;
    let mut omega_side = zero;
    for breaks in spectrum_breaks(m, s_max) {
        // keep the integrable threshold behaviour away from the endpoint ±m
        let mut b = breaks.clone();
        for e in b.iter_mut() {
            if (e.abs() - m).abs() < 1e-9 {
                *e += e.signum() * 1e-9 * (m.max(1.0));
                if m == 0.0 {
                    *e = if *e == 0.0 { 0.0 } else { *e };
                }
            }
        }
        let rs = quad::integrate_breaks(
            |s| {
                if s.abs() <= m || s == 0.0 {
                    return zero;
                }
                let w = spectral_density(m, kappa, s).unwrap_or(0.0) * phi_square_integral(pot, s).unwrap_or(f64::NAN);
                Complex64::new(w, 0.0) / ((s - lambda) * (s - lambda))
            },
            &b,
            &opts,
        )?;
        let ro = quad::integrate_breaks(
            |s| {
                if s.abs() <= m || s == 0.0 {
                    return zero;
                }
                Complex64::new(omega(pot, s).unwrap_or(f64::NAN), 0.0) / ((s - lambda) * (s - lambda))
            },
            &b,
            &opts,
        )?;
        spectral += rs.value;
        omega_side += ro.value / std::f64::consts::PI;
    }
    let o0 = pot.integral();
    let tail = o0 / std::f64::consts::PI * (1.0 / (s_max - lambda) + 1.0 / (s_max + lambda));
    Ok(TraceCrosscheck { spectral_side: spectral, omega_side, tail })
}
