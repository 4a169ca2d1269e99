//! Riccati–Bessel functions of integer order.
//!
//! For an order `ν ≥ -1` this module evaluates
//!
//! * `zj_ν(z) = z j_ν(z)`,
//! * `zη_ν(z) = -z y_ν(z)`,
//! * `zh^±_ν(z) = zη_ν(z) ± i zj_ν(z)`,
//!
//! with `zj_0 = sin`, `zj_{-1} = cos`, `zη_0 = cos`, `zη_{-1} = -sin` and
//! `zh^±_0 = e^{±iz}`. Small arguments go through the power series, large
//! ones through the finite Hankel expansion, which is exact for half-integer
//! Bessel order. Results come back as [`ScaledValue`] so that the factors
//! `e^{|Im z|}` never overflow.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const SERIES_REL: f64 = 1e-18;
const SERIES_MAX_TERMS: usize = 60;

/// Integer Bessel order `κ ≥ -1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BesselOrder(i32);

impl BesselOrder {
    pub fn new(kappa: i32) -> Result<Self> {
        if kappa < -1 {
            return Err(Error::InvalidOrder(kappa));
        }
        Ok(BesselOrder(kappa))
    }

    pub fn get(self) -> i32 {
        self.0
    }
}

impl TryFrom<i32> for BesselOrder {
    type Error = Error;
    fn try_from(k: i32) -> Result<Self> {
        BesselOrder::new(k)
    }
}

/// Which Hankel function, `h^+` (outgoing) or `h^-` (incoming).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// A complex number stored as `mantissa · exp(log_scale)`.
///
/// The mantissa is kept in `[2^{-1/2}, 2^{1/2}]` in modulus by exact powers
/// of two, or is zero (and then `log_scale` is zero too).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledValue {
    mantissa: Complex64,
    log_scale: f64,
}

impl ScaledValue {
    pub const ZERO: ScaledValue = ScaledValue { mantissa: Complex64 { re: 0.0, im: 0.0 }, log_scale: 0.0 };

    pub fn new(mantissa: Complex64, log_scale: f64) -> Self {
        let a = mantissa.norm();
        if a == 0.0 || !a.is_finite() {
            if a == 0.0 {
                return Self::ZERO;
            }
            return ScaledValue { mantissa, log_scale };
        }
        let e = a.log2().round() as i32;
        let m = mantissa * 2f64.powi(-e);
        ScaledValue { mantissa: m, log_scale: log_scale + e as f64 * std::f64::consts::LN_2 }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z, 0.0)
    }

    pub fn mantissa(&self) -> Complex64 {
        self.mantissa
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// The plain complex value; overflows to infinity past `e^709`.
    pub fn value(&self) -> Complex64 {
        if self.mantissa == Complex64::new(0.0, 0.0) {
            return self.mantissa;
        }
        self.mantissa * self.log_scale.exp()
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.re == 0.0 && self.mantissa.im == 0.0
    }

    /// `ln |value|`, `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mantissa.norm().ln() + self.log_scale
    }

    /// Multiply by a plain complex number.
    pub fn scale(self, c: Complex64) -> Self {
        Self::new(self.mantissa * c, self.log_scale)
    }

    /// Mantissa rescaled to a given log scale (may underflow to zero).
    pub fn mantissa_at(&self, log_scale: f64) -> Complex64 {
        if self.is_zero() {
            return self.mantissa;
        }
        self.mantissa * (self.log_scale - log_scale).exp()
    }
}

impl Mul for ScaledValue {
    type Output = ScaledValue;
    fn mul(self, rhs: ScaledValue) -> ScaledValue {
        if self.is_zero() || rhs.is_zero() {
            return ScaledValue::ZERO;
        }
        ScaledValue::new(self.mantissa * rhs.mantissa, self.log_scale + rhs.log_scale)
    }
}

impl Add for ScaledValue {
    type Output = ScaledValue;
    fn add(self, rhs: ScaledValue) -> ScaledValue {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let s = self.log_scale.max(rhs.log_scale);
        ScaledValue::new(self.mantissa_at(s) + rhs.mantissa_at(s), s)
    }
}

impl Neg for ScaledValue {
    type Output = ScaledValue;
    fn neg(self) -> ScaledValue {
        ScaledValue { mantissa: -self.mantissa, log_scale: self.log_scale }
    }
}

impl Sub for ScaledValue {
    type Output = ScaledValue;
    fn sub(self, rhs: ScaledValue) -> ScaledValue {
        self + (-rhs)
    }
}

/// `(2n-1)!!`, equal to 1 for `n ≤ 0`.
pub fn double_factorial_odd(n: i32) -> f64 {
    (1..=n).fold(1.0, |acc, j| acc * (2 * j - 1) as f64)
}

/// Radius below which the power series is used.
pub fn switch_radius(order: i32) -> f64 {
    6f64.max(2.0 * order as f64)
}

/// Leading coefficient of `zj_ν(z) / z^{ν+1}` at `z = 0`, for any integer ν.
fn series_lead(nu: i32) -> f64 {
    if nu >= 0 {
        1.0 / double_factorial_odd(nu + 1)
    } else {
        // ν = -n-1: Γ(1/2 - n) = (-2)^n √π / (2n-1)!!
        let n = -nu - 1;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sign * double_factorial_odd(n)
    }
}

/// Entire part of the Riccati–Bessel series: `zj_ν(z) = z^{ν+1} S_ν(z²)`.
///
/// Valid for every integer ν, including the negative orders that
/// represent `zη` through `zη_κ = (-1)^κ zj_{-κ-1}`.
pub fn reduced_series(nu: i32, w: Complex64) -> Complex64 {
    let mut term = Complex64::new(series_lead(nu), 0.0);
    let mut sum = term;
    for l in 0..SERIES_MAX_TERMS {
        let l = l as f64;
        let denom = 2.0 * (l + 1.0) * (2.0 * l + 2.0 * nu as f64 + 3.0);
        term *= -w / denom;
        sum += term;
        if term.norm() < SERIES_REL * sum.norm() {
            break;
        }
    }
    sum
}

fn i_pow(n: i32) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => I,
        2 => Complex64::new(-1.0, 0.0),
        _ => -I,
    }
}

/// `zh^±_ν(z)` from the finite expansion, any `z ≠ 0`.
fn hankel_closed(nu: i32, z: Complex64, sign: Sign) -> ScaledValue {
    let s = sign.as_f64();
    let poly = if nu < 0 {
        Complex64::new(1.0, 0.0)
    } else {
        // Σ_j a_j t^j, a_j = (ν+j)! / (j! (ν-j)! 2^j), t = ±i/z
        let t = Complex64::new(0.0, s) / z;
        let mut coeffs = Vec::with_capacity(nu as usize + 1);
        let mut a = 1.0;
        for j in 0..=nu {
            coeffs.push(a);
            a *= ((nu + j + 1) * (nu - j)) as f64 / (2.0 * (j + 1) as f64);
        }
        coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * t + c)
    };
    let phase = if sign == Sign::Plus { i_pow(-nu) } else { i_pow(nu) };
    // e^{±iz} = e^{±i Re z} e^{∓Im z}
    let osc = Complex64::from_polar(1.0, s * z.re);
    ScaledValue::new(phase * osc * poly, -s * z.im)
}

fn check(order: BesselOrder) -> i32 {
    order.get()
}

/// `zj` from the power series.
pub fn riccati_j_series(order: BesselOrder, z: Complex64) -> ScaledValue {
    let nu = check(order);
    ScaledValue::from_complex(z.powi(nu + 1) * reduced_series(nu, z * z))
}

/// `zj` from the Hankel expansion; `z ≠ 0`.
pub fn riccati_j_closed(order: BesselOrder, z: Complex64) -> Result<ScaledValue> {
    let nu = check(order);
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularArgument);
    }
    let hp = hankel_closed(nu, z, Sign::Plus);
    let hm = hankel_closed(nu, z, Sign::Minus);
    Ok((hp - hm).scale(Complex64::new(0.0, -0.5)))
}

/// `zη` from the power series; `z ≠ 0`.
pub fn riccati_eta_series(order: BesselOrder, z: Complex64) -> Result<ScaledValue> {
    let nu = check(order);
    if z == Complex64::new(0.0, 0.0) && nu >= 0 {
        return Err(Error::SingularArgument);
    }
    let sign = if nu.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(ScaledValue::from_complex(sign * z.powi(-nu) * reduced_series(-nu - 1, z * z)))
}

/// `zη` from the Hankel expansion; `z ≠ 0`.
pub fn riccati_eta_closed(order: BesselOrder, z: Complex64) -> Result<ScaledValue> {
    let nu = check(order);
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularArgument);
    }
    let hp = hankel_closed(nu, z, Sign::Plus);
    let hm = hankel_closed(nu, z, Sign::Minus);
    Ok((hp + hm).scale(Complex64::new(0.5, 0.0)))
}

/// `z j_κ(z)`, an entire function of `z`.
pub fn riccati_j(order: BesselOrder, z: Complex64) -> ScaledValue {
    if z.norm() < switch_radius(order.get()) {
        riccati_j_series(order, z)
    } else {
        riccati_j_closed(order, z).expect("nonzero argument")
    }
}

/// `z η_κ(z) = -z y_κ(z)`; fails at `z = 0` (pole of order κ for κ ≥ 0).
///
/// The order `-1` is entire (`-sin z`) but `z = 0` is rejected for every
/// order, matching the Hankel functions.
pub fn riccati_eta(order: BesselOrder, z: Complex64) -> Result<ScaledValue> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularArgument);
    }
    if z.norm() < switch_radius(order.get()) {
        riccati_eta_series(order, z)
    } else {
        riccati_eta_closed(order, z)
    }
}

/// `z h^±_κ(z) = z(η_κ ± i j_κ)`; fails at `z = 0`.
pub fn riccati_h(order: BesselOrder, z: Complex64, sign: Sign) -> Result<ScaledValue> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularArgument);
    }
    Ok(hankel_closed(order.get(), z, sign))
}
