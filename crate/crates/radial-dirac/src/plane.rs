//! Quasimomentum and the geometry of the cut plane `Λ = ℂ \ [-m, m]`.
//!
//! `k(λ) = λ·√(1 − m²/λ²)` with the principal root. Its cut is exactly the
//! segment `[-m, m]`, so `k` is analytic on `Λ`, including across the
//! continuous spectrum, and the values of any function of `k` evaluated in
//! `ℂ₋` are the continuation from `ℂ₊` through `(-∞,-m) ∪ (m,∞)`. Real points
//! of the gap need a [`Rim`] to say from which side they are approached.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Points closer than this to `±m` are refused.
pub const BRANCH_EXCLUSION: f64 = 1e-10;

/// Side of the gap `(-m, m)` a real point belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rim {
    Bulk,
    Upper,
    Lower,
}

impl Rim {
    pub fn flipped(self) -> Rim {
        match self {
            Rim::Bulk => Rim::Bulk,
            Rim::Upper => Rim::Lower,
            Rim::Lower => Rim::Upper,
        }
    }
}

/// A point of `Λ` with its quasimomentum `k` and `k₀ = (λ+m)/(ik)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralParam {
    lambda: Complex64,
    mass: f64,
    rim: Rim,
    k: Complex64,
    k0: Complex64,
}

/// Builds a [`SpectralParam`]; see the module docs for the branch.
pub fn quasimomentum(lambda: Complex64, mass: f64, rim: Rim) -> Result<SpectralParam> {
    SpectralParam::new(lambda, mass, rim)
}

/// The involution `λ ↦ λ̄`.
pub fn star(lambda: Complex64) -> Complex64 {
    lambda.conj()
}

impl SpectralParam {
    pub fn new(lambda: Complex64, mass: f64, rim: Rim) -> Result<Self> {
        assert!(mass >= 0.0 && mass.is_finite(), "mass must be finite and nonnegative");
        for point in [mass, -mass] {
            if (lambda - point).norm() < BRANCH_EXCLUSION {
                return Err(Error::BranchPoint { lambda, point, radius: BRANCH_EXCLUSION });
            }
        }
        let in_gap = lambda.im == 0.0 && lambda.re.abs() < mass;
        match (in_gap, rim) {
            (true, Rim::Bulk) => return Err(Error::AmbiguousRim(lambda.re)),
            (false, Rim::Upper | Rim::Lower) => return Err(Error::IllegalRim(lambda)),
            _ => {}
        }
        let k = if mass == 0.0 {
            lambda
        } else if in_gap {
            let q = (mass * mass - lambda.re * lambda.re).sqrt();
            let s = if rim == Rim::Upper { 1.0 } else { -1.0 };
            Complex64::new(0.0, s * q)
        } else {
            let r = Complex64::new(1.0, 0.0) - mass * mass / (lambda * lambda);
            lambda * r.sqrt()
        };
        let k0 = if mass == 0.0 {
            Complex64::new(0.0, -1.0)
        } else {
            (lambda + mass) / (Complex64::i() * k)
        };
        Ok(SpectralParam { lambda, mass, rim, k, k0 })
    }

    /// A point off the gap.
    pub fn bulk(lambda: Complex64, mass: f64) -> Result<Self> {
        Self::new(lambda, mass, Rim::Bulk)
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn rim(&self) -> Rim {
        self.rim
    }

    pub fn k(&self) -> Complex64 {
        self.k
    }

    pub fn k0(&self) -> Complex64 {
        self.k0
    }

    /// The point `λ̄` with the rim flipped.
    pub fn star(&self) -> SpectralParam {
        SpectralParam::new(self.lambda.conj(), self.mass, self.rim.flipped())
            .expect("conjugate of a valid point is valid")
    }

    /// Distance from λ to the segment `[-m, m]` (zero on the rims).
    pub fn dist_to_cut(&self) -> f64 {
        let x = self.lambda.re.clamp(-self.mass, self.mass);
        (self.lambda - x).norm()
    }

    /// Distance to the nearer of `±m`.
    pub fn dist_to_branch_points(&self) -> f64 {
        (self.lambda - self.mass).norm().min((self.lambda + self.mass).norm())
    }

    /// `k₀'/k₀ = 1/(λ+m) − λ/(λ²−m²)`.
    pub fn k0_log_derivative(&self) -> Complex64 {
        let l = self.lambda;
        let m = self.mass;
        1.0 / (l + m) - l / (l * l - m * m)
    }
}
