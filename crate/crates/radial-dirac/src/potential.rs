//! Piecewise polynomial potentials with compact support.

use crate::error::{Error, Result};

/// One polynomial piece, `v(x) = Σ coeffs[j] x^j` on `[lo, hi]`.
///
/// Coefficients are in the absolute coordinate `x`, not shifted to `lo`.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub coeffs: Vec<f64>,
}

impl Piece {
    pub fn new(lo: f64, hi: f64, coeffs: impl Into<Vec<f64>>) -> Self {
        Piece { lo, hi, coeffs: coeffs.into() }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// `∫_lo^hi v`.
    pub fn integral(&self) -> f64 {
        let prim = |x: f64| {
            self.coeffs
                .iter()
                .enumerate()
                .rev()
                .fold(0.0, |acc, (j, &c)| acc * x + c / (j as f64 + 1.0))
                * x
        };
        prim(self.hi) - prim(self.lo)
    }
}

/// Potential `v` on `[0, γ]` together with the channel κ and the mass.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialSpec {
    name: String,
    kappa: i32,
    mass: f64,
    pieces: Vec<Piece>,
}

impl PotentialSpec {
    /// Validates contiguity from 0, ordering and finiteness.
    pub fn new(name: impl Into<String>, kappa: i32, mass: f64, pieces: Vec<Piece>) -> Result<Self> {
        if kappa < 1 {
            return Err(Error::InvalidPotential(format!("kappa must be >= 1, got {kappa}")));
        }
        if !(mass.is_finite() && mass >= 0.0) {
            return Err(Error::InvalidPotential(format!("mass must be finite and >= 0, got {mass}")));
        }
        let mut edge = 0.0;
        for (i, p) in pieces.iter().enumerate() {
            if !(p.lo.is_finite() && p.hi.is_finite()) {
                return Err(Error::InvalidPotential(format!("pieces[{i}]: non-finite bounds")));
            }
            if p.hi <= p.lo {
                return Err(Error::InvalidPotential(format!("pieces[{i}]: hi {} <= lo {}", p.hi, p.lo)));
            }
            if p.lo < edge {
                return Err(Error::InvalidPotential(format!(
                    "pieces[{i}]: overlaps the previous piece (lo {} < {edge})",
                    p.lo
                )));
            }
            if p.lo > edge {
                return Err(Error::InvalidPotential(format!(
                    "pieces[{i}]: gap in coverage between {edge} and {}",
                    p.lo
                )));
            }
            if p.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidPotential(format!("pieces[{i}]: non-finite coefficient")));
            }
            edge = p.hi;
        }
        Ok(PotentialSpec { name: name.into(), kappa, mass, pieces })
    }

    /// `v ≡ 0` with empty support.
    pub fn free(kappa: i32, mass: f64) -> Result<Self> {
        Self::new("free", kappa, mass, Vec::new())
    }

    /// Constant `depth` on `[0, width]`.
    pub fn square_well(kappa: i32, mass: f64, depth: f64, width: f64) -> Result<Self> {
        Self::new("square well", kappa, mass, vec![Piece::new(0.0, width, [depth])])
    }

    /// Continuous tent of height `peak` on `[0, width]`, vanishing at both ends.
    pub fn tent(kappa: i32, mass: f64, peak: f64, width: f64) -> Result<Self> {
        let h = width / 2.0;
        let s = peak / h;
        Self::new(
            "tent",
            kappa,
            mass,
            vec![Piece::new(0.0, h, [0.0, s]), Piece::new(h, width, [2.0 * peak, -s])],
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kappa(&self) -> i32 {
        self.kappa
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Right end of the support; 0 for the free potential.
    pub fn gamma(&self) -> f64 {
        self.pieces.last().map_or(0.0, |p| p.hi)
    }

    pub fn is_free(&self) -> bool {
        self.pieces.iter().all(|p| p.coeffs.iter().all(|&c| c == 0.0))
    }

    /// Piece boundaries, `0 = b₀ < b₁ < … < γ`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.pieces.iter().map(|p| p.lo).collect();
        if let Some(p) = self.pieces.last() {
            b.push(p.hi);
        }
        b
    }

    /// `v(x)`; at a breakpoint the piece starting there wins, zero past γ.
    pub fn eval(&self, x: f64) -> f64 {
        match self.pieces.iter().find(|p| x >= p.lo && x < p.hi) {
            Some(p) => p.eval(x),
            None => match self.pieces.last() {
                Some(p) if x == p.hi => p.eval(x),
                _ => 0.0,
            },
        }
    }

    /// `v(x)` seen from the left of `x`.
    pub fn eval_left(&self, x: f64) -> f64 {
        match self.pieces.iter().find(|p| x > p.lo && x <= p.hi) {
            Some(p) => p.eval(x),
            None => self.eval(x),
        }
    }

    /// Polynomial of the piece containing `mid`, evaluated at `x`. Lets an
    /// integrator stepping inside one piece ignore which side of a breakpoint
    /// its trial points land on.
    pub fn eval_in_piece(&self, mid: f64, x: f64) -> f64 {
        match self.pieces.iter().find(|p| mid >= p.lo && mid <= p.hi) {
            Some(p) => p.eval(x),
            None => 0.0,
        }
    }

    /// `Ω₀ = ∫ v`.
    pub fn integral(&self) -> f64 {
        self.pieces.iter().map(Piece::integral).sum()
    }

    pub fn sup_norm(&self) -> f64 {
        self.pieces
            .iter()
            .flat_map(|p| (0..=64).map(move |j| p.eval(p.lo + (p.hi - p.lo) * j as f64 / 64.0).abs()))
            .fold(0.0, f64::max)
    }

    /// Same potential with another mass.
    pub fn with_mass(&self, mass: f64) -> Result<Self> {
        Self::new(self.name.clone(), self.kappa, mass, self.pieces.clone())
    }

    /// Same potential in another channel.
    pub fn with_kappa(&self, kappa: i32) -> Result<Self> {
        Self::new(self.name.clone(), kappa, self.mass, self.pieces.clone())
    }
}
