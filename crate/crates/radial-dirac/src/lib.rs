//! Resonances of the radial Dirac operator with a compactly supported
//! potential.
//!
//! The operator acts on `f = (f₁, f₂)ᵀ` on the half-line through
//!
//! ```text
//! f₁' + (κ/x) f₁ − (m − v(x) + λ) f₂ = 0
//! f₂' − (κ/x) f₂ − (m + v(x) − λ) f₁ = 0
//! ```
//!
//! with mass `m ≥ 0`, channel `κ ≥ 1` and `supp v ⊂ [0, γ]`. The crate is
//! organised bottom-up:
//!
//! * [`special`]: Riccati–Bessel functions,
//! * [`plane`]: the quasimomentum `k(λ)` on the cut plane,
//! * [`potential`]: piecewise polynomial potentials,
//! * [`free`]: closed-form solutions of the free system,
//! * [`jost`]: Jost solutions, the Jost function and `𝔉`,
//! * [`fredholm`]: the modified Fredholm determinant,
//! * [`states`]: eigenvalues, resonances, anti-bound and virtual states,
//! * [`trace`]: massless trace formulas.
//!
//! The guide in `book/` is compiled into [`guide`] so its examples run as
//! doctests.

pub mod error;
pub mod fredholm;
pub mod free;
pub mod jost;
pub mod ode;
pub mod phase;
pub mod plane;
pub mod potential;
pub mod quad;
pub mod special;
pub mod states;
pub mod trace;

pub mod guide;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use plane::{Rim, SpectralParam};
pub use potential::{Piece, PotentialSpec};
