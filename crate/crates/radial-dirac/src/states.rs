//! Eigenvalues, resonances, anti-bound and virtual states.
//!
//! Zeros of `g⁺` off the gap are located by the argument principle on
//! rectangles, subdivided until each holds one zero, and then polished by
//! Newton steps. Zeros on the gap are the real zeros of `𝔉`; which rim they
//! sit on decides between eigenvalue and anti-bound state.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::Mutex;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::jost::{self, JostOptions};
use crate::phase::{self, PhaseOptions};
use crate::plane::{Rim, SpectralParam, BRANCH_EXCLUSION};
use crate::potential::PotentialSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateKind {
    Eigenvalue,
    Resonance,
    AntiBound,
    Virtual,
}

impl StateKind {
    pub fn name(self) -> &'static str {
        match self {
            StateKind::Eigenvalue => "eigenvalue",
            StateKind::Resonance => "resonance",
            StateKind::AntiBound => "anti_bound",
            StateKind::Virtual => "virtual",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct State {
    pub location: Complex64,
    pub kind: StateKind,
    pub multiplicity: u32,
    /// `|g⁺|` (or `|𝔉|` on the gap) at the polished point.
    pub residual: f64,
    pub rim: Rim,
}

/// Closed rectangle `[re_lo, re_hi] × [im_lo, im_hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Region {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
}

impl Region {
    pub fn new(re_lo: f64, re_hi: f64, im_lo: f64, im_hi: f64) -> Result<Self> {
        if !(re_lo < re_hi && im_lo < im_hi) || ![re_lo, re_hi, im_lo, im_hi].iter().all(|v| v.is_finite()) {
            return Err(Error::Usage(format!("empty or non-finite region {re_lo},{re_hi},{im_lo},{im_hi}")));
        }
        Ok(Region { re_lo, re_hi, im_lo, im_hi })
    }

    pub fn diameter(&self) -> f64 {
        (self.re_hi - self.re_lo).hypot(self.im_hi - self.im_lo)
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_lo + self.re_hi), 0.5 * (self.im_lo + self.im_hi))
    }

    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.re_lo - slack && z.re <= self.re_hi + slack && z.im >= self.im_lo - slack && z.im <= self.im_hi + slack
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_lo, self.im_lo),
            Complex64::new(self.re_hi, self.im_lo),
            Complex64::new(self.re_hi, self.im_hi),
            Complex64::new(self.re_lo, self.im_hi),
        ]
    }

    /// Largest `|Im λ|` on the rectangle.
    pub fn max_abs_im(&self) -> f64 {
        self.im_lo.abs().max(self.im_hi.abs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellStatus {
    Pending,
    Split,
    Isolated,
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourCell {
    pub rectangle: Region,
    pub winding: i64,
    pub phase_samples: usize,
    pub status: CellStatus,
}

#[derive(Clone, Copy, Debug)]
pub struct FinderOptions {
    pub jost: JostOptions,
    /// Smallest cell edge as a fraction of the region diameter.
    pub min_cell_fraction: f64,
    /// Initial sampling step along cell edges, in units of `1/γ`.
    pub edge_step: f64,
    /// Newton stops once the step is below this, relative to `1 + |λ|`.
    pub newton_tol: f64,
    pub max_newton: usize,
}

impl Default for FinderOptions {
    fn default() -> Self {
        FinderOptions {
            jost: JostOptions::fast(),
            min_cell_fraction: 1e-6,
            edge_step: 0.2,
            newton_tol: 1e-13,
            max_newton: 60,
        }
    }
}

/// Output of [`find_states`].
#[derive(Clone, Debug)]
pub struct FindReport {
    pub states: Vec<State>,
    pub cells: Vec<ContourCell>,
    /// Winding of `g⁺` along the boundary of the searched region.
    pub total_winding: i64,
    /// The region actually searched (nudged off a branch point if needed).
    pub region: Region,
}

/// Memoised `g⁺` on the grid of points the contours visit.
struct Evaluator<'a> {
    pot: &'a PotentialSpec,
    opts: JostOptions,
    cache: Mutex<HashMap<(u64, u64), Complex64>>,
}

impl<'a> Evaluator<'a> {
    fn new(pot: &'a PotentialSpec, opts: JostOptions) -> Self {
        Evaluator { pot, opts, cache: Mutex::new(HashMap::new()) }
    }

    fn g(&self, z: Complex64) -> Result<Complex64> {
        let key = (z.re.to_bits(), z.im.to_bits());
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(*v);
        }
        let v = jost::jost_fast(self.pot, &SpectralParam::bulk(z, self.pot.mass())?, &self.opts)?;
        self.cache.lock().expect("cache lock").insert(key, v);
        Ok(v)
    }

    fn dg(&self, z: Complex64) -> Result<Complex64> {
        jost::jost_derivative(self.pot, &SpectralParam::bulk(z, self.pot.mass())?, &self.opts)
    }
}

/// Points of `[a, b]` on the lattice `origin + jh`, plus both ends, in the
/// direction of travel.
fn lattice_points(a: f64, b: f64, origin: f64, h: f64) -> Vec<f64> {
    let (lo, hi) = (a.min(b), a.max(b));
    let j0 = ((lo - origin) / h).floor() as i64 + 1;
    let j1 = ((hi - origin) / h).ceil() as i64 - 1;
    let mut pts = vec![lo];
    for j in j0..=j1 {
        let t = origin + j as f64 * h;
        if t > lo && t < hi {
            pts.push(t);
        }
    }
    pts.push(hi);
    if a > b {
        pts.reverse();
    }
    pts
}

/// Argument change of `f` around a rectangle, counter-clockwise.
fn rectangle_phase<F: Fn(Complex64) -> Result<Complex64>>(
    f: &F,
    rect: &Region,
    origin: Complex64,
    h: f64,
    opts: &PhaseOptions,
) -> Result<(f64, usize)> {
    let c = rect.corners();
    let mut total = 0.0;
    let mut samples = 0;
    for e in 0..4 {
        let (p, q) = (c[e], c[(e + 1) % 4]);
        let (ts, change) = if p.im == q.im {
            let ts = lattice_points(p.re, q.re, origin.re, h);
            let y = p.im;
            let (ph, _, s) = phase::unwrap_on_grid(|t| f(Complex64::new(t, y)), &ts, opts)?;
            (s, ph[ph.len() - 1] - ph[0])
        } else {
            let ts = lattice_points(p.im, q.im, origin.im, h);
            let x = p.re;
            let (ph, _, s) = phase::unwrap_on_grid(|t| f(Complex64::new(x, t)), &ts, opts)?;
            (s, ph[ph.len() - 1] - ph[0])
        };
        total += change;
        samples += ts;
    }
    Ok((total, samples))
}

fn winding_of(change: f64, rect: &Region) -> Result<i64> {
    let w = change / TAU;
    if (w - w.round()).abs() > 0.05 {
        return Err(Error::PhaseContinuation { a: rect.corners()[0], b: rect.corners()[2] });
    }
    Ok(w.round() as i64)
}

/// Moves edges that pass within `10⁻⁶` of `±m` outward by `10⁻³`, and
/// refuses regions that meet the cut `[−m, m]` otherwise.
fn admissible_region(region: &Region, mass: f64) -> Result<Region> {
    let mut r = *region;
    let clear = 1e-6_f64.max(BRANCH_EXCLUSION);
    for p in [mass, -mass] {
        if (r.im_hi).abs() < clear && p > r.re_lo - clear && p < r.re_hi + clear {
            r.im_hi = 1e-3;
        }
        if (r.im_lo).abs() < clear && p > r.re_lo - clear && p < r.re_hi + clear {
            r.im_lo = -1e-3;
        }
    }
    let meets = r.im_lo <= clear && r.im_hi >= -clear && r.re_lo <= mass + clear && r.re_hi >= -mass - clear;
    if mass > 0.0 && meets {
        return Err(Error::Usage(format!("region meets the cut [-{mass}, {mass}]")));
    }
    Ok(r)
}

fn split(rect: &Region) -> [Region; 4] {
    // slightly off-centre cuts keep zeros off the new edges more often
    let xm = rect.re_lo + (rect.re_hi - rect.re_lo) * 0.5123;
    let ym = rect.im_lo + (rect.im_hi - rect.im_lo) * 0.4871;
    [
        Region { re_lo: rect.re_lo, re_hi: xm, im_lo: rect.im_lo, im_hi: ym },
        Region { re_lo: xm, re_hi: rect.re_hi, im_lo: rect.im_lo, im_hi: ym },
        Region { re_lo: rect.re_lo, re_hi: xm, im_lo: ym, im_hi: rect.im_hi },
        Region { re_lo: xm, re_hi: rect.re_hi, im_lo: ym, im_hi: rect.im_hi },
    ]
}

fn newton(ev: &Evaluator, start: Complex64, cell: &Region, opts: &FinderOptions) -> Result<Option<(Complex64, f64)>> {
    let mut z = start;
    let slack = 0.5 * (cell.re_hi - cell.re_lo).max(cell.im_hi - cell.im_lo);
    for _ in 0..opts.max_newton {
        let g = ev.g(z)?;
        if g == Complex64::new(0.0, 0.0) {
            return Ok(Some((z, 0.0)));
        }
        let step = g / ev.dg(z)?;
        z -= step;
        if !cell.contains(z, slack) || !z.is_finite() {
            return Ok(None);
        }
        if step.norm() < opts.newton_tol * (1.0 + z.norm()) {
            let g = ev.g(z)?;
            return Ok(if cell.contains(z, 1e-9 * (1.0 + z.norm())) { Some((z, g.norm())) } else { None });
        }
    }
    Ok(None)
}

fn classify(z: Complex64) -> StateKind {
    if z.im < 0.0 {
        StateKind::Resonance
    } else {
        StateKind::Eigenvalue
    }
}

/// Zeros of `g⁺` inside `region` (which must avoid the cut).
pub fn find_states(pot: &PotentialSpec, region: &Region, opts: &FinderOptions) -> Result<FindReport> {
    let region = admissible_region(region, pot.mass())?;
    if pot.pieces().is_empty() || pot.is_free() {
        return Ok(FindReport { states: vec![], cells: vec![], total_winding: 0, region });
    }
    let ev = Evaluator::new(pot, opts.jost);
    let f = |z: Complex64| ev.g(z);
    let h = opts.edge_step / pot.gamma();
    let origin = Complex64::new(region.re_lo, region.im_lo);
    let popts = PhaseOptions::default();
    let min_edge = opts.min_cell_fraction * region.diameter();

    let (change, samples) = rectangle_phase(&f, &region, origin, h, &popts)?;
    let total = winding_of(change, &region)?;
    let mut cells = Vec::new();
    let mut states = Vec::new();
    let mut pending = vec![ContourCell { rectangle: region, winding: total, phase_samples: samples, status: CellStatus::Pending }];
    while !pending.is_empty() {
        let results: Vec<Result<(ContourCell, Vec<ContourCell>, Option<State>)>> = pending
            .par_iter()
            .map(|cell| -> Result<(ContourCell, Vec<ContourCell>, Option<State>)> {
                let mut cell = *cell;
                if cell.winding == 0 {
                    cell.status = CellStatus::Empty;
                    return Ok((cell, vec![], None));
                }
                let r = cell.rectangle;
                let small = (r.re_hi - r.re_lo).max(r.im_hi - r.im_lo) < min_edge;
                if cell.winding == 1 || small {
                    if let Some((z, res)) = newton(&ev, r.center(), &r, opts)? {
                        cell.status = CellStatus::Isolated;
                        let st = State {
                            location: z,
                            kind: classify(z),
                            multiplicity: cell.winding as u32,
                            residual: res,
                            rim: Rim::Bulk,
                        };
                        return Ok((cell, vec![], Some(st)));
                    }
                    if small {
                        // a cluster below the resolution: report it whole
                        cell.status = CellStatus::Isolated;
                        let z = r.center();
                        let st = State {
                            location: z,
                            kind: classify(z),
                            multiplicity: cell.winding as u32,
                            residual: ev.g(z)?.norm(),
                            rim: Rim::Bulk,
                        };
                        return Ok((cell, vec![], Some(st)));
                    }
                }
                let mut children = Vec::with_capacity(4);
                let mut sum = 0;
                for c in split(&r) {
                    let (ch, s) = rectangle_phase(&f, &c, origin, h, &popts)?;
                    let w = winding_of(ch, &c)?;
                    sum += w;
                    children.push(ContourCell { rectangle: c, winding: w, phase_samples: s, status: CellStatus::Pending });
                }
                if sum != cell.winding {
                    return Err(Error::WindingMismatch { parent: cell.winding, children: sum });
                }
                cell.status = CellStatus::Split;
                Ok((cell, children, None))
            })
            .collect();
        let mut next = Vec::new();
        for r in results {
            let (cell, children, st) = r?;
            cells.push(cell);
            next.extend(children);
            states.extend(st);
        }
        pending = next;
    }
    states.sort_by(|a, b| a.location.re.total_cmp(&b.location.re).then(a.location.im.total_cmp(&b.location.im)));
    Ok(FindReport { states, cells, total_winding: total, region })
}

/// Winding of `g⁺` on the circle `|λ − z| = radius`.
pub fn root_winding(pot: &PotentialSpec, z: Complex64, radius: f64, opts: &JostOptions) -> Result<i64> {
    curve_winding(pot, |t| z + Complex64::from_polar(radius, TAU * t), 16, opts, false)
}

/// States whose partner `−λ̄` is missing from the list (within `tol`).
pub fn unpaired_states(states: &[State], tol: f64) -> Vec<State> {
    states
        .iter()
        .filter(|s| {
            let partner = -s.location.conj();
            !states.iter().any(|t| (t.location - partner).norm() <= tol * (1.0 + partner.norm()))
        })
        .copied()
        .collect()
}

/// Winding number of `g⁺` (`m = 0`) or `𝔉` (`m > 0`) around an arbitrary
/// closed curve `t ↦ z(t)`, `t ∈ [0, 1]`.
fn curve_winding<C: Fn(f64) -> Complex64>(pot: &PotentialSpec, curve: C, n: usize, opts: &JostOptions, use_frak: bool) -> Result<i64> {
    let f = |t: f64| -> Result<Complex64> {
        let z = curve(t);
        if use_frak {
            jost::frak_f_with(pot, z, opts)
        } else {
            jost::jost_fast(pot, &SpectralParam::bulk(z, pot.mass())?, opts)
        }
    };
    let tr = phase::track(f, 0.0, 1.0, n, &PhaseOptions::default())?;
    let w = tr.change / TAU;
    if (w - w.round()).abs() > 0.05 {
        return Err(Error::PhaseContinuation { a: curve(0.0), b: curve(0.5) });
    }
    Ok(w.round() as i64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CountRow {
    pub r: f64,
    /// Winding of `g⁺` (`m = 0`) or `𝔉` (`m > 0`) on `|λ| = r`.
    pub winding: i64,
    /// `N(r)`: the winding for `m = 0`, half of it for `m > 0`.
    pub count: f64,
    /// `N(r) / (2rγ/π)`.
    pub ratio: f64,
    /// Share of the zeros in `ℂ₋` with `δ < |arg λ| < π − δ`, `δ = 0.2`.
    pub sector_fraction: Option<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct CountingOptions {
    pub jost: JostOptions,
    /// Initial samples per unit arc length, in units of `1/γ`.
    pub samples_per_unit: f64,
    /// Also count the zeros off the two sectors around the real axis.
    pub sectors: bool,
    pub delta: f64,
}

impl Default for CountingOptions {
    fn default() -> Self {
        CountingOptions { jost: JostOptions::fast(), samples_per_unit: 5.0, sectors: false, delta: 0.2 }
    }
}

/// Number of zeros in `|λ| ≤ r` (see [`CountRow`]).
pub fn counting_function(pot: &PotentialSpec, radii: &[f64], opts: &CountingOptions) -> Result<Vec<CountRow>> {
    let m = pot.mass();
    let gamma = pot.gamma();
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        if r <= m * (1.0 + 1e-3) + 1e-6 {
            return Err(Error::Usage(format!("radius {r} too close to the cut [-{m}, {m}]")));
        }
        if pot.pieces().is_empty() || pot.is_free() {
            rows.push(CountRow { r, winding: 0, count: 0.0, ratio: 0.0, sector_fraction: None });
            continue;
        }
        let ceiling = opts.jost.validity_ceiling.min(jost::HARD_CEILING);
        let worst = 2.0 * (r * r - m * m).max(0.0).sqrt().max(r) * gamma;
        if worst > ceiling {
            return Err(Error::ValidityCeiling { value: worst, ceiling });
        }
        let n = ((TAU * r * opts.samples_per_unit * gamma).ceil() as usize).max(32);
        let w = curve_winding(pot, |t| Complex64::from_polar(r, TAU * t), n, &opts.jost, m > 0.0)?;
        let count = if m > 0.0 { w as f64 / 2.0 } else { w as f64 };
        let ratio = count / (2.0 * r * gamma / PI);
        let sector_fraction = if opts.sectors {
            let lower = curve_winding(pot, |t| lower_half_disk(r, m, t), n, &opts.jost, false)?;
            let off = curve_winding(pot, |t| wedge(r, m, opts.delta, t), n, &opts.jost, false)?;
            Some(if lower > 0 { off as f64 / lower as f64 } else { 0.0 })
        } else {
            None
        };
        rows.push(CountRow { r, winding: w, count, ratio, sector_fraction });
    }
    Ok(rows)
}

/// Inner radius that keeps the sector contours off the cut.
fn inner_radius(m: f64) -> f64 {
    (2.0 * m).max(0.5)
}

/// Boundary of `{inner ≤ |λ| ≤ r, Im λ ≤ −ε}` traversed counter-clockwise.
fn lower_half_disk(r: f64, m: f64, t: f64) -> Complex64 {
    annular_sector(r, inner_radius(m), -PI + 1e-3, -1e-3, t)
}

/// Boundary of `{inner ≤ |λ| ≤ r, −π + δ ≤ arg λ ≤ −δ}`.
fn wedge(r: f64, m: f64, delta: f64, t: f64) -> Complex64 {
    annular_sector(r, inner_radius(m), -PI + delta, -delta, t)
}

/// Counter-clockwise boundary of an annular sector `a ≤ arg ≤ b`, split into
/// four pieces weighted by length.
fn annular_sector(r: f64, r0: f64, a: f64, b: f64, t: f64) -> Complex64 {
    let l = [r - r0, r * (b - a), r - r0, r0 * (b - a)];
    let total: f64 = l.iter().sum();
    let mut s = t.clamp(0.0, 1.0) * total;
    // outward ray at angle a, outer arc a → b, inward ray at b, inner arc b → a
    if s <= l[0] {
        return Complex64::from_polar(r0 + s, a);
    }
    s -= l[0];
    if s <= l[1] {
        return Complex64::from_polar(r, a + s / r);
    }
    s -= l[1];
    if s <= l[2] {
        return Complex64::from_polar(r - s, b);
    }
    s -= l[2];
    Complex64::from_polar(r0, b - s / r0)
}

#[derive(Clone, Copy, Debug)]
pub struct GapOptions {
    pub jost: JostOptions,
    pub samples: usize,
    /// Offset used for the two-sided limits.
    pub epsilon: f64,
    /// Ratio between the two limits needed to classify.
    pub threshold: f64,
}

impl Default for GapOptions {
    fn default() -> Self {
        GapOptions { jost: JostOptions::fast(), samples: 2000, epsilon: 1e-6, threshold: 10.0 }
    }
}

/// Zeros of `𝔉` on the gap, classified, plus the structural checks.
#[derive(Clone, Debug, Default)]
pub struct GapReport {
    pub states: Vec<State>,
    /// `(λ, |g⁺(λ+iε)|, |g⁺(λ−iε)|)` for zeros the ratio test could not place.
    pub unclassified: Vec<(f64, f64, f64)>,
    /// `d𝔉/dλ` at each eigenvalue.
    pub eigenvalue_slopes: Vec<f64>,
    /// `|g⁺(λ−iε)| / |g⁺(λ+iε)|` at each eigenvalue.
    pub mirror_ratios: Vec<f64>,
    /// Anti-bound states between consecutive eigenvalues.
    pub anti_bound_between: Vec<usize>,
}

impl GapReport {
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.states.iter().filter(|s| s.kind == StateKind::Eigenvalue).map(|s| s.location.re).collect()
    }

    pub fn anti_bound(&self) -> Vec<f64> {
        self.states.iter().filter(|s| s.kind == StateKind::AntiBound).map(|s| s.location.re).collect()
    }
}

fn frak_real(pot: &PotentialSpec, l: f64, opts: &JostOptions) -> Result<f64> {
    Ok(jost::frak_f_with(pot, Complex64::new(l, 0.0), opts)?.re)
}

/// Real zeros of `𝔉` in the gap `(−m, m)` (`m > 0`).
pub fn gap_states(pot: &PotentialSpec, opts: &GapOptions) -> Result<GapReport> {
    let m = pot.mass();
    if m <= 0.0 {
        return Err(Error::Usage("gap_states needs m > 0".into()));
    }
    if pot.pieces().is_empty() || pot.is_free() {
        return Ok(GapReport::default());
    }
    let delta = 1e-6 * m;
    let n = opts.samples.max(8);
    let xs: Vec<f64> = (0..=n).map(|j| -m + delta + (2.0 * m - 2.0 * delta) * j as f64 / n as f64).collect();
    let fs: Vec<f64> = xs.par_iter().map(|&x| frak_real(pot, x, &opts.jost)).collect::<Result<_>>()?;
    let mut roots = Vec::new();
    for j in 0..n {
        let (mut a, mut b, mut fa) = (xs[j], xs[j + 1], fs[j]);
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa.signum() == fs[j + 1].signum() {
            continue;
        }
        while b - a > 1e-14 * m.max(1.0) {
            let c = 0.5 * (a + b);
            let fc = frak_real(pot, c, &opts.jost)?;
            if fc == 0.0 {
                a = c;
                b = c;
                break;
            }
            if fc.signum() == fa.signum() {
                a = c;
                fa = fc;
            } else {
                b = c;
            }
        }
        roots.push(0.5 * (a + b));
    }
    let mut report = GapReport::default();
    for &x in &roots {
        let residual = frak_real(pot, x, &opts.jost)?.abs();
        let mut placed = None;
        let mut last = (0.0, 0.0);
        for eps in [opts.epsilon, opts.epsilon * 0.1, opts.epsilon * 10.0] {
            let up = jost::jost_fast(pot, &SpectralParam::bulk(Complex64::new(x, eps), m)?, &opts.jost)?.norm();
            let lo = jost::jost_fast(pot, &SpectralParam::bulk(Complex64::new(x, -eps), m)?, &opts.jost)?.norm();
            last = (up, lo);
            if lo >= opts.threshold * up {
                placed = Some((StateKind::Eigenvalue, Rim::Upper));
                break;
            }
            if up >= opts.threshold * lo {
                placed = Some((StateKind::AntiBound, Rim::Lower));
                break;
            }
        }
        match placed {
            Some((kind, rim)) => {
                if kind == StateKind::Eigenvalue {
                    report.mirror_ratios.push(last.1 / last.0);
                    report.eigenvalue_slopes.push(jost::frak_f_derivative(pot, Complex64::new(x, 0.0), &JostOptions::default())?.re);
                }
                report.states.push(State { location: Complex64::new(x, 0.0), kind, multiplicity: 1, residual, rim });
            }
            None => report.unclassified.push((x, last.0, last.1)),
        }
    }
    let eig = report.eigenvalues();
    let anti = report.anti_bound();
    for w in eig.windows(2) {
        report.anti_bound_between.push(anti.iter().filter(|&&a| a > w[0] && a < w[1]).count());
    }
    Ok(report)
}

/// Which threshold `±m` to probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Plus,
    Minus,
}

/// `c(±m) = lim x^κ ϑ̃₁(x, ±m)/(2κ−1)!!`, taken at `±m ∓ 10⁻⁸`; a virtual
/// state sits at the endpoint when `|c| < 10⁻⁴` (the free value is 1).
pub fn virtual_indicator(pot: &PotentialSpec, endpoint: Endpoint) -> Result<f64> {
    let m = pot.mass();
    if m <= 0.0 {
        return Err(Error::Usage("virtual_indicator needs m > 0".into()));
    }
    let l = match endpoint {
        Endpoint::Plus => m - 1e-8,
        Endpoint::Minus => -m + 1e-8,
    };
    let (c, _) = jost::tilde_limits(pot, Complex64::new(l, 0.0), &JostOptions::default())?;
    Ok(c.re)
}

pub const VIRTUAL_THRESHOLD: f64 = 1e-4;

/// Virtual states at `±m` according to [`virtual_indicator`].
pub fn virtual_states(pot: &PotentialSpec) -> Result<Vec<State>> {
    let mut out = Vec::new();
    for (e, s) in [(Endpoint::Minus, -1.0), (Endpoint::Plus, 1.0)] {
        let c = virtual_indicator(pot, e)?;
        if c.abs() < VIRTUAL_THRESHOLD {
            out.push(State {
                location: Complex64::new(s * pot.mass(), 0.0),
                kind: StateKind::Virtual,
                multiplicity: 1,
                residual: c.abs(),
                rim: Rim::Bulk,
            });
        }
    }
    Ok(out)
}
