//! The subcommands. Each returns the rows it managed to compute together
//! with the failures it met on the way.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use radial_dirac::fredholm::{self, OmegaTable};
use radial_dirac::jost::{self, JostOptions};
use radial_dirac::states::{self, CountingOptions, FinderOptions, GapOptions, Region};
use radial_dirac::trace::{self, ResonanceSet};
use radial_dirac::{free, Error, PotentialSpec, SpectralParam};

use crate::config::ConfigError;
use crate::output::{Failure, Row};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    EvalJost,
    FindStates,
    Counting,
    Omega,
    Det,
    RelationCheck,
    TraceCheck,
    Hadamard,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::EvalJost => "eval-jost",
            Command::FindStates => "find-states",
            Command::Counting => "counting",
            Command::Omega => "omega",
            Command::Det => "det",
            Command::RelationCheck => "relation-check",
            Command::TraceCheck => "trace-check",
            Command::Hadamard => "hadamard",
        }
    }
}

pub struct Settings {
    pub pot: PotentialSpec,
    pub lambdas: Vec<Complex64>,
    pub region: Option<Region>,
    pub radii: Vec<f64>,
    pub nodes: usize,
    pub trunc: f64,
    pub tol: f64,
    pub ceiling: f64,
    pub t_max: f64,
    pub sectors: bool,
}

impl Settings {
    fn jost(&self) -> JostOptions {
        JostOptions { route_tolerance: self.tol, ..JostOptions::default() }.with_ceiling(self.ceiling)
    }

    fn finder(&self) -> FinderOptions {
        FinderOptions { jost: JostOptions::fast().with_ceiling(self.ceiling), ..FinderOptions::default() }
    }
}

#[derive(Default)]
pub struct Outcome {
    pub rows: Vec<Row>,
    pub failures: Vec<Failure>,
    pub ceiling_hit: bool,
}

impl Outcome {
    fn fail(&mut self, lambda: Complex64, stage: &str, e: Error) {
        if matches!(e, Error::ValidityCeiling { .. }) {
            self.ceiling_hit = true;
        }
        self.failures.push(Failure { re_lambda: lambda.re, im_lambda: lambda.im, stage: stage.into(), error: e.to_string() });
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Spectral parameter for a user point: the upper rim on the gap.
fn param(pot: &PotentialSpec, l: Complex64) -> Result<SpectralParam, Error> {
    jost::param_upper(l, pot.mass())
}

/// Largest validity measure the request will need, if it can be told in
/// advance.
pub fn required_measure(cmd: Command, s: &Settings) -> f64 {
    let g = s.pot.gamma();
    let m = s.pot.mass();
    let at = |l: Complex64| param(&s.pot, l).map(|sp| jost::validity_measure(&s.pot, &sp)).unwrap_or(0.0);
    let mut worst = s.lambdas.iter().map(|&l| at(l)).fold(0.0, f64::max);
    if let Some(r) = &s.region {
        for l in [
            Complex64::new(r.re_lo, r.im_lo),
            Complex64::new(r.re_hi, r.im_lo),
            Complex64::new(r.re_lo, r.im_hi),
            Complex64::new(r.re_hi, r.im_hi),
        ] {
            worst = worst.max(at(l));
        }
    }
    let circle = |r: f64| 2.0 * (r * r + m * m).sqrt() * g;
    match cmd {
        Command::Counting => worst = worst.max(s.radii.iter().map(|&r| circle(r)).fold(0.0, f64::max)),
        Command::TraceCheck => worst = worst.max(circle(s.trunc)),
        Command::Hadamard => {
            let big = if s.radii.is_empty() { s.trunc } else { s.radii.iter().copied().fold(0.0, f64::max) };
            worst = worst.max(circle(big));
        }
        _ => {}
    }
    worst
}

pub fn run(cmd: Command, s: &Settings) -> Result<Outcome, ConfigError> {
    match cmd {
        Command::EvalJost => eval_jost(s),
        Command::FindStates => find_states(s),
        Command::Counting => counting(s),
        Command::Omega => omega(s),
        Command::Det => det(s),
        Command::RelationCheck => relation_check(s),
        Command::TraceCheck => trace_check(s),
        Command::Hadamard => hadamard(s),
    }
}

fn need_lambdas(s: &Settings, cmd: &str) -> Result<(), ConfigError> {
    if s.lambdas.is_empty() {
        return Err(ConfigError(format!("{cmd} needs --lambdas or --grid")));
    }
    Ok(())
}

fn need_massless(s: &Settings, cmd: &str) -> Result<(), ConfigError> {
    if s.pot.mass() != 0.0 {
        return Err(ConfigError(format!("{cmd} is defined for mass = 0 only")));
    }
    Ok(())
}

fn eval_jost(s: &Settings) -> Result<Outcome, ConfigError> {
    need_lambdas(s, "eval-jost")?;
    let opts = s.jost();
    let m = s.pot.mass();
    let mut out = Outcome::default();
    let omega0 = s.pot.integral();
    for &l in &s.lambdas {
        let res = (|| -> Result<Vec<Row>, Error> {
            let sp = param(&s.pot, l)?;
            let v = jost::jost_value(&s.pot, &sp, &opts)?;
            let err = (v.g - v.g_integral).norm();
            let star = sp.star();
            let g_minus = if star == sp { v.g.conj() } else { jost::jost_value(&s.pot, &star, &opts)?.g.conj() };
            let mut rows = vec![
                Row::new(l, v.g, err, "g_plus:wronskian"),
                Row::new(l, v.g_integral, err, "g_plus:integral"),
                Row::new(l, g_minus, err, "g_minus"),
            ];
            if l.im == 0.0 && l.re.abs() > m {
                let phase = v.g.arg() + FRAC_PI_2;
                rows.push(Row::real(l, phase, err / v.g.norm(), "phase"));
                if m == 0.0 {
                    let gap = (v.g + Complex64::i() * Complex64::new(0.0, omega0).exp()).norm();
                    rows.push(Row::real(l, gap, err, "high_energy_gap"));
                }
            }
            Ok(rows)
        })();
        match res {
            Ok(rows) => out.rows.extend(rows),
            Err(e) => out.fail(l, "eval-jost", e),
        }
    }
    Ok(out)
}

fn state_route(st: &states::State) -> String {
    match st.rim {
        radial_dirac::Rim::Bulk => st.kind.name().to_string(),
        radial_dirac::Rim::Upper => format!("{}:upper_rim", st.kind.name()),
        radial_dirac::Rim::Lower => format!("{}:lower_rim", st.kind.name()),
    }
}

fn find_states(s: &Settings) -> Result<Outcome, ConfigError> {
    let m = s.pot.mass();
    let free = s.pot.pieces().is_empty() || s.pot.is_free();
    if s.region.is_none() && m == 0.0 && !free {
        return Err(ConfigError("find-states needs --region when mass = 0".into()));
    }
    let mut out = Outcome::default();
    if let Some(region) = &s.region {
        match states::find_states(&s.pot, region, &s.finder()) {
            Ok(rep) => {
                for st in &rep.states {
                    out.rows.push(Row::new(st.location, Complex64::new(st.residual, st.multiplicity as f64), st.residual, state_route(st)));
                }
                out.rows.push(Row::real(rep.region.center(), rep.total_winding as f64, 0.0, "region_winding"));
            }
            Err(Error::Usage(msg)) => return Err(ConfigError(msg)),
            Err(e) => out.fail(region.center(), "find-states", e),
        }
    }
    if m > 0.0 && !free {
        match states::gap_states(&s.pot, &GapOptions { jost: JostOptions::fast().with_ceiling(s.ceiling), ..GapOptions::default() }) {
            Ok(rep) => {
                for st in &rep.states {
                    out.rows.push(Row::new(st.location, Complex64::new(st.residual, 1.0), st.residual, state_route(st)));
                }
                for &(x, up, lo) in &rep.unclassified {
                    out.rows.push(Row::new(real(x), Complex64::new(up, lo), f64::NAN, "unclassified"));
                }
                if !rep.unclassified.is_empty() {
                    out.fail(real(rep.unclassified[0].0), "gap-classification", Error::Unclassified(rep.unclassified[0].1, rep.unclassified[0].2));
                }
            }
            Err(e) => out.fail(real(0.0), "gap-states", e),
        }
        match states::virtual_states(&s.pot) {
            Ok(v) => {
                for st in &v {
                    out.rows.push(Row::new(st.location, Complex64::new(st.residual, 1.0), st.residual, "virtual"));
                }
            }
            Err(e) => out.fail(real(m), "virtual-indicator", e),
        }
    }
    Ok(out)
}

fn counting(s: &Settings) -> Result<Outcome, ConfigError> {
    if s.radii.is_empty() {
        return Err(ConfigError("counting needs --radii".into()));
    }
    let opts = CountingOptions { jost: JostOptions::fast().with_ceiling(s.ceiling), sectors: s.sectors, ..CountingOptions::default() };
    let mut out = Outcome::default();
    for &r in &s.radii {
        match states::counting_function(&s.pot, &[r], &opts) {
            Ok(rows) => {
                let c = rows[0];
                out.rows.push(Row::real(real(r), c.winding as f64, 0.0, "winding"));
                out.rows.push(Row::real(real(r), c.count, 0.0, "count"));
                out.rows.push(Row::real(real(r), c.ratio, 0.0, "ratio"));
                if let Some(f) = c.sector_fraction {
                    out.rows.push(Row::real(real(r), f, 0.0, "sector_fraction"));
                }
            }
            Err(Error::Usage(msg)) => return Err(ConfigError(msg)),
            Err(e) => out.fail(real(r), "counting", e),
        }
    }
    Ok(out)
}

fn omega(s: &Settings) -> Result<Outcome, ConfigError> {
    need_lambdas(s, "omega")?;
    if s.lambdas.iter().any(|l| l.im != 0.0) {
        return Err(ConfigError("omega takes real points only".into()));
    }
    let mut out = Outcome::default();
    let omega0 = s.pot.integral();
    out.rows.push(Row::real(real(0.0), omega0, 0.0, "omega0"));
    let q = radial_dirac::quad::QuadOptions { abs_tol: 1e-11, rel_tol: 1e-12, ..Default::default() };
    for &l in &s.lambdas {
        match free::omega_with_error(&s.pot, l.re, &q) {
            Ok((v, e)) => {
                out.rows.push(Row::real(l, v, e, "omega"));
                out.rows.push(Row::real(l, (v - omega0).abs(), e, "asymptotic_residual"));
            }
            Err(e) => out.fail(l, "omega", e),
        }
    }
    Ok(out)
}

fn det(s: &Settings) -> Result<Outcome, ConfigError> {
    need_lambdas(s, "det")?;
    let mut out = Outcome::default();
    for &l in &s.lambdas {
        match SpectralParam::bulk(l, s.pot.mass()).and_then(|sp| fredholm::det2(&s.pot, &sp, s.nodes)) {
            Ok(d) => out.rows.push(Row::new(l, d.value, d.error, "richardson")),
            Err(e) => out.fail(l, "det", e),
        }
    }
    Ok(out)
}

fn relation_check(s: &Settings) -> Result<Outcome, ConfigError> {
    need_lambdas(s, "relation-check")?;
    let mut out = Outcome::default();
    let free = s.pot.pieces().is_empty();
    let table = if !free && s.lambdas.iter().any(|l| l.im != 0.0) {
        match OmegaTable::new(&s.pot, s.t_max) {
            Ok(t) => Some(t),
            Err(e) => {
                out.fail(real(s.t_max), "omega-table", e);
                return Ok(out);
            }
        }
    } else {
        None
    };
    for &l in &s.lambdas {
        if l.im == 0.0 {
            match fredholm::phase_identity_check(&s.pot, l.re, s.nodes) {
                Ok(r) => {
                    out.rows.push(Row::real(l, r.phase, 0.0, "phase"));
                    out.rows.push(Row::real(l, r.omega, 0.0, "omega"));
                    out.rows.push(Row::real(l, r.arg_d, r.eps_sensitivity, "arg_det"));
                    out.rows.push(Row::real(l, r.mismatch, r.eps_sensitivity, "phase_identity_mismatch"));
                }
                Err(e) => out.fail(l, "phase-identity", e),
            }
        } else {
            let res = SpectralParam::bulk(l, s.pot.mass())
                .and_then(|sp| fredholm::determinant_jost_relation_check_with(&s.pot, &sp, s.nodes, table.as_ref()));
            match res {
                Ok(r) => {
                    out.rows.push(Row::new(l, r.jost, 0.0, "jost"));
                    out.rows.push(Row::new(l, r.determinant.value, r.determinant.error, "determinant"));
                    out.rows.push(Row::new(l, r.rhs, r.tail_bound * r.rhs.norm(), "determinant_side"));
                    out.rows.push(Row::real(l, r.mismatch, r.tail_bound + r.determinant.error / r.determinant.value.norm(), "relation_mismatch"));
                }
                Err(Error::Usage(msg)) => return Err(ConfigError(msg)),
                Err(e) => out.fail(l, "relation", e),
            }
        }
    }
    Ok(out)
}

fn resonance_set(s: &Settings, radius: f64, out: &mut Outcome) -> Option<ResonanceSet> {
    match ResonanceSet::find(&s.pot, radius, &s.finder()) {
        Ok(rs) => Some(rs),
        Err(e) => {
            out.fail(real(radius), "resonance-search", e);
            None
        }
    }
}

fn trace_check(s: &Settings) -> Result<Outcome, ConfigError> {
    need_massless(s, "trace-check")?;
    need_lambdas(s, "trace-check")?;
    let mut out = Outcome::default();
    let Some(rs) = resonance_set(s, s.trunc, &mut out) else { return Ok(out) };
    let r = s.trunc;
    let sign = if rs.states.is_empty() {
        1.0
    } else {
        match trace::resolve_phase_sign(&s.pot, &rs, &[1.0, 3.0, 7.0], r) {
            Ok(v) => v,
            Err(e) => {
                out.fail(real(1.0), "phase-sign", e);
                return Ok(out);
            }
        }
    };
    out.rows.push(Row::real(real(0.0), sign, 0.0, "phase_sign"));
    for &l in &s.lambdas {
        if l.im == 0.0 {
            let direct = if rs.states.is_empty() { Ok(0.0) } else { jost::phase_derivative(&s.pot, l.re) };
            match (direct, trace::phase_derivative_sum(&rs, l.re, r, sign)) {
                (Ok(d), Ok(sum)) => {
                    out.rows.push(Row::real(l, d, (d - sum).abs(), "phase_derivative:direct"));
                    out.rows.push(Row::real(l, sum, (d - sum).abs(), "phase_derivative:resonance_sum"));
                }
                (Err(e), _) | (_, Err(e)) => out.fail(l, "phase-derivative", e),
            }
        } else {
            let direct = SpectralParam::bulk(l, 0.0).and_then(|sp| fredholm::resolvent_trace_difference(&s.pot, &sp));
            match (direct, trace::resolvent_trace_sum(&rs, l, r)) {
                (Ok(d), Ok(sum)) => {
                    out.rows.push(Row::new(l, d, (d - sum).norm(), "resolvent_trace:direct"));
                    out.rows.push(Row::new(l, sum, (d - sum).norm(), "resolvent_trace:resonance_sum"));
                }
                (Err(e), _) | (_, Err(e)) => out.fail(l, "resolvent-trace", e),
            }
        }
    }
    let grid: Vec<(f64, f64)> = (0..=800)
        .map(|j| {
            let x = -40.0 + 0.1 * j as f64;
            (x, (-x * x / 50.0).exp())
        })
        .collect();
    match trace::krein_trace_check(&s.pot, &rs, &grid, r, sign) {
        Ok(k) => {
            out.rows.push(Row::real(real(0.0), k.direct, k.difference.abs(), "krein_gaussian:direct"));
            out.rows.push(Row::real(real(0.0), k.resonance_sum, k.difference.abs(), "krein_gaussian:resonance_sum"));
        }
        Err(e) => out.fail(real(0.0), "krein", e),
    }
    Ok(out)
}

fn hadamard(s: &Settings) -> Result<Outcome, ConfigError> {
    need_massless(s, "hadamard")?;
    need_lambdas(s, "hadamard")?;
    let radii = if s.radii.is_empty() { vec![s.trunc] } else { s.radii.clone() };
    let big = radii.iter().copied().fold(0.0, f64::max);
    let mut out = Outcome::default();
    let Some(rs) = resonance_set(s, big, &mut out) else { return Ok(out) };
    for &l in &s.lambdas {
        match trace::hadamard_rows(&s.pot, &rs, &[l], &radii) {
            Ok(rows) => {
                out.rows.push(Row::new(l, rows[0].direct, 0.0, "direct"));
                for h in rows {
                    out.rows.push(Row::new(l, h.product, (h.product - h.direct).norm(), format!("product:r={}", h.r)));
                }
            }
            Err(Error::Usage(msg)) => return Err(ConfigError(msg)),
            Err(e) => out.fail(l, "hadamard", e),
        }
    }
    Ok(out)
}
