//! Moments, spreads and covariances in the time, frequency, LCT and SWDL
//! domains, and the uncertainty-product lower bounds.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::axis::Axis;
use crate::error::{Error, Result};
use crate::lct::{lct_nodes, output_range};
use crate::quadrature::composite_nodes;
use crate::signals::Signal;
use crate::symplectic::{derive_a3, derive_a4, SymplecticMatrix};
use crate::tfd::{swdl_definition, TFGrid, TRUNCATION_LEVEL};

/// Panels for envelope integrals over a signal's support.
const ENVELOPE_PANELS: usize = 512;

/// Panels for `|L^A f|²` over the phase-space box.
const LCT_PANELS: usize = 96;

/// Samples for the unwrapped-phase derivative when no closed form exists.
const PHASE_SAMPLES: usize = 8193;

/// Relative disagreement between the direct and decomposed products that
/// is flagged, and the one that is an error.
pub const DECOMPOSITION_WARN: f64 = 1e-3;
pub const DECOMPOSITION_FAIL: f64 = 1e-2;

/// Largest `|Im f|` allowed for the real-valued class.
pub const REAL_TOLERANCE: f64 = 1e-12;

/// First and second moment of a density given as `(x, weight·density)`.
fn weighted_moments(samples: impl Iterator<Item = (f64, f64)> + Clone, total: f64) -> (f64, f64) {
    let mean = samples.clone().map(|(x, m)| x * m).sum::<f64>() / total;
    let spread = samples.map(|(x, m)| (x - mean) * (x - mean) * m).sum::<f64>() / total;
    (mean, spread)
}

fn envelope_nodes(f: &Signal) -> Result<Vec<(f64, f64)>> {
    let (lo, hi) = f.finite_support()?;
    if hi <= lo {
        return Err(Error::ZeroEnergy);
    }
    Ok(composite_nodes(lo, hi, ENVELOPE_PANELS)
        .into_iter()
        .map(|(t, w)| (t, w * f.eval(t).norm_sqr()))
        .collect())
}

/// `‖f‖₂²`
pub fn energy(f: &Signal) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::ZeroEnergy);
    }
    let e: f64 = envelope_nodes(f)?.iter().map(|(_, m)| m).sum();
    if e > 0.0 {
        Ok(e)
    } else {
        Err(Error::ZeroEnergy)
    }
}

/// `(t⁰, Δt²)` of `|f|²/‖f‖²`.
pub fn time_stats(f: &Signal) -> Result<(f64, f64)> {
    let e = energy(f)?;
    let nodes = envelope_nodes(f)?;
    Ok(weighted_moments(nodes.iter().copied(), e))
}

/// `(u⁰_A, Δu²_A)` of `|L^A f|²/‖f‖²`, integrated over the phase-space box.
pub fn lct_stats(f: &Signal, m: &SymplecticMatrix) -> Result<(f64, f64)> {
    if m.b() == 0.0 {
        return Err(Error::ZeroB);
    }
    let e = energy(f)?;
    let (lo, hi) = output_range(f, m)?;
    let nodes: Vec<(f64, f64)> = lct_nodes(f, m, lo, hi, LCT_PANELS)?
        .into_iter()
        .map(|(u, w, v)| (u, w * v.norm_sqr()))
        .collect();
    Ok(weighted_moments(nodes.iter().copied(), e))
}

/// `(ω⁰, Δω²)` of `|Ff|²/‖f‖²`.
pub fn frequency_stats(f: &Signal) -> Result<(f64, f64)> {
    lct_stats(f, &SymplecticMatrix::l1())
}

/// `φ'` at the given times: closed form when the signal has one, else the
/// central difference of the unwrapped phase on a dense lattice.
fn phase_derivative(f: &Signal, times: &[f64]) -> Result<Vec<f64>> {
    if let Some(closed) = times.iter().map(|&t| f.phase_rate(t)).collect::<Option<Vec<_>>>() {
        return Ok(closed);
    }
    let (lo, hi) = f.finite_support()?;
    let n = PHASE_SAMPLES;
    let dt = (hi - lo) / (n - 1) as f64;
    let mut phase = Vec::with_capacity(n);
    let mut prev = 0.0;
    for k in 0..n {
        let p = f.eval(lo + k as f64 * dt).arg();
        let unwrapped = if k == 0 { p } else { prev + (p - prev + PI).rem_euclid(2.0 * PI) - PI };
        phase.push(unwrapped);
        prev = unwrapped;
    }
    let rate: Vec<f64> = (0..n)
        .map(|k| match k {
            0 => (phase[1] - phase[0]) / dt,
            _ if k == n - 1 => (phase[n - 1] - phase[n - 2]) / dt,
            _ => (phase[k + 1] - phase[k - 1]) / (2.0 * dt),
        })
        .collect();
    Ok(times
        .iter()
        .map(|&t| {
            let x = ((t - lo) / dt).clamp(0.0, (n - 1) as f64);
            let k = (x.floor() as usize).min(n - 2);
            let s = x - k as f64;
            rate[k] * (1.0 - s) + rate[k + 1] * s
        })
        .collect())
}

/// `(Cov_{t,ω}, COV_{t,ω})` with `f = λ e^{jφ}` and `ω⁰ = ⟨φ'⟩`.
pub fn covariances(f: &Signal) -> Result<(f64, f64)> {
    let e = energy(f)?;
    let nodes = envelope_nodes(f)?;
    let times: Vec<f64> = nodes.iter().map(|(t, _)| *t).collect();
    let rate = phase_derivative(f, &times)?;
    let t0 = nodes.iter().map(|(t, m)| t * m).sum::<f64>() / e;
    let w0 = nodes.iter().zip(&rate).map(|((_, m), r)| r * m).sum::<f64>() / e;
    let mut cov = 0.0;
    let mut abscov = 0.0;
    for ((t, m), r) in nodes.iter().zip(&rate) {
        let p = (t - t0) * (r - w0);
        cov += p * m;
        abscov += p.abs() * m;
    }
    Ok((cov / e, abscov / e))
}

/// SWDL-domain moments of `|W|²/‖f‖⁴` over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SwdlStats {
    pub t_moment: f64,
    pub t_spread: f64,
    pub u_moment: f64,
    pub u_spread: f64,
    pub truncated: bool,
}

pub fn swdl_stats(grid: &TFGrid, energy: f64) -> Result<SwdlStats> {
    if !(energy > 0.0) {
        return Err(Error::ZeroEnergy);
    }
    let total = energy * energy;
    let cell = grid.t.step * grid.u.step;
    let t_mass: Vec<(f64, f64)> = (0..grid.t.len)
        .map(|i| (grid.t.value(i), grid.row(i).iter().map(|v| v.norm_sqr()).sum::<f64>() * cell))
        .collect();
    let u_mass: Vec<(f64, f64)> = (0..grid.u.len)
        .map(|k| (grid.u.value(k), (0..grid.t.len).map(|i| grid.at(i, k).norm_sqr()).sum::<f64>() * cell))
        .collect();
    let (t_moment, t_spread) = weighted_moments(t_mass.iter().copied(), total);
    let (u_moment, u_spread) = weighted_moments(u_mass.iter().copied(), total);
    let truncated = grid.t_edge_ratio() > TRUNCATION_LEVEL || grid.u_edge_ratio() > TRUNCATION_LEVEL;
    Ok(SwdlStats { t_moment, t_spread, u_moment, u_spread, truncated })
}

/// All moments of one signal under one matrix pair. The `A3`/`A4` entries
/// are absent when `A1` has a zero entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub t_moment: f64,
    pub t_spread: f64,
    pub omega_moment: f64,
    pub omega_spread: f64,
    pub u_moment_a3: Option<f64>,
    pub u_spread_a3: Option<f64>,
    pub u_moment_a4: Option<f64>,
    pub u_spread_a4: Option<f64>,
    pub swdl_t_moment: f64,
    pub swdl_t_spread: f64,
    pub swdl_u_moment: f64,
    pub swdl_u_spread: f64,
    pub cov: f64,
    pub abscov: f64,
    pub energy: f64,
    pub truncated: bool,
}

impl MomentReport {
    fn entries(&self) -> Vec<(&'static str, Option<f64>)> {
        vec![
            ("t_moment", Some(self.t_moment)),
            ("t_spread", Some(self.t_spread)),
            ("omega_moment", Some(self.omega_moment)),
            ("omega_spread", Some(self.omega_spread)),
            ("u_moment_a3", self.u_moment_a3),
            ("u_spread_a3", self.u_spread_a3),
            ("u_moment_a4", self.u_moment_a4),
            ("u_spread_a4", self.u_spread_a4),
            ("swdl_t_moment", Some(self.swdl_t_moment)),
            ("swdl_t_spread", Some(self.swdl_t_spread)),
            ("swdl_u_moment", Some(self.swdl_u_moment)),
            ("swdl_u_spread", Some(self.swdl_u_spread)),
            ("cov", Some(self.cov)),
            ("abscov", Some(self.abscov)),
            ("energy", Some(self.energy)),
        ]
    }

    /// `key,value` rows; absent values are empty.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "key,value")?;
        for (k, v) in self.entries() {
            writeln!(w, "{k},{}", v.map(|x| x.to_string()).unwrap_or_default())?;
        }
        writeln!(w, "truncated,{}", self.truncated)?;
        Ok(())
    }
}

impl fmt::Display for MomentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.entries() {
            match v {
                Some(x) => writeln!(f, "{k} = {x}")?,
                None => writeln!(f, "{k} = n/a")?,
            }
        }
        writeln!(f, "truncated = {}", self.truncated)
    }
}

/// Moments of `f` with the SWDL part taken from a definition-path grid on
/// the given axes.
pub fn moment_report(f: &Signal, a1: &SymplecticMatrix, a2: &SymplecticMatrix, t: &Axis, u: &Axis) -> Result<MomentReport> {
    let e = energy(f)?;
    let grid = swdl_definition(f, a1, a2, t, u)?;
    report_from_grid(f, &grid, e)
}

fn report_from_grid(f: &Signal, grid: &TFGrid, e: f64) -> Result<MomentReport> {
    let (a1, a2) = (&grid.a1, &grid.a2);
    let (t_moment, t_spread) = time_stats(f)?;
    let (omega_moment, omega_spread) = frequency_stats(f)?;
    let lct3 = derive_a3(a1, a2).ok().map(|m| lct_stats(f, &m)).transpose()?;
    let lct4 = derive_a4(a1, a2).ok().map(|m| lct_stats(f, &m)).transpose()?;
    let s = swdl_stats(grid, e)?;
    let (cov, abscov) = covariances(f)?;
    Ok(MomentReport {
        t_moment,
        t_spread,
        omega_moment,
        omega_spread,
        u_moment_a3: lct3.map(|x| x.0),
        u_spread_a3: lct3.map(|x| x.1),
        u_moment_a4: lct4.map(|x| x.0),
        u_spread_a4: lct4.map(|x| x.1),
        swdl_t_moment: s.t_moment,
        swdl_t_spread: s.t_spread,
        swdl_u_moment: s.u_moment,
        swdl_u_spread: s.u_spread,
        cov,
        abscov,
        energy: e,
        truncated: s.truncated,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SignalClass {
    Arbitrary,
    Real,
    Complex,
}

impl std::str::FromStr for SignalClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "arbitrary" => Ok(SignalClass::Arbitrary),
            "real" => Ok(SignalClass::Real),
            "complex" => Ok(SignalClass::Complex),
            other => Err(Error::Parse(format!("unknown signal class `{other}`"))),
        }
    }
}

/// Lower bound(s) on `Δt²_{A1,A2} Δu²_{A1,A2}`. For the complex class the
/// first value is the tighter bound and the second the looser one.
pub fn lower_bound(class: SignalClass, a1: &SymplecticMatrix, a2: &SymplecticMatrix, t_spread: f64, cov: f64, abscov: f64) -> (f64, Option<f64>) {
    let (a, b, c, d) = (a1.a(), a1.b(), a1.c(), a1.d());
    let (a2_, b2) = (a2.a(), a2.b());
    let s = c * c + d * d;
    let base = b2 * b2 * s * s / 4.0;
    match class {
        SignalClass::Arbitrary => (base, None),
        SignalClass::Real => (base + a2_ * a2_ * (a * a + b * b) * s * t_spread * t_spread, None),
        SignalClass::Complex => {
            let x = a2_ * a * t_spread + b2 * d * cov;
            let y = a2_ * b * t_spread + b2 * c * cov;
            let cross = (x * x + y * y) * s;
            let first = (0.25 + abscov * abscov - cov * cov) * b2 * b2 * s * s + cross;
            (first, Some(base + cross))
        }
    }
}

/// `Δt²_{A1,A2} Δu²_{A1,A2}` from grid moments and from
/// `(c1² + d1²)(Δt² Δu²_{A3} + Δt² Δu²_{A4})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductReport {
    pub direct: f64,
    pub decomposed: f64,
    pub relative_gap: f64,
    /// Gap above [`DECOMPOSITION_WARN`].
    pub flagged: bool,
    pub truncated: bool,
}

/// Product check from an existing report.
pub fn product_check(report: &MomentReport, a1: &SymplecticMatrix) -> Result<ProductReport> {
    let direct = report.swdl_t_spread * report.swdl_u_spread;
    let (Some(s3), Some(s4)) = (report.u_spread_a3, report.u_spread_a4) else {
        return Err(Error::DegenerateInput("product decomposition needs a1, b1, c1, d1 != 0"));
    };
    let s = a1.c() * a1.c() + a1.d() * a1.d();
    let decomposed = s * (report.t_spread * s3 + report.t_spread * s4);
    let relative_gap = (direct - decomposed).abs() / direct.abs().max(decomposed.abs()).max(f64::MIN_POSITIVE);
    Ok(ProductReport { direct, decomposed, relative_gap, flagged: relative_gap > DECOMPOSITION_WARN, truncated: report.truncated })
}

/// Direct product with the decomposition as a consistency check; a gap
/// above [`DECOMPOSITION_FAIL`] is [`Error::DecompositionMismatch`].
pub fn uncertainty_product(f: &Signal, a1: &SymplecticMatrix, a2: &SymplecticMatrix, t: &Axis, u: &Axis) -> Result<ProductReport> {
    let report = moment_report(f, a1, a2, t, u)?;
    let p = product_check(&report, a1)?;
    if p.relative_gap > DECOMPOSITION_FAIL {
        return Err(Error::DecompositionMismatch { direct: p.direct, decomposed: p.decomposed });
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub signal_class: SignalClass,
    pub lower_bound: f64,
    /// Looser member of the complex-class chain.
    pub second_bound: Option<f64>,
    pub product: f64,
    pub slack: f64,
    pub second_slack: Option<f64>,
    pub tolerance: f64,
    pub attained: bool,
    pub second_attained: Option<bool>,
}

impl BoundReport {
    /// `slack ≥ −tolerance`
    pub fn holds(&self) -> bool {
        self.slack >= -self.tolerance && self.second_slack.is_none_or(|s| s >= -self.tolerance)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        writeln!(w, "class,lower_bound,second_bound,product,slack,second_slack,tolerance,attained,second_attained")?;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            serde_json::to_value(self.signal_class).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
            self.lower_bound,
            opt(self.second_bound),
            self.product,
            self.slack,
            opt(self.second_slack),
            self.tolerance,
            self.attained,
            self.second_attained.map(|b| b.to_string()).unwrap_or_default()
        )?;
        Ok(())
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "signal_class = {:?}", self.signal_class)?;
        writeln!(f, "lower_bound = {}", self.lower_bound)?;
        if let Some(b) = self.second_bound {
            writeln!(f, "second_bound = {b}")?;
        }
        writeln!(f, "product = {}", self.product)?;
        writeln!(f, "slack = {}", self.slack)?;
        if let Some(s) = self.second_slack {
            writeln!(f, "second_slack = {s}")?;
        }
        writeln!(f, "attained = {}", self.attained)
    }
}

/// Bound, product and slack for a declared class. Slack tolerance is
/// relative to the bound. The real class additionally checks that `f` is
/// real-valued.
pub fn bound_report(
    f: &Signal,
    class: SignalClass,
    a1: &SymplecticMatrix,
    a2: &SymplecticMatrix,
    report: &MomentReport,
    tolerance: f64,
) -> Result<BoundReport> {
    if class == SignalClass::Real {
        let im = f.max_imag(4097)?;
        if im >= REAL_TOLERANCE {
            return Err(Error::NotRealValued(im));
        }
    }
    let (bound, second) = lower_bound(class, a1, a2, report.t_spread, report.cov, report.abscov);
    let product = report.swdl_t_spread * report.swdl_u_spread;
    let tol = tolerance * bound.abs().max(f64::MIN_POSITIVE);
    let slack = product - bound;
    let second_slack = second.map(|b| product - b);
    Ok(BoundReport {
        signal_class: class,
        lower_bound: bound,
        second_bound: second,
        product,
        slack,
        second_slack,
        tolerance: tol,
        attained: slack.abs() <= tol,
        second_attained: second_slack.map(|s| s.abs() <= tolerance * second.unwrap_or(0.0).abs()),
    })
}

/// Moments, product decomposition and bound for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsOutcome {
    pub moments: MomentReport,
    pub product: Option<ProductReport>,
    pub bound: BoundReport,
}

/// Full `bounds` evaluation. A decomposition gap above
/// [`DECOMPOSITION_FAIL`] is an error; missing `A3`/`A4` leaves `product`
/// empty.
pub fn evaluate_bounds(
    f: &Signal,
    class: SignalClass,
    a1: &SymplecticMatrix,
    a2: &SymplecticMatrix,
    t: &Axis,
    u: &Axis,
    tolerance: f64,
) -> Result<BoundsOutcome> {
    let moments = moment_report(f, a1, a2, t, u)?;
    let product = match product_check(&moments, a1) {
        Ok(p) if p.relative_gap > DECOMPOSITION_FAIL => {
            return Err(Error::DecompositionMismatch { direct: p.direct, decomposed: p.decomposed })
        }
        Ok(p) => Some(p),
        Err(Error::DegenerateInput(_)) => None,
        Err(e) => return Err(e),
    };
    let bound = bound_report(f, class, a1, a2, &moments, tolerance)?;
    Ok(BoundsOutcome { moments, product, bound })
}
