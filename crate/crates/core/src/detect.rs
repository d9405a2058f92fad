//! Radon transform of `|W|`, the frequency-rate–amplitude distribution and
//! the four-way concentration comparison for LFM signals.
//!
//! For `f(t) = e^{j(αt + βt²)}` and matrices meeting
//! `a2 + 2β(d1² − c1²)b2 = 0`, `|W|` concentrates on
//! `u = 2β(b1d1 − a1c1)b2·t + α(d1 − c1)b2`; slopes map back to rates
//! through `β̂ = s / (2(b1d1 − a1c1)b2)`.
//!
//! Rates are the `β` of the phase model `αt + βt²`, with no `2π` factor.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::axis::Axis;
use crate::error::{Error, Result};
use crate::signals::Signal;
use crate::symplectic::SymplecticMatrix;
use crate::tfd::{special_case, Distribution, TFGrid};

/// Line integrals of `|W|` over `u = s·t + c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadonMap {
    pub slopes: Axis,
    pub intercepts: Axis,
    /// `accum[i·intercepts.len + k]` for slope `i`, intercept `k`.
    pub accum: Vec<f64>,
}

impl RadonMap {
    pub fn at(&self, i: usize, k: usize) -> f64 {
        self.accum[i * self.intercepts.len + k]
    }

    /// `(slope, intercept, value)` at the largest accumulation.
    pub fn argmax(&self) -> (f64, f64, f64) {
        let mut best = (0, 0, f64::NEG_INFINITY);
        for i in 0..self.slopes.len {
            for k in 0..self.intercepts.len {
                let v = self.at(i, k);
                if v > best.2 {
                    best = (i, k, v);
                }
            }
        }
        (self.slopes.value(best.0), self.intercepts.value(best.1), best.2)
    }

    /// Writes `slope,intercept,value` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "slope,intercept,value")?;
        for i in 0..self.slopes.len {
            for k in 0..self.intercepts.len {
                writeln!(w, "{},{},{}", self.slopes.value(i), self.intercepts.value(k), self.at(i, k))?;
            }
        }
        Ok(())
    }
}

/// Linear interpolation of `row` on the `u` lattice; zero outside.
fn sample_row(row: &[f64], u: &Axis, x: f64) -> f64 {
    let p = u.position(x);
    let last = (u.len - 1) as f64;
    if !(p >= 0.0 && p <= last) {
        return 0.0;
    }
    if u.len == 1 {
        return row[0];
    }
    let k = (p.floor() as usize).min(u.len - 2);
    let s = p - k as f64;
    row[k] * (1.0 - s) + row[k + 1] * s
}

/// `Σ_i |W(t_i, s·t_i + c)|·dt` with linear interpolation in `u`.
pub fn radon(grid: &TFGrid, slopes: &Axis, intercepts: &Axis) -> Result<RadonMap> {
    if grid.t.len == 0 || grid.u.len == 0 || slopes.len == 0 || intercepts.len == 0 {
        return Err(Error::EmptyGrid);
    }
    let mags: Vec<Vec<f64>> = (0..grid.t.len).map(|i| grid.row(i).iter().map(|v| v.norm()).collect()).collect();
    let accum = (0..slopes.len)
        .into_par_iter()
        .flat_map_iter(|i| {
            let s = slopes.value(i);
            let mags = &mags;
            (0..intercepts.len).map(move |k| {
                let c = intercepts.value(k);
                (0..grid.t.len).map(|j| sample_row(&mags[j], &grid.u, s * grid.t.value(j) + c)).sum::<f64>() * grid.t.step
            })
        })
        .collect();
    Ok(RadonMap { slopes: *slopes, intercepts: *intercepts, accum })
}

/// `b1 d1 − a1 c1`
pub fn slope_factor(a1: &SymplecticMatrix) -> f64 {
    a1.b() * a1.d() - a1.a() * a1.c()
}

/// `β̂ = s / (2(b1d1 − a1c1)b2)`
pub fn slope_to_rate(a1: &SymplecticMatrix, a2: &SymplecticMatrix, slope: f64) -> Result<f64> {
    let k = slope_factor(a1);
    if k == 0.0 {
        return Err(Error::DegenerateMap);
    }
    if a2.b() == 0.0 {
        return Err(Error::ZeroB);
    }
    Ok(slope / (2.0 * k * a2.b()))
}

/// Expected ridge `(slope, intercept)` for `lfm(α, β)`.
pub fn predicted_ridge(alpha: f64, beta: f64, a1: &SymplecticMatrix, a2: &SymplecticMatrix) -> (f64, f64) {
    (2.0 * beta * slope_factor(a1) * a2.b(), alpha * (a1.d() - a1.c()) * a2.b())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateAmplitude {
    pub rates: Vec<f64>,
    /// Maximum over intercepts of the accumulation at each slope.
    pub amplitude: Vec<f64>,
    pub peak_rate: f64,
    pub peak_amplitude: f64,
    pub peak_to_mean: f64,
    /// Intercept at the overall maximum.
    pub peak_intercept: f64,
    /// `α̂ = c / ((d1 − c1) b2)` from `peak_intercept`, when `d1 ≠ c1`.
    pub alpha_estimate: Option<f64>,
    /// `α(d1 − c1) b2` for a caller-supplied `α`.
    pub predicted_intercept: Option<f64>,
}

impl RateAmplitude {
    /// Writes `rate,amplitude` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "rate,amplitude")?;
        for (r, a) in self.rates.iter().zip(&self.amplitude) {
            writeln!(w, "{r},{a}")?;
        }
        Ok(())
    }
}

pub fn rate_distribution(map: &RadonMap, a1: &SymplecticMatrix, a2: &SymplecticMatrix, alpha_known: Option<f64>) -> Result<RateAmplitude> {
    let rates = (0..map.slopes.len)
        .map(|i| slope_to_rate(a1, a2, map.slopes.value(i)))
        .collect::<Result<Vec<_>>>()?;
    let mut amplitude = Vec::with_capacity(map.slopes.len);
    let mut best = (0, 0, f64::NEG_INFINITY);
    for i in 0..map.slopes.len {
        let mut row_best = (0, f64::NEG_INFINITY);
        for k in 0..map.intercepts.len {
            let v = map.at(i, k);
            if v > row_best.1 {
                row_best = (k, v);
            }
        }
        amplitude.push(row_best.1);
        if row_best.1 > best.2 {
            best = (i, row_best.0, row_best.1);
        }
    }
    let mean = amplitude.iter().sum::<f64>() / amplitude.len() as f64;
    let peak_amplitude = best.2;
    let peak_intercept = map.intercepts.value(best.1);
    let shift = (a1.d() - a1.c()) * a2.b();
    Ok(RateAmplitude {
        peak_rate: rates[best.0],
        rates,
        peak_amplitude,
        peak_to_mean: if mean > 0.0 { peak_amplitude / mean } else { 0.0 },
        amplitude,
        peak_intercept,
        alpha_estimate: (shift != 0.0).then(|| peak_intercept / shift),
        predicted_intercept: alpha_known.map(|a| a * shift),
    })
}

/// Least-squares line through the per-row `|W|` maxima, using rows whose
/// maximum is at least half the grid peak. The maxima are refined by a
/// parabola through the three samples around each peak.
pub fn fit_ridge(grid: &TFGrid) -> Option<(f64, f64)> {
    let peak = grid.peak();
    if peak == 0.0 {
        return None;
    }
    let mut pts = Vec::new();
    for i in 0..grid.t.len {
        let row: Vec<f64> = grid.row(i).iter().map(|v| v.norm()).collect();
        let (k, m) = row.iter().enumerate().fold((0, f64::NEG_INFINITY), |b, (k, &v)| if v > b.1 { (k, v) } else { b });
        if m < 0.5 * peak || k == 0 || k + 1 == row.len() {
            continue;
        }
        let (l, c, r) = (row[k - 1], row[k], row[k + 1]);
        let den = l - 2.0 * c + r;
        let off = if den != 0.0 { 0.5 * (l - r) / den } else { 0.0 };
        pts.push((grid.t.value(i), grid.u.value(k) + off.clamp(-0.5, 0.5) * grid.u.step));
    }
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Per-method outcome of [`compare_methods`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodResult {
    pub distribution: Distribution,
    pub a1: SymplecticMatrix,
    pub a2: SymplecticMatrix,
    #[serde(skip)]
    pub grid: TFGrid,
    #[serde(skip)]
    pub radon: RadonMap,
    #[serde(skip)]
    pub rate: RateAmplitude,
    pub peak_rate: f64,
    pub peak_to_mean: f64,
    /// Peak amplitude over the largest peak amplitude of the four methods.
    pub normalized_peak: f64,
    /// `max|W| / ‖W‖₂` on the grid.
    pub concentration: f64,
    pub ridge: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub methods: Vec<MethodResult>,
}

impl Comparison {
    pub fn get(&self, d: Distribution) -> Option<&MethodResult> {
        self.methods.iter().find(|m| m.distribution == d)
    }

    /// Whether SWDL has the strictly largest `peak_to_mean`.
    pub fn swdl_most_concentrated(&self) -> bool {
        let Some(s) = self.get(Distribution::Swdl) else {
            return false;
        };
        self.methods.iter().filter(|m| m.distribution != Distribution::Swdl).all(|m| s.peak_to_mean > m.peak_to_mean)
    }

    /// One row per method.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "method,peak_rate,peak_to_mean,normalized_peak,concentration,ridge_slope,ridge_intercept")?;
        for m in &self.methods {
            let (rs, ri) = m.ridge.map(|(s, c)| (s.to_string(), c.to_string())).unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                m.distribution.name(),
                m.peak_rate,
                m.peak_to_mean,
                m.normalized_peak,
                m.concentration,
                rs,
                ri
            )?;
        }
        Ok(())
    }
}

/// SWDL, SWD, WDL and WD grids of `f` on shared axes with their Radon maps
/// and rate distributions.
pub fn compare_methods(
    f: &Signal,
    a1: &SymplecticMatrix,
    a2: &SymplecticMatrix,
    t: &Axis,
    u: &Axis,
    slopes: &Axis,
    intercepts: &Axis,
    alpha_known: Option<f64>,
) -> Result<Comparison> {
    let mut methods = Vec::with_capacity(4);
    for d in Distribution::ALL {
        let (m1, m2) = d.matrices(a1, a2);
        let grid = special_case(f, d, a1, a2, t, u)?;
        let map = radon(&grid, slopes, intercepts)?;
        let rate = rate_distribution(&map, &m1, &m2, alpha_known)?;
        let norm = grid.l2_norm();
        methods.push(MethodResult {
            distribution: d,
            a1: m1,
            a2: m2,
            peak_rate: rate.peak_rate,
            peak_to_mean: rate.peak_to_mean,
            normalized_peak: 0.0,
            concentration: if norm > 0.0 { grid.peak() / norm } else { 0.0 },
            ridge: fit_ridge(&grid),
            grid,
            radon: map,
            rate,
        });
    }
    let top = methods.iter().map(|m| m.rate.peak_amplitude).fold(0.0, f64::max);
    for m in &mut methods {
        m.normalized_peak = if top > 0.0 { m.rate.peak_amplitude / top } else { 0.0 };
    }
    Ok(Comparison { methods })
}
