//! SWDL grids by direct ε-quadrature and by the LCT-lattice form, the
//! classical special cases, and the marginal / energy / reconstruction /
//! Moyal identities as operations on a grid.
//!
//! `W(t,u) = ∫ f(b1 t + d1 ε) conj f(a1 t + c1 ε) LK^{A2}(u, ε) dε`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::axis::Axis;
use crate::error::{Error, Result};
use crate::interp::windowed_sinc;
use crate::lct::{lct_point, output_range, Kernel};
use crate::quadrature::{composite_nodes, panel_count};
use crate::signals::{SampledSignal, Signal};
use crate::symplectic::{derive_a3, derive_a4, derive_a5, SymplecticMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Edge magnitude (relative to the grid peak) above which a sum over an
/// axis counts as truncated.
pub const TRUNCATION_LEVEL: f64 = 1e-6;

/// Steps between exact re-seeds of the phasor recurrences.
const RESEED: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Definition,
    Equivalent,
}

/// The distribution a grid represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Distribution {
    Swdl,
    Swd,
    Wdl,
    Wd,
}

impl Distribution {
    pub const ALL: [Distribution; 4] = [Distribution::Swdl, Distribution::Swd, Distribution::Wdl, Distribution::Wd];

    /// Matrices used for this case given the general pair: SWD keeps `A1`
    /// with `A2 = L1`, WDL keeps `A2` with `A1 = WD_A1`, WD uses neither.
    pub fn matrices(self, a1: &SymplecticMatrix, a2: &SymplecticMatrix) -> (SymplecticMatrix, SymplecticMatrix) {
        match self {
            Distribution::Swdl => (*a1, *a2),
            Distribution::Swd => (*a1, SymplecticMatrix::l1()),
            Distribution::Wdl => (SymplecticMatrix::wd_a1(), *a2),
            Distribution::Wd => (SymplecticMatrix::wd_a1(), SymplecticMatrix::l1()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Distribution::Swdl => "SWDL",
            Distribution::Swd => "SWD",
            Distribution::Wdl => "WDL",
            Distribution::Wd => "WD",
        }
    }
}

/// Sampled distribution, `values[i·u.len + k] = W(t_i, u_k)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TFGrid {
    pub t: Axis,
    pub u: Axis,
    #[serde(skip)]
    pub values: Vec<Complex64>,
    pub a1: SymplecticMatrix,
    pub a2: SymplecticMatrix,
    pub method: Method,
    pub distribution: Distribution,
}

/// A sum over one grid axis plus whether the grid edge clipped it.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginal {
    pub axis: Axis,
    pub values: Vec<Complex64>,
    pub truncated: bool,
}

impl TFGrid {
    pub fn at(&self, i: usize, k: usize) -> Complex64 {
        self.values[i * self.u.len + k]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        let n = self.u.len;
        &self.values[i * n..(i + 1) * n]
    }

    pub fn column(&self, k: usize) -> Vec<Complex64> {
        (0..self.t.len).map(|i| self.at(i, k)).collect()
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `(Σ |W|² dt du)^{1/2}`
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.t.step * self.u.step).sqrt()
    }

    /// Largest `|W|` on the first and last `u` columns, relative to the peak.
    pub fn u_edge_ratio(&self) -> f64 {
        let peak = self.peak();
        if peak == 0.0 {
            return 0.0;
        }
        let last = self.u.len - 1;
        (0..self.t.len).map(|i| self.at(i, 0).norm().max(self.at(i, last).norm())).fold(0.0, f64::max) / peak
    }

    /// Largest `|W|` on the first and last `t` rows, relative to the peak.
    pub fn t_edge_ratio(&self) -> f64 {
        let peak = self.peak();
        if peak == 0.0 {
            return 0.0;
        }
        let first = self.row(0).iter().map(|v| v.norm());
        let last = self.row(self.t.len - 1).iter().map(|v| v.norm());
        first.chain(last).fold(0.0, f64::max) / peak
    }

    pub fn same_axes(&self, other: &TFGrid) -> bool {
        self.t.matches(&other.t) && self.u.matches(&other.u)
    }

    /// Writes `t,u,re,im,abs` rows, `t` outer.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,u,re,im,abs")?;
        for i in 0..self.t.len {
            let t = self.t.value(i);
            for k in 0..self.u.len {
                let v = self.at(i, k);
                writeln!(w, "{},{},{},{},{}", t, self.u.value(k), v.re, v.im, v.norm())?;
            }
        }
        Ok(())
    }

    /// Binary PGM of `|W|/peak` at 8 bits; rows are `t`, columns are `u`,
    /// both ascending. Returns the peak used for normalization.
    pub fn write_pgm<W: Write>(&self, mut w: W) -> Result<f64> {
        let peak = self.peak();
        write!(w, "P5\n{} {}\n255\n", self.u.len, self.t.len)?;
        let bytes: Vec<u8> = self
            .values
            .iter()
            .map(|v| if peak > 0.0 { (255.0 * v.norm() / peak).round().clamp(0.0, 255.0) as u8 } else { 0 })
            .collect();
        w.write_all(&bytes)?;
        Ok(peak)
    }
}

/// `sqrt(Σ|a−b|² / Σ|b|²)` over matching grids.
pub fn relative_l2(a: &TFGrid, b: &TFGrid) -> Result<f64> {
    if !a.same_axes(b) {
        return Err(Error::AxisMismatch);
    }
    let num: f64 = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.values.iter().map(|y| y.norm_sqr()).sum();
    Ok(if den == 0.0 { num.sqrt() } else { (num / den).sqrt() })
}

fn hull(xs: &[f64]) -> (f64, f64) {
    xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// `{ε : offset + coef·ε ∈ [lo, hi]}`; `None` when empty.
fn preimage(coef: f64, offset: f64, lo: f64, hi: f64) -> Option<(f64, f64)> {
    if coef == 0.0 {
        return (offset >= lo && offset <= hi).then_some((f64::NEG_INFINITY, f64::INFINITY));
    }
    let (x, y) = ((lo - offset) / coef, (hi - offset) / coef);
    Some((x.min(y), x.max(y)))
}

/// ε-interval where both `b1 t + d1 ε` and `a1 t + c1 ε` lie in the support.
fn epsilon_interval(a1: &SymplecticMatrix, support: (f64, f64), t: f64) -> Option<(f64, f64)> {
    let (lo, hi) = support;
    let p = preimage(a1.d(), a1.b() * t, lo, hi)?;
    let q = preimage(a1.c(), a1.a() * t, lo, hi)?;
    let (e0, e1) = (p.0.max(q.0), p.1.min(q.1));
    (e1 > e0).then_some((e0, e1))
}

/// `t`-extent of `W`: image of supp × supp under `t = −c1 x + d1 y`.
pub fn time_extent(f: &Signal, a1: &SymplecticMatrix) -> Result<(f64, f64)> {
    let (lo, hi) = f.finite_support()?;
    let (c, d) = (a1.c(), a1.d());
    Ok(hull(&[-c * lo + d * lo, -c * lo + d * hi, -c * hi + d * lo, -c * hi + d * hi]))
}

/// `u`-extent of `W`: `u = a2 ε + b2 ν` with `ε = a1 x − b1 y` and the lag
/// frequency `ν = d1 ω − c1 ω'` over the signal's time–frequency box.
pub fn lcf_extent(f: &Signal, a1: &SymplecticMatrix, a2: &SymplecticMatrix) -> Result<(f64, f64)> {
    let (lo, hi) = f.finite_support()?;
    let (wlo, whi) = f.band();
    let mut eps = Vec::with_capacity(4);
    let mut nu = Vec::with_capacity(4);
    for x in [lo, hi] {
        for y in [lo, hi] {
            eps.push(a1.a() * x - a1.b() * y);
        }
    }
    for w in [wlo, whi] {
        for w2 in [wlo, whi] {
            nu.push(a1.d() * w - a1.c() * w2);
        }
    }
    let (e0, e1) = hull(&eps);
    let (n0, n1) = hull(&nu);
    let (lo, hi) = hull(&[
        a2.a() * e0 + a2.b() * n0,
        a2.a() * e0 + a2.b() * n1,
        a2.a() * e1 + a2.b() * n0,
        a2.a() * e1 + a2.b() * n1,
    ]);
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::UnboundedSupport);
    }
    Ok((lo, hi))
}

/// Axes of `nt × nu` points spanning the `t`- and `u`-extent of `W`.
pub fn covering_axes(f: &Signal, a1: &SymplecticMatrix, a2: &SymplecticMatrix, nt: usize, nu: usize) -> Result<(Axis, Axis)> {
    let (t0, t1) = time_extent(f, a1)?;
    let (u0, u1) = lcf_extent(f, a1, a2)?;
    let pad = |lo: f64, hi: f64| {
        let w = (hi - lo).max(1e-9);
        (lo - 0.02 * w, hi + 0.02 * w)
    };
    let (t0, t1) = pad(t0, t1);
    let (u0, u1) = pad(u0, u1);
    Ok((Axis::linspace(t0, t1, nt)?, Axis::linspace(u0, u1, nu)?))
}

/// One `t` row of the definition-path grid.
///
/// The lag product is independent of `u`, so it is sampled once on nodes
/// sized for the fastest `u` of the row, and the `u` dependence
/// `e^{−j u ε / b2}` is advanced by phasor recurrence.
fn definition_row(f: &Signal, a1: &SymplecticMatrix, a2: &SymplecticMatrix, support: (f64, f64), t: f64, u: &Axis) -> Result<Vec<Complex64>> {
    let mut acc = vec![ZERO; u.len];
    let Some((e0, e1)) = epsilon_interval(a1, support, t) else {
        return Ok(acc);
    };
    if !e0.is_finite() || !e1.is_finite() {
        return Err(Error::UnboundedSupport);
    }
    let b2 = a2.b();
    let umax = u.start.abs().max(u.end().abs());
    let sweep = (a2.a() * e0).abs().max((a2.a() * e1).abs()) + umax;
    let rate = (a1.c().abs() + a1.d().abs()) * f.max_rate() + sweep / b2.abs();
    let panels = panel_count(e1 - e0, rate);
    let (a, b, c, d) = (a1.a(), a1.b(), a1.c(), a1.d());
    for (e, w) in composite_nodes(e0, e1, panels) {
        let g = f.eval(b * t + d * e) * f.eval(a * t + c * e).conj();
        if g == ZERO {
            continue;
        }
        let h = g * w * Complex64::from_polar(1.0, a2.a() * e * e / (2.0 * b2));
        let step = Complex64::from_polar(1.0, -u.step * e / b2);
        let mut z = ZERO;
        for (k, slot) in acc.iter_mut().enumerate() {
            if k % RESEED == 0 {
                z = h * Complex64::from_polar(1.0, -u.value(k) * e / b2);
            }
            *slot += z;
            z *= step;
        }
    }
    let pre = Kernel::new(a2)?.prefactor();
    for (k, slot) in acc.iter_mut().enumerate() {
        let uk = u.value(k);
        *slot *= pre * Complex64::from_polar(1.0, a2.d() * uk * uk / (2.0 * b2));
    }
    Ok(acc)
}

/// `W(t, u)` at one point by direct quadrature.
pub fn swdl_point(f: &Signal, a1: &SymplecticMatrix, a2: &SymplecticMatrix, t: f64, u: f64) -> Result<Complex64> {
    Kernel::new(a2)?;
    if f.is_zero() {
        return Ok(ZERO);
    }
    let support = f.finite_support()?;
    Ok(definition_row(f, a1, a2, support, t, &Axis::new(u, 1.0, 1)?)?[0])
}

fn zero_grid(a1: &SymplecticMatrix, a2: &SymplecticMatrix, t: &Axis, u: &Axis, method: Method) -> TFGrid {
    TFGrid {
        t: *t,
        u: *u,
        values: vec![ZERO; t.len * u.len],
        a1: *a1,
        a2: *a2,
        method,
        distribution: Distribution::Swdl,
    }
}

/// Grid by direct ε-quadrature on the intersection of the mapped supports.
pub fn swdl_definition(f: &Signal, a1: &SymplecticMatrix, a2: &SymplecticMatrix, t: &Axis, u: &Axis) -> Result<TFGrid> {
    Kernel::new(a2)?;
    if f.is_zero() {
        return Ok(zero_grid(a1, a2, t, u, Method::Definition));
    }
    let support = f.finite_support()?;
    let rows = (0..t.len)
        .into_par_iter()
        .map(|i| definition_row(f, a1, a2, support, t.value(i), u))
        .collect::<Result<Vec<_>>>()?;
    Ok(TFGrid {
        values: rows.concat(),
        ..zero_grid(a1, a2, t, u, Method::Definition)
    })
}

/// `χ(u,t)`; `|χ| = 1/√|b2 c1 d1|`.
pub fn chi(a1: &SymplecticMatrix, a2: &SymplecticMatrix, t: f64, u: f64) -> Complex64 {
    let (a, b, c, d) = (a1.a(), a1.b(), a1.c(), a1.d());
    let b2 = a2.b();
    let phase = a2.d() / (2.0 * b2) * u * u + a / (b2 * c) * u * t + a2.a() * a * b / (2.0 * b2 * c * d) * t * t;
    Complex64::from_polar(1.0, phase) / Complex64::new(0.0, b2 * c * d).sqrt()
}

/// `−1` when `c1 > 0 > d1`, else `1`: the sign by which the principal-root
/// prefactors of `A3`, `A4` and `χ` miss the `A2` prefactor.
pub fn lattice_branch(a1: &SymplecticMatrix) -> f64 {
    if a1.c() > 0.0 && a1.d() < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Grid by the LCT-lattice form:
/// `W = χ(u,t)/√(2π) Σ_k Λ3(v_k) conj Λ4(v_k − u) e^{−j v_k τ} h`,
/// `τ = t/(b2 c1 d1)`, with `Λ3`, `Λ4` the chirp-corrected transforms under
/// `A3` and `A4`.
///
/// The `v` lattice step divides `du`, so every `v_k − u_m` falls on the
/// `Λ4` lattice, and `2π/h` is at least four times the `τ` span.
///
/// With principal square roots the product of the `A3`, `A4` and `χ`
/// prefactors equals the `A2` prefactor only up to a factor `−1` when
/// `c1 > 0 > d1`; that sign is applied here.
pub fn swdl_equivalent(f: &Signal, a1: &SymplecticMatrix, a2: &SymplecticMatrix, t: &Axis, u: &Axis) -> Result<TFGrid> {
    Kernel::new(a2)?;
    let a3 = derive_a3(a1, a2)?;
    let a4 = derive_a4(a1, a2)?;
    if f.is_zero() {
        return Ok(zero_grid(a1, a2, t, u, Method::Equivalent));
    }
    let (a, b, c, d) = (a1.a(), a1.b(), a1.c(), a1.d());
    let (b2, d2) = (a2.b(), a2.d());
    let scale = b2 * c * d;

    let (x0, x1) = time_extent(f, a1)?;
    let (tau_lo, tau_hi) = hull(&[t.start / scale, t.end() / scale, x0 / scale, x1 / scale]);
    let h_max = 2.0 * PI / (4.0 * (tau_hi - tau_lo).max(1e-12));
    let ratio = (u.step / h_max).ceil().max(1.0) as usize;
    let h = u.step / ratio as f64;

    let (p_lo, p_hi) = output_range(f, &a3)?;
    let (q_lo, q_hi) = output_range(f, &a4)?;
    let v_base = u.start + ((p_lo - u.start) / h).floor() * h;
    let nv = ((p_hi - v_base) / h).ceil() as usize + 1;
    let w_base = v_base - u.start;
    let i_min = ((q_lo - w_base) / h).floor() as i64;
    let i_max = ((q_hi - w_base) / h).ceil() as i64;

    let lam3: Vec<Complex64> = (0..nv)
        .into_par_iter()
        .map(|k| {
            let v = v_base + k as f64 * h;
            Ok(Complex64::from_polar(1.0, -d2 * v * v / (2.0 * b2 * a * d)) * lct_point(f, &a3, v)?)
        })
        .collect::<Result<_>>()?;
    let lam4c: Vec<Complex64> = (i_min..=i_max)
        .into_par_iter()
        .map(|i| {
            let w = w_base + i as f64 * h;
            Ok((Complex64::from_polar(1.0, -d2 * w * w / (2.0 * b2 * b * c)) * lct_point(f, &a4, w)?).conj())
        })
        .collect::<Result<_>>()?;

    let norm = lattice_branch(a1) * h / (2.0 * PI).sqrt();
    let rows = (0..t.len)
        .into_par_iter()
        .map(|it| {
            let ti = t.value(it);
            let tau = ti / scale;
            let step = Complex64::from_polar(1.0, -h * tau);
            let mut phase = Vec::with_capacity(nv);
            let mut z = ZERO;
            for k in 0..nv {
                if k % RESEED == 0 {
                    z = Complex64::from_polar(1.0, -(v_base + k as f64 * h) * tau);
                }
                phase.push(lam3[k] * z);
                z *= step;
            }
            (0..u.len)
                .map(|m| {
                    // Λ4 index of v_k − u_m is k − m·ratio.
                    let shift = (m * ratio) as i64;
                    let k_lo = (i_min + shift).max(0);
                    let k_hi = (i_max + shift).min(nv as i64 - 1);
                    let mut s = ZERO;
                    for k in k_lo..=k_hi {
                        s += phase[k as usize] * lam4c[(k - shift - i_min) as usize];
                    }
                    chi(a1, a2, ti, u.value(m)) * s * norm
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>();
    Ok(TFGrid {
        values: rows.concat(),
        ..zero_grid(a1, a2, t, u, Method::Equivalent)
    })
}

/// SWDL, SWD, WDL or WD of `f` from the general pair `(a1, a2)`.
pub fn special_case(f: &Signal, which: Distribution, a1: &SymplecticMatrix, a2: &SymplecticMatrix, t: &Axis, u: &Axis) -> Result<TFGrid> {
    let (m1, m2) = which.matrices(a1, a2);
    let mut grid = swdl_definition(f, &m1, &m2, t, u)?;
    grid.distribution = which;
    Ok(grid)
}

/// `∫ W(t,u) LK^{A2⁻¹}(0,u) du`, which equals `f(b1 t) conj f(a1 t)`.
pub fn marginal_time(grid: &TFGrid) -> Result<Marginal> {
    let k = Kernel::new(&grid.a2.inverse())?;
    let weights: Vec<Complex64> = (0..grid.u.len).map(|m| k.eval(0.0, grid.u.value(m)) * grid.u.step).collect();
    let values = (0..grid.t.len)
        .map(|i| grid.row(i).iter().zip(&weights).map(|(w, k)| w * k).sum())
        .collect();
    Ok(Marginal { axis: grid.t, values, truncated: grid.u_edge_ratio() > TRUNCATION_LEVEL })
}

/// `∫ W(t,u) LK^{A5⁻¹}(t,0) dt`, which equals
/// `L^{A3}f(a1 d1 u) conj L^{A4}f(b1 c1 u)`.
pub fn marginal_lcf(grid: &TFGrid) -> Result<Marginal> {
    let a5 = derive_a5(&grid.a1, &grid.a2)?;
    let k = Kernel::new(&a5.inverse())?;
    let weights: Vec<Complex64> = (0..grid.t.len).map(|i| k.eval(grid.t.value(i), 0.0) * grid.t.step).collect();
    let values = (0..grid.u.len)
        .map(|m| (0..grid.t.len).map(|i| grid.at(i, m) * weights[i]).sum())
        .collect();
    Ok(Marginal { axis: grid.u, values, truncated: grid.t_edge_ratio() > TRUNCATION_LEVEL })
}

/// Right-hand side of [`marginal_lcf`] evaluated through the LCT, including
/// the [`lattice_branch`] sign.
pub fn marginal_lcf_reference(f: &Signal, a1: &SymplecticMatrix, a2: &SymplecticMatrix, u: f64) -> Result<Complex64> {
    let a3 = derive_a3(a1, a2)?;
    let a4 = derive_a4(a1, a2)?;
    Ok(lattice_branch(a1) * lct_point(f, &a3, a1.a() * a1.d() * u)? * lct_point(f, &a4, a1.b() * a1.c() * u)?.conj())
}

fn same(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0)
}

/// `|b1| ∫∫ W LK^{A2⁻¹}(0,u) dt du`; equals `‖f‖²` when `a1 = b1`.
pub fn energy_time(grid: &TFGrid) -> Result<Complex64> {
    if !same(grid.a1.a(), grid.a1.b()) {
        return Err(Error::SideCondition("time-marginal energy needs a1 = b1"));
    }
    let m = marginal_time(grid)?;
    Ok(m.values.iter().sum::<Complex64>() * grid.t.step * grid.a1.b().abs())
}

/// `|b1| conj(√c1) √d1 ∫∫ W LK^{A5⁻¹}(t,0) dt du`; equals `‖f‖²` when
/// `a1 = b1`, `a2 = d2 = 0` and either `c1 d1 > 0` or `b2 < 0`. With
/// `c1 d1 < 0` and `b2 > 0` the principal roots leave a factor `−1`.
pub fn energy_lcf(grid: &TFGrid) -> Result<Complex64> {
    if !same(grid.a1.a(), grid.a1.b()) || grid.a2.a() != 0.0 || grid.a2.d() != 0.0 {
        return Err(Error::SideCondition("lcf-marginal energy needs a1 = b1 and a2 = d2 = 0"));
    }
    let m = marginal_lcf(grid)?;
    let factor = Complex64::new(grid.a1.c(), 0.0).sqrt().conj() * Complex64::new(grid.a1.d(), 0.0).sqrt() * grid.a1.b().abs();
    Ok(m.values.iter().sum::<Complex64>() * grid.u.step * factor)
}

/// `|d1| √(j2π b2) W(0,0)`; equals `‖f‖²` when `c1 = d1` and `a2 = 0`.
pub fn energy_origin(f: &Signal, a1: &SymplecticMatrix, a2: &SymplecticMatrix) -> Result<Complex64> {
    if !same(a1.c(), a1.d()) || a2.a() != 0.0 {
        return Err(Error::SideCondition("origin energy needs c1 = d1 and a2 = 0"));
    }
    let w = swdl_point(f, a1, a2, 0.0, 0.0)?;
    Ok(w * a1.d().abs() * Complex64::new(0.0, 2.0 * PI * a2.b()).sqrt())
}

/// `f(t) = (1/conj f0) ∫ W(−c1 t, u) LK^{A2⁻¹}(a1 t, u) du` on `t_out`.
///
/// `W` is interpolated along `t` with a windowed sinc, so the grid `t` step
/// must resolve the `e^{j a1 u t/(b2 c1)}` oscillation of `W`.
/// The flag reports a clipped `u` range.
pub fn reconstruct(grid: &TFGrid, f0: Complex64, t_out: &Axis) -> Result<(SampledSignal, bool)> {
    if f0.norm() < 1e-12 {
        return Err(Error::ZeroAtOrigin(f0.norm()));
    }
    let k = Kernel::new(&grid.a2.inverse())?;
    let columns: Vec<Vec<Complex64>> = (0..grid.u.len).map(|m| grid.column(m)).collect();
    let (a, c) = (grid.a1.a(), grid.a1.c());
    let scale = f0.conj().inv() * grid.u.step;
    let values = (0..t_out.len)
        .into_par_iter()
        .map(|i| {
            let t = t_out.value(i);
            let tp = -c * t;
            let s: Complex64 = columns
                .iter()
                .enumerate()
                .map(|(m, col)| windowed_sinc(grid.t.start, grid.t.step, col, tp) * k.eval(a * t, grid.u.value(m)))
                .sum();
            s * scale
        })
        .collect();
    Ok((SampledSignal::new(t_out.start, t_out.step, values)?, grid.u_edge_ratio() > TRUNCATION_LEVEL))
}

/// `Σ W_f conj W_g dt du`, which equals `|⟨f,g⟩|²`.
pub fn moyal_inner(wf: &TFGrid, wg: &TFGrid) -> Result<Complex64> {
    if !wf.same_axes(wg) {
        return Err(Error::AxisMismatch);
    }
    let s: Complex64 = wf.values.iter().zip(&wg.values).map(|(x, y)| x * y.conj()).sum();
    Ok(s * wf.t.step * wf.u.step)
}
