//! Linear canonical transform: kernel, reference quadrature, FFT fast path
//! and inverse.
//!
//! `L^A f(u) = ∫ f(t) LK^A(u,t) dt` with
//! `LK^A(u,t) = e^{j(d u²/(2b) - u t/b + a t²/(2b))} / √(j2πb)`.
//! Every square root is the principal branch.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::axis::Axis;
use crate::error::{Error, Result};
use crate::quadrature::{composite_nodes, integrate, panel_count};
use crate::signals::{SampledSignal, Signal};
use crate::symplectic::SymplecticMatrix;

/// `1/√(j2πb)`, principal branch.
pub fn kernel_prefactor(b: f64) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI * b).sqrt().inv()
}

/// Precomputed kernel of one matrix.
#[derive(Debug, Clone, Copy)]
pub struct Kernel {
    pre: Complex64,
    uu: f64,
    ut: f64,
    tt: f64,
}

impl Kernel {
    pub fn new(m: &SymplecticMatrix) -> Result<Self> {
        let b = m.b();
        if b == 0.0 {
            return Err(Error::ZeroB);
        }
        Ok(Kernel { pre: kernel_prefactor(b), uu: m.d() / (2.0 * b), ut: 1.0 / b, tt: m.a() / (2.0 * b) })
    }

    #[inline]
    pub fn phase(&self, u: f64, t: f64) -> f64 {
        self.uu * u * u - self.ut * u * t + self.tt * t * t
    }

    #[inline]
    pub fn eval(&self, u: f64, t: f64) -> Complex64 {
        self.pre * Complex64::from_polar(1.0, self.phase(u, t))
    }

    pub fn prefactor(&self) -> Complex64 {
        self.pre
    }
}

/// `LK^A(u, t)`
pub fn kernel(m: &SymplecticMatrix, u: f64, t: f64) -> Result<Complex64> {
    Ok(Kernel::new(m)?.eval(u, t))
}

/// Transform values on a uniform `u` lattice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LctResult {
    pub u0: f64,
    pub du: f64,
    pub values: Vec<Complex64>,
}

impl LctResult {
    pub fn axis(&self) -> Axis {
        Axis { start: self.u0, step: self.du, len: self.values.len() }
    }

    pub fn u(&self, k: usize) -> f64 {
        self.u0 + k as f64 * self.du
    }

    /// `Σ |g|² du`
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.du
    }

    /// Writes `u,re,im` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "u,re,im")?;
        for (k, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{},{}", self.u(k), v.re, v.im)?;
        }
        Ok(())
    }

    /// Reinterprets the lattice as a sampled signal.
    pub fn to_sampled(&self) -> Result<SampledSignal> {
        SampledSignal::new(self.u0, self.du, self.values.clone())
    }
}

/// `u`-interval holding `L^A f`: image of the time–frequency box of `f`
/// under `u = a·t + b·ω`.
pub fn output_range(f: &Signal, m: &SymplecticMatrix) -> Result<(f64, f64)> {
    let (t_lo, t_hi) = f.finite_support()?;
    let (w_lo, w_hi) = f.band();
    let corners = [
        m.a() * t_lo + m.b() * w_lo,
        m.a() * t_lo + m.b() * w_hi,
        m.a() * t_hi + m.b() * w_lo,
        m.a() * t_hi + m.b() * w_hi,
    ];
    let lo = corners.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = corners.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::UnboundedSupport);
    }
    Ok((lo, hi))
}

/// `√d e^{j c d u²/2} f(d u)`, the `b = 0` member of the family.
fn scaling_chirp(f: &Signal, m: &SymplecticMatrix, u: f64) -> Complex64 {
    let (c, d) = (m.c(), m.d());
    Complex64::new(d, 0.0).sqrt() * Complex64::from_polar(1.0, 0.5 * c * d * u * u) * f.eval(d * u)
}

/// `L^A f(u)` by composite Gauss–Legendre quadrature over the support.
pub fn lct_point(f: &Signal, m: &SymplecticMatrix, u: f64) -> Result<Complex64> {
    if m.b() == 0.0 {
        return Ok(scaling_chirp(f, m, u));
    }
    let k = Kernel::new(m)?;
    let (lo, hi) = f.finite_support()?;
    if hi <= lo {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let sweep = ((m.a() * lo - u) / m.b()).abs().max(((m.a() * hi - u) / m.b()).abs());
    let panels = panel_count(hi - lo, f.max_rate() + sweep);
    Ok(integrate(lo, hi, panels, |t| f.eval(t) * k.eval(u, t)))
}

/// `L^A f` on a `u` lattice by quadrature; `b = 0` dispatches to the
/// scaling-chirp form.
pub fn lct_quadrature(f: &Signal, m: &SymplecticMatrix, u: &Axis) -> Result<LctResult> {
    if m.b() != 0.0 {
        f.finite_support()?;
    }
    let values = (0..u.len)
        .into_par_iter()
        .map(|k| lct_point(f, m, u.value(k)))
        .collect::<Result<Vec<_>>>()?;
    Ok(LctResult { u0: u.start, du: u.step, values })
}

/// `(u, weight, L^A f(u))` on composite Gauss–Legendre nodes over `[lo, hi]`.
pub fn lct_nodes(f: &Signal, m: &SymplecticMatrix, lo: f64, hi: f64, panels: usize) -> Result<Vec<(f64, f64, Complex64)>> {
    composite_nodes(lo, hi, panels)
        .into_par_iter()
        .map(|(u, w)| Ok((u, w, lct_point(f, m, u)?)))
        .collect()
}

/// Output of [`lct_fast`].
#[derive(Debug, Clone, PartialEq)]
pub struct FastLct {
    pub result: LctResult,
    /// Chirped input advances by π or more between samples.
    pub alias_risk: bool,
    /// Largest phase increment per sample that was checked.
    pub max_increment: f64,
}

/// Chirp multiply, FFT, chirp multiply.
///
/// The output lattice has `M = next_pow2(4n)` points centred on zero with
/// `du = 2π|b| / (M·dt)`.
pub fn lct_fast(s: &SampledSignal, m: &SymplecticMatrix) -> Result<FastLct> {
    let k = Kernel::new(m)?;
    let b = m.b();
    let n = s.len();
    let size = (4 * n).next_power_of_two();
    let dt = s.dt;

    let mut buf: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); size];
    let mut signal_step: f64 = 0.0;
    for (i, v) in s.values.iter().enumerate() {
        let t = s.time(i);
        buf[i] = v * Complex64::from_polar(1.0, k.tt * t * t);
        if i > 0 {
            let prev = s.values[i - 1];
            if prev.norm() > 0.0 && v.norm() > 0.0 {
                signal_step = signal_step.max((v / prev).arg().abs());
            }
        }
    }
    let t_max = s.t0.abs().max(s.t_end().abs());
    let chirp_step = (m.a() / b).abs() * t_max * dt;
    let max_increment = chirp_step + signal_step;

    let mut planner = FftPlanner::<f64>::new();
    let fft = if b > 0.0 { planner.plan_fft_forward(size) } else { planner.plan_fft_inverse(size) };
    fft.process(&mut buf);

    let du = 2.0 * PI * b.abs() / (size as f64 * dt);
    let half = (size / 2) as isize;
    let values = (0..size as isize)
        .map(|j| {
            let idx = j - half;
            let bin = idx.rem_euclid(size as isize) as usize;
            let u = idx as f64 * du;
            let phase = k.uu * u * u - u * s.t0 / b;
            buf[bin] * k.pre * Complex64::from_polar(dt, phase)
        })
        .collect();
    Ok(FastLct {
        result: LctResult { u0: -(half as f64) * du, du, values },
        alias_risk: max_increment >= PI,
        max_increment,
    })
}

/// Inverse transform of lattice data: `Σ_k g(u_k) LK^{A⁻¹}(t, u_k) du`.
/// The returned lattice is the time axis `t`.
pub fn lct_inverse(g: &LctResult, m: &SymplecticMatrix, t: &Axis) -> Result<LctResult> {
    let k = Kernel::new(&m.inverse())?;
    let values = (0..t.len)
        .into_par_iter()
        .map(|i| {
            let ti = t.value(i);
            let s: Complex64 = g.values.iter().enumerate().map(|(j, v)| v * k.eval(ti, g.u(j))).sum();
            s * g.du
        })
        .collect();
    Ok(LctResult { u0: t.start, du: t.step, values })
}
