//! Test signals and sampled data.
//!
//! A [`Signal`] is an immutable, cheaply clonable handle to an evaluator of
//! time. Analytic sources (LFM, Gaussian family) are evaluated in closed
//! form; sampled data goes through Kaiser-windowed sinc interpolation.

use std::f64::consts::PI;
use std::fmt;
use std::io::{BufRead, Write};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::windowed_sinc;

/// Relative envelope floor that defines the support of Gaussian signals.
pub const ENVELOPE_FLOOR: f64 = 1e-12;

/// Half-width of the Gaussian support in units of `√ζ`: `√(2 ln 10¹²)`.
pub fn gaussian_half_width() -> f64 {
    (2.0 * (1.0 / ENVELOPE_FLOOR).ln()).sqrt()
}

/// The four phase shapes of Gaussian-enveloped chirps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChirpForm {
    /// `η = 1`
    M1,
    /// `η = -1`
    M2,
    /// `η = sgn(t - t⁰)`
    M3,
    /// `η = -sgn(t - t⁰)`
    M4,
}

impl ChirpForm {
    pub fn from_index(m: u8) -> Option<Self> {
        match m {
            1 => Some(ChirpForm::M1),
            2 => Some(ChirpForm::M2),
            3 => Some(ChirpForm::M3),
            4 => Some(ChirpForm::M4),
            _ => None,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            ChirpForm::M1 => 1,
            ChirpForm::M2 => 2,
            ChirpForm::M3 => 3,
            ChirpForm::M4 => 4,
        }
    }

    fn eta(self, x: f64) -> f64 {
        let s = if x < 0.0 { -1.0 } else { 1.0 };
        match self {
            ChirpForm::M1 => 1.0,
            ChirpForm::M2 => -1.0,
            ChirpForm::M3 => s,
            ChirpForm::M4 => -s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Chirp {
    /// Chirp width `ξ > 0` (s²).
    pub xi: f64,
    pub form: ChirpForm,
}

/// `e^{-(t-t⁰)²/(2ζ) + ε} · e^{j(η(t)(t-t⁰)²/(2ξ) + ω⁰t + ς)}`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianChirpParams {
    pub t0: f64,
    pub zeta: f64,
    pub epsilon: f64,
    pub omega0: f64,
    pub varsigma: f64,
    pub chirp: Option<Chirp>,
}

impl GaussianChirpParams {
    /// Real Gaussian centred at `t0` with width `zeta`.
    pub fn gaussian(t0: f64, zeta: f64) -> Self {
        GaussianChirpParams { t0, zeta, epsilon: 0.0, omega0: 0.0, varsigma: 0.0, chirp: None }
    }

    pub fn with_omega0(mut self, omega0: f64) -> Self {
        self.omega0 = omega0;
        self
    }

    pub fn with_chirp(mut self, xi: f64, form: ChirpForm) -> Self {
        self.chirp = Some(Chirp { xi, form });
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.zeta > 0.0) || !self.zeta.is_finite() {
            return Err(Error::InvalidWidth { name: "zeta", value: self.zeta });
        }
        if let Some(c) = self.chirp {
            if !(c.xi > 0.0) || !c.xi.is_finite() {
                return Err(Error::InvalidWidth { name: "xi", value: c.xi });
            }
        }
        Ok(())
    }

    fn eval(&self, t: f64) -> Complex64 {
        let x = t - self.t0;
        let mag = (-x * x / (2.0 * self.zeta) + self.epsilon).exp();
        let mut phase = self.omega0 * t + self.varsigma;
        if let Some(c) = self.chirp {
            phase += c.form.eta(x) * x * x / (2.0 * c.xi);
        }
        Complex64::from_polar(mag, phase)
    }

    fn phase_rate(&self, t: f64) -> f64 {
        let x = t - self.t0;
        let chirp = self.chirp.map_or(0.0, |c| c.form.eta(x) * x / c.xi);
        self.omega0 + chirp
    }

    fn support(&self) -> (f64, f64) {
        let h = gaussian_half_width() * self.zeta.sqrt();
        (self.t0 - h, self.t0 + h)
    }

    fn band(&self) -> (f64, f64) {
        let k = gaussian_half_width();
        let envelope = k / self.zeta.sqrt();
        let sweep = self.chirp.map_or(0.0, |c| k * self.zeta.sqrt() / c.xi);
        (self.omega0 - envelope - sweep, self.omega0 + envelope + sweep)
    }
}

/// Uniformly sampled complex data.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    pub t0: f64,
    pub dt: f64,
    pub values: Vec<Complex64>,
}

impl SampledSignal {
    pub fn new(t0: f64, dt: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidAxis(format!("sample period must be positive, got {dt}")));
        }
        if values.is_empty() {
            return Err(Error::EmptyGrid);
        }
        Ok(SampledSignal { t0, dt, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn t_end(&self) -> f64 {
        self.t0 + (self.values.len() - 1) as f64 * self.dt
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    /// Windowed-sinc value at `t`; exact on the lattice, zero outside the span.
    pub fn evaluate(&self, t: f64) -> Complex64 {
        windowed_sinc(self.t0, self.dt, &self.values, t)
    }

    /// Writes `t,re,im` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,re,im")?;
        for (k, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{},{}", self.time(k), v.re, v.im)?;
        }
        Ok(())
    }

    /// Reads `t,re,im` rows; the time column must be uniform.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (n, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || (n == 0 && line.starts_with('t')) {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 3 {
                return Err(Error::Parse(format!("line {}: expected 3 columns", n + 1)));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("line {}: bad number `{s}`", n + 1)))
            };
            times.push(num(cols[0])?);
            values.push(Complex64::new(num(cols[1])?, num(cols[2])?));
        }
        if times.is_empty() {
            return Err(Error::EmptyGrid);
        }
        let dt = if times.len() > 1 { (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64 } else { 1.0 };
        for (k, t) in times.iter().enumerate() {
            if (t - (times[0] + k as f64 * dt)).abs() > 1e-9 * dt.abs().max(1.0) {
                return Err(Error::Parse(format!("row {}: time column is not uniform", k + 1)));
            }
        }
        SampledSignal::new(times[0], dt, values)
    }
}

/// Values `f(t0 + k·dt)` for `k < n`.
pub fn sample(f: &Signal, t0: f64, dt: f64, n: usize) -> Result<SampledSignal> {
    let values = (0..n).map(|k| f.eval(t0 + k as f64 * dt)).collect();
    SampledSignal::new(t0, dt, values)
}

type EvalFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;
type RateFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Op {
    Conj,
    Reverse,
    Scale(f64),
    Translate(f64),
    Modulate(f64),
    Gain(Complex64),
}

enum Source {
    Zero,
    Lfm { alpha: f64, beta: f64 },
    Gaussian(GaussianChirpParams),
    Sampled(SampledSignal),
    Map { inner: Signal, op: Op },
    Sum(Vec<Signal>),
    Custom { eval: EvalFn, rate: Option<RateFn>, support: Option<(f64, f64)>, band: (f64, f64) },
}

/// Evaluable complex signal with an effective support.
#[derive(Clone)]
pub struct Signal {
    source: Arc<Source>,
    window: Option<(f64, f64)>,
}

impl fmt::Debug for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &*self.source {
            Source::Zero => "zero".to_string(),
            Source::Lfm { alpha, beta } => format!("lfm(alpha={alpha}, beta={beta})"),
            Source::Gaussian(p) => format!("{p:?}"),
            Source::Sampled(s) => format!("sampled(t0={}, dt={}, n={})", s.t0, s.dt, s.len()),
            Source::Map { inner, op } => format!("{op:?} of {inner:?}"),
            Source::Sum(parts) => format!("sum of {} signals", parts.len()),
            Source::Custom { .. } => "custom".to_string(),
        };
        write!(f, "Signal({kind}, support={:?})", self.support())
    }
}

fn hull(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0.min(b.0), a.1.max(b.1))
}

impl Signal {
    fn from_source(source: Source) -> Self {
        Signal { source: Arc::new(source), window: None }
    }

    pub fn zero() -> Self {
        Signal::from_source(Source::Zero)
    }

    /// `e^{j(αt + βt²)}` on the whole line; window it before integrating.
    pub fn lfm(alpha: f64, beta: f64) -> Self {
        Signal::from_source(Source::Lfm { alpha, beta })
    }

    /// `e^{-(t-t0)²/(2ζ) + ε}`
    pub fn gaussian(t0: f64, zeta: f64, epsilon: f64) -> Result<Self> {
        Signal::gauss_chirp(GaussianChirpParams { epsilon, ..GaussianChirpParams::gaussian(t0, zeta) })
    }

    /// `e^{-(t-t0)²/(2ζ) + ε} e^{j(ω⁰t + ς)}`
    pub fn gauss_exponential(t0: f64, zeta: f64, epsilon: f64, omega0: f64, varsigma: f64) -> Result<Self> {
        Signal::gauss_chirp(GaussianChirpParams { t0, zeta, epsilon, omega0, varsigma, chirp: None })
    }

    pub fn gauss_chirp(params: GaussianChirpParams) -> Result<Self> {
        params.validate()?;
        Ok(Signal::from_source(Source::Gaussian(params)))
    }

    pub fn sampled(s: SampledSignal) -> Self {
        Signal::from_source(Source::Sampled(s))
    }

    /// Arbitrary evaluator with a declared support and angular-frequency band.
    pub fn from_fn<F>(eval: F, support: Option<(f64, f64)>, band: (f64, f64)) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Signal::from_source(Source::Custom { eval: Arc::new(eval), rate: None, support, band })
    }

    /// Like [`Signal::from_fn`] with a closed-form phase derivative.
    pub fn from_fn_with_rate<F, R>(eval: F, rate: R, support: Option<(f64, f64)>, band: (f64, f64)) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
        R: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Signal::from_source(Source::Custom { eval: Arc::new(eval), rate: Some(Arc::new(rate)), support, band })
    }

    fn map(&self, op: Op) -> Self {
        Signal::from_source(Source::Map { inner: self.clone(), op })
    }

    /// `conj(f(t))`
    pub fn conj(&self) -> Self {
        self.map(Op::Conj)
    }

    /// `f(-t)`
    pub fn reversed(&self) -> Self {
        self.map(Op::Reverse)
    }

    /// `√σ f(σt)` for `σ > 0`.
    pub fn scaled(&self, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidWidth { name: "sigma", value: sigma });
        }
        Ok(self.map(Op::Scale(sigma)))
    }

    /// `f(t - ϑ)`
    pub fn translated(&self, theta: f64) -> Self {
        self.map(Op::Translate(theta))
    }

    /// `e^{jξt} f(t)`
    pub fn modulated(&self, xi: f64) -> Self {
        self.map(Op::Modulate(xi))
    }

    /// `c · f(t)`
    pub fn gain(&self, c: Complex64) -> Self {
        self.map(Op::Gain(c))
    }

    pub fn plus(&self, other: &Signal) -> Self {
        Signal::from_source(Source::Sum(vec![self.clone(), other.clone()]))
    }

    /// Restricts the signal to `[lo, hi]` (intersected with its own support).
    pub fn windowed(&self, lo: f64, hi: f64) -> Self {
        let window = match self.window {
            Some((a, b)) => (a.max(lo), b.min(hi)),
            None => (lo, hi),
        };
        Signal { source: self.source.clone(), window: Some(window) }
    }

    fn source_support(&self) -> Option<(f64, f64)> {
        match &*self.source {
            Source::Zero => Some((0.0, 0.0)),
            Source::Lfm { .. } => None,
            Source::Gaussian(p) => Some(p.support()),
            Source::Sampled(s) => Some((s.t0, s.t_end())),
            Source::Map { inner, op } => {
                let (lo, hi) = inner.support()?;
                Some(match *op {
                    Op::Conj | Op::Modulate(_) | Op::Gain(_) => (lo, hi),
                    Op::Reverse => (-hi, -lo),
                    Op::Scale(s) => (lo / s, hi / s),
                    Op::Translate(th) => (lo + th, hi + th),
                })
            }
            Source::Sum(parts) => {
                let mut acc: Option<(f64, f64)> = None;
                for p in parts {
                    let s = p.support()?;
                    acc = Some(acc.map_or(s, |a| hull(a, s)));
                }
                acc
            }
            Source::Custom { support, .. } => *support,
        }
    }

    /// Interval outside which the signal is (numerically) zero; `None` when
    /// unbounded.
    pub fn support(&self) -> Option<(f64, f64)> {
        match (self.source_support(), self.window) {
            (Some((a, b)), Some((c, d))) => Some((a.max(c), b.min(d))),
            (None, w) => w,
            (s, None) => s,
        }
    }

    /// Finite support or [`Error::UnboundedSupport`].
    pub fn finite_support(&self) -> Result<(f64, f64)> {
        self.support().ok_or(Error::UnboundedSupport)
    }

    pub fn is_zero(&self) -> bool {
        matches!(&*self.source, Source::Zero) || self.support().is_some_and(|(a, b)| b <= a)
    }

    pub fn is_sampled(&self) -> bool {
        match &*self.source {
            Source::Sampled(_) => true,
            Source::Map { inner, .. } => inner.is_sampled(),
            Source::Sum(parts) => parts.iter().any(Signal::is_sampled),
            _ => false,
        }
    }

    fn eval_source(&self, t: f64) -> Complex64 {
        match &*self.source {
            Source::Zero => Complex64::new(0.0, 0.0),
            Source::Lfm { alpha, beta } => Complex64::from_polar(1.0, alpha * t + beta * t * t),
            Source::Gaussian(p) => p.eval(t),
            Source::Sampled(s) => s.evaluate(t),
            Source::Map { inner, op } => match *op {
                Op::Conj => inner.eval(t).conj(),
                Op::Reverse => inner.eval(-t),
                Op::Scale(s) => inner.eval(s * t) * s.sqrt(),
                Op::Translate(th) => inner.eval(t - th),
                Op::Modulate(xi) => inner.eval(t) * Complex64::from_polar(1.0, xi * t),
                Op::Gain(c) => inner.eval(t) * c,
            },
            Source::Sum(parts) => parts.iter().map(|p| p.eval(t)).sum(),
            Source::Custom { eval, .. } => eval(t),
        }
    }

    /// Complex amplitude at `t`; zero outside the support.
    pub fn eval(&self, t: f64) -> Complex64 {
        if let Some((lo, hi)) = self.support() {
            if t < lo || t > hi {
                return Complex64::new(0.0, 0.0);
            }
        }
        self.eval_source(t)
    }

    /// Closed-form phase derivative `φ'(t)`, when the source has one.
    pub fn phase_rate(&self, t: f64) -> Option<f64> {
        match &*self.source {
            Source::Zero => Some(0.0),
            Source::Lfm { alpha, beta } => Some(alpha + 2.0 * beta * t),
            Source::Gaussian(p) => Some(p.phase_rate(t)),
            Source::Sampled(_) | Source::Sum(_) => None,
            Source::Map { inner, op } => match *op {
                Op::Conj => inner.phase_rate(t).map(|r| -r),
                Op::Reverse => inner.phase_rate(-t).map(|r| -r),
                Op::Scale(s) => inner.phase_rate(s * t).map(|r| s * r),
                Op::Translate(th) => inner.phase_rate(t - th),
                Op::Modulate(xi) => inner.phase_rate(t).map(|r| r + xi),
                Op::Gain(_) => inner.phase_rate(t),
            },
            Source::Custom { rate, .. } => rate.as_ref().map(|r| r(t)),
        }
    }

    /// Angular-frequency interval that holds the spectrum (conservative).
    pub fn band(&self) -> (f64, f64) {
        match &*self.source {
            Source::Zero => (0.0, 0.0),
            Source::Lfm { alpha, beta } => match self.support() {
                Some((lo, hi)) => {
                    let (x, y) = (alpha + 2.0 * beta * lo, alpha + 2.0 * beta * hi);
                    (x.min(y), x.max(y))
                }
                None if *beta == 0.0 => (*alpha, *alpha),
                None => (f64::NEG_INFINITY, f64::INFINITY),
            },
            Source::Gaussian(p) => p.band(),
            Source::Sampled(s) => (-PI / s.dt, PI / s.dt),
            Source::Map { inner, op } => {
                let (lo, hi) = inner.band();
                match *op {
                    Op::Conj | Op::Reverse => (-hi, -lo),
                    Op::Scale(s) => (lo * s, hi * s),
                    Op::Translate(_) | Op::Gain(_) => (lo, hi),
                    Op::Modulate(xi) => (lo + xi, hi + xi),
                }
            }
            Source::Sum(parts) => parts.iter().map(Signal::band).reduce(hull).unwrap_or((0.0, 0.0)),
            Source::Custom { band, .. } => *band,
        }
    }

    /// Bound on the local angular frequency, `max |ω|` over the band.
    pub fn max_rate(&self) -> f64 {
        let (lo, hi) = self.band();
        lo.abs().max(hi.abs())
    }

    /// Largest `|Im f|` on `n` uniform points of the support.
    pub fn max_imag(&self, n: usize) -> Result<f64> {
        let (lo, hi) = self.finite_support()?;
        let n = n.max(2);
        Ok((0..n)
            .map(|k| self.eval(lo + (hi - lo) * k as f64 / (n - 1) as f64).im.abs())
            .fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_real;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn lfm_examples() {
        let f = Signal::lfm(1.0, 0.5);
        assert_eq!(f.eval(0.0), Complex64::new(1.0, 0.0));
        assert!(close(f.eval(1.0), Complex64::from_polar(1.0, 1.5), 1e-15));
        assert_eq!(Signal::lfm(0.0, 0.0).eval(3.7), Complex64::new(1.0, 0.0));
        assert_eq!(f.phase_rate(2.0), Some(3.0));
        assert!(f.support().is_none());
        assert_eq!(f.windowed(-5.0, 5.0).band(), (-4.0, 6.0));
        for t in [-3.0, 0.1, 2.5] {
            assert!((f.eval(t).norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn gaussian_examples() {
        let g = Signal::gaussian(0.0, 1.0, 0.0).unwrap();
        assert_eq!(g.eval(0.0), Complex64::new(1.0, 0.0));
        let (lo, hi) = g.support().unwrap();
        assert!((hi - 7.433_844_377_7).abs() < 1e-9 && (lo + hi).abs() < 1e-15);
        assert_eq!(g.eval(hi + 1e-9), Complex64::new(0.0, 0.0));
        assert!(g.eval(hi - 1e-9).norm() < 1.01e-12);
        assert_eq!(Signal::gaussian(0.0, 0.0, 0.0).unwrap_err(), Error::InvalidWidth { name: "zeta", value: 0.0 });
        assert!(Signal::gaussian(0.0, -1.0, 0.0).is_err());
    }

    fn spread(f: &Signal) -> (f64, f64) {
        let (lo, hi) = f.support().unwrap();
        let e = integrate_real(lo, hi, 128, |t| f.eval(t).norm_sqr());
        let m = integrate_real(lo, hi, 128, |t| t * f.eval(t).norm_sqr()) / e;
        let v = integrate_real(lo, hi, 128, |t| (t - m).powi(2) * f.eval(t).norm_sqr()) / e;
        (m, v)
    }

    #[test]
    fn gaussian_moments_by_quadrature() {
        let (m, v) = spread(&Signal::gaussian(0.0, 1.0, 0.0).unwrap());
        assert!(m.abs() < 1e-14 && (v - 0.5).abs() < 1e-12);
        let (m, v) = spread(&Signal::gaussian(2.0, 1.0, 0.0).unwrap());
        assert!((m - 2.0).abs() < 1e-12 && (v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn gauss_exponential_reduces_to_gaussian() {
        let a = Signal::gauss_exponential(0.3, 1.7, 0.2, 0.0, 0.0).unwrap();
        let b = Signal::gaussian(0.3, 1.7, 0.2).unwrap();
        for k in -40..=40 {
            let t = 0.1 * k as f64;
            assert_eq!(a.eval(t), b.eval(t));
        }
        let c = Signal::gauss_exponential(0.0, 1.0, 0.0, 3.0, 0.0).unwrap();
        assert!((c.eval(0.5).norm() - (-0.125f64).exp()).abs() < 1e-15);
        assert_eq!(c.phase_rate(1.3), Some(3.0));
    }

    #[test]
    fn gauss_chirp_forms() {
        let base = GaussianChirpParams::gaussian(0.0, 1.0);
        let m1 = Signal::gauss_chirp(base.with_chirp(1.0, ChirpForm::M1)).unwrap();
        let m2 = Signal::gauss_chirp(base.with_chirp(1.0, ChirpForm::M2)).unwrap();
        let m3 = Signal::gauss_chirp(base.with_chirp(2.0, ChirpForm::M3)).unwrap();
        for k in -20..=20 {
            let t = 0.17 * k as f64;
            assert!(close(m2.eval(t), m1.eval(t).conj(), 1e-15));
        }
        assert_eq!(m1.phase_rate(0.5), Some(0.5));
        assert_eq!(m3.phase_rate(-0.5), Some(0.25));
        assert_eq!(m3.phase_rate(0.5), Some(0.25));
        // a very wide chirp is nearly a plain exponential
        let wide = Signal::gauss_chirp(base.with_omega0(1.0).with_chirp(1e9, ChirpForm::M1)).unwrap();
        let plain = Signal::gauss_exponential(0.0, 1.0, 0.0, 1.0, 0.0).unwrap();
        assert!(close(wide.eval(1.5), plain.eval(1.5), 1e-8));
        assert!(Signal::gauss_chirp(base.with_chirp(0.0, ChirpForm::M1)).is_err());
        assert_eq!(ChirpForm::from_index(3), Some(ChirpForm::M3));
        assert_eq!(ChirpForm::from_index(5), None);
    }

    #[test]
    fn chirp_covariance_by_quadrature() {
        let f = Signal::gauss_chirp(GaussianChirpParams::gaussian(0.0, 1.0).with_chirp(1.0, ChirpForm::M1)).unwrap();
        let (lo, hi) = f.support().unwrap();
        let e = integrate_real(lo, hi, 128, |t| f.eval(t).norm_sqr());
        let cov = integrate_real(lo, hi, 128, |t| t * f.phase_rate(t).unwrap() * f.eval(t).norm_sqr()) / e;
        assert!((cov - 0.5).abs() < 1e-12);
    }

    #[test]
    fn transforms() {
        let g = Signal::gauss_exponential(1.0, 0.5, 0.0, 2.0, 0.0).unwrap();
        let t = 0.7;
        assert_eq!(g.conj().eval(t), g.eval(t).conj());
        assert_eq!(g.reversed().eval(t), g.eval(-t));
        assert!(close(g.scaled(2.0).unwrap().eval(t), g.eval(2.0 * t) * 2f64.sqrt(), 1e-15));
        assert_eq!(g.translated(1.0).eval(t), g.eval(t - 1.0));
        assert!(close(g.modulated(1.5).eval(t), g.eval(t) * Complex64::from_polar(1.0, 1.5 * t), 1e-15));
        assert_eq!(g.reversed().phase_rate(t), Some(-2.0));
        assert_eq!(g.modulated(1.0).phase_rate(t), Some(3.0));
        assert_eq!(g.translated(1.0).support().unwrap().0, g.support().unwrap().0 + 1.0);
        assert!(g.scaled(0.0).is_err());
        let s = g.plus(&g.conj());
        assert!(s.eval(t).im.abs() < 1e-15);
        assert!(s.phase_rate(t).is_none());
    }

    #[test]
    fn window_intersects_support() {
        let g = Signal::gaussian(0.0, 1.0, 0.0).unwrap().windowed(-1.0, 20.0);
        assert_eq!(g.support().unwrap().0, -1.0);
        assert!(g.support().unwrap().1 < 7.5);
        assert_eq!(g.eval(-1.5), Complex64::new(0.0, 0.0));
        assert!(Signal::zero().is_zero());
        assert_eq!(Signal::zero().eval(0.0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn sample_examples() {
        let f = Signal::lfm(1.0, 0.5);
        let s = sample(&f, -5.0, 0.05, 201).unwrap();
        assert_eq!(s.len(), 201);
        assert!((s.t_end() - 5.0).abs() < 1e-12);
        assert_eq!(s.values[100], Complex64::new(1.0, 0.0));
        let c = sample(&Signal::lfm(0.0, 0.0), 0.0, 0.1, 5).unwrap();
        assert!(c.values.iter().all(|v| *v == Complex64::new(1.0, 0.0)));
        assert!(sample(&f, 0.0, 0.0, 3).is_err());
        assert!(sample(&f, 0.0, 0.1, 0).is_err());
    }

    #[test]
    fn sampled_evaluation() {
        let g = Signal::gaussian(0.0, 1.0, 0.0).unwrap();
        let s = sample(&g, -8.0, 0.05, 321).unwrap();
        for k in [0usize, 17, 160, 320] {
            assert_eq!(s.evaluate(s.time(k)), s.values[k]);
        }
        assert_eq!(s.evaluate(8.5), Complex64::new(0.0, 0.0));
        assert!(close(s.evaluate(0.123), g.eval(0.123), 1e-6));
        let sig = Signal::sampled(s.clone());
        assert!(sig.is_sampled());
        assert_eq!(sig.support(), Some((-8.0, s.t_end())));
        assert!(sig.phase_rate(0.0).is_none());
    }

    #[test]
    fn sampled_csv_round_trip() {
        let s = sample(&Signal::lfm(0.3, 0.1), -1.0, 0.1, 21).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        assert!(buf.starts_with(b"t,re,im\n"));
        let back = SampledSignal::read_csv(&buf[..]).unwrap();
        assert_eq!(back.values, s.values);
        assert!((back.dt - s.dt).abs() < 1e-15);
        assert!(SampledSignal::read_csv(&b"t,re,im\n0,1\n"[..]).is_err());
        assert!(SampledSignal::read_csv(&b"t,re,im\n0,1,0\n1,1,0\n3,1,0\n"[..]).is_err());
    }
}
