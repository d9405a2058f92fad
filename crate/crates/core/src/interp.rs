//! Kaiser-windowed sinc interpolation on a uniform lattice.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Taps on each side of the evaluation point.
pub const HALF_TAPS: usize = 16;

/// Kaiser shape parameter; about 120 dB of stopband rejection.
pub const KAISER_BETA: f64 = 12.3;

/// Offsets below this many samples count as lattice hits.
const LATTICE_SNAP: f64 = 1e-9;

/// Modified Bessel function of the first kind, order zero (power series).
pub fn bessel_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let k = k as f64;
        term *= q / (k * k);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

fn kaiser(y: f64) -> f64 {
    let r = y / HALF_TAPS as f64;
    if r.abs() >= 1.0 {
        return 0.0;
    }
    bessel_i0(KAISER_BETA * (1.0 - r * r).sqrt()) / bessel_i0(KAISER_BETA)
}

fn sinc(y: f64) -> f64 {
    if y == 0.0 {
        1.0
    } else {
        let p = PI * y;
        p.sin() / p
    }
}

/// Interpolates `values[k] ≙ x0 + k·dx` at `x`.
///
/// Returns the stored sample on lattice points and zero outside
/// `[x0, x0 + (n-1)·dx]`. Missing taps near the ends count as zero.
pub fn windowed_sinc(x0: f64, dx: f64, values: &[Complex64], x: f64) -> Complex64 {
    let n = values.len();
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let pos = (x - x0) / dx;
    let last = (n - 1) as f64;
    if !(pos >= 0.0 && pos <= last) {
        return Complex64::new(0.0, 0.0);
    }
    let nearest = pos.round();
    if (pos - nearest).abs() < LATTICE_SNAP {
        return values[nearest as usize];
    }
    let base = pos.floor() as isize;
    let lo = (base - HALF_TAPS as isize + 1).max(0);
    let hi = (base + HALF_TAPS as isize).min(n as isize - 1);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in lo..=hi {
        let y = pos - k as f64;
        acc += values[k as usize] * (sinc(y) * kaiser(y));
    }
    acc
}
