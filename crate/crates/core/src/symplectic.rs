//! 2×2 symplectic matrices (the parameter space of 1-D linear canonical
//! transforms), the fixed auxiliary matrices used by the coordinate
//! identities, and the closed-form matrix selection rules.
//!
//! A [`SymplecticMatrix`] is always validated: `ad - bc = 1` within
//! [`DET_TOLERANCE`]. Auxiliary matrices that are not symplectic
//! (`J`, `N` have determinant −1) live in the plain [`Mat2`] type.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Accepted drift of `ad - bc` from 1.
pub const DET_TOLERANCE: f64 = 1e-9;

/// Plain real 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    /// `[[0, 1], [1, 0]]`
    pub const fn j() -> Mat2 {
        Mat2::new(0.0, 1.0, 1.0, 0.0)
    }

    /// `[[-1, 0], [0, 1]]`, used by the conjugation symmetry.
    pub const fn n() -> Mat2 {
        Mat2::new(-1.0, 0.0, 0.0, 1.0)
    }

    /// `[[0, -1], [1, 1]]`, the coordinate change of the LCT-domain form.
    pub const fn m() -> Mat2 {
        Mat2::new(0.0, -1.0, 1.0, 1.0)
    }

    /// `[[1/σ, 0], [0, σ]]`, used by the scaling property.
    pub fn p(sigma: f64) -> Mat2 {
        Mat2::new(1.0 / sigma, 0.0, 0.0, sigma)
    }
}

/// Validated element of Sp(1, ℝ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Mat2", into = "Mat2")]
pub struct SymplecticMatrix {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl TryFrom<Mat2> for SymplecticMatrix {
    type Error = Error;

    fn try_from(m: Mat2) -> Result<Self> {
        SymplecticMatrix::new(m.a, m.b, m.c, m.d)
    }
}

impl From<SymplecticMatrix> for Mat2 {
    fn from(s: SymplecticMatrix) -> Mat2 {
        Mat2::new(s.a, s.b, s.c, s.d)
    }
}

impl SymplecticMatrix {
    /// Validates `[[a, b], [c, d]]`.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(Error::NotSymplectic { residual: f64::NAN });
        }
        let residual = (a * d - b * c - 1.0).abs();
        if residual > DET_TOLERANCE {
            return Err(Error::NotSymplectic { residual });
        }
        Ok(SymplecticMatrix { a, b, c, d })
    }

    pub fn identity() -> Self {
        SymplecticMatrix { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// `L1 = [[0, 1], [-1, 0]]`: the LCT it parameterizes is the Fourier
    /// transform up to the constant `1/√j`.
    pub fn l1() -> Self {
        SymplecticMatrix { a: 0.0, b: 1.0, c: -1.0, d: 0.0 }
    }

    /// `[[1, 1], [-1/2, 1/2]]`, the coordinate matrix of the classical
    /// Wigner distribution.
    pub fn wd_a1() -> Self {
        SymplecticMatrix { a: 1.0, b: 1.0, c: -0.5, d: 0.5 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn as_mat2(&self) -> Mat2 {
        (*self).into()
    }

    /// `[[d, -b], [-c, a]]`
    pub fn inverse(&self) -> Self {
        SymplecticMatrix { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// `-A`; still symplectic since the determinant is quadratic.
    pub fn negated(&self) -> Self {
        SymplecticMatrix { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn compose(&self, rhs: &SymplecticMatrix) -> Self {
        let m = self.as_mat2().mul(&rhs.as_mat2());
        SymplecticMatrix { a: m.a, b: m.b, c: m.c, d: m.d }
    }

    /// `L · A · R` for plain matrices whose determinants multiply to one.
    pub fn sandwich(&self, left: &Mat2, right: &Mat2) -> Result<Self> {
        let m = left.mul(&self.as_mat2()).mul(right);
        SymplecticMatrix::new(m.a, m.b, m.c, m.d)
    }

    fn require_nonzero(value: f64, entry: &'static str) -> Result<()> {
        if value == 0.0 {
            Err(Error::ZeroEntry { entry })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for SymplecticMatrix {
    /// Row-major flat record `a,b,c,d`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for SymplecticMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("expected `a,b,c,d`, got `{s}`")));
        }
        let mut v = [0.0; 4];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = parse_number(p)?;
        }
        SymplecticMatrix::new(v[0], v[1], v[2], v[3])
    }
}

/// Parses a decimal or a simple fraction such as `-1/4`.
pub fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a number: `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad())?;
            let d: f64 = d.trim().parse().map_err(|_| bad())?;
            Ok(n / d)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

/// `A3 = [[a2·a1, b2·d1], [c2/d1, d2/a1]]`.
pub fn derive_a3(a1: &SymplecticMatrix, a2: &SymplecticMatrix) -> Result<SymplecticMatrix> {
    SymplecticMatrix::require_nonzero(a1.a, "a1")?;
    SymplecticMatrix::require_nonzero(a1.d, "d1")?;
    SymplecticMatrix::new(a2.a * a1.a, a2.b * a1.d, a2.c / a1.d, a2.d / a1.a)
}

/// `A4 = [[a2·b1, b2·c1], [c2/c1, d2/b1]]`.
pub fn derive_a4(a1: &SymplecticMatrix, a2: &SymplecticMatrix) -> Result<SymplecticMatrix> {
    SymplecticMatrix::require_nonzero(a1.b, "b1")?;
    SymplecticMatrix::require_nonzero(a1.c, "c1")?;
    SymplecticMatrix::new(a2.a * a1.b, a2.b * a1.c, a2.c / a1.c, a2.d / a1.b)
}

/// `A5 = [[a2·a1·b1, b2·c1·d1], [c2/(c1·d1), d2/(a1·b1)]]`.
pub fn derive_a5(a1: &SymplecticMatrix, a2: &SymplecticMatrix) -> Result<SymplecticMatrix> {
    SymplecticMatrix::require_nonzero(a1.a, "a1")?;
    SymplecticMatrix::require_nonzero(a1.b, "b1")?;
    SymplecticMatrix::require_nonzero(a1.c, "c1")?;
    SymplecticMatrix::require_nonzero(a1.d, "d1")?;
    SymplecticMatrix::new(
        a2.a * a1.a * a1.b,
        a2.b * a1.c * a1.d,
        a2.c / (a1.c * a1.d),
        a2.d / (a1.a * a1.b),
    )
}

/// Completes the first row `(a1, b1)` to the symplectic matrix with the
/// smallest `c1² + d1²`, i.e. the lowest resolution bound for a fixed `b2`.
pub fn optimal_a1(a1: f64, b1: f64) -> Result<SymplecticMatrix> {
    let norm = a1 * a1 + b1 * b1;
    if norm == 0.0 {
        return Err(Error::DegenerateInput("a1 = b1 = 0 has no symplectic completion"));
    }
    SymplecticMatrix::new(a1, b1, -b1 / norm, a1 / norm)
}

/// Second matrix for LFM analysis: with `A1 = optimal_a1(a1, b1)` it
/// satisfies the impulse condition `a2 + 2β(d1² − c1²)b2 = 0`.
pub fn lfm_a2(beta: f64, b2: f64, d2: f64, a1: f64, b1: f64) -> Result<SymplecticMatrix> {
    if b2 == 0.0 {
        return Err(Error::ZeroEntry { entry: "b2" });
    }
    let norm = a1 * a1 + b1 * b1;
    if norm == 0.0 {
        return Err(Error::DegenerateInput("a1 = b1 = 0 has no symplectic completion"));
    }
    let a2 = 2.0 * beta * (b1 * b1 - a1 * a1) * b2 / (norm * norm);
    let c2 = (a2 * d2 - 1.0) / b2;
    SymplecticMatrix::new(a2, b2, c2, d2)
}

/// `a2 + 2β(d1² − c1²)b2`; zero exactly when an LFM of rate `β` collapses
/// onto a line.
pub fn impulse_residual(beta: f64, a1: &SymplecticMatrix, a2: &SymplecticMatrix) -> f64 {
    a2.a + 2.0 * beta * (a1.d * a1.d - a1.c * a1.c) * a2.b
}

/// Signal-independent lower bound `b2²(c1² + d1²)²/4`.
pub fn resolution_bound(a1: &SymplecticMatrix, a2: &SymplecticMatrix) -> Result<f64> {
    if a2.b == 0.0 {
        return Err(Error::ZeroEntry { entry: "b2" });
    }
    let s = a1.c * a1.c + a1.d * a1.d;
    Ok(a2.b * a2.b * s * s / 4.0)
}

/// Whether the pair beats the symplectic WD (`0 < |b2| < 1`) and the WD in
/// the LCT domain (`0 < c1² + d1² < 1/2`) in resolution bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuperresolutionFlags {
    pub beats_swd: bool,
    pub beats_wdl: bool,
}

pub fn superresolution_flags(a1: &SymplecticMatrix, a2: &SymplecticMatrix) -> SuperresolutionFlags {
    let b2 = a2.b.abs();
    let s = a1.c * a1.c + a1.d * a1.d;
    SuperresolutionFlags {
        beats_swd: b2 > 0.0 && b2 < 1.0,
        beats_wdl: s > 0.0 && s < 0.5,
    }
}
